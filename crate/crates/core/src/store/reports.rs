use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{IdPattern, TripleStore};
use crate::model::vocab::{DCAT_CATALOG, DCT_IDENTIFIER, DCT_IS_PART_OF, RDF_TYPE};
use crate::model::{LocalNamespace, Term};

/// Two datasets and the variable names they have in common.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SharedVariables {
    pub dataset_a: String,
    pub dataset_b: String,
    pub variables: Vec<String>,
}

/// Pairs of distinct datasets linked (via `variableOf`) to variables with the
/// same name. The name is the variable's `dct:identifier`, or the last IRI
/// segment when absent. Each unordered pair appears once with `dataset_a < dataset_b`.
pub fn shared_variable_report(store: &TripleStore, ns: &LocalNamespace) -> Vec<SharedVariables> {
    let Some(variable_of) = store.id(&Term::Iri(ns.variable_of())) else {
        return Vec::new();
    };
    let identifier = store.id(&Term::Iri(DCT_IDENTIFIER.to_string()));

    let mut datasets_by_name: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for [var, _, dataset] in store.scan(IdPattern { p: Some(variable_of), ..Default::default() }) {
        let name = identifier
            .and_then(|id| {
                store
                    .scan(IdPattern { s: Some(var), p: Some(id), o: None })
                    .into_iter()
                    .map(|t| store.term(t[2]))
                    .find(|t| t.is_literal())
                    .map(|t| t.value().to_string())
            })
            .unwrap_or_else(|| {
                let iri = store.term(var).value();
                iri.rsplit(['/', '#']).next().unwrap_or(iri).to_string()
            });
        datasets_by_name.entry(name).or_default().insert(store.term(dataset).value().to_string());
    }

    let mut pairs: BTreeMap<(String, String), BTreeSet<String>> = BTreeMap::new();
    for (name, datasets) in &datasets_by_name {
        let datasets: Vec<&String> = datasets.iter().collect();
        for (i, a) in datasets.iter().enumerate() {
            for b in &datasets[i + 1..] {
                pairs.entry(((*a).clone(), (*b).clone())).or_default().insert(name.clone());
            }
        }
    }
    pairs
        .into_iter()
        .map(|((dataset_a, dataset_b), vars)| SharedVariables {
            dataset_a,
            dataset_b,
            variables: vars.into_iter().collect(),
        })
        .collect()
}

/// Datasets that are `dct:isPartOf` two or more `dcat:Catalog` nodes.
pub fn multi_category_report(store: &TripleStore) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    let (Some(is_part_of), Some(rdf_type), Some(catalog)) = (
        store.id(&Term::Iri(DCT_IS_PART_OF.to_string())),
        store.id(&Term::Iri(RDF_TYPE.to_string())),
        store.id(&Term::Iri(DCAT_CATALOG.to_string())),
    ) else {
        return out;
    };
    let mut catalogs_of: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for [dataset, _, target] in store.scan(IdPattern { p: Some(is_part_of), ..Default::default() }) {
        if store.contains_ids([target, rdf_type, catalog]) {
            catalogs_of.entry(dataset).or_default().insert(target);
        }
    }
    for (dataset, catalogs) in catalogs_of {
        if catalogs.len() >= 2 {
            out.insert(store.term(dataset).value().to_string(), catalogs.len());
        }
    }
    out
}
