//! Dataset views read back from the graph: summaries, details, search and
//! related-dataset navigation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use metakg_core::model::vocab::{
    DCAT_DATASET, DCAT_KEYWORD, DCAT_LANDING_PAGE, DCT_CREATOR, DCT_DESCRIPTION, DCT_IDENTIFIER, DCT_ISSUED,
    DCT_IS_PART_OF, DCT_PUBLISHER, DCT_TITLE, RDFS_LABEL, RDF_TYPE,
};
use metakg_core::model::{LocalNamespace, Term};
use metakg_core::store::TripleStore;
use serde::Serialize;

/// Variables and keywords one dataset shares with another.
type SharedNames = (Vec<String>, Vec<String>);

pub const MAX_PAGE_SIZE: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DatasetSummary {
    pub id: String,
    pub title_en: Option<String>,
    pub title_nl: Option<String>,
    pub categories: Vec<String>,
    pub keyword_count: usize,
    pub variable_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VariableView {
    pub name: String,
    pub label: Option<String>,
}

/// Another dataset sharing variables or keywords with the one in view.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Related {
    pub id: String,
    pub title_en: Option<String>,
    pub shared_variables: Vec<String>,
    pub shared_keywords: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DatasetDetail {
    #[serde(flatten)]
    pub summary: DatasetSummary,
    pub description_en: Option<String>,
    pub issued: Option<String>,
    pub publisher: Option<String>,
    pub creator: Option<String>,
    pub landing_page: Option<String>,
    pub keywords: Vec<String>,
    pub variables: Vec<VariableView>,
    pub related: Vec<Related>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchPage {
    pub total: usize,
    pub page: usize,
    pub page_size: usize,
    pub items: Vec<DatasetSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct PagingError(pub String);

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    datasets: Vec<DatasetDetail>,
    index: HashMap<String, usize>,
}

fn iri(s: &str) -> Term {
    Term::Iri(s.to_string())
}

struct Reader<'a> {
    store: &'a TripleStore,
}

impl Reader<'_> {
    fn objects(&self, s: &Term, p: &str) -> Vec<Term> {
        self.store.match_pattern(Some(s), Some(&iri(p)), None).into_iter().map(|t| t.object().clone()).collect()
    }

    fn subjects(&self, p: &str, o: &Term) -> Vec<Term> {
        self.store.match_pattern(None, Some(&iri(p)), Some(o)).into_iter().map(|t| t.subject().clone()).collect()
    }

    /// Smallest literal value, optionally restricted to a language.
    fn literal(&self, s: &Term, p: &str, lang: Option<&str>) -> Option<String> {
        self.objects(s, p)
            .iter()
            .filter_map(Term::as_literal)
            .filter(|l| lang.is_none() || l.language() == lang)
            .map(|l| l.lexical().to_string())
            .min()
    }

    /// Display name of an agent: its `foaf:name`, else the last IRI segment.
    fn agent(&self, s: &Term, p: &str) -> Option<String> {
        let agent = self.objects(s, p).into_iter().filter(|t| !t.is_literal()).min()?;
        self.literal(&agent, "http://xmlns.com/foaf/0.1/name", None).or_else(|| {
            let v = agent.value();
            Some(v.rsplit('/').next().unwrap_or(v).replace("%20", " "))
        })
    }
}

impl Catalog {
    pub fn from_store(store: &TripleStore, ns: &LocalNamespace) -> Catalog {
        let r = Reader { store };
        let variable_of = ns.variable_of();
        let mut datasets: Vec<DatasetDetail> = Vec::new();
        let mut dataset_terms = r.subjects(RDF_TYPE, &iri(DCAT_DATASET));
        dataset_terms.sort();
        dataset_terms.dedup();
        for d in &dataset_terms {
            let Some(id) = d.as_iri().and_then(|i| ns.dataset_id(i)) else {
                continue;
            };
            let categories: BTreeSet<String> = r
                .objects(d, DCT_IS_PART_OF)
                .iter()
                .filter_map(|c| r.literal(c, DCT_TITLE, Some("en")).or_else(|| r.literal(c, DCT_TITLE, None)))
                .collect();
            let keywords: BTreeSet<String> = r
                .objects(d, DCAT_KEYWORD)
                .iter()
                .filter_map(Term::as_literal)
                .map(|l| l.lexical().to_string())
                .collect();
            let mut variables: Vec<VariableView> = r
                .subjects(&variable_of, d)
                .iter()
                .map(|v| VariableView {
                    name: r.literal(v, DCT_IDENTIFIER, None).unwrap_or_else(|| {
                        let s = v.value();
                        s.rsplit('/').next().unwrap_or(s).to_string()
                    }),
                    label: r.literal(v, RDFS_LABEL, Some("en")).or_else(|| r.literal(v, RDFS_LABEL, None)),
                })
                .collect();
            variables.sort_by(|a, b| a.name.cmp(&b.name));
            variables.dedup_by(|a, b| a.name == b.name);
            datasets.push(DatasetDetail {
                summary: DatasetSummary {
                    id: id.to_string(),
                    title_en: r.literal(d, DCT_TITLE, Some("en")),
                    title_nl: r.literal(d, DCT_TITLE, Some("nl")),
                    categories: categories.into_iter().collect(),
                    keyword_count: keywords.len(),
                    variable_count: variables.len(),
                },
                description_en: r.literal(d, DCT_DESCRIPTION, Some("en")),
                issued: r.literal(d, DCT_ISSUED, None),
                publisher: r.agent(d, DCT_PUBLISHER),
                creator: r.agent(d, DCT_CREATOR),
                landing_page: r.objects(d, DCAT_LANDING_PAGE).into_iter().map(|t| t.value().to_string()).min(),
                keywords: keywords.into_iter().collect(),
                variables,
                related: Vec::new(),
            });
        }
        datasets.sort_by(|a, b| a.summary.id.cmp(&b.summary.id));
        link_related(&mut datasets);
        let index = datasets.iter().enumerate().map(|(i, d)| (d.summary.id.clone(), i)).collect();
        Catalog { datasets, index }
    }

    pub fn len(&self) -> usize {
        self.datasets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.datasets.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&DatasetDetail> {
        self.index.get(id).map(|&i| &self.datasets[i])
    }

    /// Case-insensitive substring search over titles (rank 3), keywords (2)
    /// and variable names (1); ties ordered by id. An empty query matches all.
    pub fn search(
        &self,
        q: &str,
        category: Option<&str>,
        page: usize,
        page_size: usize,
    ) -> Result<SearchPage, PagingError> {
        if page == 0 {
            return Err(PagingError("page starts at 1".into()));
        }
        if page_size == 0 || page_size > MAX_PAGE_SIZE {
            return Err(PagingError(format!("page_size must be between 1 and {MAX_PAGE_SIZE}")));
        }
        let q = q.trim().to_lowercase();
        let category = category.map(|c| c.trim().to_lowercase()).filter(|c| !c.is_empty());
        let contains = |s: &str| s.to_lowercase().contains(&q);
        let mut hits: Vec<(u8, &DatasetDetail)> = self
            .datasets
            .iter()
            .filter(|d| {
                category.as_ref().is_none_or(|c| {
                    d.summary
                        .categories
                        .iter()
                        .any(|name| name.to_lowercase() == *c || metakg_core::model::iri::slug(name) == *c)
                })
            })
            .filter_map(|d| {
                if q.is_empty() {
                    return Some((0, d));
                }
                let s = &d.summary;
                let score = if s.title_en.iter().chain(&s.title_nl).any(|t| contains(t)) {
                    3
                } else if d.keywords.iter().any(|k| contains(k)) {
                    2
                } else if d.variables.iter().any(|v| contains(&v.name)) {
                    1
                } else {
                    return None;
                };
                Some((score, d))
            })
            .collect();
        hits.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.summary.id.cmp(&b.1.summary.id)));
        let total = hits.len();
        let items = hits
            .into_iter()
            .skip((page - 1).saturating_mul(page_size))
            .take(page_size)
            .map(|(_, d)| d.summary.clone())
            .collect();
        Ok(SearchPage { total, page, page_size, items })
    }
}

/// Fills `related` from shared variable names and keywords. Ordered by the
/// number of shared items (descending), then id.
fn link_related(datasets: &mut [DatasetDetail]) {
    let mut by_variable: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    let mut by_keyword: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, d) in datasets.iter().enumerate() {
        for v in &d.variables {
            by_variable.entry(v.name.as_str()).or_default().push(i);
        }
        for k in &d.keywords {
            by_keyword.entry(k.as_str()).or_default().push(i);
        }
    }
    let mut shared: Vec<BTreeMap<usize, SharedNames>> = vec![BTreeMap::new(); datasets.len()];
    for (name, members) in &by_variable {
        for &a in members {
            for &b in members.iter().filter(|&&b| b != a) {
                shared[a].entry(b).or_default().0.push(name.to_string());
            }
        }
    }
    for (kw, members) in &by_keyword {
        for &a in members {
            for &b in members.iter().filter(|&&b| b != a) {
                shared[a].entry(b).or_default().1.push(kw.to_string());
            }
        }
    }
    let titles: Vec<(String, Option<String>)> =
        datasets.iter().map(|d| (d.summary.id.clone(), d.summary.title_en.clone())).collect();
    for (a, links) in shared.into_iter().enumerate() {
        let mut related: Vec<Related> = links
            .into_iter()
            .map(|(b, (vars, kws))| Related {
                id: titles[b].0.clone(),
                title_en: titles[b].1.clone(),
                shared_variables: vars,
                shared_keywords: kws,
            })
            .collect();
        related.sort_by(|x, y| {
            let n = |r: &Related| r.shared_variables.len() + r.shared_keywords.len();
            n(y).cmp(&n(x)).then_with(|| x.id.cmp(&y.id))
        });
        datasets[a].related = related;
    }
}
