//! R2RML-subset mapping from CSV tables to RDF.

mod r2rml;
mod table;
mod template;
mod turtle;

use std::collections::HashMap;
use std::path::Path;
use std::time::{Duration, Instant};

use thiserror::Error;

pub use r2rml::{
    parse_mapping, JoinCondition, MappingDocument, ObjectMap, PredicateObjectMap, SubjectMap, TermSpec, TriplesMap, RR,
};
pub use table::LogicalTable;
pub use template::{expand_template, Target, Template};

use crate::model::{vocab, Term, TermError, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("mapping syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown R2RML term {0}")]
    UnknownTerm(String),
    #[error("parent triples map {0} is not defined")]
    DanglingParent(String),
    #[error("invalid mapping: {0}")]
    Invalid(String),
    #[error("bad template {template:?}: {message}")]
    Template { template: String, message: String },
    #[error("placeholder {{{column}}} cannot be resolved in row {row}")]
    UnresolvedPlaceholder { column: String, row: usize },
    #[error("triples map {map}: column {column:?} not found in {table}")]
    MissingColumn { map: String, column: String, table: String },
    #[error("cannot read table {path}: {message}")]
    MissingTable { path: String, message: String },
    #[error("table error: {0}")]
    Table(String),
    #[error(transparent)]
    Term(#[from] TermError),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MappingStats {
    pub triples: usize,
    /// Triples emitted per map, in declared order.
    pub per_map: Vec<(String, usize)>,
    pub elapsed: Duration,
}

/// Drops repeated triples, keeping the first occurrence of each.
pub fn dedup_in_order(triples: Vec<Triple>) -> Vec<Triple> {
    let mut seen = std::collections::HashSet::new();
    triples.into_iter().filter(|t| seen.insert(t.clone())).collect()
}

/// Reads every table the document references from `tables_dir` and runs the mapping.
pub fn execute_mapping(doc: &MappingDocument, tables_dir: &Path) -> Result<(Vec<Triple>, MappingStats), MappingError> {
    let start = Instant::now();
    let mut tables = HashMap::new();
    for m in &doc.triples_maps {
        if !tables.contains_key(&m.table) {
            tables.insert(m.table.clone(), LogicalTable::read(&tables_dir.join(&m.table))?);
        }
    }
    let (triples, mut stats) = execute_with_tables(doc, &tables)?;
    stats.elapsed = start.elapsed();
    Ok((triples, stats))
}

/// Runs the mapping over in-memory tables keyed by table name.
pub fn execute_with_tables(
    doc: &MappingDocument,
    tables: &HashMap<String, LogicalTable>,
) -> Result<(Vec<Triple>, MappingStats), MappingError> {
    let start = Instant::now();
    let table_of = |m: &TriplesMap| -> Result<&LogicalTable, MappingError> {
        tables
            .get(&m.table)
            .ok_or_else(|| MappingError::MissingTable { path: m.table.clone(), message: "not provided".into() })
    };
    validate(doc, &table_of)?;

    let mut out = Vec::new();
    let mut stats = MappingStats::default();
    for m in &doc.triples_maps {
        let table = table_of(m)?;
        let before = out.len();
        let joins = JoinIndexes::build(doc, m, &table_of)?;
        let classes: Vec<Term> = m.subject.classes.iter().map(|c| Term::iri(c)).collect::<Result<_, _>>()?;
        let rdf_type = Term::iri(vocab::RDF_TYPE)?;
        let predicates: Vec<Vec<Term>> = m
            .predicate_object_maps
            .iter()
            .map(|pom| pom.predicates.iter().map(|p| Term::iri(p)).collect())
            .collect::<Result<_, _>>()?;

        for (row_idx, row) in table.rows.iter().enumerate() {
            let Some(subject) = subject_term(&m.subject.value, table, row, row_idx)? else {
                continue;
            };
            for class in &classes {
                out.push(Triple::new(subject.clone(), rdf_type.clone(), class.clone())?);
            }
            for (pom_idx, pom) in m.predicate_object_maps.iter().enumerate() {
                let mut objects = Vec::new();
                for (om_idx, om) in pom.object_maps.iter().enumerate() {
                    match om {
                        ObjectMap::Value { spec, language, datatype } => {
                            if let Some(o) =
                                value_term(spec, language.as_deref(), datatype.as_deref(), table, row, row_idx)?
                            {
                                objects.push(o);
                            }
                        }
                        ObjectMap::Parent { map, .. } => {
                            let parent = &doc.triples_maps[*map];
                            let parent_table = table_of(parent)?;
                            for prow in joins.matches(pom_idx, om_idx, row, row_idx) {
                                if let Some(o) =
                                    subject_term(&parent.subject.value, parent_table, &parent_table.rows[prow], prow)?
                                {
                                    objects.push(o);
                                }
                            }
                        }
                    }
                }
                for p in &predicates[pom_idx] {
                    for o in &objects {
                        out.push(Triple::new(subject.clone(), p.clone(), o.clone())?);
                    }
                }
            }
        }
        stats.per_map.push((m.name.clone(), out.len() - before));
    }
    stats.triples = out.len();
    stats.elapsed = start.elapsed();
    Ok((out, stats))
}

fn validate<'a>(
    doc: &'a MappingDocument,
    table_of: &dyn Fn(&'a TriplesMap) -> Result<&'a LogicalTable, MappingError>,
) -> Result<(), MappingError> {
    let require = |m: &TriplesMap, table: &LogicalTable, column: &str| {
        if table.column(column).is_none() {
            Err(MappingError::MissingColumn { map: m.name.clone(), column: column.to_string(), table: m.table.clone() })
        } else {
            Ok(())
        }
    };
    for m in &doc.triples_maps {
        let table = table_of(m)?;
        for c in m.subject.value.columns() {
            require(m, table, c)?;
        }
        for pom in &m.predicate_object_maps {
            for om in &pom.object_maps {
                match om {
                    ObjectMap::Value { spec, .. } => {
                        for c in spec.columns() {
                            require(m, table, c)?;
                        }
                    }
                    ObjectMap::Parent { map, joins } => {
                        let parent = &doc.triples_maps[*map];
                        let parent_table = table_of(parent)?;
                        if joins.is_empty() && parent.table != m.table {
                            return Err(MappingError::Invalid(format!(
                                "{} references {} without a join condition over a different table",
                                m.name, parent.name
                            )));
                        }
                        for j in joins {
                            require(m, table, &j.child)?;
                            require(parent, parent_table, &j.parent)?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn cell<'a>(table: &LogicalTable, row: &'a [String], column: &str) -> Option<&'a str> {
    table.column(column).map(|i| row[i].as_str())
}

fn subject_term(
    spec: &TermSpec,
    table: &LogicalTable,
    row: &[String],
    row_idx: usize,
) -> Result<Option<Term>, MappingError> {
    Ok(match spec {
        TermSpec::Template(t) => match t.expand(|c| cell(table, row, c), row_idx, Target::Iri)? {
            Some(iri) => Some(Term::iri(&iri)?),
            None => None,
        },
        TermSpec::Column(c) => match cell(table, row, c) {
            Some("") => None,
            Some(v) => Some(Term::iri(v)?),
            None => return Err(MappingError::UnresolvedPlaceholder { column: c.clone(), row: row_idx }),
        },
        TermSpec::Constant(t) => Some(t.clone()),
    })
}

fn value_term(
    spec: &TermSpec,
    language: Option<&str>,
    datatype: Option<&str>,
    table: &LogicalTable,
    row: &[String],
    row_idx: usize,
) -> Result<Option<Term>, MappingError> {
    let literal_hint = language.is_some() || datatype.is_some();
    Ok(match spec {
        TermSpec::Constant(t) => Some(t.clone()),
        TermSpec::Column(c) => match cell(table, row, c) {
            Some("") => None,
            Some(v) => Some(Term::literal(v, language, datatype)?),
            None => return Err(MappingError::UnresolvedPlaceholder { column: c.clone(), row: row_idx }),
        },
        TermSpec::Template(t) if literal_hint => t
            .expand(|c| cell(table, row, c), row_idx, Target::Literal)?
            .map(|v| Term::literal(&v, language, datatype))
            .transpose()?,
        TermSpec::Template(t) => {
            t.expand(|c| cell(table, row, c), row_idx, Target::Iri)?.map(|v| Term::iri(&v)).transpose()?
        }
    })
}

/// Hash indexes over parent tables, one per join object map of a triples map.
struct JoinIndexes {
    indexes: HashMap<(usize, usize), JoinIndex>,
}

struct JoinIndex {
    children: Vec<usize>,
    by_key: HashMap<Vec<String>, Vec<usize>>,
}

impl JoinIndexes {
    fn build<'a>(
        doc: &'a MappingDocument,
        m: &'a TriplesMap,
        table_of: &dyn Fn(&'a TriplesMap) -> Result<&'a LogicalTable, MappingError>,
    ) -> Result<Self, MappingError> {
        let mut indexes = HashMap::new();
        let child_table = table_of(m)?;
        for (pi, pom) in m.predicate_object_maps.iter().enumerate() {
            for (oi, om) in pom.object_maps.iter().enumerate() {
                let ObjectMap::Parent { map, joins } = om else {
                    continue;
                };
                let parent_table = table_of(&doc.triples_maps[*map])?;
                let parent_cols: Vec<usize> =
                    joins.iter().map(|j| parent_table.column(&j.parent).expect("validated")).collect();
                let children = joins.iter().map(|j| child_table.column(&j.child).expect("validated")).collect();
                let mut by_key: HashMap<Vec<String>, Vec<usize>> = HashMap::new();
                for (ri, row) in parent_table.rows.iter().enumerate() {
                    let key: Vec<String> = parent_cols.iter().map(|&c| row[c].clone()).collect();
                    if key.iter().any(String::is_empty) {
                        continue;
                    }
                    by_key.entry(key).or_default().push(ri);
                }
                indexes.insert((pi, oi), JoinIndex { children, by_key });
            }
        }
        Ok(JoinIndexes { indexes })
    }

    fn matches(&self, pom: usize, om: usize, row: &[String], row_idx: usize) -> Vec<usize> {
        let index = &self.indexes[&(pom, om)];
        if index.children.is_empty() {
            return vec![row_idx];
        }
        let key: Vec<String> = index.children.iter().map(|&c| row[c].clone()).collect();
        if key.iter().any(String::is_empty) {
            return Vec::new();
        }
        index.by_key.get(&key).cloned().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"
        @prefix rr: <http://www.w3.org/ns/r2rml#> .
        @prefix dct: <http://purl.org/dc/terms/> .
        @prefix dcat: <http://www.w3.org/ns/dcat#> .

        <#DatasetMap>
            rr:logicalTable [ rr:tableName "datasets.csv" ] ;
            rr:subjectMap [ rr:template "http://x.org/dataset/{doc_id}" ; rr:class dcat:Dataset ] ;
            rr:predicateObjectMap [ rr:predicate dct:title ; rr:objectMap [ rr:column "title" ; rr:language "en" ] ] ;
            rr:predicateObjectMap [
                rr:predicate dct:isPartOf ;
                rr:objectMap [
                    rr:parentTriplesMap <#CatalogMap> ;
                    rr:joinCondition [ rr:child "doc_id" ; rr:parent "doc_id" ]
                ]
            ] .

        <#CatalogMap>
            rr:logicalTable [ rr:tableName "categories.csv" ] ;
            rr:subjectMap [ rr:template "http://x.org/catalog/{cat}" ] .

        <#KeywordMap>
            rr:logicalTable [ rr:tableName "keywords.csv" ] ;
            rr:subjectMap [ rr:template "http://x.org/dataset/{doc_id}" ] ;
            rr:predicateObjectMap [ rr:predicate dcat:keyword ; rr:objectMap [ rr:column "keyword" ; rr:language "en" ] ] .
    "#;

    fn tables(datasets: &str) -> HashMap<String, LogicalTable> {
        [
            ("datasets.csv", datasets),
            ("categories.csv", "doc_id,cat\nD1,health\nD1,people\nD2,economy\n"),
            ("keywords.csv", "doc_id,keyword\nD1,death\n"),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), LogicalTable::from_csv_str(v).unwrap()))
        .collect()
    }

    fn lines(triples: &[Triple]) -> Vec<String> {
        triples.iter().map(Triple::to_string).collect()
    }

    #[test]
    fn rows_maps_and_joins_in_order() {
        let doc = parse_mapping(DOC).unwrap();
        let (triples, stats) = execute_with_tables(&doc, &tables("doc_id,title\nD1,Deaths\nD2,\n")).unwrap();
        assert_eq!(
            lines(&triples),
            vec![
                "<http://x.org/dataset/D1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/ns/dcat#Dataset> .",
                "<http://x.org/dataset/D1> <http://purl.org/dc/terms/title> \"Deaths\"@en .",
                "<http://x.org/dataset/D1> <http://purl.org/dc/terms/isPartOf> <http://x.org/catalog/health> .",
                "<http://x.org/dataset/D1> <http://purl.org/dc/terms/isPartOf> <http://x.org/catalog/people> .",
                "<http://x.org/dataset/D2> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/ns/dcat#Dataset> .",
                "<http://x.org/dataset/D2> <http://purl.org/dc/terms/isPartOf> <http://x.org/catalog/economy> .",
                "<http://x.org/dataset/D1> <http://www.w3.org/ns/dcat#keyword> \"death\"@en .",
            ]
        );
        assert_eq!(stats.triples, 7);
        assert_eq!(
            stats.per_map,
            vec![("DatasetMap".to_string(), 6), ("CatalogMap".into(), 0), ("KeywordMap".into(), 1)]
        );
    }

    #[test]
    fn header_only_table_gives_nothing() {
        let doc = parse_mapping(DOC).unwrap();
        let mut t = tables("doc_id,title\n");
        t.insert("keywords.csv".into(), LogicalTable::from_csv_str("doc_id,keyword\n").unwrap());
        assert!(execute_with_tables(&doc, &t).unwrap().0.is_empty());
    }

    #[test]
    fn missing_column_detected_before_execution() {
        let doc = parse_mapping(DOC).unwrap();
        let err = execute_with_tables(&doc, &tables("doc_id,name\nD1,x\n")).unwrap_err();
        assert_eq!(
            err,
            MappingError::MissingColumn {
                map: "DatasetMap".into(),
                column: "title".into(),
                table: "datasets.csv".into()
            }
        );
    }

    #[test]
    fn missing_table_file() {
        let doc = parse_mapping(DOC).unwrap();
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(execute_mapping(&doc, dir.path()), Err(MappingError::MissingTable { .. })));
    }

    #[test]
    fn appending_rows_keeps_earlier_output() {
        let doc = parse_mapping(DOC).unwrap();
        let (a, _) = execute_with_tables(&doc, &tables("doc_id,title\nD1,Deaths\n")).unwrap();
        let (b, _) = execute_with_tables(&doc, &tables("doc_id,title\nD1,Deaths\nD3,Births\n")).unwrap();
        assert!(a.iter().all(|t| b.contains(t)));
    }
}
