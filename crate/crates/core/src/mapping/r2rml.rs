use std::collections::HashMap;

use super::template::Template;
use super::turtle::{parse_turtle, Node, Statement};
use super::MappingError;
use crate::model::{vocab, Term};

pub const RR: &str = "http://www.w3.org/ns/r2rml#";

const KNOWN_TERMS: &[&str] = &[
    "TriplesMap",
    "logicalTable",
    "tableName",
    "subjectMap",
    "template",
    "class",
    "predicateObjectMap",
    "predicate",
    "objectMap",
    "column",
    "constant",
    "language",
    "datatype",
    "parentTriplesMap",
    "joinCondition",
    "child",
    "parent",
];

#[derive(Debug, Clone, PartialEq)]
pub struct MappingDocument {
    pub triples_maps: Vec<TriplesMap>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriplesMap {
    pub name: String,
    /// CSV file name, relative to the tables directory.
    pub table: String,
    pub subject: SubjectMap,
    pub predicate_object_maps: Vec<PredicateObjectMap>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubjectMap {
    pub value: TermSpec,
    pub classes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TermSpec {
    Template(Template),
    Column(String),
    Constant(Term),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredicateObjectMap {
    pub predicates: Vec<String>,
    pub object_maps: Vec<ObjectMap>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObjectMap {
    Value {
        spec: TermSpec,
        language: Option<String>,
        datatype: Option<String>,
    },
    /// Subject of another triples map, joined on `child = parent` columns.
    Parent {
        map: usize,
        joins: Vec<JoinCondition>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinCondition {
    pub child: String,
    pub parent: String,
}

impl TermSpec {
    pub fn columns(&self) -> Vec<&str> {
        match self {
            TermSpec::Template(t) => t.columns().collect(),
            TermSpec::Column(c) => vec![c.as_str()],
            TermSpec::Constant(_) => Vec::new(),
        }
    }
}

struct Graph {
    order: Vec<Node>,
    props: HashMap<Node, Vec<(String, Node)>>,
}

impl Graph {
    fn new(statements: Vec<Statement>) -> Self {
        let mut order = Vec::new();
        let mut props: HashMap<Node, Vec<(String, Node)>> = HashMap::new();
        for (s, p, o) in statements {
            let Node::Iri(p) = p else { continue };
            let entry = props.entry(s.clone()).or_insert_with(|| {
                order.push(s);
                Vec::new()
            });
            entry.push((p, o));
        }
        Graph { order, props }
    }

    fn all(&self, node: &Node, term: &str) -> Vec<&Node> {
        let iri = format!("{RR}{term}");
        self.props
            .get(node)
            .map(|ps| ps.iter().filter(|(p, _)| *p == iri).map(|(_, o)| o).collect())
            .unwrap_or_default()
    }

    fn one(&self, node: &Node, term: &str) -> Result<Option<&Node>, MappingError> {
        let all = self.all(node, term);
        if all.len() > 1 {
            return Err(MappingError::Invalid(format!("{} has more than one rr:{term}", describe(node))));
        }
        Ok(all.into_iter().next())
    }

    fn required(&self, node: &Node, term: &str) -> Result<&Node, MappingError> {
        self.one(node, term)?.ok_or_else(|| MappingError::Invalid(format!("{} lacks rr:{term}", describe(node))))
    }
}

fn describe(node: &Node) -> String {
    match node {
        Node::Iri(i) => format!("<{i}>"),
        Node::Blank(b) => format!("blank node {b}"),
        Node::Literal { lexical, .. } => format!("literal \"{lexical}\""),
    }
}

fn check_rr_term(iri: &str) -> Result<(), MappingError> {
    if let Some(local) = iri.strip_prefix(RR) {
        if !KNOWN_TERMS.contains(&local) {
            return Err(MappingError::UnknownTerm(format!("rr:{local}")));
        }
    }
    Ok(())
}

fn string_value(node: &Node, what: &str) -> Result<String, MappingError> {
    match node {
        Node::Literal { lexical, .. } => Ok(lexical.clone()),
        other => Err(MappingError::Invalid(format!("{what} must be a string, found {}", describe(other)))),
    }
}

fn iri_value(node: &Node, what: &str) -> Result<String, MappingError> {
    node.as_iri()
        .map(str::to_string)
        .ok_or_else(|| MappingError::Invalid(format!("{what} must be an IRI, found {}", describe(node))))
}

fn node_term(node: &Node) -> Result<Term, MappingError> {
    Ok(match node {
        Node::Iri(i) => Term::iri(i)?,
        Node::Literal { lexical, lang, datatype } => Term::literal(lexical, lang.as_deref(), datatype.as_deref())?,
        Node::Blank(_) => return Err(MappingError::Invalid("blank node constants are not supported".into())),
    })
}

fn term_spec(g: &Graph, node: &Node) -> Result<Option<TermSpec>, MappingError> {
    let specs = [
        g.one(node, "template")?
            .map(|n| string_value(n, "rr:template").and_then(|s| Template::parse(&s)).map(TermSpec::Template)),
        g.one(node, "column")?.map(|n| string_value(n, "rr:column").map(TermSpec::Column)),
        g.one(node, "constant")?.map(|n| node_term(n).map(TermSpec::Constant)),
    ];
    let mut found = specs.into_iter().flatten();
    let first = found.next().transpose()?;
    if found.next().is_some() {
        return Err(MappingError::Invalid(format!(
            "{} combines rr:template, rr:column or rr:constant",
            describe(node)
        )));
    }
    Ok(first)
}

/// Parses the Turtle text of an R2RML mapping restricted to CSV logical tables.
pub fn parse_mapping(text: &str) -> Result<MappingDocument, MappingError> {
    let statements = parse_turtle(text)?;
    for (_, p, o) in &statements {
        if let Node::Iri(p) = p {
            check_rr_term(p)?;
        }
        if let Node::Iri(o) = o {
            check_rr_term(o)?;
        }
    }
    let g = Graph::new(statements);
    let map_nodes: Vec<Node> = g.order.iter().filter(|n| !g.all(n, "logicalTable").is_empty()).cloned().collect();
    let names: Vec<String> = map_nodes
        .iter()
        .map(|n| match n {
            Node::Iri(i) => i.rsplit(['#', '/']).next().unwrap_or(i).to_string(),
            other => describe(other),
        })
        .collect();
    let index: HashMap<&Node, usize> = map_nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();

    let mut maps = Vec::with_capacity(map_nodes.len());
    for (node, name) in map_nodes.iter().zip(&names) {
        let table_node = g.required(node, "logicalTable")?;
        let table = string_value(g.required(table_node, "tableName")?, "rr:tableName")?;

        let sm = g.required(node, "subjectMap")?;
        let value = term_spec(&g, sm)?.ok_or_else(|| {
            MappingError::Invalid(format!("subject map of {name} needs rr:template, rr:column or rr:constant"))
        })?;
        if let TermSpec::Constant(t) = &value {
            if !t.is_iri() {
                return Err(MappingError::Invalid(format!("subject constant of {name} must be an IRI")));
            }
        }
        let classes = g.all(sm, "class").into_iter().map(|c| iri_value(c, "rr:class")).collect::<Result<_, _>>()?;

        let mut poms = Vec::new();
        for pom in g.all(node, "predicateObjectMap") {
            let predicates: Vec<String> =
                g.all(pom, "predicate").into_iter().map(|p| iri_value(p, "rr:predicate")).collect::<Result<_, _>>()?;
            if predicates.is_empty() {
                return Err(MappingError::Invalid(format!("predicate-object map of {name} lacks rr:predicate")));
            }
            let mut object_maps = Vec::new();
            for om in g.all(pom, "objectMap") {
                object_maps.push(object_map(&g, om, &index, name)?);
            }
            if object_maps.is_empty() {
                return Err(MappingError::Invalid(format!("predicate-object map of {name} lacks rr:objectMap")));
            }
            poms.push(PredicateObjectMap { predicates, object_maps });
        }
        maps.push(TriplesMap {
            name: name.clone(),
            table,
            subject: SubjectMap { value, classes },
            predicate_object_maps: poms,
        });
    }
    Ok(MappingDocument { triples_maps: maps })
}

fn object_map(g: &Graph, om: &Node, index: &HashMap<&Node, usize>, owner: &str) -> Result<ObjectMap, MappingError> {
    if let Some(parent) = g.one(om, "parentTriplesMap")? {
        let map = *index.get(parent).ok_or_else(|| MappingError::DanglingParent(describe(parent)))?;
        let mut joins = Vec::new();
        for jc in g.all(om, "joinCondition") {
            joins.push(JoinCondition {
                child: string_value(g.required(jc, "child")?, "rr:child")?,
                parent: string_value(g.required(jc, "parent")?, "rr:parent")?,
            });
        }
        return Ok(ObjectMap::Parent { map, joins });
    }
    let spec = term_spec(g, om)?.ok_or_else(|| {
        MappingError::Invalid(format!(
            "object map of {owner} has no rr:template, rr:column, rr:constant or rr:parentTriplesMap"
        ))
    })?;
    let language = g.one(om, "language")?.map(|n| string_value(n, "rr:language")).transpose()?;
    let datatype = g.one(om, "datatype")?.map(|n| iri_value(n, "rr:datatype")).transpose()?;
    if let Some(lang) = &language {
        if !crate::model::is_language_tag(lang) {
            return Err(MappingError::Invalid(format!("bad language tag '{lang}' in {owner}")));
        }
    }
    if language.is_some() && datatype.is_some() {
        return Err(MappingError::Invalid(format!("object map of {owner} sets both rr:language and rr:datatype")));
    }
    Ok(ObjectMap::Value { spec, language, datatype })
}

impl MappingDocument {
    pub fn map_index(&self, name: &str) -> Option<usize> {
        self.triples_maps.iter().position(|m| m.name == name)
    }

    /// Predicates the document can emit, including rdf:type when any map has classes.
    pub fn predicates(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for m in &self.triples_maps {
            if !m.subject.classes.is_empty() && !out.contains(&vocab::RDF_TYPE) {
                out.push(vocab::RDF_TYPE);
            }
            for pom in &m.predicate_object_maps {
                for p in &pom.predicates {
                    if !out.contains(&p.as_str()) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}
