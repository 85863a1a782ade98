//! In-memory UML class diagram.
//!
//! A [`ClassDiagram`] is only obtainable through [`build_diagram`] (or the
//! parser, which calls it), so every instance satisfies the structural
//! rules the metric engine relies on: identifiers are well formed,
//! relationships are a set, and the generalization and aggregation graphs
//! are acyclic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::is_identifier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RelKind {
    Association,
    Aggregation,
    Dependency,
    Generalization,
}

impl RelKind {
    pub const ALL: [RelKind; 4] = [
        RelKind::Association,
        RelKind::Aggregation,
        RelKind::Dependency,
        RelKind::Generalization,
    ];

    /// CDL operator token.
    pub fn operator(self) -> &'static str {
        match self {
            RelKind::Association => "--",
            RelKind::Aggregation => "o--",
            RelKind::Dependency => "..>",
            RelKind::Generalization => "--|>",
        }
    }

    /// Whether an edge of this kind may connect a class to itself.
    pub fn allows_self_edge(self) -> bool {
        self == RelKind::Association
    }
}

impl fmt::Display for RelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelKind::Association => "association",
            RelKind::Aggregation => "aggregation",
            RelKind::Dependency => "dependency",
            RelKind::Generalization => "generalization",
        };
        f.write_str(s)
    }
}

/// A typed edge between two classes.
///
/// Generalization points child to parent, aggregation whole to part and
/// dependency dependent to dependee. Associations are undirected and are
/// stored with `source <= target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Relationship {
    pub kind: RelKind,
    pub source: String,
    pub target: String,
}

impl Relationship {
    pub fn new(kind: RelKind, source: impl Into<String>, target: impl Into<String>) -> Self {
        Relationship {
            kind,
            source: source.into(),
            target: target.into(),
        }
    }

    fn canonical(mut self) -> Self {
        if self.kind == RelKind::Association && self.target < self.source {
            std::mem::swap(&mut self.source, &mut self.target);
        }
        self
    }
}

impl fmt::Display for Relationship {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.source,
            self.kind.operator(),
            self.target
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ClassDef {
    pub name: String,
    pub attributes: Vec<String>,
    pub methods: Vec<String>,
}

impl ClassDef {
    pub fn new(name: impl Into<String>) -> Self {
        ClassDef {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn with_attributes<I, S>(mut self, attrs: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.attributes.extend(attrs.into_iter().map(Into::into));
        self
    }

    pub fn with_methods<I, S>(mut self, methods: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.methods.extend(methods.into_iter().map(Into::into));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassDiagram {
    classes: BTreeMap<String, ClassDef>,
    relationships: BTreeSet<Relationship>,
}

impl ClassDiagram {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Classes in lexicographic name order.
    pub fn classes(&self) -> impl Iterator<Item = &ClassDef> {
        self.classes.values()
    }

    pub fn class(&self, name: &str) -> Option<&ClassDef> {
        self.classes.get(name)
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Relationships sorted by (kind, source, target).
    pub fn relationships(&self) -> impl Iterator<Item = &Relationship> {
        self.relationships.iter()
    }

    pub fn relationships_of(&self, kind: RelKind) -> impl Iterator<Item = &Relationship> {
        self.relationships.iter().filter(move |r| r.kind == kind)
    }

    pub fn relationship_count(&self) -> usize {
        self.relationships.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.relationships.is_empty()
    }

    /// Decomposes the diagram into the inputs [`build_diagram`] accepts.
    pub fn to_parts(&self) -> (Vec<ClassDef>, Vec<Relationship>) {
        (
            self.classes.values().cloned().collect(),
            self.relationships.iter().cloned().collect(),
        )
    }
}

/// Position of an offending input item, by index into the slices handed to
/// [`build_diagram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    Class(usize),
    Relationship(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("`{name}` is not a valid identifier")]
    BadIdent { name: String, site: Site },

    #[error("{rel}: a {} cannot connect a class to itself", rel.kind)]
    SelfEdge { index: usize, rel: Relationship },

    #[error("{rel}: generalization cycle (a class would be its own ancestor)")]
    GenCycle { index: usize, rel: Relationship },

    #[error("{rel}: aggregation cycle (a class would be part of itself)")]
    AggCycle { index: usize, rel: Relationship },
}

impl DiagramError {
    pub fn code(&self) -> &'static str {
        match self {
            DiagramError::BadIdent { .. } => "E_BAD_IDENT",
            DiagramError::SelfEdge { .. } => "E_SELF_EDGE",
            DiagramError::GenCycle { .. } => "E_GEN_CYCLE",
            DiagramError::AggCycle { .. } => "E_AGG_CYCLE",
        }
    }

    pub fn site(&self) -> Site {
        match self {
            DiagramError::BadIdent { site, .. } => *site,
            DiagramError::SelfEdge { index, .. }
            | DiagramError::GenCycle { index, .. }
            | DiagramError::AggCycle { index, .. } => Site::Relationship(*index),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagramWarning {
    /// A relationship endpoint named a class that was never declared.
    ImplicitClass { name: String, relationship: usize },
    DuplicateRelationship {
        relationship: usize,
        rel: Relationship,
    },
    /// Two declarations of the same class; members were concatenated.
    DuplicateClass { name: String, class: usize },
}

impl DiagramWarning {
    pub fn code(&self) -> &'static str {
        match self {
            DiagramWarning::ImplicitClass { .. } => "W_IMPLICIT_CLASS",
            DiagramWarning::DuplicateRelationship { .. } => "W_DUP_REL",
            DiagramWarning::DuplicateClass { .. } => "W_DUP_CLASS",
        }
    }

    pub fn site(&self) -> Site {
        match self {
            DiagramWarning::ImplicitClass { relationship, .. }
            | DiagramWarning::DuplicateRelationship { relationship, .. } => {
                Site::Relationship(*relationship)
            }
            DiagramWarning::DuplicateClass { class, .. } => Site::Class(*class),
        }
    }
}

impl fmt::Display for DiagramWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramWarning::ImplicitClass { name, .. } => {
                write!(f, "class `{name}` implicitly declared by a relationship")
            }
            DiagramWarning::DuplicateRelationship { rel, .. } => {
                write!(f, "duplicate relationship `{rel}` ignored")
            }
            DiagramWarning::DuplicateClass { name, .. } => {
                write!(f, "class `{name}` declared more than once; members merged")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltDiagram {
    pub diagram: ClassDiagram,
    pub warnings: Vec<DiagramWarning>,
}

/// Result of [`build_diagram_collect`]: the diagram exists only when
/// `errors` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildOutcome {
    pub diagram: Option<ClassDiagram>,
    pub errors: Vec<DiagramError>,
    pub warnings: Vec<DiagramWarning>,
}

/// Builds a diagram, stopping at the first error.
pub fn build_diagram(
    classes: Vec<ClassDef>,
    relationships: Vec<Relationship>,
) -> Result<BuiltDiagram, DiagramError> {
    let mut outcome = build_diagram_collect(classes, relationships);
    match outcome.diagram {
        Some(diagram) => Ok(BuiltDiagram {
            diagram,
            warnings: outcome.warnings,
        }),
        None => Err(outcome.errors.swap_remove(0)),
    }
}

/// Builds a diagram, reporting every error and warning found. Offending
/// relationships are skipped so that later ones are still checked against
/// a consistent graph.
pub fn build_diagram_collect(
    classes: Vec<ClassDef>,
    relationships: Vec<Relationship>,
) -> BuildOutcome {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let mut by_name: BTreeMap<String, ClassDef> = BTreeMap::new();

    for (i, class) in classes.into_iter().enumerate() {
        let bad = std::iter::once(&class.name)
            .chain(&class.attributes)
            .chain(&class.methods)
            .find(|n| !is_identifier(n));
        if let Some(name) = bad {
            errors.push(DiagramError::BadIdent {
                name: name.clone(),
                site: Site::Class(i),
            });
            continue;
        }
        match by_name.get_mut(&class.name) {
            Some(existing) => {
                warnings.push(DiagramWarning::DuplicateClass {
                    name: class.name.clone(),
                    class: i,
                });
                existing.attributes.extend(class.attributes);
                existing.methods.extend(class.methods);
            }
            None => {
                by_name.insert(class.name.clone(), class);
            }
        }
    }

    let mut edges: BTreeSet<Relationship> = BTreeSet::new();
    let mut gen = Adjacency::default();
    let mut agg = Adjacency::default();

    for (i, rel) in relationships.into_iter().enumerate() {
        if let Some(name) = [&rel.source, &rel.target]
            .into_iter()
            .find(|n| !is_identifier(n))
        {
            errors.push(DiagramError::BadIdent {
                name: name.clone(),
                site: Site::Relationship(i),
            });
            continue;
        }
        let rel = rel.canonical();
        if rel.source == rel.target && !rel.kind.allows_self_edge() {
            errors.push(DiagramError::SelfEdge { index: i, rel });
            continue;
        }
        if edges.contains(&rel) {
            warnings.push(DiagramWarning::DuplicateRelationship {
                relationship: i,
                rel,
            });
            continue;
        }
        let graph = match rel.kind {
            RelKind::Generalization => Some(&mut gen),
            RelKind::Aggregation => Some(&mut agg),
            _ => None,
        };
        if let Some(graph) = graph {
            if graph.reaches(&rel.target, &rel.source) {
                errors.push(if rel.kind == RelKind::Generalization {
                    DiagramError::GenCycle { index: i, rel }
                } else {
                    DiagramError::AggCycle { index: i, rel }
                });
                continue;
            }
            graph.add(&rel.source, &rel.target);
        }
        for endpoint in [&rel.source, &rel.target] {
            if !by_name.contains_key(endpoint.as_str()) {
                warnings.push(DiagramWarning::ImplicitClass {
                    name: endpoint.clone(),
                    relationship: i,
                });
                by_name.insert(endpoint.clone(), ClassDef::new(endpoint.clone()));
            }
        }
        edges.insert(rel);
    }

    let diagram = errors.is_empty().then_some(ClassDiagram {
        classes: by_name,
        relationships: edges,
    });
    BuildOutcome {
        diagram,
        errors,
        warnings,
    }
}

#[derive(Default)]
struct Adjacency {
    out: BTreeMap<String, Vec<String>>,
}

impl Adjacency {
    fn add(&mut self, from: &str, to: &str) {
        self.out
            .entry(from.to_string())
            .or_default()
            .push(to.to_string());
    }

    fn reaches(&self, from: &str, to: &str) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack = vec![from];
        while let Some(node) = stack.pop() {
            if node == to {
                return true;
            }
            if !seen.insert(node) {
                continue;
            }
            if let Some(next) = self.out.get(node) {
                stack.extend(next.iter().map(String::as_str));
            }
        }
        false
    }
}

/// Renders the diagram as CDL: classes in name order with members in
/// declaration order (attributes before methods), then relationships in
/// (kind, source, target) order. The output parses back to an equal
/// diagram.
pub fn canonical_render(d: &ClassDiagram) -> String {
    let mut out = String::new();
    for class in d.classes() {
        if class.attributes.is_empty() && class.methods.is_empty() {
            out.push_str(&format!("class {}\n", class.name));
            continue;
        }
        out.push_str(&format!("class {} {{\n", class.name));
        for a in &class.attributes {
            out.push_str(&format!("  {a}\n"));
        }
        for m in &class.methods {
            out.push_str(&format!("  {m}()\n"));
        }
        out.push_str("}\n");
    }
    for rel in d.relationships() {
        out.push_str(&format!("{rel}\n"));
    }
    out
}
