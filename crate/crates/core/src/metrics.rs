//! Size and structural-complexity metrics of a class diagram.

use std::collections::{BTreeMap, HashMap};

use serde::{Serialize, Serializer};

use crate::diagram::{ClassDiagram, RelKind};

/// The eleven class-diagram metrics, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MetricVector {
    /// Number of classes.
    pub nc: u64,
    /// Number of attributes, summed over classes (declared members only).
    pub na: u64,
    /// Number of methods, summed over classes (declared members only).
    pub nm: u64,
    pub nassoc: u64,
    pub nagg: u64,
    pub ndep: u64,
    pub ngen: u64,
    /// Aggregation hierarchies: weakly connected components of the
    /// aggregation graph that contain at least one edge.
    pub naggh: u64,
    /// Generalization hierarchies, counted like `naggh`.
    pub ngenh: u64,
    /// Longest child-to-ancestor generalization path, in edges.
    pub max_dit: u64,
    /// Longest whole-to-part aggregation path, in edges.
    pub max_hagg: u64,
}

impl MetricVector {
    /// Canonical column names, which double as model predictor names.
    pub const NAMES: [&'static str; 11] = [
        "NC", "NA", "NM", "NAssoc", "NAgg", "NDep", "NGen", "NAggH", "NGenH", "MaxDIT", "MaxHAgg",
    ];

    pub fn values(&self) -> [u64; 11] {
        [
            self.nc,
            self.na,
            self.nm,
            self.nassoc,
            self.nagg,
            self.ndep,
            self.ngen,
            self.naggh,
            self.ngenh,
            self.max_dit,
            self.max_hagg,
        ]
    }

    pub fn get(&self, name: &str) -> Option<u64> {
        Self::NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.values()[i])
    }

    /// `(name, value)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, u64)> {
        Self::NAMES.into_iter().zip(self.values())
    }

    /// Metric values as model inputs.
    pub fn to_inputs(&self) -> BTreeMap<String, f64> {
        self.iter()
            .map(|(n, v)| (n.to_string(), v as f64))
            .collect()
    }
}

impl Serialize for MetricVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(11))?;
        for (name, value) in self.iter() {
            map.serialize_entry(name, &value)?;
        }
        map.end()
    }
}

pub fn compute_metrics(d: &ClassDiagram) -> MetricVector {
    let count = |kind| d.relationships_of(kind).count() as u64;
    let (gen_hierarchies, max_dit) = hierarchy_stats(d, RelKind::Generalization);
    let (agg_hierarchies, max_hagg) = hierarchy_stats(d, RelKind::Aggregation);
    MetricVector {
        nc: d.class_count() as u64,
        na: d.classes().map(|c| c.attributes.len() as u64).sum(),
        nm: d.classes().map(|c| c.methods.len() as u64).sum(),
        nassoc: count(RelKind::Association),
        nagg: count(RelKind::Aggregation),
        ndep: count(RelKind::Dependency),
        ngen: count(RelKind::Generalization),
        naggh: agg_hierarchies,
        ngenh: gen_hierarchies,
        max_dit,
        max_hagg,
    }
}

/// Number of edge-containing weakly connected components and the longest
/// directed path (in edges) of the `kind` subgraph, which must be acyclic.
fn hierarchy_stats(d: &ClassDiagram, kind: RelKind) -> (u64, u64) {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut edges = Vec::new();
    for rel in d.relationships_of(kind) {
        let mut id = |name| {
            let next = index.len();
            *index.entry(name).or_insert(next)
        };
        let (s, t) = (id(rel.source.as_str()), id(rel.target.as_str()));
        edges.push((s, t));
    }
    let n = index.len();
    if n == 0 {
        return (0, 0);
    }

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    let mut out = vec![Vec::new(); n];
    for &(s, t) in &edges {
        out[s].push(t);
        let (a, b) = (find(&mut parent, s), find(&mut parent, t));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }

    // Longest path from each node, memoised over the DAG.
    let mut depth: Vec<Option<u64>> = vec![None; n];
    for start in 0..n {
        if depth[start].is_some() {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        while let Some(&mut (node, ref mut child)) = stack.last_mut() {
            if let Some(&next) = out[node].get(*child) {
                *child += 1;
                if depth[next].is_none() {
                    stack.push((next, 0));
                }
            } else {
                let d = out[node]
                    .iter()
                    .map(|&c| depth[c].expect("child visited") + 1)
                    .max()
                    .unwrap_or(0);
                depth[node] = Some(d);
                stack.pop();
            }
        }
    }
    let longest = depth.into_iter().flatten().max().unwrap_or(0);
    (components as u64, longest)
}
