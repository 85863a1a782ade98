#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use memood::{ClassDef, RelKind, Relationship};
use rand::seq::SliceRandom;
use rand::Rng;

pub const NAMES: [&str; 12] = [
    "Account", "Bank", "C", "Dog", "_e", "F1", "Gx_2", "Hub", "I", "Job", "class", "Z9",
];
const MEMBERS: [&str; 6] = ["id", "name", "x", "_y", "run", "class"];

/// Raw builder input for a random diagram whose generalization and
/// aggregation edges respect a hidden topological order.
pub struct RawDiagram {
    pub classes: Vec<ClassDef>,
    pub relationships: Vec<Relationship>,
}

pub fn random_acyclic<R: Rng>(rng: &mut R, max_classes: usize, max_edges: usize) -> RawDiagram {
    let n = rng.random_range(1..=max_classes);
    let mut names: Vec<&str> = NAMES.to_vec();
    names.shuffle(rng);
    names.truncate(n);

    // Only some classes are declared; the rest appear through edges.
    let mut classes = Vec::new();
    for name in &names {
        if rng.random_bool(0.7) {
            let attrs: Vec<&str> = (0..rng.random_range(0..3))
                .map(|_| MEMBERS[rng.random_range(0..MEMBERS.len())])
                .collect();
            let methods: Vec<&str> = (0..rng.random_range(0..3))
                .map(|_| MEMBERS[rng.random_range(0..MEMBERS.len())])
                .collect();
            classes.push(
                ClassDef::new(*name)
                    .with_attributes(attrs)
                    .with_methods(methods),
            );
        }
    }

    let mut relationships = Vec::new();
    if n >= 2 {
        for _ in 0..rng.random_range(0..=max_edges) {
            let kind = RelKind::ALL[rng.random_range(0..4)];
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n);
            if kind == RelKind::Association {
                relationships.push(Relationship::new(kind, names[i], names[j]));
                continue;
            }
            while j == i {
                j = rng.random_range(0..n);
            }
            let (s, t) = match kind {
                // edges point from lower to higher position: no cycles
                RelKind::Generalization | RelKind::Aggregation => (i.min(j), i.max(j)),
                _ => (i, j),
            };
            relationships.push(Relationship::new(kind, names[s], names[t]));
        }
    }
    RawDiagram {
        classes,
        relationships,
    }
}

/// Metrics straight from the raw builder input: class set by union,
/// relationship set with association endpoints unordered, components by
/// flood fill and depths by enumerating every simple path.
pub fn metric_oracle(raw: &RawDiagram) -> [u64; 11] {
    let mut class_names: BTreeSet<String> = BTreeSet::new();
    let mut members: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    for c in &raw.classes {
        class_names.insert(c.name.clone());
        let e = members.entry(c.name.clone()).or_default();
        e.0 += c.attributes.len() as u64;
        e.1 += c.methods.len() as u64;
    }
    let mut rels: BTreeSet<(u8, String, String)> = BTreeSet::new();
    for r in &raw.relationships {
        class_names.insert(r.source.clone());
        class_names.insert(r.target.clone());
        let tag = match r.kind {
            RelKind::Association => 0,
            RelKind::Aggregation => 1,
            RelKind::Dependency => 2,
            RelKind::Generalization => 3,
        };
        let (s, t) = if tag == 0 && r.target < r.source {
            (r.target.clone(), r.source.clone())
        } else {
            (r.source.clone(), r.target.clone())
        };
        rels.insert((tag, s, t));
    }
    let edges_of = |tag: u8| -> Vec<(String, String)> {
        rels.iter()
            .filter(|r| r.0 == tag)
            .map(|r| (r.1.clone(), r.2.clone()))
            .collect()
    };
    let count = |tag: u8| edges_of(tag).len() as u64;
    let agg = edges_of(1);
    let gen = edges_of(3);
    [
        class_names.len() as u64,
        members.values().map(|m| m.0).sum(),
        members.values().map(|m| m.1).sum(),
        count(0),
        count(1),
        count(2),
        count(3),
        flood_components(&agg),
        flood_components(&gen),
        longest_simple_path(&gen),
        longest_simple_path(&agg),
    ]
}

fn flood_components(edges: &[(String, String)]) -> u64 {
    let nodes: BTreeSet<&str> = edges
        .iter()
        .flat_map(|(a, b)| [a.as_str(), b.as_str()])
        .collect();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut comps = 0;
    for &start in &nodes {
        if !seen.insert(start) {
            continue;
        }
        comps += 1;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for (a, b) in edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && seen.insert(y.as_str()) {
                        stack.push(y);
                    }
                }
            }
        }
    }
    comps
}

fn longest_simple_path(edges: &[(String, String)]) -> u64 {
    fn walk(v: &str, edges: &[(String, String)], path: &mut Vec<String>) -> u64 {
        let mut best = 0;
        for (a, b) in edges {
            if a == v && !path.contains(b) {
                path.push(b.clone());
                best = best.max(1 + walk(b, edges, path));
                path.pop();
            }
        }
        best
    }
    let starts: BTreeSet<&String> = edges.iter().map(|(a, _)| a).collect();
    starts
        .into_iter()
        .map(|s| walk(s, edges, &mut vec![s.clone()]))
        .max()
        .unwrap_or(0)
}

/// Whether `edges` contain a directed cycle, by transitive closure.
pub fn has_cycle(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    (0..n).any(|i| reach[i][i])
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `∫_0^x t^(a-1) (1-t)^(b-1) dt` for `x <= 1/2`, after substituting
/// `t = u^(1/a)` to remove the endpoint singularity when `a < 1`.
fn lower_beta_integral(x: f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let f = |u: f64| (1.0 - u.powf(1.0 / a)).powf(b - 1.0) / a;
    let upper = x.powf(a);
    let scale = upper * f(0.0).max(f(upper));
    integrate(&f, 0.0, upper, rel_tol * scale)
}

/// Regularized incomplete beta by quadrature.
pub fn beta_by_quadrature(x: f64, a: f64, b: f64) -> f64 {
    let tol = 1e-13;
    let total = lower_beta_integral(0.5, a, b, tol) + lower_beta_integral(0.5, b, a, tol);
    if x <= 0.5 {
        lower_beta_integral(x, a, b, tol) / total
    } else {
        1.0 - lower_beta_integral(1.0 - x, b, a, tol) / total
    }
}

/// Two-sided Student t p-value by quadrature: with `t = √ν tan θ` the tail
/// mass is proportional to `∫ cos^(ν-1) θ dθ` over `[atan(|t|/√ν), π/2]`.
pub fn t_p_by_quadrature(t: f64, df: usize) -> f64 {
    let nu = df as f64;
    let f = |th: f64| th.cos().powf(nu - 1.0);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let total = integrate(&f, 0.0, half_pi, 1e-14);
    let lo = (t.abs() / nu.sqrt()).atan();
    integrate(&f, lo, half_pi, 1e-14) / total
}
