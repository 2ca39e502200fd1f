//! Compositions, partitions and the dominance order on nil-equivalence classes
//! of flag varieties in GL(V).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("empty tuple")]
    Empty,
    #[error("part {0} is not positive")]
    NonPositive(i64),
    #[error("parts are not nonincreasing: {0:?}")]
    NotSorted(Vec<u32>),
    #[error("incomparable universes: d = {0} vs d = {1}")]
    Mismatch(u32, u32),
    #[error("cannot parse composition `{0}`")]
    Parse(String),
}

/// A tuple of positive integers summing to `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Composition {
    parts: Vec<u32>,
    d: u32,
}

/// A nonincreasing composition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
    d: u32,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        if parts.is_empty() {
            return Err(PartitionError::Empty);
        }
        if let Some(&p) = parts.iter().find(|&&p| p == 0) {
            return Err(PartitionError::NonPositive(p as i64));
        }
        let d = parts.iter().sum();
        Ok(Composition { parts, d })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Parts in ascending order (the normalisation used by the classifier).
    pub fn sorted_ascending(&self) -> Composition {
        let mut parts = self.parts.clone();
        parts.sort_unstable();
        Composition { parts, d: self.d }
    }

    /// All compositions of `d`, in lexicographic order.
    pub fn all(d: u32) -> Vec<Composition> {
        fn rec(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
            if rest == 0 {
                out.push(Composition::new(cur.clone()).unwrap());
                return;
            }
            for p in 1..=rest {
                cur.push(p);
                rec(rest - p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if d > 0 {
            rec(d, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        let c = Composition::new(parts)?;
        if c.parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotSorted(c.parts));
        }
        Ok(Partition { parts: c.parts, d: c.d })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn as_composition(&self) -> Composition {
        Composition { parts: self.parts.clone(), d: self.d }
    }

    /// All partitions of `d`, lexicographic on parts.
    pub fn all(d: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone(), d: cur.iter().sum() });
                return;
            }
            for p in 1..=rest.min(max) {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if d > 0 {
            rec(d, d, &mut Vec::new(), &mut out);
        }
        out.sort();
        out
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, parts: &[u32]) -> fmt::Result {
    write!(f, "(")?;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{p}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.parts)
    }
}

/// Parses `(1,2,3)`, `1,2,3` or `a=(1,2,3)`.
impl FromStr for Composition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let t = t.strip_prefix("a=").unwrap_or(t).trim();
        let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t);
        let parts = t
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Parse(s.to_string()))?;
        if let Some(&p) = parts.iter().find(|&&p| p <= 0) {
            return Err(PartitionError::NonPositive(p));
        }
        Composition::new(parts.into_iter().map(|p| p as u32).collect())
    }
}

fn same_d(a: u32, b: u32) -> Result<(), PartitionError> {
    if a != b {
        Err(PartitionError::Mismatch(a, b))
    } else {
        Ok(())
    }
}

pub fn natural_form(a: &Composition) -> Partition {
    let mut parts = a.parts.clone();
    parts.sort_unstable_by(|x, y| y.cmp(x));
    Partition { parts, d: a.d }
}

pub fn transpose(p: &Partition) -> Partition {
    let first = p.parts[0];
    let parts = (1..=first)
        .map(|i| p.parts.iter().filter(|&&x| x >= i).count() as u32)
        .collect();
    Partition { parts, d: p.d }
}

pub fn dominance_leq(p: &Partition, q: &Partition) -> Result<bool, PartitionError> {
    same_d(p.d, q.d)?;
    let n = p.parts.len().max(q.parts.len());
    let (mut sp, mut sq) = (0u32, 0u32);
    for i in 0..n {
        sp += p.parts.get(i).copied().unwrap_or(0);
        sq += q.parts.get(i).copied().unwrap_or(0);
        if sp > sq {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn nil_equivalent(a: &Composition, b: &Composition) -> Result<bool, PartitionError> {
    same_d(a.d, b.d)?;
    Ok(natural_form(a) == natural_form(b))
}

/// Jordan type of the nilpotent orbit attached to `Fl_a(V)`.
pub fn flag_orbit_partition(a: &Composition) -> Partition {
    transpose(&natural_form(a))
}

/// Class order: `[Fl_a] <= [Fl_b]` iff `b♮ <= a♮` in dominance.
pub fn class_leq(a: &Composition, b: &Composition) -> Result<bool, PartitionError> {
    same_d(a.d, b.d)?;
    dominance_leq(&natural_form(b), &natural_form(a))
}

pub fn flag_dimension(a: &Composition) -> u64 {
    let d = a.d as u64;
    let sq: u64 = a.parts.iter().map(|&x| (x as u64) * (x as u64)).sum();
    (d * d - sq) / 2
}

pub fn orbit_dimension(p: &Partition) -> u64 {
    let d = p.d as u64;
    let sq: u64 = transpose(p).parts.iter().map(|&x| (x as u64) * (x as u64)).sum();
    d * d - sq
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NilPoset {
    pub d: u32,
    pub nodes: Vec<Partition>,
    /// `(p, q)` with `p` covered by `q` in dominance order.
    pub cover_edges: Vec<(Partition, Partition)>,
}

/// Dominance Hasse diagram on all partitions of `d`.
pub fn hasse(d: u32) -> NilPoset {
    hasse_on(d, Partition::all(d))
}

/// Hasse diagram of dominance restricted to `nodes` (deduplicated and sorted).
pub fn hasse_on(d: u32, mut nodes: Vec<Partition>) -> NilPoset {
    nodes.sort();
    nodes.dedup();
    let n = nodes.len();
    let leq: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| dominance_leq(&nodes[i], &nodes[j]).unwrap()).collect())
        .collect();
    let mut cover_edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !leq[i][j] {
                continue;
            }
            let between = (0..n).any(|k| k != i && k != j && leq[i][k] && leq[k][j]);
            if !between {
                cover_edges.push((nodes[i].clone(), nodes[j].clone()));
            }
        }
    }
    NilPoset { d, nodes, cover_edges }
}

impl NilPoset {
    /// DOT text oriented by the class order: an edge runs from the smaller
    /// class to the larger one, so `P(V)` is a source. Labels are the
    /// ascending compositions.
    pub fn to_dot(&self) -> String {
        let label = |p: &Partition| {
            let mut parts = p.parts.clone();
            parts.reverse();
            Composition::new(parts).unwrap().to_string()
        };
        let mut out = format!("digraph nil_{} {{\n", self.d);
        for p in self.nodes.iter().rev() {
            out.push_str(&format!("  \"{}\";\n", label(p)));
        }
        let mut edges: Vec<(String, String)> = self
            .cover_edges
            .iter()
            .map(|(lo, hi)| (label(hi), label(lo)))
            .collect();
        edges.sort();
        for (from, to) in edges {
            out.push_str(&format!("  \"{from}\" -> \"{to}\";\n"));
        }
        out.push_str("}\n");
        out
    }
}
