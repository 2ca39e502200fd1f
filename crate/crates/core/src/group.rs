//! Connected reductive subgroups K ⊂ GL(V), given as simple factors, a central
//! torus and a list of summands with central characters.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("SO(2) is a torus; use T(1)")]
    So2Torus,
    #[error("SL(1) is trivial; use a trivial summand with a torus character")]
    Sl1,
    #[error("factor {0} is out of range")]
    FactorRange(String),
    #[error("tag {tag} is not admissible for factor {factor}")]
    Tag { factor: String, tag: String },
    #[error("summand {summand} has {got} tags, expected {expected}")]
    TagCount { summand: usize, got: usize, expected: usize },
    #[error("summand {summand} has a character of length {got}, torus rank is {expected}")]
    CharLength { summand: usize, got: usize, expected: usize },
    #[error("factor {0} acts trivially on every summand")]
    Unfaithful(String),
    #[error("embedding has no summands")]
    NoSummands,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorKind {
    SL(u32),
    /// `Sp(n)` is the symplectic group of `F^{2n}`.
    Sp(u32),
    SO(u32),
    Spin(u32),
    G2,
    E6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IrrepTag {
    Trivial,
    Standard,
    DualStandard,
    Sym2,
    Wedge2,
    Spin,
    HalfSpinPlus,
    HalfSpinMinus,
    Fund7,
    Fund27,
}

impl FactorKind {
    pub fn check(&self) -> Result<(), ModelError> {
        let ok = match *self {
            FactorKind::SL(1) => return Err(ModelError::Sl1),
            FactorKind::SO(2) => return Err(ModelError::So2Torus),
            FactorKind::SL(n) => n >= 2,
            FactorKind::Sp(n) => n >= 1,
            FactorKind::SO(n) => n >= 3,
            FactorKind::Spin(n) => (7..=10).contains(&n),
            FactorKind::G2 | FactorKind::E6 => true,
        };
        if ok {
            Ok(())
        } else {
            Err(ModelError::FactorRange(self.to_string()))
        }
    }

    pub fn dim(&self) -> u64 {
        match *self {
            FactorKind::SL(n) => (n as u64).pow(2) - 1,
            FactorKind::Sp(n) => (n as u64) * (2 * n as u64 + 1),
            FactorKind::SO(n) | FactorKind::Spin(n) => (n as u64) * (n as u64 - 1) / 2,
            FactorKind::G2 => 14,
            FactorKind::E6 => 78,
        }
    }

    pub fn rank(&self) -> u64 {
        match *self {
            FactorKind::SL(n) => n as u64 - 1,
            FactorKind::Sp(n) => n as u64,
            FactorKind::SO(n) | FactorKind::Spin(n) => n as u64 / 2,
            FactorKind::G2 => 2,
            FactorKind::E6 => 6,
        }
    }

    /// Dimension of the irreducible module `tag`, or `None` if inadmissible.
    pub fn tag_dim(&self, tag: IrrepTag) -> Option<u64> {
        use IrrepTag::*;
        let r = match (*self, tag) {
            (_, Trivial) => 1,
            (FactorKind::SL(n), Standard | DualStandard) => n as u64,
            (FactorKind::SL(n), Sym2) => (n as u64) * (n as u64 + 1) / 2,
            (FactorKind::SL(n), Wedge2) => (n as u64) * (n as u64 - 1) / 2,
            (FactorKind::Sp(n), Standard) => 2 * n as u64,
            (FactorKind::SO(n), Standard) => n as u64,
            (FactorKind::Spin(7), Spin) => 8,
            (FactorKind::Spin(9), Spin) => 16,
            (FactorKind::Spin(8), HalfSpinPlus | HalfSpinMinus) => 8,
            (FactorKind::Spin(10), HalfSpinPlus | HalfSpinMinus) => 16,
            (FactorKind::G2, Fund7) => 7,
            (FactorKind::E6, Fund27) => 27,
            _ => return None,
        };
        Some(r)
    }

    /// Whether `tag` is a nontrivial action of this factor.
    pub fn acts_by(&self, tag: IrrepTag) -> bool {
        !matches!(
            (*self, tag),
            (_, IrrepTag::Trivial) | (FactorKind::SL(2), IrrepTag::Wedge2)
        )
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FactorKind::SL(n) => write!(f, "SL({n})"),
            FactorKind::Sp(n) => write!(f, "Sp({})", 2 * n),
            FactorKind::SO(n) => write!(f, "SO({n})"),
            FactorKind::Spin(n) => write!(f, "Spin({n})"),
            FactorKind::G2 => write!(f, "G2(7)"),
            FactorKind::E6 => write!(f, "E6(27)"),
        }
    }
}

impl IrrepTag {
    pub fn symbol(&self) -> &'static str {
        match self {
            IrrepTag::Trivial => "1",
            IrrepTag::Standard | IrrepTag::Fund7 | IrrepTag::Fund27 => "V",
            IrrepTag::DualStandard => "V*",
            IrrepTag::Sym2 => "S2V",
            IrrepTag::Wedge2 => "L2V",
            IrrepTag::Spin => "spin",
            IrrepTag::HalfSpinPlus => "spin+",
            IrrepTag::HalfSpinMinus => "spin-",
        }
    }
}

impl fmt::Display for IrrepTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuleSummand {
    pub tags: Vec<IrrepTag>,
    pub character: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReductiveEmbedding {
    pub factors: Vec<FactorKind>,
    pub torus_rank: usize,
    pub summands: Vec<ModuleSummand>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummandBlock {
    pub factor_indices: Vec<usize>,
    pub summand_indices: Vec<usize>,
    pub characters: Vec<Vec<i64>>,
}

impl ReductiveEmbedding {
    pub fn new(
        factors: Vec<FactorKind>,
        torus_rank: usize,
        summands: Vec<ModuleSummand>,
    ) -> Result<Self, ModelError> {
        let e = ReductiveEmbedding { factors, torus_rank, summands };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for f in &self.factors {
            f.check()?;
        }
        if self.summands.is_empty() {
            return Err(ModelError::NoSummands);
        }
        for (i, s) in self.summands.iter().enumerate() {
            if s.tags.len() != self.factors.len() {
                return Err(ModelError::TagCount {
                    summand: i,
                    got: s.tags.len(),
                    expected: self.factors.len(),
                });
            }
            if s.character.len() != self.torus_rank {
                return Err(ModelError::CharLength {
                    summand: i,
                    got: s.character.len(),
                    expected: self.torus_rank,
                });
            }
            for (f, &t) in self.factors.iter().zip(&s.tags) {
                if f.tag_dim(t).is_none() {
                    return Err(ModelError::Tag { factor: f.to_string(), tag: t.to_string() });
                }
            }
        }
        for (j, f) in self.factors.iter().enumerate() {
            if !self.summands.iter().any(|s| f.acts_by(s.tags[j])) {
                return Err(ModelError::Unfaithful(f.to_string()));
            }
        }
        Ok(())
    }

    pub fn summand_dimension(&self, i: usize) -> Result<u64, ModelError> {
        let s = &self.summands[i];
        let mut dim = 1;
        for (f, &t) in self.factors.iter().zip(&s.tags) {
            dim *= f
                .tag_dim(t)
                .ok_or_else(|| ModelError::Tag { factor: f.to_string(), tag: t.to_string() })?;
        }
        Ok(dim)
    }

    pub fn total_dimension(&self) -> u64 {
        (0..self.summands.len()).map(|i| self.summand_dimension(i).unwrap_or(0)).sum()
    }

    pub fn group_dim_rank(&self) -> (u64, u64) {
        let c = self.torus_rank as u64;
        let dim = self.factors.iter().map(|f| f.dim()).sum::<u64>() + c;
        let rank = self.factors.iter().map(|f| f.rank()).sum::<u64>() + c;
        (dim, rank)
    }

    /// Factor indices acting nontrivially on summand `i`.
    pub fn support_of_summand(&self, i: usize) -> Vec<usize> {
        (0..self.factors.len())
            .filter(|&j| self.factors[j].acts_by(self.summands[i].tags[j]))
            .collect()
    }

    /// Summand indices on which factor `j` acts nontrivially.
    pub fn support_of_factor(&self, j: usize) -> Vec<usize> {
        (0..self.summands.len())
            .filter(|&i| self.factors[j].acts_by(self.summands[i].tags[j]))
            .collect()
    }

    /// Connected components of the factor/summand incidence graph, ordered by
    /// smallest summand index.
    pub fn blocks(&self) -> Vec<SummandBlock> {
        let r = self.summands.len();
        let mut comp: Vec<usize> = (0..r).collect();
        fn find(c: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while c[x] != x {
                c[x] = c[c[x]];
                x = c[x];
            }
            x
        }
        for j in 0..self.factors.len() {
            let sup = self.support_of_factor(j);
            for w in sup.windows(2) {
                let (a, b) = (find(&mut comp, w[0]), find(&mut comp, w[1]));
                if a != b {
                    comp[a.max(b)] = a.min(b);
                }
            }
        }
        let mut out: Vec<SummandBlock> = Vec::new();
        let mut roots: Vec<usize> = Vec::new();
        for i in 0..r {
            let root = find(&mut comp, i);
            match roots.iter().position(|&x| x == root) {
                Some(k) => out[k].summand_indices.push(i),
                None => {
                    roots.push(root);
                    out.push(SummandBlock {
                        factor_indices: vec![],
                        summand_indices: vec![i],
                        characters: vec![],
                    });
                }
            }
        }
        for b in &mut out {
            let fs: BTreeSet<usize> =
                b.summand_indices.iter().flat_map(|&i| self.support_of_summand(i)).collect();
            b.factor_indices = fs.into_iter().collect();
            b.characters =
                b.summand_indices.iter().map(|&i| self.summands[i].character.clone()).collect();
        }
        out
    }

    /// Sub-embedding on the given summands, keeping only factors acting on them.
    pub fn restrict(&self, summand_indices: &[usize]) -> ReductiveEmbedding {
        let keep: Vec<usize> = (0..self.factors.len())
            .filter(|&j| summand_indices.iter().any(|&i| self.factors[j].acts_by(self.summands[i].tags[j])))
            .collect();
        ReductiveEmbedding {
            factors: keep.iter().map(|&j| self.factors[j]).collect(),
            torus_rank: self.torus_rank,
            summands: summand_indices
                .iter()
                .map(|&i| ModuleSummand {
                    tags: keep.iter().map(|&j| self.summands[i].tags[j]).collect(),
                    character: self.summands[i].character.clone(),
                })
                .collect(),
        }
    }

    /// Appends a torus coordinate whose value on summand `i` is `values[i]`.
    pub fn with_extra_torus(&self, values: &[i64]) -> ReductiveEmbedding {
        let mut e = self.clone();
        e.torus_rank += 1;
        for (s, &v) in e.summands.iter_mut().zip(values) {
            s.character.push(v);
        }
        e
    }
}

/// Exact rank of an integer matrix given by rows.
pub fn char_rank(chars: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<i128>> =
        chars.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        for i in 0..rows.len() {
            if i == rank || rows[i][col] == 0 {
                continue;
            }
            let (p, q) = (rows[rank][col], rows[i][col]);
            for c in 0..cols {
                rows[i][c] = rows[i][c] * p - rows[rank][c] * q;
            }
            let g = rows[i].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
            if g > 1 {
                rows[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// ---------------------------------------------------------------------------
// Canonical forms

/// One pass of the low-rank coincidence rewrites; returns `true` if anything
/// changed.
fn rewrite_once(e: &mut ReductiveEmbedding) -> bool {
    use FactorKind::*;
    use IrrepTag::*;
    for j in 0..e.factors.len() {
        let tags: Vec<IrrepTag> = e.summands.iter().map(|s| s.tags[j]).collect();
        let nontriv: Vec<IrrepTag> = tags.iter().copied().filter(|&t| t != Trivial).collect();
        let set_all = |e: &mut ReductiveEmbedding, k: FactorKind, from: IrrepTag, to: IrrepTag| {
            e.factors[j] = k;
            for s in &mut e.summands {
                if s.tags[j] == from {
                    s.tags[j] = to;
                }
            }
        };
        match e.factors[j] {
            Sp(1) => {
                e.factors[j] = SL(2);
                return true;
            }
            SL(2) if tags.contains(&DualStandard) => {
                set_all(e, SL(2), DualStandard, Standard);
                return true;
            }
            SL(2) if tags.contains(&Wedge2) => {
                set_all(e, SL(2), Wedge2, Trivial);
                return true;
            }
            SL(2) if !nontriv.is_empty() && nontriv.iter().all(|&t| t == Sym2) => {
                set_all(e, SO(3), Sym2, Standard);
                return true;
            }
            SL(3) if tags.contains(&Wedge2) => {
                set_all(e, SL(3), Wedge2, DualStandard);
                return true;
            }
            SL(4) if !nontriv.is_empty() && nontriv.iter().all(|&t| t == Wedge2) => {
                set_all(e, SO(6), Wedge2, Standard);
                return true;
            }
            FactorKind::Spin(8) if !nontriv.is_empty() && nontriv.iter().all_equal() => {
                let t = nontriv[0];
                set_all(e, SO(8), t, Standard);
                return true;
            }
            _ => {}
        }
    }
    // SL(2) x SL(2) acting jointly by Std⊗Std wherever either acts: SO(4).
    for (i, j) in (0..e.factors.len()).tuple_combinations() {
        if e.factors[i] != SL(2) || e.factors[j] != SL(2) {
            continue;
        }
        let si = e.support_of_factor(i);
        if si != e.support_of_factor(j) {
            continue;
        }
        if si.iter().all(|&k| e.summands[k].tags[i] == Standard && e.summands[k].tags[j] == Standard)
        {
            e.factors[i] = SO(4);
            e.factors.remove(j);
            for s in &mut e.summands {
                s.tags.remove(j);
            }
            return true;
        }
    }
    false
}

/// Applies the rewrite rules to a fixpoint, without reordering.
pub fn apply_rewrites(e: &ReductiveEmbedding) -> ReductiveEmbedding {
    let mut out = e.clone();
    while rewrite_once(&mut out) {}
    out
}

/// Outer automorphism of a factor acting on tags, if the factor's tags admit
/// one inside the catalog.
pub fn flip_tag(kind: FactorKind, tag: IrrepTag) -> IrrepTag {
    use IrrepTag::*;
    match (kind, tag) {
        (FactorKind::SL(_), Standard) => DualStandard,
        (FactorKind::SL(_), DualStandard) => Standard,
        (FactorKind::Spin(8) | FactorKind::Spin(10), HalfSpinPlus) => HalfSpinMinus,
        (FactorKind::Spin(8) | FactorKind::Spin(10), HalfSpinMinus) => HalfSpinPlus,
        _ => tag,
    }
}

/// Whether factor `j` can be twisted by its outer automorphism while staying in
/// the catalog (characters are unchanged by such a twist).
pub fn flippable(e: &ReductiveEmbedding, j: usize) -> bool {
    match e.factors[j] {
        FactorKind::SL(n) if n >= 3 => e.summands.iter().all(|s| {
            matches!(s.tags[j], IrrepTag::Trivial | IrrepTag::Standard | IrrepTag::DualStandard)
        }),
        FactorKind::Spin(8) | FactorKind::Spin(10) => true,
        _ => false,
    }
}

/// Normal form under geometric equivalence: rewrites, then the minimum over
/// outer twists of factors and factor orderings, with summands sorted.
pub fn canonicalize(e: &ReductiveEmbedding) -> ReductiveEmbedding {
    let r = apply_rewrites(e);
    let nf = r.factors.len();
    let flippable_idx: Vec<usize> = (0..nf).filter(|&j| flippable(&r, j)).collect();
    let mut sorted_kinds = r.factors.clone();
    sorted_kinds.sort();
    let mut best: Option<ReductiveEmbedding> = None;
    for mask in 0u32..(1 << flippable_idx.len()) {
        let mut twisted = r.clone();
        for (b, &j) in flippable_idx.iter().enumerate() {
            if mask >> b & 1 == 1 {
                for s in &mut twisted.summands {
                    s.tags[j] = flip_tag(twisted.factors[j], s.tags[j]);
                }
            }
        }
        for perm in (0..nf).permutations(nf) {
            if perm.iter().map(|&j| twisted.factors[j]).ne(sorted_kinds.iter().copied()) {
                continue;
            }
            let mut summands: Vec<ModuleSummand> = twisted
                .summands
                .iter()
                .map(|s| ModuleSummand {
                    tags: perm.iter().map(|&j| s.tags[j]).collect(),
                    character: s.character.clone(),
                })
                .collect();
            summands.sort();
            let cand = ReductiveEmbedding {
                factors: sorted_kinds.clone(),
                torus_rank: r.torus_rank,
                summands,
            };
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("at least the identity ordering")
}
