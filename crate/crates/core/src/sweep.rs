//! Classifier/oracle agreement over a configured family of embeddings.

use std::collections::BTreeSet;
use std::path::Path;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{decide_with, ClassifyError};
use crate::grammar::parse_factor_str;
use crate::group::{canonicalize, FactorKind, IrrepTag, ModuleSummand, ReductiveEmbedding};
use crate::oracle::{build_rep, derive_seed, escalate, Conjugated, OracleError, Prime};
use crate::partition::{flag_dimension, Composition, Partition};
use crate::tables::TableSet;

pub const BUILTIN_SWEEP: &str = include_str!("../data/sweep.toml");

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep config: {0}")]
    Config(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub dmax: u32,
    pub factors: Vec<String>,
    pub max_factors: usize,
    pub max_summands: usize,
    pub max_torus_rank: usize,
    pub character_alphabet: Vec<i64>,
    /// Tags allowed only on summands where every other factor acts trivially.
    pub single_factor_tags: Vec<String>,
    /// Allow `V ⊗ V`-type summands across two factors.
    pub cross_factor_tensors: bool,
    pub trials: u32,
    pub prime: Prime,
    pub seed: u64,
    pub escalate: bool,
}

impl SweepConfig {
    pub fn builtin() -> SweepConfig {
        SweepConfig::from_toml(BUILTIN_SWEEP).expect("builtin sweep config parses")
    }

    pub fn from_toml(text: &str) -> Result<SweepConfig, SweepError> {
        toml::from_str(text).map_err(|e| SweepError::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<SweepConfig, SweepError> {
        SweepConfig::from_toml(&std::fs::read_to_string(path)?)
    }

    fn factor_kinds(&self) -> Result<Vec<FactorKind>, SweepError> {
        self.factors
            .iter()
            .map(|s| parse_factor_str(s).map_err(|e| SweepError::Config(format!("factor `{s}`: {e}"))))
            .collect()
    }

    fn single_tags(&self) -> Result<Vec<IrrepTag>, SweepError> {
        self.single_factor_tags
            .iter()
            .map(|s| match s.as_str() {
                "S2V" => Ok(IrrepTag::Sym2),
                "L2V" => Ok(IrrepTag::Wedge2),
                other => Err(SweepError::Config(format!("single-factor tag `{other}`"))),
            })
            .collect()
    }
}

/// The "vector" tags of a factor: the defining module and, for SL(n), its dual.
fn base_tags(k: FactorKind) -> Vec<IrrepTag> {
    match k {
        FactorKind::SL(_) => vec![IrrepTag::Standard, IrrepTag::DualStandard],
        FactorKind::Spin(7) | FactorKind::Spin(9) => vec![IrrepTag::Spin],
        FactorKind::Spin(_) => vec![IrrepTag::HalfSpinPlus, IrrepTag::HalfSpinMinus],
        FactorKind::G2 => vec![IrrepTag::Fund7],
        FactorKind::E6 => vec![IrrepTag::Fund27],
        _ => vec![IrrepTag::Standard],
    }
}

fn summand_tag_options(cfg: &SweepConfig, factors: &[FactorKind], single: &[IrrepTag]) -> Vec<Vec<IrrepTag>> {
    let nf = factors.len();
    let mut out: Vec<Vec<IrrepTag>> = vec![vec![IrrepTag::Trivial; nf]];
    for j in 0..nf {
        let mut extra = base_tags(factors[j]);
        extra.extend(single.iter().copied().filter(|&t| factors[j].tag_dim(t).is_some()));
        for t in extra {
            let mut v = vec![IrrepTag::Trivial; nf];
            v[j] = t;
            out.push(v);
        }
    }
    if cfg.cross_factor_tensors && nf >= 2 {
        for (i, j) in (0..nf).tuple_combinations() {
            for (&ti, &tj) in base_tags(factors[i]).iter().cartesian_product(base_tags(factors[j]).iter()) {
                let mut v = vec![IrrepTag::Trivial; nf];
                v[i] = ti;
                v[j] = tj;
                out.push(v);
            }
        }
    }
    out.into_iter()
        .filter(|tags| {
            let d: Option<u64> = factors.iter().zip(tags).map(|(f, &t)| f.tag_dim(t)).product();
            d.is_some_and(|d| d <= cfg.dmax as u64)
        })
        .collect()
}

/// Key invariant under geometric equivalence and automorphisms of the torus
/// that permute or negate coordinates.
fn sweep_key(e: &ReductiveEmbedding) -> ReductiveEmbedding {
    let r = e.torus_rank;
    let mut best: Option<ReductiveEmbedding> = None;
    for perm in (0..r).permutations(r) {
        for signs in 0u32..(1 << r) {
            let mut t = e.clone();
            for s in &mut t.summands {
                s.character = perm
                    .iter()
                    .enumerate()
                    .map(|(k, &p)| if signs >> k & 1 == 1 { -s.character[p] } else { s.character[p] })
                    .collect();
            }
            let c = canonicalize(&t);
            if best.as_ref().map_or(true, |b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.expect("at least one torus automorphism")
}

/// Every embedding described by the config, deduplicated up to geometric
/// equivalence, in canonical order.
pub fn enumerate_embeddings(cfg: &SweepConfig) -> Result<Vec<ReductiveEmbedding>, SweepError> {
    let kinds = cfg.factor_kinds()?;
    let single = cfg.single_tags()?;
    let mut seen: BTreeSet<ReductiveEmbedding> = BTreeSet::new();
    let mut out = Vec::new();
    for nf in 0..=cfg.max_factors {
        for factors in kinds.iter().copied().combinations_with_replacement(nf) {
            let options = summand_tag_options(cfg, &factors, &single);
            let dim = |t: &Vec<IrrepTag>| -> u64 { factors.iter().zip(t).map(|(f, &x)| f.tag_dim(x).unwrap()).product() };
            for ns in 1..=cfg.max_summands {
                for choice in (0..options.len()).combinations_with_replacement(ns) {
                    let d: u64 = choice.iter().map(|&i| dim(&options[i])).sum();
                    if d > cfg.dmax as u64 {
                        continue;
                    }
                    let faithful = (0..nf).all(|j| choice.iter().any(|&i| factors[j].acts_by(options[i][j])));
                    if !faithful {
                        continue;
                    }
                    for r in 0..=cfg.max_torus_rank {
                        let per_summand: Vec<Vec<i64>> = (0..r)
                            .map(|_| cfg.character_alphabet.iter().copied())
                            .multi_cartesian_product()
                            .collect();
                        let per_summand = if r == 0 { vec![vec![]] } else { per_summand };
                        for chars in (0..ns).map(|_| per_summand.iter()).multi_cartesian_product() {
                            // A torus coordinate acting trivially everywhere is a lower-rank case.
                            if (0..r).any(|t| chars.iter().all(|c| c[t] == 0)) {
                                continue;
                            }
                            let summands = choice
                                .iter()
                                .zip(&chars)
                                .map(|(&i, c)| ModuleSummand { tags: options[i].clone(), character: (*c).clone() })
                                .collect();
                            let e = ReductiveEmbedding { factors: factors.clone(), torus_rank: r, summands };
                            if e.validate().is_err() {
                                continue;
                            }
                            let key = sweep_key(&e);
                            if seen.insert(key.clone()) {
                                out.push(key);
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub embedding: String,
    pub a: String,
    pub classifier: bool,
    pub oracle: bool,
    pub route: String,
    pub max_rank: usize,
    pub target: u64,
    pub escalated: bool,
}

impl CaseResult {
    pub fn agree(&self) -> bool {
        self.classifier == self.oracle
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepSummary {
    pub embeddings: usize,
    pub cases: usize,
    pub spherical: usize,
    pub agree: usize,
    pub escalations: usize,
    pub disagreements: Vec<CaseResult>,
    pub skipped: Vec<String>,
}

impl SweepSummary {
    pub fn report(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("EMBEDDINGS: {}\n", self.embeddings));
        s.push_str(&format!("CASES: {}\n", self.cases));
        s.push_str(&format!("SPHERICAL: {}\n", self.spherical));
        s.push_str(&format!("AGREE: {}\n", self.agree));
        s.push_str(&format!("ESCALATIONS: {}\n", self.escalations));
        s.push_str(&format!("DISAGREE: {}\n", self.disagreements.len()));
        for c in &self.disagreements {
            s.push_str(&format!(
                "MISMATCH: {} a={} classifier={} oracle={} rank={}/{} route={}\n",
                c.embedding,
                c.a,
                if c.classifier { "SPHERICAL" } else { "NOT-SPHERICAL" },
                if c.oracle { "SPHERICAL" } else { "NOT-SPHERICAL" },
                c.max_rank,
                c.target,
                c.route
            ));
        }
        for k in &self.skipped {
            s.push_str(&format!("SKIPPED: {k}\n"));
        }
        s
    }
}

/// Stable per-embedding seed (FNV-1a of the printed form, mixed with the base).
pub fn embedding_seed(base: u64, e: &ReductiveEmbedding) -> u64 {
    let h = e.to_string().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    derive_seed(base, h)
}

/// Classifier vs oracle on every nondecreasing composition of `d(e)`.
/// Compositions are taken in nondecreasing order; permutation invariance is
/// covered separately.
pub fn check_embedding(
    cfg: &SweepConfig,
    tables: &TableSet,
    e: &ReductiveEmbedding,
) -> Result<Vec<CaseResult>, SweepError> {
    let d = e.total_dimension() as u32;
    let rep = build_rep(e)?;
    let base = embedding_seed(cfg.seed, e);
    let mut samples: Vec<Conjugated> = Vec::new();
    let mut out = Vec::new();
    let mut parts: Vec<Partition> = Partition::all(d);
    parts.reverse();
    for p in parts {
        let a: Composition = p.as_composition().sorted_ascending();
        let verdict = decide_with(tables, e, &a)?;
        let mut oracle = false;
        let mut max_rank = 0;
        let target = flag_dimension(&a);
        for i in 0..cfg.trials as usize {
            if samples.len() <= i {
                samples.push(Conjugated::sample(&rep, derive_seed(base, i as u64), cfg.prime)?);
            }
            let w = samples[i].rank(&a)?;
            max_rank = max_rank.max(w.rank);
            if w.rank as u64 == target {
                oracle = true;
                break;
            }
        }
        let mut escalated = false;
        if !oracle && verdict.spherical && cfg.escalate {
            escalated = true;
            let r = escalate(&rep, &a, base)?;
            max_rank = max_rank.max(r.max_rank());
            oracle = r.verdict.spherical();
        }
        out.push(CaseResult {
            embedding: e.to_string(),
            a: a.to_string(),
            classifier: verdict.spherical,
            oracle,
            route: verdict.route.to_string(),
            max_rank,
            target,
            escalated,
        });
    }
    Ok(out)
}

pub fn run_sweep(cfg: &SweepConfig, tables: &TableSet) -> Result<SweepSummary, SweepError> {
    let embs = enumerate_embeddings(cfg)?;
    let mut sum = SweepSummary { embeddings: embs.len(), ..Default::default() };
    for e in &embs {
        if e.total_dimension() < 2 {
            continue;
        }
        let cases = match check_embedding(cfg, tables, e) {
            Ok(c) => c,
            Err(SweepError::Oracle(OracleError::Unsupported(why))) => {
                sum.skipped.push(format!("{e}: {why}"));
                continue;
            }
            Err(err) => return Err(err),
        };
        for c in cases {
            sum.cases += 1;
            sum.spherical += c.classifier as usize;
            sum.escalations += c.escalated as usize;
            if c.agree() {
                sum.agree += 1;
            } else {
                sum.disagreements.push(c);
            }
        }
    }
    Ok(sum)
}
