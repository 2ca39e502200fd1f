//! Sphericity straight from the definition: the Borel subalgebra of K has an
//! open orbit on `Fl_a(V)` iff its velocity map at a generic flag has rank
//! `dim Fl_a(V)`.

pub mod field;
pub mod rep;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub use field::{Fp, Prime};
pub use rep::{build_rep, IntMat, MatrixRep};

use crate::partition::{flag_dimension, Composition};

pub const DEFAULT_TRIALS: u32 = 8;
pub const ESCALATION_TRIALS: u32 = 64;
const SAMPLE_ATTEMPTS: u64 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle-unsupported: {0}")]
    Unsupported(String),
    #[error("representation self-check failed: {0}")]
    SelfCheck(String),
    #[error("composition sums to {a} but the representation has dimension {d}")]
    DimensionMismatch { a: u32, d: usize },
    #[error("no invertible sample after {0} attempts")]
    Singular(u64),
    #[error("trials must be at least 1")]
    NoTrials,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankWitness {
    pub seed: u64,
    pub prime: Prime,
    /// Row-major `d × d` sample point `g`.
    pub point: Vec<u64>,
    pub rank: usize,
    pub target: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum OracleVerdict {
    SphericalCertified,
    NotSphericalProbable { trials: u32 },
}

impl OracleVerdict {
    pub fn spherical(&self) -> bool {
        matches!(self, OracleVerdict::SphericalCertified)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub verdict: OracleVerdict,
    pub witnesses: Vec<RankWitness>,
}

impl OracleReport {
    pub fn max_rank(&self) -> usize {
        self.witnesses.iter().map(|w| w.rank).max().unwrap_or(0)
    }
}

/// splitmix64 step over `base` and `index`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Borel basis conjugated by one random invertible `g`: `g⁻¹ ξ g` for every ξ.
/// Independent of the composition, so one sample serves every `a` of the same d.
#[derive(Debug, Clone)]
pub struct Conjugated {
    pub seed: u64,
    pub prime: Prime,
    pub point: Vec<u64>,
    pub d: usize,
    pub mats: Vec<Vec<u64>>,
}

impl Conjugated {
    pub fn sample(rep: &MatrixRep, seed: u64, prime: Prime) -> Result<Conjugated, OracleError> {
        let f = prime.field();
        let d = rep.d;
        for attempt in 0..SAMPLE_ATTEMPTS {
            let s = if attempt == 0 { seed } else { derive_seed(seed, attempt) };
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let g: Vec<u64> = (0..d * d).map(|_| rng.gen_range(0..f.p())).collect();
            let Some(ginv) = f.inverse(&g, d) else { continue };
            let mats = rep
                .borel_basis()
                .map(|x| {
                    let xm: Vec<u64> = x.data.iter().map(|&v| f.from_i64(v)).collect();
                    f.matmul(&ginv, &f.matmul(&xm, &g, d), d)
                })
                .collect();
            return Ok(Conjugated { seed, prime, point: g, d, mats });
        }
        Err(OracleError::Singular(SAMPLE_ATTEMPTS))
    }

    /// Rank of the Borel velocities modulo the block-upper-triangular parabolic.
    pub fn rank(&self, a: &Composition) -> Result<RankWitness, OracleError> {
        if a.d() as usize != self.d {
            return Err(OracleError::DimensionMismatch { a: a.d(), d: self.d });
        }
        let block: Vec<usize> =
            a.parts().iter().enumerate().flat_map(|(b, &n)| std::iter::repeat(b).take(n as usize)).collect();
        let coords: Vec<usize> = (0..self.d)
            .flat_map(|i| (0..self.d).map(move |j| (i, j)))
            .filter(|&(i, j)| block[i] > block[j])
            .map(|(i, j)| i * self.d + j)
            .collect();
        let target = flag_dimension(a);
        debug_assert_eq!(coords.len() as u64, target);
        let cols = coords.len();
        let rows = self.mats.len();
        let mut m: Vec<u64> = self.mats.iter().flat_map(|x| coords.iter().map(move |&c| x[c])).collect();
        let rank = self.prime.field().rank(&mut m, rows, cols);
        assert!(rank as u64 <= target, "velocity rank {rank} exceeds dim Fl = {target}");
        Ok(RankWitness { seed: self.seed, prime: self.prime, point: self.point.clone(), rank, target })
    }
}

pub fn velocity_rank(rep: &MatrixRep, a: &Composition, seed: u64, prime: Prime) -> Result<RankWitness, OracleError> {
    if a.d() as usize != rep.d {
        return Err(OracleError::DimensionMismatch { a: a.d(), d: rep.d });
    }
    Conjugated::sample(rep, seed, prime)?.rank(a)
}

pub fn stabilizer_dim(rep: &MatrixRep, a: &Composition, seed: u64, prime: Prime) -> Result<usize, OracleError> {
    Ok(rep.borel_size() - velocity_rank(rep, a, seed, prime)?.rank)
}

/// Trial `i` uses seed `derive_seed(base_seed, i)`; stops at the first
/// full-rank witness.
pub fn oracle_decide(
    rep: &MatrixRep,
    a: &Composition,
    trials: u32,
    base_seed: u64,
    prime: Prime,
) -> Result<OracleReport, OracleError> {
    if trials == 0 {
        return Err(OracleError::NoTrials);
    }
    let mut witnesses = Vec::new();
    for i in 0..trials {
        let w = velocity_rank(rep, a, derive_seed(base_seed, i as u64), prime)?;
        let full = w.rank as u64 == w.target;
        witnesses.push(w);
        if full {
            return Ok(OracleReport { verdict: OracleVerdict::SphericalCertified, witnesses });
        }
    }
    Ok(OracleReport { verdict: OracleVerdict::NotSphericalProbable { trials }, witnesses })
}

/// Re-runs a non-spherical oracle verdict with `ESCALATION_TRIALS` trials on
/// both primes before it is allowed to stand.
pub fn escalate(rep: &MatrixRep, a: &Composition, base_seed: u64) -> Result<OracleReport, OracleError> {
    let mut all = Vec::new();
    for prime in [Prime::P61, Prime::P31] {
        let r = oracle_decide(rep, a, ESCALATION_TRIALS, derive_seed(base_seed, 0xE5CA_1A7E), prime)?;
        all.extend(r.witnesses);
        if r.verdict.spherical() {
            return Ok(OracleReport { verdict: OracleVerdict::SphericalCertified, witnesses: all });
        }
    }
    Ok(OracleReport { verdict: OracleVerdict::NotSphericalProbable { trials: 2 * ESCALATION_TRIALS }, witnesses: all })
}
