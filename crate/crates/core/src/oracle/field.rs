//! Arithmetic and dense linear algebra over Mersenne prime fields.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prime {
    /// 2^61 - 1
    P61,
    /// 2^31 - 1
    P31,
}

impl Prime {
    pub fn bits(self) -> u32 {
        match self {
            Prime::P61 => 61,
            Prime::P31 => 31,
        }
    }

    pub fn modulus(self) -> u64 {
        (1u64 << self.bits()) - 1
    }

    pub fn field(self) -> Fp {
        Fp { p: self.modulus(), bits: self.bits() }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::P61 => write!(f, "p61"),
            Prime::P31 => write!(f, "p31"),
        }
    }
}

impl FromStr for Prime {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "p61" => Ok(Prime::P61),
            "p31" => Ok(Prime::P31),
            _ => Err(format!("unknown prime `{s}` (expected p61 or p31)")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Fp {
    p: u64,
    bits: u32,
}

impl Fp {
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    fn fold(&self, x: u128) -> u64 {
        let p = self.p as u128;
        let y = (x & p) + (x >> self.bits);
        let mut z = ((y & p) + (y >> self.bits)) as u64;
        if z >= self.p {
            z -= self.p;
        }
        z
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.fold(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    /// Rank of a row-major `rows × cols` matrix (destroys the input).
    pub fn rank(&self, m: &mut [u64], rows: usize, cols: usize) -> usize {
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(piv) = (rank..rows).find(|&r| m[r * cols + col] != 0) else {
                continue;
            };
            if piv != rank {
                for c in 0..cols {
                    m.swap(piv * cols + c, rank * cols + c);
                }
            }
            let inv = self.inv(m[rank * cols + col]);
            for c in col..cols {
                m[rank * cols + c] = self.mul(m[rank * cols + c], inv);
            }
            for r in rank + 1..rows {
                let f = m[r * cols + col];
                if f == 0 {
                    continue;
                }
                for c in col..cols {
                    let t = self.mul(f, m[rank * cols + c]);
                    m[r * cols + c] = self.sub(m[r * cols + c], t);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Inverse of a square `n × n` matrix, or `None` if singular.
    pub fn inverse(&self, m: &[u64], n: usize) -> Option<Vec<u64>> {
        let w = 2 * n;
        let mut a = vec![0u64; n * w];
        for i in 0..n {
            a[i * w..i * w + n].copy_from_slice(&m[i * n..i * n + n]);
            a[i * w + n + i] = 1;
        }
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r * w + col] != 0)?;
            if piv != col {
                for c in 0..w {
                    a.swap(piv * w + c, col * w + c);
                }
            }
            let inv = self.inv(a[col * w + col]);
            for c in 0..w {
                a[col * w + c] = self.mul(a[col * w + c], inv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * w + col];
                if f == 0 {
                    continue;
                }
                for c in 0..w {
                    let t = self.mul(f, a[col * w + c]);
                    a[r * w + c] = self.sub(a[r * w + c], t);
                }
            }
        }
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            out[i * n..i * n + n].copy_from_slice(&a[i * w + n..i * w + w]);
        }
        Some(out)
    }

    /// Dense product of `n × n` matrices.
    pub fn matmul(&self, a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = self.mul(x, b[k * n + j]);
                    out[i * n + j] = self.add(out[i * n + j], t);
                }
            }
        }
        out
    }
}
