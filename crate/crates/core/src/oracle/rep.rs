//! Integer matrices for Lie(K) ⊂ gl(V) and a Borel subalgebra.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::OracleError;
use crate::group::{FactorKind, IrrepTag, ReductiveEmbedding};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntMat {
    pub n: usize,
    pub data: Vec<i64>,
}

impl IntMat {
    pub fn zeros(n: usize) -> IntMat {
        IntMat { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn unit(n: usize, i: usize, j: usize) -> IntMat {
        let mut m = IntMat::zeros(n);
        m.set(i, j, 1);
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] += v;
    }

    pub fn sub(&self, o: &IntMat) -> IntMat {
        IntMat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, o: &IntMat) -> IntMat {
        IntMat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: i64) -> IntMat {
        IntMat { n: self.n, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMat) -> IntMat {
        let n = self.n;
        let mut out = IntMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x != 0 {
                    for j in 0..n {
                        out.data[i * n + j] += x * o.get(k, j);
                    }
                }
            }
        }
        out
    }

    pub fn bracket(&self, o: &IntMat) -> IntMat {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn kron(&self, o: &IntMat) -> IntMat {
        let n = self.n * o.n;
        let mut out = IntMat::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                let x = self.get(i, j);
                if x == 0 {
                    continue;
                }
                for k in 0..o.n {
                    for l in 0..o.n {
                        out.set(i * o.n + k, j * o.n + l, x * o.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn permute(&self, perm: &[usize]) -> IntMat {
        let mut out = IntMat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(perm[i], perm[j], self.get(i, j));
            }
        }
        out
    }
}

/// One basis element of a simple factor in its defining representation.
#[derive(Debug, Clone)]
pub struct BaseElem {
    pub mat: IntMat,
    pub label: String,
    pub borel: bool,
}

fn sl_basis(n: usize) -> Vec<BaseElem> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(BaseElem { mat: IntMat::unit(n, i, j), label: format!("E{}{}", i + 1, j + 1), borel: i < j });
            }
        }
    }
    for i in 0..n - 1 {
        let mut h = IntMat::zeros(n);
        h.set(i, i, 1);
        h.set(i + 1, i + 1, -1);
        out.push(BaseElem { mat: h, label: format!("H{}", i + 1), borel: true });
    }
    out
}

/// Gram matrix of the symplectic form in the standard basis: 2×2 blocks
/// `[[0,1],[-1,0]]`.
pub fn symplectic_form(n: usize) -> IntMat {
    let mut w = IntMat::zeros(2 * n);
    for i in 0..n {
        w.set(2 * i, 2 * i + 1, 1);
        w.set(2 * i + 1, 2 * i, -1);
    }
    w
}

/// sp(2n) built as `[[A, B], [C, -Aᵀ]]` (B, C symmetric) in the basis
/// `f_1..f_n, f_{n+1}..f_{2n}` and moved to the standard basis by
/// `f_i = e_{2i-1}`, `f_{n+i} = e_{2i}`. Borel: A upper triangular, B arbitrary.
fn sp_basis(n: usize) -> Vec<BaseElem> {
    let m = 2 * n;
    let perm: Vec<usize> = (0..m).map(|k| if k < n { 2 * k } else { 2 * (k - n) + 1 }).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let x = IntMat::unit(m, i, j).sub(&IntMat::unit(m, n + j, n + i));
            out.push(BaseElem { mat: x.permute(&perm), label: format!("A{}{}", i + 1, j + 1), borel: i <= j });
        }
    }
    for i in 0..n {
        for j in i..n {
            let mut b = IntMat::unit(m, i, n + j);
            let mut c = IntMat::unit(m, n + i, j);
            if i != j {
                b = b.add(&IntMat::unit(m, j, n + i));
                c = c.add(&IntMat::unit(m, n + j, i));
            }
            out.push(BaseElem { mat: b.permute(&perm), label: format!("B{}{}", i + 1, j + 1), borel: true });
            out.push(BaseElem { mat: c.permute(&perm), label: format!("C{}{}", i + 1, j + 1), borel: false });
        }
    }
    out
}

/// Gram matrix of the split symmetric form: antidiagonal ones.
pub fn orthogonal_form(n: usize) -> IntMat {
    let mut s = IntMat::zeros(n);
    for i in 0..n {
        s.set(i, n - 1 - i, 1);
    }
    s
}

/// so(n) for the antidiagonal form: `E_ij - E_{n+1-j, n+1-i}` strictly above
/// the antidiagonal; Borel = upper triangular ones.
fn so_basis(n: usize) -> Vec<BaseElem> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i + j + 2 <= n {
                let x = IntMat::unit(n, i, j).sub(&IntMat::unit(n, n - 1 - j, n - 1 - i));
                out.push(BaseElem { mat: x, label: format!("M{}{}", i + 1, j + 1), borel: i <= j });
            }
        }
    }
    out
}

/// Fermionic creation/annihilation operators on the 8-dimensional Fock space
/// of three modes (basis indexed by occupation bitmasks).
fn fock_ops() -> (Vec<IntMat>, Vec<IntMat>, IntMat) {
    let mut create = Vec::new();
    let mut annihilate = Vec::new();
    for i in 0..3 {
        let mut c = IntMat::zeros(8);
        for b in 0usize..8 {
            if b >> i & 1 == 0 {
                let sign = if (b & ((1 << i) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
                c.set(b | 1 << i, b, sign);
            }
        }
        annihilate.push(c.transpose());
        create.push(c);
    }
    let mut parity = IntMat::zeros(8);
    for b in 0usize..8 {
        parity.set(b, b, if b.count_ones() % 2 == 0 { 1 } else { -1 });
    }
    (create, annihilate, parity)
}

/// spin(7) on the spinor space via the Clifford generators
/// `a_i, a_i†` (i = 1..3) and the parity operator.
fn spin7_basis() -> Vec<BaseElem> {
    let (cr, an, p) = fock_ops();
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                out.push(BaseElem { mat: cr[i].mul(&an[j]), label: format!("c{}a{}", i + 1, j + 1), borel: i < j });
            }
        }
    }
    for i in 0..3 {
        let h = cr[i].mul(&an[i]).scale(2).sub(&IntMat::identity(8));
        out.push(BaseElem { mat: h, label: format!("h{}", i + 1), borel: true });
    }
    for i in 0..3 {
        for j in i + 1..3 {
            out.push(BaseElem { mat: cr[i].mul(&cr[j]), label: format!("c{}c{}", i + 1, j + 1), borel: true });
            out.push(BaseElem { mat: an[i].mul(&an[j]), label: format!("a{}a{}", i + 1, j + 1), borel: false });
        }
    }
    for i in 0..3 {
        out.push(BaseElem { mat: cr[i].mul(&p), label: format!("c{}P", i + 1), borel: true });
        out.push(BaseElem { mat: an[i].mul(&p), label: format!("a{}P", i + 1), borel: false });
    }
    out
}

/// Solves `Xᵀ S + S X = 0` for symmetric `S` over all basis elements; returns
/// the solution space basis, scaled to integers.
pub fn invariant_symmetric_forms(basis: &[IntMat]) -> Vec<IntMat> {
    let n = basis[0].n;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let var = |i: usize, j: usize| -> usize {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    let nv = pairs.len();
    // Equation for entry (r, c): Σ_k X[k][r] S[k][c] + S[r][k] X[k][c] = 0.
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for x in basis {
        for r in 0..n {
            for c in r..n {
                let mut eq = vec![BigRational::zero(); nv];
                for k in 0..n {
                    let a = x.get(k, r);
                    if a != 0 {
                        eq[var(k, c)] += BigRational::from_integer(BigInt::from(a));
                    }
                    let b = x.get(k, c);
                    if b != 0 {
                        eq[var(r, k)] += BigRational::from_integer(BigInt::from(b));
                    }
                }
                if eq.iter().any(|v| !v.is_zero()) {
                    rows.push(eq);
                }
            }
        }
    }
    // Reduced row echelon form.
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..nv {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = BigRational::one() / rows[rank][col].clone();
        for v in rows[rank].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..nv {
                    let t = &f * &rows[rank][c];
                    rows[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let free: Vec<usize> = (0..nv).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut sol = vec![BigRational::zero(); nv];
            sol[fc] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                sol[pc] = -rows[r][fc].clone();
            }
            let lcm = sol.iter().fold(BigInt::one(), |acc, v| {
                let d = v.denom().clone();
                num_integer_lcm(&acc, &d)
            });
            let mut s = IntMat::zeros(n);
            for (k, &(i, j)) in pairs.iter().enumerate() {
                let v = (&sol[k] * BigRational::from_integer(lcm.clone())).to_integer();
                let v: i64 = v.try_into().expect("small invariant form");
                s.set(i, j, v);
                s.set(j, i, v);
            }
            s
        })
        .collect()
}

fn num_integer_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    let g = gcd_big(a.clone(), b.clone());
    (a * b) / g
}

fn gcd_big(mut a: BigInt, mut b: BigInt) -> BigInt {
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    if a < BigInt::zero() {
        -a
    } else {
        a
    }
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(m: &IntMat) -> BigInt {
    let n = m.n;
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(m.get(i, j))).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

/// Defining-representation basis of a simple factor.
pub fn factor_basis(kind: FactorKind) -> Result<Vec<BaseElem>, OracleError> {
    match kind {
        FactorKind::SL(n) => Ok(sl_basis(n as usize)),
        FactorKind::Sp(n) => Ok(sp_basis(n as usize)),
        FactorKind::SO(n) => Ok(so_basis(n as usize)),
        FactorKind::Spin(7) => {
            let b = spin7_basis();
            let mats: Vec<IntMat> = b.iter().map(|e| e.mat.clone()).collect();
            let forms = invariant_symmetric_forms(&mats);
            if forms.len() != 1 || determinant(&forms[0]).is_zero() {
                return Err(OracleError::SelfCheck("spin(7): no unique nondegenerate invariant form".into()));
            }
            Ok(b)
        }
        other => Err(OracleError::Unsupported(other.to_string())),
    }
}

fn sym2_action(x: &IntMat) -> IntMat {
    let n = x.n;
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let pos = |a: usize, b: usize| idx.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
    let mut out = IntMat::zeros(idx.len());
    for (col, &(i, j)) in idx.iter().enumerate() {
        for k in 0..n {
            let a = x.get(k, i);
            if a != 0 {
                out.add_at(pos(k, j), col, a);
            }
            let b = x.get(k, j);
            if b != 0 {
                out.add_at(pos(i, k), col, b);
            }
        }
    }
    out
}

fn wedge2_action(x: &IntMat) -> IntMat {
    let n = x.n;
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let pos = |a: usize, b: usize| idx.iter().position(|&p| p == (a, b)).unwrap();
    let mut out = IntMat::zeros(idx.len());
    let mut put = |a: usize, b: usize, col: usize, v: i64| {
        if a < b {
            out.add_at(pos(a, b), col, v);
        } else if a > b {
            out.add_at(pos(b, a), col, -v);
        }
    };
    for (col, &(i, j)) in idx.iter().enumerate() {
        for k in 0..n {
            put(k, j, col, x.get(k, i));
            put(i, k, col, x.get(k, j));
        }
    }
    out
}

fn tag_action(kind: FactorKind, tag: IrrepTag, x: &IntMat) -> Result<IntMat, OracleError> {
    Ok(match tag {
        IrrepTag::Trivial => IntMat::zeros(1),
        IrrepTag::Standard | IrrepTag::Spin if kind != FactorKind::Spin(9) => x.clone(),
        IrrepTag::DualStandard => x.transpose().scale(-1),
        IrrepTag::Sym2 => sym2_action(x),
        IrrepTag::Wedge2 => wedge2_action(x),
        other => return Err(OracleError::Unsupported(format!("{kind} tag {other}"))),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixRep {
    pub d: usize,
    pub full_basis: Vec<IntMat>,
    /// Indices into `full_basis` of the Borel subalgebra basis.
    pub borel_indices: Vec<usize>,
    pub provenance: Vec<String>,
    /// Row offset of each summand.
    pub offsets: Vec<usize>,
}

impl MatrixRep {
    pub fn borel_basis(&self) -> impl Iterator<Item = &IntMat> {
        self.borel_indices.iter().map(move |&i| &self.full_basis[i])
    }

    pub fn borel_size(&self) -> usize {
        self.borel_indices.len()
    }
}

fn block_diag(blocks: &[IntMat]) -> IntMat {
    let n: usize = blocks.iter().map(|b| b.n).sum();
    let mut out = IntMat::zeros(n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.n {
            for j in 0..b.n {
                out.set(off + i, off + j, b.get(i, j));
            }
        }
        off += b.n;
    }
    out
}

/// Realises `Lie(K)` on `V = ⊕ summands`, straight from the embedding as
/// given (no canonicalisation).
pub fn build_rep(e: &ReductiveEmbedding) -> Result<MatrixRep, OracleError> {
    let bases: Vec<Vec<BaseElem>> = e.factors.iter().map(|&k| factor_basis(k)).collect::<Result<_, _>>()?;
    let dims: Vec<Vec<usize>> = e
        .summands
        .iter()
        .map(|s| {
            e.factors
                .iter()
                .zip(&s.tags)
                .map(|(k, &t)| k.tag_dim(t).map(|x| x as usize))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| OracleError::Unsupported("inadmissible tag".into()))?;
    let sizes: Vec<usize> = dims.iter().map(|v| v.iter().product()).collect();
    let mut offsets = Vec::new();
    let mut acc = 0;
    for s in &sizes {
        offsets.push(acc);
        acc += s;
    }
    let d = acc;
    let mut full_basis = Vec::new();
    let mut borel_indices = Vec::new();
    let mut provenance = Vec::new();
    for (f, basis) in bases.iter().enumerate() {
        for el in basis {
            let mut blocks = Vec::new();
            for (si, s) in e.summands.iter().enumerate() {
                let mut m = IntMat::identity(1);
                for (g, &tag) in s.tags.iter().enumerate() {
                    let piece = if g == f {
                        tag_action(e.factors[f], tag, &el.mat)?
                    } else {
                        IntMat::identity(dims[si][g])
                    };
                    m = m.kron(&piece);
                }
                blocks.push(m);
            }
            if el.borel {
                borel_indices.push(full_basis.len());
            }
            full_basis.push(block_diag(&blocks));
            provenance.push(format!("{}#{}:{}", e.factors[f], f + 1, el.label));
        }
    }
    for t in 0..e.torus_rank {
        let mut m = IntMat::zeros(d);
        for (si, s) in e.summands.iter().enumerate() {
            for k in 0..sizes[si] {
                m.set(offsets[si] + k, offsets[si] + k, s.character[t]);
            }
        }
        borel_indices.push(full_basis.len());
        full_basis.push(m);
        provenance.push(format!("T:{}", t + 1));
    }
    Ok(MatrixRep { d, full_basis, borel_indices, provenance, offsets })
}
