use flagsphere::grammar::parse_embedding;
use flagsphere::group::{canonicalize, ReductiveEmbedding};
use flagsphere::modules::{classify_indecomposable_block, classify_module, classify_simple_block};
use flagsphere::oracle::{build_rep, derive_seed, MatrixRep, Prime};
use flagsphere::sweep::{enumerate_embeddings, SweepConfig};
use flagsphere::tables::TableSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn emb(s: &str) -> ReductiveEmbedding {
    parse_embedding(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn simple(s: &str) -> (Option<String>, Vec<Vec<i64>>) {
    let c = canonicalize(&emb(s));
    let b = &c.blocks()[0];
    let cl = classify_simple_block(TableSet::builtin(), &c, b).unwrap();
    (cl.row().map(str::to_string), cl.matches.first().map(|m| m.multiset.clone()).unwrap_or_default())
}

fn pair(s: &str) -> (Option<String>, Vec<Vec<i64>>) {
    let c = canonicalize(&emb(s));
    let b = &c.blocks()[0];
    let cl = classify_indecomposable_block(TableSet::builtin(), &c, b).unwrap();
    (cl.row().map(str::to_string), cl.matches.first().map(|m| m.multiset.clone()).unwrap_or_default())
}

#[test]
fn simple_block_rows() {
    assert_eq!(simple("Sp(6); T(1); [V]@(3)"), (Some("2.3".into()), vec![]));
    assert_eq!(simple("SO(5); T(1); [V]@(2)"), (Some("2.2".into()), vec![vec![2]]));
    assert_eq!(simple("1; T(1); []@(1)"), (Some("2.1".into()), vec![vec![1]]));
}

#[test]
fn pair_block_rows() {
    let (row, i) = pair("SL(3); T(2); [V]@(1,0) + [V]@(0,1)");
    assert_eq!(row.as_deref(), Some("3.1"));
    assert!(i == vec![vec![1, -1]] || i == vec![vec![-1, 1]], "{i:?}");
    let (row, mut i) = pair("Sp(4); T(2); [V]@(1,0) + [V]@(0,1)");
    assert_eq!(row.as_deref(), Some("3.11"));
    i.sort();
    assert_eq!(i, vec![vec![0, 1], vec![1, 0]]);
    let (row, i) = pair("SL(2); T(2); [V]@(1,0) + [V]@(0,1)");
    assert_eq!(row.as_deref(), Some("3.1"));
    assert_eq!(i.len(), 2);
}

#[test]
fn module_examples() {
    assert!(classify_module(&emb("SL(2)xSL(2); T(0); [V,1] + [1,V]")).unwrap().spherical);
    assert!(!classify_module(&emb("Sp(4); T(1); [V]@(1) + [V]@(2)")).unwrap().spherical);
    assert!(!classify_module(&emb("SL(3); T(1); [V]@(1) + [V]@(1)")).unwrap().spherical);
    assert!(classify_module(&emb("SL(3); T(1); [V]@(1) + [V]@(2)")).unwrap().spherical);
    let three = classify_module(&emb("SL(3); T(3); [V]@(1,0,0) + [V]@(0,1,0) + [V]@(0,0,1)")).unwrap();
    assert!(!three.spherical);
}

/// Borel of K has an open orbit on V: the velocities `ξ·v` at a random `v` span V.
fn module_oracle(rep: &MatrixRep, seed: u64) -> bool {
    let f = Prime::P61.field();
    let d = rep.d;
    for t in 0..4 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t));
        let v: Vec<u64> = (0..d).map(|_| rng.gen_range(0..f.p())).collect();
        let mut m: Vec<u64> = Vec::new();
        let mut rows = 0;
        for x in rep.borel_basis() {
            rows += 1;
            for i in 0..d {
                let mut acc = 0;
                for j in 0..d {
                    acc = f.add(acc, f.mul(f.from_i64(x.data[i * d + j]), v[j]));
                }
                m.push(acc);
            }
        }
        if f.rank(&mut m, rows, d) == d {
            return true;
        }
    }
    false
}

#[test]
fn module_verdicts_agree_with_open_orbit_oracle() {
    let cfg = SweepConfig::builtin();
    let mut checked = 0;
    for (k, e) in enumerate_embeddings(&cfg).unwrap().iter().enumerate() {
        let Ok(rep) = build_rep(e) else { continue };
        let v = classify_module(e).unwrap();
        let o = module_oracle(&rep, k as u64);
        assert_eq!(v.spherical, o, "{e}: tables {} oracle {}", v.spherical, o);
        checked += 1;
    }
    assert!(checked > 1000, "{checked}");
}

#[test]
fn spherical_modules_satisfy_borel_dimension_bound() {
    for e in enumerate_embeddings(&SweepConfig::builtin()).unwrap() {
        if classify_module(&e).unwrap().spherical {
            let (dim, rk) = e.group_dim_rank();
            assert!((dim + rk) / 2 >= e.total_dimension(), "{e}");
        }
    }
}

#[test]
fn unused_torus_coordinate_never_breaks_sphericity() {
    for e in enumerate_embeddings(&SweepConfig::builtin()).unwrap() {
        let base = classify_module(&e).unwrap().spherical;
        let zero = vec![0; e.summands.len()];
        assert_eq!(classify_module(&e.with_extra_torus(&zero)).unwrap().spherical, base, "{e}");
    }
}
