use proptest::prelude::*;

use flagsphere::partition::{
    class_leq, dominance_leq, flag_dimension, flag_orbit_partition, hasse, hasse_on, natural_form, nil_equivalent,
    orbit_dimension, transpose, Composition, Partition, PartitionError,
};

fn c(v: &[u32]) -> Composition {
    Composition::new(v.to_vec()).unwrap()
}

fn p(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

/// Transpose by drawing the Young diagram as a boolean grid and reading columns.
fn grid_transpose(parts: &[u32]) -> Vec<u32> {
    let w = parts[0] as usize;
    let grid: Vec<Vec<bool>> = parts.iter().map(|&r| (0..w).map(|j| j < r as usize).collect()).collect();
    (0..w).map(|j| grid.iter().filter(|row| row[j]).count() as u32).collect()
}

/// All partitions of d by naive recursion, for cross-checking enumeration.
fn naive_partitions(d: u32, max: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(d)).rev() {
        for mut rest in naive_partitions(d - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[test]
fn composition_invariants() {
    assert_eq!(Composition::new(vec![]), Err(PartitionError::Empty));
    assert!(Composition::new(vec![1, 0]).is_err());
    assert!(Partition::new(vec![1, 2]).is_err());
    assert_eq!(c(&[1, 2, 3]).d(), 6);
    assert_eq!("(1,2,3)".parse::<Composition>().unwrap(), c(&[1, 2, 3]));
    assert_eq!("a=(2,4)".parse::<Composition>().unwrap(), c(&[2, 4]));
    assert_eq!("2,4".parse::<Composition>().unwrap(), c(&[2, 4]));
    assert!("(2,-4)".parse::<Composition>().is_err());
    assert_eq!(c(&[2, 4]).to_string(), "(2,4)");
}

#[test]
fn natural_form_examples() {
    assert_eq!(natural_form(&c(&[1, 2, 3])), p(&[3, 2, 1]));
    assert_eq!(natural_form(&c(&[2, 4])), p(&[4, 2]));
    assert_eq!(natural_form(&c(&[6])), p(&[6]));
}

#[test]
fn transpose_examples() {
    assert_eq!(transpose(&p(&[5])), p(&[1; 5]));
    assert_eq!(transpose(&p(&[3, 2, 1])), p(&[3, 2, 1]));
    assert_eq!(transpose(&p(&[4, 2])), p(&grid_transpose(&[4, 2])));
    assert_eq!(transpose(&p(&[4, 2])), p(&[2, 2, 1, 1]));
}

#[test]
fn dominance_examples() {
    assert!(dominance_leq(&p(&[3, 3]), &p(&[4, 2])).unwrap());
    assert!(!dominance_leq(&p(&[4, 1, 1]), &p(&[3, 3])).unwrap());
    assert!(!dominance_leq(&p(&[3, 3]), &p(&[4, 1, 1])).unwrap());
    assert!(dominance_leq(&p(&[3, 2, 1]), &p(&[3, 2, 1])).unwrap());
    assert_eq!(dominance_leq(&p(&[3]), &p(&[2, 2])), Err(PartitionError::Mismatch(3, 4)));
}

#[test]
fn nil_equivalence_examples() {
    assert!(nil_equivalent(&c(&[1, 2, 3]), &c(&[3, 1, 2])).unwrap());
    assert!(!nil_equivalent(&c(&[2, 4]), &c(&[3, 3])).unwrap());
    assert!(nil_equivalent(&c(&[1, 5]), &c(&[5, 1])).unwrap());
    assert!(nil_equivalent(&c(&[1, 5]), &c(&[1, 4])).is_err());
}

#[test]
fn flag_orbit_partition_examples() {
    assert_eq!(flag_orbit_partition(&c(&[1, 5])), p(&grid_transpose(&[5, 1])));
    assert_eq!(flag_orbit_partition(&c(&[1, 5])), p(&[2, 1, 1, 1, 1]));
    assert_eq!(flag_orbit_partition(&c(&[1; 7])), p(&[7]));
    assert_eq!(flag_orbit_partition(&c(&[7])), p(&[1; 7]));
}

#[test]
fn class_order_examples() {
    assert!(class_leq(&c(&[1, 5]), &c(&[2, 4])).unwrap());
    assert!(!class_leq(&c(&[1, 1, 4]), &c(&[3, 3])).unwrap());
    assert!(!class_leq(&c(&[3, 3]), &c(&[1, 1, 4])).unwrap());
    assert!(class_leq(&c(&[2, 4]), &c(&[1, 2, 3])).unwrap());
    assert!(class_leq(&c(&[2]), &c(&[1, 2])).is_err());
}

#[test]
fn dimension_examples() {
    assert_eq!(flag_dimension(&c(&[2, 4])), 8);
    assert_eq!(flag_dimension(&c(&[1, 1, 4])), 9);
    assert_eq!(flag_dimension(&c(&[9])), 0);
    assert_eq!(orbit_dimension(&p(&[1; 6])), 0);
    assert_eq!(orbit_dimension(&flag_orbit_partition(&c(&[2, 4]))), 16);
    assert_eq!(orbit_dimension(&p(&[6])), 30);
}

#[test]
fn hasse_small() {
    let h1 = hasse(1);
    assert_eq!(h1.nodes, vec![p(&[1])]);
    assert!(h1.cover_edges.is_empty());
    let h4 = hasse(4);
    let chain = [p(&[1, 1, 1, 1]), p(&[2, 1, 1]), p(&[2, 2]), p(&[3, 1]), p(&[4])];
    let expected: Vec<(Partition, Partition)> = chain.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    let mut got = h4.cover_edges.clone();
    got.sort();
    let mut exp = expected.clone();
    exp.sort();
    assert_eq!(got, exp);
    assert_eq!(h4.nodes.len(), 5);
}

#[test]
fn partition_enumeration_matches_naive() {
    for d in 1..=12 {
        let mut got: Vec<Vec<u32>> = Partition::all(d).iter().map(|p| p.parts().to_vec()).collect();
        let mut want = naive_partitions(d, d);
        got.sort();
        want.sort();
        assert_eq!(got, want, "d={d}");
    }
    assert_eq!(Composition::all(6).len(), 32);
}

fn reachable(edges: &[(usize, usize)], n: usize) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for i in 0..n {
        r[i][i] = true;
    }
    for &(a, b) in edges {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

#[test]
fn hasse_is_the_transitive_reduction() {
    for d in 1..=9 {
        let h = hasse(d);
        let idx = |q: &Partition| h.nodes.iter().position(|x| x == q).unwrap();
        let edges: Vec<(usize, usize)> = h.cover_edges.iter().map(|(a, b)| (idx(a), idx(b))).collect();
        let n = h.nodes.len();
        let reach = reachable(&edges, n);
        for i in 0..n {
            for j in 0..n {
                assert_eq!(reach[i][j], dominance_leq(&h.nodes[i], &h.nodes[j]).unwrap(), "d={d}");
            }
        }
        for k in 0..edges.len() {
            let mut fewer = edges.clone();
            fewer.remove(k);
            assert_ne!(reachable(&fewer, n), reach, "edge {k} redundant at d={d}");
        }
    }
}

#[test]
fn hasse_dot_is_stable() {
    let nodes = [&[1, 5][..], &[2, 4], &[3, 3], &[1, 1, 4], &[1, 2, 3]].iter().map(|x| natural_form(&c(x))).collect();
    let a = hasse_on(6, nodes);
    assert_eq!(a.to_dot(), include_str!("golden/hasse6.dot"));
}

#[test]
fn orbit_and_flag_dimensions_agree_exhaustively() {
    for d in 1..=12 {
        for a in Composition::all(d) {
            assert_eq!(orbit_dimension(&flag_orbit_partition(&a)), 2 * flag_dimension(&a), "{a}");
        }
    }
}

fn partition_strategy() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..12, 1..8).prop_map(|v| natural_form(&Composition::new(v).unwrap()))
}

proptest! {
    #[test]
    fn transpose_is_an_involution(q in partition_strategy()) {
        prop_assert_eq!(transpose(&transpose(&q)), q.clone());
        prop_assert_eq!(transpose(&q).parts().to_vec(), grid_transpose(q.parts()));
    }

    #[test]
    fn natural_form_ignores_order(v in prop::collection::vec(1u32..9, 1..7), seed in any::<u64>()) {
        let mut w = v.clone();
        let n = w.len();
        w.rotate_left((seed as usize) % n);
        w.reverse();
        let (a, b) = (Composition::new(v).unwrap(), Composition::new(w).unwrap());
        prop_assert_eq!(natural_form(&a), natural_form(&b));
        prop_assert!(nil_equivalent(&a, &b).unwrap());
    }

    #[test]
    fn class_order_is_a_partial_order(x in prop::collection::vec(1u32..5, 1..5), y in prop::collection::vec(1u32..5, 1..5)) {
        let (a, b) = (Composition::new(x).unwrap(), Composition::new(y).unwrap());
        prop_assert!(class_leq(&a, &a).unwrap());
        if a.d() == b.d() && class_leq(&a, &b).unwrap() && class_leq(&b, &a).unwrap() {
            prop_assert!(nil_equivalent(&a, &b).unwrap());
        }
    }
}
