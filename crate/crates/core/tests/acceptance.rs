//! Acceptance criteria 1–8, one PASS/FAIL line each.

use std::collections::BTreeMap;
use std::time::Instant;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flagsphere::classifier::{
    decide, decide_tables_with, filter_chain, filter_dimension, levi_decide, levi_embedding, tensor_with_gl,
};
use flagsphere::grammar::parse_embedding;
use flagsphere::group::ReductiveEmbedding;
use flagsphere::modules::classify_module;
use flagsphere::oracle::{build_rep, oracle_decide, stabilizer_dim, Prime};
use flagsphere::partition::{
    class_leq, dominance_leq, hasse_on, natural_form, transpose, Composition, Partition,
};
use flagsphere::sweep::{enumerate_embeddings, run_sweep, SweepConfig};
use flagsphere::tables::TableSet;

type Outcome = Result<String, String>;

fn emb(s: &str) -> ReductiveEmbedding {
    parse_embedding(s).unwrap()
}

fn comp(v: &[u32]) -> Composition {
    Composition::new(v.to_vec()).unwrap()
}

fn ascending_partitions(d: u32) -> Vec<Composition> {
    Partition::all(d).iter().map(|p| p.as_composition().sorted_ascending()).collect()
}

fn sweep_embeddings(dmax: u32) -> Vec<ReductiveEmbedding> {
    let mut cfg = SweepConfig::builtin();
    cfg.dmax = dmax;
    enumerate_embeddings(&cfg).unwrap()
}

fn criterion_1() -> Outcome {
    let cfg = SweepConfig::builtin();
    let t = Instant::now();
    let sum = run_sweep(&cfg, TableSet::builtin()).map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    let detail = format!(
        "{} embeddings, {} cases, {} agree, {} escalations, {:.1}s",
        sum.embeddings, sum.cases, sum.agree, sum.escalations, secs
    );
    if sum.disagreements.is_empty() && sum.cases > 0 && secs <= 600.0 {
        Ok(detail)
    } else {
        Err(format!("{detail}\n{}", sum.report()))
    }
}

fn criterion_2() -> Outcome {
    let seeds = [11u64, 23, 47];
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 2..=6u32 {
        let rep = build_rep(&emb(&format!("SL({n}); T(0); [V]"))).unwrap();
        for m in 1..n {
            let expect = (n * (n + 1) / 2 - m * (n - m) - 1) as usize;
            for &s in &seeds {
                let got = stabilizer_dim(&rep, &comp(&[m, n - m]), s, Prime::P61).unwrap();
                checked += 1;
                if got != expect {
                    bad.push(format!("SL({n}) m={m} seed={s}: {got} != {expect}"));
                }
            }
        }
    }
    for n in 1..=5i64 {
        let rep = build_rep(&emb(&format!("Sp({}); T(0); [V]", 2 * n))).unwrap();
        for k in 0..=n {
            let mut cases = Vec::new();
            if k >= 1 && 2 * k <= n {
                cases.push((2 * k, (n - 2 * k).pow(2) + n));
            }
            if 2 * k + 1 <= n {
                cases.push((2 * k + 1, (n - 2 * k - 1).pow(2) + n));
            }
            for (w, expect) in cases {
                for &s in &seeds {
                    let a = comp(&[w as u32, (2 * n - w) as u32]);
                    let got = stabilizer_dim(&rep, &a, s, Prime::P61).unwrap() as i64;
                    checked += 1;
                    if got != expect {
                        bad.push(format!("Sp({}) dim W={w} seed={s}: {got} != {expect}", 2 * n));
                    }
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{checked} stabilizer dimensions exact"))
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_3() -> Outcome {
    let golden = include_str!("golden/hasse6.dot");
    let nodes: Vec<Partition> =
        [&[1, 5][..], &[2, 4], &[3, 3], &[1, 1, 4], &[1, 2, 3]].iter().map(|p| natural_form(&comp(p))).collect();
    let poset = hasse_on(6, nodes);
    let dot = poset.to_dot();
    let expected_edges = [
        ("(1,5)", "(2,4)"),
        ("(2,4)", "(1,1,4)"),
        ("(2,4)", "(3,3)"),
        ("(1,1,4)", "(1,2,3)"),
        ("(3,3)", "(1,2,3)"),
    ];
    let edges_ok = expected_edges.iter().all(|(p, q)| dot.contains(&format!("\"{p}\" -> \"{q}\";")))
        && dot.matches("->").count() == expected_edges.len();
    if dot == golden && edges_ok {
        Ok("5 nodes, 5 cover edges, golden DOT byte-identical".into())
    } else {
        Err(format!("got:\n{dot}"))
    }
}

struct Fixture {
    name: &'static str,
    tables: TableSet,
    /// `(d, summand count)` → the compositions the reduction covers.
    domain: fn(u32, usize) -> Vec<Composition>,
}

fn fixtures() -> Vec<Fixture> {
    let load = |text: &str| TableSet::from_toml(text).unwrap();
    vec![
        Fixture {
            name: "Gr2 simple",
            tables: load(include_str!("fixtures/gr2_simple.toml")),
            domain: |d, r| if d >= 4 && r == 1 { vec![comp(&[2, d - 2])] } else { vec![] },
        },
        Fixture {
            name: "Gr2 nonsimple",
            tables: load(include_str!("fixtures/gr2_nonsimple.toml")),
            domain: |d, r| if d >= 4 && r >= 2 { vec![comp(&[2, d - 2])] } else { vec![] },
        },
        Fixture {
            name: "Gr_k, k >= 3",
            tables: load(include_str!("fixtures/grassmannians.toml")),
            domain: |d, _| if d >= 6 { (3..=d / 2).map(|k| comp(&[k, d - k])).collect() } else { vec![] },
        },
        Fixture {
            name: "s >= 3",
            tables: load(include_str!("fixtures/non_grassmannians.toml")),
            domain: |d, _| ascending_partitions(d).into_iter().filter(|a| a.len() >= 3).collect(),
        },
        Fixture {
            name: "Fl(1,1;V)",
            tables: load(include_str!("fixtures/fl11.toml")),
            domain: |d, _| if d >= 3 { vec![comp(&[1, 1, d - 2])] } else { vec![] },
        },
    ]
}

fn criterion_4() -> Outcome {
    let cfg = SweepConfig::from_toml(include_str!("fixtures/domain_d10.toml")).unwrap();
    let embs = enumerate_embeddings(&cfg).unwrap();
    let mut per: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut bad = Vec::new();
    for fx in fixtures() {
        for e in &embs {
            let d = e.total_dimension() as u32;
            for a in (fx.domain)(d, e.summands.len()) {
                let got = decide(e, &a).map_err(|x| x.to_string())?.spherical;
                let want = decide_tables_with(&fx.tables, e, &a).map_err(|x| x.to_string())?.spherical;
                let entry = per.entry(fx.name).or_default();
                entry.0 += 1;
                entry.1 += want as usize;
                if got != want {
                    bad.push(format!("[{}] {e} a={a}: decide={got} fixture={want}", fx.name));
                }
            }
        }
    }
    let detail = format!(
        "{} embeddings (d <= 10); {}",
        embs.len(),
        per.iter().map(|(k, (n, s))| format!("{k}: {n} cells/{s} spherical")).join(", ")
    );
    if bad.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {} mismatches:\n{}", bad.len(), bad.iter().take(40).join("\n")))
    }
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut n = 0;
    let mut bad = Vec::new();
    for d in 1..=8 {
        for dc in ascending_partitions(d) {
            let e = levi_embedding(&dc);
            for a in ascending_partitions(d) {
                let lv = levi_decide(&dc, &a);
                let dv = decide(&e, &a).map_err(|x| x.to_string())?.spherical;
                n += 1;
                if lv != dv {
                    bad.push(format!("d={dc} a={a}: levi={lv} decide={dv}"));
                }
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    if bad.is_empty() && secs <= 60.0 {
        Ok(format!("{n} (d, a) pairs, {secs:.1}s"))
    } else {
        Err(format!("{secs:.1}s; {}", bad.join("; ")))
    }
}

fn criterion_6() -> Outcome {
    let mut n = 0;
    let mut bad = Vec::new();
    for e in sweep_embeddings(8) {
        let d = e.total_dimension() as u32;
        for m in 1..=3u32 {
            if m >= d {
                continue;
            }
            let mut parts = vec![1; m as usize];
            parts.push(d - m);
            let a = Composition::new(parts).unwrap();
            let flag = decide(&e, &a).map_err(|x| x.to_string())?.spherical;
            let module = classify_module(&tensor_with_gl(&e, m)).map_err(|x| x.to_string())?.spherical;
            n += 1;
            if flag != module {
                bad.push(format!("{e} m={m}: flag={flag} module={module}"));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{n} (e, m) pairs"))
    } else {
        Err(format!("{} mismatches: {}", bad.len(), bad.iter().take(20).join("; ")))
    }
}

fn random_partition(rng: &mut ChaCha8Rng, d: u32) -> Partition {
    let mut parts = Vec::new();
    let mut left = d;
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    natural_form(&Composition::new(parts).unwrap())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut fails = Vec::new();
    let mut counts = Vec::new();

    let mut n = 0;
    for _ in 0..10_000 {
        let d = rng.gen_range(1..=40);
        let p = random_partition(&mut rng, d);
        n += 1;
        if transpose(&transpose(&p)) != p {
            fails.push(format!("involution {p}"));
        }
    }
    counts.push(format!("involution {n}"));

    let mut n = 0;
    for _ in 0..10_000 {
        let d = rng.gen_range(1..=40);
        let (p, q) = (random_partition(&mut rng, d), random_partition(&mut rng, d));
        n += 1;
        if dominance_leq(&p, &q).unwrap() != dominance_leq(&transpose(&q), &transpose(&p)).unwrap() {
            fails.push(format!("anti-isomorphism {p} {q}"));
        }
    }
    counts.push(format!("anti-isomorphism {n}"));

    let embs = sweep_embeddings(8);
    let (mut perm_n, mut mono_n, mut filt_n) = (0, 0, 0);
    for e in &embs {
        let d = e.total_dimension() as u32;
        let parts = ascending_partitions(d);
        let verdicts: Vec<bool> = parts.iter().map(|a| decide(e, a).unwrap().spherical).collect();
        // Permutation invariance: every distinct rearrangement for d <= 6, three random ones above.
        for (a, &v) in parts.iter().zip(&verdicts) {
            let perms: Vec<Vec<u32>> = if d <= 6 {
                a.parts().iter().copied().permutations(a.len()).unique().collect()
            } else {
                (0..3)
                    .map(|_| {
                        let mut p = a.parts().to_vec();
                        for i in (1..p.len()).rev() {
                            p.swap(i, rng.gen_range(0..=i));
                        }
                        p
                    })
                    .collect()
            };
            for p in perms {
                perm_n += 1;
                if decide(e, &Composition::new(p.clone()).unwrap()).unwrap().spherical != v {
                    fails.push(format!("permutation {e} {a} vs {p:?}"));
                }
            }
        }
        // Monotonicity along the class order.
        for (i, j) in (0..parts.len()).cartesian_product(0..parts.len()) {
            if i != j && class_leq(&parts[i], &parts[j]).unwrap() {
                mono_n += 1;
                if verdicts[j] && !verdicts[i] {
                    fails.push(format!("monotonicity {e}: {} spherical but {} not", parts[j], parts[i]));
                }
            }
        }
        // Filter soundness on spherical verdicts, judged by the tables alone.
        for a in &parts {
            if a.len() < 2 || !decide_tables_with(TableSet::builtin(), e, a).unwrap().spherical {
                continue;
            }
            filt_n += 1;
            let chain = filter_chain(e, a).unwrap();
            if !filter_dimension(e, a) || chain != (true, true) {
                fails.push(format!("filter {e} {a}: dim={} chain={chain:?}", filter_dimension(e, a)));
            }
        }
    }
    counts.push(format!("permutation {perm_n}"));
    counts.push(format!("monotonicity {mono_n}"));
    counts.push(format!("filters {filt_n}"));
    if fails.is_empty() {
        Ok(counts.join(", "))
    } else {
        Err(format!("{} violations: {}", fails.len(), fails.iter().take(20).join("; ")))
    }
}

fn criterion_8() -> Outcome {
    let mut fails = Vec::new();
    let check = |fails: &mut Vec<String>, e: &str, a: &[u32], want: bool| {
        let v = decide(&emb(e), &comp(a)).unwrap();
        if v.spherical != want {
            fails.push(format!("{e} a={:?}: got {} via {}", a, v.spherical, v.route));
        }
    };
    check(&mut fails, "Spin(7); T(0); [spin]", &[2, 6], true);
    check(&mut fails, "Spin(7); T(0); [spin]", &[3, 5], false);
    check(&mut fails, "Sp(6); T(0); [V]", &[2, 2, 2], false);
    check(&mut fails, "SL(2)xSL(3); T(0); [V,V]", &[2, 4], false);
    let oracle = |e: &str, a: &[u32]| {
        let rep = build_rep(&emb(e)).unwrap();
        oracle_decide(&rep, &comp(a), 8, 1, Prime::P61).unwrap().verdict.spherical()
    };
    for (e, a, want) in [
        ("SL(2)xSL(3); T(0); [V,V]", &[2u32, 4][..], false),
        ("Spin(7); T(0); [spin]", &[2, 6], true),
        ("Spin(7); T(0); [spin]", &[3, 5], false),
        ("Sp(6); T(0); [V]", &[2, 2, 2], false),
    ] {
        if oracle(e, a) != want {
            fails.push(format!("oracle {e} a={a:?}"));
        }
    }
    if fails.is_empty() {
        Ok("Spin(7) (2,6)/(3,5), Sp(6) (2,2,2), SL(2)xSL(3) on F2⊗F3 (2,4): classifier and oracle".into())
    } else {
        Err(fails.join("; "))
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("classifier/oracle sweep agreement", criterion_1),
        ("stabilizer dimensions", criterion_2),
        ("Hasse diagram of nil classes, d = 6", criterion_3),
        ("Grassmannian and flag fixtures", criterion_4),
        ("Levi consistency", criterion_5),
        ("V ⊗ F^m reduction consistency", criterion_6),
        ("property suites", criterion_7),
        ("named spot checks", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {}: PASS — {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL — {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
