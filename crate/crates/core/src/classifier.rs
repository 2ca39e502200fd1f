//! Sphericity of flag varieties `Fl_a(V)` under `K ⊂ GL(V)`.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::expr::Env;
use crate::group::{canonicalize, char_rank, FactorKind, IrrepTag, ModuleSummand, ReductiveEmbedding};
use crate::modules::classify_module_with;
use crate::partition::{flag_dimension, natural_form, Composition};
use crate::tables::{evaluate_row, format_chars, match_tuple, structural_matches, Padded, TableError, TableSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("composition sums to {a} but the module has dimension {d}")]
    DimensionMismatch { a: u32, d: u64 },
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Route {
    TrivialFlag,
    ProjectiveRule,
    Table1Row(String),
    NoTableMatch,
    Filter(String),
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::TrivialFlag => write!(f, "trivial-flag"),
            Route::ProjectiveRule => write!(f, "projective-rule"),
            Route::Table1Row(id) => write!(f, "table1-row({})", id.trim_start_matches("1.")),
            Route::NoTableMatch => write!(f, "no-table-match"),
            Route::Filter(name) => write!(f, "filter({name})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub spherical: bool,
    pub route: Route,
    pub trace: Vec<String>,
    pub normalized_composition: Composition,
}

fn check_dims(e: &ReductiveEmbedding, a: &Composition) -> Result<(), ClassifyError> {
    let d = e.total_dimension();
    if a.d() as u64 != d {
        return Err(ClassifyError::DimensionMismatch { a: a.d(), d });
    }
    Ok(())
}

/// Full decision with the dimension inequality as a fast path.
pub fn decide(e: &ReductiveEmbedding, a: &Composition) -> Result<Verdict, ClassifyError> {
    decide_with(TableSet::builtin(), e, a)
}

pub fn decide_with(tables: &TableSet, e: &ReductiveEmbedding, a: &Composition) -> Result<Verdict, ClassifyError> {
    check_dims(e, a)?;
    let sorted = a.sorted_ascending();
    if sorted.len() >= 2 && !filter_dimension(e, &sorted) {
        let (dim, rk) = e.group_dim_rank();
        return Ok(Verdict {
            spherical: false,
            route: Route::Filter("dimension".into()),
            trace: vec![format!(
                "dim K + rk K = {} + {} < 2 dim Fl = {}",
                dim,
                rk,
                2 * flag_dimension(&sorted)
            )],
            normalized_composition: sorted,
        });
    }
    decide_tables_with(tables, e, a)
}

/// Decision from the tables alone (no necessary-condition shortcuts).
pub fn decide_tables(e: &ReductiveEmbedding, a: &Composition) -> Result<Verdict, ClassifyError> {
    decide_tables_with(TableSet::builtin(), e, a)
}

pub fn decide_tables_with(
    tables: &TableSet,
    e: &ReductiveEmbedding,
    a: &Composition,
) -> Result<Verdict, ClassifyError> {
    check_dims(e, a)?;
    let sorted = a.sorted_ascending();
    let s = sorted.len();
    let d = sorted.d();
    if s == 1 {
        return Ok(Verdict {
            spherical: true,
            route: Route::TrivialFlag,
            trace: vec!["s = 1: Fl_a(V) is a point".into()],
            normalized_composition: sorted,
        });
    }
    if sorted.parts() == [1, d - 1] {
        let mut v = decide_projective_with(tables, e)?;
        v.trace.insert(0, format!("a = (1,{}) : P(V) rule", d - 1));
        v.normalized_composition = sorted;
        return Ok(v);
    }
    let c = canonicalize(e);
    let target = Padded::whole(&c);
    let prefix = &sorted.parts()[..s - 1];
    let mut trace = vec![format!("canonical {c}"), format!("sorted a = {sorted}")];
    let mut first_matched: Option<String> = None;
    for row in &tables.flag {
        for binding in structural_matches(row, &target) {
            let mut params = binding.params.clone();
            if !match_tuple(&row.a, prefix, &mut params) {
                continue;
            }
            params.insert("s".into(), s as i64);
            params.insert("d".into(), d as i64);
            let env = Env { ints: params, chars: binding.chars.clone() };
            trace.push(format!("row {} identified: {}", row.id, format_chars(&binding.chars)));
            let ev = evaluate_row(row, &env)?;
            trace.extend(ev.trace);
            if !ev.guard {
                continue;
            }
            first_matched.get_or_insert_with(|| row.id.clone());
            let rank = char_rank(&ev.forms);
            let ok = rank == ev.forms.len();
            trace.push(format!(
                "row {} C-condition {{{}}}: rank {} of {} -> {}",
                row.id,
                ev.forms.iter().map(|v| format!("({})", v.iter().join(","))).join(", "),
                rank,
                ev.forms.len(),
                if ok { "holds" } else { "fails" }
            ));
            if ok {
                return Ok(Verdict {
                    spherical: true,
                    route: Route::Table1Row(row.id.clone()),
                    trace,
                    normalized_composition: sorted,
                });
            }
        }
    }
    let route = match first_matched {
        Some(id) => Route::Table1Row(id),
        None => {
            trace.push("no row matches the canonical form".into());
            Route::NoTableMatch
        }
    };
    Ok(Verdict { spherical: false, route, trace, normalized_composition: sorted })
}

/// `P(V)` is K-spherical iff V is a spherical `(K × F^×)`-module.
pub fn decide_projective(e: &ReductiveEmbedding) -> Result<Verdict, ClassifyError> {
    decide_projective_with(TableSet::builtin(), e)
}

pub fn decide_projective_with(tables: &TableSet, e: &ReductiveEmbedding) -> Result<Verdict, ClassifyError> {
    let d = e.total_dimension() as u32;
    let aug = e.with_extra_torus(&vec![1; e.summands.len()]);
    let mv = classify_module_with(tables, &aug)?;
    let mut trace = vec![format!("module V under K x F^x: {aug}")];
    trace.push(format!("block rows: {}", mv.block_rows.join(" ")));
    trace.extend(mv.condition_trace);
    Ok(Verdict {
        spherical: mv.spherical,
        route: Route::ProjectiveRule,
        trace,
        normalized_composition: if d >= 2 {
            Composition::new(vec![1, d - 1]).unwrap()
        } else {
            Composition::new(vec![d]).unwrap()
        },
    })
}

pub fn filter_dimension(e: &ReductiveEmbedding, a: &Composition) -> bool {
    let (dim, rk) = e.group_dim_rank();
    dim + rk >= 2 * flag_dimension(a)
}

/// `(projective_ok, gr2_ok)`; either being false certifies non-sphericity.
pub fn filter_chain(e: &ReductiveEmbedding, a: &Composition) -> Result<(bool, bool), ClassifyError> {
    check_dims(e, a)?;
    let projective_ok = decide_projective(e)?.spherical;
    let d = a.d();
    let nat = natural_form(a);
    let gr2_ok = if d >= 4 && nat.parts() != [d - 1, 1] && nat.parts() != [d] {
        decide_tables(e, &Composition::new(vec![2, d - 2]).unwrap())?.spherical
    } else {
        true
    };
    Ok((projective_ok, gr2_ok))
}

/// Sphericity of `Fl_a(V)` under the Levi subgroup `GL(d_1) × … × GL(d_r)`.
pub fn levi_decide(dcomp: &Composition, a: &Composition) -> bool {
    levi_decide_with(TableSet::builtin(), dcomp, a)
}

pub fn levi_decide_with(tables: &TableSet, dcomp: &Composition, a: &Composition) -> bool {
    let ds = dcomp.sorted_ascending();
    let as_ = a.sorted_ascending();
    if ds.len() == 1 || as_.len() == 1 {
        return true;
    }
    tables.levi.iter().any(|row| {
        let mut params = Default::default();
        match_tuple(&row.d, ds.parts(), &mut params)
            && match_tuple(&row.a, as_.parts(), &mut params)
            && row.guard.eval_bool(&Env { ints: params, chars: vec![] }).unwrap_or(false)
    })
}

/// `GL(V_1) × … × GL(V_r)` as SL factors plus a rank-r torus with the
/// coordinate characters.
pub fn levi_embedding(dcomp: &Composition) -> ReductiveEmbedding {
    let r = dcomp.len();
    let big: Vec<usize> = (0..r).filter(|&i| dcomp.parts()[i] >= 2).collect();
    let factors = big.iter().map(|&i| FactorKind::SL(dcomp.parts()[i])).collect();
    let summands = (0..r)
        .map(|i| ModuleSummand {
            tags: big
                .iter()
                .map(|&j| if j == i { IrrepTag::Standard } else { IrrepTag::Trivial })
                .collect(),
            character: (0..r).map(|t| (t == i) as i64).collect(),
        })
        .collect();
    ReductiveEmbedding { factors, torus_rank: r, summands }
}

/// `V ⊗ F^m` under `K × GL(m)`: an `SL(m)` factor (m ≥ 2) tensoring every
/// summand, plus a fresh torus coordinate acting by 1 everywhere.
pub fn tensor_with_gl(e: &ReductiveEmbedding, m: u32) -> ReductiveEmbedding {
    let mut out = e.with_extra_torus(&vec![1; e.summands.len()]);
    if m >= 2 {
        out.factors.push(FactorKind::SL(m));
        for s in &mut out.summands {
            s.tags.push(IrrepTag::Standard);
        }
    }
    out
}
