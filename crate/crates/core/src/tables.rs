//! Table data: loading, pattern parsing and matching against canonical
//! embeddings.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use itertools::Itertools;
use serde::Deserialize;
use thiserror::Error;

use crate::expr::{Env, Expr, ExprError};
use crate::group::{flip_tag, FactorKind, IrrepTag, ReductiveEmbedding};

pub const BUILTIN_TABLES: &str = include_str!("../data/tables.toml");
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("table file: {0}")]
    Toml(String),
    #[error("table file: unsupported schema version {0}")]
    Version(u32),
    #[error("row {row}: {msg}")]
    Row { row: String, msg: String },
    #[error("row {row}: {source}")]
    Expr { row: String, source: ExprError },
    #[error("row {row}: no condition case applies to parameters {params} (ranges are declared exhaustive)")]
    FallThrough { row: String, params: String },
    #[error("cannot read {0}")]
    Io(String),
}

#[derive(Debug, Deserialize)]
struct RawCase {
    when: Option<String>,
    independent: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct RawRow {
    id: String,
    group: Option<String>,
    module: Option<String>,
    a: Option<String>,
    d: Option<String>,
    guard: Option<String>,
    #[serde(default)]
    conditions: Vec<RawCase>,
    #[serde(default)]
    exhaustive: bool,
    #[serde(default)]
    audit: bool,
}

#[derive(Debug, Deserialize)]
struct RawFile {
    version: u32,
    #[serde(default)]
    simple: Vec<RawRow>,
    #[serde(default)]
    pair: Vec<RawRow>,
    #[serde(default)]
    flag: Vec<RawRow>,
    #[serde(default)]
    levi: Vec<RawRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    SL,
    Sp,
    SO,
    Spin,
    G2,
    E6,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Param {
    Lit(u32),
    Var(String),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatFactor {
    pub family: Family,
    pub param: Param,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TupleElem {
    Lit(u32),
    Var(String),
}

/// `None` stands for `(*)`.
pub type TuplePattern = Option<Vec<TupleElem>>;

#[derive(Debug, Clone)]
pub struct Case {
    pub when: Option<Expr>,
    pub independent: Vec<Expr>,
    pub source: String,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub id: String,
    pub factors: Vec<PatFactor>,
    pub summands: Vec<Vec<IrrepTag>>,
    pub a: TuplePattern,
    pub d: TuplePattern,
    pub guard: Expr,
    pub guard_src: String,
    pub cases: Vec<Case>,
    pub exhaustive: bool,
    pub audit: bool,
}

#[derive(Debug, Clone)]
pub struct TableSet {
    pub raw: String,
    pub simple: Vec<Row>,
    pub pair: Vec<Row>,
    pub flag: Vec<Row>,
    pub levi: Vec<Row>,
}

fn row_err(row: &str, msg: impl Into<String>) -> TableError {
    TableError::Row { row: row.to_string(), msg: msg.into() }
}

fn parse_group(row: &str, src: &str) -> Result<Vec<PatFactor>, TableError> {
    src.split(" x ")
        .map(|f| {
            let f = f.trim();
            let (name, arg) = match f.find('(') {
                Some(i) => (&f[..i], Some(f[i + 1..].trim_end_matches(')').trim())),
                None => (f, None),
            };
            let family = match name {
                "SL" => Family::SL,
                "Sp" => Family::Sp,
                "SO" => Family::SO,
                "Spin" => Family::Spin,
                "G2" => Family::G2,
                "E6" => Family::E6,
                _ => return Err(row_err(row, format!("unknown factor `{f}`"))),
            };
            let param = match arg {
                None => Param::None,
                Some(a) => {
                    if let Ok(v) = a.parse::<u32>() {
                        if family == Family::Sp {
                            if v % 2 != 0 {
                                return Err(row_err(row, format!("odd symplectic `{f}`")));
                            }
                            Param::Lit(v / 2)
                        } else {
                            Param::Lit(v)
                        }
                    } else if family == Family::Sp {
                        match a.strip_prefix('2') {
                            Some(v) if !v.is_empty() => Param::Var(v.to_string()),
                            _ => return Err(row_err(row, format!("write symplectic as Sp(2n): `{f}`"))),
                        }
                    } else {
                        Param::Var(a.to_string())
                    }
                }
            };
            Ok(PatFactor { family, param })
        })
        .collect()
}

fn pattern_tag(row: &str, sym: &str, f: &PatFactor) -> Result<IrrepTag, TableError> {
    use IrrepTag::*;
    Ok(match (sym, f.family) {
        ("1", _) => Trivial,
        ("V", Family::G2) => Fund7,
        ("V", Family::E6) => Fund27,
        ("V", Family::SL | Family::Sp | Family::SO) => Standard,
        ("V*", Family::SL) => DualStandard,
        ("S2V", Family::SL) => Sym2,
        ("L2V", Family::SL) => Wedge2,
        ("spin", Family::Spin) => Spin,
        ("spin+", Family::Spin) => HalfSpinPlus,
        ("spin-", Family::Spin) => HalfSpinMinus,
        _ => return Err(row_err(row, format!("tag `{sym}` not admissible"))),
    })
}

/// Splits `[..] + [..]` at the `+` signs outside brackets (`spin+` is a tag).
fn split_summands(src: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in src.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&src[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&src[start..]);
    out
}

fn parse_module(row: &str, src: &str, factors: &[PatFactor]) -> Result<Vec<Vec<IrrepTag>>, TableError> {
    split_summands(src)
        .into_iter()
        .map(|s| {
            let inner = s
                .trim()
                .strip_prefix('[')
                .and_then(|x| x.strip_suffix(']'))
                .ok_or_else(|| row_err(row, format!("bad summand `{s}`")))?;
            let syms: Vec<&str> = inner.split(',').map(|x| x.trim()).collect();
            if syms.len() != factors.len() {
                return Err(row_err(row, format!("summand `{s}` needs {} tags", factors.len())));
            }
            syms.iter().zip(factors).map(|(t, f)| pattern_tag(row, t, f)).collect()
        })
        .collect()
}

fn parse_tuple(row: &str, src: &str) -> Result<TuplePattern, TableError> {
    let inner = src
        .trim()
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| row_err(row, format!("bad tuple `{src}`")))?;
    if inner.trim() == "*" {
        return Ok(None);
    }
    Ok(Some(
        inner
            .split(',')
            .map(|x| {
                let x = x.trim();
                match x.parse::<u32>() {
                    Ok(v) => TupleElem::Lit(v),
                    Err(_) => TupleElem::Var(x.to_string()),
                }
            })
            .collect(),
    ))
}

fn parse_expr(row: &str, src: &str) -> Result<Expr, TableError> {
    Expr::parse(src).map_err(|source| TableError::Expr { row: row.to_string(), source })
}

fn cook(raw: RawRow, kind: &str) -> Result<Row, TableError> {
    let id = raw.id.clone();
    let (factors, summands) = if kind == "levi" {
        (vec![], vec![])
    } else {
        let g = raw.group.as_deref().ok_or_else(|| row_err(&id, "missing group"))?;
        let m = raw.module.as_deref().ok_or_else(|| row_err(&id, "missing module"))?;
        let factors = parse_group(&id, g)?;
        let summands = parse_module(&id, m, &factors)?;
        (factors, summands)
    };
    let a = match (&raw.a, kind) {
        (Some(a), "flag" | "levi") => parse_tuple(&id, a)?,
        (None, "flag" | "levi") => return Err(row_err(&id, "missing composition pattern `a`")),
        _ => None,
    };
    let d = match (&raw.d, kind) {
        (Some(d), "levi") => parse_tuple(&id, d)?,
        (None, "levi") => return Err(row_err(&id, "missing pattern `d`")),
        _ => None,
    };
    let guard_src = raw.guard.clone().unwrap_or_else(|| "true".to_string());
    let guard = parse_expr(&id, &guard_src)?;
    let cases = raw
        .conditions
        .iter()
        .map(|c| {
            let when = c.when.as_deref().map(|w| parse_expr(&id, w)).transpose()?;
            let independent =
                c.independent.iter().map(|f| parse_expr(&id, f)).collect::<Result<Vec<_>, _>>()?;
            let source = match &c.when {
                Some(w) => format!("[{}] when {}", c.independent.join(", "), w),
                None => format!("[{}]", c.independent.join(", ")),
            };
            Ok(Case { when, independent, source })
        })
        .collect::<Result<Vec<_>, TableError>>()?;
    Ok(Row {
        id,
        factors,
        summands,
        a,
        d,
        guard,
        guard_src,
        cases,
        exhaustive: raw.exhaustive,
        audit: raw.audit,
    })
}

impl TableSet {
    pub fn from_toml(text: &str) -> Result<TableSet, TableError> {
        let raw: RawFile = toml::from_str(text).map_err(|e| TableError::Toml(e.to_string()))?;
        if raw.version != SCHEMA_VERSION {
            return Err(TableError::Version(raw.version));
        }
        let cook_all = |rows: Vec<RawRow>, kind: &str| -> Result<Vec<Row>, TableError> {
            rows.into_iter().map(|r| cook(r, kind)).collect()
        };
        Ok(TableSet {
            raw: text.to_string(),
            simple: cook_all(raw.simple, "simple")?,
            pair: cook_all(raw.pair, "pair")?,
            flag: cook_all(raw.flag, "flag")?,
            levi: cook_all(raw.levi, "levi")?,
        })
    }

    pub fn from_path(path: &Path) -> Result<TableSet, TableError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| TableError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn builtin() -> &'static TableSet {
        static CELL: OnceLock<TableSet> = OnceLock::new();
        CELL.get_or_init(|| TableSet::from_toml(BUILTIN_TABLES).expect("built-in tables parse"))
    }
}

// ---------------------------------------------------------------------------
// Matching

/// Embedding data in matching form: trivial summands acquire a virtual SL(1)
/// factor acting by `V`, so that `F^1` pieces match `SL(m)` patterns with
/// `m = 1`.
#[derive(Debug, Clone)]
pub struct Padded {
    pub kinds: Vec<(Family, u32)>,
    pub flippable: Vec<bool>,
    pub tags: Vec<Vec<IrrepTag>>,
    pub chars: Vec<Vec<i64>>,
}

fn family_of(k: FactorKind) -> (Family, u32) {
    match k {
        FactorKind::SL(n) => (Family::SL, n),
        FactorKind::Sp(n) => (Family::Sp, n),
        FactorKind::SO(n) => (Family::SO, n),
        FactorKind::Spin(n) => (Family::Spin, n),
        FactorKind::G2 => (Family::G2, 0),
        FactorKind::E6 => (Family::E6, 0),
    }
}

impl Padded {
    /// Builds the matching view of a canonical embedding restricted to the
    /// given summands (all factors acting on them must be included in
    /// `factor_indices`).
    pub fn new(e: &ReductiveEmbedding, factor_indices: &[usize], summand_indices: &[usize]) -> Padded {
        let mut kinds: Vec<(Family, u32)> = factor_indices.iter().map(|&j| family_of(e.factors[j])).collect();
        let mut flippable: Vec<bool> =
            factor_indices.iter().map(|&j| crate::group::flippable(e, j)).collect();
        let mut tags: Vec<Vec<IrrepTag>> = summand_indices
            .iter()
            .map(|&i| {
                factor_indices
                    .iter()
                    .map(|&j| {
                        let t = e.summands[i].tags[j];
                        if e.factors[j].acts_by(t) {
                            t
                        } else {
                            IrrepTag::Trivial
                        }
                    })
                    .collect()
            })
            .collect();
        let trivial: Vec<usize> = (0..tags.len())
            .filter(|&i| tags[i].iter().all(|&t| t == IrrepTag::Trivial))
            .collect();
        for &i in &trivial {
            kinds.push((Family::SL, 1));
            flippable.push(false);
            for (r, row) in tags.iter_mut().enumerate() {
                row.push(if r == i { IrrepTag::Standard } else { IrrepTag::Trivial });
            }
        }
        let chars = summand_indices.iter().map(|&i| e.summands[i].character.clone()).collect();
        Padded { kinds, flippable, tags, chars }
    }

    pub fn whole(e: &ReductiveEmbedding) -> Padded {
        let f: Vec<usize> = (0..e.factors.len()).collect();
        let s: Vec<usize> = (0..e.summands.len()).collect();
        Padded::new(e, &f, &s)
    }
}

fn flip(kind: (Family, u32), tag: IrrepTag) -> IrrepTag {
    let fk = match kind.0 {
        Family::SL => FactorKind::SL(kind.1),
        Family::Spin => FactorKind::Spin(kind.1),
        _ => return tag,
    };
    flip_tag(fk, tag)
}

/// A successful structural identification of a row pattern with a target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub params: BTreeMap<String, i64>,
    /// Characters in pattern summand order.
    pub chars: Vec<Vec<i64>>,
    /// Target summand index for each pattern summand.
    pub summand_map: Vec<usize>,
}

fn bind(params: &mut BTreeMap<String, i64>, name: &str, v: i64) -> bool {
    match params.get(name) {
        Some(&old) => old == v,
        None => {
            params.insert(name.to_string(), v);
            true
        }
    }
}

/// All structural identifications of the row's pattern with `target`
/// (deduplicated on parameters and character order).
pub fn structural_matches(row: &Row, target: &Padded) -> Vec<Binding> {
    let nf = row.factors.len();
    let ns = row.summands.len();
    if target.kinds.len() != nf || target.tags.len() != ns {
        return vec![];
    }
    let flip_idx: Vec<usize> = (0..nf).filter(|&j| target.flippable[j]).collect();
    let mut out: Vec<Binding> = Vec::new();
    for fperm in (0..nf).permutations(nf) {
        // fperm[p] = target factor for pattern factor p
        let mut params = BTreeMap::new();
        let ok = row.factors.iter().zip(&fperm).all(|(pf, &tf)| {
            let (fam, v) = target.kinds[tf];
            if fam != pf.family {
                return false;
            }
            match &pf.param {
                Param::Lit(l) => *l == v,
                Param::Var(name) => bind(&mut params, name, v as i64),
                Param::None => true,
            }
        });
        if !ok {
            continue;
        }
        for mask in 0u32..(1 << flip_idx.len()) {
            let flipped = |tf: usize| -> bool {
                flip_idx.iter().position(|&j| j == tf).is_some_and(|b| mask >> b & 1 == 1)
            };
            for sperm in (0..ns).permutations(ns) {
                let tags_ok = (0..ns).all(|ps| {
                    (0..nf).all(|pf| {
                        let tf = fperm[pf];
                        let mut t = target.tags[sperm[ps]][tf];
                        if flipped(tf) {
                            t = flip(target.kinds[tf], t);
                        }
                        t == row.summands[ps][pf]
                    })
                });
                if !tags_ok {
                    continue;
                }
                let b = Binding {
                    params: params.clone(),
                    chars: sperm.iter().map(|&i| target.chars[i].clone()).collect(),
                    summand_map: sperm.clone(),
                };
                if !out.iter().any(|o| o.params == b.params && o.chars == b.chars) {
                    out.push(b);
                }
            }
        }
    }
    out
}

/// Matches a tuple pattern, binding variables into `params`.
pub fn match_tuple(p: &TuplePattern, t: &[u32], params: &mut BTreeMap<String, i64>) -> bool {
    let Some(elems) = p else {
        return true;
    };
    if elems.len() != t.len() {
        return false;
    }
    elems.iter().zip(t).all(|(e, &v)| match e {
        TupleElem::Lit(l) => *l == v,
        TupleElem::Var(name) => bind(params, name, v as i64),
    })
}

/// Result of evaluating a matched row's guard and conditions.
#[derive(Debug, Clone)]
pub struct RowEval {
    pub guard: bool,
    /// Linear forms required to be independent (already evaluated).
    pub forms: Vec<Vec<i64>>,
    pub trace: Vec<String>,
}

pub fn format_params(params: &BTreeMap<String, i64>) -> String {
    params.iter().map(|(k, v)| format!("{k}={v}")).join(",")
}

pub fn format_chars(chars: &[Vec<i64>]) -> String {
    chars
        .iter()
        .enumerate()
        .map(|(i, c)| format!("c{}=({})", i + 1, c.iter().join(",")))
        .join(" ")
}

/// Evaluates guard and applicable conditions of `row` under `env`.
pub fn evaluate_row(row: &Row, env: &Env) -> Result<RowEval, TableError> {
    let wrap = |source: ExprError| TableError::Expr { row: row.id.clone(), source };
    let mut trace = Vec::new();
    let params = format_params(&env.ints);
    let guard = row.guard.eval_bool(env).map_err(wrap)?;
    trace.push(format!("row {} guard `{}` [{}] -> {}", row.id, row.guard_src, params, guard));
    if !guard {
        return Ok(RowEval { guard, forms: vec![], trace });
    }
    let mut forms = Vec::new();
    let mut applied = 0;
    for case in &row.cases {
        let applies = match &case.when {
            Some(w) => w.eval_bool(env).map_err(wrap)?,
            None => true,
        };
        if applies {
            applied += 1;
            for f in &case.independent {
                forms.push(f.eval_vec(env).map_err(wrap)?);
            }
            trace.push(format!("row {} condition {} applies", row.id, case.source));
        }
    }
    if applied == 0 && !row.cases.is_empty() {
        if row.exhaustive {
            return Err(TableError::FallThrough { row: row.id.clone(), params });
        }
        if row.audit {
            trace.push(format!(
            "row {} AUDIT: no listed condition applies at [{}]; no condition imposed",
            row.id, params
            ));
        }
    }
    Ok(RowEval { guard, forms, trace })
}
