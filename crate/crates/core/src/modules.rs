//! Spherical modules: simple and strictly indecomposable blocks, and the
//! pooled linear-independence test across blocks.

use itertools::Itertools;
use serde::Serialize;

use crate::expr::Env;
use crate::group::{canonicalize, char_rank, ReductiveEmbedding, SummandBlock};
use crate::tables::{evaluate_row, format_chars, structural_matches, Padded, Row, TableError, TableSet};

/// One way a block matches a table row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockMatch {
    pub row: String,
    pub multiset: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockClass {
    pub summand_indices: Vec<usize>,
    /// Distinct admissible matches; empty when no row matches.
    pub matches: Vec<BlockMatch>,
    pub trace: Vec<String>,
}

impl BlockClass {
    pub fn row(&self) -> Option<&str> {
        self.matches.first().map(|m| m.row.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleVerdict {
    pub spherical: bool,
    pub canonical: String,
    pub block_rows: Vec<String>,
    pub condition_trace: Vec<String>,
    pub combined_multiset: Vec<Vec<i64>>,
}

fn classify_with(
    rows: &[Row],
    e: &ReductiveEmbedding,
    b: &SummandBlock,
) -> Result<BlockClass, TableError> {
    let target = Padded::new(e, &b.factor_indices, &b.summand_indices);
    let mut matches: Vec<BlockMatch> = Vec::new();
    let mut trace = Vec::new();
    for row in rows {
        for binding in structural_matches(row, &target) {
            let env = Env { ints: binding.params.clone(), chars: binding.chars.clone() };
            let ev = evaluate_row(row, &env)?;
            trace.push(format!("block {:?}: {}", b.summand_indices, format_chars(&binding.chars)));
            trace.extend(ev.trace);
            if ev.guard {
                let m = BlockMatch { row: row.id.clone(), multiset: ev.forms };
                if !matches.contains(&m) {
                    matches.push(m);
                }
            }
        }
    }
    Ok(BlockClass { summand_indices: b.summand_indices.clone(), matches, trace })
}

/// Simple-module rows for a one-summand block of a canonical embedding.
pub fn classify_simple_block(
    tables: &TableSet,
    e: &ReductiveEmbedding,
    b: &SummandBlock,
) -> Result<BlockClass, TableError> {
    classify_with(&tables.simple, e, b)
}

/// Two-summand rows for a block of a canonical embedding; blocks with three or
/// more summands never match.
pub fn classify_indecomposable_block(
    tables: &TableSet,
    e: &ReductiveEmbedding,
    b: &SummandBlock,
) -> Result<BlockClass, TableError> {
    if b.summand_indices.len() != 2 {
        return Ok(BlockClass {
            summand_indices: b.summand_indices.clone(),
            matches: vec![],
            trace: vec![format!(
                "block {:?}: {} summands; a strictly indecomposable nonsimple spherical block has exactly 2",
                b.summand_indices,
                b.summand_indices.len()
            )],
        });
    }
    classify_with(&tables.pair, e, b)
}

pub fn classify_module(e: &ReductiveEmbedding) -> Result<ModuleVerdict, TableError> {
    classify_module_with(TableSet::builtin(), e)
}

pub fn classify_module_with(tables: &TableSet, e: &ReductiveEmbedding) -> Result<ModuleVerdict, TableError> {
    let c = canonicalize(e);
    let mut trace = vec![format!("canonical {c}")];
    let mut classes = Vec::new();
    for b in c.blocks() {
        let cl = if b.summand_indices.len() == 1 {
            classify_simple_block(tables, &c, &b)?
        } else {
            classify_indecomposable_block(tables, &c, &b)?
        };
        trace.extend(cl.trace.iter().cloned());
        if cl.matches.is_empty() {
            trace.push(format!("block {:?}: no canonical match", cl.summand_indices));
        }
        classes.push(cl);
    }
    let block_rows: Vec<String> = classes
        .iter()
        .map(|cl| {
            let rows: Vec<&str> = cl.matches.iter().map(|m| m.row.as_str()).unique().collect();
            if rows.is_empty() {
                "unmatched".to_string()
            } else {
                rows.join("|")
            }
        })
        .collect();
    if classes.iter().any(|cl| cl.matches.is_empty()) {
        return Ok(ModuleVerdict {
            spherical: false,
            canonical: c.to_string(),
            block_rows,
            condition_trace: trace,
            combined_multiset: vec![],
        });
    }
    let mut first: Option<Vec<Vec<i64>>> = None;
    for combo in classes.iter().map(|cl| cl.matches.iter()).multi_cartesian_product() {
        let pooled: Vec<Vec<i64>> = combo.iter().flat_map(|m| m.multiset.iter().cloned()).collect();
        let rank = char_rank(&pooled);
        let ok = rank == pooled.len();
        trace.push(format!(
            "pooled I via rows [{}] = {{{}}}: rank {} of {} -> {}",
            combo.iter().map(|m| m.row.as_str()).join(","),
            pooled.iter().map(|v| format!("({})", v.iter().join(","))).join(", "),
            rank,
            pooled.len(),
            if ok { "independent" } else { "dependent" }
        ));
        if ok {
            return Ok(ModuleVerdict {
                spherical: true,
                canonical: c.to_string(),
                block_rows,
                condition_trace: trace,
                combined_multiset: pooled,
            });
        }
        first.get_or_insert(pooled);
    }
    Ok(ModuleVerdict {
        spherical: false,
        canonical: c.to_string(),
        block_rows,
        condition_trace: trace,
        combined_multiset: first.unwrap_or_default(),
    })
}
