//! Text form of embeddings:
//!
//! ```text
//! embedding := factors ";" "T(" INT ")" ";" summand ("+" summand)*
//! factors   := "1" | factor ("x" factor)*
//! factor    := ("SL"|"Sp"|"SO"|"Spin"|"G2"|"E6") "(" INT ")"
//! summand   := "[" tag ("," tag)* "]" ["@" "(" INT ("," INT)* ")"]
//! tag       := "V" | "V*" | "S2V" | "L2V" | "spin" | "spin+" | "spin-" | "1"
//! ```
//!
//! With no simple factors a summand is written `[]` (or `[1]`).

use std::fmt;

use thiserror::Error;

use crate::group::{FactorKind, IrrepTag, ModelError, ModuleSummand, ReductiveEmbedding};
use crate::partition::{Composition, PartitionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: expected {}, found {found}", expected.join(" | "))]
    Syntax { line: usize, col: usize, expected: Vec<String>, found: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Composition(#[from] PartitionError),
    #[error("composition sums to {a} but the module has dimension {d}")]
    DimensionMismatch { a: u32, d: u64 },
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn line_col(&self) -> (usize, usize) {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }

    fn error(&mut self, expected: &[&str]) -> ParseError {
        self.skip_ws();
        let (line, col) = self.line_col();
        let rest = &self.src[self.pos..];
        let found = if rest.is_empty() {
            "end of input".to_string()
        } else {
            format!("`{}`", rest.chars().take(8).collect::<String>())
        };
        ParseError::Syntax {
            line,
            col,
            expected: expected.iter().map(|s| format!("`{s}`")).collect(),
            found,
        }
    }

    fn peek(&mut self, tok: &str) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(tok)
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.peek(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&[tok]))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let mut len = 0;
        if rest.starts_with('-') {
            len = 1;
        }
        len += rest[len..].chars().take_while(|c| c.is_ascii_digit()).count();
        match rest[..len].parse::<i64>() {
            Ok(v) => {
                self.pos += len;
                Ok(v)
            }
            Err(_) => Err(self.error(&["INT"])),
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }
}

fn parse_factor(lx: &mut Lexer) -> Result<FactorKind, ParseError> {
    // Longest names first so that "Spin" is not read as "Sp".
    const NAMES: [&str; 6] = ["Spin", "SL", "Sp", "SO", "G2", "E6"];
    let Some(name) = NAMES.iter().find(|n| lx.peek(n)) else {
        return Err(lx.error(&NAMES));
    };
    lx.eat(name);
    if matches!(*name, "G2" | "E6") {
        if lx.eat("(") {
            let v = lx.int()?;
            lx.expect(")")?;
            let ok = if *name == "G2" { v == 7 } else { v == 27 };
            if !ok {
                return Err(ModelError::FactorRange(format!("{name}({v})")).into());
            }
        }
        return Ok(if *name == "G2" { FactorKind::G2 } else { FactorKind::E6 });
    }
    lx.expect("(")?;
    let v = lx.int()?;
    lx.expect(")")?;
    if v < 1 {
        return Err(ModelError::FactorRange(format!("{name}({v})")).into());
    }
    let v = v as u32;
    let kind = match *name {
        "SL" => FactorKind::SL(v),
        "Sp" if v % 2 == 0 => FactorKind::Sp(v / 2),
        "Sp" => return Err(ModelError::FactorRange(format!("Sp({v})")).into()),
        "SO" => FactorKind::SO(v),
        _ => FactorKind::Spin(v),
    };
    kind.check()?;
    Ok(kind)
}

/// A single factor such as `Sp(4)` or `Spin(7)`.
pub fn parse_factor_str(text: &str) -> Result<FactorKind, ParseError> {
    let mut lx = Lexer { src: text, pos: 0 };
    let k = parse_factor(&mut lx)?;
    if !lx.at_end() {
        return Err(lx.error(&["end of input"]));
    }
    Ok(k)
}

fn resolve_tag(sym: &str, kind: FactorKind) -> Result<IrrepTag, ModelError> {
    use IrrepTag::*;
    let tag = match (sym, kind) {
        ("1", _) => Trivial,
        ("V", FactorKind::G2) => Fund7,
        ("V", FactorKind::E6) => Fund27,
        ("V", FactorKind::SL(_) | FactorKind::Sp(_) | FactorKind::SO(_)) => Standard,
        ("V*", FactorKind::SL(_)) => DualStandard,
        ("S2V", FactorKind::SL(_)) => Sym2,
        ("L2V", FactorKind::SL(_)) => Wedge2,
        ("spin", FactorKind::Spin(7 | 9)) => Spin,
        ("spin+", FactorKind::Spin(8 | 10)) => HalfSpinPlus,
        ("spin-", FactorKind::Spin(8 | 10)) => HalfSpinMinus,
        _ => return Err(ModelError::Tag { factor: kind.to_string(), tag: sym.to_string() }),
    };
    Ok(tag)
}

fn parse_tag_symbol(lx: &mut Lexer) -> Result<&'static str, ParseError> {
    const TAGS: [&str; 8] = ["spin+", "spin-", "spin", "S2V", "L2V", "V*", "V", "1"];
    for t in TAGS {
        if lx.eat(t) {
            return Ok(t);
        }
    }
    Err(lx.error(&TAGS))
}

pub fn parse_embedding(text: &str) -> Result<ReductiveEmbedding, ParseError> {
    let mut lx = Lexer { src: text, pos: 0 };
    let mut factors = Vec::new();
    if !lx.eat("1") {
        factors.push(parse_factor(&mut lx)?);
        while lx.eat("x") {
            factors.push(parse_factor(&mut lx)?);
        }
    }
    lx.expect(";")?;
    lx.expect("T")?;
    lx.expect("(")?;
    let c = lx.int()?;
    if c < 0 {
        return Err(lx.error(&["nonnegative INT"]));
    }
    let c = c as usize;
    lx.expect(")")?;
    lx.expect(";")?;
    let mut summands = Vec::new();
    loop {
        lx.expect("[")?;
        let mut syms = Vec::new();
        if !lx.eat("]") {
            syms.push(parse_tag_symbol(&mut lx)?);
            while lx.eat(",") {
                syms.push(parse_tag_symbol(&mut lx)?);
            }
            lx.expect("]")?;
        }
        if factors.is_empty() && syms == ["1"] {
            syms.clear();
        }
        if syms.len() != factors.len() {
            return Err(ModelError::TagCount {
                summand: summands.len(),
                got: syms.len(),
                expected: factors.len(),
            }
            .into());
        }
        let tags = syms
            .iter()
            .zip(&factors)
            .map(|(s, &k)| resolve_tag(s, k))
            .collect::<Result<Vec<_>, _>>()?;
        let mut character = Vec::new();
        if lx.eat("@") {
            lx.expect("(")?;
            character.push(lx.int()?);
            while lx.eat(",") {
                character.push(lx.int()?);
            }
            lx.expect(")")?;
        }
        summands.push(ModuleSummand { tags, character });
        if !lx.eat("+") {
            break;
        }
    }
    if !lx.at_end() {
        return Err(lx.error(&["+", "end of input"]));
    }
    Ok(ReductiveEmbedding::new(factors, c, summands)?)
}

/// Parses an embedding optionally followed by `a=(...)` (on a new line or after
/// a `|`), checking that dimensions agree.
pub fn parse_spec(text: &str) -> Result<(ReductiveEmbedding, Option<Composition>), ParseError> {
    let (emb, comp) = match text.find("a=") {
        Some(i) => (&text[..i], Some(&text[i..])),
        None => (text, None),
    };
    let emb = emb.trim_end().trim_end_matches('|');
    let e = parse_embedding(emb)?;
    let a = comp.map(|c| c.trim().parse::<Composition>()).transpose()?;
    if let Some(a) = &a {
        let d = e.total_dimension();
        if a.d() as u64 != d {
            return Err(ParseError::DimensionMismatch { a: a.d(), d });
        }
    }
    Ok((e, a))
}

impl fmt::Display for ReductiveEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            write!(f, "1")?;
        } else {
            let names: Vec<String> = self.factors.iter().map(|k| k.to_string()).collect();
            write!(f, "{}", names.join("x"))?;
        }
        write!(f, "; T({}); ", self.torus_rank)?;
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let tags: Vec<&str> = s.tags.iter().map(|t| t.symbol()).collect();
            write!(f, "[{}]", tags.join(","))?;
            if self.torus_rank > 0 {
                let ch: Vec<String> = s.character.iter().map(|x| x.to_string()).collect();
                write!(f, "@({})", ch.join(","))?;
            }
        }
        Ok(())
    }
}
