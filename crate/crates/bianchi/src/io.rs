//! The versioned presentation file format and the CAS export.
//!
//! A `.bpres` file is line-based UTF-8:
//!
//! ```text
//! bianchi-presentation v1
//! d -19
//! height 1609/5000
//! gen A 1 0 1 0 0 0 1 0
//! gen B 0 0 1 0 -1 0 0 0
//! rel B^2
//! rel ( B A )^3
//! ```
//!
//! The header line is mandatory and versioned. `d` comes next; `height`
//! is optional. Each `gen` line carries a name and the eight integer
//! coordinates of the matrix entries `a, b, c, d` as `x y` pairs in the
//! `{1, omega}` basis. Each `rel` line is a whitespace-separated word:
//! tokens are `NAME`, `NAME^k`, `(`, `)`, or `)^k`, with parenthesized
//! groups raised to integer powers. Lines starting with `#` are comments.
//!
//! The CAS export mirrors the same presentation as a finitely-presented
//! group constructor (`Group< gens | relators >`) that computer algebra
//! systems accept.

use crate::algebra::{PresGenerator, Presentation, Word};
use crate::enumeration::{EnumError, GroupElement};
use crate::ring::{QuadInt, Rational, RingError, RingParams};
use num::BigInt;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

pub const FORMAT_HEADER: &str = "bianchi-presentation v1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {0}: {1}")]
    Parse(usize, String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("line {0}: matrix is not in SL2 ({1})")]
    BadMatrix(usize, EnumError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse(line, msg.into())
}

/// Serializes a presentation in the `.bpres` format. Deterministic:
/// identical presentations produce identical bytes.
pub fn write_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    let _ = writeln!(out, "d {}", p.d);
    if let Some(h) = &p.height {
        let _ = writeln!(out, "height {}", h);
    }
    for g in &p.generators {
        let m = &g.matrix;
        let _ = writeln!(
            out,
            "gen {} {} {} {} {} {} {} {} {}",
            g.name,
            m.a().x(),
            m.a().y(),
            m.b().x(),
            m.b().y(),
            m.c().x(),
            m.c().y(),
            m.d().x(),
            m.d().y()
        );
    }
    for rel in &p.relators {
        out.push_str("rel");
        for (id, e) in rel.letters() {
            let name = &p.generators[*id].name;
            if *e == 1 {
                let _ = write!(out, " {name}");
            } else {
                let _ = write!(out, " {name}^{e}");
            }
        }
        out.push('\n');
    }
    out
}

pub fn save_presentation(p: &Presentation, path: &Path) -> Result<(), IoError> {
    std::fs::write(path, write_presentation(p))?;
    Ok(())
}

pub fn load_presentation(path: &Path) -> Result<Presentation, IoError> {
    parse_presentation(&std::fs::read_to_string(path)?)
}

pub fn parse_presentation(text: &str) -> Result<Presentation, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (no, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty presentation file"))?;
    if header != FORMAT_HEADER {
        return Err(parse_err(
            no,
            format!("expected header '{FORMAT_HEADER}', found '{header}'"),
        ));
    }

    let mut d: Option<i64> = None;
    let mut height: Option<Rational> = None;
    let mut generators: Vec<PresGenerator> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut relators: Vec<Word> = Vec::new();

    for (no, line) in lines {
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().unwrap();
        match keyword {
            "d" => {
                let value = tokens
                    .next()
                    .ok_or_else(|| parse_err(no, "missing discriminant"))?;
                d = Some(
                    value
                        .parse::<i64>()
                        .map_err(|e| parse_err(no, format!("bad discriminant: {e}")))?,
                );
            }
            "height" => {
                let value = tokens
                    .next()
                    .ok_or_else(|| parse_err(no, "missing height"))?;
                height =
                    Some(parse_rational(value).map_err(|msg| parse_err(no, msg))?);
            }
            "gen" => {
                let params = ring_params_of(d, no)?;
                let name = tokens
                    .next()
                    .ok_or_else(|| parse_err(no, "missing generator name"))?
                    .to_string();
                if ids.contains_key(&name) {
                    return Err(parse_err(no, format!("duplicate generator '{name}'")));
                }
                let mut coords = Vec::with_capacity(8);
                for tok in tokens {
                    coords.push(
                        BigInt::from_str(tok)
                            .map_err(|e| parse_err(no, format!("bad coordinate: {e}")))?,
                    );
                }
                if coords.len() != 8 {
                    return Err(parse_err(
                        no,
                        format!("expected 8 matrix coordinates, found {}", coords.len()),
                    ));
                }
                let mut take = coords.into_iter();
                let mut quad = || {
                    let x = take.next().unwrap();
                    let y = take.next().unwrap();
                    QuadInt::new(params, x, y)
                };
                let matrix = GroupElement::new(quad(), quad(), quad(), quad())
                    .map_err(|e| IoError::BadMatrix(no, e))?;
                ids.insert(name.clone(), generators.len());
                generators.push(PresGenerator { name, matrix });
            }
            "rel" => {
                let tokens: Vec<&str> = tokens.collect();
                let word = parse_relator(&tokens, &ids).map_err(|msg| parse_err(no, msg))?;
                relators.push(word);
            }
            other => {
                return Err(parse_err(no, format!("unknown keyword '{other}'")));
            }
        }
    }

    let d = d.ok_or_else(|| parse_err(0, "missing 'd' line"))?;
    RingParams::for_verification(d)?;
    Ok(Presentation {
        d,
        height,
        generators,
        relators,
    })
}

fn ring_params_of(d: Option<i64>, line: usize) -> Result<RingParams, IoError> {
    let d = d.ok_or_else(|| parse_err(line, "'gen' before 'd'"))?;
    Ok(RingParams::for_verification(d)?)
}

/// Accepts `p/q`, plain integers, and decimal literals (converted
/// exactly, e.g. `0.3218` to `3218/10000`).
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    if let Some((p, q)) = text.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| format!("bad numerator: {e}"))?;
        let q = BigInt::from_str(q.trim()).map_err(|e| format!("bad denominator: {e}"))?;
        if q == BigInt::from(0) {
            return Err("zero denominator".to_string());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let digits = frac.len() as u32;
        let int = BigInt::from_str(if int.is_empty() { "0" } else { int })
            .map_err(|e| format!("bad decimal: {e}"))?;
        let frac_val = BigInt::from_str(frac).map_err(|e| format!("bad decimal: {e}"))?;
        let scale = BigInt::from(10u32).pow(digits);
        let negative = text.trim_start().starts_with('-');
        let numer = if negative {
            &int * &scale - frac_val
        } else {
            &int * &scale + frac_val
        };
        return Ok(Rational::new(numer, scale));
    }
    let v = BigInt::from_str(text).map_err(|e| format!("bad rational: {e}"))?;
    Ok(Rational::from(v))
}

/// Parses a relator token stream: `NAME`, `NAME^k`, `(`, `)`, `)^k`.
fn parse_relator(tokens: &[&str], ids: &HashMap<String, usize>) -> Result<Word, String> {
    // stack of letter accumulators; a `(` pushes a frame, `)^k` pops one
    let mut stack: Vec<Vec<(usize, i64)>> = vec![Vec::new()];
    for tok in tokens {
        if *tok == "(" {
            stack.push(Vec::new());
            continue;
        }
        if let Some(rest) = tok.strip_prefix(')') {
            let exp = if rest.is_empty() {
                1i64
            } else {
                rest.strip_prefix('^')
                    .ok_or_else(|| format!("malformed token '{tok}'"))?
                    .parse::<i64>()
                    .map_err(|e| format!("bad exponent in '{tok}': {e}"))?
            };
            let group = stack
                .pop()
                .ok_or_else(|| "unbalanced ')'".to_string())?;
            if stack.is_empty() {
                return Err("unbalanced ')'".to_string());
            }
            let word = Word::from_letters(group);
            let block = if exp < 0 { word.inverse() } else { word };
            let top = stack.last_mut().unwrap();
            for _ in 0..exp.unsigned_abs() {
                top.extend_from_slice(block.letters());
            }
            continue;
        }
        let (name, exp) = match tok.split_once('^') {
            Some((name, exp)) => (
                name,
                exp.parse::<i64>()
                    .map_err(|e| format!("bad exponent in '{tok}': {e}"))?,
            ),
            None => (*tok, 1),
        };
        let id = *ids
            .get(name)
            .ok_or_else(|| format!("unknown generator '{name}'"))?;
        stack.last_mut().unwrap().push((id, exp));
    }
    if stack.len() != 1 {
        return Err("unbalanced '('".to_string());
    }
    Ok(Word::from_letters(stack.pop().unwrap()))
}

/// The presentation as a finitely-presented-group constructor, the format
/// handed to a computer algebra system for simplification.
pub fn cas_export(p: &Presentation) -> String {
    let names: Vec<&str> = p.generators.iter().map(|g| g.name.as_str()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "// PSL2(O_d) presentation, d = {}", p.d);
    if let Some(h) = &p.height {
        let _ = writeln!(out, "// horoball height h = {h}");
    }
    let _ = writeln!(out, "G<{}> := Group<", names.join(", "));
    let _ = writeln!(out, "  {} |", names.join(", "));
    let rels: Vec<String> = p
        .relators
        .iter()
        .map(|w| {
            let parts: Vec<String> = w
                .letters()
                .iter()
                .map(|(id, e)| {
                    if *e == 1 {
                        names[*id].to_string()
                    } else {
                        format!("{}^{}", names[*id], e)
                    }
                })
                .collect();
            if parts.is_empty() {
                "Id(G)".to_string()
            } else {
                format!("  {}", parts.join(" * "))
            }
        })
        .collect();
    let _ = writeln!(out, "{}", rels.join(",\n"));
    let _ = writeln!(out, ">;");
    out
}

pub fn save_cas(p: &Presentation, path: &Path) -> Result<(), IoError> {
    std::fs::write(path, cas_export(p))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{abelianize, relator_words, AbelianInvariants};
    use crate::enumeration::{find_generators, find_relations};
    use crate::ring::rational;

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), rational(1, 2));
        assert_eq!(parse_rational("0.3218").unwrap(), rational(3218, 10000));
        assert_eq!(parse_rational("3").unwrap(), rational(3, 1));
        assert_eq!(parse_rational("-0.25").unwrap(), rational(-1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn round_trip_pipeline_presentation() {
        let p = RingParams::new(-2).unwrap();
        let gens = find_generators(p, &rational(1, 2));
        let raw = find_relations(&gens);
        let words = relator_words(&raw, &gens);
        let pres = Presentation::from_run(&gens, words);

        let text = write_presentation(&pres);
        let parsed = parse_presentation(&text).unwrap();
        assert_eq!(parsed, pres);
        // byte determinism
        assert_eq!(write_presentation(&parsed), text);
    }

    #[test]
    fn parse_with_groups_and_comments() {
        let text = "\
bianchi-presentation v1
# a toy file
d -2
gen A 1 0 1 0 0 0 1 0
gen B 0 0 1 0 -1 0 0 0
rel B^2
rel ( A B )^3
rel ( B ( A )^-1 )^2
";
        let pres = parse_presentation(text).unwrap();
        assert_eq!(pres.d, -2);
        assert_eq!(pres.generators.len(), 2);
        assert_eq!(pres.relators.len(), 3);
        // ( A B )^3 expands to A B A B A B
        assert_eq!(pres.relators[1].total_length(), 6);
        assert!(pres.verify().unwrap()[..2].iter().all(|ok| *ok));
        // abelianization of <A, B | B^2, (AB)^3, (B A^-1)^2> as a sanity check
        let _ = abelianize(&pres);
    }

    #[test]
    fn parse_failures() {
        assert!(matches!(
            parse_presentation("not a header\n"),
            Err(IoError::Parse(1, _))
        ));
        let missing_d = "bianchi-presentation v1\ngen A 1 0 1 0 0 0 1 0\n";
        assert!(parse_presentation(missing_d).is_err());
        let bad_matrix = "bianchi-presentation v1\nd -2\ngen A 1 0 1 0 0 0 2 0\n";
        assert!(matches!(
            parse_presentation(bad_matrix),
            Err(IoError::BadMatrix(3, _))
        ));
        let unknown_gen = "bianchi-presentation v1\nd -2\nrel X\n";
        assert!(parse_presentation(unknown_gen).is_err());
        let bad_d = "bianchi-presentation v1\nd -5\n";
        assert!(matches!(
            parse_presentation(bad_d),
            Err(IoError::Ring(RingError::UnsupportedD(-5)))
        ));
    }

    #[test]
    fn cas_export_shape() {
        let text = "\
bianchi-presentation v1
d -2
gen A 1 0 1 0 0 0 1 0
gen B 0 0 1 0 -1 0 0 0
rel B^2
rel ( A B )^3
";
        let pres = parse_presentation(text).unwrap();
        let cas = cas_export(&pres);
        assert!(cas.contains("G<A, B> := Group<"));
        assert!(cas.contains("B^2"));
        assert!(cas.contains("A * B * A * B * A * B"));
        assert!(cas.trim_end().ends_with(">;"));
    }

    #[test]
    fn abelianization_from_file_round_trip() {
        let p = RingParams::new(-7).unwrap();
        let gens = find_generators(p, &rational(1, 2));
        let raw = find_relations(&gens);
        let words = relator_words(&raw, &gens);
        let pres = Presentation::from_run(&gens, words);
        let parsed = parse_presentation(&write_presentation(&pres)).unwrap();
        assert_eq!(abelianize(&parsed), AbelianInvariants::new(vec![2], 1));
    }
}
