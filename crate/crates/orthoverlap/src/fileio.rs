//! Plain-text polygon files.
//!
//! ```text
//! # comment lines and blank lines are ignored
//! ortho 4
//! 0 0
//! 5 0
//! 5 3
//! 0 3
//! ```
//!
//! The header is `ortho <n>` or `general <n>`, followed by `n` vertex lines.
//! Orthogonal polygons take integer `x y`; general polygons take rational
//! coordinates written `num/den` (a bare integer means denominator 1).
//! Writers emit reduced fractions and omit `/1`, so write → parse → write is
//! byte-stable.

use crate::error::{Error, Result};
use crate::poly::{GeneralPolygon, OrthoPolygon, Point, RPoint};
use num::bigint::BigInt;
use num::{BigRational, One, Signed};
use std::io::{BufRead, Write};
use std::str::FromStr;

pub enum AnyPolygon {
    Ortho(OrthoPolygon),
    General(GeneralPolygon),
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Yield (1-based line number, trimmed content) for meaningful lines.
fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_rational(tok: &str, line: usize) -> Result<BigRational> {
    let (num, den) = match tok.split_once('/') {
        Some((n, d)) => (n, d),
        None => (tok, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| parse_err(line, format!("bad number `{tok}`")))?;
    let d = BigInt::from_str(den).map_err(|_| parse_err(line, format!("bad number `{tok}`")))?;
    if d.is_negative() || d == BigInt::from(0) {
        return Err(parse_err(line, format!("bad denominator in `{tok}`")));
    }
    Ok(BigRational::new(n, d))
}

pub fn parse_polygon(text: &str) -> Result<AnyPolygon> {
    let mut lines = meaningful_lines(text);
    let (hline, header) = lines.next().ok_or(Error::EmptyInput)?;
    let mut parts = header.split_whitespace();
    let kind = parts.next().unwrap_or("");
    let count: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(hline, "header must be `ortho <n>` or `general <n>`"))?;
    if parts.next().is_some() {
        return Err(parse_err(hline, "trailing tokens after header"));
    }
    match kind {
        "ortho" => {
            let mut verts = Vec::with_capacity(count);
            for _ in 0..count {
                let (ln, l) = lines
                    .next()
                    .ok_or_else(|| parse_err(hline, "fewer vertices than header declares"))?;
                let mut t = l.split_whitespace();
                let x: i64 = t
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| parse_err(ln, "expected integer x"))?;
                let y: i64 = t
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| parse_err(ln, "expected integer y"))?;
                if t.next().is_some() {
                    return Err(parse_err(ln, "trailing tokens after vertex"));
                }
                verts.push(Point::new(x, y));
            }
            if let Some((ln, _)) = lines.next() {
                return Err(parse_err(ln, "more vertices than header declares"));
            }
            Ok(AnyPolygon::Ortho(OrthoPolygon::new(verts)?))
        }
        "general" => {
            let mut verts: Vec<RPoint> = Vec::with_capacity(count);
            for _ in 0..count {
                let (ln, l) = lines
                    .next()
                    .ok_or_else(|| parse_err(hline, "fewer vertices than header declares"))?;
                let mut t = l.split_whitespace();
                let x = parse_rational(t.next().ok_or_else(|| parse_err(ln, "expected x"))?, ln)?;
                let y = parse_rational(t.next().ok_or_else(|| parse_err(ln, "expected y"))?, ln)?;
                if t.next().is_some() {
                    return Err(parse_err(ln, "trailing tokens after vertex"));
                }
                verts.push((x, y));
            }
            if let Some((ln, _)) = lines.next() {
                return Err(parse_err(ln, "more vertices than header declares"));
            }
            Ok(AnyPolygon::General(GeneralPolygon::new(verts)?))
        }
        other => Err(parse_err(hline, format!("unknown polygon kind `{other}`"))),
    }
}

pub fn parse_ortho(text: &str) -> Result<OrthoPolygon> {
    match parse_polygon(text)? {
        AnyPolygon::Ortho(p) => Ok(p),
        AnyPolygon::General(_) => Err(parse_err(1, "expected an `ortho` polygon")),
    }
}

pub fn read_polygon(mut r: impl BufRead) -> Result<AnyPolygon> {
    let mut s = String::new();
    r.read_to_string(&mut s)
        .map_err(|e| parse_err(0, format!("read failed: {e}")))?;
    parse_polygon(&s)
}

fn fmt_rational(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn write_ortho(w: &mut impl Write, p: &OrthoPolygon) -> std::io::Result<()> {
    writeln!(w, "ortho {}", p.len())?;
    for v in p.vertices() {
        writeln!(w, "{} {}", v.x, v.y)?;
    }
    Ok(())
}

pub fn write_general(w: &mut impl Write, p: &GeneralPolygon) -> std::io::Result<()> {
    writeln!(w, "general {}", p.vertices().len())?;
    for (x, y) in p.vertices() {
        writeln!(w, "{} {}", fmt_rational(x), fmt_rational(y))?;
    }
    Ok(())
}

pub fn polygon_to_string(p: &AnyPolygon) -> String {
    let mut buf = Vec::new();
    match p {
        AnyPolygon::Ortho(q) => write_ortho(&mut buf, q).unwrap(),
        AnyPolygon::General(q) => write_general(&mut buf, q).unwrap(),
    }
    String::from_utf8(buf).unwrap()
}
