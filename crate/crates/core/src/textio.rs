//! Deterministic text formats for complexes, involutions, maps, and surgery
//! presentations. Lines are independent; `#` starts a comment; blank lines
//! are ignored. Parse failures carry the offending line number.
//!
//! Grammar (one object per file):
//!
//! ```text
//! complex <name>
//! gen <id> <grading>                  # grading: integer or p/q
//! d <src> -> <tgt> : <poly>           # poly: terms joined by +
//! iota <src> -> <tgt> : <poly>        # involution entries, if present
//!
//! complex <name>
//! kgen <id> <gr_w> <gr_z>             # bigraded generators
//! kd <src> -> <tgt> : <uv-poly>       # terms like U^2 V, 1, V^3
//!
//! map <name> degree <d>
//! m <src> -> <tgt> : <poly>
//!
//! presentation <name>
//! comp <label> framing=<k> companion=<0|1>
//! lk <i> <j> <v>                      # 0-based indices, symmetric closure
//! ```
//!
//! A `d`/`kd`/`m`/`iota` line `x -> y : p` states that y appears in the
//! image of x with coefficient p.

use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::Ratio;

use crate::complex::{Grading, GradedComplex, Generator};
use crate::error::ParseError;
use crate::gluing::{BasisMode, GeneratorWord, GluingMatrix, Letter};
use crate::iota::IotaComplex;
use crate::kirby::{Component, SurgeryPresentation};
use crate::knotlike::{KnotGenerator, KnotLikeComplex};
use crate::umap::UMap;
use crate::upoly::{Mat, UPoly, UVPoly};

fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

fn parse_grading(tok: &str, line: usize) -> Result<Grading, ParseError> {
    Ratio::<i64>::from_str(tok)
        .map_err(|_| ParseError::new(line, format!("bad grading `{tok}` (expected integer or p/q)")))
}

fn parse_upoly(s: &str, line: usize) -> Result<UPoly, ParseError> {
    let mut p = UPoly::zero();
    for term in s.split('+') {
        let t = term.trim();
        if t.is_empty() {
            return Err(ParseError::new(line, "empty term in polynomial"));
        }
        let mono = if t == "1" {
            UPoly::one()
        } else if t == "U" {
            UPoly::monomial(1)
        } else if let Some(k) = t.strip_prefix("U^") {
            let k: u32 = k
                .parse()
                .map_err(|_| ParseError::new(line, format!("bad exponent in `{t}`")))?;
            UPoly::monomial(k)
        } else {
            return Err(ParseError::new(line, format!("bad term `{t}` (expected 1, U, or U^k)")));
        };
        p = p.add(&mono);
    }
    Ok(p)
}

fn parse_uvpoly(s: &str, line: usize) -> Result<UVPoly, ParseError> {
    let mut p = UVPoly::zero();
    for term in s.split('+') {
        let t = term.trim();
        if t.is_empty() {
            return Err(ParseError::new(line, "empty term in polynomial"));
        }
        let mut a = 0u32;
        let mut b = 0u32;
        for factor in t.split_whitespace() {
            if factor == "1" {
                continue;
            } else if factor == "U" {
                a += 1;
            } else if factor == "V" {
                b += 1;
            } else if let Some(k) = factor.strip_prefix("U^") {
                a += k
                    .parse::<u32>()
                    .map_err(|_| ParseError::new(line, format!("bad exponent in `{factor}`")))?;
            } else if let Some(k) = factor.strip_prefix("V^") {
                b += k
                    .parse::<u32>()
                    .map_err(|_| ParseError::new(line, format!("bad exponent in `{factor}`")))?;
            } else {
                return Err(ParseError::new(
                    line,
                    format!("bad factor `{factor}` (expected 1, U, V, U^a, V^b)"),
                ));
            }
        }
        p = p.add(&UVPoly::monomial(a, b));
    }
    Ok(p)
}

/// Parse an `x -> y : poly` tail (after the keyword token). Generator ids
/// may themselves contain colons, so the polynomial separator is the last
/// colon on the line.
fn parse_arrow(rest: &str, line: usize) -> Result<(&str, &str, &str), ParseError> {
    let (lhs, poly) = rest
        .rsplit_once(':')
        .ok_or_else(|| ParseError::new(line, "missing `:` before polynomial"))?;
    let toks: Vec<&str> = lhs.split_whitespace().collect();
    if toks.len() != 3 || toks[1] != "->" {
        return Err(ParseError::new(line, "expected `<src> -> <tgt> : <poly>`"));
    }
    Ok((toks[0], toks[2], poly.trim()))
}

struct RawComplex {
    name: String,
    gens: Vec<(String, Grading)>,
    d_entries: Vec<(String, String, UPoly, usize)>,
    iota_entries: Vec<(String, String, UPoly, usize)>,
}

fn parse_ucomplex_raw(text: &str) -> Result<RawComplex, ParseError> {
    let mut name = None;
    let mut gens: Vec<(String, Grading)> = Vec::new();
    let mut d_entries = Vec::new();
    let mut iota_entries = Vec::new();
    for (ln, line) in meaningful_lines(text) {
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match kw {
            "complex" => {
                let n = rest.trim();
                if n.is_empty() {
                    return Err(ParseError::new(ln, "complex needs a name"));
                }
                name = Some(n.to_string());
            }
            "gen" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 2 {
                    return Err(ParseError::new(ln, "expected `gen <id> <grading>`"));
                }
                gens.push((toks[0].to_string(), parse_grading(toks[1], ln)?));
            }
            "d" => {
                let (src, tgt, poly) = parse_arrow(rest, ln)?;
                d_entries.push((src.to_string(), tgt.to_string(), parse_upoly(poly, ln)?, ln));
            }
            "iota" => {
                let (src, tgt, poly) = parse_arrow(rest, ln)?;
                iota_entries.push((src.to_string(), tgt.to_string(), parse_upoly(poly, ln)?, ln));
            }
            other => {
                return Err(ParseError::new(ln, format!("unexpected keyword `{other}`")));
            }
        }
    }
    let name = name.ok_or_else(|| ParseError::new(1, "missing `complex <name>` header"))?;
    Ok(RawComplex { name, gens, d_entries, iota_entries })
}

fn build_ucomplex(raw: &RawComplex) -> Result<GradedComplex, ParseError> {
    let gens: Vec<Generator> = raw
        .gens
        .iter()
        .map(|(id, grading)| Generator { id: id.clone(), grading: *grading })
        .collect();
    let n = gens.len();
    let mut d = Mat::zero(n, n);
    for (src, tgt, poly, ln) in &raw.d_entries {
        let j = gens
            .iter()
            .position(|g| g.id == *src)
            .ok_or_else(|| ParseError::new(*ln, format!("unknown generator `{src}`")))?;
        let i = gens
            .iter()
            .position(|g| g.id == *tgt)
            .ok_or_else(|| ParseError::new(*ln, format!("unknown generator `{tgt}`")))?;
        d.add_to(i, j, poly);
    }
    Ok(GradedComplex { name: raw.name.clone(), gens, d })
}

pub fn parse_complex(text: &str) -> Result<GradedComplex, ParseError> {
    let raw = parse_ucomplex_raw(text)?;
    if let Some((_, _, _, ln)) = raw.iota_entries.first() {
        return Err(ParseError::new(
            *ln,
            "unexpected `iota` line in a plain complex (use the iota-complex reader)",
        ));
    }
    build_ucomplex(&raw)
}

pub fn parse_iota_complex(text: &str) -> Result<IotaComplex, ParseError> {
    let raw = parse_ucomplex_raw(text)?;
    if raw.iota_entries.is_empty() {
        return Err(ParseError::new(
            1,
            "iota-complex needs at least one `iota` line",
        ));
    }
    let complex = build_ucomplex(&raw)?;
    let n = complex.rank();
    let mut iota = Mat::zero(n, n);
    for (src, tgt, poly, ln) in &raw.iota_entries {
        let j = complex
            .index_of(src)
            .ok_or_else(|| ParseError::new(*ln, format!("unknown generator `{src}`")))?;
        let i = complex
            .index_of(tgt)
            .ok_or_else(|| ParseError::new(*ln, format!("unknown generator `{tgt}`")))?;
        iota.add_to(i, j, poly);
    }
    Ok(IotaComplex::new(complex, iota))
}

pub fn parse_knotlike(text: &str) -> Result<KnotLikeComplex, ParseError> {
    let mut name = None;
    let mut gens: Vec<KnotGenerator> = Vec::new();
    let mut entries: Vec<(String, String, UVPoly, usize)> = Vec::new();
    for (ln, line) in meaningful_lines(text) {
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match kw {
            "complex" => {
                let n = rest.trim();
                if n.is_empty() {
                    return Err(ParseError::new(ln, "complex needs a name"));
                }
                name = Some(n.to_string());
            }
            "kgen" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(ParseError::new(ln, "expected `kgen <id> <gr_w> <gr_z>`"));
                }
                gens.push(KnotGenerator {
                    id: toks[0].to_string(),
                    gr_w: parse_grading(toks[1], ln)?,
                    gr_z: parse_grading(toks[2], ln)?,
                });
            }
            "kd" => {
                let (src, tgt, poly) = parse_arrow(rest, ln)?;
                entries.push((src.to_string(), tgt.to_string(), parse_uvpoly(poly, ln)?, ln));
            }
            other => {
                return Err(ParseError::new(ln, format!("unexpected keyword `{other}`")));
            }
        }
    }
    let name = name.ok_or_else(|| ParseError::new(1, "missing `complex <name>` header"))?;
    let n = gens.len();
    let mut d = Mat::zero(n, n);
    for (src, tgt, poly, ln) in &entries {
        let j = gens
            .iter()
            .position(|g| g.id == *src)
            .ok_or_else(|| ParseError::new(*ln, format!("unknown generator `{src}`")))?;
        let i = gens
            .iter()
            .position(|g| g.id == *tgt)
            .ok_or_else(|| ParseError::new(*ln, format!("unknown generator `{tgt}`")))?;
        d.add_to(i, j, poly);
    }
    Ok(KnotLikeComplex { name, gens, d })
}

/// Detect whether a file holds a bigraded complex (kgen lines).
pub fn looks_knotlike(text: &str) -> bool {
    meaningful_lines(text).any(|(_, l)| l.starts_with("kgen ") || l.starts_with("kd "))
}

/// Detect whether a file carries involution lines.
pub fn looks_iota(text: &str) -> bool {
    meaningful_lines(text).any(|(_, l)| l.starts_with("iota "))
}

/// Parse a map file against known source and target complexes.
pub fn parse_map(
    text: &str,
    source: &GradedComplex,
    target: &GradedComplex,
) -> Result<UMap, ParseError> {
    let mut degree: Option<i64> = None;
    let mut entries: Vec<(String, String, UPoly, usize)> = Vec::new();
    for (ln, line) in meaningful_lines(text) {
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match kw {
            "map" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                // `map <name> degree <d>`
                if toks.len() != 3 || toks[1] != "degree" {
                    return Err(ParseError::new(ln, "expected `map <name> degree <d>`"));
                }
                degree = Some(
                    toks[2]
                        .parse()
                        .map_err(|_| ParseError::new(ln, format!("bad degree `{}`", toks[2])))?,
                );
            }
            "m" => {
                let (src, tgt, poly) = parse_arrow(rest, ln)?;
                entries.push((src.to_string(), tgt.to_string(), parse_upoly(poly, ln)?, ln));
            }
            other => {
                return Err(ParseError::new(ln, format!("unexpected keyword `{other}`")));
            }
        }
    }
    let degree = degree.ok_or_else(|| ParseError::new(1, "missing `map <name> degree <d>` header"))?;
    let mut m = UMap::zero(source, target, degree);
    for (src, tgt, poly, ln) in &entries {
        let j = source
            .index_of(src)
            .ok_or_else(|| ParseError::new(*ln, format!("unknown source generator `{src}`")))?;
        let i = target
            .index_of(tgt)
            .ok_or_else(|| ParseError::new(*ln, format!("unknown target generator `{tgt}`")))?;
        m.mat.add_to(i, j, poly);
    }
    Ok(m)
}

pub fn parse_presentation(text: &str) -> Result<SurgeryPresentation, ParseError> {
    let mut components: Vec<Component> = Vec::new();
    let mut framings: Vec<i64> = Vec::new();
    let mut lks: Vec<(usize, usize, i64, usize)> = Vec::new();
    let mut seen_header = false;
    for (ln, line) in meaningful_lines(text) {
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match kw {
            "presentation" => {
                seen_header = true;
            }
            "comp" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(ParseError::new(
                        ln,
                        "expected `comp <label> framing=<k> companion=<0|1>`",
                    ));
                }
                let framing = toks[1]
                    .strip_prefix("framing=")
                    .and_then(|v| v.parse::<i64>().ok())
                    .ok_or_else(|| ParseError::new(ln, format!("bad framing `{}`", toks[1])))?;
                let companion = toks[2]
                    .strip_prefix("companion=")
                    .and_then(|v| v.parse::<u8>().ok())
                    .ok_or_else(|| ParseError::new(ln, format!("bad companion flag `{}`", toks[2])))?;
                components.push(Component {
                    label: toks[0].to_string(),
                    is_companion: companion != 0,
                });
                framings.push(framing);
            }
            "lk" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(ParseError::new(ln, "expected `lk <i> <j> <v>`"));
                }
                let i: usize = toks[0]
                    .parse()
                    .map_err(|_| ParseError::new(ln, format!("bad index `{}`", toks[0])))?;
                let j: usize = toks[1]
                    .parse()
                    .map_err(|_| ParseError::new(ln, format!("bad index `{}`", toks[1])))?;
                let v: i64 = toks[2]
                    .parse()
                    .map_err(|_| ParseError::new(ln, format!("bad linking number `{}`", toks[2])))?;
                lks.push((i, j, v, ln));
            }
            other => {
                return Err(ParseError::new(ln, format!("unexpected keyword `{other}`")));
            }
        }
    }
    if !seen_header {
        return Err(ParseError::new(1, "missing `presentation <name>` header"));
    }
    let n = components.len();
    let mut linking = vec![vec![0i64; n]; n];
    for (i, row) in linking.iter_mut().enumerate() {
        row[i] = framings[i];
    }
    for (i, j, v, ln) in lks {
        if i >= n || j >= n {
            return Err(ParseError::new(ln, format!("component index out of range ({i},{j})")));
        }
        linking[i][j] = v;
        linking[j][i] = v;
    }
    Ok(SurgeryPresentation { components, linking })
}

pub fn write_complex(c: &GradedComplex) -> String {
    let mut out = String::new();
    writeln!(out, "complex {}", c.name).unwrap();
    for g in &c.gens {
        writeln!(out, "gen {} {}", g.id, g.grading).unwrap();
    }
    for j in 0..c.rank() {
        for i in 0..c.rank() {
            let e = c.d.get(i, j);
            if !e.is_zero() {
                writeln!(out, "d {} -> {} : {}", c.gens[j].id, c.gens[i].id, e).unwrap();
            }
        }
    }
    out
}

pub fn write_iota_complex(x: &IotaComplex) -> String {
    let mut out = write_complex(&x.complex);
    let c = &x.complex;
    for j in 0..c.rank() {
        for i in 0..c.rank() {
            let e = x.iota.get(i, j);
            if !e.is_zero() {
                writeln!(out, "iota {} -> {} : {}", c.gens[j].id, c.gens[i].id, e).unwrap();
            }
        }
    }
    out
}

pub fn write_knotlike(c: &KnotLikeComplex) -> String {
    let mut out = String::new();
    writeln!(out, "complex {}", c.name).unwrap();
    for g in &c.gens {
        writeln!(out, "kgen {} {} {}", g.id, g.gr_w, g.gr_z).unwrap();
    }
    for j in 0..c.rank() {
        for i in 0..c.rank() {
            let e = c.d.get(i, j);
            if !e.is_zero() {
                writeln!(out, "kd {} -> {} : {}", c.gens[j].id, c.gens[i].id, e).unwrap();
            }
        }
    }
    out
}

pub fn write_map(name: &str, m: &UMap) -> String {
    let mut out = String::new();
    writeln!(out, "map {} degree {}", name, m.degree).unwrap();
    for j in 0..m.source.rank() {
        for i in 0..m.target.rank() {
            let e = m.mat.get(i, j);
            if !e.is_zero() {
                writeln!(
                    out,
                    "m {} -> {} : {}",
                    m.source.gens[j].id, m.target.gens[i].id, e
                )
                .unwrap();
            }
        }
    }
    out
}

pub fn write_presentation(name: &str, p: &SurgeryPresentation) -> String {
    let mut out = String::new();
    writeln!(out, "presentation {name}").unwrap();
    for (i, c) in p.components.iter().enumerate() {
        writeln!(
            out,
            "comp {} framing={} companion={}",
            c.label,
            p.linking[i][i],
            u8::from(c.is_companion)
        )
        .unwrap();
    }
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p.linking[i][j] != 0 {
                writeln!(out, "lk {} {} {}", i, j, p.linking[i][j]).unwrap();
            }
        }
    }
    out
}

/// Parse `a,b;c,d` into matrix entries.
pub fn parse_matrix_arg(s: &str) -> Result<[[i64; 2]; 2], ParseError> {
    let rows: Vec<&str> = s.split(';').collect();
    if rows.len() != 2 {
        return Err(ParseError::new(1, format!("expected `a,b;c,d`, got `{s}`")));
    }
    let mut out = [[0i64; 2]; 2];
    for (r, row) in rows.iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        if cols.len() != 2 {
            return Err(ParseError::new(1, format!("expected `a,b;c,d`, got `{s}`")));
        }
        for (c, tok) in cols.iter().enumerate() {
            out[r][c] = tok
                .trim()
                .parse()
                .map_err(|_| ParseError::new(1, format!("bad integer `{tok}`")))?;
        }
    }
    Ok(out)
}

pub fn parse_basis_arg(s: &str) -> Result<BasisMode, ParseError> {
    match s {
        "phi" => Ok(BasisMode::Phi),
        "psi" => Ok(BasisMode::Psi),
        other => Err(ParseError::new(1, format!("bad basis `{other}` (phi or psi)"))),
    }
}

/// Parse a word like `H T(-2) H T(2) H`.
pub fn parse_word(s: &str) -> Result<GeneratorWord, ParseError> {
    let mut letters = Vec::new();
    for tok in s.split_whitespace() {
        if tok == "H" {
            letters.push(Letter::H);
        } else if let Some(k) = tok.strip_prefix("T(").and_then(|t| t.strip_suffix(")")) {
            let k: i64 = k
                .parse()
                .map_err(|_| ParseError::new(1, format!("bad letter `{tok}`")))?;
            letters.push(Letter::T(k));
        } else {
            return Err(ParseError::new(1, format!("bad letter `{tok}` (expected H or T(k))")));
        }
    }
    Ok(GeneratorWord::new(letters))
}

pub fn format_matrix(m: &GluingMatrix) -> String {
    let [[a, b], [c, d]] = m.entries;
    format!("{a},{b};{c},{d}")
}
