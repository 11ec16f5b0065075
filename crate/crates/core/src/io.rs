//! Text file formats: spectrum CSV, edge lists, set-system files and
//! integer sample lists.
//!
//! Spectrum CSV is a `degree,frequency` header followed by one row per stored
//! degree. `#` lines are comments, except `# tail beta=<b> C=<c> start=<s>`
//! (analytic tail) and `# kind=signed`. Frequencies are written with 17
//! significant digits so that parsing restores every bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graphgen::{Graph, SetSystem};
use crate::scalar::Scalar;
use crate::seqcore::{DegreeSpectrum, PowerTail, SpectrumKind};

/// `%.17g`: 17 significant digits, trailing zeros trimmed, exponent form only
/// for very small or very large magnitudes.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn write_spectrum_csv<T: Scalar>(s: &DegreeSpectrum<T>, comments: &[String]) -> String {
    let mut out = String::from("degree,frequency\n");
    for (d, v) in s.entries().iter().enumerate() {
        let _ = writeln!(out, "{d},{}", format_g17(v.as_f64()));
    }
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    if s.kind() == SpectrumKind::Signed {
        out.push_str("# kind=signed\n");
    }
    if let Some(t) = s.tail() {
        let _ = writeln!(
            out,
            "# tail beta={} C={} start={}",
            format_g17(t.beta.as_f64()),
            format_g17(t.scale.as_f64()),
            t.start
        );
    }
    out
}

/// Parses spectrum CSV. Missing degrees between rows are zero. Without a
/// `# kind=signed` line the spectrum is taken as a probability spectrum when
/// it satisfies the constraints, and as signed otherwise.
pub fn parse_spectrum_csv<T: Scalar>(text: &str) -> Result<DegreeSpectrum<T>> {
    let mut entries: Vec<T> = Vec::new();
    let mut saw_header = false;
    let mut signed = false;
    let mut tail = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if comment == "kind=signed" {
                signed = true;
            } else if let Some(rest) = comment.strip_prefix("tail ") {
                tail = Some(parse_tail(rest, line_no)?);
            }
            continue;
        }
        if !saw_header {
            if line.replace(' ', "") != "degree,frequency" {
                return Err(Error::parse(line_no, "expected header `degree,frequency`"));
            }
            saw_header = true;
            continue;
        }
        let (d, v) = line
            .split_once(',')
            .ok_or_else(|| Error::parse(line_no, "expected `degree,frequency`"))?;
        let d: usize = d
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad degree `{}`", d.trim())))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad frequency `{}`", v.trim())))?;
        if d < entries.len() {
            return Err(Error::parse(line_no, format!("degree {d} repeated or out of order")));
        }
        entries.resize(d, T::zero());
        entries.push(T::of(v));
    }
    if !saw_header {
        return Err(Error::parse(1, "missing header `degree,frequency`"));
    }
    if entries.is_empty() {
        return Err(Error::InvalidSpectrum("no rows".into()));
    }
    if signed {
        DegreeSpectrum::new(entries, SpectrumKind::Signed, tail)
    } else {
        DegreeSpectrum::new(entries.clone(), SpectrumKind::Probability, tail)
            .or_else(|_| DegreeSpectrum::new(entries, SpectrumKind::Signed, tail))
    }
}

fn parse_tail<T: Scalar>(rest: &str, line_no: usize) -> Result<PowerTail<T>> {
    let (mut beta, mut scale, mut start) = (None, None, None);
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, format!("bad tail field `{field}`")))?;
        let bad = || Error::parse(line_no, format!("bad tail value `{field}`"));
        match key {
            "beta" => beta = Some(value.parse::<f64>().map_err(|_| bad())?),
            "C" => scale = Some(value.parse::<f64>().map_err(|_| bad())?),
            "start" => start = Some(value.parse::<usize>().map_err(|_| bad())?),
            _ => return Err(Error::parse(line_no, format!("unknown tail field `{key}`"))),
        }
    }
    match (beta, scale, start) {
        (Some(b), Some(c), Some(s)) => Ok(PowerTail::new(T::of(b), T::of(c), s)),
        _ => Err(Error::parse(line_no, "tail needs beta, C and start")),
    }
}

pub fn read_spectrum<T: Scalar>(path: &Path) -> Result<DegreeSpectrum<T>> {
    parse_spectrum_csv(&fs::read_to_string(path)?)
}

/// Edge list with a leading `# n=<n>` line so isolated vertices survive.
pub fn write_edgelist(g: &Graph) -> String {
    let mut out = format!("# n={}\n", g.n());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses `u v` lines. The vertex count comes from a `# n=<n>` comment if
/// present, otherwise from the largest id.
pub fn parse_edgelist(text: &str) -> Result<Graph> {
    let mut n_decl = None;
    let mut edges = Vec::new();
    let mut max_id = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            if let Some(n) = c.trim().strip_prefix("n=") {
                n_decl = Some(
                    n.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::parse(line_no, format!("bad vertex count `{n}`")))?,
                );
            }
            continue;
        }
        let ids: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::parse(line_no, format!("malformed vertex id `{t}`")))
            })
            .collect::<Result<_>>()?;
        let [u, v] = ids[..] else {
            return Err(Error::parse(line_no, "expected two vertex ids"));
        };
        if u == v {
            return Err(Error::parse(line_no, format!("self-loop at {u}")));
        }
        max_id = Some(max_id.unwrap_or(0).max(u).max(v));
        edges.push((u, v));
    }
    let n = match (n_decl, max_id) {
        (Some(n), Some(m)) if m >= n => {
            return Err(Error::parse(0, format!("vertex {m} exceeds declared n={n}")))
        }
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => 0,
    };
    Graph::from_edges(n, edges)
}

pub fn read_edgelist(path: &Path) -> Result<Graph> {
    parse_edgelist(&fs::read_to_string(path)?)
}

/// One set per line; blank lines are empty sets.
pub fn write_setsystem(f: &SetSystem) -> String {
    let mut out = format!("# n={}\n", f.n());
    for s in f.sets() {
        let line: Vec<String> = s.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_setsystem(text: &str) -> Result<SetSystem> {
    let mut n_decl = None;
    let mut sets = Vec::new();
    let mut max_id: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if let Some(c) = line.strip_prefix('#') {
            if let Some(n) = c.trim().strip_prefix("n=") {
                n_decl = Some(
                    n.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::parse(line_no, format!("bad ground-set size `{n}`")))?,
                );
            }
            continue;
        }
        let set: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::parse(line_no, format!("malformed vertex id `{t}`")))
            })
            .collect::<Result<_>>()?;
        if let Some(&m) = set.iter().max() {
            max_id = Some(max_id.map_or(m, |x| x.max(m)));
        }
        sets.push(set);
    }
    let n = match (n_decl, max_id) {
        (Some(n), Some(m)) if m >= n => {
            return Err(Error::parse(0, format!("vertex {m} exceeds declared n={n}")))
        }
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => 0,
    };
    SetSystem::new(n, sets)
}

pub fn read_setsystem(path: &Path) -> Result<SetSystem> {
    parse_setsystem(&fs::read_to_string(path)?)
}

/// One nonnegative integer per line; `#` comments allowed.
pub fn parse_samples(text: &str) -> Result<Vec<usize>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(n, l)| {
            l.parse()
                .map_err(|_| Error::parse(n, format!("malformed sample `{l}`")))
        })
        .collect()
}
