//! DVCR bundle format: `p dvcr <n>`, zero-terminated `s`/`t` cover lines,
//! `k <k>` and `l <length>` lines, then one `pair <u> <v>` block per
//! non-default pair holding an embedded DIMACS CNF and a closing `end`
//! line. Pairs absent from the file default to the trivial no-instance,
//! and exactly-trivial-no pairs are omitted when serializing.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::formula::CnfFormula;

use super::{make_trivial_cnf, DiscoveryError, DvcrInstance};

fn parse_err(line: usize, message: impl Into<String>) -> DiscoveryError {
    DiscoveryError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_cover_line(line_no: usize, rest: &str, max: u32) -> Result<BTreeSet<u32>, DiscoveryError> {
    let mut vars = BTreeSet::new();
    let mut terminated = false;
    for token in rest.split_whitespace() {
        if terminated {
            return Err(parse_err(
                line_no,
                format!("token `{token}` after terminating 0"),
            ));
        }
        let value: i64 = token
            .parse()
            .map_err(|_| parse_err(line_no, format!("invalid integer `{token}`")))?;
        if value == 0 {
            terminated = true;
        } else if value < 0 || value > i64::from(max) {
            return Err(parse_err(
                line_no,
                format!("vertex {value} out of range 1..={max}"),
            ));
        } else if !vars.insert(value as u32) {
            return Err(parse_err(line_no, format!("vertex {value} listed twice")));
        }
    }
    if !terminated {
        return Err(parse_err(line_no, "missing terminating 0"));
    }
    Ok(vars)
}

impl DvcrInstance {
    pub fn parse(text: &str) -> Result<Self, DiscoveryError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .peekable();

        let mut vertex_count: Option<(usize, u32)> = None;
        let mut start = None;
        let mut target = None;
        let mut cover_bound = None;
        let mut sequence_length: Option<BigUint> = None;
        let mut pairs: Vec<((u32, u32), CnfFormula)> = Vec::new();
        let mut seen_pairs: BTreeSet<(u32, u32)> = BTreeSet::new();

        while let Some((line_no, raw)) = lines.next() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["p", "dvcr", n] => {
                    if vertex_count.is_some() {
                        return Err(parse_err(line_no, "duplicate `p dvcr` header"));
                    }
                    let n: u32 = n
                        .parse()
                        .map_err(|_| parse_err(line_no, "invalid vertex count"))?;
                    vertex_count = Some((line_no, n));
                }
                _ => {
                    let (_, n) = vertex_count
                        .ok_or_else(|| parse_err(line_no, "missing `p dvcr` header"))?;
                    match fields.as_slice() {
                        ["s", ..] => {
                            if start.is_some() {
                                return Err(parse_err(line_no, "duplicate `s` line"));
                            }
                            start = Some(parse_cover_line(line_no, &line[1..], n)?);
                        }
                        ["t", ..] => {
                            if target.is_some() {
                                return Err(parse_err(line_no, "duplicate `t` line"));
                            }
                            target = Some(parse_cover_line(line_no, &line[1..], n)?);
                        }
                        ["k", value] => {
                            if cover_bound.is_some() {
                                return Err(parse_err(line_no, "duplicate `k` line"));
                            }
                            cover_bound = Some(
                                value
                                    .parse::<u32>()
                                    .map_err(|_| parse_err(line_no, "invalid cover bound"))?,
                            );
                        }
                        ["l", value] => {
                            if sequence_length.is_some() {
                                return Err(parse_err(line_no, "duplicate `l` line"));
                            }
                            sequence_length = Some(
                                value
                                    .parse::<BigUint>()
                                    .map_err(|_| parse_err(line_no, "invalid sequence length"))?,
                            );
                        }
                        ["pair", u, v] => {
                            let u: u32 = u
                                .parse()
                                .map_err(|_| parse_err(line_no, "invalid vertex"))?;
                            let v: u32 = v
                                .parse()
                                .map_err(|_| parse_err(line_no, "invalid vertex"))?;
                            if u == v || u < 1 || v < 1 || u > n || v > n {
                                return Err(parse_err(
                                    line_no,
                                    format!("invalid pair ({u}, {v}) over 1..={n}"),
                                ));
                            }
                            if !seen_pairs.insert((u.min(v), u.max(v))) {
                                return Err(parse_err(
                                    line_no,
                                    format!("duplicate block for pair {u} {v}"),
                                ));
                            }
                            let mut block = String::new();
                            let mut closed = false;
                            for (_, inner) in lines.by_ref() {
                                if inner.trim() == "end" {
                                    closed = true;
                                    break;
                                }
                                let _ = writeln!(block, "{inner}");
                            }
                            if !closed {
                                return Err(parse_err(line_no, "pair block missing `end`"));
                            }
                            let cnf = CnfFormula::parse_dimacs(&block)
                                .map_err(|e| parse_err(line_no, format!("embedded CNF: {e}")))?;
                            pairs.push(((u, v), cnf));
                        }
                        _ => return Err(parse_err(line_no, format!("unrecognized line `{line}`"))),
                    }
                }
            }
        }

        let (header_no, n) = vertex_count.ok_or_else(|| parse_err(1, "missing `p dvcr` header"))?;
        let start = start.ok_or_else(|| parse_err(header_no, "missing `s` line"))?;
        let target = target.ok_or_else(|| parse_err(header_no, "missing `t` line"))?;
        let cover_bound = cover_bound.ok_or_else(|| parse_err(header_no, "missing `k` line"))?;
        let sequence_length =
            sequence_length.ok_or_else(|| parse_err(header_no, "missing `l` line"))?;
        DvcrInstance::new(n, pairs, start, target, cover_bound, sequence_length)
    }

    /// Canonical form: header, covers, bounds, then ascending pair blocks
    /// with trivial no-instances left implicit.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p dvcr {}", self.vertex_count());
        out.push('s');
        for v in self.start() {
            let _ = write!(out, " {v}");
        }
        out.push_str(" 0\nt");
        for v in self.target() {
            let _ = write!(out, " {v}");
        }
        out.push_str(" 0\n");
        let _ = writeln!(out, "k {}", self.cover_bound());
        let _ = writeln!(out, "l {}", self.sequence_length());
        let default_no = make_trivial_cnf(false);
        for (&(u, v), cnf) in self.incidence().instances() {
            if *cnf == default_no {
                continue;
            }
            let _ = writeln!(out, "pair {u} {v}");
            out.push_str(&cnf.to_dimacs());
            out.push_str("end\n");
        }
        out
    }
}
