//! Text codecs for quantified DNF instances and DIMACS CNF.
//!
//! QDNF format: a header `p qdnf <#vars> <#terms>`, one `e v1 v2 ... 0`
//! line for the existential variables, one `a v1 ... 0` line for the
//! universal variables, then one line per term of signed nonzero integers
//! terminated by 0. Comment lines start with `c`.

use std::fmt::Write as _;

use super::{CnfFormula, DnfFormula, FormulaError, Literal, QDnfInstance};

fn parse_err(line: usize, message: impl Into<String>) -> FormulaError {
    FormulaError::Parse {
        line,
        message: message.into(),
    }
}

/// `(line number, content)` pairs with comments and blank lines removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'))
}

/// Parses a zero-terminated list of positive variable indices.
fn parse_var_list(line_no: usize, rest: &str, max: u32) -> Result<Vec<u32>, FormulaError> {
    let mut vars = Vec::new();
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
                format!("variable {value} out of range 1..={max}"),
            ));
        } else {
            vars.push(value as u32);
        }
    }
    if !terminated {
        return Err(parse_err(line_no, "missing terminating 0"));
    }
    Ok(vars)
}

fn parse_literal_line(line_no: usize, line: &str, max: u32) -> Result<Vec<Literal>, FormulaError> {
    let mut literals: Vec<Literal> = Vec::new();
    let mut terminated = false;
    for token in line.split_whitespace() {
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
            continue;
        }
        let lit = Literal::from_code(value)
            .ok_or_else(|| parse_err(line_no, format!("invalid literal `{token}`")))?;
        if lit.var() > max {
            return Err(parse_err(
                line_no,
                format!("variable {} out of range 1..={max}", lit.var()),
            ));
        }
        if literals.iter().any(|l| l.var() == lit.var()) {
            return Err(parse_err(
                line_no,
                format!("variable {} mentioned more than once", lit.var()),
            ));
        }
        literals.push(lit);
    }
    if !terminated {
        return Err(parse_err(line_no, "missing terminating 0"));
    }
    Ok(literals)
}

fn write_var_list(out: &mut String, tag: char, vars: &std::collections::BTreeSet<u32>) {
    out.push(tag);
    for v in vars {
        let _ = write!(out, " {v}");
    }
    out.push_str(" 0\n");
}

impl QDnfInstance {
    pub fn parse(text: &str) -> Result<Self, FormulaError> {
        let mut lines = content_lines(text);

        let (header_no, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing `p qdnf` header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "p" || fields[1] != "qdnf" {
            return Err(parse_err(
                header_no,
                "expected header `p qdnf <#vars> <#terms>`",
            ));
        }
        let variable_count: u32 = fields[2]
            .parse()
            .map_err(|_| parse_err(header_no, "invalid variable count"))?;
        let term_count: usize = fields[3]
            .parse()
            .map_err(|_| parse_err(header_no, "invalid term count"))?;

        let (e_no, e_line) = lines
            .next()
            .ok_or_else(|| parse_err(header_no, "missing `e` line"))?;
        let existential_list = match e_line.strip_prefix('e') {
            Some(rest) => parse_var_list(e_no, rest, variable_count)?,
            None => return Err(parse_err(e_no, "expected `e v1 ... 0` line")),
        };
        let (a_no, a_line) = lines
            .next()
            .ok_or_else(|| parse_err(e_no, "missing `a` line"))?;
        let universal_list = match a_line.strip_prefix('a') {
            Some(rest) => parse_var_list(a_no, rest, variable_count)?,
            None => return Err(parse_err(a_no, "expected `a v1 ... 0` line")),
        };

        let mut existential = std::collections::BTreeSet::new();
        for v in &existential_list {
            if !existential.insert(*v) {
                return Err(parse_err(e_no, format!("variable {v} quantified twice")));
            }
        }
        let mut universal = std::collections::BTreeSet::new();
        for v in &universal_list {
            if !universal.insert(*v) || existential.contains(v) {
                return Err(parse_err(a_no, format!("variable {v} quantified twice")));
            }
        }

        let mut terms = Vec::with_capacity(term_count);
        for _ in 0..term_count {
            let (line_no, line) = lines.next().ok_or_else(|| {
                parse_err(
                    a_no,
                    format!("expected {term_count} term lines, found {}", terms.len()),
                )
            })?;
            let term = parse_literal_line(line_no, line, variable_count)?;
            for lit in &term {
                if !existential.contains(&lit.var()) && !universal.contains(&lit.var()) {
                    return Err(parse_err(
                        line_no,
                        format!("variable {} is not quantified", lit.var()),
                    ));
                }
            }
            terms.push(term);
        }
        if let Some((line_no, line)) = lines.next() {
            return Err(parse_err(
                line_no,
                format!("unexpected trailing line `{line}`"),
            ));
        }

        let formula = DnfFormula::new(variable_count, terms)?;
        QDnfInstance::new(formula, existential, universal)
    }

    /// Canonical serialization: quantifier lists ascending, terms and their
    /// literals in stored order. `parse` of the result reproduces `self`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "p qdnf {} {}",
            self.variable_count(),
            self.formula().term_count()
        );
        write_var_list(&mut out, 'e', self.existential());
        write_var_list(&mut out, 'a', self.universal());
        for term in self.formula().terms() {
            for lit in term {
                let _ = write!(out, "{} ", lit.code());
            }
            out.push_str("0\n");
        }
        out
    }
}

impl CnfFormula {
    /// Parses standard DIMACS CNF. Clauses are zero-terminated token
    /// sequences and may span lines.
    pub fn parse_dimacs(text: &str) -> Result<Self, FormulaError> {
        let mut lines = content_lines(text);
        let (header_no, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing `p cnf` header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
            return Err(parse_err(
                header_no,
                "expected header `p cnf <#vars> <#clauses>`",
            ));
        }
        let variable_count: u32 = fields[2]
            .parse()
            .map_err(|_| parse_err(header_no, "invalid variable count"))?;
        let clause_count: usize = fields[3]
            .parse()
            .map_err(|_| parse_err(header_no, "invalid clause count"))?;

        let mut clauses = Vec::with_capacity(clause_count);
        let mut current = Vec::new();
        let mut last_line = header_no;
        for (line_no, line) in lines {
            last_line = line_no;
            for token in line.split_whitespace() {
                let value: i64 = token
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("invalid integer `{token}`")))?;
                if value == 0 {
                    clauses.push(std::mem::take(&mut current));
                    continue;
                }
                let lit = Literal::from_code(value)
                    .ok_or_else(|| parse_err(line_no, format!("invalid literal `{token}`")))?;
                if lit.var() > variable_count {
                    return Err(parse_err(
                        line_no,
                        format!("variable {} out of range 1..={variable_count}", lit.var()),
                    ));
                }
                current.push(lit);
            }
        }
        if !current.is_empty() {
            return Err(parse_err(last_line, "clause missing terminating 0"));
        }
        if clauses.len() != clause_count {
            return Err(parse_err(
                last_line,
                format!("expected {clause_count} clauses, found {}", clauses.len()),
            ));
        }
        CnfFormula::new(variable_count, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "p cnf {} {}",
            self.variable_count(),
            self.clause_count()
        );
        for clause in self.clauses() {
            for lit in clause {
                let _ = write!(out, "{} ", lit.code());
            }
            out.push_str("0\n");
        }
        out
    }
}
