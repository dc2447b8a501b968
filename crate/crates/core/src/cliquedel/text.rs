//! Graph text format: `p graph <n> <m> [weighted]`, optional `w <v> <weight>`
//! lines, `e <u> <v>` edge lines, and an optional `param <h> <k>` footer.
//! Comment lines start with `c`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{CfvdError, CfvdInstance, Graph};

/// Parsed counterpart of the graph format; re-serialization is canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDocument {
    pub graph: Graph,
    pub weighted: bool,
    pub params: Option<(u64, u64)>,
}

fn parse_err(line: usize, message: impl Into<String>) -> CfvdError {
    CfvdError::Parse {
        line,
        message: message.into(),
    }
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self, CfvdError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'));

        let (header_no, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing `p graph` header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let weighted = match fields.as_slice() {
            ["p", "graph", _, _] => false,
            ["p", "graph", _, _, "weighted"] => true,
            _ => {
                return Err(parse_err(
                    header_no,
                    "expected header `p graph <n> <m> [weighted]`",
                ))
            }
        };
        let vertex_count: u32 = fields[2]
            .parse()
            .map_err(|_| parse_err(header_no, "invalid vertex count"))?;
        let edge_count: usize = fields[3]
            .parse()
            .map_err(|_| parse_err(header_no, "invalid edge count"))?;

        let mut weights: BTreeMap<u32, u64> = BTreeMap::new();
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut params = None;
        for (line_no, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["w", v, weight] => {
                    if !weighted {
                        return Err(parse_err(line_no, "`w` line in an unweighted graph"));
                    }
                    let v: u32 = v
                        .parse()
                        .map_err(|_| parse_err(line_no, "invalid vertex"))?;
                    if v < 1 || v > vertex_count {
                        return Err(parse_err(
                            line_no,
                            format!("vertex {v} out of range 1..={vertex_count}"),
                        ));
                    }
                    let weight: u64 = weight
                        .parse()
                        .map_err(|_| parse_err(line_no, "invalid weight"))?;
                    if weight == 0 {
                        return Err(parse_err(line_no, format!("vertex {v} has weight 0")));
                    }
                    if weights.insert(v, weight).is_some() {
                        return Err(parse_err(
                            line_no,
                            format!("duplicate weight for vertex {v}"),
                        ));
                    }
                }
                ["e", u, v] => {
                    let u: u32 = u
                        .parse()
                        .map_err(|_| parse_err(line_no, "invalid vertex"))?;
                    let v: u32 = v
                        .parse()
                        .map_err(|_| parse_err(line_no, "invalid vertex"))?;
                    if u == v {
                        return Err(parse_err(line_no, format!("self-loop on vertex {u}")));
                    }
                    for w in [u, v] {
                        if w < 1 || w > vertex_count {
                            return Err(parse_err(
                                line_no,
                                format!("vertex {w} out of range 1..={vertex_count}"),
                            ));
                        }
                    }
                    let edge = (u.min(v), u.max(v));
                    if edges.contains(&edge) {
                        return Err(parse_err(line_no, format!("duplicate edge {u} {v}")));
                    }
                    edges.push(edge);
                }
                ["param", h, k] => {
                    if params.is_some() {
                        return Err(parse_err(line_no, "duplicate `param` line"));
                    }
                    let h: u64 = h.parse().map_err(|_| parse_err(line_no, "invalid h"))?;
                    let k: u64 = k.parse().map_err(|_| parse_err(line_no, "invalid k"))?;
                    if k < 1 {
                        return Err(parse_err(line_no, "k must be at least 1"));
                    }
                    params = Some((h, k));
                }
                _ => return Err(parse_err(line_no, format!("unrecognized line `{line}`"))),
            }
        }
        if edges.len() != edge_count {
            return Err(parse_err(
                header_no,
                format!("header declares {edge_count} edges, found {}", edges.len()),
            ));
        }
        let weight_vec: Vec<u64> = (1..=vertex_count)
            .map(|v| weights.get(&v).copied().unwrap_or(1))
            .collect();
        let graph = Graph::weighted(vertex_count, edges, weight_vec)?;
        Ok(GraphDocument {
            graph,
            weighted,
            params,
        })
    }

    /// Canonical form: ascending `w` lines for non-unit weights, ascending
    /// edge lines, `param` footer last.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(
            out,
            "p graph {} {}",
            self.graph.vertex_count(),
            self.graph.edge_count()
        );
        if self.weighted {
            out.push_str(" weighted");
        }
        out.push('\n');
        if self.weighted {
            for v in self.graph.vertices() {
                if self.graph.weight(v) != 1 {
                    let _ = writeln!(out, "w {v} {}", self.graph.weight(v));
                }
            }
        }
        for (u, v) in self.graph.edges() {
            let _ = writeln!(out, "e {u} {v}");
        }
        if let Some((h, k)) = self.params {
            let _ = writeln!(out, "param {h} {k}");
        }
        out
    }

    pub fn from_instance(inst: &CfvdInstance) -> Self {
        GraphDocument {
            graph: inst.graph().clone(),
            weighted: inst.weighted(),
            params: Some((inst.deletion_budget(), inst.clique_bound())),
        }
    }

    /// Builds the deletion instance; `params` must be present (a `param`
    /// line or a caller-side override).
    pub fn to_instance(&self) -> Result<CfvdInstance, CfvdError> {
        let (h, k) = self.params.ok_or(CfvdError::Parse {
            line: 0,
            message: "graph carries no `param <h> <k>` line".into(),
        })?;
        CfvdInstance::new(self.graph.clone(), h, k, self.weighted)
    }
}
