//! The line-oriented `.cg` graph format.
//!
//! ```text
//! node <id> role=<treatment|outcome|covariate> [latent]
//! edge <src> <dst>
//! coef <src> <dst> <float>
//! noise <id> <float>
//! ```
//!
//! `#` starts a comment running to the end of the line. Lines may appear in
//! any order; `coef` and `noise` lines are optional and only consumed by the
//! simulator.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{is_valid_identifier, Dag, Role};

/// A parsed `.cg` file: the graph plus any structural-equation parameters.
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub dag: Dag,
    /// `(src, dst, coefficient)` in file order.
    pub coefs: Vec<(String, String, f64)>,
    /// `(vertex, noise variance)` in file order.
    pub noise: Vec<(String, f64)>,
}

impl GraphFile {
    pub fn has_sem_parameters(&self) -> bool {
        !self.coefs.is_empty() || !self.noise.is_empty()
    }
}

pub fn read_graph_file(path: impl AsRef<Path>) -> Result<GraphFile> {
    let text = std::fs::read_to_string(path)?;
    parse(&text)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn ident(line: usize, tok: Option<&str>, what: &str) -> Result<String> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    if !is_valid_identifier(tok) {
        return Err(parse_err(line, format!("invalid identifier `{tok}`")));
    }
    Ok(tok.to_string())
}

fn number(line: usize, tok: Option<&str>) -> Result<f64> {
    let tok = tok.ok_or_else(|| parse_err(line, "missing number"))?;
    let x: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("invalid number `{tok}`")))?;
    if !x.is_finite() {
        return Err(parse_err(line, format!("non-finite number `{tok}`")));
    }
    Ok(x)
}

pub fn parse(text: &str) -> Result<GraphFile> {
    let mut nodes: Vec<(String, Role, bool)> = Vec::new();
    let mut node_line: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    let mut coefs: Vec<(usize, String, String, f64)> = Vec::new();
    let mut noise: Vec<(usize, String, f64)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        let Some(keyword) = toks.next() else {
            continue;
        };
        match keyword {
            "node" => {
                let name = ident(line, toks.next(), "vertex name")?;
                let role_tok = toks
                    .next()
                    .ok_or_else(|| parse_err(line, "missing role=<...>"))?;
                let role = match role_tok.strip_prefix("role=") {
                    Some("treatment") => Role::Treatment,
                    Some("outcome") => Role::Outcome,
                    Some("covariate") => Role::Covariate,
                    _ => return Err(parse_err(line, format!("invalid role `{role_tok}`"))),
                };
                let latent = match toks.next() {
                    None => false,
                    Some("latent") => true,
                    Some(other) => return Err(parse_err(line, format!("unexpected `{other}`"))),
                };
                if latent && role != Role::Covariate {
                    return Err(parse_err(line, format!("{role} `{name}` cannot be latent")));
                }
                if let Some(prev) = node_line.insert(name.clone(), line) {
                    return Err(parse_err(line, format!("vertex `{name}` already declared on line {prev}")));
                }
                nodes.push((name, role, latent));
            }
            "edge" => {
                let src = ident(line, toks.next(), "edge source")?;
                let dst = ident(line, toks.next(), "edge target")?;
                edges.push((line, src, dst));
            }
            "coef" => {
                let src = ident(line, toks.next(), "edge source")?;
                let dst = ident(line, toks.next(), "edge target")?;
                let x = number(line, toks.next())?;
                coefs.push((line, src, dst, x));
            }
            "noise" => {
                let name = ident(line, toks.next(), "vertex name")?;
                let x = number(line, toks.next())?;
                noise.push((line, name, x));
            }
            other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
        }
        if let Some(extra) = toks.next() {
            return Err(parse_err(line, format!("unexpected `{extra}`")));
        }
    }

    let known = |line: usize, name: &str| {
        if node_line.contains_key(name) {
            Ok(())
        } else {
            Err(parse_err(line, format!("unknown vertex `{name}`")))
        }
    };
    let mut seen_edges = HashSet::new();
    for (line, src, dst) in &edges {
        known(*line, src)?;
        known(*line, dst)?;
        if src == dst {
            return Err(parse_err(*line, format!("self-loop on `{src}`")));
        }
        if !seen_edges.insert((src.as_str(), dst.as_str())) {
            return Err(parse_err(*line, format!("duplicate edge {src} -> {dst}")));
        }
    }
    let mut seen_coefs = HashSet::new();
    for (line, src, dst, _) in &coefs {
        if !seen_edges.contains(&(src.as_str(), dst.as_str())) {
            return Err(parse_err(*line, format!("coefficient for missing edge {src} -> {dst}")));
        }
        if !seen_coefs.insert((src.as_str(), dst.as_str())) {
            return Err(parse_err(*line, format!("duplicate coefficient for {src} -> {dst}")));
        }
    }
    let mut seen_noise = HashSet::new();
    for (line, name, var) in &noise {
        known(*line, name)?;
        if *var <= 0.0 {
            return Err(parse_err(*line, format!("noise variance of `{name}` must be positive")));
        }
        if !seen_noise.insert(name.as_str()) {
            return Err(parse_err(*line, format!("duplicate noise for `{name}`")));
        }
    }

    let mut builder = Dag::builder();
    for (name, role, latent) in nodes {
        builder = builder.node(name, role, latent);
    }
    let dag = builder
        .edges(edges.into_iter().map(|(_, s, d)| (s, d)))
        .build()?;

    Ok(GraphFile {
        dag,
        coefs: coefs.into_iter().map(|(_, s, d, x)| (s, d, x)).collect(),
        noise: noise.into_iter().map(|(_, n, x)| (n, x)).collect(),
    })
}

/// Serializes the graph structure (no SEM parameters) in canonical order.
pub fn to_cg(dag: &Dag) -> String {
    let mut out = String::new();
    for v in dag.vertices() {
        let _ = write!(out, "node {} role={}", dag.name(v), dag.role(v));
        if dag.is_latent(v) {
            out.push_str(" latent");
        }
        out.push('\n');
    }
    for (s, d) in dag.edges() {
        let _ = writeln!(out, "edge {} {}", dag.name(s), dag.name(d));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn line_of(err: Error) -> usize {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn fixtures_parse_with_parameters() {
        let gb = parse(fixtures::GB_CG).unwrap();
        assert_eq!(gb.dag.len(), 4);
        assert_eq!(gb.coefs.len(), 4);
        assert_eq!(gb.noise.len(), 4);
        let gc = parse(fixtures::GC_CG).unwrap();
        assert!(!gc.has_sem_parameters());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let head = "node A role=treatment\nnode Y role=outcome\n";
        assert_eq!(line_of(parse(&format!("{head}edge A Q\n")).unwrap_err()), 3);
        assert_eq!(line_of(parse(&format!("{head}\n# c\nbogus A\n")).unwrap_err()), 5);
        assert_eq!(line_of(parse(&format!("{head}edge A A\n")).unwrap_err()), 3);
        assert_eq!(line_of(parse(&format!("{head}edge A Y\nedge A Y\n")).unwrap_err()), 4);
        assert_eq!(line_of(parse(&format!("{head}node A role=covariate\n")).unwrap_err()), 3);
        assert_eq!(line_of(parse(&format!("{head}node L role=outcome latent\n")).unwrap_err()), 3);
        assert_eq!(line_of(parse(&format!("{head}node L role=maybe\n")).unwrap_err()), 3);
        assert_eq!(line_of(parse(&format!("{head}coef A Y 1.0\n")).unwrap_err()), 3);
        assert_eq!(line_of(parse(&format!("{head}noise A -1\n")).unwrap_err()), 3);
        assert_eq!(line_of(parse(&format!("{head}noise A x\n")).unwrap_err()), 3);
        assert_eq!(line_of(parse(&format!("{head}edge A Y extra\n")).unwrap_err()), 3);
    }

    #[test]
    fn structural_errors_are_invalid_graph() {
        let cyclic = "node A role=treatment\nnode Y role=outcome\nnode L role=covariate\nedge A L\nedge L A\n";
        assert!(matches!(parse(cyclic), Err(Error::InvalidGraph(_))));
        assert!(matches!(parse("node A role=treatment\n"), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# header\n\nnode A role=treatment # trailing\nnode Y role=outcome\n  edge A Y  \n";
        let g = parse(text).unwrap();
        assert_eq!(g.dag.edge_count(), 1);
    }

    proptest! {
        #[test]
        fn serialization_round_trips(seed in 0u64..500, n in 2usize..9, p in 0.0f64..0.8) {
            let g = crate::testkit::random_dag(&crate::testkit::RandomDagSpec {
                vertices: n,
                edge_probability: p,
                latent_fraction: 0.3,
                seed,
                ..Default::default()
            }).unwrap();
            let back = parse(&to_cg(&g)).unwrap().dag;
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(to_cg(&back), to_cg(&g));
        }
    }
}
