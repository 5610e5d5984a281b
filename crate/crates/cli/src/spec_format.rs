//! The action-system text format.
//!
//! A spec is a line-oriented document; `#` starts a comment and blank lines
//! are ignored. Declarations, in any order:
//!
//! ```text
//! vertices u v w
//! edge e1 r=u s=u
//! generator a d=u t=v
//! move a e1 -> e2 | u
//! move a^-1 e2 -> e1 | u      # optional explicit inverse row, verified
//! degree a 1
//! isotropy z                  # z | trivial
//! budget seen 10000
//! budget len 64
//! ```
//!
//! Restriction words after `|` follow the word grammar: whitespace-separated
//! tokens, each a generator name or `name^-1`, read left-to-right with the
//! rightmost letter acting first; vertex names denote units. Parsing is
//! strict and reports line/column positions; `emit` produces the canonical
//! form, and `parse(emit(s)) = s`.

use std::fmt;

use selfsim_core::action::{ActionSystem, Budget, GenId, GeneratorData, Letter, Word};
use selfsim_core::action::probes::DegreeCocycle;
use selfsim_core::graph::Graph;
use selfsim_core::kthy::IsotropyClass;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDecl {
    pub name: String,
    pub range: String,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenDecl {
    pub name: String,
    pub dom: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveDecl {
    pub gen: String,
    pub inverse: bool,
    pub edge: String,
    pub image: String,
    /// restriction word in the word grammar
    pub restriction: String,
}

/// A parsed action-system document.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SystemSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDecl>,
    pub generators: Vec<GenDecl>,
    pub moves: Vec<MoveDecl>,
    pub degrees: Vec<(String, i64)>,
    pub isotropy: Option<String>,
    pub budget_seen: Option<usize>,
    pub budget_len: Option<usize>,
}

struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch == '#' {
            break;
        }
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok {
                    text: &line[s..i],
                    col: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        let end = line.find('#').unwrap_or(line.len());
        out.push(Tok {
            text: line[s..end].trim_end(),
            col: s + 1,
        });
    }
    out
}

pub fn parse_spec(text: &str) -> Result<SystemSpec, ParseError> {
    let mut spec = SystemSpec::default();
    for (lineno, line) in text.lines().enumerate() {
        let line_num = lineno + 1;
        let toks = tokenize(line);
        if toks.is_empty() {
            continue;
        }
        let err = |col: usize, message: String| ParseError {
            line: line_num,
            col,
            message,
        };
        let head = &toks[0];
        match head.text {
            "vertices" => {
                if toks.len() < 2 {
                    return Err(err(head.col, "expected vertex names".into()));
                }
                for t in &toks[1..] {
                    if spec.vertices.iter().any(|v| v == t.text) {
                        return Err(err(t.col, format!("duplicate vertex `{}`", t.text)));
                    }
                    spec.vertices.push(t.text.to_string());
                }
            }
            "edge" => {
                if toks.len() != 4 {
                    return Err(err(head.col, "expected `edge NAME r=V s=V`".into()));
                }
                let name = toks[1].text.to_string();
                let range = toks[2]
                    .text
                    .strip_prefix("r=")
                    .ok_or_else(|| err(toks[2].col, "expected `r=VERTEX`".into()))?;
                let source = toks[3]
                    .text
                    .strip_prefix("s=")
                    .ok_or_else(|| err(toks[3].col, "expected `s=VERTEX`".into()))?;
                if spec.edges.iter().any(|e| e.name == name) {
                    return Err(err(toks[1].col, format!("duplicate edge `{name}`")));
                }
                spec.edges.push(EdgeDecl {
                    name,
                    range: range.to_string(),
                    source: source.to_string(),
                });
            }
            "generator" => {
                if toks.len() != 4 {
                    return Err(err(head.col, "expected `generator NAME d=V t=V`".into()));
                }
                let name = toks[1].text.to_string();
                let dom = toks[2]
                    .text
                    .strip_prefix("d=")
                    .ok_or_else(|| err(toks[2].col, "expected `d=VERTEX`".into()))?;
                let tgt = toks[3]
                    .text
                    .strip_prefix("t=")
                    .ok_or_else(|| err(toks[3].col, "expected `t=VERTEX`".into()))?;
                if spec.generators.iter().any(|g| g.name == name) {
                    return Err(err(toks[1].col, format!("duplicate generator `{name}`")));
                }
                spec.generators.push(GenDecl {
                    name,
                    dom: dom.to_string(),
                    tgt: tgt.to_string(),
                });
            }
            "move" => {
                // move GEN EDGE -> EDGE | WORD...
                if toks.len() < 6 {
                    return Err(err(
                        head.col,
                        "expected `move GEN EDGE -> EDGE | WORD`".into(),
                    ));
                }
                let (gen, inverse) = match toks[1].text.strip_suffix("^-1") {
                    Some(base) => (base.to_string(), true),
                    None => (toks[1].text.to_string(), false),
                };
                if toks[3].text != "->" {
                    return Err(err(toks[3].col, "expected `->`".into()));
                }
                if toks[5].text != "|" {
                    return Err(err(toks[5].col, "expected `|` before the restriction".into()));
                }
                if toks.len() < 7 {
                    return Err(err(toks[5].col, "missing restriction word".into()));
                }
                let restriction = toks[6..]
                    .iter()
                    .map(|t| t.text)
                    .collect::<Vec<_>>()
                    .join(" ");
                spec.moves.push(MoveDecl {
                    gen,
                    inverse,
                    edge: toks[2].text.to_string(),
                    image: toks[4].text.to_string(),
                    restriction,
                });
            }
            "degree" => {
                if toks.len() != 3 {
                    return Err(err(head.col, "expected `degree GEN INT`".into()));
                }
                let value: i64 = toks[2]
                    .text
                    .parse()
                    .map_err(|_| err(toks[2].col, "expected an integer degree".into()))?;
                spec.degrees.push((toks[1].text.to_string(), value));
            }
            "isotropy" => {
                if toks.len() != 2 || !matches!(toks[1].text, "z" | "trivial") {
                    return Err(err(head.col, "expected `isotropy z|trivial`".into()));
                }
                spec.isotropy = Some(toks[1].text.to_string());
            }
            "budget" => {
                if toks.len() != 3 {
                    return Err(err(head.col, "expected `budget seen|len INT`".into()));
                }
                let value: usize = toks[2]
                    .text
                    .parse()
                    .map_err(|_| err(toks[2].col, "expected an integer budget".into()))?;
                match toks[1].text {
                    "seen" => spec.budget_seen = Some(value),
                    "len" => spec.budget_len = Some(value),
                    other => {
                        return Err(err(toks[1].col, format!("unknown budget `{other}`")))
                    }
                }
            }
            other => {
                return Err(err(head.col, format!("unknown declaration `{other}`")));
            }
        }
    }
    if spec.vertices.is_empty() {
        return Err(ParseError {
            line: 1,
            col: 1,
            message: "document declares no vertices (empty graph)".into(),
        });
    }
    Ok(spec)
}

/// Canonical emission: one declaration per line, in declaration order.
pub fn emit_spec(spec: &SystemSpec) -> String {
    let mut out = String::new();
    out.push_str("vertices ");
    out.push_str(&spec.vertices.join(" "));
    out.push('\n');
    for e in &spec.edges {
        out.push_str(&format!("edge {} r={} s={}\n", e.name, e.range, e.source));
    }
    for g in &spec.generators {
        out.push_str(&format!("generator {} d={} t={}\n", g.name, g.dom, g.tgt));
    }
    for m in &spec.moves {
        let gen = if m.inverse {
            format!("{}^-1", m.gen)
        } else {
            m.gen.clone()
        };
        out.push_str(&format!(
            "move {} {} -> {} | {}\n",
            gen, m.edge, m.image, m.restriction
        ));
    }
    for (g, d) in &spec.degrees {
        out.push_str(&format!("degree {g} {d}\n"));
    }
    if let Some(iso) = &spec.isotropy {
        out.push_str(&format!("isotropy {iso}\n"));
    }
    if let Some(b) = spec.budget_seen {
        out.push_str(&format!("budget seen {b}\n"));
    }
    if let Some(b) = spec.budget_len {
        out.push_str(&format!("budget len {b}\n"));
    }
    out
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("graph error: {0}")]
    Graph(#[from] selfsim_core::graph::GraphError),
    #[error("invalid graph: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidGraph(Vec<selfsim_core::graph::GraphError>),
    #[error("action error: {0}")]
    Action(#[from] selfsim_core::action::ActionError),
    #[error("word error in restriction `{text}`: {message}")]
    Word { text: String, message: String },
}

/// A built system bundle: the validated action system plus the declarations
/// that ride along with it.
#[derive(Debug)]
pub struct SystemBundle {
    pub system: ActionSystem,
    pub cocycle: DegreeCocycle,
    pub isotropy: IsotropyClass,
    pub budget: Budget,
}

/// Resolves names, parses restriction words and validates everything.
pub fn build_system(spec: &SystemSpec) -> Result<SystemBundle, BuildError> {
    let vertex_refs: Vec<&str> = spec.vertices.iter().map(|s| s.as_str()).collect();
    let edge_refs: Vec<(&str, &str, &str)> = spec
        .edges
        .iter()
        .map(|e| (e.name.as_str(), e.range.as_str(), e.source.as_str()))
        .collect();
    let graph = Graph::new(&vertex_refs, &edge_refs)?;
    let issues = graph.issues();
    if !issues.is_empty() {
        return Err(BuildError::InvalidGraph(issues));
    }

    let gen_index = |name: &str| -> Option<GenId> {
        spec.generators
            .iter()
            .position(|g| g.name == name)
            .map(|i| GenId(i as u32))
    };

    // words are parsed against the declared generators and vertices
    struct Env<'a> {
        spec: &'a SystemSpec,
        graph: &'a Graph,
    }
    impl selfsim_core::action::LetterEndpoints for Env<'_> {
        fn gen_dom(&self, g: GenId) -> selfsim_core::graph::VertexId {
            let name = &self.spec.generators[g.index()].dom;
            self.graph.vertex_by_name(name).expect("validated earlier")
        }
        fn gen_tgt(&self, g: GenId) -> selfsim_core::graph::VertexId {
            let name = &self.spec.generators[g.index()].tgt;
            self.graph.vertex_by_name(name).expect("validated earlier")
        }
    }
    let env = Env { spec, graph: &graph };

    let parse_word = |text: &str| -> Result<Word, BuildError> {
        let mut acc: Option<Word> = None;
        for token in text.split_whitespace() {
            let (name, inverse) = match token.strip_suffix("^-1") {
                Some(base) => (base, true),
                None => (token, false),
            };
            let factor = if let Some(g) = gen_index(name) {
                Word::Letters(vec![Letter { gen: g, inverse }])
            } else if let Some(v) = graph.vertex_by_name(name) {
                Word::unit(v)
            } else {
                return Err(BuildError::UnknownName(name.to_string()));
            };
            acc = Some(match acc {
                None => factor,
                Some(w) => w.product(&env, &factor).map_err(|e| BuildError::Word {
                    text: text.to_string(),
                    message: e.to_string(),
                })?,
            });
        }
        acc.ok_or_else(|| BuildError::Word {
            text: text.to_string(),
            message: "empty word".into(),
        })
    };

    // check generator endpoint names before moves reference them
    for g in &spec.generators {
        for v in [&g.dom, &g.tgt] {
            if graph.vertex_by_name(v).is_none() {
                return Err(BuildError::UnknownName(v.clone()));
            }
        }
    }

    let mut gens: Vec<GeneratorData> = spec
        .generators
        .iter()
        .map(|g| GeneratorData {
            name: g.name.clone(),
            dom: graph.vertex_by_name(&g.dom).unwrap(),
            tgt: graph.vertex_by_name(&g.tgt).unwrap(),
            moves: vec![],
            inverse_moves: vec![],
        })
        .collect();

    for m in &spec.moves {
        let g = gen_index(&m.gen).ok_or_else(|| BuildError::UnknownName(m.gen.clone()))?;
        let edge = graph
            .edge_by_name(&m.edge)
            .ok_or_else(|| BuildError::UnknownName(m.edge.clone()))?;
        let image = graph
            .edge_by_name(&m.image)
            .ok_or_else(|| BuildError::UnknownName(m.image.clone()))?;
        let restriction = parse_word(&m.restriction)?;
        let row = (edge, image, restriction);
        if m.inverse {
            gens[g.index()].inverse_moves.push(row);
        } else {
            gens[g.index()].moves.push(row);
        }
    }

    let mut degrees = vec![0i64; spec.generators.len()];
    for (name, d) in &spec.degrees {
        let g = gen_index(name).ok_or_else(|| BuildError::UnknownName(name.clone()))?;
        degrees[g.index()] = *d;
    }

    let system = ActionSystem::build(graph, gens)?;
    let cocycle = DegreeCocycle::new(&system, degrees);
    let isotropy = match spec.isotropy.as_deref() {
        Some("z") => IsotropyClass::InfiniteCyclic,
        Some("trivial") => IsotropyClass::Trivial,
        Some(_) => unreachable!("parser restricts the values"),
        None => {
            if spec.degrees.iter().any(|(_, d)| *d != 0) {
                IsotropyClass::InfiniteCyclic
            } else {
                IsotropyClass::Trivial
            }
        }
    };
    let default = Budget::default();
    let budget = Budget {
        max_seen: spec.budget_seen.unwrap_or(default.max_seen),
        max_len: spec.budget_len.unwrap_or(default.max_len),
    };
    Ok(SystemBundle {
        system,
        cocycle,
        isotropy,
        budget,
    })
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&emit_spec(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
# the bundled three-vertex example
vertices u v w
edge e1 r=u s=u
edge e2 r=v s=u
edge e3 r=u s=v
edge e4 r=w s=v
edge e5 r=w s=v
edge e6 r=v s=w

generator a d=u t=v
generator b d=v t=w
generator c d=w t=v

move a e1 -> e2 | u
move a e3 -> e6 | b
move b e2 -> e5 | a
move b e6 -> e4 | c
move c e4 -> e2 | a^-1
move c e5 -> e6 | b

degree a 1
degree b 1
degree c 1
isotropy z
"#;

    #[test]
    fn parses_and_builds_the_example() {
        let spec = parse_spec(EXAMPLE).unwrap();
        assert_eq!(spec.vertices, vec!["u", "v", "w"]);
        assert_eq!(spec.edges.len(), 6);
        assert_eq!(spec.moves.len(), 6);
        let bundle = build_system(&spec).unwrap();
        assert_eq!(bundle.system.generator_count(), 3);
        assert_eq!(bundle.isotropy, IsotropyClass::InfiniteCyclic);
    }

    #[test]
    fn round_trips_canonically() {
        let spec = parse_spec(EXAMPLE).unwrap();
        let emitted = emit_spec(&spec);
        let reparsed = parse_spec(&emitted).unwrap();
        assert_eq!(spec, reparsed);
        // emission of a canonical document is a fixed point
        assert_eq!(emit_spec(&reparsed), emitted);
    }

    #[test]
    fn reports_line_and_column() {
        let err = parse_spec("vertices u\nedge e1 r=u\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("edge"));

        let err = parse_spec("").unwrap_err();
        assert!(err.message.contains("empty graph"));

        let err = parse_spec("vertices u\nfrobnicate x\n").unwrap_err();
        assert_eq!((err.line, err.col), (2, 1));
    }

    #[test]
    fn explicit_inverse_rows_are_verified() {
        let good = format!("{EXAMPLE}\nmove a^-1 e2 -> e1 | u\n");
        assert!(build_system(&parse_spec(&good).unwrap()).is_ok());

        let bad = format!("{EXAMPLE}\nmove a^-1 e2 -> e1 | v\n");
        let err = build_system(&parse_spec(&bad).unwrap()).unwrap_err();
        assert!(err.to_string().contains("conflicts"), "{err}");
    }

    #[test]
    fn unknown_names_are_rejected() {
        let bad = EXAMPLE.replace("move a e1 -> e2 | u", "move a e1 -> e2 | q");
        let err = build_system(&parse_spec(&bad).unwrap()).unwrap_err();
        assert!(matches!(err, BuildError::UnknownName(ref n) if n == "q"));
    }
}
