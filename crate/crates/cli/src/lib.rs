//! Command surface for the selfsim toolkit.
//!
//! Subcommands: `validate`, `act`, `restrict`, `is-unit`, `equal`,
//! `pseudo-free`, `orbits`, `isotropy`, `sgp-mul`, `germ`, `finite-homology`,
//! `similarity-demo`, `ktheory`, `homology` and `report`. Exit codes: 0 on
//! success, 1 on a domain refusal (scope guard or an `Unknown` word-problem
//! answer), 2 on an input error. Budgets come from the command line
//! (`--budget-seen`, `--budget-len`), the environment (`ISUNIT_MAX_SEEN`,
//! `ISUNIT_MAX_LEN`), the spec file, then the defaults, in that order.

pub mod gpd_format;
pub mod report;
pub mod spec_format;

use std::fmt::Write as _;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand};

use selfsim_core::action::{ActionSystem, Answer, Budget, IsUnit, Witness, Word};
use selfsim_core::finitegpd::similarity::{
    canonical_similarity_action, canonical_similarity_cocycle, check_similarity, GroupoidAction,
};
use selfsim_core::finitegpd::{build as gbuild, nerve, ElemId, FiniteGroupoid, GroupoidHom};
use selfsim_core::germ::{self, EvPath, Germ, EV_BUDGET};
use selfsim_core::graph::Path;
use selfsim_core::homol;
use selfsim_core::kthy;
use selfsim_core::semigroup::{self, Triple};

use report::{homology_json, FullReportJson, KTheoryJson, ProbeJson, SystemSummaryJson};
use spec_format::SystemBundle;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUSAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "selfsim",
    version,
    about = "Exact computation with self-similar groupoid actions on graph path spaces"
)]
struct Cli {
    /// Word-problem budget: maximum seen-set size.
    #[arg(long, global = true)]
    budget_seen: Option<usize>,
    /// Word-problem budget: maximum word length.
    #[arg(long, global = true)]
    budget_len: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a spec file, validate the graph and the move tables.
    Validate { spec: PathBuf },
    /// Apply a word to a path: prints the image path.
    Act {
        spec: PathBuf,
        word: String,
        path: String,
    },
    /// Restriction of a word along a path: prints the restricted word.
    Restrict {
        spec: PathBuf,
        word: String,
        path: String,
    },
    /// Decide whether a word acts as a unit (yes / no with witness / unknown).
    IsUnit { spec: PathBuf, word: String },
    /// Decide equality of two words as actions.
    Equal {
        spec: PathBuf,
        word1: String,
        word2: String,
    },
    /// Search for pseudo-freeness violations up to a word length.
    PseudoFree {
        spec: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Orbit partition of the vertices.
    Orbits { spec: PathBuf },
    /// Isotropy evidence at a vertex: certified non-unit loops and powers.
    Isotropy {
        spec: PathBuf,
        vertex: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        power: u32,
    },
    /// Multiply two inverse-semigroup triples `(alpha, word, beta)`.
    SgpMul {
        spec: PathBuf,
        left: String,
        right: String,
    },
    /// Germ arithmetic over eventually periodic points.
    Germ {
        spec: PathBuf,
        #[command(subcommand)]
        op: GermOp,
    },
    /// Homology of a finite groupoid file.
    FiniteHomology {
        gpd: PathBuf,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
    },
    /// Run the built-in similarity instances and compare homology.
    SimilarityDemo {
        #[arg(long, default_value_t = 3)]
        nmax: usize,
    },
    /// The K-theory pipeline.
    Ktheory {
        spec: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// The homology pipeline for the germ groupoid.
    Homology {
        spec: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Full pipeline report.
    Report {
        spec: PathBuf,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GermOp {
    /// Compose two germs `(alpha, word, beta, prefix % cycle)`.
    Compose { left: String, right: String },
    /// Invert a germ.
    Invert { germ: String },
    /// Budgeted germ equality.
    Equal { left: String, right: String },
    /// The degree cocycle `|alpha| - |beta|`.
    Rho { germ: String },
    /// Standard bisection of a word, edge or vertex.
    Bisection { item: String },
}

/// Runs the CLI on explicit arguments and returns `(exit code, stdout)`.
pub fn run(args: Vec<String>) -> (i32, String) {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => return (EXIT_INPUT, e.to_string()),
    };
    let mut out = String::new();
    let code = match dispatch(&cli, &mut out) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(out, "error: {}", failure.message);
            failure.code
        }
    };
    (code, out)
}

struct Failure {
    code: i32,
    message: String,
}

fn input_err(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.to_string(),
    }
}

fn refusal(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_REFUSAL,
        message: message.to_string(),
    }
}

fn load_bundle(path: &FsPath) -> Result<SystemBundle, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))?;
    let spec = spec_format::parse_spec(&text).map_err(input_err)?;
    spec_format::build_system(&spec).map_err(input_err)
}

fn resolve_budget(cli: &Cli, bundle: &SystemBundle) -> Budget {
    let env_usize =
        |name: &str| -> Option<usize> { std::env::var(name).ok().and_then(|v| v.parse().ok()) };
    Budget {
        max_seen: cli
            .budget_seen
            .or_else(|| env_usize("ISUNIT_MAX_SEEN"))
            .unwrap_or(bundle.budget.max_seen),
        max_len: cli
            .budget_len
            .or_else(|| env_usize("ISUNIT_MAX_LEN"))
            .unwrap_or(bundle.budget.max_len),
    }
}

fn parse_word_arg(sys: &ActionSystem, text: &str) -> Result<Word, Failure> {
    sys.parse_word(text).map_err(input_err)
}

/// A path argument: space-separated edge names, or a vertex name for the
/// empty path at that vertex.
fn parse_path_arg(sys: &ActionSystem, text: &str) -> Result<Path, Failure> {
    let graph = sys.graph();
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(input_err("empty path argument"));
    }
    if tokens.len() == 1 {
        if let Some(v) = graph.vertex_by_name(tokens[0]) {
            return Ok(Path::empty(v));
        }
    }
    let edges: Vec<_> = tokens
        .iter()
        .map(|t| {
            graph
                .edge_by_name(t)
                .ok_or_else(|| input_err(format!("unknown edge `{t}`")))
        })
        .collect::<Result<_, _>>()?;
    Path::from_edges(graph, &edges).map_err(input_err)
}

/// A triple argument `(alpha, word, beta)`; parentheses optional, fields
/// comma-separated. `zero` denotes the zero element.
fn parse_triple_arg(sys: &ActionSystem, text: &str) -> Result<Triple, Failure> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    if inner.trim() == "zero" {
        return Ok(Triple::Zero);
    }
    let fields: Vec<&str> = inner.split(',').map(|f| f.trim()).collect();
    if fields.len() != 3 {
        return Err(input_err(format!(
            "expected `(alpha, word, beta)`, got `{text}`"
        )));
    }
    let alpha = parse_path_arg(sys, fields[0])?;
    let word = parse_word_arg(sys, fields[1])?;
    let beta = parse_path_arg(sys, fields[2])?;
    Triple::new(sys, alpha, word, beta).map_err(input_err)
}

/// A point argument `prefix % cycle`, each side a path argument; the prefix
/// may be a vertex name for the empty prefix.
fn parse_point_arg(sys: &ActionSystem, text: &str) -> Result<EvPath, Failure> {
    let parts: Vec<&str> = text.split('%').map(|p| p.trim()).collect();
    if parts.len() != 2 {
        return Err(input_err(format!(
            "expected `prefix % cycle` in point, got `{text}`"
        )));
    }
    let prefix = parse_path_arg(sys, parts[0])?;
    let cycle = parse_path_arg(sys, parts[1])?;
    EvPath::new(prefix, cycle).map_err(input_err)
}

/// A germ argument `(alpha, word, beta, prefix % cycle)`.
fn parse_germ_arg(sys: &ActionSystem, text: &str) -> Result<Germ, Failure> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let fields: Vec<&str> = inner.split(',').map(|f| f.trim()).collect();
    if fields.len() != 4 {
        return Err(input_err(format!(
            "expected `(alpha, word, beta, prefix % cycle)`, got `{text}`"
        )));
    }
    let alpha = parse_path_arg(sys, fields[0])?;
    let word = parse_word_arg(sys, fields[1])?;
    let beta = parse_path_arg(sys, fields[2])?;
    let point = parse_point_arg(sys, fields[3])?;
    Germ::new(sys, alpha, word, beta, point).map_err(input_err)
}

fn show_point(sys: &ActionSystem, xi: &EvPath) -> String {
    format!(
        "{} % {}",
        sys.graph().path_string(xi.prefix_part()),
        sys.graph().path_string(xi.cycle_part())
    )
}

fn show_germ(sys: &ActionSystem, g: &Germ) -> String {
    format!(
        "({}, {}, {}, {})",
        sys.graph().path_string(&g.alpha),
        sys.word_string(&g.word),
        sys.graph().path_string(&g.beta),
        show_point(sys, &g.point)
    )
}

fn show_triple(sys: &ActionSystem, t: &Triple) -> String {
    match t {
        Triple::Zero => "zero".to_string(),
        Triple::Elem { alpha, word, beta } => format!(
            "({}, {}, {})",
            sys.graph().path_string(alpha),
            sys.word_string(word),
            sys.graph().path_string(beta)
        ),
    }
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<i32, Failure> {
    match &cli.command {
        Command::Validate { spec } => {
            let bundle = load_bundle(spec)?;
            let g = bundle.system.graph();
            let _ = writeln!(
                out,
                "ok: {} vertices, {} edges, {} generators",
                g.vertex_count(),
                g.edge_count(),
                bundle.system.generator_count()
            );
            Ok(EXIT_OK)
        }
        Command::Act { spec, word, path } => {
            let bundle = load_bundle(spec)?;
            let sys = &bundle.system;
            let w = parse_word_arg(sys, word)?;
            let p = parse_path_arg(sys, path)?;
            let image = sys.act_path(&w, &p).map_err(input_err)?;
            let _ = writeln!(out, "{}", sys.graph().path_string(&image));
            Ok(EXIT_OK)
        }
        Command::Restrict { spec, word, path } => {
            let bundle = load_bundle(spec)?;
            let sys = &bundle.system;
            let w = parse_word_arg(sys, word)?;
            let p = parse_path_arg(sys, path)?;
            let rest = sys.restrict_path(&w, &p).map_err(input_err)?;
            let _ = writeln!(out, "{}", sys.word_string(&rest));
            Ok(EXIT_OK)
        }
        Command::IsUnit { spec, word } => {
            let bundle = load_bundle(spec)?;
            let sys = &bundle.system;
            let budget = resolve_budget(cli, &bundle);
            let w = parse_word_arg(sys, word)?;
            match sys.is_unit(&w, budget) {
                IsUnit::Yes => {
                    let _ = writeln!(out, "yes");
                    Ok(EXIT_OK)
                }
                IsUnit::No(Witness::MovedPath { path, image }) => {
                    let _ = writeln!(
                        out,
                        "no: moves {} to {}",
                        sys.graph().path_string(&path),
                        sys.graph().path_string(&image)
                    );
                    Ok(EXIT_OK)
                }
                IsUnit::No(Witness::EndpointMismatch { dom, tgt }) => {
                    let _ = writeln!(
                        out,
                        "no: endpoints differ (d = {}, t = {})",
                        sys.graph().vertex_name(dom),
                        sys.graph().vertex_name(tgt)
                    );
                    Ok(EXIT_OK)
                }
                IsUnit::Unknown => {
                    let _ = writeln!(
                        out,
                        "unknown: budget exhausted (seen <= {}, len <= {})",
                        budget.max_seen, budget.max_len
                    );
                    Ok(EXIT_REFUSAL)
                }
            }
        }
        Command::Equal { spec, word1, word2 } => {
            let bundle = load_bundle(spec)?;
            let sys = &bundle.system;
            let budget = resolve_budget(cli, &bundle);
            let w1 = parse_word_arg(sys, word1)?;
            let w2 = parse_word_arg(sys, word2)?;
            match sys.equal(&w1, &w2, budget) {
                IsUnit::Yes => {
                    let _ = writeln!(out, "equal");
                    Ok(EXIT_OK)
                }
                IsUnit::No(_) => {
                    let _ = writeln!(out, "not equal");
                    Ok(EXIT_OK)
                }
                IsUnit::Unknown => {
                    let _ = writeln!(out, "unknown: budget exhausted");
                    Ok(EXIT_REFUSAL)
                }
            }
        }
        Command::PseudoFree { spec, depth } => {
            let bundle = load_bundle(spec)?;
            let sys = &bundle.system;
            let budget = resolve_budget(cli, &bundle);
            let report = sys.pseudo_free_probe(*depth, budget);
            match &report.violation {
                Some((w, e)) => {
                    let _ = writeln!(
                        out,
                        "violation: word {} fixes edge {} with unit restriction but is not a unit",
                        sys.word_string(w),
                        sys.graph().edge_name(*e)
                    );
                }
                None if report.inconclusive.is_empty() => {
                    let _ = writeln!(out, "no violation up to length {depth}");
                }
                None => {
                    let _ = writeln!(
                        out,
                        "no violation up to length {depth}; {} word(s) inconclusive",
                        report.inconclusive.len()
                    );
                }
            }
            Ok(EXIT_OK)
        }
        Command::Orbits { spec } => {
            let bundle = load_bundle(spec)?;
            let sys = &bundle.system;
            for class in sys.orbits() {
                let names: Vec<&str> =
                    class.iter().map(|&v| sys.graph().vertex_name(v)).collect();
                let _ = writeln!(out, "{{{}}}", names.join(", "));
            }
            let _ = writeln!(
                out,
                "transitive: {}",
                if sys.is_transitive() { "yes" } else { "no" }
            );
            Ok(EXIT_OK)
        }
        Command::Isotropy {
            spec,
            vertex,
            depth,
            power,
        } => {
            let bundle = load_bundle(spec)?;
            let sys = &bundle.system;
            let budget = resolve_budget(cli, &bundle);
            let v = sys
                .graph()
                .vertex_by_name(vertex)
                .ok_or_else(|| input_err(format!("unknown vertex `{vertex}`")))?;
            let report = sys.isotropy_probe(v, *depth, *power, budget);
            if report.loops.is_empty() {
                let _ = writeln!(out, "no certified non-unit loops up to length {depth}");
            }
            for l in &report.loops {
                let _ = writeln!(
                    out,
                    "loop {}: powers 1..={} non-unit{}",
                    sys.word_string(&l.word),
                    l.nonunit_powers,
                    if l.inconclusive {
                        " (inconclusive beyond)"
                    } else {
                        ""
                    }
                );
            }
            if !report.unknown_words.is_empty() {
                let _ = writeln!(out, "{} word(s) unknown", report.unknown_words.len());
            }
            Ok(EXIT_OK)
        }
        Command::SgpMul { spec, left, right } => {
            let bundle = load_bundle(spec)?;
            let sys = &bundle.system;
            let x = parse_triple_arg(sys, left)?;
            let y = parse_triple_arg(sys, right)?;
            let product = semigroup::multiply(sys, &x, &y).map_err(input_err)?;
            let _ = writeln!(out, "{}", show_triple(sys, &product));
            Ok(EXIT_OK)
        }
        Command::Germ { spec, op } => {
            let bundle = load_bundle(spec)?;
            let sys = &bundle.system;
            let budget = resolve_budget(cli, &bundle);
            match op {
                GermOp::Compose { left, right } => {
                    let g1 = parse_germ_arg(sys, left)?;
                    let g2 = parse_germ_arg(sys, right)?;
                    let product = germ::compose(sys, &g1, &g2, EV_BUDGET).map_err(input_err)?;
                    let _ = writeln!(out, "{}", show_germ(sys, &product));
                }
                GermOp::Invert { germ: text } => {
                    let g = parse_germ_arg(sys, text)?;
                    let inv = germ::invert(sys, &g, EV_BUDGET).map_err(input_err)?;
                    let _ = writeln!(out, "{}", show_germ(sys, &inv));
                }
                GermOp::Equal { left, right } => {
                    let g1 = parse_germ_arg(sys, left)?;
                    let g2 = parse_germ_arg(sys, right)?;
                    match germ::germ_equal(sys, &g1, &g2, budget) {
                        Answer::Yes => {
                            let _ = writeln!(out, "equal");
                        }
                        Answer::No => {
                            let _ = writeln!(out, "not equal");
                        }
                        Answer::Unknown => {
                            let _ = writeln!(out, "unknown: budget exhausted");
                            return Ok(EXIT_REFUSAL);
                        }
                    }
                }
                GermOp::Rho { germ: text } => {
                    let g = parse_germ_arg(sys, text)?;
                    let _ = writeln!(out, "{}", g.rho());
                }
                GermOp::Bisection { item } => {
                    let b = if let Some(v) = sys.graph().vertex_by_name(item) {
                        germ::std_bisection_vertex(v)
                    } else if let Some(e) = sys.graph().edge_by_name(item) {
                        germ::std_bisection_edge(sys, e)
                    } else {
                        let w = parse_word_arg(sys, item)?;
                        germ::std_bisection_word(sys, &w)
                    };
                    let _ = writeln!(
                        out,
                        "B({}, {}, {}; Z({}))  rho = {}",
                        sys.graph().path_string(&b.alpha),
                        sys.word_string(&b.word),
                        sys.graph().path_string(&b.beta),
                        sys.graph().path_string(&b.beta),
                        b.rho()
                    );
                }
            }
            Ok(EXIT_OK)
        }
        Command::FiniteHomology { gpd, nmax } => {
            let text = std::fs::read_to_string(gpd)
                .map_err(|e| input_err(format!("cannot read {}: {e}", gpd.display())))?;
            let g = gpd_format::parse_groupoid(&text).map_err(input_err)?;
            let _ = writeln!(out, "{g}");
            let groups = nerve::homology(&g, *nmax).map_err(input_err)?;
            for (n, h) in groups.iter().enumerate() {
                let _ = writeln!(out, "H{n} = {h}");
            }
            Ok(EXIT_OK)
        }
        Command::SimilarityDemo { nmax } => similarity_demo(out, *nmax),
        Command::Ktheory { spec, depth } => {
            let bundle = load_bundle(spec)?;
            let sys = &bundle.system;
            let budget = resolve_budget(cli, &bundle);
            let report = kthy::k_pipeline(sys, &bundle.cocycle, bundle.isotropy, *depth, budget)
                .map_err(refusal)?;
            let json: KTheoryJson = (&report).into();
            write_ktheory_text(out, &json);
            Ok(EXIT_OK)
        }
        Command::Homology { spec, depth } => {
            let bundle = load_bundle(spec)?;
            let sys = &bundle.system;
            let budget = resolve_budget(cli, &bundle);
            let report =
                homol::homology_pipeline(sys, &bundle.cocycle, bundle.isotropy, *depth, budget)
                    .map_err(refusal)?;
            let json = homology_json(sys, &report);
            write_homology_text(out, &json);
            Ok(EXIT_OK)
        }
        Command::Report {
            spec,
            format,
            depth,
        } => {
            let bundle = load_bundle(spec)?;
            let sys = &bundle.system;
            let budget = resolve_budget(cli, &bundle);
            let k_report = kthy::k_pipeline(sys, &bundle.cocycle, bundle.isotropy, *depth, budget)
                .map_err(refusal)?;
            let h_report =
                homol::homology_pipeline(sys, &bundle.cocycle, bundle.isotropy, *depth, budget)
                    .map_err(refusal)?;
            let pf = sys.pseudo_free_probe(*depth, budget);
            let graph = sys.graph();
            let orbits: Vec<Vec<String>> = sys
                .orbits()
                .iter()
                .map(|class| {
                    class
                        .iter()
                        .map(|&v| graph.vertex_name(v).to_string())
                        .collect()
                })
                .collect();
            let mut isotropy_evidence = Vec::new();
            for v in graph.vertices() {
                let probe = sys.isotropy_probe(v, *depth, 8, budget);
                for l in &probe.loops {
                    isotropy_evidence.push(format!(
                        "{}: {} (powers 1..={} non-unit)",
                        graph.vertex_name(v),
                        sys.word_string(&l.word),
                        l.nonunit_powers
                    ));
                }
            }
            let full = FullReportJson {
                system: SystemSummaryJson {
                    vertices: graph.vertex_count(),
                    edges: graph.edge_count(),
                    generators: sys.generator_count(),
                    orbits,
                    transitive: sys.is_transitive(),
                },
                pseudo_free: ProbeJson {
                    passed: pf.passed(),
                    bound: *depth,
                    detail: if pf.passed() {
                        "no violation".into()
                    } else {
                        "violation or inconclusive".into()
                    },
                },
                isotropy_evidence,
                ktheory: (&k_report).into(),
                homology: homology_json(sys, &h_report),
            };
            match format.as_str() {
                "json" => {
                    let _ = writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&full).expect("report serializes")
                    );
                }
                "text" => write_full_text(out, &full),
                other => return Err(input_err(format!("unknown format `{other}`"))),
            }
            Ok(EXIT_OK)
        }
    }
}

fn write_ktheory_text(out: &mut String, k: &KTheoryJson) {
    let _ = writeln!(out, "isotropy class     {}", k.isotropy_class);
    let _ = writeln!(out, "D                  {}", k.level_multiplicity.text());
    let _ = writeln!(out, "Phi0               {}", k.phi0.text());
    let _ = writeln!(out, "Phi1               {}", k.phi1.text());
    let _ = writeln!(out, "K0(groupoid alg)   {}", k.k0_groupoid_algebra.text());
    let _ = writeln!(out, "K1(groupoid alg)   {}", k.k1_groupoid_algebra.text());
    let _ = writeln!(out, "K0(core)           {}", k.k0_core.text());
    let _ = writeln!(out, "K1(core)           {}", k.k1_core.text());
    let _ = writeln!(out, "K0(ambient)        {}", k.k0_ambient.text());
    let _ = writeln!(out, "K1(ambient)        {}", k.k1_ambient.text());
    let _ = writeln!(
        out,
        "probe bounds       pseudo-free <= {}, cocycle <= {}",
        k.pseudo_free_bound, k.cocycle_bound
    );
}

fn write_homology_text(out: &mut String, h: &report::HomologyJson) {
    let _ = writeln!(out, "assumptions:");
    let probe_line = |name: &str, p: &ProbeJson| {
        format!(
            "  {:24} {} (bound {}; {})",
            name,
            if p.passed { "pass" } else { "FAIL" },
            p.bound,
            p.detail
        )
    };
    let a = &h.assumptions;
    let _ = writeln!(out, "{}", probe_line("transitive", &a.transitive));
    let _ = writeln!(out, "{}", probe_line("pseudo-free", &a.pseudo_free));
    let _ = writeln!(out, "{}", probe_line("cocycle", &a.cocycle_validated));
    let _ = writeln!(out, "{}", probe_line("isotropy", &a.isotropy));
    let _ = writeln!(
        out,
        "{}",
        probe_line("free on infinite paths", &a.free_on_infinite_paths)
    );
    let _ = writeln!(out, "level H0           {}", h.level_h0.text());
    let _ = writeln!(out, "level H1           {}", h.level_h1.text());
    let _ = writeln!(out, "level generator    {}", h.level_generator);
    let _ = writeln!(out, "inclusion mult.    {}", h.inclusion_multiplier.text());
    let _ = writeln!(out, "union H0           {}", h.union_h0.text());
    let _ = writeln!(out, "union H1           {}", h.union_h1.text());
    let _ = writeln!(
        out,
        "rho_*              {} (conjugator from edge {})",
        h.rho_star.text(),
        h.conjugator_edge
    );
    let _ = writeln!(out, "H0(germ groupoid)  {}", h.h0.text());
    let _ = writeln!(out, "H1(germ groupoid)  {}", h.h1.text());
    let _ = writeln!(out, "H2(germ groupoid)  {}", h.h2.text());
    let _ = writeln!(out, "tail               {}", h.tail.text());
    if let Some(ok) = h.rank_audit {
        let _ = writeln!(
            out,
            "rank audit         {}",
            if ok { "consistent" } else { "INCONSISTENT" }
        );
    }
}

fn write_full_text(out: &mut String, full: &FullReportJson) {
    let _ = writeln!(out, "== system ==");
    let _ = writeln!(
        out,
        "vertices {}, edges {}, generators {}",
        full.system.vertices, full.system.edges, full.system.generators
    );
    let orbit_strs: Vec<String> = full
        .system
        .orbits
        .iter()
        .map(|c| format!("{{{}}}", c.join(", ")))
        .collect();
    let _ = writeln!(
        out,
        "orbits {} ({})",
        orbit_strs.join(" "),
        if full.system.transitive {
            "transitive"
        } else {
            "not transitive"
        }
    );
    let _ = writeln!(
        out,
        "pseudo-free        {} (bound {}) [probe-bounded]",
        if full.pseudo_free.passed {
            "pass"
        } else {
            "FAIL"
        },
        full.pseudo_free.bound
    );
    for line in &full.isotropy_evidence {
        let _ = writeln!(out, "isotropy evidence  {line} [probe-bounded]");
    }
    let _ = writeln!(out, "== k-theory ==");
    write_ktheory_text(out, &full.ktheory);
    let _ = writeln!(out, "== homology ==");
    write_homology_text(out, &full.homology);
}

/// The built-in similarity instances: for each one, build the canonical data
/// for both statements, verify the identities, and compare homology of each
/// similar pair up to `nmax`.
fn similarity_demo(out: &mut String, nmax: usize) -> Result<i32, Failure> {
    let mut all_ok = true;
    for (name, action, cocycle_pair) in demo_instances() {
        let _ = writeln!(out, "instance: {name}");
        let (data, _s, k) = canonical_similarity_action(&action).map_err(input_err)?;
        match check_similarity(&data) {
            Ok(()) => {
                let _ = writeln!(
                    out,
                    "  action statement: identities hold on {} elements",
                    k.gpd.size()
                );
            }
            Err(w) => {
                all_ok = false;
                let _ = writeln!(
                    out,
                    "  action statement: FAILED at {} on side {}",
                    w.element, w.side
                );
            }
        }
        let h_left = nerve::homology(&data.left, nmax).map_err(input_err)?;
        let h_right = nerve::homology(&data.right, nmax).map_err(input_err)?;
        let agree = h_left == h_right;
        all_ok &= agree;
        let _ = writeln!(
            out,
            "  homology (degrees 0..{nmax}): {} vs {} -> {}",
            fmt_groups(&h_left),
            fmt_groups(&h_right),
            if agree { "agree" } else { "DISAGREE" }
        );

        let (g_g, gamma_g, rho) = cocycle_pair;
        let (data2, _p, m) =
            canonical_similarity_cocycle(&g_g, &gamma_g, &rho).map_err(input_err)?;
        match check_similarity(&data2) {
            Ok(()) => {
                let _ = writeln!(
                    out,
                    "  cocycle statement: identities hold on {} elements",
                    m.gpd.size()
                );
            }
            Err(w) => {
                all_ok = false;
                let _ = writeln!(
                    out,
                    "  cocycle statement: FAILED at {} on side {}",
                    w.element, w.side
                );
            }
        }
        let h_left = nerve::homology(&data2.left, nmax).map_err(input_err)?;
        let h_right = nerve::homology(&data2.right, nmax).map_err(input_err)?;
        let agree = h_left == h_right;
        all_ok &= agree;
        let _ = writeln!(
            out,
            "  homology (degrees 0..{nmax}): {} vs {} -> {}",
            fmt_groups(&h_left),
            fmt_groups(&h_right),
            if agree { "agree" } else { "DISAGREE" }
        );
    }
    if all_ok {
        Ok(EXIT_OK)
    } else {
        Err(refusal("a similarity instance failed"))
    }
}

fn fmt_groups(groups: &[selfsim_core::zlin::AbGroup]) -> String {
    let strs: Vec<String> = groups.iter().map(|g| g.to_string()).collect();
    format!("({})", strs.join(", "))
}

/// The three bundled instances: a trivial action, the flip on the pair
/// groupoid with the identity cocycle, and the three-point transitive
/// groupoid with order-two isotropy.
#[allow(clippy::type_complexity)]
pub fn demo_instances() -> Vec<(
    &'static str,
    GroupoidAction,
    (FiniteGroupoid, FiniteGroupoid, GroupoidHom),
)> {
    let trivial = gbuild::trivial();
    let pair2 = gbuild::pair_groupoid(2);
    let z2 = gbuild::cyclic_group(2);
    let vhv = gbuild::transitive_with_cyclic_isotropy(3, 2);

    // instance 1: trivial group acting trivially; trivial cocycle
    let a1 =
        GroupoidAction::trivial_of_group(trivial.clone(), pair2.clone()).expect("trivial action");
    let rho1 = GroupoidHom::new(&trivial, &trivial, vec![ElemId(0)]).expect("identity");
    let i1 = (
        "trivial action on pair(2)",
        a1,
        (trivial.clone(), trivial.clone(), rho1),
    );

    // instance 2: Z/2 flipping pair(2); identity cocycle on Z/2
    let sigma = GroupoidHom::new(
        &pair2,
        &pair2,
        vec![
            pair2.by_name("p22").unwrap(),
            pair2.by_name("p21").unwrap(),
            pair2.by_name("p12").unwrap(),
            pair2.by_name("p11").unwrap(),
        ],
    )
    .expect("the flip is an automorphism");
    let a2 =
        GroupoidAction::of_cyclic_by_automorphism(z2.clone(), pair2, &sigma).expect("flip action");
    let rho2 = GroupoidHom::identity(&z2);
    let i2 = ("Z/2 flip on pair(2)", a2, (z2.clone(), z2, rho2));

    // instance 3: the 3-unit transitive groupoid with Z/2 isotropy, trivial
    // group acting, trivial cocycle
    let a3 =
        GroupoidAction::trivial_of_group(trivial.clone(), vhv.clone()).expect("trivial action");
    let rho3 =
        GroupoidHom::new(&vhv, &trivial, vec![ElemId(0); vhv.size()]).expect("collapse cocycle");
    let i3 = (
        "transitive 3-unit groupoid with Z/2 isotropy",
        a3,
        (vhv, trivial, rho3),
    );

    vec![i1, i2, i3]
}
