//! The bundled worked example: a three-vertex graph with six edges and the
//! three-generator action whose K-theory and homology the pipelines
//! reproduce. Used throughout the test suites and handy for experiments.

use crate::action::probes::DegreeCocycle;
use crate::action::{ActionSystem, GeneratorData, Word};
use crate::graph::Graph;

/// Three vertices `u, v, w`; a loop `e1` at `u`, a `u`-`v` cycle `e2`/`e3`,
/// two parallel edges `e4`, `e5` from `v` into `w` and `e6` back.
/// Edges are `(name, range, source)`.
pub fn example_graph() -> Graph {
    Graph::new(
        &["u", "v", "w"],
        &[
            ("e1", "u", "u"),
            ("e2", "v", "u"),
            ("e3", "u", "v"),
            ("e4", "w", "v"),
            ("e5", "w", "v"),
            ("e6", "v", "w"),
        ],
    )
    .expect("the bundled graph is well formed")
}

/// The full action system: generators `a : u -> v`, `b : v -> w`,
/// `c : w -> v` with moves
///
/// ```text
/// a.e1 = e2, a|_e1 = u     a.e3 = e6, a|_e3 = b
/// b.e2 = e5, b|_e2 = a     b.e6 = e4, b|_e6 = c
/// c.e4 = e2, c|_e4 = a^-1  c.e5 = e6, c|_e5 = b
/// ```
pub fn example_system() -> ActionSystem {
    build_example(&["a", "b", "c"])
}

/// Three vertices with one loop each and a single generator `a : u -> v`
/// whose restriction is `a` itself. Orbits are `{u, v}` and `{w}`.
pub fn two_orbit_system() -> ActionSystem {
    let graph = Graph::new(
        &["u", "v", "w"],
        &[("lu", "u", "u"), ("lv", "v", "v"), ("lw", "w", "w")],
    )
    .unwrap();
    let v = |name: &str| graph.vertex_by_name(name).unwrap();
    let e = |name: &str| graph.edge_by_name(name).unwrap();
    let a = GeneratorData {
        name: "a".into(),
        dom: v("u"),
        tgt: v("v"),
        moves: vec![(e("lu"), e("lv"), Word::generator(crate::action::GenId(0)))],
        inverse_moves: vec![],
    };
    ActionSystem::build(graph, vec![a]).unwrap()
}

fn build_example(which: &[&str]) -> ActionSystem {
    let graph = example_graph();
    let v = |name: &str| graph.vertex_by_name(name).unwrap();
    let e = |name: &str| graph.edge_by_name(name).unwrap();
    let unit = |name: &str| Word::unit(v(name));

    // generator ids follow declaration order of `which`
    let gen_word = |name: &str| -> Word {
        let idx = which
            .iter()
            .position(|n| *n == name)
            .unwrap_or_else(|| panic!("restriction references undeclared generator {name}"));
        Word::generator(crate::action::GenId(idx as u32))
    };

    let mut gens = Vec::new();
    for &name in which {
        let data = match name {
            "a" => GeneratorData {
                name: "a".into(),
                dom: v("u"),
                tgt: v("v"),
                moves: vec![
                    (e("e1"), e("e2"), unit("u")),
                    (e("e3"), e("e6"), gen_word("b")),
                ],
                inverse_moves: vec![],
            },
            "b" => GeneratorData {
                name: "b".into(),
                dom: v("v"),
                tgt: v("w"),
                moves: vec![
                    (e("e2"), e("e5"), gen_word("a")),
                    (e("e6"), e("e4"), gen_word("c")),
                ],
                inverse_moves: vec![],
            },
            "c" => GeneratorData {
                name: "c".into(),
                dom: v("w"),
                tgt: v("v"),
                moves: vec![
                    (e("e4"), e("e2"), gen_word("a").inverse()),
                    (e("e5"), e("e6"), gen_word("b")),
                ],
                inverse_moves: vec![],
            },
            other => panic!("unknown generator {other}"),
        };
        gens.push(data);
    }
    ActionSystem::build(graph, gens).expect("the bundled tables validate")
}

/// Degree 1 on each of `a`, `b`, `c`: the cocycle realizing the isotropy as
/// the integers.
pub fn example_cocycle(sys: &ActionSystem) -> DegreeCocycle {
    DegreeCocycle::new(sys, vec![1; sys.generator_count()])
}
