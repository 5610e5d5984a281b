//! Acceptance suite: end-to-end checks of the worked example and the
//! property suites backing the machinery. One test per criterion; each
//! prints a single pass line (failures panic with the offending data).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use selfsim_cli::spec_format::{build_system, parse_spec, SystemBundle};
use selfsim_core::action::probes::DegreeCocycle;
use selfsim_core::action::{ActionSystem, Answer, IsUnit, Letter, LetterEndpoints, Witness, Word};
use selfsim_core::finitegpd::similarity::{
    canonical_similarity_action, canonical_similarity_cocycle, check_similarity,
};
use selfsim_core::finitegpd::{build as gbuild, nerve, FiniteGroupoid};
use selfsim_core::germ::{compose, germ_equal, invert, EvPath, Germ, EV_BUDGET};
use selfsim_core::graph::{Path, VertexId};
use selfsim_core::homol::{self, ExtensionResult};
use selfsim_core::kthy::{self, IsotropyClass, Monomial, MonomialTerm};
use selfsim_core::semigroup::{is_idempotent, multiply, triple_equal, Triple};
use selfsim_core::zlin::{self, AbGroup, IntMatrix};

fn data_path(name: &str) -> String {
    format!("{}/../../data/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn load_example() -> SystemBundle {
    let text = std::fs::read_to_string(data_path("example6.spec")).expect("bundled spec");
    build_system(&parse_spec(&text).expect("parses")).expect("validates")
}

fn pass(n: u32, what: &str) {
    println!("[acceptance] criterion {n:02}: PASS - {what}");
}

// ---------------------------------------------------------------- criterion 1

#[test]
fn criterion_01_bundled_tables_and_derived_inverses() {
    let bundle = load_example();
    let sys = &bundle.system;
    let g = sys.graph();
    // all twelve derived inverse facts: edge image and restriction word
    let expected = [
        ("a", "e2", "e1", "u"),
        ("a", "e6", "e3", "b^-1"),
        ("b", "e5", "e2", "a^-1"),
        ("b", "e4", "e6", "c^-1"),
        ("c", "e2", "e4", "a"),
        ("c", "e6", "e5", "b^-1"),
    ];
    let mut facts = 0;
    for (gen, from, to, rest) in expected {
        let letter = Letter::new(sys.gen_by_name(gen).unwrap()).inverted();
        let e = g.edge_by_name(from).unwrap();
        let (img, r) = sys.move_row(letter, e).expect("inverse row exists").clone();
        assert_eq!(g.edge_name(img), to, "{gen}^-1 . {from}");
        facts += 1;
        assert_eq!(sys.word_string(&r), rest, "{gen}^-1 |_{from}");
        facts += 1;
    }
    assert_eq!(facts, 12);
    pass(1, "bundled spec builds; all 12 derived inverse rows match exactly");
}

// ---------------------------------------------------------------- criterion 2

#[test]
fn criterion_02_word_computations() {
    let bundle = load_example();
    let sys = &bundle.system;
    let g = sys.graph();
    let w = sys.parse_word("a^-1 c b a").unwrap();
    let e1 = g.edge_by_name("e1").unwrap();
    let e3 = g.edge_by_name("e3").unwrap();

    assert_eq!(sys.act_edge(&w, e1).unwrap(), e3);
    assert_eq!(sys.act_edge(&w, e3).unwrap(), e1);
    assert_eq!(sys.word_string(&sys.restrict_edge(&w, e1).unwrap()), "a");
    assert_eq!(
        sys.word_string(&sys.restrict_edge(&w, e3).unwrap()),
        "a^-1 c b"
    );
    let w2 = w.power(sys, 2).unwrap();
    let p_e1 = Path::from_edge(g, e1);
    assert_eq!(
        sys.word_string(&sys.restrict_path(&w2, &p_e1).unwrap()),
        "a^-1 c b a"
    );
    pass(2, "edge actions and restrictions reproduce the worked values");
}

// ---------------------------------------------------------------- criterion 3

#[test]
fn criterion_03_word_problem_with_witnesses() {
    let bundle = load_example();
    let sys = &bundle.system;
    let w = sys.parse_word("a^-1 c b a").unwrap();
    for n in 1..=8u32 {
        let wn = w.power(sys, n).unwrap();
        match sys.is_unit(&wn, bundle.budget) {
            IsUnit::No(Witness::MovedPath { path, image }) => {
                assert_ne!(path, image, "power {n}");
                assert_eq!(sys.act_path(&wn, &path).unwrap(), image, "power {n}");
            }
            other => panic!("power {n}: expected a moved-path witness, got {other:?}"),
        }
    }
    pass(3, "all powers 1..=8 of the loop word certified non-unit with verified witnesses");
}

// ---------------------------------------------------------------- criterion 4

#[test]
fn criterion_04_pseudo_freeness_orbits_and_level_classes() {
    let bundle = load_example();
    let sys = &bundle.system;
    let report = sys.pseudo_free_probe(4, bundle.budget);
    assert!(report.passed(), "{report:?}");

    assert_eq!(sys.orbits().len(), 1);
    assert!(sys.is_transitive());

    // independent oracle for |E^2|: the path-count recursion
    // |vE^{k+1}| = sum over x in vE^1 of |s(x)E^k| from the raw edge data
    let g = sys.graph();
    let count_level = |k: usize| -> usize {
        fn rec(g: &selfsim_core::graph::Graph, v: VertexId, k: usize) -> usize {
            if k == 0 {
                return 1;
            }
            g.out_edges(v)
                .iter()
                .map(|&x| rec(g, g.source(x), k - 1))
                .sum()
        }
        g.vertices().map(|v| rec(g, v, k)).sum()
    };
    let e2_count = count_level(2);
    assert_eq!(e2_count, 12, "the recursion oracle gives |E^2| = 12");

    let classes = sys.rk_classes(2);
    assert_eq!(classes.len(), 1, "one orbit class at level 2");
    assert_eq!(classes[0].len(), e2_count, "the class covers all of E^2");
    // the criterion text quotes 6^2 = 36 for this count, but the recursion
    // oracle it cites gives 12 (the graph is not 6-regular in composable
    // pairs); the class-covers-everything claim is what transitivity asserts
    pass(4, "pseudo-free to length 4; one orbit; level-2 relation has a single class covering E^2 (|E^2| = 12 by the stated recursion oracle; the 36 in the criterion text contradicts that oracle)");
}

// ---------------------------------------------------------------- criterion 5

#[test]
fn criterion_05_k_pipeline() {
    let bundle = load_example();
    let sys = &bundle.system;
    let report = kthy::k_pipeline(sys, &bundle.cocycle, bundle.isotropy, 4, bundle.budget)
        .expect("the example is in scope");
    assert_eq!(report.multipliers.d, 2);
    assert_eq!(report.multipliers.phi0, 2);
    assert_eq!(report.multipliers.phi1, 2);
    assert_eq!(report.k_core.0.to_string(), "Z[1/2]");
    assert_eq!(report.k_core.1.to_string(), "Z[1/2]");
    assert!(report.k_ambient.0.is_zero());
    assert!(report.k_ambient.1.is_zero());
    pass(5, "D = 2, Phi0 = 2, Phi1 = 2, K(core) = (Z[1/2], Z[1/2]), K(ambient) = (0, 0)");
}

// ---------------------------------------------------------------- criterion 6

#[test]
fn criterion_06_homology_pipeline() {
    let bundle = load_example();
    let sys = &bundle.system;
    let report = homol::homology_pipeline(sys, &bundle.cocycle, bundle.isotropy, 4, bundle.budget)
        .expect("the example is in scope");
    assert_eq!(report.union_h0.to_string(), "Z[1/2]");
    assert_eq!(report.union_h1.to_string(), "Z[1/2]");
    assert_eq!(
        report.rho_star.map,
        selfsim_core::zlin::LocMult::new(2, 1, 1),
        "rho_* is multiplication by 1/2"
    );
    assert_eq!(sys.graph().edge_name(report.rho_star.conjugator_edge), "e1");
    assert!(report.solution.h0.is_zero());
    assert_eq!(report.solution.h1, ExtensionResult::Resolved(AbGroup::zero()));
    assert!(report.solution.h2.is_zero());
    assert!(report.solution.tail_zero);
    pass(6, "H(union) = (Z[1/2], Z[1/2]); rho_* = x(1/2) via the e1 conjugator; H0 = H1 = H2 = 0 with zero tail");
}

// ---------------------------------------------------------------- criterion 7

/// Independent bar-complex oracle for a one-unit cyclic group: tuples are
/// plain integer vectors, faces computed by modular addition, matrices by
/// direct enumeration (no groupoid machinery involved).
fn bar_complex_boundary(order: usize, n: usize) -> IntMatrix {
    let tuples = |len: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            let mut next = Vec::new();
            for t in &out {
                for g in 0..order {
                    let mut e = t.clone();
                    e.push(g);
                    next.push(e);
                }
            }
            out = next;
        }
        out
    };
    if n == 1 {
        // one unit: d = t, so delta_1 = 0
        return IntMatrix::zero(1, order);
    }
    let rows = tuples(n - 1);
    let cols = tuples(n);
    let index = |t: &Vec<usize>| -> usize { rows.iter().position(|r| r == t).unwrap() };
    let mut m = IntMatrix::zero(rows.len(), cols.len());
    for (j, t) in cols.iter().enumerate() {
        for i in 0..=n {
            let face: Vec<usize> = if i == 0 {
                t[1..].to_vec()
            } else if i == n {
                t[..n - 1].to_vec()
            } else {
                let mut f = Vec::with_capacity(n - 1);
                f.extend_from_slice(&t[..i - 1]);
                f.push((t[i - 1] + t[i]) % order);
                f.extend_from_slice(&t[i + 1..]);
                f
            };
            let sign = if i % 2 == 0 { 1 } else { -1 };
            m[(index(&face), j)] += BigInt::from(sign);
        }
    }
    m
}

#[test]
fn criterion_07_chain_complex_engine() {
    // boundary maps square to zero on every constructed groupoid, n <= 3
    let mut zoo: Vec<FiniteGroupoid> = vec![
        gbuild::pair_groupoid(2),
        gbuild::pair_groupoid(3),
        gbuild::pair_groupoid(4),
        gbuild::cyclic_group(2),
        gbuild::cyclic_group(3),
        gbuild::disjoint_units(2),
        gbuild::transitive_with_cyclic_isotropy(3, 2),
    ];
    for (_, action, (g_g, gamma_g, rho)) in selfsim_cli::demo_instances() {
        let (data, _, _) = canonical_similarity_action(&action).unwrap();
        zoo.push(data.left);
        let (data2, _, _) = canonical_similarity_cocycle(&g_g, &gamma_g, &rho).unwrap();
        zoo.push(data2.left);
    }
    for g in &zoo {
        for n in 1..=3 {
            assert!(
                nerve::boundaries_compose_to_zero(g, n).unwrap(),
                "delta_{n} . delta_{} != 0 on {g}",
                n + 1
            );
        }
    }

    // pair groupoids on k <= 4 points are homologically a point
    for k in 2..=4 {
        let h = nerve::homology(&gbuild::pair_groupoid(k), 3).unwrap();
        assert_eq!(h[0], AbGroup::free(1));
        assert!(h[1].is_zero() && h[2].is_zero() && h[3].is_zero(), "pair({k})");
    }

    // the order-two group against the independent bar-complex oracle
    let via_groupoid = nerve::homology(&gbuild::cyclic_group(2), 3).unwrap();
    let mut via_bar = Vec::new();
    for n in 0..=3 {
        let dn = if n == 0 {
            IntMatrix::zero(0, 1)
        } else {
            bar_complex_boundary(2, n)
        };
        let dn1 = bar_complex_boundary(2, n + 1);
        via_bar.push(zlin::homology_of_pair(&dn, &dn1).unwrap());
    }
    assert_eq!(via_groupoid, via_bar, "groupoid route vs bar-complex oracle");
    assert_eq!(via_groupoid[0], AbGroup::free(1));
    assert_eq!(via_groupoid[1].to_string(), "Z/2");
    assert!(via_groupoid[2].is_zero());
    assert_eq!(via_groupoid[3].to_string(), "Z/2");
    pass(7, "boundaries square to zero (n <= 3, all constructed groupoids); pair(k<=4) = (Z,0,0,0); order-two group = (Z, Z/2, 0, Z/2) against the bar-complex oracle");
}

// ---------------------------------------------------------------- criterion 8

#[test]
fn criterion_08_similarity_theorem() {
    let mut instances = 0;
    for (name, action, (g_g, gamma_g, rho)) in selfsim_cli::demo_instances() {
        let (data, _s, _k) = canonical_similarity_action(&action).unwrap();
        check_similarity(&data).unwrap_or_else(|w| panic!("{name}: identity (*) failed at {w:?}"));
        let h_left = nerve::homology(&data.left, 3).unwrap();
        let h_right = nerve::homology(&data.right, 3).unwrap();
        assert_eq!(h_left, h_right, "{name}: action-statement homology");

        let (data2, _p, _m) = canonical_similarity_cocycle(&g_g, &gamma_g, &rho).unwrap();
        check_similarity(&data2)
            .unwrap_or_else(|w| panic!("{name}: identity (**) failed at {w:?}"));
        let h_left = nerve::homology(&data2.left, 3).unwrap();
        let h_right = nerve::homology(&data2.right, 3).unwrap();
        assert_eq!(h_left, h_right, "{name}: cocycle-statement homology");
        instances += 1;
    }
    assert!(instances >= 3);
    pass(8, "canonical similarity data verifies (*) and (**) on 3 instances; homology up to degree 3 agrees across every similar pair");
}

// ---------------------------------------------------------------- criterion 9

mod sampling {
    use super::*;

    pub fn letters(sys: &ActionSystem) -> Vec<Letter> {
        sys.generators()
            .flat_map(|g| [Letter::new(g), Letter::new(g).inverted()])
            .collect()
    }

    /// Random freely reduced word built rightmost-first from `dom`; may come
    /// out shorter than requested when the walk dead-ends.
    pub fn random_word_from(
        sys: &ActionSystem,
        rng: &mut ChaCha8Rng,
        dom: VertexId,
        len: usize,
    ) -> Word {
        let pool = letters(sys);
        let mut acc: Vec<Letter> = Vec::new();
        // first letter acts first: d(letter) = dom
        let mut need_dom = dom;
        for _ in 0..len {
            let candidates: Vec<Letter> = pool
                .iter()
                .copied()
                .filter(|l| {
                    sys.letter_dom(*l) == need_dom
                        && acc.last().map(|prev| !prev.cancels(*l)).unwrap_or(true)
                })
                .collect();
            match candidates.choose(rng) {
                Some(&l) => {
                    need_dom = sys.letter_tgt(l);
                    acc.push(l);
                }
                None => break,
            }
        }
        acc.reverse(); // stored left-to-right, rightmost acts first
        if acc.is_empty() {
            Word::unit(dom)
        } else {
            Word::from_letters(sys, &acc, dom).expect("walk respects endpoints")
        }
    }

    pub fn random_word(sys: &ActionSystem, rng: &mut ChaCha8Rng, max_len: usize) -> Word {
        let v = VertexId(rng.gen_range(0..sys.graph().vertex_count()) as u32);
        let len = rng.gen_range(0..=max_len);
        random_word_from(sys, rng, v, len)
    }

    pub fn random_path_from(
        sys: &ActionSystem,
        rng: &mut ChaCha8Rng,
        range: VertexId,
        len: usize,
    ) -> Path {
        let graph = sys.graph();
        let mut edges = Vec::with_capacity(len);
        let mut at = range;
        for _ in 0..len {
            let e = *graph.out_edges(at).choose(rng).expect("no sources");
            edges.push(e);
            at = graph.source(e);
        }
        if edges.is_empty() {
            Path::empty(range)
        } else {
            Path::from_edges(graph, &edges).expect("walk is composable")
        }
    }
}

#[test]
fn criterion_09a_restriction_identities() {
    let bundle = load_example();
    let sys = &bundle.system;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f_0001);
    for case in 0..10_000 {
        // (3): (w1 w2) . mu = w1 . (w2 . mu) and (w1 w2)|_mu = (w1|_{w2.mu})(w2|_mu)
        let w2 = sampling::random_word(sys, &mut rng, 5);
        let w1_len = rng.gen_range(0..=5);
        let w1 = sampling::random_word_from(sys, &mut rng, w2.tgt(sys), w1_len);
        let product = w1.product(sys, &w2).unwrap();
        let mu_len = rng.gen_range(0..=4);
        let mu = sampling::random_path_from(sys, &mut rng, w2.dom(sys), mu_len);
        let (img12, rest12) = sys.apply_path(&product, &mu).unwrap();
        let (img2, rest2) = sys.apply_path(&w2, &mu).unwrap();
        let (img1, rest1) = sys.apply_path(&w1, &img2).unwrap();
        assert_eq!(img12, img1, "identity (3) image, case {case}");
        assert_eq!(
            rest12,
            rest1.product(sys, &rest2).unwrap(),
            "identity (3) restriction, case {case}"
        );

        // (1): g|_{mu nu} = (g|_mu)|_nu
        let g = sampling::random_word(sys, &mut rng, 5);
        let mu_len1 = rng.gen_range(0..=3);
        let mu = sampling::random_path_from(sys, &mut rng, g.dom(sys), mu_len1);
        let nu_len = rng.gen_range(0..=3);
        let nu = sampling::random_path_from(sys, &mut rng, mu.source(), nu_len);
        let munu = mu.concat(&nu).unwrap();
        let rest_joint = sys.restrict_path(&g, &munu).unwrap();
        let rest_mu = sys.restrict_path(&g, &mu).unwrap();
        let rest_split = sys.restrict_path(&rest_mu, &nu).unwrap();
        assert_eq!(rest_joint, rest_split, "identity (1), case {case}");

        // (2): unit|_mu is the unit at s(mu)
        let unit = Word::unit(mu.range());
        assert_eq!(
            sys.restrict_path(&unit, &mu).unwrap(),
            Word::unit(mu.source()),
            "identity (2), case {case}"
        );

        // (4): g^-1|_mu = (g|_{g^-1 . mu})^-1
        let ginv = g.inverse();
        let mu4_len = rng.gen_range(0..=3);
        let mu4 = sampling::random_path_from(sys, &mut rng, ginv.dom(sys), mu4_len);
        let lhs = sys.restrict_path(&ginv, &mu4).unwrap();
        let pulled = sys.act_path(&ginv, &mu4).unwrap();
        let rhs = sys.restrict_path(&g, &pulled).unwrap().inverse();
        assert_eq!(lhs, rhs, "identity (4), case {case}");
    }
    pass(9, "suite a: restriction identities (1)-(4), 10000 seeded cases");
}

/// Exhaustive small element set: triples over paths of length <= 2 and words
/// of length <= 2, plus zero.
fn exhaustive_triples(sys: &ActionSystem) -> Vec<Triple> {
    let graph = sys.graph();
    let mut paths = Vec::new();
    for v in graph.vertices() {
        for k in 0..=2 {
            paths.extend(graph.paths_of_length(v, k).unwrap());
        }
    }
    let mut words: Vec<Word> = graph.vertices().map(Word::unit).collect();
    words.extend(sys.reduced_words(2));
    let mut out = vec![Triple::Zero];
    for alpha in &paths {
        for beta in &paths {
            for w in &words {
                if w.dom(sys) == beta.source() && w.tgt(sys) == alpha.source() {
                    out.push(
                        Triple::new(sys, alpha.clone(), w.clone(), beta.clone()).unwrap(),
                    );
                }
            }
        }
    }
    out
}

#[test]
fn criterion_09b_semigroup_laws() {
    let bundle = load_example();
    let sys = &bundle.system;
    let budget = bundle.budget;
    let elements = exhaustive_triples(sys);
    assert!(elements.len() > 300, "exhaustive set is nontrivial");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f_0002);
    for case in 0..10_000 {
        let x = elements.choose(&mut rng).unwrap();
        let y = elements.choose(&mut rng).unwrap();
        let z = elements.choose(&mut rng).unwrap();
        // associativity; an Unknown from the word problem counts as failure
        let left = multiply(sys, &multiply(sys, x, y).unwrap(), z).unwrap();
        let right = multiply(sys, x, &multiply(sys, y, z).unwrap()).unwrap();
        assert_eq!(
            triple_equal(sys, &left, &right, budget),
            Answer::Yes,
            "associativity, case {case}"
        );
        // involution laws
        let xy = multiply(sys, x, y).unwrap();
        let star_xy = xy.star();
        let ystar_xstar = multiply(sys, &y.star(), &x.star()).unwrap();
        assert_eq!(
            triple_equal(sys, &star_xy, &ystar_xstar, budget),
            Answer::Yes,
            "involution, case {case}"
        );
        let xxx = multiply(sys, &multiply(sys, x, &x.star()).unwrap(), x).unwrap();
        assert_eq!(
            triple_equal(sys, &xxx, x, budget),
            Answer::Yes,
            "x x* x = x, case {case}"
        );
    }
    // idempotents are exactly the diagonal triples here
    for alpha in sys.graph().paths_of_length(VertexId(0), 1).unwrap() {
        assert!(is_idempotent(sys, &Triple::idempotent(alpha), budget).unwrap());
    }
    pass(9, "suite b: semigroup associativity and involution, 10000 seeded cases over the exhaustive set");
}

#[test]
fn criterion_09c_germ_laws() {
    let bundle = load_example();
    let sys = &bundle.system;
    let graph = sys.graph();
    let budget = bundle.budget;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f_0003);

    // loops of length <= 2 per vertex, for building eventually periodic points
    let mut loops: Vec<Vec<Path>> = vec![Vec::new(); graph.vertex_count()];
    for v in graph.vertices() {
        for len in 1..=2 {
            for p in graph.paths_of_length(v, len).unwrap() {
                if p.source() == v {
                    loops[v.index()].push(p);
                }
            }
        }
        assert!(!loops[v.index()].is_empty(), "every vertex has a short loop");
    }
    // paths of length <= 2 indexed by source vertex, for alphas
    let mut by_source: Vec<Vec<Path>> = vec![Vec::new(); graph.vertex_count()];
    for v in graph.vertices() {
        for k in 0..=2 {
            for p in graph.paths_of_length(v, k).unwrap() {
                by_source[p.source().index()].push(p);
            }
        }
    }

    let random_germ_at = |rng: &mut ChaCha8Rng, point: &EvPath| -> Germ {
        let beta_len = rng.gen_range(0..=2);
        let beta = point.take(graph, beta_len);
        let w_len = rng.gen_range(0..=1);
        let w = sampling::random_word_from(sys, rng, beta.source(), w_len);
        let alpha = by_source[w.tgt(sys).index()]
            .choose(rng)
            .expect("paths into every vertex")
            .clone();
        Germ::new(sys, alpha, w, beta, point.clone()).expect("constructed on the point")
    };

    for case in 0..10_000 {
        // a base point, then a composable chain g1 g2 g3
        let v = VertexId(rng.gen_range(0..graph.vertex_count()) as u32);
        let cycle = loops[v.index()].choose(&mut rng).unwrap().clone();
        let xi3 = EvPath::periodic(cycle).unwrap();
        let g3 = random_germ_at(&mut rng, &xi3);
        let t3 = g3.tgt_point(sys, EV_BUDGET).unwrap();
        let g2 = random_germ_at(&mut rng, &t3);
        let t2 = g2.tgt_point(sys, EV_BUDGET).unwrap();
        let g1 = random_germ_at(&mut rng, &t2);

        let left = compose(
            sys,
            &compose(sys, &g1, &g2, EV_BUDGET).unwrap(),
            &g3,
            EV_BUDGET,
        )
        .unwrap();
        let right = compose(
            sys,
            &g1,
            &compose(sys, &g2, &g3, EV_BUDGET).unwrap(),
            EV_BUDGET,
        )
        .unwrap();
        assert_eq!(
            germ_equal(sys, &left, &right, budget),
            Answer::Yes,
            "germ associativity, case {case}"
        );

        // rho additivity and inversion
        let g12 = compose(sys, &g1, &g2, EV_BUDGET).unwrap();
        assert_eq!(g12.rho(), g1.rho() + g2.rho(), "rho additivity, case {case}");
        let g1_inv = invert(sys, &g1, EV_BUDGET).unwrap();
        assert_eq!(g1_inv.rho(), -g1.rho(), "rho inversion, case {case}");

        // gamma gamma^-1 gamma = gamma
        let back = compose(
            sys,
            &compose(sys, &g1, &g1_inv, EV_BUDGET).unwrap(),
            &g1,
            EV_BUDGET,
        )
        .unwrap();
        assert_eq!(
            germ_equal(sys, &back, &g1, budget),
            Answer::Yes,
            "triple product identity, case {case}"
        );
    }
    pass(9, "suite c: germ associativity, rho additivity and inversion, 10000 seeded cases");
}

#[test]
fn criterion_09d_phi_multiplicativity() {
    let bundle = load_example();
    let sys = &bundle.system;
    let graph = sys.graph();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f_0004);

    let mut words: Vec<Word> = graph.vertices().map(Word::unit).collect();
    words.extend(sys.reduced_words(1));

    let mut cases = 0usize;
    for k in 1..=2usize {
        let level_paths = graph.all_paths_of_length(k).unwrap();
        let mut terms = Vec::new();
        for mu in &level_paths {
            for nu in &level_paths {
                for w in &words {
                    if w.dom(sys) == nu.source() && w.tgt(sys) == mu.source() {
                        terms.push((mu.clone(), w.clone(), nu.clone()));
                    }
                }
            }
        }
        for (mu1, w1, nu1) in &terms {
            for (mu2, w2, nu2) in &terms {
                let z1 = rng.gen_range(-2..=2);
                let z2 = rng.gen_range(-2..=2);
                let x = Monomial::from_terms(
                    sys,
                    vec![MonomialTerm {
                        mu: mu1.clone(),
                        nu: nu1.clone(),
                        z_exp: z1,
                        word: w1.clone(),
                    }],
                )
                .unwrap();
                let y = Monomial::from_terms(
                    sys,
                    vec![MonomialTerm {
                        mu: mu2.clone(),
                        nu: nu2.clone(),
                        z_exp: z2,
                        word: w2.clone(),
                    }],
                )
                .unwrap();
                let xy = kthy::product(sys, &x, &y).unwrap();
                let lhs = kthy::phi(sys, &xy).unwrap();
                let rhs = kthy::product(
                    sys,
                    &kthy::phi(sys, &x).unwrap(),
                    &kthy::phi(sys, &y).unwrap(),
                )
                .unwrap();
                assert_eq!(lhs, rhs, "phi multiplicativity at level {k}");
                cases += 1;
            }
        }
    }
    assert!(cases >= 10_000, "exhaustive set has {cases} cases");
    pass(9, "suite d: phi is multiplicative, exhaustive levels 1..=2");
}

/// Determinant by cofactor expansion; inputs are tiny.
fn det_bigint(m: &IntMatrix) -> BigInt {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[(0, 0)].clone();
    }
    let mut det = BigInt::zero();
    for j in 0..n {
        if m[(0, j)].is_zero() {
            continue;
        }
        let mut minor = IntMatrix::zero(n - 1, n - 1);
        for i in 1..n {
            let mut cj = 0;
            for jj in 0..n {
                if jj == j {
                    continue;
                }
                minor[(i - 1, cj)] = m[(i, jj)].clone();
                cj += 1;
            }
        }
        let term = &m[(0, j)] * det_bigint(&minor);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

/// gcd of all k x k minors, in plain i64 arithmetic (entries <= 9, so a
/// 5 x 5 determinant is far below overflow).
fn gcd_of_minors(entries: &[Vec<i64>], k: usize) -> i64 {
    fn det_i64(rows: &[&[i64]], cols: &[usize]) -> i64 {
        if cols.len() == 1 {
            return rows[0][cols[0]];
        }
        let mut det = 0i64;
        for (pos, &j) in cols.iter().enumerate() {
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&c| c != j).collect();
            let sub_rows: Vec<&[i64]> = rows[1..].to_vec();
            let term = rows[0][j] * det_i64(&sub_rows, &sub_cols);
            if pos % 2 == 0 {
                det += term;
            } else {
                det -= term;
            }
        }
        det
    }
    fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 0..=(n - k) {
            for mut rest in combos(n - first - 1, k - 1) {
                for r in &mut rest {
                    *r += first + 1;
                }
                let mut c = vec![first];
                c.extend(rest);
                out.push(c);
            }
        }
        out
    }
    let nrows = entries.len();
    let ncols = entries[0].len();
    let mut g = 0i64;
    for row_set in combos(nrows, k) {
        let rows: Vec<&[i64]> = row_set.iter().map(|&i| entries[i].as_slice()).collect();
        for col_set in combos(ncols, k) {
            g = g.gcd(&det_i64(&rows, &col_set));
        }
    }
    g.abs()
}

#[test]
fn criterion_09e_snf_against_the_minor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f_0005);
    for case in 0..10_000 {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let entries: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let a = IntMatrix::from_rows(entries.clone());
        let form = zlin::snf(&a);

        // U A V = S exactly
        let uav = form.u.mul(&a).unwrap().mul(&form.v).unwrap();
        assert_eq!(uav, form.s, "UAV = S, case {case}");

        // U, V unimodular
        assert_eq!(det_bigint(&form.u).abs(), BigInt::one(), "det U, case {case}");
        assert_eq!(det_bigint(&form.v).abs(), BigInt::one(), "det V, case {case}");

        // diagonal, nonnegative, divisibility chain
        let factors = form.invariant_factors();
        for i in 0..form.s.nrows() {
            for j in 0..form.s.ncols() {
                if i != j {
                    assert!(form.s[(i, j)].is_zero(), "off-diagonal, case {case}");
                }
            }
        }
        for pair in factors.windows(2) {
            assert!(
                (&pair[1] % &pair[0]).is_zero(),
                "divisibility chain, case {case}"
            );
        }

        // invariant factors match the gcd-of-minors oracle
        let mut prev = 1i64;
        for (k, factor) in factors.iter().enumerate() {
            let dk = gcd_of_minors(&entries, k + 1);
            assert_ne!(dk, 0, "rank witness, case {case}");
            assert_eq!(
                factor,
                &BigInt::from(dk / prev),
                "invariant factor {k}, case {case}"
            );
            prev = dk;
        }
        // beyond the rank every minor vanishes
        if factors.len() < rows.min(cols) {
            assert_eq!(gcd_of_minors(&entries, factors.len() + 1), 0, "case {case}");
        }

        // the sparse fast path agrees with the dense route
        assert_eq!(zlin::invariant_factors(&a), factors, "fast path, case {case}");
    }
    pass(9, "suite e: Smith form invariants against the gcd-of-minors oracle, 10000 seeded cases");
}

// --------------------------------------------------------------- criterion 10

#[test]
fn criterion_10_negative_paths() {
    // non-transitive input refused by both pipelines with exit code 1
    for cmd in ["ktheory", "homology"] {
        let (code, out) = selfsim_cli::run(vec![
            "selfsim".into(),
            cmd.into(),
            data_path("two_loops.spec"),
        ]);
        assert_eq!(code, 1, "{cmd} on a non-transitive system: {out}");
        assert!(out.contains("transitive"), "{out}");
    }

    // corrupted cocycle: a unit word with nonzero degree conflicts
    let text = std::fs::read_to_string(data_path("unit_relation.spec")).unwrap();
    let bundle = build_system(&parse_spec(&text).unwrap()).unwrap();
    let conflict = bundle
        .system
        .validate_cocycle(&bundle.cocycle, 2, bundle.budget)
        .unwrap_err();
    assert_eq!(bundle.system.word_string(&conflict.word), "x");
    assert_eq!(conflict.degree, 1);
    let (code, out) = selfsim_cli::run(vec![
        "selfsim".into(),
        "ktheory".into(),
        data_path("unit_relation.spec"),
    ]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("cocycle"), "{out}");

    // pseudo-freeness violation is reported with its witness pair
    let text = std::fs::read_to_string(data_path("pseudofree_violation.spec")).unwrap();
    let bundle = build_system(&parse_spec(&text).unwrap()).unwrap();
    let report = bundle.system.pseudo_free_probe(1, bundle.budget);
    let (w, e) = report.violation.expect("the bundled violation fires");
    assert_eq!(bundle.system.word_string(&w), "x");
    assert_eq!(bundle.system.graph().edge_name(e), "e");

    // corrupted theta: similarity check fails with a witness element
    let (_, action, _) = selfsim_cli::demo_instances().remove(1);
    let (mut data, _, _) = canonical_similarity_action(&action).unwrap();
    let bad = data
        .left
        .elements()
        .find(|&x| !data.left.is_unit(x) && x != data.theta_left[0])
        .unwrap();
    data.theta_left[0] = bad;
    let failure = check_similarity(&data).unwrap_err();
    assert!(!failure.element.is_empty());

    // degree cocycle conflict through the probe API on the example: none,
    // but a corrupted mid-pipeline declaration refuses cleanly
    let example = load_example();
    let err = kthy::k_pipeline(
        &example.system,
        &DegreeCocycle::zero(&example.system),
        IsotropyClass::Trivial,
        4,
        example.budget,
    )
    .unwrap_err();
    assert!(matches!(err, kthy::KthyError::IsotropyMismatch { .. }));

    pass(10, "scope guards refuse with exit code 1; cocycle conflicts, pseudo-freeness violations and corrupted theta all carry witnesses");
}
