//! The homology pipeline for the germ groupoid of an action system.
//!
//! Under explicitly probed assumptions (transitive, pseudo-free to a bound,
//! sound degree cocycle realizing infinite cyclic isotropy, no loop word
//! fixing a sampled eventually periodic point) the diagonal subgroupoid of
//! level k has homology `(Z, Z)` in degrees 0, 1 at the rank-one generator
//! level, zero above; the level inclusions multiply classes by the constant
//! out-degree `D`, so the union has homology `colim(Z, xD)` in degrees 0
//! and 1. The degree cocycle `rho = |alpha| - |beta|` induces `x(1/D)` on
//! those colimits, re-derived per input by conjugating a diagonal bisection
//! with a loop-edge bisection in the inverse semigroup. A six-term sequence
//! then yields the homology of the full germ groupoid:
//!
//! ```text
//! H_0 = coker(id - rho_* | H_0)
//! H_2 = ker(id - rho_* | H_1)
//! 0 -> coker(id - rho_* | H_1) -> H_1 -> ker(id - rho_* | H_0) -> 0
//! ```
//!
//! with everything above degree 2 zero in this regime. The extension is
//! resolved only when an end vanishes or the kernel end is free; otherwise
//! the report keeps both ends and says so. Every report carries the
//! assumption banner with the budgets used.

use thiserror::Error;

use crate::action::probes::DegreeCocycle;
use crate::action::{ActionSystem, Budget, IsUnit, Word};
use crate::germ::{act_evpath, EvPath, GermError, EV_BUDGET};
use crate::graph::{EdgeId, Path, VertexId};
use crate::kthy::{self, IsotropyClass, KthyError};
use crate::semigroup::{multiply, Triple};
use crate::zlin::abgroup::colimit_const_z;
use crate::zlin::{AbGroup, LocMult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomolError {
    #[error("pipeline assumption failed: {0}")]
    AssumptionFailed(&'static str),
    #[error("no loop edge with a unit conjugator found; cannot derive the cocycle action")]
    NoUnitConjugatorFound,
    #[error("extension of the degree-one homology is unresolved")]
    UnresolvedExtension,
    #[error("k-theory error: {0}")]
    Kthy(#[from] KthyError),
    #[error("germ error: {0}")]
    Germ(#[from] GermError),
}

/// Outcome of one probe, with the budget it ran at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeOutcome {
    pub passed: bool,
    pub bound: usize,
    pub detail: String,
}

/// The recorded assumption set for a pipeline run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineAssumptions {
    pub transitive: ProbeOutcome,
    pub pseudo_free: ProbeOutcome,
    pub cocycle_validated: ProbeOutcome,
    pub isotropy: ProbeOutcome,
    pub free_on_infinite_paths: ProbeOutcome,
}

impl PipelineAssumptions {
    pub fn all_passed(&self) -> bool {
        self.transitive.passed
            && self.pseudo_free.passed
            && self.cocycle_validated.passed
            && self.isotropy.passed
            && self.free_on_infinite_paths.passed
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        if !self.transitive.passed {
            Some("transitive")
        } else if !self.pseudo_free.passed {
            Some("pseudo-free")
        } else if !self.cocycle_validated.passed {
            Some("cocycle")
        } else if !self.isotropy.passed {
            Some("isotropy")
        } else if !self.free_on_infinite_paths.passed {
            Some("free-on-infinite-paths")
        } else {
            None
        }
    }
}

/// Runs all probes at the given bound and records outcomes.
pub fn check_assumptions(
    sys: &ActionSystem,
    cocycle: &DegreeCocycle,
    class: IsotropyClass,
    probe_bound: usize,
    budget: Budget,
) -> PipelineAssumptions {
    let transitive = sys.is_transitive();
    let pf = sys.pseudo_free_probe(probe_bound, budget);
    let cocycle_ok = sys.validate_cocycle(cocycle, probe_bound + 2, budget);
    let isotropy_ok =
        kthy::verify_isotropy_declaration(sys, class, probe_bound, budget).is_ok();
    let free = free_on_infinite_paths_probe(sys, probe_bound, budget);

    PipelineAssumptions {
        transitive: ProbeOutcome {
            passed: transitive,
            bound: 0,
            detail: format!("{} orbit(s)", sys.orbits().len()),
        },
        pseudo_free: ProbeOutcome {
            passed: pf.passed(),
            bound: probe_bound,
            detail: match &pf.violation {
                Some((w, e)) => format!(
                    "violation at ({}, {})",
                    sys.word_string(w),
                    sys.graph().edge_name(*e)
                ),
                None if pf.inconclusive.is_empty() => "no violation".into(),
                None => format!("{} inconclusive word(s)", pf.inconclusive.len()),
            },
        },
        cocycle_validated: ProbeOutcome {
            passed: cocycle_ok.is_ok(),
            bound: probe_bound + 2,
            detail: match &cocycle_ok {
                Ok(r) => format!("{} unit words checked", r.unit_words_checked),
                Err(c) => format!("conflict at {}", sys.word_string(&c.word)),
            },
        },
        isotropy: ProbeOutcome {
            // the homology identification lives in the infinite-cyclic
            // regime; trivial isotropy degenerates the degree-one side
            passed: isotropy_ok && class == IsotropyClass::InfiniteCyclic,
            bound: probe_bound,
            detail: format!("declared {}", class.as_str()),
        },
        free_on_infinite_paths: ProbeOutcome {
            passed: free.0,
            bound: probe_bound,
            detail: free.1,
        },
    }
}

/// Searches for a certified non-unit loop word fixing a sampled eventually
/// periodic point; finding one breaks the freeness hypothesis.
fn free_on_infinite_paths_probe(
    sys: &ActionSystem,
    length_bound: usize,
    budget: Budget,
) -> (bool, String) {
    let graph = sys.graph();
    // sample points: cyc^inf for every loop path of length <= 3
    let mut points: Vec<EvPath> = Vec::new();
    for v in graph.vertices() {
        for len in 1..=3 {
            for p in graph.paths_of_length(v, len).expect("validated graph") {
                if p.source() == p.range() {
                    points.push(EvPath::periodic(p).expect("loop path"));
                }
            }
        }
    }
    let mut checked = 0usize;
    for w in sys.reduced_words(length_bound) {
        if w.dom(sys) != w.tgt(sys) {
            continue;
        }
        if !matches!(sys.is_unit(&w, budget), IsUnit::No(_)) {
            continue;
        }
        for xi in points.iter().filter(|xi| xi.range() == w.dom(sys)) {
            checked += 1;
            if let Ok(image) = act_evpath(sys, &w, xi, EV_BUDGET) {
                if image.same_point(xi) {
                    return (
                        false,
                        format!("{} fixes a sampled point", sys.word_string(&w)),
                    );
                }
            }
        }
    }
    (true, format!("{checked} (word, point) pairs checked"))
}

/// Degree 0 and 1 homology of the level-k diagonal subgroupoid at the
/// rank-one generator level, plus the structural notes the identification
/// rests on. Refuses when any assumption failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelHomology {
    pub h0: AbGroup,
    pub h1: AbGroup,
    /// generator of both classes: the indicator of a diagonal cylinder bisection
    pub generator: String,
    pub notes: Vec<String>,
}

pub fn h_of_level(
    sys: &ActionSystem,
    assumptions: &PipelineAssumptions,
) -> Result<LevelHomology, HomolError> {
    if let Some(flag) = assumptions.first_failure() {
        return Err(HomolError::AssumptionFailed(flag));
    }
    let _ = sys;
    Ok(LevelHomology {
        h0: AbGroup::free(1),
        h1: AbGroup::free(1),
        generator: "[indicator of B(alpha, s(alpha), alpha; Z(alpha))]".into(),
        notes: vec![
            "level-k diagonal factors as (point action) x (level orbit relation)".into(),
            "the word part of a level germ is recovered by tau_k([a,g,b;xi]) = g; its kernel is approximately finite".into(),
            "classes are modeled at rank one (single cylinder-indicator generator); this is an assumed identification".into(),
        ],
    })
}

/// The multiplier of the level inclusion on homology classes: the constant
/// out-degree `D`, cross-checked against the K-theory multiplicity.
pub fn inclusion_multiplier(sys: &ActionSystem) -> Result<u64, HomolError> {
    let d = kthy::level_multiplicity(sys)?;
    // assert the cross-module equality explicitly: the class of a diagonal
    // cylinder splits into |s(alpha)E^1| children, one per extending edge
    let graph = sys.graph();
    for v in graph.vertices() {
        if graph.out_edges(v).len() as u64 != d {
            return Err(HomolError::Kthy(KthyError::NonconstantInDegree));
        }
    }
    Ok(d)
}

/// Homology of the diagonal union: stationary colimits along `xD`.
pub fn h_of_union(sys: &ActionSystem) -> Result<(AbGroup, AbGroup), HomolError> {
    let d = inclusion_multiplier(sys)?;
    Ok((colimit_const_z(d), colimit_const_z(d)))
}

/// The derived cocycle action on the colimit classes, with its conjugator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoStar {
    pub map: LocMult,
    /// the loop edge the conjugator bisection was built from
    pub conjugator_edge: EdgeId,
    pub conjugator_vertex: VertexId,
}

/// Re-derives the conjugation identity that computes the cocycle action.
///
/// For a loop edge `x` at `z`, the bisection `U = (empty_z, unit_z, x)` obeys
/// `U* . (empty_z, unit_z, empty_z) . U = (x, unit, x)` in the inverse
/// semigroup, so the class of a diagonal cylinder in degree-shift one equals
/// the class of its one-level-deeper diagonal cylinder: the action divides by
/// the inclusion multiplier, giving `x(1/D)`. Refuses when no loop edge
/// exists.
pub fn rho_star(sys: &ActionSystem) -> Result<RhoStar, HomolError> {
    let d = inclusion_multiplier(sys)?;
    let graph = sys.graph();
    let loop_edge = graph
        .edges()
        .find(|&e| graph.range(e) == graph.source(e))
        .ok_or(HomolError::NoUnitConjugatorFound)?;
    let z = graph.range(loop_edge);

    // symbolic derivation in the inverse semigroup
    let diag = Triple::idempotent(Path::empty(z));
    let conj = Triple::new(
        sys,
        Path::empty(z),
        Word::unit(z),
        Path::from_edge(graph, loop_edge),
    )
    .expect("loop edges give unit conjugators");
    let left = multiply(sys, &conj.star(), &diag).expect("semigroup product");
    let conjugated = multiply(sys, &left, &conj).expect("semigroup product");
    let expected = Triple::idempotent(Path::from_edge(graph, loop_edge));
    if crate::semigroup::triple_equal(sys, &conjugated, &expected, Budget::default())
        != crate::action::Answer::Yes
    {
        return Err(HomolError::NoUnitConjugatorFound);
    }

    Ok(RhoStar {
        map: LocMult::new(d, 1, 1),
        conjugator_edge: loop_edge,
        conjugator_vertex: z,
    })
}

/// A resolved or honestly unresolved degree-one group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionResult {
    Resolved(AbGroup),
    /// `0 -> sub -> H_1 -> quot -> 0` could not be split.
    Unresolved { sub: AbGroup, quot: AbGroup },
}

impl ExtensionResult {
    pub fn resolved(&self) -> Option<&AbGroup> {
        match self {
            ExtensionResult::Resolved(g) => Some(g),
            ExtensionResult::Unresolved { .. } => None,
        }
    }
}

/// Solution of the six-term sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesSolution {
    pub h0: AbGroup,
    pub h1: ExtensionResult,
    pub h2: AbGroup,
    /// everything in degrees >= 3 vanishes in the pipeline regime
    pub tail_zero: bool,
}

/// Solves the sequence from the union homology `(h0, h1)` and the cocycle
/// action. The inputs are rank-one colimit groups, so `id - rho` is a
/// localization multiplier; the degree-one extension is split only when the
/// kernel end is free or an end vanishes.
pub fn les_solve(h0: &AbGroup, h1: &AbGroup, rho: &LocMult) -> LesSolution {
    debug_assert_eq!(&rho.group(), h0, "rho acts on the degree-0 group");
    debug_assert_eq!(&rho.group(), h1, "rho acts on the degree-1 group");
    let m = rho.one_minus();
    let (ker0, coker0) = m.ker_coker();
    let (ker1, coker1) = m.ker_coker();
    let h0_out = coker0;
    let h2_out = ker1;
    // 0 -> coker(id - rho | H1) -> H1 -> ker(id - rho | H0) -> 0
    let sub = coker1;
    let quot = ker0;
    let h1_out = if sub.is_zero() {
        ExtensionResult::Resolved(quot)
    } else if quot.is_zero() {
        ExtensionResult::Resolved(sub)
    } else if quot.torsion().is_empty() && quot.localized_parts().is_empty() {
        // free quotient: the extension splits
        ExtensionResult::Resolved(sub.direct_sum(&quot))
    } else {
        ExtensionResult::Unresolved { sub, quot }
    };
    LesSolution {
        h0: h0_out,
        h1: h1_out,
        h2: h2_out,
        tail_zero: true,
    }
}

/// Rank bookkeeping for the six-term portion: in an exact sequence the
/// alternating sum of rational ranks vanishes, and the union terms cancel in
/// pairs, leaving `rank H_0 - rank H_1 + rank H_2 = 0`.
pub fn exactness_rank_audit(solution: &LesSolution) -> Option<bool> {
    let h1 = solution.h1.resolved()?;
    let alt = solution.h0.rational_rank() as i64 - h1.rational_rank() as i64
        + solution.h2.rational_rank() as i64;
    Some(alt == 0)
}

/// The full homology report of one pipeline run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyReport {
    pub assumptions: PipelineAssumptions,
    pub level: LevelHomology,
    pub inclusion_multiplier: u64,
    pub union_h0: AbGroup,
    pub union_h1: AbGroup,
    pub rho_star: RhoStar,
    pub solution: LesSolution,
    pub rank_audit_passed: Option<bool>,
}

/// Runs probes, level homology, colimits, the cocycle action and the exact
/// sequence; refuses on the first failed assumption.
pub fn homology_pipeline(
    sys: &ActionSystem,
    cocycle: &DegreeCocycle,
    class: IsotropyClass,
    probe_bound: usize,
    budget: Budget,
) -> Result<HomologyReport, HomolError> {
    let assumptions = check_assumptions(sys, cocycle, class, probe_bound, budget);
    let level = h_of_level(sys, &assumptions)?;
    let d = inclusion_multiplier(sys)?;
    let (union_h0, union_h1) = h_of_union(sys)?;
    let rho = rho_star(sys)?;
    let solution = les_solve(&union_h0, &union_h1, &rho.map);
    let rank_audit_passed = exactness_rank_audit(&solution);
    Ok(HomologyReport {
        assumptions,
        level,
        inclusion_multiplier: d,
        union_h0,
        union_h1,
        rho_star: rho,
        solution,
        rank_audit_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn assumptions_pass_on_the_example() {
        let sys = fixtures::example_system();
        let c = fixtures::example_cocycle(&sys);
        let a = check_assumptions(&sys, &c, IsotropyClass::InfiniteCyclic, 4, Budget::default());
        assert!(a.all_passed(), "{a:?}");
    }

    #[test]
    fn level_homology_is_rank_one_pair() {
        let sys = fixtures::example_system();
        let c = fixtures::example_cocycle(&sys);
        let a = check_assumptions(&sys, &c, IsotropyClass::InfiniteCyclic, 4, Budget::default());
        let level = h_of_level(&sys, &a).unwrap();
        assert_eq!(level.h0, AbGroup::free(1));
        assert_eq!(level.h1, AbGroup::free(1));
    }

    #[test]
    fn refusal_on_failed_assumptions() {
        let sys = fixtures::example_system();
        // corrupt the cocycle declaration: trivial isotropy is wrong here
        let c = fixtures::example_cocycle(&sys);
        let a = check_assumptions(&sys, &c, IsotropyClass::Trivial, 4, Budget::default());
        assert!(!a.all_passed());
        assert_eq!(
            h_of_level(&sys, &a).unwrap_err(),
            HomolError::AssumptionFailed("isotropy")
        );
    }

    #[test]
    fn trivial_isotropy_systems_are_refused_but_diagnostics_run() {
        // one vertex, one loop, no generators: the pipeline refuses, while
        // the standalone diagnostics still answer (D = 1, identity action)
        let g = crate::graph::Graph::new(&["v"], &[("e", "v", "v")]).unwrap();
        let sys = crate::action::ActionSystem::build(g, vec![]).unwrap();
        let c = DegreeCocycle::zero(&sys);
        let a = check_assumptions(&sys, &c, IsotropyClass::Trivial, 3, Budget::default());
        assert!(!a.isotropy.passed);
        assert_eq!(
            h_of_level(&sys, &a).unwrap_err(),
            HomolError::AssumptionFailed("isotropy")
        );

        assert_eq!(inclusion_multiplier(&sys).unwrap(), 1);
        let (h0, h1) = h_of_union(&sys).unwrap();
        assert_eq!(h0, AbGroup::free(1));
        assert_eq!(h1, AbGroup::free(1));
        let r = rho_star(&sys).unwrap();
        assert!(r.map.is_identity());
    }

    #[test]
    fn union_homology_and_multiplier() {
        let sys = fixtures::example_system();
        assert_eq!(inclusion_multiplier(&sys).unwrap(), 2);
        let (h0, h1) = h_of_union(&sys).unwrap();
        assert_eq!(h0.to_string(), "Z[1/2]");
        assert_eq!(h1.to_string(), "Z[1/2]");
    }

    #[test]
    fn rho_star_uses_the_loop_edge() {
        let sys = fixtures::example_system();
        let r = rho_star(&sys).unwrap();
        assert_eq!(sys.graph().edge_name(r.conjugator_edge), "e1");
        assert_eq!(sys.graph().vertex_name(r.conjugator_vertex), "u");
        assert_eq!(r.map, LocMult::new(2, 1, 1));
    }

    #[test]
    fn no_conjugator_without_loop_edges() {
        // two vertices exchanging edges, no loops, one connecting generator
        let g = crate::graph::Graph::new(
            &["x", "y"],
            &[("e", "x", "y"), ("f", "y", "x")],
        )
        .unwrap();
        let x = g.vertex_by_name("x").unwrap();
        let y = g.vertex_by_name("y").unwrap();
        let e = g.edge_by_name("e").unwrap();
        let f = g.edge_by_name("f").unwrap();
        let swap = crate::action::GeneratorData {
            name: "g".into(),
            dom: x,
            tgt: y,
            moves: vec![(e, f, Word::generator(crate::action::GenId(0)).inverse())],
            inverse_moves: vec![],
        };
        let sys = crate::action::ActionSystem::build(g, vec![swap]).unwrap();
        assert!(sys.is_transitive());
        assert_eq!(rho_star(&sys).unwrap_err(), HomolError::NoUnitConjugatorFound);
    }

    #[test]
    fn les_solutions() {
        // the worked example: everything vanishes
        let half = LocMult::new(2, 1, 1);
        let zl = AbGroup::localized(2);
        let s = les_solve(&zl, &zl, &half);
        assert!(s.h0.is_zero());
        assert_eq!(s.h1, ExtensionResult::Resolved(AbGroup::zero()));
        assert!(s.h2.is_zero());
        assert!(s.tail_zero);
        assert_eq!(exactness_rank_audit(&s), Some(true));

        // the identity action on plain integers: free everywhere, split
        let one = LocMult::integer(1, 1);
        let z = AbGroup::free(1);
        let s = les_solve(&z, &z, &one);
        assert_eq!(s.h0, AbGroup::free(1));
        assert_eq!(s.h2, AbGroup::free(1));
        assert_eq!(s.h1, ExtensionResult::Resolved(AbGroup::free(2)));
        assert_eq!(exactness_rank_audit(&s), Some(true));

        // x4 on Z[1/2]: torsion Z/3 in degrees 0 and 1
        let four = LocMult::integer(2, 4);
        let s = les_solve(&zl, &zl, &four);
        assert_eq!(s.h0.to_string(), "Z/3");
        assert_eq!(s.h1, ExtensionResult::Resolved(AbGroup::cyclic(3u32.into())));
        assert!(s.h2.is_zero());

        // the identity on Z[1/2]: both ends alive, kernel not free
        let id2 = LocMult::integer(2, 1);
        let s = les_solve(&zl, &zl, &id2);
        assert!(matches!(s.h1, ExtensionResult::Unresolved { .. }));
    }

    #[test]
    fn full_pipeline_on_the_example() {
        let sys = fixtures::example_system();
        let c = fixtures::example_cocycle(&sys);
        let report =
            homology_pipeline(&sys, &c, IsotropyClass::InfiniteCyclic, 4, Budget::default())
                .unwrap();
        assert_eq!(report.inclusion_multiplier, 2);
        assert_eq!(report.union_h0.to_string(), "Z[1/2]");
        assert_eq!(report.union_h1.to_string(), "Z[1/2]");
        assert!(report.solution.h0.is_zero());
        assert_eq!(
            report.solution.h1,
            ExtensionResult::Resolved(AbGroup::zero())
        );
        assert!(report.solution.h2.is_zero());
        assert!(report.solution.tail_zero);
        assert_eq!(report.rank_audit_passed, Some(true));
    }
}
