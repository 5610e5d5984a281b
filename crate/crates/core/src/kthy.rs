//! The combinatorial K-theory pipeline for the gauge-invariant core of an
//! action system.
//!
//! The core is an increasing union of levels; level k is spanned by
//! monomials `z^m i_mu (x) i_w (x) i_nu*` with `|mu| = |nu| = k` and `w` a
//! word from `s(nu)` to `s(mu)`. The inclusion of one level into the next
//! expands a term over the domain edges of its word:
//!
//! ```text
//! i_mu (x) i_w (x) i_nu*  ->  sum over x in d(w)E^1 of
//!                             i_{mu (w.x)} (x) i_{w|_x} (x) i_{nu x}*
//! ```
//!
//! The induced multipliers on the K-groups of a level are `Phi_0` (the term
//! count of the image of a rank-one unit projection) and `Phi_1` (the
//! winding of the image of the standard unitary, counted through a degree
//! cocycle). K-groups of the core are then stationary colimits, and the
//! K-groups of the ambient algebra come from the kernel/cokernel calculus of
//! `id - Phi_i` on them.
//!
//! Scope guard: the pipeline refuses systems that are not transitive, whose
//! declared isotropy class is not backed by the probes, or whose cocycle
//! fails the soundness check; refusals are typed, never silent.

use thiserror::Error;

use crate::action::probes::{CocycleConflict, DegreeCocycle};
use crate::action::{ActionSystem, Budget, Word};
use crate::graph::{Path, VertexId};
use crate::zlin::{AbGroup, LocMult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KthyError {
    #[error("the groupoid does not act transitively on the vertices")]
    NotTransitive,
    #[error("vertices have different out-degrees (impossible for a validated transitive system)")]
    NonconstantInDegree,
    #[error("monomial terms collide at the same (row, column) pair")]
    NonMonomialResult,
    #[error("monomial is not a permutation-type unitary")]
    NotMonomialUnitary,
    #[error("degree cocycle failed validation: word `{word}` has degree {degree}")]
    CocycleConflict { word: String, degree: i64 },
    #[error("pseudo-freeness probe did not pass (bound {bound})")]
    PseudoFreeProbeFailed { bound: usize },
    #[error("declared isotropy class `{declared}` is not supported by the probe")]
    IsotropyMismatch { declared: &'static str },
    #[error("action error: {0}")]
    Action(#[from] crate::action::ActionError),
}

/// User-declared isotropy class, verified against probe evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsotropyClass {
    /// No nontrivial loops: the groupoid algebra is matrix-like.
    Trivial,
    /// Loops generate a copy of the integers (circle-algebra model).
    InfiniteCyclic,
}

impl IsotropyClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            IsotropyClass::Trivial => "trivial",
            IsotropyClass::InfiniteCyclic => "z",
        }
    }
}

/// One term `z^m i_mu (x) i_word (x) i_nu*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MonomialTerm {
    pub mu: Path,
    pub nu: Path,
    pub z_exp: i64,
    pub word: Word,
}

/// A formal sum of monomial terms at a common level, with distinct
/// `(mu, nu)` positions; kept sorted for canonical comparison.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Monomial {
    terms: Vec<MonomialTerm>,
}

impl Monomial {
    pub fn empty() -> Monomial {
        Monomial::default()
    }

    pub fn from_terms(
        sys: &ActionSystem,
        mut terms: Vec<MonomialTerm>,
    ) -> Result<Monomial, KthyError> {
        for t in &terms {
            if t.mu.len() != t.nu.len()
                || t.word.dom(sys) != t.nu.source()
                || t.word.tgt(sys) != t.mu.source()
            {
                return Err(KthyError::NonMonomialResult);
            }
        }
        terms.sort();
        for pair in terms.windows(2) {
            if pair[0].mu == pair[1].mu && pair[0].nu == pair[1].nu {
                return Err(KthyError::NonMonomialResult);
            }
        }
        Ok(Monomial { terms })
    }

    pub fn terms(&self) -> &[MonomialTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rank-one unit projection `i_v` at level 0.
    pub fn unit_projection(v: VertexId) -> Monomial {
        Monomial {
            terms: vec![MonomialTerm {
                mu: Path::empty(v),
                nu: Path::empty(v),
                z_exp: 0,
                word: Word::unit(v),
            }],
        }
    }

    /// The standard winding unitary `z i_{v0} + sum of the other i_v`.
    pub fn winding_unitary(sys: &ActionSystem) -> Monomial {
        let mut terms = Vec::new();
        for (i, v) in sys.graph().vertices().enumerate() {
            terms.push(MonomialTerm {
                mu: Path::empty(v),
                nu: Path::empty(v),
                z_exp: if i == 0 { 1 } else { 0 },
                word: Word::unit(v),
            });
        }
        terms.sort();
        Monomial { terms }
    }

    /// The identity `sum i_v` at level 0.
    pub fn identity(sys: &ActionSystem) -> Monomial {
        let mut terms: Vec<MonomialTerm> = sys
            .graph()
            .vertices()
            .map(|v| MonomialTerm {
                mu: Path::empty(v),
                nu: Path::empty(v),
                z_exp: 0,
                word: Word::unit(v),
            })
            .collect();
        terms.sort();
        Monomial { terms }
    }
}

/// The level inclusion: expands every term over the domain edges of its word.
pub fn phi(sys: &ActionSystem, x: &Monomial) -> Result<Monomial, KthyError> {
    let mut terms = Vec::new();
    for t in &x.terms {
        let dom = t.word.dom(sys);
        for &e in sys.graph().out_edges(dom) {
            let (image, rest) = sys.apply_edge(&t.word, e)?;
            let edge_path = Path::from_edge(sys.graph(), e);
            let image_path = Path::from_edge(sys.graph(), image);
            terms.push(MonomialTerm {
                mu: t.mu.concat(&image_path).expect("r(w.x) = t(w) = s(mu)"),
                nu: t.nu.concat(&edge_path).expect("r(x) = d(w) = s(nu)"),
                z_exp: t.z_exp,
                word: rest,
            });
        }
    }
    Monomial::from_terms(sys, terms)
}

/// Monomial product: matches `nu` of the left factor against `mu` of the
/// right factor; words multiply, z-exponents add.
pub fn product(sys: &ActionSystem, x: &Monomial, y: &Monomial) -> Result<Monomial, KthyError> {
    let mut terms = Vec::new();
    for tx in &x.terms {
        for ty in &y.terms {
            if tx.nu != ty.mu {
                continue;
            }
            let word = tx
                .word
                .product(sys, &ty.word)
                .expect("inner sources match so words compose");
            terms.push(MonomialTerm {
                mu: tx.mu.clone(),
                nu: ty.nu.clone(),
                z_exp: tx.z_exp + ty.z_exp,
                word,
            });
        }
    }
    Monomial::from_terms(sys, terms)
}

/// The constant out-degree `D = |vE^1|`, defined for transitive systems.
pub fn level_multiplicity(sys: &ActionSystem) -> Result<u64, KthyError> {
    if !sys.is_transitive() {
        return Err(KthyError::NotTransitive);
    }
    let graph = sys.graph();
    let mut degrees = graph.vertices().map(|v| graph.out_edges(v).len());
    let first = degrees.next().expect("validated graphs are nonempty");
    if degrees.all(|d| d == first) {
        Ok(first as u64)
    } else {
        Err(KthyError::NonconstantInDegree)
    }
}

/// Winding number of a monomial unitary: requires the `(mu, nu)` pairs to
/// form a bijection of a common index set, then sums `z_exp + degree(word)`
/// over the terms.
pub fn winding(x: &Monomial, cocycle: &DegreeCocycle) -> Result<i64, KthyError> {
    let mut rows: Vec<&Path> = x.terms.iter().map(|t| &t.mu).collect();
    let mut cols: Vec<&Path> = x.terms.iter().map(|t| &t.nu).collect();
    rows.sort();
    cols.sort();
    rows.dedup();
    cols.dedup();
    if rows.len() != x.terms.len() || cols.len() != x.terms.len() || rows != cols {
        return Err(KthyError::NotMonomialUnitary);
    }
    Ok(x.terms
        .iter()
        .map(|t| t.z_exp + cocycle.degree(&t.word))
        .sum())
}

/// The induced multipliers of the level inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Multipliers {
    /// level multiplicity `|vE^1|`
    pub d: u64,
    /// multiplier on K0 of a level: term count of the image of `i_v`
    pub phi0: i64,
    /// multiplier on K1 of a level: winding of the image of the unitary
    pub phi1: i64,
}

/// Computes `D`, `Phi_0` and `Phi_1`. Requires transitivity and a cocycle
/// that passes the soundness check at the given bound.
pub fn multipliers(
    sys: &ActionSystem,
    cocycle: &DegreeCocycle,
    cocycle_bound: usize,
    budget: Budget,
) -> Result<Multipliers, KthyError> {
    let d = level_multiplicity(sys)?;
    validate_cocycle_for_pipeline(sys, cocycle, cocycle_bound, budget)?;

    // Phi_0: rank of the image of a rank-one unit projection, per vertex
    let mut phi0 = None;
    for v in sys.graph().vertices() {
        let image = phi(sys, &Monomial::unit_projection(v))?;
        let count = image.len() as i64;
        match phi0 {
            None => phi0 = Some(count),
            Some(existing) if existing == count => {}
            Some(_) => return Err(KthyError::NonconstantInDegree),
        }
    }
    let phi0 = phi0.expect("at least one vertex");

    let unitary = Monomial::winding_unitary(sys);
    let phi1 = winding(&phi(sys, &unitary)?, cocycle)?;
    Ok(Multipliers { d, phi0, phi1 })
}

fn validate_cocycle_for_pipeline(
    sys: &ActionSystem,
    cocycle: &DegreeCocycle,
    bound: usize,
    budget: Budget,
) -> Result<(), KthyError> {
    match sys.validate_cocycle(cocycle, bound, budget) {
        Ok(_) => Ok(()),
        Err(CocycleConflict { word, degree }) => Err(KthyError::CocycleConflict {
            word: sys.word_string(&word),
            degree,
        }),
    }
}

/// K-groups of the full groupoid algebra under the declared isotropy class:
/// `(Z, Z)` for infinite cyclic isotropy (matrix algebra over the circle),
/// `(Z, 0)` for trivial isotropy (plain matrix algebra).
pub fn k_of_groupoid_algebra(
    sys: &ActionSystem,
    class: IsotropyClass,
) -> Result<(AbGroup, AbGroup), KthyError> {
    if !sys.is_transitive() {
        return Err(KthyError::NotTransitive);
    }
    Ok(match class {
        IsotropyClass::InfiniteCyclic => (AbGroup::free(1), AbGroup::free(1)),
        IsotropyClass::Trivial => (AbGroup::free(1), AbGroup::zero()),
    })
}

/// The rank-one colimit descriptors `(base of K0 colimit, base of K1
/// colimit)`: base 0 encodes the zero group, 1 the integers, D >= 2 the
/// localization `Z[1/D]`.
fn colimit_bases(m: &Multipliers, class: IsotropyClass) -> (u64, u64) {
    let k0 = m.phi0.unsigned_abs();
    match class {
        IsotropyClass::InfiniteCyclic => (k0, m.phi1.unsigned_abs()),
        IsotropyClass::Trivial => (k0, 0),
    }
}

/// K-groups of the gauge-invariant core: stationary colimits of the level
/// K-groups along the multipliers.
pub fn k_fixed_point(m: &Multipliers, class: IsotropyClass) -> (AbGroup, AbGroup) {
    let (b0, b1) = colimit_bases(m, class);
    (
        crate::zlin::abgroup::colimit_const_z(b0),
        crate::zlin::abgroup::colimit_const_z(b1),
    )
}

/// K-groups of the ambient algebra from the crossed-product formula:
///
/// ```text
/// K0 = ker(id - Phi_1 on K1(core)) + coker(id - Phi_0 on K0(core))
/// K1 = ker(id - Phi_0 on K0(core)) + coker(id - Phi_1 on K1(core))
/// ```
pub fn k_ambient(m: &Multipliers, class: IsotropyClass) -> (AbGroup, AbGroup) {
    let (b0, b1) = colimit_bases(m, class);
    let m0 = LocMult::integer(b0, m.phi0).one_minus();
    let m1 = LocMult::integer(b1, m.phi1).one_minus();
    let (k0_ker, k0_coker) = m0.ker_coker();
    let (k1_ker, k1_coker) = m1.ker_coker();
    (k1_ker.direct_sum(&k0_coker), k0_ker.direct_sum(&k1_coker))
}

/// Everything the K pipeline reports for one system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KReport {
    pub class: IsotropyClass,
    pub multipliers: Multipliers,
    pub k_groupoid_algebra: (AbGroup, AbGroup),
    pub k_core: (AbGroup, AbGroup),
    pub k_ambient: (AbGroup, AbGroup),
    pub pseudo_free_bound: usize,
    pub cocycle_bound: usize,
}

/// Runs the guarded pipeline: transitivity, pseudo-freeness probe, cocycle
/// soundness and isotropy-declaration consistency, then the K-groups.
pub fn k_pipeline(
    sys: &ActionSystem,
    cocycle: &DegreeCocycle,
    class: IsotropyClass,
    probe_bound: usize,
    budget: Budget,
) -> Result<KReport, KthyError> {
    if !sys.is_transitive() {
        return Err(KthyError::NotTransitive);
    }
    let pf = sys.pseudo_free_probe(probe_bound, budget);
    if !pf.passed() {
        return Err(KthyError::PseudoFreeProbeFailed { bound: probe_bound });
    }
    verify_isotropy_declaration(sys, class, probe_bound, budget)?;
    let m = multipliers(sys, cocycle, probe_bound + 2, budget)?;
    Ok(KReport {
        class,
        multipliers: m,
        k_groupoid_algebra: k_of_groupoid_algebra(sys, class)?,
        k_core: k_fixed_point(&m, class),
        k_ambient: k_ambient(&m, class),
        pseudo_free_bound: probe_bound,
        cocycle_bound: probe_bound + 2,
    })
}

/// Trivial isotropy must show no certified non-unit loops; infinite cyclic
/// isotropy must show at least one with all probed powers non-unit.
pub fn verify_isotropy_declaration(
    sys: &ActionSystem,
    class: IsotropyClass,
    probe_bound: usize,
    budget: Budget,
) -> Result<(), KthyError> {
    let mut any_loop = false;
    let mut any_infinite = false;
    for v in sys.graph().vertices() {
        let report = sys.isotropy_probe(v, probe_bound, 4, budget);
        if !report.loops.is_empty() {
            any_loop = true;
        }
        if report.has_infinite_order_evidence() {
            any_infinite = true;
        }
    }
    let ok = match class {
        IsotropyClass::Trivial => !any_loop,
        IsotropyClass::InfiniteCyclic => any_infinite,
    };
    if ok {
        Ok(())
    } else {
        Err(KthyError::IsotropyMismatch {
            declared: class.as_str(),
        })
    }
}
