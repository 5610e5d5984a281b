//! Germs of the groupoid of an action system over eventually periodic
//! infinite paths.
//!
//! A point of the infinite path space is represented as `prefix . cycle^inf`
//! with the cycle a loop at `s(prefix)`. A germ `[alpha, g, beta; xi]`
//! carries a triple whose `beta` is a prefix of `xi`; two germs at the same
//! point are equal when, after extending along the point until the `beta`s
//! coincide, the `alpha`s match and the words act equally (pseudo-freeness
//! makes this criterion exact). Composition extends eagerly until the middle
//! paths meet; the degree cocycle is `rho = |alpha| - |beta|`.
//!
//! Only eventually periodic points are first-class values; germ arithmetic
//! never needs more than finite prefixes of its points, so this models the
//! groupoid at desk scale. Only full-cylinder bisections are reified.

use thiserror::Error;

use crate::action::{ActionError, ActionSystem, Answer, Budget, Word};
use crate::graph::{EdgeId, Graph, Path, VertexId};

/// Default bound on cycle steps when canonicalizing image points.
pub const EV_BUDGET: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GermError {
    #[error("cycle must be a nonempty loop based at the prefix source")]
    MalformedPoint,
    #[error("path is not a prefix of the point")]
    NotOnPoint,
    #[error("triple violates d(g) = s(beta), t(g) = s(alpha)")]
    EndpointMismatch,
    #[error("extension path does not lie along the point")]
    NotAlongPoint,
    #[error("germs are not composable: domain and target points differ")]
    NotComposable,
    #[error("restriction chain did not become periodic within budget")]
    PeriodicityBudgetExceeded,
    #[error("action error: {0}")]
    Action(#[from] ActionError),
    #[error("word error: {0}")]
    Word(#[from] crate::action::WordError),
}

/// An eventually periodic infinite path `prefix . cycle . cycle . ...`.
///
/// The derived comparisons are on representations; use
/// [`EvPath::same_point`] for equality as points of the path space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EvPath {
    prefix: Path,
    cycle: Path,
}

impl EvPath {
    pub fn new(prefix: Path, cycle: Path) -> Result<EvPath, GermError> {
        if cycle.is_empty()
            || cycle.range() != cycle.source()
            || cycle.range() != prefix.source()
        {
            return Err(GermError::MalformedPoint);
        }
        Ok(EvPath { prefix, cycle })
    }

    /// The periodic point `cycle^inf`.
    pub fn periodic(cycle: Path) -> Result<EvPath, GermError> {
        let base = cycle.range();
        EvPath::new(Path::empty(base), cycle)
    }

    pub fn prefix_part(&self) -> &Path {
        &self.prefix
    }

    pub fn cycle_part(&self) -> &Path {
        &self.cycle
    }

    /// `r` of the infinite path.
    pub fn range(&self) -> VertexId {
        self.prefix.range()
    }

    fn edge_iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.prefix
            .edges()
            .iter()
            .copied()
            .chain(self.cycle.edges().iter().copied().cycle())
    }

    /// First `n` edges as a finite path.
    pub fn take(&self, graph: &Graph, n: usize) -> Path {
        if n == 0 {
            return Path::empty(self.range());
        }
        let edges: Vec<EdgeId> = self.edge_iter().take(n).collect();
        Path::from_edges(graph, &edges).expect("streamed edges compose")
    }

    /// True when the two representations denote the same infinite path.
    /// Comparing up to `2 (max prefix + |c1||c2|)` edges decides equality of
    /// eventually periodic sequences.
    pub fn same_point(&self, other: &EvPath) -> bool {
        if self.range() != other.range() {
            return false;
        }
        let bound = (2 * (self.prefix.len().max(other.prefix.len())
            + self.cycle.len() * other.cycle.len()))
        .max(1);
        self.edge_iter()
            .take(bound)
            .eq(other.edge_iter().take(bound))
    }

    /// Strips a finite prefix, keeping the point: `self = p . result`.
    pub fn strip_prefix(&self, graph: &Graph, p: &Path) -> Result<EvPath, GermError> {
        if p.is_empty() {
            if p.range() != self.range() {
                return Err(GermError::NotOnPoint);
            }
            return Ok(self.clone());
        }
        let mut stream = self.edge_iter();
        for &e in p.edges() {
            if stream.next() != Some(e) {
                return Err(GermError::NotOnPoint);
            }
        }
        let consumed = p.len();
        if consumed <= self.prefix.len() {
            let tail = &self.prefix.edges()[consumed..];
            let prefix = if tail.is_empty() {
                Path::empty(self.cycle.range())
            } else {
                Path::from_edges(graph, tail).expect("tail of a path composes")
            };
            EvPath::new(prefix, self.cycle.clone())
        } else {
            let k = (consumed - self.prefix.len()) % self.cycle.len();
            let mut rotated = self.cycle.edges()[k..].to_vec();
            rotated.extend_from_slice(&self.cycle.edges()[..k]);
            let cycle = Path::from_edges(graph, &rotated).expect("rotated loop composes");
            EvPath::new(Path::empty(cycle.range()), cycle)
        }
    }
}

/// A germ `[alpha, word, beta; point]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Germ {
    pub alpha: Path,
    pub word: Word,
    pub beta: Path,
    pub point: EvPath,
}

/// A full-cylinder bisection `B(alpha, word, beta; Z(beta))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bisection {
    pub alpha: Path,
    pub word: Word,
    pub beta: Path,
}

impl Bisection {
    /// `rho` of every germ in the bisection.
    pub fn rho(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }
}

impl Germ {
    pub fn new(
        sys: &ActionSystem,
        alpha: Path,
        word: Word,
        beta: Path,
        point: EvPath,
    ) -> Result<Germ, GermError> {
        if word.dom(sys) != beta.source() || word.tgt(sys) != alpha.source() {
            return Err(GermError::EndpointMismatch);
        }
        point.strip_prefix(sys.graph(), &beta)?;
        Ok(Germ {
            alpha,
            word,
            beta,
            point,
        })
    }

    /// The unit germ at a point.
    pub fn unit_at(point: EvPath) -> Germ {
        let v = point.range();
        Germ {
            alpha: Path::empty(v),
            word: Word::unit(v),
            beta: Path::empty(v),
            point,
        }
    }

    /// `rho([alpha, g, beta; xi]) = |alpha| - |beta|`; invariant under extension.
    pub fn rho(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }

    /// Domain point: the germ's own base point.
    pub fn dom_point(&self) -> &EvPath {
        &self.point
    }

    /// Target point `alpha (g . mu)` where `xi = beta mu`, canonicalized
    /// within `ev_budget` cycle steps.
    pub fn tgt_point(&self, sys: &ActionSystem, ev_budget: usize) -> Result<EvPath, GermError> {
        let mu = self.point.strip_prefix(sys.graph(), &self.beta)?;
        let image = act_evpath(sys, &self.word, &mu, ev_budget)?;
        prepend(&self.alpha, &image)
    }
}

/// Prepends a finite path to an eventually periodic one.
fn prepend(p: &Path, xi: &EvPath) -> Result<EvPath, GermError> {
    if p.source() != xi.range() {
        return Err(GermError::NotOnPoint);
    }
    let prefix = p.concat(xi.prefix_part()).expect("checked endpoints");
    EvPath::new(prefix, xi.cycle_part().clone())
}

/// Image of an eventually periodic point under a word. The restriction chain
/// along the cycle is tracked until a reduced word repeats, at which moment
/// the image is eventually periodic with the accumulated chunks; `ev_budget`
/// bounds the number of cycle steps examined.
pub fn act_evpath(
    sys: &ActionSystem,
    w: &Word,
    xi: &EvPath,
    ev_budget: usize,
) -> Result<EvPath, GermError> {
    if w.dom(sys) != xi.range() {
        return Err(GermError::Action(ActionError::NotInDomain {
            dom: sys.graph().vertex_name(w.dom(sys)).to_string(),
            range: sys.graph().vertex_name(xi.range()).to_string(),
        }));
    }
    if w.is_unit() {
        return Ok(xi.clone());
    }
    let (img_prefix, mut current) = sys.apply_path(w, xi.prefix_part())?;
    let mut seen: Vec<Word> = Vec::new();
    let mut chunks: Vec<Path> = Vec::new();
    for _ in 0..=ev_budget {
        if let Some(start) = seen.iter().position(|x| x == &current) {
            // the tail repeats from `start`: stitch prefix and cycle chunks
            let mut prefix = img_prefix.clone();
            for chunk in &chunks[..start] {
                prefix = prefix.concat(chunk).expect("image chunks compose");
            }
            let mut cycle = chunks[start].clone();
            for chunk in &chunks[start + 1..] {
                cycle = cycle.concat(chunk).expect("image chunks compose");
            }
            return EvPath::new(prefix, cycle);
        }
        seen.push(current.clone());
        let (img_cycle, rest) = sys.apply_path(&current, xi.cycle_part())?;
        chunks.push(img_cycle);
        current = rest;
    }
    Err(GermError::PeriodicityBudgetExceeded)
}

/// Represents the same germ deeper along its point:
/// `[alpha (w . lambda), w|_lambda, beta lambda; xi]`.
pub fn extend(sys: &ActionSystem, germ: &Germ, lambda: &Path) -> Result<Germ, GermError> {
    let beta_new = germ
        .beta
        .concat(lambda)
        .map_err(|_| GermError::NotAlongPoint)?;
    if germ.point.strip_prefix(sys.graph(), &beta_new).is_err() {
        return Err(GermError::NotAlongPoint);
    }
    let (img, rest) = sys.apply_path(&germ.word, lambda)?;
    let alpha_new = germ.alpha.concat(&img).expect("endpoints match");
    Ok(Germ {
        alpha: alpha_new,
        word: rest,
        beta: beta_new,
        point: germ.point.clone(),
    })
}

/// Budgeted germ equality: same point, then extend to a common `beta` and
/// compare `alpha`s and words.
pub fn germ_equal(sys: &ActionSystem, g1: &Germ, g2: &Germ, budget: Budget) -> Answer {
    if !g1.point.same_point(&g2.point) {
        return Answer::No;
    }
    let (shorter, longer) = if g1.beta.len() <= g2.beta.len() {
        (g1, g2)
    } else {
        (g2, g1)
    };
    let lambda = match longer.beta.strip_prefix(&shorter.beta) {
        Some(l) => l,
        None => return Answer::No,
    };
    let extended = match extend(sys, shorter, &lambda) {
        Ok(g) => g,
        Err(_) => return Answer::No,
    };
    if extended.alpha != longer.alpha {
        return Answer::No;
    }
    (&sys.equal(&extended.word, &longer.word, budget)).into()
}

/// Composes two germs; requires `dom(g1) = tgt(g2)` as points. Both factors
/// are extended along the shared point until the middle paths coincide, then
/// the words multiply: the result is `[alpha1', w1' w2', beta2'; xi2]`.
pub fn compose(
    sys: &ActionSystem,
    g1: &Germ,
    g2: &Germ,
    ev_budget: usize,
) -> Result<Germ, GermError> {
    let tgt2 = g2.tgt_point(sys, ev_budget)?;
    if !g1.point.same_point(&tgt2) {
        return Err(GermError::NotComposable);
    }
    let mut left = g1.clone();
    let mut right = g2.clone();
    if left.beta.len() < right.alpha.len() {
        let lambda = right
            .alpha
            .strip_prefix(&left.beta)
            .ok_or(GermError::NotComposable)?;
        left = extend(sys, &left, &lambda)?;
    } else if right.alpha.len() < left.beta.len() {
        // grow alpha2 along the target point until it reaches |beta1|
        let need = left.beta.len() - right.alpha.len();
        let tail = right.point.strip_prefix(sys.graph(), &right.beta)?;
        let mu = tail.take(sys.graph(), need);
        right = extend(sys, &right, &mu)?;
    }
    if left.beta != right.alpha {
        return Err(GermError::NotComposable);
    }
    let word = left.word.product(sys, &right.word)?;
    Ok(Germ {
        alpha: left.alpha,
        word,
        beta: right.beta,
        point: right.point,
    })
}

/// Inverse germ `[beta, w^-1, alpha; alpha (w . mu)]`.
pub fn invert(sys: &ActionSystem, germ: &Germ, ev_budget: usize) -> Result<Germ, GermError> {
    let point = germ.tgt_point(sys, ev_budget)?;
    Ok(Germ {
        alpha: germ.beta.clone(),
        word: germ.word.inverse(),
        beta: germ.alpha.clone(),
        point,
    })
}

/// Bisection data for the standard generator images: a word `g` maps to
/// `B(t(g), g, d(g))` over the full cylinder of its domain vertex.
pub fn std_bisection_word(sys: &ActionSystem, w: &Word) -> Bisection {
    Bisection {
        alpha: Path::empty(w.tgt(sys)),
        word: w.clone(),
        beta: Path::empty(w.dom(sys)),
    }
}

/// An edge `e` maps to `B(e, s(e), s(e))`.
pub fn std_bisection_edge(sys: &ActionSystem, e: EdgeId) -> Bisection {
    let s = sys.graph().source(e);
    Bisection {
        alpha: Path::from_edge(sys.graph(), e),
        word: Word::unit(s),
        beta: Path::empty(s),
    }
}

/// A vertex `v` maps to `B(v, v, v)`.
pub fn std_bisection_vertex(v: VertexId) -> Bisection {
    Bisection {
        alpha: Path::empty(v),
        word: Word::unit(v),
        beta: Path::empty(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn path(sys: &ActionSystem, names: &[&str]) -> Path {
        let g = sys.graph();
        let edges: Vec<_> = names.iter().map(|n| g.edge_by_name(n).unwrap()).collect();
        Path::from_edges(g, &edges).unwrap()
    }

    fn empty(sys: &ActionSystem, v: &str) -> Path {
        Path::empty(sys.graph().vertex_by_name(v).unwrap())
    }

    /// `e1^inf` at u.
    fn e1_inf(sys: &ActionSystem) -> EvPath {
        EvPath::periodic(path(sys, &["e1"])).unwrap()
    }

    #[test]
    fn prefixes_and_point_equality() {
        let sys = fixtures::example_system();
        let g = sys.graph();
        let xi = e1_inf(&sys);
        assert_eq!(g.path_string(&xi.take(g, 3)), "e1 e1 e1");

        // same point written with a redundant prefix
        let same = EvPath::new(path(&sys, &["e1"]), path(&sys, &["e1"])).unwrap();
        assert!(xi.same_point(&same));

        let other = EvPath::new(path(&sys, &["e3", "e2"]), path(&sys, &["e1"])).unwrap();
        assert!(!xi.same_point(&other));
    }

    #[test]
    fn extend_follows_the_table() {
        let sys = fixtures::example_system();
        let g = sys.graph();
        // [e4, a, e1; e1^inf] extended by e1 = [e4 e2, u, e1 e1; e1^inf]
        let germ = Germ::new(
            &sys,
            path(&sys, &["e4"]),
            sys.parse_word("a").unwrap(),
            path(&sys, &["e1"]),
            e1_inf(&sys),
        )
        .unwrap();
        let ext = extend(&sys, &germ, &path(&sys, &["e1"])).unwrap();
        assert_eq!(g.path_string(&ext.alpha), "e4 e2");
        assert!(ext.word.is_unit());
        assert_eq!(g.path_string(&ext.beta), "e1 e1");

        // extending by the empty path is the identity
        let same = extend(&sys, &germ, &empty(&sys, "u")).unwrap();
        assert_eq!(same, germ);

        // e3 does not lie along e1^inf
        assert_eq!(
            extend(&sys, &germ, &path(&sys, &["e3"])).unwrap_err(),
            GermError::NotAlongPoint
        );
    }

    #[test]
    fn equality_is_stable_under_extension() {
        let sys = fixtures::example_system();
        let budget = Budget::default();
        let germ = Germ::new(
            &sys,
            path(&sys, &["e4"]),
            sys.parse_word("a").unwrap(),
            path(&sys, &["e1"]),
            e1_inf(&sys),
        )
        .unwrap();
        let ext = extend(&sys, &germ, &path(&sys, &["e1", "e1"])).unwrap();
        assert_eq!(germ_equal(&sys, &germ, &ext, budget), Answer::Yes);

        // same triple, same point written differently
        let rewritten = Germ::new(
            &sys,
            path(&sys, &["e4"]),
            sys.parse_word("a").unwrap(),
            path(&sys, &["e1"]),
            EvPath::new(path(&sys, &["e1"]), path(&sys, &["e1"])).unwrap(),
        )
        .unwrap();
        assert_eq!(germ_equal(&sys, &germ, &rewritten, budget), Answer::Yes);

        // the unit germ differs from a certified non-unit loop germ
        let u = empty(&sys, "u");
        let unit = Germ::new(&sys, u.clone(), sys.parse_word("u").unwrap(), u.clone(), e1_inf(&sys)).unwrap();
        let loop_germ = Germ::new(
            &sys,
            u.clone(),
            sys.parse_word("a^-1 c b a").unwrap(),
            u,
            e1_inf(&sys),
        )
        .unwrap();
        assert_eq!(germ_equal(&sys, &unit, &loop_germ, budget), Answer::No);
    }

    #[test]
    fn composition_and_inversion() {
        let sys = fixtures::example_system();
        let g = sys.graph();
        // gamma2 = [e3, a, e2; e2 e1^inf], gamma1 = [e6, b, e3; e3 e2 e1^inf]
        let xi2 = EvPath::new(path(&sys, &["e2"]), path(&sys, &["e1"])).unwrap();
        let g2 = Germ::new(
            &sys,
            path(&sys, &["e3"]),
            sys.parse_word("a").unwrap(),
            path(&sys, &["e2"]),
            xi2,
        )
        .unwrap();
        let xi1 = EvPath::new(path(&sys, &["e3", "e2"]), path(&sys, &["e1"])).unwrap();
        let g1 = Germ::new(
            &sys,
            path(&sys, &["e6"]),
            sys.parse_word("b").unwrap(),
            path(&sys, &["e3"]),
            xi1,
        )
        .unwrap();
        let product = compose(&sys, &g1, &g2, EV_BUDGET).unwrap();
        assert_eq!(g.path_string(&product.alpha), "e6");
        assert_eq!(sys.word_string(&product.word), "b a");
        assert_eq!(g.path_string(&product.beta), "e2");

        // invert([e4, a, e1; e1^inf]) = [e1, a^-1, e4; e4 e2 e1^inf]
        let germ = Germ::new(
            &sys,
            path(&sys, &["e4"]),
            sys.parse_word("a").unwrap(),
            path(&sys, &["e1"]),
            e1_inf(&sys),
        )
        .unwrap();
        let inv = invert(&sys, &germ, EV_BUDGET).unwrap();
        assert_eq!(g.path_string(&inv.alpha), "e1");
        assert_eq!(sys.word_string(&inv.word), "a^-1");
        assert_eq!(g.path_string(&inv.beta), "e4");
        let expected_point =
            EvPath::new(path(&sys, &["e4", "e2"]), path(&sys, &["e1"])).unwrap();
        assert!(inv.point.same_point(&expected_point));

        // gamma^-1 gamma is the unit germ at the domain point
        let back = compose(&sys, &inv, &germ, EV_BUDGET).unwrap();
        let unit = Germ::unit_at(germ.point.clone());
        assert_eq!(germ_equal(&sys, &back, &unit, Budget::default()), Answer::Yes);
    }

    #[test]
    fn rho_is_additive() {
        let sys = fixtures::example_system();
        let germ = Germ::new(
            &sys,
            path(&sys, &["e4"]),
            sys.parse_word("a").unwrap(),
            path(&sys, &["e1"]),
            e1_inf(&sys),
        )
        .unwrap();
        assert_eq!(germ.rho(), 0);

        let e1_idem = Germ::new(
            &sys,
            path(&sys, &["e1"]),
            sys.parse_word("u").unwrap(),
            empty(&sys, "u"),
            e1_inf(&sys),
        )
        .unwrap();
        assert_eq!(e1_idem.rho(), 1);

        let inv = invert(&sys, &e1_idem, EV_BUDGET).unwrap();
        assert_eq!(inv.rho(), -1);
    }

    #[test]
    fn standard_bisections() {
        let sys = fixtures::example_system();
        let g = sys.graph();
        let a = sys.parse_word("a").unwrap();
        let b = std_bisection_word(&sys, &a);
        assert_eq!(g.path_string(&b.alpha), "v");
        assert_eq!(g.path_string(&b.beta), "u");
        assert_eq!(b.rho(), 0);

        let e1 = g.edge_by_name("e1").unwrap();
        let be = std_bisection_edge(&sys, e1);
        assert_eq!(g.path_string(&be.alpha), "e1");
        assert!(be.word.is_unit());
        assert_eq!(be.rho(), 1);

        let bu = std_bisection_vertex(g.vertex_by_name("u").unwrap());
        assert_eq!(bu.rho(), 0);
    }
}
