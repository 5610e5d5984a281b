//! Groupoid-on-groupoid actions, semidirect and skew products, and the
//! similarity theorem as an executable check.
//!
//! A right action of `G` on `H` is an anchor `p : H -> G^(0)` constant on
//! `d`/`t` fibers together with maps `h . g` for `t(g) = p(h)` satisfying
//!
//! ```text
//! i)   p(h.g) = d(g)
//! ii)  h.(g1 g2) = (h.g1).g2
//! iii) (h1 h2).g = (h1.g)(h2.g)
//! iv)  h.p(h) = h
//! ```
//!
//! The semidirect product `H x| G` multiplies by `(h,g)(h'.g, g') = (hh', gg')`
//! with inverse `(h,g)^-1 = (h^-1.g, g^-1)`; the skew product `G x_rho Gamma`
//! by `(g,gamma)(g', gamma rho(g)) = (gg', gamma)`. Two homomorphisms
//! `f1, f2 : G1 -> G2` are similar through `theta : G1^(0) -> G2` when
//! `theta(t(x)) f1(x) = f2(x) theta(d(x))` for every `x`; two groupoids are
//! similar when homs both ways compose to maps similar to the identities.
//! The canonical data below realizes `(H x| G) x_pi G ~ H` and
//! `(G x_rho Gamma) x| Gamma ~ G`, and the checker verifies the identities
//! elementwise.

use std::collections::HashMap;

use super::{ElemId, FgError, FiniteGroupoid, GroupoidHom};

/// A validated right action of `acting` on `space`.
#[derive(Debug, Clone)]
pub struct GroupoidAction {
    pub acting: FiniteGroupoid,
    pub space: FiniteGroupoid,
    /// anchor on space units, indexed parallel to `space.units()`
    anchor: Vec<ElemId>,
    act: HashMap<(ElemId, ElemId), ElemId>,
}

impl GroupoidAction {
    /// Builds the action table from `act_fn` over all pairs with
    /// `t(g) = p(h)` and validates the axioms exhaustively.
    pub fn new(
        acting: FiniteGroupoid,
        space: FiniteGroupoid,
        anchor: Vec<ElemId>,
        act_fn: impl Fn(ElemId, ElemId) -> ElemId,
    ) -> Result<GroupoidAction, FgError> {
        if anchor.len() != space.units().len() {
            return Err(FgError::BadAction {
                axiom: "anchor".into(),
                at: "wrong anchor length".into(),
            });
        }
        for &g_unit in &anchor {
            if !acting.is_unit(g_unit) {
                return Err(FgError::BadAction {
                    axiom: "anchor".into(),
                    at: "anchor value is not a unit of the acting groupoid".into(),
                });
            }
        }
        // p is constant on d/t fibers
        let p0 = |u: ElemId| anchor[space.unit_index(u)];
        for h in space.elements() {
            if p0(space.dom(h)) != p0(space.tgt(h)) {
                return Err(FgError::BadAction {
                    axiom: "anchor".into(),
                    at: space.name(h).to_string(),
                });
            }
        }
        let p = |h: ElemId| p0(space.dom(h));

        let mut act = HashMap::new();
        for h in space.elements() {
            for g in acting.elements() {
                if acting.tgt(g) == p(h) {
                    let hg = act_fn(h, g);
                    if hg.index() >= space.size() {
                        return Err(FgError::UnknownElement(format!("#{}", hg.0)));
                    }
                    act.insert((h, g), hg);
                }
            }
        }
        let action = GroupoidAction {
            acting,
            space,
            anchor,
            act,
        };
        action.validate()?;
        Ok(action)
    }

    fn validate(&self) -> Result<(), FgError> {
        let fail = |axiom: &str, at: String| FgError::BadAction {
            axiom: axiom.into(),
            at,
        };
        // i) p(h.g) = d(g)
        for (&(h, g), &hg) in &self.act {
            if self.p(hg) != self.acting.dom(g) {
                return Err(fail("i", format!("{} . {}", self.space.name(h), self.acting.name(g))));
            }
        }
        // ii) h.(g1 g2) = (h.g1).g2
        for (&(h, g1), &hg1) in &self.act {
            for g2 in self.acting.elements() {
                if let Some(g12) = self.acting.product(g1, g2) {
                    let lhs = self.act.get(&(h, g12));
                    let rhs = self.act.get(&(hg1, g2));
                    if lhs != rhs || lhs.is_none() {
                        return Err(fail(
                            "ii",
                            format!(
                                "{} . ({} {})",
                                self.space.name(h),
                                self.acting.name(g1),
                                self.acting.name(g2)
                            ),
                        ));
                    }
                }
            }
        }
        // iii) (h1 h2).g = (h1.g)(h2.g)
        for h1 in self.space.elements() {
            for h2 in self.space.elements() {
                let h12 = match self.space.product(h1, h2) {
                    Some(x) => x,
                    None => continue,
                };
                for g in self.acting.elements() {
                    if let Some(&lhs) = self.act.get(&(h12, g)) {
                        let (h1g, h2g) = match (self.act.get(&(h1, g)), self.act.get(&(h2, g))) {
                            (Some(&a), Some(&b)) => (a, b),
                            _ => {
                                return Err(fail(
                                    "iii",
                                    format!("factors of {} undefined", self.space.name(h12)),
                                ))
                            }
                        };
                        if self.space.product(h1g, h2g) != Some(lhs) {
                            return Err(fail(
                                "iii",
                                format!(
                                    "({} {}) . {}",
                                    self.space.name(h1),
                                    self.space.name(h2),
                                    self.acting.name(g)
                                ),
                            ));
                        }
                    }
                }
            }
        }
        // iv) h.p(h) = h
        for h in self.space.elements() {
            if self.act.get(&(h, self.p(h))) != Some(&h) {
                return Err(fail("iv", self.space.name(h).to_string()));
            }
        }
        Ok(())
    }

    /// `p(h)` as a unit of the acting groupoid.
    pub fn p(&self, h: ElemId) -> ElemId {
        self.anchor[self.space.unit_index(self.space.dom(h))]
    }

    /// `h . g`; defined when `t(g) = p(h)`.
    pub fn act(&self, h: ElemId, g: ElemId) -> Option<ElemId> {
        self.act.get(&(h, g)).copied()
    }

    /// The trivial action of a one-unit group: `h . g = h`.
    pub fn trivial_of_group(
        group: FiniteGroupoid,
        space: FiniteGroupoid,
    ) -> Result<GroupoidAction, FgError> {
        assert_eq!(group.units().len(), 1, "trivial actions need one unit");
        let unit = group.units()[0];
        let anchor = vec![unit; space.units().len()];
        GroupoidAction::new(group, space, anchor, |h, _| h)
    }

    /// Action of a cyclic one-unit group through a space automorphism of
    /// matching order: `h . g^k = sigma^k(h)`.
    pub fn of_cyclic_by_automorphism(
        group: FiniteGroupoid,
        space: FiniteGroupoid,
        sigma: &GroupoidHom,
    ) -> Result<GroupoidAction, FgError> {
        assert_eq!(group.units().len(), 1);
        let unit = group.units()[0];
        let anchor = vec![unit; space.units().len()];
        // element k of the cyclic group acts as sigma^k; ids are 0..n with 0 the unit
        GroupoidAction::new(group, space, anchor, |h, g| {
            let mut x = h;
            for _ in 0..g.index() {
                x = sigma.apply(x);
            }
            x
        })
    }
}

/// A product-style groupoid together with the pairing of its elements.
#[derive(Debug, Clone)]
pub struct ProductGroupoid {
    pub gpd: FiniteGroupoid,
    parts: Vec<(ElemId, ElemId)>,
    index: HashMap<(ElemId, ElemId), ElemId>,
}

impl ProductGroupoid {
    pub fn parts_of(&self, x: ElemId) -> (ElemId, ElemId) {
        self.parts[x.index()]
    }

    pub fn id_of(&self, a: ElemId, b: ElemId) -> Option<ElemId> {
        self.index.get(&(a, b)).copied()
    }
}

fn assemble(
    names: Vec<String>,
    pairs: Vec<(ElemId, ElemId)>,
    units: Vec<ElemId>,
    dom: Vec<ElemId>,
    tgt: Vec<ElemId>,
    products: Vec<(ElemId, ElemId, ElemId)>,
) -> Result<ProductGroupoid, FgError> {
    let index: HashMap<(ElemId, ElemId), ElemId> = pairs
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, ElemId(i as u32)))
        .collect();
    let gpd = FiniteGroupoid::new(names, units, dom, tgt, products)?;
    Ok(ProductGroupoid {
        gpd,
        parts: pairs,
        index,
    })
}

/// The semidirect product `H x| G` of a right action: elements are pairs
/// `(h, g)` with `t(g) = p(h)`; `d(h,g) = (d(h).g, d(g))`, `t(h,g) = (t(h),
/// p(t(h)))`, product `(h1,g1)(h2,g2) = (h1 (h2.g1^-1), g1 g2)` when
/// `t(g2) = d(g1)` and the `H`-product is defined.
pub fn semidirect(action: &GroupoidAction) -> Result<ProductGroupoid, FgError> {
    let h_g = &action.space;
    let g_g = &action.acting;
    let mut pairs = Vec::new();
    let mut names = Vec::new();
    for h in h_g.elements() {
        for g in g_g.elements() {
            if g_g.tgt(g) == action.p(h) {
                pairs.push((h, g));
                names.push(format!("({},{})", h_g.name(h), g_g.name(g)));
            }
        }
    }
    let index: HashMap<(ElemId, ElemId), usize> = pairs
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();
    let id = |h: ElemId, g: ElemId| ElemId(index[&(h, g)] as u32);

    let mut units = Vec::new();
    for &u in h_g.units() {
        units.push(id(u, action.p(u)));
    }
    let mut dom = Vec::new();
    let mut tgt = Vec::new();
    for &(h, g) in &pairs {
        let dh_g = action
            .act(h_g.dom(h), g)
            .expect("t(g) = p(h) = p(d(h)) so the action is defined");
        dom.push(id(dh_g, g_g.dom(g)));
        let th = h_g.tgt(h);
        tgt.push(id(th, action.p(th)));
    }
    let mut products = Vec::new();
    for &(h1, g1) in &pairs {
        for &(h2, g2) in &pairs {
            if g_g.tgt(g2) != g_g.dom(g1) {
                continue;
            }
            let g1_inv = g_g.inverse(g1);
            let h2_back = action
                .act(h2, g1_inv)
                .expect("p(h2) = t(g2) = d(g1) = t(g1^-1)");
            let hh = match h_g.product(h1, h2_back) {
                Some(x) => x,
                None => continue,
            };
            let gg = g_g.product(g1, g2).expect("checked composable");
            products.push((id(h1, g1), id(h2, g2), id(hh, gg)));
        }
    }
    assemble(names, pairs, units, dom, tgt, products)
}

/// The skew product `G x_rho Gamma`: elements `(g, gamma)` with
/// `d(gamma) = t(rho(g))`; `d(g,gamma) = (d(g), gamma rho(g))`,
/// `t(g,gamma) = (t(g), gamma)`, product `(g1,gamma1)(g2, gamma1 rho(g1)) =
/// (g1 g2, gamma1)`.
pub fn skew(
    g_g: &FiniteGroupoid,
    gamma_g: &FiniteGroupoid,
    rho: &GroupoidHom,
) -> Result<ProductGroupoid, FgError> {
    let mut pairs = Vec::new();
    let mut names = Vec::new();
    for x in g_g.elements() {
        for c in gamma_g.elements() {
            if gamma_g.dom(c) == gamma_g.tgt(rho.apply(x)) {
                pairs.push((x, c));
                names.push(format!("({},{})", g_g.name(x), gamma_g.name(c)));
            }
        }
    }
    let index: HashMap<(ElemId, ElemId), usize> = pairs
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();
    let id = |x: ElemId, c: ElemId| ElemId(index[&(x, c)] as u32);

    let mut units = Vec::new();
    for &(x, c) in &pairs {
        if g_g.is_unit(x) && gamma_g.dom(c) == rho.apply(x) {
            // (u, c) is a unit exactly when rho(u) = d(c), which is the
            // element condition itself for units
            units.push(id(x, c));
        }
    }
    let mut dom = Vec::new();
    let mut tgt = Vec::new();
    for &(x, c) in &pairs {
        let c_rho = gamma_g
            .product(c, rho.apply(x))
            .expect("d(c) = t(rho(x)) by the element condition");
        dom.push(id(g_g.dom(x), c_rho));
        tgt.push(id(g_g.tgt(x), c));
    }
    let mut products = Vec::new();
    for &(x1, c1) in &pairs {
        for &(x2, c2) in &pairs {
            if g_g.dom(x1) != g_g.tgt(x2) {
                continue;
            }
            let expected = gamma_g
                .product(c1, rho.apply(x1))
                .expect("element condition");
            if c2 != expected {
                continue;
            }
            let xx = g_g.product(x1, x2).expect("checked composable");
            products.push((id(x1, c1), id(x2, c2), id(xx, c1)));
        }
    }
    assemble(names, pairs, units, dom, tgt, products)
}

/// Similarity data between a constructed groupoid and a reference one:
/// `phi : left -> right`, `psi : right -> left` with `phi . psi = id`, plus
/// the conjugating unit-space maps for both composites.
#[derive(Debug, Clone)]
pub struct SimilarityData {
    pub left: FiniteGroupoid,
    pub right: FiniteGroupoid,
    pub phi: GroupoidHom,
    pub psi: GroupoidHom,
    /// per left unit (parallel to `left.units()`): conjugates `id ~ psi.phi`
    pub theta_left: Vec<ElemId>,
    /// per right unit: conjugates `id ~ phi.psi`
    pub theta_right: Vec<ElemId>,
}

/// A failed similarity identity, with the element it failed at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityFailure {
    pub side: &'static str,
    pub element: String,
}

/// Verifies `theta(t(x)) f1(x) = f2(x) theta(d(x))` for all `x`.
fn homs_similar(
    g: &FiniteGroupoid,
    f1: &GroupoidHom,
    f2: &GroupoidHom,
    theta: &[ElemId],
    side: &'static str,
) -> Result<(), SimilarityFailure> {
    let theta_at = |u: ElemId| theta[g.unit_index(u)];
    for x in g.elements() {
        let lhs = g.product(theta_at(g.tgt(x)), f1.apply(x));
        let rhs = g.product(f2.apply(x), theta_at(g.dom(x)));
        if lhs.is_none() || lhs != rhs {
            return Err(SimilarityFailure {
                side,
                element: g.name(x).to_string(),
            });
        }
    }
    Ok(())
}

/// Checks the two similarity identities elementwise; `Err` carries a witness.
pub fn check_similarity(data: &SimilarityData) -> Result<(), SimilarityFailure> {
    let psi_phi = data.psi.compose(&data.phi);
    homs_similar(
        &data.left,
        &GroupoidHom::identity(&data.left),
        &psi_phi,
        &data.theta_left,
        "left (*)",
    )?;
    let phi_psi = data.phi.compose(&data.psi);
    homs_similar(
        &data.right,
        &GroupoidHom::identity(&data.right),
        &phi_psi,
        &data.theta_right,
        "right (**)",
    )
}

/// Canonical similarity `(H x| G) x_pi G ~ H` for a right action of `G` on
/// `H`: with `K` the double product,
///
/// ```text
/// phi(h, g, g') = h . g'^-1
/// psi(h)        = (h, p(h), p(h))
/// theta(u, g')  = (u . g'^-1, g', t(g'))
/// ```
pub fn canonical_similarity_action(
    action: &GroupoidAction,
) -> Result<(SimilarityData, ProductGroupoid, ProductGroupoid), FgError> {
    let s = semidirect(action)?;
    let g_g = &action.acting;
    let h_g = &action.space;
    // pi : S -> G
    let pi_map: Vec<ElemId> = s.gpd.elements().map(|x| s.parts_of(x).1).collect();
    let pi = GroupoidHom::new(&s.gpd, g_g, pi_map)?;
    let k = skew(&s.gpd, g_g, &pi)?;

    // phi : K -> H, ((h,g),g') -> h.g'^-1
    let mut phi_map = Vec::new();
    for x in k.gpd.elements() {
        let (s_elem, g2) = k.parts_of(x);
        let (h, _) = s.parts_of(s_elem);
        let img = action
            .act(h, g_g.inverse(g2))
            .expect("d(g') = t(g), and p(h) = t(g) = t... the action is defined");
        phi_map.push(img);
    }
    let phi = GroupoidHom::new(&k.gpd, h_g, phi_map)?;

    // psi : H -> K, h -> ((h, p(h)), p(h))
    let mut psi_map = Vec::new();
    for h in h_g.elements() {
        let p = action.p(h);
        let s_elem = s.id_of(h, p).expect("(h, p(h)) is an element of the semidirect");
        let kk = k.id_of(s_elem, p).expect("(s, p(h)) satisfies the skew condition");
        psi_map.push(kk);
    }
    let psi = GroupoidHom::new(h_g, &k.gpd, psi_map)?;

    // theta on K units: ((u, p(u)), g') -> ((u.g'^-1, g'), t(g'))
    let mut theta_left = Vec::new();
    for &ku in k.gpd.units() {
        let (s_unit, g2) = k.parts_of(ku);
        let (u, _) = s.parts_of(s_unit);
        let moved = action
            .act(u, g_g.inverse(g2))
            .expect("d(g') = p(u) on skew units");
        let s_elem = s
            .id_of(moved, g2)
            .expect("(u.g'^-1, g') lies in the semidirect");
        let val = k
            .id_of(s_elem, g_g.tgt(g2))
            .expect("(s, t(g')) satisfies the skew condition");
        theta_left.push(val);
    }
    // theta on H units: the units themselves
    let theta_right = h_g.units().to_vec();

    let data = SimilarityData {
        left: k.gpd.clone(),
        right: h_g.clone(),
        phi,
        psi,
        theta_left,
        theta_right,
    };
    Ok((data, s, k))
}

/// Canonical similarity `(G x_rho Gamma) x| Gamma ~ G` for a homomorphism
/// `rho : G -> Gamma`: with `M` the double product,
///
/// ```text
/// phi(g, gamma, gamma') = g
/// psi(g)                = (g, rho(t(g)), rho(g))
/// theta(u, gamma)       = (u, rho(u), gamma^-1)
/// ```
pub fn canonical_similarity_cocycle(
    g_g: &FiniteGroupoid,
    gamma_g: &FiniteGroupoid,
    rho: &GroupoidHom,
) -> Result<(SimilarityData, ProductGroupoid, ProductGroupoid), FgError> {
    let p = skew(g_g, gamma_g, rho)?;
    // right action of Gamma on P: (g,gamma).gamma' = (g, gamma'^-1 gamma),
    // anchored at p(g,gamma) = t(gamma)
    let anchor: Vec<ElemId> = p
        .gpd
        .units()
        .iter()
        .map(|&u| {
            let (_, c) = p.parts_of(u);
            gamma_g.tgt(c)
        })
        .collect();
    let p_clone = p.gpd.clone();
    let gamma_clone = gamma_g.clone();
    let action = GroupoidAction::new(gamma_clone, p_clone, anchor, |x, c| {
        let (g, gamma) = p.parts_of(x);
        let moved = gamma_g
            .product(gamma_g.inverse(c), gamma)
            .expect("t(c) = t(gamma) so c^-1 gamma is composable");
        p.id_of(g, moved).expect("the moved pair stays in the skew product")
    })?;
    let m = semidirect(&action)?;

    // phi : M -> G
    let mut phi_map = Vec::new();
    for x in m.gpd.elements() {
        let (p_elem, _) = m.parts_of(x);
        let (g, _) = action_space_parts(&p, p_elem);
        phi_map.push(g);
    }
    let phi = GroupoidHom::new(&m.gpd, g_g, phi_map)?;

    // psi : G -> M
    let mut psi_map = Vec::new();
    for g in g_g.elements() {
        let pe = p
            .id_of(g, rho.apply(g_g.tgt(g)))
            .expect("(g, rho(t(g))) is in the skew product");
        let me = m
            .id_of(pe, rho.apply(g))
            .expect("t(rho(g)) = rho(t(g)) = p(g, rho(t(g)))");
        psi_map.push(me);
    }
    let psi = GroupoidHom::new(g_g, &m.gpd, psi_map)?;

    // theta on M units: M^(0) = P^(0) = {(u, gamma)}; theta(u, gamma) =
    // ((u, rho(u)), gamma^-1)
    let mut theta_left = Vec::new();
    for &mu in m.gpd.units() {
        let (p_unit, _) = m.parts_of(mu);
        let (u, gamma) = action_space_parts(&p, p_unit);
        let pe = p
            .id_of(u, rho.apply(u))
            .expect("(u, rho(u)) is in the skew product");
        let me = m
            .id_of(pe, gamma_g.inverse(gamma))
            .expect("t(gamma^-1) = d(gamma) = rho(u) = p(u, rho(u))");
        theta_left.push(me);
    }
    let theta_right = g_g.units().to_vec();

    let data = SimilarityData {
        left: m.gpd.clone(),
        right: g_g.clone(),
        phi,
        psi,
        theta_left,
        theta_right,
    };
    Ok((data, p, m))
}

fn action_space_parts(p: &ProductGroupoid, x: ElemId) -> (ElemId, ElemId) {
    p.parts_of(x)
}
