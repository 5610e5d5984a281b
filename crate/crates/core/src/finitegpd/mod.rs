//! Explicit finite groupoids: multiplication tables with machine-checked
//! category axioms, standard constructions, homomorphisms, groupoid-on-
//! groupoid actions with semidirect and skew products, an executable
//! similarity checker, and homology via the nerve chain complex.
//!
//! Conventions: a pair `(x, y)` is composable when `d(x) = t(y)` and the
//! product is `x y` with `d(xy) = d(y)`, `t(xy) = t(x)`.

pub mod nerve;
pub mod similarity;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Interned element identifier inside one finite groupoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemId(pub u32);

impl ElemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FgError {
    #[error("element `{0}` is unknown")]
    UnknownElement(String),
    #[error("duplicate element name `{0}`")]
    DuplicateElement(String),
    #[error("d/t of `{0}` is not a unit")]
    EndpointNotUnit(String),
    #[error("unit `{0}` must satisfy d(u) = t(u) = u")]
    BadUnit(String),
    #[error("product `{left} . {right}` is {kind}")]
    BadProduct {
        left: String,
        right: String,
        kind: String,
    },
    #[error("associativity fails at `{x} . {y} . {z}`")]
    NotAssociative { x: String, y: String, z: String },
    #[error("unit law fails at `{0}`")]
    UnitLaw(String),
    #[error("element `{0}` has no two-sided inverse")]
    NoInverse(String),
    #[error("homomorphism is not structure preserving at `{0}`")]
    NotAHomomorphism(String),
    #[error("action axiom {axiom} fails at {at}")]
    BadAction { axiom: String, at: String },
    #[error("nerve too large: {0} tuples exceeds the guard")]
    NerveTooLarge(usize),
}

/// A finite groupoid given by explicit tables, validated on construction:
/// endpoints land in units, products are defined exactly on composable
/// pairs, composition is associative, units are neutral and every element
/// has a two-sided inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    names: Vec<String>,
    units: Vec<ElemId>,
    is_unit: Vec<bool>,
    dom: Vec<ElemId>,
    tgt: Vec<ElemId>,
    /// dense n*n table; `None` = not composable
    prod: Vec<Option<ElemId>>,
    inv: Vec<ElemId>,
}

impl FiniteGroupoid {
    /// Builds and validates. `products` lists `(x, y, xy)` for composable
    /// pairs; products involving units may be omitted (the unit laws fill
    /// them in).
    pub fn new(
        names: Vec<String>,
        units: Vec<ElemId>,
        dom: Vec<ElemId>,
        tgt: Vec<ElemId>,
        products: Vec<(ElemId, ElemId, ElemId)>,
    ) -> Result<FiniteGroupoid, FgError> {
        let n = names.len();
        {
            let mut seen = std::collections::HashSet::new();
            for name in &names {
                if !seen.insert(name.clone()) {
                    return Err(FgError::DuplicateElement(name.clone()));
                }
            }
        }
        let mut is_unit = vec![false; n];
        for u in &units {
            if u.index() >= n {
                return Err(FgError::UnknownElement(format!("#{}", u.0)));
            }
            is_unit[u.index()] = true;
        }
        if dom.len() != n || tgt.len() != n {
            return Err(FgError::UnknownElement(
                "d/t tables have wrong length".into(),
            ));
        }
        for i in 0..n {
            if dom[i].index() >= n || tgt[i].index() >= n {
                return Err(FgError::UnknownElement(names[i].clone()));
            }
            if !is_unit[dom[i].index()] || !is_unit[tgt[i].index()] {
                return Err(FgError::EndpointNotUnit(names[i].clone()));
            }
        }
        for &u in &units {
            if dom[u.index()] != u || tgt[u.index()] != u {
                return Err(FgError::BadUnit(names[u.index()].clone()));
            }
        }

        let mut prod: Vec<Option<ElemId>> = vec![None; n * n];
        let set = |prod: &mut Vec<Option<ElemId>>,
                       x: ElemId,
                       y: ElemId,
                       z: ElemId|
         -> Result<(), FgError> {
            let slot = &mut prod[x.index() * n + y.index()];
            match slot {
                Some(existing) if *existing != z => Err(FgError::BadProduct {
                    left: names[x.index()].clone(),
                    right: names[y.index()].clone(),
                    kind: "defined twice with different values".into(),
                }),
                _ => {
                    *slot = Some(z);
                    Ok(())
                }
            }
        };
        // unit laws first
        for i in 0..n {
            let x = ElemId(i as u32);
            set(&mut prod, x, dom[i], x)?;
            set(&mut prod, tgt[i], x, x)?;
        }
        for (x, y, z) in &products {
            for e in [x, y, z] {
                if e.index() >= n {
                    return Err(FgError::UnknownElement(format!("#{}", e.0)));
                }
            }
            if dom[x.index()] != tgt[y.index()] {
                return Err(FgError::BadProduct {
                    left: names[x.index()].clone(),
                    right: names[y.index()].clone(),
                    kind: "declared but not composable".into(),
                });
            }
            set(&mut prod, *x, *y, *z)?;
        }

        let gpd = FiniteGroupoid {
            names,
            units,
            is_unit,
            dom,
            tgt,
            prod,
            inv: vec![ElemId(0); n],
        };
        gpd.validate()
    }

    fn validate(mut self) -> Result<FiniteGroupoid, FgError> {
        let n = self.names.len();
        // totality and endpoint compatibility on composable pairs
        for x in self.elements() {
            for y in self.elements() {
                let composable = self.dom[x.index()] == self.tgt[y.index()];
                match self.prod[x.index() * n + y.index()] {
                    Some(z) if composable => {
                        if self.dom[z.index()] != self.dom[y.index()]
                            || self.tgt[z.index()] != self.tgt[x.index()]
                        {
                            return Err(FgError::BadProduct {
                                left: self.names[x.index()].clone(),
                                right: self.names[y.index()].clone(),
                                kind: "has wrong endpoints".into(),
                            });
                        }
                    }
                    None if !composable => {}
                    Some(_) => {
                        return Err(FgError::BadProduct {
                            left: self.names[x.index()].clone(),
                            right: self.names[y.index()].clone(),
                            kind: "defined on a non-composable pair".into(),
                        });
                    }
                    None => {
                        return Err(FgError::BadProduct {
                            left: self.names[x.index()].clone(),
                            right: self.names[y.index()].clone(),
                            kind: "missing".into(),
                        });
                    }
                }
            }
        }
        // associativity on all composable triples
        for x in self.elements() {
            for y in self.elements() {
                if self.dom[x.index()] != self.tgt[y.index()] {
                    continue;
                }
                let xy = self.product(x, y).unwrap();
                for z in self.elements() {
                    if self.dom[y.index()] != self.tgt[z.index()] {
                        continue;
                    }
                    let yz = self.product(y, z).unwrap();
                    if self.product(xy, z) != self.product(x, yz) {
                        return Err(FgError::NotAssociative {
                            x: self.names[x.index()].clone(),
                            y: self.names[y.index()].clone(),
                            z: self.names[z.index()].clone(),
                        });
                    }
                }
            }
        }
        // unit neutrality
        for x in self.elements() {
            let d = self.dom[x.index()];
            let t = self.tgt[x.index()];
            if self.product(x, d) != Some(x) || self.product(t, x) != Some(x) {
                return Err(FgError::UnitLaw(self.names[x.index()].clone()));
            }
        }
        // two-sided inverses
        for x in self.elements() {
            let mut found = None;
            for y in self.elements() {
                if self.product(x, y) == Some(self.tgt[x.index()])
                    && self.product(y, x) == Some(self.dom[x.index()])
                {
                    found = Some(y);
                    break;
                }
            }
            match found {
                Some(y) => self.inv[x.index()] = y,
                None => return Err(FgError::NoInverse(self.names[x.index()].clone())),
            }
        }
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> {
        (0..self.names.len() as u32).map(ElemId)
    }

    pub fn units(&self) -> &[ElemId] {
        &self.units
    }

    pub fn is_unit(&self, x: ElemId) -> bool {
        self.is_unit[x.index()]
    }

    pub fn name(&self, x: ElemId) -> &str {
        &self.names[x.index()]
    }

    pub fn by_name(&self, name: &str) -> Option<ElemId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| ElemId(i as u32))
    }

    pub fn dom(&self, x: ElemId) -> ElemId {
        self.dom[x.index()]
    }

    pub fn tgt(&self, x: ElemId) -> ElemId {
        self.tgt[x.index()]
    }

    /// `x y` when `d(x) = t(y)`.
    pub fn product(&self, x: ElemId, y: ElemId) -> Option<ElemId> {
        self.prod[x.index() * self.names.len() + y.index()]
    }

    pub fn inverse(&self, x: ElemId) -> ElemId {
        self.inv[x.index()]
    }

    /// Index of a unit within the `units()` slice.
    pub fn unit_index(&self, u: ElemId) -> usize {
        self.units
            .iter()
            .position(|&x| x == u)
            .expect("argument must be a unit")
    }
}

impl fmt::Display for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "finite groupoid with {} elements, {} units",
            self.size(),
            self.units.len()
        )
    }
}

/// Constructors for the standard test groupoids.
pub mod build {
    use super::*;

    /// The trivial groupoid: one unit, nothing else.
    pub fn trivial() -> FiniteGroupoid {
        FiniteGroupoid::new(
            vec!["u".into()],
            vec![ElemId(0)],
            vec![ElemId(0)],
            vec![ElemId(0)],
            vec![],
        )
        .expect("trivial groupoid is valid")
    }

    /// The pair groupoid on `k` points: elements `(i, j)`, product
    /// `(i,j)(j,l) = (i,l)`; `t = i`, `d = j`.
    pub fn pair_groupoid(k: usize) -> FiniteGroupoid {
        assert!(k >= 1);
        let id = |i: usize, j: usize| ElemId((i * k + j) as u32);
        let mut names = Vec::new();
        let mut dom = Vec::new();
        let mut tgt = Vec::new();
        for i in 0..k {
            for j in 0..k {
                names.push(format!("p{}{}", i + 1, j + 1));
                tgt.push(id(i, i));
                dom.push(id(j, j));
            }
        }
        let units: Vec<ElemId> = (0..k).map(|i| id(i, i)).collect();
        let mut products = Vec::new();
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    products.push((id(i, j), id(j, l), id(i, l)));
                }
            }
        }
        FiniteGroupoid::new(names, units, dom, tgt, products).expect("pair groupoid is valid")
    }

    /// The cyclic group `Z/n` as a one-unit groupoid.
    pub fn cyclic_group(n: usize) -> FiniteGroupoid {
        assert!(n >= 1);
        let names = (0..n)
            .map(|i| if i == 0 { "u".into() } else { format!("g{i}") })
            .collect();
        let unit = ElemId(0);
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                products.push((
                    ElemId(i as u32),
                    ElemId(j as u32),
                    ElemId(((i + j) % n) as u32),
                ));
            }
        }
        FiniteGroupoid::new(names, vec![unit], vec![unit; n], vec![unit; n], products)
            .expect("cyclic group is valid")
    }

    /// `k` isolated units with no arrows between them.
    pub fn disjoint_units(k: usize) -> FiniteGroupoid {
        let names = (0..k).map(|i| format!("u{}", i + 1)).collect();
        let ids: Vec<ElemId> = (0..k as u32).map(ElemId).collect();
        FiniteGroupoid::new(names, ids.clone(), ids.clone(), ids, vec![])
            .expect("unit groupoid is valid")
    }

    /// The transitive groupoid `V x Z/n x V` on `k` units with cyclic
    /// isotropy of order `n`: elements `(i, x, j)`, product
    /// `(i,x,j)(j,y,l) = (i,x+y,l)`.
    pub fn transitive_with_cyclic_isotropy(k: usize, n: usize) -> FiniteGroupoid {
        assert!(k >= 1 && n >= 1);
        let id = |i: usize, x: usize, j: usize| ElemId(((i * n + x) * k + j) as u32);
        let mut names = Vec::new();
        let mut dom = Vec::new();
        let mut tgt = Vec::new();
        for i in 0..k {
            for x in 0..n {
                for j in 0..k {
                    names.push(format!("t{}_{}_{}", i + 1, x, j + 1));
                    tgt.push(id(i, 0, i));
                    dom.push(id(j, 0, j));
                }
            }
        }
        let units: Vec<ElemId> = (0..k).map(|i| id(i, 0, i)).collect();
        let mut products = Vec::new();
        for i in 0..k {
            for x in 0..n {
                for j in 0..k {
                    for y in 0..n {
                        for l in 0..k {
                            products.push((id(i, x, j), id(j, y, l), id(i, (x + y) % n, l)));
                        }
                    }
                }
            }
        }
        FiniteGroupoid::new(names, units, dom, tgt, products)
            .expect("transitive isotropy groupoid is valid")
    }
}

/// A groupoid homomorphism between explicit finite groupoids, stored as an
/// element map and validated against units, endpoints and products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidHom {
    map: Vec<ElemId>,
}

impl GroupoidHom {
    pub fn new(
        src: &FiniteGroupoid,
        dst: &FiniteGroupoid,
        map: Vec<ElemId>,
    ) -> Result<GroupoidHom, FgError> {
        if map.len() != src.size() {
            return Err(FgError::NotAHomomorphism("wrong map length".into()));
        }
        for x in src.elements() {
            if map[x.index()].index() >= dst.size() {
                return Err(FgError::UnknownElement(src.name(x).to_string()));
            }
        }
        for &u in src.units() {
            if !dst.is_unit(map[u.index()]) {
                return Err(FgError::NotAHomomorphism(src.name(u).to_string()));
            }
        }
        for x in src.elements() {
            let fx = map[x.index()];
            if dst.dom(fx) != map[src.dom(x).index()] || dst.tgt(fx) != map[src.tgt(x).index()] {
                return Err(FgError::NotAHomomorphism(src.name(x).to_string()));
            }
            for y in src.elements() {
                if let Some(xy) = src.product(x, y) {
                    let fy = map[y.index()];
                    if dst.product(fx, fy) != Some(map[xy.index()]) {
                        return Err(FgError::NotAHomomorphism(format!(
                            "{} . {}",
                            src.name(x),
                            src.name(y)
                        )));
                    }
                }
            }
        }
        Ok(GroupoidHom { map })
    }

    pub fn identity(g: &FiniteGroupoid) -> GroupoidHom {
        GroupoidHom {
            map: g.elements().collect(),
        }
    }

    pub fn apply(&self, x: ElemId) -> ElemId {
        self.map[x.index()]
    }

    /// `self` after `first` (i.e. `self . first`).
    pub fn compose(&self, first: &GroupoidHom) -> GroupoidHom {
        GroupoidHom {
            map: first.map.iter().map(|&x| self.map[x.index()]).collect(),
        }
    }
}

/// Groups elements by `(t, d)` for quick inspection in tests and reports.
pub fn hom_set_sizes(g: &FiniteGroupoid) -> BTreeMap<(ElemId, ElemId), usize> {
    let mut out = BTreeMap::new();
    for x in g.elements() {
        *out.entry((g.tgt(x), g.dom(x))).or_insert(0) += 1;
    }
    out
}
