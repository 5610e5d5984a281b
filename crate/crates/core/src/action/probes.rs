//! Structural probes: pseudo-freeness, orbits, isotropy evidence, degree
//! cocycles and the level-k orbit relation.
//!
//! These are bounded searches, not proofs. Every report records the bound it
//! ran at, and word-problem `Unknown`s are surfaced instead of being guessed
//! away.

use std::collections::BTreeMap;

use crate::action::{ActionSystem, Budget, GenId, IsUnit, LetterEndpoints, Word};
use crate::graph::{Path, VertexId};

/// Integer degree per generator, extended additively to words (units are 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCocycle {
    degrees: Vec<i64>,
}

impl DegreeCocycle {
    pub fn new(sys: &ActionSystem, degrees: Vec<i64>) -> DegreeCocycle {
        assert_eq!(degrees.len(), sys.generator_count());
        DegreeCocycle { degrees }
    }

    /// All generators mapped to zero.
    pub fn zero(sys: &ActionSystem) -> DegreeCocycle {
        DegreeCocycle {
            degrees: vec![0; sys.generator_count()],
        }
    }

    pub fn degree_of_gen(&self, g: GenId) -> i64 {
        self.degrees[g.index()]
    }

    pub fn degree(&self, w: &Word) -> i64 {
        w.letters()
            .iter()
            .map(|l| {
                let d = self.degrees[l.gen.index()];
                if l.inverse {
                    -d
                } else {
                    d
                }
            })
            .sum()
    }
}

/// Outcome of the bounded pseudo-freeness search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoFreeReport {
    pub bound: usize,
    /// First counterexample `(w, e)`: `w.e = e`, `w|_e` a unit, `w` not a unit.
    pub violation: Option<(Word, crate::graph::EdgeId)>,
    /// Words whose unit test came back `Unknown`; reported, not fatal.
    pub inconclusive: Vec<Word>,
}

impl PseudoFreeReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none() && self.inconclusive.is_empty()
    }
}

/// Evidence about one certified non-unit loop word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopEvidence {
    pub word: Word,
    /// Largest n <= power_bound with `is_unit(word^k) = No` for all k <= n.
    pub nonunit_powers: u32,
    /// Some power came back Unknown before the bound was reached.
    pub inconclusive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropyReport {
    pub vertex: VertexId,
    pub length_bound: usize,
    pub power_bound: u32,
    pub loops: Vec<LoopEvidence>,
    /// Loop words whose own unit test was Unknown.
    pub unknown_words: Vec<Word>,
}

impl IsotropyReport {
    /// True when some loop is certified non-unit with all powers up to the
    /// bound non-unit: the probe's "infinite order" evidence.
    pub fn has_infinite_order_evidence(&self) -> bool {
        self.loops
            .iter()
            .any(|l| !l.inconclusive && l.nonunit_powers == self.power_bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleReport {
    pub bound: usize,
    pub unit_words_checked: usize,
    pub unknown_words: usize,
}

/// A unit word with nonzero degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleConflict {
    pub word: Word,
    pub degree: i64,
}

impl ActionSystem {
    /// Searches reduced words up to `length_bound` for a pseudo-freeness
    /// violation: some `(w, e)` with `w.e = e`, `w|_e` a unit, `w` not one.
    pub fn pseudo_free_probe(&self, length_bound: usize, budget: Budget) -> PseudoFreeReport {
        let mut inconclusive = Vec::new();
        for w in self.reduced_words(length_bound) {
            let dom = w.dom(self);
            for &e in self.graph().out_edges(dom) {
                let (img, rest) = self.apply_edge(&w, e).expect("domain via enumeration");
                if img != e {
                    continue;
                }
                match self.is_unit(&rest, budget) {
                    IsUnit::Yes => match self.is_unit(&w, budget) {
                        IsUnit::Yes => {}
                        IsUnit::No(_) => {
                            return PseudoFreeReport {
                                bound: length_bound,
                                violation: Some((w, e)),
                                inconclusive,
                            };
                        }
                        IsUnit::Unknown => inconclusive.push(w.clone()),
                    },
                    IsUnit::No(_) => {}
                    IsUnit::Unknown => inconclusive.push(w.clone()),
                }
            }
        }
        inconclusive.dedup();
        PseudoFreeReport {
            bound: length_bound,
            violation: None,
            inconclusive,
        }
    }

    /// Orbit partition of the vertices under `t(g) ~ d(g)`, classes sorted.
    pub fn orbits(&self) -> Vec<Vec<VertexId>> {
        let n = self.graph().vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for g in self.generators() {
            let d = self.gen_dom(g).index();
            let t = self.gen_tgt(g).index();
            let (rd, rt) = (find(&mut parent, d), find(&mut parent, t));
            if rd != rt {
                parent[rd.max(rt)] = rd.min(rt);
            }
        }
        let mut classes: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for v in 0..n {
            let root = find(&mut parent, v);
            classes.entry(root).or_default().push(VertexId(v as u32));
        }
        classes.into_values().collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    /// Gathers isotropy evidence at `v`: certified non-unit loop words up to
    /// `length_bound`, with non-unit powers verified up to `power_bound`.
    pub fn isotropy_probe(
        &self,
        v: VertexId,
        length_bound: usize,
        power_bound: u32,
        budget: Budget,
    ) -> IsotropyReport {
        let mut loops = Vec::new();
        let mut unknown_words = Vec::new();
        for w in self.reduced_words(length_bound) {
            if w.dom(self) != v || w.tgt(self) != v {
                continue;
            }
            match self.is_unit(&w, budget) {
                IsUnit::Yes => {}
                IsUnit::Unknown => unknown_words.push(w),
                IsUnit::No(_) => {
                    let mut nonunit_powers = 1;
                    let mut inconclusive = false;
                    for n in 2..=power_bound {
                        let wn = w.power(self, n).expect("loop powers compose");
                        match self.is_unit(&wn, budget) {
                            IsUnit::No(_) => nonunit_powers = n,
                            IsUnit::Yes => break,
                            IsUnit::Unknown => {
                                inconclusive = true;
                                break;
                            }
                        }
                    }
                    loops.push(LoopEvidence {
                        word: w,
                        nonunit_powers,
                        inconclusive,
                    });
                }
            }
        }
        IsotropyReport {
            vertex: v,
            length_bound,
            power_bound,
            loops,
            unknown_words,
        }
    }

    /// Soundness check for a degree cocycle: every sampled word that is
    /// certifiably a unit must have degree zero.
    pub fn validate_cocycle(
        &self,
        cocycle: &DegreeCocycle,
        length_bound: usize,
        budget: Budget,
    ) -> Result<CocycleReport, CocycleConflict> {
        let mut checked = 0;
        let mut unknown = 0;
        for w in self.reduced_words(length_bound) {
            if w.dom(self) != w.tgt(self) {
                continue;
            }
            match self.is_unit(&w, budget) {
                IsUnit::Yes => {
                    checked += 1;
                    let degree = cocycle.degree(&w);
                    if degree != 0 {
                        return Err(CocycleConflict { word: w, degree });
                    }
                }
                IsUnit::Unknown => unknown += 1,
                IsUnit::No(_) => {}
            }
        }
        Ok(CocycleReport {
            bound: length_bound,
            unit_words_checked: checked,
            unknown_words: unknown,
        })
    }

    /// The level-k orbit relation: partitions `E^k` by the orbit of the
    /// source vertex. Classes are sorted lexicographically.
    pub fn rk_classes(&self, k: usize) -> Vec<Vec<Path>> {
        let orbits = self.orbits();
        let orbit_of = |v: VertexId| -> usize {
            orbits
                .iter()
                .position(|class| class.contains(&v))
                .expect("orbits cover the vertices")
        };
        let mut classes: BTreeMap<usize, Vec<Path>> = BTreeMap::new();
        for p in self
            .graph()
            .all_paths_of_length(k)
            .expect("validated graph")
        {
            classes.entry(orbit_of(p.source())).or_default().push(p);
        }
        let mut out: Vec<Vec<Path>> = classes.into_values().collect();
        for class in &mut out {
            class.sort();
        }
        out
    }
}
