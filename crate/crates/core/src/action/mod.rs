//! Self-similar action data and the word problem.
//!
//! An action system packages a validated graph with one move table per
//! generator: for each edge `e` with `r(e) = d(g)` the table gives the image
//! edge `g.e` and the restriction word `g|_e`. Moves must be a bijection
//! `d(g)E^1 -> t(g)E^1` at level 1 and the restriction endpoints must satisfy
//! `d(g|_e) = s(e)` and `t(g|_e) = s(g.e)`. Inverse tables are derived from
//! `g^-1 . (g.e) = e` and `g^-1|_{g.e} = (g|_e)^-1`.
//!
//! A word denotes its action on the path forest; two words are equal exactly
//! when they act equally. The word problem is semi-decided by a restriction
//! closure with explicit budgets, so answers are `Yes`, `No` with a concrete
//! moved-path witness, or `Unknown`.

pub mod probes;
pub mod word;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Mutex;

use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError, Path, VertexId};
pub use word::{GenId, Letter, LetterEndpoints, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
    #[error("word error: {0}")]
    Word(#[from] WordError),
    #[error("generator `{0}`: level-1 moves are not a bijection d(g)E^1 -> t(g)E^1")]
    NotBijectiveAtLevel1(String),
    #[error("generator `{gen}`: image of edge `{edge}` has range != t(g)")]
    RangeMismatch { gen: String, edge: String },
    #[error("generator `{gen}`: restriction at edge `{edge}` has wrong endpoints")]
    RestrictionEndpointMismatch { gen: String, edge: String },
    #[error("generator `{gen}`: supplied inverse row at edge `{edge}` conflicts with the derived table")]
    InverseTableConflict { gen: String, edge: String },
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("word with domain `{dom}` does not act on edge with range `{range}`")]
    NotInDomain { dom: String, range: String },
}

/// Move tables for one generator, in interned form.
#[derive(Debug, Clone)]
pub struct GeneratorData {
    pub name: String,
    pub dom: VertexId,
    pub tgt: VertexId,
    /// `(e, g.e, g|_e)` rows; must cover `d(g)E^1` exactly.
    pub moves: Vec<(EdgeId, EdgeId, Word)>,
    /// Optional explicit rows for `g^-1`, verified against the derived table.
    pub inverse_moves: Vec<(EdgeId, EdgeId, Word)>,
}

/// Budgets for the word-problem closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum size of the seen-set of reduced words.
    pub max_seen: usize,
    /// Maximum letter length of any restriction word encountered.
    pub max_len: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_seen: 10_000,
            max_len: 64,
        }
    }
}

/// A three-valued answer for budgeted decision procedures without witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn is_yes(&self) -> bool {
        matches!(self, Answer::Yes)
    }
    pub fn is_no(&self) -> bool {
        matches!(self, Answer::No)
    }
    pub fn is_unknown(&self) -> bool {
        matches!(self, Answer::Unknown)
    }
}

/// Outcome of the word problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsUnit {
    Yes,
    No(Witness),
    Unknown,
}

impl From<&IsUnit> for Answer {
    fn from(value: &IsUnit) -> Answer {
        match value {
            IsUnit::Yes => Answer::Yes,
            IsUnit::No(_) => Answer::No,
            IsUnit::Unknown => Answer::Unknown,
        }
    }
}

impl IsUnit {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsUnit::Yes)
    }
    pub fn is_no(&self) -> bool {
        matches!(self, IsUnit::No(_))
    }
    pub fn is_unknown(&self) -> bool {
        matches!(self, IsUnit::Unknown)
    }
}

/// Evidence that a word is not a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `d(w) != t(w)`, so the word cannot act as an identity.
    EndpointMismatch { dom: VertexId, tgt: VertexId },
    /// A finite path the word moves: `w . path = image != path`.
    MovedPath { path: Path, image: Path },
}

#[derive(Debug, Clone, Copy)]
struct GenInfo {
    dom: VertexId,
    tgt: VertexId,
}

#[derive(Default)]
struct Caches {
    /// (reduced word, edge) -> (image edge, restriction word)
    edge: HashMap<(Word, EdgeId), (EdgeId, Word)>,
    /// certified word-problem answers; Unknown is never cached
    unit: HashMap<Word, IsUnit>,
}

/// A validated self-similar action system.
///
/// Immutable after construction apart from internal memo caches, whose
/// inserts are idempotent; the system is safe to share across threads.
pub struct ActionSystem {
    graph: Graph,
    names: Vec<String>,
    info: Vec<GenInfo>,
    /// forward moves, indexed `[gen][edge] -> (image, restriction)`
    fwd: Vec<Vec<Option<(EdgeId, Word)>>>,
    /// derived inverse moves, same indexing
    inv: Vec<Vec<Option<(EdgeId, Word)>>>,
    caches: Mutex<Caches>,
}

impl fmt::Debug for ActionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ActionSystem")
            .field("generators", &self.names)
            .finish()
    }
}

impl LetterEndpoints for ActionSystem {
    fn gen_dom(&self, g: GenId) -> VertexId {
        self.info[g.index()].dom
    }
    fn gen_tgt(&self, g: GenId) -> VertexId {
        self.info[g.index()].tgt
    }
}

impl ActionSystem {
    /// Validates the tables and derives the inverse tables.
    pub fn build(graph: Graph, generators: Vec<GeneratorData>) -> Result<ActionSystem, ActionError> {
        graph.validate()?;
        let n_edges = graph.edge_count();
        let mut names = Vec::new();
        let mut info = Vec::new();
        let mut fwd = Vec::new();
        let mut inv = Vec::new();

        for gen in &generators {
            if names.contains(&gen.name) {
                return Err(ActionError::DuplicateGenerator(gen.name.clone()));
            }
            names.push(gen.name.clone());
            info.push(GenInfo {
                dom: gen.dom,
                tgt: gen.tgt,
            });
        }

        let endpoints = SliceEndpoints(&info);

        for gen in &generators {
            let dom_edges: Vec<EdgeId> = graph.out_edges(gen.dom).to_vec();
            let tgt_edges: Vec<EdgeId> = graph.out_edges(gen.tgt).to_vec();
            let mut table: Vec<Option<(EdgeId, Word)>> = vec![None; n_edges];
            let mut hit: HashSet<EdgeId> = HashSet::new();

            for (e, img, rest) in &gen.moves {
                if !dom_edges.contains(e) || table[e.index()].is_some() {
                    return Err(ActionError::NotBijectiveAtLevel1(gen.name.clone()));
                }
                if graph.range(*img) != gen.tgt {
                    return Err(ActionError::RangeMismatch {
                        gen: gen.name.clone(),
                        edge: graph.edge_name(*e).to_string(),
                    });
                }
                if !hit.insert(*img) {
                    return Err(ActionError::NotBijectiveAtLevel1(gen.name.clone()));
                }
                if rest.dom(&endpoints) != graph.source(*e)
                    || rest.tgt(&endpoints) != graph.source(*img)
                {
                    return Err(ActionError::RestrictionEndpointMismatch {
                        gen: gen.name.clone(),
                        edge: graph.edge_name(*e).to_string(),
                    });
                }
                table[e.index()] = Some((*img, rest.clone()));
            }
            if gen.moves.len() != dom_edges.len() || hit.len() != tgt_edges.len() {
                return Err(ActionError::NotBijectiveAtLevel1(gen.name.clone()));
            }

            // g^-1 . (g.e) = e and g^-1|_{g.e} = (g|_e)^-1
            let mut inv_table: Vec<Option<(EdgeId, Word)>> = vec![None; n_edges];
            for (e, img, rest) in &gen.moves {
                inv_table[img.index()] = Some((*e, rest.inverse()));
            }
            for (e, img, rest) in &gen.inverse_moves {
                match &inv_table[e.index()] {
                    Some((derived_img, derived_rest))
                        if derived_img == img && derived_rest == rest => {}
                    _ => {
                        return Err(ActionError::InverseTableConflict {
                            gen: gen.name.clone(),
                            edge: graph.edge_name(*e).to_string(),
                        });
                    }
                }
            }

            fwd.push(table);
            inv.push(inv_table);
        }

        Ok(ActionSystem {
            graph,
            names,
            info,
            fwd,
            inv,
            caches: Mutex::new(Caches::default()),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generators(&self) -> impl Iterator<Item = GenId> {
        (0..self.names.len() as u32).map(GenId)
    }

    pub fn gen_name(&self, g: GenId) -> &str {
        &self.names[g.index()]
    }

    pub fn gen_by_name(&self, name: &str) -> Option<GenId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| GenId(i as u32))
    }

    /// Looks up one generator move row (forward or inverse table).
    pub fn move_row(&self, l: Letter, e: EdgeId) -> Option<&(EdgeId, Word)> {
        let table = if l.inverse {
            &self.inv[l.gen.index()]
        } else {
            &self.fwd[l.gen.index()]
        };
        table[e.index()].as_ref()
    }

    /// Applies a word to an edge: returns `(w.e, w|_e)`. Memoized.
    pub fn apply_edge(&self, w: &Word, e: EdgeId) -> Result<(EdgeId, Word), ActionError> {
        if w.dom(self) != self.graph.range(e) {
            return Err(ActionError::NotInDomain {
                dom: self.graph.vertex_name(w.dom(self)).to_string(),
                range: self.graph.vertex_name(self.graph.range(e)).to_string(),
            });
        }
        if let Word::Unit(_) = w {
            return Ok((e, Word::unit(self.graph.source(e))));
        }
        if w.len() > 1 {
            let caches = self.caches.lock().unwrap();
            if let Some(hit) = caches.edge.get(&(w.clone(), e)) {
                return Ok(hit.clone());
            }
        }
        let mut cur = e;
        let mut restriction_letters: Vec<Letter> = Vec::new();
        // rightmost letter acts first; restrictions concatenate left-to-right
        for &l in w.letters().iter().rev() {
            let (img, rest) = self
                .move_row(l, cur)
                .expect("composability guarantees the row exists")
                .clone();
            // prepend this letter's restriction
            let mut next = rest.letters().to_vec();
            next.extend_from_slice(&restriction_letters);
            restriction_letters = next;
            cur = img;
        }
        let restriction =
            Word::from_letters(self, &restriction_letters, self.graph.source(e))?;
        let result = (cur, restriction);
        if w.len() > 1 {
            let mut caches = self.caches.lock().unwrap();
            caches.edge.insert((w.clone(), e), result.clone());
        }
        Ok(result)
    }

    /// `w . e`.
    pub fn act_edge(&self, w: &Word, e: EdgeId) -> Result<EdgeId, ActionError> {
        Ok(self.apply_edge(w, e)?.0)
    }

    /// `w|_e`.
    pub fn restrict_edge(&self, w: &Word, e: EdgeId) -> Result<Word, ActionError> {
        Ok(self.apply_edge(w, e)?.1)
    }

    /// Applies a word to a finite path: returns `(w.mu, w|_mu)`.
    pub fn apply_path(&self, w: &Word, mu: &Path) -> Result<(Path, Word), ActionError> {
        if w.dom(self) != mu.range() {
            return Err(ActionError::NotInDomain {
                dom: self.graph.vertex_name(w.dom(self)).to_string(),
                range: self.graph.vertex_name(mu.range()).to_string(),
            });
        }
        if mu.is_empty() {
            return Ok((Path::empty(w.tgt(self)), w.clone()));
        }
        let mut cur = w.clone();
        let mut image_edges = Vec::with_capacity(mu.len());
        for &e in mu.edges() {
            let (img, rest) = self.apply_edge(&cur, e)?;
            image_edges.push(img);
            cur = rest;
        }
        let image = Path::from_edges(&self.graph, &image_edges)?;
        Ok((image, cur))
    }

    /// `w . mu`.
    pub fn act_path(&self, w: &Word, mu: &Path) -> Result<Path, ActionError> {
        Ok(self.apply_path(w, mu)?.0)
    }

    /// `w|_mu`.
    pub fn restrict_path(&self, w: &Word, mu: &Path) -> Result<Word, ActionError> {
        Ok(self.apply_path(w, mu)?.1)
    }

    /// Semi-decides whether a word acts as a unit.
    ///
    /// Runs a breadth-first closure over restrictions: any member that moves
    /// a level-1 edge yields a `No` with the moved finite path reconstructed
    /// from the restriction chain; an exhausted closure yields `Yes`.
    /// Exceeding the budget yields `Unknown`, which is never cached.
    pub fn is_unit(&self, w: &Word, budget: Budget) -> IsUnit {
        if w.is_unit() {
            return IsUnit::Yes;
        }
        let (dom, tgt) = (w.dom(self), w.tgt(self));
        if dom != tgt {
            return IsUnit::No(Witness::EndpointMismatch { dom, tgt });
        }
        {
            let caches = self.caches.lock().unwrap();
            if let Some(hit) = caches.unit.get(w) {
                return hit.clone();
            }
        }

        // arena of (word, parent index, edge taken from the parent)
        let mut arena: Vec<(Word, Option<(usize, EdgeId)>)> = vec![(w.clone(), None)];
        let mut seen: HashSet<Word> = HashSet::new();
        seen.insert(w.clone());
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(0);

        while let Some(idx) = queue.pop_front() {
            let x = arena[idx].0.clone();
            let dom_edges = self.graph.out_edges(x.dom(self)).to_vec();
            // first pass: does x move anything at level 1?
            for &e in &dom_edges {
                let (img, _) = self.apply_edge(&x, e).expect("domain checked");
                if img != e {
                    let path = self.chain_to_path(&arena, idx, e);
                    let image = self
                        .act_path(w, &path)
                        .expect("witness path starts at d(w)");
                    debug_assert_ne!(image, path);
                    let answer = IsUnit::No(Witness::MovedPath { path, image });
                    let mut caches = self.caches.lock().unwrap();
                    caches.unit.insert(w.clone(), answer.clone());
                    return answer;
                }
            }
            // second pass: enqueue unseen restrictions
            for &e in &dom_edges {
                let (_, rest) = self.apply_edge(&x, e).expect("domain checked");
                if rest.is_unit() || seen.contains(&rest) {
                    continue;
                }
                if rest.len() > budget.max_len || seen.len() >= budget.max_seen {
                    return IsUnit::Unknown;
                }
                seen.insert(rest.clone());
                arena.push((rest, Some((idx, e))));
                queue.push_back(arena.len() - 1);
            }
        }

        let mut caches = self.caches.lock().unwrap();
        for (member, _) in &arena {
            caches.unit.insert(member.clone(), IsUnit::Yes);
        }
        IsUnit::Yes
    }

    /// Rebuilds the finite path from the root of the closure to `idx`,
    /// appending the moved edge.
    fn chain_to_path(&self, arena: &[(Word, Option<(usize, EdgeId)>)], idx: usize, last: EdgeId) -> Path {
        let mut edges = vec![last];
        let mut at = idx;
        while let Some((parent, via)) = arena[at].1 {
            edges.push(via);
            at = parent;
        }
        edges.reverse();
        Path::from_edges(&self.graph, &edges).expect("restriction chain is composable")
    }

    /// Equality of words as actions: endpoint check, then `is_unit(w1 w2^-1)`.
    pub fn equal(&self, w1: &Word, w2: &Word, budget: Budget) -> IsUnit {
        if w1.dom(self) != w2.dom(self) || w1.tgt(self) != w2.tgt(self) {
            return IsUnit::No(Witness::EndpointMismatch {
                dom: w1.dom(self),
                tgt: w2.dom(self),
            });
        }
        if w1 == w2 {
            return IsUnit::Yes;
        }
        let quotient = w1
            .product(self, &w2.inverse())
            .expect("endpoints were just checked");
        self.is_unit(&quotient, budget)
    }

    /// Enumerates all freely reduced words with 1..=max_len letters, in
    /// length-then-lexicographic order.
    pub fn reduced_words(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let letters: Vec<Letter> = self
            .generators()
            .flat_map(|g| [Letter::new(g), Letter::new(g).inverted()])
            .collect();
        let mut level: Vec<Vec<Letter>> = letters.iter().map(|&l| vec![l]).collect();
        for len in 1..=max_len {
            for ls in &level {
                out.push(Word::Letters(ls.clone()));
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for ls in &level {
                let last = *ls.last().unwrap();
                for &l in &letters {
                    if self.letter_dom(last) == self.letter_tgt(l) && !last.cancels(l) {
                        let mut extended = ls.clone();
                        extended.push(l);
                        next.push(extended);
                    }
                }
            }
            level = next;
        }
        out
    }
}

// endpoint view over the generator info while the system is being built
struct SliceEndpoints<'a>(&'a [GenInfo]);

impl LetterEndpoints for SliceEndpoints<'_> {
    fn gen_dom(&self, g: GenId) -> VertexId {
        self.0[g.index()].dom
    }
    fn gen_tgt(&self, g: GenId) -> VertexId {
        self.0[g.index()].tgt
    }
}

impl ActionSystem {
    /// Parses a whitespace-separated word string: tokens are generator names,
    /// `name^-1`, or vertex names (denoting units). Reads as a product
    /// left-to-right with the rightmost letter acting first.
    pub fn parse_word(&self, text: &str) -> Result<Word, String> {
        let mut acc: Option<Word> = None;
        for token in text.split_whitespace() {
            let (name, inverse) = match token.strip_suffix("^-1") {
                Some(base) => (base, true),
                None => (token, false),
            };
            let factor = if let Some(g) = self.gen_by_name(name) {
                let l = Letter {
                    gen: g,
                    inverse,
                };
                Word::Letters(vec![l])
            } else if let Some(v) = self.graph.vertex_by_name(name) {
                // a unit is its own inverse
                Word::unit(v)
            } else {
                return Err(format!("unknown generator or vertex `{name}`"));
            };
            acc = Some(match acc {
                None => factor,
                Some(w) => w
                    .product(self, &factor)
                    .map_err(|e| format!("word is not composable at `{token}`: {e}"))?,
            });
        }
        acc.ok_or_else(|| "empty word string".to_string())
    }

    /// Renders a word using generator and vertex names.
    pub fn word_string(&self, w: &Word) -> String {
        match w {
            Word::Unit(v) => self.graph.vertex_name(*v).to_string(),
            Word::Letters(ls) => ls
                .iter()
                .map(|l| {
                    if l.inverse {
                        format!("{}^-1", self.gen_name(l.gen))
                    } else {
                        self.gen_name(l.gen).to_string()
                    }
                })
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}
