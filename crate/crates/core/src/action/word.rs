//! Groupoid-element words over the declared generators.
//!
//! A word is either a unit (a vertex) or a freely reduced sequence of
//! letters, each a generator or a formal inverse. The string reads
//! left-to-right as the product `g_1 g_2 ... g_n` with the rightmost letter
//! acting first, so consecutive letters must satisfy `d(g_i) = t(g_{i+1})`.
//! Free reduction plus unit absorption is the only normalization performed;
//! equality of words as groupoid elements is action equality and lives in
//! [`crate::action::ActionSystem`].

use crate::graph::VertexId;
use thiserror::Error;

/// Interned generator identifier, assigned in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u32);

impl GenId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One letter of a word: a generator with exponent +1 or -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: GenId,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: GenId) -> Letter {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub fn inverted(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    /// True when the two letters are mutually inverse occurrences of one generator.
    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

/// Endpoint data for letters, provided by whoever owns the generator table.
pub trait LetterEndpoints {
    /// `d(g)` of the underlying generator.
    fn gen_dom(&self, g: GenId) -> VertexId;
    /// `t(g)` of the underlying generator.
    fn gen_tgt(&self, g: GenId) -> VertexId;

    fn letter_dom(&self, l: Letter) -> VertexId {
        if l.inverse {
            self.gen_tgt(l.gen)
        } else {
            self.gen_dom(l.gen)
        }
    }

    fn letter_tgt(&self, l: Letter) -> VertexId {
        if l.inverse {
            self.gen_dom(l.gen)
        } else {
            self.gen_tgt(l.gen)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("letters {left} and {right} are not composable")]
    NotComposable { left: String, right: String },
    #[error("words are not composable: d = {left_dom}, t = {right_tgt}")]
    ProductMismatch { left_dom: String, right_tgt: String },
    #[error("unit at wrong vertex: expected {expected}, got {got}")]
    UnitMismatch { expected: String, got: String },
}

/// A freely reduced composable word, or a unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Word {
    Unit(VertexId),
    Letters(Vec<Letter>),
}

impl Word {
    pub fn unit(v: VertexId) -> Word {
        Word::Unit(v)
    }

    pub fn generator(g: GenId) -> Word {
        Word::Letters(vec![Letter::new(g)])
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Word::Unit(_))
    }

    /// Number of letters; units have length 0.
    pub fn len(&self) -> usize {
        match self {
            Word::Unit(_) => 0,
            Word::Letters(ls) => ls.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn letters(&self) -> &[Letter] {
        match self {
            Word::Unit(_) => &[],
            Word::Letters(ls) => ls,
        }
    }

    /// `d` of the word: domain of the rightmost (first-acting) letter.
    pub fn dom(&self, env: &impl LetterEndpoints) -> VertexId {
        match self {
            Word::Unit(v) => *v,
            Word::Letters(ls) => env.letter_dom(*ls.last().unwrap()),
        }
    }

    /// `t` of the word: target of the leftmost letter.
    pub fn tgt(&self, env: &impl LetterEndpoints) -> VertexId {
        match self {
            Word::Unit(v) => *v,
            Word::Letters(ls) => env.letter_tgt(ls[0]),
        }
    }

    /// Builds a reduced word from a raw letter sequence; the fallback vertex
    /// names the unit produced when everything cancels (it must be the common
    /// endpoint, which the composability check enforces).
    pub fn from_letters(
        env: &impl LetterEndpoints,
        letters: &[Letter],
        fallback: VertexId,
    ) -> Result<Word, WordError> {
        for pair in letters.windows(2) {
            if env.letter_dom(pair[0]) != env.letter_tgt(pair[1]) {
                return Err(WordError::NotComposable {
                    left: format!("{:?}", pair[0]),
                    right: format!("{:?}", pair[1]),
                });
            }
        }
        // full cancellation leaves the unit at d(word) = t(word)
        let unit_at = letters
            .last()
            .map(|l| env.letter_dom(*l))
            .unwrap_or(fallback);
        Ok(Self::reduce(letters, unit_at))
    }

    fn reduce(letters: &[Letter], unit_at: VertexId) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
        for &l in letters {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        if stack.is_empty() {
            Word::Unit(unit_at)
        } else {
            Word::Letters(stack)
        }
    }

    /// Product `self . other` (other acts first): requires `d(self) = t(other)`.
    pub fn product(&self, env: &impl LetterEndpoints, other: &Word) -> Result<Word, WordError> {
        let d_left = self.dom(env);
        let t_right = other.tgt(env);
        if d_left != t_right {
            return Err(WordError::ProductMismatch {
                left_dom: format!("v{}", d_left.0),
                right_tgt: format!("v{}", t_right.0),
            });
        }
        match (self, other) {
            (Word::Unit(_), _) => Ok(other.clone()),
            (_, Word::Unit(_)) => Ok(self.clone()),
            (Word::Letters(a), Word::Letters(b)) => {
                let mut letters = a.clone();
                letters.extend_from_slice(b);
                Ok(Self::reduce(&letters, other.dom(env)))
            }
        }
    }

    /// Formal inverse: reverses the letters and flips exponents.
    pub fn inverse(&self) -> Word {
        match self {
            Word::Unit(v) => Word::Unit(*v),
            Word::Letters(ls) => {
                Word::Letters(ls.iter().rev().map(|l| l.inverted()).collect())
            }
        }
    }

    /// `self^n` for n >= 1; requires a loop (`d = t`) for n >= 2.
    pub fn power(&self, env: &impl LetterEndpoints, n: u32) -> Result<Word, WordError> {
        assert!(n >= 1);
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.product(env, self)?;
        }
        Ok(acc)
    }
}
