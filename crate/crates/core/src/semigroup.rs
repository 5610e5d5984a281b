//! The inverse semigroup of an action system.
//!
//! Elements are triples `(alpha, g, beta)` with `g` a word from `s(beta)` to
//! `s(alpha)`, together with a distinguished zero. The product runs on prefix
//! comparison of the inner paths:
//!
//! ```text
//! (alpha, g, beta)(lambda, h, omega) =
//!   (alpha, g (h|_{h^-1.mu}), omega (h^-1.mu))   if beta = lambda mu
//!   (alpha (g.mu), g|_mu h, omega)               if lambda = beta mu
//!   0                                            otherwise
//! ```
//!
//! and the involution is `(alpha, g, beta)* = (beta, g^-1, alpha)`. Zero is a
//! value, not an error. Equality of triples goes through the budgeted word
//! problem, so it is three-valued.

use thiserror::Error;

use crate::action::{ActionError, ActionSystem, Answer, Budget, Word};
use crate::graph::Path;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("triple violates d(g) = s(beta), t(g) = s(alpha)")]
    EndpointMismatch,
    #[error("action error: {0}")]
    Action(#[from] ActionError),
    #[error("word error: {0}")]
    Word(#[from] crate::action::WordError),
    #[error("word problem inconclusive under the current budget")]
    InconclusiveWordProblem,
}

/// An element of the inverse semigroup: a triple or zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Triple {
    Zero,
    Elem { alpha: Path, word: Word, beta: Path },
}

impl Triple {
    /// Builds a triple, checking `d(g) = s(beta)` and `t(g) = s(alpha)`.
    pub fn new(
        sys: &ActionSystem,
        alpha: Path,
        word: Word,
        beta: Path,
    ) -> Result<Triple, SemigroupError> {
        if word.dom(sys) != beta.source() || word.tgt(sys) != alpha.source() {
            return Err(SemigroupError::EndpointMismatch);
        }
        Ok(Triple::Elem { alpha, word, beta })
    }

    /// The idempotent `z_alpha = (alpha, s(alpha), alpha)`.
    pub fn idempotent(alpha: Path) -> Triple {
        let unit = Word::unit(alpha.source());
        Triple::Elem {
            alpha: alpha.clone(),
            word: unit,
            beta: alpha,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Triple::Zero)
    }

    /// The involution `(alpha, g, beta)* = (beta, g^-1, alpha)`.
    pub fn star(&self) -> Triple {
        match self {
            Triple::Zero => Triple::Zero,
            Triple::Elem { alpha, word, beta } => Triple::Elem {
                alpha: beta.clone(),
                word: word.inverse(),
                beta: alpha.clone(),
            },
        }
    }
}

/// The three-case product. Total: incomparable prefixes yield zero.
pub fn multiply(sys: &ActionSystem, x: &Triple, y: &Triple) -> Result<Triple, SemigroupError> {
    let (alpha, g, beta) = match x {
        Triple::Zero => return Ok(Triple::Zero),
        Triple::Elem { alpha, word, beta } => (alpha, word, beta),
    };
    let (lambda, h, omega) = match y {
        Triple::Zero => return Ok(Triple::Zero),
        Triple::Elem { alpha, word, beta } => (alpha, word, beta),
    };

    if let Some(mu) = beta.strip_prefix(lambda) {
        // beta = lambda mu: pull mu back through h
        let (h_inv_mu, _) = sys.apply_path(&h.inverse(), &mu)?;
        let rest = sys.restrict_path(h, &h_inv_mu)?;
        let word = g.product(sys, &rest)?;
        let beta_new = omega.concat(&h_inv_mu).expect("endpoints match by construction");
        // re-check the triple invariant on the way out
        Ok(Triple::new(sys, alpha.clone(), word, beta_new)
            .expect("product preserves the triple invariant"))
    } else if let Some(mu) = lambda.strip_prefix(beta) {
        // lambda = beta mu: push mu forward through g
        let (g_mu, rest) = sys.apply_path(g, &mu)?;
        let alpha_new = alpha.concat(&g_mu).expect("endpoints match by construction");
        let word = rest.product(sys, h)?;
        Ok(Triple::new(sys, alpha_new, word, omega.clone())
            .expect("product preserves the triple invariant"))
    } else {
        Ok(Triple::Zero)
    }
}

/// Budgeted equality: paths must match exactly, words as actions.
pub fn triple_equal(sys: &ActionSystem, x: &Triple, y: &Triple, budget: Budget) -> Answer {
    match (x, y) {
        (Triple::Zero, Triple::Zero) => Answer::Yes,
        (Triple::Zero, _) | (_, Triple::Zero) => Answer::No,
        (
            Triple::Elem { alpha, word, beta },
            Triple::Elem {
                alpha: alpha2,
                word: word2,
                beta: beta2,
            },
        ) => {
            if alpha != alpha2 || beta != beta2 {
                return Answer::No;
            }
            (&sys.equal(word, word2, budget)).into()
        }
    }
}

/// True iff `x . x` equals `x` under the budgeted word problem.
pub fn is_idempotent(sys: &ActionSystem, x: &Triple, budget: Budget) -> Result<bool, SemigroupError> {
    let square = multiply(sys, x, x)?;
    match triple_equal(sys, &square, x, budget) {
        Answer::Yes => Ok(true),
        Answer::No => Ok(false),
        Answer::Unknown => Err(SemigroupError::InconclusiveWordProblem),
    }
}
