//! Finitely generated abelian groups extended by localizations.
//!
//! Values are formal direct sums of `Z`, cyclic groups `Z/n` (n >= 2) and
//! localizations `Z[1/D]` (D >= 2), with `Z/1` collapsed to zero and factors
//! kept in a canonical order. `Z[1/D]` arises as the stationary colimit
//! `colim(Z, xD)`; endomorphisms of a single localization are rationals
//! `a / D^m` and their kernel/cokernel calculus is exact:
//! the cokernel of a nonzero `a/q` is `Z/a'` with `a'` the part of `|a|`
//! coprime to `D`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A formal direct sum of `Z`, `Z/n` and `Z[1/D]` factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbGroup {
    free_rank: usize,
    /// cyclic orders, each >= 2, ascending
    torsion: Vec<BigUint>,
    /// localization denominators, each >= 2, ascending
    localized: Vec<u64>,
}

impl AbGroup {
    pub fn zero() -> AbGroup {
        AbGroup {
            free_rank: 0,
            torsion: Vec::new(),
            localized: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> AbGroup {
        AbGroup {
            free_rank: rank,
            torsion: Vec::new(),
            localized: Vec::new(),
        }
    }

    /// `Z/n`; `n = 1` collapses to the zero group.
    pub fn cyclic(n: BigUint) -> AbGroup {
        if n <= BigUint::one() {
            AbGroup::zero()
        } else {
            AbGroup {
                free_rank: 0,
                torsion: vec![n],
                localized: Vec::new(),
            }
        }
    }

    /// `Z[1/d]` for d >= 2, `Z` for d = 1, zero for d = 0.
    pub fn localized(d: u64) -> AbGroup {
        match d {
            0 => AbGroup::zero(),
            1 => AbGroup::free(1),
            _ => AbGroup {
                free_rank: 0,
                torsion: Vec::new(),
                localized: vec![d],
            },
        }
    }

    /// Assembles `Z^free + sum Z/d_i`, dropping trivial factors.
    pub fn from_parts(free: usize, torsion: Vec<BigInt>) -> AbGroup {
        let mut t: Vec<BigUint> = torsion
            .into_iter()
            .map(|d| d.abs().to_biguint().expect("nonnegative"))
            .filter(|d| *d > BigUint::one())
            .collect();
        t.sort();
        AbGroup {
            free_rank: free,
            torsion: t,
            localized: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty() && self.localized.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigUint] {
        &self.torsion
    }

    pub fn localized_parts(&self) -> &[u64] {
        &self.localized
    }

    /// Rank over the rationals: `Z` and `Z[1/D]` both contribute one.
    pub fn rational_rank(&self) -> usize {
        self.free_rank + self.localized.len()
    }

    pub fn direct_sum(&self, other: &AbGroup) -> AbGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend(other.torsion.iter().cloned());
        torsion.sort();
        let mut localized = self.localized.clone();
        localized.extend(other.localized.iter().copied());
        localized.sort_unstable();
        AbGroup {
            free_rank: self.free_rank + other.free_rank,
            torsion,
            localized,
        }
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.localized {
            parts.push(format!("Z[1/{d}]"));
        }
        for n in &self.torsion {
            parts.push(format!("Z/{n}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// The stationary colimit `colim(Z, x multiplier)`: `Z[1/m]` for m >= 2,
/// `Z` for m = 1 and the zero group for m = 0.
pub fn colimit_const_z(multiplier: u64) -> AbGroup {
    AbGroup::localized(multiplier)
}

/// An endomorphism of the rank-one colimit group with base `D`, given by a
/// rational `num / den` in lowest terms whose denominator divides a power of
/// `D`. `D = 1` means an integer multiple on `Z`; `D = 0` the zero group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocMult {
    base: u64,
    num: BigInt,
    den: BigUint,
}

impl LocMult {
    /// `a / base^m`, canonicalized by cancelling common factors.
    pub fn new(base: u64, a: i64, m: u32) -> LocMult {
        LocMult::from_fraction(base, BigInt::from(a), BigUint::from(base.max(1)).pow(m))
    }

    /// Multiplication by an integer.
    pub fn integer(base: u64, a: i64) -> LocMult {
        LocMult::new(base, a, 0)
    }

    fn from_fraction(base: u64, num: BigInt, den: BigUint) -> LocMult {
        assert!(!den.is_zero(), "denominator must be positive");
        if base == 1 {
            assert!(den.is_one(), "denominator on Z must be 1");
        }
        debug_assert!(divides_power(&den, base), "denominator must be D-smooth");
        if num.is_zero() {
            return LocMult {
                base,
                num: BigInt::zero(),
                den: BigUint::one(),
            };
        }
        let g = num.abs().to_biguint().unwrap().gcd(&den);
        LocMult {
            base,
            num: num / BigInt::from(g.clone()),
            den: den / g,
        }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigUint {
        &self.den
    }

    /// The group this endomorphism acts on.
    pub fn group(&self) -> AbGroup {
        AbGroup::localized(self.base)
    }

    /// `id - self`, as a map on the same group.
    pub fn one_minus(&self) -> LocMult {
        let num = BigInt::from(self.den.clone()) - &self.num;
        LocMult::from_fraction(self.base, num, self.den.clone())
    }

    /// Composition (multiplication of the rationals).
    pub fn compose(&self, other: &LocMult) -> LocMult {
        assert_eq!(self.base, other.base);
        LocMult::from_fraction(self.base, &self.num * &other.num, &self.den * &other.den)
    }

    pub fn is_zero_map(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.num == BigInt::from(self.den.clone())
    }

    /// Kernel and cokernel on `Z[1/base]` (or `Z` when base = 1, or the zero
    /// group when base = 0).
    ///
    /// A nonzero rational is injective; its cokernel is `Z/a'` where `a'`
    /// strips every prime factor of the base from `|num|` (the denominator is
    /// invertible in the localization). The zero map has everything as kernel
    /// and cokernel.
    pub fn ker_coker(&self) -> (AbGroup, AbGroup) {
        if self.base == 0 {
            return (AbGroup::zero(), AbGroup::zero());
        }
        if self.num.is_zero() {
            return (self.group(), self.group());
        }
        let stripped = strip_base_primes(&self.num.abs().to_biguint().unwrap(), self.base);
        (AbGroup::zero(), AbGroup::cyclic(stripped))
    }
}

impl fmt::Display for LocMult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "x{}", self.num)
        } else {
            write!(f, "x({}/{})", self.num, self.den)
        }
    }
}

/// Removes every prime factor shared with `base` from `n`.
fn strip_base_primes(n: &BigUint, base: u64) -> BigUint {
    if base <= 1 || n.is_zero() {
        return n.clone();
    }
    let base = BigUint::from(base);
    let mut n = n.clone();
    loop {
        let g = n.gcd(&base);
        if g.is_one() {
            return n;
        }
        n /= g;
    }
}

/// Does `den` divide some power of `base`? (true for den = 1)
fn divides_power(den: &BigUint, base: u64) -> bool {
    strip_base_primes(den, base.max(1)).is_one() || den.is_one()
}
