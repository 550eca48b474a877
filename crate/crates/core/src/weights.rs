//! One-parameter subgroups acting diagonally on `x0..x4`, monomial weights,
//! the Hilbert-Mumford weight and limits along a subgroup.
//!
//! Convention: under `lambda(t)` a monomial of weight `w` is scaled by `t^w`,
//! so `lim_{t -> oo}` exists exactly when every weight in the support is
//! `<= 0`, and then picks out the weight-zero part.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::poly::{Arity, Monomial, Polynomial};

/// Anything that acts on `x_i` with integer weight `weights()[i]`.
pub trait DiagonalAction {
    fn weights(&self) -> [i64; 5];

    /// `sum a_i w_i`. Only projective monomials carry a weight.
    fn weight(&self, m: &Monomial) -> i64 {
        debug_assert_eq!(m.arity(), Arity::Projective);
        self.weights()
            .iter()
            .zip(m.exps())
            .map(|(&w, &a)| w * i64::from(a))
            .sum()
    }
}

/// `diag(t^u, t^v, 1, t^-v, t^-u)` in `SO(5)` with `u >= v >= 0`.
///
/// Stored in lowest terms; every `v = 0` subgroup is stored as `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NormalizedOnePs {
    u: u64,
    v: u64,
}

impl NormalizedOnePs {
    pub fn new(u: u64, v: u64) -> Result<Self> {
        if u < v {
            return Err(Error::InvalidSubgroup(format!("need u >= v, got ({u}, {v})")));
        }
        if u == 0 {
            return Err(Error::InvalidSubgroup("(0, 0) is the trivial subgroup".into()));
        }
        if v == 0 {
            return Ok(NormalizedOnePs { u: 1, v: 0 });
        }
        let g = u.gcd(&v);
        Ok(NormalizedOnePs { u: u / g, v: v / g })
    }

    /// The ray `v = 0`.
    pub const fn infinite() -> Self {
        NormalizedOnePs { u: 1, v: 0 }
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    /// `u/v`, or `None` on the ray `v = 0`.
    pub fn slope(&self) -> Option<BigRational> {
        (self.v != 0).then(|| BigRational::new(self.u.into(), self.v.into()))
    }

    /// Parses `u/v` or `u,v`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidSubgroup(format!("cannot read slope {text:?}, expected u/v"));
        let (a, b) = text.trim().split_once(['/', ',']).ok_or_else(bad)?;
        let u = a.trim().parse().map_err(|_| bad())?;
        let v = b.trim().parse().map_err(|_| bad())?;
        NormalizedOnePs::new(u, v)
    }
}

impl DiagonalAction for NormalizedOnePs {
    fn weights(&self) -> [i64; 5] {
        let (u, v) = (self.u as i64, self.v as i64);
        [u, v, 0, -v, -u]
    }
}

/// Orders by slope `u/v`, with the ray `v = 0` last.
impl Ord for NormalizedOnePs {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.v, other.v) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Greater,
            (_, 0) => Ordering::Less,
            _ => (u128::from(self.u) * u128::from(other.v)).cmp(&(u128::from(other.u) * u128::from(self.v))),
        }
    }
}

impl PartialOrd for NormalizedOnePs {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NormalizedOnePs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.u, self.v)
    }
}

/// Diagonal 1-PS of `SL(5)`: integer weights summing to zero, not all zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiagonalOnePs {
    weights: [i64; 5],
}

impl DiagonalOnePs {
    pub fn new(weights: [i64; 5]) -> Result<Self> {
        if weights.iter().all(|&w| w == 0) {
            return Err(Error::InvalidSubgroup("all weights zero: trivial subgroup".into()));
        }
        let sum: i64 = weights.iter().sum();
        if sum != 0 {
            return Err(Error::InvalidSubgroup(format!("weights must sum to 0, sum is {sum}")));
        }
        Ok(DiagonalOnePs { weights })
    }

    /// `(u, v, 0, -v, -u)` without normalizing, so `(2u, 2v)` stays distinct.
    pub fn from_so5(u: i64, v: i64) -> Result<Self> {
        DiagonalOnePs::new([u, v, 0, -v, -u])
    }

    pub fn scaled(&self, k: i64) -> Result<Self> {
        DiagonalOnePs::new(self.weights.map(|w| w * k))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let bad = || Error::InvalidSubgroup(format!("expected five comma-separated integers, got {text:?}"));
        if parts.len() != 5 {
            return Err(bad());
        }
        let mut weights = [0i64; 5];
        for (slot, part) in weights.iter_mut().zip(parts) {
            *slot = part.parse().map_err(|_| bad())?;
        }
        DiagonalOnePs::new(weights)
    }
}

impl DiagonalAction for DiagonalOnePs {
    fn weights(&self) -> [i64; 5] {
        self.weights
    }
}

impl From<NormalizedOnePs> for DiagonalOnePs {
    fn from(l: NormalizedOnePs) -> Self {
        DiagonalOnePs { weights: l.weights() }
    }
}

fn require_projective_nonzero(f: &Polynomial) -> Result<()> {
    f.require_arity(Arity::Projective)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(())
}

/// Hilbert-Mumford weight: the largest weight over the support of `f`.
///
/// `f` lies in `M_<=0(lambda)` iff `mu <= 0` and in `M_<0(lambda)` iff `mu < 0`.
pub fn mu(lambda: &impl DiagonalAction, f: &Polynomial) -> Result<i64> {
    require_projective_nonzero(f)?;
    Ok(f.terms()
        .map(|(m, _)| lambda.weight(m))
        .max()
        .expect("nonzero polynomial has a term"))
}

/// `lim_{t -> oo} lambda(t) . f`: the weight-zero part, provided no weight is
/// positive.
pub fn take_limit(f: &Polynomial, lambda: &impl DiagonalAction) -> Result<Polynomial> {
    require_projective_nonzero(f)?;
    if let Some((m, w)) = f
        .terms()
        .map(|(m, _)| (m, lambda.weight(m)))
        .find(|&(_, w)| w > 0)
    {
        return Err(Error::LimitDoesNotExist {
            monomial: m.to_string(),
            weight: w,
        });
    }
    Ok(f.filter_terms(|m| lambda.weight(m) == 0))
}
