use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact coefficient: a polynomial with rational coefficients in the
/// parameter symbols `c0, c1, ...`.
///
/// Keys are parameter exponent vectors with trailing zeros trimmed, so the
/// constant term is keyed by the empty vector. Zero rationals are never
/// stored; the zero coefficient is the empty map.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParamCoefficient {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

fn trim(mut key: Vec<u32>) -> Vec<u32> {
    while key.last() == Some(&0) {
        key.pop();
    }
    key
}

fn mul_keys(a: &[u32], b: &[u32]) -> Vec<u32> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

impl ParamCoefficient {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(value: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Vec::new(), value);
        }
        ParamCoefficient { terms }
    }

    pub fn from_int(value: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(value)))
    }

    /// The bare symbol `c{index}`.
    pub fn param(index: usize) -> Self {
        let mut key = vec![0; index + 1];
        key[index] = 1;
        Self::from_term(key, BigRational::one())
    }

    pub fn from_term(key: Vec<u32>, value: BigRational) -> Self {
        let mut c = Self::zero();
        c.add_term(key, value);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| k.is_empty())
    }

    /// The rational value when no parameter symbol occurs.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// Iterates `(parameter exponents, rational)` in ascending key order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest parameter index used, if any.
    pub fn max_param(&self) -> Option<usize> {
        self.terms.keys().filter_map(|k| k.len().checked_sub(1)).max()
    }

    pub(crate) fn add_term(&mut self, key: Vec<u32>, value: BigRational) {
        if value.is_zero() {
            return;
        }
        let key = trim(key);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += value;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, value);
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &ParamCoefficient) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn scale(&self, factor: &BigRational) -> ParamCoefficient {
        if factor.is_zero() {
            return Self::zero();
        }
        ParamCoefficient {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> ParamCoefficient {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at concrete parameter values. `None` if a symbol has no value.
    pub fn evaluate(&self, params: &[BigRational]) -> Option<BigRational> {
        let mut total = BigRational::zero();
        for (key, value) in &self.terms {
            let mut term = value.clone();
            for (i, &e) in key.iter().enumerate() {
                if e > 0 {
                    term *= num_traits::pow(params.get(i)?.clone(), e as usize);
                }
            }
            total += term;
        }
        Some(total)
    }

    /// Pieces `(negative, body)` for each term, in descending key order.
    /// `body` is the unsigned product `3/2*c0^2*c1` (or `1` for a bare unit).
    pub(crate) fn signed_pieces(&self) -> Vec<(bool, Option<String>, Vec<String>)> {
        self.terms
            .iter()
            .rev()
            .map(|(key, value)| {
                let negative = value.is_negative();
                let magnitude = value.abs();
                let rational = if magnitude.is_one() {
                    None
                } else {
                    Some(format_rational(&magnitude))
                };
                let params = key
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("c{i}")
                        } else {
                            format!("c{i}^{e}")
                        }
                    })
                    .collect();
                (negative, rational, params)
            })
            .collect()
    }
}

/// `p` or `p/q` in lowest terms.
pub fn format_rational(value: &BigRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

impl fmt::Display for ParamCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (negative, rational, params)) in self.signed_pieces().into_iter().enumerate() {
            let mut factors: Vec<String> = rational.into_iter().collect();
            factors.extend(params);
            let body = if factors.is_empty() {
                "1".to_string()
            } else {
                factors.join("*")
            };
            match (i, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &ParamCoefficient {
    type Output = ParamCoefficient;
    fn add(self, rhs: &ParamCoefficient) -> ParamCoefficient {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Neg for &ParamCoefficient {
    type Output = ParamCoefficient;
    fn neg(self) -> ParamCoefficient {
        ParamCoefficient {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

impl Sub for &ParamCoefficient {
    type Output = ParamCoefficient;
    fn sub(self, rhs: &ParamCoefficient) -> ParamCoefficient {
        self + &(-rhs)
    }
}

impl Mul for &ParamCoefficient {
    type Output = ParamCoefficient;
    fn mul(self, rhs: &ParamCoefficient) -> ParamCoefficient {
        let mut out = ParamCoefficient::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                out.add_term(mul_keys(ka, kb), va * vb);
            }
        }
        out
    }
}
