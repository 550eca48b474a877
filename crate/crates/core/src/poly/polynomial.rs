use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use super::coeff::ParamCoefficient;
use super::monomial::{Arity, Monomial};
use crate::error::{Error, Result};

/// Sparse polynomial with [`ParamCoefficient`] coefficients.
///
/// Terms are kept in a `BTreeMap`, so iteration is in ascending lexicographic
/// monomial order and no zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    arity: Arity,
    terms: BTreeMap<Monomial, ParamCoefficient>,
}

fn accumulate(terms: &mut BTreeMap<Monomial, ParamCoefficient>, m: Monomial, c: &ParamCoefficient) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&m) {
        Some(existing) => {
            existing.add_assign_ref(c);
            if existing.is_zero() {
                terms.remove(&m);
            }
        }
        None => {
            terms.insert(m, c.clone());
        }
    }
}

impl Polynomial {
    pub fn zero(arity: Arity) -> Self {
        Polynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: Arity, c: ParamCoefficient) -> Self {
        Self::term(Monomial::one(arity), c)
    }

    pub fn var(arity: Arity, index: usize) -> Self {
        Self::term(Monomial::var(arity, index), ParamCoefficient::one())
    }

    pub fn term(m: Monomial, c: ParamCoefficient) -> Self {
        let mut p = Self::zero(m.arity());
        accumulate(&mut p.terms, m, &c);
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, ParamCoefficient::one())
    }

    /// Sums the given terms, merging repeated monomials.
    pub fn from_terms<I>(arity: Arity, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, ParamCoefficient)>,
    {
        let mut p = Self::zero(arity);
        for (m, c) in terms {
            if m.arity() != arity {
                return Err(Error::ArityMismatch {
                    left: arity,
                    right: m.arity(),
                });
            }
            accumulate(&mut p.terms, m, &c);
        }
        Ok(p)
    }

    /// `x0*x4 + x1*x3 + x2^2`
    pub fn quadric() -> Self {
        let mono = |e| (Monomial::projective(e), ParamCoefficient::one());
        Self::from_terms(
            Arity::Projective,
            [mono([1, 0, 0, 0, 1]), mono([0, 1, 0, 1, 0]), mono([0, 0, 2, 0, 0])],
        )
        .expect("projective terms")
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &ParamCoefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&ParamCoefficient> {
        self.terms.get(m)
    }

    /// Monomials with a nonzero coefficient, ascending lexicographic order.
    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().cloned().collect()
    }

    /// Maximal total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Minimal total degree; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// The zero polynomial counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.degree().expect("nonzero"))
    }

    pub fn max_param(&self) -> Option<usize> {
        self.terms.values().filter_map(ParamCoefficient::max_param).max()
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_part(&self, degree: u32) -> Polynomial {
        self.filter_terms(|m| m.degree() == degree)
    }

    fn check_arity(&self, other: &Polynomial) -> Result<()> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            })
        }
    }

    pub fn require_arity(&self, expected: Arity) -> Result<()> {
        if self.arity == expected {
            Ok(())
        } else {
            Err(Error::WrongArity {
                expected,
                found: self.arity,
            })
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            accumulate(&mut out.terms, m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = Polynomial::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                accumulate(&mut out.terms, ma.mul(mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &ParamCoefficient) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            accumulate(&mut out.terms, m.clone(), &(c * factor));
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.arity, ParamCoefficient::one());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces variable `i` by `images[i]`.
    ///
    /// All images must share one arity, which becomes the arity of the result.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        let n = self.arity.n_vars();
        if images.len() != n {
            return Err(Error::SubstitutionArity {
                expected: n,
                found: images.len(),
            });
        }
        let target = images[0].arity;
        for image in images {
            if image.arity != target {
                return Err(Error::ArityMismatch {
                    left: target,
                    right: image.arity,
                });
            }
        }

        // powers[i][k] = images[i]^k, grown on demand
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|_| vec![Polynomial::constant(target, ParamCoefficient::one())])
            .collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut product = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().expect("nonempty") * &images[i];
                    powers[i].push(next);
                }
                product = &product * &powers[i][e as usize];
            }
            for (pm, pc) in product.terms {
                accumulate(&mut out.terms, pm, &pc);
            }
        }
        Ok(out)
    }

    /// Normal form modulo `x0*x4 + x1*x3 + x2^2` in the basis of monomials
    /// with `a0*a4 = 0`.
    ///
    /// Rewrites `x0*x4 -> -x1*x3 - x2^2` on the lexicographically largest
    /// offending monomial until none is left. Each rewrite lowers `a0 + a4`
    /// of the produced terms, so the loop terminates.
    pub fn reduce_mod_quadric(&self) -> Result<Polynomial> {
        self.require_arity(Arity::Projective)?;
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let x0x4 = Monomial::projective([1, 0, 0, 0, 1]);
        let x1x3 = Monomial::projective([0, 1, 0, 1, 0]);
        let x2sq = Monomial::projective([0, 0, 2, 0, 0]);
        let offending = |m: &Monomial| m.exp(0) > 0 && m.exp(4) > 0;

        let mut done = BTreeMap::new();
        let mut pending = BTreeMap::new();
        for (m, c) in &self.terms {
            let bucket = if offending(m) { &mut pending } else { &mut done };
            accumulate(bucket, m.clone(), c);
        }
        while let Some((m, c)) = pending.pop_last() {
            let rest = m.div(&x0x4).expect("offending monomial contains x0*x4");
            let neg = -&c;
            for replacement in [rest.mul(&x1x3), rest.mul(&x2sq)] {
                let bucket = if offending(&replacement) {
                    &mut pending
                } else {
                    &mut done
                };
                accumulate(bucket, replacement, &neg);
            }
        }
        Ok(Polynomial {
            arity: Arity::Projective,
            terms: done,
        })
    }

    /// Exact value at a rational point with rational parameter values.
    pub fn evaluate(&self, point: &[BigRational], params: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.arity.n_vars() {
            return Err(Error::SubstitutionArity {
                expected: self.arity.n_vars(),
                found: point.len(),
            });
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut value = c.evaluate(params).ok_or_else(|| {
                Error::Precondition("every parameter symbol needs a value".into())
            })?;
            for (x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    value *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += value;
        }
        Ok(total)
    }
}

impl fmt::Display for Polynomial {
    /// Canonical text: terms in descending lexicographic monomial order, each
    /// parameter term of a coefficient written as its own signed term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let vars = m.factors();
            for (negative, rational, params) in c.signed_pieces() {
                let mut factors: Vec<String> = rational.into_iter().collect();
                factors.extend(params);
                factors.extend(vars.iter().cloned());
                let body = if factors.is_empty() {
                    "1".to_string()
                } else {
                    factors.join("*")
                };
                match (first, negative) {
                    (true, false) => write!(f, "{body}")?,
                    (true, true) => write!(f, "-{body}")?,
                    (false, false) => write!(f, " + {body}")?,
                    (false, true) => write!(f, " - {body}")?,
                }
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// Operator forms panic on arity mismatch; use the `checked_*` methods on
// untrusted input.

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial arity mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial arity mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
