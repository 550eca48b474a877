use std::fmt;

/// Number of variables and their naming scheme.
///
/// Projective forms live in `x0..x4`; restrictions to the affine chart of the
/// quadric at `[1,0,0,0,0]` live in `y1..y3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arity {
    Projective,
    Chart,
}

impl Arity {
    pub const fn n_vars(self) -> usize {
        match self {
            Arity::Projective => 5,
            Arity::Chart => 3,
        }
    }

    pub fn var_name(self, index: usize) -> String {
        match self {
            Arity::Projective => format!("x{index}"),
            Arity::Chart => format!("y{}", index + 1),
        }
    }

    fn from_len(len: usize) -> Option<Self> {
        match len {
            5 => Some(Arity::Projective),
            3 => Some(Arity::Chart),
            _ => None,
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Projective => f.write_str("projective (x0..x4)"),
            Arity::Chart => f.write_str("chart (y1..y3)"),
        }
    }
}

/// Exponent vector over the variables of one [`Arity`].
///
/// Ordering is lexicographic on the exponent tuple; the cached total degree
/// never participates in comparisons on its own because it is a function of
/// the exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        assert!(
            Arity::from_len(exps.len()).is_some(),
            "monomials have 5 (projective) or 3 (chart) exponents"
        );
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    /// `x0^a0 * x1^a1 * x2^a2 * x3^a3 * x4^a4`
    pub fn projective(exps: [u32; 5]) -> Self {
        Monomial::new(exps.to_vec())
    }

    /// `y1^b1 * y2^b2 * y3^b3`
    pub fn chart(exps: [u32; 3]) -> Self {
        Monomial::new(exps.to_vec())
    }

    pub fn one(arity: Arity) -> Self {
        Monomial::new(vec![0; arity.n_vars()])
    }

    pub fn var(arity: Arity, index: usize) -> Self {
        let mut exps = vec![0; arity.n_vars()];
        exps[index] = 1;
        Monomial::new(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.exps[index]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn arity(&self) -> Arity {
        Arity::from_len(self.exps.len()).expect("checked in constructor")
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.exps.len(), other.exps.len(), "monomial arity mismatch");
        Monomial::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if self.exps.len() != other.exps.len() {
            return None;
        }
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial::new(exps))
    }

    /// Weighted degree `sum w_i * e_i`.
    pub fn weighted_degree(&self, weights: &[u64]) -> u64 {
        self.exps
            .iter()
            .zip(weights)
            .map(|(&e, &w)| u64::from(e) * w)
            .sum()
    }

    /// Factors as `name` or `name^e`, without coefficient.
    pub(crate) fn factors(&self) -> Vec<String> {
        let arity = self.arity();
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    arity.var_name(i)
                } else {
                    format!("{}^{e}", arity.var_name(i))
                }
            })
            .collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = self.factors();
        if factors.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&factors.join("*"))
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_is_cached_sum() {
        let m = Monomial::projective([1, 0, 2, 3, 0]);
        assert_eq!(m.degree(), 6);
        assert_eq!(m.mul(&m).degree(), 12);
    }

    #[test]
    fn lexicographic_order() {
        let a = Monomial::projective([0, 1, 2, 1, 0]);
        let b = Monomial::projective([0, 0, 4, 0, 0]);
        let c = Monomial::projective([1, 0, 0, 3, 0]);
        assert!(b < a && a < c);
    }

    #[test]
    fn division() {
        let m = Monomial::projective([1, 0, 2, 0, 1]);
        let q = Monomial::projective([1, 0, 0, 0, 1]);
        assert_eq!(m.div(&q), Some(Monomial::projective([0, 0, 2, 0, 0])));
        assert_eq!(q.div(&m), None);
    }

    #[test]
    fn display() {
        assert_eq!(Monomial::projective([1, 0, 0, 3, 0]).to_string(), "x0*x3^3");
        assert_eq!(Monomial::chart([0, 2, 1]).to_string(), "y2^2*y3");
        assert_eq!(Monomial::one(Arity::Chart).to_string(), "1");
    }
}
