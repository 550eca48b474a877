//! Local equations of `S = Q ∩ {f = 0}` in the affine chart of the quadric
//! at `p0 = [1,0,0,0,0]`, and the numerical singularity data read off them.
//!
//! The chart is `x0 = 1, x1 = y1, x2 = y2, x3 = y3, x4 = -y2^2 - y1*y3`.
//! Presence of a chart monomial in a generic form is decided structurally:
//! its coefficient is a polynomial in the parameter symbols and counts as
//! present iff that polynomial is nonzero.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::families::line_order;
use crate::poly::{Arity, Monomial, ParamCoefficient, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChartOrigin {
    P0,
    /// Translated chart with `x1 -> y1 - shift`, centred on a point of the
    /// line `x2 = x3 = x4 = 0` with `x0 != 0`.
    LinePoint(BigRational),
}

impl fmt::Display for ChartOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartOrigin::P0 => f.write_str("p0=[1,0,0,0,0]"),
            ChartOrigin::LinePoint(s) => write!(f, "line point, x1 -> y1 - ({})", crate::poly::format_rational(s)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartPolynomial {
    pub poly: Polynomial,
    pub origin: ChartOrigin,
}

fn chart_var(i: usize) -> Polynomial {
    Polynomial::var(Arity::Chart, i)
}

/// Images of `x0..x4` for the chart translated by `shift` along `x1`.
pub fn chart_images(shift: &BigRational) -> Vec<Polynomial> {
    let one = Polynomial::constant(Arity::Chart, ParamCoefficient::one());
    let x1 = &chart_var(0) - &Polynomial::constant(Arity::Chart, ParamCoefficient::from_rational(shift.clone()));
    let x4 = -(&(&chart_var(1) * &chart_var(1)) + &(&x1 * &chart_var(2)));
    vec![one, x1, chart_var(1), chart_var(2), x4]
}

fn prepare(f: &Polynomial, d: u32) -> Result<Polynomial> {
    f.require_arity(Arity::Projective)?;
    let found = f.homogeneous_degree()?;
    if found != d {
        return Err(Error::DegreeMismatch { expected: d, found });
    }
    f.reduce_mod_quadric()
}

/// `f(1, y1, y2, y3, -y2^2 - y1*y3)` after reducing `f` modulo the quadric.
pub fn chart_at_p0(f: &Polynomial, d: u32) -> Result<ChartPolynomial> {
    let reduced = prepare(f, d)?;
    Ok(ChartPolynomial {
        poly: reduced.substitute(&chart_images(&BigRational::zero()))?,
        origin: ChartOrigin::P0,
    })
}

/// `f(1, y1 - shift, y2, y3, -y2^2 - (y1 - shift)*y3)`, the chart at the
/// point `[a, b, 0, 0, 0]` with `shift = b/a`. Points with `a = 0` need the
/// other chart and are not handled.
pub fn chart_at_line_point(f: &Polynomial, d: u32, shift: &BigRational) -> Result<ChartPolynomial> {
    let reduced = prepare(f, d)?;
    let origin = if shift.is_zero() {
        ChartOrigin::P0
    } else {
        ChartOrigin::LinePoint(shift.clone())
    };
    Ok(ChartPolynomial {
        poly: reduced.substitute(&chart_images(shift))?,
        origin,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplicity {
    pub order: u32,
    /// Lowest-degree homogeneous part `f_r`.
    pub leading_form: Polynomial,
}

fn nonzero_chart(g: &ChartPolynomial) -> Result<&Polynomial> {
    g.poly.require_arity(Arity::Chart)?;
    if g.poly.is_zero() {
        Err(Error::ZeroPolynomial)
    } else {
        Ok(&g.poly)
    }
}

/// Order of vanishing at the chart origin and the leading form.
pub fn multiplicity(g: &ChartPolynomial) -> Result<Multiplicity> {
    let poly = nonzero_chart(g)?;
    let order = poly.min_degree().expect("nonzero");
    Ok(Multiplicity {
        order,
        leading_form: poly.homogeneous_part(order),
    })
}

/// Source monomials of `f` whose chart image reaches the leading degree.
/// With generic coefficients these are exactly the monomials feeding `f_r`.
pub fn leading_sources(f: &Polynomial, d: u32, shift: &BigRational) -> Result<Vec<Monomial>> {
    let chart = chart_at_line_point(f, d, shift)?;
    let order = multiplicity(&chart)?.order;
    let reduced = prepare(f, d)?;
    let images = chart_images(shift);
    let mut out = Vec::new();
    for m in reduced.support() {
        let image = Polynomial::monomial(m.clone()).substitute(&images)?;
        if image.min_degree() == Some(order) {
            out.push(m);
        }
    }
    out.reverse();
    Ok(out)
}

/// `min (a2 + a3 + a4)` over the support. A value `>= 2` means the surface is
/// singular along the whole line `x2 = x3 = x4 = 0`.
pub fn line_vanishing_order(f: &Polynomial) -> Result<u32> {
    f.require_arity(Arity::Projective)?;
    f.terms()
        .map(|(m, _)| line_order(m))
        .min()
        .ok_or(Error::ZeroPolynomial)
}

/// Positive integer weights for `y1, y2, y3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightVector([u64; 3]);

impl WeightVector {
    /// `(2, 3, 4)`: makes `x4 = -y2^2 - y1*y3` weighted homogeneous of
    /// weight 6.
    pub const PRESET_234: WeightVector = WeightVector([2, 3, 4]);

    pub fn new(weights: [u64; 3]) -> Result<Self> {
        if weights.contains(&0) {
            return Err(Error::InvalidWeights(format!("weights must be >= 1, got {weights:?}")));
        }
        Ok(WeightVector(weights))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let bad = || Error::InvalidWeights(format!("expected three comma-separated positive integers, got {text:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut w = [0u64; 3];
        for (slot, part) in w.iter_mut().zip(parts) {
            *slot = part.parse().map_err(|_| bad())?;
        }
        WeightVector::new(w)
    }

    pub fn get(&self) -> [u64; 3] {
        self.0
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn scaled(&self, k: u64) -> Result<Self> {
        WeightVector::new(self.0.map(|w| w * k))
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// `min sum w_i * b_i` over the present chart monomials.
pub fn weighted_multiplicity(g: &ChartPolynomial, w: &WeightVector) -> Result<u64> {
    let poly = nonzero_chart(g)?;
    Ok(poly
        .terms()
        .map(|(m, _)| m.weighted_degree(&w.0))
        .min()
        .expect("nonzero"))
}

/// Upper bound `(w1 + w2 + w3) / w(f)` for the log canonical threshold at
/// the chart origin. Only a bound: the equality conditions are not checked.
pub fn lct_upper_bound(g: &ChartPolynomial, w: &WeightVector) -> Result<BigRational> {
    let wf = weighted_multiplicity(g, w)?;
    Ok(BigRational::new(w.sum().into(), wf.into()))
}

/// `sum c_i * m_i` with a fresh parameter per monomial; `c0` goes to the
/// lexicographically largest monomial.
pub fn generic_member(members: &[Monomial]) -> Polynomial {
    let mut sorted: Vec<&Monomial> = members.iter().collect();
    sorted.sort();
    sorted.dedup();
    let arity = sorted.first().map_or(Arity::Projective, |m| m.arity());
    Polynomial::from_terms(
        arity,
        sorted
            .into_iter()
            .rev()
            .enumerate()
            .map(|(i, m)| (m.clone(), ParamCoefficient::param(i))),
    )
    .expect("members share one arity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{enumerate_maximal_families, family_at, TorusVerdict};
    use crate::parse::{parse_chart, parse_polynomial};
    use crate::weights::NormalizedOnePs;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    fn y(s: &str) -> ChartPolynomial {
        ChartPolynomial {
            poly: parse_chart(s).unwrap(),
            origin: ChartOrigin::P0,
        }
    }

    fn l(u: u64, v: u64) -> NormalizedOnePs {
        NormalizedOnePs::new(u, v).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn generic_chart(d: u32, u: u64, v: u64, strict: bool) -> ChartPolynomial {
        let fam = family_at(d, l(u, v), strict).unwrap();
        chart_at_p0(&generic_member(&fam.members), d).unwrap()
    }

    #[test]
    fn quadric_and_simple_charts() {
        assert!(Polynomial::quadric().substitute(&chart_images(&q(0, 1))).unwrap().is_zero());
        for d in 3..=7u32 {
            let f = p(&format!("x0*x3^{}", d - 1));
            assert_eq!(chart_at_p0(&f, d).unwrap().poly, parse_chart(&format!("y3^{}", d - 1)).unwrap());
        }
    }

    #[test]
    fn chart_rejects_bad_input() {
        assert_eq!(chart_at_p0(&p("x1^3 + x2^2"), 3), Err(Error::NotHomogeneous));
        assert!(matches!(chart_at_p0(&p("x1^3"), 4), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn slope_one_zero_family_has_multiplicity_d() {
        for d in 3..=6u32 {
            let g = generic_chart(d, 1, 0, false);
            let mult = multiplicity(&g).unwrap();
            assert_eq!(mult.order, d);
            assert!(g.poly.terms().all(|(m, _)| m.degree() >= d));
        }
    }

    #[test]
    fn slope_one_one_leading_form_d4() {
        let fam = family_at(4, l(1, 1), false).unwrap();
        let f = generic_member(&fam.members);
        let g = chart_at_p0(&f, 4).unwrap();
        let mult = multiplicity(&g).unwrap();
        assert_eq!(mult.order, 2);
        let y3sq = Monomial::chart([0, 0, 2]);
        assert_eq!(mult.leading_form.support(), vec![y3sq.clone()]);
        let src = Monomial::projective([2, 0, 0, 2, 0]);
        assert_eq!(leading_sources(&f, 4, &q(0, 1)).unwrap(), vec![src.clone()]);
        // the y3^2 coefficient is exactly the parameter attached to x0^2*x3^2
        assert_eq!(mult.leading_form.coefficient(&y3sq), f.coefficient(&src));
    }

    #[test]
    fn line_point_charts() {
        let f = p("x0*x3^3 + x1*x2^2*x3");
        assert_eq!(
            chart_at_line_point(&f, 4, &q(0, 1)).unwrap(),
            chart_at_p0(&f, 4).unwrap()
        );
        let g = chart_at_line_point(&p("x0*x2^2"), 3, &q(5, 3)).unwrap();
        assert_eq!(g.poly, parse_chart("y2^2").unwrap());
        let h = chart_at_line_point(&p("x1*x3^2"), 3, &q(1, 1)).unwrap();
        assert_eq!(h.poly, parse_chart("y1*y3^2 - y3^2").unwrap());
        assert_eq!(multiplicity(&h).unwrap().order, 2);
        // oracle: compare with direct evaluation of x1*x3^2 at x1 = y1 - 1
        for k in 1..=5i64 {
            let pt = [q(k, 2), q(3 - k, 5), q(2 * k - 1, 3)];
            let direct = (&pt[0] - q(1, 1)) * &pt[2] * &pt[2];
            assert_eq!(h.poly.evaluate(&pt, &[]).unwrap(), direct);
        }
    }

    #[test]
    fn multiplicity_basics() {
        for d in 3..=7 {
            let m = multiplicity(&y(&format!("y3^{}", d - 1))).unwrap();
            assert_eq!(m.order, d - 1);
        }
        assert_eq!(multiplicity(&y("0")), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn line_orders() {
        assert_eq!(line_vanishing_order(&p("x2^4 + x1*x2^2*x3 + x1^2*x3^2")).unwrap(), 2);
        assert_eq!(line_vanishing_order(&p("x0^2*x3^2")).unwrap(), 2);
        for d in 3..=7 {
            assert_eq!(line_vanishing_order(&p(&format!("x1^{}*x4", d - 1))).unwrap(), 1);
        }
        // oracle: direct scan of the type xi monomials x1^i x2^(d-2i) x3^i
        for d in 3..=9u32 {
            let xi = crate::orbits::type_xi_monomials(d);
            let scan = (0..=d / 2).map(|i| (d - 2 * i) + i).min().unwrap();
            let f = generic_member(&xi);
            assert_eq!(line_vanishing_order(&f).unwrap(), scan);
        }
    }

    #[test]
    fn weighted_multiplicities_and_bounds() {
        let w = WeightVector::PRESET_234;
        let g4 = generic_chart(4, 3, 1, false);
        assert_eq!(weighted_multiplicity(&g4, &w).unwrap(), 12);
        assert_eq!(lct_upper_bound(&g4, &w).unwrap(), q(3, 4));
        let g3 = generic_chart(3, 3, 1, true);
        assert_eq!(weighted_multiplicity(&g3, &w).unwrap(), 10);
        assert_eq!(lct_upper_bound(&g3, &w).unwrap(), q(9, 10));
        assert_eq!(weighted_multiplicity(&y("y3^3"), &w).unwrap(), 12);
        let ones = WeightVector::new([1, 1, 1]).unwrap();
        assert_eq!(lct_upper_bound(&y("y1"), &ones).unwrap(), q(3, 1));
        assert!(WeightVector::new([0, 1, 1]).is_err());
        assert!(WeightVector::parse("2,3").is_err());
    }

    #[test]
    fn unit_weights_give_multiplicity() {
        let ones = WeightVector::new([1, 1, 1]).unwrap();
        for d in 3..=6 {
            for strict in [false, true] {
                for fam in enumerate_maximal_families(d, strict).unwrap() {
                    let g = chart_at_p0(&generic_member(&fam.members), d).unwrap();
                    if g.poly.is_zero() {
                        continue;
                    }
                    assert_eq!(weighted_multiplicity(&g, &ones).unwrap(), u64::from(multiplicity(&g).unwrap().order));
                    let w = WeightVector::PRESET_234;
                    assert_eq!(lct_upper_bound(&g, &w).unwrap(), lct_upper_bound(&g, &w.scaled(2).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn multiplicity_bounded_by_x0_degree() {
        for d in 3..=6u32 {
            for strict in [false, true] {
                for fam in enumerate_maximal_families(d, strict).unwrap() {
                    let f = generic_member(&fam.members);
                    let max_a0 = fam.members.iter().map(|m| m.exp(0)).max().unwrap();
                    let g = chart_at_p0(&f, d).unwrap();
                    assert!(multiplicity(&g).unwrap().order >= d - max_a0);
                }
            }
        }
    }

    #[test]
    fn generic_member_layout() {
        let d = 4;
        let fam = family_at(d, l(3, 1), false).unwrap();
        let slice = generic_member(&fam.weight_slice(0));
        assert!(slice.to_string().starts_with("c0*x0*x3^3 + c1*x1^3*x4 + c2*x1^2*x3^2"));
        assert_eq!(generic_member(&[Monomial::projective([0, 0, 4, 0, 0])]).to_string(), "c0*x2^4");
    }

    #[test]
    fn generic_member_verdict_matches_strictness() {
        for d in 3..=5 {
            for strict in [false, true] {
                for fam in enumerate_maximal_families(d, strict).unwrap() {
                    let f = generic_member(&fam.members);
                    let verdict = crate::families::check_torus_stability(&f, d).unwrap().verdict;
                    if strict {
                        assert_eq!(verdict, TorusVerdict::TorusUnstable);
                    } else {
                        assert!(verdict.is_non_stable());
                    }
                }
            }
        }
    }

    #[test]
    fn generic_presence_is_structural() {
        // every present chart coefficient is a nonzero linear form in the c_i
        for d in 3..=5 {
            for fam in enumerate_maximal_families(d, false).unwrap() {
                let g = chart_at_p0(&generic_member(&fam.members), d).unwrap();
                for (_, c) in g.poly.terms() {
                    assert!(!c.is_zero());
                    assert!(c.terms().all(|(k, _)| k.iter().sum::<u32>() == 1));
                }
            }
        }
    }
}
