//! Exact sparse polynomials in the coordinates of `P^4` (or of the affine
//! chart of the quadric), with coefficients that may involve generic
//! parameter symbols.

mod coeff;
mod monomial;
mod polynomial;

pub use coeff::{format_rational, ParamCoefficient};
pub use monomial::{Arity, Monomial};
pub use polynomial::Polynomial;

/// All monomials of `degree` in `n_vars` variables, ascending lex order.
pub fn monomials_of_degree(arity: Arity, degree: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, left: usize, remaining: u32, out: &mut Vec<Monomial>) {
        if left == 1 {
            prefix.push(remaining);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=remaining {
            prefix.push(e);
            rec(prefix, left - 1, remaining - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), arity.n_vars(), degree, &mut out);
    out
}


#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;
    use crate::parse::parse_polynomial;
    use num_rational::BigRational;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    fn chart_images() -> Vec<Polynomial> {
        vec![
            Polynomial::constant(Arity::Chart, ParamCoefficient::one()),
            Polynomial::var(Arity::Chart, 0),
            Polynomial::var(Arity::Chart, 1),
            Polynomial::var(Arity::Chart, 2),
            crate::parse::parse_chart("-y2^2 - y1*y3").unwrap(),
        ]
    }

    #[test]
    fn additive_inverse() {
        assert!((&p("x2^2") + &p("-x2^2")).is_zero());
    }

    #[test]
    fn monomial_product() {
        assert_eq!(&p("x0*x4") * &p("x1*x3"), p("x0*x1*x3*x4"));
    }

    #[test]
    fn binomial_over_parameters() {
        let s = p("c0*x2 + c1*x3");
        assert_eq!(s.pow(2), p("c0^2*x2^2 + 2*c0*c1*x2*x3 + c1^2*x3^2"));
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let y = crate::parse::parse_chart("y1").unwrap();
        assert!(matches!(p("x1").checked_add(&y), Err(crate::Error::ArityMismatch { .. })));
        assert!(p("x1").checked_mul(&y).is_err());
    }

    #[test]
    fn quadric_reduces_to_zero() {
        assert!(Polynomial::quadric().reduce_mod_quadric().unwrap().is_zero());
    }

    #[test]
    fn basis_monomial_is_fixed() {
        let f = p("x1^2*x3*x4");
        assert_eq!(f.reduce_mod_quadric().unwrap(), f);
    }

    #[test]
    fn reduction_of_x0_x2sq_x4() {
        let f = p("x0*x2^2*x4");
        let r = f.reduce_mod_quadric().unwrap();
        assert_eq!(r, p("-x1*x2^2*x3 - x2^4"));
        // oracle: f - r vanishes on Q, hence is a multiple of the irreducible quadric
        let diff = &f - &r;
        for point in quadric_points(12, 1) {
            assert!(diff.evaluate(&point, &[]).unwrap().is_zero());
        }
    }

    #[test]
    fn reduction_rejects_inhomogeneous() {
        assert_eq!(p("x2^2 + x3").reduce_mod_quadric(), Err(crate::Error::NotHomogeneous));
    }

    #[test]
    fn chart_substitution() {
        let images = chart_images();
        assert!(Polynomial::quadric().substitute(&images).unwrap().is_zero());
        for d in 3..=7 {
            let f = p(&format!("x0*x3^{}", d - 1));
            assert_eq!(f.substitute(&images).unwrap(), crate::parse::parse_chart(&format!("y3^{}", d - 1)).unwrap());
            let g = p(&format!("x1^{}*x4", d - 1));
            let expected = crate::parse::parse_chart(&format!("-y1^{}*y2^2 - y1^{}*y3", d - 1, d)).unwrap();
            let got = g.substitute(&images).unwrap();
            assert_eq!(got, expected);
            // oracle: evaluate both sides at rational points
            for k in 1..=5i64 {
                let y: Vec<BigRational> = (0..3).map(|i| BigRational::new((k * 3 + i - 7).into(), (i + 2).into())).collect();
                let x4 = -(&y[1] * &y[1] + &y[0] * &y[2]);
                let x = vec![BigRational::from_integer(1.into()), y[0].clone(), y[1].clone(), y[2].clone(), x4];
                assert_eq!(g.evaluate(&x, &[]).unwrap(), got.evaluate(&y, &[]).unwrap());
            }
        }
    }

    #[test]
    fn support_degree_homogeneity() {
        assert_eq!(p("x2^5").support(), vec![Monomial::projective([0, 0, 5, 0, 0])]);
        assert!(!p("x2^2 + x3").is_homogeneous());
        assert_eq!(p("0").degree(), None);
        let xi = p("c0*x2^4 + c1*x1*x2^2*x3 + c2*x1^2*x3^2");
        assert_eq!(xi.degree(), Some(4));
        let support = p("x2^2 + x1*x3 + x0*x4").support();
        let mut sorted = support.clone();
        sorted.sort();
        assert_eq!(support, sorted);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(Arity::Projective, 4).len(), 70);
        assert_eq!(monomials_of_degree(Arity::Chart, 2).len(), 6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reduction_is_idempotent(d in 2u32..=8, seed in any::<u64>()) {
            let f = crate::suite::random_form(d, 6, seed);
            let r = f.reduce_mod_quadric().unwrap();
            prop_assert_eq!(r.reduce_mod_quadric().unwrap(), r.clone());
            prop_assert!(r.support().iter().all(|m| m.exp(0) == 0 || m.exp(4) == 0));
        }

        #[test]
        fn multiples_of_quadric_reduce_to_zero(h in homogeneous(3, 6)) {
            let qh = &Polynomial::quadric() * &h;
            prop_assert!(qh.reduce_mod_quadric().unwrap().is_zero());
        }

        #[test]
        fn chart_ignores_reduction(f in homogeneous(4, 8)) {
            let images = chart_images();
            let r = f.reduce_mod_quadric().unwrap();
            prop_assert_eq!(f.substitute(&images).unwrap(), r.substitute(&images).unwrap());
        }

        #[test]
        fn ring_axioms(a in homogeneous(2, 4), b in homogeneous(1, 4), c in homogeneous(2, 4)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &c) * &b, &(&a * &b) + &(&c * &b));
            prop_assert!((&a - &a).is_zero());
            let point = vec![BigRational::from_integer(2.into()); 5];
            let params = vec![BigRational::from_integer(3.into()); 3];
            let lhs = (&a * &b).evaluate(&point, &params).unwrap();
            let rhs = a.evaluate(&point, &params).unwrap() * b.evaluate(&point, &params).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
