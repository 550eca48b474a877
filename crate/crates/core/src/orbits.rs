//! Type xi forms, the subgroup `H = diag(t^(d-1), t, 1, t^-1, t^(1-d))` that
//! stabilizes them, its fixed space `V^H`, and orbit closedness for the
//! centralizer torus `diag(a0, a1, 1, a1^-1, a0^-1)` acting on `V^H`.

use std::fmt;

use crate::error::{Error, Result};
use crate::families::{basis, enumerate_maximal_families};
use crate::poly::{Arity, Monomial, ParamCoefficient, Polynomial};
use crate::weights::{take_limit, DiagonalAction, NormalizedOnePs};

/// `x1^i * x2^(d-2i) * x3^i` for `i = 0..=floor(d/2)`.
pub fn type_xi_monomials(d: u32) -> Vec<Monomial> {
    (0..=d / 2)
        .map(|i| Monomial::projective([0, i, d - 2 * i, i, 0]))
        .collect()
}

/// `mu_0 x2^d + mu_1 x1 x2^(d-2) x3 + ... + mu_c x1^c (x2) x3^c`.
pub fn type_xi(d: u32, mus: &[ParamCoefficient]) -> Result<Polynomial> {
    let monos = type_xi_monomials(d);
    if mus.len() != monos.len() {
        return Err(Error::CoefficientCount {
            degree: d,
            expected: monos.len(),
            found: mus.len(),
        });
    }
    Polynomial::from_terms(Arity::Projective, monos.into_iter().zip(mus.iter().cloned()))
}

pub fn stabilizing_subgroup(d: u32) -> NormalizedOnePs {
    NormalizedOnePs::new(u64::from(d) - 1, 1).expect("d >= 2")
}

/// Basis monomials of `H`-weight zero.
pub fn fixed_space_vh(d: u32) -> Result<Vec<Monomial>> {
    let h = stabilizing_subgroup(d);
    Ok(basis(d)?.into_iter().filter(|m| h.weight(m) == 0).collect())
}

/// Whether every monomial of `f` has `H`-weight zero, with `d = deg f`.
pub fn stabilized_by_h(f: &Polynomial) -> Result<bool> {
    f.require_arity(Arity::Projective)?;
    let d = f.homogeneous_degree()?;
    if d < 2 {
        return Err(Error::DegreeTooSmall(d));
    }
    let h = stabilizing_subgroup(d);
    Ok(f.terms().all(|(m, _)| h.weight(m) == 0))
}

/// Weight `(a0 - a4, a1 - a3)` under the centralizer torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoTorusWeight {
    pub p: i64,
    pub q: i64,
}

impl TwoTorusWeight {
    pub fn of(m: &Monomial) -> Self {
        TwoTorusWeight {
            p: i64::from(m.exp(0)) - i64::from(m.exp(4)),
            q: i64::from(m.exp(1)) - i64::from(m.exp(3)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0 && self.q == 0
    }
}

impl fmt::Display for TwoTorusWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

fn cross(o: TwoTorusWeight, a: TwoTorusWeight, b: TwoTorusWeight) -> i64 {
    (a.p - o.p) * (b.q - o.q) - (a.q - o.q) * (b.p - o.p)
}

/// Convex hull in counter-clockwise order (monotone chain), collinear points
/// dropped. Needs at least three non-collinear points to be meaningful.
fn convex_hull(points: &[TwoTorusWeight]) -> Vec<TwoTorusWeight> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<TwoTorusWeight> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<TwoTorusWeight> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Whether the origin lies in the relative interior of the convex hull of
/// `points`. A hull that is the single point `0` counts.
pub fn origin_in_relative_interior(points: &[TwoTorusWeight]) -> bool {
    let Some(&first) = points.first() else {
        return false;
    };
    let origin = TwoTorusWeight { p: 0, q: 0 };
    let far = points
        .iter()
        .copied()
        .find(|&w| w != first);
    let Some(second) = far else {
        return first.is_zero();
    };
    let collinear = points.iter().all(|&w| cross(first, second, w) == 0);
    if collinear {
        if cross(first, second, origin) != 0 {
            return false;
        }
        // project onto the line direction; 0 must sit strictly between the ends
        let dir = (second.p - first.p, second.q - first.q);
        let t = |w: TwoTorusWeight| w.p * dir.0 + w.q * dir.1;
        let lo = points.iter().map(|&w| t(w)).min().expect("nonempty");
        let hi = points.iter().map(|&w| t(w)).max().expect("nonempty");
        return lo < 0 && 0 < hi;
    }
    let hull = convex_hull(points);
    (0..hull.len()).all(|i| cross(hull[i], hull[(i + 1) % hull.len()], origin) > 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitClosure {
    Closed,
    /// `limit = lim_{t -> oo} direction(t) . f`, outside the orbit.
    DegeneratesTo {
        limit: Polynomial,
        direction: NormalizedOnePs,
    },
}

impl OrbitClosure {
    pub fn is_closed(&self) -> bool {
        matches!(self, OrbitClosure::Closed)
    }
}

/// Closedness of the centralizer-torus orbit of `f` inside `V^H`.
///
/// Closed iff `0` is in the relative interior of the hull of the support
/// weights. Otherwise the witness direction is the smallest-slope maximal
/// strict family containing every monomial of nonzero weight.
pub fn torus_orbit_closed(f: &Polynomial) -> Result<OrbitClosure> {
    if !stabilized_by_h(f)? {
        return Err(Error::Precondition("form is not fixed by H (support leaves V^H)".into()));
    }
    let d = f.homogeneous_degree()?;
    let weights: Vec<TwoTorusWeight> = f.terms().map(|(m, _)| TwoTorusWeight::of(m)).collect();
    if origin_in_relative_interior(&weights) {
        return Ok(OrbitClosure::Closed);
    }
    let moving: Vec<&Monomial> = f
        .terms()
        .map(|(m, _)| m)
        .filter(|m| !TwoTorusWeight::of(m).is_zero())
        .collect();
    for family in enumerate_maximal_families(d, true)? {
        if moving.iter().all(|m| family.contains(m)) {
            let limit = take_limit(f, &family.slope)?;
            return Ok(OrbitClosure::DegeneratesTo {
                limit,
                direction: family.slope,
            });
        }
    }
    Err(Error::Precondition(
        "orbit is not closed but no normalized direction degenerates it".into(),
    ))
}

/// No normalized subgroup makes every weight negative, i.e. the support is in
/// no maximal strict family.
pub fn torus_semistable(f: &Polynomial) -> Result<bool> {
    f.require_arity(Arity::Projective)?;
    let d = f.homogeneous_degree()?;
    Ok(!enumerate_maximal_families(d, true)?
        .iter()
        .any(|fam| fam.contains_support(f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::chart::generic_member;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    fn ones(d: u32) -> Vec<ParamCoefficient> {
        vec![ParamCoefficient::one(); d as usize / 2 + 1]
    }

    fn w(p: i64, q: i64) -> TwoTorusWeight {
        TwoTorusWeight { p, q }
    }

    /// Oracle: the orbit is closed iff no integer direction makes every
    /// weight <= 0 with at least one < 0 (scan over a box of directions).
    fn closed_by_direction_scan(points: &[TwoTorusWeight]) -> bool {
        for a in -12i64..=12 {
            for b in -12i64..=12 {
                if a == 0 && b == 0 {
                    continue;
                }
                let vals: Vec<i64> = points.iter().map(|x| a * x.p + b * x.q).collect();
                if vals.iter().all(|&v| v <= 0) && vals.iter().any(|&v| v < 0) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn type_xi_forms() {
        let c = |n| ParamCoefficient::from_int(n);
        assert_eq!(type_xi(4, &ones(4)).unwrap(), p("x2^4 + x1*x2^2*x3 + x1^2*x3^2"));
        assert_eq!(type_xi(5, &[c(1), c(0), c(1)]).unwrap(), p("x2^5 + x1^2*x2*x3^2"));
        assert!(type_xi(3, &[c(0), c(0)]).unwrap().is_zero());
        assert!(matches!(type_xi(4, &[c(1)]), Err(Error::CoefficientCount { expected: 3, .. })));
        for d in 3..=9 {
            for m in type_xi_monomials(d) {
                assert!(m.exp(0) == 0 && m.exp(4) == 0 && m.exp(1) == m.exp(3));
            }
        }
    }

    #[test]
    fn fixed_space_matches_listed_monomials() {
        for d in 3..=10u32 {
            let mut expected = type_xi_monomials(d);
            expected.push(Monomial::projective([1, 0, 0, d - 1, 0]));
            expected.push(Monomial::projective([0, d - 1, 0, 0, 1]));
            expected.sort();
            assert_eq!(fixed_space_vh(d).unwrap(), expected, "d={d}");
        }
        let d4: Vec<String> = fixed_space_vh(4).unwrap().iter().rev().map(|m| m.to_string()).collect();
        assert_eq!(d4, ["x0*x3^3", "x1^3*x4", "x1^2*x3^2", "x1*x2^2*x3", "x2^4"]);
    }

    #[test]
    fn stabilizer_membership() {
        for d in 3..=7u32 {
            assert!(stabilized_by_h(&type_xi(d, &ones(d)).unwrap()).unwrap());
            let both = p(&format!("x0*x3^{} + x1^{}*x4", d - 1, d - 1));
            assert!(stabilized_by_h(&both).unwrap());
            let off = p(&format!("x1^{}*x4 + x2^{}*x3", d - 1, d - 1));
            assert!(!stabilized_by_h(&off).unwrap());
        }
    }

    #[test]
    fn relative_interior() {
        assert!(origin_in_relative_interior(&[w(0, 0)]));
        assert!(origin_in_relative_interior(&[w(0, 0), w(0, 0)]));
        assert!(!origin_in_relative_interior(&[w(1, 2)]));
        assert!(origin_in_relative_interior(&[w(1, -3), w(-1, 3), w(0, 0)]));
        assert!(!origin_in_relative_interior(&[w(-1, 3), w(0, 0)]));
        assert!(!origin_in_relative_interior(&[w(1, 1), w(2, 2)]));
        assert!(!origin_in_relative_interior(&[w(1, 0), w(0, 1)]));
        assert!(origin_in_relative_interior(&[w(1, 0), w(0, 1), w(-1, -1)]));
        assert!(!origin_in_relative_interior(&[w(1, 0), w(0, 1), w(-1, 0)]));
        assert!(!origin_in_relative_interior(&[]));
    }

    #[test]
    fn relative_interior_agrees_with_direction_scan() {
        let grid: Vec<TwoTorusWeight> = (-2..=2).flat_map(|a| (-2..=2).map(move |b| w(a, b))).collect();
        // all subsets of size <= 3 of a small grid
        for i in 0..grid.len() {
            for j in i..grid.len() {
                for k in j..grid.len() {
                    let pts = [grid[i], grid[j], grid[k]];
                    assert_eq!(
                        origin_in_relative_interior(&pts),
                        closed_by_direction_scan(&pts),
                        "{pts:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn type_xi_is_closed() {
        for d in 3..=8 {
            let xi = type_xi(d, &ones(d)).unwrap();
            assert_eq!(torus_orbit_closed(&xi).unwrap(), OrbitClosure::Closed);
            assert!(torus_semistable(&xi).unwrap());
        }
    }

    #[test]
    fn both_extra_weights_keep_orbit_closed() {
        for d in 3..=7u32 {
            let xi = type_xi(d, &ones(d)).unwrap();
            let extra = p(&format!("c0*x0*x3^{} + c1*x1^{}*x4", d - 1, d - 1));
            let f = &xi + &extra;
            assert!(torus_orbit_closed(&f).unwrap().is_closed());
        }
    }

    #[test]
    fn one_extra_weight_degenerates() {
        for d in 3..=8u32 {
            let xi = type_xi(d, &ones(d)).unwrap();
            let f = &xi + &p(&format!("x1^{}*x4", d - 1));
            match torus_orbit_closed(&f).unwrap() {
                OrbitClosure::DegeneratesTo { limit, direction } => {
                    assert_eq!(limit, xi);
                    assert_eq!(direction, NormalizedOnePs::new(u64::from(d), 1).unwrap());
                    assert_eq!(take_limit(&f, &direction).unwrap(), limit);
                    assert!(stabilized_by_h(&limit).unwrap());
                }
                OrbitClosure::Closed => panic!("d={d} should degenerate"),
            }
            let g = &xi + &p(&format!("x0*x3^{}", d - 1));
            let OrbitClosure::DegeneratesTo { limit, direction } = torus_orbit_closed(&g).unwrap() else {
                panic!("d={d} should degenerate");
            };
            assert_eq!(limit, xi);
            assert!(direction.slope().unwrap() < num_rational::BigRational::from_integer((d - 1).into()));
        }
    }

    #[test]
    fn closedness_ignores_scaling() {
        let xi = type_xi(4, &ones(4)).unwrap();
        let f = &xi + &p("x1^3*x4");
        let scaled = f.scale(&ParamCoefficient::param(7));
        assert_eq!(torus_orbit_closed(&f).unwrap().is_closed(), torus_orbit_closed(&scaled).unwrap().is_closed());
        let g = f.scale(&ParamCoefficient::from_int(-3));
        assert_eq!(torus_orbit_closed(&f).unwrap().is_closed(), torus_orbit_closed(&g).unwrap().is_closed());
    }

    #[test]
    fn precondition_enforced() {
        assert!(torus_orbit_closed(&p("x1^3*x4 + x2^3*x3")).is_err());
        let generic = generic_member(&type_xi_monomials(5));
        assert!(torus_orbit_closed(&generic).unwrap().is_closed());
    }
}
