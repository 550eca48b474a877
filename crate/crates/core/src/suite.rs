//! The acceptance battery: every published claim the tool can check,
//! evaluated exactly. Shared by `qgit paper-suite` and the `acceptance` test.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::{
    chart_at_p0, chart_images, generic_member, leading_sources, lct_upper_bound, multiplicity,
    weighted_multiplicity, WeightVector,
};
use crate::chow::{ci_chow_weight, ChowVerdictKind};
use crate::error::Result;
use crate::families::{
    check_torus_stability, enumerate_maximal_families, family_at, verify_inclusion_lemmas,
    weight_set, TorusVerdict,
};
use crate::orbits::{fixed_space_vh, torus_orbit_closed, type_xi, type_xi_monomials, OrbitClosure};
use crate::parse::{parse_polynomial, parse_with_arity};
use crate::poly::{monomials_of_degree, Arity, Monomial, ParamCoefficient, Polynomial};
use crate::weights::{DiagonalAction, DiagonalOnePs, NormalizedOnePs};

/// Per-degree time budget for the lemma verification.
pub const LEMMA_TIME_BUDGET: Duration = Duration::from_secs(5);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name
        )
    }
}

struct Tally {
    passed: bool,
    details: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            passed: true,
            details: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.passed = false;
            self.details.push(format!("FAILED: {what}"));
        } else {
            self.details.push(format!("ok: {what}"));
        }
    }

    fn try_expect(&mut self, outcome: Result<bool>, what: impl Into<String>) {
        match outcome {
            Ok(ok) => self.expect(ok, what),
            Err(e) => self.expect(false, format!("{} ({e})", what.into())),
        }
    }

    fn finish(self, id: u32, name: &'static str) -> CriterionResult {
        CriterionResult {
            id,
            name,
            passed: self.passed,
            details: self.details,
        }
    }
}

fn l(u: u64, v: u64) -> NormalizedOnePs {
    NormalizedOnePs::new(u, v).expect("valid literal slope")
}

fn mono_set(ms: impl IntoIterator<Item = Monomial>) -> BTreeSet<Monomial> {
    ms.into_iter().collect()
}

pub fn criterion_lemmas() -> CriterionResult {
    let mut t = Tally::new();
    for d in 3..=10 {
        let start = Instant::now();
        let report = verify_inclusion_lemmas(d);
        let elapsed = start.elapsed();
        match report {
            Ok(r) => {
                for c in &r.checks {
                    t.expect(c.passed, format!("d={d}: {} ({})", c.name, c.detail));
                }
                t.expect(
                    elapsed < LEMMA_TIME_BUDGET,
                    format!("d={d}: verified in {:.3}s", elapsed.as_secs_f64()),
                );
            }
            Err(e) => t.expect(false, format!("d={d}: {e}")),
        }
    }
    t.finish(1, "inclusion lemmas for maximal families, d = 3..10")
}

/// The listed weight-0 monomials of the slope-(d-1) family:
/// `x0 x3^(d-1), x1^(d-1) x4` and the type xi monomials.
pub fn listed_weight_zero(d: u32) -> BTreeSet<Monomial> {
    let mut s = mono_set(type_xi_monomials(d));
    s.insert(Monomial::projective([1, 0, 0, d - 1, 0]));
    s.insert(Monomial::projective([0, d - 1, 0, 0, 1]));
    s
}

/// The listed weight-(-1) monomials of the slope-d strict family:
/// `x1^(d-1) x4` and `x1^i x2^(d-1-2i) x3^(i+1)` for `0 <= i`, `2i <= d-1`.
pub fn listed_weight_minus_one(d: u32) -> BTreeSet<Monomial> {
    let mut s: BTreeSet<Monomial> = (0..)
        .take_while(|&i| 2 * i < d)
        .map(|i| Monomial::projective([0, i, d - 1 - 2 * i, i + 1, 0]))
        .collect();
    s.insert(Monomial::projective([0, d - 1, 0, 0, 1]));
    s
}

pub fn criterion_golden_lists() -> CriterionResult {
    let mut t = Tally::new();
    for d in [4u32, 5] {
        let top = enumerate_maximal_families(d, false)
            .map(|fams| fams.into_iter().find(|f| f.slope == l(u64::from(d) - 1, 1)));
        match top {
            Ok(Some(f)) => t.expect(
                mono_set(f.weight_slice(0)) == listed_weight_zero(d) && f.max_weight() == Some(0),
                format!("d={d}: weight-0 slice of M_<=0 at {}/1", d - 1),
            ),
            _ => t.expect(false, format!("d={d}: no maximal M_<=0 at slope {}/1", d - 1)),
        }
        let top = enumerate_maximal_families(d, true)
            .map(|fams| fams.into_iter().find(|f| f.slope == l(u64::from(d), 1)));
        match top {
            Ok(Some(f)) => t.expect(
                mono_set(f.weight_slice(-1)) == listed_weight_minus_one(d) && f.max_weight() == Some(-1),
                format!("d={d}: weight-(-1) slice of M_<0 at {d}/1"),
            ),
            _ => t.expect(false, format!("d={d}: no maximal M_<0 at slope {d}/1")),
        }
    }
    t.finish(2, "golden monomial lists for d = 4, 5")
}

fn generic_chart_multiplicity(d: u32, slope: NormalizedOnePs, strict: bool) -> Result<u32> {
    let fam = family_at(d, slope, strict)?;
    let g = chart_at_p0(&generic_member(&fam.members), d)?;
    Ok(multiplicity(&g)?.order)
}

pub fn criterion_multiplicities() -> CriterionResult {
    let mut t = Tally::new();
    for d in 3..=8 {
        t.try_expect(
            generic_chart_multiplicity(d, NormalizedOnePs::infinite(), false).map(|r| r == d),
            format!("d={d}: generic M_<=0(1/0) member has multiplicity {d} at p0"),
        );
    }
    let leading = (|| -> Result<bool> {
        let fam = family_at(4, l(1, 1), false)?;
        let f = generic_member(&fam.members);
        let mult = multiplicity(&chart_at_p0(&f, 4)?)?;
        let y3sq = Monomial::chart([0, 0, 2]);
        let src = Monomial::projective([2, 0, 0, 2, 0]);
        let sources = leading_sources(&f, 4, &BigRational::from_integer(0.into()))?;
        Ok(mult.order == 2
            && mult.leading_form.support().contains(&y3sq)
            && sources == vec![src.clone()]
            && mult.leading_form.coefficient(&y3sq) == f.coefficient(&src))
    })();
    t.try_expect(leading, "d=4: M_<=0(1/1) leading form contains y3^2 sourced from x0^2*x3^2");
    for d in 4..=8u32 {
        let outcome = enumerate_maximal_families(d, true).and_then(|fams| {
            let mut all = true;
            let limit = BigRational::from_integer((d - 1).into());
            for fam in fams.iter().filter(|f| f.slope.slope().is_some_and(|s| s < limit)) {
                let a0_ok = fam.members.iter().all(|m| m.exp(0) + 2 < d);
                let r = generic_chart_multiplicity(d, fam.slope, true)?;
                all &= a0_ok && r >= 3;
            }
            Ok(all)
        });
        t.try_expect(outcome, format!("d={d}: maximal M_<0 below slope {} have a0 < d-2 and multiplicity >= 3", d - 1));
    }
    t.finish(3, "multiplicity claims at p0")
}

pub fn criterion_lct_bounds() -> CriterionResult {
    let mut t = Tally::new();
    let w = WeightVector::PRESET_234;
    let cases = [
        (4u32, l(3, 1), false, 12u64, BigRational::new(3.into(), 4.into())),
        (3u32, l(3, 1), true, 10u64, BigRational::new(9.into(), 10.into())),
    ];
    for (d, slope, strict, wm, bound) in cases {
        let outcome = (|| -> Result<(u64, BigRational)> {
            let fam = family_at(d, slope, strict)?;
            let g = chart_at_p0(&generic_member(&fam.members), d)?;
            Ok((weighted_multiplicity(&g, &w)?, lct_upper_bound(&g, &w)?))
        })();
        let what = format!(
            "d={d}: generic {} at {slope} with weights {w}: w(f) = {wm}, bound = {bound}",
            if strict { "M_<0" } else { "M_<=0" }
        );
        t.try_expect(outcome.map(|(a, b)| a == wm && b == bound), what);
    }
    t.finish(4, "log canonical threshold bounds with weights (2,3,4)")
}

pub fn criterion_chow_example() -> CriterionResult {
    let mut t = Tally::new();
    let outcome = (|| -> Result<bool> {
        let f = parse_polynomial("x0*x3^3 + x1*x2^2*x3")?;
        let chi = DiagonalOnePs::new([3, 3, -2, -2, -2])?;
        let v = ci_chow_weight(&Polynomial::quadric(), &f, &chi)?;
        Ok(v.mu_q == 1 && v.mu_y == -3 && v.combined == -2 && v.verdict == ChowVerdictKind::ChowUnstableWitness)
    })();
    t.try_expect(outcome, "mu_q = 1, mu_y = -3, combined = -2");
    let outcome = (|| -> Result<bool> {
        let f = parse_polynomial("x0*x3^3 + x1*x2^2*x3")?;
        let r = check_torus_stability(&f, 4)?;
        Ok(r.verdict == TorusVerdict::TorusNonStable)
    })();
    t.try_expect(outcome, "same surface is torus-non-stable but not torus-unstable");
    t.finish(5, "Chow-unstable but torus-semistable surface")
}

pub fn criterion_minimal_orbits() -> CriterionResult {
    let mut t = Tally::new();
    for d in 3..=8u32 {
        t.try_expect(
            fixed_space_vh(d).map(|vh| mono_set(vh) == listed_weight_zero(d)),
            format!("d={d}: V^H is the listed monomials"),
        );
        let ones = vec![ParamCoefficient::one(); d as usize / 2 + 1];
        let outcome = (|| -> Result<bool> {
            let xi = type_xi(d, &ones)?;
            let closed = torus_orbit_closed(&xi)? == OrbitClosure::Closed;
            let f = &xi + &Polynomial::monomial(Monomial::projective([0, d - 1, 0, 0, 1]));
            let degenerates = matches!(
                torus_orbit_closed(&f)?,
                OrbitClosure::DegeneratesTo { limit, .. } if limit == xi
            );
            Ok(closed && degenerates)
        })();
        t.try_expect(outcome, format!("d={d}: type xi closed; type xi + x1^{}*x4 degenerates to type xi", d - 1));
    }
    t.finish(6, "minimal orbits and degeneration to type xi")
}

/// A random homogeneous form of degree `d` over all monomials (not only the
/// quotient basis), with rational and parametric coefficients.
pub fn random_form(d: u32, max_terms: usize, seed: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_form_with(&mut rng, Arity::Projective, d, max_terms)
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> ParamCoefficient {
    let r = BigRational::new(BigInt::from(rng.gen_range(-30i64..=30)), BigInt::from(rng.gen_range(1i64..=7)));
    match rng.gen_range(0..4) {
        0 => ParamCoefficient::param(rng.gen_range(0..4)).scale(&r),
        1 => &ParamCoefficient::param(rng.gen_range(0..3)) * &ParamCoefficient::from_rational(r),
        _ => ParamCoefficient::from_rational(r),
    }
}

fn random_form_with(rng: &mut ChaCha8Rng, arity: Arity, d: u32, max_terms: usize) -> Polynomial {
    let monos = monomials_of_degree(arity, d);
    let n = rng.gen_range(1..=max_terms.max(1));
    let terms: Vec<(Monomial, ParamCoefficient)> = (0..n)
        .map(|_| (monos[rng.gen_range(0..monos.len())].clone(), random_coefficient(rng)))
        .collect();
    Polynomial::from_terms(arity, terms).expect("same arity")
}

pub fn criterion_properties() -> CriterionResult {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2013);
    let images = chart_images(&BigRational::from_integer(0.into()));

    let mut failures = 0;
    for _ in 0..1000 {
        let d = rng.gen_range(2..=6);
        let f = random_form_with(&mut rng, Arity::Projective, d, 8);
        let ok = (|| -> Result<bool> {
            let r = f.reduce_mod_quadric()?;
            let idempotent = r.reduce_mod_quadric()? == r;
            let compatible = f.substitute(&images)? == r.substitute(&images)?;
            Ok(idempotent && compatible)
        })();
        if !matches!(ok, Ok(true)) {
            failures += 1;
        }
    }
    t.expect(failures == 0, format!("reduction idempotence and chart compatibility: 1000 forms, {failures} failures"));

    let mut failures = 0;
    for _ in 0..1000 {
        let a = Monomial::projective(std::array::from_fn(|_| rng.gen_range(0..=8)));
        let b = Monomial::projective(std::array::from_fn(|_| rng.gen_range(0..=8)));
        let v = rng.gen_range(0..=50u64);
        let u = rng.gen_range(v.max(1)..=50u64.max(v));
        let lam = NormalizedOnePs::new(u, v).expect("u >= v, u >= 1");
        if lam.weight(&a.mul(&b)) != lam.weight(&a) + lam.weight(&b) {
            failures += 1;
        }
    }
    t.expect(failures == 0, format!("weight additivity: 1000 monomial pairs, {failures} failures"));

    for d in 3..=10u32 {
        let outcome = (|| -> Result<usize> {
            let non_strict = enumerate_maximal_families(d, false)?;
            let strict = enumerate_maximal_families(d, true)?;
            let mut bad = 0;
            for _ in 0..200 {
                let v = rng.gen_range(0..=50u64);
                let u = rng.gen_range(v.max(1)..=50u64.max(v));
                let lam = NormalizedOnePs::new(u, v)?;
                let ns = weight_set(d, &lam, false)?;
                let s = weight_set(d, &lam, true)?;
                if !non_strict.iter().any(|f| ns.iter().all(|m| f.contains(m))) {
                    bad += 1;
                }
                if !strict.iter().any(|f| s.iter().all(|m| f.contains(m))) {
                    bad += 1;
                }
            }
            Ok(bad)
        })();
        t.try_expect(
            outcome.map(|bad| bad == 0),
            format!("d={d}: 200 random slopes each lie in a maximal family"),
        );
    }

    let mut failures = 0;
    for _ in 0..1000 {
        let arity = if rng.gen_bool(0.5) { Arity::Projective } else { Arity::Chart };
        let d = rng.gen_range(0..=6);
        let p = random_form_with(&mut rng, arity, d, 6);
        let extra_degree = rng.gen_range(0..=3);
        let extra = random_form_with(&mut rng, arity, extra_degree, 3);
        let p = &p + &extra;
        if parse_with_arity(&p.to_string(), arity).ok() != Some(p) {
            failures += 1;
        }
    }
    t.expect(failures == 0, format!("parser round trip: 1000 polynomials, {failures} failures"));

    t.finish(7, "property suites")
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_lemmas(),
        criterion_golden_lists(),
        criterion_multiplicities(),
        criterion_lct_bounds(),
        criterion_chow_example(),
        criterion_minimal_orbits(),
        criterion_properties(),
    ]
}
