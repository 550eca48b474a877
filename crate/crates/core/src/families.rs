//! Destabilizing monomial families `M_<=0(lambda)` and `M_<0(lambda)` over the
//! normalized subgroups `lambda_{u,v}`, and the torus stability test built on
//! them.
//!
//! A family only changes when some basis monomial changes weight sign, i.e.
//! at a critical slope `u/v = (a3 - a1)/(a0 - a4)`. Sampling every critical
//! slope, one point inside every open interval between them and the ray
//! `v = 0` therefore produces every family that exists.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{monomials_of_degree, Arity, Monomial, Polynomial};
use crate::weights::{DiagonalAction, NormalizedOnePs};

/// The point `p0 = [1,0,0,0,0]`, written out for reports.
pub const P0: &str = "[1,0,0,0,0]";
/// The line `L: x2 = x3 = x4 = 0`, written out for reports.
pub const LINE_L: &str = "x2=x3=x4=0";

fn check_degree(d: u32) -> Result<()> {
    if d < 3 {
        Err(Error::DegreeTooSmall(d))
    } else {
        Ok(())
    }
}

/// Degree-`d` monomials with `a0 * a4 = 0`, ascending lex order.
pub fn basis(d: u32) -> Result<Vec<Monomial>> {
    check_degree(d)?;
    Ok(monomials_of_degree(Arity::Projective, d)
        .into_iter()
        .filter(|m| m.exp(0) == 0 || m.exp(4) == 0)
        .collect())
}

fn in_family(lambda: &NormalizedOnePs, strict: bool, m: &Monomial) -> bool {
    let w = lambda.weight(m);
    if strict {
        w < 0
    } else {
        w <= 0
    }
}

/// `M_<0(lambda)` (strict) or `M_<=0(lambda)` as a set of basis monomials.
pub fn weight_set(d: u32, lambda: &NormalizedOnePs, strict: bool) -> Result<BTreeSet<Monomial>> {
    Ok(basis(d)?
        .into_iter()
        .filter(|m| in_family(lambda, strict, m))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DestabilizingFamily {
    pub degree: u32,
    pub slope: NormalizedOnePs,
    /// `true` for `M_<0`, `false` for `M_<=0`.
    pub strict: bool,
    /// Ascending lex order.
    pub members: Vec<Monomial>,
    pub maximal: bool,
}

impl DestabilizingFamily {
    pub fn contains(&self, m: &Monomial) -> bool {
        self.members.binary_search(m).is_ok()
    }

    pub fn contains_support(&self, f: &Polynomial) -> bool {
        f.terms().all(|(m, _)| self.contains(m))
    }

    pub fn is_subset_of(&self, other: &DestabilizingFamily) -> bool {
        self.members.iter().all(|m| other.contains(m))
    }

    pub fn weight(&self, m: &Monomial) -> i64 {
        self.slope.weight(m)
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.members.iter().map(|m| self.weight(m)).max()
    }

    /// Members of weight exactly `w` under the family's own subgroup.
    pub fn weight_slice(&self, w: i64) -> Vec<Monomial> {
        self.members
            .iter()
            .filter(|m| self.weight(m) == w)
            .cloned()
            .collect()
    }

    pub fn kind(&self) -> &'static str {
        if self.strict {
            "M_<0"
        } else {
            "M_<=0"
        }
    }
}

impl fmt::Display for DestabilizingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(lambda_{}) [{} monomials]", self.kind(), self.slope, self.members.len())
    }
}

/// Slopes `u/v` in `[1, d]` at which some basis monomial has weight zero.
pub fn critical_slopes(d: u32) -> Result<Vec<BigRational>> {
    let mut out = BTreeSet::new();
    for m in basis(d)? {
        let da = i64::from(m.exp(0)) - i64::from(m.exp(4));
        let db = i64::from(m.exp(3)) - i64::from(m.exp(1));
        if da == 0 {
            continue;
        }
        let s = BigRational::new(db.into(), da.into());
        if s >= BigRational::one() && s <= BigRational::from_integer(d.into()) {
            out.insert(s);
        }
    }
    Ok(out.into_iter().collect())
}

/// Fraction with the smallest denominator strictly between `lo` and `hi`
/// (both positive), found by descending the Stern-Brocot tree.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo < hi);
    let (mut a, mut b, mut c, mut e) = (0u64, 1u64, 1u64, 0u64);
    loop {
        let m = BigRational::new((a + c).into(), (b + e).into());
        if &m <= lo {
            a += c;
            b += e;
        } else if &m >= hi {
            c += a;
            e += b;
        } else {
            return m;
        }
    }
}

fn to_subgroup(s: &BigRational) -> NormalizedOnePs {
    let u = s.numer().to_u64().expect("positive slope");
    let v = s.denom().to_u64().expect("positive slope");
    NormalizedOnePs::new(u, v).expect("slope >= 1")
}

/// Every critical slope, `1`, the simplest fraction in each open gap, one
/// slope beyond the last critical value, and the ray `v = 0`.
pub fn sample_slopes(d: u32) -> Result<Vec<NormalizedOnePs>> {
    let mut points: BTreeSet<BigRational> = critical_slopes(d)?.into_iter().collect();
    points.insert(BigRational::one());
    let points: Vec<BigRational> = points.into_iter().collect();
    let mut samples: Vec<NormalizedOnePs> = points.iter().map(to_subgroup).collect();
    for pair in points.windows(2) {
        samples.push(to_subgroup(&simplest_between(&pair[0], &pair[1])));
    }
    let last = points.last().expect("contains 1");
    samples.push(to_subgroup(&(last.floor() + BigRational::one())));
    samples.push(NormalizedOnePs::infinite());
    samples.sort();
    samples.dedup();
    Ok(samples)
}

/// Label preference: smaller denominator first (the ray `v = 0` wins), then
/// the smaller slope.
fn label_key(l: &NormalizedOnePs) -> (u64, NormalizedOnePs) {
    (l.v(), *l)
}

fn build_family(basis: &[Monomial], d: u32, slope: NormalizedOnePs, strict: bool) -> DestabilizingFamily {
    DestabilizingFamily {
        degree: d,
        slope,
        strict,
        members: basis.iter().filter(|m| in_family(&slope, strict, m)).cloned().collect(),
        maximal: false,
    }
}

/// Distinct families over all sample slopes, each labelled by its preferred
/// slope, with maximality flags set. Ordered by slope.
pub fn enumerate_families(d: u32, strict: bool) -> Result<Vec<DestabilizingFamily>> {
    let basis = basis(d)?;
    let samples = sample_slopes(d)?;
    let built: Vec<DestabilizingFamily> = samples
        .par_iter()
        .map(|&s| build_family(&basis, d, s, strict))
        .collect();

    let mut distinct: Vec<DestabilizingFamily> = Vec::new();
    for fam in built {
        match distinct.iter_mut().find(|f| f.members == fam.members) {
            Some(existing) => {
                if label_key(&fam.slope) < label_key(&existing.slope) {
                    existing.slope = fam.slope;
                }
            }
            None => distinct.push(fam),
        }
    }
    let flags: Vec<bool> = distinct
        .iter()
        .map(|f| {
            !distinct
                .iter()
                .any(|g| g.members.len() > f.members.len() && f.is_subset_of(g))
        })
        .collect();
    for (f, maximal) in distinct.iter_mut().zip(flags) {
        f.maximal = maximal;
    }
    distinct.sort_by_key(|f| f.slope);
    Ok(distinct)
}

/// The inclusion-maximal families, ordered by slope.
pub fn enumerate_maximal_families(d: u32, strict: bool) -> Result<Vec<DestabilizingFamily>> {
    Ok(enumerate_families(d, strict)?
        .into_iter()
        .filter(|f| f.maximal)
        .collect())
}

/// The family at one slope; `maximal` is set when it equals one of the
/// maximal families.
pub fn family_at(d: u32, slope: NormalizedOnePs, strict: bool) -> Result<DestabilizingFamily> {
    let mut fam = build_family(&basis(d)?, d, slope, strict);
    fam.maximal = enumerate_maximal_families(d, strict)?
        .iter()
        .any(|g| g.members == fam.members);
    Ok(fam)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityTag {
    /// Every member vanishes to order >= 2 along `L`.
    LineSingular,
    IsolatedAtP0,
}

impl fmt::Display for SingularityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingularityTag::LineSingular => "line-singular",
            SingularityTag::IsolatedAtP0 => "isolated-at-p0",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub tag: SingularityTag,
    /// `min (a2 + a3 + a4)` over the members.
    pub line_vanishing_order: u32,
    /// `x0^d` is absent, so every member surface passes through `p0`.
    pub p0_on_surface: bool,
}

pub(crate) fn line_order(m: &Monomial) -> u32 {
    m.exp(2) + m.exp(3) + m.exp(4)
}

pub fn classify_family(fam: &DestabilizingFamily) -> Classification {
    let order = fam.members.iter().map(line_order).min().unwrap_or(0);
    let x0d = Monomial::projective([fam.degree, 0, 0, 0, 0]);
    Classification {
        tag: if order >= 2 {
            SingularityTag::LineSingular
        } else {
            SingularityTag::IsolatedAtP0
        },
        line_vanishing_order: order,
        p0_on_surface: !fam.contains(&x0d),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusVerdict {
    TorusStable,
    TorusNonStable,
    TorusUnstable,
}

impl TorusVerdict {
    pub fn is_non_stable(self) -> bool {
        self != TorusVerdict::TorusStable
    }

    pub fn is_unstable(self) -> bool {
        self == TorusVerdict::TorusUnstable
    }
}

impl fmt::Display for TorusVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorusVerdict::TorusStable => "torus-stable",
            TorusVerdict::TorusNonStable => "torus-non-stable",
            TorusVerdict::TorusUnstable => "torus-unstable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub family: DestabilizingFamily,
    pub classification: Classification,
}

/// Stability of a form in the given coordinates, with respect to the maximal
/// torus of `SO(5)` only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub degree: u32,
    /// The input after reduction modulo the quadric.
    pub reduced: Polynomial,
    pub verdict: TorusVerdict,
    /// Non-strict witnesses first, then strict, each by slope.
    pub witnesses: Vec<Witness>,
}

pub fn check_torus_stability(f: &Polynomial, d: u32) -> Result<StabilityReport> {
    check_degree(d)?;
    f.require_arity(Arity::Projective)?;
    let found = f.homogeneous_degree()?;
    if found != d {
        return Err(Error::DegreeMismatch { expected: d, found });
    }
    let reduced = f.reduce_mod_quadric()?;
    if reduced.is_zero() {
        return Err(Error::Precondition(
            "form is a multiple of the quadric, so it cuts out no surface".into(),
        ));
    }
    let mut witnesses = Vec::new();
    let mut unstable = false;
    for strict in [false, true] {
        for family in enumerate_maximal_families(d, strict)? {
            if family.contains_support(&reduced) {
                unstable |= strict;
                let classification = classify_family(&family);
                witnesses.push(Witness {
                    family,
                    classification,
                });
            }
        }
    }
    let verdict = if unstable {
        TorusVerdict::TorusUnstable
    } else if !witnesses.is_empty() {
        TorusVerdict::TorusNonStable
    } else {
        TorusVerdict::TorusStable
    };
    Ok(StabilityReport {
        degree: d,
        reduced,
        verdict,
        witnesses,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub degree: u32,
    pub checked_slopes: Vec<NormalizedOnePs>,
    pub maximal_non_strict: Vec<NormalizedOnePs>,
    pub maximal_strict: Vec<NormalizedOnePs>,
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Slopes probed by [`verify_inclusion_lemmas`]: the sample slopes plus every
/// reduced `u/v` with `v <= d + 1` and `v <= u <= (d + 2) v`.
pub fn probe_slopes(d: u32) -> Result<Vec<NormalizedOnePs>> {
    let mut set: BTreeSet<(u64, u64)> = BTreeSet::new();
    let mut out = sample_slopes(d)?;
    let dd = u64::from(d);
    for v in 1..=dd + 1 {
        for u in v..=(dd + 2) * v {
            let l = NormalizedOnePs::new(u, v)?;
            if set.insert((l.u(), l.v())) {
                out.push(l);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn slope_cmp(l: &NormalizedOnePs, d: u32) -> Option<std::cmp::Ordering> {
    l.slope().map(|s| s.cmp(&BigRational::from_integer(d.into())))
}

fn check(name: &'static str, failures: Vec<String>, ok_detail: String) -> LemmaCheck {
    LemmaCheck {
        name,
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            ok_detail
        } else {
            failures.join("; ")
        },
    }
}

/// Verifies the inclusion statements about maximal destabilizing families
/// for degree `d`. Failures are reported, not raised.
pub fn verify_inclusion_lemmas(d: u32) -> Result<LemmaReport> {
    use std::cmp::Ordering::*;

    let basis = basis(d)?;
    let non_strict = enumerate_maximal_families(d, false)?;
    let strict = enumerate_maximal_families(d, true)?;
    let probes = probe_slopes(d)?;
    let dm1 = d - 1;
    let mut checks = Vec::new();

    let bad: Vec<String> = non_strict
        .iter()
        .filter(|f| f.slope != NormalizedOnePs::infinite() && slope_cmp(&f.slope, dm1) == Some(Greater))
        .map(|f| format!("maximal M_<=0 at slope {} exceeds {}", f.slope, dm1))
        .collect();
    checks.push(check(
        "maximal non-strict slopes are 1/0 or <= d-1",
        bad,
        format!("{} maximal families", non_strict.len()),
    ));

    let bad: Vec<String> = strict
        .iter()
        .filter(|f| {
            f.slope.v() == 0 || !(slope_cmp(&f.slope, dm1) == Some(Less) || slope_cmp(&f.slope, d) == Some(Equal))
        })
        .map(|f| format!("maximal M_<0 at slope {}", f.slope))
        .collect();
    checks.push(check(
        "maximal strict slopes are < d-1 or = d",
        bad,
        format!("{} maximal families", strict.len()),
    ));

    let per_probe: Vec<(NormalizedOnePs, DestabilizingFamily, DestabilizingFamily)> = probes
        .par_iter()
        .map(|&l| (l, build_family(&basis, d, l, false), build_family(&basis, d, l, true)))
        .collect();

    let top_non_strict = build_family(&basis, d, NormalizedOnePs::new(u64::from(dm1), 1)?, false);
    let top_strict = build_family(&basis, d, NormalizedOnePs::new(u64::from(d), 1)?, true);

    let bad: Vec<String> = per_probe
        .iter()
        .filter(|(l, ns, _)| l.v() != 0 && slope_cmp(l, dm1) == Some(Greater) && !ns.is_subset_of(&top_non_strict))
        .map(|(l, _, _)| format!("M_<=0 at {l} not inside M_<=0 at {dm1}/1"))
        .collect();
    checks.push(check(
        "non-strict families beyond d-1 embed into slope d-1",
        bad,
        "all probes beyond d-1 embed".into(),
    ));

    let bad: Vec<String> = per_probe
        .iter()
        .filter(|(l, _, s)| (l.v() == 0 || slope_cmp(l, dm1) != Some(Less)) && !s.is_subset_of(&top_strict))
        .map(|(l, _, _)| format!("M_<0 at {l} not inside M_<0 at {d}/1"))
        .collect();
    checks.push(check(
        "strict families at slopes >= d-1 embed into slope d",
        bad,
        "all probes at or beyond d-1 embed".into(),
    ));

    let bad: Vec<String> = per_probe
        .iter()
        .flat_map(|(l, ns, s)| {
            let mut out = Vec::new();
            if !non_strict.iter().any(|m| ns.is_subset_of(m)) {
                out.push(format!("M_<=0 at {l} is in no maximal family"));
            }
            if !strict.iter().any(|m| s.is_subset_of(m)) {
                out.push(format!("M_<0 at {l} is in no maximal family"));
            }
            out
        })
        .collect();
    checks.push(check(
        "every probed family lies in a maximal family",
        bad,
        format!("{} probe slopes", probes.len()),
    ));

    let mut monotone: Vec<&(NormalizedOnePs, DestabilizingFamily, DestabilizingFamily)> = per_probe
        .iter()
        .filter(|(l, _, _)| l.v() != 0 && slope_cmp(l, dm1) != Some(Less))
        .collect();
    monotone.sort_by_key(|(l, _, _)| *l);
    let bad: Vec<String> = monotone
        .windows(2)
        .filter(|w| !w[0].2.is_subset_of(&w[1].2))
        .map(|w| format!("M_<0 at {} not inside M_<0 at {}", w[0].0, w[1].0))
        .collect();
    checks.push(check(
        "strict families grow with the slope beyond d-1",
        bad,
        format!("{} ordered probes", monotone.len()),
    ));

    let bad: Vec<String> = per_probe
        .iter()
        .filter(|(_, ns, s)| !s.is_subset_of(ns))
        .map(|(l, _, _)| format!("M_<0 not inside M_<=0 at {l}"))
        .collect();
    checks.push(check("strict family inside non-strict family", bad, "all probes".into()));

    Ok(LemmaReport {
        degree: d,
        checked_slopes: probes,
        maximal_non_strict: non_strict.iter().map(|f| f.slope).collect(),
        maximal_strict: strict.iter().map(|f| f.slope).collect(),
        checks,
    })
}
