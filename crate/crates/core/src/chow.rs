//! Chow weight of the complete intersection `S = Q ∩ Y` under a diagonal
//! 1-PS of `SL(5)`, from the hypersurface weights:
//! `mu(S) = deg(Y) mu(Q) + deg(Q) mu(Y)`.

use std::fmt;

use crate::error::Result;
use crate::poly::{Arity, Polynomial};
use crate::weights::{mu, DiagonalOnePs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChowVerdictKind {
    /// The combined weight is negative: `S` is Chow unstable.
    ChowUnstableWitness,
    /// A single subgroup with non-negative weight proves nothing.
    NoConclusion,
}

impl fmt::Display for ChowVerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChowVerdictKind::ChowUnstableWitness => "chow-unstable-witness",
            ChowVerdictKind::NoConclusion => "no-conclusion",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowVerdict {
    pub mu_q: i64,
    pub mu_y: i64,
    pub deg_q: u32,
    pub deg_y: u32,
    pub combined: i64,
    pub verdict: ChowVerdictKind,
}

pub fn ci_chow_weight(q: &Polynomial, f: &Polynomial, chi: &DiagonalOnePs) -> Result<ChowVerdict> {
    q.require_arity(Arity::Projective)?;
    f.require_arity(Arity::Projective)?;
    let deg_q = q.homogeneous_degree()?;
    let deg_y = f.homogeneous_degree()?;
    let mu_q = mu(chi, q)?;
    let mu_y = mu(chi, f)?;
    let combined = i64::from(deg_y) * mu_q + i64::from(deg_q) * mu_y;
    Ok(ChowVerdict {
        mu_q,
        mu_y,
        deg_q,
        deg_y,
        combined,
        verdict: if combined < 0 {
            ChowVerdictKind::ChowUnstableWitness
        } else {
            ChowVerdictKind::NoConclusion
        },
    })
}
