//! Log canonical thresholds of the family curves, by case analysis on the
//! residual one-variable polynomial in the chart y = 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{max_root_multiplicity, r, Rat, UniPoly};
use crate::vgit::{FamilyPoint, Parity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    ANonzero,
    AZeroA0Nonzero,
    Reducible,
    AllZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveProfile {
    /// max{i : a_i ≠ 0}; −1 when every a_i vanishes.
    pub t: i64,
    pub m0: Option<usize>,
    pub case_tag: CaseTag,
    pub mult: u32,
    pub sum_mult: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LctReport {
    pub lct: Rat,
    pub profile: CurveProfile,
    pub singularity: Option<String>,
    #[serde(rename = "is_Dss")]
    pub is_dss: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub along_h: Option<Rat>,
}

/// q(X) with X = x² (odd) or u (even), after completing the square and
/// removing the power of X at the origin.
pub fn residual_polynomial(p: &FamilyPoint) -> Result<UniPoly> {
    if p.is_zero() {
        return Err(Error::EmptyCurve);
    }
    let t = match p.t() {
        Some(t) => t,
        None => return Ok(UniPoly::constant(-(&p.a * &p.a) / Rat::int(4))),
    };
    let start = p.m0().map(|m0| m0 + 1).unwrap_or(0);
    let mut coeffs = vec![Rat::zero(); t + 2];
    for i in start..=t {
        coeffs[t - i] = p.ai[i].clone();
    }
    coeffs[t + 1] = -(&p.a * &p.a) / Rat::int(4);
    Ok(UniPoly::new(coeffs))
}

pub fn curve_profile(p: &FamilyPoint) -> Result<CurveProfile> {
    let q = residual_polynomial(p)?;
    let mult = max_root_multiplicity(&q, true)?;
    let t = p.t().map(|t| t as i64).unwrap_or(-1);
    let case_tag = if t < 0 {
        CaseTag::AllZero
    } else if !p.a.is_zero() {
        CaseTag::ANonzero
    } else if !p.ai[0].is_zero() {
        CaseTag::AZeroA0Nonzero
    } else {
        CaseTag::Reducible
    };
    let sum_mult = q.degree().unwrap_or(0) as u32;
    if case_tag == CaseTag::ANonzero {
        assert_eq!(sum_mult as i64, t + 1, "multiplicities must sum to t+1");
    }
    Ok(CurveProfile { t, m0: p.m0(), case_tag, mult, sum_mult })
}

/// (m+2)/(2m) for m ≥ 2, else 1.
fn mult_threshold(m: u32) -> Rat {
    if m >= 2 {
        r(m as i64 + 2, 2 * m as i64)
    } else {
        Rat::one()
    }
}

/// Rescale (s1, s2) taking a D_ss-type curve to the normal form with a = −2
/// and root at X = 1.
pub fn dss_rescale(p: &FamilyPoint) -> Result<Option<(Rat, Rat)>> {
    if !lct_pair(p)?.is_dss {
        return Ok(None);
    }
    let q = residual_polynomial(p)?;
    let deg = q.degree().expect("nonconstant residual");
    let b = -q.coeff(deg - 1) / (Rat::int(deg as i64) * q.lead());
    let s1 = b.recip();
    let s2 = -(&p.a * &b) / Rat::int(2);
    Ok(Some((s1, s2)))
}

/// The curve f(x, s1·y, s2·z)/(s1·s2²).
pub fn torus_rescale(p: &FamilyPoint, s1: &Rat, s2: &Rat) -> FamilyPoint {
    let mut q = p.clone();
    q.a = &p.a / (s1 * s2);
    let s2sq = s2 * s2;
    for (i, c) in q.ai.iter_mut().enumerate() {
        *c = &*c * s1.pow(i as i32 - 1) / &s2sq;
    }
    q
}

pub fn lct_pair(p: &FamilyPoint) -> Result<LctReport> {
    let profile = curve_profile(p)?;
    let n = p.n as i64;
    let t = profile.t;
    let mut off_h = mult_threshold(profile.mult);
    if let (CaseTag::Reducible, Some(m0)) = (profile.case_tag, profile.m0) {
        let m0 = m0 as i64;
        off_h = off_h.min(r(m0 + 2, 2 * m0 + 2));
    }
    let top = n + 3;
    let is_dss = profile.case_tag == CaseTag::ANonzero && t == top && profile.mult as i64 == n + 4;
    let singularity = (profile.mult >= 2).then(|| format!("A{}", profile.mult - 1));
    let (lct, along_h) = match p.parity() {
        Parity::Odd => {
            let mut lct = off_h;
            if t < n + 2 {
                lct = lct.min(r(n + 4 - t, 2 * n + 6 - 2 * t));
            }
            (lct, None)
        }
        Parity::Even => {
            let l = n / 2;
            let along = if t >= 2 * l + 2 { Rat::one() } else { r(2 * l + 4 - t, 4 * l + 6 - 2 * t) };
            (off_h.min(along.clone()), Some(along))
        }
    };
    Ok(LctReport { lct, profile, singularity, is_dss, along_h })
}

/// D_ss test without a squarefree decomposition: with a ≠ 0 and t = n+3 the
/// residual polynomial has degree n+4 and no root at 0, so it must be
/// lead·(X − r)^{n+4} with r fixed by the subleading coefficient.
pub fn is_dss(p: &FamilyPoint) -> bool {
    if p.a.is_zero() || p.t() != Some(p.n as usize + 3) {
        return false;
    }
    let q = residual_polynomial(p).expect("nonzero point");
    let d = q.degree().expect("nonconstant residual");
    let lead = q.lead();
    let root = -q.coeff(d - 1) / (Rat::int(d as i64) * &lead);
    UniPoly::new(vec![-root, Rat::one()]).pow(d as u32).scale(&lead) == q
}

pub fn log_canonical_at(p: &FamilyPoint, w: &Rat) -> Result<bool> {
    let rep = lct_pair(p)?;
    Ok(*w <= rep.lct)
}
