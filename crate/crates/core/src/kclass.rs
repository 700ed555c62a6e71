//! K-stability classification of the family pairs, wall degenerations,
//! last-wall replacements and the hypersurface reduction.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{r, shift_substitute, Affine, Rat, UniPoly};
use crate::lct::is_dss;
use crate::vgit::{check_domain, domain_end, last_wall_index, wall, xi, FamilyPoint, OneParamSubgroup, Parity};
use crate::wps::{beta_monomial, s_invariant_divisor, LogBoundary, MonomialValuation, WPPlane};

/// An exact set of weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WSet {
    Empty,
    Singleton { w: Rat },
    Interval { lo: Rat, hi: Rat, lo_closed: bool, hi_closed: bool },
}

impl WSet {
    pub fn closed(lo: Rat, hi: Rat) -> WSet {
        WSet::Interval { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn open(lo: Rat, hi: Rat) -> WSet {
        WSet::Interval { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn contains(&self, w: &Rat) -> bool {
        match self {
            WSet::Empty => false,
            WSet::Singleton { w: s } => s == w,
            WSet::Interval { lo, hi, lo_closed, hi_closed } => {
                (if *lo_closed { lo <= w } else { lo < w }) && (if *hi_closed { w <= hi } else { w < hi })
            }
        }
    }

    pub fn endpoints(&self) -> Vec<Rat> {
        match self {
            WSet::Empty => vec![],
            WSet::Singleton { w } => vec![w.clone()],
            WSet::Interval { lo, hi, .. } => vec![lo.clone(), hi.clone()],
        }
    }
}

impl fmt::Display for WSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WSet::Empty => write!(f, "empty"),
            WSet::Singleton { w } => write!(f, "{{{}}}", w),
            WSet::Interval { lo, hi, lo_closed, hi_closed } => write!(
                f,
                "{}{}, {}{}",
                if *lo_closed { "[" } else { "(" },
                lo,
                hi,
                if *hi_closed { "]" } else { ")" }
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub ss: WSet,
    pub ps: WSet,
    pub row: Option<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

impl StabilityVerdict {
    fn empty(notes: &str) -> StabilityVerdict {
        StabilityVerdict { ss: WSet::Empty, ps: WSet::Empty, row: None, notes: notes.into() }
    }
}

/// Row lookup in the coefficient tables.
pub fn kss_domain(p: &FamilyPoint) -> StabilityVerdict {
    let n = p.n;
    let top = n as usize + 3;
    let last = last_wall_index(n) as usize;
    let t = match p.t() {
        Some(t) => t,
        None => return StabilityVerdict::empty("all a_i vanish"),
    };
    if is_dss(p) {
        return StabilityVerdict {
            ss: WSet::closed(wall(n, 0), xi(n)),
            ps: WSet::open(wall(n, 0), xi(n)),
            row: Some("a".into()),
            notes: String::new(),
        };
    }
    // lowest occupied slot, with a counted as index −1
    let s: i64 = if !p.a.is_zero() { -1 } else { p.ai.iter().position(|c| !c.is_zero()).unwrap() as i64 };
    let lo_idx = top - t;
    if s == t as i64 {
        if lo_idx <= last + 1 && wall(n, lo_idx as u64) == domain_end(n) {
            let mut v = StabilityVerdict::empty("polystable only at the excluded boundary");
            v.row = Some("j".into());
            return v;
        }
        if lo_idx > last {
            return StabilityVerdict::empty("too few nonzero coefficients");
        }
        let w = wall(n, lo_idx as u64);
        return StabilityVerdict {
            ss: WSet::Singleton { w: w.clone() },
            ps: WSet::Singleton { w },
            row: Some("j".into()),
            notes: String::new(),
        };
    }
    if lo_idx > last {
        return StabilityVerdict::empty("t too small");
    }
    let lo = wall(n, lo_idx as u64);
    let hi_idx = (top as i64 - s) as usize;
    let full = t == top;
    if hi_idx > last {
        let row = match (full, !p.a.is_zero(), !p.ai[0].is_zero()) {
            (true, true, _) => "b",
            (true, false, true) => "c",
            (true, false, false) => "d",
            (false, true, _) => "f",
            (false, false, true) => "g",
            (false, false, false) => "h",
        };
        let end = domain_end(n);
        StabilityVerdict {
            ss: WSet::Interval { lo: lo.clone(), hi: end.clone(), lo_closed: true, hi_closed: false },
            ps: WSet::open(lo, end),
            row: Some(row.into()),
            notes: String::new(),
        }
    } else {
        let hi = wall(n, hi_idx as u64);
        StabilityVerdict {
            ss: WSet::closed(lo.clone(), hi.clone()),
            ps: WSet::open(lo, hi),
            row: Some(if full { "e" } else { "i" }.into()),
            notes: String::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KVerdict {
    Unstable,
    StrictlySemistable,
    Polystable,
    Stable,
}

impl KVerdict {
    pub fn semistable(self) -> bool {
        self != KVerdict::Unstable
    }

    pub fn polystable(self) -> bool {
        matches!(self, KVerdict::Polystable | KVerdict::Stable)
    }
}

impl fmt::Display for KVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KVerdict::Unstable => "unstable",
            KVerdict::StrictlySemistable => "strictly_semistable",
            KVerdict::Polystable => "polystable",
            KVerdict::Stable => "stable",
        })
    }
}

pub fn classify_at(p: &FamilyPoint, w: &Rat) -> Result<KVerdict> {
    check_domain(p.n, w)?;
    let v = kss_domain(p);
    Ok(if v.ps.contains(w) {
        if v.row.as_deref() == Some("j") {
            KVerdict::Polystable
        } else {
            KVerdict::Stable
        }
    } else if v.ss.contains(w) {
        KVerdict::StrictlySemistable
    } else {
        KVerdict::Unstable
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    MonomialDe,
    DssPair,
    W0D0,
    W0D1,
    WprimeH0D0,
    WprimeH0D1,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolystablePair {
    pub kind: PairKind,
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Rat>>,
    pub plane: WPPlane,
    pub equation: String,
}

impl PolystablePair {
    pub fn monomial(n: u64, e: u64) -> Result<PolystablePair> {
        let lo = if n % 2 == 1 { (n + 3) / 2 } else { n / 2 + 2 };
        if e < lo || e > n + 3 {
            return Err(Error::OutOfDomain(format!("e = {} outside [{}, {}]", e, lo, n + 3)));
        }
        let (plane, equation) = match Parity::of(n) {
            Parity::Odd => (WPPlane::w_odd(n)?, format!("z^2*y + x^{}*y^{}", 2 * n + 6 - 2 * e, e)),
            Parity::Even => (WPPlane::w_even(n / 2)?, format!("z^2*y + u^{}*y^{}", n + 3 - e, e)),
        };
        Ok(PolystablePair { kind: PairKind::MonomialDe, n, e: Some(e), b: None, plane, equation })
    }

    pub fn point(&self) -> Option<FamilyPoint> {
        match self.kind {
            PairKind::MonomialDe => FamilyPoint::monomial(self.n, self.e? as usize).ok(),
            PairKind::DssPair => Some(FamilyPoint::dss(self.n)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degeneration {
    pub pair: PolystablePair,
    pub lambda: Option<OneParamSubgroup>,
    pub limit: FamilyPoint,
}

/// Degeneration of a point of the stratum contracted at wall i to the monomial curve D_e, e = n+3−i.
pub fn wall_degeneration(p: &FamilyPoint, wall_index: u64) -> Result<Degeneration> {
    let n = p.n;
    if wall_index > last_wall_index(n) || wall(n, wall_index) >= domain_end(n) {
        return Err(Error::OutOfDomain(format!("no wall w{} for n = {}", wall_index, n)));
    }
    let e = (n + 3 - wall_index) as usize;
    let pair = PolystablePair::monomial(n, e as u64)?;
    if p.ai[e].is_zero() {
        return Err(Error::NotContractedHere(format!("a{} vanishes", e)));
    }
    let earlier = !p.a.is_zero() || p.ai[..e].iter().any(|c| !c.is_zero());
    let later = p.ai[e + 1..].iter().any(|c| !c.is_zero());
    let lambda = match (earlier, later) {
        (true, false) => Some(OneParamSubgroup { d: -2, b: -(e as i64 - 1) }),
        (false, true) => Some(OneParamSubgroup { d: 2, b: e as i64 - 1 }),
        (false, false) => None,
        (true, true) => {
            return Err(Error::NotContractedHere(format!(
                "nonzero coefficients on both sides of a{}",
                e
            )))
        }
    };
    let limit = match lambda {
        Some(lam) => p.limit(lam).expect("limit exists for the chosen subgroup"),
        None => p.clone(),
    };
    Ok(Degeneration { pair, lambda, limit })
}

pub fn last_wall_replacement(n: u64) -> Result<PolystablePair> {
    if n == 0 {
        return Err(Error::Malformed("n must be positive".into()));
    }
    Ok(match Parity::of(n) {
        Parity::Odd => PolystablePair {
            kind: PairKind::W0D0,
            n,
            e: None,
            b: None,
            plane: WPPlane::w0(n)?,
            equation: format!("x2^2 - x0*x1^{}", n + 4),
        },
        Parity::Even => PolystablePair {
            kind: PairKind::WprimeH0D0,
            n,
            e: None,
            b: None,
            plane: WPPlane::w_even(n / 2)?,
            equation: format!("H0: y = 0; D0: z^2*y - z*u^{}", n / 2 + 2),
        },
    })
}

/// Monomial coefficient map on ℙ(1, n+2, (n+3)²/2), exponents (x0, x1, x2).
pub type PlaneCurve = BTreeMap<[u32; 3], Rat>;

/// Reduces a curve of degree (n+3)² on W₀ to the D₁ form
/// x2² − x0·x1^{n+4} + Σ_{i≤n+2} b_i x0^{(n+3)²−(n+2)i} x1^i and returns the b_i.
pub fn d1_normal_form(n: u64, curve: &PlaneCurve) -> Result<Vec<Rat>> {
    if n.is_multiple_of(2) {
        return Err(Error::NotInD1Family("D1 normal form needs odd n".into()));
    }
    let plane = WPPlane::w0(n)?;
    let deg = (n + 3) * (n + 3);
    let mut sq = Rat::zero();
    let mut lin: BTreeMap<u32, Rat> = BTreeMap::new();
    let mut rest: BTreeMap<u32, Rat> = BTreeMap::new();
    for (m, c) in curve {
        if c.is_zero() {
            continue;
        }
        let d: u64 = m.iter().zip(plane.weights).map(|(&e, w)| e as u64 * w).sum();
        if d != deg {
            return Err(Error::Malformed(format!("monomial {:?} has degree {} not {}", m, d, deg)));
        }
        // x0 is determined by the x1 exponent once x2 is fixed
        match m[2] {
            2 => sq = c.clone(),
            1 => *lin.entry(m[1]).or_insert_with(Rat::zero) += c,
            _ => *rest.entry(m[1]).or_insert_with(Rat::zero) += c,
        }
    }
    if sq.is_zero() {
        return Err(Error::NotInD1Family("no x2^2 term".into()));
    }
    let top = n as usize + 4;
    let to_poly = |m: &BTreeMap<u32, Rat>| {
        let mut cs = vec![Rat::zero(); top + 1];
        for (&i, c) in m {
            cs[i as usize] = c / &sq;
        }
        UniPoly::new(cs)
    };
    let g = to_poly(&lin);
    let p = &to_poly(&rest) - &(&g * &g).scale(&r(1, 4));
    let c_top = p.coeff(top);
    if c_top.is_zero() {
        return Err(Error::NotInD1Family(format!("no x0*x1^{} term after completing the square", top)));
    }
    let rs = -c_top.recip();
    let scaled = UniPoly::new(
        (0..=top)
            .map(|i| p.coeff(i) * rs.pow((deg as i64 - (n as i64 + 2) * i as i64) as i32))
            .collect(),
    );
    let shifted = shift_substitute(&scaled, &(scaled.coeff(top - 1) / Rat::int(top as i64)));
    debug_assert!(shifted.coeff(top - 1).is_zero());
    Ok((0..=n as usize + 2).map(|i| shifted.coeff(i)).collect())
}

/// K-stability of the last-wall pair with D₁ coefficients b (D₀ when b = 0).
pub fn d1_stability(n: u64, b: &[Rat], w: &Rat) -> Result<KVerdict> {
    check_domain(n, w)?;
    let xi = xi(n);
    if b.iter().all(Rat::is_zero) {
        return Ok(if *w == xi { KVerdict::Polystable } else { KVerdict::Unstable });
    }
    Ok(match w.cmp(&xi) {
        std::cmp::Ordering::Less => KVerdict::Unstable,
        std::cmp::Ordering::Equal => KVerdict::StrictlySemistable,
        std::cmp::Ordering::Greater => KVerdict::Stable,
    })
}

/// Polynomial in (t, x, y, z) over ℚ, exponent arrays in that order.
/// Serialized as a list of `[[e_t, e_x, e_y, e_z], "p/q"]` terms.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<([u32; 4], Rat)>", into = "Vec<([u32; 4], Rat)>")]
pub struct Poly4(pub BTreeMap<[u32; 4], Rat>);

impl From<Vec<([u32; 4], Rat)>> for Poly4 {
    fn from(terms: Vec<([u32; 4], Rat)>) -> Poly4 {
        let mut p = Poly4::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }
}

impl From<Poly4> for Vec<([u32; 4], Rat)> {
    fn from(p: Poly4) -> Self {
        p.0.into_iter().collect()
    }
}

impl Poly4 {
    pub fn zero() -> Poly4 {
        Poly4::default()
    }

    pub fn term(c: Rat, e: [u32; 4]) -> Poly4 {
        let mut p = Poly4::zero();
        p.add_term(e, c);
        p
    }

    pub fn var(i: usize) -> Poly4 {
        let mut e = [0; 4];
        e[i] = 1;
        Poly4::term(Rat::one(), e)
    }

    pub fn add_term(&mut self, e: [u32; 4], c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(e).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn coeff(&self, e: [u32; 4]) -> Rat {
        self.0.get(&e).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Poly4) -> Poly4 {
        let mut out = self.clone();
        for (e, c) in &o.0 {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Poly4 {
        let mut out = Poly4::zero();
        for (e, c) in &self.0 {
            out.add_term(*e, c * s);
        }
        out
    }

    pub fn mul(&self, o: &Poly4) -> Poly4 {
        let mut out = Poly4::zero();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly4 {
        let mut out = Poly4::term(Rat::one(), [0; 4]);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Replaces variable i by the polynomial q.
    pub fn substitute(&self, i: usize, q: &Poly4) -> Poly4 {
        let mut powers: Vec<Poly4> = vec![Poly4::term(Rat::one(), [0; 4])];
        let mut out = Poly4::zero();
        for (e, c) in &self.0 {
            while powers.len() <= e[i] as usize {
                let next = powers.last().unwrap().mul(q);
                powers.push(next);
            }
            let mut rest = *e;
            rest[i] = 0;
            out = out.add(&powers[e[i] as usize].mul(&Poly4::term(c.clone(), rest)));
        }
        out
    }

    /// Sum of terms whose exponent of variable i equals k, with that variable removed.
    pub fn slice(&self, i: usize, k: u32) -> Poly4 {
        let mut out = Poly4::zero();
        for (e, c) in &self.0 {
            if e[i] == k {
                let mut f = *e;
                f[i] = 0;
                out.add_term(f, c.clone());
            }
        }
        out
    }

    pub fn weighted_degrees(&self, weights: [u64; 4]) -> Vec<u64> {
        self.0.keys().map(|e| e.iter().zip(weights).map(|(&a, w)| a as u64 * w).sum()).collect()
    }
}

/// Weights of (t, x, y, z) in ℙ(1,2,n+2,n+3).
pub fn hypersurface_weights(n: u64) -> [u64; 4] {
    [n + 3, 1, 2, n + 2]
}

/// The family curve as a polynomial in (x, y, z) with t absent.
pub fn family_polynomial(p: &FamilyPoint) -> Poly4 {
    let n = p.n as u32;
    let mut f = Poly4::term(Rat::one(), [0, 0, 1, 2]);
    f.add_term([0, n + 4, 0, 1], p.a.clone());
    for (i, c) in p.ai.iter().enumerate() {
        f.add_term([0, 2 * n + 6 - 2 * i as u32, i as u32, 0], c.clone());
    }
    f
}

/// Coordinate changes used by `reduce_hypersurface`, enough to rebuild the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub c_t: Rat,
    pub l: Poly4,
    pub c_zy: Rat,
    pub beta: Rat,
    pub h1: Poly4,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub point: FamilyPoint,
    pub trace: ReductionTrace,
}

/// Brings t² + t·L + F(x,y,z) of degree 2(n+3) to the family normal form.
pub fn reduce_hypersurface(n: u64, f: &Poly4) -> Result<Reduction> {
    let weights = hypersurface_weights(n);
    if f.weighted_degrees(weights).iter().any(|&d| d != 2 * (n + 3)) {
        return Err(Error::Malformed(format!("input is not homogeneous of degree {}", 2 * (n + 3))));
    }
    let c_t = f.coeff([2, 0, 0, 0]);
    if c_t.is_zero() {
        return Err(Error::MissingTSquared);
    }
    let f1 = f.scale(&c_t.recip());
    let l = f1.slice(0, 1);
    let big_f = f1.slice(0, 0).add(&l.mul(&l).scale(&r(-1, 4)));
    let c_zy = big_f.coeff([0, 0, 1, 2]);
    if c_zy.is_zero() {
        return Err(Error::OutsideFamily("z^2*y coefficient vanishes".into()));
    }
    let f2 = big_f.scale(&c_zy.recip());
    let beta = f2.coeff([0, 2, 0, 2]);
    let y_shift = Poly4::var(2).add(&Poly4::term(-beta.clone(), [0, 2, 0, 0]));
    let g1 = f2.substitute(2, &y_shift);
    let h = g1.slice(3, 1);
    let mut h1 = Poly4::zero();
    for (e, c) in &h.0 {
        if e[2] > 0 {
            h1.add_term([e[0], e[1], e[2] - 1, e[3]], c.clone());
        }
    }
    let z_shift = Poly4::var(3).add(&h1.scale(&r(-1, 2)));
    let g2 = g1.substitute(3, &z_shift);
    let nn = n as u32;
    let a = g2.coeff([0, nn + 4, 0, 1]);
    let ai: Vec<Rat> = (0..=nn + 3).map(|i| g2.coeff([0, 2 * nn + 6 - 2 * i, i, 0])).collect();
    let point = FamilyPoint::new(n, a, ai)?;
    debug_assert_eq!(family_polynomial(&point), g2);
    Ok(Reduction { point, trace: ReductionTrace { c_t, l, c_zy, beta, h1 } })
}

/// Inverts the recorded substitutions.
pub fn reembed(red: &Reduction) -> Poly4 {
    let tr = &red.trace;
    let g2 = family_polynomial(&red.point);
    let g1 = g2.substitute(3, &Poly4::var(3).add(&tr.h1.scale(&r(1, 2))));
    let f2 = g1.substitute(2, &Poly4::var(2).add(&Poly4::term(tr.beta.clone(), [0, 2, 0, 0])));
    let t_part = Poly4::var(0).add(&tr.l.scale(&r(1, 2))).pow(2);
    t_part.add(&f2.scale(&tr.c_zy)).scale(&tr.c_t)
}

/// A vertical divisor check: degree k of the divisor class and its log discrepancy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorBeta {
    pub label: String,
    pub degree: Rat,
    pub a: Rat,
    pub s: Rat,
    pub beta: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityOneReport {
    pub pair: PolystablePair,
    pub w: Rat,
    pub torus_beta: Rat,
    pub horizontal: Vec<DivisorBeta>,
    pub vertical: Vec<DivisorBeta>,
    pub passed: bool,
}

/// Boundary, torus valuation, its boundary values and the vertical divisors
/// (label, degree, A as c0 + c1·w) of a complexity-one pair.
struct ComplexityOneData {
    plane: WPPlane,
    boundary: Box<dyn Fn(&Rat) -> LogBoundary>,
    torus: MonomialValuation,
    torus_values: Box<dyn Fn() -> Vec<Rat>>,
    horizontal: Vec<(String, Rat, Affine)>,
    vertical: Vec<(String, Rat, Affine)>,
}

fn one_minus_w() -> Affine {
    Affine::new(Rat::one(), Rat::int(-1))
}

fn constant(c: Rat) -> Affine {
    Affine::constant(c)
}

fn complexity_one_data(cfg: &PolystablePair) -> Result<ComplexityOneData> {
    let n = cfg.n;
    let ni = n as i64;
    match cfg.kind {
        PairKind::MonomialDe => {
            let e = cfg.e.ok_or_else(|| Error::Malformed("monomial pair needs e".into()))?;
            let ei = e as i64;
            let i = ni + 3 - ei;
            let mut vertical = Vec::new();
            let mut horizontal = Vec::new();
            match Parity::of(n) {
                Parity::Odd => {
                    let plane = WPPlane::w_odd(n)?;
                    let torus = MonomialValuation::new(&plane, 1, Rat::one(), Rat::int(i))?;
                    let mons = [[0u32, 1, 2], [2 * (n as u32 + 3 - e as u32), e as u32, 0]];
                    let t2 = torus.clone();
                    let deg = Rat::int(2 * ni + 6);
                    vertical.push(("H_y".into(), Rat::int(2), one_minus_w()));
                    let hx = ("H_x".to_string(), Rat::one(), constant(Rat::one()));
                    if e == n + 3 {
                        horizontal.push(hx);
                    } else {
                        vertical.push(hx);
                    }
                    vertical.push(("H_z".into(), Rat::int(ni + 2), constant(Rat::one())));
                    if e % 2 == 1 {
                        vertical.push(("z + i*x^a*y^b".into(), Rat::int(ni + 2), one_minus_w()));
                        vertical.push(("z - i*x^a*y^b".into(), Rat::int(ni + 2), one_minus_w()));
                        vertical.push(("generic orbit".into(), Rat::int(ni + 2), constant(Rat::one())));
                    } else {
                        vertical.push(("z^2 + x^a*y^(e-1)".into(), Rat::int(2 * ni + 4), one_minus_w()));
                        vertical.push(("generic orbit".into(), Rat::int(2 * ni + 4), constant(Rat::one())));
                    }
                    Ok(ComplexityOneData {
                        plane,
                        boundary: Box::new(move |w| LogBoundary::unchecked(&[(deg.clone(), w.clone())])),
                        torus,
                        torus_values: Box::new(move || vec![t2.value_of_poly(&mons).unwrap()]),
                        horizontal,
                        vertical,
                    })
                }
                Parity::Even => {
                    let l = ni / 2;
                    let plane = WPPlane::w_even(n / 2)?;
                    let torus = MonomialValuation::new(&plane, 1, Rat::int(2), Rat::int(i))?;
                    let mons = [[0u32, 1, 2], [n as u32 + 3 - e as u32, e as u32, 0]];
                    let t2 = torus.clone();
                    let deg = Rat::int(2 * l + 3);
                    vertical.push(("H_y".into(), Rat::one(), one_minus_w()));
                    let hu = ("H".to_string(), Rat::one(), constant(r(1, 2)));
                    if e == n + 3 {
                        horizontal.push(hu);
                    } else {
                        vertical.push(hu);
                    }
                    vertical.push(("H_z".into(), Rat::int(l + 1), constant(Rat::one())));
                    if e % 2 == 0 {
                        vertical.push(("z^2 + u^a*y^(e-1)".into(), Rat::int(2 * l + 2), one_minus_w()));
                        vertical.push(("generic orbit".into(), Rat::int(2 * l + 2), constant(Rat::one())));
                    } else {
                        vertical.push(("z + i*u^a*y^b".into(), Rat::int(l + 1), one_minus_w()));
                        vertical.push(("z - i*u^a*y^b".into(), Rat::int(l + 1), one_minus_w()));
                        vertical.push(("generic orbit".into(), Rat::int(l + 1), constant(Rat::one())));
                    }
                    Ok(ComplexityOneData {
                        plane,
                        boundary: Box::new(move |w| {
                            LogBoundary::unchecked(&[(Rat::one(), r(1, 2)), (deg.clone(), w.clone())])
                        }),
                        torus,
                        torus_values: Box::new(move || vec![Rat::int(2), t2.value_of_poly(&mons).unwrap()]),
                        horizontal,
                        vertical,
                    })
                }
            }
        }
        PairKind::W0D0 => {
            let plane = WPPlane::w0(n)?;
            let torus = MonomialValuation::new(&plane, 0, Rat::int(2), Rat::int(ni + 4))?;
            let mons = [[0u32, 0, 2], [1, n as u32 + 4, 0]];
            let t2 = torus.clone();
            let deg = Rat::int((ni + 3) * (ni + 3));
            let vertical = vec![
                ("x0 = 0".into(), Rat::one(), constant(Rat::one())),
                ("x1 = 0".into(), Rat::int(ni + 2), constant(Rat::one())),
                ("x2 = 0".into(), r((ni + 3) * (ni + 3), 2), constant(Rat::one())),
                ("D0".into(), deg.clone(), one_minus_w()),
                ("generic orbit".into(), deg.clone(), constant(Rat::one())),
            ];
            Ok(ComplexityOneData {
                plane,
                boundary: Box::new(move |w| LogBoundary::unchecked(&[(deg.clone(), w.clone())])),
                torus,
                torus_values: Box::new(move || vec![t2.value_of_poly(&mons).unwrap()]),
                horizontal: vec![],
                vertical,
            })
        }
        PairKind::WprimeH0D0 => {
            let l = ni / 2;
            let plane = WPPlane::w_even(n / 2)?;
            let torus = MonomialValuation::new(&plane, 2, Rat::one(), Rat::int(l + 2))?;
            let mons = [[0u32, 1, 2], [l as u32 + 2, 0, 1]];
            let t2 = torus.clone();
            let deg = Rat::int(2 * l + 3);
            let vertical = vec![
                ("u = 0".into(), Rat::one(), constant(Rat::one())),
                ("H0".into(), Rat::one(), constant(r(1, 2))),
                ("z = 0".into(), Rat::int(l + 1), one_minus_w()),
                ("z*y - u^(l+2)".into(), Rat::int(l + 2), one_minus_w()),
                ("generic orbit".into(), Rat::int(l + 2), constant(Rat::one())),
            ];
            Ok(ComplexityOneData {
                plane,
                boundary: Box::new(move |w| {
                    LogBoundary::unchecked(&[(Rat::one(), r(1, 2)), (deg.clone(), w.clone())])
                }),
                torus,
                torus_values: Box::new(move || vec![Rat::int(l + 2), t2.value_of_poly(&mons).unwrap()]),
                horizontal: vec![],
                vertical,
            })
        }
        other => Err(Error::OutOfDomain(format!("{:?} is not a complexity-one configuration", other))),
    }
}

fn torus_beta_affine(data: &ComplexityOneData) -> Affine {
    Affine::sample(|w| beta_monomial(&data.torus, &(data.boundary)(w), &(data.torus_values)()).unwrap())
}

pub fn complexity_one_critical_weight(cfg: &PolystablePair) -> Result<Rat> {
    let data = complexity_one_data(cfg)?;
    torus_beta_affine(&data).root().ok_or_else(|| Error::Degenerate("torus beta independent of w".into()))
}

pub fn verify_complexity_one_polystable(cfg: &PolystablePair, w: &Rat) -> Result<ComplexityOneReport> {
    let data = complexity_one_data(cfg)?;
    let boundary = (data.boundary)(w);
    let torus_beta = torus_beta_affine(&data).eval(w);
    let eval = |list: &[(String, Rat, Affine)]| -> Result<Vec<DivisorBeta>> {
        list.iter()
            .map(|(label, k, a)| {
                let a = a.eval(w);
                let s = s_invariant_divisor(&data.plane, &boundary, k)?;
                Ok(DivisorBeta { label: label.clone(), degree: k.clone(), beta: &a - &s, a, s })
            })
            .collect()
    };
    let mut horizontal = eval(&data.horizontal)?;
    // a torus-fixed divisor is the torus valuation itself
    for h in &mut horizontal {
        h.beta = torus_beta.clone();
    }
    let vertical = eval(&data.vertical)?;
    let passed = torus_beta.is_zero() && vertical.iter().all(|d| d.beta.is_positive());
    Ok(ComplexityOneReport { pair: cfg.clone(), w: w.clone(), torus_beta, horizontal, vertical, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(n: u64, a: i64, nz: &[(usize, i64)]) -> FamilyPoint {
        let mut p = FamilyPoint::zero(n);
        p.a = Rat::int(a);
        for &(i, c) in nz {
            p.ai[i] = Rat::int(c);
        }
        p
    }

    #[test]
    fn table_rows() {
        let v = kss_domain(&FamilyPoint::dss(3));
        assert_eq!(v.row.as_deref(), Some("a"));
        assert_eq!(v.ss, WSet::closed(r(5, 12), r(121, 204)));
        assert_eq!(v.ps, WSet::open(r(5, 12), r(121, 204)));
        let v = kss_domain(&pt(3, 1, &[(6, 1)]));
        assert_eq!(v.row.as_deref(), Some("b"));
        assert_eq!(v.ps, WSet::open(r(5, 12), r(2, 3)));
        assert!(v.ss.contains(&r(5, 12)) && !v.ss.contains(&r(2, 3)));
        let v = kss_domain(&pt(3, 0, &[(4, 1)]));
        assert_eq!(v.row.as_deref(), Some("j"));
        assert_eq!(v.ps, WSet::Singleton { w: r(11, 24) });
        let v = kss_domain(&pt(3, 0, &[(3, 1)]));
        assert_eq!((v.row.as_deref(), v.ps), (Some("j"), WSet::Empty));
        assert_eq!(v.notes, "polystable only at the excluded boundary");
        assert_eq!(kss_domain(&pt(3, 0, &[(0, 1), (6, 1)])).row.as_deref(), Some("c"));
        assert_eq!(kss_domain(&pt(3, 0, &[(2, 1), (6, 1)])).row.as_deref(), Some("d"));
        let v = kss_domain(&pt(3, 0, &[(4, 1), (6, 1)]));
        assert_eq!(v.row.as_deref(), Some("e"));
        assert_eq!(v.ss, WSet::closed(r(5, 12), r(11, 24)));
        assert_eq!(kss_domain(&pt(3, 1, &[(5, 1)])).row.as_deref(), Some("f"));
        assert_eq!(kss_domain(&pt(3, 0, &[(0, 1), (5, 1)])).row.as_deref(), Some("g"));
        assert_eq!(kss_domain(&pt(3, 0, &[(1, 1), (5, 1)])).row.as_deref(), Some("h"));
        assert_eq!(kss_domain(&pt(5, 0, &[(5, 1), (7, 1)])).row.as_deref(), Some("i"));
        assert_eq!(kss_domain(&pt(3, 1, &[(3, 1)])).ss, WSet::Empty);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_at(&FamilyPoint::dss(3), &r(1, 2)).unwrap(), KVerdict::Stable);
        let p6 = pt(3, 0, &[(6, 1)]);
        assert_eq!(classify_at(&p6, &r(5, 12)).unwrap(), KVerdict::Polystable);
        assert_eq!(classify_at(&p6, &r(1, 2)).unwrap(), KVerdict::Unstable);
        assert_eq!(classify_at(&FamilyPoint::dss(3), &r(121, 204)).unwrap(), KVerdict::StrictlySemistable);
        assert!(matches!(classify_at(&p6, &r(2, 3)), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn degenerations() {
        let d = wall_degeneration(&pt(3, 0, &[(0, 1), (5, 1)]), 1).unwrap();
        assert_eq!(d.pair.e, Some(5));
        assert_eq!(d.lambda, Some(OneParamSubgroup { d: -2, b: -4 }));
        assert_eq!(d.limit, pt(3, 0, &[(5, 1)]));
        let d = wall_degeneration(&pt(3, 0, &[(5, 1), (6, 1)]), 1).unwrap();
        assert_eq!(d.lambda, Some(OneParamSubgroup { d: 2, b: 4 }));
        assert_eq!(d.limit, pt(3, 0, &[(5, 1)]));
        let d = wall_degeneration(&pt(3, 1, &[(6, 2)]), 0).unwrap();
        assert_eq!(d.pair.equation, "z^2*y + x^0*y^6");
        assert_eq!(d.limit, pt(3, 0, &[(6, 2)]));
        assert!(matches!(wall_degeneration(&pt(3, 1, &[(5, 1), (6, 1)]), 1), Err(Error::NotContractedHere(_))));
        assert!(matches!(wall_degeneration(&pt(3, 1, &[(6, 1)]), 1), Err(Error::NotContractedHere(_))));
    }

    #[test]
    fn replacements() {
        let p = last_wall_replacement(3).unwrap();
        assert_eq!(p.plane.weights, [1, 5, 18]);
        assert_eq!(p.equation, "x2^2 - x0*x1^7");
        let p = last_wall_replacement(2).unwrap();
        assert_eq!(p.plane.weights, [1, 1, 2]);
        assert_eq!(p.kind, PairKind::WprimeH0D0);
        for n in (1..=21).step_by(2) {
            assert!(last_wall_replacement(n).is_ok());
        }
    }

    fn curve(n: u64, b: &[(u32, Rat)]) -> PlaneCurve {
        let deg = ((n + 3) * (n + 3)) as u32;
        let mut c = PlaneCurve::new();
        c.insert([0, 0, 2], Rat::one());
        c.insert([1, n as u32 + 4, 0], Rat::int(-1));
        for (i, v) in b {
            c.insert([deg - (n as u32 + 2) * i, *i, 0], v.clone());
        }
        c
    }

    #[test]
    fn d1_forms() {
        let b = [(0, r(3, 1)), (2, r(-1, 2))];
        let out = d1_normal_form(1, &curve(1, &b)).unwrap();
        assert_eq!(out, vec![r(3, 1), Rat::zero(), r(-1, 2), Rat::zero()]);
        // x2^2 - x0 x1^5 + x0^4 x1^4: shift x1 by x0^3/5
        let c = curve(1, &[(4, Rat::one())]);
        let out = d1_normal_form(1, &c).unwrap();
        let direct = shift_substitute(&UniPoly::from_ints(&[0, 0, 0, 0, 1, -1]), &r(1, 5));
        assert!(direct.coeff(4).is_zero());
        assert_eq!(out, (0..=3).map(|i| direct.coeff(i)).collect::<Vec<_>>());
        let mut bad = PlaneCurve::new();
        bad.insert([0, 0, 2], Rat::one());
        assert!(matches!(d1_normal_form(1, &bad), Err(Error::NotInD1Family(_))));
        assert_eq!(d1_normal_form(1, &curve(1, &[])).unwrap(), vec![Rat::zero(); 4]);
    }

    #[test]
    fn d1_stabilities() {
        let b = vec![Rat::one(), Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
        assert_eq!(d1_stability(3, &b, &r(3, 5)).unwrap(), KVerdict::Stable);
        assert_eq!(d1_stability(3, &b, &r(121, 204)).unwrap(), KVerdict::StrictlySemistable);
        let z = vec![Rat::zero(); 6];
        assert_eq!(d1_stability(3, &z, &r(121, 204)).unwrap(), KVerdict::Polystable);
        assert_eq!(d1_stability(3, &z, &r(1, 2)).unwrap(), KVerdict::Unstable);
    }

    #[test]
    fn hypersurface_examples() {
        // t^2 + z^2 y + z x^{n+4}, n = 1
        let mut f = Poly4::term(Rat::one(), [2, 0, 0, 0]);
        f.add_term([0, 0, 1, 2], Rat::one());
        f.add_term([0, 5, 0, 1], Rat::one());
        let red = reduce_hypersurface(1, &f).unwrap();
        assert_eq!(red.point.a, Rat::one());
        assert!(red.point.ai.iter().all(Rat::is_zero));
        // t^2 + t x z + z^2 y + y^4
        let mut f = Poly4::term(Rat::one(), [2, 0, 0, 0]);
        f.add_term([1, 1, 0, 1], Rat::one());
        f.add_term([0, 0, 1, 2], Rat::one());
        f.add_term([0, 0, 4, 0], Rat::one());
        let red = reduce_hypersurface(1, &f).unwrap();
        assert_eq!(red.point.a, Rat::zero());
        assert_eq!(red.point.ai, vec![r(1, 256), r(1, 16), r(3, 8), r(1, 1), r(1, 1)]);
        assert_eq!(reembed(&red), f);
        let g = Poly4::term(Rat::one(), [0, 0, 1, 2]);
        assert_eq!(reduce_hypersurface(1, &g).unwrap_err(), Error::MissingTSquared);
        let h = Poly4::term(Rat::one(), [2, 0, 0, 0]);
        assert!(matches!(reduce_hypersurface(1, &h), Err(Error::OutsideFamily(_))));
    }

    #[test]
    fn critical_weights() {
        assert_eq!(complexity_one_critical_weight(&PolystablePair::monomial(3, 6).unwrap()).unwrap(), r(5, 12));
        assert_eq!(complexity_one_critical_weight(&last_wall_replacement(3).unwrap()).unwrap(), r(121, 204));
        assert_eq!(complexity_one_critical_weight(&last_wall_replacement(2).unwrap()).unwrap(), r(13, 22));
        for e in 3..=6 {
            let cfg = PolystablePair::monomial(3, e).unwrap();
            assert_eq!(complexity_one_critical_weight(&cfg).unwrap(), wall(3, 6 - e));
        }
    }

    #[test]
    fn complexity_one_checks() {
        let cfg = PolystablePair::monomial(3, 6).unwrap();
        let rep = verify_complexity_one_polystable(&cfg, &r(5, 12)).unwrap();
        assert!(rep.passed, "{:?}", rep);
        let rep = verify_complexity_one_polystable(&last_wall_replacement(3).unwrap(), &r(121, 204)).unwrap();
        assert!(rep.passed, "{:?}", rep);
        let d0 = rep.vertical.iter().find(|d| d.label == "D0").unwrap();
        assert_eq!(d0.a, Rat::one() - r(121, 204));
        let rep = verify_complexity_one_polystable(&cfg, &r(1, 2)).unwrap();
        assert!(!rep.torus_beta.is_zero() && !rep.passed);
    }
}
