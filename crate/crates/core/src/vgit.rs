//! Variation of GIT for the 2-torus acting on the coefficient space of the
//! curve families.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{r, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: u64) -> Parity {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// A curve of the family: z²y + a·z·x^{n+4} + Σ a_i x^{2n+6−2i} y^i, or its
/// even analogue in u.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct FamilyPoint {
    pub n: u64,
    pub a: Rat,
    pub ai: Vec<Rat>,
}

#[derive(Deserialize)]
struct RawPoint {
    n: u64,
    #[serde(default)]
    a: Rat,
    ai: Vec<Rat>,
}

impl TryFrom<RawPoint> for FamilyPoint {
    type Error = Error;
    fn try_from(raw: RawPoint) -> Result<FamilyPoint> {
        FamilyPoint::new(raw.n, raw.a, raw.ai)
    }
}

impl FamilyPoint {
    pub fn new(n: u64, a: Rat, ai: Vec<Rat>) -> Result<FamilyPoint> {
        if n == 0 {
            return Err(Error::Malformed("n must be positive".into()));
        }
        if ai.len() as u64 != n + 4 {
            return Err(Error::Malformed(format!(
                "expected {} coefficients a_0..a_{}, got {}",
                n + 4,
                n + 3,
                ai.len()
            )));
        }
        Ok(FamilyPoint { n, a, ai })
    }

    pub fn zero(n: u64) -> FamilyPoint {
        FamilyPoint { n, a: Rat::zero(), ai: vec![Rat::zero(); (n + 4) as usize] }
    }

    /// Only a_e = 1: the monomial curve D_e.
    pub fn monomial(n: u64, e: usize) -> Result<FamilyPoint> {
        let mut p = FamilyPoint::zero(n);
        if e > (n + 3) as usize {
            return Err(Error::Malformed(format!("index {} beyond a_{}", e, n + 3)));
        }
        p.ai[e] = Rat::one();
        Ok(p)
    }

    /// a = −2, a_i = (−1)^i C(n+4, i+1).
    pub fn dss(n: u64) -> FamilyPoint {
        let ai = (0..=n + 3)
            .map(|i| {
                let c = Rat::from(crate::exactalg::binomial(n + 4, i + 1));
                if i % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        FamilyPoint { n, a: Rat::int(-2), ai }
    }

    pub fn from_json(s: &str) -> Result<FamilyPoint> {
        serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.ai.iter().all(Rat::is_zero)
    }

    pub fn t(&self) -> Option<usize> {
        self.ai.iter().rposition(|c| !c.is_zero())
    }

    /// m₀ with m₀+1 = min{i : a_i ≠ 0}, defined when a = a₀ = 0.
    pub fn m0(&self) -> Option<usize> {
        if !self.a.is_zero() || !self.ai[0].is_zero() {
            return None;
        }
        self.ai.iter().position(|c| !c.is_zero()).map(|i| i - 1)
    }

    /// Support vectors T_p.
    pub fn support(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        if !self.a.is_zero() {
            out.push((-1, -1));
        }
        for (j, c) in self.ai.iter().enumerate() {
            if !c.is_zero() {
                out.push((j as i64 - 1, -2));
            }
        }
        out
    }

    /// λ(s)·p for the 1-PS λ = (d,b) at the parameter value s.
    pub fn act(&self, lam: OneParamSubgroup, s: &Rat) -> FamilyPoint {
        let mut q = self.clone();
        q.a = &self.a * s.pow((-lam.d - lam.b) as i32);
        for (j, c) in q.ai.iter_mut().enumerate() {
            *c = &*c * s.pow(((j as i64 - 1) * lam.d - 2 * lam.b) as i32);
        }
        q
    }

    /// lim_{s→0} λ(s)·p, if it exists.
    pub fn limit(&self, lam: OneParamSubgroup) -> Option<FamilyPoint> {
        let mut q = FamilyPoint::zero(self.n);
        for (j, g) in std::iter::once(None).chain((0..self.ai.len()).map(Some)).zip(
            std::iter::once((-1i64, -1i64)).chain((0..self.ai.len()).map(|j| (j as i64 - 1, -2))),
        ) {
            let c = match j {
                None => &self.a,
                Some(j) => &self.ai[j],
            };
            if c.is_zero() {
                continue;
            }
            match lam.pair(g).cmp(&0) {
                Ordering::Less => return None,
                Ordering::Equal => match j {
                    None => q.a = c.clone(),
                    Some(j) => q.ai[j] = c.clone(),
                },
                Ordering::Greater => {}
            }
        }
        Some(q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OneParamSubgroup {
    pub d: i64,
    pub b: i64,
}

impl OneParamSubgroup {
    pub fn new(d: i64, b: i64) -> Result<OneParamSubgroup> {
        if d == 0 && b == 0 {
            return Err(Error::Malformed("trivial one-parameter subgroup".into()));
        }
        Ok(OneParamSubgroup { d, b })
    }

    pub fn pair(&self, g: (i64, i64)) -> i64 {
        self.d * g.0 + self.b * g.1
    }
}

pub type VecQ2 = (Rat, Rat);

fn cross(u: &VecQ2, v: &VecQ2) -> Rat {
    &u.0 * &v.1 - &u.1 * &v.0
}

fn dot(u: &VecQ2, v: &VecQ2) -> Rat {
    &u.0 * &v.0 + &u.1 * &v.1
}

/// Primitive integer vector on the ray of a nonzero rational vector.
pub fn primitive_integer(v: &VecQ2) -> (BigInt, BigInt) {
    let l = v.0.denom().lcm(v.1.denom());
    let x = v.0.numer() * (&l / v.0.denom());
    let y = v.1.numer() * (&l / v.1.denom());
    let g = x.gcd(&y);
    if g.is_zero() {
        return (x, y);
    }
    (x / &g, y / &g)
}

/// Rational polyhedral cone in ℚ² given by generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeQ2 {
    generators: Vec<VecQ2>,
}

impl ConeQ2 {
    pub fn new(gens: impl IntoIterator<Item = VecQ2>) -> ConeQ2 {
        let mut generators: Vec<VecQ2> = Vec::new();
        for g in gens {
            if g.0.is_zero() && g.1.is_zero() {
                continue;
            }
            let dup = generators.iter().any(|h| cross(h, &g).is_zero() && dot(h, &g).is_positive());
            if !dup {
                generators.push(g);
            }
        }
        ConeQ2 { generators }
    }

    pub fn from_integer(gens: &[(i64, i64)]) -> ConeQ2 {
        ConeQ2::new(gens.iter().map(|&(x, y)| (Rat::int(x), Rat::int(y))))
    }

    pub fn generators(&self) -> &[VecQ2] {
        &self.generators
    }

    pub fn dimension(&self) -> usize {
        match self.generators.len() {
            0 => 0,
            _ => {
                let g0 = &self.generators[0];
                if self.generators.iter().all(|g| cross(g0, g).is_zero()) {
                    1
                } else {
                    2
                }
            }
        }
    }

    /// Solves u = s·g + t·h for a non-parallel pair.
    fn coords(u: &VecQ2, g: &VecQ2, h: &VecQ2) -> (Rat, Rat) {
        let det = cross(g, h);
        (cross(u, h) / &det, cross(g, u) / det)
    }

    pub fn contains(&self, u: &VecQ2) -> bool {
        if u.0.is_zero() && u.1.is_zero() {
            return true;
        }
        let gs = &self.generators;
        if gs.iter().any(|g| cross(g, u).is_zero() && dot(g, u).is_positive()) {
            return true;
        }
        for i in 0..gs.len() {
            for j in i + 1..gs.len() {
                if cross(&gs[i], &gs[j]).is_zero() {
                    continue;
                }
                let (s, t) = ConeQ2::coords(u, &gs[i], &gs[j]);
                if !s.is_negative() && !t.is_negative() {
                    return true;
                }
            }
        }
        false
    }

    /// Membership in the topological interior of the cone inside ℝ².
    pub fn interior_contains(&self, u: &VecQ2) -> bool {
        if u.0.is_zero() && u.1.is_zero() {
            return false;
        }
        let gs = &self.generators;
        for i in 0..gs.len() {
            for j in i + 1..gs.len() {
                if cross(&gs[i], &gs[j]).is_zero() {
                    continue;
                }
                let (s, t) = ConeQ2::coords(u, &gs[i], &gs[j]);
                if s.is_positive() && t.is_positive() {
                    return true;
                }
            }
        }
        false
    }

    /// Membership in the relative interior (the ray itself in dimension one).
    pub fn relative_interior_contains(&self, u: &VecQ2) -> bool {
        match self.dimension() {
            0 => false,
            1 => {
                let g = &self.generators[0];
                cross(g, u).is_zero() && dot(g, u).is_positive() && self.generators.len() == 1
            }
            _ => self.interior_contains(u),
        }
    }

    /// Integer λ with λ·g ≥ 0 for all generators and λ·u < 0 (strict) or
    /// λ·u = 0 (when `strict` is false), built from normals of generator rays.
    fn dual_certificate(&self, u: &VecQ2, strict: bool) -> Option<(BigInt, BigInt)> {
        let mut cands: Vec<VecQ2> = Vec::new();
        for g in &self.generators {
            cands.push((g.1.clone(), -&g.0));
            cands.push((-&g.1, g.0.clone()));
            cands.push(g.clone());
        }
        if self.generators.is_empty() {
            cands.push((-&u.0, -&u.1));
        }
        for c in cands {
            if self.generators.iter().any(|g| dot(&c, g).is_negative()) {
                continue;
            }
            let val = dot(&c, u);
            let ok = if strict {
                val.is_negative()
            } else {
                val.is_zero() && self.generators.iter().any(|g| dot(&c, g).is_positive())
            };
            if ok {
                return Some(primitive_integer(&c));
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GitVerdict {
    pub semistable: bool,
    pub polystable: bool,
    pub witness: Option<OneParamSubgroup>,
}

pub fn support_cone(p: &FamilyPoint) -> ConeQ2 {
    ConeQ2::from_integer(&p.support())
}

/// (n+5)/(2n+6) for odd n, (2l+5)/(4l+6) for n = 2l; the same closed form.
pub fn domain_end(n: u64) -> Rat {
    let n = n as i64;
    r(n + 5, 2 * n + 6)
}

pub fn check_domain(n: u64, w: &Rat) -> Result<()> {
    if !w.is_positive() || *w >= domain_end(n) {
        return Err(Error::OutOfDomain(format!("w = {} outside (0, {})", w, domain_end(n))));
    }
    Ok(())
}

pub fn git_u_vector(n: u64, w: &Rat) -> Result<VecQ2> {
    check_domain(n, w)?;
    Ok(git_u_unchecked(n, w))
}

fn git_u_unchecked(n: u64, w: &Rat) -> VecQ2 {
    let nn = Rat::int(n as i64);
    let u1 = (Rat::one() - &nn + Rat::int(2) * &nn * w) / Rat::int(6);
    let u2 = (Rat::int(2 * n as i64 + 1) - w * Rat::int(4 * n as i64 + 6)) / Rat::int(3 * (n as i64 + 2));
    (u1, u2)
}

pub fn git_beta(n: u64, w: &Rat, lam: OneParamSubgroup) -> Rat {
    let u = git_u_unchecked(n, w);
    &u.0 * Rat::int(lam.d) + &u.1 * Rat::int(lam.b)
}

fn to_ops(v: (BigInt, BigInt)) -> OneParamSubgroup {
    OneParamSubgroup {
        d: v.0.to_i64().expect("certificate fits in i64"),
        b: v.1.to_i64().expect("certificate fits in i64"),
    }
}

pub fn git_classify(p: &FamilyPoint, w: &Rat) -> Result<GitVerdict> {
    let u = git_u_vector(p.n, w)?;
    let cone = support_cone(p);
    if !cone.contains(&u) {
        let witness = cone.dual_certificate(&u, true).map(to_ops);
        return Ok(GitVerdict { semistable: false, polystable: false, witness });
    }
    if cone.relative_interior_contains(&u) {
        return Ok(GitVerdict { semistable: true, polystable: true, witness: None });
    }
    let witness = cone.dual_certificate(&u, false).map(to_ops);
    Ok(GitVerdict { semistable: true, polystable: false, witness })
}

/// Hilbert–Mumford sweep over all (d,b) ∈ [−N,N]² \ {0}.
pub fn brute_force_git_oracle(p: &FamilyPoint, w: &Rat, big_n: i64) -> Result<GitVerdict> {
    check_domain(p.n, w)?;
    let support = p.support();
    let mut boundary: Option<OneParamSubgroup> = None;
    for d in -big_n..=big_n {
        for b in -big_n..=big_n {
            if d == 0 && b == 0 {
                continue;
            }
            let lam = OneParamSubgroup { d, b };
            if support.iter().any(|&g| lam.pair(g) < 0) {
                continue;
            }
            let beta = git_beta(p.n, w, lam);
            if beta.is_negative() {
                return Ok(GitVerdict { semistable: false, polystable: false, witness: Some(lam) });
            }
            if beta.is_zero() && boundary.is_none() && support.iter().any(|&g| lam.pair(g) != 0) {
                boundary = Some(lam);
            }
        }
    }
    Ok(GitVerdict { semistable: true, polystable: boundary.is_none(), witness: boundary })
}

/// w_i = ((n+2)² − (2n+1)i) / ((n+2)(2n+6) − (4n+6)i).
pub fn wall(n: u64, i: u64) -> Rat {
    let (n, i) = (n as i64, i as i64);
    r((n + 2) * (n + 2) - (2 * n + 1) * i, (n + 2) * (2 * n + 6) - (4 * n + 6) * i)
}

/// The same walls written with i = n+3−e.
pub fn wall_alt(n: u64, i: u64) -> Rat {
    let (n, i) = (n as i64, i as i64);
    r((n + 2 + i) * (n + 5) - 3 * (n + 2) * (1 + i), (n + 2 + i) * (2 * n + 6) - 6 * i * (n + 2))
}

/// Even-family form (l+5/2)(2l+2+i) − 3(l+1)(1+i) over (2l+3)(2l+2+i) − 6i(l+1).
pub fn wall_alt_even(l: u64, i: u64) -> Rat {
    let (l, i) = (l as i64, i as i64);
    r((2 * l + 5) * (2 * l + 2 + i) - 6 * (l + 1) * (1 + i), 2 * ((2 * l + 3) * (2 * l + 2 + i) - 6 * i * (l + 1)))
}

pub fn xi(n: u64) -> Rat {
    let n = n as i64;
    if n % 2 == 1 {
        r(n * n * n + 11 * n * n + 31 * n + 23, 2 * n * n * n + 18 * n * n + 50 * n + 42)
    } else {
        let l = n / 2;
        r(2 * l * l + 8 * l + 3, 4 * l * l + 12 * l + 6)
    }
}

/// Index of the last GIT wall: (n+1)/2 for odd n, l+1 for n = 2l.
pub fn last_wall_index(n: u64) -> u64 {
    if n % 2 == 1 {
        n.div_ceil(2)
    } else {
        n / 2 + 1
    }
}

/// Below this weight the CM line bundle is not ample and nothing is semistable.
pub fn cm_threshold(n: u64) -> Rat {
    r(2 * n as i64 + 1, 4 * n as i64 + 6)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallSchedule {
    pub n: u64,
    pub parity: Parity,
    pub walls: Vec<(String, Rat)>,
    pub domain_end: Rat,
}

impl WallSchedule {
    pub fn values(&self) -> Vec<Rat> {
        self.walls.iter().map(|(_, w)| w.clone()).collect()
    }

    pub fn git_walls(&self) -> Vec<Rat> {
        self.walls.iter().filter(|(l, _)| l != "xi").map(|(_, w)| w.clone()).collect()
    }

    pub fn xi(&self) -> Rat {
        self.walls.last().expect("schedule ends with xi").1.clone()
    }
}

pub fn enumerate_walls(n: u64) -> Result<WallSchedule> {
    if n == 0 {
        return Err(Error::Malformed("n must be positive".into()));
    }
    let mut walls: Vec<(String, Rat)> =
        (0..=last_wall_index(n)).map(|i| (format!("w{}", i), wall(n, i))).collect();
    walls.push(("xi".into(), xi(n)));
    Ok(WallSchedule { n, parity: Parity::of(n), walls, domain_end: domain_end(n) })
}

pub fn cm_degree(n: u64, w: &Rat) -> (Rat, bool) {
    let beta = git_beta(n, w, OneParamSubgroup { d: 0, b: -1 });
    let ample = beta.is_positive();
    (beta, ample)
}

/// Coefficient slot: `None` is a, `Some(j)` is a_j.
pub type Slot = Option<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Requirement {
    NotAllZero,
    AllZero,
    NonZero,
    Arbitrary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCondition {
    pub slots: Vec<String>,
    pub requirement: Requirement,
}

impl BlockCondition {
    /// Block {a, a_0, .., a_hi} when `with_a`, else {a_lo, .., a_hi}.
    fn new(with_a: bool, lo: usize, hi: usize, requirement: Requirement) -> BlockCondition {
        let mut slots = Vec::new();
        if with_a {
            slots.push("a".to_string());
        }
        slots.extend((lo..=hi).map(|j| format!("a{}", j)));
        BlockCondition { slots, requirement }
    }

    pub fn holds(&self, p: &FamilyPoint) -> bool {
        let vals: Vec<&Rat> = self
            .slots
            .iter()
            .map(|s| if s == "a" { &p.a } else { &p.ai[s[1..].parse::<usize>().expect("slot label")] })
            .collect();
        match self.requirement {
            Requirement::NotAllZero => vals.iter().any(|v| !v.is_zero()),
            Requirement::AllZero => vals.iter().all(|v| v.is_zero()),
            Requirement::NonZero => vals.iter().all(|v| !v.is_zero()),
            Requirement::Arbitrary => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Stratum {
    Empty,
    Wall { index: u64, w: Rat, branches: Vec<Vec<BlockCondition>> },
    Chamber { lo: Rat, hi: Rat, lo_label: String, hi_label: String, conditions: Vec<BlockCondition> },
}

impl Stratum {
    /// Whether the point is among the polystable points parameterized here.
    pub fn parameterizes(&self, p: &FamilyPoint) -> bool {
        match self {
            Stratum::Empty => false,
            Stratum::Wall { branches, .. } => branches.iter().any(|b| b.iter().all(|c| c.holds(p))),
            Stratum::Chamber { conditions, .. } => conditions.iter().all(|c| c.holds(p)),
        }
    }
}

pub fn stratum_description(n: u64, w: &Rat) -> Result<Stratum> {
    check_domain(n, w)?;
    let top = (n + 3) as usize;
    let last = last_wall_index(n);
    if *w < wall(n, 0) {
        return Ok(Stratum::Empty);
    }
    for i in 0..=last {
        let wi = wall(n, i);
        let e = top - i as usize;
        if *w == wi {
            let mut branches = Vec::new();
            if i > 0 {
                branches.push(vec![
                    BlockCondition::new(true, 0, e - 1, Requirement::NotAllZero),
                    BlockCondition::new(false, e, e, Requirement::Arbitrary),
                    BlockCondition::new(false, e + 1, top, Requirement::NotAllZero),
                ]);
            }
            let mut single = vec![BlockCondition::new(true, 0, e - 1, Requirement::AllZero)];
            single.push(BlockCondition::new(false, e, e, Requirement::NonZero));
            if e < top {
                single.push(BlockCondition::new(false, e + 1, top, Requirement::AllZero));
            }
            branches.push(single);
            return Ok(Stratum::Wall { index: i, w: wi, branches });
        }
        let (hi, hi_label) = if i == last {
            (domain_end(n), "end".to_string())
        } else {
            (wall(n, i + 1), format!("w{}", i + 1))
        };
        if *w < hi {
            return Ok(Stratum::Chamber {
                lo: wi,
                hi,
                lo_label: format!("w{}", i),
                hi_label,
                conditions: vec![
                    BlockCondition::new(true, 0, e - 1, Requirement::NotAllZero),
                    BlockCondition::new(false, e, top, Requirement::NotAllZero),
                ],
            });
        }
    }
    unreachable!("w below domain end lies in some chamber")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn only(n: u64, idx: &[usize]) -> FamilyPoint {
        let mut p = FamilyPoint::zero(n);
        for &i in idx {
            p.ai[i] = Rat::one();
        }
        p
    }

    #[test]
    fn cones() {
        let c = support_cone(&only(3, &[6]));
        assert_eq!(c.dimension(), 1);
        assert_eq!(c.generators(), &[(Rat::int(5), Rat::int(-2))]);
        let mut p = only(3, &[0]);
        p.a = Rat::one();
        assert_eq!(support_cone(&p).dimension(), 2);
        assert_eq!(support_cone(&FamilyPoint::zero(3)).dimension(), 0);
        let dup = ConeQ2::from_integer(&[(1, -2), (2, -4), (0, -1)]);
        assert_eq!(dup.generators().len(), 2);
    }

    #[test]
    fn u_vectors() {
        assert_eq!(git_u_vector(3, &r(5, 12)).unwrap(), (r(1, 12), r(-1, 30)));
        assert_eq!(git_u_vector(3, &r(7, 18)).unwrap().1, Rat::zero());
        assert_eq!(git_u_vector(2, &r(1, 2)).unwrap(), (r(1, 6), r(-1, 6)));
        assert!(git_u_vector(3, &r(2, 3)).is_err());
        assert!(git_u_vector(3, &Rat::zero()).is_err());
    }

    #[test]
    fn betas() {
        assert_eq!(git_beta(3, &r(5, 12), OneParamSubgroup { d: 2, b: 5 }), Rat::zero());
        assert_eq!(git_beta(3, &r(1, 2), OneParamSubgroup { d: 0, b: -1 }), r(2, 15));
        assert_eq!(cm_degree(3, &r(7, 18)), (Rat::zero(), false));
        assert_eq!(cm_degree(3, &r(1, 2)), (r(2, 15), true));
        let (b, ample) = cm_degree(3, &r(1, 3));
        assert!(b.is_negative() && !ample);
        assert!(OneParamSubgroup::new(0, 0).is_err());
    }

    #[test]
    fn classification_examples() {
        let p6 = only(3, &[6]);
        let v = git_classify(&p6, &r(5, 12)).unwrap();
        assert!(v.semistable && v.polystable);
        let v = git_classify(&p6, &r(1, 2)).unwrap();
        assert!(!v.semistable);
        let lam = v.witness.unwrap();
        assert!(git_beta(3, &r(1, 2), lam).is_negative());
        assert!(p6.support().iter().all(|&g| lam.pair(g) >= 0));
        let v = git_classify(&only(3, &[0, 6]), &r(1, 2)).unwrap();
        assert!(v.semistable && v.polystable);
    }

    #[test]
    fn oracle_examples() {
        for (p, w) in [(only(3, &[6]), r(5, 12)), (only(3, &[6]), r(1, 2)), (only(3, &[0, 6]), r(1, 2))] {
            let a = git_classify(&p, &w).unwrap();
            let b = brute_force_git_oracle(&p, &w, 20).unwrap();
            assert_eq!((a.semistable, a.polystable), (b.semistable, b.polystable));
        }
        let z = brute_force_git_oracle(&FamilyPoint::zero(3), &r(1, 2), 5).unwrap();
        assert!(!z.semistable);
        let mut pa = FamilyPoint::zero(3);
        pa.a = Rat::one();
        for w in [r(5, 12), r(1, 2), r(13, 20)] {
            assert!(!brute_force_git_oracle(&pa, &w, 10).unwrap().semistable);
            assert!(!git_classify(&pa, &w).unwrap().semistable);
        }
    }

    #[test]
    fn schedules() {
        let s = enumerate_walls(3).unwrap();
        assert_eq!(s.values(), vec![r(5, 12), r(3, 7), r(11, 24), r(121, 204)]);
        assert_eq!(s.git_walls()[..3], [r(5, 12), r(3, 7), r(11, 24)]);
        assert_eq!(s.domain_end, r(2, 3));
        let s = enumerate_walls(2).unwrap();
        assert_eq!(s.values(), vec![r(2, 5), r(11, 26), r(1, 2), r(13, 22)]);
        assert_eq!(s.domain_end, r(7, 10));
        let s = enumerate_walls(1).unwrap();
        assert_eq!(s.values()[..2], [r(3, 8), r(3, 7)]);
        for i in 0..=2 {
            assert_eq!(wall(1, i), wall_alt(1, i));
        }
        for l in 1..6 {
            for i in 0..=l + 1 {
                assert_eq!(wall(2 * l, i), wall_alt_even(l, i));
            }
        }
    }

    #[test]
    fn walls_hit_support_rays() {
        for n in 1..=21u64 {
            for i in 0..=last_wall_index(n) {
                let w = wall(n, i);
                if w >= domain_end(n) {
                    continue;
                }
                let u = git_u_vector(n, &w).unwrap();
                let v = (Rat::int((n + 2 - i) as i64), Rat::int(-2));
                assert!(cross(&u, &v).is_zero() && dot(&u, &v).is_positive());
            }
        }
    }

    #[test]
    fn strata() {
        match stratum_description(3, &r(1, 2)).unwrap() {
            Stratum::Chamber { conditions, lo, .. } => {
                assert_eq!(lo, r(11, 24));
                assert_eq!(conditions[0].slots, ["a", "a0", "a1", "a2", "a3"]);
                assert_eq!(conditions[1].slots, ["a4", "a5", "a6"]);
            }
            other => panic!("{:?}", other),
        }
        match stratum_description(3, &r(3, 7)).unwrap() {
            Stratum::Wall { index, branches, .. } => {
                assert_eq!(index, 1);
                assert_eq!(branches.len(), 2);
            }
            other => panic!("{:?}", other),
        }
        assert_eq!(stratum_description(3, &r(1, 3)).unwrap(), Stratum::Empty);
        match stratum_description(3, &r(5, 12)).unwrap() {
            Stratum::Wall { branches, .. } => assert_eq!(branches.len(), 1),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn limits() {
        let mut p = only(3, &[0, 5]);
        p.ai[2] = r(3, 1);
        let q = p.limit(OneParamSubgroup { d: -2, b: -4 }).unwrap();
        assert_eq!(q, only(3, &[5]));
        assert!(p.limit(OneParamSubgroup { d: 1, b: 0 }).is_none());
        let s = r(1, 2);
        let moved = p.act(OneParamSubgroup { d: 1, b: 1 }, &s);
        assert_eq!(moved.ai[5], &p.ai[5] * s.pow(2));
    }

    #[test]
    fn json() {
        let p = FamilyPoint::from_json(r#"{"n":3,"a":"0","ai":["1","0","0","0","0","0","1"]}"#).unwrap();
        assert_eq!(p, only(3, &[0, 6]));
        let back = serde_json::to_string(&p).unwrap();
        assert_eq!(FamilyPoint::from_json(&back).unwrap(), p);
        assert!(FamilyPoint::from_json(r#"{"n":3,"ai":["1"]}"#).is_err());
    }
}
