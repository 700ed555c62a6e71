//! Zariski-decomposition profiles of the blow-up flags used for the
//! Abban–Zhuang bound, with exact S-invariants and the critical weight ξ.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{integrate_piecewise, r, Affine, PiecewisePoly, Rat, UniPoly};
use crate::vgit::{domain_end, Parity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    SpecialPointOdd,
    SpecialPointEven,
    PzBlowupOdd,
    PzBlowupEven,
    H1Flag,
    PencilFlag,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::SpecialPointOdd,
        Preset::SpecialPointEven,
        Preset::PzBlowupOdd,
        Preset::PzBlowupEven,
        Preset::H1Flag,
        Preset::PencilFlag,
    ];

    fn name(self) -> &'static str {
        match self {
            Preset::SpecialPointOdd => "special_point_odd",
            Preset::SpecialPointEven => "special_point_even",
            Preset::PzBlowupOdd => "pz_blowup_odd",
            Preset::PzBlowupEven => "pz_blowup_even",
            Preset::H1Flag => "h1_flag",
            Preset::PencilFlag => "pencil_flag",
        }
    }

    fn parity(self) -> Option<Parity> {
        match self {
            Preset::SpecialPointOdd | Preset::PzBlowupOdd => Some(Parity::Odd),
            Preset::SpecialPointEven | Preset::PzBlowupEven => Some(Parity::Even),
            _ => None,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Preset> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown preset '{}'", s)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagConfig {
    pub preset: Preset,
    /// n for the odd family, 2l for the even one.
    pub n: u64,
    pub w: Rat,
}

impl FlagConfig {
    pub fn new(preset: Preset, n: u64, w: Rat) -> Result<FlagConfig> {
        if n == 0 {
            return Err(Error::Malformed("n must be positive".into()));
        }
        if let Some(par) = preset.parity() {
            if par != Parity::of(n) {
                return Err(Error::OutOfDomain(format!("{} needs {:?} n, got {}", preset, par, n)));
            }
        }
        Ok(FlagConfig { preset, n, w })
    }

    fn parity(&self) -> Parity {
        Parity::of(self.n)
    }

    fn l(&self) -> i64 {
        self.n as i64 / 2
    }

    /// −(K+Δ_w) = c·O(1).
    pub fn c(&self) -> Affine {
        let n = self.n as i64;
        match self.parity() {
            Parity::Odd => Affine::new(Rat::int(n + 5), Rat::int(-(2 * n + 6))),
            Parity::Even => {
                let l = self.l();
                Affine::new(r(2 * l + 5, 2), Rat::int(-(2 * l + 3)))
            }
        }
    }

    /// Degree k of the reference divisor whose multiples the profile describes.
    pub fn reference_degree(&self) -> Rat {
        let n = self.n as i64;
        match (self.preset, self.parity()) {
            (Preset::SpecialPointOdd, _) => Rat::int(n + 2),
            (Preset::SpecialPointEven, _) => Rat::int(self.l() + 1),
            (Preset::PzBlowupOdd | Preset::PzBlowupEven | Preset::H1Flag, _) => Rat::one(),
            (Preset::PencilFlag, Parity::Odd) => Rat::int(n + 2),
            (Preset::PencilFlag, Parity::Even) => Rat::int(self.l() + 1),
        }
    }

    pub fn a_e(&self) -> Affine {
        let n = self.n as i64;
        let l = self.l();
        match self.preset {
            Preset::SpecialPointOdd => Affine::new(Rat::int(n + 6), Rat::int(-(2 * n + 8))),
            Preset::SpecialPointEven => Affine::new(Rat::int(l + 3), Rat::int(-(2 * l + 4))),
            Preset::PzBlowupOdd => Affine::new(r(3, n + 2), r(-2, n + 2)),
            Preset::PzBlowupEven => Affine::new(r(3, 2 * l + 2), r(-2, 2 * l + 2)),
            Preset::H1Flag => Affine::constant(match self.parity() {
                Parity::Odd => Rat::one(),
                Parity::Even => r(1, 2),
            }),
            Preset::PencilFlag => Affine::constant(Rat::one()),
        }
    }

    /// Points q on the flag divisor: (name, A_{E,Φ}(q), whether q lies on the negative-part curve).
    pub fn points(&self) -> Vec<(String, Affine, bool)> {
        let one = || Affine::constant(Rat::one());
        let omw = || Affine::new(Rat::one(), Rat::int(-1));
        let n = self.n as i64;
        match self.preset {
            Preset::SpecialPointOdd => vec![
                ("singular".into(), Affine::constant(r(1, 2)), false),
                ("dss".into(), omw(), false),
                ("m".into(), Affine::constant(r(1, n + 4)), true),
                ("generic".into(), one(), false),
            ],
            Preset::SpecialPointEven => vec![
                ("m".into(), omw(), true),
                ("h_u".into(), Affine::constant(r(1, self.l() + 2)), false),
                ("generic".into(), one(), false),
            ],
            Preset::PzBlowupOdd | Preset::PzBlowupEven => vec![
                ("generic".into(), one(), false),
                ("h1".into(), Affine::constant(r(1, 2)), false),
                ("dss".into(), omw(), false),
            ],
            Preset::H1Flag => vec![],
            Preset::PencilFlag => vec![("p".into(), omw(), false)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiProfile {
    pub tau: Rat,
    pub vol: PiecewisePoly,
    pub pdot_e: PiecewisePoly,
    pub ord_n: BTreeMap<String, PiecewisePoly>,
}

impl ZariskiProfile {
    fn new(vol: PiecewisePoly, pdot_e: PiecewisePoly, ord_on_curve: Option<PiecewisePoly>) -> Result<ZariskiProfile> {
        let tau = vol.hi().clone();
        let zero = vol.map_pieces(|_| UniPoly::zero());
        let mut ord_n = BTreeMap::new();
        ord_n.insert("off".to_string(), zero);
        if let Some(o) = ord_on_curve {
            ord_n.insert("on".to_string(), o);
        }
        let p = ZariskiProfile { tau, vol, pdot_e, ord_n };
        p.validate()?;
        Ok(p)
    }

    /// vol' = −2 P·E piecewise, vol(τ) = 0, vol non-increasing.
    pub fn validate(&self) -> Result<()> {
        let lhs = self.vol.derivative();
        let rhs = self.pdot_e.map_pieces(|q| q.scale(&Rat::int(-2)));
        if lhs != rhs {
            return Err(Error::Degenerate("vol' differs from -2 P.E".into()));
        }
        if !self.vol.eval(&self.tau)?.is_zero() {
            return Err(Error::Degenerate("vol does not vanish at tau".into()));
        }
        for b in self.pdot_e.breakpoints() {
            if self.pdot_e.eval(b)?.is_negative() {
                return Err(Error::Degenerate("vol increases".into()));
            }
        }
        Ok(())
    }

    pub fn vol_at_zero(&self) -> Rat {
        self.vol.eval(self.vol.lo()).expect("lo in range")
    }
}

fn poly(cs: Vec<Rat>) -> UniPoly {
    UniPoly::new(cs)
}

/// Profile of the reference divisor (not yet scaled by c/k).
pub fn build_profile(cfg: &FlagConfig) -> Result<ZariskiProfile> {
    let n = cfg.n as i64;
    let l = cfg.l();
    match cfg.preset {
        Preset::SpecialPointOdd => {
            let t0 = r((n + 2) * (n + 4), n + 3);
            let bps = vec![Rat::zero(), t0, Rat::int(n + 3)];
            let half = r(n + 2, 2);
            // (n+3−t)² (n+2)/2
            let tail = UniPoly::from_ints(&[n + 3, -1]).pow(2).scale(&half);
            let vol = PiecewisePoly::new(
                bps.clone(),
                vec![poly(vec![half.clone(), Rat::zero(), r(-1, 2 * n + 8)]), tail],
            )?;
            let pdot = PiecewisePoly::new(
                bps.clone(),
                vec![poly(vec![Rat::zero(), r(1, 2 * n + 8)]), UniPoly::from_ints(&[n + 3, -1]).scale(&half)],
            )?;
            // (1 − (n+3)(n+3−t))·(n+3)/(2n+8)
            let ord = PiecewisePoly::new(
                bps,
                vec![
                    UniPoly::zero(),
                    UniPoly::from_ints(&[1 - (n + 3) * (n + 3), n + 3]).scale(&r(n + 3, 2 * n + 8)),
                ],
            )?;
            ZariskiProfile::new(vol, pdot, Some(ord))
        }
        Preset::SpecialPointEven => {
            let bps = vec![Rat::zero(), Rat::int(l + 1), Rat::int(l + 2)];
            let k = r(l + 1, l + 2);
            let vol = PiecewisePoly::new(
                bps.clone(),
                vec![
                    poly(vec![Rat::int(l + 1), Rat::zero(), r(-1, l + 2)]),
                    UniPoly::from_ints(&[l + 2, -1]).pow(2).scale(&k),
                ],
            )?;
            let pdot = PiecewisePoly::new(
                bps.clone(),
                vec![poly(vec![Rat::zero(), r(1, l + 2)]), UniPoly::from_ints(&[l + 2, -1]).scale(&k)],
            )?;
            let ord = PiecewisePoly::new(bps, vec![UniPoly::zero(), UniPoly::from_ints(&[-(l + 1), 1])])?;
            ZariskiProfile::new(vol, pdot, Some(ord))
        }
        Preset::PzBlowupOdd | Preset::PzBlowupEven => {
            let (h2, e2, tau) = if cfg.preset == Preset::PzBlowupOdd {
                (r(1, 2 * (n + 2)), r(-(n + 2), 2), r(1, n + 2))
            } else {
                (r(1, l + 1), Rat::int(-(l + 1)), r(1, l + 1))
            };
            let vol = PiecewisePoly::new(vec![Rat::zero(), tau.clone()], vec![poly(vec![h2, Rat::zero(), e2.clone()])])?;
            let pdot = PiecewisePoly::new(vec![Rat::zero(), tau], vec![poly(vec![Rat::zero(), -e2])])?;
            ZariskiProfile::new(vol, pdot, None)
        }
        Preset::H1Flag | Preset::PencilFlag => {
            let sq = match (cfg.preset, cfg.parity()) {
                (Preset::H1Flag, Parity::Odd) => r(1, 2 * (n + 2)),
                (Preset::H1Flag, Parity::Even) => r(1, l + 1),
                (_, Parity::Odd) => r(n + 2, 2),
                (_, Parity::Even) => Rat::int(l + 1),
            };
            let bps = vec![Rat::zero(), Rat::one()];
            let vol = PiecewisePoly::new(bps.clone(), vec![UniPoly::from_ints(&[1, -1]).pow(2).scale(&sq)])?;
            let pdot = PiecewisePoly::new(bps, vec![UniPoly::from_ints(&[1, -1]).scale(&sq)])?;
            ZariskiProfile::new(vol, pdot, None)
        }
    }
}

/// S(E) as an affine function of w.
pub fn s_affine(cfg: &FlagConfig, profile: &ZariskiProfile) -> Result<Affine> {
    let integral = integrate_piecewise(&profile.vol, &Rat::zero(), &profile.tau)?;
    let coef = integral / (profile.vol_at_zero() * cfg.reference_degree());
    Ok(cfg.c().scale(&coef))
}

pub fn s_from_profile(cfg: &FlagConfig, profile: &ZariskiProfile) -> Result<Rat> {
    Ok(s_affine(cfg, profile)?.eval(&cfg.w))
}

/// S(W^E_{•,•}; q) as an affine function of w.
pub fn s_restricted_affine(cfg: &FlagConfig, profile: &ZariskiProfile, q: &str) -> Result<Affine> {
    let (_, _, on_curve) = cfg
        .points()
        .into_iter()
        .find(|(name, _, _)| name == q)
        .ok_or_else(|| Error::UnknownPoint(q.to_string()))?;
    let ord = &profile.ord_n[if on_curve { "on" } else { "off" }];
    let half_sq = profile.pdot_e.mul(&profile.pdot_e)?.map_pieces(|p| p.scale(&r(1, 2)));
    let h = profile.pdot_e.mul(ord)?.add(&half_sq)?;
    let integral = integrate_piecewise(&h, &Rat::zero(), &profile.tau)?;
    let coef = Rat::int(2) * integral / (profile.vol_at_zero() * cfg.reference_degree());
    Ok(cfg.c().scale(&coef))
}

pub fn s_restricted_at(cfg: &FlagConfig, profile: &ZariskiProfile, q: &str) -> Result<Rat> {
    Ok(s_restricted_affine(cfg, profile, q)?.eval(&cfg.w))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRatio {
    pub point: String,
    pub a: Rat,
    pub s: Rat,
    pub ratio: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AZReport {
    pub preset: Preset,
    pub n: u64,
    pub w: Rat,
    pub a_e: Rat,
    pub s_e: Rat,
    pub ratio_e: Rat,
    pub points: Vec<PointRatio>,
    pub delta_lower_bound: Rat,
}

pub fn az_delta_bound(cfg: &FlagConfig) -> Result<AZReport> {
    if cfg.w <= r(1, 2) || cfg.w >= domain_end(cfg.n) {
        return Err(Error::OutOfDomain(format!("w = {} outside (1/2, {})", cfg.w, domain_end(cfg.n))));
    }
    let profile = build_profile(cfg)?;
    let a_e = cfg.a_e().eval(&cfg.w);
    let s_e = s_from_profile(cfg, &profile)?;
    let ratio_e = &a_e / &s_e;
    let mut bound = ratio_e.clone();
    let mut points = Vec::new();
    for (name, a, _) in cfg.points() {
        let a = a.eval(&cfg.w);
        let s = s_restricted_at(cfg, &profile, &name)?;
        let ratio = &a / &s;
        if ratio < bound {
            bound = ratio.clone();
        }
        points.push(PointRatio { point: name, a, s, ratio });
    }
    Ok(AZReport {
        preset: cfg.preset,
        n: cfg.n,
        w: cfg.w.clone(),
        a_e,
        s_e,
        ratio_e,
        points,
        delta_lower_bound: bound,
    })
}

/// Solves A(E) = S(E) in w.
pub fn solve_critical_weight(cfg: &FlagConfig) -> Result<Rat> {
    if !matches!(cfg.preset, Preset::SpecialPointOdd | Preset::SpecialPointEven) {
        return Err(Error::OutOfDomain(format!("{} has no critical weight", cfg.preset)));
    }
    let profile = build_profile(cfg)?;
    let diff = cfg.a_e().sub(&s_affine(cfg, &profile)?);
    diff.root().ok_or_else(|| Error::Degenerate("A(E) - S(E) is constant in w".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vgit::xi;

    fn cfg(p: Preset, n: u64, w: Rat) -> FlagConfig {
        FlagConfig::new(p, n, w).unwrap()
    }

    #[test]
    fn special_point_profiles() {
        let c = cfg(Preset::SpecialPointOdd, 3, r(1, 2));
        let p = build_profile(&c).unwrap();
        assert_eq!(p.vol.breakpoints()[1], r(35, 6));
        assert_eq!(p.vol.pieces()[0], poly(vec![r(5, 2), Rat::zero(), r(-1, 14)]));
        let c = cfg(Preset::SpecialPointEven, 2, r(3, 5));
        let p = build_profile(&c).unwrap();
        assert_eq!(p.vol.breakpoints()[1], Rat::int(2));
        assert_eq!(p.vol.pieces()[1], UniPoly::from_ints(&[3, -1]).pow(2).scale(&r(2, 3)));
        let c = cfg(Preset::PzBlowupOdd, 3, r(3, 5));
        let p = build_profile(&c).unwrap();
        assert_eq!(p.tau, r(1, 5));
        assert!(p.ord_n.values().all(|o| o.pieces().iter().all(UniPoly::is_zero)));
    }

    #[test]
    fn s_values() {
        let c = cfg(Preset::SpecialPointOdd, 3, r(1, 2));
        let p = build_profile(&c).unwrap();
        assert_eq!(s_affine(&c, &p).unwrap(), c.c().scale(&r(71, 90)));
        assert_eq!(s_restricted_affine(&c, &p, "generic").unwrap(), c.c().scale(&r(1, 36)));
        assert_eq!(s_restricted_affine(&c, &p, "m").unwrap(), c.c().scale(&r(6, 210)));
        assert!(matches!(s_restricted_at(&c, &p, "nowhere"), Err(Error::UnknownPoint(_))));
        let c = cfg(Preset::SpecialPointEven, 2, r(3, 5));
        let p = build_profile(&c).unwrap();
        assert_eq!(s_affine(&c, &p).unwrap(), c.c().scale(&r(5, 6)));
        let c = cfg(Preset::PzBlowupOdd, 3, r(1, 2));
        let p = build_profile(&c).unwrap();
        assert_eq!(s_affine(&c, &p).unwrap(), c.c().scale(&r(2, 15)));
        let c = cfg(Preset::PzBlowupEven, 2, r(3, 5));
        let p = build_profile(&c).unwrap();
        assert_eq!(s_restricted_affine(&c, &p, "generic").unwrap(), c.c().scale(&r(1, 3)));
        for n in [3u64, 4] {
            let c = cfg(Preset::H1Flag, n, r(3, 5));
            assert_eq!(s_affine(&c, &build_profile(&c).unwrap()).unwrap(), c.c().scale(&r(1, 3)));
            let c = cfg(Preset::PencilFlag, n, r(3, 5));
            let wz = c.reference_degree();
            assert_eq!(s_affine(&c, &build_profile(&c).unwrap()).unwrap(), c.c().scale(&(Rat::int(3) * wz).recip()));
        }
    }

    #[test]
    fn bounds() {
        let rep = az_delta_bound(&cfg(Preset::SpecialPointOdd, 3, r(121, 204))).unwrap();
        assert_eq!(rep.delta_lower_bound, Rat::one());
        let rep = az_delta_bound(&cfg(Preset::PzBlowupOdd, 3, r(1, 2) + r(1, 1000))).unwrap();
        assert!(rep.delta_lower_bound > Rat::one());
        let rep = az_delta_bound(&cfg(Preset::SpecialPointOdd, 3, r(122, 204))).unwrap();
        assert!(rep.delta_lower_bound < Rat::one());
        assert!(az_delta_bound(&cfg(Preset::PzBlowupOdd, 3, r(1, 2))).is_err());
    }

    #[test]
    fn pz_ratio_at_half() {
        let c = cfg(Preset::PzBlowupOdd, 3, r(1, 2));
        let p = build_profile(&c).unwrap();
        let a = c.a_e().eval(&c.w);
        let s = s_from_profile(&c, &p).unwrap();
        assert_eq!((a.clone(), s.clone()), (r(2, 5), r(4, 15)));
        assert_eq!(a / s, r(3, 2));
    }

    #[test]
    fn critical_weights() {
        assert_eq!(solve_critical_weight(&cfg(Preset::SpecialPointOdd, 3, r(1, 2))).unwrap(), r(121, 204));
        assert_eq!(solve_critical_weight(&cfg(Preset::SpecialPointEven, 2, r(1, 2))).unwrap(), r(13, 22));
        assert_eq!(solve_critical_weight(&cfg(Preset::SpecialPointOdd, 5, r(1, 2))).unwrap(), r(289, 496));
        assert_eq!(xi(5), r(289, 496));
        assert!(solve_critical_weight(&cfg(Preset::H1Flag, 3, r(1, 2))).is_err());
    }

    #[test]
    fn parity_checks() {
        assert!(FlagConfig::new(Preset::SpecialPointOdd, 2, r(1, 2)).is_err());
        assert!(FlagConfig::new(Preset::SpecialPointEven, 3, r(1, 2)).is_err());
        assert_eq!("pencil_flag".parse::<Preset>().unwrap(), Preset::PencilFlag);
        assert!("cubic".parse::<Preset>().is_err());
    }
}
