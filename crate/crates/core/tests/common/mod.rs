//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wpkstab::exactalg::r;
use wpkstab::kclass::{hypersurface_weights, Poly4};
use wpkstab::vgit::{domain_end, enumerate_walls, FamilyPoint};
use wpkstab::Rat;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn nonzero_rat(rng: &mut ChaCha8Rng) -> Rat {
    let mut p = 0;
    while p == 0 {
        p = rng.gen_range(-9..=9);
    }
    r(p, rng.gen_range(1..=4))
}

/// Random nonzero point; the per-point density mixes sparse and dense supports.
pub fn random_point(rng: &mut ChaCha8Rng, n: u64) -> FamilyPoint {
    let density = *[0.15, 0.35, 0.6, 0.9].choose(rng).unwrap();
    let mut p = FamilyPoint::zero(n);
    if rng.gen_bool(density) {
        p.a = nonzero_rat(rng);
    }
    for c in p.ai.iter_mut() {
        if rng.gen_bool(density) {
            *c = nonzero_rat(rng);
        }
    }
    if p.is_zero() {
        let i = rng.gen_range(0..p.ai.len());
        p.ai[i] = nonzero_rat(rng);
    }
    p
}

/// Random weight in (0, domain_end); one in five draws is a schedule value.
pub fn random_weight(rng: &mut ChaCha8Rng, n: u64) -> Rat {
    let end = domain_end(n);
    if rng.gen_bool(0.2) {
        let s = enumerate_walls(n).unwrap();
        let vals: Vec<Rat> = s.values().into_iter().filter(|w| *w < end).collect();
        return vals.choose(rng).unwrap().clone();
    }
    loop {
        let q = rng.gen_range(2..=120i64);
        let w = r(rng.gen_range(1..q), q);
        if w < end {
            return w;
        }
    }
}

/// Monomials t^a x^b y^c z^d of weighted degree `deg`.
pub fn monomials(n: u64, deg: u64, with_t: bool) -> Vec<[u32; 4]> {
    let wt = hypersurface_weights(n);
    let mut out = Vec::new();
    for a in 0..=(deg / wt[0]) {
        if a > 0 && !with_t {
            break;
        }
        for d in 0..=(deg / wt[3]) {
            for c in 0..=(deg / wt[2]) {
                let used = a * wt[0] + d * wt[3] + c * wt[2];
                if used <= deg {
                    out.push([a as u32, (deg - used) as u32, c as u32, d as u32]);
                }
            }
        }
    }
    out
}

/// Generic t²-containing hypersurface of degree 2(n+3): every allowed monomial gets a nonzero coefficient.
pub fn random_hypersurface(rng: &mut ChaCha8Rng, n: u64) -> Poly4 {
    let mut f = Poly4::zero();
    for e in monomials(n, 2 * (n + 3), true) {
        f.add_term(e, nonzero_rat(rng));
    }
    f
}
