//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;

use wpkstab::azflag::{az_delta_bound, build_profile, s_affine, solve_critical_weight, FlagConfig, Preset};
use wpkstab::exactalg::{r, Affine};
use wpkstab::kclass::{
    classify_at, complexity_one_critical_weight, last_wall_replacement, reduce_hypersurface, reembed,
    verify_complexity_one_polystable, wall_degeneration, PolystablePair,
};
use wpkstab::lct::lct_pair;
use wpkstab::vgit::{
    brute_force_git_oracle, domain_end, enumerate_walls, git_classify, last_wall_index, stratum_description, wall,
    wall_alt, xi, FamilyPoint,
};
use wpkstab::wps::{h0_count, WPPlane};
use wpkstab::Rat;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rats(v: &[(i64, i64)]) -> Vec<Rat> {
    v.iter().map(|&(p, q)| r(p, q)).collect()
}

fn schedule_matches(n: u64, walls: &[(i64, i64)], xi_val: (i64, i64), end: (i64, i64)) -> Outcome {
    let s = enumerate_walls(n).map_err(|e| e.to_string())?;
    ensure(s.git_walls() == rats(walls), || format!("walls {:?}", s.git_walls()))?;
    ensure(s.xi() == r(xi_val.0, xi_val.1), || format!("xi {}", s.xi()))?;
    ensure(s.domain_end == r(end.0, end.1), || format!("domain end {}", s.domain_end))?;
    Ok(format!("walls {:?}, xi {}, end {}", s.git_walls(), s.xi(), s.domain_end))
}

fn criterion_1() -> Outcome {
    schedule_matches(3, &[(5, 12), (3, 7), (11, 24)], (121, 204), (2, 3))
}

fn criterion_2() -> Outcome {
    schedule_matches(2, &[(2, 5), (11, 26), (1, 2)], (13, 22), (7, 10))
}

fn criterion_3() -> Outcome {
    for n in (1..=21u64).step_by(2) {
        let half = (n + 3) / 2;
        for i in 0..=half {
            ensure(wall(n, i) == wall_alt(n, i), || format!("n={} i={}: {} vs {}", n, i, wall(n, i), wall_alt(n, i)))?;
        }
        ensure(wall(n, half) == domain_end(n), || format!("n={}: last wall is not the domain end", n))?;
        let vals = enumerate_walls(n).map_err(|e| e.to_string())?.values();
        ensure(vals.windows(2).all(|p| p[0] < p[1]), || format!("n={}: schedule not increasing", n))?;
        let x = xi(n);
        ensure(x > r(1, 2) && x < domain_end(n), || format!("n={}: xi {} outside (1/2, end)", n, x))?;
    }
    Ok("odd n = 1..21".into())
}

fn criterion_4() -> Outcome {
    for n in [1u64, 3, 5, 7] {
        let rep = lct_pair(&FamilyPoint::dss(n)).map_err(|e| e.to_string())?;
        let expect = r(n as i64 + 6, 2 * n as i64 + 8);
        ensure(rep.lct == expect, || format!("n={}: lct {} != {}", n, rep.lct, expect))?;
        let sing = format!("A{}", n + 3);
        ensure(rep.singularity.as_deref() == Some(sing.as_str()), || format!("n={}: {:?}", n, rep.singularity))?;
        ensure(rep.is_dss, || format!("n={}: not detected as D_ss", n))?;
    }
    for l in [1u64, 2, 3] {
        let rep = lct_pair(&FamilyPoint::dss(2 * l)).map_err(|e| e.to_string())?;
        let expect = r(l as i64 + 3, 2 * l as i64 + 4);
        ensure(rep.lct == expect, || format!("l={}: lct {} != {}", l, rep.lct, expect))?;
        ensure(rep.is_dss, || format!("l={}: not detected as D_ss", l))?;
    }
    Ok("n in {1,3,5,7}, l in {1,2,3}".into())
}

/// One interior weight per chamber below xi, plus every GIT wall.
fn sweep_weights(n: u64) -> Vec<Rat> {
    let s = enumerate_walls(n).unwrap();
    let x = s.xi();
    let walls: Vec<Rat> = s.git_walls().into_iter().filter(|w| *w < x).collect();
    let mut cuts = vec![Rat::zero()];
    cuts.extend(walls.iter().cloned());
    cuts.push(x);
    let mut ws: Vec<Rat> = cuts.windows(2).map(|p| (&p[0] + &p[1]) / Rat::int(2)).collect();
    ws.extend(walls);
    ws
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(5);
    let mut cases = Vec::new();
    for n in [1u64, 3, 5, 2, 4] {
        for w in sweep_weights(n) {
            for _ in 0..500 {
                cases.push((common::random_point(&mut rng, n), w.clone()));
            }
        }
    }
    cases.par_iter().try_for_each(|(p, w)| {
        let g = git_classify(p, w).map_err(|e| e.to_string())?;
        let k = classify_at(p, w).map_err(|e| e.to_string())?;
        ensure((g.semistable, g.polystable) == (k.semistable(), k.polystable()), || {
            format!("n={} w={} point {:?}: git {:?} vs k {}", p.n, w, p, g, k)
        })
    })?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {:.1}s", secs))?;
    Ok(format!("{} cases agree in {:.2}s", cases.len(), secs))
}

fn criterion_6() -> Outcome {
    let mut rng = common::rng(6);
    for (label, ns) in [("odd", [1u64, 3, 5]), ("even", [2, 4, 6])] {
        for k in 0..1000 {
            let n = ns[k % 3];
            let p = common::random_point(&mut rng, n);
            let w = common::random_weight(&mut rng, n);
            let g = git_classify(&p, &w).map_err(|e| e.to_string())?;
            let o = brute_force_git_oracle(&p, &w, 30).map_err(|e| e.to_string())?;
            ensure((g.semistable, g.polystable) == (o.semistable, o.polystable), || {
                format!("{} n={} w={} {:?}: cone {:?} vs oracle {:?}", label, n, w, p, g, o)
            })?;
        }
    }
    Ok("1000 pairs per parity".into())
}

fn criterion_7() -> Outcome {
    for n in [1u64, 3, 5, 7] {
        let cfg = FlagConfig::new(Preset::SpecialPointOdd, n, Rat::zero()).map_err(|e| e.to_string())?;
        let s = s_affine(&cfg, &build_profile(&cfg).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let ni = n as i64;
        let c = Affine::new(Rat::int(ni + 5), Rat::int(-(2 * ni + 6)));
        let expect = c.scale(&r(2 * ni * ni + 12 * ni + 17, 3 * (ni + 2) * (ni + 3)));
        ensure(s == expect, || format!("n={}: S = {:?}, expected {:?}", n, s, expect))?;
    }
    let mut cases: Vec<(Preset, u64)> = (1..=21u64).step_by(2).map(|n| (Preset::SpecialPointOdd, n)).collect();
    cases.extend((1..=10u64).map(|l| (Preset::SpecialPointEven, 2 * l)));
    for (preset, n) in cases {
        let cfg = FlagConfig::new(preset, n, Rat::zero()).map_err(|e| e.to_string())?;
        let w = solve_critical_weight(&cfg).map_err(|e| e.to_string())?;
        ensure(w == xi(n), || format!("{} n={}: {} != {}", preset, n, w, xi(n)))?;
        let rep = az_delta_bound(&FlagConfig::new(preset, n, w).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(rep.delta_lower_bound == Rat::one(), || format!("{} n={}: bound {}", preset, n, rep.delta_lower_bound))?;
    }
    Ok("S closed form for n in {1,3,5,7}; xi for odd n <= 21 and l <= 10".into())
}

fn criterion_8() -> Outcome {
    let mut count = 0;
    for n in [3u64, 5, 2, 4] {
        let lo = if n % 2 == 1 { (n + 3) / 2 } else { n / 2 + 2 };
        for e in lo..=n + 3 {
            let pair = PolystablePair::monomial(n, e).map_err(|e| e.to_string())?;
            let w = complexity_one_critical_weight(&pair).map_err(|e| e.to_string())?;
            ensure(w == wall(n, n + 3 - e), || format!("n={} e={}: critical weight {}", n, e, w))?;
            let rep = verify_complexity_one_polystable(&pair, &w).map_err(|e| e.to_string())?;
            ensure(rep.passed, || format!("n={} e={}: {:?}", n, e, rep))?;
            count += 1;
        }
        let pair = last_wall_replacement(n).map_err(|e| e.to_string())?;
        let rep = verify_complexity_one_polystable(&pair, &xi(n)).map_err(|e| e.to_string())?;
        ensure(rep.passed, || format!("n={} {:?}: {:?}", n, pair.kind, rep))?;
        count += 1;
    }
    Ok(format!("{} pairs pass", count))
}

fn criterion_9() -> Outcome {
    let mut rng = common::rng(9);
    let mut count = 0;
    for n in [3u64, 2] {
        let top = (n + 3) as usize;
        for i in 0..=last_wall_index(n) {
            let wi = wall(n, i);
            if wi >= domain_end(n) {
                continue;
            }
            let e = top - i as usize;
            let pair = PolystablePair::monomial(n, e as u64).map_err(|e| e.to_string())?;
            let stratum = stratum_description(n, &wi).map_err(|e| e.to_string())?;
            for k in 0..100 {
                let mut p = common::random_point(&mut rng, n);
                p.ai[e] = common::nonzero_rat(&mut rng);
                if k % 2 == 0 || e == top {
                    p.ai[e + 1..].iter_mut().for_each(|c| *c = Rat::zero());
                } else {
                    p.a = Rat::zero();
                    p.ai[..e].iter_mut().for_each(|c| *c = Rat::zero());
                }
                let d = wall_degeneration(&p, i).map_err(|e| e.to_string())?;
                ensure(d.pair == pair, || format!("n={} i={}: pair {:?}", n, i, d.pair))?;
                if let Some(lam) = d.lambda {
                    ensure(p.limit(lam).as_ref() == Some(&d.limit), || format!("n={} i={}: limit mismatch", n, i))?;
                }
                // D_e up to the torus rescaling of its single coefficient
                let mut normalized = d.limit.clone();
                let c = normalized.ai[e].clone();
                normalized.ai[e] = &normalized.ai[e] / &c;
                ensure(Some(normalized) == pair.point(), || format!("n={} i={}: limit {:?}", n, i, d.limit))?;
                ensure(stratum.parameterizes(&d.limit), || format!("n={} i={}: limit outside stratum", n, i))?;
                count += 1;
            }
        }
    }
    Ok(format!("{} degenerations", count))
}

fn criterion_10() -> Outcome {
    let a = h0_count(&WPPlane::new([1, 2, 5], ["x", "y", "z"]).map_err(|e| e.to_string())?, 12);
    let b = h0_count(&WPPlane::new([1, 5, 18], ["x0", "x1", "x2"]).map_err(|e| e.to_string())?, 36);
    let n = 3;
    ensure(a == 13 && b == 13 && (3 * n + 17) / 2 == 13, || format!("{} and {}", a, b))?;
    Ok(format!("{} = {} = (3n+17)/2", a, b))
}

fn criterion_11() -> Outcome {
    let mut rng = common::rng(11);
    for (label, ns) in [("odd", [1u64, 3, 5]), ("even", [2, 4, 6])] {
        for k in 0..100 {
            let n = ns[k % 3];
            let f = common::random_hypersurface(&mut rng, n);
            let red = reduce_hypersurface(n, &f).map_err(|e| e.to_string())?;
            ensure(reembed(&red) == f, || format!("{} n={} sample {}: round trip differs", label, n, k))?;
        }
    }
    Ok("100 inputs per parity".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "wall schedule n=3", criterion_1),
        (2, "wall schedule n=2", criterion_2),
        (3, "wall formulas agree, odd n <= 21", criterion_3),
        (4, "lct of D_ss", criterion_4),
        (5, "GIT and K verdicts agree below xi", criterion_5),
        (6, "brute-force GIT oracle agrees", criterion_6),
        (7, "AZ integrals and critical weight", criterion_7),
        (8, "complexity-one polystability", criterion_8),
        (9, "wall degenerations", criterion_9),
        (10, "h0 bridge", criterion_10),
        (11, "hypersurface reduction round trip", criterion_11),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2}: {} ({})", id, name, detail),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {}: {}", id, name, why);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
