//! Independent cross-checks for the wall computations.

use std::collections::BTreeSet;

use mukai_kit::lattice::{CohVector, NsClass, SurfaceData};
use mukai_kit::rational::{frac, int, Rational};
use mukai_kit::walls::{ScanParams, WallHit, WallProblem};
use num_traits::Zero;

fn ray_pairing(p: &WallProblem, u: &CohVector, sp: &ScanParams, t: &Rational) -> Rational {
    let omega = p.scan_omega(sp.r0, &sp.m, &sp.n).scale(t);
    let xi = p.xi_class(&sp.beta_prime, &omega).unwrap();
    p.surface.pair(&xi, u).unwrap()
}

/// `⟨ξ(β', tω'), u⟩ / t` is affine in `t²`; interpolate it from `t = 1, 2`.
fn root_in_t2(p: &WallProblem, u: &CohVector, sp: &ScanParams) -> Option<Rational> {
    let g1 = ray_pairing(p, u, sp, &int(1));
    let g2 = ray_pairing(p, u, sp, &int(2)) / int(2);
    let slope = (&g2 - &g1) / int(3);
    let intercept = &g1 - &slope;
    if slope.is_zero() {
        return None;
    }
    Some(-intercept / slope)
}

/// Scan by brute force over `u = D0 + kf + aϱ`, `|k| ≤ 50`.
fn brute_scan(p: &WallProblem, sp: &ScanParams) -> BTreeSet<(Rational, Vec<num_bigint::BigInt>)> {
    let s = &p.surface;
    let ell = p.ell as i64;
    let mut shapes = vec![NsClass::zero(s.rank())];
    for d in &s.minus2_fiber_classes {
        shapes.push(d.clone());
        shapes.push(-d);
    }
    let mut out = BTreeSet::new();
    let t_max_sq = &sp.t_max * &sp.t_max;
    for d0 in &shapes {
        for k in -50..=50 {
            for a in -ell - 1..=0 {
                let ns = d0 + &s.f.scale(&int(k));
                let u = CohVector::new(int(0), ns, int(a));
                let wall = p.bm_class(&u).unwrap().is_some()
                    || p.bm_class(&(&p.v - &u)).unwrap().is_some();
                if !wall {
                    continue;
                }
                let Some(t2) = root_in_t2(p, &u, sp) else { continue };
                if t2 < int(1) || t2 > t_max_sq {
                    continue;
                }
                if !p.satisfies_f_u(&u, &sp.beta_prime, sp.r0, &sp.m, &sp.n).unwrap() {
                    continue;
                }
                out.insert((t2, p.key_of(&u).unwrap().0));
            }
        }
    }
    out
}

fn check_scan(p: &WallProblem, sp: &ScanParams) {
    let hits = p.scan(sp).unwrap();
    let got: BTreeSet<_> = hits
        .iter()
        .map(|h| (h.t2.clone(), h.wall.key.0.clone()))
        .collect();
    assert_eq!(got.len(), hits.len(), "duplicates in scan");
    assert_eq!(got, brute_scan(p, sp));
    for h in &hits {
        let u = &h.wall.u;
        assert_eq!(root_in_t2(p, u, sp).as_ref(), Some(&h.t2));
    }
}

fn section_params() -> ScanParams {
    ScanParams {
        beta_prime: NsClass::from_ints(&[-1, 0]),
        r0: 1,
        m: int(10),
        n: int(5),
        t_max: int(10),
    }
}

#[test]
fn scan_matches_brute_force_section() {
    let p = WallProblem::new(SurfaceData::k3_with_section(), 1).unwrap();
    check_scan(&p, &section_params());
    for ell in 1..=3 {
        let p = WallProblem::new(SurfaceData::k3_with_section(), ell).unwrap();
        let sp = ScanParams {
            t_max: int(100),
            ..section_params()
        };
        check_scan(&p, &sp);
    }
}

#[test]
fn scan_matches_brute_force_i2() {
    for (ell, beta) in [(1, [-1, 0, 1]), (2, [-1, 0, 0]), (3, [-2, -1, 0])] {
        let p = WallProblem::new(SurfaceData::k3_with_i2_fiber(), ell).unwrap();
        for r0 in [1, 2] {
            let sp = ScanParams {
                beta_prime: NsClass::from_ints(&beta),
                r0,
                m: int(10),
                n: int(5),
                t_max: int(100),
            };
            if p.scan_preconditions(&sp).unwrap().iter().all(|c| c.passed) {
                check_scan(&p, &sp);
            }
        }
    }
}

#[test]
fn wall_hit_substitutes_back() {
    let p = WallProblem::new(SurfaceData::k3_with_i2_fiber(), 2).unwrap();
    let sp = ScanParams {
        beta_prime: NsClass::from_ints(&[-1, 0, 1]),
        r0: 1,
        m: frac(7, 2),
        n: int(3),
        t_max: int(100),
    };
    let mut solved = 0;
    for k in -6..=6 {
        for c in -1..=1 {
            for a in -3..=0 {
                let u = CohVector::from_ints(0, &[0, k, c], a);
                match p.wall_hit_t2(&u, &sp.beta_prime, sp.r0, &sp.m, &sp.n).unwrap() {
                    WallHit::At(t2) => {
                        assert_eq!(root_in_t2(&p, &u, &sp), Some(t2));
                        solved += 1;
                    }
                    WallHit::Never => {
                        if let Some(t2) = root_in_t2(&p, &u, &sp) {
                            assert!(t2 <= int(0));
                        }
                    }
                    WallHit::Everywhere => {
                        assert!(ray_pairing(&p, &u, &sp, &int(1)).is_zero());
                        assert!(ray_pairing(&p, &u, &sp, &int(3)).is_zero());
                    }
                }
            }
        }
    }
    assert!(solved > 0);
}

#[test]
fn oracle_keys_come_from_small_squares() {
    for ell in 1..=3 {
        let p = WallProblem::new(SurfaceData::k3_with_i2_fiber(), ell).unwrap();
        for u in p.brute_oracle_vectors(2).unwrap() {
            let uu = p.surface.pair(&u, &u).unwrap();
            assert!(uu == int(0) || uu == int(-2), "{u:?} has ⟨u²⟩ = {uu}");
        }
    }
}
