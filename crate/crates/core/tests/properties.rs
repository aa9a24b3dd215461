use mukai_kit::charge::{phase_cmp, GaussRational};
use mukai_kit::cli::ConfigFile;
use mukai_kit::fm::FmData;
use mukai_kit::lattice::{CohVector, NsClass, SurfaceData, VectorKind};
use mukai_kit::rational::{format_rational, frac, int, parse_rational, Rational};
use mukai_kit::walls::WallProblem;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=7).prop_map(|(p, q)| frac(p, q))
}

fn small_int() -> impl Strategy<Value = i64> {
    -4i64..=4
}

fn class(rank: usize) -> impl Strategy<Value = NsClass> {
    prop::collection::vec(rat(), rank).prop_map(NsClass::new)
}

fn vector(rank: usize) -> impl Strategy<Value = CohVector> {
    (rat(), class(rank), rat()).prop_map(|(r, ns, s)| CohVector::new(r, ns, s))
}

fn int_vector(rank: usize) -> impl Strategy<Value = CohVector> {
    (small_int(), prop::collection::vec(small_int(), rank), small_int())
        .prop_map(|(r, ns, s)| CohVector::from_ints(r, &ns, s))
}

fn surfaces() -> impl Strategy<Value = SurfaceData> {
    prop_oneof![
        Just(SurfaceData::k3_with_section()),
        Just(SurfaceData::k3_with_i2_fiber())
    ]
}

proptest! {
    #[test]
    fn pairing_symmetric((s, u, w) in surfaces().prop_flat_map(|s| {
        let n = s.rank();
        (Just(s), vector(n), vector(n))
    })) {
        prop_assert_eq!(s.pair(&u, &w).unwrap(), s.pair(&w, &u).unwrap());
    }

    #[test]
    fn dual_is_involution(u in vector(2)) {
        prop_assert_eq!(u.dual().dual(), u);
    }

    #[test]
    fn exp_is_multiplicative(a in class(2), b in class(2)) {
        let s = SurfaceData::k3_with_section();
        let lhs = s.exp_class(&(&a + &b)).unwrap();
        let rhs = s.mul(&s.exp_class(&a).unwrap(), &s.exp_class(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn twisting_preserves_pairing(u in vector(3), w in vector(3), beta in class(3)) {
        let s = SurfaceData::k3_with_i2_fiber();
        let tu = s.twist(&u, &beta).unwrap();
        let tw = s.twist(&w, &beta).unwrap();
        prop_assert_eq!(s.pair(&tu, &tw).unwrap(), s.pair(&u, &w).unwrap());
    }

    #[test]
    fn beta_expansion_reassembles(u in vector(3), beta in class(3)) {
        let s = SurfaceData::k3_with_i2_fiber();
        let e = s.beta_expand(&u, &beta, VectorKind::Mukai).unwrap();
        prop_assert!(s.dot(&e.d, &s.f).unwrap().is_zero());
        prop_assert!(s.dot(&e.d, &s.h).unwrap().is_zero());
        prop_assert_eq!(s.reassemble(&e).unwrap(), u);
    }

    #[test]
    fn beta_solve_kills_pairing(b in rat(), r0 in 1u64..=4, beta0 in class(2)) {
        let s = SurfaceData::k3_with_section();
        let eta = s.f.scale(&int(r0 as i64));
        let beta = s.beta_solve(&eta, &b, &beta0).unwrap();
        let v0 = CohVector::new(Rational::zero(), eta, b);
        prop_assert!(s.pair(&s.exp_class(&beta).unwrap(), &v0).unwrap().is_zero());
    }

    #[test]
    fn transform_is_isometry(r0 in 1u64..=3, b in -2i64..=2, u in vector(3), w in vector(3)) {
        let fm = FmData::self_dual(SurfaceData::k3_with_i2_fiber(), r0, int(b)).unwrap();
        let s = &fm.source;
        prop_assert_eq!(
            s.pair(&fm.apply(&u).unwrap(), &fm.apply(&w).unwrap()).unwrap(),
            s.pair(&u, &w).unwrap()
        );
    }

    #[test]
    fn transform_squares_to_minus_dual_free_part(r0 in 1u64..=3, u in vector(2)) {
        // M² = −I on the rank-4 block
        let fm = FmData::self_dual(SurfaceData::k3_with_section(), r0, Rational::zero()).unwrap();
        let m = fm.matrix().unwrap();
        let sq = m.forward.mul(&m.forward).unwrap();
        let coords = [u.r.clone(), u.ns.coords()[0].clone(), u.ns.coords()[1].clone(), u.s.clone()];
        let image = sq.apply(&coords).unwrap();
        for (a, b) in image.iter().zip(coords.iter()) {
            prop_assert_eq!(a, &-b);
        }
    }

    #[test]
    fn xi_identity(ell in 1u64..=3, beta in class(3), omega in class(3)) {
        let p = WallProblem::new(SurfaceData::k3_with_i2_fiber(), ell).unwrap();
        let xi = p.xi_class(&beta, &omega).unwrap();
        prop_assert_eq!(&xi, &p.xi_direct(&beta, &omega).unwrap());
        prop_assert!(p.surface.pair(&xi, &p.v).unwrap().is_zero());
    }

    #[test]
    fn wall_key_invariance(ell in 1u64..=3, u in int_vector(3), c in 1i64..=5) {
        let p = WallProblem::new(SurfaceData::k3_with_i2_fiber(), ell).unwrap();
        let key = p.key_of(&u);
        prop_assert_eq!(&key, &p.key_of(&(&p.v - &u)));
        prop_assert_eq!(&key, &p.key_of(&u.scale(&int(c))));
        if let Some(k) = key {
            let first = k.0.iter().find(|x| !x.is_zero()).unwrap();
            prop_assert!(*first > 0.into());
        }
    }

    #[test]
    fn phase_order_antisymmetric(a in rat(), b in rat(), c in rat(), d in rat()) {
        let z1 = GaussRational::new(a, b);
        let z2 = GaussRational::new(c, d);
        prop_assume!(!z1.is_zero() && !z2.is_zero());
        prop_assert_eq!(phase_cmp(&z1, &z2).unwrap(), phase_cmp(&z2, &z1).unwrap().reverse());
        let scaled = z1.scale(&frac(3, 2));
        prop_assert_eq!(phase_cmp(&z1, &scaled).unwrap(), std::cmp::Ordering::Equal);
    }

    #[test]
    fn rational_text_roundtrip(q in rat()) {
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }

    #[test]
    fn config_roundtrip(entries in prop::collection::vec(rat(), 4), b in rat(), r0 in 1i64..=5) {
        let text = format!(
            r#"{{"surface": {{"name": "x", "chi": 2, "ns_rank": 2,
                "gram": [["-2", "1"], ["1", "0"]], "f": ["0", "1"], "H": ["1", "1"], "K": ["0", "0"],
                "integrality_scale_l": 1}},
              "fm": {{"r0": {r0}, "b": "{}", "beta": ["{}", "{}"], "beta_prime": ["{}", "{}"]}}}}"#,
            format_rational(&b),
            format_rational(&entries[0]),
            format_rational(&entries[1]),
            format_rational(&entries[2]),
            format_rational(&entries[3]),
        );
        let file = ConfigFile::from_json(&text).unwrap();
        let again = ConfigFile::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(&file, &again);
        prop_assert_eq!(file.to_json(), again.to_json());
    }
}

#[test]
fn delta_matches_enumeration() {
    let s = SurfaceData::k3_with_i2_fiber();
    for l in [[1, 1, 0], [1, 3, 0], [2, 5, 1], [1, 4, 1]] {
        let l = NsClass::from_ints(&l);
        let ll = s.dot(&l, &l).unwrap();
        if ll <= Rational::zero() {
            continue;
        }
        let mut best: Option<Rational> = None;
        for a in -6..=6 {
            for b in -6..=6 {
                for c in -6..=6 {
                    let x = s.dot(&NsClass::from_ints(&[a, b, c]), &l).unwrap();
                    if x > Rational::zero() && best.as_ref().is_none_or(|m| &x < m) {
                        best = Some(x);
                    }
                }
            }
        }
        assert_eq!(s.delta_min(&l).unwrap(), best.unwrap() / ll);
    }
}

#[test]
fn exp_of_zero_is_one() {
    let s = SurfaceData::k3_with_section();
    assert_eq!(s.exp_class(&NsClass::zero(2)).unwrap(), CohVector::unit(2));
    assert!(CohVector::unit(2).r.is_one());
}
