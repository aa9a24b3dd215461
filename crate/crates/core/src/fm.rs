//! Cohomological action of the relative Fourier–Mukai transform attached to
//! an isotropic vector `v0 = e^β(r0 f)`.
//!
//! The transform is pinned down by its values on `e^β`, `He^β`, `fe^β`, `ϱ`
//! together with an isometry `D ↦ D'` between the lattices `f^⊥ ∩ H^⊥`:
//!
//! ```text
//! Φ(e^β(r + pH + qf + D + aϱ)) = e^{β'}((r/r0)H' − p r0 + (q/r0)ϱ' + D' − a r0 f')
//! ```

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::charge::{pair_gauss, GaussRational, ScaleRotation};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::lattice::{CohVector, GaussCohVector, NsClass, SurfaceData, VectorKind};
use crate::linalg::Matrix;
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FmData {
    pub source: SurfaceData,
    pub target: SurfaceData,
    pub r0: u64,
    /// `v0 = r0 f + b ϱ` before twisting.
    pub b: Rational,
    pub beta: NsClass,
    pub beta_prime: NsClass,
    /// Acts on NS coordinates; only its restriction to `f^⊥ ∩ H^⊥` matters.
    pub d_map: Matrix,
}

/// The 4×4 block on `(e^β, He^β, fe^β, ϱ) → (e^{β'}, H'e^{β'}, f'e^{β'}, ϱ')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FmMatrix {
    pub forward: Matrix,
    pub inverse: Matrix,
    pub det: Rational,
    pub d_block: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexImage {
    /// `−r0 z`.
    pub scale: GaussRational,
    /// `e^{β' − H'/(r0² z) + w f'}` expanded.
    pub image: GaussCohVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityImage {
    pub alpha: ScaleRotation,
    pub beta_prime: NsClass,
    pub omega_prime: NsClass,
    pub hypotheses: Vec<Check>,
    /// Condition under which the reverse transform sees `v0'` in the
    /// large volume regime; uses the target's `l'`.
    pub duality_condition: Check,
    pub charge_identity: Check,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dim1Image {
    pub image: CohVector,
    pub d: Rational,
    pub delta: Rational,
    pub lhs: Rational,
    pub rhs: Rational,
    pub regime_ok: bool,
}

fn require_positive(name: &str, x: &Rational) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {x} must be positive")))
    }
}

impl FmData {
    /// `d_map = None` means the identity on NS coordinates, which needs equal
    /// ranks.
    pub fn new(
        source: SurfaceData,
        target: SurfaceData,
        r0: u64,
        b: Rational,
        beta: NsClass,
        beta_prime: NsClass,
        d_map: Option<Matrix>,
    ) -> Result<Self> {
        if r0 == 0 {
            return Err(Error::Domain("r0 must be positive".into()));
        }
        source.check_class(&beta)?;
        target.check_class(&beta_prime)?;
        let d_map = match d_map {
            Some(m) => m,
            None if source.rank() == target.rank() => Matrix::identity(source.rank()),
            None => {
                return Err(Error::Domain(
                    "d_map is required when source and target NS ranks differ".into(),
                ))
            }
        };
        if d_map.rows() != target.rank() || d_map.cols() != source.rank() {
            return Err(Error::Domain(format!(
                "d_map must be {}x{}, got {}x{}",
                target.rank(),
                source.rank(),
                d_map.rows(),
                d_map.cols()
            )));
        }
        Ok(FmData {
            source,
            target,
            r0,
            b,
            beta,
            beta_prime,
            d_map,
        })
    }

    /// The transform of a surface to itself with `β' = 0` and `β` chosen along
    /// `H` so that `⟨e^β, r0 f + bϱ⟩ = 0`.
    pub fn self_dual(surface: SurfaceData, r0: u64, b: Rational) -> Result<Self> {
        let rank = surface.rank();
        let eta = surface.f.scale(&int(r0 as i64));
        let beta = surface.beta_solve(&eta, &b, &NsClass::zero(rank))?;
        FmData::new(
            surface.clone(),
            surface,
            r0,
            b,
            beta,
            NsClass::zero(rank),
            None,
        )
    }

    fn r0q(&self) -> Rational {
        int(self.r0 as i64)
    }

    pub fn v0(&self) -> CohVector {
        CohVector::new(Rational::zero(), self.source.f.scale(&self.r0q()), self.b.clone())
    }

    /// `v0' = e^{β'}(r0 f')`.
    pub fn v0_prime(&self) -> Result<CohVector> {
        self.target.twist(
            &CohVector::from_class(self.target.f.scale(&self.r0q())),
            &self.beta_prime,
        )
    }

    /// Spanning set of `f^⊥ ∩ H^⊥` on the source.
    fn d_lattice_span(&self) -> Vec<NsClass> {
        let s = &self.source;
        (0..s.rank())
            .map(|i| {
                let e = NsClass::basis(s.rank(), i);
                let p = s.dot(&e, &s.f).expect("rank checked");
                let q = s.dot(&e, &s.h).expect("rank checked");
                &(&e - &s.h.scale(&p)) - &s.f.scale(&q)
            })
            .filter(|d| !d.is_zero())
            .collect()
    }

    fn map_d(&self, d: &NsClass) -> Result<NsClass> {
        Ok(NsClass::new(self.d_map.apply(d.coords())?))
    }

    /// Source basis `(e^β, He^β, fe^β, ϱ)`.
    pub fn source_basis(&self) -> Result<[CohVector; 4]> {
        let s = &self.source;
        let rank = s.rank();
        Ok([
            s.exp_class(&self.beta)?,
            s.twist(&CohVector::from_class(s.h.clone()), &self.beta)?,
            s.twist(&CohVector::from_class(s.f.clone()), &self.beta)?,
            CohVector::point(rank),
        ])
    }

    /// Target basis `(e^{β'}, H'e^{β'}, f'e^{β'}, ϱ')`.
    pub fn target_basis(&self) -> Result<[CohVector; 4]> {
        let t = &self.target;
        let rank = t.rank();
        Ok([
            t.exp_class(&self.beta_prime)?,
            t.twist(&CohVector::from_class(t.h.clone()), &self.beta_prime)?,
            t.twist(&CohVector::from_class(t.f.clone()), &self.beta_prime)?,
            CohVector::point(rank),
        ])
    }

    /// Every invariant of the data, reported rather than thrown.
    pub fn validate(&self) -> Vec<Check> {
        let mut checks = Vec::new();
        for (label, surface) in [("source", &self.source), ("target", &self.target)] {
            let v = surface.violations();
            checks.push(Check::new(
                format!("{label} surface invariants"),
                v.is_empty(),
                v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
            ));
        }
        if checks.iter().any(|c| !c.passed) {
            return checks;
        }
        checks.push(Check::new(
            "χ(O) agrees on source and target",
            self.source.chi == self.target.chi,
            format!("{} vs {}", self.source.chi, self.target.chi),
        ));
        match self.validate_lattice() {
            Ok(more) => checks.extend(more),
            Err(e) => checks.push(Check::new("evaluation", false, e.to_string())),
        }
        checks
    }

    fn validate_lattice(&self) -> Result<Vec<Check>> {
        let s = &self.source;
        let t = &self.target;
        let mut checks = Vec::new();
        let v0 = self.v0();

        let defect = s.pair(&s.exp_class(&self.beta)?, &v0)?;
        checks.push(Check::new("⟨e^β, v0⟩ = 0", defect.is_zero(), defect.to_string()));

        let self_pair = s.pair(&v0, &v0)?;
        checks.push(Check::new(
            "v0 isotropic",
            self_pair.is_zero(),
            self_pair.to_string(),
        ));

        let coords = v0.coords();
        let primitive = if coords.iter().all(|c| c.is_integer()) {
            let g = coords
                .iter()
                .fold(num_bigint::BigInt::zero(), |acc, c| acc.gcd(&c.to_integer()));
            (g.is_one(), format!("coordinate gcd {g}"))
        } else {
            (false, "v0 is not integral".to_string())
        };
        checks.push(Check::new("v0 primitive", primitive.0, primitive.1));

        let v0p = self.v0_prime()?;
        let defect_p = t.pair(&t.exp_class(&self.beta_prime)?, &v0p)?;
        checks.push(Check::new(
            "⟨e^β', v0'⟩ = 0",
            defect_p.is_zero(),
            defect_p.to_string(),
        ));

        let span = self.d_lattice_span();
        let images = span
            .iter()
            .map(|d| self.map_d(d))
            .collect::<Result<Vec<_>>>()?;
        let mut orth = true;
        for img in &images {
            orth &= t.dot(img, &t.f)?.is_zero() && t.dot(img, &t.h)?.is_zero();
        }
        checks.push(Check::new(
            "d_map lands in f'^⊥ ∩ H'^⊥",
            orth,
            format!("{} spanning classes", span.len()),
        ));
        let mut iso = true;
        for i in 0..span.len() {
            for j in 0..=i {
                iso &= s.dot(&span[i], &span[j])? == t.dot(&images[i], &images[j])?;
            }
        }
        checks.push(Check::new("d_map isometry", iso, String::new()));

        let src = self.source_basis()?;
        let imgs = src
            .iter()
            .map(|u| self.apply(u))
            .collect::<Result<Vec<_>>>()?;
        let mut gram_ok = true;
        for i in 0..4 {
            for j in 0..=i {
                gram_ok &= s.pair(&src[i], &src[j])? == t.pair(&imgs[i], &imgs[j])?;
            }
        }
        checks.push(Check::new(
            "pairing preserved on span{e^β, He^β, fe^β, ϱ}",
            gram_ok,
            String::new(),
        ));

        let image_v0 = self.apply(&v0)?;
        checks.push(Check::new(
            "Φ(v0) = ϱ'",
            image_v0 == CohVector::point(t.rank()),
            format!(
                "({})",
                image_v0.coords().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            ),
        ));
        Ok(checks)
    }

    /// The cohomological transform `Φ̄`.
    pub fn apply(&self, v: &CohVector) -> Result<CohVector> {
        let e = self.source.beta_expand(v, &self.beta, VectorKind::Mukai)?;
        let t = &self.target;
        let r0 = self.r0q();
        let ns = &(&t.h.scale(&(&e.r / &r0)) + &self.map_d(&e.d)?) - &t.f.scale(&(&e.a * &r0));
        let inner = CohVector::new(-(&e.p * &r0), ns, &e.q / &r0);
        t.twist(&inner, &self.beta_prime)
    }

    /// `Φ̄(e^{β+zH+wf}) = −r0 z · e^{β' − H'/(r0² z) + wf'}`, verified against
    /// the linear map before returning.
    pub fn apply_complex(&self, z: &GaussRational, w: &GaussRational) -> Result<ComplexImage> {
        if z.is_zero() {
            return Err(Error::Domain("singular parameter z = 0".into()));
        }
        let s = &self.source;
        let t = &self.target;
        let r0 = self.r0q();

        let src_re = &(&self.beta + &s.h.scale(&z.re)) + &s.f.scale(&w.re);
        let src_im = &s.h.scale(&z.im) + &s.f.scale(&w.im);
        let lhs = s.exp_class_complex(&src_re, &src_im)?.map(|u| self.apply(u))?;

        let z_prime = &GaussRational::real(-Rational::one()) / &z.scale(&(&r0 * &r0));
        let tgt_re = &(&self.beta_prime + &t.h.scale(&z_prime.re)) + &t.f.scale(&w.re);
        let tgt_im = &t.h.scale(&z_prime.im) + &t.f.scale(&w.im);
        let image = t.exp_class_complex(&tgt_re, &tgt_im)?;
        let scale = z.scale(&-r0);

        if lhs != image.scale(&scale) {
            return Err(Error::Internal(
                "Φ(e^{β+zH+wf}) differs from −r0 z e^{β'−H'/(r0²z)+wf'}".into(),
            ));
        }
        Ok(ComplexImage { scale, image })
    }

    /// `ω' = (1/(r0² m)) H' + m n f'`.
    pub fn omega_prime(&self, m: &Rational, n: &Rational) -> NsClass {
        let r0 = self.r0q();
        let t = &self.target;
        &t.h.scale(&(Rational::one() / (&r0 * &r0 * m))) + &t.f.scale(&(m * n))
    }

    /// Transport of `(β, m(H + nf))` to the target together with the
    /// hypotheses that make the transported charge a stability condition.
    pub fn stability_image(&self, m: &Rational, n: &Rational) -> Result<StabilityImage> {
        require_positive("m", m)?;
        require_positive("n", n)?;
        let s = &self.source;
        let t = &self.target;
        let r0 = self.r0q();
        let chi = int(s.chi);
        let l = int(s.integrality_scale_l as i64);
        let l_prime = int(t.integrality_scale_l as i64);

        let bound1 = &r0 * &r0 * &chi / int(2);
        let bound2 = &l * &r0 * &r0 * &r0 / (int(2) * n) + &chi / int(2);
        let hypotheses = vec![
            Check::new(
                "n > r0² χ/2",
                n > &bound1,
                format!("{n} > {bound1}"),
            ),
            Check::new(
                "n > l r0³/(2n) + χ/2",
                n > &bound2,
                format!("{n} > {bound2}"),
            ),
        ];
        let lhs_dual = int(2) * n / (&r0 * &r0);
        let rhs_dual = &r0 * &l_prime / (int(2) * m * m * n) + &chi / int(2);
        let duality_condition = Check::new(
            "2n/r0² > r0 l'/(2m²n) + χ/2",
            lhs_dual > rhs_dual,
            format!("{lhs_dual} > {rhs_dual}"),
        );

        let omega = &s.h.scale(m) + &s.f.scale(&(m * n));
        let omega_prime = self.omega_prime(m, n);
        let alpha = ScaleRotation::new(1, &r0 * m)?;
        let src_exp = s.exp_class_complex(&self.beta, &omega)?;
        let tgt_exp = t.exp_class_complex(&self.beta_prime, &omega_prime)?;
        let mut failures = 0usize;
        let samples = self.charge_samples()?;
        for v in &samples {
            let lhs = alpha.apply(&pair_gauss(t, &tgt_exp, &self.apply(v)?)?);
            let rhs = pair_gauss(s, &src_exp, v)?;
            if lhs != rhs {
                failures += 1;
            }
        }
        let charge_identity = Check::new(
            "Ẑ'(Φv)·(−i r0 m) = Ẑ(v)",
            failures == 0,
            format!("{} samples, {failures} mismatches", samples.len()),
        );
        Ok(StabilityImage {
            alpha,
            beta_prime: self.beta_prime.clone(),
            omega_prime,
            hypotheses,
            duality_condition,
            charge_identity,
        })
    }

    fn charge_samples(&self) -> Result<Vec<CohVector>> {
        let rank = self.source.rank();
        let mut out = vec![CohVector::unit(rank), CohVector::point(rank)];
        out.extend((0..rank).map(|i| CohVector::from_class(NsClass::basis(rank, i))));
        out.extend(self.source_basis()?);
        out.extend(self.d_lattice_span().into_iter().map(CohVector::from_class));
        Ok(out)
    }

    /// Matrix of `Φ̄` on the rank-4 sublattice in the twisted bases.
    pub fn matrix(&self) -> Result<FmMatrix> {
        let r0 = self.r0q();
        let inv_r0 = Rational::one() / &r0;
        let z = Rational::zero;
        let forward = Matrix::from_rows(vec![
            vec![z(), -r0.clone(), z(), z()],
            vec![inv_r0.clone(), z(), z(), z()],
            vec![z(), z(), z(), -r0.clone()],
            vec![z(), z(), inv_r0, z()],
        ])?;
        let inverse = forward.inverse()?;
        let det = forward.det()?;
        Ok(FmMatrix {
            forward,
            inverse,
            det,
            d_block: self.d_map.clone(),
        })
    }

    /// Image under the shifted transform `Φ[−1]` of `v = e^β(ξ + aϱ)`, `a > 0`,
    /// with the large volume check on the target at `ω' = H'_{r0²m²n}/(r0² m)`.
    pub fn dim1_image(&self, v: &CohVector, m: &Rational, n: &Rational) -> Result<Dim1Image> {
        require_positive("m", m)?;
        require_positive("n", n)?;
        let e = self.source.beta_expand(v, &self.beta, VectorKind::Mukai)?;
        if !e.r.is_zero() {
            return Err(Error::Hypothesis(format!(
                "rank after twisting by e^-β is {}, expected 0",
                e.r
            )));
        }
        if !e.a.is_positive() {
            return Err(Error::Hypothesis(format!("a = {} must be positive", e.a)));
        }
        let t = &self.target;
        let r0 = self.r0q();
        let image = -self.apply(v)?;

        let big_n = &r0 * &r0 * m * m * n;
        let l_class = &t.h + &t.f.scale(&big_n);
        let l_sq = t.dot(&l_class, &l_class)?;
        let delta = t.delta_min(&l_class)?;
        let d = &e.a * &r0 / (int(2) * &big_n);
        let omega_sq = int(2) * n / (&r0 * &r0);
        let lhs = (omega_sq - int(t.chi)) / int(2);
        let rhs = &d / &delta * (&d * &d * &l_sq - int(2) * &e.p * &e.q) / int(2);
        let regime_ok = lhs > rhs;
        Ok(Dim1Image {
            image,
            d,
            delta,
            lhs,
            rhs,
            regime_ok,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::all_passed;
    use crate::rational::frac;

    fn fm(r0: u64, b: i64) -> FmData {
        FmData::self_dual(SurfaceData::k3_with_section(), r0, int(b)).unwrap()
    }

    #[test]
    fn validate_trivial_case() {
        let f = FmData::new(
            SurfaceData::k3_with_section(),
            SurfaceData::k3_with_section(),
            1,
            int(0),
            NsClass::zero(2),
            NsClass::zero(2),
            None,
        )
        .unwrap();
        let checks = f.validate();
        assert!(all_passed(&checks), "{checks:?}");
    }

    #[test]
    fn validate_reports_defect() {
        let f = FmData::new(
            SurfaceData::k3_with_section(),
            SurfaceData::k3_with_section(),
            1,
            int(1),
            NsClass::zero(2),
            NsClass::zero(2),
            None,
        )
        .unwrap();
        let checks = f.validate();
        let c = checks.iter().find(|c| c.name == "⟨e^β, v0⟩ = 0").unwrap();
        assert!(!c.passed);
        assert_eq!(c.detail, "-1");
    }

    #[test]
    fn validate_rank_two_d_lattice_is_trivial() {
        let f = fm(1, 0);
        assert!(f.d_lattice_span().is_empty());
        let c = f.validate();
        assert!(c.iter().find(|c| c.name == "d_map isometry").unwrap().passed);
    }

    #[test]
    fn validate_rejects_non_isometric_d_map() {
        let s = SurfaceData::k3_with_i2_fiber();
        let mut d = Matrix::identity(3);
        d[(2, 2)] = int(2);
        let f = FmData::new(s.clone(), s, 1, int(0), NsClass::zero(3), NsClass::zero(3), Some(d))
            .unwrap();
        let c = f.validate();
        assert!(!c.iter().find(|c| c.name == "d_map isometry").unwrap().passed);
    }

    #[test]
    fn primitive_check_flags_multiple() {
        let f = FmData::new(
            SurfaceData::k3_with_section(),
            SurfaceData::k3_with_section(),
            2,
            int(0),
            NsClass::zero(2),
            NsClass::zero(2),
            None,
        )
        .unwrap();
        let c = f.validate();
        assert!(!c.iter().find(|c| c.name == "v0 primitive").unwrap().passed);
        assert!(c.iter().find(|c| c.name == "⟨e^β, v0⟩ = 0").unwrap().passed);
    }

    #[test]
    fn displayed_images() {
        for (r0, b) in [(1, 0), (2, 1), (3, 1)] {
            let f = fm(r0, b);
            let t = &f.target;
            let r0q = int(r0 as i64);
            let rank = t.rank();
            let e_bp = t.exp_class(&f.beta_prime).unwrap();

            assert_eq!(
                f.apply(&CohVector::point(rank)).unwrap(),
                -f.v0_prime().unwrap()
            );
            let r0_e_beta = f.source.exp_class(&f.beta).unwrap().scale(&r0q);
            assert_eq!(
                f.apply(&r0_e_beta).unwrap(),
                t.twist(&CohVector::from_class(t.h.clone()), &f.beta_prime).unwrap()
            );
            let [_, h_e, _, _] = f.source_basis().unwrap();
            assert_eq!(f.apply(&h_e).unwrap(), e_bp.scale(&-r0q));
            assert_eq!(f.apply(&f.v0()).unwrap(), CohVector::point(rank));
        }
    }

    #[test]
    fn complex_image_examples() {
        let f = fm(1, 0);
        let out = f
            .apply_complex(&GaussRational::imag(int(1)), &GaussRational::imag(int(2)))
            .unwrap();
        assert_eq!(out.scale, GaussRational::imag(int(-1)));

        let out = f
            .apply_complex(&GaussRational::imag(int(1)), &GaussRational::zero())
            .unwrap();
        // −1/(r0² i) = i: the exponent's H' direction is purely imaginary
        assert_eq!(out.image.im.ns, f.target.h);
        assert!(f
            .apply_complex(&GaussRational::zero(), &GaussRational::one())
            .is_err());
    }

    #[test]
    fn stability_image_examples() {
        let f = fm(1, 0);
        let out = f.stability_image(&int(5), &int(3)).unwrap();
        assert_eq!(out.alpha, ScaleRotation::new(1, int(5)).unwrap());
        let t = &f.target;
        assert_eq!(
            out.omega_prime,
            &t.h.scale(&frac(1, 5)) + &t.f.scale(&int(15))
        );
        assert!(out.hypotheses.iter().all(|c| c.passed));
        assert!(out.charge_identity.passed);

        let out = f.stability_image(&int(5), &int(1)).unwrap();
        assert!(!out.hypotheses[0].passed);
    }

    #[test]
    fn matrix_examples() {
        let f = fm(2, 1);
        let m = f.matrix().unwrap();
        assert_eq!(m.det, int(1));
        assert_eq!(m.inverse.mul(&m.forward).unwrap(), Matrix::identity(4));
        let g = Matrix::from_int_rows(&[&[0, 0, 0, -1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[-1, 0, 0, 0]]);
        let pulled = m.forward.transpose().mul(&g).unwrap().mul(&m.forward).unwrap();
        assert_eq!(pulled, g);
        // M² = −1
        assert_eq!(m.inverse, m.forward.scale(&int(-1)));
    }

    #[test]
    fn dim1_examples() {
        let f = fm(1, 0);
        let s = &f.source;
        // v = f + ϱ: p = 0, q = 1, a = 1
        let v = CohVector::new(int(0), s.f.clone(), int(1));
        let out = f.dim1_image(&v, &int(5), &int(3)).unwrap();
        assert_eq!(out.image, -f.apply(&v).unwrap());
        assert_eq!(out.d, frac(1, 150));

        let out = f.dim1_image(&v, &int(100), &int(10)).unwrap();
        assert!(out.regime_ok);

        let err = f.dim1_image(&CohVector::unit(2), &int(5), &int(3));
        assert!(matches!(err, Err(Error::Hypothesis(_))));
        let err = f.dim1_image(&CohVector::new(int(0), s.f.clone(), int(-1)), &int(5), &int(3));
        assert!(matches!(err, Err(Error::Hypothesis(_))));
    }
}
