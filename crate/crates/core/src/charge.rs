//! Central charges `Ẑ_{(β,ω)} = ⟨e^{β+iω}, v⟩` and `Z_{(β,ω)} = ⟨e^{β+iω}, ch⟩`
//! evaluated exactly, with phase comparison done by quadrant and cross
//! product instead of arguments of complex numbers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{CohVector, GaussCohVector, NsClass, SurfaceData};
use crate::rational::{abs, int, Rational};

/// `re + i·im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRational::new(re, Rational::zero())
    }

    pub fn imag(im: Rational) -> Self {
        GaussRational::new(Rational::zero(), im)
    }

    pub fn i() -> Self {
        GaussRational::imag(Rational::one())
    }

    pub fn zero() -> Self {
        GaussRational::real(Rational::zero())
    }

    pub fn one() -> Self {
        GaussRational::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GaussRational::new(&self.re * c, &self.im * c)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let n = self.norm_sq();
        Ok(GaussRational::new(&self.re / &n, -&self.im / &n))
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -&self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

/// Panics on division by zero, like the rational division it wraps.
impl Div for &GaussRational {
    type Output = GaussRational;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &GaussRational) -> GaussRational {
        self * &o.inverse().expect("division by zero")
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-&self.re, -&self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussRational {
            type Output = GaussRational;
            fn $m(self, o: GaussRational) -> GaussRational {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// `a + b√d` in the quadratic extension `Q(√d)`, `d > 0` fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExtScalar {
    pub a: Rational,
    pub b: Rational,
    pub d: Rational,
}

impl QuadExtScalar {
    pub fn new(a: Rational, b: Rational, d: Rational) -> Self {
        QuadExtScalar { a, b, d }
    }

    pub fn rational(a: Rational, d: &Rational) -> Self {
        QuadExtScalar::new(a, Rational::zero(), d.clone())
    }

    /// The element `√d` itself.
    pub fn sqrt(d: &Rational) -> Self {
        QuadExtScalar::new(Rational::zero(), Rational::one(), d.clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuadExtScalar::new(&self.a * c, &self.b * c, self.d.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.d, o.d, "mixing quadratic extensions");
        QuadExtScalar::new(&self.a + &o.a, &self.b + &o.b, self.d.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.d, o.d, "mixing quadratic extensions");
        QuadExtScalar::new(
            &self.a * &o.a + &self.b * &o.b * &self.d,
            &self.a * &o.b + &self.b * &o.a,
            self.d.clone(),
        )
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.b.is_zero().then_some(&self.a)
    }
}

/// Stability parameters `(β, ω)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityParams {
    pub beta: NsClass,
    pub omega: NsClass,
}

impl StabilityParams {
    pub fn new(beta: NsClass, omega: NsClass) -> Self {
        StabilityParams { beta, omega }
    }
}

/// Bilinear extension of the Mukai pairing to a Gaussian first argument.
pub fn pair_gauss(s: &SurfaceData, g: &GaussCohVector, v: &CohVector) -> Result<GaussRational> {
    Ok(GaussRational::new(s.pair(&g.re, v)?, s.pair(&g.im, v)?))
}

/// Pairing of two Gaussian vectors, bilinear (no conjugation).
pub fn pair_gauss2(s: &SurfaceData, g: &GaussCohVector, h: &GaussCohVector) -> Result<GaussRational> {
    let rr = s.pair(&g.re, &h.re)?;
    let ii = s.pair(&g.im, &h.im)?;
    let ri = s.pair(&g.re, &h.im)?;
    let ir = s.pair(&g.im, &h.re)?;
    Ok(GaussRational::new(rr - ii, ri + ir))
}

/// `Ẑ_{(β,ω)}(v) = ⟨e^{β+iω}, v⟩` for a Mukai vector `v`; needs `(ω²) > χ`.
pub fn z_hat(s: &SurfaceData, params: &StabilityParams, v: &CohVector) -> Result<GaussRational> {
    let ww = s.dot(&params.omega, &params.omega)?;
    if ww <= int(s.chi) {
        return Err(Error::Regime(format!(
            "(ω²) = {ww} must exceed χ(O_X) = {}",
            s.chi
        )));
    }
    z_geo(s, params, v)
}

/// `Z_{(β,ω)}(ch) = ⟨e^{β+iω}, ch⟩` for a Chern character.
pub fn z_geo(s: &SurfaceData, params: &StabilityParams, ch: &CohVector) -> Result<GaussRational> {
    s.check_vector(ch)?;
    let e = s.exp_class_complex(&params.beta, &params.omega)?;
    pair_gauss(s, &e, ch)
}

/// Upper half `(0, 1]` or lower half `(−1, 0]` of the phase circle.
fn upper_half(z: &GaussRational) -> bool {
    z.im.is_positive() || (z.im.is_zero() && z.re.is_negative())
}

/// Compares phases `φ ∈ (−1, 1]` of two nonzero charges.
pub fn phase_cmp(z1: &GaussRational, z2: &GaussRational) -> Result<Ordering> {
    if z1.is_zero() || z2.is_zero() {
        return Err(Error::Domain("phase of zero charge".into()));
    }
    match (upper_half(z1), upper_half(z2)) {
        (true, false) => Ok(Ordering::Greater),
        (false, true) => Ok(Ordering::Less),
        _ => {
            // z1 is counter-clockwise from z2 iff re(z2)im(z1) − im(z2)re(z1) > 0
            let cross = &z2.re * &z1.im - &z2.im * &z1.re;
            Ok(cross.cmp(&Rational::zero()))
        }
    }
}

/// The element `exp(−πiλ)` for `λ = quarter_turns/2 + i·log(scale)/π`:
/// multiplication by `scale·(−i)^quarter_turns`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleRotation {
    pub quarter_turns: i64,
    pub scale: Rational,
}

impl ScaleRotation {
    pub fn new(quarter_turns: i64, scale: Rational) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::Domain(format!("scale {scale} must be positive")));
        }
        Ok(ScaleRotation {
            quarter_turns,
            scale,
        })
    }

    /// The multiplier `scale·(−i)^quarter_turns` as a Gaussian rational.
    pub fn factor(&self) -> GaussRational {
        let s = self.scale.clone();
        match self.quarter_turns.rem_euclid(4) {
            0 => GaussRational::real(s),
            1 => GaussRational::imag(-s),
            2 => GaussRational::real(-s),
            _ => GaussRational::imag(s),
        }
    }

    pub fn apply(&self, z: &GaussRational) -> GaussRational {
        &self.factor() * z
    }
}

pub fn act_scale_rot(quarter_turns: i64, scale: &Rational, z: &GaussRational) -> Result<GaussRational> {
    Ok(ScaleRotation::new(quarter_turns, scale.clone())?.apply(z))
}

/// Checks `Ẑ_{(β,tA)}(v(ch)) = T⁻¹ Z_{(β,sA)}(ch)` with `s = √(t² − χ/(A²))`,
/// where `T(x + iy) = x + (s/t)·iy`. The geometric charge is evaluated in
/// `Q(√d)`, `d = s²`.
pub fn hat_geo_check(
    s: &SurfaceData,
    beta: &NsClass,
    a: &NsClass,
    t: &Rational,
    ch: &CohVector,
) -> Result<bool> {
    s.check_vector(ch)?;
    let aa = s.dot(a, a)?;
    if !aa.is_positive() {
        return Err(Error::Regime(format!("(A²) = {aa} must be positive")));
    }
    if !t.is_positive() {
        return Err(Error::Regime(format!("t = {t} must be positive")));
    }
    let d = t * t - int(s.chi) / &aa;
    if !d.is_positive() {
        return Err(Error::Regime(format!(
            "t² − χ/(A²) = {d} must be positive"
        )));
    }

    // e^{β + i√d A} = (1, β, (β² − dA²)/2) + i·√d·(0, A, (β·A))
    let bb = s.dot(beta, beta)?;
    let ba = s.dot(beta, a)?;
    let re_part = CohVector::new(Rational::one(), beta.clone(), (bb - &d * &aa) / int(2));
    let im_dir = CohVector::new(Rational::zero(), a.clone(), ba);
    let geo_re = QuadExtScalar::rational(s.pair(&re_part, ch)?, &d);
    let geo_im = QuadExtScalar::sqrt(&d).scale(&s.pair(&im_dir, ch)?);

    // T⁻¹ multiplies the imaginary part by t/s = t√d/d
    let t_over_s = QuadExtScalar::sqrt(&d).scale(&(t / &d));
    let mapped_im = geo_im.mul(&t_over_s);

    let hat = z_hat(
        s,
        &StabilityParams::new(beta.clone(), a.scale(t)),
        &s.mukai_vector(ch),
    )?;
    Ok(geo_re.as_rational() == Some(&hat.re) && mapped_im.as_rational() == Some(&hat.im))
}

/// Both sides of the large-volume inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegimeCheck {
    pub lhs: Rational,
    pub rhs: Rational,
    pub d: Rational,
    pub delta: Rational,
    pub holds: bool,
}

/// Sufficient condition for `Ẑ_{(β,tL)}`-semistable objects of class `v` to
/// be the `(β − K/2)`-twisted `L`-semistable sheaves. Strict inequality.
pub fn lvl_check(
    s: &SurfaceData,
    v: &CohVector,
    beta: &NsClass,
    l: &NsClass,
    t: &Rational,
) -> Result<RegimeCheck> {
    let w = s.twist(v, &-beta)?;
    let ll = s.dot(l, l)?;
    if !ll.is_positive() {
        return Err(Error::Domain(format!("(L²) = {ll} must be positive")));
    }
    if w.r.is_negative() {
        return Err(Error::Domain(format!(
            "rank {} is negative; only r ≥ 0 is supported",
            w.r
        )));
    }
    let chi = int(s.chi);
    let d = s.dot(&w.ns, l)? / &ll;
    let delta = s.delta_min(l)?;
    let lhs = (t * t * &ll - &chi) / int(2);
    let bracket = if w.r.is_zero() {
        abs(&w.s) + &d * &d * &ll
    } else {
        &d * &d * &ll / int(2) - &w.r * &w.s + &w.r * &w.r * &chi / int(2)
    };
    let rhs = &d / &delta * bracket;
    let holds = lhs > rhs;
    Ok(RegimeCheck {
        lhs,
        rhs,
        d,
        delta,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn k3() -> SurfaceData {
        SurfaceData::k3_with_section()
    }

    fn g(re: i64, im: i64) -> GaussRational {
        GaussRational::new(int(re), int(im))
    }

    #[test]
    fn z_hat_point_class() {
        let s = k3();
        let p = StabilityParams::new(NsClass::from_ints(&[2, -5]), NsClass::from_ints(&[1, 3]));
        assert_eq!(z_hat(&s, &p, &CohVector::point(2)).unwrap(), g(-1, 0));
    }

    #[test]
    fn z_hat_structure_sheaf() {
        let s = k3();
        let p = StabilityParams::new(NsClass::zero(2), NsClass::from_ints(&[1, 3]));
        let v = s.mukai_vector(&CohVector::unit(2));
        assert_eq!(z_hat(&s, &p, &v).unwrap(), g(1, 0));
        let v = s.mukai_vector(&CohVector::from_ints(0, &[1, 0], 0));
        assert_eq!(z_hat(&s, &p, &v).unwrap().im, int(1));
    }

    #[test]
    fn z_hat_regime_error() {
        let s = k3();
        // (ω²) = (σ+2f)² = 2 is not > χ = 2
        let p = StabilityParams::new(NsClass::zero(2), NsClass::from_ints(&[1, 2]));
        assert!(matches!(
            z_hat(&s, &p, &CohVector::point(2)),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn z_geo_examples() {
        let s = k3();
        let p = StabilityParams::new(NsClass::zero(2), NsClass::from_ints(&[1, 3]));
        assert_eq!(z_geo(&s, &p, &CohVector::point(2)).unwrap(), g(-1, 0));
        assert_eq!(z_geo(&s, &p, &CohVector::unit(2)).unwrap(), g(2, 0));
        let ch = CohVector::new(int(3), NsClass::from_ints(&[1, -2]), frac(1, 2));
        let diff = &z_hat(&s, &p, &s.mukai_vector(&ch)).unwrap() - &z_geo(&s, &p, &ch).unwrap();
        assert_eq!(diff, GaussRational::real(-int(3) * int(s.chi) / int(2)));
    }

    #[test]
    fn phase_examples() {
        assert_eq!(phase_cmp(&g(-1, 0), &g(0, 1)).unwrap(), Ordering::Greater);
        assert_eq!(phase_cmp(&g(1, 1), &g(2, 2)).unwrap(), Ordering::Equal);
        assert_eq!(phase_cmp(&g(-1, 1), &g(0, 1)).unwrap(), Ordering::Greater);
        assert_eq!(phase_cmp(&g(1, -1), &g(1, 0)).unwrap(), Ordering::Less);
        assert_eq!(phase_cmp(&g(1, 0), &g(-1, -1)).unwrap(), Ordering::Greater);
        assert!(phase_cmp(&g(0, 0), &g(1, 0)).is_err());
    }

    #[test]
    fn scale_rotation_examples() {
        let z = g(3, -7);
        assert_eq!(act_scale_rot(0, &int(1), &z).unwrap(), z);
        assert_eq!(act_scale_rot(1, &int(5), &g(1, 0)).unwrap(), g(0, -5));
        assert_eq!(act_scale_rot(4, &int(1), &z).unwrap(), z);
        assert_eq!(act_scale_rot(-1, &int(1), &g(1, 0)).unwrap(), g(0, 1));
        assert!(act_scale_rot(1, &int(0), &z).is_err());
    }

    #[test]
    fn hat_geo_examples() {
        let s = k3();
        let a = NsClass::from_ints(&[1, 3]);
        let zero = NsClass::zero(2);
        assert!(hat_geo_check(&s, &zero, &a, &int(2), &CohVector::point(2)).unwrap());
        let ch = CohVector::from_ints(1, &[1, 0], 0);
        assert!(hat_geo_check(&s, &zero, &a, &int(2), &ch).unwrap());
        // rank 0, (ξ·A) = 0: ξ = σ − f has (σ − f)·(σ + 3f) = −2 + 3 − 1 = 0
        let ch = CohVector::from_ints(0, &[1, -1], 4);
        assert!(hat_geo_check(&s, &NsClass::from_ints(&[1, 1]), &a, &int(2), &ch).unwrap());
    }

    #[test]
    fn hat_geo_regime() {
        let s = k3();
        let a = NsClass::from_ints(&[1, 3]);
        // t² = 1/4 < χ/(A²) = 1/2
        let r = hat_geo_check(&s, &NsClass::zero(2), &a, &frac(1, 2), &CohVector::point(2));
        assert!(matches!(r, Err(Error::Regime(_))));
    }

    #[test]
    fn lvl_check_examples() {
        let s = k3();
        let zero = NsClass::zero(2);
        // H_2 = H + 2f = σ + 3f, v0 = f, t = m = 3
        let l = NsClass::from_ints(&[1, 3]);
        let v0 = CohVector::from_ints(0, &[0, 1], 0);
        let c = lvl_check(&s, &v0, &zero, &l, &int(3)).unwrap();
        assert_eq!(c.d, frac(1, 4));
        assert_eq!(c.delta, frac(1, 4));
        assert_eq!(c.lhs, int(17));
        assert_eq!(c.rhs, frac(1, 4));
        assert!(c.holds);
        // r0·l·(η·H_n)²/(H_n²) with r0 = l = 1
        assert_eq!(c.rhs, frac(1, 4));

        let c = lvl_check(&s, &v0, &zero, &l, &int(1)).unwrap();
        assert_eq!(c.lhs, int(1));
        assert!(c.holds);

        // ξ = 0: holds iff t²(L²) > χ
        let pt = CohVector::from_ints(0, &[0, 0], 5);
        let c = lvl_check(&s, &pt, &zero, &l, &frac(1, 2)).unwrap();
        assert!(c.rhs.is_zero());
        assert!(!c.holds);
        let c = lvl_check(&s, &pt, &zero, &l, &int(1)).unwrap();
        assert!(c.holds);
        // boundary: (σ+2f)² = 2 = χ at t = 1 gives lhs = 0 = rhs
        let l2 = NsClass::from_ints(&[1, 2]);
        let c = lvl_check(&s, &pt, &zero, &l2, &int(1)).unwrap();
        assert_eq!(c.lhs, c.rhs);
        assert!(!c.holds);
    }

    #[test]
    fn lvl_check_negative_rank() {
        let s = k3();
        let v = CohVector::from_ints(-1, &[0, 0], 0);
        let r = lvl_check(&s, &v, &NsClass::zero(2), &NsClass::from_ints(&[1, 3]), &int(2));
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
