//! Exact arithmetic in the algebraic cohomology `Q ⊕ NS(X)_Q ⊕ Q·ϱ` of an
//! elliptic surface: the Mukai pairing, truncated cup products, exponentials
//! of divisor classes and expansions around a twisting class `β`.

use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::charge::GaussRational;
use crate::error::{Error, Result};
use crate::rational::{frac, int, rational_gcd, Rational};

/// Coordinates of a class in `NS(X)_Q` against the surface's declared basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NsClass(Vec<Rational>);

impl NsClass {
    pub fn new(coords: Vec<Rational>) -> Self {
        NsClass(coords)
    }

    pub fn zero(rank: usize) -> Self {
        NsClass(vec![Rational::zero(); rank])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        NsClass(coords.iter().map(|&c| int(c)).collect())
    }

    /// The `i`-th basis vector.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut c = Self::zero(rank);
        c.0[i] = Rational::one();
        c
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn scale(&self, c: &Rational) -> Self {
        NsClass(self.0.iter().map(|x| x * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        assert_eq!(self.rank(), other.rank(), "NS rank mismatch");
        NsClass(self.0.iter().zip(&other.0).map(|(a, b)| op(a, b)).collect())
    }
}

impl Add for &NsClass {
    type Output = NsClass;
    fn add(self, rhs: &NsClass) -> NsClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &NsClass {
    type Output = NsClass;
    fn sub(self, rhs: &NsClass) -> NsClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &NsClass {
    type Output = NsClass;
    fn neg(self) -> NsClass {
        NsClass(self.0.iter().map(|x| -x).collect())
    }
}

impl Add for NsClass {
    type Output = NsClass;
    fn add(self, rhs: NsClass) -> NsClass {
        &self + &rhs
    }
}

impl Sub for NsClass {
    type Output = NsClass;
    fn sub(self, rhs: NsClass) -> NsClass {
        &self - &rhs
    }
}

impl Neg for NsClass {
    type Output = NsClass;
    fn neg(self) -> NsClass {
        -&self
    }
}

/// An element `r + ξ + s·ϱ` of the algebraic cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CohVector {
    pub r: Rational,
    pub ns: NsClass,
    pub s: Rational,
}

impl CohVector {
    pub fn new(r: Rational, ns: NsClass, s: Rational) -> Self {
        CohVector { r, ns, s }
    }

    pub fn zero(rank: usize) -> Self {
        CohVector::new(Rational::zero(), NsClass::zero(rank), Rational::zero())
    }

    /// The unit class `1 ∈ H^0`.
    pub fn unit(rank: usize) -> Self {
        CohVector::new(Rational::one(), NsClass::zero(rank), Rational::zero())
    }

    /// The point class `ϱ` with `∫ϱ = 1`.
    pub fn point(rank: usize) -> Self {
        CohVector::new(Rational::zero(), NsClass::zero(rank), Rational::one())
    }

    pub fn from_class(ns: NsClass) -> Self {
        CohVector::new(Rational::zero(), ns, Rational::zero())
    }

    pub fn from_ints(r: i64, ns: &[i64], s: i64) -> Self {
        CohVector::new(int(r), NsClass::from_ints(ns), int(s))
    }

    /// Flat coordinates `(r, ξ_1, …, ξ_n, s)`.
    pub fn coords(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.ns.rank() + 2);
        out.push(self.r.clone());
        out.extend(self.ns.coords().iter().cloned());
        out.push(self.s.clone());
        out
    }

    pub fn from_coords(coords: &[Rational]) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Parse(format!(
                "a cohomology vector needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        let n = coords.len();
        Ok(CohVector::new(
            coords[0].clone(),
            NsClass::new(coords[1..n - 1].to_vec()),
            coords[n - 1].clone(),
        ))
    }

    pub fn ns_rank(&self) -> usize {
        self.ns.rank()
    }

    /// `u* = x_0 - x_1 + x_2 ϱ`.
    pub fn dual(&self) -> Self {
        CohVector::new(self.r.clone(), -&self.ns, self.s.clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CohVector::new(&self.r * c, self.ns.scale(c), &self.s * c)
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.ns.is_zero() && self.s.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.r.is_integer() && self.ns.is_integral() && self.s.is_integer()
    }
}

impl Add for &CohVector {
    type Output = CohVector;
    fn add(self, rhs: &CohVector) -> CohVector {
        CohVector::new(&self.r + &rhs.r, &self.ns + &rhs.ns, &self.s + &rhs.s)
    }
}

impl Sub for &CohVector {
    type Output = CohVector;
    fn sub(self, rhs: &CohVector) -> CohVector {
        CohVector::new(&self.r - &rhs.r, &self.ns - &rhs.ns, &self.s - &rhs.s)
    }
}

impl Neg for &CohVector {
    type Output = CohVector;
    fn neg(self) -> CohVector {
        CohVector::new(-&self.r, -&self.ns, -&self.s)
    }
}

impl Add for CohVector {
    type Output = CohVector;
    fn add(self, rhs: CohVector) -> CohVector {
        &self + &rhs
    }
}

impl Sub for CohVector {
    type Output = CohVector;
    fn sub(self, rhs: CohVector) -> CohVector {
        &self - &rhs
    }
}

impl Neg for CohVector {
    type Output = CohVector;
    fn neg(self) -> CohVector {
        -&self
    }
}

/// A cohomology vector with Gaussian-rational coefficients, `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussCohVector {
    pub re: CohVector,
    pub im: CohVector,
}

impl GaussCohVector {
    pub fn new(re: CohVector, im: CohVector) -> Self {
        GaussCohVector { re, im }
    }

    pub fn real(re: CohVector) -> Self {
        let rank = re.ns_rank();
        GaussCohVector::new(re, CohVector::zero(rank))
    }

    /// Multiplication by a Gaussian-rational scalar.
    pub fn scale(&self, z: &GaussRational) -> Self {
        GaussCohVector::new(
            &self.re.scale(&z.re) - &self.im.scale(&z.im),
            &self.im.scale(&z.re) + &self.re.scale(&z.im),
        )
    }

    /// Applies a real-linear map to both components.
    pub fn map(&self, f: impl Fn(&CohVector) -> Result<CohVector>) -> Result<Self> {
        Ok(GaussCohVector::new(f(&self.re)?, f(&self.im)?))
    }
}

impl Add for &GaussCohVector {
    type Output = GaussCohVector;
    fn add(self, rhs: &GaussCohVector) -> GaussCohVector {
        GaussCohVector::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

/// Whether a vector was supplied as a Chern character or a Mukai vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorKind {
    Chern,
    Mukai,
}

/// `v = e^β (r + p H + q f + D + a ϱ)` with `D ∈ f^⊥ ∩ H^⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaExpansion {
    pub beta: NsClass,
    pub r: Rational,
    pub p: Rational,
    pub q: Rational,
    pub d: NsClass,
    pub a: Rational,
    pub kind: VectorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// A Néron–Severi lattice with its fiber class `f`, a class `H` normalized to
/// `(H·f) = 1`, `(H²) = 0`, the canonical class and `χ(O_X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceData {
    pub name: String,
    pub chi: i64,
    pub gram: Vec<Vec<Rational>>,
    /// Fiber class.
    pub f: NsClass,
    pub h: NsClass,
    /// Canonical class.
    pub k: NsClass,
    /// Effective (−2)-classes supported on fibers.
    pub minus2_fiber_classes: Vec<NsClass>,
    /// Positive integer `l` with `l·H` integral.
    pub integrality_scale_l: u64,
}

impl SurfaceData {
    /// Elliptic K3 surface with a section: basis `(σ, f)`, Gram `[[-2,1],[1,0]]`,
    /// `H = σ + f`.
    pub fn k3_with_section() -> Self {
        SurfaceData {
            name: "k3-with-section".into(),
            chi: 2,
            gram: vec![vec![int(-2), int(1)], vec![int(1), int(0)]],
            f: NsClass::from_ints(&[0, 1]),
            h: NsClass::from_ints(&[1, 1]),
            k: NsClass::from_ints(&[0, 0]),
            minus2_fiber_classes: vec![],
            integrality_scale_l: 1,
        }
    }

    /// Elliptic K3 with a section and one reducible fiber of type I2: basis
    /// `(σ, f, C)` where `C` is the fiber component missing the section.
    pub fn k3_with_i2_fiber() -> Self {
        SurfaceData {
            name: "k3-with-i2-fiber".into(),
            chi: 2,
            gram: vec![
                vec![int(-2), int(1), int(0)],
                vec![int(1), int(0), int(0)],
                vec![int(0), int(0), int(-2)],
            ],
            f: NsClass::from_ints(&[0, 1, 0]),
            h: NsClass::from_ints(&[1, 1, 0]),
            k: NsClass::from_ints(&[0, 0, 0]),
            minus2_fiber_classes: vec![NsClass::from_ints(&[0, 0, 1])],
            integrality_scale_l: 1,
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// Every violated invariant, with the offending field.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut bad = |field: &str, message: String| {
            out.push(Violation {
                field: field.to_string(),
                message,
            })
        };
        let n = self.rank();
        if n == 0 {
            bad("ns_rank", "must be positive".into());
            return out;
        }
        if self.gram.iter().any(|row| row.len() != n) {
            bad("gram", format!("must be a {n}x{n} matrix"));
            return out;
        }
        for i in 0..n {
            for j in 0..i {
                if self.gram[i][j] != self.gram[j][i] {
                    bad("gram", format!("not symmetric at ({i},{j})"));
                }
            }
        }
        let mut rank_ok = true;
        for (field, class) in [("f", &self.f), ("H", &self.h), ("K", &self.k)] {
            if class.rank() != n {
                bad(field, format!("has {} coordinates, expected {n}", class.rank()));
                rank_ok = false;
            }
        }
        for (i, d) in self.minus2_fiber_classes.iter().enumerate() {
            if d.rank() != n {
                bad(
                    &format!("minus2_fiber_classes[{i}]"),
                    format!("has {} coordinates, expected {n}", d.rank()),
                );
                rank_ok = false;
            }
        }
        if !rank_ok {
            return out;
        }
        let dot = |a: &NsClass, b: &NsClass| self.dot_unchecked(a, b);
        if !dot(&self.f, &self.f).is_zero() {
            bad("f", "fiber self-intersection must be 0".into());
        }
        if !dot(&self.h, &self.f).is_one() {
            bad("H", "(H·f) must be 1".into());
        }
        if !dot(&self.h, &self.h).is_zero() {
            bad("H", "H self-intersection must be 0".into());
        }
        if !dot(&self.k, &self.f).is_zero() {
            bad("K", "(K·f) must be 0".into());
        }
        for (i, d) in self.minus2_fiber_classes.iter().enumerate() {
            let field = format!("minus2_fiber_classes[{i}]");
            if dot(d, d) != int(-2) {
                bad(&field, "(D·D) must be -2".into());
            }
            if !dot(d, &self.f).is_zero() {
                bad(&field, "(D·f) must be 0".into());
            }
        }
        if self.integrality_scale_l == 0 {
            bad("integrality_scale_l", "must be positive".into());
        } else if !self
            .h
            .scale(&int(self.integrality_scale_l as i64))
            .is_integral()
        {
            bad("integrality_scale_l", "l·H must be integral".into());
        }
        out
    }

    pub fn checked(self) -> Result<Self> {
        let v = self.violations();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(v.iter().map(ToString::to_string).collect()))
        }
    }

    pub fn check_class(&self, c: &NsClass) -> Result<()> {
        if c.rank() != self.rank() {
            return Err(Error::Dimension {
                expected: self.rank(),
                found: c.rank(),
            });
        }
        Ok(())
    }

    pub fn check_vector(&self, u: &CohVector) -> Result<()> {
        self.check_class(&u.ns)
    }

    fn dot_unchecked(&self, a: &NsClass, b: &NsClass) -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.coords().iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coords().iter().enumerate() {
                acc += ai * &self.gram[i][j] * bj;
            }
        }
        acc
    }

    /// Intersection pairing on `NS(X)_Q`.
    pub fn dot(&self, a: &NsClass, b: &NsClass) -> Result<Rational> {
        self.check_class(a)?;
        self.check_class(b)?;
        Ok(self.dot_unchecked(a, b))
    }

    /// Mukai pairing `⟨u,w⟩ = (x_1·y_1) − x_0 y_2 − x_2 y_0`.
    pub fn pair(&self, u: &CohVector, w: &CohVector) -> Result<Rational> {
        Ok(self.dot(&u.ns, &w.ns)? - &u.r * &w.s - &u.s * &w.r)
    }

    /// Cup product truncated to the algebraic part.
    pub fn mul(&self, u: &CohVector, w: &CohVector) -> Result<CohVector> {
        let cross = self.dot(&u.ns, &w.ns)?;
        Ok(CohVector::new(
            &u.r * &w.r,
            &w.ns.scale(&u.r) + &u.ns.scale(&w.r),
            &u.r * &w.s + &w.r * &u.s + cross,
        ))
    }

    /// `e^β = 1 + β + (β²)/2 ϱ`.
    pub fn exp_class(&self, beta: &NsClass) -> Result<CohVector> {
        let sq = self.dot(beta, beta)?;
        Ok(CohVector::new(Rational::one(), beta.clone(), sq / int(2)))
    }

    /// `e^{β + iω}`; the condition `(ω²) > χ` is left to callers.
    pub fn exp_class_complex(&self, beta: &NsClass, omega: &NsClass) -> Result<GaussCohVector> {
        let bb = self.dot(beta, beta)?;
        let ww = self.dot(omega, omega)?;
        let bw = self.dot(beta, omega)?;
        Ok(GaussCohVector::new(
            CohVector::new(Rational::one(), beta.clone(), (bb - ww) / int(2)),
            CohVector::new(Rational::zero(), omega.clone(), bw),
        ))
    }

    fn half_chi(&self) -> Rational {
        frac(self.chi, 2)
    }

    /// `v = ch·(1 + χ/2 ϱ)`.
    pub fn mukai_vector(&self, ch: &CohVector) -> CohVector {
        CohVector::new(ch.r.clone(), ch.ns.clone(), &ch.s + &ch.r * self.half_chi())
    }

    pub fn chern_of(&self, v: &CohVector) -> CohVector {
        CohVector::new(v.r.clone(), v.ns.clone(), &v.s - &v.r * self.half_chi())
    }

    /// `e^β · v`.
    pub fn twist(&self, v: &CohVector, beta: &NsClass) -> Result<CohVector> {
        self.mul(&self.exp_class(beta)?, v)
    }

    pub fn beta_expand(
        &self,
        v: &CohVector,
        beta: &NsClass,
        kind: VectorKind,
    ) -> Result<BetaExpansion> {
        let w = self.twist(v, &-beta)?;
        let p = self.dot(&w.ns, &self.f)?;
        let q = self.dot(&w.ns, &self.h)?;
        let d = &(&w.ns - &self.h.scale(&p)) - &self.f.scale(&q);
        Ok(BetaExpansion {
            beta: beta.clone(),
            r: w.r,
            p,
            q,
            d,
            a: w.s,
            kind,
        })
    }

    /// Inverse of [`SurfaceData::beta_expand`].
    pub fn reassemble(&self, e: &BetaExpansion) -> Result<CohVector> {
        let ns = &(&self.h.scale(&e.p) + &self.f.scale(&e.q)) + &e.d;
        self.twist(&CohVector::new(e.r.clone(), ns, e.a.clone()), &e.beta)
    }

    /// `δ(L) = min{(D·L) > 0 : D ∈ NS(X)} / (L²)`.
    ///
    /// The minimum positive value of a linear form on a lattice is the gcd of
    /// its values on a basis.
    pub fn delta_min(&self, l: &NsClass) -> Result<Rational> {
        let ll = self.dot(l, l)?;
        if !ll.is_positive() {
            return Err(Error::Domain(format!("(L²) = {ll} must be positive")));
        }
        let values: Vec<Rational> = (0..self.rank())
            .map(|i| self.dot_unchecked(&NsClass::basis(self.rank(), i), l))
            .collect();
        Ok(rational_gcd(&values) / ll)
    }

    /// Moves `β0` along `H` until `⟨e^β, η + bϱ⟩ = 0`.
    ///
    /// `⟨e^{β0 + yH}, η + bϱ⟩ = ⟨e^{β0}, η + bϱ⟩ + y(H·η)`, so
    /// `y = −⟨e^{β0}, v0⟩ / (H·η)`.
    pub fn beta_solve(&self, eta: &NsClass, b: &Rational, beta0: &NsClass) -> Result<NsClass> {
        let h_eta = self.dot(&self.h, eta)?;
        if h_eta.is_zero() {
            return Err(Error::Unsolvable("(H·η) = 0".into()));
        }
        let v0 = CohVector::new(Rational::zero(), eta.clone(), b.clone());
        let defect = self.pair(&self.exp_class(beta0)?, &v0)?;
        let y = -defect / h_eta;
        Ok(beta0 + &self.h.scale(&y))
    }
}
