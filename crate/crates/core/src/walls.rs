//! Walls for the Mukai vector `v = 1 − ℓϱ` on an elliptic K3 surface near the
//! boundary point `[f]` of the positive cone in `v^⊥ = Zν + NS(X)`,
//! `ν = 1 + ℓϱ`.
//!
//! A wall is stored by the primitive integral vector spanning the projection
//! of its defining class `u` to `v^⊥`, so `u` and `v − u` give the same wall.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::charge::pair_gauss;
use crate::check::Check;
use crate::error::{Error, Result};
use crate::lattice::{CohVector, NsClass, SurfaceData};
use crate::rational::{int, primitive_integral, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WallTag {
    /// `u = kf + aϱ`.
    Case1,
    /// `u = ±D + kf + aϱ` with `D` a fiber (−2)-class.
    Case2,
    BmMinus2,
    BmIsotropic,
    BmPositive,
}

impl WallTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            WallTag::Case1 => "case1",
            WallTag::Case2 => "case2",
            WallTag::BmMinus2 => "bm_minus2",
            WallTag::BmIsotropic => "bm_isotropic",
            WallTag::BmPositive => "bm_positive",
        }
    }
}

/// Primitive integral coordinates `(ν-coefficient, ξ_1, …, ξ_n)` of the
/// projection of `u` to `v^⊥`, first nonzero entry positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WallKey(pub Vec<BigInt>);

impl fmt::Display for WallKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub u: CohVector,
    pub key: WallKey,
    pub tag: WallTag,
}

/// Result of intersecting the ray `ξ(β', tω')`, `t > 0`, with a wall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WallHit {
    At(Rational),
    Never,
    /// The equation degenerates to `0 = 0`.
    Everywhere,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanParams {
    pub beta_prime: NsClass,
    pub r0: u64,
    pub m: Rational,
    pub n: Rational,
    pub t_max: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanHit {
    pub t2: Rational,
    pub wall: Wall,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberSignature {
    /// Coefficient of `ν + β'`.
    pub nu_beta_coeff: Rational,
    /// Coefficient of `H'`.
    pub h_coeff: Rational,
    pub vector: CohVector,
}

#[derive(Clone, Debug)]
pub struct WallProblem {
    pub surface: SurfaceData,
    pub ell: u64,
    pub v: CohVector,
    pub nu: CohVector,
}

impl WallProblem {
    pub fn new(surface: SurfaceData, ell: u64) -> Result<Self> {
        if ell == 0 {
            return Err(Error::Domain("ℓ must be a positive integer".into()));
        }
        if surface.chi != 2 || !surface.k.is_zero() {
            return Err(Error::Domain(format!(
                "wall computations need a K3 surface (χ = 2, K = 0); got χ = {}",
                surface.chi
            )));
        }
        let rank = surface.rank();
        let l = int(ell as i64);
        let v = CohVector::new(Rational::one(), NsClass::zero(rank), -l.clone());
        let nu = CohVector::new(Rational::one(), NsClass::zero(rank), l);
        Ok(WallProblem {
            surface,
            ell,
            v,
            nu,
        })
    }

    /// Accepts only vectors of the shape `1 − ℓϱ`.
    pub fn from_vector(surface: SurfaceData, v: &CohVector) -> Result<Self> {
        let ell = (-&v.s).to_integer();
        let shaped = v.r.is_one()
            && v.ns.is_zero()
            && v.s.is_integer()
            && ell.is_positive();
        if !shaped {
            return Err(Error::Domain(
                "wall computations are only defined for v = 1 − ℓϱ, ℓ > 0".into(),
            ));
        }
        let ell = ell
            .to_u64()
            .ok_or_else(|| Error::Domain("ℓ out of range".into()))?;
        WallProblem::new(surface, ell)
    }

    fn ell_q(&self) -> Rational {
        int(self.ell as i64)
    }

    /// Key of the wall `u^⊥`; `None` when `u` is proportional to `v`.
    pub fn key_of(&self, u: &CohVector) -> Option<WallKey> {
        let l = self.ell_q();
        let nu_coeff = (&u.r * &l + &u.s) / (int(2) * &l);
        let mut coords = vec![nu_coeff];
        coords.extend(u.ns.coords().iter().cloned());
        let mut prim = primitive_integral(&coords)?;
        if prim.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            prim.iter_mut().for_each(|x| *x = -x.clone());
        }
        Some(WallKey(prim))
    }

    /// Candidate predicates for walls of `v` defined by `u`.
    pub fn bm_class(&self, u: &CohVector) -> Result<Option<WallTag>> {
        self.surface.check_vector(u)?;
        if !u.is_integral() {
            return Err(Error::Domain("u must be integral".into()));
        }
        let s = &self.surface;
        let uu = s.pair(u, u)?;
        let vu = s.pair(&self.v, u)?;
        let l = self.ell_q();
        let zero = Rational::zero();
        let tag = if uu == int(-2) && vu >= zero && vu <= l {
            Some(WallTag::BmMinus2)
        } else if uu.is_zero() && vu > zero && vu <= l {
            Some(WallTag::BmIsotropic)
        } else if uu.is_positive() && int(2) * &uu + int(1) <= vu && vu <= l {
            Some(WallTag::BmPositive)
        } else {
            None
        };
        Ok(tag)
    }

    fn defines_wall(&self, u: &CohVector) -> Result<bool> {
        Ok(self.bm_class(u)?.is_some() || self.bm_class(&(&self.v - u))?.is_some())
    }

    /// Walls through `[f]`, enumerated from the two shapes `kf + aϱ`
    /// (`−ℓ−1 ≤ a ≤ 0`) and `±D + kf + aϱ` (`−ℓ ≤ a ≤ 0`) with `|k| ≤ k_bound`.
    /// A candidate is kept when `u` or `v − u` meets a wall predicate.
    /// Sorted by key.
    pub fn classify_f_walls(&self, k_bound: u64) -> Result<Vec<Wall>> {
        let s = &self.surface;
        let ell = self.ell as i64;
        let kb = k_bound as i64;
        let mut candidates = Vec::new();
        for k in -kb..=kb {
            let kf = s.f.scale(&int(k));
            for a in -ell - 1..=0 {
                candidates.push((CohVector::new(int(0), kf.clone(), int(a)), WallTag::Case1));
            }
            for d in &s.minus2_fiber_classes {
                for sign in [1, -1] {
                    let xi = &d.scale(&int(sign)) + &kf;
                    for a in -ell..=0 {
                        candidates.push((CohVector::new(int(0), xi.clone(), int(a)), WallTag::Case2));
                    }
                }
            }
        }
        let mut seen = BTreeSet::new();
        let mut walls = Vec::new();
        for (u, tag) in candidates {
            if !self.defines_wall(&u)? {
                continue;
            }
            let Some(key) = self.key_of(&u) else { continue };
            if seen.insert(key.clone()) {
                walls.push(Wall { u, key, tag });
            }
        }
        walls.sort_by(|a, b| a.key.cmp(&b.key));
        Ok(walls)
    }

    /// `(β·ω)ν + (β·ω)β + (ℓ + (ω²)/2 − (β²)/2)ω`.
    pub fn xi_class(&self, beta: &NsClass, omega: &NsClass) -> Result<CohVector> {
        let s = &self.surface;
        let bw = s.dot(beta, omega)?;
        let c = self.ell_q() + s.dot(omega, omega)? / int(2) - s.dot(beta, beta)? / int(2);
        let ns = &beta.scale(&bw) + &omega.scale(&c);
        Ok(&self.nu.scale(&bw) + &CohVector::from_class(ns))
    }

    /// `Im(conj⟨e^{β+iω}, v⟩ · e^{β+iω})`, straight from the definition.
    pub fn xi_direct(&self, beta: &NsClass, omega: &NsClass) -> Result<CohVector> {
        let s = &self.surface;
        let e = s.exp_class_complex(beta, omega)?;
        let z = pair_gauss(s, &e, &self.v)?;
        Ok(e.scale(&z.conj()).im)
    }

    fn omega_prime(&self, r0: &Rational, m: &Rational, n: &Rational) -> NsClass {
        let s = &self.surface;
        &s.h.scale(&(Rational::one() / (r0 * r0 * m))) + &s.f.scale(&(m * n))
    }

    /// `((β'·H')/(r0² m² n) + (β'·f')) / (ℓ + t² n/r0² − (β'²)/2)` at `t = 1`,
    /// along with its numerator.
    fn chamber_coeffs(
        &self,
        beta_p: &NsClass,
        r0: &Rational,
        m: &Rational,
        n: &Rational,
    ) -> Result<(Rational, Rational, Rational)> {
        let s = &self.surface;
        let big_n = r0 * r0 * m * m * n;
        let numer = s.dot(beta_p, &s.h)? / &big_n + s.dot(beta_p, &s.f)?;
        let denom1 = self.ell_q() + n / (r0 * r0) - s.dot(beta_p, beta_p)? / int(2);
        Ok((numer, denom1, big_n))
    }

    /// Solves `ξ(β', tω') ∈ u^⊥` for `t²`, with `ω' = H'/(r0² m) + mn f'` on
    /// this surface (whose `H`, `f` play the roles of `H'`, `f'`).
    #[allow(clippy::too_many_arguments)]
    pub fn wall_hit_t2(
        &self,
        u: &CohVector,
        beta_p: &NsClass,
        r0: u64,
        m: &Rational,
        n: &Rational,
    ) -> Result<WallHit> {
        let s = &self.surface;
        s.check_vector(u)?;
        s.check_class(beta_p)?;
        if !u.r.is_zero() {
            return Err(Error::Domain("u must have the form ξ + aϱ".into()));
        }
        if !s.dot(&u.ns, &s.f)?.is_zero() {
            return Err(Error::Domain("u must satisfy (ξ·f') = 0".into()));
        }
        if !s.dot(beta_p, &s.f)?.is_negative() {
            return Err(Error::Regime("(β'·f') must be negative".into()));
        }
        let r0 = int(r0 as i64);
        let (numer, _, big_n) = self.chamber_coeffs(beta_p, &r0, m, n)?;
        // numer / (ℓ + t² n/r0² − β'²/2) = (H'·ξ) / (N (a − β'·ξ))
        let p = s.dot(&s.h, &u.ns)?;
        let q = &u.s - s.dot(beta_p, &u.ns)?;
        if q.is_zero() {
            return Ok(if p.is_zero() {
                WallHit::Everywhere
            } else {
                WallHit::Never
            });
        }
        if p.is_zero() {
            return Ok(if numer.is_zero() {
                WallHit::Everywhere
            } else {
                WallHit::Never
            });
        }
        let base = self.ell_q() - s.dot(beta_p, beta_p)? / int(2);
        let t2 = (&numer * &big_n * &q / &p - base) * &r0 * &r0 / n;
        Ok(if t2.is_positive() {
            WallHit::At(t2)
        } else {
            WallHit::Never
        })
    }

    /// Both sides of the strict chain
    /// `numer/(ℓ + n/r0² − β'²/2) < (H'·ξ)/(N(a − β'·ξ)) < 0`.
    pub fn f_u_sides(
        &self,
        u: &CohVector,
        beta_p: &NsClass,
        r0: u64,
        m: &Rational,
        n: &Rational,
    ) -> Result<Option<(Rational, Rational)>> {
        let s = &self.surface;
        let r0 = int(r0 as i64);
        let (numer, denom1, big_n) = self.chamber_coeffs(beta_p, &r0, m, n)?;
        let q = &u.s - s.dot(beta_p, &u.ns)?;
        if q.is_zero() || denom1.is_zero() {
            return Ok(None);
        }
        let left = numer / denom1;
        let right = s.dot(&s.h, &u.ns)? / (big_n * q);
        Ok(Some((left, right)))
    }

    pub fn satisfies_f_u(
        &self,
        u: &CohVector,
        beta_p: &NsClass,
        r0: u64,
        m: &Rational,
        n: &Rational,
    ) -> Result<bool> {
        Ok(match self.f_u_sides(u, beta_p, r0, m, n)? {
            Some((left, right)) => left < right && right.is_negative(),
            None => false,
        })
    }

    /// Preconditions of the scan; all of them must pass.
    pub fn scan_preconditions(&self, p: &ScanParams) -> Result<Vec<Check>> {
        let s = &self.surface;
        s.check_class(&p.beta_prime)?;
        let r0 = int(p.r0 as i64);
        let bf = s.dot(&p.beta_prime, &s.f)?;
        let mut checks = vec![
            Check::new("r0 > 0", p.r0 > 0, p.r0.to_string()),
            Check::new("m > 0", p.m.is_positive(), p.m.to_string()),
            Check::new("n > 0", p.n.is_positive(), p.n.to_string()),
            Check::new("t_max ≥ 1", p.t_max >= Rational::one(), p.t_max.to_string()),
            Check::new("(β'·f') < 0", bf.is_negative(), bf.to_string()),
        ];
        if checks.iter().all(|c| c.passed) {
            let (numer, denom1, _) = self.chamber_coeffs(&p.beta_prime, &r0, &p.m, &p.n)?;
            checks.push(Check::new(
                "(β'·H')/(r0²m²n) + (β'·f') < 0",
                numer.is_negative(),
                numer.to_string(),
            ));
            checks.push(Check::new(
                "ℓ + n/r0² − (β'²)/2 > 0",
                denom1.is_positive(),
                denom1.to_string(),
            ));
        }
        Ok(checks)
    }

    /// Largest `|k|` for which some candidate can satisfy the sign condition
    /// `(H'·ξ)/(a − β'·ξ) < 0`. With `ξ = D0 + kf`, both `H'·ξ = k + (H'·D0)`
    /// and `a − β'·ξ = a − β'·D0 − k(β'·f')` increase with `k`, so `k` must lie
    /// strictly between their roots.
    pub fn derived_k_bound(&self, beta_p: &NsClass) -> Result<u64> {
        let s = &self.surface;
        let phi = s.dot(beta_p, &s.f)?;
        if !phi.is_negative() {
            return Err(Error::Regime("(β'·f') must be negative".into()));
        }
        let ell = self.ell as i64;
        let mut shapes: Vec<(NsClass, i64)> = vec![(NsClass::zero(s.rank()), -ell - 1)];
        for d in &s.minus2_fiber_classes {
            shapes.push((d.clone(), -ell));
            shapes.push((-d, -ell));
        }
        let mut bound = BigInt::zero();
        for (d0, a_min) in shapes {
            let h0 = s.dot(&s.h, &d0)?;
            let b0 = s.dot(beta_p, &d0)?;
            for a in a_min..=0 {
                let root_p = -h0.clone();
                let root_q = (int(a) - &b0) / &phi;
                let (lo, hi) = if root_p <= root_q {
                    (root_p, root_q)
                } else {
                    (root_q, root_p)
                };
                // integers strictly inside (lo, hi)
                let k_lo: BigInt = lo.floor().to_integer() + 1;
                let k_hi: BigInt = hi.ceil().to_integer() - 1;
                if k_lo > k_hi {
                    continue;
                }
                for k in [k_lo, k_hi] {
                    if k.abs() > bound {
                        bound = k.abs();
                    }
                }
            }
        }
        bound
            .to_u64()
            .ok_or_else(|| Error::Domain("k bound out of range".into()))
    }

    /// Walls crossed by `σ(β', tω')` for `1 ≤ t ≤ t_max`, ordered by `t²`.
    pub fn scan(&self, p: &ScanParams) -> Result<Vec<ScanHit>> {
        let pre = self.scan_preconditions(p)?;
        let failed: Vec<String> = pre
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} (value {})", c.name, c.detail))
            .collect();
        if !failed.is_empty() {
            return Err(Error::Regime(failed.join("; ")));
        }
        let k_bound = self.derived_k_bound(&p.beta_prime)?;
        let t_max_sq = &p.t_max * &p.t_max;
        let mut hits = Vec::new();
        for wall in self.classify_f_walls(k_bound)? {
            let WallHit::At(t2) = self.wall_hit_t2(&wall.u, &p.beta_prime, p.r0, &p.m, &p.n)?
            else {
                continue;
            };
            if t2 < Rational::one() || t2 > t_max_sq {
                continue;
            }
            if !self.satisfies_f_u(&wall.u, &p.beta_prime, p.r0, &p.m, &p.n)? {
                continue;
            }
            hits.push(ScanHit { t2, wall });
        }
        hits.sort_by(|a, b| a.t2.cmp(&b.t2).then_with(|| a.wall.key.cmp(&b.wall.key)));
        Ok(hits)
    }

    /// Representative of `ξ(β', ω')` normalized so the `f'` coefficient is 1.
    pub fn chamber_signature(
        &self,
        beta_p: &NsClass,
        r0: u64,
        m: &Rational,
        n: &Rational,
    ) -> Result<ChamberSignature> {
        let s = &self.surface;
        s.check_class(beta_p)?;
        let r0 = int(r0 as i64);
        let (numer, denom1, big_n) = self.chamber_coeffs(beta_p, &r0, m, n)?;
        if denom1.is_zero() {
            return Err(Error::Regime("ℓ + n/r0² − (β'²)/2 vanishes".into()));
        }
        let nu_beta_coeff = numer / denom1;
        let h_coeff = Rational::one() / big_n;
        let nu_beta = &self.nu + &CohVector::from_class(beta_p.clone());
        let vector = &(&nu_beta.scale(&nu_beta_coeff)
            + &CohVector::from_class(s.h.scale(&h_coeff)))
            + &CohVector::from_class(s.f.clone());
        Ok(ChamberSignature {
            nu_beta_coeff,
            h_coeff,
            vector,
        })
    }

    /// `ω'` used by the scan and the chamber signature.
    pub fn scan_omega(&self, r0: u64, m: &Rational, n: &Rational) -> NsClass {
        self.omega_prime(&int(r0 as i64), m, n)
    }

    /// Keys of every integral `u = r + ξ + aϱ` with coordinates in
    /// `[−bound, bound]`, `(ξ·f) = 0` and a wall predicate satisfied.
    pub fn brute_oracle(&self, coeff_bound: u64) -> Result<BTreeSet<WallKey>> {
        Ok(self
            .brute_oracle_vectors(coeff_bound)?
            .into_iter()
            .filter_map(|u| self.key_of(&u))
            .collect())
    }

    /// The vectors behind [`WallProblem::brute_oracle`].
    pub fn brute_oracle_vectors(&self, coeff_bound: u64) -> Result<Vec<CohVector>> {
        let s = &self.surface;
        let b = coeff_bound as i64;
        let dim = s.rank() + 2;
        let mut out = Vec::new();
        let mut digits = vec![-b; dim];
        loop {
            let u = CohVector::new(
                int(digits[0]),
                NsClass::from_ints(&digits[1..dim - 1]),
                int(digits[dim - 1]),
            );
            if s.dot(&u.ns, &s.f)?.is_zero() && self.bm_class(&u)?.is_some() {
                out.push(u);
            }
            // odometer increment
            let mut i = 0;
            loop {
                if i == dim {
                    return Ok(out);
                }
                if digits[i] < b {
                    digits[i] += 1;
                    break;
                }
                digits[i] = -b;
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn k3(ell: u64) -> WallProblem {
        WallProblem::new(SurfaceData::k3_with_section(), ell).unwrap()
    }

    fn i2(ell: u64) -> WallProblem {
        WallProblem::new(SurfaceData::k3_with_i2_fiber(), ell).unwrap()
    }

    #[test]
    fn problem_invariants() {
        for ell in 1..4 {
            let p = k3(ell);
            let s = &p.surface;
            assert_eq!(s.pair(&p.v, &p.v).unwrap(), int(2 * ell as i64));
            assert!(s.pair(&p.nu, &p.v).unwrap().is_zero());
        }
    }

    #[test]
    fn rejects_non_k3() {
        let mut s = SurfaceData::k3_with_section();
        s.chi = 1;
        assert!(WallProblem::new(s, 1).is_err());
        assert!(WallProblem::new(SurfaceData::k3_with_section(), 0).is_err());
    }

    #[test]
    fn from_vector_guard() {
        let s = SurfaceData::k3_with_section();
        assert_eq!(
            WallProblem::from_vector(s.clone(), &CohVector::from_ints(1, &[0, 0], -2))
                .unwrap()
                .ell,
            2
        );
        assert!(WallProblem::from_vector(s.clone(), &CohVector::point(2)).is_err());
        assert!(WallProblem::from_vector(s, &CohVector::from_ints(1, &[1, 0], -1)).is_err());
    }

    #[test]
    fn bm_examples() {
        let p = k3(1);
        let tag = |r, ns: &[i64], a| p.bm_class(&CohVector::from_ints(r, ns, a)).unwrap();
        assert_eq!(tag(0, &[0, 1], -1), Some(WallTag::BmIsotropic));
        for k in -3..=3 {
            assert_eq!(tag(1, &[0, k], 0), Some(WallTag::BmIsotropic));
        }
        assert_eq!(tag(1, &[0, 0], 0), Some(WallTag::BmIsotropic));
        assert_eq!(tag(0, &[0, 0], 1), None);
        let half = CohVector::new(frac(1, 2), NsClass::zero(2), int(0));
        assert!(p.bm_class(&half).is_err());
    }

    #[test]
    fn key_identifies_u_and_v_minus_u() {
        let p = i2(2);
        let u = CohVector::from_ints(0, &[0, 3, 1], -1);
        assert_eq!(p.key_of(&u), p.key_of(&(&p.v - &u)));
        assert_eq!(p.key_of(&u), p.key_of(&u.scale(&int(-3))));
        assert_eq!(p.key_of(&p.v), None);
    }

    #[test]
    fn classify_without_fiber_classes() {
        let p = k3(1);
        let walls = p.classify_f_walls(2).unwrap();
        // a = 0 gives no wall; a ∈ {−2, −1} with k ∈ [−2, 2]
        for w in &walls {
            assert_eq!(w.tag, WallTag::Case1);
            assert!(w.u.s == int(-1) || w.u.s == int(-2));
            assert!(p.surface.dot(&w.u.ns, &p.surface.f).unwrap().is_zero());
        }
        let mut keys: Vec<_> = walls.iter().map(|w| w.key.clone()).collect();
        let n = keys.len();
        keys.dedup();
        assert_eq!(keys.len(), n);
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        // keys (a/(2ℓ), 0, k) normalized: a = −1 → (−1, 0, 2k), a = −2 → (−1, 0, k)
        assert_eq!(n, 5 + 2);
    }

    #[test]
    fn classify_with_fiber_class() {
        let p = i2(1);
        let walls = p.classify_f_walls(0).unwrap();
        let d = NsClass::from_ints(&[0, 0, 1]);
        for sign in [1, -1] {
            for a in [-1, 0] {
                let u = CohVector::new(int(0), d.scale(&int(sign)), int(a));
                let key = p.key_of(&u).unwrap();
                assert!(walls.iter().any(|w| w.key == key && w.tag == WallTag::Case2));
            }
        }
    }

    #[test]
    fn xi_examples() {
        let p = k3(1);
        let s = &p.surface;
        let omega = NsClass::from_ints(&[1, 3]);
        let zero = NsClass::zero(2);
        assert_eq!(
            p.xi_class(&zero, &omega).unwrap(),
            CohVector::from_class(omega.scale(&int(3)))
        );
        assert_eq!(
            p.xi_direct(&zero, &omega).unwrap(),
            CohVector::from_class(omega.scale(&int(3)))
        );
        let beta = NsClass::from_ints(&[-1, 0]);
        let expected = &(-&p.nu) + &CohVector::from_class(&NsClass::from_ints(&[1, 0]) + &omega.scale(&int(4)));
        assert_eq!(p.xi_class(&beta, &omega).unwrap(), expected);
        assert_eq!(p.xi_direct(&beta, &omega).unwrap(), expected);
        assert!(s.pair(&expected, &p.v).unwrap().is_zero());
    }

    fn scan_params() -> ScanParams {
        ScanParams {
            beta_prime: NsClass::from_ints(&[-1, 0]),
            r0: 1,
            m: int(10),
            n: int(5),
            t_max: int(10),
        }
    }

    #[test]
    fn wall_hit_example() {
        let p = k3(1);
        let sp = scan_params();
        // (H'·ξ) = 0 for ξ = 0: u = −ϱ
        let u = CohVector::from_ints(0, &[0, 0], -1);
        assert_eq!(
            p.wall_hit_t2(&u, &sp.beta_prime, 1, &sp.m, &sp.n).unwrap(),
            WallHit::Never
        );
        let u = CohVector::from_ints(0, &[0, 1], -2);
        assert_eq!(
            p.wall_hit_t2(&u, &sp.beta_prime, 1, &sp.m, &sp.n).unwrap(),
            WallHit::At(frac(497, 5))
        );
        // a = β'·ξ: u = f − ϱ has a − β'·ξ = −1 + 1 = 0
        let u = CohVector::from_ints(0, &[0, 1], -1);
        assert_eq!(
            p.wall_hit_t2(&u, &sp.beta_prime, 1, &sp.m, &sp.n).unwrap(),
            WallHit::Never
        );
    }

    #[test]
    fn wall_hit_rejects_bad_shapes() {
        let p = k3(1);
        let sp = scan_params();
        let u = CohVector::from_ints(1, &[0, 1], -2);
        assert!(p.wall_hit_t2(&u, &sp.beta_prime, 1, &sp.m, &sp.n).is_err());
        let u = CohVector::from_ints(0, &[1, 0], -2);
        assert!(p.wall_hit_t2(&u, &sp.beta_prime, 1, &sp.m, &sp.n).is_err());
        let good_u = CohVector::from_ints(0, &[0, 1], -2);
        let bad_beta = NsClass::from_ints(&[1, 0]);
        assert!(matches!(
            p.wall_hit_t2(&good_u, &bad_beta, 1, &sp.m, &sp.n),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn scan_example() {
        let p = k3(1);
        let hits = p.scan(&scan_params()).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].t2, frac(497, 5));
        let mut sp = scan_params();
        sp.t_max = int(9);
        assert!(p.scan(&sp).unwrap().is_empty());
    }

    #[test]
    fn scan_precondition_error_names_inequality() {
        let p = k3(1);
        let mut sp = scan_params();
        sp.beta_prime = NsClass::from_ints(&[1, 0]);
        match p.scan(&sp) {
            Err(Error::Regime(msg)) => assert!(msg.contains("(β'·f') < 0")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chamber_signature_example() {
        let p = k3(1);
        let sp = scan_params();
        let sig = p.chamber_signature(&sp.beta_prime, 1, &sp.m, &sp.n).unwrap();
        let s = &p.surface;
        assert_eq!(sig.h_coeff, frac(1, 500));
        let xi = p
            .xi_direct(&sp.beta_prime, &p.scan_omega(1, &sp.m, &sp.n))
            .unwrap();
        // proportional with positive factor
        let ratio = &xi.r / &sig.vector.r;
        assert!(ratio.is_positive());
        assert_eq!(xi, sig.vector.scale(&ratio));
        assert!(s.pair(&sig.vector, &p.v).unwrap().is_zero());
    }

    #[test]
    fn oracle_small() {
        let p = k3(1);
        let keys = p.brute_oracle(2).unwrap();
        let classified: BTreeSet<_> = p
            .classify_f_walls(2)
            .unwrap()
            .into_iter()
            .map(|w| w.key)
            .collect();
        assert_eq!(keys, classified);
    }
}
