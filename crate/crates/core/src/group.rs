//! The abstract rank-2 l^e-torsion interface the solver is written
//! against, with two backends: the elliptic-curve torsion subgroup and the
//! model group (Z/l^e)^2. Sharing one solver across both is what lets the
//! exhaustive model oracles certify the curve path.

use num_bigint::BigUint;
use rand::{Rng, RngCore};

use crate::arith::l_pow;
use crate::curve::{self, Point};
use crate::dlog;
use crate::error::Error;
use crate::model::{lpower_order_exponent, ModelElement, ModelGroup};
use crate::torsion::{self, TorsionBasis, TorsionContext};

/// A group isomorphic to (Z/l^e)^2 together with the basis machinery the
/// root-extraction algorithms need.
pub trait TorsionGroup {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    /// Basis representation; backends may attach caches (the curve keeps
    /// the Weil pairing of the pair).
    type Basis;

    fn l(&self) -> u64;
    fn e(&self) -> u32;

    fn identity(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn scalar_mul(&self, k: &BigUint, a: &Self::Elem) -> Self::Elem;

    /// The exponent u <= e with ord(a) = l^u.
    fn lpower_order(&self, a: &Self::Elem) -> Result<u32, Error>;
    fn find_basis(&self, rng: &mut dyn RngCore) -> Result<Self::Basis, Error>;
    fn basis_points(&self, basis: &Self::Basis) -> (Self::Elem, Self::Elem);
    /// A partner making `k` part of a generating pair; requires ord(k) = l^e.
    fn complete_basis(&self, k: &Self::Elem, rng: &mut dyn RngCore) -> Result<Self::Elem, Error>;
    fn extended_dlog(
        &self,
        basis: &Self::Basis,
        k: &Self::Elem,
    ) -> Result<(BigUint, BigUint), Error>;
    fn is_independent(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool, Error>;

    fn lpow_e(&self) -> BigUint {
        l_pow(self.l(), self.e())
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }
}

/// Curve-backed torsion group E[l^e].
pub struct CurveTorsion<'a> {
    ctx: &'a TorsionContext,
}

impl<'a> CurveTorsion<'a> {
    pub fn new(ctx: &'a TorsionContext) -> Self {
        CurveTorsion { ctx }
    }

    pub fn ctx(&self) -> &TorsionContext {
        self.ctx
    }
}

impl TorsionGroup for CurveTorsion<'_> {
    type Elem = Point;
    type Basis = TorsionBasis;

    fn l(&self) -> u64 {
        self.ctx.l()
    }

    fn e(&self) -> u32 {
        self.ctx.e()
    }

    fn identity(&self) -> Point {
        Point::Identity
    }

    fn add(&self, a: &Point, b: &Point) -> Point {
        curve::add(a, b, self.ctx.curve())
    }

    fn neg(&self, a: &Point) -> Point {
        curve::neg(a)
    }

    fn scalar_mul(&self, k: &BigUint, a: &Point) -> Point {
        curve::scalar_mul_uint(k, a, self.ctx.curve())
    }

    fn lpower_order(&self, a: &Point) -> Result<u32, Error> {
        curve::point_lpower_order(a, self.ctx.l(), self.ctx.e(), self.ctx.curve())
    }

    fn find_basis(&self, rng: &mut dyn RngCore) -> Result<TorsionBasis, Error> {
        torsion::find_basis(self.ctx, rng)
    }

    fn basis_points(&self, basis: &TorsionBasis) -> (Point, Point) {
        (basis.p_gen().clone(), basis.q_gen().clone())
    }

    fn complete_basis(&self, k: &Point, rng: &mut dyn RngCore) -> Result<Point, Error> {
        torsion::complete_basis(k, self.ctx, rng)
    }

    fn extended_dlog(&self, basis: &TorsionBasis, k: &Point) -> Result<(BigUint, BigUint), Error> {
        let dl = dlog::extended_dlog(k, basis, self.ctx)?;
        Ok((dl.k1, dl.k2))
    }

    fn is_independent(&self, a: &Point, b: &Point) -> Result<bool, Error> {
        torsion::is_independent(a, b, self.ctx)
    }
}

/// Model-backed torsion group (Z/l^e)^2 with coordinates as elements.
pub struct ModelTorsion {
    group: ModelGroup,
    l: u64,
    e: u32,
    le: u64,
}

impl ModelTorsion {
    /// l^e must stay below 2^32 so all coordinate arithmetic is exact.
    pub fn new(l: u64, e: u32) -> Result<Self, Error> {
        let le = (l as u128)
            .checked_pow(e)
            .filter(|&v| v < u32::MAX as u128)
            .ok_or(Error::BadParams("l^e too large for the model backend"))?
            as u64;
        Ok(ModelTorsion {
            group: ModelGroup::rank2(le)?,
            l,
            e,
            le,
        })
    }

    pub fn group(&self) -> &ModelGroup {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.le
    }

    fn reduce(&self, k: &BigUint) -> u64 {
        use num_traits::ToPrimitive;
        (k % self.le).to_u64().expect("reduced below u64 modulus")
    }

    /// det of the coordinate matrix, a unit mod l exactly for generating
    /// pairs.
    fn det_is_unit(&self, a: &ModelElement, b: &ModelElement) -> bool {
        let (a0, a1) = (a.coords()[0] as i128, a.coords()[1] as i128);
        let (b0, b1) = (b.coords()[0] as i128, b.coords()[1] as i128);
        (a0 * b1 - a1 * b0).rem_euclid(self.l as i128) != 0
    }
}

impl TorsionGroup for ModelTorsion {
    type Elem = ModelElement;
    type Basis = (ModelElement, ModelElement);

    fn l(&self) -> u64 {
        self.l
    }

    fn e(&self) -> u32 {
        self.e
    }

    fn identity(&self) -> ModelElement {
        self.group.identity()
    }

    fn add(&self, a: &ModelElement, b: &ModelElement) -> ModelElement {
        self.group.add(a, b)
    }

    fn neg(&self, a: &ModelElement) -> ModelElement {
        self.group.neg(a)
    }

    fn scalar_mul(&self, k: &BigUint, a: &ModelElement) -> ModelElement {
        self.group.scalar_mul(self.reduce(k), a)
    }

    fn lpower_order(&self, a: &ModelElement) -> Result<u32, Error> {
        Ok(lpower_order_exponent(self.le, self.l, self.e, a))
    }

    fn find_basis(&self, rng: &mut dyn RngCore) -> Result<Self::Basis, Error> {
        for _ in 0..torsion::DEFAULT_RETRY_LIMIT {
            let p = self
                .group
                .element(&[rng.gen_range(0..self.le), rng.gen_range(0..self.le)])?;
            let q = self
                .group
                .element(&[rng.gen_range(0..self.le), rng.gen_range(0..self.le)])?;
            if self.det_is_unit(&p, &q) {
                return Ok((p, q));
            }
        }
        Err(Error::RetryLimitExceeded {
            what: "sampling a model basis",
            limit: torsion::DEFAULT_RETRY_LIMIT,
        })
    }

    fn basis_points(&self, basis: &Self::Basis) -> (ModelElement, ModelElement) {
        basis.clone()
    }

    fn complete_basis(
        &self,
        k: &ModelElement,
        rng: &mut dyn RngCore,
    ) -> Result<ModelElement, Error> {
        let u = self.lpower_order(k)?;
        if u != self.e {
            return Err(Error::OrderError {
                expected: self.e,
                found: u,
            });
        }
        for _ in 0..torsion::DEFAULT_RETRY_LIMIT {
            let cand = self
                .group
                .element(&[rng.gen_range(0..self.le), rng.gen_range(0..self.le)])?;
            if self.det_is_unit(k, &cand) {
                return Ok(cand);
            }
        }
        Err(Error::RetryLimitExceeded {
            what: "completing a model basis",
            limit: torsion::DEFAULT_RETRY_LIMIT,
        })
    }

    /// Coordinate-space linear solve: with basis columns B = (P' Q'),
    /// the exponents are B^(-1) * K over Z/l^e.
    fn extended_dlog(
        &self,
        basis: &Self::Basis,
        k: &ModelElement,
    ) -> Result<(BigUint, BigUint), Error> {
        let (p, q) = basis;
        let le = self.le as i128;
        let (p0, p1) = (p.coords()[0] as i128, p.coords()[1] as i128);
        let (q0, q1) = (q.coords()[0] as i128, q.coords()[1] as i128);
        let (k0, k1) = (k.coords()[0] as i128, k.coords()[1] as i128);
        let det = (p0 * q1 - p1 * q0).rem_euclid(le);
        let det_inv = mod_inv_i128(det, le).ok_or(Error::PreconditionViolated(
            "model dlog basis must be a generating pair",
        ))?;
        let k1_exp = ((q1 * k0 - q0 * k1).rem_euclid(le) * det_inv).rem_euclid(le);
        let k2_exp = ((p0 * k1 - p1 * k0).rem_euclid(le) * det_inv).rem_euclid(le);
        let recon = self.add(
            &self.group.scalar_mul(k1_exp as u64, p),
            &self.group.scalar_mul(k2_exp as u64, q),
        );
        if recon != *k {
            return Err(Error::VerificationFailed("model dlog reconstruction"));
        }
        Ok((BigUint::from(k1_exp as u64), BigUint::from(k2_exp as u64)))
    }

    fn is_independent(&self, a: &ModelElement, b: &ModelElement) -> Result<bool, Error> {
        Ok(self.det_is_unit(a, b))
    }
}

fn mod_inv_i128(a: i128, m: i128) -> Option<i128> {
    use num_integer::Integer;
    let e = a.extended_gcd(&m);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m))
}
