//! Machinery specific to the torsion subgroup E[l^e]: the Weil pairing,
//! cofactor projection, independence testing and basis construction.
//!
//! The parameter family is p = l^e * f - 1 with gcd(l, f) = 1, for which
//! the supersingular curve y^2 = x^3 + x over F_{p^2} has group structure
//! (Z/(p+1))^2; multiplying by the cofactor f therefore projects any
//! rational point into E[l^e] = (Z/l^e)^2.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{RngCore, SeedableRng};

use crate::arith::{is_small_prime, l_pow};
use crate::curve::{self, CurveParams, Point};
use crate::error::Error;
use crate::field::Fp2Element;

/// Randomized basis searches give up after this many samples unless
/// overridden via [`TorsionContext::with_retry_limit`].
pub const DEFAULT_RETRY_LIMIT: usize = 256;

/// Auxiliary-shift resampling cap inside the pairing computation.
const PAIRING_RETRY_LIMIT: usize = 32;

/// One instance of E[l^e]: the curve together with (l, e, f) satisfying
/// p + 1 = l^e * f.
#[derive(Clone, Debug)]
pub struct TorsionContext {
    curve: CurveParams,
    l: u64,
    e: u32,
    f: BigUint,
    lpow_e: BigUint,
    retry_limit: usize,
}

impl TorsionContext {
    pub fn new(curve: CurveParams, l: u64, e: u32, f: BigUint) -> Result<Self, Error> {
        if !is_small_prime(l) {
            return Err(Error::BadParams("l must be prime"));
        }
        if e == 0 {
            return Err(Error::BadParams("e must be positive"));
        }
        if (&f % l).is_zero() {
            return Err(Error::BadParams("gcd(l, f) must be 1"));
        }
        let lpow_e = l_pow(l, e);
        let p_plus_1 = curve.field().modulus() + 1u32;
        if &lpow_e * &f != p_plus_1 {
            return Err(Error::BadParams("p + 1 must equal l^e * f"));
        }
        if curve.order_root() != &p_plus_1 {
            return Err(Error::BadParams("curve order root must be p + 1"));
        }
        Ok(TorsionContext {
            curve,
            l,
            e,
            f,
            lpow_e,
            retry_limit: DEFAULT_RETRY_LIMIT,
        })
    }

    pub fn with_retry_limit(mut self, limit: usize) -> Self {
        self.retry_limit = limit;
        self
    }

    pub fn curve(&self) -> &CurveParams {
        &self.curve
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> &BigUint {
        &self.f
    }

    /// l^e, the torsion order.
    pub fn lpow_e(&self) -> &BigUint {
        &self.lpow_e
    }

    pub fn retry_limit(&self) -> usize {
        self.retry_limit
    }

    /// True iff l^e * pt = O.
    pub fn in_torsion(&self, pt: &Point) -> bool {
        curve::scalar_mul_uint(&self.lpow_e, pt, &self.curve).is_identity()
    }
}

/// An independent generator pair of E[l^e] with its cached Weil pairing,
/// a primitive l^e-th root of unity.
#[derive(Clone, Debug)]
pub struct TorsionBasis {
    p_gen: Point,
    q_gen: Point,
    pairing: Fp2Element,
}

impl TorsionBasis {
    pub fn new(p_gen: Point, q_gen: Point, pairing: Fp2Element) -> Self {
        TorsionBasis {
            p_gen,
            q_gen,
            pairing,
        }
    }

    pub fn p_gen(&self) -> &Point {
        &self.p_gen
    }

    pub fn q_gen(&self) -> &Point {
        &self.q_gen
    }

    pub fn pairing(&self) -> &Fp2Element {
        &self.pairing
    }
}

/// Value of the line through `v` and `w` (tangent when v = w) at the affine
/// point (at_x, at_y). Degenerate chords fall back to vertical lines; a line
/// through the identity is the vertical through the other point.
fn line_value(
    v: &Point,
    w: &Point,
    at_x: &Fp2Element,
    at_y: &Fp2Element,
    curve: &CurveParams,
) -> Fp2Element {
    match (v.coords(), w.coords()) {
        (None, None) => curve.field().fp2_one(),
        (Some((x, _)), None) | (None, Some((x, _))) => at_x.sub(x),
        (Some((xv, yv)), Some((xw, yw))) => {
            if xv == xw && (yv != yw || yv.is_zero()) {
                // vertical: v + w = O or tangent at a 2-torsion point
                return at_x.sub(xv);
            }
            let lambda = if xv == xw {
                let three = curve.field().fp2_u64(3, 0);
                let two = curve.field().fp2_u64(2, 0);
                let num = three.mul(&xv.square()).add(curve.a());
                num.mul(&two.mul(yv).inv().expect("y != 0 here"))
            } else {
                yw.sub(yv).mul(&xw.sub(xv).inv().expect("xv != xw"))
            };
            at_y.sub(yv).sub(&lambda.mul(&at_x.sub(xv)))
        }
    }
}

fn vertical_value(v: &Point, at_x: &Fp2Element, curve: &CurveParams) -> Fp2Element {
    match v.coords() {
        None => curve.field().fp2_one(),
        Some((x, _)) => at_x.sub(x),
    }
}

/// Miller's algorithm: evaluates f_{n,P} with divisor n(P) - n(O) at the
/// affine point `at`. Returns None when a line function vanishes at `at`
/// (the auxiliary shift must then be resampled).
fn miller_eval(n: &BigUint, p: &Point, at: &Point, curve: &CurveParams) -> Option<Fp2Element> {
    let (at_x, at_y) = at.coords()?;
    let mut num = curve.field().fp2_one();
    let mut den = curve.field().fp2_one();
    let mut v = p.clone();
    for i in (0..n.bits() - 1).rev() {
        let l = line_value(&v, &v, at_x, at_y, curve);
        v = curve::add(&v, &v, curve);
        let w = vertical_value(&v, at_x, curve);
        if l.is_zero() || w.is_zero() {
            return None;
        }
        num = num.square().mul(&l);
        den = den.square().mul(&w);
        if n.bit(i) {
            let l = line_value(&v, p, at_x, at_y, curve);
            v = curve::add(&v, p, curve);
            let w = vertical_value(&v, at_x, curve);
            if l.is_zero() || w.is_zero() {
                return None;
            }
            num = num.mul(&l);
            den = den.mul(&w);
        }
    }
    Some(num.mul(&den.inv().ok()?))
}

/// The order-l^e Weil pairing e(P, Q), a root of unity in mu_{l^e}.
///
/// Evaluated as f_{n,P}(D_Q) / f_{n,Q}(D_P) on the shifted divisors
/// D_Q = (Q+U) - (U) and D_P = (P-U) - (-U) for an auxiliary point U,
/// resampled whenever an evaluation degenerates.
pub fn weil_pairing(p: &Point, q: &Point, ctx: &TorsionContext) -> Result<Fp2Element, Error> {
    if !ctx.in_torsion(p) || !ctx.in_torsion(q) {
        return Err(Error::NotInTorsion);
    }
    let one = ctx.curve.field().fp2_one();
    if p.is_identity() || q.is_identity() || p == q {
        return Ok(one);
    }
    let n = ctx.lpow_e().clone();
    // The pairing value does not depend on the shift, so a fixed-seed
    // internal stream keeps the routine deterministic without an rng
    // argument.
    let mut aux_rng = StdRng::seed_from_u64(WEIL_AUX_SEED);
    for _ in 0..PAIRING_RETRY_LIMIT {
        let u = curve::random_point(&ctx.curve, &mut aux_rng);
        let q_u = curve::add(q, &u, &ctx.curve);
        let p_mu = curve::sub(p, &u, &ctx.curve);
        let m_u = curve::neg(&u);
        if u.is_identity() || q_u.is_identity() || p_mu.is_identity() || m_u.is_identity() {
            continue;
        }
        let vals = (
            miller_eval(&n, p, &q_u, &ctx.curve),
            miller_eval(&n, p, &u, &ctx.curve),
            miller_eval(&n, q, &p_mu, &ctx.curve),
            miller_eval(&n, q, &m_u, &ctx.curve),
        );
        let (Some(a1), Some(a2), Some(b1), Some(b2)) = vals else {
            continue;
        };
        if a2.is_zero() || b1.is_zero() {
            continue;
        }
        let den = a2.mul(&b1);
        let Ok(den_inv) = den.inv() else { continue };
        let result = a1.mul(&b2).mul(&den_inv);
        if result.pow(&n).is_one() {
            return Ok(result);
        }
    }
    Err(Error::RetryLimitExceeded {
        what: "computing the Weil pairing",
        limit: PAIRING_RETRY_LIMIT,
    })
}

const WEIL_AUX_SEED: u64 = 0x7765_696c_7061_6972;

/// Projects any rational point into E[l^e] by multiplying with the
/// cofactor f.
pub fn cofactor_project(r: &Point, ctx: &TorsionContext) -> Point {
    curve::scalar_mul_uint(&ctx.f, r, &ctx.curve)
}

/// True iff P and Q together generate E[l^e], tested through the pairing:
/// e(P, Q)^(l^(e-1)) != 1. A pairing of full order l^e forces both points
/// to full order, so no separate order check is needed.
pub fn is_independent(p: &Point, q: &Point, ctx: &TorsionContext) -> Result<bool, Error> {
    let g = weil_pairing(p, q, ctx)?;
    Ok(!pairing_is_degenerate(&g, ctx))
}

fn pairing_is_degenerate(g: &Fp2Element, ctx: &TorsionContext) -> bool {
    g.pow(&l_pow(ctx.l, ctx.e - 1)).is_one()
}

fn sample_full_order(
    ctx: &TorsionContext,
    rng: &mut dyn RngCore,
    attempts: &mut usize,
) -> Result<Point, Error> {
    for _ in 0..ctx.retry_limit {
        *attempts += 1;
        let r = curve::random_point(&ctx.curve, rng);
        let t = cofactor_project(&r, ctx);
        let u = curve::point_lpower_order(&t, ctx.l, ctx.e, &ctx.curve)?;
        if u == ctx.e {
            return Ok(t);
        }
    }
    Err(Error::RetryLimitExceeded {
        what: "sampling a point of full l-power order",
        limit: ctx.retry_limit,
    })
}

/// Finds a generator pair of E[l^e], returning the number of random
/// samples drawn along the way.
pub fn find_basis_detailed(
    ctx: &TorsionContext,
    rng: &mut dyn RngCore,
) -> Result<(TorsionBasis, usize), Error> {
    let mut attempts = 0;
    let p_gen = sample_full_order(ctx, rng, &mut attempts)?;
    for _ in 0..ctx.retry_limit {
        let q_gen = sample_full_order(ctx, rng, &mut attempts)?;
        let pairing = weil_pairing(&p_gen, &q_gen, ctx)?;
        if !pairing_is_degenerate(&pairing, ctx) {
            return Ok((TorsionBasis::new(p_gen, q_gen, pairing), attempts));
        }
    }
    Err(Error::RetryLimitExceeded {
        what: "finding an independent second generator",
        limit: ctx.retry_limit,
    })
}

pub fn find_basis(ctx: &TorsionContext, rng: &mut dyn RngCore) -> Result<TorsionBasis, Error> {
    find_basis_detailed(ctx, rng).map(|(basis, _)| basis)
}

/// Completes a full-order point K to a generator pair, returning K' with
/// <K, K'> = E[l^e].
pub fn complete_basis(
    k: &Point,
    ctx: &TorsionContext,
    rng: &mut dyn RngCore,
) -> Result<Point, Error> {
    let u = curve::point_lpower_order(k, ctx.l, ctx.e, &ctx.curve)?;
    if u != ctx.e {
        return Err(Error::OrderError {
            expected: ctx.e,
            found: u,
        });
    }
    let mut attempts = 0;
    for _ in 0..ctx.retry_limit {
        let cand = sample_full_order(ctx, rng, &mut attempts)?;
        let pairing = weil_pairing(k, &cand, ctx)?;
        if !pairing_is_degenerate(&pairing, ctx) {
            return Ok(cand);
        }
    }
    Err(Error::RetryLimitExceeded {
        what: "completing a basis",
        limit: ctx.retry_limit,
    })
}
