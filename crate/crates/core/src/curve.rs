//! Short-Weierstrass curve group E(F_{p^2}) for y^2 = x^3 + a*x + b, in
//! affine coordinates with an explicit identity variant.
//!
//! The algorithms built on top are discrete-log-bound rather than
//! curve-arithmetic-bound, so affine clarity wins over projective speed.

use std::cell::Cell;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rand::{Rng, RngCore};

use crate::error::Error;
use crate::field::{Fp2Element, PrimeField};

thread_local! {
    static OP_COUNT: Cell<u64> = const { Cell::new(0) };
}

/// Group operations (additions and doublings) performed by the current
/// thread since the last [`reset_op_count`].
pub fn op_count() -> u64 {
    OP_COUNT.with(|c| c.get())
}

pub fn reset_op_count() {
    OP_COUNT.with(|c| c.set(0));
}

fn bump_op_count() {
    OP_COUNT.with(|c| c.set(c.get() + 1));
}

/// Curve coefficients together with the square root N0 of the group order,
/// #E(F_{p^2}) = N0^2. For the library's parameter family N0 = p + 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveParams {
    a: Fp2Element,
    b: Fp2Element,
    field: PrimeField,
    order_root: BigUint,
}

impl CurveParams {
    pub fn new(
        a: Fp2Element,
        b: Fp2Element,
        field: PrimeField,
        order_root: BigUint,
    ) -> Result<Self, Error> {
        // 4a^3 + 27b^2 != 0
        let four = field.fp2_u64(4, 0);
        let twenty_seven = field.fp2_u64(27, 0);
        let disc = four
            .mul(&a)
            .mul(&a)
            .mul(&a)
            .add(&twenty_seven.mul(&b).mul(&b));
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(CurveParams {
            a,
            b,
            field,
            order_root,
        })
    }

    /// The canonical supersingular curve y^2 = x^3 + x with #E = (p + 1)^2.
    pub fn supersingular(field: PrimeField) -> Self {
        let order_root = field.modulus() + 1u32;
        CurveParams::new(field.fp2_one(), field.fp2_zero(), field.clone(), order_root)
            .expect("y^2 = x^3 + x is non-singular")
    }

    pub fn a(&self) -> &Fp2Element {
        &self.a
    }

    pub fn b(&self) -> &Fp2Element {
        &self.b
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn order_root(&self) -> &BigUint {
        &self.order_root
    }

    /// Right-hand side x^3 + a*x + b.
    pub fn rhs(&self, x: &Fp2Element) -> Fp2Element {
        x.square().mul(x).add(&self.a.mul(x)).add(&self.b)
    }
}

/// An affine point or the identity O.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Identity,
    Affine { x: Fp2Element, y: Fp2Element },
}

impl Point {
    pub fn affine(x: Fp2Element, y: Fp2Element) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Point::Identity)
    }

    pub fn coords(&self) -> Option<(&Fp2Element, &Fp2Element)> {
        match self {
            Point::Identity => None,
            Point::Affine { x, y } => Some((x, y)),
        }
    }
}

pub fn is_on_curve(pt: &Point, curve: &CurveParams) -> bool {
    match pt {
        Point::Identity => true,
        Point::Affine { x, y } => y.square() == curve.rhs(x),
    }
}

pub fn neg(pt: &Point) -> Point {
    match pt {
        Point::Identity => Point::Identity,
        Point::Affine { x, y } => Point::Affine {
            x: x.clone(),
            y: y.neg(),
        },
    }
}

/// Chord-tangent group law. Doubling a 2-torsion point (y = 0) yields the
/// identity. Inputs must lie on the curve; this is checked at the
/// deserialization boundary and asserted here in debug builds.
pub fn add(p: &Point, q: &Point, curve: &CurveParams) -> Point {
    debug_assert!(is_on_curve(p, curve), "add: left operand off curve");
    debug_assert!(is_on_curve(q, curve), "add: right operand off curve");
    bump_op_count();
    match (p, q) {
        (Point::Identity, _) => q.clone(),
        (_, Point::Identity) => p.clone(),
        (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => {
            let lambda = if x1 == x2 {
                if *y1 == y2.neg() {
                    return Point::Identity;
                }
                // tangent: (3x^2 + a) / 2y
                let three = curve.field.fp2_u64(3, 0);
                let two = curve.field.fp2_u64(2, 0);
                let num = three.mul(&x1.square()).add(&curve.a);
                let den = two.mul(y1);
                num.mul(&den.inv().expect("y != 0 on the doubling path"))
            } else {
                let num = y2.sub(y1);
                let den = x2.sub(x1);
                num.mul(&den.inv().expect("x1 != x2"))
            };
            let x3 = lambda.square().sub(x1).sub(x2);
            let y3 = lambda.mul(&x1.sub(&x3)).sub(y1);
            Point::Affine { x: x3, y: y3 }
        }
    }
}

pub fn sub(p: &Point, q: &Point, curve: &CurveParams) -> Point {
    add(p, &neg(q), curve)
}

/// Double-and-add; negative scalars go through point negation and
/// scalar_mul(0, P) = O. Scalars are plain integers, not residues:
/// reduction mod the group exponent is the caller's business.
pub fn scalar_mul(k: &BigInt, p: &Point, curve: &CurveParams) -> Point {
    let (k, base) = if k.is_negative() {
        (k.magnitude().clone(), neg(p))
    } else {
        (k.magnitude().clone(), p.clone())
    };
    scalar_mul_uint(&k, &base, curve)
}

pub fn scalar_mul_uint(k: &BigUint, p: &Point, curve: &CurveParams) -> Point {
    if k.is_zero() || p.is_identity() {
        return Point::Identity;
    }
    let mut acc = Point::Identity;
    for i in (0..k.bits()).rev() {
        acc = add(&acc, &acc, curve);
        if k.bit(i) {
            acc = add(&acc, p, curve);
        }
    }
    acc
}

/// The unique u <= e with ord(K) = l^u, scanning the ordered set
/// {l^j * K} for the first identity; at most e multiplications by l.
pub fn point_lpower_order(k: &Point, l: u64, e: u32, curve: &CurveParams) -> Result<u32, Error> {
    let l = BigUint::from(l);
    let mut t = k.clone();
    for j in 0..=e {
        if t.is_identity() {
            return Ok(j);
        }
        t = scalar_mul_uint(&l, &t, curve);
    }
    Err(Error::NotInTorsion)
}

/// Uniform point sampling: draw x until x^3 + ax + b is a square, take the
/// canonical root, then flip its sign with one random bit.
pub fn random_point(curve: &CurveParams, rng: &mut dyn RngCore) -> Point {
    loop {
        let x = curve.field.random_fp2(rng);
        if let Ok(y) = curve.rhs(&x).sqrt() {
            let y = if rng.gen::<bool>() { y.neg() } else { y };
            return Point::Affine { x, y };
        }
    }
}
