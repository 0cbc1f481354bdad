//! Arithmetic in F_p and its quadratic extension F_{p^2} = F_p(i), i^2 = -1.
//!
//! The modulus is restricted to p = 3 (mod 4) so that -1 is a non-residue
//! and X^2 + 1 is irreducible over F_p. Elements keep a shared handle to
//! their field; mixing elements of different fields in a binary operation
//! is a programming error and panics with "modulus mismatch".

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::RngCore;

use crate::arith::{is_probable_prime, mod_inverse};
use crate::error::Error;

#[derive(Debug)]
struct FieldInner {
    p: BigUint,
    /// (p + 1) / 4, the square-root exponent for p = 3 (mod 4)
    sqrt_exp: BigUint,
    /// (p - 1) / 2, the Euler criterion exponent in F_p
    legendre_exp: BigUint,
    /// inverse of 2 mod p
    half: BigUint,
}

/// The prime field F_p, p = 3 (mod 4). Cheap to clone and share.
#[derive(Clone, Debug)]
pub struct PrimeField(Arc<FieldInner>);

impl PrimeField {
    /// Constructs the field, checking primality (64 Miller-Rabin rounds)
    /// and the p = 3 (mod 4) restriction.
    pub fn new(p: BigUint) -> Result<Self, Error> {
        if !is_probable_prime(&p) {
            return Err(Error::NotPrime);
        }
        if (&p % 4u32) != BigUint::from(3u32) {
            return Err(Error::BadModulus);
        }
        let one = BigUint::one();
        let sqrt_exp = (&p + &one) >> 2;
        let legendre_exp = (&p - &one) >> 1;
        let half = mod_inverse(&BigUint::from(2u32), &p).expect("p is odd");
        Ok(PrimeField(Arc::new(FieldInner {
            p,
            sqrt_exp,
            legendre_exp,
            half,
        })))
    }

    pub fn modulus(&self) -> &BigUint {
        &self.0.p
    }

    /// Reduces `value` into an element of F_p.
    pub fn element(&self, value: BigUint) -> FpElement {
        FpElement {
            value: value % &self.0.p,
            field: self.clone(),
        }
    }

    pub fn element_u64(&self, value: u64) -> FpElement {
        self.element(BigUint::from(value))
    }

    /// Builds c0 + c1*i from already-reduced-or-not coordinates.
    pub fn fp2(&self, c0: BigUint, c1: BigUint) -> Fp2Element {
        Fp2Element {
            c0: self.element(c0),
            c1: self.element(c1),
        }
    }

    pub fn fp2_u64(&self, c0: u64, c1: u64) -> Fp2Element {
        self.fp2(BigUint::from(c0), BigUint::from(c1))
    }

    pub fn fp2_zero(&self) -> Fp2Element {
        self.fp2_u64(0, 0)
    }

    pub fn fp2_one(&self) -> Fp2Element {
        self.fp2_u64(1, 0)
    }

    /// Uniformly random element of F_{p^2}.
    pub fn random_fp2(&self, rng: &mut dyn RngCore) -> Fp2Element {
        let c0 = rng.gen_biguint_below(&self.0.p);
        let c1 = rng.gen_biguint_below(&self.0.p);
        self.fp2(c0, c1)
    }

    fn same_field(&self, other: &PrimeField) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.p == other.0.p
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}
impl Eq for PrimeField {}

/// A residue in [0, p).
#[derive(Clone)]
pub struct FpElement {
    value: BigUint,
    field: PrimeField,
}

impl FpElement {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check(&self, rhs: &FpElement) {
        assert!(self.field.same_field(&rhs.field), "modulus mismatch");
    }

    fn make(&self, value: BigUint) -> FpElement {
        FpElement {
            value,
            field: self.field.clone(),
        }
    }

    pub fn add(&self, rhs: &FpElement) -> FpElement {
        self.check(rhs);
        let p = self.field.modulus();
        let mut v = &self.value + &rhs.value;
        if &v >= p {
            v -= p;
        }
        self.make(v)
    }

    pub fn sub(&self, rhs: &FpElement) -> FpElement {
        self.check(rhs);
        let p = self.field.modulus();
        let v = if self.value >= rhs.value {
            &self.value - &rhs.value
        } else {
            p - &rhs.value + &self.value
        };
        self.make(v)
    }

    pub fn mul(&self, rhs: &FpElement) -> FpElement {
        self.check(rhs);
        self.make(&self.value * &rhs.value % self.field.modulus())
    }

    pub fn neg(&self) -> FpElement {
        if self.value.is_zero() {
            self.clone()
        } else {
            self.make(self.field.modulus() - &self.value)
        }
    }

    pub fn inv(&self) -> Result<FpElement, Error> {
        Ok(self.make(mod_inverse(&self.value, self.field.modulus())?))
    }

    pub fn pow(&self, k: &BigUint) -> FpElement {
        self.make(self.value.modpow(k, self.field.modulus()))
    }

    /// True iff the element is zero or a quadratic residue.
    pub fn is_square(&self) -> bool {
        if self.value.is_zero() {
            return true;
        }
        self.value
            .modpow(&self.field.0.legendre_exp, self.field.modulus())
            .is_one()
    }

    /// Square root in F_p via the p = 3 (mod 4) shortcut a^((p+1)/4).
    pub fn sqrt(&self) -> Result<FpElement, Error> {
        if self.value.is_zero() {
            return Ok(self.clone());
        }
        let s = self.pow(&self.field.0.sqrt_exp.clone());
        if s.mul(&s) == *self {
            Ok(s)
        } else {
            Err(Error::NotASquare)
        }
    }
}

impl PartialEq for FpElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.value == other.value
    }
}
impl Eq for FpElement {}

impl fmt::Debug for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// c0 + c1*i with i^2 = -1.
#[derive(Clone, PartialEq, Eq)]
pub struct Fp2Element {
    c0: FpElement,
    c1: FpElement,
}

impl Fp2Element {
    pub fn c0(&self) -> &FpElement {
        &self.c0
    }

    pub fn c1(&self) -> &FpElement {
        &self.c1
    }

    pub fn field(&self) -> &PrimeField {
        self.c0.field()
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.c0.value.is_one() && self.c1.is_zero()
    }

    pub fn add(&self, rhs: &Fp2Element) -> Fp2Element {
        Fp2Element {
            c0: self.c0.add(&rhs.c0),
            c1: self.c1.add(&rhs.c1),
        }
    }

    pub fn sub(&self, rhs: &Fp2Element) -> Fp2Element {
        Fp2Element {
            c0: self.c0.sub(&rhs.c0),
            c1: self.c1.sub(&rhs.c1),
        }
    }

    /// (a0 + a1 i)(b0 + b1 i) = (a0 b0 - a1 b1) + (a0 b1 + a1 b0) i
    pub fn mul(&self, rhs: &Fp2Element) -> Fp2Element {
        let t0 = self.c0.mul(&rhs.c0);
        let t1 = self.c1.mul(&rhs.c1);
        let t2 = self.c0.mul(&rhs.c1);
        let t3 = self.c1.mul(&rhs.c0);
        Fp2Element {
            c0: t0.sub(&t1),
            c1: t2.add(&t3),
        }
    }

    pub fn square(&self) -> Fp2Element {
        self.mul(self)
    }

    pub fn neg(&self) -> Fp2Element {
        Fp2Element {
            c0: self.c0.neg(),
            c1: self.c1.neg(),
        }
    }

    pub fn conjugate(&self) -> Fp2Element {
        Fp2Element {
            c0: self.c0.clone(),
            c1: self.c1.neg(),
        }
    }

    /// The norm c0^2 + c1^2, an element of F_p.
    pub fn norm(&self) -> FpElement {
        self.c0.mul(&self.c0).add(&self.c1.mul(&self.c1))
    }

    /// Inverse via conjugate over norm.
    pub fn inv(&self) -> Result<Fp2Element, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n_inv = self.norm().inv()?;
        let conj = self.conjugate();
        Ok(Fp2Element {
            c0: conj.c0.mul(&n_inv),
            c1: conj.c1.mul(&n_inv),
        })
    }

    /// Square-and-multiply; pow(a, 0) = 1 for every a.
    pub fn pow(&self, k: &BigUint) -> Fp2Element {
        let one = Fp2Element {
            c0: self.c0.make(BigUint::one()),
            c1: self.c1.make(BigUint::zero()),
        };
        if k.is_zero() {
            return one;
        }
        let mut acc = one;
        for i in (0..k.bits()).rev() {
            acc = acc.square();
            if k.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    /// True iff the element is zero or a square in F_{p^2}, by Euler's
    /// criterion with exponent (p^2 - 1) / 2.
    pub fn is_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let p = self.field().modulus();
        let exp = (p * p - 1u32) >> 1;
        self.pow(&exp).is_one()
    }

    /// Square root with a deterministic canonical choice: of the two roots
    /// +/-s, returns the one whose (c0, c1) integer pair is lexicographically
    /// smaller.
    ///
    /// For c1 = 0 the input lies in F_p and the roots are either (+-x, 0) or
    /// (0, +-x); otherwise the norm-based two-step method applies: with
    /// a = c0 + c1*i and n = sqrt(norm(a)) in F_p, one of (c0 +- n)/2 is a
    /// square x0^2, and then c1 = 2*x0*x1 determines x1.
    pub fn sqrt(&self) -> Result<Fp2Element, Error> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let root = if self.c1.is_zero() {
            if let Ok(x) = self.c0.sqrt() {
                Fp2Element {
                    c0: x,
                    c1: self.c1.clone(),
                }
            } else {
                // a = -x^2 gives the root x*i
                let x = self.c0.neg().sqrt().map_err(|_| Error::NotASquare)?;
                Fp2Element {
                    c0: self.c1.clone(),
                    c1: x,
                }
            }
        } else {
            let alpha = self.norm().sqrt().map_err(|_| Error::NotASquare)?;
            let half = self.c0.make(self.field().0.half.clone());
            let mut x0_sq = self.c0.add(&alpha).mul(&half);
            if !x0_sq.is_square() {
                x0_sq = self.c0.sub(&alpha).mul(&half);
            }
            let x0 = x0_sq.sqrt().map_err(|_| Error::NotASquare)?;
            let x1 = self
                .c1
                .mul(&half)
                .mul(&x0.inv().map_err(|_| Error::NotASquare)?);
            Fp2Element { c0: x0, c1: x1 }
        };
        if root.square() != *self {
            return Err(Error::NotASquare);
        }
        let neg = root.neg();
        if (neg.c0.value(), neg.c1.value()) < (root.c0.value(), root.c1.value()) {
            Ok(neg)
        } else {
            Ok(root)
        }
    }
}

impl fmt::Debug for Fp2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}+{:?}i", self.c0, self.c1)
    }
}

impl Hash for Fp2Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c0.value.hash(state);
        self.c1.value.hash(state);
    }
}
