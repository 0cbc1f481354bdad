//! Search for torsion parameters: the smallest cofactor f making
//! p = l^e * f - 1 a prime congruent to 3 mod 4.

use num_bigint::BigUint;
use num_traits::One;

use crate::arith::{is_probable_prime, is_small_prime, l_pow};
use crate::curve::CurveParams;
use crate::error::Error;
use crate::field::PrimeField;
use crate::torsion::TorsionContext;

pub const DEFAULT_F_MAX: u64 = 10_000;

#[derive(Clone, Copy, Debug)]
pub struct ParamRequest {
    pub l: u64,
    pub e: u32,
    pub f_max: u64,
}

impl ParamRequest {
    pub fn new(l: u64, e: u32) -> Self {
        ParamRequest {
            l,
            e,
            f_max: DEFAULT_F_MAX,
        }
    }
}

/// Finds the smallest f in [1, f_max] with gcd(f, l) = 1 such that
/// p = l^e * f - 1 is prime and p = 3 (mod 4), and builds the context for
/// y^2 = x^3 + x over F_{p^2}. Only the "-1" parameter family is
/// generated; the "+1" branch would change the curve cardinality
/// bookkeeping and is deliberately unsupported.
pub fn gen_params(req: &ParamRequest) -> Result<TorsionContext, Error> {
    if !is_small_prime(req.l) {
        return Err(Error::BadParams("l must be prime"));
    }
    if req.e == 0 {
        return Err(Error::BadParams("e must be positive"));
    }
    let le = l_pow(req.l, req.e);
    for f in 1..=req.f_max {
        if f % req.l == 0 {
            continue;
        }
        let p = &le * f - BigUint::one();
        if (&p % 4u32) != BigUint::from(3u32) {
            continue;
        }
        if !is_probable_prime(&p) {
            continue;
        }
        let field = PrimeField::new(p)?;
        let curve = CurveParams::supersingular(field);
        return TorsionContext::new(curve, req.l, req.e, BigUint::from(f));
    }
    Err(Error::NotFound)
}
