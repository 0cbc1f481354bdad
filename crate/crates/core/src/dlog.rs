//! Discrete logarithms: the one-dimensional Pohlig-Hellman routine in the
//! root-of-unity subgroup mu_{l^e} of F_{p^2}^*, and the two-dimensional
//! extended logarithm in E[l^e] obtained by pairing K against the basis.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith::l_pow;
use crate::curve::{self, Point};
use crate::error::Error;
use crate::field::Fp2Element;
use crate::torsion::{weil_pairing, TorsionBasis, TorsionContext};

/// The exponent pair (k1, k2) of K = k1*P' + k2*Q' in a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedDlog {
    pub k1: BigUint,
    pub k2: BigUint,
}

/// Pohlig-Hellman in the cyclic group of order l^e generated by g: finds
/// x in [0, l^e) with g^x = h, one base-l digit at a time. Each digit is a
/// baby-step-giant-step search in the order-l subgroup, so the total cost
/// is O(e * sqrt(l) * log(l^e)) group operations.
pub fn dlog_prime_power(h: &Fp2Element, g: &Fp2Element, l: u64, e: u32) -> Result<BigUint, Error> {
    let gamma = g.pow(&l_pow(l, e - 1));
    // baby table for the order-l subgroup
    let m = (l as f64).sqrt().ceil() as u64;
    let mut table: HashMap<Fp2Element, u64> = HashMap::with_capacity(m as usize);
    let mut cur = g.field().fp2_one();
    for j in 0..m {
        table.entry(cur.clone()).or_insert(j);
        cur = cur.mul(&gamma);
    }
    let giant = gamma
        .inv()
        .map_err(|_| Error::NotInSubgroup)?
        .pow(&BigUint::from(m));
    let digit_dlog = |y: &Fp2Element| -> Result<u64, Error> {
        let mut y = y.clone();
        let mut t = 0u64;
        while t * m < l {
            if let Some(&j) = table.get(&y) {
                let digit = t * m + j;
                if digit < l {
                    return Ok(digit);
                }
            }
            y = y.mul(&giant);
            t += 1;
        }
        Err(Error::NotInSubgroup)
    };

    let g_inv = g.inv().map_err(|_| Error::NotInSubgroup)?;
    let mut x = BigUint::zero();
    for i in 0..e {
        let shifted = h.mul(&g_inv.pow(&x));
        let level = shifted.pow(&l_pow(l, e - 1 - i));
        let digit = digit_dlog(&level)?;
        x += BigUint::from(digit) * l_pow(l, i);
    }
    Ok(x)
}

/// Solves K = k1*P' + k2*Q' through two pairing reductions: with
/// g = e(P', Q'), the values e(P', K) = g^k2 and e(K, Q') = g^k1 turn the
/// curve problem into two cyclic logarithms in mu_{l^e}. The result is
/// re-verified against the curve before returning, which also pins down
/// the pairing orientation.
pub fn extended_dlog(
    k: &Point,
    basis: &TorsionBasis,
    ctx: &TorsionContext,
) -> Result<ExtendedDlog, Error> {
    let g = basis.pairing();
    let via_q = weil_pairing(basis.p_gen(), k, ctx)?;
    let via_p = weil_pairing(k, basis.q_gen(), ctx)?;
    let k2 = dlog_prime_power(&via_q, g, ctx.l(), ctx.e())?;
    let k1 = dlog_prime_power(&via_p, g, ctx.l(), ctx.e())?;

    let reconstructs = |k1: &BigUint, k2: &BigUint| {
        let lhs = curve::add(
            &curve::scalar_mul_uint(k1, basis.p_gen(), ctx.curve()),
            &curve::scalar_mul_uint(k2, basis.q_gen(), ctx.curve()),
            ctx.curve(),
        );
        lhs == *k
    };
    if reconstructs(&k1, &k2) {
        return Ok(ExtendedDlog { k1, k2 });
    }
    // the opposite pairing orientation negates both exponents
    let n = ctx.lpow_e();
    let neg = |v: &BigUint| if v.is_zero() { v.clone() } else { n - v };
    let (k1n, k2n) = (neg(&k1), neg(&k2));
    if reconstructs(&k1n, &k2n) {
        return Ok(ExtendedDlog { k1: k1n, k2: k2n });
    }
    Err(Error::VerificationFailed("extended dlog reconstruction"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveParams;
    use crate::field::PrimeField;
    use crate::torsion::find_basis;
    use num_traits::One;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn ctx47() -> TorsionContext {
        let field = PrimeField::new(BigUint::from(47u32)).unwrap();
        TorsionContext::new(CurveParams::supersingular(field), 2, 4, BigUint::from(3u32)).unwrap()
    }

    /// Primitive 16th root of unity in F_{47^2}^*.
    fn mu16_generator() -> Fp2Element {
        let field = PrimeField::new(BigUint::from(47u32)).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(40);
        loop {
            let a = field.random_fp2(&mut rng);
            if a.is_zero() {
                continue;
            }
            let g = a.pow(&BigUint::from(2208u32 / 16));
            if !g.pow(&BigUint::from(8u32)).is_one() {
                return g;
            }
        }
    }

    #[test]
    fn dlog_edge_cases() {
        let g = mu16_generator();
        let one = g.field().fp2_one();
        assert_eq!(dlog_prime_power(&one, &g, 2, 4).unwrap(), BigUint::zero());
        assert_eq!(dlog_prime_power(&g, &g, 2, 4).unwrap(), BigUint::one());
    }

    #[test]
    fn dlog_round_trip() {
        let g = mu16_generator();
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for _ in 0..100 {
            let x = BigUint::from(rng.gen_range(0u64..16));
            let h = g.pow(&x);
            assert_eq!(dlog_prime_power(&h, &g, 2, 4).unwrap(), x);
        }
    }

    #[test]
    fn dlog_detects_elements_outside_subgroup() {
        // treat a primitive 16th root as the base of an order-8 subgroup
        let g16 = mu16_generator();
        let g8 = g16.square();
        assert_eq!(
            dlog_prime_power(&g16, &g8, 2, 3).unwrap_err(),
            Error::NotInSubgroup
        );
    }

    #[test]
    fn extended_dlog_edge_cases() {
        let ctx = ctx47();
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let basis = find_basis(&ctx, &mut rng).unwrap();
        let zero = extended_dlog(&Point::Identity, &basis, &ctx).unwrap();
        assert!(zero.k1.is_zero() && zero.k2.is_zero());
        let p = extended_dlog(basis.p_gen(), &basis, &ctx).unwrap();
        assert_eq!(p.k1, BigUint::one());
        assert!(p.k2.is_zero());
    }

    #[test]
    fn extended_dlog_round_trip() {
        let ctx = ctx47();
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        let basis = find_basis(&ctx, &mut rng).unwrap();
        for _ in 0..200 {
            let k1 = BigUint::from(rng.gen_range(0u64..16));
            let k2 = BigUint::from(rng.gen_range(0u64..16));
            let k = curve::add(
                &curve::scalar_mul_uint(&k1, basis.p_gen(), ctx.curve()),
                &curve::scalar_mul_uint(&k2, basis.q_gen(), ctx.curve()),
                ctx.curve(),
            );
            let dl = extended_dlog(&k, &basis, &ctx).unwrap();
            assert_eq!((dl.k1, dl.k2), (k1, k2));
        }
    }

    /// Mapping torsion points into exponent coordinates must carry
    /// pairing-independence to a unit determinant mod l, matching the
    /// model group's notion of a generating pair.
    #[test]
    fn independence_matches_model_determinant() {
        let ctx = ctx47();
        let mut rng = ChaCha12Rng::seed_from_u64(45);
        let basis = find_basis(&ctx, &mut rng).unwrap();
        for _ in 0..40 {
            let a =
                crate::torsion::cofactor_project(&curve::random_point(ctx.curve(), &mut rng), &ctx);
            let b =
                crate::torsion::cofactor_project(&curve::random_point(ctx.curve(), &mut rng), &ctx);
            let da = extended_dlog(&a, &basis, &ctx).unwrap();
            let db = extended_dlog(&b, &basis, &ctx).unwrap();
            // mod 2 the determinant k1a*k2b - k2a*k1b is a parity sum
            let det_odd = (da.k1 * db.k2 + da.k2 * db.k1) % 2u32 == BigUint::one();
            let independent = crate::torsion::is_independent(&a, &b, &ctx).unwrap();
            assert_eq!(independent, det_odd);
        }
    }

    #[test]
    fn extended_dlog_is_linear() {
        let ctx = ctx47();
        let mut rng = ChaCha12Rng::seed_from_u64(44);
        let basis = find_basis(&ctx, &mut rng).unwrap();
        let n = ctx.lpow_e();
        for _ in 0..50 {
            let a =
                crate::torsion::cofactor_project(&curve::random_point(ctx.curve(), &mut rng), &ctx);
            let b =
                crate::torsion::cofactor_project(&curve::random_point(ctx.curve(), &mut rng), &ctx);
            let da = extended_dlog(&a, &basis, &ctx).unwrap();
            let db = extended_dlog(&b, &basis, &ctx).unwrap();
            let dsum = extended_dlog(&curve::add(&a, &b, ctx.curve()), &basis, &ctx).unwrap();
            assert_eq!(dsum.k1, (&da.k1 + &db.k1) % n);
            assert_eq!(dsum.k2, (&da.k2 + &db.k2) % n);
        }
    }
}
