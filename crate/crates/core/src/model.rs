//! Abstract-group backend and brute-force oracles: products of cyclic
//! groups with the standard basis vectors as generators, the generic-group
//! l^r-th root formula, and exhaustive existence scans small enough to
//! serve as golden regression data.

use std::fmt::Write as _;

use num_integer::Integer;

use crate::error::Error;

/// Hard cap for the brute-force generating-pair scan.
const BRUTE_FORCE_CAP: u64 = 32;
/// Hard cap for the full existence-table enumeration.
const TABLE_CAP: u64 = 16;

/// Golden regression copy of `exhaustive_existence_table(2, 2)`.
pub const GOLDEN_EXISTENCE_2_2: &str = include_str!("../data/existence_2_2.csv");

/// The group prod_i Z/n_i with generators g_i = i-th standard basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelGroup {
    orders: Vec<u64>,
}

/// Componentwise-reduced coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelElement {
    coords: Vec<u64>,
}

impl ModelElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl ModelGroup {
    /// Factor orders must each be at least 2 and fit comfortably below
    /// 2^32 so all internal arithmetic stays exact in u128.
    pub fn new(orders: Vec<u64>) -> Result<Self, Error> {
        if orders.is_empty() || orders.iter().any(|&n| n < 2 || n > u32::MAX as u64) {
            return Err(Error::BadParams("factor orders must lie in [2, 2^32)"));
        }
        Ok(ModelGroup { orders })
    }

    pub fn rank2(n: u64) -> Result<Self, Error> {
        ModelGroup::new(vec![n, n])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn element(&self, coords: &[u64]) -> Result<ModelElement, Error> {
        if coords.len() != self.orders.len() {
            return Err(Error::CoordMismatch);
        }
        Ok(ModelElement {
            coords: coords
                .iter()
                .zip(&self.orders)
                .map(|(&c, &n)| c % n)
                .collect(),
        })
    }

    pub fn identity(&self) -> ModelElement {
        ModelElement {
            coords: vec![0; self.orders.len()],
        }
    }

    fn zip_check(&self, a: &ModelElement, b: &ModelElement) {
        debug_assert_eq!(a.coords.len(), self.orders.len());
        debug_assert_eq!(b.coords.len(), self.orders.len());
    }

    pub fn add(&self, a: &ModelElement, b: &ModelElement) -> ModelElement {
        self.zip_check(a, b);
        ModelElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.orders)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        }
    }

    pub fn neg(&self, a: &ModelElement) -> ModelElement {
        ModelElement {
            coords: a
                .coords
                .iter()
                .zip(&self.orders)
                .map(|(&x, &n)| if x == 0 { 0 } else { n - x })
                .collect(),
        }
    }

    pub fn sub(&self, a: &ModelElement, b: &ModelElement) -> ModelElement {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, k: u64, a: &ModelElement) -> ModelElement {
        ModelElement {
            coords: a
                .coords
                .iter()
                .zip(&self.orders)
                .map(|(&x, &n)| ((k as u128 % n as u128) * (x as u128) % n as u128) as u64)
                .collect(),
        }
    }

    /// ord(a) = lcm over components of n_i / gcd(n_i, a_i).
    pub fn order(&self, a: &ModelElement) -> u64 {
        a.coords
            .iter()
            .zip(&self.orders)
            .map(|(&x, &n)| n / n.gcd(&x))
            .fold(1u64, |acc, comp| acc.lcm(&comp))
    }

    /// The l^r-th root of h by the generic-group formula: with
    /// |G| = l^t * s, gcd(l, s) = 1 and d = -s^(-1) mod l^r, the element
    /// x = (sd+1)/l^r * h - sum_i s*d*(k_i/l^r) * g_i satisfies l^r x = h.
    /// Exponents k_i are read off the coordinates; each is first lifted to
    /// a representative divisible by l^r, which exists exactly when the
    /// per-component congruence l^r * x_i = k_i (mod n_i) is solvable.
    pub fn generic_root(&self, h: &ModelElement, l: u64, r: u32) -> Result<ModelElement, Error> {
        if l < 2 {
            return Err(Error::BadParams("l must be at least 2"));
        }
        if r == 0 {
            return Ok(h.clone());
        }
        let lr = (l as u128)
            .checked_pow(r)
            .filter(|&v| v <= u64::MAX as u128)
            .ok_or(Error::BadParams("l^r overflows"))? as u64;

        // |G| = l^t * s with gcd(l, s) = 1
        let mut s: u128 = 1;
        for &n in &self.orders {
            let mut n = n as u128;
            while n.is_multiple_of(l as u128) {
                n /= l as u128;
            }
            s = s
                .checked_mul(n)
                .ok_or(Error::BadParams("group order overflows"))?;
        }
        if s.gcd(&(l as u128)) != 1 {
            return Err(Error::BadParams("gcd(l, s) must be 1"));
        }
        let s_mod = (s % lr as u128) as u64;
        let s_inv = mod_inv_u64(s_mod, lr).ok_or(Error::BadParams("gcd(l, s) must be 1"))?;
        let d = (lr - s_inv) % lr;
        // sd + 1 = c * l^r must divide exactly
        let sd_plus_1 = s * d as u128 + 1;
        assert!(
            sd_plus_1.is_multiple_of(lr as u128),
            "generic root exponent identity violated"
        );
        let c = sd_plus_1 / lr as u128;

        let mut coords = Vec::with_capacity(self.orders.len());
        for (&k, &n) in h.coords.iter().zip(&self.orders) {
            let k_lifted = lift_divisible(k, n, l, lr)?;
            let quotient = k_lifted / lr as u128;
            let n128 = n as u128;
            let pos = c % n128 * (k_lifted % n128) % n128;
            let neg = s % n128 * (quotient % n128) % n128 * (d as u128 % n128) % n128;
            coords.push(((pos + n128 - neg) % n128) as u64);
        }
        let x = ModelElement { coords };
        if self.scalar_mul(lr, &x) != *h {
            return Err(Error::VerificationFailed("generic root reconstruction"));
        }
        Ok(x)
    }
}

fn pow_u64(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).unwrap_or(u64::MAX)
}

fn val_u64(mut n: u64, l: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(l) {
        n /= l;
        v += 1;
    }
    v
}

fn mod_inv_u64(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Smallest non-negative k' with k' = k (mod n) and l^r | k'. Exists iff
/// the congruence l^r * x = k (mod n) is solvable, i.e. gcd(l^r, n) | k.
fn lift_divisible(k: u64, n: u64, l: u64, lr: u64) -> Result<u128, Error> {
    let t = val_u64(n, l);
    let lt = pow_u64(l, t);
    if lr <= lt {
        // l^r | n, so the canonical representative must itself divide
        return if k.is_multiple_of(lr) {
            Ok(k as u128)
        } else {
            Err(Error::NotAPower)
        };
    }
    if !k.is_multiple_of(lt) {
        return Err(Error::NotAPower);
    }
    // solve k + n*j = 0 (mod l^r): (n/l^t) j = -(k/l^t) (mod l^(r-t))
    let reduced_mod = lr / lt;
    let n_red = (n / lt) % reduced_mod;
    let k_red = (k / lt) % reduced_mod;
    let inv = mod_inv_u64(n_red, reduced_mod).ok_or(Error::NotAPower)?;
    let j = (reduced_mod - k_red) % reduced_mod;
    let j = j as u128 * inv as u128 % reduced_mod as u128;
    Ok(k as u128 + n as u128 * j)
}

/// Exhaustive search for a generating pair (P, Q) of (Z/l^e)^2 with
/// m*P + n*Q = K. Scans pairs in lexicographic coordinate order and keeps
/// only those whose determinant is a unit mod l; the first hit is returned.
pub fn brute_force_grep(
    l: u64,
    e: u32,
    k: &ModelElement,
    m: u64,
    n: u64,
) -> Result<Option<(ModelElement, ModelElement)>, Error> {
    let le = (l as u128).pow(e);
    if le > BRUTE_FORCE_CAP as u128 {
        return Err(Error::TooLarge {
            bound: BRUTE_FORCE_CAP,
        });
    }
    let le = le as u64;
    if k.coords.len() != 2 {
        return Err(Error::CoordMismatch);
    }
    let (k0, k1) = (k.coords[0] % le, k.coords[1] % le);
    let (m, n) = (m % le, n % le);
    for p0 in 0..le {
        for p1 in 0..le {
            for q0 in 0..le {
                for q1 in 0..le {
                    let det =
                        (p0 as i128 * q1 as i128 - p1 as i128 * q0 as i128).rem_euclid(l as i128);
                    if det == 0 {
                        continue;
                    }
                    let c0 = (m as u128 * p0 as u128 + n as u128 * q0 as u128) % le as u128;
                    let c1 = (m as u128 * p1 as u128 + n as u128 * q1 as u128) % le as u128;
                    if c0 == k0 as u128 && c1 == k1 as u128 {
                        let g = ModelGroup::rank2(le)?;
                        return Ok(Some((g.element(&[p0, p1])?, g.element(&[q0, q1])?)));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Full existence table over all (m, n, K) for (Z/l^e)^2, one CSV line per
/// tuple with the order exponent u, the gcd valuation r, and the
/// brute-force solvability flag. Deterministic and byte-stable; used as a
/// golden regression artifact.
pub fn exhaustive_existence_table(l: u64, e: u32) -> Result<String, Error> {
    let le = (l as u128).pow(e);
    if le > TABLE_CAP as u128 {
        return Err(Error::TooLarge { bound: TABLE_CAP });
    }
    let le = le as u64;
    let g = ModelGroup::rank2(le)?;
    let mut out = String::from("m,n,k0,k1,u,r,solvable\n");
    for m in 0..le {
        for n in 0..le {
            for k0 in 0..le {
                for k1 in 0..le {
                    let k = g.element(&[k0, k1])?;
                    let u = lpower_order_exponent(le, l, e, &k);
                    let r = gcd_valuation(m, n, l, e);
                    let solvable = brute_force_grep(l, e, &k, m, n)?.is_some();
                    writeln!(out, "{m},{n},{k0},{k1},{u},{r},{}", u8::from(solvable))
                        .expect("string writes cannot fail");
                }
            }
        }
    }
    Ok(out)
}

/// u with ord(K) = l^u inside (Z/l^e)^2.
pub fn lpower_order_exponent(le: u64, l: u64, e: u32, k: &ModelElement) -> u32 {
    let min_val = k
        .coords
        .iter()
        .map(|&c| if c == 0 { e } else { val_u64(c % le, l).min(e) })
        .min()
        .unwrap_or(e);
    e - min_val
}

/// r = v_l(gcd(m, n)) capped at e, with the (0, 0) convention r = e.
pub fn gcd_valuation(m: u64, n: u64, l: u64, e: u32) -> u32 {
    let g = m.gcd(&n);
    if g == 0 {
        e
    } else {
        val_u64(g, l).min(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_validates_coordinate_count() {
        let g = ModelGroup::rank2(16).unwrap();
        assert_eq!(g.element(&[1, 2, 3]).unwrap_err(), Error::CoordMismatch);
        assert!(g.element(&[17, 2]).is_ok());
    }

    #[test]
    fn orders_of_elements() {
        let g16 = ModelGroup::rank2(16).unwrap();
        assert_eq!(g16.order(&g16.identity()), 1);
        assert_eq!(g16.order(&g16.element(&[4, 6]).unwrap()), 8);
        let z12 = ModelGroup::new(vec![12]).unwrap();
        assert_eq!(z12.order(&z12.element(&[4]).unwrap()), 3);
    }

    #[test]
    fn generic_root_r0_is_identity_map() {
        let z12 = ModelGroup::new(vec![12]).unwrap();
        let h = z12.element(&[7]).unwrap();
        assert_eq!(z12.generic_root(&h, 2, 0).unwrap(), h);
    }

    #[test]
    fn generic_root_worked_example_z12() {
        let z12 = ModelGroup::new(vec![12]).unwrap();
        let h = z12.element(&[4]).unwrap();
        let x = z12.generic_root(&h, 2, 2).unwrap();
        assert_eq!(x, z12.element(&[1]).unwrap());
        // full root set by scan
        let roots: Vec<u64> = (0..12).filter(|&c| 4 * c % 12 == 4).collect();
        assert_eq!(roots, vec![1, 4, 7, 10]);
    }

    #[test]
    fn generic_root_rejects_non_powers() {
        let z12 = ModelGroup::new(vec![12]).unwrap();
        for bad in [2u64, 9] {
            let h = z12.element(&[bad]).unwrap();
            assert_eq!(z12.generic_root(&h, 2, 2).unwrap_err(), Error::NotAPower);
        }
    }

    #[test]
    fn generic_root_mixed_group() {
        // component order not divisible by l^r still lifts correctly
        let g = ModelGroup::new(vec![4, 3]).unwrap();
        let h = g.element(&[0, 2]).unwrap();
        let x = g.generic_root(&h, 2, 2).unwrap();
        assert_eq!(g.scalar_mul(4, &x), h);
    }

    #[test]
    fn generic_root_round_trip_z48_squared() {
        let g = ModelGroup::rank2(48).unwrap();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..100 {
            let r = (next() % 3 + 1) as u32;
            let x0 = g.element(&[next() % 48, next() % 48]).unwrap();
            let h = g.scalar_mul(1 << r, &x0);
            let root = g.generic_root(&h, 2, r).unwrap();
            assert_eq!(g.scalar_mul(1 << r, &root), h);
        }
    }

    #[test]
    fn brute_force_finds_and_refuses() {
        let g = ModelGroup::rank2(16).unwrap();
        let k = g.element(&[1, 0]).unwrap();
        let (p, q) = brute_force_grep(2, 4, &k, 1, 0).unwrap().unwrap();
        assert_eq!(p, k);
        // returned pair must satisfy the equation with a unit determinant
        let det = (p.coords()[0] * q.coords()[1]) as i64 - (p.coords()[1] * q.coords()[0]) as i64;
        assert_eq!(det.rem_euclid(2), 1);

        // unsolvable shape: r >= 1 while K has full order
        let k_full = g.element(&[1, 1]).unwrap();
        assert!(brute_force_grep(2, 4, &k_full, 4, 4).unwrap().is_none());
    }

    #[test]
    fn brute_force_guard() {
        let g = ModelGroup::rank2(64).unwrap();
        let k = g.element(&[0, 0]).unwrap();
        assert!(matches!(
            brute_force_grep(2, 6, &k, 1, 1),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn existence_table_2_1() {
        let table = exhaustive_existence_table(2, 1).unwrap();
        let lines: Vec<&str> = table.trim_end().lines().collect();
        assert_eq!(lines.len(), 1 + 16);
        // (0,0,identity) solvable, (0,0,K != identity) not
        assert_eq!(lines[1], "0,0,0,0,0,1,1");
        assert_eq!(lines[2], "0,0,0,1,1,1,0");
        // the u + r = e predicate must match the solvable column exactly
        for line in &lines[1..] {
            let parts: Vec<u32> = line.split(',').map(|v| v.parse().unwrap()).collect();
            let (u, r, solvable) = (parts[4], parts[5], parts[6]);
            assert_eq!(solvable == 1, u + r == 1, "line {line}");
        }
    }

    #[test]
    fn existence_table_guard() {
        assert!(matches!(
            exhaustive_existence_table(2, 5),
            Err(Error::TooLarge { .. })
        ));
    }
}
