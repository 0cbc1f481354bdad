//! JSON wire formats. Coordinates travel as decimal strings with no
//! leading zeros; moduli are carried by the enclosing context, never per
//! element, so conversion back into domain types always takes the context
//! as a parameter and validates against it.

use num_bigint::BigUint;
use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::curve::{self, CurveParams, Point};
use crate::error::Error;
use crate::field::{Fp2Element, PrimeField};
use crate::solver::{GrepInstance, GrepSolution, SimulInstance};
use crate::torsion::{TorsionBasis, TorsionContext};

/// Strict canonical decimal: digits only, no leading zeros except "0".
pub fn parse_decimal(s: &str) -> Result<BigUint, Error> {
    let valid =
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if !valid {
        return Err(Error::BadParams("malformed decimal string"));
    }
    s.parse()
        .map_err(|_| Error::BadParams("malformed decimal string"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fp2Json {
    pub c0: String,
    pub c1: String,
}

impl Fp2Json {
    pub fn from_element(el: &Fp2Element) -> Self {
        Fp2Json {
            c0: el.c0().value().to_string(),
            c1: el.c1().value().to_string(),
        }
    }

    pub fn to_element(&self, field: &PrimeField) -> Result<Fp2Element, Error> {
        let c0 = parse_decimal(&self.c0)?;
        let c1 = parse_decimal(&self.c1)?;
        if &c0 >= field.modulus() || &c1 >= field.modulus() {
            return Err(Error::BadParams("coordinate not reduced mod p"));
        }
        Ok(field.fp2(c0, c1))
    }
}

/// A point as `{"x": ..., "y": ...}` or the string `"identity"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointJson {
    Identity,
    Affine { x: Fp2Json, y: Fp2Json },
}

impl PointJson {
    pub fn from_point(pt: &Point) -> Self {
        match pt.coords() {
            None => PointJson::Identity,
            Some((x, y)) => PointJson::Affine {
                x: Fp2Json::from_element(x),
                y: Fp2Json::from_element(y),
            },
        }
    }

    /// Validates the curve equation on conversion.
    pub fn to_point(&self, curve: &CurveParams) -> Result<Point, Error> {
        match self {
            PointJson::Identity => Ok(Point::Identity),
            PointJson::Affine { x, y } => {
                let pt = Point::affine(x.to_element(curve.field())?, y.to_element(curve.field())?);
                if !curve::is_on_curve(&pt, curve) {
                    return Err(Error::OffCurve);
                }
                Ok(pt)
            }
        }
    }
}

impl Serialize for PointJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            PointJson::Identity => serializer.serialize_str("identity"),
            PointJson::Affine { x, y } => {
                #[derive(Serialize)]
                struct Affine<'a> {
                    x: &'a Fp2Json,
                    y: &'a Fp2Json,
                }
                Affine { x, y }.serialize(serializer)
            }
        }
    }
}

impl<'de> Deserialize<'de> for PointJson {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PointVisitor;

        impl<'de> Visitor<'de> for PointVisitor {
            type Value = PointJson;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("\"identity\" or an object with x and y")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<PointJson, E> {
                if v == "identity" {
                    Ok(PointJson::Identity)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<PointJson, A::Error> {
                let mut x: Option<Fp2Json> = None;
                let mut y: Option<Fp2Json> = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "x" => x = Some(map.next_value()?),
                        "y" => y = Some(map.next_value()?),
                        other => return Err(de::Error::unknown_field(other, &["x", "y"])),
                    }
                }
                Ok(PointJson::Affine {
                    x: x.ok_or_else(|| de::Error::missing_field("x"))?,
                    y: y.ok_or_else(|| de::Error::missing_field("y"))?,
                })
            }
        }

        deserializer.deserialize_any(PointVisitor)
    }
}

/// Context schema: `{"p": str, "l": int, "e": int, "f": str, "a": ..., "b": ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextJson {
    pub p: String,
    pub l: u64,
    pub e: u32,
    pub f: String,
    pub a: Fp2Json,
    pub b: Fp2Json,
}

impl ContextJson {
    pub fn from_context(ctx: &TorsionContext) -> Self {
        ContextJson {
            p: ctx.curve().field().modulus().to_string(),
            l: ctx.l(),
            e: ctx.e(),
            f: ctx.f().to_string(),
            a: Fp2Json::from_element(ctx.curve().a()),
            b: Fp2Json::from_element(ctx.curve().b()),
        }
    }

    pub fn to_context(&self) -> Result<TorsionContext, Error> {
        let p = parse_decimal(&self.p)?;
        let field = PrimeField::new(p)?;
        let a = self.a.to_element(&field)?;
        let b = self.b.to_element(&field)?;
        let order_root = field.modulus() + 1u32;
        let curve = CurveParams::new(a, b, field, order_root)?;
        TorsionContext::new(curve, self.l, self.e, parse_decimal(&self.f)?)
    }
}

/// Instance schema: `{"K": <point>, "m": str, "n": str}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    #[serde(rename = "K")]
    pub k: PointJson,
    pub m: String,
    pub n: String,
}

impl InstanceJson {
    pub fn from_instance(inst: &GrepInstance<Point>) -> Self {
        InstanceJson {
            k: PointJson::from_point(&inst.k),
            m: inst.m.to_string(),
            n: inst.n.to_string(),
        }
    }

    pub fn to_instance(&self, ctx: &TorsionContext) -> Result<GrepInstance<Point>, Error> {
        let k = self.k.to_point(ctx.curve())?;
        let m = parse_decimal(&self.m)? % ctx.lpow_e();
        let n = parse_decimal(&self.n)? % ctx.lpow_e();
        Ok(GrepInstance { k, m, n })
    }
}

/// Simultaneous-instance schema with two equations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulInstanceJson {
    #[serde(rename = "K1")]
    pub k1: PointJson,
    #[serde(rename = "K2")]
    pub k2: PointJson,
    pub m1: String,
    pub n1: String,
    pub m2: String,
    pub n2: String,
}

impl SimulInstanceJson {
    pub fn from_instance(inst: &SimulInstance<Point>) -> Self {
        SimulInstanceJson {
            k1: PointJson::from_point(&inst.k1),
            k2: PointJson::from_point(&inst.k2),
            m1: inst.m1.to_string(),
            n1: inst.n1.to_string(),
            m2: inst.m2.to_string(),
            n2: inst.n2.to_string(),
        }
    }

    pub fn to_instance(&self, ctx: &TorsionContext) -> Result<SimulInstance<Point>, Error> {
        let le = ctx.lpow_e();
        Ok(SimulInstance {
            k1: self.k1.to_point(ctx.curve())?,
            k2: self.k2.to_point(ctx.curve())?,
            m1: parse_decimal(&self.m1)? % le,
            n1: parse_decimal(&self.n1)? % le,
            m2: parse_decimal(&self.m2)? % le,
            n2: parse_decimal(&self.n2)? % le,
        })
    }
}

/// Solution pair as two points; wrapped by the CLI status envelope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    #[serde(rename = "P")]
    pub p: PointJson,
    #[serde(rename = "Q")]
    pub q: PointJson,
}

impl SolutionJson {
    pub fn from_solution(sol: &GrepSolution<Point>) -> Self {
        SolutionJson {
            p: PointJson::from_point(&sol.p),
            q: PointJson::from_point(&sol.q),
        }
    }

    pub fn to_solution(&self, ctx: &TorsionContext) -> Result<GrepSolution<Point>, Error> {
        Ok(GrepSolution {
            p: self.p.to_point(ctx.curve())?,
            q: self.q.to_point(ctx.curve())?,
        })
    }
}

/// Basis schema embedding the generator pair and its cached pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisJson {
    #[serde(rename = "P")]
    pub p: PointJson,
    #[serde(rename = "Q")]
    pub q: PointJson,
    pub pairing: Fp2Json,
}

impl BasisJson {
    pub fn from_basis(basis: &TorsionBasis) -> Self {
        BasisJson {
            p: PointJson::from_point(basis.p_gen()),
            q: PointJson::from_point(basis.q_gen()),
            pairing: Fp2Json::from_element(basis.pairing()),
        }
    }

    /// Revalidates the basis invariants: both points of order l^e and a
    /// pairing of exact order l^e that annihilates at l^e.
    pub fn to_basis(&self, ctx: &TorsionContext) -> Result<TorsionBasis, Error> {
        let p = self.p.to_point(ctx.curve())?;
        let q = self.q.to_point(ctx.curve())?;
        for pt in [&p, &q] {
            let u = curve::point_lpower_order(pt, ctx.l(), ctx.e(), ctx.curve())?;
            if u != ctx.e() {
                return Err(Error::OrderError {
                    expected: ctx.e(),
                    found: u,
                });
            }
        }
        let pairing = self.pairing.to_element(ctx.curve().field())?;
        let le_minus = BigUint::from(ctx.l()).pow(ctx.e() - 1);
        if pairing.pow(&le_minus).is_one() || !pairing.pow(ctx.lpow_e()).is_one() {
            return Err(Error::BadParams("pairing must have exact order l^e"));
        }
        Ok(TorsionBasis::new(p, q, pairing))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{gen_params, ParamRequest};
    use crate::torsion::find_basis;
    use num_traits::Zero;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn ctx47() -> TorsionContext {
        gen_params(&ParamRequest::new(2, 4)).unwrap()
    }

    #[test]
    fn decimal_strictness() {
        assert!(parse_decimal("0").is_ok());
        assert!(parse_decimal("123").is_ok());
        assert!(parse_decimal("").is_err());
        assert!(parse_decimal("007").is_err());
        assert!(parse_decimal("+3").is_err());
        assert!(parse_decimal("1 2").is_err());
    }

    #[test]
    fn context_round_trip() {
        let ctx = ctx47();
        let json = ContextJson::from_context(&ctx);
        let text = serde_json::to_string(&json).unwrap();
        let back: ContextJson = serde_json::from_str(&text).unwrap();
        assert_eq!(json, back);
        let restored = back.to_context().unwrap();
        assert_eq!(restored.l(), 2);
        assert_eq!(restored.e(), 4);
        assert_eq!(restored.f(), &BigUint::from(3u32));
    }

    #[test]
    fn point_round_trip_and_identity_spelling() {
        let ctx = ctx47();
        let mut rng = ChaCha12Rng::seed_from_u64(80);
        let pt = curve::random_point(ctx.curve(), &mut rng);
        let json = PointJson::from_point(&pt);
        let text = serde_json::to_string(&json).unwrap();
        let back: PointJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_point(ctx.curve()).unwrap(), pt);

        let id: PointJson = serde_json::from_str("\"identity\"").unwrap();
        assert_eq!(id.to_point(ctx.curve()).unwrap(), Point::Identity);
        assert_eq!(serde_json::to_string(&id).unwrap(), "\"identity\"");
    }

    #[test]
    fn off_curve_points_are_rejected() {
        let ctx = ctx47();
        let bad = PointJson::Affine {
            x: Fp2Json {
                c0: "1".into(),
                c1: "0".into(),
            },
            y: Fp2Json {
                c0: "1".into(),
                c1: "0".into(),
            },
        };
        assert_eq!(bad.to_point(ctx.curve()).unwrap_err(), Error::OffCurve);
    }

    #[test]
    fn unreduced_coordinates_are_rejected() {
        let ctx = ctx47();
        let bad = Fp2Json {
            c0: "47".into(),
            c1: "0".into(),
        };
        assert!(bad.to_element(ctx.curve().field()).is_err());
    }

    #[test]
    fn instance_round_trip_reduces_scalars() {
        let ctx = ctx47();
        let json = InstanceJson {
            k: PointJson::Identity,
            m: "21".into(),
            n: "16".into(),
        };
        let inst = json.to_instance(&ctx).unwrap();
        assert_eq!(inst.m, BigUint::from(5u32));
        assert!(inst.n.is_zero());
    }

    #[test]
    fn solution_and_simul_round_trips() {
        let ctx = ctx47();
        let mut rng = ChaCha12Rng::seed_from_u64(82);
        let basis = find_basis(&ctx, &mut rng).unwrap();
        let sol = crate::solver::GrepSolution {
            p: basis.p_gen().clone(),
            q: basis.q_gen().clone(),
        };
        let text = serde_json::to_string(&SolutionJson::from_solution(&sol)).unwrap();
        let back: SolutionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_solution(&ctx).unwrap(), sol);

        let simul = SimulInstanceJson {
            k1: PointJson::from_point(basis.p_gen()),
            k2: PointJson::Identity,
            m1: "1".into(),
            n1: "2".into(),
            m2: "3".into(),
            n2: "4".into(),
        };
        let text = serde_json::to_string(&simul).unwrap();
        let back: SimulInstanceJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, simul);
        assert!(back.to_instance(&ctx).is_ok());
    }

    #[test]
    fn basis_round_trip_revalidates() {
        let ctx = ctx47();
        let mut rng = ChaCha12Rng::seed_from_u64(81);
        let basis = find_basis(&ctx, &mut rng).unwrap();
        let json = BasisJson::from_basis(&basis);
        let text = serde_json::to_string(&json).unwrap();
        let back: BasisJson = serde_json::from_str(&text).unwrap();
        let restored = back.to_basis(&ctx).unwrap();
        assert_eq!(restored.p_gen(), basis.p_gen());
        assert_eq!(restored.pairing(), basis.pairing());

        // tampering with the pairing breaks revalidation
        let mut bad = json.clone();
        bad.pairing = Fp2Json {
            c0: "1".into(),
            c1: "0".into(),
        };
        assert!(bad.to_basis(&ctx).is_err());
    }
}
