//! Planar realizations: exact coordinates per vertex, either rational or in
//! the prime field F_p.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Fp, MODULUS};
use crate::linalg::Scalar;

/// Rational samples are integers in `1..=RATIONAL_COORD_MAX`.
pub const RATIONAL_COORD_MAX: i64 = 1 << 31;

/// Rational samples are redrawn until in general position, at most this often.
pub const GENERAL_POSITION_RETRIES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarDomain {
    Rational,
    PrimeField,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }
}

/// One point per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization<S> {
    points: Vec<Point<S>>,
}

impl<S: Scalar> Realization<S> {
    pub fn new(points: Vec<Point<S>>) -> Self {
        Realization { points }
    }

    pub fn from_integers(coords: &[(i64, i64)]) -> Self {
        Realization {
            points: coords
                .iter()
                .map(|&(x, y)| Point::new(S::from_i64(x), S::from_i64(y)))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point<S>] {
        &self.points
    }

    pub fn point(&self, v: usize) -> &Point<S> {
        &self.points[v]
    }

    pub fn set_point(&mut self, v: usize, p: Point<S>) {
        self.points[v] = p;
    }

    pub fn is_injective(&self) -> bool {
        self.points
            .iter()
            .enumerate()
            .all(|(i, p)| self.points[i + 1..].iter().all(|q| q != p))
    }
}

impl Realization<BigRational> {
    /// True iff no three points are collinear.
    pub fn is_general_position(&self) -> bool {
        let p = &self.points;
        for a in 0..p.len() {
            for b in a + 1..p.len() {
                let (bx, by) = (&p[b].x - &p[a].x, &p[b].y - &p[a].y);
                for c in &p[b + 1..] {
                    let (cx, cy) = (&c.x - &p[a].x, &c.y - &p[a].y);
                    if Zero::is_zero(&(&bx * &cy - &by * &cx)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Approximate coordinates, for drawing only.
    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        let approx = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        self.points
            .iter()
            .map(|p| (approx(&p.x), approx(&p.y)))
            .collect()
    }
}

/// Integer points in `1..=2^31` with no three collinear, deterministic in
/// `seed`.
pub fn sample_rational(vertex_count: usize, seed: u64) -> Result<Realization<BigRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERAL_POSITION_RETRIES {
        let coords: Vec<(i64, i64)> = (0..vertex_count)
            .map(|_| {
                (
                    rng.gen_range(1..=RATIONAL_COORD_MAX),
                    rng.gen_range(1..=RATIONAL_COORD_MAX),
                )
            })
            .collect();
        if integer_general_position(&coords) {
            return Ok(Realization::from_integers(&coords));
        }
    }
    Err(Error::RetryBudgetExhausted {
        attempts: GENERAL_POSITION_RETRIES,
    })
}

fn integer_general_position(p: &[(i64, i64)]) -> bool {
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            let (bx, by) = ((p[b].0 - p[a].0) as i128, (p[b].1 - p[a].1) as i128);
            for c in &p[b + 1..] {
                let (cx, cy) = ((c.0 - p[a].0) as i128, (c.1 - p[a].1) as i128);
                if bx * cy == by * cx {
                    return false;
                }
            }
        }
    }
    true
}

/// Uniform points of F_p², deterministic in `seed`.
pub fn sample_field(vertex_count: usize, seed: u64) -> Realization<Fp> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Realization::new(
        (0..vertex_count)
            .map(|_| Point::new(Fp::random(&mut rng), Fp::random(&mut rng)))
            .collect(),
    )
}

/// Realization in either scalar domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyRealization {
    Rational(Realization<BigRational>),
    Field(Realization<Fp>),
}

impl AnyRealization {
    pub fn domain(&self) -> ScalarDomain {
        match self {
            AnyRealization::Rational(_) => ScalarDomain::Rational,
            AnyRealization::Field(_) => ScalarDomain::PrimeField,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyRealization::Rational(r) => r.len(),
            AnyRealization::Field(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Only meaningful over the rationals.
    pub fn is_general_position(&self) -> Result<bool> {
        match self {
            AnyRealization::Rational(r) => Ok(r.is_general_position()),
            AnyRealization::Field(_) => Err(Error::UnsupportedDomain(Fp::DOMAIN)),
        }
    }

    /// `{"domain":"rational","coords":[[[xn,xd],[yn,yd]],…]}` or
    /// `{"domain":"prime-field","prime":p,"coords":[[x,y],…]}`.
    pub fn to_json(&self) -> Value {
        match self {
            AnyRealization::Rational(r) => {
                let coords: Vec<Value> = r
                    .points()
                    .iter()
                    .map(|p| json!([ratio_json(&p.x), ratio_json(&p.y)]))
                    .collect();
                json!({ "domain": "rational", "coords": coords })
            }
            AnyRealization::Field(r) => {
                let coords: Vec<Value> = r
                    .points()
                    .iter()
                    .map(|p| json!([p.x.value(), p.y.value()]))
                    .collect();
                json!({ "domain": "prime-field", "prime": MODULUS, "coords": coords })
            }
        }
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Realization(m.to_string());
        let coords = value
            .get("coords")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `coords` array"))?;
        let pair = |v: &Value| -> Result<[Value; 2]> {
            match v.as_array().map(Vec::as_slice) {
                Some([a, b]) => Ok([a.clone(), b.clone()]),
                _ => Err(bad("expected a two-element array")),
            }
        };
        match value.get("domain").and_then(Value::as_str) {
            Some("rational") => {
                let points = coords
                    .iter()
                    .map(|c| {
                        let [x, y] = pair(c)?;
                        Ok(Point::new(ratio_from_json(&x)?, ratio_from_json(&y)?))
                    })
                    .collect::<Result<_>>()?;
                Ok(AnyRealization::Rational(Realization::new(points)))
            }
            Some("prime-field") => {
                let prime = value.get("prime").and_then(Value::as_u64);
                if prime != Some(MODULUS) {
                    return Err(bad(&format!("only the prime {MODULUS} is supported")));
                }
                let elem = |v: &Value| {
                    v.as_u64()
                        .and_then(Fp::from_canonical)
                        .ok_or_else(|| bad("field element out of range"))
                };
                let points = coords
                    .iter()
                    .map(|c| {
                        let [x, y] = pair(c)?;
                        Ok(Point::new(elem(&x)?, elem(&y)?))
                    })
                    .collect::<Result<_>>()?;
                Ok(AnyRealization::Field(Realization::new(points)))
            }
            _ => Err(bad("`domain` must be `rational` or `prime-field`")),
        }
    }
}

/// Samples a generic realization of `vertex_count` points in the requested
/// domain.
pub fn sample_generic_realization(
    vertex_count: usize,
    seed: u64,
    domain: ScalarDomain,
) -> Result<AnyRealization> {
    Ok(match domain {
        ScalarDomain::Rational => AnyRealization::Rational(sample_rational(vertex_count, seed)?),
        ScalarDomain::PrimeField => AnyRealization::Field(sample_field(vertex_count, seed)),
    })
}

fn int_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(small) => json!(small),
        None => json!(v.to_string()),
    }
}

fn ratio_json(q: &BigRational) -> Value {
    json!([int_json(q.numer()), int_json(q.denom())])
}

fn int_from_json(v: &Value) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(i.into());
    }
    v.as_str()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Realization(format!("not an integer: {v}")))
}

fn ratio_from_json(v: &Value) -> Result<BigRational> {
    match v.as_array().map(Vec::as_slice) {
        Some([n, d]) => {
            let (n, d) = (int_from_json(n)?, int_from_json(d)?);
            if d.is_zero() {
                return Err(Error::Realization("zero denominator".into()));
            }
            Ok(BigRational::new(n, d))
        }
        _ => Err(Error::Realization(format!(
            "expected [numerator, denominator], found {v}"
        ))),
    }
}
