//! Points of the upper half-plane, hyperbolic distance and Möbius maps.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this the point-pair invariant is treated as an exact coincidence.
pub const COINCIDENCE_U: f64 = 1e-12;

/// `x + iy` with `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub const I: HPoint = HPoint { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() || !(y > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "({x}, {y}) is not in the upper half-plane"
            )));
        }
        Ok(Self { x, y })
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x == 0.0 {
            write!(f, "{}i", self.y)
        } else {
            write!(f, "{}{:+}i", self.x, self.y)
        }
    }
}

/// Accepts `i`, `2i`, `0.5+1.5i`, `-1+i`, `0.3,1.2`.
impl FromStr for HPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse point {s:?} (try 0.5+1.5i or 0.5,1.5)"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some((a, b)) = t.split_once(',') {
            return HPoint::new(a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
        }
        let body = t.strip_suffix('i').ok_or_else(bad)?;
        // Split at the last sign that is not the leading one or part of an exponent.
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-') && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
            .map(|(k, _)| k)
            .next_back();
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            v => v.parse().map_err(|_| bad())?,
        };
        HPoint::new(re.parse().map_err(|_| bad())?, im)
    }
}

/// `u(z, w) = |z − w|² / (4 Im z Im w)`, so that `cosh d = 1 + 2u`.
pub fn point_pair_invariant(z: HPoint, w: HPoint) -> f64 {
    let dx = z.x - w.x;
    let dy = z.y - w.y;
    (dx * dx + dy * dy) / (4.0 * z.y * w.y)
}

/// Distance corresponding to `u`: `2 asinh √u`.
pub fn distance_from_u(u: f64) -> f64 {
    if u <= COINCIDENCE_U {
        0.0
    } else {
        2.0 * u.sqrt().asinh()
    }
}

/// `u` at distance `d`: `(cosh d − 1)/2 = sinh²(d/2)`.
pub fn u_from_distance(d: f64) -> f64 {
    let s = (0.5 * d).sinh();
    s * s
}

pub fn hyperbolic_distance(z: HPoint, w: HPoint) -> f64 {
    distance_from_u(point_pair_invariant(z, w))
}

/// Integer matrix of determinant one, stored with the first nonzero entry
/// of `(a, b, c, d)` positive so that `±γ` share one representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl MoebiusMap {
    pub const IDENTITY: MoebiusMap = MoebiusMap { a: 1, b: 0, c: 0, d: 1 };
    /// `z ↦ −1/z`.
    pub const S: MoebiusMap = MoebiusMap {
        a: 0,
        b: 1,
        c: -1,
        d: 0,
    };
    /// `z ↦ z + 1`.
    pub const T: MoebiusMap = MoebiusMap { a: 1, b: 1, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::InvalidArgument(format!(
                "determinant of ({a} {b}; {c} {d}) is {det}, not 1"
            )));
        }
        Ok(Self::normalized(a, b, c, d))
    }

    fn normalized(a: i64, b: i64, c: i64, d: i64) -> Self {
        let lead = [a, b, c, d].into_iter().find(|&v| v != 0).unwrap_or(1);
        if lead < 0 {
            Self {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Self { a, b, c, d }
        }
    }

    pub fn determinant(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    /// Matrix product `self · other`; `None` on overflow.
    pub fn compose(&self, o: &MoebiusMap) -> Option<MoebiusMap> {
        let m = |x: i64, y: i64, z: i64, w: i64| x.checked_mul(y)?.checked_add(z.checked_mul(w)?);
        Some(Self::normalized(
            m(self.a, o.a, self.b, o.c)?,
            m(self.a, o.b, self.b, o.d)?,
            m(self.c, o.a, self.d, o.c)?,
            m(self.c, o.b, self.d, o.d)?,
        ))
    }

    pub fn inverse(&self) -> MoebiusMap {
        Self::normalized(self.d, -self.b, -self.c, self.a)
    }

    /// `a² + b² + c² + d²`, which equals `2 cosh d(i, γi)`.
    pub fn frobenius_sq(&self) -> i128 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|&v| v as i128 * v as i128)
            .sum()
    }

    pub fn apply(&self, z: HPoint) -> HPoint {
        RealMoebiusMap::from(*self).apply(z)
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// Real matrix with determinant one (within `1e-12`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealMoebiusMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RealMoebiusMap {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !((det - 1.0).abs() <= 1e-12) {
            return Err(Error::InvalidArgument(format!("determinant {det} is not 1")));
        }
        let lead = [a, b, c, d].into_iter().find(|&v| v != 0.0).unwrap_or(1.0);
        Ok(if lead < 0.0 {
            Self {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Self { a, b, c, d }
        })
    }

    /// `(az + b)/(cz + d)`.
    pub fn apply(&self, z: HPoint) -> HPoint {
        let (p, q) = (self.c * z.x + self.d, self.c * z.y);
        let den = p * p + q * q;
        let (nr, ni) = (self.a * z.x + self.b, self.a * z.y);
        HPoint {
            x: (nr * p + ni * q) / den,
            y: z.y / den,
        }
    }

    pub fn compose(&self, o: &RealMoebiusMap) -> RealMoebiusMap {
        RealMoebiusMap {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl From<MoebiusMap> for RealMoebiusMap {
    fn from(m: MoebiusMap) -> Self {
        Self {
            a: m.a as f64,
            b: m.b as f64,
            c: m.c as f64,
            d: m.d as f64,
        }
    }
}

/// `(x, y)` with `x·p + y·q = gcd(p, q)`.
pub(crate) fn ext_gcd(p: i64, q: i64) -> (i64, i64, i64) {
    let e = p.extended_gcd(&q);
    (e.gcd, e.x, e.y)
}
