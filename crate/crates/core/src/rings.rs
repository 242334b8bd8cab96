//! Exact scalar arithmetic over the three coefficient rings: the rationals
//! `Q`, prime fields `F_p`, and the localization `Z_(p)` of the integers at a
//! prime `p`.
//!
//! Elements of every ring are carried by [`Scalar`], a normalized rational.
//! The ring they belong to is never stored per element: a [`Ring`] descriptor
//! is shared by whoever holds the elements (typically a matrix) and all
//! arithmetic goes through it. `F_p` elements are integers in `[0, p)`;
//! `Z_(p)` elements are rationals whose reduced denominator is prime to `p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingKind {
    Q,
    Fp,
    Zp,
}

/// Ring descriptor: the kind of coefficient ring plus its prime, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    kind: RingKind,
    p: u64,
}

/// p-adic valuation; zero has infinite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(s) => Some(s),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(s) => write!(f, "{s}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// An exact ring element. Only meaningful together with a [`Ring`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Deterministic trial division; moduli here are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn multiplicity(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.abs();
    let mut s = 0;
    while !n.is_zero() {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            break;
        }
        n = q;
        s += 1;
    }
    s
}

impl Ring {
    pub fn rationals() -> Ring {
        Ring {
            kind: RingKind::Q,
            p: 0,
        }
    }

    pub fn prime_field(p: u64) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        Ok(Ring { kind: RingKind::Fp, p })
    }

    pub fn local(p: u64) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        Ok(Ring { kind: RingKind::Zp, p })
    }

    pub fn new(kind: RingKind, p: Option<u64>) -> Result<Ring> {
        match (kind, p) {
            (RingKind::Q, None) => Ok(Ring::rationals()),
            (RingKind::Q, Some(_)) => Err(Error::PreconditionViolated("the rationals take no prime".into())),
            (RingKind::Fp, Some(p)) => Ring::prime_field(p),
            (RingKind::Zp, Some(p)) => Ring::local(p),
            (_, None) => Err(Error::PreconditionViolated("a prime is required for Fp and Zp".into())),
        }
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn prime(&self) -> Option<u64> {
        match self.kind {
            RingKind::Q => None,
            _ => Some(self.p),
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self.kind, RingKind::Zp)
    }

    fn big_p(&self) -> BigInt {
        BigInt::from(self.p)
    }

    fn reduce_fp(&self, n: BigInt) -> Scalar {
        let p = self.big_p();
        Scalar(BigRational::from_integer(n.mod_floor(&p)))
    }

    pub fn zero(&self) -> Scalar {
        Scalar(BigRational::zero())
    }

    pub fn one(&self) -> Scalar {
        Scalar(BigRational::one())
    }

    /// The image of an integer in this ring.
    pub fn int(&self, n: i64) -> Scalar {
        match self.kind {
            RingKind::Fp => self.reduce_fp(BigInt::from(n)),
            _ => Scalar(BigRational::from_integer(BigInt::from(n))),
        }
    }

    /// Maps a rational into the ring; fails when it is not a ring element
    /// (denominator divisible by `p` for `Z_(p)` and `F_p`).
    pub fn from_rational(&self, q: BigRational) -> Result<Scalar> {
        match self.kind {
            RingKind::Q => Ok(Scalar(q)),
            RingKind::Zp => {
                if multiplicity(q.denom(), &self.big_p()) > 0 {
                    Err(Error::OutOfRing {
                        value: Scalar(q).to_string(),
                        ring: self.to_string(),
                    })
                } else {
                    Ok(Scalar(q))
                }
            }
            RingKind::Fp => {
                let p = self.big_p();
                let den = q.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::OutOfRing {
                        value: Scalar(q).to_string(),
                        ring: self.to_string(),
                    });
                }
                let inv = mod_inverse(&den, &p);
                Ok(self.reduce_fp(q.numer() * inv))
            }
        }
    }

    /// Whether `x` satisfies this ring's representation invariant.
    pub fn contains(&self, x: &Scalar) -> bool {
        match self.kind {
            RingKind::Q => true,
            RingKind::Zp => multiplicity(x.0.denom(), &self.big_p()) == 0,
            RingKind::Fp => x.0.is_integer() && !x.0.is_negative() && x.0.numer() < &self.big_p(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.kind {
            RingKind::Fp => self.reduce_fp(a.0.numer() + b.0.numer()),
            _ => Scalar(&a.0 + &b.0),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.kind {
            RingKind::Fp => self.reduce_fp(a.0.numer() - b.0.numer()),
            _ => Scalar(&a.0 - &b.0),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self.kind {
            RingKind::Fp => self.reduce_fp(-a.0.numer()),
            _ => Scalar(-&a.0),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.kind {
            RingKind::Fp => self.reduce_fp(a.0.numer() * b.0.numer()),
            _ => Scalar(&a.0 * &b.0),
        }
    }

    /// `a / b`; `b` must be a unit of the ring.
    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        let inv = self.inv(b)?;
        Ok(self.mul(a, &inv))
    }

    /// The ring element `q` with `a = q * b`, if one exists and `b != 0`.
    /// In `Z_(p)` this requires `v(a) >= v(b)`.
    pub fn exact_div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        if b.is_zero() {
            return Err(Error::DivisionByNonUnit);
        }
        match self.kind {
            RingKind::Zp => {
                if self.valuation(a) < self.valuation(b) {
                    return Err(Error::DivisionByNonUnit);
                }
                Ok(Scalar(&a.0 / &b.0))
            }
            _ => self.div(a, b),
        }
    }

    pub fn inv(&self, b: &Scalar) -> Result<Scalar> {
        if !self.is_unit(b) {
            return Err(Error::DivisionByNonUnit);
        }
        Ok(match self.kind {
            RingKind::Fp => {
                let p = self.big_p();
                self.reduce_fp(mod_inverse(b.0.numer(), &p))
            }
            _ => Scalar(b.0.recip()),
        })
    }

    pub fn is_unit(&self, x: &Scalar) -> bool {
        match self.kind {
            RingKind::Q | RingKind::Fp => !x.is_zero(),
            RingKind::Zp => self.valuation(x) == Valuation::Finite(0),
        }
    }

    /// p-adic valuation. For `Q` there is no prime: every non-zero element
    /// has valuation 0. For `F_p` likewise.
    pub fn valuation(&self, x: &Scalar) -> Valuation {
        if x.is_zero() {
            return Valuation::Infinite;
        }
        match self.kind {
            RingKind::Zp => {
                let p = self.big_p();
                let up = multiplicity(x.0.numer(), &p);
                // invariant: the denominator is prime to p
                Valuation::Finite(up)
            }
            _ => Valuation::Finite(0),
        }
    }

    /// `p^s` as a ring element.
    pub fn prime_power(&self, s: u32) -> Scalar {
        match self.kind {
            RingKind::Zp => Scalar(BigRational::from_integer(num_traits::pow(self.big_p(), s as usize))),
            _ => self.one(),
        }
    }

    /// Image in the residue field `F_p` (for `Z_(p)` and `F_p`).
    pub fn residue(&self, x: &Scalar) -> Option<u64> {
        match self.kind {
            RingKind::Q => None,
            RingKind::Fp => x.0.numer().to_u64(),
            RingKind::Zp => {
                let p = self.big_p();
                let inv = mod_inverse(&x.0.denom().mod_floor(&p), &p);
                (x.0.numer() * inv).mod_floor(&p).to_u64()
            }
        }
    }

    /// Parses the scalar text format: optional sign, decimal integer,
    /// optional `/` and a positive decimal integer. `F_p` takes bare
    /// integers only, reduced modulo `p`.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let bad = || Error::MalformedScalar(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (t, None),
        };
        let digits = num.strip_prefix(['+', '-']).unwrap_or(num);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let numer: BigInt = num.parse().map_err(|_| bad())?;
        let denom = match den {
            None => BigInt::one(),
            Some(d) => {
                if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                d
            }
        };
        if self.kind == RingKind::Fp && den.is_some() {
            return Err(bad());
        }
        self.from_rational(BigRational::new(numer, denom))
    }

    pub fn render(&self, x: &Scalar) -> String {
        x.to_string()
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Q => write!(f, "Q"),
            RingKind::Fp => write!(f, "F_{}", self.p),
            RingKind::Zp => write!(f, "Z_({})", self.p),
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.mod_floor(p).extended_gcd(p);
    e.x.mod_floor(p)
}
