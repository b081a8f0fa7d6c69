//! Scalars for the two numeric backends.
//!
//! The exact backend works in the real quadratic field Q(sqrt 2): numbers
//! `a + b*sqrt(2)` with rational `a`, `b`. Every constant appearing in the
//! built-in reference configuration lives in this field, so exact-backend
//! checks carry zero tolerance. The float backend is plain `f64` with an
//! explicit absolute tolerance on every comparison.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default absolute tolerance for float-backend comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Numeric backend tag. A computation never mixes backends silently;
/// combining values from different backends is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("unknown backend `{other}` (expected `exact` or `float`)"),
            }),
        }
    }
}

/// An element `a + b*sqrt(2)` of Q(sqrt 2) with `a`, `b` rational.
///
/// Components are kept in lowest terms with positive denominator, which
/// `BigRational` guarantees on construction. The field is closed under
/// the four arithmetic operations, so exact computations never round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadScalar {
    a: BigRational,
    b: BigRational,
}

fn big_ratio(num: i64, den: i64) -> BigRational {
    assert!(den != 0, "rational with zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Square root of a nonnegative rational, when the root is again rational.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

impl QuadScalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadScalar { a, b }
    }

    pub fn zero() -> Self {
        QuadScalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        QuadScalar::from_integer(1)
    }

    pub fn sqrt2() -> Self {
        QuadScalar::sqrt2_times(1, 1)
    }

    pub fn from_integer(n: i64) -> Self {
        QuadScalar::new(big_ratio(n, 1), BigRational::zero())
    }

    /// The rational `num/den`.
    pub fn rational(num: i64, den: i64) -> Self {
        QuadScalar::new(big_ratio(num, den), BigRational::zero())
    }

    /// The pure multiple `(num/den)*sqrt(2)`.
    pub fn sqrt2_times(num: i64, den: i64) -> Self {
        QuadScalar::new(BigRational::zero(), big_ratio(num, den))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }

    /// Multiplicative inverse: `(a - b*sqrt(2)) / (a^2 - 2 b^2)`.
    ///
    /// The conjugate denominator vanishes only at zero, because sqrt(2)
    /// is irrational.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = &self.a * &self.a - BigRational::from_integer(BigInt::from(2)) * &self.b * &self.b;
        debug_assert!(!d.is_zero());
        Ok(QuadScalar::new(&self.a / &d, -&self.b / &d))
    }

    /// Sign of the real number this element denotes: -1, 0, or +1.
    pub fn signum(&self) -> i8 {
        let sa = ratio_sign(&self.a);
        let sb = ratio_sign(&self.b);
        match (sa, sb) {
            (0, s) | (s, 0) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            // Mixed signs: compare a^2 against 2 b^2. Equality would force
            // sqrt(2) rational, so it cannot occur away from zero.
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let b2 = BigRational::from_integer(BigInt::from(2)) * &self.b * &self.b;
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => -sa,
                    Ordering::Equal => unreachable!("sqrt(2) is irrational"),
                }
            }
        }
    }

    /// In-field square root, when one exists: a `q` with `q*q == self`
    /// and `q >= 0`. Most positive elements have no root inside the
    /// field; callers must cope with `None`.
    pub fn try_sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(QuadScalar::zero());
        }
        if self.signum() < 0 {
            return None;
        }
        let two = BigRational::from_integer(BigInt::from(2));
        if self.b.is_zero() {
            // Either sqrt(a) rational, or a = 2 q^2 making the root q*sqrt(2).
            if let Some(p) = rational_sqrt(&self.a) {
                return Some(QuadScalar::new(p, BigRational::zero()));
            }
            if let Some(q) = rational_sqrt(&(&self.a / &two)) {
                return Some(QuadScalar::new(BigRational::zero(), q));
            }
            return None;
        }
        // (p + q*sqrt 2)^2 = p^2 + 2 q^2 + 2 p q sqrt 2 leads to
        // p^2 = (a +- sqrt(a^2 - 2 b^2)) / 2 with everything rational.
        let disc = &self.a * &self.a - &two * &self.b * &self.b;
        let d = rational_sqrt(&disc)?;
        for p2 in [(&self.a + &d) / &two, (&self.a - &d) / &two] {
            if let Some(p) = rational_sqrt(&p2) {
                if p.is_zero() {
                    continue;
                }
                let q = &self.b / (&two * &p);
                let root = QuadScalar::new(p, q);
                if &(&root * &root) == self {
                    // Both +-root square to self; return the nonnegative one.
                    return Some(if root.signum() < 0 { -root } else { root });
                }
            }
        }
        None
    }

    /// Parse the scalar grammar: `R`, `R*s2`, `R + R*s2`, or `R - R*s2`
    /// with `R` a rational `p` or `p/q`. Whitespace around the infix
    /// operator is accepted; `s2` denotes sqrt(2).
    pub fn parse(input: &str) -> std::result::Result<Self, String> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err("empty scalar".to_string());
        }
        // Split at the first infix + or - (never at index 0, which is a
        // leading sign).
        let mut split = None;
        for (i, c) in compact.char_indices().skip(1) {
            if c == '+' || c == '-' {
                split = Some((i, c));
                break;
            }
        }
        match split {
            None => parse_term(&compact),
            Some((i, op)) => {
                let lhs = parse_term(&compact[..i])?;
                if !lhs.b.is_zero() {
                    return Err(format!("`{input}`: sqrt-2 term must come last"));
                }
                let rhs = parse_term(&compact[i + 1..])?;
                if !rhs.a.is_zero() || rhs.b.is_zero() {
                    return Err(format!("`{input}`: second term must be a multiple of s2"));
                }
                let b = if op == '-' { -rhs.b } else { rhs.b };
                Ok(QuadScalar::new(lhs.a, b))
            }
        }
    }
}

fn ratio_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn parse_ratio(s: &str) -> std::result::Result<BigRational, String> {
    let mk_int = |t: &str| BigInt::from_str(t).map_err(|_| format!("`{t}` is not an integer"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(mk_int(s)?)),
        Some((p, q)) => {
            let num = mk_int(p)?;
            let den = mk_int(q)?;
            if den.is_zero() {
                return Err(format!("`{s}` has a zero denominator"));
            }
            Ok(BigRational::new(num, den))
        }
    }
}

fn parse_term(s: &str) -> std::result::Result<QuadScalar, String> {
    if let Some(r) = s.strip_suffix("*s2") {
        Ok(QuadScalar::new(BigRational::zero(), parse_ratio(r)?))
    } else if s.contains("s2") {
        Err(format!("`{s}`: sqrt-2 factor must be written `R*s2`"))
    } else {
        Ok(QuadScalar::new(parse_ratio(s)?, BigRational::zero()))
    }
}

fn fmt_ratio(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom() == &BigInt::from(1) {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            fmt_ratio(&self.a, f)
        } else if self.a.is_zero() {
            fmt_ratio(&self.b, f)?;
            f.write_str("*s2")
        } else {
            fmt_ratio(&self.a, f)?;
            if self.b.is_positive() {
                f.write_str(" + ")?;
                fmt_ratio(&self.b, f)?;
            } else {
                f.write_str(" - ")?;
                fmt_ratio(&(-&self.b), f)?;
            }
            f.write_str("*s2")
        }
    }
}

impl FromStr for QuadScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QuadScalar::parse(s).map_err(|message| Error::Parse {
            line: 1,
            column: 1,
            message,
        })
    }
}

impl PartialOrd for QuadScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self - other;
        match diff.signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

macro_rules! quad_binop {
    ($trait:ident, $method:ident, |$x:ident, $y:ident| $body:expr) => {
        impl $trait for &QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: &QuadScalar) -> QuadScalar {
                let ($x, $y) = (self, rhs);
                $body
            }
        }
        impl $trait for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: QuadScalar) -> QuadScalar {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&QuadScalar> for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: &QuadScalar) -> QuadScalar {
                $trait::$method(&self, rhs)
            }
        }
    };
}

quad_binop!(Add, add, |x, y| QuadScalar::new(&x.a + &y.a, &x.b + &y.b));
quad_binop!(Sub, sub, |x, y| QuadScalar::new(&x.a - &y.a, &x.b - &y.b));
quad_binop!(Mul, mul, |x, y| {
    let two = BigRational::from_integer(BigInt::from(2));
    QuadScalar::new(&x.a * &y.a + &two * &x.b * &y.b, &x.a * &y.b + &x.b * &y.a)
});

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar::new(-&self.a, -&self.b)
    }
}

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        -&self
    }
}

/// A scalar from one of the two backends. The tag travels with the value,
/// and the arithmetic refuses to combine values whose tags differ.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(QuadScalar),
    Float(f64),
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn zero(backend: Backend) -> Self {
        match backend {
            Backend::Exact => Scalar::Exact(QuadScalar::zero()),
            Backend::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(backend: Backend) -> Self {
        match backend {
            Backend::Exact => Scalar::Exact(QuadScalar::one()),
            Backend::Float => Scalar::Float(1.0),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::BackendMismatch(self.backend().name(), other.backend().name())
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(x), Scalar::Exact(y)) => Ok(Scalar::Exact(x + y)),
            (Scalar::Float(x), Scalar::Float(y)) => Ok(Scalar::Float(x + y)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(x), Scalar::Exact(y)) => Ok(Scalar::Exact(x - y)),
            (Scalar::Float(x), Scalar::Float(y)) => Ok(Scalar::Float(x - y)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(x), Scalar::Exact(y)) => Ok(Scalar::Exact(x * y)),
            (Scalar::Float(x), Scalar::Float(y)) => Ok(Scalar::Float(x * y)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(x) => Scalar::Exact(-x),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(x) => Ok(Scalar::Exact(x.inv()?)),
            Scalar::Float(x) => {
                if *x == 0.0 {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Float(1.0 / x))
                }
            }
        }
    }

    /// Exact equality; errors when the backends differ.
    pub fn try_eq(&self, other: &Scalar) -> Result<bool> {
        match (self, other) {
            (Scalar::Exact(x), Scalar::Exact(y)) => Ok(x == y),
            (Scalar::Float(x), Scalar::Float(y)) => Ok(x == y),
            _ => Err(self.mismatch(other)),
        }
    }

    /// Backend-aware closeness: exact values must match exactly, floats
    /// within the absolute tolerance.
    pub fn close_to(&self, other: &Scalar, tol: f64) -> Result<bool> {
        match (self, other) {
            (Scalar::Exact(x), Scalar::Exact(y)) => Ok(x == y),
            (Scalar::Float(x), Scalar::Float(y)) => Ok((x - y).abs() <= tol),
            _ => Err(self.mismatch(other)),
        }
    }

    /// Cross-backend numeric agreement through f64 projection.
    pub fn agrees_within(&self, other: &Scalar, tol: f64) -> bool {
        (self.to_f64() - other.to_f64()).abs() <= tol
    }

    /// Parse a scalar token for the given backend. Exact tokens use the
    /// scalar grammar; float tokens are decimal with optional exponent,
    /// with exact-form tokens accepted and converted for convenience.
    pub fn parse(token: &str, backend: Backend) -> std::result::Result<Scalar, String> {
        match backend {
            Backend::Exact => QuadScalar::parse(token).map(Scalar::Exact),
            Backend::Float => {
                if let Ok(x) = f64::from_str(token) {
                    if !x.is_finite() {
                        return Err(format!("`{token}` is not a finite number"));
                    }
                    return Ok(Scalar::Float(x));
                }
                QuadScalar::parse(token)
                    .map(|q| Scalar::Float(q.to_f64()))
                    .map_err(|_| format!("`{token}` is not a float or exact scalar"))
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => q.fmt(f),
            Scalar::Float(x) => write!(f, "{x:e}"),
        }
    }
}

impl From<QuadScalar> for Scalar {
    fn from(q: QuadScalar) -> Self {
        Scalar::Exact(q)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

/// Convert an f64 tolerance into an exact rational bound for exact-backend
/// threshold tests. Every finite f64 is a dyadic rational, so this is lossless.
pub(crate) fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite float")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(num: i64, den: i64) -> QuadScalar {
        QuadScalar::rational(num, den)
    }

    fn qs(a_num: i64, a_den: i64, b_num: i64, b_den: i64) -> QuadScalar {
        QuadScalar::new(big_ratio(a_num, a_den), big_ratio(b_num, b_den))
    }

    #[test]
    fn conjugate_product_is_minus_one() {
        let plus = qs(1, 1, 1, 1);
        let minus = qs(1, 1, -1, 1);
        assert_eq!(&plus * &minus, q(-1, 1));
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let s = QuadScalar::sqrt2();
        assert_eq!(&s * &s, q(2, 1));
    }

    #[test]
    fn inverse_of_half_sqrt2_is_sqrt2() {
        let half_sqrt2 = QuadScalar::sqrt2_times(1, 2);
        assert_eq!(half_sqrt2.inv().unwrap(), QuadScalar::sqrt2());
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert!(matches!(
            QuadScalar::zero().inv(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn addition_is_componentwise() {
        assert_eq!(&qs(1, 2, 1, 4) + &qs(1, 3, -1, 4), qs(5, 6, 0, 1));
    }

    #[test]
    fn signum_handles_mixed_signs() {
        // 3/2 - sqrt(2) > 0 because 9/4 > 2.
        assert_eq!(qs(3, 2, -1, 1).signum(), 1);
        // 4/3 - sqrt(2) < 0 because 16/9 < 2.
        assert_eq!(qs(4, 3, -1, 1).signum(), -1);
        assert_eq!(qs(-3, 2, 1, 1).signum(), -1);
        assert_eq!(qs(-4, 3, 1, 1).signum(), 1);
        assert_eq!(QuadScalar::zero().signum(), 0);
    }

    #[test]
    fn ordering_matches_real_values() {
        assert!(QuadScalar::sqrt2() > q(7, 5));
        assert!(QuadScalar::sqrt2() < q(3, 2));
    }

    #[test]
    fn sqrt_of_quarter_is_half() {
        assert_eq!(q(1, 4).try_sqrt().unwrap(), q(1, 2));
    }

    #[test]
    fn sqrt_of_half_is_half_sqrt2() {
        assert_eq!(q(1, 2).try_sqrt().unwrap(), QuadScalar::sqrt2_times(1, 2));
    }

    #[test]
    fn sqrt_of_three_plus_two_sqrt2() {
        // 3 + 2 sqrt 2 = (1 + sqrt 2)^2.
        assert_eq!(qs(3, 1, 2, 1).try_sqrt().unwrap(), qs(1, 1, 1, 1));
    }

    #[test]
    fn sqrt_outside_field_is_none() {
        assert!(q(5, 8).try_sqrt().is_none());
        assert!(q(-1, 1).try_sqrt().is_none());
        assert!(QuadScalar::sqrt2().try_sqrt().is_none());
    }

    #[test]
    fn display_matches_grammar() {
        assert_eq!(q(0, 1).to_string(), "0");
        assert_eq!(q(1, 2).to_string(), "1/2");
        assert_eq!(q(-3, 1).to_string(), "-3");
        assert_eq!(QuadScalar::sqrt2_times(-1, 4).to_string(), "-1/4*s2");
        assert_eq!(qs(1, 2, 1, 4).to_string(), "1/2 + 1/4*s2");
        assert_eq!(qs(1, 2, -1, 4).to_string(), "1/2 - 1/4*s2");
    }

    #[test]
    fn parse_round_trips_and_accepts_spacing() {
        for text in ["0", "1/2", "-3", "-1/4*s2", "1/2 + 1/4*s2", "1/2 - 1/4*s2"] {
            let value: QuadScalar = text.parse().unwrap();
            assert_eq!(value.to_string(), text);
        }
        assert_eq!(QuadScalar::parse("1/2+1/4*s2").unwrap(), qs(1, 2, 1, 4));
        assert_eq!(QuadScalar::parse(" -1/4*s2 ").unwrap(), qs(0, 1, -1, 4));
    }

    #[test]
    fn parse_rejects_malformed_input() {
        for bad in ["", "s2", "1/0", "1/2 + 1/4", "one", "1/2 + s2", "2*s2*s2"] {
            assert!(QuadScalar::parse(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn float_scalar_display_round_trips() {
        for x in [0.5f64, -0.25, 1.0, 0.0, 1.0 / 3.0, 1e-300] {
            let shown = Scalar::Float(x).to_string();
            let back = Scalar::parse(&shown, Backend::Float).unwrap();
            assert_eq!(back.to_f64(), x, "{shown}");
        }
    }

    #[test]
    fn float_parse_accepts_exact_tokens() {
        let x = Scalar::parse("1/2", Backend::Float).unwrap();
        assert_eq!(x.to_f64(), 0.5);
        let y = Scalar::parse("1*s2", Backend::Float).unwrap();
        assert!((y.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn mixing_backends_is_an_error() {
        let x = Scalar::Exact(QuadScalar::one());
        let y = Scalar::Float(1.0);
        assert!(matches!(x.add(&y), Err(Error::BackendMismatch(_, _))));
        assert!(matches!(x.try_eq(&y), Err(Error::BackendMismatch(_, _))));
    }

    #[test]
    fn to_f64_matches_components() {
        let v = qs(1, 2, -1, 4);
        assert!((v.to_f64() - (0.5 - 0.25 * std::f64::consts::SQRT_2)).abs() < 1e-15);
    }

    fn arb_quad() -> impl Strategy<Value = QuadScalar> {
        (-9i64..=9, 1i64..=9, -9i64..=9, 1i64..=9).prop_map(|(an, ad, bn, bd)| qs(an, ad, bn, bd))
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_quad(), y in arb_quad(), z in arb_quad()) {
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }

        #[test]
        fn inverse_is_two_sided(x in arb_quad()) {
            prop_assume!(!x.is_zero());
            let inv = x.inv().unwrap();
            prop_assert_eq!(&x * &inv, QuadScalar::one());
            prop_assert_eq!(&inv * &x, QuadScalar::one());
        }

        #[test]
        fn square_then_sqrt_recovers_magnitude(x in arb_quad()) {
            let sq = &x * &x;
            let root = sq.try_sqrt().expect("squares have in-field roots");
            let expected = if x.signum() < 0 { -&x } else { x };
            prop_assert_eq!(root, expected);
        }

        #[test]
        fn display_parse_round_trip(x in arb_quad()) {
            let text = x.to_string();
            prop_assert_eq!(QuadScalar::parse(&text).unwrap(), x);
        }

        #[test]
        fn signum_agrees_with_float(x in arb_quad()) {
            let f = x.to_f64();
            if f.abs() > 1e-9 {
                prop_assert_eq!(x.signum() as f64, f.signum());
            }
        }
    }
}
