//! Scalar abstraction shared by the matrix and polynomial kernels.
//!
//! Everything in [`crate::linalg`] and [`crate::poly`] is generic over [`Scalar`].
//! The certificates themselves are only meaningful over [`crate::Rational`], but
//! the same kernels run over `f64` for quick numeric experiments.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

/// Field element usable by the exact kernels.
///
/// Division is assumed exact (true for rationals, approximately true for floats).
pub trait Scalar:
    Clone + PartialEq + PartialOrd + Debug + Display + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// Rescale a coefficient sequence by a nonzero factor so that its entries
    /// stay small. Used to tame remainder growth in Euclidean sequences; the
    /// default does nothing.
    fn normalize_content(_coeffs: &mut [Self]) {}

    /// A nonzero factor that turns every entry of `values` into an integer,
    /// when the type has such a notion. Defaults to one.
    fn clearing_factor(_values: &[Self]) -> Self {
        Self::one()
    }

    /// `a / b` where the caller knows the quotient is exact. Types with a
    /// cheaper exact path (integers stored as rationals) override this.
    fn exact_div(a: &Self, b: &Self) -> Self {
        a.clone() / b.clone()
    }

    /// Determinant of a square matrix with integral entries, when the type
    /// has a faster integer route. `None` selects the generic elimination.
    fn integral_determinant(_rows: &[Vec<Self>]) -> Option<Self> {
        None
    }

    /// Same contract as [`Scalar::integral_determinant`], by a multi-modular
    /// route; pays off for large matrices with big entries.
    fn integral_determinant_modular(_rows: &[Vec<Self>]) -> Option<Self> {
        None
    }

    /// Pseudo-remainder of two ascending coefficient sequences with integral
    /// entries (same contract as [`crate::UniPoly::pseudo_rem`]). `None`
    /// selects the generic routine.
    fn integral_pseudo_rem(_a: &[Self], _b: &[Self]) -> Option<Vec<Self>> {
        None
    }

    /// `true` when this type represents its values without rounding.
    const EXACT: bool;
}

impl Scalar for f64 {
    const EXACT: bool = false;
}

impl Scalar for f32 {
    const EXACT: bool = false;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn integral_determinant(rows: &[Vec<Self>]) -> Option<Self> {
        let m = to_integers(rows.iter().flatten())?;
        let n = rows.len();
        let m: Vec<Vec<BigInt>> = m.chunks(n.max(1)).map(<[BigInt]>::to_vec).collect();
        Some(BigRational::from_integer(crate::intarith::bareiss(m)))
    }

    fn integral_determinant_modular(rows: &[Vec<Self>]) -> Option<Self> {
        let m = to_integers(rows.iter().flatten())?;
        let n = rows.len();
        let m: Vec<Vec<BigInt>> = m.chunks(n.max(1)).map(<[BigInt]>::to_vec).collect();
        Some(BigRational::from_integer(crate::intarith::modular_determinant(&m)))
    }

    fn integral_pseudo_rem(a: &[Self], b: &[Self]) -> Option<Vec<Self>> {
        let a = to_integers(a.iter())?;
        let b = to_integers(b.iter())?;
        Some(crate::intarith::pseudo_rem(a, &b).into_iter().map(BigRational::from_integer).collect())
    }

    fn exact_div(a: &Self, b: &Self) -> Self {
        if a.is_integer() && b.is_integer() {
            BigRational::from_integer(a.numer() / b.numer())
        } else {
            a / b
        }
    }

    fn clearing_factor(values: &[Self]) -> Self {
        let mut lcm = BigInt::one();
        for v in values {
            lcm = lcm.lcm(v.denom());
        }
        BigRational::from_integer(lcm)
    }

    /// Turns the sequence into a primitive integer vector: denominators are
    /// cleared and the gcd of the numerators is divided out. The sign is kept.
    fn normalize_content(coeffs: &mut [Self]) {
        let mut lcm = BigInt::one();
        for c in coeffs.iter() {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in coeffs.iter() {
            let n = c.numer() * (&lcm / c.denom());
            g = g.gcd(&n);
        }
        if g.is_zero() {
            return;
        }
        let factor = BigRational::new(lcm, g);
        for c in coeffs.iter_mut() {
            *c = &*c * &factor;
        }
    }
}

fn to_integers<'a>(values: impl Iterator<Item = &'a BigRational>) -> Option<Vec<BigInt>> {
    values.map(|v| v.is_integer().then(|| v.numer().clone())).collect()
}

/// Convenience constructor for small rationals.
pub fn q(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Convenience constructor for integers as rationals.
pub fn qi(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `-7/15`, `3`, `0` and similar. A leading `-` is the only sign
/// accepted and the denominator, when present, must be a positive integer.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (num_txt, den_txt) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(num_txt) || den_txt.is_some_and(|d| !digits(d)) {
        return Err(ParseRationalError::Malformed(text.to_string()));
    }
    let mut numer: BigInt = num_txt.parse().map_err(|_| ParseRationalError::Malformed(text.to_string()))?;
    if neg {
        numer = -numer;
    }
    let denom: BigInt = match den_txt {
        Some(d) => d.parse().map_err(|_| ParseRationalError::Malformed(text.to_string()))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(text.to_string()));
    }
    Ok(BigRational::new(numer, denom))
}

/// Canonical text form: `n` for integers, `n/d` otherwise.
pub fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal rendering rounded half away from zero to `digits` fractional digits.
pub fn to_decimal(value: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = value * BigRational::from_integer(scale.clone());
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let (quot, rem) = abs.numer().div_rem(abs.denom());
    let rounded = if rem * 2 >= *abs.denom() { quot + 1 } else { quot };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if neg && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }
}

/// Nearest `f64` to a rational (used only for reporting and sampling oracles).
pub fn to_f64(value: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_forms() {
        assert_eq!(parse_rational("-7/15").unwrap(), q(-7, 15));
        assert_eq!(parse_rational("3").unwrap(), qi(3));
        assert_eq!(parse_rational("6/4").unwrap(), q(3, 2));
        assert_eq!(parse_rational(" 0 ").unwrap(), qi(0));
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(matches!(parse_rational("1/0"), Err(ParseRationalError::ZeroDenominator(_))));
        assert!(matches!(parse_rational(""), Err(ParseRationalError::Empty)));
        for bad in ["+3", "1/-2", "--1", "1.5", "a/b", "1/", "/2", "-"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn stored_reduced_with_positive_denominator() {
        let v = q(10, -4);
        assert_eq!(v.denom(), &BigInt::from(2));
        assert_eq!(v.numer(), &BigInt::from(-5));
    }

    #[test]
    fn formatting_round_trips() {
        for v in [q(-7, 15), qi(3), qi(0), q(1, 1_000_000)] {
            assert_eq!(parse_rational(&format_rational(&v)).unwrap(), v);
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&q(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&q(2, 3), 4), "0.6667");
        assert_eq!(to_decimal(&q(-1, 8), 2), "-0.13");
        assert_eq!(to_decimal(&q(-1, 1000), 2), "0.00");
        assert_eq!(to_decimal(&qi(5), 0), "5");
    }

    #[test]
    fn content_normalization_is_primitive() {
        let mut v = vec![q(2, 3), q(-4, 9), qi(0)];
        BigRational::normalize_content(&mut v);
        assert_eq!(v, vec![qi(3), qi(-2), qi(0)]);
    }
}
