//! Exact rational arithmetic, backed by arbitrary-precision integers.
//!
//! All polytope math runs on these; floats appear only in the simulation
//! engine's complex mode. Values are always stored reduced with a positive
//! denominator, and the text form is `p/q` (or bare `p` for integers).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};

use super::CoreError;

pub type Rat = BigRational;

/// Builds `n/d` from machine integers. Panics on `d = 0`; use
/// [`rational_reduce`] when the denominator is untrusted.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Reduces `n/d` to canonical form, rejecting a zero denominator.
pub fn rational_reduce(n: i64, d: i64) -> Result<Rat, CoreError> {
    if d == 0 {
        return Err(CoreError::DivisionByZero);
    }
    Ok(rat(n, d))
}

/// Parses `p/q` or `p` with optional sign. Whitespace around the tokens is
/// accepted; a zero denominator is an error.
pub fn parse_rational(text: &str) -> Result<Rat, CoreError> {
    let bad = || CoreError::BadRational(text.to_string());
    match text.split_once('/') {
        Some((num, den)) => {
            let n: BigInt = num.trim().parse().map_err(|_| bad())?;
            let d: BigInt = den.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(CoreError::DivisionByZero);
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: BigInt = text.trim().parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
    }
}

/// Renders in the `p/q` text form; integers print without the `/q` part.
pub fn format_rational(r: &Rat) -> String {
    if r.denom().is_positive() && *r.denom() == BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduce_normalizes_sign_and_gcd() {
        assert_eq!(rational_reduce(2, 4).unwrap(), rat(1, 2));
        assert_eq!(rational_reduce(3, -6).unwrap(), rat(-1, 2));
        assert_eq!(rational_reduce(-3, -6).unwrap(), rat(1, 2));
        assert_eq!(rational_reduce(0, 7).unwrap(), rat(0, 1));
    }

    #[test]
    fn reduce_rejects_zero_denominator() {
        assert_eq!(rational_reduce(1, 0), Err(CoreError::DivisionByZero));
    }

    #[test]
    fn parse_accepts_both_text_forms() {
        assert_eq!(parse_rational("5/3").unwrap(), rat(5, 3));
        assert_eq!(parse_rational("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert_eq!(parse_rational(" 1 / 2 ").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn format_omits_unit_denominator() {
        assert_eq!(format_rational(&rat(17, 9)), "17/9");
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_rational(&rat(-1, 3)), "-1/3");
        assert_eq!(format_rational(&rat(0, 5)), "0");
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = rat(n, d);
            prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }

        #[test]
        fn arithmetic_matches_integer_cross_multiplication(
            a in -100i64..100, b in 1i64..100,
            c in -100i64..100, d in 1i64..100,
        ) {
            let sum = rat(a, b) + rat(c, d);
            prop_assert_eq!(sum, rat(a * d + c * b, b * d));
        }
    }
}
