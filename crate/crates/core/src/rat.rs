//! Exact rational scalars.
//!
//! All coefficient arithmetic in this crate is done with arbitrary-precision
//! rationals; nothing is ever rounded. `Rat` is kept reduced with a positive
//! denominator by construction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational p/q. Panics on q = 0.
pub fn rat(p: i64, q: i64) -> Rat {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_zero() -> Rat {
    BigRational::zero()
}

pub fn rat_one() -> Rat {
    BigRational::one()
}

/// Canonical string form: "p" for integers, "p/q" otherwise, sign on the numerator.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse "p" or "p/q". Used for corpus files and CLI flags.
pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().ok()?;
        let den: BigInt = q.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    } else {
        let num: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(num))
    }
}

/// Fractional part folded into [0, 1).
pub fn rat_frac(r: &Rat) -> Rat {
    let f = r - r.floor();
    debug_assert!(!f.is_negative() && f < rat_one());
    f
}

/// Smallest integer >= r.
pub fn rat_ceil_int(r: &Rat) -> i64 {
    r.ceil().to_integer().to_i64().expect("ceil fits in i64")
}

pub fn rat_is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Best-effort f64 value, used only by the floating-point oracle.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        for s in ["0", "5", "-3", "1/3", "-7/12", "22/7"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
    }

    #[test]
    fn parse_normalizes() {
        assert_eq!(rat_from_str("2/4").unwrap(), rat(1, 2));
        assert_eq!(rat_from_str("3/-6").unwrap(), rat(-1, 2));
        assert!(rat_from_str("1/0").is_none());
        assert!(rat_from_str("x").is_none());
    }

    #[test]
    fn frac_and_ceil() {
        assert_eq!(rat_frac(&rat(17, 12)), rat(5, 12));
        assert_eq!(rat_frac(&rat(-5, 12)), rat(7, 12));
        assert_eq!(rat_ceil_int(&rat(-5, 12)), 0);
        assert_eq!(rat_ceil_int(&rat(5, 12)), 1);
        assert_eq!(rat_ceil_int(&rat(3, 1)), 3);
    }
}
