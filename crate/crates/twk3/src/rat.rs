//! Small helpers for exact rationals and their canonical text form.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::{Error, Result};

/// Canonical text form: `"p"` for integers, `"p/q"` with `q > 1` otherwise.
pub fn rat_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"`; the result is reduced with positive denominator.
pub fn rat_from_str(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid integer `{t}`")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(parse_int(p)?, den))
        }
    }
}

/// Least `k > 0` such that `k·r` is integral for every entry.
pub fn common_denominator(rs: &[BigRational]) -> BigInt {
    let mut acc = BigInt::one();
    for r in rs {
        acc = num::Integer::lcm(&acc, r.denom());
    }
    acc.abs()
}

/// Representative of `r` modulo `2Z` in `[0, 2)`.
pub fn mod_two(r: &BigRational) -> BigRational {
    let two = BigRational::from(BigInt::from(2));
    let q = (r / &two).floor();
    r - q * two
}

/// Representative of `r` modulo `Z` in `[0, 1)`.
pub fn mod_one(r: &BigRational) -> BigRational {
    r - r.floor()
}
