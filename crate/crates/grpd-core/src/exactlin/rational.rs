use crate::error::{Error, Result};
use num::{BigInt, BigRational, One};

/// Arbitrary-precision integer.
pub type Int = BigInt;

/// Arbitrary-precision rational, kept canonical by construction: reduced
/// form, positive denominator.
pub type Rational = BigRational;

/// Integer from a machine word, for literals.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Rational from machine-word numerator and denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

/// Formats as `p/q`, or plain `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q` or a plain integer `p`. The denominator must be nonzero.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: Int = num
        .parse()
        .map_err(|_| Error::Structural(format!("invalid rational {s:?}")))?;
    let d: Int = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Structural(format!("invalid rational {s:?}")))?,
        None => Int::one(),
    };
    if d == Int::from(0) {
        return Err(Error::Structural(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}
