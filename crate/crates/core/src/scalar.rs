//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Writes a coefficient in front of a monomial string: `x`, `-x`, `3*x`,
/// `-1/2*x`, or just the number when the monomial is the unit.
pub(crate) fn write_term(out: &mut String, first: bool, coeff: &Scalar, monomial: &str) {
    let negative = coeff.is_negative();
    if first {
        if negative {
            out.push('-');
        }
    } else if negative {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    let abs = coeff.abs();
    if monomial.is_empty() {
        out.push_str(&abs.to_string());
    } else if abs.is_one() {
        out.push_str(monomial);
    } else {
        out.push_str(&abs.to_string());
        out.push('*');
        out.push_str(monomial);
    }
}
