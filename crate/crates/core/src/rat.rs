//! Exact rational coordinates.
//!
//! Lattice points, dyadic grid points and merged cubature weights are all
//! rationals with denominators well inside 128 bits, so a fixed-width ratio
//! type is enough and much faster than big integers.

use crate::error::{Error, Result};
use num::rational::Ratio;
use num::ToPrimitive;

pub type Rat = Ratio<i128>;

pub fn rat(numer: i128, denom: i128) -> Rat {
    Ratio::new(numer, denom)
}

pub fn rat_int(v: i128) -> Rat {
    Ratio::from_integer(v)
}

/// Dyadic rational `numer / 2^exp`.
pub fn dyadic(numer: i128, exp: u32) -> Rat {
    Ratio::new(numer, 1i128 << exp)
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| (*r.numer() as f64) / (*r.denom() as f64))
}

/// Parses `p/q`, an integer, or a plain decimal (`0.25`) into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i128 = num
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad rational numerator `{num}`")))?;
        let d: i128 = den
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad rational denominator `{den}`")))?;
        if d == 0 {
            return Err(Error::invalid(format!("zero denominator in `{s}`")));
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 30 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::invalid(format!("bad decimal `{s}`")));
        }
        let negative = int.trim_start().starts_with('-');
        let int_part: i128 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse()
                .map_err(|_| Error::invalid(format!("bad decimal `{s}`")))?
        };
        let scale = 10i128
            .checked_pow(frac.len() as u32)
            .ok_or_else(|| Error::invalid(format!("decimal `{s}` too long")))?;
        let frac_part: i128 = if frac.is_empty() {
            0
        } else {
            frac.parse()
                .map_err(|_| Error::invalid(format!("bad decimal `{s}`")))?
        };
        let signed_frac = if negative { -frac_part } else { frac_part };
        return Ok(rat_int(int_part) + Ratio::new(signed_frac, scale));
    }
    let v: i128 = s
        .parse()
        .map_err(|_| Error::invalid(format!("bad rational `{s}`")))?;
    Ok(rat_int(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rat("3/8").unwrap(), rat(3, 8));
        assert_eq!(parse_rat("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("2").unwrap(), rat_int(2));
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn dyadic_helper() {
        assert_eq!(dyadic(3, 2), rat(3, 4));
        assert_eq!(rat_to_f64(&dyadic(1, 1)), 0.5);
    }
}
