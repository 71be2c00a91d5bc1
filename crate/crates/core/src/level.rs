//! Exact scalar values.
//!
//! Every finite decimal literal is a rational number, so field values are
//! stored as exact rationals and compared without rounding.

use alloc::string::{String, ToString};
use core::fmt;
use core::ops::Add;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Level(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as an exact scalar")]
pub struct ParseLevelError(pub String);

impl Level {
    pub fn zero() -> Self {
        Level(BigRational::zero())
    }

    pub fn from_integer(v: i64) -> Self {
        Level(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Level(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Exact value of a finite float. Returns `None` for NaN and infinities.
    pub fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(Level)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn midpoint(a: &Level, b: &Level) -> Level {
        Level((&a.0 + &b.0) / BigRational::from_integer(BigInt::from(2)))
    }

    /// Mean of three levels (triangle barycenter value).
    pub fn mean3(a: &Level, b: &Level, c: &Level) -> Level {
        let sum = &a.0 + &b.0 + &c.0;
        Level(sum / BigRational::from_integer(BigInt::from(3)))
    }
}

impl Add for &Level {
    type Output = Level;
    fn add(self, rhs: &Level) -> Level {
        Level(&self.0 + &rhs.0)
    }
}

impl FromStr for Level {
    type Err = ParseLevelError;

    /// Accepts integers, fractions `p/q` and decimals with an optional
    /// exponent (`-1.25e-3`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseLevelError(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        if let Some((p, q)) = t.split_once('/') {
            let p = parse_int(p).ok_or_else(err)?;
            let q = parse_int(q).ok_or_else(err)?;
            if q.is_zero() {
                return Err(err());
            }
            return Ok(Level(BigRational::new(p, q)));
        }
        let (mantissa, exp) = match t.find(['e', 'E']) {
            Some(pos) => {
                let e: i32 = t[pos + 1..].parse().map_err(|_| err())?;
                (&t[..pos], e)
            }
            None => (t, 0),
        };
        let (neg, digits) = match mantissa.as_bytes().first() {
            Some(b'-') => (true, &mantissa[1..]),
            Some(b'+') => (false, &mantissa[1..]),
            _ => (false, mantissa),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let mut all = String::with_capacity(int_part.len() + frac_part.len());
        all.push_str(int_part);
        all.push_str(frac_part);
        let mut num: BigInt = all.parse().map_err(|_| err())?;
        if neg {
            num = -num;
        }
        let scale = exp - frac_part.len() as i32;
        let ten = BigInt::from(10);
        let value = if scale >= 0 {
            BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Level(value))
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl fmt::Display for Level {
    /// Terminating decimals are printed in positional notation; everything
    /// else as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let numer = self.0.numer();
        let denom = self.0.denom();
        if denom.is_one() {
            return write!(f, "{numer}");
        }
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        let mut d = denom.clone();
        let (mut twos, mut fives) = (0usize, 0usize);
        while d.is_even() {
            d /= &two;
            twos += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            fives += 1;
        }
        if !d.is_one() {
            return write!(f, "{numer}/{denom}");
        }
        let places = twos.max(fives);
        let scaled = numer * num_traits::pow(BigInt::from(10), places) / denom;
        let neg = scaled.is_negative();
        let digits = scaled.abs().to_string();
        let digits = if digits.len() <= places {
            let mut padded = String::new();
            for _ in 0..=(places - digits.len()) {
                padded.push('0');
            }
            padded.push_str(&digits);
            padded
        } else {
            digits
        };
        let (int_part, frac_part) = digits.split_at(digits.len() - places);
        write!(f, "{}{}.{}", if neg { "-" } else { "" }, int_part, frac_part)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    #[test]
    fn parses_decimal_forms_exactly() {
        assert_eq!("0.25".parse::<Level>().unwrap(), Level::from_ratio(1, 4));
        assert_eq!("-1.5e2".parse::<Level>().unwrap(), Level::from_integer(-150));
        assert_eq!("2/6".parse::<Level>().unwrap(), Level::from_ratio(1, 3));
        assert_eq!(".5".parse::<Level>().unwrap(), Level::from_ratio(1, 2));
        assert_eq!("-0.000".parse::<Level>().unwrap(), Level::zero());
        assert_eq!("1e-3".parse::<Level>().unwrap(), Level::from_ratio(1, 1000));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "--1", "nan", "inf", "1e"] {
            assert!(bad.parse::<Level>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "-3", "0.923879532511", "-0.05", "1/3", "-2/7", "12.5"] {
            let l: Level = s.parse().unwrap();
            assert_eq!(format!("{l}"), s);
            assert_eq!(format!("{l}").parse::<Level>().unwrap(), l);
        }
    }

    #[test]
    fn float_conversion_is_exact() {
        let l = Level::from_f64(0.1).unwrap();
        assert_ne!(l, "0.1".parse().unwrap());
        assert_eq!(l.to_f64(), 0.1);
        assert!(Level::from_f64(f64::NAN).is_none());
    }
}
