use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 256;
const MAX_PRECISION_BITS: u32 = 1 << 14;

/// Real numbers that can be evaluated to any precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaSpec {
    /// `p/q`, reduced, `q > 0`.
    Rational { p: BigInt, q: BigInt },
    /// `(a + b√D)/c` with `D > 0` not a square and `c > 0`.
    Surd {
        a: BigInt,
        b: BigInt,
        disc: BigInt,
        c: BigInt,
    },
    /// `Σ_{k=1}^{m} b^{−k!}`, an exact rational.
    Liouville { base: u32, depth: u32 },
    /// `digits / 10^scale`; with `open` set the literal was a truncation and
    /// the value is only known to lie in `[digits, digits+1] / 10^scale`.
    Decimal {
        digits: BigInt,
        scale: u32,
        open: bool,
    },
}

fn factorial(m: u32) -> u32 {
    (1..=m).product()
}

/// `num/den` for `0 ≤ num < den`, correct to within `2^-64` absolute.
pub(crate) fn unit_ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    let scaled: BigInt = (num << 64u32) / den;
    scaled.to_u64().map_or(1.0, |v| v as f64 / 2f64.powi(64))
}

impl AlphaSpec {
    pub fn rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (mut p, mut q) = (p.into(), q.into());
        if q.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        let g = p.gcd(&q);
        Ok(AlphaSpec::Rational { p: p / &g, q: q / g })
    }

    pub fn golden() -> Self {
        AlphaSpec::Surd {
            a: BigInt::one(),
            b: BigInt::one(),
            disc: BigInt::from(5),
            c: BigInt::from(2),
        }
    }

    /// `(a + b√D)/c`; collapses to a rational when `D` is a square or `b = 0`.
    pub fn surd(a: BigInt, b: BigInt, disc: BigInt, c: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        if disc.is_negative() {
            return Err(Error::Parse("negative discriminant".into()));
        }
        let root = disc.sqrt();
        if b.is_zero() || &root * &root == disc {
            return Self::rational(a + b * root, c);
        }
        let (a, b, c) = if c.is_negative() { (-a, -b, -c) } else { (a, b, c) };
        Ok(AlphaSpec::Surd { a, b, disc, c })
    }

    pub fn liouville(base: u32, depth: u32) -> Result<Self> {
        if base < 2 || depth < 1 {
            return Err(Error::Parse("liouville needs base ≥ 2 and depth ≥ 1".into()));
        }
        if depth > 12 || factorial(depth) as u64 * (base as f64).log2().ceil() as u64 > 1 << 24 {
            return Err(Error::Parse(format!("liouville:{base},{depth} is too deep")));
        }
        Ok(AlphaSpec::Liouville { base, depth })
    }

    /// `rational:p/q | golden | sqrt:D | surd:a,b,D,c | liouville:b,m | dec:x[...]`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |what: &str| Error::Parse(format!("invalid alpha {s:?}: {what}"));
        let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad("expected an integer"));
        if s == "golden" {
            return Ok(Self::golden());
        }
        let (kind, body) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        match kind {
            "rational" => match body.split_once('/') {
                Some((p, q)) => Self::rational(int(p)?, int(q)?),
                None => Self::rational(int(body)?, 1),
            },
            "sqrt" => Self::surd(BigInt::zero(), BigInt::one(), int(body)?, BigInt::one()),
            "surd" => {
                let parts: Vec<&str> = body.split(',').collect();
                if parts.len() != 4 {
                    return Err(bad("surd takes a,b,D,c"));
                }
                Self::surd(int(parts[0])?, int(parts[1])?, int(parts[2])?, int(parts[3])?)
            }
            "liouville" => {
                let (b, m) = body.split_once(',').ok_or_else(|| bad("liouville takes b,m"))?;
                let b = b.trim().parse().map_err(|_| bad("base"))?;
                let m = m.trim().parse().map_err(|_| bad("depth"))?;
                Self::liouville(b, m)
            }
            "dec" => {
                let (body, open) = match body.strip_suffix("...") {
                    Some(b) => (b, true),
                    None => (body, false),
                };
                let (neg, body) = match body.strip_prefix('-') {
                    Some(b) => (true, b),
                    None => (false, body),
                };
                let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
                if ip.is_empty() && fp.is_empty()
                    || !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit())
                {
                    return Err(bad("expected decimal digits"));
                }
                let mut digits: BigInt = format!("{ip}{fp}0").parse().map_err(|_| bad("digits"))?;
                digits /= 10;
                if neg {
                    digits = -digits;
                }
                Ok(AlphaSpec::Decimal {
                    digits,
                    scale: fp.len() as u32,
                    open,
                })
            }
            _ => Err(bad("unknown kind")),
        }
    }

    /// Exact value when the number is rational (a truncated decimal counts
    /// as its literal value).
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        match self {
            AlphaSpec::Rational { p, q } => Some((p.clone(), q.clone())),
            AlphaSpec::Liouville { base, depth } => {
                let b = BigInt::from(*base);
                let top = factorial(*depth);
                let mut num = BigInt::zero();
                for k in 1..=*depth {
                    num += num_traits::pow(b.clone(), (top - factorial(k)) as usize);
                }
                Some((num, num_traits::pow(b, top as usize)))
            }
            AlphaSpec::Decimal { digits, scale, .. } => {
                let q = num_traits::pow(BigInt::from(10), *scale as usize);
                let g = digits.gcd(&q);
                Some((digits / &g, q / g))
            }
            AlphaSpec::Surd { .. } => None,
        }
    }

    /// True for the exact rational kind only: truncated constructions are
    /// rational too but stand in for irrationals.
    pub fn is_declared_rational(&self) -> bool {
        matches!(self, AlphaSpec::Rational { .. })
    }

    /// Rational enclosure `[lo, hi] / den` of the value, with
    /// `den = c·2^bits` for surds.
    pub fn enclosure(&self, bits: u32) -> (BigInt, BigInt, BigInt) {
        match self {
            AlphaSpec::Surd { a, b, disc, c } => {
                let x = BigInt::one() << bits;
                let (lo, hi) = surd_numerators(a, b, disc, &x);
                (lo, hi, c * x)
            }
            AlphaSpec::Decimal {
                digits,
                scale,
                open: true,
            } => {
                let q = num_traits::pow(BigInt::from(10), *scale as usize);
                if digits.is_negative() {
                    (digits - 1, digits.clone(), q)
                } else {
                    (digits.clone(), digits + 1, q)
                }
            }
            _ => {
                let (p, q) = self.as_rational().expect("rational kinds");
                (p.clone(), p, q)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, _, den) = self.enclosure(DEFAULT_PRECISION_BITS);
        let (fl, r) = lo.div_mod_floor(&den);
        fl.to_f64().unwrap_or(f64::NAN) + unit_ratio_to_f64(&r, &den)
    }

    /// `{αk}` rounded to f64. Exact kinds use integer arithmetic; surds start
    /// at `bits` of precision and double it until the integer part of `αk`
    /// is certified.
    pub fn frac_mul(&self, k: u64, bits: u32) -> Result<f64> {
        match self {
            AlphaSpec::Surd { a, b, disc, c } => {
                let mut bits = bits.max(64);
                loop {
                    let x = BigInt::from(k) << bits;
                    let (lo, hi) = surd_numerators(a, b, disc, &x);
                    let den = c * (BigInt::one() << bits);
                    let (fl_lo, r_lo) = lo.div_mod_floor(&den);
                    let fl_hi = hi.div_floor(&den);
                    if fl_lo == fl_hi || k == 0 {
                        return Ok(unit_ratio_to_f64(&r_lo, &den));
                    }
                    bits *= 2;
                    if bits > MAX_PRECISION_BITS {
                        return Err(Error::InvalidArgument(format!(
                            "could not certify the integer part of {self}·{k}"
                        )));
                    }
                }
            }
            _ => {
                let (p, q) = self.as_rational().expect("rational kinds");
                let r = (p * BigInt::from(k)).mod_floor(&q);
                Ok(unit_ratio_to_f64(&r, &q))
            }
        }
    }

    pub fn frac_multiples(&self, n: u64, bits: u32) -> Result<Vec<f64>> {
        (0..=n).map(|k| self.frac_mul(k, bits)).collect()
    }
}

/// Bounds `lo < a·x + b√D·x < hi = lo + 1` for `x > 0` (numerators over `c`).
fn surd_numerators(a: &BigInt, b: &BigInt, disc: &BigInt, x: &BigInt) -> (BigInt, BigInt) {
    let t2 = b * b * disc * x * x;
    let t = t2.sqrt();
    let base = a * x;
    if b.sign() == Sign::Minus {
        (&base - &t - 1, base - t)
    } else {
        (&base + &t, base + t + 1)
    }
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSpec::Rational { p, q } => write!(f, "rational:{p}/{q}"),
            AlphaSpec::Surd { a, b, disc, c } => {
                if a == &BigInt::one() && b == &BigInt::one() && disc == &BigInt::from(5) && c == &BigInt::from(2) {
                    write!(f, "golden")
                } else {
                    write!(f, "surd:{a},{b},{disc},{c}")
                }
            }
            AlphaSpec::Liouville { base, depth } => write!(f, "liouville:{base},{depth}"),
            AlphaSpec::Decimal { digits, scale, open } => {
                let neg = digits.is_negative();
                let s = digits.abs().to_string();
                let scale = *scale as usize;
                let padded = format!("{s:0>width$}", width = scale + 1);
                let (ip, fp) = padded.split_at(padded.len() - scale);
                let sign = if neg { "-" } else { "" };
                let tail = if *open { "..." } else { "" };
                if scale == 0 {
                    write!(f, "dec:{sign}{ip}{tail}")
                } else {
                    write!(f, "dec:{sign}{ip}.{fp}{tail}")
                }
            }
        }
    }
}

impl Serialize for AlphaSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        for s in [
            "rational:415/93",
            "golden",
            "liouville:2,4",
            "dec:0.70710678...",
            "dec:-1.5",
            "surd:1,-1,7,3",
        ] {
            let a = AlphaSpec::parse(s).unwrap();
            assert_eq!(a.to_string(), s);
        }
        assert_eq!(
            AlphaSpec::parse("rational:4/6").unwrap().to_string(),
            "rational:2/3"
        );
        assert_eq!(AlphaSpec::parse("sqrt:9").unwrap().to_string(), "rational:3/1");
        for bad in ["", "rational:1/0", "golden:2", "dec:1.x", "liouville:1,3", "foo:1"] {
            assert!(AlphaSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn values() {
        let g = AlphaSpec::golden().to_f64();
        assert!((g - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        let l = AlphaSpec::liouville(10, 3).unwrap();
        assert_eq!(
            l.as_rational().unwrap(),
            (BigInt::from(110001), BigInt::from(1_000_000))
        );
        let s = AlphaSpec::parse("surd:1,-1,7,3").unwrap().to_f64();
        assert!((s - (1.0 - 7f64.sqrt()) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn fractional_parts_match_f64_where_safe() {
        let g = AlphaSpec::golden();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        for k in [0u64, 1, 2, 3, 10, 1000] {
            let expect = (phi * k as f64).fract();
            assert!((g.frac_mul(k, 256).unwrap() - expect).abs() < 1e-9);
        }
        let h = AlphaSpec::rational(1, 2).unwrap();
        assert_eq!(h.frac_multiples(4, 256).unwrap(), vec![0.0, 0.5, 0.0, 0.5, 0.0]);
        let neg = AlphaSpec::rational(-1, 3).unwrap();
        assert!((neg.frac_mul(1, 256).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn near_integer_multiples_are_exact() {
        // φ F_n = F_{n+1} − ψ^n, so {φ F_45} = |ψ|^45 ≈ 4e-10; plain f64
        // multiplication gets this wrong in the seventh digit.
        let g = AlphaSpec::golden();
        let f45 = 1_134_903_170u64;
        let psi = (5f64.sqrt() - 1.0) / 2.0;
        let v = g.frac_mul(f45, 64).unwrap();
        assert!((v - psi.powi(45)).abs() < 1e-18, "{v}");
    }
}
