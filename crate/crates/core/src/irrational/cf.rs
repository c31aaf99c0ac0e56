use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::alpha::{AlphaSpec, DEFAULT_PRECISION_BITS};

// Big integers serialize as decimal strings.
fn as_str<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn as_strs<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn as_str_pairs<S: serde::Serializer>(v: &[(BigInt, BigInt)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(p, q)| [p.to_string(), q.to_string()]))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuedFraction {
    #[serde(serialize_with = "as_str")]
    pub a0: BigInt,
    /// `a₁, a₂, …`, all positive.
    #[serde(serialize_with = "as_strs")]
    pub quotients: Vec<BigInt>,
    /// `p_k/q_k` for `k = 0, 1, …`.
    #[serde(serialize_with = "as_str_pairs")]
    pub convergents: Vec<(BigInt, BigInt)>,
    /// The expansion ended exactly (rational input).
    pub terminated: bool,
    /// Fewer than the requested terms could be certified.
    pub precision_exhausted: bool,
}

impl ContinuedFraction {
    pub fn denominators(&self) -> impl Iterator<Item = &BigInt> + '_ {
        self.convergents.iter().map(|(_, q)| q)
    }

    /// `p_k q_{k−1} − p_{k−1} q_k = (−1)^{k−1}` for every consecutive pair.
    pub fn determinant_identity_holds(&self) -> bool {
        self.convergents.windows(2).enumerate().all(|(i, w)| {
            let k = i + 1;
            let det = &w[1].0 * &w[0].1 - &w[0].0 * &w[1].1;
            let expect = if k % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            det == expect
        })
    }
}

/// Expands both ends of the enclosure `[lo, hi]/den` and keeps the quotients
/// on which they agree.
pub fn cf_expand(alpha: &AlphaSpec, max_terms: usize) -> ContinuedFraction {
    cf_expand_with_precision(alpha, max_terms, DEFAULT_PRECISION_BITS)
}

pub fn cf_expand_with_precision(alpha: &AlphaSpec, max_terms: usize, bits: u32) -> ContinuedFraction {
    let (lo, hi, den) = alpha.enclosure(bits);
    let (mut p1, mut q1) = (lo, den.clone());
    let (mut p2, mut q2) = (hi, den);
    let mut quotients: Vec<BigInt> = Vec::new();
    let mut terminated = false;
    let mut exhausted = false;
    while quotients.len() <= max_terms {
        let (a1, r1) = p1.div_mod_floor(&q1);
        let (a2, r2) = p2.div_mod_floor(&q2);
        if a1 != a2 {
            exhausted = true;
            break;
        }
        quotients.push(a1);
        match (r1.is_zero(), r2.is_zero()) {
            (true, true) => {
                terminated = true;
                break;
            }
            (false, false) => {}
            _ => {
                exhausted = true;
                break;
            }
        }
        (p1, q1) = (q1, r1);
        (p2, q2) = (q2, r2);
    }
    if quotients.is_empty() {
        // Enclosure straddles an integer: nothing is certified.
        return ContinuedFraction {
            a0: BigInt::zero(),
            quotients: Vec::new(),
            convergents: Vec::new(),
            terminated: false,
            precision_exhausted: true,
        };
    }
    if quotients.len() == max_terms + 1 {
        exhausted = false;
    }
    let mut convergents = Vec::with_capacity(quotients.len());
    let (mut pm2, mut pm1) = (BigInt::zero(), BigInt::one());
    let (mut qm2, mut qm1) = (BigInt::one(), BigInt::zero());
    for a in &quotients {
        let p = a * &pm1 + &pm2;
        let q = a * &qm1 + &qm2;
        convergents.push((p.clone(), q.clone()));
        (pm2, pm1) = (pm1, p);
        (qm2, qm1) = (qm1, q);
    }
    let a0 = quotients.remove(0);
    ContinuedFraction {
        a0,
        quotients,
        convergents,
        terminated,
        precision_exhausted: exhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    /// Plain Euclid on machine integers.
    fn euclid(mut p: i64, mut q: i64) -> Vec<i64> {
        let mut out = Vec::new();
        while q != 0 {
            let a = p.div_euclid(q);
            out.push(a);
            (p, q) = (q, p - a * q);
        }
        out
    }

    #[test]
    fn rational_expansion() {
        let cf = cf_expand(&AlphaSpec::rational(415, 93).unwrap(), 20);
        assert_eq!(cf.a0, BigInt::from(4));
        assert_eq!(cf.quotients, big(&[2, 6, 7]));
        assert!(cf.terminated && !cf.precision_exhausted);
        assert_eq!(cf.convergents.last().unwrap(), &(BigInt::from(415), BigInt::from(93)));
        let e = euclid(415, 93);
        assert_eq!(e, vec![4, 2, 6, 7]);
        let cf = cf_expand(&AlphaSpec::rational(-7, 3).unwrap(), 20);
        let mut all = vec![cf.a0.clone()];
        all.extend(cf.quotients.clone());
        assert_eq!(all, big(&euclid(-7, 3)));
    }

    #[test]
    fn golden_is_all_ones() {
        let cf = cf_expand(&AlphaSpec::golden(), 100);
        assert_eq!(cf.a0, BigInt::one());
        assert_eq!(cf.quotients.len(), 100);
        assert!(cf.quotients.iter().all(|a| a == &BigInt::one()));
        assert!(!cf.precision_exhausted);
        assert!(cf.determinant_identity_holds());
        // Denominators are Fibonacci numbers.
        let q: Vec<BigInt> = cf.denominators().take(6).cloned().collect();
        assert_eq!(q, big(&[1, 1, 2, 3, 5, 8]));
    }

    #[test]
    fn precision_exhaustion_is_flagged() {
        let cf = cf_expand_with_precision(&AlphaSpec::golden(), 1000, 64);
        assert!(cf.precision_exhausted);
        assert!(cf.quotients.len() > 20 && cf.quotients.len() < 1000);
        assert!(cf.quotients.iter().all(|a| a == &BigInt::one()));
        let open = AlphaSpec::parse("dec:0.70710678...").unwrap();
        let cf = cf_expand(&open, 50);
        assert!(cf.precision_exhausted);
        // √2/2 = [0; 1, 2, 2, 2, …]
        assert_eq!(&cf.quotients[..4], &big(&[1, 2, 2, 2])[..]);
    }

    #[test]
    fn liouville_denominators() {
        let cf = cf_expand(&AlphaSpec::liouville(10, 3).unwrap(), 50);
        assert!(cf.terminated);
        let q: Vec<BigInt> = cf.denominators().cloned().collect();
        assert!(q.contains(&BigInt::from(100)));
        assert!(q.contains(&BigInt::from(1_000_000)));
        let cf = cf_expand(&AlphaSpec::liouville(2, 4).unwrap(), 50);
        let q: Vec<BigInt> = cf.denominators().cloned().collect();
        for d in [4i64, 64, 1 << 24] {
            assert!(q.contains(&BigInt::from(d)), "{d}");
        }
        assert!(cf.determinant_identity_holds());
    }
}
