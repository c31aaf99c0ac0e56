use crate::error::{Error, Result};

use super::dilation::DilationVector;

/// Default cap on the number of stored entries (lattice points or dense
/// complex weights).
pub const DEFAULT_BUDGET: u128 = 1 << 31;

/// Integer points of `Δ(n)` restricted to the first `s` axes, enumerated by
/// the nested bounds `0 ≤ k_1 ≤ [Λ_1]`, `0 ≤ k_2 ≤ [Λ_2(k_1)]`, … in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct SimplexLattice {
    dilation: DilationVector,
    dim: usize,
    coords: Vec<u32>,
    next_lambda: Option<Vec<f64>>,
}

impl SimplexLattice {
    pub fn build(n: &DilationVector, s: usize, budget: u128) -> Result<Self> {
        if s == 0 || s > n.dim() {
            return Err(Error::DimensionMismatch {
                expected: n.dim(),
                got: s,
            });
        }
        let estimate = count_points(n, s);
        if estimate.saturating_mul(s as u128) > budget {
            return Err(Error::ResourceLimit {
                what: "simplex lattice",
                estimate,
                budget,
            });
        }
        let lam = n.lambda();
        let mut coords = Vec::with_capacity(estimate as usize * s);
        let mut next = (s < n.dim()).then(|| Vec::with_capacity(estimate as usize));
        let mut k = vec![0i64; s];
        enumerate(&lam, &mut k, 0, &mut |pt| {
            coords.extend(pt.iter().map(|v| *v as u32));
            if let Some(next) = next.as_mut() {
                next.push(lam.at(s + 1, pt));
            }
        });
        Ok(Self {
            dilation: n.clone(),
            dim: s,
            coords,
            next_lambda: next,
        })
    }

    pub fn dilation(&self) -> &DilationVector {
        &self.dilation
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[u32] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// `Λ_{s+1}(k)` per point, present whenever `s < d` (for `s = d − 1`
    /// these are the `Λ_d(k')` values feeding F, S and R).
    pub fn next_lambda(&self) -> Option<&[f64]> {
        self.next_lambda.as_deref()
    }

    /// Per-axis maxima plus one.
    pub fn extents(&self) -> Vec<usize> {
        let mut ext = vec![0usize; self.dim];
        for p in self.points() {
            for (e, v) in ext.iter_mut().zip(p) {
                *e = (*e).max(*v as usize + 1);
            }
        }
        ext
    }
}

pub fn build_lattice(n: &DilationVector, s: usize) -> Result<SimplexLattice> {
    SimplexLattice::build(n, s, DEFAULT_BUDGET)
}

fn enumerate<F: FnMut(&[i64])>(
    lam: &super::dilation::LambdaEvaluator,
    k: &mut Vec<i64>,
    axis: usize,
    visit: &mut F,
) {
    let bound = lam.floor_at(axis + 1, &k[..axis]);
    for v in 0..=bound {
        k[axis] = v;
        if axis + 1 == k.len() {
            visit(k);
        } else {
            enumerate(lam, k, axis + 1, visit);
        }
    }
    k[axis] = 0;
}

/// Number of points of the `s`-dimensional lattice without materialising it:
/// the innermost axis contributes `[Λ_s] + 1` in closed form.
pub fn count_points(n: &DilationVector, s: usize) -> u128 {
    let lam = n.lambda();
    fn rec(lam: &super::dilation::LambdaEvaluator, k: &mut Vec<i64>, axis: usize, s: usize) -> u128 {
        let bound = lam.floor_at(axis + 1, &k[..axis]);
        if bound < 0 {
            return 0;
        }
        if axis + 1 == s {
            return bound as u128 + 1;
        }
        let mut total = 0u128;
        for v in 0..=bound {
            k.push(v);
            total += rec(lam, k, axis + 1, s);
            k.pop();
        }
        total
    }
    rec(&lam, &mut Vec::with_capacity(s), 0, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(n: &DilationVector) -> usize {
        let ext = n.box_extents();
        let total: usize = ext.iter().product();
        (0..total)
            .filter(|idx| {
                let mut rem = *idx;
                let mut k = vec![0i64; ext.len()];
                for (j, e) in ext.iter().enumerate().rev() {
                    k[j] = (rem % e) as i64;
                    rem /= e;
                }
                n.contains(&k)
            })
            .count()
    }

    #[test]
    fn small_counts() {
        let n22 = DilationVector::new(vec![2.0, 2.0]).unwrap();
        let n33 = DilationVector::new(vec![3.0, 3.0]).unwrap();
        assert_eq!(build_lattice(&n22, 2).unwrap().len(), 6);
        assert_eq!(build_lattice(&n33, 2).unwrap().len(), 10);
        assert_eq!(brute_force(&n22), 6);
        assert_eq!(brute_force(&n33), 10);
    }

    #[test]
    fn one_dimensional_count() {
        let n = DilationVector::new(vec![5.7]).unwrap();
        assert_eq!(build_lattice(&n, 1).unwrap().len(), 6);
    }

    #[test]
    fn membership_matches_brute_force_on_grid() {
        let vals = [1.5, 2.0, 3.7, 5.0];
        for &a in &vals {
            for &b in &vals {
                for &c in &vals {
                    let n = DilationVector::new(vec![a, b, c]).unwrap();
                    let lat = build_lattice(&n, 3).unwrap();
                    for p in lat.points() {
                        let k: Vec<i64> = p.iter().map(|v| *v as i64).collect();
                        assert!(n.contains(&k), "{n}: {k:?}");
                    }
                    assert_eq!(lat.len(), brute_force(&n), "{n}");
                    assert_eq!(count_points(&n, 3) as usize, lat.len());
                }
            }
        }
    }

    #[test]
    fn order_is_lexicographic() {
        let n = DilationVector::new(vec![3.7, 5.0, 2.0]).unwrap();
        let lat = build_lattice(&n, 3).unwrap();
        let pts: Vec<Vec<u32>> = lat.points().map(|p| p.to_vec()).collect();
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
    }

    #[test]
    fn caches_next_lambda() {
        let n = DilationVector::new(vec![2.0, 3.0]).unwrap();
        let lat = build_lattice(&n, 1).unwrap();
        assert_eq!(lat.next_lambda().unwrap(), &[3.0, 1.5, 0.0]);
        assert!(build_lattice(&n, 2).unwrap().next_lambda().is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let n = DilationVector::new(vec![100.0, 100.0]).unwrap();
        match SimplexLattice::build(&n, 2, 1000) {
            Err(Error::ResourceLimit { estimate, .. }) => assert_eq!(estimate, 5151),
            other => panic!("unexpected {other:?}"),
        }
    }
}
