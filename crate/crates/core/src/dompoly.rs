//! Polynomial families built by the shift-sum recurrence
//! `f_n = x^k (f_{n-1} + ... + f_{n-m})`, the banded kernel that produces the
//! same coefficients across generations, and shape propagation checks.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::seqshape;
use crate::tpcheck::Kernel;
use crate::transform::{self, ConvexityClass};

pub const DEFAULT_N_MAX: usize = 32;

/// Coefficients `a_0, a_1, ...` of generation `n` (1-based), trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySeq {
    pub n: usize,
    coeffs: Vec<Rational>,
}

impl PolySeq {
    pub fn new(n: usize, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolySeq { n, coeffs }
    }

    pub fn from_ints(n: usize, coeffs: &[i64]) -> Self {
        Self::new(n, rational::ints(coeffs))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^j`, zero beyond the degree.
    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient sequence used for shape analysis; the zero polynomial reads as `(0)`.
    pub fn shape_terms(&self) -> Vec<Rational> {
        if self.coeffs.is_empty() {
            vec![Rational::zero()]
        } else {
            self.coeffs.clone()
        }
    }
}

impl std::fmt::Display for PolySeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let body: Vec<String> = self.shape_terms().iter().map(rational::format_exact).collect();
        write!(f, "f_{} = ({})", self.n, body.join(", "))
    }
}

/// Next generation from the last `m` entries of `history`:
/// `a_{n,j} = a_{n-1,j-k} + ... + a_{n-m,j-k}`, zero for `j < k`.
pub fn recurrence_step(history: &[PolySeq], m: usize, k: usize) -> Result<PolySeq> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if history.len() < m {
        return Err(Error::InsufficientHistory {
            needed: m,
            found: history.len(),
        });
    }
    let recent = &history[history.len() - m..];
    let len = recent.iter().map(|p| p.coeffs.len()).max().unwrap_or(0);
    let mut coeffs = vec![Rational::zero(); len + k];
    for p in recent {
        for (j, a) in p.coeffs.iter().enumerate() {
            coeffs[j + k] += a;
        }
    }
    let n = history.last().map_or(0, |p| p.n) + 1;
    Ok(PolySeq::new(n, coeffs))
}

/// Seeds followed by generations up to `n_max` (inclusive).
pub fn unroll(seeds: &[PolySeq], m: usize, k: usize, n_max: usize) -> Result<Vec<PolySeq>> {
    let mut gens = numbered_seeds(seeds, m)?;
    while gens.len() < n_max {
        let next = recurrence_step(&gens, m, k)?;
        gens.push(next);
    }
    Ok(gens)
}

fn numbered_seeds(seeds: &[PolySeq], m: usize) -> Result<Vec<PolySeq>> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if seeds.len() < m {
        return Err(Error::InsufficientHistory {
            needed: m,
            found: seeds.len(),
        });
    }
    Ok(seeds[..m]
        .iter()
        .enumerate()
        .map(|(i, p)| PolySeq::new(i + 1, p.coeffs.clone()))
        .collect())
}

/// Generation-indexed kernel: row `n > m` holds ones in columns `n-m, ..., n-1`,
/// the first `m` rows are zero.
pub fn build_band_kernel(m: usize, size: usize) -> Result<Kernel> {
    if m == 0 || size <= m {
        return Err(Error::InvalidArgument(format!(
            "band kernel needs m >= 1 and size > m, got m = {m}, size = {size}"
        )));
    }
    Ok(Kernel::from_fn(size, size, |n, i| {
        if n >= m && i < n && i + m >= n {
            rational::int(1)
        } else {
            Rational::zero()
        }
    }))
}

/// Generations `1..=size` computed with the band kernel:
/// `a_{n,j} = sum_i K(n,i) a_{i,j-k}` for `n > m`.
pub fn unroll_via_kernel(seeds: &[PolySeq], m: usize, k: usize, size: usize) -> Result<Vec<PolySeq>> {
    let kernel = build_band_kernel(m, size)?;
    let mut gens = numbered_seeds(seeds, m)?;
    for n in m..size {
        let len = gens.iter().map(|p| p.coeffs.len()).max().unwrap_or(0);
        let mut coeffs = vec![Rational::zero(); len + k];
        for (j, c) in coeffs.iter_mut().enumerate().skip(k) {
            for (i, p) in gens.iter().enumerate() {
                let w = kernel.get(n, i);
                if !w.is_zero() {
                    *c += w * p.coeff(j - k);
                }
            }
        }
        gens.push(PolySeq::new(n + 1, coeffs));
    }
    Ok(gens)
}

/// `f_i = (1 + x)^i` for `i = 1..=m`.
pub fn demo_seeds(m: usize) -> Vec<PolySeq> {
    let mut row = vec![rational::int(1)];
    (1..=m)
        .map(|i| {
            let mut next = vec![Rational::zero(); row.len() + 1];
            for (j, a) in row.iter().enumerate() {
                next[j] += a;
                next[j + 1] += a;
            }
            row = next;
            PolySeq::new(i, row.clone())
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    Unimodal,
    /// Nonnegative forward differences of the given order.
    Convex(usize),
    /// Nonpositive forward differences of the given order.
    Concave(usize),
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Shape::Unimodal => f.write_str("unimodal"),
            Shape::Convex(r) => write!(f, "{r}-convex"),
            Shape::Concave(r) => write!(f, "{r}-concave"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generation {
    pub poly: PolySeq,
    pub modality: usize,
    /// `None` when the coefficient list is too short for the order.
    pub convexity: Option<ConvexityClass>,
    pub has_shape: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationReport {
    pub m: usize,
    pub k: usize,
    pub shape: Shape,
    /// Whether `f_{m+1}` has the shape.
    pub hypothesis_holds: bool,
    /// All generations, seeds included.
    pub generations: Vec<Generation>,
}

impl PropagationReport {
    /// Generations after the seeds lacking the shape.
    pub fn violations(&self) -> Vec<usize> {
        self.generations
            .iter()
            .filter(|g| g.poly.n > self.m && !g.has_shape)
            .map(|g| g.poly.n)
            .collect()
    }
}

fn analyze_generation(poly: PolySeq, shape: Shape) -> Generation {
    let terms = poly.shape_terms();
    let modality = seqshape::modality(&terms).m;
    let order = match shape {
        Shape::Unimodal => 2,
        Shape::Convex(r) | Shape::Concave(r) => r,
    };
    let convexity = transform::convexity_order(&terms, order).ok();
    let has_shape = match shape {
        Shape::Unimodal => modality == 1,
        Shape::Convex(_) => convexity.is_none_or(ConvexityClass::is_convex),
        Shape::Concave(_) => convexity.is_none_or(ConvexityClass::is_concave),
    };
    Generation {
        poly,
        modality,
        convexity,
        has_shape,
    }
}

/// Unrolls the recurrence to `n_max` and checks that every generation past
/// the seeds keeps the shape of `f_{m+1}`.
///
/// When `f_{m+1}` has the shape and a later generation does not, the result
/// is [`Error::Falsified`]. When it lacks the shape the report carries no claim.
pub fn shape_propagation(seeds: &[PolySeq], m: usize, k: usize, n_max: usize, shape: Shape) -> Result<PropagationReport> {
    if n_max <= m {
        return Err(Error::InvalidArgument(format!("n_max must exceed m = {m}")));
    }
    if let Shape::Convex(0) | Shape::Concave(0) = shape {
        return Err(Error::InvalidArgument("convexity order must be at least 1".into()));
    }
    let generations: Vec<Generation> = unroll(seeds, m, k, n_max)?
        .into_iter()
        .map(|p| analyze_generation(p, shape))
        .collect();
    let report = PropagationReport {
        m,
        k,
        shape,
        hypothesis_holds: generations[m].has_shape,
        generations,
    };
    if report.hypothesis_holds {
        if let Some(&n) = report.violations().first() {
            return Err(Error::Falsified(format!(
                "f_{} is {shape} but {} is not",
                m + 1,
                report.generations[n - 1].poly
            )));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::tpcheck;

    #[test]
    fn recurrence_examples() {
        let gens = unroll(&[PolySeq::from_ints(1, &[1])], 1, 1, 5).unwrap();
        assert_eq!(gens[4], PolySeq::from_ints(5, &[0, 0, 0, 0, 1]));
        let fib = unroll(&[PolySeq::from_ints(1, &[1]), PolySeq::from_ints(2, &[1])], 2, 0, 10).unwrap();
        let values: Vec<Rational> = fib.iter().map(|p| p.coeff(0)).collect();
        assert_eq!(values, rational::ints(&[1, 1, 2, 3, 5, 8, 13, 21, 34, 55]));
        let f3 = recurrence_step(&[PolySeq::from_ints(1, &[1]), PolySeq::from_ints(2, &[0, 1])], 2, 1).unwrap();
        assert_eq!(f3, PolySeq::from_ints(3, &[0, 1, 1]));
        assert!(matches!(
            recurrence_step(&[PolySeq::from_ints(1, &[1])], 2, 1),
            Err(Error::InsufficientHistory { needed: 2, found: 1 })
        ));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = PolySeq::from_ints(1, &[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(PolySeq::from_ints(1, &[0, 0]).is_zero());
    }

    #[test]
    fn band_kernel_shapes() {
        let k = build_band_kernel(2, 6).unwrap();
        let expected = Kernel::from_ints(&[
            [0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0],
            [1, 1, 0, 0, 0, 0],
            [0, 1, 1, 0, 0, 0],
            [0, 0, 1, 1, 0, 0],
            [0, 0, 0, 1, 1, 0],
        ])
        .unwrap();
        assert_eq!(k, expected);
        let small = build_band_kernel(1, 3).unwrap();
        assert_eq!(small, Kernel::from_ints(&[[0, 0, 0], [1, 0, 0], [0, 1, 0]]).unwrap());
        assert!(build_band_kernel(3, 3).is_err());
    }

    #[test]
    fn band_kernels_one_and_two_are_tp() {
        for m in 1..=2 {
            for size in m + 1..=6 {
                let k = build_band_kernel(m, size).unwrap();
                let rep = tpcheck::classify_full(&k);
                assert!(rep.is_tp_to(rep.r_max).unwrap(), "m={m} size={size}");
            }
        }
    }

    #[test]
    fn wider_bands_are_only_tp2() {
        for m in 3..=4 {
            let rep = tpcheck::classify_full(&build_band_kernel(m, m + 3).unwrap());
            assert!(rep.is_tp_to(2).unwrap());
            assert_eq!(rep.order_sign(3), Some(tpcheck::MinorSign::Mixed));
        }
    }

    #[test]
    fn kernel_matches_recurrence() {
        let seeds = [PolySeq::from_ints(1, &[1, 1]), PolySeq::from_ints(2, &[0, 2, 2])];
        for k in 0..3 {
            assert_eq!(unroll_via_kernel(&seeds, 2, k, 10).unwrap(), unroll(&seeds, 2, k, 10).unwrap());
        }
    }

    #[test]
    fn single_step_recurrence_keeps_unimodality() {
        let r = shape_propagation(&[PolySeq::from_ints(1, &[1, 2, 1])], 1, 1, 20, Shape::Unimodal).unwrap();
        assert!(r.hypothesis_holds);
        assert!(r.generations.iter().all(|g| g.has_shape));
    }

    #[test]
    fn two_step_example_stays_unimodal() {
        let seeds = [PolySeq::from_ints(1, &[1, 1]), PolySeq::from_ints(2, &[0, 2, 2])];
        let r = shape_propagation(&seeds, 2, 1, 12, Shape::Unimodal).unwrap();
        assert_eq!(r.generations[2].poly, PolySeq::from_ints(3, &[0, 1, 3, 2]));
        assert!(r.violations().is_empty());
    }

    #[test]
    fn two_step_shift_two_breaks_unimodality() {
        let seeds = [PolySeq::from_ints(1, &[2]), PolySeq::from_ints(2, &[3])];
        let err = shape_propagation(&seeds, 2, 2, 6, Shape::Unimodal).unwrap_err();
        assert!(matches!(err, Error::Falsified(_)));
        let gens = unroll(&seeds, 2, 2, 4).unwrap();
        assert_eq!(gens[3], PolySeq::from_ints(4, &[0, 0, 3, 0, 5]));
    }

    #[test]
    fn constant_seed_stays_unimodal() {
        let r = shape_propagation(&[PolySeq::from_ints(1, &[1])], 1, 0, 10, Shape::Unimodal).unwrap();
        assert!(r.generations.iter().all(|g| g.poly.coeffs() == [int(1)]));
    }

    #[test]
    fn demo_is_binomial() {
        let d = demo_seeds(3);
        assert_eq!(d[2], PolySeq::from_ints(3, &[1, 3, 3, 1]));
    }
}
