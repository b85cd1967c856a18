//! Slow, independent reference implementations and seeded random generators
//! used to cross-check the production routines.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::seqshape::{self, Seq};
use crate::tpcheck::{Kernel, MinorSign, SRReport};

/// Determinant by cofactor expansion along the first row.
pub fn naive_det(k: &Kernel) -> Result<Rational> {
    if !k.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "determinant of a {}x{} kernel",
            k.rows(),
            k.cols()
        )));
    }
    Ok(cofactor(&k.to_rows()))
}

fn cofactor(m: &[Vec<Rational>]) -> Rational {
    match m.len() {
        0 => Rational::one(),
        1 => m[0][0].clone(),
        n => {
            let mut total = Rational::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<Rational>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * cofactor(&sub);
                if j % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
    }
}

/// Index subsets of `0..n` of size `k`, generated by bitmask.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect()
}

/// Minor-sign classification built on [`naive_det`] and bitmask subset enumeration.
pub fn naive_classify(k: &Kernel, r: usize) -> Result<SRReport> {
    let max = k.rows().min(k.cols());
    if r == 0 || r > max {
        return Err(Error::OrderOutOfRange { order: r, max });
    }
    let mut eps = Vec::with_capacity(r);
    for order in 1..=r {
        let (mut pos, mut neg) = (false, false);
        for rows in subsets(k.rows(), order) {
            for cols in subsets(k.cols(), order) {
                let sub = Kernel::new(k.submatrix(&rows, &cols))?;
                match rational::sign(&naive_det(&sub)?) {
                    1 => pos = true,
                    -1 => neg = true,
                    _ => {}
                }
            }
        }
        eps.push(match (pos, neg) {
            (true, true) => MinorSign::Mixed,
            (true, false) => MinorSign::Positive,
            (false, true) => MinorSign::Negative,
            (false, false) => MinorSign::ZeroOnly,
        });
    }
    Ok(SRReport::from_signs(k.rows(), k.cols(), eps, None))
}

/// Modality by exhaustive search over interleaved mode / valley interval systems.
///
/// Every ordered system of `2m - 1` disjoint intervals is tested directly
/// against the monotonicity and strict-peak conditions, with `u_0` and
/// `u_{N+1}` equal to `min u`. Constant sequences are 1-modal.
pub fn brute_modality(u: &[Rational]) -> Result<usize> {
    let n = u.len();
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    if n > 12 {
        return Err(Error::TooLarge(format!("brute-force modality needs N <= 12, got {n}")));
    }
    if seqshape::is_constant(u) {
        return Ok(1);
    }
    let inf = u.iter().min().expect("non-empty").clone();
    // padded, 0..=n+1 with sentinels
    let mut p = Vec::with_capacity(n + 2);
    p.push(inf.clone());
    p.extend_from_slice(u);
    p.push(inf);

    let found: Vec<usize> = (1..=n.div_ceil(2))
        .filter(|&m| {
            let mut ivs = Vec::with_capacity(2 * m - 1);
            systems(&p, n, m, 1, &mut ivs)
        })
        .collect();
    match found.as_slice() {
        [m] => Ok(*m),
        [] => Err(Error::Falsified("no interval system fits the sequence".into())),
        many => Err(Error::Falsified(format!("several modality orders fit: {many:?}"))),
    }
}

/// Places intervals one at a time (modes at even positions, valleys at odd),
/// each starting at or after `from`, and checks the full system at the end.
fn systems(p: &[Rational], n: usize, m: usize, from: usize, ivs: &mut Vec<(usize, usize)>) -> bool {
    if ivs.len() == 2 * m - 1 {
        return satisfies(p, n, m, ivs);
    }
    for lo in from..=n {
        for hi in lo..=n {
            ivs.push((lo, hi));
            if systems(p, n, m, hi + 1, ivs) {
                ivs.pop();
                return true;
            }
            ivs.pop();
        }
    }
    false
}

fn satisfies(p: &[Rational], n: usize, m: usize, ivs: &[(usize, usize)]) -> bool {
    let mode = |k: usize| ivs[2 * (k - 1)];
    let valley = |k: usize| -> (usize, usize) {
        if k == 0 {
            (0, 0)
        } else if k == m {
            (n + 1, n + 1)
        } else {
            ivs[2 * k - 1]
        }
    };
    for k in 1..=m {
        let (a_lo, a_hi) = mode(k);
        let (b_prev_lo, b_prev_hi) = valley(k - 1);
        let (b_lo, _) = valley(k);
        if !(b_prev_hi..a_lo).all(|j| p[j] <= p[j + 1]) {
            return false;
        }
        if !(a_lo..a_hi).all(|j| p[j] == p[j + 1]) {
            return false;
        }
        if !(b_prev_lo..b_prev_hi).all(|j| p[j] == p[j + 1]) {
            return false;
        }
        if !(a_hi..b_lo).all(|j| p[j] >= p[j + 1]) {
            return false;
        }
        if !(p[b_prev_lo] < p[a_lo] && p[a_lo] > p[b_lo]) {
            return false;
        }
    }
    true
}

/// `S+` by a dense sweep: every value, every value nudged up and down, every
/// midpoint, and levels beyond both ends.
pub fn brute_s_plus(u: &[Rational]) -> Result<usize> {
    if u.len() > 20 {
        return Err(Error::TooLarge(format!("brute-force S+ needs N <= 20, got {}", u.len())));
    }
    let mut values = u.to_vec();
    values.sort();
    values.dedup();
    let gap = values
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .unwrap_or_else(Rational::one);
    let eps = gap / rational::int(7);
    let mut levels = Vec::new();
    for v in &values {
        levels.push(v.clone());
        levels.push(v - &eps);
        levels.push(v + &eps);
    }
    for a in &values {
        for b in &values {
            levels.push((a + b) / rational::int(2));
        }
    }
    Ok(levels
        .iter()
        .map(|lambda| naive_sign_changes(u, lambda))
        .max()
        .unwrap_or(0))
}

fn naive_sign_changes(u: &[Rational], lambda: &Rational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for x in u {
        let s = rational::sign(&(x - lambda));
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Parameters for a reproducible randomized trial run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialConfig {
    pub seed: u64,
    pub n_trials: usize,
    /// Entries are drawn from `-value_range..=value_range` (or `0..=value_range`).
    pub value_range: i64,
    /// Inclusive bounds on sequence length or kernel size.
    pub dims: (usize, usize),
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            n_trials: 500,
            value_range: 5,
            dims: (3, 8),
        }
    }
}

impl TrialConfig {
    /// Independent stream for trial `t`; the same config always replays the same trials.
    pub fn rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }

    pub fn dim<R: Rng>(&self, rng: &mut R) -> usize {
        rng.random_range(self.dims.0..=self.dims.1)
    }
}

pub fn random_ints<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> Vec<Rational> {
    (0..n).map(|_| rational::int(rng.random_range(lo..=hi))).collect()
}

/// Random `n x n` totally nonnegative kernel: a product of elementary
/// bidiagonal factors `I + a E` with small nonnegative `a`, times a positive
/// diagonal.
pub fn random_tp_kernel<R: Rng>(rng: &mut R, n: usize, max_entry: i64) -> Kernel {
    let mut k = Kernel::from_fn(n, n, |i, j| {
        if i == j {
            rational::int(rng_diag(rng, max_entry))
        } else {
            Rational::zero()
        }
    });
    let factors = rng.random_range(n..=3 * n);
    for _ in 0..factors {
        if n < 2 {
            break;
        }
        let i = rng.random_range(1..n);
        let a = rational::int(rng.random_range(0..=max_entry));
        let lower = rng.random_bool(0.5);
        let e = Kernel::from_fn(n, n, |r, c| {
            if r == c {
                Rational::one()
            } else if (lower && r == i && c == i - 1) || (!lower && r == i - 1 && c == i) {
                a.clone()
            } else {
                Rational::zero()
            }
        });
        k = if rng.random_bool(0.5) {
            e.mul(&k).expect("square")
        } else {
            k.mul(&e).expect("square")
        };
    }
    k
}

fn rng_diag<R: Rng>(rng: &mut R, max_entry: i64) -> i64 {
    rng.random_range(1..=max_entry.max(1))
}

/// Scales each row to sum 1; rows summing to zero are left as is.
pub fn row_normalized(k: &Kernel) -> Kernel {
    let sums: Vec<Rational> = (0..k.rows())
        .map(|i| k.row(i).iter().fold(Rational::zero(), |a, b| a + b))
        .collect();
    Kernel::from_fn(k.rows(), k.cols(), |i, j| {
        if sums[i].is_zero() {
            k.get(i, j).clone()
        } else {
            k.get(i, j) / &sums[i]
        }
    })
}

/// Random unimodal sequence: a nondecreasing run followed by a nonincreasing run.
pub fn random_unimodal<R: Rng>(rng: &mut R, n: usize, max_step: i64) -> Vec<Rational> {
    let peak = rng.random_range(0..n);
    let mut out = vec![0i64; n];
    out[peak] = rng.random_range(0..=max_step * n as i64);
    for i in (0..peak).rev() {
        out[i] = out[i + 1] - rng.random_range(0..=max_step);
    }
    for i in peak + 1..n {
        out[i] = out[i - 1] - rng.random_range(0..=max_step);
    }
    rational::ints(&out)
}

/// Random nonconstant sequence of modality exactly `m`, or `None` after a bounded number of draws.
pub fn random_mmodal<R: Rng>(rng: &mut R, m: usize, n: usize, range: i64) -> Option<Seq> {
    for _ in 0..2000 {
        let u = random_ints(rng, n, -range, range);
        if !seqshape::is_constant(&u) && seqshape::modality(&u).m == m {
            return Seq::new(u).ok();
        }
    }
    None
}
