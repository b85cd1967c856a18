//! Kernels acting on sequences: variation diminishing checks, unimodality
//! preservation and reversal, sums and geometric series of kernels, iterated
//! differences and quotients, quotient transforms and higher-order convexity.
//!
//! Theorem conclusions are evaluated as checked claims: the ground truth is
//! computed directly and compared against what the relevant clause predicts.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::seqshape::{self, Interval, Seq};
use crate::tpcheck::{self, Kernel, MinorSign, SRReport};

pub use crate::tpcheck::{TransformVerdict, VerdictKind};

/// `(Ku)_n = sum_j K(n, j) u_j`.
pub fn apply(k: &Kernel, u: &[Rational]) -> Result<Seq> {
    if k.cols() != u.len() {
        return Err(Error::DimensionMismatch(format!(
            "kernel has {} columns, sequence has {} terms",
            k.cols(),
            u.len()
        )));
    }
    let out = (0..k.rows())
        .map(|i| {
            k.row(i)
                .iter()
                .zip(u)
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect();
    Seq::new(out)
}

/// Classification through order `r`, capped at the kernel's largest order;
/// higher orders read as vacuous.
pub fn classify_up_to(k: &Kernel, r: usize) -> Result<SRReport> {
    tpcheck::classify(k, r.clamp(1, k.rows().min(k.cols())))
}

/// Whether `S(Ku) <= S(u)` for an `SR_r` kernel and `S(u) <= r - 1`.
///
/// Unmet preconditions are reported as [`Error::HypothesisUnmet`].
pub fn vd_check(k: &Kernel, u: &[Rational], r: usize) -> Result<bool> {
    if r == 0 {
        return Err(Error::InvalidArgument("order r must be at least 1".into()));
    }
    let ku = apply(k, u)?;
    let rep = classify_up_to(k, r)?;
    if !rep.is_sr(r)? {
        return Err(Error::HypothesisUnmet(format!("kernel is not SR_{r}")));
    }
    let s_u = seqshape::sign_changes(u).count;
    if s_u + 1 > r {
        return Err(Error::HypothesisUnmet(format!("S(u) = {s_u} exceeds r - 1 = {}", r - 1)));
    }
    Ok(seqshape::sign_changes(&ku).count <= s_u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternRelation {
    Same,
    Reversed,
    Fewer,
}

/// Compares the sign pattern of `Ku` with that of `u`.
///
/// With `k = S(u)` and `S(Ku) = k`, the pattern is predicted to be kept when
/// `eps_k eps_{k+1} = +1` and flipped when it is `-1` (with `eps_0 = +1`);
/// a disagreement between prediction and outcome is [`Error::Falsified`].
/// An identically zero `Ku` from a nonzero `u` counts as fewer.
pub fn sign_pattern_relation(k: &Kernel, u: &[Rational]) -> Result<PatternRelation> {
    let ku = apply(k, u)?;
    let pu = seqshape::sign_changes(u);
    let pk = seqshape::sign_changes(&ku);
    let s = pu.count;
    let rep = classify_up_to(k, s + 1)?;
    if !rep.is_sr(s + 1)? {
        return Err(Error::HypothesisUnmet(format!("kernel is not SR_{}", s + 1)));
    }
    if pk.count > s {
        return Err(Error::Falsified(format!(
            "sign changes grew from {s} to {}",
            pk.count
        )));
    }
    if pk.count < s || (pk.signs.is_empty() && !pu.signs.is_empty()) {
        return Ok(PatternRelation::Fewer);
    }
    let (Some(first_u), Some(first_k)) = (pu.signs.first(), pk.signs.first()) else {
        return Ok(PatternRelation::Same);
    };
    let observed = if first_u == first_k {
        PatternRelation::Same
    } else {
        PatternRelation::Reversed
    };
    let eps_k = if s == 0 {
        Some(1)
    } else {
        rep.order_sign(s).and_then(MinorSign::as_i8)
    };
    let eps_next = rep.order_sign(s + 1).and_then(MinorSign::as_i8);
    if let (Some(a), Some(b)) = (eps_k, eps_next) {
        let predicted = if a * b == 1 {
            PatternRelation::Same
        } else {
            PatternRelation::Reversed
        };
        if predicted != observed {
            return Err(Error::Falsified(format!(
                "minor signs predict {predicted:?} pattern, observed {observed:?}"
            )));
        }
    }
    Ok(observed)
}

/// For a UP kernel and unimodal `u` with mode interval `[a, b]`, whether `Ku`
/// is unimodal with a mode interval `[c, d]` satisfying `a <= c` and `b <= d`.
pub fn mode_location_check(k: &Kernel, u: &[Rational]) -> Result<bool> {
    if !k.is_square() {
        return Err(Error::DimensionMismatch("mode location needs a square kernel".into()));
    }
    let verdict = tpcheck::up_ur_verdict(&classify_up_to(k, 3)?)?;
    if verdict.kind != VerdictKind::Up {
        return Err(Error::HypothesisUnmet(format!("kernel verdict is {}", verdict.kind)));
    }
    let pu = seqshape::modality(u);
    if pu.m != 1 {
        return Err(Error::HypothesisUnmet("input is not unimodal".into()));
    }
    let pv = seqshape::modality(&apply(k, u)?);
    if pv.m != 1 {
        return Ok(false);
    }
    let (ab, cd) = (pu.mode_intervals[0], pv.mode_intervals[0]);
    Ok(ab.start <= cd.start && ab.end <= cd.end)
}

/// Exponent sets for sums of kernel powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumMode {
    /// `K^m + K^{m+1} + ... + K^{m+n}`.
    Range { m: usize, n: usize },
    /// `K^{2m} + K^{2m+2} + ... + K^{2m+2n}`.
    Even { m: usize, n: usize },
    /// `K^{2m+1} + K^{2m+3} + ... + K^{2m+2n+1}`.
    Odd { m: usize, n: usize },
}

impl SumMode {
    fn exponents(self) -> Vec<usize> {
        match self {
            SumMode::Range { m, n } => (m..=m + n).collect(),
            SumMode::Even { m, n } => (0..=n).map(|i| 2 * m + 2 * i).collect(),
            SumMode::Odd { m, n } => (0..=n).map(|i| 2 * m + 2 * i + 1).collect(),
        }
    }
}

/// Applies the selected sum of powers of `K` to `u`.
pub fn sum_transform(k: &Kernel, mode: SumMode, u: &[Rational]) -> Result<Seq> {
    if !k.is_square() {
        return Err(Error::DimensionMismatch("sums of powers need a square kernel".into()));
    }
    if k.cols() != u.len() {
        return Err(Error::DimensionMismatch(format!(
            "kernel is {n}x{n}, sequence has {} terms",
            u.len(),
            n = k.rows()
        )));
    }
    let mut total = vec![Rational::zero(); u.len()];
    let mut power = u.to_vec();
    let mut e = 0;
    for target in mode.exponents() {
        while e < target {
            power = apply(k, &power)?.into_terms();
            e += 1;
        }
        for (t, p) in total.iter_mut().zip(&power) {
            *t += p;
        }
    }
    Seq::new(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeometricForm {
    /// `(I - K)^{-1} = I + K + K^2 + ...`
    InvIMinus,
    /// `(I + K)^{-1} = I - K + K^2 - ...`
    InvIPlus,
    /// `(I - K^2)^{-1} = I + K^2 + K^4 + ...`
    InvIMinusSquare,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    RowSum,
    ColumnSum,
}

/// A certified bound `||K|| < 1` in one of the two induced norms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormCertificate {
    pub kind: NormKind,
    pub norm: Rational,
}

impl NormCertificate {
    /// Vector norm matching the certified matrix norm (max for row sums, sum for column sums).
    pub fn vector_norm(&self, u: &[Rational]) -> Rational {
        match self.kind {
            NormKind::RowSum => u.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero),
            NormKind::ColumnSum => u.iter().map(|x| x.abs()).fold(Rational::zero(), |a, b| a + b),
        }
    }
}

pub fn norm_certificate(k: &Kernel) -> Result<NormCertificate> {
    let row = k.row_sum_norm();
    let col = k.col_sum_norm();
    let one = Rational::one();
    let cert = if row <= col {
        NormCertificate {
            kind: NormKind::RowSum,
            norm: row.clone(),
        }
    } else {
        NormCertificate {
            kind: NormKind::ColumnSum,
            norm: col.clone(),
        }
    };
    if cert.norm >= one {
        return Err(Error::NormCertificate {
            row_norm: rational::format_exact(&row),
            col_norm: rational::format_exact(&col),
        });
    }
    Ok(cert)
}

/// Exact value of the geometric series of `K` applied to `u`, obtained by
/// solving `(I - K) x = u`, `(I + K) x = u` or `(I - K^2) x = u`.
///
/// Refuses unless an exact row-sum or column-sum norm of `K` is below 1.
pub fn geometric_transform(k: &Kernel, form: GeometricForm, u: &[Rational]) -> Result<Seq> {
    if !k.is_square() || k.cols() != u.len() {
        return Err(Error::DimensionMismatch("geometric series need a square kernel matching u".into()));
    }
    norm_certificate(k)?;
    let n = k.rows();
    let id = Kernel::identity(n);
    let system = match form {
        GeometricForm::InvIMinus => id.add(&k.negated())?,
        GeometricForm::InvIPlus => id.add(k)?,
        GeometricForm::InvIMinusSquare => id.add(&k.mul(k)?.negated())?,
    };
    Seq::new(solve(&system, u)?)
}

/// First `terms` terms of the series for `form` applied to `u`.
pub fn geometric_partial_sum(k: &Kernel, form: GeometricForm, u: &[Rational], terms: usize) -> Result<Seq> {
    let step = match form {
        GeometricForm::InvIMinus => k.clone(),
        GeometricForm::InvIPlus => k.negated(),
        GeometricForm::InvIMinusSquare => k.mul(k)?,
    };
    let mut total = vec![Rational::zero(); u.len()];
    let mut term = u.to_vec();
    for i in 0..terms {
        if i > 0 {
            term = apply(&step, &term)?.into_terms();
        }
        for (t, x) in total.iter_mut().zip(&term) {
            *t += x;
        }
    }
    Seq::new(total)
}

/// Bound on the norm of the remainder after `terms` terms:
/// `q^{p t} / (1 - q^p) ||u||` with `p = 2` for the squared form.
pub fn geometric_tail_bound(cert: &NormCertificate, form: GeometricForm, u: &[Rational], terms: usize) -> Rational {
    let q = match form {
        GeometricForm::InvIMinusSquare => &cert.norm * &cert.norm,
        _ => cert.norm.clone(),
    };
    let mut qt = Rational::one();
    for _ in 0..terms {
        qt *= &q;
    }
    qt / (Rational::one() - q) * cert.vector_norm(u)
}

/// Exact Gauss-Jordan solve of `A x = b`.
pub fn solve(a: &Kernel, b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.rows();
    if !a.is_square() || b.len() != n {
        return Err(Error::DimensionMismatch("solve needs a square system".into()));
    }
    let mut m: Vec<Vec<Rational>> = a
        .to_rows()
        .into_iter()
        .zip(b)
        .map(|(mut row, x)| {
            row.push(x.clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::Singular)?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Shape of successive iterates `v_j = K^j u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationReport {
    pub verdict: TransformVerdict,
    pub iterates: Vec<Seq>,
    /// `u - Ku` is unimodal.
    pub difference_hypothesis: bool,
    /// Unimodality of `v_j - v_{j+1}` for `j = 0..=n`.
    pub differences_unimodal: Vec<bool>,
    /// Unimodality of `(-1)^j (v_j - v_{j+1})`.
    pub twisted_differences_unimodal: Vec<bool>,
    /// `K > 0` entrywise, `u >= 0`, `u != 0` and `u / Ku` unimodal.
    pub quotient_hypothesis: bool,
    /// Unimodality of `v_j / v_{j+1}`; empty when some iterate has a zero term.
    pub quotients_unimodal: Vec<bool>,
    pub twisted_quotients_unimodal: Vec<bool>,
    /// `h_j - lambda = K(v_{j-1} - lambda v_j) / v_{j+1}` held exactly at every probed level.
    pub quotient_identity_holds: bool,
    /// `S(h_j - lambda) <= S(h_{j-1} - lambda)` at every probed level.
    pub quotient_sign_changes_nonincreasing: bool,
    /// `sgn(h_j - lambda) = sgn(h_{j-1} - lambda)` term by term at every probed level.
    pub quotient_signs_pointwise_equal: bool,
}

impl IterationReport {
    /// Whether every claim whose hypothesis holds came out true.
    pub fn claims_hold(&self) -> bool {
        let all = |v: &[bool]| v.iter().all(|&b| b);
        let up = self.verdict.kind == VerdictKind::Up;
        let ur = self.verdict.kind == VerdictKind::Ur;
        let diff_ok = !self.difference_hypothesis
            || (!up || all(&self.differences_unimodal)) && (!ur || all(&self.twisted_differences_unimodal));
        let quot_ok = !self.quotient_hypothesis
            || (!up || all(&self.quotients_unimodal)) && (!ur || all(&self.twisted_quotients_unimodal));
        diff_ok && quot_ok
    }
}

fn twisted(j: usize, s: &[Rational]) -> Vec<Rational> {
    if j % 2 == 0 {
        s.to_vec()
    } else {
        s.iter().map(|x| -x).collect()
    }
}

fn is_unimodal(s: &[Rational]) -> bool {
    seqshape::modality(s).m == 1
}

fn quotient(num: &[Rational], den: &[Rational]) -> Option<Vec<Rational>> {
    num.iter()
        .zip(den)
        .map(|(a, b)| if b.is_zero() { None } else { Some(a / b) })
        .collect()
}

/// Computes `v_j = K^j u` for `j <= n + 1` and records the shape of
/// successive differences and quotients.
pub fn iterate_diff_quot(k: &Kernel, u: &[Rational], n: usize) -> Result<IterationReport> {
    if !k.is_square() {
        return Err(Error::DimensionMismatch("iteration needs a square kernel".into()));
    }
    let verdict = tpcheck::up_ur_verdict(&classify_up_to(k, 3)?)?;
    let mut iterates = vec![Seq::new(u.to_vec())?];
    for _ in 0..=n {
        let next = apply(k, iterates.last().expect("non-empty"))?;
        iterates.push(next);
    }
    let diffs: Vec<Vec<Rational>> = iterates
        .windows(2)
        .map(|w| w[0].iter().zip(w[1].iter()).map(|(a, b)| a - b).collect())
        .collect();
    let differences_unimodal = diffs.iter().map(|d| is_unimodal(d)).collect();
    let twisted_differences_unimodal = diffs.iter().enumerate().map(|(j, d)| is_unimodal(&twisted(j, d))).collect();

    let positive_kernel = (0..k.rows()).all(|i| k.row(i).iter().all(|x| x.is_positive()));
    let nonneg_u = u.iter().all(|x| !x.is_negative()) && u.iter().any(|x| !x.is_zero());
    let quots: Option<Vec<Vec<Rational>>> = iterates.windows(2).map(|w| quotient(&w[0], &w[1])).collect();
    let quotient_hypothesis = positive_kernel
        && nonneg_u
        && quots.as_ref().is_some_and(|q| is_unimodal(&q[0]));

    let (mut quotients_unimodal, mut twisted_quotients_unimodal) = (Vec::new(), Vec::new());
    let (mut identity, mut nonincreasing, mut pointwise) = (true, true, true);
    if let Some(q) = &quots {
        quotients_unimodal = q.iter().map(|h| is_unimodal(h)).collect();
        twisted_quotients_unimodal = q.iter().enumerate().map(|(j, h)| is_unimodal(&twisted(j, h))).collect();
        for j in 1..q.len() {
            let mut levels = seqshape::candidate_levels(&q[j]);
            levels.extend(seqshape::candidate_levels(&q[j - 1]));
            for lambda in &levels {
                let inner: Vec<Rational> = iterates[j - 1]
                    .iter()
                    .zip(iterates[j].iter())
                    .map(|(a, b)| a - lambda * b)
                    .collect();
                let lhs: Vec<Rational> = q[j].iter().map(|h| h - lambda).collect();
                let rhs = quotient(&apply(k, &inner)?, &iterates[j + 1]).expect("nonzero iterates");
                identity &= lhs == rhs;
                let prev: Vec<Rational> = q[j - 1].iter().map(|h| h - lambda).collect();
                nonincreasing &= seqshape::sign_changes(&lhs).count <= seqshape::sign_changes(&prev).count;
                pointwise &= lhs.iter().zip(&prev).all(|(a, b)| rational::sign(a) == rational::sign(b));
            }
        }
    }
    Ok(IterationReport {
        verdict,
        difference_hypothesis: is_unimodal(&diffs[0]),
        differences_unimodal,
        twisted_differences_unimodal,
        quotient_hypothesis,
        quotients_unimodal,
        twisted_quotients_unimodal,
        quotient_identity_holds: identity && quots.is_some(),
        quotient_sign_changes_nonincreasing: nonincreasing && quots.is_some(),
        quotient_signs_pointwise_equal: pointwise && quots.is_some(),
        iterates,
    })
}

/// Unimodality of `u + v` for unimodal `u`, `v` with mode intervals `[a, b]`, `[c, d]`.
///
/// When `a <= c <= b` or `c = b + 1` the sum must be unimodal, and a
/// counterexample is reported as [`Error::Falsified`]. Otherwise the actual
/// shape is returned without any claim.
pub fn closure_sum_check(u: &[Rational], v: &[Rational]) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch("sequences differ in length".into()));
    }
    let (pu, pv) = (seqshape::modality(u), seqshape::modality(v));
    if pu.m != 1 || pv.m != 1 {
        return Err(Error::HypothesisUnmet("both sequences must be unimodal".into()));
    }
    let (ab, cd) = (pu.mode_intervals[0], pv.mode_intervals[0]);
    let hypothesis = (ab.start <= cd.start && cd.start <= ab.end) || cd.start == ab.end + 1;
    let sum: Vec<Rational> = u.iter().zip(v).map(|(a, b)| a + b).collect();
    let unimodal = is_unimodal(&sum);
    if hypothesis && !unimodal {
        return Err(Error::Falsified(format!(
            "mode intervals {ab} and {cd} satisfy the hypothesis but the sum is not unimodal"
        )));
    }
    Ok(unimodal)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConvexityClass {
    Convex,
    Concave,
    /// `Δ^m u = 0`.
    Both,
    Neither,
}

impl ConvexityClass {
    /// Class of `-u`.
    pub fn flipped(self) -> Self {
        match self {
            ConvexityClass::Convex => ConvexityClass::Concave,
            ConvexityClass::Concave => ConvexityClass::Convex,
            c => c,
        }
    }

    pub fn is_convex(self) -> bool {
        matches!(self, ConvexityClass::Convex | ConvexityClass::Both)
    }

    pub fn is_concave(self) -> bool {
        matches!(self, ConvexityClass::Concave | ConvexityClass::Both)
    }
}

impl std::fmt::Display for ConvexityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ConvexityClass::Convex => "convex",
            ConvexityClass::Concave => "concave",
            ConvexityClass::Both => "convex and concave",
            ConvexityClass::Neither => "neither",
        };
        f.write_str(s)
    }
}

/// `m`-th forward difference.
pub fn forward_difference(u: &[Rational], m: usize) -> Vec<Rational> {
    let mut d = u.to_vec();
    for _ in 0..m {
        d = d.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    d
}

/// `m`-convex when every term of `Δ^m u` is nonnegative, `m`-concave when every term is nonpositive.
pub fn convexity_order(u: &[Rational], m: usize) -> Result<ConvexityClass> {
    if u.len() <= m {
        return Err(Error::InvalidArgument(format!(
            "{m}-convexity needs more than {m} terms, got {}",
            u.len()
        )));
    }
    let d = forward_difference(u, m);
    let convex = d.iter().all(|x| !x.is_negative());
    let concave = d.iter().all(|x| !x.is_positive());
    Ok(match (convex, concave) {
        (true, true) => ConvexityClass::Both,
        (true, false) => ConvexityClass::Convex,
        (false, true) => ConvexityClass::Concave,
        (false, false) => ConvexityClass::Neither,
    })
}

/// Result of checking a quotient theorem on concrete data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClaimOutcome {
    Confirmed,
    Violated(String),
    HypothesisUnmet(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientResult {
    /// `w = Ku / Kv`.
    pub w: Seq,
    /// Modality of `w`.
    pub p: usize,
    /// Modality of `u / v`.
    pub input_modality: usize,
    pub input_class: Option<ConvexityClass>,
    pub convexity_class: Option<ConvexityClass>,
    /// The kernel clause that applied, if any.
    pub clause: Option<String>,
    /// For convexity: whether the kernel maps `v` times polynomials of each
    /// degree below `m` to `Kv` times polynomials of the same degree.
    pub degree_certified: Option<bool>,
    pub outcome: ClaimOutcome,
}

struct QuotientInputs {
    ratio: Vec<Rational>,
    w: Seq,
    v_positive: bool,
}

fn quotient_inputs(k: &Kernel, u: &[Rational], v: &[Rational]) -> Result<QuotientInputs> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "u has {} terms, v has {}",
            u.len(),
            v.len()
        )));
    }
    if let Some(i) = v.iter().position(Zero::is_zero) {
        return Err(Error::InvalidArgument(format!("v has a zero entry at index {}", i + 1)));
    }
    let ku = apply(k, u)?;
    let kv = apply(k, v)?.into_terms();
    if let Some(i) = kv.iter().position(Zero::is_zero) {
        return Err(Error::ZeroDenominator { index: i + 1 });
    }
    let w = Seq::new(ku.iter().zip(&kv).map(|(a, b)| a / b).collect())?;
    let ratio = u.iter().zip(v).map(|(a, b)| a / b).collect();
    Ok(QuotientInputs {
        ratio,
        w,
        v_positive: v.iter().all(|x| x.is_positive()),
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Clause {
    Positive,
    Negative,
}

/// Which of `K`, `-K` is TP or TN through order `r`; TP clauses take precedence.
fn quotient_clause(rep: &SRReport, r: usize) -> Result<Option<(Clause, String)>> {
    let neg = rep.negated();
    Ok(if rep.is_tp_to(r)? {
        Some((Clause::Positive, format!("K is TP_{r}")))
    } else if neg.is_tp_to(r)? {
        Some((Clause::Positive, format!("-K is TP_{r}")))
    } else if rep.is_tn_to(r)? {
        Some((Clause::Negative, format!("K is TN_{r}")))
    } else if neg.is_tn_to(r)? {
        Some((Clause::Negative, format!("-K is TN_{r}")))
    } else {
        None
    })
}

/// `w = Ku / Kv` for an m-modal `u / v`, checked against the modality bound:
/// `w` is at most `m`-modal when `K` or `-K` is `TP_{2m+1}` and at most
/// `(m+1)`-modal when `K` or `-K` is `TN_{2m+1}`.
pub fn quotient_transform(k: &Kernel, u: &[Rational], v: &[Rational], m: usize) -> Result<QuotientResult> {
    if m == 0 {
        return Err(Error::InvalidArgument("modality order must be at least 1".into()));
    }
    let q = quotient_inputs(k, u, v)?;
    let input_modality = seqshape::modality(&q.ratio).m;
    let p = seqshape::modality(&q.w).m;
    let r = 2 * m + 1;
    let clause = quotient_clause(&classify_up_to(k, r)?, r)?;
    let outcome = if !q.v_positive {
        ClaimOutcome::HypothesisUnmet("v is not positive".into())
    } else if input_modality != m {
        ClaimOutcome::HypothesisUnmet(format!("u/v is {input_modality}-modal, not {m}-modal"))
    } else {
        match &clause {
            None => ClaimOutcome::HypothesisUnmet(format!("neither K nor -K is TP_{r} or TN_{r}")),
            Some((kind, text)) => {
                let bound = if *kind == Clause::Positive { m } else { m + 1 };
                if p <= bound {
                    ClaimOutcome::Confirmed
                } else {
                    ClaimOutcome::Violated(format!("{text} allows at most {bound} modes, w has {p}"))
                }
            }
        }
    };
    Ok(QuotientResult {
        w: q.w,
        p,
        input_modality,
        input_class: None,
        convexity_class: None,
        clause: clause.map(|(_, t)| t),
        degree_certified: None,
        outcome,
    })
}

/// Whether `y_1, ..., y_n` are the values of a polynomial of exact degree `d`.
fn exact_degree_on_grid(y: &[Rational], d: usize) -> bool {
    if y.len() <= d {
        return false;
    }
    let top = forward_difference(y, d);
    top.iter().all(|x| x == &top[0]) && !top[0].is_zero()
}

/// Checks that `n -> (K(v j^k))_n / (Kv)_n` is a polynomial of exact degree
/// `k` on the row grid `n = 1..R`, for every `k < m`.
pub fn certify_degree_preservation(k: &Kernel, v: &[Rational], m: usize) -> Result<bool> {
    let kv = apply(k, v)?.into_terms();
    if kv.iter().any(Zero::is_zero) {
        return Ok(false);
    }
    for deg in 0..m {
        let weighted: Vec<Rational> = v
            .iter()
            .enumerate()
            .map(|(j, x)| x * rational::int((j + 1) as i64).pow(deg as i32))
            .collect();
        let image = apply(k, &weighted)?;
        let ratio: Vec<Rational> = image.iter().zip(&kv).map(|(a, b)| a / b).collect();
        if !exact_degree_on_grid(&ratio, deg) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `w = Ku / Kv` for an m-convex or m-concave `u / v`, checked against the
/// convexity theorem: TP clauses at order `m + 1` keep the class, TN clauses flip it.
pub fn quotient_convexity(k: &Kernel, u: &[Rational], v: &[Rational], m: usize) -> Result<QuotientResult> {
    if m == 0 {
        return Err(Error::InvalidArgument("convexity order must be at least 1".into()));
    }
    let q = quotient_inputs(k, u, v)?;
    let input_class = convexity_order(&q.ratio, m)?;
    let class = convexity_order(&q.w, m)?;
    let r = m + 1;
    let clause = quotient_clause(&classify_up_to(k, r)?, r)?;
    let certified = certify_degree_preservation(k, v, m)?;
    let expected = clause.as_ref().map(|(kind, _)| match kind {
        Clause::Positive => input_class,
        Clause::Negative => input_class.flipped(),
    });
    let outcome = if !q.v_positive {
        ClaimOutcome::HypothesisUnmet("v is not positive".into())
    } else if !matches!(input_class, ConvexityClass::Convex | ConvexityClass::Concave | ConvexityClass::Both) {
        ClaimOutcome::HypothesisUnmet(format!("u/v is neither {m}-convex nor {m}-concave"))
    } else if clause.is_none() {
        ClaimOutcome::HypothesisUnmet(format!("neither K nor -K is TP_{r} or TN_{r}"))
    } else if !certified {
        ClaimOutcome::HypothesisUnmet("kernel does not map polynomials to polynomials of the same degree".into())
    } else {
        let want = expected.expect("clause present");
        let ok = (!want.is_convex() || class.is_convex()) && (!want.is_concave() || class.is_concave());
        if ok {
            ClaimOutcome::Confirmed
        } else {
            ClaimOutcome::Violated(format!("expected w to be {m}-{want}, found {class}"))
        }
    };
    Ok(QuotientResult {
        p: seqshape::modality(&q.w).m,
        input_modality: seqshape::modality(&q.ratio).m,
        w: q.w,
        input_class: Some(input_class),
        convexity_class: Some(class),
        clause: clause.map(|(_, t)| t),
        degree_certified: Some(certified),
        outcome,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Family {
    Unimodal,
    Modality(usize),
    Convexity(usize),
}

fn family_of(kind: VerdictKind) -> Result<(Family, bool)> {
    Ok(match kind {
        VerdictKind::Up => (Family::Unimodal, false),
        VerdictKind::Ur => (Family::Unimodal, true),
        VerdictKind::ModalityPreserver(m) => (Family::Modality(m), false),
        VerdictKind::ModalityReverser(m) => (Family::Modality(m), true),
        VerdictKind::ConvexityPreserver(m) => (Family::Convexity(m), false),
        VerdictKind::ConvexityReverser(m) => (Family::Convexity(m), true),
        other => {
            return Err(Error::InvalidArgument(format!(
                "cannot compose a kernel with verdict '{other}'"
            )))
        }
    })
}

fn normalize(f: Family) -> Family {
    match f {
        Family::Modality(1) => Family::Unimodal,
        f => f,
    }
}

/// Verdict for a composition of kernels: an even number of reversers
/// preserves, an odd number reverses. UP and UR count as 1-modality verdicts.
pub fn composition_verdict(verdicts: &[TransformVerdict]) -> Result<TransformVerdict> {
    let first = verdicts
        .first()
        .ok_or_else(|| Error::InvalidArgument("no verdicts to compose".into()))?;
    let (family, _) = family_of(first.kind)?;
    let mut plain_unimodal = true;
    let mut reversers = 0;
    for v in verdicts {
        let (f, rev) = family_of(v.kind)?;
        if normalize(f) != normalize(family) {
            return Err(Error::InvalidArgument(format!(
                "cannot compose verdicts of different kinds: {} and {}",
                first.kind, v.kind
            )));
        }
        plain_unimodal &= f == Family::Unimodal;
        reversers += usize::from(rev);
    }
    let reverse = reversers % 2 == 1;
    let kind = match (normalize(family), plain_unimodal, reverse) {
        (Family::Unimodal, true, false) => VerdictKind::Up,
        (Family::Unimodal, true, true) => VerdictKind::Ur,
        (Family::Unimodal, false, false) => VerdictKind::ModalityPreserver(1),
        (Family::Unimodal, false, true) => VerdictKind::ModalityReverser(1),
        (Family::Modality(m), _, false) => VerdictKind::ModalityPreserver(m),
        (Family::Modality(m), _, true) => VerdictKind::ModalityReverser(m),
        (Family::Convexity(m), _, false) => VerdictKind::ConvexityPreserver(m),
        (Family::Convexity(m), _, true) => VerdictKind::ConvexityReverser(m),
    };
    Ok(TransformVerdict::new(
        kind,
        format!("composition of {} kernels with {reversers} reversers", verdicts.len()),
        Vec::new(),
    ))
}

/// Mode interval of a unimodal sequence.
pub fn unimodal_mode(u: &[Rational]) -> Option<Interval> {
    let p = seqshape::modality(u);
    (p.m == 1).then(|| p.mode_intervals[0])
}
