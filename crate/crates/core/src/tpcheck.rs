//! Exact minors and sign-regularity classification of finite kernels.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A finite rectangular matrix of exact rationals acting on sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Kernel {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(Error::EmptyKernel);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::RaggedRows {
                    row: i + 1,
                    expected: cols,
                    found: row.len(),
                });
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(rows.iter().map(|r| rational::ints(r.as_ref())).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        assert!(rows > 0 && cols > 0, "kernel dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at 0-based position `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        self.map(|x| x * c)
    }

    pub fn transposed(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Columns in reverse order.
    pub fn reversed_columns(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, self.cols - 1 - j).clone())
    }

    pub fn add(&self, other: &Kernel) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn mul(&self, other: &Kernel) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, t| acc + self.get(i, t) * other.get(t, j))
        }))
    }

    /// `K^p` for a square kernel; `K^0 = I`.
    pub fn pow(&self, p: usize) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square kernel".into()));
        }
        let mut out = Self::identity(self.rows);
        for _ in 0..p {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Submatrix on 0-based row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|&i| cols.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn row_sum_norm(&self) -> Rational {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).fold(Rational::zero(), |a, b| a + b))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Maximum absolute column sum.
    pub fn col_sum_norm(&self) -> Rational {
        self.transposed().row_sum_norm()
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(rational::format_exact).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Exact determinant of a square rational matrix.
///
/// Each row is scaled by the lcm of its denominators, the integer matrix is
/// reduced with Bareiss' fraction-free elimination, and the scale is divided
/// back out.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in m {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scale *= l;
    }
    Rational::new(bareiss(a), scale)
}

fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// One minor: 1-based strictly increasing row and column index sets and its value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: Rational,
}

impl fmt::Display for Minor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rows {:?} cols {:?} = {}",
            self.rows,
            self.cols,
            rational::format_exact(&self.value)
        )
    }
}

/// All order-`k` minors in lexicographic order of (rows, cols).
pub fn minors(k_mat: &Kernel, k: usize) -> Result<impl Iterator<Item = Minor> + '_> {
    let max = k_mat.rows.min(k_mat.cols);
    if k == 0 || k > max {
        return Err(Error::OrderOutOfRange { order: k, max });
    }
    let col_sets: Vec<Vec<usize>> = (0..k_mat.cols).combinations(k).collect();
    Ok((0..k_mat.rows).combinations(k).flat_map(move |rows| {
        col_sets
            .clone()
            .into_iter()
            .map(move |cols| minor_of(k_mat, &rows, &cols))
    }))
}

fn minor_of(k_mat: &Kernel, rows: &[usize], cols: &[usize]) -> Minor {
    let sub = k_mat.submatrix(rows, cols);
    // banded kernels produce many submatrices with a zero row or column
    let has_zero_line = sub.iter().any(|r| r.iter().all(Zero::is_zero))
        || (0..cols.len()).any(|j| sub.iter().all(|r| r[j].is_zero()));
    let value = if has_zero_line { Rational::zero() } else { det(&sub) };
    Minor {
        rows: rows.iter().map(|i| i + 1).collect(),
        cols: cols.iter().map(|j| j + 1).collect(),
        value,
    }
}

/// Common sign of the minors of one order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MinorSign {
    /// All minors nonnegative, at least one positive.
    Positive,
    /// All minors nonpositive, at least one negative.
    Negative,
    /// Every minor is zero.
    ZeroOnly,
    /// Minors of both strict signs occur.
    Mixed,
}

impl MinorSign {
    /// Sign of the same order for the negated kernel: order-`k` minors scale by `(-1)^k`.
    pub fn under_negation(self, k: usize) -> MinorSign {
        match (self, k % 2) {
            (MinorSign::Positive, 1) => MinorSign::Negative,
            (MinorSign::Negative, 1) => MinorSign::Positive,
            (s, _) => s,
        }
    }

    pub fn flipped(self) -> MinorSign {
        self.under_negation(1)
    }

    /// `+1`, `-1`, or `None` for zero-only and mixed orders.
    pub fn as_i8(self) -> Option<i8> {
        match self {
            MinorSign::Positive => Some(1),
            MinorSign::Negative => Some(-1),
            _ => None,
        }
    }

    pub fn is_definite(self) -> bool {
        self != MinorSign::Mixed
    }

    /// Equality where a zero-only order matches anything definite.
    pub fn matches(self, other: MinorSign) -> bool {
        if self == MinorSign::Mixed || other == MinorSign::Mixed {
            return false;
        }
        self == MinorSign::ZeroOnly || other == MinorSign::ZeroOnly || self == other
    }
}

impl fmt::Display for MinorSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MinorSign::Positive => "+1",
            MinorSign::Negative => "-1",
            MinorSign::ZeroOnly => "0",
            MinorSign::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

/// A positive and a negative minor of the same order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedWitness {
    pub order: usize,
    pub positive: Minor,
    pub negative: Minor,
}

/// Per-order minor signs of a kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SRReport {
    pub rows: usize,
    pub cols: usize,
    pub r_max: usize,
    pub eps: Vec<MinorSign>,
    pub is_tp: Vec<bool>,
    pub is_tn: Vec<bool>,
    pub witness: Option<MixedWitness>,
}

impl SRReport {
    pub fn from_signs(rows: usize, cols: usize, eps: Vec<MinorSign>, witness: Option<MixedWitness>) -> Self {
        let mut is_tp = Vec::with_capacity(eps.len());
        let mut is_tn = Vec::with_capacity(eps.len());
        let (mut tp, mut tn) = (true, true);
        for &e in &eps {
            tp &= matches!(e, MinorSign::Positive | MinorSign::ZeroOnly);
            tn &= matches!(e, MinorSign::Negative | MinorSign::ZeroOnly);
            is_tp.push(tp);
            is_tn.push(tn);
        }
        Self {
            rows,
            cols,
            r_max: eps.len(),
            eps,
            is_tp,
            is_tn,
            witness,
        }
    }

    /// Sign of order `k`. Orders above `min(rows, cols)` have no minors and
    /// read as zero-only; orders that exist but were not checked give `None`.
    pub fn order_sign(&self, k: usize) -> Option<MinorSign> {
        if k >= 1 && k <= self.r_max {
            Some(self.eps[k - 1])
        } else if k > self.rows.min(self.cols) {
            Some(MinorSign::ZeroOnly)
        } else {
            None
        }
    }

    fn signs_to(&self, r: usize) -> Result<Vec<MinorSign>> {
        (1..=r)
            .map(|k| {
                self.order_sign(k).ok_or(Error::InsufficientOrder {
                    needed: r,
                    covered: self.r_max,
                })
            })
            .collect()
    }

    pub fn is_sr(&self, r: usize) -> Result<bool> {
        Ok(self.signs_to(r)?.iter().all(|s| s.is_definite()))
    }

    pub fn is_tp_to(&self, r: usize) -> Result<bool> {
        Ok(self
            .signs_to(r)?
            .iter()
            .all(|s| matches!(s, MinorSign::Positive | MinorSign::ZeroOnly)))
    }

    pub fn is_tn_to(&self, r: usize) -> Result<bool> {
        Ok(self
            .signs_to(r)?
            .iter()
            .all(|s| matches!(s, MinorSign::Negative | MinorSign::ZeroOnly)))
    }

    /// Report for `-K`, derived without recomputing minors.
    pub fn negated(&self) -> SRReport {
        let eps = self
            .eps
            .iter()
            .enumerate()
            .map(|(i, s)| s.under_negation(i + 1))
            .collect();
        SRReport::from_signs(self.rows, self.cols, eps, self.witness.clone())
    }

    pub fn signature(&self) -> String {
        let parts: Vec<String> = self.eps.iter().map(ToString::to_string).collect();
        format!("({})", parts.join(", "))
    }
}

/// Classifies `K` by the signs of all minors of orders `1..=r`.
pub fn classify(k_mat: &Kernel, r: usize) -> Result<SRReport> {
    let max = k_mat.rows.min(k_mat.cols);
    if r == 0 || r > max {
        return Err(Error::OrderOutOfRange { order: r, max });
    }
    let mut eps = Vec::with_capacity(r);
    let mut witness = None;
    for k in 1..=r {
        let mut pos: Option<Minor> = None;
        let mut neg: Option<Minor> = None;
        for minor in minors(k_mat, k)? {
            match rational::sign(&minor.value) {
                1 if pos.is_none() => pos = Some(minor),
                -1 if neg.is_none() => neg = Some(minor),
                _ => {}
            }
            if pos.is_some() && neg.is_some() {
                break;
            }
        }
        let sign = match (pos, neg) {
            (Some(p), Some(n)) => {
                if witness.is_none() {
                    witness = Some(MixedWitness {
                        order: k,
                        positive: p,
                        negative: n,
                    });
                }
                MinorSign::Mixed
            }
            (Some(_), None) => MinorSign::Positive,
            (None, Some(_)) => MinorSign::Negative,
            (None, None) => MinorSign::ZeroOnly,
        };
        eps.push(sign);
    }
    Ok(SRReport::from_signs(k_mat.rows, k_mat.cols, eps, witness))
}

/// Classifies up to the largest order the kernel has.
pub fn classify_full(k_mat: &Kernel) -> SRReport {
    classify(k_mat, k_mat.rows.min(k_mat.cols)).expect("full order is in range")
}

/// `n x n` lower-triangular Toeplitz kernel with entry `a_{i-j}`, zero for `i < j`.
pub fn toeplitz_kernel(a: &[Rational], n: usize) -> Kernel {
    Kernel::from_fn(n, n, |i, j| {
        if i >= j && i - j < a.len() {
            a[i - j].clone()
        } else {
            Rational::zero()
        }
    })
}

/// What a verdict asserts about a kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    /// Unimodality preserving.
    Up,
    /// Unimodality reversing.
    Ur,
    ModalityPreserver(usize),
    ModalityReverser(usize),
    ConvexityPreserver(usize),
    ConvexityReverser(usize),
    NotSignRegular,
    None,
}

impl VerdictKind {
    pub fn is_reverser(self) -> bool {
        matches!(
            self,
            VerdictKind::Ur | VerdictKind::ModalityReverser(_) | VerdictKind::ConvexityReverser(_)
        )
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictKind::Up => write!(f, "UP"),
            VerdictKind::Ur => write!(f, "UR"),
            VerdictKind::ModalityPreserver(m) => write!(f, "{m}-modality preserver"),
            VerdictKind::ModalityReverser(m) => write!(f, "{m}-modality reverser"),
            VerdictKind::ConvexityPreserver(m) => write!(f, "{m}-convexity preserver"),
            VerdictKind::ConvexityReverser(m) => write!(f, "{m}-convexity reverser"),
            VerdictKind::NotSignRegular => write!(f, "not sign-regular"),
            VerdictKind::None => write!(f, "none"),
        }
    }
}

/// A classification of a kernel's shape behaviour with the clause that fired.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformVerdict {
    pub kind: VerdictKind,
    pub clause: String,
    /// Minor signs the clause was decided from.
    pub evidence: Vec<MinorSign>,
}

impl TransformVerdict {
    pub fn new(kind: VerdictKind, clause: impl Into<String>, evidence: Vec<MinorSign>) -> Self {
        Self {
            kind,
            clause: clause.into(),
            evidence,
        }
    }
}

/// Unimodality preserving / reversing verdict from the first three minor signs.
///
/// UP iff `eps1 = +1` and `eps2 = eps3`; UR iff `eps1 = -1` and `eps2 = -eps3`.
/// Zero-only orders 2 and 3 match either sign; order 1 must be strict.
pub fn up_ur_verdict(report: &SRReport) -> Result<TransformVerdict> {
    let signs = report.signs_to(3)?;
    if !signs.iter().all(|s| s.is_definite()) {
        return Ok(TransformVerdict::new(
            VerdictKind::NotSignRegular,
            "kernel is not SR_3",
            signs,
        ));
    }
    let (e1, e2, e3) = (signs[0], signs[1], signs[2]);
    let verdict = match e1 {
        MinorSign::Positive if e2.matches(e3) => {
            TransformVerdict::new(VerdictKind::Up, "eps1 = +1 and eps2 = eps3", signs)
        }
        MinorSign::Negative if e2.matches(e3.flipped()) => {
            TransformVerdict::new(VerdictKind::Ur, "eps1 = -1 and eps2 = -eps3", signs)
        }
        _ => TransformVerdict::new(
            VerdictKind::None,
            "neither eps1 = +1, eps2 = eps3 nor eps1 = -1, eps2 = -eps3",
            signs,
        ),
    };
    Ok(verdict)
}

#[derive(Clone, Copy)]
enum Family {
    Modality,
    Convexity,
}

/// m-modality preserver / reverser verdict, decided at order `2m + 1`.
pub fn modality_preserver_verdict(report: &SRReport, m: usize) -> Result<TransformVerdict> {
    family_verdict(report, m, Family::Modality)
}

/// m-convexity preserver / reverser verdict, decided at order `m + 1`.
pub fn convexity_preserver_verdict(report: &SRReport, m: usize) -> Result<TransformVerdict> {
    family_verdict(report, m, Family::Convexity)
}

fn family_verdict(report: &SRReport, m: usize, family: Family) -> Result<TransformVerdict> {
    if m < 1 {
        return Err(Error::InvalidArgument("order m must be at least 1".into()));
    }
    let r = match family {
        Family::Modality => 2 * m + 1,
        Family::Convexity => m + 1,
    };
    let signs = report.signs_to(r)?;
    let (preserver, reverser) = match family {
        Family::Modality => (VerdictKind::ModalityPreserver(m), VerdictKind::ModalityReverser(m)),
        Family::Convexity => (VerdictKind::ConvexityPreserver(m), VerdictKind::ConvexityReverser(m)),
    };
    let negated = report.negated();
    let tp = report.is_tp_to(r)?;
    let tn = report.is_tn_to(r)?;
    let neg_tp = negated.is_tp_to(r)?;
    let neg_tn = negated.is_tn_to(r)?;
    let verdict = if tp {
        TransformVerdict::new(preserver, format!("K is TP_{r}"), signs)
    } else if neg_tn {
        TransformVerdict::new(preserver, format!("-K is TN_{r}"), signs)
    } else if neg_tp {
        TransformVerdict::new(reverser, format!("-K is TP_{r}"), signs)
    } else if tn {
        TransformVerdict::new(reverser, format!("K is TN_{r}"), signs)
    } else if !signs.iter().all(|s| s.is_definite()) {
        TransformVerdict::new(VerdictKind::NotSignRegular, format!("kernel is not SR_{r}"), signs)
    } else {
        TransformVerdict::new(
            VerdictKind::None,
            format!("neither K nor -K is TP_{r} or TN_{r}"),
            signs,
        )
    };
    Ok(verdict)
}
