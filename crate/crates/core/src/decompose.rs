//! Unimodal partitions and decompositions of m-modal sequences, mode
//! alignment, concatenation and the modality of `-u`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::seqshape::{self, Seq};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitKind {
    /// Disjoint consecutive parts.
    Partition,
    /// Adjacent parts share their boundary term.
    Decomposition,
}

/// Consecutive unimodal pieces of a sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub parts: Vec<Seq>,
    pub kind: SplitKind,
    /// 1-based indices of terms that appear in two adjacent parts.
    pub shared_boundaries: Vec<usize>,
}

impl Decomposition {
    /// Parts joined back together, dropping shared terms once.
    pub fn reassemble(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for (i, p) in self.parts.iter().enumerate() {
            let skip = usize::from(i > 0 && self.kind == SplitKind::Decomposition);
            out.extend(p.terms().iter().skip(skip).cloned());
        }
        out
    }
}

/// Splits an m-modal sequence into `m` unimodal pieces, cutting at the
/// first index of each valley interval.
pub fn decompose(u: &[Rational], m: usize, kind: SplitKind) -> Result<Decomposition> {
    if u.is_empty() {
        return Err(Error::EmptySequence);
    }
    let profile = seqshape::modality(u);
    if profile.m != m {
        return Err(Error::ModalityMismatch {
            expected: m,
            found: profile.m,
        });
    }
    let cuts: Vec<usize> = profile.valley_intervals.iter().map(|iv| iv.start).collect();
    let n = u.len();
    let mut parts = Vec::with_capacity(m);
    let mut start = 1;
    for (j, &cut) in cuts.iter().chain(std::iter::once(&n)).enumerate() {
        let from = match kind {
            SplitKind::Decomposition if j > 0 => start - 1,
            _ => start,
        };
        parts.push(Seq::new(u[from - 1..cut].to_vec())?);
        start = cut + 1;
    }
    let shared_boundaries = match kind {
        SplitKind::Decomposition => cuts,
        SplitKind::Partition => Vec::new(),
    };
    Ok(Decomposition {
        parts,
        kind,
        shared_boundaries,
    })
}

/// Pieces shifted so that every piece peaks at the same value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignedDecomposition {
    pub parts: Vec<Seq>,
    /// Amount subtracted from each piece: its maximum minus the smallest maximum.
    pub shifts: Vec<Rational>,
    /// The smallest piece maximum, shared by all shifted pieces.
    pub common_mode: Rational,
}

impl AlignedDecomposition {
    /// All shifted pieces concatenated, shared terms kept twice.
    pub fn flattened(&self) -> Vec<Rational> {
        self.parts.iter().flat_map(|p| p.terms().iter().cloned()).collect()
    }
}

pub fn mode_align(d: &Decomposition) -> AlignedDecomposition {
    let maxima: Vec<Rational> = d
        .parts
        .iter()
        .map(|p| p.iter().max().expect("parts are non-empty").clone())
        .collect();
    let common_mode = maxima.iter().min().expect("at least one part").clone();
    let shifts: Vec<Rational> = maxima.iter().map(|d_k| d_k - &common_mode).collect();
    let parts = d
        .parts
        .iter()
        .zip(&shifts)
        .map(|(p, s)| p.shifted(s))
        .collect();
    AlignedDecomposition {
        parts,
        shifts,
        common_mode,
    }
}

/// Sign changes per aligned piece at the level halfway between the common
/// mode and the next largest value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignCells {
    pub level: Rational,
    pub per_part: Vec<usize>,
    pub total: usize,
}

impl SignCells {
    /// Whether the per-piece counts fit the total: all pieces 2 for `2m`,
    /// one outer piece 1 for `2m - 1`, both outer pieces 1 for `2m - 2`.
    pub fn consistent(&self) -> bool {
        let m = self.per_part.len();
        let inner_ok = self.per_part.iter().skip(1).take(m.saturating_sub(2)).all(|&c| c == 2);
        let (first, last) = (self.per_part[0], self.per_part[m - 1]);
        if m == 1 {
            return self.total == first && (1..=2).contains(&first);
        }
        let sum: usize = self.per_part.iter().sum();
        sum == self.total
            && inner_ok
            && match self.total {
                t if t == 2 * m => first == 2 && last == 2,
                t if t + 1 == 2 * m => (first, last) == (1, 2) || (first, last) == (2, 1),
                t if t + 2 == 2 * m => first == 1 && last == 1,
                _ => false,
            }
    }
}

pub fn sign_cells(aligned: &AlignedDecomposition) -> Option<SignCells> {
    let level = seqshape::alignment_level(&aligned.flattened())?;
    let per_part = aligned
        .parts
        .iter()
        .map(|p| seqshape::shifted_sign_changes(p, &level).count)
        .collect();
    let total = seqshape::shifted_sign_changes(&aligned.flattened(), &level).count;
    Some(SignCells {
        level,
        per_part,
        total,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConcatOutcome {
    Unimodal,
    Bimodal,
    Invalid(String),
}

/// Shape of `u` followed by `v` when the last term of `u` equals the first of `v`.
///
/// The join is bimodal exactly when `u` finishes on a strict descent and `v`
/// starts with a strict ascent; in every other case the join is unimodal.
pub fn concat_analyze(u: &[Rational], v: &[Rational]) -> ConcatOutcome {
    if u.is_empty() || v.is_empty() {
        return ConcatOutcome::Invalid("empty sequence".into());
    }
    if u.last() != v.first() {
        return ConcatOutcome::Invalid("last term of u differs from first term of v".into());
    }
    for (name, s) in [("u", u), ("v", v)] {
        if seqshape::is_constant(s) {
            return ConcatOutcome::Invalid(format!("{name} is constant"));
        }
        if seqshape::modality(s).m != 1 {
            return ConcatOutcome::Invalid(format!("{name} is not unimodal"));
        }
    }
    let u_falls = last_step(u) == Some(std::cmp::Ordering::Greater);
    let v_rises = first_step(v) == Some(std::cmp::Ordering::Less);
    if u_falls && v_rises {
        ConcatOutcome::Bimodal
    } else {
        ConcatOutcome::Unimodal
    }
}

/// Direction of the last strict step, comparing earlier term to later term.
fn last_step(s: &[Rational]) -> Option<std::cmp::Ordering> {
    s.windows(2).rev().map(|w| w[0].cmp(&w[1])).find(|o| o.is_ne())
}

fn first_step(s: &[Rational]) -> Option<std::cmp::Ordering> {
    s.windows(2).map(|w| w[0].cmp(&w[1])).find(|o| o.is_ne())
}

/// Modality of `-u` predicted from the aligned decomposition of `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegationReport {
    pub m: usize,
    pub aligned_s_plus: usize,
    pub predicted: usize,
    pub observed: usize,
}

/// Predicts the modality of `-u` from `S+` of the aligned decomposition:
/// `2m` gives `m + 1`, `2m - 1` gives `m`, `2m - 2` gives `m - 1`. The
/// prediction is checked against a direct computation.
pub fn negate_modality(u: &[Rational]) -> Result<NegationReport> {
    if u.is_empty() {
        return Err(Error::EmptySequence);
    }
    if seqshape::is_constant(u) {
        return Err(Error::InvalidArgument("sequence is constant".into()));
    }
    let m = seqshape::modality(u).m;
    let aligned = mode_align(&decompose(u, m, SplitKind::Decomposition)?);
    let aligned_s_plus = seqshape::s_plus(&aligned.flattened()).value;
    let predicted = match aligned_s_plus {
        s if s == 2 * m => m + 1,
        s if s + 1 == 2 * m => m,
        s if s + 2 == 2 * m => m - 1,
        s => {
            return Err(Error::Falsified(format!(
                "aligned decomposition has S+ = {s}, outside [{}, {}]",
                2 * m - 2,
                2 * m
            )))
        }
    };
    let neg: Vec<Rational> = u.iter().map(|x| -x).collect();
    let observed = seqshape::modality(&neg).m;
    if predicted != observed {
        return Err(Error::Falsified(format!(
            "predicted -u to be {predicted}-modal, found {observed}-modal"
        )));
    }
    Ok(NegationReport {
        m,
        aligned_s_plus,
        predicted,
        observed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ints};

    fn parts(d: &Decomposition) -> Vec<Vec<Rational>> {
        d.parts.iter().map(|p| p.terms().to_vec()).collect()
    }

    #[test]
    fn worked_example() {
        let u = ints(&[1, 5, 3, 4, 2]);
        let p = decompose(&u, 2, SplitKind::Partition).unwrap();
        assert_eq!(parts(&p), vec![ints(&[1, 5, 3]), ints(&[4, 2])]);
        assert_eq!(p.reassemble(), u);
        let d = decompose(&u, 2, SplitKind::Decomposition).unwrap();
        assert_eq!(parts(&d), vec![ints(&[1, 5, 3]), ints(&[3, 4, 2])]);
        assert_eq!(d.shared_boundaries, vec![3]);
        assert_eq!(d.reassemble(), u);
        let a = mode_align(&d);
        assert_eq!(a.shifts, vec![int(1), int(0)]);
        assert_eq!(a.common_mode, int(4));
    }

    #[test]
    fn mismatched_order_rejected() {
        assert_eq!(
            decompose(&ints(&[1, 5, 3, 4, 2]), 1, SplitKind::Partition),
            Err(Error::ModalityMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn unimodal_is_one_part() {
        let u = ints(&[0, 3, 3, 1]);
        for kind in [SplitKind::Partition, SplitKind::Decomposition] {
            let d = decompose(&u, 1, kind).unwrap();
            assert_eq!(parts(&d), vec![u.clone()]);
            assert_eq!(mode_align(&d).shifts, vec![int(0)]);
        }
    }

    #[test]
    fn equal_maxima_need_no_shift() {
        let d = Decomposition {
            parts: vec![Seq::from_ints(&[2, 2]), Seq::from_ints(&[2, 2])],
            kind: SplitKind::Decomposition,
            shared_boundaries: vec![2],
        };
        assert_eq!(mode_align(&d).shifts, vec![int(0), int(0)]);
    }

    #[test]
    fn concatenation() {
        assert_eq!(concat_analyze(&ints(&[3, 2, 1]), &ints(&[1, 0, -1])), ConcatOutcome::Unimodal);
        assert_eq!(concat_analyze(&ints(&[1, 5, 3]), &ints(&[3, 4, 2])), ConcatOutcome::Bimodal);
        assert!(matches!(concat_analyze(&ints(&[1, 2]), &ints(&[3, 4])), ConcatOutcome::Invalid(_)));
        assert!(matches!(concat_analyze(&ints(&[2, 2]), &ints(&[2, 4])), ConcatOutcome::Invalid(_)));
        // a nonincreasing left piece can still produce two modes
        assert_eq!(concat_analyze(&ints(&[3, 2, 1]), &ints(&[1, 2, 0])), ConcatOutcome::Bimodal);
        assert_eq!(seqshape::modality(&ints(&[3, 2, 1, 2, 0])).m, 2);
    }

    #[test]
    fn negation_examples() {
        let r = negate_modality(&ints(&[1, 5, 3, 4, 2])).unwrap();
        assert_eq!(r.aligned_s_plus, 4);
        assert_eq!(r.observed, 3);
        assert_eq!(negate_modality(&ints(&[2, 1, 2])).unwrap().observed, 1);
        assert_eq!(negate_modality(&ints(&[1, 3, 2, 3])).unwrap().observed, 2);
        assert_eq!(negate_modality(&ints(&[0, 2, 0])).unwrap().predicted, 2);
        assert!(negate_modality(&ints(&[4, 4])).is_err());
    }

    #[test]
    fn sign_cells_example() {
        let d = decompose(&ints(&[1, 5, 3, 4, 2]), 2, SplitKind::Decomposition).unwrap();
        let cells = sign_cells(&mode_align(&d)).unwrap();
        assert_eq!(cells.per_part, vec![2, 2]);
        assert_eq!(cells.total, 4);
        assert!(cells.consistent());
    }
}
