//! Sign changes, shift-maximal sign changes, regularity and m-modality of
//! finite exact-rational sequences.
//!
//! Indices exposed in public results (mode and valley intervals, the
//! regularity index) are 1-based, matching the usual mathematical
//! convention for sequences `u_1, ..., u_N`.

use std::fmt;
use std::ops::Deref;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A finite, non-empty sequence of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seq {
    terms: Vec<Rational>,
    label: Option<String>,
}

impl Seq {
    pub fn new(terms: Vec<Rational>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self { terms, label: None })
    }

    /// Convenience constructor for integer data. Panics on an empty slice.
    pub fn from_ints(values: &[i64]) -> Self {
        Self::new(rational::ints(values)).expect("non-empty integer sequence")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn terms(&self) -> &[Rational] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Rational> {
        self.terms
    }

    pub fn is_constant(&self) -> bool {
        is_constant(&self.terms)
    }

    /// Term-wise additive inverse.
    pub fn negated(&self) -> Seq {
        Seq {
            terms: self.terms.iter().map(|x| -x).collect(),
            label: self.label.clone(),
        }
    }

    /// `u - lambda`, term by term.
    pub fn shifted(&self, lambda: &Rational) -> Seq {
        Seq {
            terms: self.terms.iter().map(|x| x - lambda).collect(),
            label: self.label.clone(),
        }
    }
}

impl Deref for Seq {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.terms
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", rational::format_exact(t))?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Signs of the nonzero terms of a sequence, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPattern {
    pub signs: Vec<Sign>,
    pub count: usize,
}

impl SignPattern {
    /// Runs of equal signs collapsed to a single sign, e.g. `++--+` becomes `+-+`.
    pub fn compressed(&self) -> Vec<Sign> {
        let mut out: Vec<Sign> = Vec::with_capacity(self.count + 1);
        for &s in &self.signs {
            if out.last() != Some(&s) {
                out.push(s);
            }
        }
        out
    }

    pub fn plus_runs(&self) -> usize {
        self.compressed().iter().filter(|&&s| s == Sign::Plus).count()
    }

    pub fn negated(&self) -> SignPattern {
        SignPattern {
            signs: self.signs.iter().map(|s| s.flip()).collect(),
            count: self.count,
        }
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.compressed() {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

/// Number of sign changes after the zero terms are dropped. Each flip counts once.
pub fn sign_changes(u: &[Rational]) -> SignPattern {
    let signs: Vec<Sign> = u
        .iter()
        .filter_map(|x| match rational::sign(x) {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        })
        .collect();
    let count = signs.windows(2).filter(|w| w[0] != w[1]).count();
    SignPattern { signs, count }
}

/// Sign pattern of `u - lambda`.
pub fn shifted_sign_changes(u: &[Rational], lambda: &Rational) -> SignPattern {
    let shifted: Vec<Rational> = u.iter().map(|x| x - lambda).collect();
    sign_changes(&shifted)
}

/// Maximum of `S(u - lambda)` over all real `lambda`, with a maximizing level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPlus {
    pub value: usize,
    pub witness: Rational,
}

/// Shift levels that realize every distinct sign pattern of `u - lambda`:
/// one level below the minimum plus the midpoints of consecutive distinct values.
pub fn candidate_levels(u: &[Rational]) -> Vec<Rational> {
    let mut values: Vec<Rational> = u.to_vec();
    values.sort();
    values.dedup();
    let mut levels = Vec::with_capacity(values.len());
    if let Some(min) = values.first() {
        levels.push(min - Rational::one());
    }
    let two = rational::int(2);
    for w in values.windows(2) {
        levels.push((&w[0] + &w[1]) / &two);
    }
    levels
}

pub fn s_plus(u: &[Rational]) -> SPlus {
    let mut best: Option<SPlus> = None;
    for lambda in candidate_levels(u) {
        let count = shifted_sign_changes(u, &lambda).count;
        if best.as_ref().is_none_or(|b| count > b.value) {
            best = Some(SPlus {
                value: count,
                witness: lambda,
            });
        }
    }
    best.unwrap_or(SPlus {
        value: 0,
        witness: Rational::zero(),
    })
}

/// Smallest 1-based index `M` such that `u_M >= u_{M+1} >= ... >= u_N`.
pub fn regularity(u: &[Rational]) -> usize {
    let mut idx = u.len();
    while idx > 1 && u[idx - 2] >= u[idx - 1] {
        idx -= 1;
    }
    idx.max(1)
}

pub fn is_constant(u: &[Rational]) -> bool {
    u.windows(2).all(|w| w[0] == w[1])
}

/// Closed interval of 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

/// Shape summary of a finite sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModalityProfile {
    /// Modality order; 1 means unimodal.
    pub m: usize,
    pub mode_intervals: Vec<Interval>,
    pub valley_intervals: Vec<Interval>,
    pub s_plus: SPlus,
    pub regular_m: usize,
}

impl ModalityProfile {
    pub fn is_unimodal(&self) -> bool {
        self.m == 1
    }
}

/// Maximal runs of equal adjacent terms as (value index, 1-based interval).
fn runs(u: &[Rational]) -> Vec<(usize, Interval)> {
    let mut out: Vec<(usize, Interval)> = Vec::new();
    for (i, x) in u.iter().enumerate() {
        match out.last_mut() {
            Some((first, iv)) if &u[*first] == x => iv.end = i + 1,
            _ => out.push((i, Interval::new(i + 1, i + 1))),
        }
    }
    out
}

/// Mode and valley structure of `u`.
///
/// Works on the run-compressed sequence, starting from the regularity index
/// (the first term of the final nonincreasing tail, which carries the last
/// mode) and walking left: descend to the next valley plateau, climb to the
/// next mode plateau, and repeat until the left end is reached. Boundary
/// terms compare against `inf u`, so a strictly dominant first or last
/// plateau counts as a mode. Constant sequences are unimodal with a single
/// mode interval covering every index.
pub fn modality(u: &[Rational]) -> ModalityProfile {
    let runs = runs(u);
    let value = |r: usize| &u[runs[r].0];
    let mut modes: Vec<Interval> = Vec::new();
    let mut valleys: Vec<Interval> = Vec::new();

    let mut idx = runs.len() - 1;
    while idx > 0 && value(idx - 1) > value(idx) {
        idx -= 1;
    }
    modes.push(runs[idx].1);
    loop {
        if idx == 0 {
            break;
        }
        // descend leftwards to the valley
        while idx > 0 && value(idx - 1) < value(idx) {
            idx -= 1;
        }
        if idx == 0 {
            break;
        }
        valleys.push(runs[idx].1);
        // climb leftwards to the next mode
        while idx > 0 && value(idx - 1) > value(idx) {
            idx -= 1;
        }
        modes.push(runs[idx].1);
    }
    modes.reverse();
    valleys.reverse();

    ModalityProfile {
        m: modes.len(),
        mode_intervals: modes,
        valley_intervals: valleys,
        s_plus: s_plus(u),
        regular_m: regularity(u),
    }
}

/// Sign-based unimodality test: `S+(u) <= 2` and every level giving two sign
/// changes shows the pattern `-+-`.
pub fn unimodal_by_signs(u: &[Rational]) -> bool {
    candidate_levels(u).iter().all(|lambda| {
        let p = shifted_sign_changes(u, lambda);
        match p.count {
            0 | 1 => true,
            2 => p.signs.first() == Some(&Sign::Minus),
            _ => false,
        }
    })
}

/// Decides m-modality from sign arrangements alone.
///
/// Searches the m-decompositions of `u` (adjacent parts share one boundary
/// term; inner parts span at least two fresh terms). A decomposition is
/// accepted when every part passes [`unimodal_by_signs`] and, after mode
/// alignment, the level halfway between the common maximum and the next
/// largest value yields matching signs at every shared boundary, between
/// `2m - 2` and `2m` sign changes, and exactly `m` plus runs.
///
/// Constant sequences are 1-modal.
pub fn check_mmodal_by_signs(u: &[Rational], m: usize) -> Result<bool> {
    if m < 1 {
        return Err(Error::InvalidArgument("modality order must be at least 1".into()));
    }
    if u.is_empty() {
        return Err(Error::EmptySequence);
    }
    if is_constant(u) {
        return Ok(m == 1);
    }
    let n = u.len();
    let mut cuts: Vec<usize> = Vec::with_capacity(m - 1);
    Ok(search_cuts(u, m, n, &mut cuts))
}

fn search_cuts(u: &[Rational], m: usize, n: usize, cuts: &mut Vec<usize>) -> bool {
    if cuts.len() == m - 1 {
        return accepts_decomposition(u, m, cuts);
    }
    let k = cuts.len();
    let lo = match cuts.last() {
        None => 0,
        Some(&c) => c + 2,
    };
    // the final partition part needs at least one term past the last cut
    let hi = n.saturating_sub(2);
    let mut c = lo;
    while c <= hi {
        // leave room for the remaining inner cuts
        let remaining = m - 1 - (k + 1);
        if c + 2 * remaining > hi {
            break;
        }
        cuts.push(c);
        if search_cuts(u, m, n, cuts) {
            cuts.pop();
            return true;
        }
        cuts.pop();
        c += 1;
    }
    false
}

fn accepts_decomposition(u: &[Rational], m: usize, cuts: &[usize]) -> bool {
    let mut bounds = Vec::with_capacity(m + 1);
    bounds.push(0);
    bounds.extend_from_slice(cuts);
    bounds.push(u.len() - 1);
    let parts: Vec<&[Rational]> = bounds.windows(2).map(|w| &u[w[0]..=w[1]]).collect();
    if !parts.iter().all(|p| unimodal_by_signs(p)) {
        return false;
    }
    let maxima: Vec<&Rational> = parts.iter().map(|p| p.iter().max().expect("non-empty part")).collect();
    let common = (*maxima.iter().min().expect("at least one part")).clone();
    let aligned: Vec<Vec<Rational>> = parts
        .iter()
        .zip(&maxima)
        .map(|(p, d)| {
            let shift = *d - &common;
            p.iter().map(|x| x - &shift).collect()
        })
        .collect();
    let flat: Vec<Rational> = aligned.iter().flatten().cloned().collect();
    let Some(alpha) = alignment_level(&flat) else {
        return false;
    };
    for w in aligned.windows(2) {
        let left = w[0].last().expect("non-empty part") > &alpha;
        let right = w[1].first().expect("non-empty part") > &alpha;
        if left != right {
            return false;
        }
    }
    let pattern = shifted_sign_changes(&flat, &alpha);
    let count = pattern.count;
    count + 2 >= 2 * m && count <= 2 * m && pattern.plus_runs() == m
}

/// Level halfway between the largest value and the next largest distinct value.
pub(crate) fn alignment_level(values: &[Rational]) -> Option<Rational> {
    let top = values.iter().max()?;
    let second = values.iter().filter(|x| *x < top).max()?;
    Some((top + second) / rational::int(2))
}
