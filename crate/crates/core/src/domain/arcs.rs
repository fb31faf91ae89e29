use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

/// A finite union of disjoint angular intervals on the circle.
///
/// Canonical form: arcs lie in `[0, 2 pi]`, sorted by start, pairwise disjoint
/// and non-touching; an arc crossing the seam at `0` is stored as two pieces.
/// `measure` is carried separately so that symmetric rearrangements keep it
/// bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcSet {
    arcs: Vec<(f64, f64)>,
    measure: f64,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet {
            arcs: Vec::new(),
            measure: 0.0,
        }
    }

    pub fn full() -> Self {
        ArcSet {
            arcs: vec![(0.0, TAU)],
            measure: TAU,
        }
    }

    /// The single arc `{|theta| < measure / 2}`; measures outside `(0, 2 pi)`
    /// give the empty set or the full circle.
    pub fn symmetric(measure: f64) -> Self {
        if measure <= 0.0 {
            return Self::empty();
        }
        if measure >= TAU {
            return Self::full();
        }
        let half = 0.5 * measure;
        ArcSet {
            arcs: vec![(0.0, half), (TAU - half, TAU)],
            measure,
        }
    }

    /// Normalizes arbitrary `(lo, hi)` pairs (`lo < hi`, any real offset) into
    /// canonical form, merging overlaps.
    pub fn from_arcs<I>(arcs: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut pieces = Vec::new();
        for (lo, hi) in arcs {
            let len = hi - lo;
            if !(len > 0.0) {
                continue;
            }
            if len >= TAU {
                return Self::full();
            }
            let start = lo.rem_euclid(TAU);
            let end = start + len;
            if end > TAU {
                pieces.push((start, TAU));
                pieces.push((0.0, end - TAU));
            } else {
                pieces.push((start, end));
            }
        }
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
        for (lo, hi) in pieces {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        let measure: f64 = merged.iter().map(|(lo, hi)| hi - lo).sum();
        if measure >= TAU {
            return Self::full();
        }
        ArcSet {
            arcs: merged,
            measure,
        }
    }

    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    /// Lebesgue measure `|D(t)|`, in `[0, 2 pi]`.
    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn is_empty(&self) -> bool {
        self.measure == 0.0
    }

    pub fn is_full(&self) -> bool {
        self.measure >= TAU
    }

    /// Number of connected components on the circle (seam pieces joined).
    pub fn components(&self) -> usize {
        let n = self.arcs.len();
        if n >= 2 && self.arcs[0].0 == 0.0 && self.arcs[n - 1].1 == TAU {
            n - 1
        } else {
            n
        }
    }

    pub fn contains(&self, theta: f64) -> bool {
        let th = theta.rem_euclid(TAU);
        if self.is_full() {
            return true;
        }
        let across_seam = th == 0.0
            && self.arcs.first().is_some_and(|a| a.0 == 0.0)
            && self.arcs.last().is_some_and(|a| a.1 == TAU);
        across_seam || self.arcs.iter().any(|&(lo, hi)| lo < th && th < hi)
    }

    /// Comparison modulo `2 pi` with an absolute tolerance on endpoints and measure.
    pub fn approx_eq(&self, other: &ArcSet, tol: f64) -> bool {
        (self.measure - other.measure).abs() <= tol
            && self.arcs.len() == other.arcs.len()
            && self
                .arcs
                .iter()
                .zip(&other.arcs)
                .all(|(a, b)| (a.0 - b.0).abs() <= tol && (a.1 - b.1).abs() <= tol)
    }

    /// `lo:hi;lo:hi` with 17 significant digits.
    pub fn to_field(&self) -> String {
        self.arcs
            .iter()
            .map(|(lo, hi)| format!("{lo:.16e}:{hi:.16e}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}
