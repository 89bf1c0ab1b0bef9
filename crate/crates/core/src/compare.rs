//! Entry-by-entry comparison of two distributions and extraction of the
//! summary statistics the qualitative claims reduce to: total variation,
//! last-maximum location, and the error there.

use crate::distribution::{Distribution, EntryFlag, Method};
use crate::error::{Result, SqzError};
use crate::real::Real;

/// Reference values at or below this magnitude get no relative error: parity
/// zeros would otherwise dominate every report with meaningless ratios.
pub const REL_REFERENCE_FLOOR: f64 = 1e-12;

/// Entries at or below this magnitude cannot qualify as a last maximum.
pub const LAST_MAX_THRESHOLD: f64 = 1e-10;

/// Breakdown-marker counts for the two sides of a comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FlagsSummary {
    pub tangency_a: usize,
    pub clamped_a: usize,
    pub tangency_b: usize,
    pub clamped_b: usize,
}

/// Result of [`compare`]: per-entry errors over the shared index range plus
/// the scalar statistics. Side a is the reference: relative errors are taken
/// against its values, and `rel_error_at_last_max` is evaluated at its last
/// maximum.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ComparisonReport<T> {
    pub method_a: Method,
    pub method_b: Method,
    pub per_m_abs_error: Vec<T>,
    /// None where the reference entry is at or below [`REL_REFERENCE_FLOOR`].
    pub per_m_rel_error: Vec<Option<T>>,
    /// Half the L1 distance over the shared range; lands in [0, 1] when both
    /// inputs are (sub)normalized.
    pub total_variation: T,
    pub last_max_location_a: Option<usize>,
    pub last_max_location_b: Option<usize>,
    /// Relative error at `last_max_location_a`; None when side a has no
    /// qualifying maximum inside the shared range.
    pub rel_error_at_last_max: Option<T>,
    pub flags_summary: FlagsSummary,
}

/// Location of the last maximum: the largest index on the support-parity
/// subsequence whose entry exceeds [`LAST_MAX_THRESHOLD`] and strictly
/// dominates both parity neighbors.
///
/// The parity class is taken from the largest entry. A missing left neighbor
/// counts as dominated (a monotone decreasing distribution peaks at its first
/// entry); a missing right neighbor disqualifies, since the tail could still
/// be rising past the computed range. When exactly one entry is above
/// threshold it is the distribution's single support point and is returned
/// outright.
pub fn last_maximum<T: Real>(d: &Distribution<T>) -> Result<usize> {
    let threshold = T::from_f64c(LAST_MAX_THRESHOLD);
    let mut support = None;
    let mut support_count = 0usize;
    let mut peak = 0usize;
    for (m, v) in d.values.iter().enumerate() {
        if v.abs() > d.values[peak].abs() {
            peak = m;
        }
        if *v > threshold {
            support = Some(m);
            support_count += 1;
        }
    }
    if support_count == 1 {
        return Ok(support.unwrap());
    }
    let mut best = None;
    let mut m = peak % 2;
    while m < d.len() {
        let v = d.values[m];
        if v > threshold {
            let left_ok = m < 2 || v > d.values[m - 2];
            let right_ok = m + 2 < d.len() && v > d.values[m + 2];
            if left_ok && right_ok {
                best = Some(m);
            }
        }
        m += 2;
    }
    best.ok_or(SqzError::RangeTooShort {
        len: d.len(),
        reason: "no entry above threshold dominates both parity neighbors",
    })
}

/// Compares two distributions of the same state over their shared index
/// range. Fails when (n, r) differ or the shared range is empty.
pub fn compare<T: Real>(a: &Distribution<T>, b: &Distribution<T>) -> Result<ComparisonReport<T>> {
    if a.n != b.n || a.r != b.r {
        return Err(SqzError::IncompatibleDistributions {
            reason: format!("(n, r) = ({}, {}) vs ({}, {})", a.n, a.r, b.n, b.r),
        });
    }
    let shared = a.len().min(b.len());
    if shared == 0 {
        return Err(SqzError::IncompatibleDistributions {
            reason: "empty shared index range".to_string(),
        });
    }
    let floor = T::from_f64c(REL_REFERENCE_FLOOR);
    let half = T::from_f64c(0.5);
    let mut per_m_abs_error = Vec::with_capacity(shared);
    let mut per_m_rel_error = Vec::with_capacity(shared);
    let mut l1 = T::zero();
    for m in 0..shared {
        let diff = (a.values[m] - b.values[m]).abs();
        l1 += diff;
        per_m_abs_error.push(diff);
        per_m_rel_error.push(if a.values[m].abs() > floor {
            Some(diff / a.values[m].abs())
        } else {
            None
        });
    }
    let last_max_location_a = last_maximum(a).ok();
    let last_max_location_b = last_maximum(b).ok();
    let rel_error_at_last_max = last_max_location_a
        .filter(|&m| m < shared)
        .and_then(|m| per_m_rel_error[m]);
    Ok(ComparisonReport {
        method_a: a.method,
        method_b: b.method,
        per_m_abs_error,
        per_m_rel_error,
        total_variation: l1 * half,
        last_max_location_a,
        last_max_location_b,
        rel_error_at_last_max,
        flags_summary: FlagsSummary {
            tangency_a: a.flag_count(EntryFlag::Tangency),
            clamped_a: a.flag_count(EntryFlag::Clamped),
            tangency_b: b.flag_count(EntryFlag::Tangency),
            clamped_b: b.flag_count(EntryFlag::Clamped),
        },
    })
}
