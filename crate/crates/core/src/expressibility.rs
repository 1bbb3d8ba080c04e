//! Covering-number bounds on the hypothesis space of an ansatz.
//!
//! For local dimension `d`, gate locality `k`, `N` trainable gates, covering
//! radius `ε` and observable norm `‖O‖`, with `m = d^{2k}·N`:
//!
//! ```text
//! m·ln(3N‖O‖ / 8ε)  ≤  ln 𝒩(𝓗, ε, |·|)  ≤  m·ln(7N‖O‖ / ε)
//! ```
//!
//! The lower bound needs `N ≥ 2/‖O‖` to hold. All logarithms are natural.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest admissible covering radius.
pub const MAX_EPS: f64 = 0.1;
pub const DEFAULT_EPS: f64 = 0.01;
pub const DEFAULT_ACCEPT_FACTOR: f64 = 2.0;

/// Constants `(c_lower, c_upper)` sometimes quoted for the closed form
/// `16N·ln(c·N)` at `ε = 0.01`, `‖O‖ = 1.16863955`. Direct substitution gives
/// `3‖O‖/8ε ≈ 43.824` and `7‖O‖/ε ≈ 818.05` instead; these are kept only so
/// reports can show the mismatch.
pub const QUOTED_LOG_CONSTANTS: (f64, f64) = (115.037956, 43.8239831);
pub const QUOTED_OPERATOR_NORM: f64 = 1.16863955;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundInputs {
    pub d: u32,
    pub k: u32,
    pub n_gt: u64,
    pub eps: f64,
    pub op_norm: f64,
}

impl BoundInputs {
    /// Qubits (`d = 2`) with two-qubit gates (`k = 2`).
    pub fn qubits(n_gt: u64, eps: f64, op_norm: f64) -> Self {
        Self {
            d: 2,
            k: 2,
            n_gt,
            eps,
            op_norm,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::Invalid(format!(
                "d must be at least 2, got {}",
                self.d
            )));
        }
        if self.k < 1 {
            return Err(Error::Invalid("k must be at least 1".into()));
        }
        if self.n_gt < 1 {
            return Err(Error::Invalid("N_gt must be at least 1".into()));
        }
        if !(self.eps > 0.0 && self.eps <= MAX_EPS) {
            return Err(Error::Invalid(format!(
                "eps must lie in (0, {MAX_EPS}], got {}",
                self.eps
            )));
        }
        if !(self.op_norm > 0.0 && self.op_norm.is_finite()) {
            return Err(Error::Invalid(format!(
                "operator norm must be positive, got {}",
                self.op_norm
            )));
        }
        Ok(())
    }

    /// `d^{2k}·N_gt`, computed in integers.
    pub fn exponent(&self) -> Result<u128> {
        (self.d as u128)
            .checked_pow(2 * self.k)
            .and_then(|p| p.checked_mul(self.n_gt as u128))
            .ok_or_else(|| Error::Invalid("d^(2k)·N_gt overflows".into()))
    }
}

/// Natural-log covering bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoveringBounds {
    pub log_lower: f64,
    pub log_upper: f64,
}

pub fn covering_log_bounds(inp: &BoundInputs) -> Result<CoveringBounds> {
    inp.validate()?;
    let m = inp.exponent()? as f64;
    let n = inp.n_gt as f64;
    Ok(CoveringBounds {
        log_lower: m * (3.0 * n * inp.op_norm / (8.0 * inp.eps)).ln(),
        log_upper: m * (7.0 * n * inp.op_norm / inp.eps).ln(),
    })
}

/// Smallest integer `N_gt` with `N_gt ≥ 2/‖O‖`.
pub fn min_trainable_gates(op_norm: f64) -> Result<u64> {
    if !(op_norm > 0.0 && op_norm.is_finite()) {
        return Err(Error::Invalid(format!(
            "operator norm must be positive, got {op_norm}"
        )));
    }
    Ok((2.0 / op_norm).ceil().max(1.0) as u64)
}

/// Midpoint of the two log bounds.
pub fn average_expressibility(b: &CoveringBounds) -> f64 {
    0.5 * (b.log_lower + b.log_upper)
}

/// Multipliers `(3‖O‖/8ε, 7‖O‖/ε)` that turn the bounds into `m·ln(c·N)`.
pub fn substituted_constants(eps: f64, op_norm: f64) -> (f64, f64) {
    (3.0 * op_norm / (8.0 * eps), 7.0 * op_norm / eps)
}

/// One depth of a sweep, as seen by [`best_expressive_range`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RangePoint {
    pub depth: usize,
    pub mean_error: f64,
    pub bounds: CoveringBounds,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpressiveRangeReport {
    pub acceptable_depths: Vec<usize>,
    /// `log_upper(rightmost acceptable) − log_lower(leftmost acceptable)`
    pub range_span: f64,
    pub average_error: f64,
}

/// Depths whose mean error is within `accept_factor` of the best one, the
/// log-bound span they cover and their mean error.
pub fn best_expressive_range(
    points: &[RangePoint],
    accept_factor: f64,
) -> Result<ExpressiveRangeReport> {
    if points.is_empty() {
        return Err(Error::Invalid("no sweep records".into()));
    }
    if !(accept_factor >= 1.0 && accept_factor.is_finite()) {
        return Err(Error::Invalid(format!(
            "acceptance factor must be at least 1, got {accept_factor}"
        )));
    }
    if points.windows(2).any(|w| w[0].depth >= w[1].depth) {
        return Err(Error::Invalid("records must be sorted by depth".into()));
    }
    let best = points
        .iter()
        .map(|p| p.mean_error)
        .fold(f64::INFINITY, f64::min);
    // a (floating-point) negative minimum would otherwise exclude itself
    let threshold = (accept_factor * best).max(best);
    let accepted: Vec<&RangePoint> = points
        .iter()
        .filter(|p| p.mean_error <= threshold)
        .collect();
    let first = accepted[0];
    let last = accepted[accepted.len() - 1];
    Ok(ExpressiveRangeReport {
        acceptable_depths: accepted.iter().map(|p| p.depth).collect(),
        range_span: last.bounds.log_upper - first.bounds.log_lower,
        average_error: accepted.iter().map(|p| p.mean_error).sum::<f64>() / accepted.len() as f64,
    })
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation with average ranks for ties. `None` when either
/// side is constant or the lengths differ.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const NORM: f64 = 1.16863955;

    #[test]
    fn worked_example() {
        // 40-digit reference values
        let b = covering_log_bounds(&BoundInputs::qubits(8, 0.01, NORM)).unwrap();
        assert!((b.log_lower - 750.031_714_449_600_6).abs() < 1e-9);
        assert!((b.log_upper - 1_124.654_357_914_181_7).abs() < 1e-9);
        assert!((average_expressibility(&b) - 937.343_036_181_891_2).abs() < 1e-9);
    }

    #[test]
    fn template_one_depth_four_is_order_ten_thousand() {
        let b = covering_log_bounds(&BoundInputs::qubits(60, 0.01, NORM)).unwrap();
        let avg = average_expressibility(&b);
        assert!((avg - 8_964.379_671_084_758).abs() < 1e-8);
        assert!((3e3..3e4).contains(&avg));
    }

    #[test]
    fn domain_errors() {
        for bad in [
            BoundInputs::qubits(8, 0.0, NORM),
            BoundInputs::qubits(8, 0.2, NORM),
            BoundInputs::qubits(0, 0.01, NORM),
            BoundInputs::qubits(8, 0.01, 0.0),
            BoundInputs::qubits(8, 0.01, f64::NAN),
            BoundInputs {
                d: 1,
                ..BoundInputs::qubits(8, 0.01, NORM)
            },
            BoundInputs {
                k: 0,
                ..BoundInputs::qubits(8, 0.01, NORM)
            },
        ] {
            assert!(covering_log_bounds(&bad).is_err(), "{bad:?}");
        }
        assert!(covering_log_bounds(&BoundInputs::qubits(8, 0.1, NORM)).is_ok());
    }

    #[test]
    fn trainable_floor() {
        assert_eq!(min_trainable_gates(2.0).unwrap(), 1);
        assert_eq!(min_trainable_gates(0.5).unwrap(), 4);
        assert_eq!(min_trainable_gates(NORM).unwrap(), 2);
        assert!(min_trainable_gates(0.0).is_err());
        assert!(min_trainable_gates(-1.0).is_err());
    }

    #[test]
    fn substitution_differs_from_quoted_constants() {
        let (lo, up) = substituted_constants(0.01, QUOTED_OPERATOR_NORM);
        assert!((lo - 43.823983125).abs() < 1e-9);
        assert!((up - 818.047685).abs() < 1e-9);
        assert!((lo - QUOTED_LOG_CONSTANTS.0).abs() > 1.0);
        assert!((up - QUOTED_LOG_CONSTANTS.1).abs() > 1.0);
    }

    fn point(depth: usize, err: f64) -> RangePoint {
        let n = 8 * depth as u64;
        RangePoint {
            depth,
            mean_error: err,
            bounds: covering_log_bounds(&BoundInputs::qubits(n, 0.01, NORM)).unwrap(),
        }
    }

    #[test]
    fn single_record_range() {
        let p = point(3, 0.004);
        let r = best_expressive_range(&[p], 2.0).unwrap();
        assert_eq!(r.acceptable_depths, vec![3]);
        assert_eq!(r.range_span, p.bounds.log_upper - p.bounds.log_lower);
        assert_eq!(r.average_error, 0.004);
    }

    #[test]
    fn middle_only() {
        let pts = [point(1, 0.1), point(2, 0.001), point(3, 0.1)];
        let r = best_expressive_range(&pts, 2.0).unwrap();
        assert_eq!(r.acceptable_depths, vec![2]);
    }

    #[test]
    fn u_shaped_plateau() {
        // errors fall to a plateau at depths 6..=10 then rise again
        let errors = [
            0.08, 0.05, 0.03, 0.015, 0.008, 0.003, 0.0025, 0.002, 0.0028, 0.0035, 0.009, 0.02,
            0.04, 0.06, 0.09,
        ];
        let pts: Vec<RangePoint> = errors
            .iter()
            .enumerate()
            .map(|(i, &e)| point(i + 1, e))
            .collect();
        let r = best_expressive_range(&pts, 2.0).unwrap();
        assert_eq!(r.acceptable_depths, vec![6, 7, 8, 9, 10]);
        // hand evaluation: N_gt = 48 (depth 6) and 80 (depth 10), m = 16·N_gt
        let lower6 = 768.0 * (3.0 * 48.0 * NORM / 0.08f64).ln();
        let upper10 = 1280.0 * (7.0 * 80.0 * NORM / 0.01f64).ln();
        assert!((r.range_span - (upper10 - lower6)).abs() < 1e-9);
        let avg = (0.003 + 0.0025 + 0.002 + 0.0028 + 0.0035) / 5.0;
        assert!((r.average_error - avg).abs() < 1e-15);
    }

    #[test]
    fn range_errors() {
        assert!(best_expressive_range(&[], 2.0).is_err());
        assert!(best_expressive_range(&[point(2, 0.1), point(1, 0.1)], 2.0).is_err());
        assert!(best_expressive_range(&[point(1, 0.1)], 0.5).is_err());
    }

    #[test]
    fn tiny_negative_minimum_is_still_accepted() {
        let pts = [point(1, 0.01), point(2, -1e-12)];
        let r = best_expressive_range(&pts, 2.0).unwrap();
        assert_eq!(r.acceptable_depths, vec![2]);
    }

    #[test]
    fn spearman_basics() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), Some(-1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]), Some(1.0));
        assert_eq!(spearman(&[1.0, 1.0], &[1.0, 2.0]), None);
        let r = spearman(&[1.0, 2.0, 2.0, 4.0], &[4.0, 3.0, 1.0, 2.0]).unwrap();
        assert!(r < 0.0);
    }

    proptest! {
        #[test]
        fn gap_is_fixed(n in 1u64..500, eps in 1e-4f64..0.1, norm in 1e-2f64..10.0) {
            let b = covering_log_bounds(&BoundInputs::qubits(n, eps, norm)).unwrap();
            let expected = 16.0 * n as f64 * (56.0f64 / 3.0).ln();
            let gap = b.log_upper - b.log_lower;
            prop_assert!((gap - expected).abs() <= 1e-12 * b.log_upper.abs().max(1.0));
            prop_assert!(gap > 0.0);
        }

        #[test]
        fn monotone_in_gate_count(n in 8u64..400, norm in 0.5f64..3.0) {
            let a = covering_log_bounds(&BoundInputs::qubits(n, 0.01, norm)).unwrap();
            let b = covering_log_bounds(&BoundInputs::qubits(2 * n, 0.01, norm)).unwrap();
            prop_assert!(b.log_lower > a.log_lower);
            prop_assert!(b.log_upper > a.log_upper);
        }
    }
}
