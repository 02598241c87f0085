use nalgebra::DMatrix;

use crate::qstate::{Operator, C64, NORM_TOL};

use super::{MathError, MathResult};

/// Two-outcome local filter on the channel qubit that Alice holds.
#[derive(Debug, Clone)]
pub struct FilterMeasurement {
    pub success: Operator,
    pub failure: Operator,
    /// Probability of success on the channel `a|0…⟩ + b|1…⟩`.
    pub success_probability: f64,
}

impl FilterMeasurement {
    pub fn kraus(&self) -> [Operator; 2] {
        [self.success.clone(), self.failure.clone()]
    }
}

/// Filter turning `a|0…⟩ + b|1…⟩` into `(|0…⟩ + |1…⟩)/√2` on success.
///
/// `K_s = diag(m/a, m/b)` with `m = min(|a|, |b|)`, which also removes the
/// relative phase of `a` and `b`; `K_f = diag(√(1 − m²/|a|²), √(1 − m²/|b|²))`.
/// Success occurs with probability `2m²`, the optimum for a local filter.
/// On failure only the heavier branch survives, leaving a product state.
pub fn filter_measurement(a: C64, b: C64) -> MathResult<FilterMeasurement> {
    let norm = a.norm_sqr() + b.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(MathError::Domain(format!("channel weights have |a|² + |b|² = {norm}")));
    }
    if a.norm() < NORM_TOL || b.norm() < NORM_TOL {
        return Err(MathError::DegenerateChannel { a: a.to_string(), b: b.to_string() });
    }
    let m = a.norm().min(b.norm());
    let ks = DMatrix::from_row_slice(2, 2, &[m / a, C64::new(0.0, 0.0), C64::new(0.0, 0.0), m / b]);
    let fail = |x: C64| C64::new((1.0 - m * m / x.norm_sqr()).max(0.0).sqrt(), 0.0);
    let kf = DMatrix::from_row_slice(2, 2, &[fail(a), C64::new(0.0, 0.0), C64::new(0.0, 0.0), fail(b)]);
    Ok(FilterMeasurement {
        success: Operator::new("success", ks)?,
        failure: Operator::new("failure", kf)?,
        success_probability: 2.0 * m * m,
    })
}
