use crate::error::{Error, Result};
use crate::spin::{CoherenceLabel, SpinSystem};

/// `(a, b)` in `cos(π(a·J_IM + b·J_SM)t₁)` for each methyl family.
pub fn model_coefficients(label: CoherenceLabel) -> Option<(f64, f64)> {
    match label {
        CoherenceLabel::QQ => Some((3.0, 1.0)),
        CoherenceLabel::DQ1 => Some((3.0, -1.0)),
        CoherenceLabel::DQ2 => Some((1.0, 1.0)),
        CoherenceLabel::ZQ => Some((1.0, -1.0)),
        _ => None,
    }
}

/// F1 frequency in Hz of a family's echo modulation.
pub fn model_frequency(label: CoherenceLabel, system: &SpinSystem<f64>) -> Result<f64> {
    let (a, b) = model_coefficients(label).ok_or_else(|| Error::InvalidArgument(format!("{label} is not a methyl coherence family")))?;
    let (jim, jsm) = remote_couplings(system)?;
    Ok((a * jim + b * jsm) / 2.0)
}

/// `(J_IM, J_SM)` read from spins `I1`, `S` and `M`.
pub fn remote_couplings(system: &SpinSystem<f64>) -> Result<(f64, f64)> {
    Ok((system.coupling_by_label("I1", "M")?, system.coupling_by_label("S", "M")?))
}

/// Closed-form t₁ interferogram `cos(π(a·J_IM ± b·J_SM)t₁)·exp(−t₁/T₂)`.
pub fn echo_signal_model(label: CoherenceLabel, t1: f64, system: &SpinSystem<f64>) -> Result<f64> {
    let f = model_frequency(label, system)?;
    Ok((2.0 * std::f64::consts::PI * f * t1).cos() * (-t1 / system.t2().get(label)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::preset_alanine;

    #[test]
    fn unity_at_zero() {
        let s = preset_alanine::<f64>();
        for l in CoherenceLabel::MQ {
            assert_eq!(echo_signal_model(l, 0.0, &s).unwrap(), 1.0);
        }
    }

    #[test]
    fn dq2_zero_crossing() {
        let s = preset_alanine::<f64>();
        let t: f64 = 1.0 / (2.0 * (7.3 + 4.5));
        assert!((t - 0.04237).abs() < 1e-5);
        assert!(echo_signal_model(CoherenceLabel::DQ2, t, &s).unwrap().abs() < 1e-12);
    }

    #[test]
    fn family_frequencies() {
        let s = preset_alanine::<f64>();
        let f: Vec<f64> = CoherenceLabel::MQ.iter().map(|&l| model_frequency(l, &s).unwrap()).collect();
        for (got, want) in f.iter().zip([13.2, 8.7, 5.9, 1.4]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!(model_frequency(CoherenceLabel::SQ, &s).is_err());
    }
}
