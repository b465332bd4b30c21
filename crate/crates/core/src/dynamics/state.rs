use crate::error::{Error, Result};
use crate::pauli::OperatorSum;
use crate::scalar::Real;
use crate::spin::SpinSystem;

/// Density-operator deviation together with the elapsed evolution time.
#[derive(Clone, Debug, PartialEq)]
pub struct StateOp<T: Real> {
    pub operator: OperatorSum<T>,
    /// Seconds of free evolution applied so far.
    pub time: T,
}

impl<T: Real> StateOp<T> {
    pub fn new(operator: OperatorSum<T>) -> Self {
        StateOp { operator, time: T::zero() }
    }

    pub fn n_spins(&self) -> usize {
        self.operator.n_spins()
    }

    pub(crate) fn advanced(&self, operator: OperatorSum<T>, dt: T) -> Self {
        StateOp { operator, time: self.time + dt }
    }
}

/// Phase axis of a hard pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhaseAxis<T: Real> {
    X,
    Y,
    MinusX,
    MinusY,
    Radians(T),
}

impl<T: Real> PhaseAxis<T> {
    pub fn radians(self) -> T {
        let half_pi = T::frac_pi_2();
        match self {
            PhaseAxis::X => T::zero(),
            PhaseAxis::Y => half_pi,
            PhaseAxis::MinusX => half_pi + half_pi,
            PhaseAxis::MinusY => half_pi * T::lit(3.0),
            PhaseAxis::Radians(r) => r,
        }
    }

    /// `x`, `y`, `-x`, `-y`, or a phase in degrees.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "x" | "+x" => Some(PhaseAxis::X),
            "y" | "+y" => Some(PhaseAxis::Y),
            "-x" => Some(PhaseAxis::MinusX),
            "-y" => Some(PhaseAxis::MinusY),
            _ => s.parse::<T>().ok().filter(|v| v.is_finite()).map(|deg| PhaseAxis::Radians(deg.deg_to_rad())),
        }
    }
}

/// Ideal hard pulse `exp(−iθ(cosφ I_x + sinφ I_y))` on each target.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseEvent<T: Real> {
    /// Spin labels, species names, or group names resolved by the caller.
    pub targets: Vec<String>,
    pub angle: T,
    pub phase: PhaseAxis<T>,
}

impl<T: Real> PulseEvent<T> {
    pub fn new(targets: &[&str], angle: T, phase: PhaseAxis<T>) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::InvalidArgument("pulse needs at least one target".into()));
        }
        if !angle.is_finite() || !phase.radians().is_finite() {
            return Err(Error::InvalidArgument("pulse angle and phase must be finite".into()));
        }
        Ok(PulseEvent { targets: targets.iter().map(|s| s.to_string()).collect(), angle, phase })
    }

    pub fn degrees(targets: &[&str], angle_deg: T, phase: PhaseAxis<T>) -> Result<Self> {
        Self::new(targets, angle_deg.deg_to_rad(), phase)
    }

    /// Sorted, de-duplicated spin indices addressed by the pulse.
    pub fn resolve(&self, system: &SpinSystem<T>) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for t in &self.targets {
            out.extend(system.resolve(t)?);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}
