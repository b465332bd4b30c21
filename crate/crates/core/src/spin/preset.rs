use super::system::{Spin, SpinSystem, DEFAULT_T2_SECONDS};
use crate::scalar::Real;
use crate::spin::CoherenceLabel;

/// Text of the shipped alanine config.
pub const ALANINE_CONFIG: &str = include_str!("../../data/alanine.spins");

pub const J_SI_HZ: f64 = 129.8;
pub const J_SM_HZ: f64 = 4.5;
pub const J_IM_HZ: f64 = 7.3;

/// Alanine ¹³CH₃–¹²CH as spins `S, I1, I2, I3, M`.
pub fn preset_alanine<T: Real>() -> SpinSystem<T> {
    let zero = T::zero();
    let spins = vec![
        Spin::new("S", 1, zero).with_species("C"),
        Spin::new("I1", 4, zero).with_species("H"),
        Spin::new("I2", 4, zero).with_species("H"),
        Spin::new("I3", 4, zero).with_species("H"),
        Spin::new("M", 4, zero).with_species("H"),
    ];
    let mut sys = SpinSystem::new(spins).expect("preset is valid");
    for i in ["I1", "I2", "I3"] {
        sys = sys.with_coupling("S", i, T::lit(J_SI_HZ)).unwrap();
        sys = sys.with_coupling(i, "M", T::lit(J_IM_HZ)).unwrap();
    }
    sys.with_coupling("S", "M", T::lit(J_SM_HZ))
        .unwrap()
        .with_t2(CoherenceLabel::Default, T::lit(DEFAULT_T2_SECONDS))
        .unwrap()
}
