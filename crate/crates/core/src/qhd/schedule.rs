//! Damping schedules for the time-dependent Hamiltonian
//! `H(t) = kinetic(t) * (-1/2 L) + potential(t) * F`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Built-in schedule shapes. The kinetic coefficient is non-increasing and
/// the potential coefficient non-decreasing over [0, t_final] for both.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case")]
pub enum SchedulePreset {
    /// kinetic = 1 - t/t_final, potential = t/t_final.
    LinearRamp,
    /// kinetic = (t + t0)^-3, potential = (t + t0)^3.
    PowerLaw { t0: f64 },
}

/// Time grid plus damping coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QhdSchedule {
    pub t_final: f64,
    pub steps: usize,
    pub preset: SchedulePreset,
}

impl QhdSchedule {
    pub const DEFAULT_T_FINAL: f64 = 10.0;
    pub const DEFAULT_STEPS: usize = 1000;
    pub const DEFAULT_POWER_T0: f64 = 0.1;

    pub fn linear_ramp(t_final: f64, steps: usize) -> QhdSchedule {
        QhdSchedule {
            t_final,
            steps,
            preset: SchedulePreset::LinearRamp,
        }
    }

    pub fn power_law(t_final: f64, steps: usize, t0: f64) -> QhdSchedule {
        QhdSchedule {
            t_final,
            steps,
            preset: SchedulePreset::PowerLaw { t0 },
        }
    }

    /// Kinetic damping coefficient at time t.
    pub fn kinetic_coeff(&self, t: f64) -> f64 {
        match self.preset {
            SchedulePreset::LinearRamp => (1.0 - t / self.t_final).max(0.0),
            SchedulePreset::PowerLaw { t0 } => (t + t0).powi(-3),
        }
    }

    /// Potential damping coefficient at time t.
    pub fn potential_coeff(&self, t: f64) -> f64 {
        match self.preset {
            SchedulePreset::LinearRamp => (t / self.t_final).min(1.0),
            SchedulePreset::PowerLaw { t0 } => (t + t0).powi(3),
        }
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.steps as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "t_final = {} must be positive and finite",
                self.t_final
            )));
        }
        if self.steps == 0 {
            return Err(Error::InvalidParameter("steps must be at least 1".into()));
        }
        if let SchedulePreset::PowerLaw { t0 } = self.preset {
            if !(t0 > 0.0 && t0.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "power-law t0 = {t0} must be positive and finite"
                )));
            }
        }
        for s in 0..=self.steps {
            let t = s as f64 * self.dt();
            let kin = self.kinetic_coeff(t);
            let pot = self.potential_coeff(t);
            if !kin.is_finite() || !pot.is_finite() || kin < 0.0 || pot < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "non-finite or negative coefficient at t = {t}: kinetic {kin}, potential {pot}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for QhdSchedule {
    fn default() -> Self {
        QhdSchedule::linear_ramp(Self::DEFAULT_T_FINAL, Self::DEFAULT_STEPS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_monotone_on_grid() {
        for sched in [
            QhdSchedule::default(),
            QhdSchedule::power_law(10.0, 500, QhdSchedule::DEFAULT_POWER_T0),
        ] {
            sched.validate().unwrap();
            let dt = sched.dt();
            let mut prev_kin = f64::INFINITY;
            let mut prev_pot = f64::NEG_INFINITY;
            for s in 0..=sched.steps {
                let t = s as f64 * dt;
                let kin = sched.kinetic_coeff(t);
                let pot = sched.potential_coeff(t);
                assert!(kin <= prev_kin && kin >= 0.0);
                assert!(pot >= prev_pot && pot.is_finite());
                prev_kin = kin;
                prev_pot = pot;
            }
        }
    }

    #[test]
    fn invalid_schedules_rejected() {
        assert!(QhdSchedule::linear_ramp(0.0, 100).validate().is_err());
        assert!(QhdSchedule::linear_ramp(10.0, 0).validate().is_err());
        assert!(QhdSchedule::power_law(10.0, 100, 0.0).validate().is_err());
        assert!(QhdSchedule::power_law(10.0, 100, f64::NAN).validate().is_err());
    }
}
