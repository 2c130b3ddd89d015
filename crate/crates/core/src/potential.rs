//! Potential-energy models, the classical Hamiltonian and analytic spectra.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::PhasePoint;

/// Piecewise-linear potential read from `(x, V)` samples.
///
/// Values outside the tabulated range are held at the nearest endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedPotential {
    xs: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedPotential {
    pub fn new(xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} values", xs.len()),
                found: format!("{} values", values.len()),
            });
        }
        if xs.len() < 2 {
            return Err(Error::invalid("table", "needs at least two samples"));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(
                "table",
                "abscissae must be strictly increasing",
            ));
        }
        if xs.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::invalid("table", "samples must be finite"));
        }
        Ok(Self { xs, values })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.values[0];
        }
        if x >= self.xs[n - 1] {
            return self.values[n - 1];
        }
        let hi = self.xs.partition_point(|&xi| xi <= x);
        let lo = hi - 1;
        let t = (x - self.xs[lo]) / (self.xs[hi] - self.xs[lo]);
        self.values[lo] + t * (self.values[hi] - self.values[lo])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialModel {
    /// `m ω² x² / 2`
    Harmonic { mass: f64, omega: f64 },
    /// `D (1 - exp(-β x))²`
    Morse {
        depth: f64,
        steepness: f64,
        mass: f64,
    },
    /// `-Q² / (|x| + ε)`
    Coulomb {
        charge: f64,
        mass: f64,
        core_offset: f64,
    },
    /// `V = 0`
    Free { mass: f64 },
    Tabulated {
        mass: f64,
        table: TabulatedPotential,
    },
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            field,
            format!("must be positive, got {value}"),
        ))
    }
}

impl PotentialModel {
    pub fn harmonic(mass: f64, omega: f64) -> Result<Self> {
        positive("mass", mass)?;
        positive("omega", omega)?;
        Ok(Self::Harmonic { mass, omega })
    }

    pub fn morse(depth: f64, steepness: f64, mass: f64) -> Result<Self> {
        positive("depth", depth)?;
        positive("steepness", steepness)?;
        positive("mass", mass)?;
        Ok(Self::Morse {
            depth,
            steepness,
            mass,
        })
    }

    pub fn coulomb(charge: f64, mass: f64, core_offset: f64) -> Result<Self> {
        positive("charge", charge)?;
        positive("mass", mass)?;
        if !(core_offset >= 0.0 && core_offset.is_finite()) {
            return Err(Error::invalid(
                "core_offset",
                format!("must be non-negative, got {core_offset}"),
            ));
        }
        Ok(Self::Coulomb {
            charge,
            mass,
            core_offset,
        })
    }

    pub fn free(mass: f64) -> Result<Self> {
        positive("mass", mass)?;
        Ok(Self::Free { mass })
    }

    pub fn tabulated(mass: f64, table: TabulatedPotential) -> Result<Self> {
        positive("mass", mass)?;
        Ok(Self::Tabulated { mass, table })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Harmonic { .. } => "harmonic",
            Self::Morse { .. } => "morse",
            Self::Coulomb { .. } => "coulomb",
            Self::Free { .. } => "free",
            Self::Tabulated { .. } => "tabulated",
        }
    }

    pub fn mass(&self) -> f64 {
        match *self {
            Self::Harmonic { mass, .. }
            | Self::Morse { mass, .. }
            | Self::Coulomb { mass, .. }
            | Self::Free { mass }
            | Self::Tabulated { mass, .. } => mass,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::invalid("x", format!("must be finite, got {x}")));
        }
        Ok(match self {
            Self::Harmonic { mass, omega } => 0.5 * mass * omega * omega * x * x,
            Self::Morse {
                depth, steepness, ..
            } => {
                let s = 1.0 - (-steepness * x).exp();
                depth * s * s
            }
            Self::Coulomb {
                charge,
                core_offset,
                ..
            } => {
                let r = x.abs() + core_offset;
                if r == 0.0 {
                    return Err(Error::Singularity { x });
                }
                -charge * charge / r
            }
            Self::Free { .. } => 0.0,
            Self::Tabulated { table, .. } => table.eval(x),
        })
    }

    /// `p² / 2m + V(x)`.
    pub fn classical_energy(&self, point: PhasePoint) -> Result<f64> {
        Ok(point.p * point.p / (2.0 * self.mass()) + self.eval(point.x)?)
    }

    /// Morse: harmonic frequency `ω₀ = β √(2D/m)` of the well bottom.
    fn morse_omega(depth: f64, steepness: f64, mass: f64) -> f64 {
        steepness * (2.0 * depth / mass).sqrt()
    }

    /// Number of bound states, `None` when unbounded or unknown.
    pub fn bound_state_count(&self, hbar: f64) -> Option<usize> {
        match *self {
            Self::Morse {
                depth,
                steepness,
                mass,
            } => {
                let lambda = (2.0 * mass * depth).sqrt() / (steepness * hbar);
                Some(((lambda - 0.5).floor() + 1.0).max(0.0) as usize)
            }
            _ => None,
        }
    }

    /// Level `n` of the analytic spectrum; `n` starts at 0 for the
    /// ground state in every variant (Coulomb level `n` has quantum number `n + 1`).
    pub fn analytic_level(&self, hbar: f64, n: usize) -> Result<f64> {
        let q = n as f64 + 0.5;
        match *self {
            Self::Harmonic { omega, .. } => Ok(hbar * omega * q),
            Self::Morse {
                depth,
                steepness,
                mass,
            } => {
                let bound = self.bound_state_count(hbar).unwrap_or(0);
                if n >= bound {
                    return Err(Error::TooManyLevels {
                        requested: n + 1,
                        available: bound,
                    });
                }
                let e = hbar * Self::morse_omega(depth, steepness, mass) * q;
                Ok(e - e * e / (4.0 * depth))
            }
            Self::Coulomb { charge, mass, .. } => {
                let principal = (n + 1) as f64;
                Ok(-mass * charge.powi(4) / (2.0 * hbar * hbar * principal * principal))
            }
            Self::Free { .. } | Self::Tabulated { .. } => Err(Error::NotImplemented(format!(
                "no analytic spectrum for the {} potential",
                self.kind()
            ))),
        }
    }

    /// Lowest `count` analytic levels in ascending order.
    ///
    /// Coulomb returns the distinct Bohr energies `-mQ⁴ / (2ħ²n²)`, `n = 1..`.
    pub fn analytic_levels(&self, hbar: f64, count: usize) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(Error::invalid("count", "must be at least 1"));
        }
        positive("hbar", hbar)?;
        if let Some(bound) = self.bound_state_count(hbar) {
            if count > bound {
                return Err(Error::TooManyLevels {
                    requested: count,
                    available: bound,
                });
            }
        }
        (0..count).map(|n| self.analytic_level(hbar, n)).collect()
    }

    /// Number of analytic levels strictly below `e_cut`.
    pub fn count_states_below(&self, hbar: f64, e_cut: f64) -> Result<usize> {
        positive("hbar", hbar)?;
        if e_cut.is_nan() {
            return Err(Error::invalid("e_cut", "must not be NaN"));
        }
        if let Self::Coulomb { .. } = self {
            if e_cut >= 0.0 {
                return Err(Error::invalid(
                    "e_cut",
                    "Coulomb levels accumulate at zero; e_cut must be negative",
                ));
            }
        }
        let cap = self.bound_state_count(hbar).unwrap_or(usize::MAX);
        let mut n = 0;
        while n < cap && self.analytic_level(hbar, n)? < e_cut {
            n += 1;
        }
        Ok(n)
    }
}

pub fn eval_potential(model: &PotentialModel, x: f64) -> Result<f64> {
    model.eval(x)
}

pub fn classical_energy(model: &PotentialModel, point: PhasePoint) -> Result<f64> {
    model.classical_energy(point)
}

pub fn analytic_levels(model: &PotentialModel, hbar: f64, count: usize) -> Result<Vec<f64>> {
    model.analytic_levels(hbar, count)
}

pub fn count_states_below(model: &PotentialModel, hbar: f64, e_cut: f64) -> Result<usize> {
    model.count_states_below(hbar, e_cut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn morse_well() -> PotentialModel {
        PotentialModel::morse(12.0, 0.5, 6.0).unwrap()
    }

    #[test]
    fn potential_values() {
        let h = PotentialModel::harmonic(1.0, 1.0).unwrap();
        assert_eq!(h.eval(0.0).unwrap(), 0.0);
        let m = morse_well();
        assert_eq!(m.eval(0.0).unwrap(), 0.0);
        assert_relative_eq!(m.eval(200.0).unwrap(), 12.0, epsilon = 1e-12);
        let c = PotentialModel::coulomb(1.0, 1.0, 0.0).unwrap();
        assert_eq!(c.eval(2.0).unwrap(), -0.5);
        assert_eq!(c.eval(-2.0).unwrap(), -0.5);
        assert_eq!(c.eval(0.0), Err(Error::Singularity { x: 0.0 }));
        let soft = PotentialModel::coulomb(1.0, 1.0, 0.5).unwrap();
        assert_eq!(soft.eval(0.0).unwrap(), -2.0);
    }

    #[test]
    fn classical_energies() {
        let h = PotentialModel::harmonic(1.0, 1.0).unwrap();
        assert_eq!(h.classical_energy(PhasePoint::new(0.0, 0.0)).unwrap(), 0.0);
        let m = morse_well();
        let p = (2.0 * 6.0 * 11.25f64).sqrt();
        assert_relative_eq!(
            m.classical_energy(PhasePoint::new(0.0, p)).unwrap(),
            11.25,
            epsilon = 1e-12
        );
        let c = PotentialModel::coulomb(1.0, 1.0, 0.0).unwrap();
        assert_eq!(c.classical_energy(PhasePoint::new(2.0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn morse_levels_match_closed_form() {
        let m = morse_well();
        assert_eq!(m.bound_state_count(1.0), Some(24));
        let levels = m.analytic_levels(1.0, 24).unwrap();
        assert_relative_eq!(levels[0], 0.5 - 0.25 / 48.0, epsilon = 1e-15);
        assert_relative_eq!(levels[0], 0.494_792, epsilon = 1e-6);
        assert_relative_eq!(levels[23], 11.994_79, epsilon = 1e-5);
        assert_eq!(
            m.analytic_levels(1.0, 25),
            Err(Error::TooManyLevels {
                requested: 25,
                available: 24
            })
        );
    }

    #[test]
    fn harmonic_and_coulomb_ladders() {
        let h = PotentialModel::harmonic(1.0, 1.0).unwrap();
        let expected: Vec<f64> = (0..8).map(|n| n as f64 + 0.5).collect();
        assert_eq!(h.analytic_levels(1.0, 8).unwrap(), expected);

        let c = PotentialModel::coulomb(1.0, 1.0, 0.0).unwrap();
        let levels = c.analytic_levels(0.5, 3).unwrap();
        assert_eq!(levels[0], -2.0);
        assert_eq!(levels[1], -0.5);
        assert_relative_eq!(levels[2], -2.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn states_below_cut() {
        let m = morse_well();
        // independent enumeration over the closed form
        let below = (0..24)
            .map(|n| {
                let e = n as f64 + 0.5;
                e - e * e / 48.0
            })
            .filter(|e| *e < 11.25)
            .count();
        assert_eq!(below, 18);
        assert_eq!(m.count_states_below(1.0, 11.25).unwrap(), 18);
        assert_eq!(m.count_states_below(1.0, 1e300).unwrap(), 24);
        let h = PotentialModel::harmonic(1.0, 1.0).unwrap();
        assert_eq!(h.count_states_below(1.0, 0.0).unwrap(), 0);
        assert_eq!(h.count_states_below(1.0, 2.5).unwrap(), 2);
        assert!(PotentialModel::coulomb(1.0, 1.0, 0.0)
            .unwrap()
            .count_states_below(0.5, 0.0)
            .is_err());
    }

    #[test]
    fn morse_bound_count_formula() {
        for (d, beta, m, hbar) in [
            (12.0, 0.5, 6.0, 0.5),
            (12.0, 0.5, 6.0, 0.125),
            (3.0, 1.2, 1.0, 0.3),
        ] {
            let model = PotentialModel::morse(d, beta, m).unwrap();
            let lambda = (2.0f64 * m * d).sqrt() / (beta * hbar);
            let expected = (lambda - 0.5).floor() as usize + 1;
            assert_eq!(model.bound_state_count(hbar), Some(expected));
            // last bound level sits at or below the dissociation limit
            let top = model.analytic_level(hbar, expected - 1).unwrap();
            assert!(top <= d);
        }
    }

    #[test]
    fn tabulated_interpolates_linearly() {
        let t = TabulatedPotential::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(t.eval(0.5), 1.0);
        assert_eq!(t.eval(2.0), 1.0);
        assert_eq!(t.eval(-1.0), 0.0);
        assert_eq!(t.eval(5.0), 0.0);
        assert!(TabulatedPotential::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        let model = PotentialModel::tabulated(1.0, t).unwrap();
        assert!(matches!(
            model.analytic_levels(1.0, 1),
            Err(Error::NotImplemented(_))
        ));
    }

    #[test]
    fn constructors_reject_bad_parameters() {
        assert!(PotentialModel::harmonic(0.0, 1.0).is_err());
        assert!(PotentialModel::morse(12.0, -0.5, 6.0).is_err());
        assert!(PotentialModel::coulomb(1.0, 1.0, -0.1).is_err());
    }
}
