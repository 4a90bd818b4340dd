//! Per-step energy accounting.

/// One accounting row. All energies are nonnegative; `dissipation_cum` and
/// `forcing_work_cum` accumulate from the start of the run.
#[derive(Debug, Clone, Copy)]
pub struct LedgerRow {
    pub t: f64,
    pub mass: f64,
    /// `int (rho/2 + kappa) |u|^2`.
    pub kinetic: f64,
    /// `int a/(gamma-1) rho^gamma`.
    pub internal_gamma: f64,
    /// `int delta/(beta-1) rho^beta`.
    pub internal_beta: f64,
    /// `1/2 int |d eta/dt|^2` over the elastic arc.
    pub shell_kinetic: f64,
    /// Elastic energy `K(eta)`.
    pub shell_elastic: f64,
    pub dissipation_cum: f64,
    pub forcing_work_cum: f64,
    /// Positive part of the energy-balance violation at this step.
    pub inequality_residual: f64,
    pub min_density: f64,
    pub eta_sup: f64,
    pub jac_min: f64,
}

impl LedgerRow {
    pub fn total_energy(&self) -> f64 {
        self.kinetic + self.internal_gamma + self.internal_beta + self.shell_kinetic
            + self.shell_elastic
    }
}

/// Time-ordered energy ledger of a run.
#[derive(Debug, Clone, Default)]
pub struct EnergyLedger {
    pub rows: Vec<LedgerRow>,
}

impl EnergyLedger {
    pub fn push(&mut self, row: LedgerRow) {
        if let Some(last) = self.rows.last() {
            assert!(row.t > last.t, "ledger rows must increase in time");
        }
        self.rows.push(row);
    }

    pub fn initial_energy(&self) -> f64 {
        self.rows.first().map(|r| r.total_energy()).unwrap_or(0.0)
    }

    /// Largest inequality violation `E(t) + D(t) - E(0) - W(t)` over all rows.
    pub fn max_violation(&self) -> f64 {
        let e0 = self.initial_energy();
        self.rows
            .iter()
            .map(|r| r.total_energy() + r.dissipation_cum - e0 - r.forcing_work_cum)
            .fold(0.0, f64::max)
    }

    /// Relative drift of the total mass over the run.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.rows.first().map(|r| r.mass).unwrap_or(0.0);
        if m0 == 0.0 {
            return 0.0;
        }
        self.rows
            .iter()
            .map(|r| (r.mass - m0).abs() / m0.abs())
            .fold(0.0, f64::max)
    }

    pub fn min_density(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.min_density)
            .fold(f64::INFINITY, f64::min)
    }

    /// CSV header matching [`Self::csv_row`].
    pub const CSV_HEADER: &'static str = "t,mass,kinetic,internal_gamma,internal_beta,shell_kinetic,shell_elastic,dissipation_cum,forcing_work_cum,inequality_residual,min_density,eta_sup,jac_min";

    pub fn csv_row(row: &LedgerRow) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            row.t,
            row.mass,
            row.kinetic,
            row.internal_gamma,
            row.internal_beta,
            row.shell_kinetic,
            row.shell_elastic,
            row.dissipation_cum,
            row.forcing_work_cum,
            row.inequality_residual,
            row.min_density,
            row.eta_sup,
            row.jac_min
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: f64, kinetic: f64, dis: f64) -> LedgerRow {
        LedgerRow {
            t,
            mass: 1.0,
            kinetic,
            internal_gamma: 0.0,
            internal_beta: 0.0,
            shell_kinetic: 0.0,
            shell_elastic: 0.0,
            dissipation_cum: dis,
            forcing_work_cum: 0.0,
            inequality_residual: 0.0,
            min_density: 1.0,
            eta_sup: 0.0,
            jac_min: 1.0,
        }
    }

    #[test]
    fn violation_of_a_decaying_run_is_zero() {
        let mut l = EnergyLedger::default();
        l.push(row(0.0, 1.0, 0.0));
        l.push(row(0.1, 0.8, 0.15));
        l.push(row(0.2, 0.7, 0.25));
        assert!(l.max_violation() <= 1e-15);
    }

    #[test]
    fn violation_detects_energy_creation() {
        let mut l = EnergyLedger::default();
        l.push(row(0.0, 1.0, 0.0));
        l.push(row(0.1, 1.2, 0.0));
        assert!((l.max_violation() - 0.2).abs() < 1e-14);
    }
}
