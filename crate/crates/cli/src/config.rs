use podles_core::special::QuadratureSpec;

use crate::CliError;

/// Everything a suite run depends on. Two runs with equal configs produce
/// equal reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub hbar: f64,
    /// Matrix size `N` for shift-space representations.
    pub truncation: usize,
    /// Series cutoff `M` for the sphere generators.
    pub cutoff: u64,
    /// Window `m, m + n <= window` for groupoid checks.
    pub window: u64,
    /// Largest section degree for norm tables and asymptotics.
    pub nmax: u32,
    pub quad: QuadratureSpec,
    /// Seed of the ChaCha8 generator used for random instances.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            hbar: 0.5,
            truncation: 64,
            cutoff: 30,
            window: 30,
            nmax: 40,
            quad: QuadratureSpec::default(),
            seed: 7,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::InvalidConfig(msg));
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return bad(format!("hbar must be positive, got {}", self.hbar));
        }
        if self.truncation < 2 {
            return bad(format!("truncation must be at least 2, got {}", self.truncation));
        }
        if self.cutoff < 3 {
            return bad(format!("cutoff must be at least 3, got {}", self.cutoff));
        }
        if self.window < 1 {
            return bad("window must be at least 1".into());
        }
        if self.nmax < 5 {
            return bad(format!("nmax must be at least 5, got {}", self.nmax));
        }
        self.quad
            .validate()
            .map_err(|e| CliError::InvalidConfig(e.to_string()))
    }

    /// `(key, value)` pairs in key order, as echoed in reports.
    pub fn echo(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("cutoff", self.cutoff as f64),
            ("hbar", self.hbar),
            ("nmax", self.nmax as f64),
            ("quad_max_panels", self.quad.max_panels as f64),
            ("quad_nodes", self.quad.nodes_per_panel as f64),
            ("quad_rel_tol", self.quad.rel_tol),
            ("quad_split", self.quad.split_point),
            ("seed", self.seed as f64),
            ("truncation", self.truncation as f64),
            ("window", self.window as f64),
        ]
    }
}
