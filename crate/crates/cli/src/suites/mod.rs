//! Verification batteries, one per suite name.

mod algebra;
mod geometry;
mod polarization;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::config::RunConfig;
use crate::report::SuiteReport;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Algebra,
    Kms,
    Podles,
    Geometry,
    BsLeaves,
    Norms,
    Asymptotics,
    Bridge,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Algebra,
        Suite::Kms,
        Suite::Podles,
        Suite::Geometry,
        Suite::BsLeaves,
        Suite::Norms,
        Suite::Asymptotics,
        Suite::Bridge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Kms => "kms",
            Suite::Podles => "podles",
            Suite::Geometry => "geometry",
            Suite::BsLeaves => "bs-leaves",
            Suite::Norms => "norms",
            Suite::Asymptotics => "asymptotics",
            Suite::Bridge => "bridge",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| CliError::UnknownSuite(s.to_string()))
    }
}

/// Run one suite. Numerical failures inside a check are reported as failing
/// checks; only an invalid config is an error.
pub fn run_suite(suite: Suite, config: &RunConfig) -> Result<SuiteReport, CliError> {
    config.validate()?;
    let start = Instant::now();
    let (checks, table) = match suite {
        Suite::Algebra => (algebra::algebra(config), None),
        Suite::Kms => (algebra::kms(config), None),
        Suite::Podles => (algebra::podles(config), None),
        Suite::Geometry => (geometry::geometry(config), None),
        Suite::BsLeaves => polarization::bs_leaves(config),
        Suite::Norms => polarization::norms(config),
        Suite::Asymptotics => polarization::asymptotics(config),
        Suite::Bridge => (polarization::bridge(config), None),
    };
    let mut report = SuiteReport::new(suite.name(), checks, table);
    report.wall_time = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
