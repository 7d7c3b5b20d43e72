//! Run configuration, loadable from TOML.
//!
//! ```toml
//! seed = 7
//!
//! [tolerances]
//! chain = 1e-6
//! solver = 1e-7
//! equality = 1e-6
//!
//! [basis]
//! kernel = 48
//! hole = 32
//! green = 64
//! corner_poles = 32
//!
//! [sweep]
//! t_min = -6.0
//! t_max = -0.05
//! count = 40
//!
//! [quadrature]
//! # nodes = 1024
//!
//! [output]
//! # dir = "out"
//! svg = false
//! ```
//!
//! Every section and field is optional.

use std::path::{Path, PathBuf};

use confinv::chain::ChainConfig;
use confinv::kernels::KernelOptions;
use confinv::GreenOptions;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative slack on the chain ordering.
    pub chain: f64,
    /// Max-norm boundary residual for the Green's function.
    pub solver: f64,
    /// Relative gap below which a pair counts as an equality.
    pub equality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { chain: 1e-6, solver: 1e-7, equality: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BasisSizes {
    pub kernel: usize,
    pub hole: usize,
    pub green: usize,
    pub corner_poles: usize,
}

impl Default for BasisSizes {
    fn default() -> Self {
        let k = KernelOptions::default();
        BasisSizes {
            kernel: k.basis_size,
            hole: k.hole_basis,
            green: GreenOptions::default().basis_size,
            corner_poles: k.corner_poles,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid { t_min: -6.0, t_max: -0.05, count: 40 }
    }
}

impl SweepGrid {
    /// Log-spaced levels from `t_max` down to `t_min`.
    pub fn levels(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.t_max];
        }
        let (a, b) = ((-self.t_max).ln(), (-self.t_min).ln());
        (0..self.count).map(|k| -(a + (b - a) * k as f64 / (self.count - 1) as f64).exp()).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Quadrature {
    /// Boundary nodes per component; solver defaults when unset.
    pub nodes: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Output {
    pub dir: Option<PathBuf>,
    pub svg: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub basis: BasisSizes,
    pub sweep: SweepGrid,
    pub quadrature: Quadrature,
    pub output: Output,
    /// Seed for random interior probe points.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerances: Tolerances::default(),
            basis: BasisSizes::default(),
            sweep: SweepGrid::default(),
            quadrature: Quadrature::default(),
            output: Output::default(),
            seed: 7,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let t = &self.tolerances;
        for (name, v) in [("chain", t.chain), ("solver", t.solver), ("equality", t.equality)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("tolerance `{name}` must be positive")));
            }
        }
        if t.equality <= t.solver {
            return Err(CliError::Usage("equality tolerance must exceed the solver tolerance".into()));
        }
        let s = &self.sweep;
        if !(s.t_min < s.t_max && s.t_max < 0.0) || s.count == 0 {
            return Err(CliError::Usage("sweep grid needs t_min < t_max < 0 and count ≥ 1".into()));
        }
        if self.basis.kernel == 0 || self.basis.green == 0 {
            return Err(CliError::Usage("basis sizes must be positive".into()));
        }
        Ok(())
    }

    pub fn kernel_options(&self) -> KernelOptions {
        KernelOptions {
            basis_size: self.basis.kernel,
            hole_basis: self.basis.hole,
            nodes: self.quadrature.nodes,
            corner_poles: self.basis.corner_poles,
            ..KernelOptions::default()
        }
    }

    pub fn green_options(&self) -> GreenOptions {
        GreenOptions {
            basis_size: self.basis.green,
            nodes: self.quadrature.nodes,
            tolerance: self.tolerances.solver,
            corner_poles: self.basis.corner_poles,
            ..GreenOptions::default()
        }
    }

    pub fn chain_config(&self) -> ChainConfig {
        ChainConfig {
            kernel: self.kernel_options(),
            green: self.green_options(),
            chain_tolerance: self.tolerances.chain,
            equality_tolerance: self.tolerances.equality,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_toml_fills_defaults() {
        let cfg = RunConfig::from_toml("seed = 3\n[tolerances]\nequality = 1e-5\n").unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.tolerances.equality, 1e-5);
        assert_eq!(cfg.tolerances.chain, 1e-6);
        assert_eq!(cfg.basis, BasisSizes::default());
        assert_eq!(cfg.chain_config(), ChainConfig { equality_tolerance: 1e-5, ..ChainConfig::default() });
    }

    #[test]
    fn rejects_bad_tolerances() {
        assert!(RunConfig::from_toml("[tolerances]\nchain = -1.0\n").is_err());
        assert!(RunConfig::from_toml("[tolerances]\nequality = 1e-8\n").is_err());
        assert!(RunConfig::from_toml("colour = 1\n").is_err());
    }

    #[test]
    fn default_levels_match_the_library_grid() {
        let lv = SweepGrid::default().levels();
        let lib = confinv::green::default_t_grid();
        assert!(lv.iter().zip(&lib).all(|(a, b)| (a - b).abs() < 1e-15));
    }
}
