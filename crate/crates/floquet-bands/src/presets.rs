use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Named potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// `V = 0`
    Free,
    /// `V = cos 2x`
    Mathieu,
    /// `V = cos 2x + i·v0·sin 2x`
    PtLattice,
    /// `V = exp(2ix)`
    PtExp,
}

/// `v0` used by `pt-lattice` when none is given.
pub const DEFAULT_V0: f64 = 0.3;

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Free, Preset::Mathieu, Preset::PtLattice, Preset::PtExp];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Free => "free",
            Preset::Mathieu => "mathieu",
            Preset::PtLattice => "pt-lattice",
            Preset::PtExp => "pt-exp",
        }
    }

    pub fn takes_v0(self) -> bool {
        self == Preset::PtLattice
    }

    /// Potential text in the expression language.
    pub fn potential(self, v0: Option<f64>) -> String {
        match self {
            Preset::Free => "0".into(),
            Preset::Mathieu => "cos(2*x)".into(),
            Preset::PtLattice => format!("cos(2*x)+{}i*sin(2*x)", v0.unwrap_or(DEFAULT_V0)),
            Preset::PtExp => "exp(2i*x)".into(),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset '{s}' (expected free, mathieu, pt-lattice or pt-exp)"))
    }
}
