//! The twelve algorithm tags: nine Neumann-Neumann variants plus the three
//! analysis-only formulations whose iteration matrices keep a unit eigenvalue.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Algorithm tag.
///
/// `Nn1a`..`Nn3c` are the nine variants; `Raw1b` and `Raw1c` are the
/// unadapted update-step formulations (modified Neumann step, original
/// two-parameter update), and `PairNn2a` keeps a pair of transmission
/// conditions on a Dirichlet-Dirichlet first step. The latter three stagnate
/// or diverge for every relaxation parameter and are exposed only through
/// the iteration-matrix analysis and the iteration engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Nn1a,
    Nn1b,
    Nn1c,
    Nn2a,
    Nn2b,
    Nn2c,
    Nn3a,
    Nn3b,
    Nn3c,
    Raw1b,
    Raw1c,
    PairNn2a,
}

/// How the first (Dirichlet) step imposes its interface data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirichletFamily {
    /// Robin on the left subdomain, Dirichlet trace on the right (category I).
    RobinDirichlet,
    /// Dirichlet traces on both subdomains (category II).
    DirichletDirichlet,
    /// Robin traces on both subdomains (category III).
    RobinRobin,
}

/// Which correction system the Neumann step solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeumannFamily {
    /// Pair correction: Robin on the left, Neumann on the right.
    RobinNeumann,
    /// Primal correction: Neumann on both sides.
    NeumannNeumann,
    /// Dual correction: Robin on both sides.
    RobinRobin,
}

/// Which interface trace the update step relaxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateKind {
    /// Relax with the correction values psi(alpha).
    ValueTrace,
    /// Relax with the Robin traces psi'(alpha) + d psi(alpha).
    RobinTrace,
    /// Two-parameter update: Robin trace on f, value trace on g.
    PairRobinValue,
    /// Two-parameter update with value traces on both unknowns.
    PairValueValue,
}

impl Variant {
    /// The nine algorithm variants in the order they are analyzed.
    pub const NINE: [Variant; 9] = [
        Variant::Nn1a,
        Variant::Nn1b,
        Variant::Nn1c,
        Variant::Nn2a,
        Variant::Nn2b,
        Variant::Nn2c,
        Variant::Nn3a,
        Variant::Nn3b,
        Variant::Nn3c,
    ];

    /// All twelve tags.
    pub const ALL: [Variant; 12] = [
        Variant::Nn1a,
        Variant::Nn1b,
        Variant::Nn1c,
        Variant::Nn2a,
        Variant::Nn2b,
        Variant::Nn2c,
        Variant::Nn3a,
        Variant::Nn3b,
        Variant::Nn3c,
        Variant::Raw1b,
        Variant::Raw1c,
        Variant::PairNn2a,
    ];

    /// The six variants that can contract uniformly with a suitable theta.
    pub const SOLVER_CANDIDATES: [Variant; 6] = [
        Variant::Nn1b,
        Variant::Nn1c,
        Variant::Nn2a,
        Variant::Nn2c,
        Variant::Nn3a,
        Variant::Nn3c,
    ];

    pub fn dirichlet_family(self) -> DirichletFamily {
        match self {
            Variant::Nn1a | Variant::Nn1b | Variant::Nn1c | Variant::Raw1b | Variant::Raw1c => {
                DirichletFamily::RobinDirichlet
            }
            Variant::Nn2a | Variant::Nn2b | Variant::Nn2c | Variant::PairNn2a => {
                DirichletFamily::DirichletDirichlet
            }
            Variant::Nn3a | Variant::Nn3b | Variant::Nn3c => DirichletFamily::RobinRobin,
        }
    }

    pub fn neumann_family(self) -> NeumannFamily {
        match self {
            Variant::Nn1a | Variant::Nn2c | Variant::Nn3c => NeumannFamily::RobinNeumann,
            Variant::Nn1b
            | Variant::Nn2a
            | Variant::Nn3b
            | Variant::Raw1b
            | Variant::PairNn2a => NeumannFamily::NeumannNeumann,
            Variant::Nn1c | Variant::Nn2b | Variant::Nn3a | Variant::Raw1c => {
                NeumannFamily::RobinRobin
            }
        }
    }

    pub fn update_kind(self) -> UpdateKind {
        match self {
            Variant::Nn1a | Variant::Raw1b | Variant::Raw1c => UpdateKind::PairRobinValue,
            Variant::PairNn2a => UpdateKind::PairValueValue,
            Variant::Nn1b | Variant::Nn2a | Variant::Nn2b | Variant::Nn2c => UpdateKind::ValueTrace,
            Variant::Nn1c | Variant::Nn3a | Variant::Nn3b | Variant::Nn3c => {
                UpdateKind::RobinTrace
            }
        }
    }

    /// True when the iteration carries two transmission unknowns (f, g).
    pub fn carries_pair(self) -> bool {
        matches!(
            self,
            Variant::Nn1a | Variant::Raw1b | Variant::Raw1c | Variant::PairNn2a
        )
    }

    /// Number of relaxation parameters the update step takes.
    pub fn theta_count(self) -> usize {
        if self.carries_pair() {
            2
        } else {
            1
        }
    }

    /// Analysis-only formulations with a structural unit eigenvalue.
    pub fn is_analysis_only(self) -> bool {
        matches!(self, Variant::Raw1b | Variant::Raw1c | Variant::PairNn2a)
    }

    /// Variants whose convergence factor grows like 4*nu*theta*d^2.
    pub fn diverges_for_positive_theta(self) -> bool {
        matches!(self, Variant::Nn2b | Variant::Nn3b)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Nn1a => "nn1a",
            Variant::Nn1b => "nn1b",
            Variant::Nn1c => "nn1c",
            Variant::Nn2a => "nn2a",
            Variant::Nn2b => "nn2b",
            Variant::Nn2c => "nn2c",
            Variant::Nn3a => "nn3a",
            Variant::Nn3b => "nn3b",
            Variant::Nn3c => "nn3c",
            Variant::Raw1b => "raw1b",
            Variant::Raw1c => "raw1c",
            Variant::PairNn2a => "pair-nn2a",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "nn1a" => Ok(Variant::Nn1a),
            "nn1b" => Ok(Variant::Nn1b),
            "nn1c" => Ok(Variant::Nn1c),
            "nn2a" => Ok(Variant::Nn2a),
            "nn2b" => Ok(Variant::Nn2b),
            "nn2c" => Ok(Variant::Nn2c),
            "nn3a" => Ok(Variant::Nn3a),
            "nn3b" => Ok(Variant::Nn3b),
            "nn3c" => Ok(Variant::Nn3c),
            "raw1b" => Ok(Variant::Raw1b),
            "raw1c" => Ok(Variant::Raw1c),
            "pair-nn2a" | "pairnn2a" | "pair2a" => Ok(Variant::PairNn2a),
            _ => Err(Error::InvalidParameter(format!("unknown variant `{s}`"))),
        }
    }
}
