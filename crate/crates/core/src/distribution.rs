//! Photon-number distribution container shared by all computation methods.

use crate::real::Real;
use std::fmt;
use std::str::FromStr;

/// How a distribution was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Overlap integrals by Gauss-Hermite quadrature.
    ExactQuadrature,
    /// Overlap integrals by the three-term recurrence in the outcome index.
    ExactRecurrence,
    /// Semiclassical phase-space interference formula.
    Wkb,
    /// Closed form from the momentum density of the squeezed state.
    CohenClosedForm,
    /// Wigner-function weight of the outcome band.
    WignerRing,
}

impl Method {
    /// Stable command-line name.
    pub fn cli_name(self) -> &'static str {
        match self {
            Method::ExactQuadrature => "exact",
            Method::ExactRecurrence => "exact-recurrence",
            Method::Wkb => "wkb",
            Method::CohenClosedForm => "cohen",
            Method::WignerRing => "wigner-ring",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Method::ExactQuadrature),
            "exact-recurrence" => Ok(Method::ExactRecurrence),
            "wkb" => Ok(Method::Wkb),
            "cohen" => Ok(Method::CohenClosedForm),
            "wigner-ring" => Ok(Method::WignerRing),
            other => Err(format!(
                "unknown method '{other}' (expected exact | exact-recurrence | wkb | cohen | wigner-ring)"
            )),
        }
    }
}

/// Per-entry caveat attached to a distribution value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryFlag {
    /// The approximation broke down at this outcome: a tangency (vanishing
    /// crossing-region curvature difference) or a value outside [0, 1]. The
    /// entry is reported as computed but is not trustworthy.
    Tangency,
    /// True value below the clamping threshold; reported as 0.
    Clamped,
}

impl EntryFlag {
    pub fn csv_name(self) -> &'static str {
        match self {
            EntryFlag::Tangency => "tangency",
            EntryFlag::Clamped => "clamped",
        }
    }
}

impl fmt::Display for EntryFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.csv_name())
    }
}

/// Photon-number distribution P(m) for m = 0..values.len() of the state
/// S(r)|n>, computed by one method.
///
/// Every unflagged entry lies in [0, 1]; flagged entries carry the computed
/// value together with the reason it should not be trusted (or, for
/// [`EntryFlag::Clamped`], why it reads exactly 0).
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Distribution<T> {
    pub n: usize,
    pub r: T,
    pub method: Method,
    pub values: Vec<T>,
    pub flags: Vec<Option<EntryFlag>>,
    pub notes: Vec<String>,
}

impl<T: Real> Distribution<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of all entries (flagged ones included).
    pub fn sum(&self) -> T {
        self.values.iter().copied().sum()
    }

    /// Number of entries carrying the given flag.
    pub fn flag_count(&self, flag: EntryFlag) -> usize {
        self.flags.iter().filter(|f| **f == Some(flag)).count()
    }
}
