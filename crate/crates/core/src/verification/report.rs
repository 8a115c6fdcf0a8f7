use serde::Serialize;

/// One named right-side contribution of a ledger.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerTerm {
    pub name: String,
    pub exact: f64,
    /// Upper bound from the estimate chain, when the ledger has one.
    pub majorant: Option<f64>,
}

/// Left side, right-side terms and their relative gap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerReport {
    /// Cutoff radius for localized ledgers.
    pub radius: Option<f64>,
    pub left: f64,
    pub terms: Vec<LedgerTerm>,
    pub right: f64,
    /// `|left - right| / max(|left|, |right|, 1e-300)`.
    pub gap: f64,
}

impl LedgerReport {
    pub fn new(radius: Option<f64>, left: f64, terms: Vec<LedgerTerm>) -> Self {
        let right = terms.iter().map(|t| t.exact).sum();
        Self { radius, left, right, gap: relative_gap(left, right), terms }
    }

    pub fn term(&self, name: &str) -> Option<&LedgerTerm> {
        self.terms.iter().find(|t| t.name == name)
    }

    pub fn is_finite(&self) -> bool {
        self.left.is_finite()
            && self.terms.iter().all(|t| t.exact.is_finite() && t.majorant.map_or(true, f64::is_finite))
    }
}

pub(crate) fn relative_gap(left: f64, right: f64) -> f64 {
    (left - right).abs() / left.abs().max(right.abs()).max(1e-300)
}

pub(crate) fn term(name: &str, exact: f64, majorant: Option<f64>) -> LedgerTerm {
    LedgerTerm { name: name.to_string(), exact, majorant }
}

/// Relative `L^2` residuals of the two equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub r_mom: f64,
    pub r_mic: f64,
}
