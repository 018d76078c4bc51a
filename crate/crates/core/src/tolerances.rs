//! Every tolerance used by the library in one record.
//!
//! Defaults are the values the acceptance suite is pinned to; callers
//! that need looser or tighter checks override individual fields.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Entrywise bound on `|m + m*|` for anti-Hermitian operators.
    pub anti_hermitian: f64,
    /// Spectral-norm bound on `u*u - I` for unitaries.
    pub unitary: f64,
    /// Angular distance to `-1` below which the principal log is refused.
    pub branch_cut_angle: f64,
    /// Relative tolerance for the power-iteration spectral norm.
    pub power_iteration_rtol: f64,
    /// Column norm versus spectral norm in minimality certificates.
    pub certificate: f64,
    /// Column orthogonality residuals in minimality certificates.
    pub orthogonality: f64,
    /// Absolute tolerance of the adaptive length quadrature.
    pub quadrature_atol: f64,
    /// Relative agreement between measured length and `t * norm`.
    pub length_rtol: f64,
    /// Variation of the Finsler speed along a geodesic.
    pub speed: f64,
    /// Slack allowed when comparing competitor paths to a geodesic.
    pub competitor_slack: f64,
    /// Eigenvector residual `|z(xi + eta) - i|z|(xi + eta)|`.
    pub eigenvector: f64,
    /// Great-circle planarity residual for the sphere reduction.
    pub planarity: f64,
    /// Additive slack on the BCH logarithm bound.
    pub bch: f64,
    /// Factorization and norm residuals in the crossing check.
    pub crossing: f64,
    /// Column residual in the column-multiple check.
    pub column: f64,
    /// Endpoint residuals (curve crossings, probe targets).
    pub endpoint: f64,
    /// Minimality witness `quotient_norm(Z) >= |Z| - witness`.
    pub witness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            anti_hermitian: 1e-12,
            unitary: 1e-10,
            branch_cut_angle: 1e-8,
            power_iteration_rtol: 1e-10,
            certificate: 1e-8,
            orthogonality: 1e-10,
            quadrature_atol: 1e-8,
            length_rtol: 1e-6,
            speed: 1e-8,
            competitor_slack: 1e-6,
            eigenvector: 1e-8,
            planarity: 1e-8,
            bch: 1e-10,
            crossing: 1e-9,
            column: 1e-9,
            endpoint: 1e-8,
            witness: 1e-5,
        }
    }
}
