use super::grid::GridParams;

/// Machine-readable summary of one solver run.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SolverReport {
    pub spec: String,
    pub grid: GridParams,
    pub iterations: usize,
    pub residual: f64,
    pub constant: f64,
    /// Grid constant minus the population-dynamics constant, when both ran.
    pub two_path_delta: Option<f64>,
}

impl SolverReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
