use hdx_walks::certify::ExactCaps;
use serde::Serialize;

/// Everything that determines a report's contents. Embedded in every report
/// so a run can be repeated. The thread count is left out: results do not
/// depend on it.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    /// Input path as given on the command line.
    pub input: Option<String>,
    /// Output path, if any.
    pub output: Option<String>,
    /// Walk or spectrum level; `null` for all levels.
    pub level: Option<isize>,
    /// Walk length. Default 10.
    pub steps: Option<usize>,
    /// Default 0.
    pub seed: u64,
    /// Default subset 22, cochain 20.
    pub caps: ExactCaps,
    /// Mixing-bound allowance. Default 1e-6.
    pub tolerance: Option<f64>,
    /// Samples, trajectories or proof-trace instances, per command.
    pub trials: Option<u64>,
    /// Other per-command switches, e.g. `lazy`, `sampled`, `all`.
    pub flags: Vec<&'static str>,
}

impl RunConfig {
    pub fn new(command: &'static str) -> Self {
        RunConfig {
            command,
            input: None,
            output: None,
            level: None,
            steps: None,
            seed: 0,
            caps: ExactCaps::default(),
            tolerance: None,
            trials: None,
            flags: Vec::new(),
        }
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// Two comment lines for text reports.
    pub fn text_header(&self) -> String {
        format!(
            "# {}\n# config {}\n",
            hdx_walks::certify::version(),
            serde_json::to_string(self).expect("serializable")
        )
    }
}
