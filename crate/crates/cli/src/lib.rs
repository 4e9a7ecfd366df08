//! Scenario files, the built-in registry, the runner and its reports.

pub mod registry;
pub mod report;
pub mod run;
pub mod scenario;

pub use registry::{registry, select};
pub use report::{emit, from_json, to_json, to_text, Format};
pub use run::{exit_code, run_all, run_scenario, Document, Outcome, RunOptions, RunReport, RunStatus};
pub use scenario::{parse_scenario, parse_scenario_bytes, ParseError, ParseErrors, Pipeline, Scenario};

use momentkit_core::symcheck::Context;
use momentkit_core::Tolerances;

/// Environment variable holding a comma-separated tolerance override list.
pub const TOL_OVERRIDE_ENV: &str = "MOMENTKIT_TOL_OVERRIDE";

/// Default context, with overrides from [`TOL_OVERRIDE_ENV`] applied.
pub fn context_from_env() -> Result<Context, String> {
    let tol = match std::env::var(TOL_OVERRIDE_ENV) {
        Ok(spec) => Tolerances::default().with_overrides(&spec)?,
        Err(_) => Tolerances::default(),
    };
    Ok(Context::with_tol(tol))
}
