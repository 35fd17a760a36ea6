//! Scenario driver, fixture corpus and report emission for `emult`.

pub mod corpus;
pub mod error;
pub mod report;
pub mod scenario;

pub use corpus::{run_fixtures, FixtureResult, Provenance};
pub use error::{CliError, Result};
pub use report::{Format, TaskReport};
pub use scenario::{run_scenario, Scenario, TaskSpec};

use emult::{fixtures, Filtration};

/// Names accepted by [`builtin_filtration`], besides `tau:<expr>`.
pub const BUILTIN_NAMES: &[&str] = &[
    "pi-intersection",
    "rational-intersection",
    "ceil-pi-line",
    "principal",
    "shifted",
    "x-times-square",
    "x-cubed",
    "x-powers",
    "maximal",
];

/// A ready-made filtration by name; `tau:<expr>` gives `(x^2, x y^{expr})`.
pub fn builtin_filtration(name: &str) -> Option<Filtration> {
    if let Some(expr) = name.strip_prefix("tau:") {
        let ctx = emult::RingContext::with_dimension(2).ok()?;
        return Filtration::template(&ctx, &[&["2", "0"], &["1", expr]]).ok();
    }
    Some(match name {
        "pi-intersection" => fixtures::pi_intersection(),
        "rational-intersection" => fixtures::rational_intersection(),
        "ceil-pi-line" => fixtures::ceil_pi_line(),
        "principal" => fixtures::principal_powers(),
        "shifted" => fixtures::shifted_powers(),
        "x-times-square" => fixtures::x_times_square_powers(),
        "x-cubed" => fixtures::x_cubed_powers(),
        "x-powers" => fixtures::x_powers(),
        "maximal" => fixtures::maximal_powers(),
        _ => return None,
    })
}
