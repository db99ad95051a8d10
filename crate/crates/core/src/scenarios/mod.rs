//! Canonical model library: the free resonant, null-resonant and
//! non-resonant drives, the two perturbed resonant cases, Heisenberg-couple
//! checks, and the per-scenario checklists run by the suite.

mod builtin;
mod checklist;
mod heisenberg;

pub use builtin::{
    builtin_names, builtin_scenarios, scenario_by_name, Diagnostic, Expectation, NamedScenario, COMPACT_AMPLITUDE, COMPACT_CUT, COMPACT_L, COMPACT_N,
    COMPACT_TAPER, NONRES_RATIO, STRICT_AMPLITUDE,
};
pub use checklist::{run_checklist, Check, ScenarioChecklist};
pub use heisenberg::{coordinate_frame, exact_shift_model, heisenberg_couple_check, ks_uniform_distance, HeisenbergCouple};
