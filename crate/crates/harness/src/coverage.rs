//! Records which library operations the suites actually invoke.

use std::collections::BTreeSet;
use std::sync::Mutex;

static SEEN: Mutex<BTreeSet<&'static str>> = Mutex::new(BTreeSet::new());

/// Operations that some suite must reach.
pub const REQUIRED_OPS: &[&str] = &[
    // energies
    "additive_energy",
    "multiplicative_energy",
    "t_plus_k",
    "e_plus_k",
    "d2_quantity",
    "check_progression_energy",
    // sl2
    "unipotent_u",
    "lower_unipotent",
    "v_matrix",
    "g_lambda_set",
    "mobius_apply",
    "t_k_group",
    "e_rk_group",
    "e_lk_group",
    "action_sum",
    "transitivity_bound_check",
    "trace_formula_check",
    "free_group_check",
    "t_2k_integer_mode",
    // incidence
    "count_hyperbola",
    "deviation",
    "bound_thm1",
    "bound_thm_hyp_full",
    "bound_progression",
    "bound_r_aa",
    "bound_asym_z",
    "bound_prop_re",
    "rho_bound",
    "shift_inverse_profile",
    // kloosterman
    "kloosterman_sum",
    "bilinear_form",
    "bound_basic",
    "bound_thm_nm",
    "saving_exponent_scan",
];

pub fn mark(op: &'static str) {
    SEEN.lock().expect("coverage lock").insert(op);
}

pub fn seen() -> BTreeSet<&'static str> {
    SEEN.lock().expect("coverage lock").clone()
}

/// Marks an operation and evaluates the call.
#[macro_export]
macro_rules! call {
    ($op:ident ( $($arg:expr),* $(,)? )) => {{
        $crate::coverage::mark(stringify!($op));
        $op($($arg),*)
    }};
}
