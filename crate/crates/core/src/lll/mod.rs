//! Flaw/action local search and the charge bookkeeping around it.

mod charges;
mod engine;

pub use charges::{
    check_commutativity, check_lll_condition, estimate_charges_exact, verify_lopsidependency,
    CausalityGraph, ChargeReport, CommutativityCheck, ExplicitFlaw, ExplicitSystem, LllCheck,
    LopsidependencyReport, SymmetricCheck,
};
pub use engine::{
    default_step_cap, run_flaw_list, run_local_search, FlawSpec, LocalSearch, RunTrace,
    TraceRecord,
};
