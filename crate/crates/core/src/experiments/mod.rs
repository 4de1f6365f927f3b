//! Parameter sweeps over the two tripartite examples and randomized
//! verification suites.
//!
//! Grid points and trials are independent, so both run on the rayon pool.
//! Results are always returned in grid (or trial) order.

mod format;
pub mod sweep;
pub mod verify;

pub use format::format_sig;
pub use sweep::{
    run_example1, run_example2, run_sweep, write_csv, CouplingPoint, Example, SweepConfig,
    SweepRecord,
};
pub use verify::{
    verify_closed_forms, verify_measurement_robustness, verify_mixture_order, verify_rank_bounds,
    verify_white_noise_scaling, Check, Report, Suite,
};
