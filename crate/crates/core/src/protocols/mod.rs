//! Logical-level 7-to-1 and 15-to-1 protocols, closed-form output error
//! rates and the exhaustive tableau oracle.

mod analytic;
mod oracle;
mod spec;

pub use analytic::{
    analytic_accept, analytic_accept_15to1, analytic_accept_7to1, analytic_pout,
    analytic_pout_15to1, analytic_pout_7to1, leading_coefficient,
};
pub use oracle::{
    discard_ratio, exhaustive_oracle, run_logical_shot, LogicalSimulator, OracleEntry, OracleTable,
    ShotRecord, WeightEnumerator,
};
pub use spec::{build_protocol, FrameRule, ProtocolKind, ProtocolSpec};
