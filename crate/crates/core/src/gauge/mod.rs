//! Gauge (Henstock–Kurzweil) integration.

mod alexiewicz;
mod integrate;
mod partition;
mod rule;
mod sum;

pub use alexiewicz::{alexiewicz_norm, alexiewicz_norm_with, DivergenceError};
pub use integrate::{henstock_integrate, GaugeIntegrator, IntegralResult, IntegratorConfig};
pub use partition::{is_delta_fine, riemann_sum, Gauge, PartitionError, TaggedCell, TaggedPartition};
pub use rule::{LobattoRule, PANEL_NODES};
pub use sum::NeumaierSum;
