//! Gauge integration and Henstock–Orlicz space numerics on the real line.

pub mod constants;
pub mod funcspace;
pub mod gauge;
pub mod mollify;
pub mod orlicz;
pub mod verify;
pub mod young;

pub use funcspace::{corpus, corpus_entry, parse_expr, Expr, Integrability, Interval, RealFunction};
pub use gauge::{henstock_integrate, GaugeIntegrator, IntegralResult, IntegratorConfig};
pub use young::{ConjugatePair, YoungFunction};
