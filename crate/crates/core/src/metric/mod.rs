//! Metric pairs, label spaces and the 1-strengthened metric.

mod label;
mod pair;

pub use label::{Label, LabelSpace, DEFAULT_GRID, LOEWNER_TOLERANCE};
pub use pair::{
    is_uniformly_discrete, BirthDeath, BirthDeathSpace, ComplexCirclePair, ComplexPoint, MetricPair,
    QuotientPoint,
};

