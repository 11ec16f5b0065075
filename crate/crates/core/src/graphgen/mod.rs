//! Concrete graphs and set systems: generation, percolation and measurement.

mod graph;
mod percolate;
mod sample;
mod sets;

pub use graph::{degree_histogram, sparsity_check, Graph};
pub use percolate::{induced, percolate, percolated_degree_counts, Percolated};
pub(crate) use percolate::surviving_degree_counts;
pub use sample::{
    configuration_model, configuration_model_from_degrees, default_cap, sample_degrees,
    sample_family_degrees, DegreeSequenceSample, SampleSource, SpectrumSampler,
};
pub use sets::{percolate_sets, set_size_histogram, SetSystem};
