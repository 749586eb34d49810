//! From sampled total independent sets to fractional total colourings.

mod chift;
mod cover;
mod glue;
mod weights;

pub use chift::{
    exact_chi_f, fractional_chromatic, fractional_total_chromatic, maximal_independent_sets,
    LpSolution, MAX_UNIVERSE, SET_CAP,
};
pub use cover::{uniform_pm_cover, PmCover};
pub use glue::{bridge_glue, covers_exactly, glued_graph, GlueInput, TisMultiset};
pub use weights::{
    assemble, assemble_final, average_over_decomposition, estimate_weights, thin_element,
    thinning_keep_probability, Aggregates, AssemblyReport, DecompositionWeights, TypeAggregate,
    WeightEstimate, MIN_TRIALS,
};
