//! Temperley-Lieb arc-diagram bases of highest-weight spaces and their
//! higher-spin generalization.
//!
//! For spin 1/2 a diagram on `k` vertices with `n` arcs stands for the tensor
//! product of `q`-singlets `ξ_q = q|+-⟩ - |-+⟩` on its arcs and `|+⟩` on its
//! unpaired vertices. These vectors form a basis of the highest-weight space
//! of spin `k/2 - n`, and nearest-neighbour interactions act on them by
//! simple re-arching rules with nonnegative coefficients off the diagonal.
//!
//! Vertices are numbered from 0.

pub mod diagram;
pub mod fk;
pub mod matrix;
pub mod perron;

pub use diagram::{
    embed_diagram, enumerate_arc_diagrams, expand_diagram_to_tensor, tl_generator_action,
    ArcDiagram, DiagramCombination,
};
pub use fk::{fk_hamiltonian_matrix, fk_highest_weight_basis, FkBasisVector, FkMatrix, OrderedIsingBlock};
pub use matrix::{check_dominance, tl_hamiltonian_matrix, DominanceVerdict, TLMatrix};
pub use perron::{
    is_irreducible, min_spec_comparison, perron_ground_vector, spectral_radius_comparison,
    ComparisonVerdict, PerronVector,
};
