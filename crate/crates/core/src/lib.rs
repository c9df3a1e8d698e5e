//! Exact-diagonalization laboratory for ferromagnetic Heisenberg models.
//!
//! The crate builds spin Hamiltonians on finite graphs and chains, splits
//! their spectra by total spin, and checks the ferromagnetic ordering of
//! energy levels (FOEL): the lowest energy at total spin `S` strictly
//! decreases as `S` grows. Around that core sit the structures used to
//! prove the property on chains:
//!
//! * [`tl`]: Temperley-Lieb arc-diagram bases of highest-weight spaces,
//!   their sign and submatrix (dominance) structure, Perron-Frobenius ground
//!   vectors, and the higher-spin basis built from ordered Ising
//!   configurations.
//! * [`qgroup`]: the SU_q(2)-symmetric XXZ chain and its droplet energies.
//! * [`ssep`]: the symmetric simple exclusion process and its spectral gaps,
//!   related to the spin-1/2 model by an explicit unitary map.
//!
//! All matrices are real. Tensor-product bases put site 0 in the slowest
//! varying position and order each local factor by decreasing `S^3`.

pub mod eigen;
pub mod error;
pub mod graph;
pub mod halfint;
pub mod hamiltonian;
pub mod operator;
pub mod par;
pub mod qgroup;
pub mod report;
pub mod sector;
pub mod spin;
pub mod ssep;
pub mod tl;

pub use error::{Error, Result};
pub use graph::{ChainSpec, SpinGraph};
pub use halfint::HalfInt;
pub use operator::{BasisTag, RealOperator};
pub use sector::{FoelVerdict, SectorReport};
pub use spin::HilbertShape;
