//! Highest-weight basis for chains of arbitrary spins from ordered Ising
//! configurations, and the Hamiltonian matrix in that basis.
//!
//! Site `x` with spin `s_x` is a block of `2 s_x` arrows; a configuration
//! fixes the number of down arrows per block, placed at the start of the
//! block. Down arrows are paired with the nearest unpaired up arrow to their
//! left. Configurations where every down arrow is paired give highest-weight
//! vectors: singlets on the arcs, up spins elsewhere, then each block is
//! projected onto its symmetric (spin `s_x`) subspace.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::eigen::symmetric_eigenvalues;
use crate::graph::ChainSpec;
use crate::hamiltonian::build_normalized_chain;
use crate::operator::binomial;
use crate::spin::HilbertShape;
use crate::{Error, HalfInt, Result};

/// Gram matrices with a larger condition number are refused.
pub const GRAM_CONDITION_LIMIT: f64 = 1e12;

/// One site: `downs` of its `2s` arrows point down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrderedIsingBlock {
    pub spin: HalfInt,
    pub downs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FkBasisVector {
    pub blocks: Vec<OrderedIsingBlock>,
    /// Arcs `(up, down)` between arrow positions, numbered across all blocks.
    pub arcs: Vec<(usize, usize)>,
    /// The vector in the product basis (site 0 slowest, local index `s - m`).
    #[serde(skip)]
    pub expanded: DVector<f64>,
}

/// Pairs each down arrow with the nearest unpaired up arrow to its left.
/// Returns the arcs and whether every down arrow found a partner.
fn pair_arrows(arrows: &[bool]) -> (Vec<(usize, usize)>, bool) {
    let mut ups = Vec::new();
    let mut arcs = Vec::new();
    let mut complete = true;
    for (i, &up) in arrows.iter().enumerate() {
        if up {
            ups.push(i);
        } else if let Some(u) = ups.pop() {
            arcs.push((u, i));
        } else {
            complete = false;
        }
    }
    arcs.sort_unstable();
    (arcs, complete)
}

fn arrows_of(blocks: &[OrderedIsingBlock]) -> Vec<bool> {
    blocks
        .iter()
        .flat_map(|b| {
            let n = b.spin.twice() as usize;
            (0..n).map(move |i| i >= b.downs)
        })
        .collect()
}

fn expand(shape: &HilbertShape, blocks: &[OrderedIsingBlock], arcs: &[(usize, usize)]) -> DVector<f64> {
    let arrows = arrows_of(blocks);
    let mut owner = Vec::with_capacity(arrows.len());
    for (x, b) in blocks.iter().enumerate() {
        owner.extend(std::iter::repeat_n(x, b.spin.twice() as usize));
    }
    let mut v = DVector::zeros(shape.dim());
    let mut downs = vec![0usize; blocks.len()];
    for choice in 0..(1usize << arcs.len()) {
        downs.iter_mut().for_each(|d| *d = 0);
        let mut sign = 1.0;
        for (j, &(u, d)) in arcs.iter().enumerate() {
            // Singlet |↑↓⟩ - |↓↑⟩ on (u, d).
            if choice >> j & 1 == 0 {
                downs[owner[d]] += 1;
            } else {
                downs[owner[u]] += 1;
                sign = -sign;
            }
        }
        // Projecting a block with m down arrows onto |s, s-m⟩ gives 1/sqrt(C(2s, m)).
        let weight: f64 = blocks
            .iter()
            .zip(&downs)
            .map(|(b, &m)| 1.0 / (binomial(b.spin.twice() as usize, m) as f64).sqrt())
            .product();
        v[shape.index(&downs)] += sign * weight;
    }
    v
}

/// Highest-weight vectors of total spin `S`, one per ordered Ising
/// configuration with `S_max - S` down arrows, all of them paired.
/// Configurations are listed in lexicographic order of the per-site down counts.
pub fn fk_highest_weight_basis(spins: &[HalfInt], spin: HalfInt) -> Result<Vec<FkBasisVector>> {
    let shape = HilbertShape::from_spins(spins)?;
    let s_max: HalfInt = spins.iter().copied().sum();
    let deviation = s_max - spin;
    if spin.is_negative() || deviation.is_negative() || !deviation.is_integer() {
        return Err(Error::EmptySector(spin));
    }
    let total_downs = (deviation.twice() / 2) as usize;
    let mut out = Vec::new();
    let mut downs = vec![0usize; spins.len()];
    compositions(spins, 0, total_downs, &mut downs, &mut |d| {
        let blocks: Vec<OrderedIsingBlock> = spins
            .iter()
            .zip(d)
            .map(|(&spin, &downs)| OrderedIsingBlock { spin, downs })
            .collect();
        let (arcs, complete) = pair_arrows(&arrows_of(&blocks));
        if complete {
            let expanded = expand(&shape, &blocks, &arcs);
            out.push(FkBasisVector { blocks, arcs, expanded });
        }
    });
    Ok(out)
}

// Lexicographic enumeration of down counts with 0 <= d_x <= 2 s_x summing to `left`.
fn compositions(
    spins: &[HalfInt],
    x: usize,
    left: usize,
    downs: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if x == spins.len() {
        if left == 0 {
            f(downs);
        }
        return;
    }
    let cap = spins[x].twice() as usize;
    for d in 0..=cap.min(left) {
        downs[x] = d;
        compositions(spins, x + 1, left - d, downs, f);
    }
    downs[x] = 0;
}

#[derive(Clone, Debug)]
pub struct FkMatrix {
    pub basis: Vec<FkBasisVector>,
    /// `H V = V A` with `V` the expanded basis vectors as columns.
    pub a: DMatrix<f64>,
    pub gram_condition: f64,
    /// `max |H V - V A|`; small when the span is invariant.
    pub residual: f64,
    /// Largest off-diagonal entry of `A` (zero for 1×1).
    pub max_offdiagonal: f64,
}

/// Matrix of the normalized chain Hamiltonian in the highest-weight basis of
/// spin `S`, obtained as `A = G^{-1} Vᵀ H V` with Gram matrix `G = Vᵀ V`.
pub fn fk_hamiltonian_matrix(spins: &[HalfInt], couplings: &[f64], spin: HalfInt) -> Result<FkMatrix> {
    let chain = ChainSpec::new(spins.to_vec(), couplings.to_vec())?;
    let basis = fk_highest_weight_basis(spins, spin)?;
    if basis.is_empty() {
        return Err(Error::EmptySector(spin));
    }
    let h = build_normalized_chain(&chain)?;
    let n = basis.len();
    let dim = basis[0].expanded.len();
    let mut v = DMatrix::zeros(dim, n);
    for (j, b) in basis.iter().enumerate() {
        v.set_column(j, &b.expanded);
    }
    let mut hv = DMatrix::zeros(dim, n);
    for (j, b) in basis.iter().enumerate() {
        hv.set_column(j, &h.apply(&b.expanded));
    }
    let gram = v.transpose() * &v;
    let eig = symmetric_eigenvalues(&gram);
    let gram_condition = if eig[0] > 0.0 { eig[n - 1] / eig[0] } else { f64::INFINITY };
    if gram_condition.is_nan() || gram_condition > GRAM_CONDITION_LIMIT {
        return Err(Error::IllConditioned { condition: gram_condition });
    }
    let rhs = v.transpose() * &hv;
    let a = gram
        .cholesky()
        .ok_or_else(|| Error::Numerical("Gram matrix is not positive definite".into()))?
        .solve(&rhs);
    let residual = (&hv - &v * &a).amax();
    if residual > 1e-9 * hv.amax().max(1.0) {
        return Err(Error::NotInvariant { with: "highest-weight span", norm: residual });
    }
    let mut max_offdiagonal = if n > 1 { f64::NEG_INFINITY } else { 0.0 };
    for i in 0..n {
        for j in 0..n {
            if i != j {
                max_offdiagonal = max_offdiagonal.max(a[(i, j)]);
            }
        }
    }
    Ok(FkMatrix { basis, a, gram_condition, residual, max_offdiagonal })
}
