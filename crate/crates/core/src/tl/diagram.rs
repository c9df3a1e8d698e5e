//! Arc diagrams, their enumeration, the generator action and tensor expansion.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DVector;
use serde::Serialize;

use crate::report::{Cell, CsvTable};
use crate::{Error, Result};

/// Non-crossing partial pairing of `k` ordered vertices in which no arc spans
/// an unpaired vertex. Arcs are stored as `(left, right)` sorted by `left`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ArcDiagram {
    k: usize,
    arcs: Vec<(usize, usize)>,
}

impl ArcDiagram {
    pub fn new(k: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut arcs: Vec<(usize, usize)> =
            arcs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        arcs.sort_unstable();
        let d = ArcDiagram { k, arcs };
        d.validate()?;
        Ok(d)
    }

    /// The diagram without arcs.
    pub fn empty(k: usize) -> Self {
        ArcDiagram { k, arcs: Vec::new() }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(format!("arc diagram: {msg}")));
        let mut partner = vec![None; self.k];
        for &(a, b) in &self.arcs {
            if a == b || b >= self.k {
                return bad(format!("arc [{a},{b}] out of range for {} vertices", self.k));
            }
            if partner[a].is_some() || partner[b].is_some() {
                return bad(format!("vertex shared by two arcs at [{a},{b}]"));
            }
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        for &(a, b) in &self.arcs {
            for &(c, d) in &self.arcs {
                if a < c && c < b && b < d {
                    return bad(format!("arcs [{a},{b}] and [{c},{d}] cross"));
                }
            }
            if let Some(u) = (a + 1..b).find(|&u| partner[u].is_none()) {
                return bad(format!("arc [{a},{b}] spans unpaired vertex {u}"));
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn n_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        self.arcs.iter().find_map(|&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn is_unpaired(&self, v: usize) -> bool {
        self.partner(v).is_none()
    }

    /// Smallest `m` such that every vertex `>= m` is unpaired.
    pub fn support(&self) -> usize {
        self.arcs.iter().map(|&(_, b)| b + 1).max().unwrap_or(0)
    }

    /// Arc list as `a-b;c-d`.
    pub fn arc_string(&self) -> String {
        self.arcs
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Canonical order: vertex count, arc count, support, then the arc list.
///
/// Ordering by support first means that, among diagrams on `k+1` vertices,
/// those with the last vertex unpaired (the images of [`embed_diagram`])
/// come first and in the same relative order as on `k` vertices.
impl Ord for ArcDiagram {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.k, self.arcs.len(), self.support(), &self.arcs).cmp(&(
            other.k,
            other.arcs.len(),
            other.support(),
            &other.arcs,
        ))
    }
}

impl PartialOrd for ArcDiagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ArcDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.arcs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{a},{b}]")?;
        }
        write!(f, "}}/{}", self.k)
    }
}

/// All diagrams with `n` arcs on `k` vertices, in canonical order.
/// There are `C(k,n) - C(k,n-1)` of them.
pub fn enumerate_arc_diagrams(k: usize, n: usize) -> Vec<ArcDiagram> {
    let mut out = Vec::new();
    if 2 * n <= k {
        let mut stack = Vec::new();
        let mut arcs = Vec::new();
        grow(k, n, 0, &mut stack, &mut arcs, &mut out);
    }
    out.sort();
    out
}

// Scan vertices left to right: open an arc, close the innermost open arc, or
// leave the vertex unpaired (only allowed when no arc is open).
fn grow(
    k: usize,
    n: usize,
    v: usize,
    stack: &mut Vec<usize>,
    arcs: &mut Vec<(usize, usize)>,
    out: &mut Vec<ArcDiagram>,
) {
    let remaining = k - v;
    if remaining == 0 {
        if stack.is_empty() && arcs.len() == n {
            let mut a = arcs.clone();
            a.sort_unstable();
            out.push(ArcDiagram { k, arcs: a });
        }
        return;
    }
    // Arcs still to be closed or opened must fit in the remaining vertices.
    let open = stack.len();
    let to_open = n - arcs.len() - open;
    if open + 2 * to_open > remaining {
        return;
    }
    if to_open > 0 {
        stack.push(v);
        grow(k, n, v + 1, stack, arcs, out);
        stack.pop();
    }
    if let Some(a) = stack.pop() {
        arcs.push((a, v));
        grow(k, n, v + 1, stack, arcs, out);
        arcs.pop();
        stack.push(a);
    }
    if stack.is_empty() {
        grow(k, n, v + 1, stack, arcs, out);
    }
}

/// Same arcs on one more vertex; the new last vertex is unpaired.
pub fn embed_diagram(d: &ArcDiagram) -> ArcDiagram {
    ArcDiagram { k: d.k + 1, arcs: d.arcs.clone() }
}

/// Finite linear combination of diagrams, iterated in canonical order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiagramCombination {
    terms: BTreeMap<ArcDiagram, f64>,
}

impl DiagramCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(d: ArcDiagram, c: f64) -> Self {
        let mut out = Self::default();
        out.add(d, c);
        out
    }

    pub fn add(&mut self, d: ArcDiagram, c: f64) {
        *self.terms.entry(d).or_insert(0.0) += c;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|&c| c == 0.0)
    }

    pub fn coefficient(&self, d: &ArcDiagram) -> f64 {
        self.terms.get(d).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ArcDiagram, f64)> {
        self.terms.iter().map(|(d, &c)| (d, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `U_x |d⟩` for the generator on vertices `x, x+1`, where
/// `U = -(1/q) ξ_q ξ_qᵀ`.
///
/// * both vertices unpaired: zero;
/// * `[x, x+1]` is an arc: `-(q + 1/q)` times `d`;
/// * one vertex paired with `u`, the other unpaired: `u` becomes unpaired and
///   `[x, x+1]` is added, coefficient `+1`;
/// * `x` paired with `a`, `x+1` with `b`: both arcs are replaced by
///   `[x, x+1]` and `[min(a,b), max(a,b)]`, coefficient `+1`.
pub fn tl_generator_action(d: &ArcDiagram, x: usize, q: f64) -> Result<DiagramCombination> {
    if x + 1 >= d.k {
        return Err(Error::InvalidParameter(format!(
            "generator index {x} out of range for {} vertices",
            d.k
        )));
    }
    let (px, py) = (d.partner(x), d.partner(x + 1));
    let without = |vs: &[usize]| -> Vec<(usize, usize)> {
        d.arcs
            .iter()
            .copied()
            .filter(|&(a, b)| !vs.contains(&a) && !vs.contains(&b))
            .collect()
    };
    let rearched = |mut arcs: Vec<(usize, usize)>| {
        arcs.push((x, x + 1));
        arcs.sort_unstable();
        ArcDiagram { k: d.k, arcs }
    };
    Ok(match (px, py) {
        (None, None) => DiagramCombination::zero(),
        (Some(p), _) if p == x + 1 => DiagramCombination::single(d.clone(), -(q + 1.0 / q)),
        (Some(_), None) => DiagramCombination::single(rearched(without(&[x])), 1.0),
        (None, Some(_)) => DiagramCombination::single(rearched(without(&[x + 1])), 1.0),
        (Some(a), Some(b)) => {
            let mut arcs = without(&[x, x + 1]);
            arcs.push((a.min(b), a.max(b)));
            DiagramCombination::single(rearched(arcs), 1.0)
        }
    })
}

/// `ξ_q = q|+-⟩ - |-+⟩` on every arc, `|+⟩` on every unpaired vertex, in the
/// product basis with vertex 0 slowest and `|+⟩` as local index 0.
pub fn expand_diagram_to_tensor(d: &ArcDiagram, q: f64) -> DVector<f64> {
    let k = d.k;
    let mut v = DVector::zeros(1usize << k);
    let n = d.arcs.len();
    for choice in 0..(1usize << n) {
        let mut bits = 0usize;
        let mut coef = 1.0;
        for (j, &(a, b)) in d.arcs.iter().enumerate() {
            // Bit set means spin down at that vertex.
            if choice >> j & 1 == 0 {
                bits |= 1 << (k - 1 - b);
                coef *= q;
            } else {
                bits |= 1 << (k - 1 - a);
                coef = -coef;
            }
        }
        v[bits] += coef;
    }
    v
}

/// Columns `id, arcs` with arcs rendered as `a-b;c-d`.
pub fn diagram_basis_csv(basis: &[ArcDiagram]) -> CsvTable {
    let mut t = CsvTable::new(&["id", "arcs"]);
    for (i, d) in basis.iter().enumerate() {
        t.push(vec![Cell::from(i), Cell::Text(d.arc_string())]);
    }
    t
}
