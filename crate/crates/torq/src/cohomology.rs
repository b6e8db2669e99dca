//! GKM graphs on the 1-skeleton, membership checks for piecewise polynomial
//! (H-theory, over Q or Z) and piecewise Laurent (K-theory, over Q) algebras,
//! restriction of polynomials to cones of the normal fan, and graded
//! dimensions (Hilbert function) of the piecewise polynomial algebra.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{kernel_basis, primitive_from_rational, reduced_row_echelon, rational_rank, saturate, Int, Rat};
use crate::poly::{divides_binomial, divides_linear, CoeffRing, Poly};
use crate::polytope::{Cone, FaceLattice, Polytope};
use crate::retraction::{find_retraction, BettiVector, RetractionOutcome};

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("polytope is not almost simple")]
    NotAlmostSimple,
    #[error("bad element: {0}")]
    BadElement(String),
    #[error("inconsistent Hilbert series at degree {0}")]
    InconsistentSeries(usize),
}

/// One edge of the GKM graph: the 1-face of the polytope it comes from, its
/// endpoints, and the primitive direction vector (sign-ambiguous).
#[derive(Debug, Clone)]
pub struct GkmEdge {
    pub face: usize,
    pub v: usize,
    pub w: usize,
    pub weight: Vec<Int>,
}

/// GKM graph: the 1-skeleton of the polytope with primitive edge directions
/// as weights.
#[derive(Debug, Clone)]
pub struct GkmGraph {
    pub num_vars: usize,
    pub num_vertices: usize,
    pub edges: Vec<GkmEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theory {
    H,
    K,
}

/// Candidate cohomology class: a (Laurent) polynomial per vertex.
#[derive(Debug, Clone)]
pub struct PiecewiseElement {
    pub theory: Theory,
    pub ring: CoeffRing,
    pub variables: Vec<String>,
    /// Indexed by polytope vertex.
    pub assignments: Vec<Poly>,
    /// Optional per-edge multiplier for the K-theory divisor 1 − t^{mλ},
    /// keyed by the sorted endpoint pair.
    pub multipliers: BTreeMap<(usize, usize), i64>,
}

/// Counterexample certificate for a failed membership check.
#[derive(Debug, Clone)]
pub struct Violation {
    pub v: usize,
    pub w: usize,
    pub weight: Vec<Int>,
    pub difference: Poly,
}

impl Violation {
    pub fn render(&self, variables: &[String]) -> String {
        let w: Vec<String> = self.weight.iter().map(|x| x.to_string()).collect();
        format!(
            "edge ({},{}) weight=({}): {} not divisible",
            self.v,
            self.w,
            w.join(","),
            crate::poly::print(&self.difference, variables)
        )
    }
}

/// GKM graph of an almost simple polytope: one weighted edge per 1-face.
pub fn gkm_graph(polytope: &Polytope, lattice: &FaceLattice) -> Result<GkmGraph, CohomologyError> {
    match find_retraction(polytope, lattice, None) {
        Ok(RetractionOutcome::Sequence(_)) => {}
        _ => return Err(CohomologyError::NotAlmostSimple),
    }
    Ok(gkm_graph_unchecked(polytope, lattice))
}

/// The weighted 1-skeleton without the almost-simplicity gate (used where the
/// caller has already certified it).
pub fn gkm_graph_unchecked(polytope: &Polytope, lattice: &FaceLattice) -> GkmGraph {
    let edges = lattice
        .edges()
        .into_iter()
        .map(|f| {
            let mut it = lattice.faces[f].vertex_set.iter();
            let v = *it.next().unwrap();
            let w = *it.next().unwrap();
            GkmEdge {
                face: f,
                v,
                w,
                weight: polytope.edge_direction(lattice, f),
            }
        })
        .collect();
    GkmGraph {
        num_vars: polytope.ambient_dim(),
        num_vertices: polytope.vertices.len(),
        edges,
    }
}

fn check_element(graph: &GkmGraph, x: &PiecewiseElement, theory: Theory) -> Result<(), CohomologyError> {
    if x.theory != theory {
        return Err(CohomologyError::BadElement("wrong theory".into()));
    }
    if x.assignments.len() != graph.num_vertices {
        return Err(CohomologyError::BadElement(format!(
            "expected {} assignments, found {}",
            graph.num_vertices,
            x.assignments.len()
        )));
    }
    if x.assignments.iter().any(|p| p.num_vars() != graph.num_vars) {
        return Err(CohomologyError::BadElement("variable count mismatch".into()));
    }
    Ok(())
}

/// H-theory GKM check: along every edge the difference of the endpoint
/// polynomials must be divisible by the edge weight, in the chosen ring.
pub fn gkm_check_h(
    graph: &GkmGraph,
    x: &PiecewiseElement,
    ring: CoeffRing,
) -> Result<Vec<Violation>, CohomologyError> {
    check_element(graph, x, Theory::H)?;
    let mut out = Vec::new();
    for e in &graph.edges {
        let diff = x.assignments[e.v].sub(&x.assignments[e.w]).unwrap();
        if diff.is_zero() {
            continue;
        }
        if divides_linear(&e.weight, &diff, ring).is_none() {
            out.push(Violation {
                v: e.v,
                w: e.w,
                weight: e.weight.clone(),
                difference: diff,
            });
        }
    }
    Ok(out)
}

/// K-theory GKM check: along every edge the difference must be divisible by
/// 1 − t^{mλ}, with λ the primitive edge weight and m the optional per-edge
/// multiplier (default 1). Coefficients over Q only.
pub fn gkm_check_k(graph: &GkmGraph, x: &PiecewiseElement) -> Result<Vec<Violation>, CohomologyError> {
    check_element(graph, x, Theory::K)?;
    let mut out = Vec::new();
    for e in &graph.edges {
        let diff = x.assignments[e.v].sub(&x.assignments[e.w]).unwrap();
        if diff.is_zero() {
            continue;
        }
        let key = (e.v.min(e.w), e.v.max(e.w));
        let m = *x.multipliers.get(&key).unwrap_or(&1);
        let weight: Vec<i64> = e
            .weight
            .iter()
            .map(|c| i64::try_from(c).expect("weight fits in i64") * m)
            .collect();
        if !divides_binomial(&weight, &diff) {
            out.push(Violation {
                v: e.v,
                w: e.w,
                weight: weight.iter().map(|&c| Int::from(c)).collect(),
                difference: diff,
            });
        }
    }
    Ok(out)
}

/// Canonical representative of f modulo the ideal of linear forms vanishing
/// on the span of the cone: eliminate the pivot variables of a reduced
/// annihilator basis by substitution.
pub fn restriction_to_cone(f: &Poly, cone: &Cone) -> Poly {
    let n = f.num_vars();
    let ann: Vec<Vec<Rat>> = if cone.generators.is_empty() {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect()
    } else {
        let rows: Vec<Vec<Rat>> = cone
            .generators
            .iter()
            .map(|g| g.iter().map(|x| Rat::from(x.clone())).collect())
            .collect();
        kernel_basis(&rows)
    };
    if ann.is_empty() {
        return f.clone();
    }
    let mut m = ann;
    let (rref, pivots) = reduced_row_echelon(&mut m);
    let mut out = f.clone();
    for (r, &p) in pivots.iter().enumerate() {
        // u_p = −Σ_{c ≠ p} rref[r][c]·u_c on the span of the cone
        let mut repl = Poly::zero(n);
        for (c, coeff) in rref[r].iter().enumerate() {
            if c != p && !coeff.is_zero() {
                repl = repl.sub(&Poly::var(n, c).scalar_mul(coeff)).unwrap();
            }
        }
        out = out.substitute(p, &repl);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpMode {
    Walls,
    AllFaces,
}

/// Piecewise polynomial membership: in `Walls` mode, for each edge of the
/// polytope the two endpoint polynomials must restrict equally to the wall
/// σ_e; `AllFaces` additionally compares across every shared face.
pub fn pp_check(
    polytope: &Polytope,
    lattice: &FaceLattice,
    x: &PiecewiseElement,
    mode: PpMode,
) -> Result<Vec<Violation>, CohomologyError> {
    let graph = gkm_graph_unchecked(polytope, lattice);
    check_element(&graph, x, Theory::H)?;
    let fan = polytope.normal_fan(lattice);
    let mut out = Vec::new();
    match mode {
        PpMode::Walls => {
            for e in &graph.edges {
                let cone = &fan.cones[e.face];
                let rv = restriction_to_cone(&x.assignments[e.v], cone);
                let rw = restriction_to_cone(&x.assignments[e.w], cone);
                if rv != rw {
                    out.push(Violation {
                        v: e.v,
                        w: e.w,
                        weight: e.weight.clone(),
                        difference: rv.sub(&rw).unwrap(),
                    });
                }
            }
        }
        PpMode::AllFaces => {
            for (fi, face) in lattice.faces.iter().enumerate() {
                let cone = &fan.cones[fi];
                let verts: Vec<usize> = face.vertex_set.iter().copied().collect();
                for (i, &v) in verts.iter().enumerate() {
                    for &w in &verts[i + 1..] {
                        let rv = restriction_to_cone(&x.assignments[v], cone);
                        let rw = restriction_to_cone(&x.assignments[w], cone);
                        if rv != rw {
                            out.push(Violation {
                                v,
                                w,
                                weight: Vec::new(),
                                difference: rv.sub(&rw).unwrap(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Monomial exponent vectors of total degree d in n variables, in a fixed
/// deterministic order.
fn monomials(n: usize, d: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, d: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 1 {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in 0..=d {
            cur.push(e);
            rec(n - 1, d - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Dimension of the degree-d graded pieces of the piecewise polynomial
/// algebra over Q, for d = 0..=d_max: nullity of the linear system imposed by
/// all wall conditions on homogeneous vertex assignments.
pub fn hilbert_function(
    polytope: &Polytope,
    lattice: &FaceLattice,
    d_max: usize,
) -> Vec<usize> {
    let n = polytope.ambient_dim();
    let nv = polytope.vertices.len();
    let graph = gkm_graph_unchecked(polytope, lattice);
    // lattice basis of each wall hyperplane λ^⊥
    let wall_bases: Vec<Vec<Vec<Int>>> = graph
        .edges
        .iter()
        .map(|e| {
            let row: Vec<Rat> = e.weight.iter().map(|x| Rat::from(x.clone())).collect();
            let ker = kernel_basis(&[row]);
            let prim: Vec<Vec<Int>> = ker
                .iter()
                .map(|v| primitive_from_rational(v).unwrap())
                .collect();
            saturate(&prim, n)
        })
        .collect();
    let mut dims = Vec::with_capacity(d_max + 1);
    for d in 0..=d_max as i64 {
        let mons = monomials(n, d);
        let cols = nv * mons.len();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for (e, basis) in graph.edges.iter().zip(&wall_bases) {
            // substitute u = Σ s_j·b_j into each monomial
            let k = basis.len();
            let coords: Vec<Poly> = (0..n)
                .map(|i| {
                    let mut p = Poly::zero(k);
                    for (j, b) in basis.iter().enumerate() {
                        if !b[i].is_zero() {
                            p = p.add(&Poly::var(k, j).scalar_mul(&Rat::from(b[i].clone()))).unwrap();
                        }
                    }
                    p
                })
                .collect();
            let substituted: Vec<Poly> = mons
                .iter()
                .map(|m| {
                    let mut p = Poly::one(k);
                    for (i, &ei) in m.iter().enumerate() {
                        for _ in 0..ei {
                            p = p.mul(&coords[i]).unwrap();
                        }
                    }
                    p
                })
                .collect();
            // one constraint row per monomial in the wall parameters
            for smon in monomials(k, d) {
                let mut row = vec![Rat::zero(); cols];
                let mut nonzero = false;
                for (mi, sp) in substituted.iter().enumerate() {
                    if let Some((_, c)) = sp.terms().find(|(ex, _)| **ex == smon) {
                        row[e.v * mons.len() + mi] += c;
                        row[e.w * mons.len() + mi] -= c;
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
        let rank = if rows.is_empty() { 0 } else { rational_rank(&rows) };
        dims.push(cols - rank);
    }
    dims
}

fn binom(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let mut r = 1i64;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

/// Recover Σ b₂ₖ tᵏ from the Hilbert values by n-fold finite differencing:
/// b_k = Σᵢ (−1)ⁱ C(n,i)·H(k−i). Degrees beyond n must difference to zero.
pub fn poincare_from_hilbert(n: usize, dims: &[usize]) -> Result<BettiVector, CohomologyError> {
    assert!(dims.len() > n, "need dims for degrees 0..=n at least");
    let h = |k: i64| -> i64 {
        if k < 0 || k as usize >= dims.len() {
            0
        } else {
            dims[k as usize] as i64
        }
    };
    let diff = |k: usize| -> i64 {
        (0..=n)
            .map(|i| (if i % 2 == 0 { 1 } else { -1 }) * binom(n, i) * h(k as i64 - i as i64))
            .sum()
    };
    let mut b = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let v = diff(k);
        if v < 0 {
            return Err(CohomologyError::InconsistentSeries(k));
        }
        b.push(v as usize);
    }
    for k in n + 1..dims.len() {
        if diff(k) != 0 {
            return Err(CohomologyError::InconsistentSeries(k));
        }
    }
    Ok(BettiVector(b))
}

/// Cross-check value Σₖ bₖ·C(d−k+n−1, n−1) for the Hilbert function of a free
/// module with bₖ generators in degree k over n polynomial variables.
pub fn free_module_hilbert(n: usize, betti: &BettiVector, d: usize) -> usize {
    betti
        .0
        .iter()
        .enumerate()
        .map(|(k, &b)| {
            if d < k {
                0
            } else {
                b * binom(d - k + n - 1, n - 1) as usize
            }
        })
        .sum()
}
