//! Retraction sequences of polytopal complexes: free-vertex detection, the
//! backtracking search deciding almost-simplicity, height-function retractions
//! for simple polytopes, and Betti numbers from the k-sequence.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::linalg::{Int, Rat};
use crate::polytope::{FaceLattice, Polytope};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RetractionError {
    #[error("hinted vertex {vertex} is not free at stage {stage}")]
    InvalidHint { stage: usize, vertex: usize },
    #[error("polytope is not simple")]
    NotSimple,
    #[error("height function is not generic: vertices {0} and {1} have equal height")]
    NotGeneric(usize, usize),
    #[error("polytope is not almost simple")]
    NotAlmostSimple,
}

/// Subcomplex of a polytope's face lattice, closed under taking subfaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    faces: BTreeSet<usize>,
}

impl Complex {
    pub fn full(lattice: &FaceLattice) -> Complex {
        Complex {
            faces: (0..lattice.faces.len()).collect(),
        }
    }

    pub fn faces(&self) -> &BTreeSet<usize> {
        &self.faces
    }

    pub fn vertices(&self, lattice: &FaceLattice) -> Vec<usize> {
        self.faces
            .iter()
            .filter(|&&f| lattice.faces[f].dim == 0)
            .map(|&f| *lattice.faces[f].vertex_set.iter().next().unwrap())
            .collect()
    }

    /// All faces of the complex containing the vertex.
    pub fn star(&self, lattice: &FaceLattice, v: usize) -> Vec<usize> {
        self.faces
            .iter()
            .copied()
            .filter(|&f| lattice.faces[f].vertex_set.contains(&v))
            .collect()
    }

    /// Remove the star of `v`; the result is again subface-closed.
    pub fn delete_vertex(&self, lattice: &FaceLattice, v: usize) -> Complex {
        Complex {
            faces: self
                .faces
                .iter()
                .copied()
                .filter(|&f| !lattice.faces[f].vertex_set.contains(&v))
                .collect(),
        }
    }

    /// Connectivity of the 1-skeleton restricted to the complex.
    pub fn is_connected(&self, lattice: &FaceLattice) -> bool {
        let verts = self.vertices(lattice);
        if verts.len() <= 1 {
            return true;
        }
        let vset: BTreeSet<usize> = verts.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut stack = vec![verts[0]];
        seen.insert(verts[0]);
        while let Some(v) = stack.pop() {
            for &f in &self.faces {
                let face = &lattice.faces[f];
                if face.dim == 1 && face.vertex_set.contains(&v) {
                    for &w in &face.vertex_set {
                        if vset.contains(&w) && seen.insert(w) {
                            stack.push(w);
                        }
                    }
                }
            }
        }
        seen.len() == vset.len()
    }
}

/// One deletion step: a free vertex, its unique maximal star face, and the
/// edges of that face at the vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetractionStep {
    pub vertex: usize,
    pub max_face: usize,
    pub k: usize,
    /// (edge face index, other endpoint vertex index)
    pub edges: Vec<(usize, usize)>,
}

/// Deletion order realizing a retraction sequence; `steps[0]` removes v_ℓ and
/// the last step is the surviving vertex with k = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetractionSequence {
    pub steps: Vec<RetractionStep>,
}

impl RetractionSequence {
    pub fn k_sequence(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.k).collect()
    }

    pub fn vertex_order(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.vertex).collect()
    }
}

/// Even Betti numbers b₀, b₂, …, b₂ₙ (odd degrees vanish).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiVector(pub Vec<usize>);

/// Candidate free vertex: the vertex, its unique maximal star face, its
/// dimension k, and the k edges of the face at the vertex.
fn free_data(complex: &Complex, lattice: &FaceLattice, v: usize) -> Option<RetractionStep> {
    let star = complex.star(lattice, v);
    debug_assert!(!star.is_empty());
    let maximal: Vec<usize> = star
        .iter()
        .copied()
        .filter(|&f| {
            star.iter()
                .all(|&g| g == f || !lattice.is_subface(f, g))
        })
        .collect();
    if maximal.len() != 1 {
        return None;
    }
    let e = maximal[0];
    let k = lattice.faces[e].dim;
    let edges: Vec<(usize, usize)> = lattice
        .subfaces_of_dim(e, 1)
        .into_iter()
        .filter(|&f| lattice.faces[f].vertex_set.contains(&v))
        .map(|f| {
            let other = *lattice.faces[f]
                .vertex_set
                .iter()
                .find(|&&w| w != v)
                .unwrap();
            (f, other)
        })
        .collect();
    if edges.len() != k {
        return None; // v is not a simple vertex of the maximal face
    }
    Some(RetractionStep {
        vertex: v,
        max_face: e,
        k,
        edges,
    })
}

/// Free vertices of the complex, in vertex-index order. Vertices whose star is
/// a single point qualify only when the whole complex is that point (k = 0
/// terminal stage); intermediate steps require k ≥ 1.
pub fn free_vertices(complex: &Complex, lattice: &FaceLattice) -> Vec<RetractionStep> {
    let single = complex.faces().len() == 1;
    let mut out = Vec::new();
    let mut verts = complex.vertices(lattice);
    verts.sort_unstable();
    for v in verts {
        if let Some(step) = free_data(complex, lattice, v) {
            if step.k >= 1 || single {
                out.push(step);
            }
        }
    }
    out
}

/// Search result when no retraction sequence exists: how much of the state
/// space the exhaustive backtracking visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustionCertificate {
    pub states_explored: usize,
    pub dead_ends: usize,
}

#[derive(Debug, Clone)]
pub enum RetractionOutcome {
    Sequence(RetractionSequence),
    NotAlmostSimple(ExhaustionCertificate),
}

fn search(
    complex: &Complex,
    lattice: &FaceLattice,
    steps: &mut Vec<RetractionStep>,
    failed: &mut HashSet<BTreeSet<usize>>,
    cert: &mut ExhaustionCertificate,
) -> bool {
    cert.states_explored += 1;
    if complex.faces().len() == 1 {
        let v = complex.vertices(lattice)[0];
        steps.push(free_data(complex, lattice, v).expect("single vertex is terminal"));
        return true;
    }
    if failed.contains(complex.faces()) {
        return false;
    }
    if !complex.is_connected(lattice) {
        // a disconnected complex can never retract to a single vertex
        failed.insert(complex.faces().clone());
        cert.dead_ends += 1;
        return false;
    }
    for step in free_vertices(complex, lattice) {
        let next = complex.delete_vertex(lattice, step.vertex);
        steps.push(step);
        if search(&next, lattice, steps, failed, cert) {
            return true;
        }
        steps.pop();
    }
    failed.insert(complex.faces().clone());
    cert.dead_ends += 1;
    false
}

/// Decide almost-simplicity: find one retraction sequence or certify that the
/// exhaustive search failed. With `order_hint`, that vertex order is replayed
/// and validated step by step.
pub fn find_retraction(
    polytope: &Polytope,
    lattice: &FaceLattice,
    order_hint: Option<&[usize]>,
) -> Result<RetractionOutcome, RetractionError> {
    let _ = polytope;
    if let Some(order) = order_hint {
        let mut complex = Complex::full(lattice);
        let mut steps = Vec::new();
        for (stage, &v) in order.iter().enumerate() {
            let free = free_vertices(&complex, lattice);
            let Some(step) = free.into_iter().find(|s| s.vertex == v) else {
                return Err(RetractionError::InvalidHint { stage, vertex: v });
            };
            complex = complex.delete_vertex(lattice, v);
            steps.push(step);
        }
        if !complex.faces().is_empty() {
            return Err(RetractionError::InvalidHint {
                stage: order.len(),
                vertex: usize::MAX,
            });
        }
        return Ok(RetractionOutcome::Sequence(RetractionSequence { steps }));
    }
    let mut steps = Vec::new();
    let mut failed = HashSet::new();
    let mut cert = ExhaustionCertificate {
        states_explored: 0,
        dead_ends: 0,
    };
    if search(
        &Complex::full(lattice),
        lattice,
        &mut steps,
        &mut failed,
        &mut cert,
    ) {
        Ok(RetractionOutcome::Sequence(RetractionSequence { steps }))
    } else {
        Ok(RetractionOutcome::NotAlmostSimple(cert))
    }
}

/// Up to `limit` distinct retraction sequences, in the deterministic order
/// induced by exploring free vertices by index.
pub fn enumerate_retractions(
    lattice: &FaceLattice,
    limit: usize,
) -> Vec<RetractionSequence> {
    assert!(limit >= 1);
    let mut out = Vec::new();
    let mut steps = Vec::new();
    enumerate_rec(&Complex::full(lattice), lattice, &mut steps, &mut out, limit);
    out
}

fn enumerate_rec(
    complex: &Complex,
    lattice: &FaceLattice,
    steps: &mut Vec<RetractionStep>,
    out: &mut Vec<RetractionSequence>,
    limit: usize,
) {
    if out.len() == limit {
        return;
    }
    if complex.faces().len() == 1 {
        let v = complex.vertices(lattice)[0];
        let mut seq = steps.clone();
        seq.push(free_data(complex, lattice, v).expect("terminal vertex"));
        out.push(RetractionSequence { steps: seq });
        return;
    }
    if !complex.is_connected(lattice) {
        return;
    }
    for step in free_vertices(complex, lattice) {
        let next = complex.delete_vertex(lattice, step.vertex);
        steps.push(step);
        enumerate_rec(&next, lattice, steps, out, limit);
        steps.pop();
        if out.len() == limit {
            return;
        }
    }
}

/// Retraction of a simple polytope from a generic height covector: vertices are
/// removed in strictly decreasing height order.
pub fn height_retraction(
    polytope: &Polytope,
    lattice: &FaceLattice,
    phi: &[Int],
) -> Result<RetractionSequence, RetractionError> {
    if !polytope.is_simple() {
        return Err(RetractionError::NotSimple);
    }
    assert_eq!(phi.len(), polytope.dim);
    let heights: Vec<Rat> = polytope
        .vertices
        .iter()
        .map(|v| {
            v.iter()
                .zip(phi)
                .map(|(x, c)| x * Rat::from(c.clone()))
                .sum()
        })
        .collect();
    for i in 0..heights.len() {
        for j in i + 1..heights.len() {
            if heights[i] == heights[j] {
                return Err(RetractionError::NotGeneric(i, j));
            }
        }
    }
    let mut order: Vec<usize> = (0..heights.len()).collect();
    order.sort_by(|&a, &b| heights[b].cmp(&heights[a]));
    match find_retraction(polytope, lattice, Some(&order))? {
        RetractionOutcome::Sequence(seq) => Ok(seq),
        RetractionOutcome::NotAlmostSimple(_) => unreachable!("simple polytopes retract"),
    }
}

/// b₂ₖ = number of steps with k_j = k.
pub fn betti_numbers(seq: &RetractionSequence, dim: usize) -> BettiVector {
    let mut b = vec![0usize; dim + 1];
    for s in &seq.steps {
        b[s.k] += 1;
    }
    BettiVector(b)
}

/// Re-validate a sequence against the polytope from scratch.
pub fn validate_sequence(
    lattice: &FaceLattice,
    seq: &RetractionSequence,
) -> Result<(), RetractionError> {
    let order = seq.vertex_order();
    let mut complex = Complex::full(lattice);
    for (stage, step) in seq.steps.iter().enumerate() {
        let free = free_vertices(&complex, lattice);
        let Some(expect) = free.into_iter().find(|s| s.vertex == step.vertex) else {
            return Err(RetractionError::InvalidHint {
                stage,
                vertex: step.vertex,
            });
        };
        if &expect != step {
            return Err(RetractionError::InvalidHint {
                stage,
                vertex: step.vertex,
            });
        }
        complex = complex.delete_vertex(lattice, step.vertex);
    }
    if order.len() != seq.steps.len() || !complex.faces().is_empty() {
        return Err(RetractionError::NotAlmostSimple);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::corpus::*;

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    /// Vertex index of the given integer coordinates.
    fn vidx(p: &Polytope, coords: &[i64]) -> usize {
        let target: Vec<Rat> = coords.iter().map(|&x| rat(x)).collect();
        p.vertices.iter().position(|v| v == &target).unwrap()
    }

    #[test]
    fn star_sizes() {
        let cube = unit_cube();
        let l = cube.face_lattice();
        let c = Complex::full(&l);
        // 1 solid + 3 facets + 3 edges + 1 vertex
        assert_eq!(c.star(&l, 0).len(), 8);

        let gz = gz3();
        let l = gz.face_lattice();
        let c = Complex::full(&l);
        let v = vidx(&gz, &[1, 1, 1]);
        assert_eq!(c.star(&l, v).len(), 10);

        let seg = segment();
        let l = seg.face_lattice();
        let c = Complex::full(&l).delete_vertex(&l, 1);
        assert_eq!(c.star(&l, 0), vec![l.vertex_face(0)]);
    }

    #[test]
    fn free_vertices_examples() {
        let cube = unit_cube();
        let l = cube.face_lattice();
        let free = free_vertices(&Complex::full(&l), &l);
        assert_eq!(free.len(), 8);
        assert!(free.iter().all(|s| s.k == 3));

        let gz = gz3();
        let l = gz.face_lattice();
        let free = free_vertices(&Complex::full(&l), &l);
        assert_eq!(free.len(), 6);
        let nonsimple = vidx(&gz, &[1, 1, 1]);
        assert!(free.iter().all(|s| s.vertex != nonsimple));

        let oct = octahedron();
        let l = oct.face_lattice();
        assert!(free_vertices(&Complex::full(&l), &l).is_empty());
    }

    #[test]
    fn delete_vertex_examples() {
        let gz = gz3();
        let l = gz.face_lattice();
        let c = Complex::full(&l).delete_vertex(&l, vidx(&gz, &[0, 2, 2]));
        let verts = c.vertices(&l);
        assert_eq!(verts.len(), 6);
        let edges = c
            .faces()
            .iter()
            .filter(|&&f| l.faces[f].dim == 1)
            .count();
        assert_eq!(edges, 8);

        let tri = simplex(2);
        let l = tri.face_lattice();
        let c = Complex::full(&l).delete_vertex(&l, 0);
        assert_eq!(c.vertices(&l).len(), 2);
        assert_eq!(c.faces().len(), 3); // two vertices and the opposite edge
    }

    #[test]
    fn gz_published_order_validates() {
        let gz = gz3();
        let l = gz.face_lattice();
        let order: Vec<usize> = [
            [0, 2, 2],
            [1, 2, 2],
            [1, 2, 1],
            [0, 1, 1],
            [0, 2, 0],
            [0, 1, 0],
            [1, 1, 1],
        ]
        .iter()
        .map(|c| vidx(&gz, c))
        .collect();
        let out = find_retraction(&gz, &l, Some(&order)).unwrap();
        let RetractionOutcome::Sequence(seq) = out else {
            panic!("expected a sequence");
        };
        assert_eq!(seq.k_sequence(), vec![3, 2, 2, 2, 1, 1, 0]);
        validate_sequence(&l, &seq).unwrap();
        assert_eq!(
            seq.k_sequence().iter().sum::<usize>(),
            l.edges().len()
        );
    }

    #[test]
    fn gz_alternate_order_validates() {
        // the order listed with (0,2,0) before (0,1,1) also validates
        let gz = gz3();
        let l = gz.face_lattice();
        let order: Vec<usize> = [
            [0, 2, 2],
            [1, 2, 2],
            [1, 2, 1],
            [0, 2, 0],
            [0, 1, 1],
            [0, 1, 0],
            [1, 1, 1],
        ]
        .iter()
        .map(|c| vidx(&gz, c))
        .collect();
        assert!(matches!(
            find_retraction(&gz, &l, Some(&order)).unwrap(),
            RetractionOutcome::Sequence(_)
        ));
    }

    #[test]
    fn octahedron_is_not_almost_simple() {
        let oct = octahedron();
        let l = oct.face_lattice();
        let out = find_retraction(&oct, &l, None).unwrap();
        let RetractionOutcome::NotAlmostSimple(cert) = out else {
            panic!("octahedron must not retract");
        };
        assert!(cert.states_explored >= 1);
        assert!(enumerate_retractions(&l, 10).is_empty());
    }

    #[test]
    fn segment_sequence() {
        let seg = segment();
        let l = seg.face_lattice();
        let RetractionOutcome::Sequence(seq) = find_retraction(&seg, &l, None).unwrap() else {
            panic!();
        };
        assert_eq!(seq.k_sequence(), vec![1, 0]);
    }

    #[test]
    fn invalid_hint_rejected() {
        let gz = gz3();
        let l = gz.face_lattice();
        let bad = vidx(&gz, &[1, 1, 1]); // not free initially
        let err = find_retraction(&gz, &l, Some(&[bad])).unwrap_err();
        assert_eq!(
            err,
            RetractionError::InvalidHint {
                stage: 0,
                vertex: bad
            }
        );
    }

    #[test]
    fn enumerate_square() {
        let sq = unit_square();
        let l = sq.face_lattice();
        let seqs = enumerate_retractions(&l, 50);
        assert!(seqs.len() >= 4);
        for s in &seqs {
            validate_sequence(&l, s).unwrap();
            let mut k = s.k_sequence();
            k.sort_unstable();
            assert_eq!(k, vec![0, 1, 1, 2]);
        }
        // sequences are distinct
        let orders: std::collections::BTreeSet<Vec<usize>> =
            seqs.iter().map(|s| s.vertex_order()).collect();
        assert_eq!(orders.len(), seqs.len());
    }

    #[test]
    fn gz_has_multiple_sequences() {
        let gz = gz3();
        let l = gz.face_lattice();
        let seqs = enumerate_retractions(&l, 10);
        assert!(seqs.len() >= 2);
        let b: Vec<BettiVector> = seqs.iter().map(|s| betti_numbers(s, 3)).collect();
        assert!(b.iter().all(|x| x == &b[0]));
        assert_eq!(b[0], BettiVector(vec![1, 2, 3, 1]));
    }

    #[test]
    fn height_retractions() {
        let cube = unit_cube();
        let l = cube.face_lattice();
        let seq = height_retraction(&cube, &l, &iv(&[1, 2, 4])).unwrap();
        let mut k = seq.k_sequence();
        k.sort_unstable();
        assert_eq!(k, vec![0, 1, 1, 1, 2, 2, 2, 3]);

        let sq = unit_square();
        let l = sq.face_lattice();
        let seq = height_retraction(&sq, &l, &iv(&[1, 2])).unwrap();
        let mut k = seq.k_sequence();
        k.sort_unstable();
        assert_eq!(k, vec![0, 1, 1, 2]);

        let cube = unit_cube();
        let l = cube.face_lattice();
        assert_eq!(
            height_retraction(&cube, &l, &iv(&[1, 1, 1])).unwrap_err(),
            RetractionError::NotGeneric(1, 2)
        );

        let pyr = square_pyramid();
        let l = pyr.face_lattice();
        assert_eq!(
            height_retraction(&pyr, &l, &iv(&[1, 2, 4])).unwrap_err(),
            RetractionError::NotSimple
        );
    }

    #[test]
    fn betti_examples() {
        let s3 = simplex(3);
        let l = s3.face_lattice();
        let RetractionOutcome::Sequence(seq) = find_retraction(&s3, &l, None).unwrap() else {
            panic!();
        };
        assert_eq!(betti_numbers(&seq, 3), BettiVector(vec![1, 1, 1, 1]));

        let cube = unit_cube();
        let l = cube.face_lattice();
        let RetractionOutcome::Sequence(seq) = find_retraction(&cube, &l, None).unwrap() else {
            panic!();
        };
        assert_eq!(betti_numbers(&seq, 3), BettiVector(vec![1, 3, 3, 1]));
    }

    #[test]
    fn pyramid_retracts_with_apex_last() {
        let pyr = square_pyramid();
        let l = pyr.face_lattice();
        let apex = vidx(&pyr, &[0, 0, 1]);
        // delete the four base vertices first, apex survives
        let mut order: Vec<usize> = (0..5).filter(|&v| v != apex).collect();
        order.push(apex);
        let out = find_retraction(&pyr, &l, Some(&order));
        assert!(
            matches!(out, Ok(RetractionOutcome::Sequence(_))),
            "apex-last order must validate: {out:?}"
        );
    }
}
