//! Orbifold data along a retraction sequence and the divisiveness decision.
//!
//! Each retraction step (v_j, E_j, k_j) carries a local model: project the
//! ambient lattice along the span of the facet normals cutting out E_j, push
//! the normals of the facets that cut v_j inside E_j through that projection,
//! and read off the finite abelian group K_j those images span in Z^{k_j}.
//! The step is smooth exactly when K_j is trivial; the polytope is divisive
//! when some retraction sequence makes every step smooth.

use std::collections::{BTreeSet, HashSet};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::{
    abelian_quotient, quotient_projection, saturate, FiniteAbelianGroup, Int, IntMatrix,
    LinAlgError,
};
use crate::polytope::{FaceLattice, Polytope};
use crate::retraction::{
    find_retraction, free_vertices, Complex, RetractionError, RetractionOutcome,
    RetractionSequence, RetractionStep,
};

#[derive(Debug, Error)]
pub enum SingularityError {
    /// The cutting-facet normals at this step are linearly dependent after
    /// projection, so the local quotient is not finite.
    #[error("degenerate step {stage} at vertex {vertex}: projected normals are dependent")]
    DegenerateStep { stage: usize, vertex: usize },
    #[error("polytope is not almost simple")]
    NotAlmostSimple,
    #[error(transparent)]
    Retraction(#[from] RetractionError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Local model of one retraction step.
#[derive(Debug, Clone)]
pub struct OrbifoldDatum {
    pub stage: usize,
    pub vertex: usize,
    pub max_face: usize,
    pub k: usize,
    /// Projection Z^n → Z^k killing the saturated span of the normals of the
    /// ambient facets containing E_j.
    pub projection: IntMatrix,
    /// Ambient facet indices cutting v_j inside E_j, one per codimension-one
    /// face of E_j at v_j (lowest ambient index when several qualify).
    pub cutting_facets: Vec<usize>,
    /// Projected cutting-facet normals μ_i ∈ Z^k, in cutting-facet order.
    pub mus: Vec<Vec<Int>>,
    pub group: FiniteAbelianGroup,
}

/// Orbifold data for a whole retraction sequence.
#[derive(Debug, Clone)]
pub struct SingularityReport {
    pub data: Vec<OrbifoldDatum>,
}

impl SingularityReport {
    /// A sequence is divisive when every step has trivial local group.
    pub fn is_divisive(&self) -> bool {
        self.data.iter().all(|d| d.group.is_trivial())
    }
}

/// Outcome of the existential divisiveness search.
#[derive(Debug, Clone)]
pub enum DivisiveOutcome {
    /// A witness sequence with all local groups trivial.
    Divisive(RetractionSequence),
    /// Almost simple, but every retraction sequence hits a singular step.
    NotDivisive,
}

/// Projection of Z^n along the saturated span of the normals of the ambient
/// facets containing the given face.
pub fn step_projection(
    polytope: &Polytope,
    lattice: &FaceLattice,
    face: usize,
) -> Result<IntMatrix, SingularityError> {
    let n = polytope.ambient_dim();
    let normals: Vec<Vec<Int>> = lattice.faces[face]
        .facet_set
        .iter()
        .map(|&f| polytope.facets[f].normal.clone())
        .collect();
    let basis = saturate(&normals, n);
    Ok(quotient_projection(&basis, n)?)
}

/// Cutting facets of a step: for each codimension-one face G of E_j containing
/// v_j, the lowest-index ambient facet containing G but not E_j.
fn cutting_facets(lattice: &FaceLattice, step: &RetractionStep) -> Vec<usize> {
    let e = &lattice.faces[step.max_face];
    if step.k == 0 {
        return Vec::new();
    }
    let mut out: Vec<usize> = lattice
        .subfaces_of_dim(step.max_face, step.k - 1)
        .into_iter()
        .filter(|&g| lattice.faces[g].vertex_set.contains(&step.vertex))
        .map(|g| {
            *lattice.faces[g]
                .facet_set
                .iter()
                .find(|f| !e.facet_set.contains(f))
                .expect("proper subface lies on an extra facet")
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Local orbifold datum of a single retraction step.
pub fn step_datum(
    polytope: &Polytope,
    lattice: &FaceLattice,
    stage: usize,
    step: &RetractionStep,
) -> Result<OrbifoldDatum, SingularityError> {
    let projection = step_projection(polytope, lattice, step.max_face)?;
    let cutting = cutting_facets(lattice, step);
    let mus: Vec<Vec<Int>> = cutting
        .iter()
        .map(|&f| projection.mul_vec(&polytope.facets[f].normal))
        .collect();
    let group = match abelian_quotient(&mus) {
        Ok(g) => g,
        Err(LinAlgError::NotFinite) => {
            return Err(SingularityError::DegenerateStep {
                stage,
                vertex: step.vertex,
            })
        }
        Err(e) => return Err(e.into()),
    };
    Ok(OrbifoldDatum {
        stage,
        vertex: step.vertex,
        max_face: step.max_face,
        k: step.k,
        projection,
        cutting_facets: cutting,
        mus,
        group,
    })
}

/// Orbifold data for every step of a retraction sequence.
pub fn orbifold_data(
    polytope: &Polytope,
    lattice: &FaceLattice,
    seq: &RetractionSequence,
) -> Result<SingularityReport, SingularityError> {
    let data = seq
        .steps
        .iter()
        .enumerate()
        .map(|(j, s)| step_datum(polytope, lattice, j, s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SingularityReport { data })
}

/// Decide divisiveness: search for a retraction sequence all of whose steps
/// have trivial local group, pruning singular steps outright.
pub fn is_divisive(
    polytope: &Polytope,
    lattice: &FaceLattice,
) -> Result<DivisiveOutcome, SingularityError> {
    let mut steps = Vec::new();
    let mut failed: HashSet<BTreeSet<usize>> = HashSet::new();
    if divisive_search(
        polytope,
        lattice,
        &Complex::full(lattice),
        &mut steps,
        &mut failed,
    )? {
        return Ok(DivisiveOutcome::Divisive(RetractionSequence { steps }));
    }
    match find_retraction(polytope, lattice, None)? {
        RetractionOutcome::Sequence(_) => Ok(DivisiveOutcome::NotDivisive),
        RetractionOutcome::NotAlmostSimple(_) => Err(SingularityError::NotAlmostSimple),
    }
}

fn divisive_search(
    polytope: &Polytope,
    lattice: &FaceLattice,
    complex: &Complex,
    steps: &mut Vec<RetractionStep>,
    failed: &mut HashSet<BTreeSet<usize>>,
    // returns true when a fully smooth continuation exists
) -> Result<bool, SingularityError> {
    if complex.faces().is_empty() {
        return Ok(true);
    }
    if failed.contains(complex.faces()) {
        return Ok(false);
    }
    if !complex.is_connected(lattice) {
        failed.insert(complex.faces().clone());
        return Ok(false);
    }
    for step in free_vertices(complex, lattice) {
        let stage = steps.len();
        match step_datum(polytope, lattice, stage, &step) {
            Ok(d) if d.group.is_trivial() => {}
            Ok(_) | Err(SingularityError::DegenerateStep { .. }) => continue,
            Err(e) => return Err(e),
        }
        let next = complex.delete_vertex(lattice, step.vertex);
        steps.push(step);
        if divisive_search(polytope, lattice, &next, steps, failed)? {
            return Ok(true);
        }
        steps.pop();
    }
    failed.insert(complex.faces().clone());
    Ok(false)
}

/// |K_j| equals |det[μ₁ … μ_k]| when the μ_i are independent.
pub fn group_order_check(datum: &OrbifoldDatum) -> bool {
    if datum.k == 0 {
        return datum.group.is_trivial();
    }
    let m = IntMatrix::from_rows(datum.mus.clone());
    let det = m.det();
    if det.is_zero() {
        return false;
    }
    datum.group.order() == det.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rat;
    use crate::polytope::corpus::*;
    use crate::retraction::validate_sequence;

    fn vidx(p: &Polytope, coords: &[i64]) -> usize {
        let target: Vec<Rat> = coords.iter().map(|&x| rat(x)).collect();
        p.vertices.iter().position(|v| v == &target).unwrap()
    }

    fn seq_for(p: &Polytope, l: &FaceLattice, order: &[usize]) -> RetractionSequence {
        match find_retraction(p, l, Some(order)).unwrap() {
            RetractionOutcome::Sequence(s) => s,
            _ => panic!("order should validate"),
        }
    }

    #[test]
    fn gz_sequence_is_divisive() {
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
        let seq = seq_for(&gz, &l, &order);
        let report = orbifold_data(&gz, &l, &seq).unwrap();
        assert_eq!(report.data.len(), 7);
        for d in &report.data {
            assert!(d.group.is_trivial(), "stage {} not smooth", d.stage);
            assert_eq!(d.mus.len(), d.k);
            assert!(group_order_check(d));
        }
        assert!(report.is_divisive());
        assert!(matches!(
            is_divisive(&gz, &l).unwrap(),
            DivisiveOutcome::Divisive(_)
        ));
    }

    #[test]
    fn weighted_triangle_first_step_groups() {
        // conv{(0,0),(2,0),(0,3)}: deleting (2,0) first meets Z/3, deleting
        // (0,3) first meets Z/2, deleting (0,0) first is smooth
        let t = triangle_1_2_3();
        let l = t.face_lattice();
        let full = Complex::full(&l);
        let expect = [
            (vidx(&t, &[0, 0]), vec![]),
            (vidx(&t, &[2, 0]), vec![Int::from(3)]),
            (vidx(&t, &[0, 3]), vec![Int::from(2)]),
        ];
        for (v, factors) in expect {
            let step = free_vertices(&full, &l)
                .into_iter()
                .find(|s| s.vertex == v)
                .unwrap();
            let d = step_datum(&t, &l, 0, &step).unwrap();
            assert_eq!(d.group.invariant_factors().to_vec(), factors);
            assert!(group_order_check(&d));
        }
    }

    #[test]
    fn weighted_triangle_not_divisive() {
        let t = triangle_1_2_3();
        let l = t.face_lattice();
        assert!(matches!(
            is_divisive(&t, &l).unwrap(),
            DivisiveOutcome::NotDivisive
        ));
        // exhaust all 6 orders: every one has a singular step
        let n = t.vertices.len();
        let mut orders = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if a != b && b != c && a != c {
                        orders.push(vec![a, b, c]);
                    }
                }
            }
        }
        assert_eq!(orders.len(), 6);
        for order in orders {
            let seq = seq_for(&t, &l, &order);
            let report = orbifold_data(&t, &l, &seq).unwrap();
            assert!(!report.is_divisive(), "order {order:?} should be singular");
        }
    }

    #[test]
    fn half_weighted_triangle_order_dependence() {
        // conv{(0,0),(1,0),(0,2)}: divisive, but the order deleting (0,0)
        // then (1,0) hits Z/2 at the edge step
        let t = triangle_1_1_2();
        let l = t.face_lattice();
        let v00 = vidx(&t, &[0, 0]);
        let v10 = vidx(&t, &[1, 0]);
        let v02 = vidx(&t, &[0, 2]);

        let bad = seq_for(&t, &l, &[v00, v10, v02]);
        let report = orbifold_data(&t, &l, &bad).unwrap();
        assert!(!report.is_divisive());
        assert_eq!(report.data[1].group.invariant_factors().to_vec(), vec![Int::from(2)]);

        let good = seq_for(&t, &l, &[v02, v00, v10]);
        assert!(orbifold_data(&t, &l, &good).unwrap().is_divisive());

        let DivisiveOutcome::Divisive(witness) = is_divisive(&t, &l).unwrap() else {
            panic!("should be divisive");
        };
        validate_sequence(&l, &witness).unwrap();
        assert!(orbifold_data(&t, &l, &witness).unwrap().is_divisive());
    }

    #[test]
    fn cube_divisive_in_any_order() {
        let c = unit_cube();
        let l = c.face_lattice();
        for seq in crate::retraction::enumerate_retractions(&l, 20) {
            let report = orbifold_data(&c, &l, &seq).unwrap();
            assert!(report.is_divisive());
        }
        assert!(matches!(
            is_divisive(&c, &l).unwrap(),
            DivisiveOutcome::Divisive(_)
        ));
    }

    #[test]
    fn octahedron_divisive_errors() {
        let o = octahedron();
        let l = o.face_lattice();
        assert!(matches!(
            is_divisive(&o, &l),
            Err(SingularityError::NotAlmostSimple)
        ));
    }

    #[test]
    fn dilation_preserves_orbifold_groups() {
        let t = triangle_1_2_3();
        let l = t.face_lattice();
        let d = t.dilate(3);
        let ld = d.face_lattice();
        let order = vec![vidx(&t, &[2, 0]), vidx(&t, &[0, 0]), vidx(&t, &[0, 3])];
        let order_d = vec![vidx(&d, &[6, 0]), vidx(&d, &[0, 0]), vidx(&d, &[0, 9])];
        let r1 = orbifold_data(&t, &l, &seq_for(&t, &l, &order)).unwrap();
        let r2 = orbifold_data(&d, &ld, &seq_for(&d, &ld, &order_d)).unwrap();
        for (a, b) in r1.data.iter().zip(&r2.data) {
            assert_eq!(a.group.invariant_factors().to_vec(), b.group.invariant_factors().to_vec());
        }
    }
}
