//! Exact full-dimensional lattice polytopes: hull and vertex enumeration by
//! brute force over affinely independent subsets, face lattice as the closure
//! of vertex-facet incidences, and normal fans.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::{
    kernel_basis, primitive_from_rational, rational_inverse, rational_rank, Int, Rat,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("points do not affinely span the ambient space")]
    NotFullDimensional,
    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),
    #[error("inequality system is unbounded")]
    Unbounded,
    #[error("inequality system has no vertices")]
    Empty,
    #[error("invalid input: {0}")]
    BadInput(String),
}

/// A facet inequality ⟨normal, x⟩ ≤ offset with primitive outward normal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<Int>,
    pub offset: Rat,
}

#[derive(Debug, Clone)]
pub struct Polytope {
    pub name: String,
    pub dim: usize,
    pub vertices: Vec<Vec<Rat>>,
    pub facets: Vec<Facet>,
    /// incidence[v][f] ⇔ vertex v lies on facet f
    pub incidence: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub vertex_set: BTreeSet<usize>,
    pub facet_set: BTreeSet<usize>,
    pub dim: usize,
}

/// All faces of a polytope (vertices up to the polytope itself), graded by
/// dimension and ordered deterministically.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    pub faces: Vec<Face>,
    vertex_face: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub generators: Vec<Vec<Int>>,
    pub dim: usize,
}

/// Normal fan; `cones[i]` is the cone of `lattice.faces[i]`.
#[derive(Debug, Clone)]
pub struct Fan {
    pub cones: Vec<Cone>,
}

fn dot(a: &[Int], x: &[Rat]) -> Rat {
    a.iter()
        .zip(x)
        .map(|(c, v)| Rat::from(c.clone()) * v)
        .sum()
}

/// Affine rank of a point set (dimension of its affine hull).
fn affine_rank(points: &[Vec<Rat>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let diffs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rational_rank(&diffs)
}

impl Polytope {
    /// Convex hull: complete irredundant facet list with primitive outward
    /// normals, by enumerating hyperplanes through affinely independent
    /// n-subsets of the input points. Non-extreme points are dropped.
    pub fn from_vertices(name: &str, points: Vec<Vec<Rat>>) -> Result<Polytope, PolytopeError> {
        if points.is_empty() {
            return Err(PolytopeError::BadInput("no points given".into()));
        }
        let n = points[0].len();
        if n == 0 || points.iter().any(|p| p.len() != n) {
            return Err(PolytopeError::BadInput(
                "points must share a positive dimension".into(),
            ));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(PolytopeError::DuplicatePoint(i));
            }
        }
        if affine_rank(&points) < n {
            return Err(PolytopeError::NotFullDimensional);
        }

        let mut facet_set: BTreeSet<Facet> = BTreeSet::new();
        for combo in (0..points.len()).combinations(n) {
            let base = &points[combo[0]];
            let diffs: Vec<Vec<Rat>> = combo[1..]
                .iter()
                .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            let ker = if diffs.is_empty() {
                vec![vec![num_traits::One::one()]] // n = 1: a single point is a facet
            } else {
                kernel_basis(&diffs)
            };
            if ker.len() != 1 {
                continue; // points not affinely independent
            }
            let normal = primitive_from_rational(&ker[0]).expect("kernel vector is nonzero");
            let offset = dot(&normal, base);
            let mut pos = false;
            let mut neg = false;
            for p in &points {
                let s = dot(&normal, p) - &offset;
                if s.is_positive() {
                    pos = true;
                } else if s.is_negative() {
                    neg = true;
                }
            }
            match (pos, neg) {
                (false, _) => {
                    facet_set.insert(Facet { normal, offset });
                }
                (true, false) => {
                    facet_set.insert(Facet {
                        normal: normal.iter().map(|x| -x).collect(),
                        offset: -offset,
                    });
                }
                (true, true) => {}
            }
        }
        let facets: Vec<Facet> = facet_set.into_iter().collect();

        // a point is extreme iff its tight normals span the ambient space
        let mut vertices = Vec::new();
        for p in &points {
            let tight: Vec<Vec<Rat>> = facets
                .iter()
                .filter(|f| dot(&f.normal, p) == f.offset)
                .map(|f| f.normal.iter().map(|x| Rat::from(x.clone())).collect())
                .collect();
            if rational_rank(&tight) == n {
                vertices.push(p.clone());
            }
        }
        if affine_rank(&vertices) < n {
            return Err(PolytopeError::NotFullDimensional);
        }

        let incidence: Vec<Vec<bool>> = vertices
            .iter()
            .map(|v| facets.iter().map(|f| dot(&f.normal, v) == f.offset).collect())
            .collect();
        Ok(Polytope {
            name: name.to_string(),
            dim: n,
            vertices,
            facets,
            incidence,
        })
    }

    /// Vertex enumeration: solve every invertible n-subset of inequalities and
    /// keep the feasible solutions. The facet list is rebuilt canonically from
    /// the vertices, dropping redundant inequalities.
    pub fn from_inequalities(
        name: &str,
        inequalities: Vec<(Vec<Int>, Rat)>,
    ) -> Result<Polytope, PolytopeError> {
        if inequalities.is_empty() {
            return Err(PolytopeError::BadInput("no inequalities given".into()));
        }
        let n = inequalities[0].0.len();
        if n == 0 || inequalities.iter().any(|(a, _)| a.len() != n) {
            return Err(PolytopeError::BadInput(
                "inequalities must share a positive dimension".into(),
            ));
        }
        let mut ineqs: Vec<(Vec<Int>, Rat)> = Vec::new();
        for (a, b) in inequalities {
            let g = a.iter().fold(Int::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
            if g.is_zero() {
                return Err(PolytopeError::BadInput("zero normal vector".into()));
            }
            let prim: Vec<Int> = a.iter().map(|x| x / &g).collect();
            ineqs.push((prim, b / Rat::from(g)));
        }

        let normals_rat: Vec<Vec<Rat>> = ineqs
            .iter()
            .map(|(a, _)| a.iter().map(|x| Rat::from(x.clone())).collect())
            .collect();
        if rational_rank(&normals_rat) < n {
            return Err(PolytopeError::Unbounded);
        }
        // recession directions: extreme rays are tight on n-1 independent normals
        for combo in (0..ineqs.len()).combinations(n.saturating_sub(1)) {
            let sub: Vec<Vec<Rat>> = combo.iter().map(|&i| normals_rat[i].clone()).collect();
            if rational_rank(&sub) + 1 != n {
                continue;
            }
            let ker = kernel_basis(&sub);
            if ker.len() != 1 {
                continue;
            }
            let d = primitive_from_rational(&ker[0]).expect("nonzero kernel vector");
            let dr: Vec<Rat> = d.iter().map(|x| Rat::from(x.clone())).collect();
            for dir in [&dr, &dr.iter().map(|x| -x).collect::<Vec<_>>()] {
                if ineqs.iter().all(|(a, _)| !dot(a, dir).is_positive()) {
                    return Err(PolytopeError::Unbounded);
                }
            }
        }

        let mut points: Vec<Vec<Rat>> = Vec::new();
        for combo in (0..ineqs.len()).combinations(n) {
            let mat: Vec<Vec<Rat>> = combo.iter().map(|&i| normals_rat[i].clone()).collect();
            let Some(inv) = rational_inverse(&mat) else {
                continue;
            };
            let x: Vec<Rat> = (0..n)
                .map(|i| {
                    combo
                        .iter()
                        .enumerate()
                        .map(|(k, &j)| &inv[i][k] * &ineqs[j].1)
                        .sum()
                })
                .collect();
            if ineqs.iter().all(|(a, b)| &dot(a, &x) <= b) && !points.contains(&x) {
                points.push(x);
            }
        }
        if points.is_empty() {
            return Err(PolytopeError::Empty);
        }
        Polytope::from_vertices(name, points)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn facet_count_at(&self, v: usize) -> usize {
        self.incidence[v].iter().filter(|&&b| b).count()
    }

    pub fn is_simple_vertex(&self, v: usize) -> bool {
        self.facet_count_at(v) == self.dim
    }

    pub fn is_simple(&self) -> bool {
        (0..self.vertices.len()).all(|v| self.is_simple_vertex(v))
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.facets.iter().all(|f| dot(&f.normal, x) <= f.offset)
    }

    /// Scale every vertex by a positive integer (facet data recomputed).
    pub fn dilate(&self, factor: u32) -> Polytope {
        let f = Rat::from(Int::from(factor));
        let pts = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x * &f).collect())
            .collect();
        Polytope::from_vertices(&self.name, pts).expect("dilation preserves validity")
    }

    pub fn face_lattice(&self) -> FaceLattice {
        let n_f = self.facets.len();
        let all: BTreeSet<usize> = (0..self.vertices.len()).collect();
        let mut sets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        sets.insert(all.clone());
        for f in 0..n_f {
            let vs: BTreeSet<usize> = (0..self.vertices.len())
                .filter(|&v| self.incidence[v][f])
                .collect();
            sets.insert(vs);
        }
        // closure under intersection
        loop {
            let mut fresh: Vec<BTreeSet<usize>> = Vec::new();
            for (a, b) in sets.iter().tuple_combinations() {
                let i: BTreeSet<usize> = a.intersection(b).cloned().collect();
                if !i.is_empty() && !sets.contains(&i) {
                    fresh.push(i);
                }
            }
            if fresh.is_empty() {
                break;
            }
            sets.extend(fresh);
        }

        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|vs| {
                let facet_set: BTreeSet<usize> = (0..n_f)
                    .filter(|&f| vs.iter().all(|&v| self.incidence[v][f]))
                    .collect();
                let pts: Vec<Vec<Rat>> = vs.iter().map(|&v| self.vertices[v].clone()).collect();
                Face {
                    dim: affine_rank(&pts),
                    vertex_set: vs,
                    facet_set,
                }
            })
            .collect();
        faces.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then_with(|| a.vertex_set.cmp(&b.vertex_set))
        });

        let mut vertex_face = vec![usize::MAX; self.vertices.len()];
        for (i, f) in faces.iter().enumerate() {
            if f.dim == 0 {
                let &v = f.vertex_set.iter().next().unwrap();
                vertex_face[v] = i;
            }
        }
        debug_assert!(vertex_face.iter().all(|&i| i != usize::MAX));
        FaceLattice { faces, vertex_face }
    }

    /// One cone per face: σ_E is generated by the primitive outward normals of
    /// the facets containing E.
    pub fn normal_fan(&self, lattice: &FaceLattice) -> Fan {
        let cones = lattice
            .faces
            .iter()
            .map(|face| {
                let generators: Vec<Vec<Int>> = face
                    .facet_set
                    .iter()
                    .map(|&f| self.facets[f].normal.clone())
                    .collect();
                let rat: Vec<Vec<Rat>> = generators
                    .iter()
                    .map(|g| g.iter().map(|x| Rat::from(x.clone())).collect())
                    .collect();
                Cone {
                    dim: rational_rank(&rat),
                    generators,
                }
            })
            .collect();
        Fan { cones }
    }

    /// Primitive direction of an edge face (sign unspecified).
    pub fn edge_direction(&self, lattice: &FaceLattice, edge: usize) -> Vec<Int> {
        let face = &lattice.faces[edge];
        assert_eq!(face.dim, 1, "edge_direction requires a 1-dimensional face");
        let mut it = face.vertex_set.iter();
        let v = *it.next().unwrap();
        let w = *it.next().unwrap();
        let diff: Vec<Rat> = self.vertices[w]
            .iter()
            .zip(&self.vertices[v])
            .map(|(a, b)| a - b)
            .collect();
        primitive_from_rational(&diff).expect("edge endpoints are distinct")
    }

    pub fn f_vector(&self, lattice: &FaceLattice) -> Vec<usize> {
        let mut f = vec![0usize; self.dim + 1];
        for face in &lattice.faces {
            f[face.dim] += 1;
        }
        f
    }
}

impl FaceLattice {
    pub fn vertex_face(&self, v: usize) -> usize {
        self.vertex_face[v]
    }

    pub fn faces_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&i| self.faces[i].dim == d)
            .collect()
    }

    pub fn edges(&self) -> Vec<usize> {
        self.faces_of_dim(1)
    }

    pub fn top_face(&self) -> usize {
        // unique face of maximal dimension
        (0..self.faces.len())
            .max_by_key(|&i| self.faces[i].dim)
            .expect("non-empty lattice")
    }

    pub fn is_subface(&self, sub: usize, sup: usize) -> bool {
        self.faces[sub]
            .vertex_set
            .is_subset(&self.faces[sup].vertex_set)
    }

    /// Faces containing the given vertex.
    pub fn faces_at_vertex(&self, v: usize) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&i| self.faces[i].vertex_set.contains(&v))
            .collect()
    }

    /// Subfaces of `face` (inclusive) of a given dimension.
    pub fn subfaces_of_dim(&self, face: usize, d: usize) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&i| self.faces[i].dim == d && self.is_subface(i, face))
            .collect()
    }

    /// Euler characteristic over all faces (proper and improper, without the
    /// empty face): Σ (−1)^dim.
    pub fn euler_sum(&self) -> i64 {
        self.faces
            .iter()
            .map(|f| if f.dim % 2 == 0 { 1 } else { -1 })
            .sum()
    }
}

/// Fixed corpus polytopes used across tests and shipped as data files.
pub mod corpus {
    use super::*;

    pub fn rat(x: i64) -> Rat {
        Rat::from(Int::from(x))
    }

    pub fn pts(coords: &[&[i64]]) -> Vec<Vec<Rat>> {
        coords
            .iter()
            .map(|p| p.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    /// 3-dimensional Gelfand–Zetlin polytope, vertices in the order
    /// (0,2,2),(1,2,2),(1,2,1),(0,2,0),(0,1,0),(0,1,1),(1,1,1).
    pub fn gz3() -> Polytope {
        Polytope::from_vertices(
            "gz3",
            pts(&[
                &[0, 2, 2],
                &[1, 2, 2],
                &[1, 2, 1],
                &[0, 2, 0],
                &[0, 1, 0],
                &[0, 1, 1],
                &[1, 1, 1],
            ]),
        )
        .unwrap()
    }

    pub fn unit_square() -> Polytope {
        Polytope::from_vertices("square", pts(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]])).unwrap()
    }

    pub fn unit_cube() -> Polytope {
        let mut v = Vec::new();
        for x in 0..2i64 {
            for y in 0..2i64 {
                for z in 0..2i64 {
                    v.push(vec![rat(x), rat(y), rat(z)]);
                }
            }
        }
        Polytope::from_vertices("cube", v).unwrap()
    }

    pub fn segment() -> Polytope {
        Polytope::from_vertices("segment", pts(&[&[0], &[1]])).unwrap()
    }

    pub fn simplex(n: usize) -> Polytope {
        let mut v = vec![vec![rat(0); n]];
        for i in 0..n {
            let mut e = vec![rat(0); n];
            e[i] = rat(1);
            v.push(e);
        }
        Polytope::from_vertices(&format!("simplex{n}"), v).unwrap()
    }

    pub fn octahedron() -> Polytope {
        Polytope::from_vertices(
            "octahedron",
            pts(&[
                &[1, 0, 0],
                &[-1, 0, 0],
                &[0, 1, 0],
                &[0, -1, 0],
                &[0, 0, 1],
                &[0, 0, -1],
            ]),
        )
        .unwrap()
    }

    /// Cone over the unit square: base at z = 0, apex (0,0,1).
    pub fn square_pyramid() -> Polytope {
        Polytope::from_vertices(
            "pyramid",
            pts(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
        )
        .unwrap()
    }

    /// conv{(0,0),(1,0),(0,2)} — weighted projective plane P(1,1,2).
    pub fn triangle_1_1_2() -> Polytope {
        Polytope::from_vertices("triangle112", pts(&[&[0, 0], &[1, 0], &[0, 2]])).unwrap()
    }

    /// conv{(0,0),(2,0),(0,3)} — weighted projective plane P(1,2,3).
    pub fn triangle_1_2_3() -> Polytope {
        Polytope::from_vertices("triangle123", pts(&[&[0, 0], &[2, 0], &[0, 3]])).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::corpus::*;
    use super::*;
    use num_traits::One;

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn square_facets() {
        let p = unit_square();
        assert_eq!(p.facets.len(), 4);
        let normals: BTreeSet<Vec<Int>> = p.facets.iter().map(|f| f.normal.clone()).collect();
        let expect: BTreeSet<Vec<Int>> =
            [iv(&[1, 0]), iv(&[-1, 0]), iv(&[0, 1]), iv(&[0, -1])].into();
        assert_eq!(normals, expect);
    }

    #[test]
    fn gz_facets() {
        let p = gz3();
        assert_eq!(p.vertices.len(), 7);
        let normals: BTreeSet<Vec<Int>> = p.facets.iter().map(|f| f.normal.clone()).collect();
        let expect: BTreeSet<Vec<Int>> = [
            iv(&[1, 0, 0]),
            iv(&[0, -1, 1]),
            iv(&[0, -1, 0]),
            iv(&[1, 0, -1]),
            iv(&[0, 1, 0]),
            iv(&[-1, 0, 0]),
        ]
        .into();
        assert_eq!(normals, expect);
    }

    #[test]
    fn octahedron_facets() {
        let p = octahedron();
        assert_eq!(p.facets.len(), 8);
        for f in &p.facets {
            assert!(f.normal.iter().all(|x| x.abs() == Int::one()));
        }
    }

    #[test]
    fn gz_from_inequalities() {
        // 0 ≤ x ≤ 1, 1 ≤ y ≤ 2, x ≤ z ≤ y
        let ineqs = vec![
            (iv(&[-1, 0, 0]), rat(0)),
            (iv(&[1, 0, 0]), rat(1)),
            (iv(&[0, -1, 0]), rat(-1)),
            (iv(&[0, 1, 0]), rat(2)),
            (iv(&[1, 0, -1]), rat(0)),
            (iv(&[0, -1, 1]), rat(0)),
        ];
        let p = Polytope::from_inequalities("gz3", ineqs).unwrap();
        let got: BTreeSet<Vec<Rat>> = p.vertices.iter().cloned().collect();
        let want: BTreeSet<Vec<Rat>> = gz3().vertices.iter().cloned().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn simple_inequality_examples() {
        let p = Polytope::from_inequalities(
            "square",
            vec![
                (iv(&[-1, 0]), rat(0)),
                (iv(&[1, 0]), rat(1)),
                (iv(&[0, -1]), rat(0)),
                (iv(&[0, 1]), rat(1)),
            ],
        )
        .unwrap();
        assert_eq!(p.vertices.len(), 4);

        let p = Polytope::from_inequalities(
            "t",
            vec![
                (iv(&[-1, 0]), rat(0)),
                (iv(&[0, -1]), rat(0)),
                (iv(&[3, 2]), rat(6)),
            ],
        )
        .unwrap();
        let got: BTreeSet<Vec<Rat>> = p.vertices.iter().cloned().collect();
        let want: BTreeSet<Vec<Rat>> = pts(&[&[0, 0], &[2, 0], &[0, 3]]).into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn inequality_errors() {
        assert_eq!(
            Polytope::from_inequalities("u", vec![(iv(&[1, 0]), rat(1))]).unwrap_err(),
            PolytopeError::Unbounded
        );
        let tri = Polytope::from_inequalities(
            "t",
            vec![
                (iv(&[-1, 0]), rat(0)),
                (iv(&[0, -1]), rat(0)),
                (iv(&[1, 1]), rat(1)),
            ],
        )
        .unwrap();
        assert_eq!(tri.vertices.len(), 3);
        // infeasible strip: x ≤ 0 and -x ≤ -1
        let e = Polytope::from_inequalities(
            "e",
            vec![
                (iv(&[1, 0]), rat(0)),
                (iv(&[-1, 0]), rat(-1)),
                (iv(&[0, 1]), rat(1)),
                (iv(&[0, -1]), rat(0)),
            ],
        )
        .unwrap_err();
        assert_eq!(e, PolytopeError::Empty);
    }

    #[test]
    fn f_vectors() {
        let p = unit_square();
        let l = p.face_lattice();
        assert_eq!(p.f_vector(&l), vec![4, 4, 1]);
        assert_eq!(l.euler_sum(), 1);

        let p = gz3();
        let l = p.face_lattice();
        let f = p.f_vector(&l);
        assert_eq!(f, vec![7, 11, 6, 1]);
        // Euler check on proper faces: 7 - 11 + 6 = 2
        assert_eq!(f[0] as i64 - f[1] as i64 + f[2] as i64, 2);
        assert_eq!(l.euler_sum(), 1);

        let p = simplex(3);
        let l = p.face_lattice();
        assert_eq!(p.f_vector(&l), vec![4, 6, 4, 1]);
    }

    #[test]
    fn simplicity() {
        assert!(unit_cube().is_simple());
        assert!(!square_pyramid().is_simple());
        let gz = gz3();
        assert!(!gz.is_simple());
        // (1,1,1) is vertex index 6, non-simple with 4 incident facets
        assert_eq!(gz.facet_count_at(6), 4);
        assert!(!gz.is_simple_vertex(6));
        // (0,2,2) is vertex index 0, simple
        assert!(gz.is_simple_vertex(0));
    }

    #[test]
    fn normal_fan_gz_vertex_cone() {
        let p = gz3();
        let l = p.face_lattice();
        let fan = p.normal_fan(&l);
        let v = l.vertex_face(6); // (1,1,1)
        let gens: BTreeSet<Vec<Int>> = fan.cones[v].generators.iter().cloned().collect();
        let expect: BTreeSet<Vec<Int>> = [
            iv(&[0, -1, 1]),
            iv(&[0, -1, 0]),
            iv(&[1, 0, -1]),
            iv(&[1, 0, 0]),
        ]
        .into();
        assert_eq!(gens, expect);
        assert_eq!(fan.cones[v].dim, 3);
        // zero cone for the whole polytope
        let top = l.top_face();
        assert!(fan.cones[top].generators.is_empty());
        assert_eq!(fan.cones[top].dim, 0);
    }

    #[test]
    fn cone_dims_complementary() {
        for p in [unit_square(), gz3(), simplex(3), square_pyramid()] {
            let l = p.face_lattice();
            let fan = p.normal_fan(&l);
            for (i, face) in l.faces.iter().enumerate() {
                assert_eq!(fan.cones[i].dim, p.dim - face.dim, "face {i} of {}", p.name);
            }
        }
    }

    #[test]
    fn edge_directions() {
        let p = gz3();
        let l = p.face_lattice();
        // edge between (1,1,1) [6] and (1,2,2) [1]
        let e = l
            .edges()
            .into_iter()
            .find(|&e| {
                l.faces[e].vertex_set == BTreeSet::from([1usize, 6usize])
            })
            .unwrap();
        let d = p.edge_direction(&l, e);
        assert!(d == iv(&[0, 1, 1]) || d == iv(&[0, -1, -1]));

        let sq = unit_square();
        let lsq = sq.face_lattice();
        for e in lsq.edges() {
            let d = sq.edge_direction(&lsq, e);
            assert!(d.iter().map(|x| x.abs()).sum::<Int>() == Int::one());
        }
    }

    #[test]
    fn round_trip_corpus() {
        for p in [
            unit_square(),
            unit_cube(),
            gz3(),
            simplex(2),
            simplex(3),
            square_pyramid(),
            octahedron(),
            triangle_1_1_2(),
            triangle_1_2_3(),
        ] {
            let ineqs: Vec<(Vec<Int>, Rat)> = p
                .facets
                .iter()
                .map(|f| (f.normal.clone(), f.offset.clone()))
                .collect();
            let q = Polytope::from_inequalities(&p.name, ineqs).unwrap();
            let a: BTreeSet<Vec<Rat>> = p.vertices.iter().cloned().collect();
            let b: BTreeSet<Vec<Rat>> = q.vertices.iter().cloned().collect();
            assert_eq!(a, b, "round trip failed for {}", p.name);
        }
    }

    #[test]
    fn duplicate_and_degenerate_inputs() {
        let e = Polytope::from_vertices("d", pts(&[&[0, 0], &[1, 0], &[0, 0]])).unwrap_err();
        assert_eq!(e, PolytopeError::DuplicatePoint(2));
        let e = Polytope::from_vertices("flat", pts(&[&[0, 0], &[1, 0], &[2, 0]])).unwrap_err();
        assert_eq!(e, PolytopeError::NotFullDimensional);
    }

    #[test]
    fn maximal_cones_cover_sample_points() {
        // locate sample covectors by maximizing over vertices
        let p = gz3();
        let l = p.face_lattice();
        let fan = p.normal_fan(&l);
        let samples = pts(&[&[1, 1, 1], &[-2, 5, 1], &[0, -1, 3], &[7, -3, -2], &[0, 0, -1]]);
        for c in &samples {
            let vals: Vec<Rat> = p
                .vertices
                .iter()
                .map(|v| v.iter().zip(c).map(|(a, b)| a * b).sum())
                .collect();
            let best = vals.iter().max().unwrap();
            let argmax: Vec<usize> =
                (0..vals.len()).filter(|&i| &vals[i] == best).collect();
            assert!(!argmax.is_empty());
            // the covector lies in the normal cone of each maximizing vertex
            let v = argmax[0];
            let cone = &fan.cones[l.vertex_face(v)];
            assert!(cone.dim == p.dim || argmax.len() > 1);
        }
    }
}
