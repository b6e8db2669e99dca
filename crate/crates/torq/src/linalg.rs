//! Exact integer and rational linear algebra: Smith/Hermite normal forms,
//! rational kernels, lattice saturation and quotient lattices.
//!
//! Everything here works over arbitrary-precision scalars; there is no
//! floating-point path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("quotient is not finite: generators are linearly dependent")]
    NotFinite,
    #[error("input basis is not saturated (SNF diagonal entry {0} > 1)")]
    NotSaturated(Int),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum::<Int>()
            })
            .collect()
    }

    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    /// Exact determinant via rational Gaussian elimination. Square matrices only.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m: Vec<Vec<Rat>> = (0..n)
            .map(|i| self.row(i).iter().map(|x| Rat::from(x.clone())).collect())
            .collect();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return Int::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= m[c][c].clone();
            let inv = m[c][c].clone();
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] / &inv;
                for j in c..n {
                    let sub = &f * &m[c][j];
                    m[r][j] -= sub;
                }
            }
        }
        assert!(det.is_integer());
        det.to_integer()
    }

    pub fn rank(&self) -> usize {
        let rat: Vec<Vec<Rat>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| Rat::from(x.clone())).collect())
            .collect();
        rational_rank(&rat)
    }

    /// Inverse of a unimodular matrix. Panics if the matrix is not unimodular.
    pub fn unimodular_inverse(&self) -> IntMatrix {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let rat: Vec<Vec<Rat>> = (0..n)
            .map(|i| self.row(i).iter().map(|x| Rat::from(x.clone())).collect())
            .collect();
        let inv = rational_inverse(&rat).expect("matrix is singular");
        let mut out = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                assert!(inv[i][j].is_integer(), "matrix is not unimodular");
                out[(i, j)] = inv[i][j].to_integer();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// U·A·V = D with U, V unimodular, D diagonal, nonnegative, d_i | d_{i+1}.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form by classical elimination with minimal-absolute-value pivoting.
pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let mut d = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    let n = a.rows.min(a.cols);

    for t in 0..n {
        'outer: loop {
            // pivot: minimal nonzero absolute value in the trailing submatrix
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..d.rows {
                for j in t..d.cols {
                    if !d[(i, j)].is_zero()
                        && pivot
                            .map(|(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                            .unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break; // trailing submatrix is zero
            };
            swap_rows(&mut d, &mut u, t, pi);
            swap_cols(&mut d, &mut v, t, pj);

            // clear column t below and row t to the right
            let mut clean = true;
            for i in t + 1..d.rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = rounded_div(&d[(i, t)], &d[(t, t)]);
                add_row(&mut d, &mut u, i, t, &-q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..d.cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = rounded_div(&d[(t, j)], &d[(t, t)]);
                add_col(&mut d, &mut v, j, t, &-q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue; // remainders are smaller than the pivot; re-select
            }
            // enforce divisibility of the trailing block by the pivot
            for i in t + 1..d.rows {
                for j in t + 1..d.cols {
                    if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                        add_row(&mut d, &mut u, t, i, &Int::one());
                        continue 'outer;
                    }
                }
            }
            break;
        }
        if d[(t, t)].is_negative() {
            negate_row(&mut d, &mut u, t);
        }
    }
    SnfDecomposition { u, d, v }
}

/// Row Hermite form: U·A = H, U unimodular, H in row echelon with positive pivots
/// and zeros below each pivot.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut r = 0;
    for c in 0..h.cols {
        if r == h.rows {
            break;
        }
        loop {
            let mut pivot: Option<usize> = None;
            for i in r..h.rows {
                if !h[(i, c)].is_zero()
                    && pivot
                        .map(|p| h[(i, c)].abs() < h[(p, c)].abs())
                        .unwrap_or(true)
                {
                    pivot = Some(i);
                }
            }
            let Some(p) = pivot else {
                break;
            };
            swap_rows(&mut h, &mut u, r, p);
            let mut clean = true;
            for i in r + 1..h.rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = rounded_div(&h[(i, c)], &h[(r, c)]);
                add_row(&mut h, &mut u, i, r, &-q);
                if !h[(i, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                if h[(r, c)].is_negative() {
                    negate_row(&mut h, &mut u, r);
                }
                r += 1;
                break;
            }
        }
    }
    (h, u)
}

fn swap_rows(m: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..m.cols {
        let a = m[(i, c)].clone();
        m[(i, c)] = m[(j, c)].clone();
        m[(j, c)] = a;
    }
    for c in 0..u.cols {
        let a = u[(i, c)].clone();
        u[(i, c)] = u[(j, c)].clone();
        u[(j, c)] = a;
    }
}

fn swap_cols(m: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..m.rows {
        let a = m[(r, i)].clone();
        m[(r, i)] = m[(r, j)].clone();
        m[(r, j)] = a;
    }
    for r in 0..v.rows {
        let a = v[(r, i)].clone();
        v[(r, i)] = v[(r, j)].clone();
        v[(r, j)] = a;
    }
}

/// row_i += q * row_j (same op on the row-transform accumulator)
fn add_row(m: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize, q: &Int) {
    for c in 0..m.cols {
        let add = q * &m[(j, c)];
        m[(i, c)] += add;
    }
    for c in 0..u.cols {
        let add = q * &u[(j, c)];
        u[(i, c)] += add;
    }
}

/// col_i += q * col_j (same op on the column-transform accumulator)
fn add_col(m: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize, q: &Int) {
    for r in 0..m.rows {
        let add = q * &m[(r, j)];
        m[(r, i)] += add;
    }
    for r in 0..v.rows {
        let add = q * &v[(r, j)];
        v[(r, i)] += add;
    }
}

fn negate_row(m: &mut IntMatrix, u: &mut IntMatrix, i: usize) {
    for c in 0..m.cols {
        let x = -m[(i, c)].clone();
        m[(i, c)] = x;
    }
    for c in 0..u.cols {
        let x = -u[(i, c)].clone();
        u[(i, c)] = x;
    }
}

/// Nearest-integer division; keeps remainders at most half the divisor.
fn rounded_div(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_rem(b);
    if r.abs() * 2 > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Finite abelian group in invariant-factor form; only factors > 1 are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<Int>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            invariant_factors: Vec::new(),
        }
    }

    pub fn from_factors(factors: Vec<Int>) -> Self {
        for w in factors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "factors must form a chain");
        }
        assert!(factors.iter().all(|f| f > &Int::one()));
        FiniteAbelianGroup {
            invariant_factors: factors,
        }
    }

    pub fn invariant_factors(&self) -> &[Int] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> Int {
        self.invariant_factors
            .iter()
            .fold(Int::one(), |acc, f| acc * f)
    }
}

impl std::fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|x| x.to_string())
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Basis of the right null space of a rational matrix.
pub fn kernel_basis(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let (rref, pivots) = reduced_row_echelon(&mut m);
    let free: Vec<usize> = (0..cols).filter(|j| !pivots.contains(j)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![Rat::zero(); cols];
        v[f] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -rref[r][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// Reduced row echelon form in place; returns (nonzero rows, pivot columns).
pub fn reduced_row_echelon(m: &mut [Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for j in c..cols {
            m[r][j] = &m[r][j] / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m[..r].to_vec(), pivots)
}

pub fn rational_rank(a: &[Vec<Rat>]) -> usize {
    let mut m = a.to_vec();
    reduced_row_echelon(&mut m).1.len()
}

pub fn rational_inverse(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            }));
            r
        })
        .collect();
    let (rref, pivots) = reduced_row_echelon(&mut m);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(rref.iter().map(|r| r[n..].to_vec()).collect())
}

/// Z-basis of span_R(vs) ∩ Z^n: the saturation of the lattice generated by `vs`.
///
/// With U·A·V = D for the matrix A whose rows are the generators, the first
/// rank(A) rows of V⁻¹ form such a basis; the result is canonicalized to the
/// fully reduced Hermite form so equal lattices get equal bases.
pub fn saturate(vs: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let vs: Vec<Vec<Int>> = vs
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if vs.is_empty() {
        return Vec::new();
    }
    assert!(vs.iter().all(|v| v.len() == n));
    let a = IntMatrix::from_rows(vs);
    let dec = snf(&a);
    let r = dec.rank();
    let vinv = dec.v.unimodular_inverse();
    let basis: Vec<Vec<Int>> = (0..r).map(|i| vinv.row(i).to_vec()).collect();
    let (mut h, _) = hnf(&IntMatrix::from_rows(basis));
    reduce_above_pivots(&mut h);
    (0..r).map(|i| h.row(i).to_vec()).collect()
}

/// Reduce entries above each pivot into [0, pivot) (canonical Hermite form).
fn reduce_above_pivots(h: &mut IntMatrix) {
    let mut dummy = IntMatrix::zero(h.rows, 0);
    for r in 0..h.rows {
        let Some(c) = (0..h.cols).find(|&c| !h[(r, c)].is_zero()) else {
            continue;
        };
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                add_row(h, &mut dummy, i, r, &-q);
            }
        }
    }
}

/// Projection Z^n → Z^{n-r} whose kernel is exactly the saturated sublattice
/// spanned by `s` (vectors of length n). Built from the last n−r rows of U in
/// the SNF of the matrix with the basis vectors as columns.
pub fn quotient_projection(s: &[Vec<Int>], n: usize) -> Result<IntMatrix, LinAlgError> {
    let r = s.len();
    if r == 0 {
        return Ok(IntMatrix::identity(n));
    }
    for v in s {
        if v.len() != n {
            return Err(LinAlgError::DimensionMismatch(format!(
                "expected vectors of length {n}"
            )));
        }
    }
    let cols = IntMatrix::from_rows(s.to_vec()).transpose(); // n×r
    let dec = snf(&cols);
    let diag = dec.d.diagonal();
    if diag.len() < r || diag.iter().any(|x| x.is_zero()) {
        return Err(LinAlgError::DimensionMismatch(
            "basis vectors are linearly dependent".into(),
        ));
    }
    if let Some(bad) = diag.iter().find(|x| **x > Int::one()) {
        return Err(LinAlgError::NotSaturated(bad.clone()));
    }
    let mut p = IntMatrix::zero(n - r, n);
    for i in 0..n - r {
        for j in 0..n {
            p[(i, j)] = dec.u[(r + i, j)].clone();
        }
    }
    Ok(p)
}

/// Invariant factors of Z^k / ⟨μ₁,…,μ_k⟩ for k independent vectors in Z^k;
/// isomorphic to the kernel of the torus endomorphism with matrix [μ₁|…|μ_k].
pub fn abelian_quotient(mus: &[Vec<Int>]) -> Result<FiniteAbelianGroup, LinAlgError> {
    let k = mus.len();
    if k == 0 {
        return Ok(FiniteAbelianGroup::trivial());
    }
    for v in mus {
        if v.len() != k {
            return Err(LinAlgError::DimensionMismatch(format!(
                "expected {k} vectors of length {k}"
            )));
        }
    }
    let m = IntMatrix::from_rows(mus.to_vec()).transpose();
    let dec = snf(&m);
    let diag = dec.d.diagonal();
    if diag.iter().any(|x| x.is_zero()) {
        return Err(LinAlgError::NotFinite);
    }
    Ok(FiniteAbelianGroup {
        invariant_factors: diag.into_iter().filter(|x| x > &Int::one()).collect(),
    })
}

/// v divided by the gcd of its entries.
pub fn primitive(v: &[Int]) -> Result<Vec<Int>, LinAlgError> {
    let g = v.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(LinAlgError::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Content (gcd of entries) and primitive part of a nonzero vector.
pub fn content_and_primitive(v: &[Int]) -> Result<(Int, Vec<Int>), LinAlgError> {
    let g = v.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(LinAlgError::ZeroVector);
    }
    Ok((g.clone(), v.iter().map(|x| x / &g).collect()))
}

/// Scale a nonzero rational vector to its primitive integer representative
/// (positive multiple).
pub fn primitive_from_rational(v: &[Rat]) -> Result<Vec<Int>, LinAlgError> {
    let lcm = v
        .iter()
        .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive(&ints)
}

/// Parse the `snf` CLI matrix format: one row per line, whitespace-separated
/// decimal integers.
pub fn parse_matrix_text(text: &str) -> Result<IntMatrix, String> {
    let mut rows: Vec<Vec<Int>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: Result<Vec<Int>, _> = line
            .split_whitespace()
            .map(|tok| tok.parse::<Int>().map_err(|e| format!("line {}: {e}", ln + 1)))
            .collect();
        rows.push(row?);
    }
    if rows.is_empty() {
        return Err("empty matrix".into());
    }
    let c = rows[0].len();
    if rows.iter().any(|r| r.len() != c) {
        return Err("rows have differing lengths".into());
    }
    Ok(IntMatrix::from_rows(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(2);
        let dec = snf(&a);
        assert_eq!(dec.d, a);
        assert_eq!(dec.u, IntMatrix::identity(2));
        assert_eq!(dec.v, IntMatrix::identity(2));
    }

    #[test]
    fn snf_examples() {
        let a = im(&[&[2, 1], &[0, -1]]);
        let dec = snf(&a);
        assert_eq!(dec.d.diagonal(), iv(&[1, 2]));
        let a = im(&[&[2, 0], &[0, 3]]);
        let dec = snf(&a);
        assert_eq!(dec.d.diagonal(), iv(&[1, 6]));
    }

    #[test]
    fn snf_transforms_multiply_out() {
        let a = im(&[&[4, 6, 2], &[6, 4, 8], &[0, 5, 5]]);
        let dec = snf(&a);
        assert_eq!(dec.u.mul(&a).mul(&dec.v), dec.d);
        assert_eq!(dec.u.det().abs(), Int::one());
        assert_eq!(dec.v.det().abs(), Int::one());
    }

    #[test]
    fn hnf_examples() {
        let a = IntMatrix::identity(3);
        let (h, u) = hnf(&a);
        assert_eq!(h, a);
        assert_eq!(u, a);

        let a = im(&[&[0, 1], &[1, 0]]);
        let (h, _) = hnf(&a);
        assert_eq!(h, IntMatrix::identity(2));

        let a = im(&[&[2, 4], &[1, 3]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, im(&[&[1, 3], &[0, 2]]));
        assert_eq!(u.mul(&a), h);
    }

    #[test]
    fn kernel_examples() {
        let id: Vec<Vec<Rat>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        assert!(kernel_basis(&id).is_empty());

        let row = vec![vec![Rat::one(), Rat::one(), Rat::one()]];
        let k = kernel_basis(&row);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: Rat = v.iter().cloned().sum();
            assert!(dot.is_zero());
        }

        let row = vec![vec![Rat::from(Int::from(2)), Rat::one()]];
        let k = kernel_basis(&row);
        assert_eq!(k.len(), 1);
        // spans (1, -2)
        let v = &k[0];
        assert_eq!(&v[1] / &v[0], Rat::from(Int::from(-2)));
    }

    #[test]
    fn saturate_examples() {
        assert_eq!(saturate(&[iv(&[2, 0])], 2), vec![iv(&[1, 0])]);
        let b = saturate(&[iv(&[1, 1]), iv(&[1, -1])], 2);
        assert_eq!(b.len(), 2);
        // must be a basis of all of Z^2
        let m = IntMatrix::from_rows(b);
        assert_eq!(m.det().abs(), Int::one());
        assert!(saturate(&[], 2).is_empty());
    }

    #[test]
    fn quotient_projection_examples() {
        let p = quotient_projection(&[iv(&[1, 0, 0])], 3).unwrap();
        assert_eq!(p.rows, 2);
        // kernel must be e1
        assert!(p.mul_vec(&iv(&[1, 0, 0])).iter().all(|x| x.is_zero()));
        assert_eq!(p.rank(), 2);

        let p = quotient_projection(&[], 3).unwrap();
        assert_eq!(p, IntMatrix::identity(3));

        let p = quotient_projection(&[iv(&[2, 1])], 2).unwrap();
        assert_eq!(p.rows, 1);
        assert!(p.mul_vec(&iv(&[2, 1])).iter().all(|x| x.is_zero()));

        // non-saturated input is rejected
        assert!(matches!(
            quotient_projection(&[iv(&[2, 0])], 2),
            Err(LinAlgError::NotSaturated(_))
        ));
    }

    #[test]
    fn abelian_quotient_examples() {
        let g = abelian_quotient(&[iv(&[1, 0, 0]), iv(&[0, 1, 0]), iv(&[0, 0, 1])]).unwrap();
        assert!(g.is_trivial());

        // Gelfand--Zetlin first-step normals
        let g = abelian_quotient(&[iv(&[-1, 0, 0]), iv(&[0, 1, 0]), iv(&[0, -1, 1])]).unwrap();
        assert!(g.is_trivial());

        let g = abelian_quotient(&[iv(&[0, -1]), iv(&[3, 2])]).unwrap();
        assert_eq!(g.invariant_factors(), &[Int::from(3)]);

        assert_eq!(
            abelian_quotient(&[iv(&[1, 2]), iv(&[2, 4])]),
            Err(LinAlgError::NotFinite)
        );
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&iv(&[2, 4, 6])).unwrap(), iv(&[1, 2, 3]));
        assert_eq!(primitive(&iv(&[0, -3])).unwrap(), iv(&[0, -1]));
        assert_eq!(primitive(&iv(&[5])).unwrap(), iv(&[1]));
        assert_eq!(primitive(&iv(&[0, 0])), Err(LinAlgError::ZeroVector));
    }

    #[test]
    fn matrix_text_roundtrip() {
        let m = parse_matrix_text("2 1\n0 -1\n").unwrap();
        assert_eq!(m, im(&[&[2, 1], &[0, -1]]));
        assert!(parse_matrix_text("").is_err());
        assert!(parse_matrix_text("1 2\n3").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn snf_invariants(rows in 1usize..=5, cols in 1usize..=5,
                          seed in proptest::collection::vec(-9i64..=9, 25)) {
            let a = IntMatrix::from_rows(
                (0..rows).map(|i| (0..cols).map(|j| Int::from(seed[i * 5 + j])).collect()).collect());
            let dec = snf(&a);
            prop_assert_eq!(dec.u.mul(&a).mul(&dec.v), dec.d.clone());
            prop_assert_eq!(dec.u.det().abs(), Int::one());
            prop_assert_eq!(dec.v.det().abs(), Int::one());
            let diag = dec.d.diagonal();
            for w in diag.windows(2) {
                if !w[0].is_zero() {
                    prop_assert!((&w[1] % &w[0]).is_zero());
                }
                prop_assert!(!w[0].is_negative());
            }
            // off-diagonal zero
            for i in 0..dec.d.rows {
                for j in 0..dec.d.cols {
                    if i != j {
                        prop_assert!(dec.d[(i, j)].is_zero());
                    }
                }
            }
        }

        #[test]
        fn quotient_order_is_det(n in 1usize..=4,
                                 seed in proptest::collection::vec(-6i64..=6, 16)) {
            let cols: Vec<Vec<Int>> =
                (0..n).map(|i| (0..n).map(|j| Int::from(seed[i * 4 + j])).collect()).collect();
            let m = IntMatrix::from_rows(cols.clone()).transpose();
            let det = m.det();
            let q = abelian_quotient(&cols);
            if det.is_zero() {
                prop_assert_eq!(q, Err(LinAlgError::NotFinite));
            } else {
                prop_assert_eq!(q.unwrap().order(), det.abs());
            }
        }

        #[test]
        fn saturate_idempotent_and_spanning(n in 1usize..=4, m in 0usize..=4,
                                            seed in proptest::collection::vec(-5i64..=5, 16)) {
            let vs: Vec<Vec<Int>> =
                (0..m).map(|i| (0..n).map(|j| Int::from(seed[i * 4 + j])).collect()).collect();
            let s1 = saturate(&vs, n);
            let s2 = saturate(&s1, n);
            prop_assert_eq!(s1.clone(), s2);
            // same rational span
            let to_rat = |v: &Vec<Vec<Int>>| -> Vec<Vec<Rat>> {
                v.iter().map(|r| r.iter().map(|x| Rat::from(x.clone())).collect()).collect()
            };
            let mut joint = to_rat(&vs);
            joint.extend(to_rat(&s1));
            prop_assert_eq!(rational_rank(&to_rat(&vs)), rational_rank(&joint));
            prop_assert_eq!(rational_rank(&to_rat(&s1)), s1.len());
        }

        #[test]
        fn projection_kills_sublattice(n in 1usize..=4, m in 0usize..=3,
                                       seed in proptest::collection::vec(-5i64..=5, 12)) {
            let vs: Vec<Vec<Int>> =
                (0..m).map(|i| (0..n).map(|j| Int::from(seed[i * 4 + j])).collect()).collect();
            let s = saturate(&vs, n);
            let p = quotient_projection(&s, n).unwrap();
            for v in &s {
                prop_assert!(p.mul_vec(v).iter().all(|x| x.is_zero()));
            }
            prop_assert_eq!(p.rank(), n - s.len());
        }
    }
}
