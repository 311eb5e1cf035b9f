//! Integer linear algebra over arbitrary-precision integers: Hermite and
//! Smith normal forms with transform matrices, integer kernels, lattices of
//! row vectors, and quotient exponents.
//!
//! Conventions: matrices are row-major; `hnf` returns `(h, u)` with
//! `u * m = h`, `u` unimodular, `h` in row echelon form with positive pivots
//! and entries above each pivot reduced into `[0, pivot)`. `snf` returns
//! `(d, u, v)` with `u * m * v = d` diagonal and `d[0] | d[1] | ...`.

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::polyring::{monomials_of_degree, Monomial, SparsePoly};
use crate::rootsys::RootSystem;
use crate::scalar::{Int, Rational};

use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    nrows: usize,
    ncols: usize,
    data: Vec<Int>,
}

impl IntMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        IntMat {
            nrows,
            ncols,
            data: vec![Int::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        IntMat {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn at(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.ncols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Int {
        &mut self.data[i * self.ncols + j]
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Int]> {
        (0..self.nrows).map(|i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        self.rows().map(<[Int]>::to_vec).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.ncols, rhs.nrows);
        let mut out = IntMat::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols {
                    let add = a * rhs.at(k, j);
                    *out.at_mut(i, j) += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.ncols, v.len());
        (0..self.nrows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(i * self.ncols + j, k * self.ncols + j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.ncols {
            let v = -self.at(i, j).clone();
            *self.at_mut(i, j) = v;
        }
    }

    /// `row[dst] -= q * row[src]`
    fn row_axpy(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.ncols {
            let sub = q * self.at(src, j);
            *self.at_mut(dst, j) -= sub;
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for i in 0..self.nrows {
            self.data.swap(i * self.ncols + j, i * self.ncols + k);
        }
    }

    /// `col[dst] -= q * col[src]`
    fn col_axpy(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.nrows {
            let sub = q * self.at(i, src);
            *self.at_mut(i, dst) -= sub;
        }
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nrows {
            write!(f, "[")?;
            for j in 0..self.ncols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

fn rounded_quotient(a: &Int, b: &Int) -> Int {
    let r = Rational::new(a.clone(), b.clone());
    r.round().to_integer()
}

fn floor_quotient(a: &Int, b: &Int) -> Int {
    num_integer::Integer::div_floor(a, b)
}

/// Row Hermite normal form: returns `(h, u)` with `u * m = h` and `u`
/// unimodular.
pub fn hnf(m: &IntMat) -> (IntMat, IntMat) {
    let mut h = m.clone();
    let mut u = IntMat::identity(m.nrows());
    let mut r = 0;
    for col in 0..h.ncols() {
        // Euclid down the column until at most one nonzero entry survives at
        // the pivot row.
        loop {
            let pivot = (r..h.nrows())
                .filter(|&i| !h.at(i, col).is_zero())
                .min_by_key(|&i| h.at(i, col).abs());
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..h.nrows() {
                if h.at(i, col).is_zero() {
                    continue;
                }
                let q = rounded_quotient(h.at(i, col), h.at(r, col));
                h.row_axpy(i, r, &q);
                u.row_axpy(i, r, &q);
                if !h.at(i, col).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.at(r, col).is_zero() {
            continue;
        }
        if h.at(r, col).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = floor_quotient(h.at(i, col), h.at(r, col));
            h.row_axpy(i, r, &q);
            u.row_axpy(i, r, &q);
        }
        r += 1;
        if r == h.nrows() {
            break;
        }
    }
    (h, u)
}

fn hnf_rank(h: &IntMat) -> usize {
    (0..h.nrows()).take_while(|&i| !h.is_zero_row(i)).count()
}

fn pivot_col(h: &IntMat, i: usize) -> Option<usize> {
    (0..h.ncols()).find(|&j| !h.at(i, j).is_zero())
}

/// Coordinates of `v` in the row space of the echelon matrix `h`, or `None`
/// if `v` lies outside it. Coordinates are rational in general and integral
/// exactly when `v` is in the lattice spanned by the rows.
pub fn solve_in_rowspace(h: &IntMat, v: &[Int]) -> Option<Vec<Rational>> {
    assert_eq!(h.ncols(), v.len());
    let rank = hnf_rank(h);
    let mut residue: Vec<Rational> = v
        .iter()
        .map(|c| Rational::from_integer(c.clone()))
        .collect();
    let mut coords = Vec::with_capacity(rank);
    for i in 0..rank {
        let p = pivot_col(h, i).unwrap();
        let c = residue[p].clone() / Rational::from_integer(h.at(i, p).clone());
        for j in p..h.ncols() {
            let sub = c.clone() * Rational::from_integer(h.at(i, j).clone());
            residue[j] -= sub;
        }
        coords.push(c);
    }
    if residue.iter().all(Zero::is_zero) {
        Some(coords)
    } else {
        None
    }
}

/// Smith normal form: returns `(d, u, v)` with `u * m * v = d`, the diagonal
/// nonnegative with each entry dividing the next.
pub fn snf(m: &IntMat) -> (IntMat, IntMat, IntMat) {
    let mut d = m.clone();
    let mut u = IntMat::identity(m.nrows());
    let mut v = IntMat::identity(m.ncols());
    let steps = m.nrows().min(m.ncols());
    loop {
        diagonalize(&mut d, &mut u, &mut v);
        let mut fixed = true;
        for t in 1..steps {
            let prev = d.at(t - 1, t - 1).clone();
            let cur = d.at(t, t).clone();
            if cur.is_zero() || prev.is_zero() {
                continue;
            }
            if !(&cur % &prev).is_zero() {
                // Couple the two diagonal entries and rediagonalize; the
                // (t-1)-th entry strictly shrinks to a gcd, so this loop
                // terminates.
                d.col_axpy(t - 1, t, &Int::from(-1));
                v.col_axpy(t - 1, t, &Int::from(-1));
                fixed = false;
                break;
            }
        }
        if fixed {
            break;
        }
    }
    (d, u, v)
}

fn diagonalize(d: &mut IntMat, u: &mut IntMat, v: &mut IntMat) {
    let steps = d.nrows().min(d.ncols());
    for t in 0..steps {
        loop {
            // Minimal nonzero entry of the trailing block moves to (t, t).
            let mut best: Option<(usize, usize)> = None;
            for i in t..d.nrows() {
                for j in t..d.ncols() {
                    if !d.at(i, j).is_zero()
                        && best
                            .map(|(bi, bj)| d.at(i, j).abs() < d.at(bi, bj).abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { return };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..d.nrows() {
                if d.at(i, t).is_zero() {
                    continue;
                }
                let q = rounded_quotient(d.at(i, t), d.at(t, t));
                d.row_axpy(i, t, &q);
                u.row_axpy(i, t, &q);
                if !d.at(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..d.ncols() {
                if d.at(t, j).is_zero() {
                    continue;
                }
                let q = rounded_quotient(d.at(t, j), d.at(t, t));
                d.col_axpy(j, t, &q);
                v.col_axpy(j, t, &q);
                if !d.at(t, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if d.at(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
}

/// Basis of the right kernel `{ x : m x = 0 }` as a saturated lattice.
pub fn kernel(m: &IntMat) -> Vec<Vec<Int>> {
    let (h, u) = hnf(&m.transpose());
    let rank = hnf_rank(&h);
    (rank..h.nrows()).map(|i| u.row(i).to_vec()).collect()
}

/// Determinant by fraction-free Gaussian elimination.
pub fn det(m: &IntMat) -> Int {
    assert_eq!(m.nrows(), m.ncols());
    let n = m.nrows();
    if n == 0 {
        return Int::one();
    }
    let mut a = m.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a.at(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a.at(i, k).is_zero()) else {
                return Int::zero();
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a.at(k, k) * a.at(i, j) - a.at(i, k) * a.at(k, j);
                *a.at_mut(i, j) = num / &prev;
            }
            *a.at_mut(i, k) = Int::zero();
        }
        prev = a.at(k, k).clone();
    }
    sign * a.at(n - 1, n - 1).clone()
}

/// A sublattice of `Z^dim` held as a Hermite-form row basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntLattice {
    dim: usize,
    basis: IntMat,
}

impl IntLattice {
    pub fn from_generators(dim: usize, gens: impl IntoIterator<Item = Vec<Int>>) -> Self {
        let rows: Vec<Vec<Int>> = gens.into_iter().inspect(|g| assert_eq!(g.len(), dim)).collect();
        if rows.is_empty() {
            return IntLattice {
                dim,
                basis: IntMat::zeros(0, dim),
            };
        }
        let (h, _) = hnf(&IntMat::from_rows(rows));
        let rank = hnf_rank(&h);
        let basis = IntMat::from_rows(h.to_rows().into_iter().take(rank).collect());
        IntLattice { dim, basis }
    }

    pub fn zero(dim: usize) -> Self {
        IntLattice {
            dim,
            basis: IntMat::zeros(0, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        matches!(solve_in_rowspace(&self.basis, v), Some(c) if c.iter().all(Rational::is_integer))
    }

    pub fn contains_rationally(&self, v: &[Int]) -> bool {
        solve_in_rowspace(&self.basis, v).is_some()
    }

    pub fn sum(&self, other: &IntLattice) -> IntLattice {
        assert_eq!(self.dim, other.dim);
        IntLattice::from_generators(
            self.dim,
            self.basis.rows().chain(other.basis.rows()).map(<[Int]>::to_vec),
        )
    }

    pub fn is_sublattice_of(&self, other: &IntLattice) -> bool {
        self.basis.rows().all(|r| other.contains(r))
    }
}

/// The exponent of the finite group `(M + L) / L`: the least `e >= 1` with
/// `e * M` contained in `L`. If the quotient is infinite, reports a generator
/// of `M` with no multiple in `L`.
pub fn quotient_exponent(m: &IntLattice, l: &IntLattice) -> Result<Int> {
    assert_eq!(m.dim(), l.dim());
    let sum = m.sum(l);
    if l.rank() < sum.rank() {
        let witness = m
            .basis()
            .rows()
            .find(|r| !l.contains_rationally(r))
            .map(|r| {
                let coords: Vec<String> = r.iter().map(Int::to_string).collect();
                format!("({})", coords.join(", "))
            })
            .unwrap_or_else(|| "generator of the sum outside the image span".into());
        return Err(Error::InfiniteExponent { witness });
    }
    let rank = sum.rank();
    if rank == 0 {
        return Ok(Int::one());
    }
    // Rows of L in coordinates of the sum's basis form an integer matrix of
    // full column rank; the largest elementary divisor of its cokernel is the
    // exponent.
    let rows: Vec<Vec<Int>> = l
        .basis()
        .rows()
        .map(|r| {
            let coords = solve_in_rowspace(sum.basis(), r)
                .expect("sublattice row outside the sum");
            coords
                .into_iter()
                .map(|c| {
                    assert!(c.is_integer(), "non-integral coordinate in lattice sum");
                    c.to_integer()
                })
                .collect()
        })
        .collect();
    let (d, _, _) = snf(&IntMat::from_rows(rows));
    Ok(d.at(rank - 1, rank - 1).clone())
}

/// Index map for the monomials of fixed total degree.
pub struct MonomialBasis {
    nvars: usize,
    degree: usize,
    list: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: usize) -> Self {
        let list = monomials_of_degree(nvars, degree);
        let index = list
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            nvars,
            degree,
            list,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.list[i]
    }

    pub fn index_of(&self, m: &Monomial) -> usize {
        self.index[m]
    }

    /// Coefficient vector of a homogeneous polynomial of this degree.
    pub fn vector_of(&self, p: &SparsePoly<Int>) -> Vec<Int> {
        let mut out = vec![Int::zero(); self.len()];
        for (m, c) in p.terms() {
            assert_eq!(m.total_degree(), self.degree, "not homogeneous");
            out[self.index_of(m)] = c.clone();
        }
        out
    }

    pub fn poly_of(&self, v: &[Int]) -> SparsePoly<Int> {
        assert_eq!(v.len(), self.len());
        let mut p = SparsePoly::zero(self.nvars);
        for (i, c) in v.iter().enumerate() {
            p.add_term(self.monomial(i).clone(), c.clone());
        }
        p
    }
}

/// Matrix of the degree-`basis.degree()` symmetric power of the linear map
/// `g` (columns of `g` are images of the variables).
pub fn substitution_matrix(g: &[Vec<Int>], basis: &MonomialBasis) -> IntMat {
    let n = basis.nvars();
    let images: Vec<Vec<Int>> = (0..n)
        .map(|j| (0..n).map(|i| g[i][j].clone()).collect())
        .collect();
    let mut out = IntMat::zeros(basis.len(), basis.len());
    for c in 0..basis.len() {
        let mono = basis.monomial(c);
        let mut image = SparsePoly::<Int>::one(n);
        for (j, &e) in mono.exps().iter().enumerate() {
            if e > 0 {
                image = image.mul(&SparsePoly::linear_form(&images[j]).pow(e as usize));
            }
        }
        for (m, coeff) in image.terms() {
            *out.at_mut(basis.index_of(m), c) = coeff.clone();
        }
    }
    out
}

/// Basis of the common fixed lattice of the given lattice automorphisms
/// acting on the degree-`degree` symmetric power, in `MonomialBasis`
/// coordinates.
pub fn invariant_kernel_from_gens(
    gens: &[Vec<Vec<Int>>],
    nvars: usize,
    degree: usize,
) -> Vec<Vec<Int>> {
    let basis = MonomialBasis::new(nvars, degree);
    let dim = basis.len();
    let mut stacked: Vec<Vec<Int>> = Vec::with_capacity(gens.len() * dim);
    for g in gens {
        let mut a = substitution_matrix(g, &basis);
        for i in 0..dim {
            *a.at_mut(i, i) -= Int::one();
        }
        stacked.extend(a.to_rows());
    }
    kernel(&IntMat::from_rows(stacked))
}

/// The lattice of Weyl-invariant elements of the degree-`degree` symmetric
/// power of the weight lattice, in `MonomialBasis` coordinates.
pub fn invariant_lattice(rs: &RootSystem<Int>, degree: usize) -> IntLattice {
    let n = rs.rank();
    let gens: Vec<Vec<Vec<Int>>> = (0..n).map(|j| rs.reflection_matrix(j)).collect();
    let dim = MonomialBasis::new(n, degree).len();
    IntLattice::from_generators(dim, invariant_kernel_from_gens(&gens, n, degree))
}

/// The invariant quadratic form normalized to take value 1 on the coroot of
/// the highest root. This is the primitive generator of the rank-one lattice
/// of invariant quadratics, sign-fixed by its leading coefficient.
pub fn normalized_q(rs: &RootSystem<Int>) -> Result<SparsePoly<Int>> {
    let lat = invariant_lattice(rs, 2);
    if lat.rank() != 1 {
        return Err(Error::Normalization(format!(
            "{}: invariant quadratic lattice has rank {}",
            rs.kind(),
            lat.rank()
        )));
    }
    let basis = MonomialBasis::new(rs.rank(), 2);
    let mut q = basis.poly_of(lat.basis().row(0));
    let leading = q
        .terms()
        .next_back()
        .map(|(_, c)| c.clone())
        .unwrap_or_else(Int::zero);
    if leading.is_negative() {
        q = q.neg();
    }
    let cov = rs.theta_covector()?;
    let value = q.eval(cov);
    if !value.is_one() {
        return Err(Error::Normalization(format!(
            "{}: primitive invariant quadratic takes value {} on the long coroot",
            rs.kind(),
            value
        )));
    }
    Ok(q)
}

/// A unimodular matrix built from a short random walk of elementary row
/// operations, for exercising basis independence.
pub fn random_unimodular(n: usize, steps: usize, rng: &mut impl Rng) -> IntMat {
    let mut m = IntMat::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..3u8) {
            0 => m.swap_rows(i, j),
            1 => m.negate_row(i),
            _ => {
                let q = Int::from(rng.gen_range(-2i64..=2));
                m.row_axpy(i, j, &q);
            }
        }
    }
    m
}
