//! Root-system data and Weyl-group orbits in fundamental-weight coordinates.
//!
//! A weight is stored by its coordinates in the basis of fundamental weights,
//! so the simple reflection `s_j` is the integer-exact rank-one update
//! `s_j(x) = x - x_j * a_j`, where `a_j` (column `j` of the Cartan matrix) is
//! the `j`-th simple root written in the same basis. The crystallographic
//! families run over `Int` coordinates; the pentagonal system `H2` runs over
//! `Z[tau]` with the same generic code paths.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyring::SparsePoly;
use crate::scalar::{GoldenInt, Int, Rational, Scalar};

/// Default cap on materialized orbits.
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;
/// Default cap on streamed orbits.
pub const DEFAULT_STREAM_CAP: usize = 100_000_000;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H2,
}

impl Family {
    pub fn admissible_rank(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
            Family::H2 => rank == 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
            Family::H2 => "H2",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            "H2" | "H" => Ok(Family::H2),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// A validated (family, rank) pair.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RootSystemKind {
    family: Family,
    rank: usize,
}

impl RootSystemKind {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        if family.admissible_rank(rank) {
            Ok(RootSystemKind { family, rank })
        } else {
            Err(Error::InadmissibleRank {
                family: family.to_string(),
                rank,
            })
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_crystallographic(&self) -> bool {
        self.family != Family::H2
    }

    /// Number of roots of the system.
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Family::F => 48,
            Family::G => 12,
            Family::H2 => 10,
        }
    }

    /// Order of the acting reflection group.
    pub fn weyl_order(&self) -> Int {
        fn factorial(n: usize) -> Int {
            (1..=n).fold(Int::one(), |acc, k| acc * Int::from(k as u64))
        }
        let n = self.rank;
        match self.family {
            Family::A => factorial(n + 1),
            Family::B | Family::C => factorial(n) << n,
            Family::D => factorial(n) << (n - 1),
            Family::E => match n {
                6 => Int::from(51_840u64),
                7 => Int::from(2_903_040u64),
                _ => Int::from(696_729_600u64),
            },
            Family::F => Int::from(1152u64),
            Family::G => Int::from(12u64),
            Family::H2 => Int::from(10u64),
        }
    }
}

impl fmt::Display for RootSystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family == Family::H2 {
            write!(f, "H2")
        } else {
            write!(f, "{}{}", self.family, self.rank)
        }
    }
}

/// A lattice element in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Weight<S: Scalar> {
    coords: Vec<S>,
}

impl<S: Scalar> Weight<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Weight { coords }
    }

    pub fn zero(n: usize) -> Self {
        Weight {
            coords: vec![S::zero(); n],
        }
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Weight {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Weight {
            coords: self.coords.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        Weight {
            coords: self.coords.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// The weight as a degree-one polynomial.
    pub fn linear_form(&self) -> SparsePoly<S> {
        SparsePoly::linear_form(&self.coords)
    }
}

impl Weight<Int> {
    pub fn from_i64(coords: &[i64]) -> Self {
        Weight::new(coords.iter().map(|&c| Int::from(c)).collect())
    }
}

impl<S: Scalar> fmt::Display for Weight<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Root-system data over the scalar ring `S`.
///
/// `cartan[i][j]` is the pairing of the `i`-th simple coroot with the `j`-th
/// simple root; column `j` is the root `a_j` in weight coordinates. Root and
/// highest-root data are populated for crystallographic kinds only.
pub struct RootSystem<S: Scalar> {
    kind: RootSystemKind,
    cartan: Vec<Vec<S>>,
    symmetrizer: Vec<Rational>,
    roots: Vec<Weight<S>>,
    highest_root: Option<Weight<S>>,
    theta_covector: Option<Vec<Int>>,
}

fn cartan_int(kind: RootSystemKind) -> Vec<Vec<i64>> {
    let n = kind.rank();
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let link = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match kind.family() {
        Family::A => {
            for i in 0..n.saturating_sub(1) {
                link(&mut c, i, i + 1);
            }
        }
        Family::B => {
            for i in 0..n - 1 {
                link(&mut c, i, i + 1);
            }
            c[n - 1][n - 2] = -2; // short simple root at the end of the chain
        }
        Family::C => {
            for i in 0..n - 1 {
                link(&mut c, i, i + 1);
            }
            c[n - 2][n - 1] = -2; // long simple root at the end of the chain
        }
        Family::D => {
            for i in 0..n - 2 {
                link(&mut c, i, i + 1);
            }
            link(&mut c, n - 3, n - 1);
        }
        Family::E => {
            link(&mut c, 0, 2);
            link(&mut c, 1, 3);
            for i in 2..n - 1 {
                link(&mut c, i, i + 1);
            }
        }
        Family::F => {
            link(&mut c, 0, 1);
            link(&mut c, 2, 3);
            c[1][2] = -1;
            c[2][1] = -2;
        }
        Family::G => {
            c[0][1] = -3;
            c[1][0] = -1;
        }
        Family::H2 => unreachable!("H2 has no integer Cartan matrix"),
    }
    c
}

/// Positive row scalars `d_i`, normalized so long roots get 1, that make
/// `d_i * cartan[i][j]` symmetric.
fn symmetrizer<S: Scalar>(cartan: &[Vec<S>]) -> Result<Vec<Rational>> {
    let n = cartan.len();
    let mut d: Vec<Option<Rational>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Rational::one());
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let di = d[i].clone().unwrap();
            for j in 0..n {
                if i == j || cartan[i][j].is_zero() {
                    continue;
                }
                // d_i c_ij = d_j c_ji, with the ratio read off the integer
                // images of the entries (exact for all families here).
                let cij = scalar_to_rational(&cartan[i][j])?;
                let cji = scalar_to_rational(&cartan[j][i])?;
                let dj = di.clone() * cij / cji;
                match &d[j] {
                    Some(existing) => {
                        if *existing != dj {
                            return Err(Error::Internal(
                                "Cartan matrix is not symmetrizable".into(),
                            ));
                        }
                    }
                    None => {
                        d[j] = Some(dj);
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    let mut d: Vec<Rational> = d.into_iter().map(Option::unwrap).collect();
    let max = d.iter().cloned().max().unwrap();
    for v in &mut d {
        *v /= max.clone();
    }
    Ok(d)
}

/// Rational image of a scalar, defined for the integer-like entries the
/// symmetrizer needs (`Z[tau]` Cartan entries off the diagonal are `-tau`,
/// whose symmetrizer ratio is 1, handled by the norm fallback below).
fn scalar_to_rational<S: Scalar>(x: &S) -> Result<Rational> {
    // All crystallographic Cartan entries are among -3..=2; probe them.
    for k in -3i64..=3 {
        if *x == S::from_i64(k) {
            return Ok(Rational::from_integer(Int::from(k)));
        }
    }
    Err(Error::Internal(format!(
        "Cartan entry {x} has no small integer image"
    )))
}

impl<S: Scalar> RootSystem<S> {
    pub fn kind(&self) -> RootSystemKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.kind.rank()
    }

    pub fn cartan(&self) -> &[Vec<S>] {
        &self.cartan
    }

    pub fn symmetrizer(&self) -> &[Rational] {
        &self.symmetrizer
    }

    /// Simple root `a_j` in weight coordinates (column `j` of the Cartan
    /// matrix).
    pub fn simple_root(&self, j: usize) -> Weight<S> {
        Weight::new((0..self.rank()).map(|i| self.cartan[i][j].clone()).collect())
    }

    pub fn fundamental_weight(&self, j: usize) -> Weight<S> {
        let mut coords = vec![S::zero(); self.rank()];
        coords[j] = S::one();
        Weight::new(coords)
    }

    /// `s_j(x) = x - x_j * a_j`, an involution preserving the lattice.
    pub fn reflect(&self, j: usize, x: &Weight<S>) -> Weight<S> {
        let xj = x.coords()[j].clone();
        let coords = x
            .coords()
            .iter()
            .enumerate()
            .map(|(i, xi)| xi.clone() - self.cartan[i][j].clone() * xj.clone())
            .collect();
        Weight::new(coords)
    }

    /// Matrix of `s_j` acting on weight coordinates (column `k` is the image
    /// of the `k`-th basis vector).
    pub fn reflection_matrix(&self, j: usize) -> Vec<Vec<S>> {
        let n = self.rank();
        let mut m = vec![vec![S::zero(); n]; n];
        for i in 0..n {
            m[i][i] = S::one();
        }
        for (i, row) in m.iter_mut().enumerate() {
            row[j] = row[j].clone() - self.cartan[i][j].clone();
        }
        m
    }

    /// Copy of this system with the sign of one off-diagonal Cartan entry
    /// flipped. The product of the two reflections at that edge then has
    /// infinite order, so orbits through that edge never close. This is the
    /// negative-control fixture for the verify harness; every derived field
    /// other than the Cartan matrix is left as built and must not be trusted.
    pub fn with_cartan_sign_flip(&self, i: usize, j: usize) -> Result<Self> {
        if i == j || i >= self.rank() || j >= self.rank() {
            return Err(Error::Internal(format!(
                "no off-diagonal Cartan entry at ({i}, {j})"
            )));
        }
        if self.cartan[i][j].is_zero() {
            return Err(Error::Internal(format!(
                "Cartan entry ({i}, {j}) is zero, flipping it changes nothing"
            )));
        }
        let mut cartan = self.cartan.clone();
        cartan[i][j] = -cartan[i][j].clone();
        Ok(RootSystem {
            kind: self.kind,
            cartan,
            symmetrizer: self.symmetrizer.clone(),
            roots: self.roots.clone(),
            highest_root: self.highest_root.clone(),
            theta_covector: self.theta_covector.clone(),
        })
    }

    /// The full orbit of `chi`, sorted lexicographically by coordinates.
    pub fn orbit(&self, chi: &Weight<S>, cap: usize) -> Result<Vec<Weight<S>>> {
        let mut out = Vec::new();
        self.orbit_stream(chi, cap, |coords| {
            out.push(Weight::new(coords.to_vec()));
        })?;
        out.sort();
        Ok(out)
    }

    /// Breadth-first closure of `chi` under the simple reflections, invoking
    /// `visit` exactly once per orbit element. Uses exact coordinates as
    /// dedup keys. Returns the orbit size.
    pub fn orbit_stream(
        &self,
        chi: &Weight<S>,
        cap: usize,
        mut visit: impl FnMut(&[S]),
    ) -> Result<usize> {
        let mut seen: BTreeSet<Vec<S>> = BTreeSet::new();
        let mut queue: VecDeque<Weight<S>> = VecDeque::new();
        seen.insert(chi.coords().to_vec());
        queue.push_back(chi.clone());
        visit(chi.coords());
        while let Some(x) = queue.pop_front() {
            for j in 0..self.rank() {
                if x.coords()[j].is_zero() {
                    continue; // s_j fixes x
                }
                let y = self.reflect(j, &x);
                if seen.contains(y.coords()) {
                    continue;
                }
                if seen.len() >= cap {
                    return Err(Error::OrbitCapExceeded { cap });
                }
                seen.insert(y.coords().to_vec());
                visit(y.coords());
                queue.push_back(y);
            }
        }
        Ok(seen.len())
    }

    pub fn roots(&self) -> &[Weight<S>] {
        &self.roots
    }

    pub fn highest_root(&self) -> Option<&Weight<S>> {
        self.highest_root.as_ref()
    }

    /// Coordinates of the coroot of the highest (long) root in the simple
    /// coroot basis; pairing any weight against it is the dot product with
    /// these nonnegative integers.
    pub fn theta_covector(&self) -> Result<&[Int]> {
        self.theta_covector.as_deref().ok_or(Error::NotCrystallographic {
            op: "theta_covector",
            kind: self.kind,
        })
    }
}

impl RootSystem<Int> {
    /// Builds a crystallographic root system with Bourbaki numbering.
    pub fn build(kind: RootSystemKind) -> Result<Self> {
        if !kind.is_crystallographic() {
            return Err(Error::NotCrystallographic {
                op: "build",
                kind,
            });
        }
        let n = kind.rank();
        let cartan: Vec<Vec<Int>> = cartan_int(kind)
            .into_iter()
            .map(|row| row.into_iter().map(Int::from).collect())
            .collect();
        let symmetrizer = symmetrizer(&cartan)?;

        // Every root is conjugate to a simple root; close the simple roots
        // under reflections, carrying simple-root coordinates alongside so
        // root lengths come out exactly.
        let mut seen: BTreeMap<Vec<Int>, Vec<Int>> = BTreeMap::new();
        let mut queue: VecDeque<(Vec<Int>, Vec<Int>)> = VecDeque::new();
        for j in 0..n {
            let w: Vec<Int> = (0..n).map(|i| cartan[i][j].clone()).collect();
            let mut u = vec![Int::zero(); n];
            u[j] = Int::one();
            if seen.insert(w.clone(), u.clone()).is_none() {
                queue.push_back((w, u));
            }
        }
        while let Some((w, u)) = queue.pop_front() {
            for j in 0..n {
                if w[j].is_zero() {
                    continue;
                }
                let w2: Vec<Int> = (0..n)
                    .map(|i| &w[i] - &cartan[i][j] * &w[j])
                    .collect();
                if seen.contains_key(&w2) {
                    continue;
                }
                let mut u2 = u.clone();
                u2[j] = &u2[j] - &w[j];
                seen.insert(w2.clone(), u2.clone());
                queue.push_back((w2, u2));
            }
        }
        if seen.len() != kind.root_count() {
            return Err(Error::Internal(format!(
                "{kind}: generated {} roots, expected {}",
                seen.len(),
                kind.root_count()
            )));
        }

        // Squared length of a root: sum_i u_i d_i w_i with u the simple-root
        // coordinates and w the weight coordinates; 2 exactly on long roots.
        let length_sq = |w: &[Int], u: &[Int]| -> Rational {
            let mut acc = Rational::zero();
            for i in 0..n {
                acc += Rational::from_integer(u[i].clone())
                    * symmetrizer[i].clone()
                    * Rational::from_integer(w[i].clone());
            }
            acc
        };
        let two = Rational::from_integer(Int::from(2));
        let mut theta: Option<(Vec<Int>, Vec<Int>)> = None;
        for (w, u) in &seen {
            if w.iter().all(|c| !c.is_negative()) && length_sq(w, u) == two {
                if theta.is_some() {
                    return Err(Error::Internal(format!(
                        "{kind}: multiple dominant long roots"
                    )));
                }
                theta = Some((w.clone(), u.clone()));
            }
        }
        let (theta_w, theta_u) =
            theta.ok_or_else(|| Error::Internal(format!("{kind}: no dominant long root")))?;
        let covector: Vec<Int> = (0..n)
            .map(|i| {
                let v = Rational::from_integer(theta_u[i].clone()) * symmetrizer[i].clone();
                if v.is_integer() && !v.is_negative() {
                    Ok(v.to_integer())
                } else {
                    Err(Error::Internal(format!(
                        "{kind}: non-integral coroot coordinate {v}"
                    )))
                }
            })
            .collect::<Result<_>>()?;

        let roots: Vec<Weight<Int>> = seen.into_keys().map(Weight::new).collect();
        Ok(RootSystem {
            kind,
            cartan,
            symmetrizer,
            roots,
            highest_root: Some(Weight::new(theta_w)),
            theta_covector: Some(covector),
        })
    }

    /// Pairing of a weight with the coroot of the highest root.
    pub fn pairing_with_long_coroot(&self, x: &Weight<Int>) -> Result<Int> {
        let cov = self.theta_covector()?;
        Ok(cov
            .iter()
            .zip(x.coords())
            .map(|(c, a)| c * a)
            .sum())
    }
}

/// The pentagonal rank-2 system over `Z[tau]`: Cartan matrix
/// `[[2, -tau], [-tau, 2]]`, dihedral group of order 10.
pub fn build_h2() -> RootSystem<GoldenInt> {
    let t = GoldenInt::tau();
    let two = GoldenInt::from_i64(2);
    let cartan = vec![
        vec![two.clone(), -t.clone()],
        vec![-t, two],
    ];
    RootSystem {
        kind: RootSystemKind::new(Family::H2, 2).unwrap(),
        cartan,
        symmetrizer: vec![Rational::one(), Rational::one()],
        roots: Vec::new(),
        highest_root: None,
        theta_covector: None,
    }
}

/// Coordinates of the classical families in the standard orthogonal basis
/// `e_1 .. e_m`; for family `A` rank `n` the chart uses `m = n + 1`
/// coordinates subject to `e_1 + ... + e_(n+1) = 0` and fixed integral
/// representatives.
pub struct OrthChart {
    family: Family,
    rank: usize,
    /// Each `e_k` as an integer linear form in weight coordinates.
    e_in_omega: Vec<Vec<Int>>,
    /// Each fundamental weight in `e`-coordinates.
    omega_in_e: Vec<Vec<Rational>>,
}

impl OrthChart {
    pub fn new(kind: RootSystemKind) -> Result<Self> {
        let n = kind.rank();
        let family = kind.family();
        let half = Rational::new(Int::one(), Int::from(2));
        let ones = |upto: usize, m: usize| -> Vec<Rational> {
            (0..m)
                .map(|k| {
                    if k < upto {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        };
        let diff_row = |n: usize, k: usize| -> Vec<Int> {
            // e_k = w_k - w_(k-1)
            let mut row = vec![Int::zero(); n];
            row[k] = Int::one();
            if k > 0 {
                row[k - 1] = -Int::one();
            }
            row
        };
        let (e_in_omega, omega_in_e) = match family {
            Family::A => {
                let m = n + 1;
                let mut e: Vec<Vec<Int>> = (0..n).map(|k| diff_row(n, k)).collect();
                let mut last = vec![Int::zero(); n];
                last[n - 1] = -Int::one();
                e.push(last);
                let omega = (0..n).map(|j| ones(j + 1, m)).collect();
                (e, omega)
            }
            Family::B => {
                let mut e: Vec<Vec<Int>> = (0..n - 1).map(|k| diff_row(n, k)).collect();
                let mut last = vec![Int::zero(); n];
                last[n - 1] = Int::from(2);
                if n >= 2 {
                    last[n - 2] = -Int::one();
                }
                e.push(last);
                let mut omega: Vec<Vec<Rational>> = (0..n - 1).map(|j| ones(j + 1, n)).collect();
                omega.push(vec![half.clone(); n]);
                (e, omega)
            }
            Family::C => {
                let e = (0..n).map(|k| diff_row(n, k)).collect();
                let omega = (0..n).map(|j| ones(j + 1, n)).collect();
                (e, omega)
            }
            Family::D => {
                let mut e: Vec<Vec<Int>> = (0..n - 2).map(|k| diff_row(n, k)).collect();
                let mut en1 = vec![Int::zero(); n];
                en1[n - 2] = Int::one();
                en1[n - 1] = Int::one();
                en1[n - 3] = -Int::one();
                e.push(en1);
                let mut en = vec![Int::zero(); n];
                en[n - 1] = Int::one();
                en[n - 2] = -Int::one();
                e.push(en);
                let mut omega: Vec<Vec<Rational>> = (0..n - 2).map(|j| ones(j + 1, n)).collect();
                let mut spin_minus = vec![half.clone(); n];
                spin_minus[n - 1] = -half.clone();
                omega.push(spin_minus);
                omega.push(vec![half; n]);
                (e, omega)
            }
            _ => {
                return Err(Error::Parse(format!(
                    "no orthogonal chart for family {family}"
                )))
            }
        };
        Ok(OrthChart {
            family,
            rank: n,
            e_in_omega,
            omega_in_e,
        })
    }

    pub fn orth_dim(&self) -> usize {
        self.e_in_omega.len()
    }

    /// `e_k` as an integer weight.
    pub fn e_weight(&self, k: usize) -> Weight<Int> {
        Weight::new(self.e_in_omega[k].clone())
    }

    /// Weight coordinates -> orthogonal coordinates.
    pub fn to_orth(&self, x: &Weight<Int>) -> Vec<Rational> {
        let m = self.orth_dim();
        let mut out = vec![Rational::zero(); m];
        for (j, a) in x.coords().iter().enumerate() {
            for k in 0..m {
                out[k] += Rational::from_integer(a.clone()) * self.omega_in_e[j][k].clone();
            }
        }
        out
    }

    /// Orthogonal coordinates -> weight coordinates, by pairing with the
    /// simple coroots (well defined on the quotient convention for `A`).
    pub fn from_orth(&self, v: &[Rational]) -> Vec<Rational> {
        let n = self.rank;
        assert_eq!(v.len(), self.orth_dim());
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let c = match self.family {
                Family::A => v[j].clone() - v[j + 1].clone(),
                Family::B => {
                    if j + 1 < n {
                        v[j].clone() - v[j + 1].clone()
                    } else {
                        Rational::from_integer(Int::from(2)) * v[n - 1].clone()
                    }
                }
                Family::C => {
                    if j + 1 < n {
                        v[j].clone() - v[j + 1].clone()
                    } else {
                        v[n - 1].clone()
                    }
                }
                Family::D => {
                    if j + 2 < n {
                        v[j].clone() - v[j + 1].clone()
                    } else if j + 2 == n {
                        v[n - 2].clone() - v[n - 1].clone()
                    } else {
                        v[n - 2].clone() + v[n - 1].clone()
                    }
                }
                _ => unreachable!(),
            };
            out.push(c);
        }
        out
    }

    /// The weight with the given integer orthogonal coordinates, if it lies
    /// in the weight lattice (it always does for integer input here).
    pub fn weight_from_orth(&self, v: &[i64]) -> Result<Weight<Int>> {
        let vr: Vec<Rational> = v
            .iter()
            .map(|&c| Rational::from_integer(Int::from(c)))
            .collect();
        let coords = self.from_orth(&vr);
        let mut out = Vec::with_capacity(coords.len());
        for c in coords {
            if !c.is_integer() {
                return Err(Error::Internal(format!(
                    "orthogonal point is not a weight: coordinate {c}"
                )));
            }
            out.push(c.to_integer());
        }
        Ok(Weight::new(out))
    }

    /// The power sum `sum_k e_k^i` as a polynomial in weight coordinates.
    pub fn power_sum(&self, i: usize) -> SparsePoly<Int> {
        let n = self.rank;
        let mut acc = SparsePoly::zero(n);
        for k in 0..self.orth_dim() {
            acc = acc.add(&SparsePoly::linear_form(&self.e_in_omega[k]).pow(i));
        }
        acc
    }
}
