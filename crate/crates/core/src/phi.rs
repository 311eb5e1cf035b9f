//! The truncated characteristic map from the group ring of the weight
//! lattice to its symmetric algebra.
//!
//! On a basis element the map is `e^x -> prod_j (1 - w_j)^(-x_j)`, expanded
//! as a power series and truncated above a degree cap; it is a ring
//! isomorphism modulo the cap-th powers of the augmentation ideals on both
//! sides, with inverse determined by `w_j -> 1 - e^(-w_j)`.
//!
//! The degree-`i` component on `e^x` is a universal integer polynomial in the
//! power sums `y_m = sum_j x_j w_j^m`: writing `g(z) = sum_k y_(k+1) z^k`,
//! the recursion `g_0 = 1`, `g_i = g * g_(i-1) + g_(i-1)'` gives
//! `i! * (degree-i component) = g_i(0)`. Orbit sums are streamed through that
//! formula pattern by pattern, which keeps the whole computation in the base
//! ring and never materializes a full series.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polyring::{geometric_power, Monomial, SparsePoly, TruncatedPoly};
use crate::rootsys::{RootSystem, RootSystemKind, Weight};
use crate::scalar::{Int, Scalar};

/// A finite formal sum of lattice exponentials with coefficients in `S`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupRingElement<S: Scalar> {
    n: usize,
    terms: BTreeMap<Weight<S>, S>,
}

impl<S: Scalar> GroupRingElement<S> {
    pub fn zero(n: usize) -> Self {
        GroupRingElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        GroupRingElement::exp(Weight::zero(n))
    }

    /// The basis element `e^x`.
    pub fn exp(x: Weight<S>) -> Self {
        let n = x.rank();
        let mut terms = BTreeMap::new();
        terms.insert(x, S::one());
        GroupRingElement { n, terms }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight<S>, &S)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, x: Weight<S>, c: S) {
        assert_eq!(x.rank(), self.n);
        let cur = self.terms.remove(&x).unwrap_or_else(S::zero) + c;
        if !cur.is_zero() {
            self.terms.insert(x, cur);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (x, c) in &rhs.terms {
            out.add_term(x.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        GroupRingElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(x, c)| (x.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = GroupRingElement::zero(self.n);
        for (x, a) in &self.terms {
            out.add_term(x.clone(), a.clone() * c.clone());
        }
        out
    }

    /// Convolution: `e^x * e^y = e^(x+y)`.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let mut out = GroupRingElement::zero(self.n);
        for (x, a) in &self.terms {
            for (y, b) in &rhs.terms {
                out.add_term(x.add(y), a.clone() * b.clone());
            }
        }
        out
    }

    /// Sum of coefficients; the kernel of this map is the augmentation ideal.
    pub fn augmentation(&self) -> S {
        self.terms
            .values()
            .fold(S::zero(), |acc, c| acc + c.clone())
    }

    /// Orbit sum `sum_(x in W chi) e^x`.
    pub fn orbit_sum(rs: &RootSystem<S>, chi: &Weight<S>, cap: usize) -> Result<Self> {
        let mut out = GroupRingElement::zero(rs.rank());
        rs.orbit_stream(chi, cap, |coords| {
            out.add_term(Weight::new(coords.to_vec()), S::one());
        })?;
        Ok(out)
    }

    /// Augmentation-zero orbit sum `sum_(x in W chi) (e^x - 1)`.
    pub fn reduced_orbit_sum(rs: &RootSystem<S>, chi: &Weight<S>, cap: usize) -> Result<Self> {
        let rho = Self::orbit_sum(rs, chi, cap)?;
        let size = rho.augmentation();
        Ok(rho.sub(&Self::one(rs.rank()).scale(&size)))
    }
}

/// Image of `e^x`, truncated above degree `cap`.
pub fn phi_exp(x: &Weight<Int>, cap: usize) -> TruncatedPoly<Int> {
    let n = x.rank();
    let mut out = TruncatedPoly::one(n, cap);
    for (j, a) in x.coords().iter().enumerate() {
        if !a.is_zero() {
            out = out.mul(&geometric_power(n, j, a, cap));
        }
    }
    out
}

/// Image of a group-ring element, truncated above degree `cap`.
pub fn phi(x: &GroupRingElement<Int>, cap: usize) -> TruncatedPoly<Int> {
    let mut acc = SparsePoly::zero(x.n_vars());
    for (w, c) in x.terms() {
        acc = acc.add(&phi_exp(w, cap).into_poly().mul_scalar(c));
    }
    TruncatedPoly::new(acc, cap)
}

/// Degree-`i` component of the image of a group-ring element.
pub fn phi_component(x: &GroupRingElement<Int>, i: usize) -> SparsePoly<Int> {
    phi(x, i).homogeneous_component(i)
}

/// Preimage of the generator `w_j`: the group-ring element `1 - e^(-w_j)`.
pub fn phi_inverse_gen(n: usize, j: usize) -> GroupRingElement<Int> {
    let mut minus = vec![Int::zero(); n];
    minus[j] = -Int::one();
    GroupRingElement::one(n).sub(&GroupRingElement::exp(Weight::new(minus)))
}

fn formula_cache() -> &'static Mutex<BTreeMap<usize, SparsePoly<Int>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, SparsePoly<Int>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// `i!` times the degree-`i` component of the image of `e^x`, as an integer
/// polynomial whose `m`-th variable stands for the power sum
/// `sum_j x_j w_j^m`.
pub fn universal_component_formula(i: usize) -> SparsePoly<Int> {
    if let Some(f) = formula_cache().lock().unwrap().get(&i) {
        return f.clone();
    }
    let f = compute_formula(i);
    formula_cache().lock().unwrap().insert(i, f.clone());
    f
}

fn compute_formula(i: usize) -> SparsePoly<Int> {
    let nv = i.max(1);
    if i == 0 {
        return SparsePoly::one(nv);
    }
    // Series in z truncated at z^i, coefficients polynomial in the power-sum
    // slots. g[k] is the coefficient of z^k.
    let g: Vec<SparsePoly<Int>> = (0..=i)
        .map(|k| {
            if k < i {
                SparsePoly::var(nv, k)
            } else {
                SparsePoly::zero(nv)
            }
        })
        .collect();
    let series_mul = |a: &[SparsePoly<Int>], b: &[SparsePoly<Int>]| -> Vec<SparsePoly<Int>> {
        let mut out = vec![SparsePoly::zero(nv); i + 1];
        for (ka, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (kb, cb) in b.iter().enumerate() {
                if ka + kb > i || cb.is_zero() {
                    continue;
                }
                out[ka + kb] = out[ka + kb].add(&ca.mul(cb));
            }
        }
        out
    };
    let series_deriv = |a: &[SparsePoly<Int>]| -> Vec<SparsePoly<Int>> {
        let mut out = vec![SparsePoly::zero(nv); i + 1];
        for k in 1..a.len() {
            out[k - 1] = a[k].mul_scalar(&Int::from(k as u64));
        }
        out
    };
    let mut gi = vec![SparsePoly::zero(nv); i + 1];
    gi[0] = SparsePoly::one(nv);
    for _ in 0..i {
        let prod = series_mul(&g, &gi);
        let deriv = series_deriv(&gi);
        gi = prod
            .into_iter()
            .zip(deriv)
            .map(|(p, d)| p.add(&d))
            .collect();
    }
    gi.into_iter().next().unwrap()
}

/// The formula monomials as (exponent pattern over the power-sum slots,
/// integer coefficient) pairs.
fn formula_patterns(i: usize) -> Vec<(Vec<u32>, Int)> {
    universal_component_formula(i)
        .terms()
        .map(|(m, c)| (m.exps().to_vec(), c.clone()))
        .collect()
}

/// The power sum `sum_j x_j w_j^m` of a weight, as a polynomial.
pub fn weight_power_sum<S: Scalar>(coords: &[S], m: usize) -> SparsePoly<S> {
    let n = coords.len();
    let mut p = SparsePoly::zero(n);
    for (j, a) in coords.iter().enumerate() {
        let mut exps = vec![0u32; n];
        exps[j] = m as u32;
        p.add_term(Monomial::new(exps), a.clone());
    }
    p
}

/// `i!` times the degree-`i` component of the image of `e^x`, in weight
/// coordinates over any scalar ring.
pub fn formula_value_at<S: Scalar>(i: usize, coords: &[S]) -> SparsePoly<S> {
    let n = coords.len();
    let mut acc = SparsePoly::zero(n);
    let powers: Vec<SparsePoly<S>> = (1..=i).map(|m| weight_power_sum(coords, m)).collect();
    for (pat, coeff) in formula_patterns(i) {
        let mut term = SparsePoly::constant(n, S::from_int(&coeff));
        for (idx, &e) in pat.iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&powers[idx]);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

fn factorial_scalar<S: Scalar>(i: usize) -> S {
    S::from_i64((1..=i as i64).product::<i64>().max(1))
}

/// Degree-`i` component of the image of `e^x`, exact over any scalar ring.
pub fn phi_component_of_exp<S: Scalar>(coords: &[S], i: usize) -> Result<SparsePoly<S>> {
    formula_value_at(i, coords)
        .div_exact_scalar(&factorial_scalar::<S>(i))
        .ok_or_else(|| Error::InexactDivision {
            divisor: format!("{}!", i),
            context: "component of a single exponential".into(),
        })
}

/// Streamed degree-`i` orbit-sum accumulator. Feed it the orbit weights one
/// at a time; `finalize` returns the degree-`i` component of the image of the
/// orbit sum.
pub struct PowerSumAccumulator<S: Scalar> {
    nvars: usize,
    degree: usize,
    patterns: Vec<(Vec<u32>, Int)>,
    // One running sum per formula pattern: sum over visited weights of the
    // products of their power sums with the pattern's exponents.
    sums: Vec<SparsePoly<S>>,
    count: usize,
}

impl<S: Scalar> PowerSumAccumulator<S> {
    pub fn new(nvars: usize, degree: usize) -> Self {
        Self::with_patterns(nvars, degree, formula_patterns(degree))
    }

    fn with_patterns(nvars: usize, degree: usize, patterns: Vec<(Vec<u32>, Int)>) -> Self {
        let sums = vec![SparsePoly::zero(nvars); patterns.len()];
        PowerSumAccumulator {
            nvars,
            degree,
            patterns,
            sums,
            count: 0,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn add_weight(&mut self, coords: &[S]) {
        assert_eq!(coords.len(), self.nvars);
        // Power table: powers[m][e] = ((m+1)-th power sum)^e, built to the
        // largest exponent any pattern uses.
        let slots = self.patterns.first().map_or(0, |(p, _)| p.len());
        let mut max_exp = vec![0u32; slots];
        for (pat, _) in &self.patterns {
            for (m, &e) in pat.iter().enumerate() {
                max_exp[m] = max_exp[m].max(e);
            }
        }
        let powers: Vec<Vec<SparsePoly<S>>> = (0..slots)
            .map(|m| {
                let mut col = vec![SparsePoly::one(self.nvars)];
                if max_exp[m] > 0 {
                    let base = weight_power_sum(coords, m + 1);
                    for e in 1..=max_exp[m] {
                        let next = col[(e - 1) as usize].mul(&base);
                        col.push(next);
                    }
                }
                col
            })
            .collect();
        for ((pat, _), sum) in self.patterns.iter().zip(self.sums.iter_mut()) {
            let mut term = SparsePoly::one(self.nvars);
            for (m, &e) in pat.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[m][e as usize]);
                }
            }
            *sum = sum.add(&term);
        }
        self.count += 1;
    }

    pub fn merge(&mut self, other: Self) {
        assert_eq!(self.patterns, other.patterns);
        for (a, b) in self.sums.iter_mut().zip(other.sums) {
            *a = a.add(&b);
        }
        self.count += other.count;
    }

    pub fn finalize(self) -> Result<SparsePoly<S>> {
        let mut acc = SparsePoly::zero(self.nvars);
        for ((_, coeff), sum) in self.patterns.iter().zip(&self.sums) {
            acc = acc.add(&sum.mul_scalar(&S::from_int(coeff)));
        }
        acc.div_exact_scalar(&factorial_scalar::<S>(self.degree))
            .ok_or_else(|| Error::InexactDivision {
                divisor: format!("{}!", self.degree),
                context: "streamed orbit sum".into(),
            })
    }
}

/// Degree-`i` component of the image of the orbit sum of `chi`, streamed.
pub fn phi_rho<S: Scalar>(
    rs: &RootSystem<S>,
    chi: &Weight<S>,
    i: usize,
    cap: usize,
) -> Result<SparsePoly<S>> {
    let mut acc = PowerSumAccumulator::new(rs.rank(), i);
    rs.orbit_stream(chi, cap, |coords| acc.add_weight(coords))?;
    acc.finalize()
}

/// Closed forms for the orbit-sum components in degrees 2 to 4, valid
/// because pure power sums vanish when summed over an orbit of an essential
/// action: degree 2 is `(1/2) sum x^2`, degree 3 is
/// `(1/6) sum (x^3 + 3 x(2) x)`, degree 4 is
/// `(1/24) sum (x^4 + 6 x(2) x^2 + 8 x(3) x + 3 x(2)^2)`, with `x(m)` the
/// `m`-th power sum of the orbit element `x`.
pub fn phi_rho_closed_form<S: Scalar>(
    rs: &RootSystem<S>,
    chi: &Weight<S>,
    i: usize,
    cap: usize,
) -> Result<SparsePoly<S>> {
    let patterns: Vec<(Vec<u32>, Int)> = match i {
        2 => vec![(vec![2, 0], Int::one())],
        3 => vec![(vec![3, 0, 0], Int::one()), (vec![1, 1, 0], Int::from(3))],
        4 => vec![
            (vec![4, 0, 0, 0], Int::one()),
            (vec![2, 1, 0, 0], Int::from(6)),
            (vec![1, 0, 1, 0], Int::from(8)),
            (vec![0, 2, 0, 0], Int::from(3)),
        ],
        _ => {
            return Err(Error::UnsupportedDegree {
                op: "closed-form orbit sum",
                degree: i,
                supported: "2..=4",
            })
        }
    };
    let mut acc = PowerSumAccumulator::with_patterns(rs.rank(), i, patterns);
    rs.orbit_stream(chi, cap, |coords| acc.add_weight(coords))?;
    acc.finalize()
}

/// Disk cache of computed orbit-sum components, keyed by kind, weight,
/// degree, and crate version. Entries are the canonical text form of the
/// polynomial, so cached and fresh results are byte-identical.
pub struct PhiCache {
    dir: PathBuf,
}

impl PhiCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        PhiCache { dir: dir.into() }
    }

    fn file_for(&self, kind: RootSystemKind, chi: &Weight<Int>, i: usize) -> PathBuf {
        let coords: Vec<String> = chi.coords().iter().map(Int::to_string).collect();
        self.dir.join(format!(
            "{kind}.w{}.d{i}.v{}.poly",
            coords.join("_"),
            env!("CARGO_PKG_VERSION")
        ))
    }

    pub fn fetch(
        &self,
        kind: RootSystemKind,
        chi: &Weight<Int>,
        i: usize,
    ) -> Option<SparsePoly<Int>> {
        let text = fs::read_to_string(self.file_for(kind, chi, i)).ok()?;
        SparsePoly::parse(text.trim(), kind.rank()).ok()
    }

    pub fn store(
        &self,
        kind: RootSystemKind,
        chi: &Weight<Int>,
        i: usize,
        poly: &SparsePoly<Int>,
    ) -> Result<()> {
        let io_err = |path: PathBuf| {
            move |source| Error::CacheIo {
                path: path.display().to_string(),
                source,
            }
        };
        fs::create_dir_all(&self.dir).map_err(io_err(self.dir.clone()))?;
        let path = self.file_for(kind, chi, i);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, format!("{poly}\n")).map_err(io_err(tmp.clone()))?;
        fs::rename(&tmp, &path).map_err(io_err(path))?;
        Ok(())
    }
}

/// `phi_rho` with an optional read-through disk cache.
pub fn phi_rho_cached(
    rs: &RootSystem<Int>,
    chi: &Weight<Int>,
    i: usize,
    cap: usize,
    cache: Option<&PhiCache>,
) -> Result<SparsePoly<Int>> {
    if let Some(c) = cache {
        if let Some(hit) = c.fetch(rs.kind(), chi, i) {
            return Ok(hit);
        }
    }
    let value = phi_rho(rs, chi, i, cap)?;
    if let Some(c) = cache {
        c.store(rs.kind(), chi, i, &value)?;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::normalized_q;
    use crate::rootsys::{build_h2, Family};
    use crate::scalar::GoldenInt;

    fn rs(f: Family, n: usize) -> RootSystem<Int> {
        RootSystem::build(RootSystemKind::new(f, n).unwrap()).unwrap()
    }

    #[test]
    fn universal_formula_table() {
        let pins = [
            (1, "w1"),
            (2, "w1^2 + w2"),
            (3, "w1^3 + 3*w1*w2 + 2*w3"),
            (4, "w1^4 + 6*w1^2*w2 + 3*w2^2 + 8*w1*w3 + 6*w4"),
        ];
        for (i, text) in pins {
            let expect = SparsePoly::parse(text, i).unwrap();
            assert_eq!(universal_component_formula(i), expect, "degree {i}");
        }
        assert_eq!(universal_component_formula(0), SparsePoly::one(1));
    }

    #[test]
    fn closed_forms_drop_exactly_the_top_power_sum() {
        // The only formula monomial a closed form omits is the pure top
        // power sum, whose coefficient is (i-1)!.
        for i in 2..=4usize {
            let full = universal_component_formula(i);
            let mut top = SparsePoly::var(i, i - 1);
            top = top.mul_scalar(&Int::from((1..i as u64).product::<u64>().max(1)));
            let closed: Vec<(Vec<u32>, Int)> = full
                .sub(&top)
                .terms()
                .map(|(m, c)| (m.exps().to_vec(), c.clone()))
                .collect();
            let from_code = match i {
                2 => vec![(vec![2, 0], Int::one())],
                3 => vec![(vec![3, 0, 0], Int::one()), (vec![1, 1, 0], Int::from(3))],
                _ => vec![
                    (vec![4, 0, 0, 0], Int::one()),
                    (vec![2, 1, 0, 0], Int::from(6)),
                    (vec![1, 0, 1, 0], Int::from(8)),
                    (vec![0, 2, 0, 0], Int::from(3)),
                ],
            };
            let mut sorted = from_code;
            sorted.sort();
            let mut expect = closed;
            expect.sort();
            assert_eq!(sorted, expect, "degree {i}");
        }
    }

    #[test]
    fn exp_image_small_rank_one() {
        // (1 - w)^(-3) = 1 + 3w + 6w^2 + 10w^3 + 15w^4 + ...
        let x = Weight::from_i64(&[3]);
        let p = phi_exp(&x, 4).into_poly();
        assert_eq!(p, SparsePoly::parse("15*w1^4 + 10*w1^3 + 6*w1^2 + 3*w1 + 1", 1).unwrap());
        for i in 0..=4 {
            let via_formula = phi_component_of_exp(x.coords(), i).unwrap();
            assert_eq!(via_formula, p.homogeneous_component(i), "degree {i}");
        }
    }

    #[test]
    fn formula_matches_geometric_expansion() {
        let weights = [
            vec![1, 0],
            vec![0, 1],
            vec![-1, 1],
            vec![2, -1],
            vec![-2, -3],
            vec![3, 2],
        ];
        for w in &weights {
            let x = Weight::from_i64(w);
            let series = phi_exp(&x, 4).into_poly();
            for i in 0..=4 {
                assert_eq!(
                    phi_component_of_exp(x.coords(), i).unwrap(),
                    series.homogeneous_component(i),
                    "weight {x} degree {i}"
                );
            }
        }
    }

    #[test]
    fn image_is_multiplicative() {
        // e^x e^y = e^(x+y) must map to the product of the truncated images.
        let x = GroupRingElement::exp(Weight::from_i64(&[1, 0]));
        let y = GroupRingElement::exp(Weight::from_i64(&[-1, 1]));
        let lhs = phi(&x.mul(&y), 4);
        let rhs = phi(&x, 4).mul(&phi(&y, 4));
        assert_eq!(lhs.poly(), rhs.poly());
    }

    #[test]
    fn generator_preimage_round_trips() {
        for n in 1..=3 {
            for j in 0..n {
                let pre = phi_inverse_gen(n, j);
                let image = phi(&pre, 4).into_poly();
                assert_eq!(image, SparsePoly::var(n, j), "n={n} j={j}");
            }
        }
    }

    #[test]
    fn orbit_paths_agree() {
        let cases = [
            (Family::A, 2, 0),
            (Family::B, 2, 0),
            (Family::B, 2, 1),
            (Family::G, 2, 0),
        ];
        for (f, n, j) in cases {
            let rs = rs(f, n);
            let chi = rs.fundamental_weight(j);
            for i in 2..=4usize {
                let streamed = phi_rho(&rs, &chi, i, 10_000).unwrap();
                let closed = phi_rho_closed_form(&rs, &chi, i, 10_000).unwrap();
                let direct = {
                    let rho = GroupRingElement::orbit_sum(&rs, &chi, 10_000).unwrap();
                    phi_component(&rho, i)
                };
                let per_element = {
                    let mut acc = SparsePoly::zero(n);
                    for w in rs.orbit(&chi, 10_000).unwrap() {
                        acc = acc.add(&phi_component_of_exp(w.coords(), i).unwrap());
                    }
                    acc
                };
                assert_eq!(streamed, closed, "{f}{n} w{j} degree {i}");
                assert_eq!(streamed, direct, "{f}{n} w{j} degree {i}");
                assert_eq!(streamed, per_element, "{f}{n} w{j} degree {i}");
            }
        }
    }

    #[test]
    fn known_orbit_values_rank_two() {
        let a2 = rs(Family::A, 2);
        let chi = a2.fundamental_weight(0);
        // Degree 2 reproduces the normalized invariant quadratic.
        assert_eq!(phi_rho(&a2, &chi, 2, 100).unwrap(), normalized_q(&a2).unwrap());
        // Degree 3 value checked against the truncated geometric expansion.
        assert_eq!(
            phi_rho(&a2, &chi, 3, 100).unwrap(),
            SparsePoly::parse("w1^3 - w1*w2^2 + w2^3", 2).unwrap()
        );
        // Degree 1 orbit sums vanish: the action has no fixed vectors.
        assert!(phi_rho(&a2, &chi, 1, 100).unwrap().is_zero());
        // Degree 0 counts the orbit.
        assert_eq!(
            phi_rho(&a2, &chi, 0, 100).unwrap(),
            SparsePoly::constant(2, Int::from(3))
        );
    }

    #[test]
    fn golden_orbit_value() {
        let h2 = build_h2();
        let chi = h2.fundamental_weight(0);
        let p = phi_rho(&h2, &chi, 2, 100).unwrap();
        let sq = |a: i64, b: i64, j: usize| {
            let mut exps = vec![0u32; 2];
            exps[j] = 2;
            (Monomial::new(exps), GoldenInt::from_pair(a, b))
        };
        let mut expect = SparsePoly::zero(2);
        let (m, c) = sq(2, 1, 0);
        expect.add_term(m, c);
        let (m, c) = sq(2, 1, 1);
        expect.add_term(m, c);
        expect.add_term(
            Monomial::new(vec![1, 1]),
            GoldenInt::from_pair(-1, -3),
        );
        assert_eq!(p, expect);
        // Same value through the closed form.
        assert_eq!(phi_rho_closed_form(&h2, &chi, 2, 100).unwrap(), expect);
    }

    #[test]
    fn accumulator_merge_matches_single_pass() {
        let b2 = rs(Family::B, 2);
        let orbit = b2.orbit(&b2.fundamental_weight(0), 100).unwrap();
        let mut whole = PowerSumAccumulator::<Int>::new(2, 3);
        for w in &orbit {
            whole.add_weight(w.coords());
        }
        let mut left = PowerSumAccumulator::<Int>::new(2, 3);
        let mut right = PowerSumAccumulator::<Int>::new(2, 3);
        for (k, w) in orbit.iter().enumerate() {
            if k % 2 == 0 {
                left.add_weight(w.coords());
            } else {
                right.add_weight(w.coords());
            }
        }
        left.merge(right);
        assert_eq!(left.count(), whole.count());
        assert_eq!(left.finalize().unwrap(), whole.finalize().unwrap());
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PhiCache::new(dir.path());
        let a2 = rs(Family::A, 2);
        let chi = a2.fundamental_weight(0);
        assert!(cache.fetch(a2.kind(), &chi, 3).is_none());
        let fresh = phi_rho_cached(&a2, &chi, 3, 100, Some(&cache)).unwrap();
        let hit = cache.fetch(a2.kind(), &chi, 3).unwrap();
        assert_eq!(fresh, hit);
        // Different degree is a different key.
        assert!(cache.fetch(a2.kind(), &chi, 2).is_none());
        let again = phi_rho_cached(&a2, &chi, 3, 100, Some(&cache)).unwrap();
        assert_eq!(again, fresh);
    }
}
