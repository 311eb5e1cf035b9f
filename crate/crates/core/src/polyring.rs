//! Sparse multivariate polynomials with exact coefficients.
//!
//! Variables are the coordinates `w1 .. wn` of a rank-`n` lattice basis.
//! Monomials are ordered graded-lexicographically, which fixes a canonical
//! term order for display, parsing and the vector encodings used by the
//! lattice routines.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::binomial;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Int, Scalar};

/// Exponent vector of a monomial; `exps[j]` is the power of `w(j+1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn unit(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    pub fn var(n: usize, j: usize) -> Self {
        let mut exps = vec![0; n];
        exps[j] = 1;
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn total_degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Ord for Monomial {
    /// Graded lex: lower total degree first, then lexicographic on exponents.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All degree-`d` monomials in `n` variables, in descending graded-lex order
/// (the order used for displaying terms and for lattice coordinates).
pub fn monomials_of_degree(n: usize, d: usize) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if n == 1 {
            prefix.push(d);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    assert!(n > 0, "monomials need at least one variable");
    let mut out = Vec::new();
    rec(n, d as u32, &mut Vec::new(), &mut out);
    out
}

/// Polynomial in `n` variables with `Scalar` coefficients; zero coefficients
/// are never stored, so equality of maps is equality of polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparsePoly<S: Scalar> {
    n: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> SparsePoly<S> {
    pub fn zero(n: usize) -> Self {
        SparsePoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: S) -> Self {
        let mut p = SparsePoly::zero(n);
        p.add_term(Monomial::unit(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        SparsePoly::constant(n, S::one())
    }

    /// The variable `w(j+1)`.
    pub fn var(n: usize, j: usize) -> Self {
        let mut p = SparsePoly::zero(n);
        p.add_term(Monomial::var(n, j), S::one());
        p
    }

    /// The linear form with the given coordinates.
    pub fn linear_form(coords: &[S]) -> Self {
        let n = coords.len();
        let mut p = SparsePoly::zero(n);
        for (j, c) in coords.iter().enumerate() {
            p.add_term(Monomial::var(n, j), c.clone());
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        debug_assert_eq!(m.exps().len(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = SparsePoly::zero(self.n);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.mul_capped(rhs, None)
    }

    fn mul_capped(&self, rhs: &Self, cap: Option<usize>) -> Self {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = SparsePoly::zero(self.n);
        for (ma, ca) in &self.terms {
            let da = ma.total_degree();
            for (mb, cb) in &rhs.terms {
                if let Some(cap) = cap {
                    if da + mb.total_degree() > cap {
                        continue;
                    }
                }
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &S) -> Self {
        if c.is_zero() {
            return SparsePoly::zero(self.n);
        }
        let mut out = SparsePoly::zero(self.n);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = SparsePoly::zero(self.n);
        for (mm, c) in &self.terms {
            out.terms.insert(mm.mul(m), c.clone());
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = SparsePoly::one(self.n);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// The degree-`i` homogeneous part.
    pub fn homogeneous_component(&self, i: usize) -> Self {
        let mut out = SparsePoly::zero(self.n);
        for (m, c) in &self.terms {
            if m.total_degree() == i {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Substitutes `w(j+1) -> images[j]`; every image must have degree <= 1.
    pub fn substitute_linear(&self, images: &[Self]) -> Self {
        assert_eq!(images.len(), self.n, "one image per variable required");
        for im in images {
            assert!(im.total_degree() <= 1, "substitution images must be linear");
        }
        let n_out = images.first().map_or(self.n, |p| p.n);
        let mut out = SparsePoly::zero(n_out);
        for (m, c) in &self.terms {
            let mut term = SparsePoly::constant(n_out, c.clone());
            for (j, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&images[j]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Evaluates at the point with the given coordinates.
    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.n);
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (j, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    v = v * point[j].clone();
                }
            }
            acc = acc + v;
        }
        acc
    }

    /// Divides every coefficient by `d`, exactly or not at all.
    pub fn div_exact_scalar(&self, d: &S) -> Option<Self> {
        let mut out = SparsePoly::zero(self.n);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c.div_exact(d)?);
        }
        Some(out)
    }

    /// Maps coefficients into another scalar ring.
    pub fn map_coefficients<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparsePoly<T> {
        let mut out = SparsePoly::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl<S: Scalar> fmt::Display for SparsePoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.display_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag_str = mag.to_string();
            let composite = mag_str
                .chars()
                .any(|ch| ch == '+' || ch == '-' || ch == '*');
            if m.total_degree() == 0 {
                write!(f, "{mag_str}")?;
            } else {
                if composite {
                    write!(f, "({mag_str})*")?;
                } else if mag_str != "1" {
                    write!(f, "{mag_str}*")?;
                }
                let mut first_var = true;
                for (j, &e) in m.exps().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !first_var {
                        write!(f, "*")?;
                    }
                    first_var = false;
                    if e == 1 {
                        write!(f, "w{}", j + 1)?;
                    } else {
                        write!(f, "w{}^{}", j + 1, e)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl SparsePoly<Int> {
    /// Parses the canonical text form produced by `Display`, for example
    /// `3*w1^2*w2 - w2^3 + 5`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("invalid polynomial {s:?}: {msg}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty input"));
        }
        if compact == "0" {
            return Ok(SparsePoly::zero(n));
        }
        let mut out = SparsePoly::zero(n);
        let mut chunk = String::new();
        let mut chunks: Vec<String> = Vec::new();
        let chars: Vec<char> = compact.chars().collect();
        for (i, &c) in chars.iter().enumerate() {
            let splits = (c == '+' || c == '-') && i > 0 && chars[i - 1] != '^' && chars[i - 1] != '*';
            if splits {
                chunks.push(std::mem::take(&mut chunk));
            }
            chunk.push(c);
        }
        chunks.push(chunk);
        for t in chunks {
            let (sign, body) = match t.strip_prefix('-') {
                Some(rest) => (-1i64, rest),
                None => (1i64, t.strip_prefix('+').unwrap_or(&t)),
            };
            let mut coeff = Int::from(sign);
            let mut exps = vec![0u32; n];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(bad("empty factor"));
                }
                if let Some(rest) = factor.strip_prefix('w') {
                    let (idx_str, pow_str) = match rest.split_once('^') {
                        Some((i, p)) => (i, Some(p)),
                        None => (rest, None),
                    };
                    let idx: usize = idx_str.parse().map_err(|_| bad("bad variable index"))?;
                    if idx == 0 || idx > n {
                        return Err(bad("variable index out of range"));
                    }
                    let e: u32 = match pow_str {
                        Some(p) => p.parse().map_err(|_| bad("bad exponent"))?,
                        None => 1,
                    };
                    exps[idx - 1] += e;
                } else {
                    let c: Int = factor.parse().map_err(|_| bad("bad coefficient"))?;
                    coeff *= c;
                }
            }
            out.add_term(Monomial::new(exps), coeff);
        }
        Ok(out)
    }
}

/// A polynomial together with a total-degree cap; arithmetic silently drops
/// monomials above the cap, modelling the quotient by the ideal of
/// polynomials of degree greater than the cap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedPoly<S: Scalar> {
    poly: SparsePoly<S>,
    cap: usize,
}

impl<S: Scalar> TruncatedPoly<S> {
    pub fn new(poly: SparsePoly<S>, cap: usize) -> Self {
        let mut kept = SparsePoly::zero(poly.n_vars());
        for (m, c) in poly.terms() {
            if m.total_degree() <= cap {
                kept.add_term(m.clone(), c.clone());
            }
        }
        TruncatedPoly { poly: kept, cap }
    }

    pub fn one(n: usize, cap: usize) -> Self {
        TruncatedPoly::new(SparsePoly::one(n), cap)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn poly(&self) -> &SparsePoly<S> {
        &self.poly
    }

    pub fn into_poly(self) -> SparsePoly<S> {
        self.poly
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.cap, rhs.cap, "mismatched truncation caps");
        TruncatedPoly {
            poly: self.poly.add(&rhs.poly),
            cap: self.cap,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cap, rhs.cap, "mismatched truncation caps");
        TruncatedPoly {
            poly: self.poly.mul_capped(&rhs.poly, Some(self.cap)),
            cap: self.cap,
        }
    }

    pub fn homogeneous_component(&self, i: usize) -> SparsePoly<S> {
        self.poly.homogeneous_component(i)
    }
}

/// The truncation of `(1 - w(j+1))^(-a)` to degrees `<= cap`; for negative
/// `a` this is the binomial expansion of the positive power `(1 - w)^|a|`.
pub fn geometric_power(n: usize, j: usize, a: &Int, cap: usize) -> TruncatedPoly<Int> {
    use num_traits::Signed;
    let mut poly = SparsePoly::zero(n);
    if a.is_negative() {
        let m = -a.clone();
        let mut k = Int::from(0);
        let mut ki = 0usize;
        while k <= m && ki <= cap {
            let coef = binomial(m.clone(), k.clone());
            let signed = if ki % 2 == 0 { coef } else { -coef };
            let mut exps = vec![0u32; n];
            exps[j] = ki as u32;
            poly.add_term(Monomial::new(exps), signed);
            k += 1;
            ki += 1;
        }
    } else {
        for k in 0..=cap {
            let coef = if a.is_zero() {
                if k == 0 {
                    Int::one()
                } else {
                    Int::zero()
                }
            } else {
                // C(a + k - 1, k)
                binomial(a.clone() + Int::from(k as i64) - Int::one(), Int::from(k as i64))
            };
            let mut exps = vec![0u32; n];
            exps[j] = k as u32;
            poly.add_term(Monomial::new(exps), coef);
        }
    }
    TruncatedPoly::new(poly, cap)
}
