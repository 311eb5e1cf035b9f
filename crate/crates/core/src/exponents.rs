//! The headline quantities: the exponents of the truncated isomorphism in
//! degrees up to four, Dynkin indices of fundamental orbits by two routes,
//! torsion annihilator bounds derived from them, and the second exponent of
//! the H2 action over `Z[tau]`.

use std::collections::BTreeMap;
use std::time::Instant;

use num_integer::Integer as _;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{invariant_lattice, normalized_q, quotient_exponent, IntLattice, MonomialBasis};
use crate::phi::{phi_rho, phi_rho_cached, PhiCache};
use crate::polyring::{monomials_of_degree, SparsePoly};
use crate::rootsys::{build_h2, Family, OrthChart, RootSystem, RootSystemKind, Weight, DEFAULT_ORBIT_CAP};
use crate::scalar::{gcd_golden, gcd_int, GoldenInt, Int, Scalar as _};

/// Largest degree for which the truncated isomorphism backs the exponent.
pub const MAX_DEGREE: usize = 4;

fn check_degree(op: &'static str, degree: usize) -> Result<()> {
    if degree > MAX_DEGREE {
        return Err(Error::UnsupportedDegree {
            op,
            degree,
            supported: "0..=4",
        });
    }
    Ok(())
}

/// Degree-`degree` slice of the image of the invariant ideal of the group
/// ring, as a sublattice of the monomial coordinates on that degree.
///
/// Rows are `m * phi^(j)(rho(w_l))` over the fundamental weights `w_l`,
/// `2 <= j <= degree`, and monomials `m` of degree `degree - j`. The `j = 1`
/// components vanish because the action is essential, and products of two
/// orbit-sum generators are integer combinations of these rows already: the
/// extra factor lands in the polynomial part `m`.
pub fn image_lattice_l(
    rs: &RootSystem<Int>,
    degree: usize,
    cap: usize,
    cache: Option<&PhiCache>,
) -> Result<IntLattice> {
    check_degree("image_lattice_l", degree)?;
    let n = rs.rank();
    let basis = MonomialBasis::new(n, degree);
    if degree < 2 {
        return Ok(IntLattice::zero(basis.len()));
    }
    let mut rows = Vec::new();
    for j in 2..=degree {
        for l in 0..n {
            let p = phi_rho_cached(rs, &rs.fundamental_weight(l), j, cap, cache)?;
            for m in monomials_of_degree(n, degree - j) {
                rows.push(basis.vector_of(&p.mul_monomial(&m)));
            }
        }
    }
    Ok(IntLattice::from_generators(basis.len(), rows))
}

/// Degree-`degree` slice of the ideal generated by invariant polynomials of
/// positive degree: spans `m * g` with `g` a basis vector of the invariant
/// lattice in degree `j`, `2 <= j <= degree`, and `m` a monomial of degree
/// `degree - j`. Degree-one invariants vanish for essential actions.
pub fn target_lattice_m(rs: &RootSystem<Int>, degree: usize) -> Result<IntLattice> {
    check_degree("target_lattice_m", degree)?;
    let n = rs.rank();
    let basis = MonomialBasis::new(n, degree);
    if degree < 2 {
        return Ok(IntLattice::zero(basis.len()));
    }
    let mut rows = Vec::new();
    for j in 2..=degree {
        let inv = invariant_lattice(rs, j);
        let inner = MonomialBasis::new(n, j);
        for r in 0..inv.rank() {
            let g = inner.poly_of(inv.basis().row(r));
            for m in monomials_of_degree(n, degree - j) {
                rows.push(basis.vector_of(&g.mul_monomial(&m)));
            }
        }
    }
    Ok(IntLattice::from_generators(basis.len(), rows))
}

/// The exponent of `(M + L) / L` in one degree, where `M` is the invariant
/// ideal slice and `L` the image slice. Degrees 0 and 1 give 1: both
/// lattices vanish there.
pub fn exponent_tau(
    rs: &RootSystem<Int>,
    degree: usize,
    cap: usize,
    cache: Option<&PhiCache>,
) -> Result<Int> {
    check_degree("exponent_tau", degree)?;
    if degree < 2 {
        return Ok(Int::one());
    }
    let l = image_lattice_l(rs, degree, cap, cache)?;
    let m = target_lattice_m(rs, degree)?;
    quotient_exponent(&m, &l)
}

/// Index of the orbit of the `j`-th fundamental weight (0-based): half the
/// sum of squared pairings with the long coroot over the orbit. The halving
/// is checked, not assumed.
pub fn dynkin_index_orbit(rs: &RootSystem<Int>, j: usize, cap: usize) -> Result<Int> {
    let cov: Vec<Int> = rs.theta_covector()?.to_vec();
    let mut sum = Int::zero();
    rs.orbit_stream(&rs.fundamental_weight(j), cap, |coords| {
        let mut p = Int::zero();
        for (c, x) in cov.iter().zip(coords) {
            p += c * x;
        }
        sum += &p * &p;
    })?;
    let (half, rem) = sum.div_rem(&Int::from(2));
    if !rem.is_zero() {
        return Err(Error::InexactDivision {
            divisor: "2".into(),
            context: format!("orbit index sum for {} weight {}", rs.kind(), j + 1),
        });
    }
    Ok(half)
}

/// `p = n * q` solved for an integer `n`, if one exists.
fn integer_multiple_of(p: &SparsePoly<Int>, q: &SparsePoly<Int>) -> Option<Int> {
    if p.is_zero() {
        return Some(Int::zero());
    }
    let (m0, c0) = q.terms().next()?;
    let n = p.coefficient(m0).div_exact(c0)?;
    if p.sub(&q.mul_scalar(&n)).is_zero() {
        Some(n)
    } else {
        None
    }
}

/// The same index read off the degree-2 orbit image: that image must be an
/// exact integer multiple of the normalized invariant quadratic, and the
/// multiplier must agree with [`dynkin_index_orbit`]. Both failures are
/// errors, never silent.
pub fn dynkin_index_via_q(
    rs: &RootSystem<Int>,
    j: usize,
    cap: usize,
    cache: Option<&PhiCache>,
) -> Result<Int> {
    let p = phi_rho_cached(rs, &rs.fundamental_weight(j), 2, cap, cache)?;
    let q = normalized_q(rs)?;
    let n = integer_multiple_of(&p, &q).ok_or_else(|| {
        Error::Normalization(format!(
            "degree-2 orbit image of {} weight {} is not an integer multiple of q",
            rs.kind(),
            j + 1
        ))
    })?;
    let oracle = dynkin_index_orbit(rs, j, cap)?;
    if n != oracle {
        return Err(Error::Internal(format!(
            "index mismatch for {} weight {}: {} via q, {} via the orbit",
            rs.kind(),
            j + 1,
            n,
            oracle
        )));
    }
    Ok(n)
}

/// Index of every fundamental orbit, keyed by 1-based node number. Each
/// value is cross-checked between the two routes.
pub fn dynkin_indices(
    rs: &RootSystem<Int>,
    cap: usize,
    cache: Option<&PhiCache>,
) -> Result<BTreeMap<u32, Int>> {
    (0..rs.rank())
        .map(|j| Ok((j as u32 + 1, dynkin_index_via_q(rs, j, cap, cache)?)))
        .collect()
}

/// Gcd of the fundamental orbit indices.
pub fn dynkin_gcd(rs: &RootSystem<Int>, cap: usize, cache: Option<&PhiCache>) -> Result<Int> {
    let idx = dynkin_indices(rs, cap, cache)?;
    Ok(idx.values().fold(Int::zero(), |g, v| gcd_int(&g, v)))
}

/// `(72, 8)`: annihilators of the full and 2-primary torsion of
/// codimension-4 cycles for the orthogonal series, both consequences of the
/// degree-4 bound 12.
pub fn ch4_constants(kind: RootSystemKind) -> Option<(u32, u32)> {
    match (kind.family(), kind.rank()) {
        (Family::B, n) if n >= 3 => Some((72, 8)),
        (Family::D, n) if n >= 4 => Some((72, 8)),
        _ => None,
    }
}

fn torsion_from_tau(kind: RootSystemKind, t3: &Int, t4: &Int) -> Result<BTreeMap<u32, Int>> {
    let mut out = BTreeMap::new();
    out.insert(3u32, t3 * Int::from(2));
    out.insert(4u32, t4 * Int::from(6));
    if ch4_constants(kind).is_some() && out[&4] != Int::from(12) {
        return Err(Error::Internal(format!(
            "{kind}: degree-4 annihilator is {}, expected 12 for this series",
            out[&4]
        )));
    }
    Ok(out)
}

/// Torsion annihilator bounds for the degree-3 and degree-4 graded quotients
/// of the gamma-filtration: `tau_i * (i-1)!`. For B_n (n >= 3) and D_n
/// (n >= 4) the degree-4 value must come out as 12.
pub fn torsion_bounds(
    rs: &RootSystem<Int>,
    cap: usize,
    cache: Option<&PhiCache>,
) -> Result<BTreeMap<u32, Int>> {
    let t3 = exponent_tau(rs, 3, cap, cache)?;
    let t4 = exponent_tau(rs, 4, cap, cache)?;
    torsion_from_tau(rs.kind(), &t3, &t4)
}

/// Everything the library knows about one crystallographic type, with the
/// cross-checks between routes already enforced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub kind: String,
    pub rank: usize,
    #[serde(with = "crate::scalar::int_map_string")]
    pub tau: BTreeMap<u32, Int>,
    #[serde(with = "crate::scalar::int_map_string")]
    pub dynkin_per_weight: BTreeMap<u32, Int>,
    #[serde(with = "crate::scalar::int_string")]
    pub dynkin_gcd: Int,
    #[serde(with = "crate::scalar::int_map_string")]
    pub torsion_bounds: BTreeMap<u32, Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ch4_constants: Option<(u32, u32)>,
    /// Whether the image slice sat inside the invariant slice integrally.
    /// Recorded, not required: the exponent is of `(M + L)/L` either way.
    pub image_contained_in_target: BTreeMap<u32, bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

/// Builds the report for one type and enforces the internal cross-checks:
/// the tau chain divides upward, the degrees 2 through 4 agree, and tau_2
/// equals the index gcd. A violation is an error, not a report field.
pub fn exponent_report(
    rs: &RootSystem<Int>,
    cap: usize,
    cache: Option<&PhiCache>,
    with_timings: bool,
) -> Result<ExponentReport> {
    let mut timings = BTreeMap::new();

    let t0 = Instant::now();
    let mut tau = BTreeMap::new();
    let mut contained = BTreeMap::new();
    tau.insert(0u32, Int::one());
    tau.insert(1u32, Int::one());
    for i in 2..=MAX_DEGREE {
        let l = image_lattice_l(rs, i, cap, cache)?;
        let m = target_lattice_m(rs, i)?;
        contained.insert(i as u32, l.is_sublattice_of(&m));
        tau.insert(i as u32, quotient_exponent(&m, &l)?);
    }
    timings.insert("tau".into(), t0.elapsed().as_secs_f64());

    for i in 0..MAX_DEGREE as u32 {
        if !tau[&(i + 1)].is_multiple_of(&tau[&i]) {
            return Err(Error::Internal(format!(
                "{}: tau_{} = {} does not divide tau_{} = {}",
                rs.kind(),
                i,
                tau[&i],
                i + 1,
                tau[&(i + 1)]
            )));
        }
    }
    if tau[&2] != tau[&3] || tau[&3] != tau[&4] {
        return Err(Error::Internal(format!(
            "{}: tau_2, tau_3, tau_4 = {}, {}, {} are not all equal",
            rs.kind(),
            tau[&2],
            tau[&3],
            tau[&4]
        )));
    }

    let t1 = Instant::now();
    let dynkin_per_weight = dynkin_indices(rs, cap, cache)?;
    let dynkin_gcd = dynkin_per_weight
        .values()
        .fold(Int::zero(), |g, v| gcd_int(&g, v));
    timings.insert("dynkin".into(), t1.elapsed().as_secs_f64());
    if dynkin_gcd != tau[&2] {
        return Err(Error::Internal(format!(
            "{}: tau_2 = {} but the fundamental index gcd is {}",
            rs.kind(),
            tau[&2],
            dynkin_gcd
        )));
    }

    let torsion = torsion_from_tau(rs.kind(), &tau[&3], &tau[&4])?;

    Ok(ExponentReport {
        kind: rs.kind().to_string(),
        rank: rs.rank(),
        tau,
        dynkin_per_weight,
        dynkin_gcd,
        torsion_bounds: torsion,
        ch4_constants: ch4_constants(rs.kind()),
        image_contained_in_target: contained,
        timings: with_timings.then_some(timings),
    })
}

/// Second exponent of the H2 action over `Z[tau]`, reported as a canonical
/// associate together with the headline fact about it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H2Report {
    pub tau2: GoldenInt,
    pub is_sqrt5: bool,
}

/// Degree-2 image of either fundamental H2 orbit, checked equal between the
/// two (the orbits are negatives of each other and the image is even).
pub fn h2_quadratic() -> Result<SparsePoly<GoldenInt>> {
    let rs = build_h2();
    let p1 = phi_rho(&rs, &rs.fundamental_weight(0), 2, DEFAULT_ORBIT_CAP)?;
    let p2 = phi_rho(&rs, &rs.fundamental_weight(1), 2, DEFAULT_ORBIT_CAP)?;
    if p1 != p2 {
        return Err(Error::Internal(
            "H2: the two fundamental orbits gave different degree-2 images".into(),
        ));
    }
    Ok(p1)
}

/// The H2 second exponent. The invariant quadratic lattice over `Z[tau]` has
/// rank one in rank 2, so the exponent is the coefficient gcd of the orbit
/// image, canonically normalized.
pub fn h2_tau2() -> Result<H2Report> {
    let p = h2_quadratic()?;
    let mut g = GoldenInt::zero();
    for (_, c) in p.terms() {
        g = gcd_golden(&g, c);
    }
    let tau2 = g.canonical_associate();
    let is_sqrt5 = tau2.is_sqrt5_associate();
    Ok(H2Report { tau2, is_sqrt5 })
}

/// Outcome of one family-specific quartic relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub kind: String,
    pub identity: String,
    pub holds: bool,
    /// Left minus right, display form; `0` when the relation holds.
    pub diff: String,
}

/// `(q_2^2 - q_4) / 2` in fundamental-weight coordinates.
fn quartic_rhs(chart: &OrthChart) -> Result<SparsePoly<Int>> {
    let q2 = chart.power_sum(2);
    let q4 = chart.power_sum(4);
    q2.mul(&q2)
        .sub(&q4)
        .div_exact_scalar(&Int::from(2))
        .ok_or_else(|| Error::InexactDivision {
            divisor: "2".into(),
            context: "quartic power-sum combination".into(),
        })
}

fn outcome(
    kind: RootSystemKind,
    identity: &str,
    lhs: &SparsePoly<Int>,
    rhs: &SparsePoly<Int>,
) -> IdentityReport {
    let diff = lhs.sub(rhs);
    IdentityReport {
        kind: kind.to_string(),
        identity: identity.to_string(),
        holds: diff.is_zero(),
        diff: diff.to_string(),
    }
}

/// Checks the family's exact degree-4 relation between orbit images and
/// power sums: the A_n relation for n >= 3, its rank-2 degeneration
/// `q_4 = q_2^2 / 2`, and the orthogonal-series relation for B_n and C_n
/// (n >= 2) and D_n (n >= 4). Other types have no such relation.
pub fn verify_identities(rs: &RootSystem<Int>, cap: usize) -> Result<IdentityReport> {
    let kind = rs.kind();
    let n = rs.rank();
    let quartic = |chi: &Weight<Int>| phi_rho(rs, chi, 4, cap);
    match kind.family() {
        Family::A if n >= 3 => {
            let chart = OrthChart::new(kind)?;
            let w1 = rs.fundamental_weight(0);
            let wn = rs.fundamental_weight(n - 1);
            let ends = quartic(&w1)?.add(&quartic(&wn)?);
            let lhs = quartic(&w1.add(&wn))?
                .add(&quartic(&rs.fundamental_weight(1))?)
                .add(&quartic(&rs.fundamental_weight(n - 2))?)
                .sub(&ends.mul_scalar(&Int::from(2 * n as i64)));
            Ok(outcome(kind, "aneq", &lhs, &quartic_rhs(&chart)?))
        }
        Family::A if n == 2 => {
            // Rank 2 degenerates: with three coordinates summing to zero the
            // quartic power sum is already half the square of the quadratic.
            let chart = OrthChart::new(kind)?;
            let q2 = chart.power_sum(2);
            let half_square =
                q2.mul(&q2)
                    .div_exact_scalar(&Int::from(2))
                    .ok_or_else(|| Error::InexactDivision {
                        divisor: "2".into(),
                        context: "square of the rank-2 quadratic power sum".into(),
                    })?;
            Ok(outcome(kind, "aneq", &chart.power_sum(4), &half_square))
        }
        Family::B | Family::C if n >= 2 => ortho_identity(rs, cap),
        Family::D if n >= 4 => ortho_identity(rs, cap),
        _ => Err(Error::Inapplicable {
            op: "verify_identities",
            kind,
        }),
    }
}

fn ortho_identity(rs: &RootSystem<Int>, cap: usize) -> Result<IdentityReport> {
    let kind = rs.kind();
    let n = rs.rank();
    let chart = OrthChart::new(kind)?;
    // The second generator is the weight e_1 + e_2, which is the second
    // fundamental weight except for B_2, where that node carries a spinor.
    let mut e12 = vec![0i64; chart.orth_dim()];
    e12[0] = 1;
    e12[1] = 1;
    let w2 = chart.weight_from_orth(&e12)?;
    let lhs = phi_rho(rs, &w2, 4, cap)?.sub(
        &phi_rho(rs, &rs.fundamental_weight(0), 4, cap)?
            .mul_scalar(&Int::from(2 * (n as i64 - 1))),
    );
    Ok(outcome(kind, "ortheq", &lhs, &quartic_rhs(&chart)?))
}
