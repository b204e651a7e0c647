//! Truncated formal power series and the solution-extension recursion.
//!
//! A [`TruncSeries`] knows its coefficients through an explicit truncation
//! order and nothing beyond it; arithmetic propagates the truncation honestly
//! (a product is only known as far as both factors are).
//!
//! [`extend_solution`] is the analytic half of the toolkit: given a defining
//! polynomial whose order in the distinguished indeterminate strictly exceeds
//! the guard's, and arbitrary series for the other indeterminates, it chooses
//! initial values that keep the guard nonzero, solves one univariate
//! polynomial for the top initial value, and then extends the solution
//! coefficient by coefficient: differentiating the defining polynomial `m`
//! times produces an expression that is linear in the next derivative with
//! the separant as its coefficient, so each further coefficient is a single
//! division. The result is re-verified independently by composing the series
//! into the defining polynomial.

use std::collections::{BTreeMap, BTreeSet};

use num::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{DerivTable, DerivVar, DiffPoly};
use crate::scalar::{factorial, DiffField, RatT, RootField, TPoly};

// ---------------------------------------------------------------------------
// Truncated series.
// ---------------------------------------------------------------------------

/// Power series known through degree `trunc()`: `c_0 + c_1 t + ... + c_M t^M`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<K> {
    coeffs: Vec<K>,
}

impl<K: DiffField> TruncSeries<K> {
    /// Coefficients lowest degree first; the truncation order is
    /// `coeffs.len() - 1`, so at least the constant term must be present.
    pub fn new(coeffs: Vec<K>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        TruncSeries { coeffs }
    }

    pub fn zero(trunc: u32) -> Self {
        TruncSeries {
            coeffs: vec![K::zero(); trunc as usize + 1],
        }
    }

    pub fn constant(c: K, trunc: u32) -> Self {
        let mut coeffs = vec![K::zero(); trunc as usize + 1];
        coeffs[0] = c;
        TruncSeries { coeffs }
    }

    /// The truncation order `M`.
    pub fn trunc(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    /// Coefficient of `t^j`; `None` beyond the truncation order.
    pub fn coeff(&self, j: u32) -> Option<&K> {
        self.coeffs.get(j as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Shorten to truncation order `m` (no-op when already shorter).
    pub fn truncate(&self, m: u32) -> Self {
        let len = (m as usize + 1).min(self.coeffs.len());
        TruncSeries {
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().min(other.coeffs.len());
        TruncSeries {
            coeffs: (0..len)
                .map(|k| self.coeffs[k].clone() + other.coeffs[k].clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Cauchy product, truncated to the shorter factor.
    pub fn mul(&self, other: &Self) -> Self {
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![K::zero(); len];
        for (i, a) in self.coeffs.iter().take(len).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(len - i).enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncSeries { coeffs: out }
    }

    /// Divide by a series with invertible constant term; the quotient is
    /// truncated to the shorter operand.
    pub fn div_unit(&self, den: &Self) -> Result<Self> {
        let inv = den.coeffs[0]
            .try_inverse()
            .ok_or_else(|| Error::internal("series division needs a unit constant term"))?;
        let len = self.coeffs.len().min(den.coeffs.len());
        let mut out: Vec<K> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = self.coeffs[k].clone();
            for (j, c) in out.iter().enumerate() {
                acc = acc - c.clone() * den.coeffs[k - j].clone();
            }
            out.push(acc * inv.clone());
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// Formal derivative; drops one order of truncation.
    pub fn derive(&self) -> Self {
        assert!(
            self.coeffs.len() >= 2,
            "derivative of a series truncated at order 0 is unknown"
        );
        TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * K::from_int(k as i64))
                .collect(),
        }
    }

    pub fn derive_n(&self, n: u32) -> Self {
        let mut s = self.clone();
        for _ in 0..n {
            s = s.derive();
        }
        s
    }

    pub fn map<K2: DiffField>(&self, f: impl Fn(&K) -> K2) -> TruncSeries<K2> {
        TruncSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

/// Series whose `j`-th coefficient is `values[j] / j!` (derivative values at
/// the expansion point to Taylor coefficients).
pub fn taylor_from_derivatives<K: DiffField>(values: &[K]) -> TruncSeries<K> {
    assert!(!values.is_empty(), "need at least the order-0 value");
    TruncSeries::new(
        values
            .iter()
            .enumerate()
            .map(|(j, v)| v.clone() / factorial::<K>(j as u32))
            .collect(),
    )
}

/// Inverse of [`taylor_from_derivatives`]: `v_j = j! · c_j`.
pub fn derivatives_from_taylor<K: DiffField>(s: &TruncSeries<K>) -> Vec<K> {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| c.clone() * factorial::<K>(j as u32))
        .collect()
}

// ---------------------------------------------------------------------------
// Composing series into differential polynomials.
// ---------------------------------------------------------------------------

/// Evaluate `p` on series components (over a constant base field).
///
/// The result is truncated at the largest order the components support:
/// `min(cap, min over occurring x_i^(r) of trunc(component_i) - r)`. Missing
/// components or a component too short for an occurring derivative are
/// errors.
pub fn eval_on_series<K: DiffField>(
    p: &DiffPoly<K>,
    comps: &BTreeMap<u32, TruncSeries<K>>,
    cap: u32,
) -> Result<TruncSeries<K>> {
    let mut limit = cap;
    for v in p.variables() {
        let s = comps
            .get(&v.indet)
            .ok_or(Error::MissingImage { indet: v.indet })?;
        if s.trunc() < v.order {
            return Err(Error::TruncationTooSmall {
                got: s.trunc(),
                need: v.order,
            });
        }
        limit = limit.min(s.trunc() - v.order);
    }
    let mut acc = TruncSeries::zero(limit);
    for (m, c) in p.terms() {
        let mut term = TruncSeries::constant(c.clone(), limit);
        for (v, e) in m.vars() {
            let base = comps[&v.indet].derive_n(v.order).truncate(limit);
            for _ in 0..e {
                term = term.mul(&base);
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Expansion of a polynomial in `t` around `t = lambda`, as a series in the
/// local parameter `s = t - lambda`.
pub fn tpoly_series_at(p: &TPoly, lambda: &BigRational, trunc: u32) -> TruncSeries<BigRational> {
    let mut cur = p.clone();
    let mut coeffs = Vec::with_capacity(trunc as usize + 1);
    for m in 0..=trunc {
        coeffs.push(cur.eval(lambda) / factorial::<BigRational>(m));
        cur = cur.derivative();
    }
    TruncSeries::new(coeffs)
}

/// Evaluate a time-mode polynomial on series components, with `t = lambda + s`
/// where `s` is the series parameter. Coefficients must be polynomial in `t`.
pub fn eval_time_on_series(
    p: &DiffPoly<RatT>,
    comps: &BTreeMap<u32, TruncSeries<BigRational>>,
    lambda: &BigRational,
    cap: u32,
) -> Result<TruncSeries<BigRational>> {
    let mut limit = cap;
    for v in p.variables() {
        let s = comps
            .get(&v.indet)
            .ok_or(Error::MissingImage { indet: v.indet })?;
        if s.trunc() < v.order {
            return Err(Error::TruncationTooSmall {
                got: s.trunc(),
                need: v.order,
            });
        }
        limit = limit.min(s.trunc() - v.order);
    }
    let mut acc = TruncSeries::zero(limit);
    for (m, c) in p.terms() {
        let tp = c
            .as_tpoly()
            .ok_or_else(|| Error::NonPolynomialTimeCoefficient {
                coeff: c.to_string(),
            })?;
        let mut term = tpoly_series_at(tp, lambda, limit);
        for (v, e) in m.vars() {
            let base = comps[&v.indet].derive_n(v.order).truncate(limit);
            for _ in 0..e {
                term = term.mul(&base);
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Solution extension.
// ---------------------------------------------------------------------------

/// Everything [`extend_solution`] produced, including the data needed to
/// audit the run.
#[derive(Clone, Debug)]
pub struct ExtensionReport<K> {
    /// Series for the distinguished indeterminate.
    pub solution: TruncSeries<K>,
    /// Order of the defining polynomial in the distinguished indeterminate.
    pub order: u32,
    /// Truncation order actually reached (input truncations permitting).
    pub truncation: u32,
    /// Root-finding backend that solved the top initial value.
    pub backend: &'static str,
    /// Chosen derivative values of the distinguished indeterminate through
    /// the order of the defining polynomial.
    pub initial: Vec<K>,
    /// Guard value at the chosen initial point (nonzero by construction).
    pub guard_value: K,
    /// Defining polynomial composed with the full solution tuple, computed
    /// by independent series arithmetic; identically zero on success.
    pub residual: TruncSeries<K>,
}

impl<K: DiffField> ExtensionReport<K> {
    pub fn residual_is_zero(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Extend arbitrary series for the non-distinguished indeterminates to a
/// solution of `p = 0` with `guard ≠ 0` at the expansion point.
///
/// Requires `p` to involve `x_i` at some order `h` strictly above the guard's
/// order in `x_i`. Initial values below order `h` are chosen by a
/// deterministic sweep that keeps the guard nonzero (possible whenever the
/// specialized guard is a nonzero polynomial; otherwise
/// [`Error::GuardUnsatisfiable`]). The order-`h` value is a root of one
/// univariate polynomial, found by the field's root backend; everything above
/// follows linearly from the separant. The output truncation is
/// `h + min(trunc - h, min_j(trunc_j - r_j))` where `r_j` is the order of `p`
/// in input `j`, so short inputs shorten the output rather than failing.
pub fn extend_solution<K: RootField>(
    p: &DiffPoly<K>,
    guard: &DiffPoly<K>,
    i: u32,
    inputs: &BTreeMap<u32, TruncSeries<K>>,
    trunc: u32,
) -> Result<ExtensionReport<K>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let h = p.order_wrt(i).ok_or(Error::NotDependent { indet: i })?;
    if let Some(go) = guard.order_wrt(i) {
        if go >= h {
            return Err(Error::PreconditionOrder {
                msg: format!(
                    "guard has order {go} in the distinguished indeterminate but the defining polynomial has order {h}"
                ),
            });
        }
    }
    if trunc < h {
        return Err(Error::TruncationTooSmall {
            got: trunc,
            need: h,
        });
    }

    let mut others: BTreeSet<u32> = p.indets();
    others.extend(guard.indets());
    others.remove(&i);

    // Depth of the recursion, limited by the requested truncation and by how
    // far each input series can be differentiated.
    let mut depth = trunc - h;
    let mut table: DerivTable<K> = DerivTable::new();
    for &j in &others {
        let s = inputs.get(&j).ok_or(Error::MissingImage { indet: j })?;
        let r_p = p.order_wrt(j);
        let r_g = guard.order_wrt(j);
        let need = r_p.unwrap_or(0).max(r_g.unwrap_or(0));
        if s.trunc() < need {
            return Err(Error::TruncationTooSmall {
                got: s.trunc(),
                need,
            });
        }
        if let Some(r) = r_p {
            depth = depth.min(s.trunc() - r);
        }
        table.set_column(j, derivatives_from_taylor(s));
    }

    // Specialize the guard at the input jet, then sweep initial values for
    // the distinguished indeterminate keeping it nonzero.
    let mut gspec = guard.clone();
    for v in guard.variables() {
        if v.indet != i {
            let value = table
                .get(v)
                .cloned()
                .expect("input depth checked above");
            gspec = gspec.eval_var(v, &value);
        }
    }
    if gspec.is_zero() {
        return Err(Error::GuardUnsatisfiable);
    }
    let mut initial = vec![K::zero(); h as usize];
    while let Some(&v) = gspec.variables().iter().next() {
        let deg = gspec.degree_in(v);
        let mut found = false;
        for cand in candidate_values::<K>(deg + 1) {
            let spec = gspec.eval_var(v, &cand);
            if !spec.is_zero() {
                initial[v.order as usize] = cand;
                gspec = spec;
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::internal("guard sweep stalled on a nonzero polynomial"));
        }
    }
    let guard_value = gspec.constant_value().expect("fully specialized");
    for value in &initial {
        table.push(i, value.clone());
    }

    // Solve the univariate polynomial in the order-h value.
    let leader = DerivVar::new(i, h);
    let ucoeffs = p
        .coeffs_in_var(leader)
        .iter()
        .map(|c| c.evaluate(&table))
        .collect::<Result<Vec<K>>>()?;
    let top = if ucoeffs.iter().all(|c| c.is_zero()) {
        K::zero()
    } else if ucoeffs[1..].iter().all(|c| c.is_zero()) {
        return Err(Error::OrderZeroResidual {
            residual: ucoeffs[0].to_string(),
        });
    } else {
        K::univariate_roots(&ucoeffs)
            .into_iter()
            .next()
            .ok_or(Error::NoRationalRoot { order: h })?
    };
    table.push(i, top.clone());
    let mut initial_full = initial;
    initial_full.push(top);

    // Linear recursion: p^(m) = separant · x_i^(h+m) + (lower order), so each
    // next derivative value is one division by the separant's value.
    let separant = p.partial_deriv(leader);
    let mut pm = p.clone();
    for m in 1..=depth {
        pm = pm.derive();
        let s_val = separant.evaluate(&table)?;
        if s_val.is_zero() {
            return Err(Error::SeparantVanished);
        }
        let linear = separant.mul_ref(&DiffPoly::var(DerivVar::new(i, h + m)));
        let tail = pm.sub_ref(&linear).evaluate(&table)?;
        table.push(i, -(tail / s_val));
    }

    let solution = taylor_from_derivatives(table.column(i).expect("column filled"));

    // Independent verification by series composition.
    let mut comps = inputs.clone();
    comps.insert(i, solution.clone());
    let residual = eval_on_series(p, &comps, depth)?;

    Ok(ExtensionReport {
        solution,
        order: h,
        truncation: h + depth,
        backend: K::backend_name(),
        initial: initial_full,
        guard_value,
        residual,
    })
}

/// Deterministic candidate sequence 0, 1, -1, 2, -2, ... of the given length.
fn candidate_values<K: DiffField>(count: u32) -> impl Iterator<Item = K> {
    (0..count).map(|k| {
        if k == 0 {
            K::zero()
        } else if k % 2 == 1 {
            K::from_int(i64::from(k / 2) + 1)
        } else {
            K::from_int(-i64::from(k / 2))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;
    use num::BigInt;

    type Q = BigRational;
    type QP = DiffPoly<Q>;
    type QS = TruncSeries<Q>;

    fn q(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    fn xp(i: u32, j: u32) -> QP {
        QP::var(DerivVar::new(i, j))
    }

    fn qs(coeffs: &[(i64, i64)]) -> QS {
        QS::new(coeffs.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn series_arithmetic_tracks_truncation() {
        let a = qs(&[(1, 1), (1, 1), (0, 1), (0, 1)]); // 1 + t, trunc 3
        let b = qs(&[(1, 1), (-1, 1), (0, 1)]); // 1 - t, trunc 2
        let prod = a.mul(&b);
        assert_eq!(prod.trunc(), 2);
        assert_eq!(prod, qs(&[(1, 1), (0, 1), (-1, 1)]));

        let d = a.derive();
        assert_eq!(d.trunc(), 2);
        assert_eq!(d, qs(&[(1, 1), (0, 1), (0, 1)]));

        assert!(a.sub(&a).is_zero());
        assert_eq!(a.truncate(1), qs(&[(1, 1), (1, 1)]));

        // Division undoes multiplication, and geometric series comes out of
        // 1 / (1 - t).
        let back = prod.div_unit(&b).unwrap();
        assert_eq!(back, a.truncate(2));
        let one = QS::constant(q(1, 1), 2);
        let geom = one.div_unit(&b).unwrap();
        assert_eq!(geom, qs(&[(1, 1), (1, 1), (1, 1)]));
        assert!(one.div_unit(&QS::zero(2)).is_err());
    }

    #[test]
    fn taylor_derivative_round_trip() {
        let values = vec![q(1, 1), q(2, 1), q(6, 1), q(12, 1)];
        let s = taylor_from_derivatives(&values);
        assert_eq!(s, qs(&[(1, 1), (2, 1), (3, 1), (2, 1)]));
        assert_eq!(derivatives_from_taylor(&s), values);
    }

    #[test]
    fn composition_annihilates_the_exponential() {
        // y' - y on the truncated exponential is zero through the supported
        // depth (trunc 3 input, order 1 derivative, so depth 2).
        let p = xp(1, 1).sub_ref(&xp(1, 0));
        let exp = qs(&[(1, 1), (1, 1), (1, 2), (1, 6)]);
        let comps = BTreeMap::from([(1u32, exp)]);
        let r = eval_on_series(&p, &comps, 10).unwrap();
        assert_eq!(r.trunc(), 2);
        assert!(r.is_zero());

        let missing = eval_on_series(&p, &BTreeMap::new(), 10);
        assert!(matches!(missing, Err(Error::MissingImage { indet: 1 })));
    }

    #[test]
    fn tpoly_expansion_shifts_the_basepoint() {
        // t^2 - 1 around t = 2: 3 + 4s + s^2.
        let p = TPoly::new(vec![q(-1, 1), q(0, 1), q(1, 1)]);
        let s = tpoly_series_at(&p, &q(2, 1), 3);
        assert_eq!(s, qs(&[(3, 1), (4, 1), (1, 1), (0, 1)]));
    }

    #[test]
    fn time_composition_matches_polynomial_identity() {
        // x' - t on x = lambda*s + s^2/2 ... with t = lambda + s the solution
        // is x' = t, i.e. x = lambda*s + s^2/2 up to a constant.
        let p: DiffPoly<RatT> = DiffPoly::var(DerivVar::new(1, 1))
            .sub_ref(&DiffPoly::constant(RatT::t()));
        let lambda = q(3, 1);
        let x = qs(&[(7, 1), (3, 1), (1, 2), (0, 1)]);
        let comps = BTreeMap::from([(1u32, x)]);
        let r = eval_time_on_series(&p, &comps, &lambda, 10).unwrap();
        assert!(r.is_zero(), "residual {r:?}");
    }

    #[test]
    fn extension_recovers_sqrt_series() {
        // y*y' = 1 with guard y: the sweep picks y(0) = 1 and the recursion
        // reproduces sqrt(1 + 2t) = 1 + t - t^2/2 + t^3/2 - 5t^4/8 + ...
        let p = xp(1, 0).mul_ref(&xp(1, 1)).sub_ref(&QP::one());
        let guard = xp(1, 0);
        let report = extend_solution(&p, &guard, 1, &BTreeMap::new(), 4).unwrap();
        assert_eq!(report.order, 1);
        assert_eq!(report.truncation, 4);
        assert_eq!(report.backend, "exact");
        assert_eq!(report.guard_value, q(1, 1));
        assert_eq!(report.initial, vec![q(1, 1), q(1, 1)]);
        assert_eq!(
            report.solution,
            qs(&[(1, 1), (1, 1), (-1, 2), (1, 2), (-5, 8)])
        );
        assert!(report.residual_is_zero());
    }

    #[test]
    fn extension_consumes_input_series() {
        // y2' = y1 with y1 = 1 (truncated at 2): y2 = t through trunc 3.
        let p = xp(2, 1).sub_ref(&xp(1, 0));
        let inputs = BTreeMap::from([(1u32, qs(&[(1, 1), (0, 1), (0, 1)]))]);
        let report = extend_solution(&p, &QP::one(), 2, &inputs, 5).unwrap();
        // depth = min(5 - 1, trunc(y1) - ord(y1)) = min(4, 2) = 2.
        assert_eq!(report.truncation, 3);
        assert_eq!(report.solution, qs(&[(0, 1), (1, 1), (0, 1), (0, 1)]));
        assert!(report.residual_is_zero());

        // Too short an input for the occurring derivative order errors.
        let p2 = xp(2, 1).sub_ref(&xp(1, 1));
        let short = BTreeMap::from([(1u32, qs(&[(1, 1)]))]);
        assert!(matches!(
            extend_solution(&p2, &QP::one(), 2, &short, 3),
            Err(Error::TruncationTooSmall { got: 0, need: 1 })
        ));
    }

    #[test]
    fn extension_error_paths() {
        // No rational root: (y')^2 = 2.
        let p = xp(1, 1).pow(2).sub_ref(&QP::from_int(2));
        let err = extend_solution(&p, &QP::one(), 1, &BTreeMap::new(), 2);
        assert!(matches!(err, Err(Error::NoRationalRoot { order: 1 })));

        // The float backend solves the same system.
        let pc = p.map_coeffs(|c| C64::from_rational_tol(c, 1e-9));
        let report =
            extend_solution(&pc, &DiffPoly::one(), 1, &BTreeMap::new(), 2).unwrap();
        assert_eq!(report.backend, "float");
        let c1 = report.solution.coeff(1).unwrap();
        assert!((c1.re + std::f64::consts::SQRT_2).abs() < 1e-7);
        assert!(report.residual_is_zero());

        // Separant vanishing on the chosen jet: (y')^2 forces y'(0) = 0.
        let p = xp(1, 1).pow(2);
        assert!(matches!(
            extend_solution(&p, &QP::one(), 1, &BTreeMap::new(), 2),
            Err(Error::SeparantVanished)
        ));

        // Guard killed by the inputs.
        let p = xp(2, 1).sub_ref(&xp(1, 0));
        let inputs = BTreeMap::from([(1u32, qs(&[(0, 1), (0, 1)]))]);
        assert!(matches!(
            extend_solution(&p, &xp(1, 0), 2, &inputs, 2),
            Err(Error::GuardUnsatisfiable)
        ));

        // Guard order must stay below the defining order.
        assert!(matches!(
            extend_solution(&p, &xp(2, 1), 2, &inputs, 2),
            Err(Error::PreconditionOrder { .. })
        ));
    }

    #[test]
    fn extension_reports_constant_residual() {
        // x*y' + (x'+1)*y - 1 with x = -t degenerates: the univariate step
        // collapses to the nonzero constant -1.
        let p = xp(1, 0)
            .mul_ref(&xp(2, 1))
            .add_ref(&xp(1, 1).add_ref(&QP::one()).mul_ref(&xp(2, 0)))
            .sub_ref(&QP::one());
        let inputs = BTreeMap::from([(1u32, qs(&[(0, 1), (-1, 1), (0, 1)]))]);
        let err = extend_solution(&p, &QP::one(), 2, &inputs, 2);
        match err {
            Err(Error::OrderZeroResidual { residual }) => assert_eq!(residual, "-1"),
            other => panic!("expected OrderZeroResidual, got {other:?}"),
        }
    }

    #[test]
    fn guard_sweep_prefers_small_values() {
        // Guard (y - 1)*y' against y'' = y. Variables are swept ascending:
        // y(0) = 0 already keeps the factor y - 1 nonzero, then y'(0) = 0
        // would kill the second factor, so the sweep moves on to y'(0) = 1.
        let p = xp(1, 2).sub_ref(&xp(1, 0)); // y'' = y, h = 2
        let guard = xp(1, 0).sub_ref(&QP::one()).mul_ref(&xp(1, 1));
        let report = extend_solution(&p, &guard, 1, &BTreeMap::new(), 4).unwrap();
        // y(0) = 0 keeps y - 1 nonzero; y'(0) = 0 kills the guard, so 1 is
        // chosen next.
        assert_eq!(report.initial[0], q(0, 1));
        assert_eq!(report.initial[1], q(1, 1));
        assert_eq!(report.guard_value, q(-1, 1));
        // sinh(t): 0, 1, 0, 1/6 with the top value solved from y'' = y.
        assert_eq!(
            report.solution,
            qs(&[(0, 1), (1, 1), (0, 1), (1, 6), (0, 1)])
        );
        assert!(report.residual_is_zero());
    }
}
