//! Coordinate changes on the differential polynomial ring.
//!
//! An [`Automorphism`] stores the images of every indeterminate under a
//! differential ring automorphism together with the images under its inverse,
//! validated by round-tripping at construction time. Two concrete families
//! are built here:
//!
//! * [`make_high_order`] swaps the first and distinguished indeterminates
//!   while adding a high derivative, which raises the order of the defining
//!   polynomial in the distinguished indeterminate strictly above that of the
//!   guard;
//! * [`make_manageable`] shifts the other indeterminates by polynomials in
//!   the distinguished one until the guard acquires a term whose coefficient
//!   is a nonzero base-field constant (a "manageable" guard survives any
//!   specialization of the other indeterminates).
//!
//! [`find_poly_shift`] solves the related search problem of choosing
//! univariate polynomials `s_i(t)` with `g(s_1, ..., s_n) ≠ 0` in `k(t)`; a
//! seeded random phase is followed by a deterministic grid sweep that always
//! terminates because a nonzero polynomial of degree `D` in a variable cannot
//! vanish at `D + 1` distinct values of it.

use std::collections::BTreeMap;

use num::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{DerivTable, DerivVar, DiffPoly, Monomial};
use crate::scalar::{factorial, DiffField, RatT, TPoly};

// ---------------------------------------------------------------------------
// Automorphisms.
// ---------------------------------------------------------------------------

/// Differential ring automorphism of `k{x_1, ..., x_n}`, stored as the images
/// of the indeterminates under the map and under its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism<K> {
    n: u32,
    forward: BTreeMap<u32, DiffPoly<K>>,
    inverse: BTreeMap<u32, DiffPoly<K>>,
    tag: String,
}

impl<K: DiffField> Automorphism<K> {
    /// Build and validate: both maps must assign exactly `x_1..x_n`, images
    /// must stay inside those indeterminates, and substituting one map into
    /// the other must give the identity in both orders.
    pub fn new(
        n: u32,
        forward: BTreeMap<u32, DiffPoly<K>>,
        inverse: BTreeMap<u32, DiffPoly<K>>,
        tag: impl Into<String>,
    ) -> Result<Self> {
        let check_keys = |map: &BTreeMap<u32, DiffPoly<K>>, side: &str| -> Result<()> {
            if map.len() as u32 != n || map.keys().any(|&j| j < 1 || j > n) {
                return Err(Error::InvalidAutomorphism {
                    msg: format!("{side} map must assign exactly x_1..x_{n}"),
                });
            }
            if map.values().any(|p| p.max_indet() > n) {
                return Err(Error::InvalidAutomorphism {
                    msg: format!("{side} image uses an indeterminate beyond x_{n}"),
                });
            }
            Ok(())
        };
        check_keys(&forward, "forward")?;
        check_keys(&inverse, "inverse")?;
        for j in 1..=n {
            let var = DiffPoly::var(DerivVar::new(j, 0));
            if forward[&j].substitute(&inverse)? != var {
                return Err(Error::InvalidAutomorphism {
                    msg: format!("inverse does not undo the image of x_{j}"),
                });
            }
            if inverse[&j].substitute(&forward)? != var {
                return Err(Error::InvalidAutomorphism {
                    msg: format!("forward does not undo the inverse image of x_{j}"),
                });
            }
        }
        Ok(Automorphism {
            n,
            forward,
            inverse,
            tag: tag.into(),
        })
    }

    pub fn identity(n: u32) -> Self {
        let map: BTreeMap<u32, DiffPoly<K>> = (1..=n)
            .map(|j| (j, DiffPoly::var(DerivVar::new(j, 0))))
            .collect();
        Automorphism {
            n,
            forward: map.clone(),
            inverse: map,
            tag: "identity".into(),
        }
    }

    pub fn is_identity(&self) -> bool {
        (1..=self.n).all(|j| self.forward[&j] == DiffPoly::var(DerivVar::new(j, 0)))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn forward_map(&self) -> &BTreeMap<u32, DiffPoly<K>> {
        &self.forward
    }

    pub fn inverse_map(&self) -> &BTreeMap<u32, DiffPoly<K>> {
        &self.inverse
    }

    /// Image of a polynomial under the automorphism.
    pub fn apply(&self, p: &DiffPoly<K>) -> Result<DiffPoly<K>> {
        p.substitute(&self.forward)
    }

    /// Image under the inverse automorphism.
    pub fn apply_inverse(&self, p: &DiffPoly<K>) -> Result<DiffPoly<K>> {
        p.substitute(&self.inverse)
    }

    /// The inverse automorphism, obtained by swapping the two maps.
    pub fn invert(&self) -> Automorphism<K> {
        let tag = if self.tag == "identity" {
            self.tag.clone()
        } else {
            format!("inverse({})", self.tag)
        };
        Automorphism {
            n: self.n,
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
            tag,
        }
    }

    /// The composite "apply `self`, then apply `next`".
    pub fn then(&self, next: &Automorphism<K>) -> Result<Automorphism<K>> {
        if self.n != next.n {
            return Err(Error::InvalidAutomorphism {
                msg: format!("cannot compose sizes {} and {}", self.n, next.n),
            });
        }
        let mut forward = BTreeMap::new();
        let mut inverse = BTreeMap::new();
        for j in 1..=self.n {
            forward.insert(j, self.forward[&j].substitute(&next.forward)?);
            inverse.insert(j, next.inverse[&j].substitute(&self.inverse)?);
        }
        let tag = if self.tag == "identity" {
            next.tag.clone()
        } else if next.tag == "identity" {
            self.tag.clone()
        } else {
            format!("{}; {}", self.tag, next.tag)
        };
        Automorphism::new(self.n, forward, inverse, tag)
    }

    /// Extend to `m ≥ n` indeterminates, acting as the identity on the new
    /// ones.
    pub fn extend_identity(&self, m: u32) -> Result<Automorphism<K>> {
        if m < self.n {
            return Err(Error::InvalidAutomorphism {
                msg: format!("cannot shrink from {} to {m} indeterminates", self.n),
            });
        }
        let mut forward = self.forward.clone();
        let mut inverse = self.inverse.clone();
        for j in self.n + 1..=m {
            let var = DiffPoly::var(DerivVar::new(j, 0));
            forward.insert(j, var.clone());
            inverse.insert(j, var);
        }
        Ok(Automorphism {
            n: m,
            forward,
            inverse,
            tag: self.tag.clone(),
        })
    }
}

// ---------------------------------------------------------------------------
// Raising the order of the distinguished indeterminate.
// ---------------------------------------------------------------------------

/// Coordinate change that makes the defining polynomial's order in the
/// distinguished indeterminate `x_{d+1}` strictly exceed the guard's.
///
/// With `N = max(total order of p, total order of s) + 1` the map is
///
/// ```text
/// x_1 ↦ x_{d+1},    x_{d+1} ↦ x_1 + x_{d+1}^(N),    x_j ↦ x_j otherwise,
/// ```
///
/// whose inverse sends `x_1 ↦ x_{d+1} - x_1^(N)` and `x_{d+1} ↦ x_1`. Every
/// occurrence of an `x_{d+1}`-derivative in `p` then lands at order at least
/// `N`, past anything the images of `p` and `s` pick up elsewhere.
pub fn make_high_order<K: DiffField>(
    p: &DiffPoly<K>,
    s: &DiffPoly<K>,
    d: u32,
) -> Result<Automorphism<K>> {
    if d == 0 {
        return Err(Error::PreconditionOrder {
            msg: "order raise needs at least one parametric indeterminate".into(),
        });
    }
    let n = d + 1;
    let big_n = p
        .total_order()
        .unwrap_or(0)
        .max(s.total_order().unwrap_or(0))
        + 1;

    let mut forward: BTreeMap<u32, DiffPoly<K>> = (1..=n)
        .map(|j| (j, DiffPoly::var(DerivVar::new(j, 0))))
        .collect();
    let mut inverse = forward.clone();
    forward.insert(1, DiffPoly::var(DerivVar::new(n, 0)));
    forward.insert(
        n,
        DiffPoly::var(DerivVar::new(1, 0)).add_ref(&DiffPoly::var(DerivVar::new(n, big_n))),
    );
    inverse.insert(
        1,
        DiffPoly::var(DerivVar::new(n, 0)).sub_ref(&DiffPoly::var(DerivVar::new(1, big_n))),
    );
    inverse.insert(n, DiffPoly::var(DerivVar::new(1, 0)));

    Automorphism::new(n, forward, inverse, format!("raise-order({big_n})"))
}

// ---------------------------------------------------------------------------
// Manageability.
// ---------------------------------------------------------------------------

/// A monomial in the derivatives of `x_i` whose coefficient in `q` is a
/// nonzero base-field constant, if one exists.
///
/// Grouping the terms of `q` by their `x_i`-part, the group's coefficient is
/// constant exactly when no term with that `x_i`-part touches another
/// indeterminate. Such a term survives every specialization of the other
/// indeterminates, which is what downstream solution extension needs.
pub fn manageable_witness<K: DiffField>(q: &DiffPoly<K>, i: u32) -> Option<Monomial> {
    let mut pure: Vec<Monomial> = Vec::new();
    let mut mixed: Vec<Monomial> = Vec::new();
    for (m, _) in q.terms() {
        let (part_i, rest) = m.split(i);
        if rest.is_one() {
            pure.push(part_i);
        } else {
            mixed.push(part_i);
        }
    }
    pure.sort();
    pure.into_iter().find(|m| !mixed.contains(m))
}

/// Whether `q` has a term purely in `x_i`-derivatives with constant
/// coefficient.
pub fn is_manageable<K: DiffField>(q: &DiffPoly<K>, i: u32) -> bool {
    manageable_witness(q, i).is_some()
}

/// Search parameters for [`make_manageable`].
#[derive(Clone, Debug)]
pub struct ManageableParams {
    pub seed: u64,
    /// Highest derivative order of `x_i` used in candidate shifts.
    pub max_order: u32,
    /// Highest degree of random candidate shift polynomials.
    pub max_degree: u32,
    pub max_trials: u64,
}

impl Default for ManageableParams {
    fn default() -> Self {
        ManageableParams {
            seed: 0,
            max_order: 4,
            max_degree: 3,
            max_trials: 4096,
        }
    }
}

/// Result of the manageability search.
#[derive(Clone, Debug)]
pub struct ManageableOutcome<K> {
    /// The shift `x_j ↦ x_j + p_j(x_i)` (identity when `q` already qualified).
    pub shift: Automorphism<K>,
    /// `shift` applied to `q`.
    pub transformed: DiffPoly<K>,
    /// Witness monomial with constant coefficient in `transformed`.
    pub witness: Monomial,
    /// Number of candidates tried before success.
    pub trials: u64,
}

/// Find a shift of the non-distinguished indeterminates by differential
/// polynomials in `x_i` that makes `q` manageable with respect to `x_i`.
///
/// Deterministic low-complexity candidates (single monomials `c·x_i^(e)`,
/// applied to one or to all other indeterminates) are tried first, then
/// seeded random candidates up to the trial budget.
pub fn make_manageable<K: DiffField>(
    q: &DiffPoly<K>,
    n: u32,
    i: u32,
    params: &ManageableParams,
) -> Result<ManageableOutcome<K>> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if let Some(witness) = manageable_witness(q, i) {
        return Ok(ManageableOutcome {
            shift: Automorphism::identity(n),
            transformed: q.clone(),
            witness,
            trials: 0,
        });
    }

    let targets: Vec<u32> = (1..=n).filter(|&j| j != i).collect();
    let mut trials = 0u64;
    let try_candidate = |shifts: &BTreeMap<u32, DiffPoly<K>>,
                             trials: &mut u64|
     -> Result<Option<ManageableOutcome<K>>> {
        *trials += 1;
        let shift = shift_automorphism(n, i, shifts)?;
        let transformed = shift.apply(q)?;
        if let Some(witness) = manageable_witness(&transformed, i) {
            return Ok(Some(ManageableOutcome {
                shift,
                transformed,
                witness,
                trials: *trials,
            }));
        }
        Ok(None)
    };

    // Deterministic phase: single monomial shifts with small coefficients.
    for e in 0..=params.max_order {
        for c in [1i64, -1, 2, -2] {
            let base = DiffPoly::var(DerivVar::new(i, e)).scale(&K::from_int(c));
            for &j in &targets {
                if trials >= params.max_trials {
                    return Err(Error::ExhaustedTrials { trials });
                }
                let shifts = BTreeMap::from([(j, base.clone())]);
                if let Some(out) = try_candidate(&shifts, &mut trials)? {
                    return Ok(out);
                }
            }
            if trials >= params.max_trials {
                return Err(Error::ExhaustedTrials { trials });
            }
            let shifts: BTreeMap<u32, DiffPoly<K>> =
                targets.iter().map(|&j| (j, base.clone())).collect();
            if let Some(out) = try_candidate(&shifts, &mut trials)? {
                return Ok(out);
            }
        }
    }

    // Random phase: independent small polynomials in the derivatives of x_i.
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    while trials < params.max_trials {
        let mut shifts = BTreeMap::new();
        for &j in &targets {
            if targets.len() > 1 && rng.gen_bool(0.5) {
                continue;
            }
            shifts.insert(j, random_shift_poly::<K>(&mut rng, i, params));
        }
        if shifts.is_empty() {
            shifts.insert(
                targets[0],
                random_shift_poly::<K>(&mut rng, i, params),
            );
        }
        if let Some(out) = try_candidate(&shifts, &mut trials)? {
            return Ok(out);
        }
    }
    Err(Error::ExhaustedTrials { trials })
}

fn random_shift_poly<K: DiffField>(
    rng: &mut ChaCha8Rng,
    i: u32,
    params: &ManageableParams,
) -> DiffPoly<K> {
    let terms = rng.gen_range(1..=2);
    let mut p = DiffPoly::zero();
    for _ in 0..terms {
        let e = rng.gen_range(0..=params.max_order);
        let g = rng.gen_range(1..=params.max_degree.max(1));
        let mut c = 0i64;
        while c == 0 {
            c = rng.gen_range(-5..=5);
        }
        let mon = Monomial::var_pow(DerivVar::new(i, e), g);
        p = p.add_ref(&DiffPoly::monomial(mon, K::from_int(c)));
    }
    if p.is_zero() {
        p = DiffPoly::var(DerivVar::new(i, 0));
    }
    p
}

/// The automorphism `x_j ↦ x_j + p_j(x_i)` for `j ≠ i`, identity on `x_i`.
/// Exactness of the inverse `x_j ↦ x_j - p_j(x_i)` relies on every `p_j`
/// involving only `x_i`, which is checked.
fn shift_automorphism<K: DiffField>(
    n: u32,
    i: u32,
    shifts: &BTreeMap<u32, DiffPoly<K>>,
) -> Result<Automorphism<K>> {
    let mut forward: BTreeMap<u32, DiffPoly<K>> = (1..=n)
        .map(|j| (j, DiffPoly::var(DerivVar::new(j, 0))))
        .collect();
    let mut inverse = forward.clone();
    for (&j, p) in shifts {
        if j == i || p.indets().iter().any(|&k| k != i) {
            return Err(Error::InvalidAutomorphism {
                msg: format!("shift of x_{j} must be a polynomial in x_{i} only"),
            });
        }
        let var = DiffPoly::var(DerivVar::new(j, 0));
        forward.insert(j, var.add_ref(p));
        inverse.insert(j, var.sub_ref(p));
    }
    Automorphism::new(n, forward, inverse, "shift")
}

// ---------------------------------------------------------------------------
// Polynomial shifts avoiding a hypersurface.
// ---------------------------------------------------------------------------

/// Search parameters for [`find_poly_shift`].
#[derive(Clone, Debug)]
pub struct ShiftSearchParams {
    pub seed: u64,
    /// Degree of the random candidate polynomials `s_i(t)`.
    pub degree: u32,
    pub max_trials: u64,
}

impl Default for ShiftSearchParams {
    fn default() -> Self {
        ShiftSearchParams {
            seed: 0,
            degree: 3,
            max_trials: 64,
        }
    }
}

/// Choose univariate polynomials `s_i(t)`, one per indeterminate occurring in
/// the nonzero polynomial `g`, with `g(s_1, ..., s_n) ≠ 0` in `k(t)`.
///
/// Random candidates with small integer coefficients are tried first. If the
/// budget runs out, a deterministic sweep assigns integer values to the
/// derivative variables of `g` one at a time; since a polynomial of degree
/// `D` in a variable cannot vanish at `D+1` distinct values, the sweep always
/// reaches a nonzero constant, and the Taylor polynomials matching the
/// assigned jet at `t = 0` are returned. The fallback therefore cannot fail.
pub fn find_poly_shift(
    g: &DiffPoly<BigRational>,
    params: &ShiftSearchParams,
) -> Result<BTreeMap<u32, TPoly>> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let indets: Vec<u32> = g.indets().into_iter().collect();

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.max_trials {
        let cand: BTreeMap<u32, TPoly> = indets
            .iter()
            .map(|&i| {
                let coeffs: Vec<BigRational> = (0..=params.degree)
                    .map(|_| BigRational::from_integer(rng.gen_range(-9i64..=9).into()))
                    .collect();
                (i, TPoly::new(coeffs))
            })
            .collect();
        if !eval_poly_shift(g, &cand)?.is_zero() {
            return Ok(cand);
        }
    }

    // Deterministic grid sweep.
    let mut remaining = g.clone();
    let mut assign: BTreeMap<DerivVar, BigRational> = BTreeMap::new();
    while let Some(&v) = remaining.variables().iter().next() {
        let deg = remaining.degree_in(v);
        let mut found = false;
        for val in 0..=i64::from(deg) {
            let value = BigRational::from_integer(val.into());
            let spec = remaining.eval_var(v, &value);
            if !spec.is_zero() {
                assign.insert(v, value);
                remaining = spec;
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::internal("grid sweep stalled on a nonzero polynomial"));
        }
    }
    let mut out = BTreeMap::new();
    for &i in &indets {
        let order = g.order_wrt(i).expect("indeterminate occurs");
        let coeffs: Vec<BigRational> = (0..=order)
            .map(|m| {
                assign
                    .get(&DerivVar::new(i, m))
                    .cloned()
                    .unwrap_or_else(BigRational::zero)
                    / factorial::<BigRational>(m)
            })
            .collect();
        out.insert(i, TPoly::new(coeffs));
    }
    Ok(out)
}

/// Evaluate `g` at `x_i^(m) := s_i^(m)(t)`, producing an element of `k(t)`.
pub fn eval_poly_shift(
    g: &DiffPoly<BigRational>,
    shifts: &BTreeMap<u32, TPoly>,
) -> Result<RatT> {
    let gt = g.map_coeffs(RatT::from_rational);
    let mut table = DerivTable::new();
    for i in g.indets() {
        let order = g.order_wrt(i).expect("indeterminate occurs");
        let mut cur = shifts.get(&i).cloned().unwrap_or_else(TPoly::zero);
        let mut col = Vec::with_capacity(order as usize + 1);
        for _ in 0..=order {
            col.push(RatT::from_tpoly(cur.clone()));
            cur = cur.derivative();
        }
        table.set_column(i, col);
    }
    gt.evaluate(&table)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;
    type QP = DiffPoly<Q>;

    fn xp(i: u32, j: u32) -> QP {
        QP::var(DerivVar::new(i, j))
    }

    /// P = x1*x2' + (x1' + 1)*x2 - 1.
    fn linear_pair_poly() -> QP {
        xp(1, 0)
            .mul_ref(&xp(2, 1))
            .add_ref(&xp(1, 1).add_ref(&QP::one()).mul_ref(&xp(2, 0)))
            .sub_ref(&QP::one())
    }

    #[test]
    fn automorphism_validates_round_trip() {
        let n = 2;
        let fwd = BTreeMap::from([(1, xp(2, 0)), (2, xp(1, 0).add_ref(&xp(2, 2)))]);
        let inv = BTreeMap::from([(1, xp(2, 0).sub_ref(&xp(1, 2))), (2, xp(1, 0))]);
        let f = Automorphism::new(n, fwd.clone(), inv, "swap").unwrap();
        let p = linear_pair_poly();
        let image = f.apply(&p).unwrap();
        assert_eq!(f.apply_inverse(&image).unwrap(), p);

        // A broken inverse is rejected.
        let bad_inv = BTreeMap::from([(1, xp(2, 0)), (2, xp(1, 0))]);
        assert!(matches!(
            Automorphism::new(n, fwd, bad_inv, "bad"),
            Err(Error::InvalidAutomorphism { .. })
        ));
    }

    #[test]
    fn composition_matches_sequential_application() {
        let f = make_high_order(&linear_pair_poly(), &xp(1, 0).pow(2), 1).unwrap();
        let shifts = BTreeMap::from([(1u32, xp(2, 1))]);
        let g = shift_automorphism(2, 2, &shifts).unwrap();
        let fg = f.then(&g).unwrap();
        let p = linear_pair_poly();
        let sequential = g.apply(&f.apply(&p).unwrap()).unwrap();
        assert_eq!(fg.apply(&p).unwrap(), sequential);
        assert_eq!(fg.apply_inverse(&sequential).unwrap(), p);
    }

    #[test]
    fn invert_composes_to_identity() {
        let f = make_high_order(&linear_pair_poly(), &xp(1, 0).pow(2), 1).unwrap();
        let back = f.invert();
        assert!(f.then(&back).unwrap().is_identity());
        assert!(back.then(&f).unwrap().is_identity());
        let p = linear_pair_poly();
        assert_eq!(back.apply(&p).unwrap(), f.apply_inverse(&p).unwrap());
        assert!(Automorphism::<Q>::identity(3).invert().is_identity());
    }

    #[test]
    fn extend_identity_preserves_action() {
        let f = make_high_order(&linear_pair_poly(), &xp(1, 0).pow(2), 1).unwrap();
        let g = f.extend_identity(4).unwrap();
        assert_eq!(g.n(), 4);
        let p = linear_pair_poly().mul_ref(&xp(4, 1));
        let image = g.apply(&p).unwrap();
        assert_eq!(g.apply_inverse(&image).unwrap(), p);
        assert_eq!(g.forward_map()[&4], xp(4, 0));
    }

    #[test]
    fn high_order_spec_trace() {
        // P = x1*x2' + (x1'+1)*x2 - 1 (total order 1), S = x1^2 (order 0):
        // N = 2, and the image is
        // x2*x1' + x2*x2''' + x1*x2' + x2'*x2'' + x1 + x2'' - 1.
        let p = linear_pair_poly();
        let s = xp(1, 0).pow(2);
        let f = make_high_order(&p, &s, 1).unwrap();
        assert_eq!(f.forward_map()[&1], xp(2, 0));
        assert_eq!(f.forward_map()[&2], xp(1, 0).add_ref(&xp(2, 2)));

        let image = f.apply(&p).unwrap();
        let expect = xp(2, 0)
            .mul_ref(&xp(1, 1))
            .add_ref(&xp(2, 0).mul_ref(&xp(2, 3)))
            .add_ref(&xp(1, 0).mul_ref(&xp(2, 1)))
            .add_ref(&xp(2, 1).mul_ref(&xp(2, 2)))
            .add_ref(&xp(1, 0))
            .add_ref(&xp(2, 2))
            .sub_ref(&QP::one());
        assert_eq!(image, expect);

        // Order separation: defining image order 3 in x2, guard image order 0.
        assert_eq!(image.order_wrt(2), Some(3));
        assert_eq!(f.apply(&s).unwrap(), xp(2, 0).pow(2));
        assert_eq!(f.apply_inverse(&image).unwrap(), p);
    }

    #[test]
    fn high_order_raises_past_the_guard() {
        // Low-order pair: N = 1.
        let p = xp(2, 0).pow(2).sub_ref(&xp(1, 0));
        let s = xp(1, 0);
        let f = make_high_order(&p, &s, 1).unwrap();
        let ip = f.apply(&p).unwrap();
        let is = f.apply(&s).unwrap();
        assert_eq!(ip, xp(1, 0).add_ref(&xp(2, 1)).pow(2).sub_ref(&xp(2, 0)));
        assert!(ip.order_wrt(2) > is.order_wrt(2));

        // Higher-order pair: N = 3.
        let p = xp(2, 2).sub_ref(&xp(1, 0));
        let s = xp(1, 1);
        let f = make_high_order(&p, &s, 1).unwrap();
        let ip = f.apply(&p).unwrap();
        assert_eq!(ip, xp(1, 2).add_ref(&xp(2, 5)).sub_ref(&xp(2, 0)));
        assert!(ip.order_wrt(2) > f.apply(&s).unwrap().order_wrt(2));

        assert!(matches!(
            make_high_order(&p, &s, 0),
            Err(Error::PreconditionOrder { .. })
        ));
    }

    #[test]
    fn manageability_witnesses() {
        // Constant term means manageable with the empty witness.
        assert_eq!(
            manageable_witness(&linear_pair_poly(), 2),
            Some(Monomial::one())
        );
        // Pure power of the distinguished indeterminate.
        assert_eq!(
            manageable_witness(&xp(2, 0).pow(4), 2),
            Some(Monomial::var_pow(DerivVar::new(2, 0), 4))
        );
        // (x1*x2)' has no group with constant coefficient.
        let d = xp(1, 0).mul_ref(&xp(2, 0)).derive();
        assert!(!is_manageable(&d, 2));
        assert!(!is_manageable(&xp(1, 0).mul_ref(&xp(2, 0)), 2));
        assert!(!is_manageable(&xp(1, 0).mul_ref(&xp(2, 0)), 1));
    }

    #[test]
    fn make_manageable_identity_when_already_good() {
        let q_poly = xp(2, 0).pow(4);
        let out = make_manageable(&q_poly, 2, 2, &ManageableParams::default()).unwrap();
        assert!(out.shift.is_identity());
        assert_eq!(out.transformed, q_poly);
        assert_eq!(out.trials, 0);
    }

    #[test]
    fn make_manageable_finds_deterministic_shift() {
        // (x1*x2)' = x1*x2' + x1'*x2 is not manageable; shifting x1 by x2
        // already fixes it: the image gains 2*x2*x2'.
        let q_poly = xp(1, 0).mul_ref(&xp(2, 0)).derive();
        let out = make_manageable(&q_poly, 2, 2, &ManageableParams::default()).unwrap();
        assert_eq!(out.shift.forward_map()[&1], xp(1, 0).add_ref(&xp(2, 0)));
        assert!(is_manageable(&out.transformed, 2));
        assert_eq!(out.transformed, out.shift.apply(&q_poly).unwrap());
        assert_eq!(
            out.shift.apply_inverse(&out.transformed).unwrap(),
            q_poly
        );

        // Determinism: the same parameters give the same outcome.
        let again = make_manageable(&q_poly, 2, 2, &ManageableParams::default()).unwrap();
        assert_eq!(again.shift, out.shift);
        assert_eq!(again.trials, out.trials);
    }

    #[test]
    fn make_manageable_reports_exhaustion() {
        let q_poly = xp(1, 0).mul_ref(&xp(2, 0));
        let params = ManageableParams {
            max_trials: 0,
            ..ManageableParams::default()
        };
        assert!(matches!(
            make_manageable(&q_poly, 2, 2, &params),
            Err(Error::ExhaustedTrials { trials: 0 })
        ));
        assert!(matches!(
            make_manageable(&QP::zero(), 2, 2, &ManageableParams::default()),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn poly_shift_avoids_hypersurface() {
        let g = xp(1, 1).mul_ref(&xp(2, 0)).sub_ref(&QP::one());
        let shifts = find_poly_shift(&g, &ShiftSearchParams::default()).unwrap();
        assert!(!eval_poly_shift(&g, &shifts).unwrap().is_zero());

        // Determinism.
        let again = find_poly_shift(&g, &ShiftSearchParams::default()).unwrap();
        assert_eq!(again, shifts);

        assert!(matches!(
            find_poly_shift(&QP::zero(), &ShiftSearchParams::default()),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn poly_shift_grid_fallback() {
        // Degree-0 random candidates cannot satisfy g = x1', so the sweep
        // must kick in and produce s1 = t.
        let g = xp(1, 1);
        let params = ShiftSearchParams {
            seed: 0,
            degree: 0,
            max_trials: 5,
        };
        let shifts = find_poly_shift(&g, &params).unwrap();
        assert_eq!(shifts[&1], TPoly::t());
        assert!(!eval_poly_shift(&g, &shifts).unwrap().is_zero());
    }

    #[test]
    fn shift_validation_rejects_bad_targets() {
        // Shift polynomial touching an indeterminate other than x_i.
        let shifts = BTreeMap::from([(1u32, xp(1, 0))]);
        assert!(matches!(
            shift_automorphism(2, 2, &shifts),
            Err(Error::InvalidAutomorphism { .. })
        ));
        let shifts = BTreeMap::from([(2u32, xp(2, 0))]);
        assert!(matches!(
            shift_automorphism(2, 2, &shifts),
            Err(Error::InvalidAutomorphism { .. })
        ));
    }
}
