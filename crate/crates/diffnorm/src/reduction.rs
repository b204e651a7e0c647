//! Reduction machinery: partial (Ritt) reduction with certificates,
//! resultants with Bezout cofactors, saturation-ideal membership, and the
//! guard construction that folds an inequation and the separant into a single
//! polynomial of lower order.
//!
//! All routines return certificate objects that can be re-verified by plain
//! polynomial arithmetic, so every nontrivial identity the pipeline relies on
//! can be checked after the fact.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::{DerivVar, DiffPoly, Monomial};
use crate::scalar::DiffField;

fn var_label(v: DerivVar) -> String {
    format!("#{}^({})", v.indet, v.order)
}

// ---------------------------------------------------------------------------
// Partial reduction.
// ---------------------------------------------------------------------------

/// Certificate produced by [`partial_reduce`]:
///
/// ```text
/// S^N · Q  =  Σ_j C_j · P^(j)  +  remainder
/// ```
///
/// where `S` is the separant of `P` with respect to `indet`, `N = s_power`,
/// the sum runs over the keys of `multipliers`, and the remainder has order
/// at most `order` (the order of `P`) in `indet`. The power `N` counts only
/// genuine multiplications: when the separant is the constant 1 no factor is
/// ever introduced and `N` stays 0.
#[derive(Clone, Debug)]
pub struct ReductionCertificate<K> {
    /// Distinguished indeterminate the reduction eliminated high derivatives of.
    pub indet: u32,
    /// Order of the modulus `P` in that indeterminate.
    pub order: u32,
    /// Separant of `P`.
    pub separant: DiffPoly<K>,
    /// Exponent `N` on the separant.
    pub s_power: u32,
    /// Coefficient of `P^(j)` keyed by `j`.
    pub multipliers: BTreeMap<u32, DiffPoly<K>>,
    /// Partially reduced polynomial.
    pub remainder: DiffPoly<K>,
}

impl<K: DiffField> ReductionCertificate<K> {
    /// Re-check the certificate identity and the order bound on the remainder
    /// by direct arithmetic.
    pub fn verify(&self, q: &DiffPoly<K>, p: &DiffPoly<K>) -> bool {
        let lhs = self.separant.pow(self.s_power).mul_ref(q);
        let mut rhs = self.remainder.clone();
        for (j, c) in &self.multipliers {
            rhs = rhs.add_ref(&c.mul_ref(&p.derive_n(*j)));
        }
        let order_ok = self
            .remainder
            .order_wrt(self.indet)
            .map_or(true, |o| o <= self.order);
        lhs == rhs && order_ok
    }
}

/// Ritt partial reduction of `q` modulo `p` with respect to indeterminate `i`.
///
/// Brings the order of `q` in `x_i` down to at most the order `h` of `p` by
/// repeatedly cancelling the highest derivative against a derivative of `p`
/// (each `p^(k)` with `k ≥ 1` is linear in `x_i^(h+k)` with the separant as
/// its coefficient). Fails with [`Error::UndefinedSeparant`] when `p` does not
/// involve `x_i`.
pub fn partial_reduce<K: DiffField>(
    q: &DiffPoly<K>,
    p: &DiffPoly<K>,
    i: u32,
) -> Result<ReductionCertificate<K>> {
    let si = p.separant_initial(i)?;
    let h = si.order;
    let s = si.separant;
    let s_is_one = s.is_one();

    let mut rem = q.clone();
    let mut s_power = 0u32;
    let mut multipliers: BTreeMap<u32, DiffPoly<K>> = BTreeMap::new();
    let mut derivs: Vec<DiffPoly<K>> = vec![p.clone()];

    while let Some(cur) = rem.order_wrt(i) {
        if cur <= h {
            break;
        }
        let u = DerivVar::new(i, cur);
        let deg = rem.degree_in(u);
        let top = rem.coeffs_in_var(u).pop().expect("degree entry exists");
        let k = cur - h;
        while derivs.len() <= k as usize {
            let next = derivs.last().unwrap().derive();
            derivs.push(next);
        }
        if !s_is_one {
            rem = s.mul_ref(&rem);
            for c in multipliers.values_mut() {
                *c = c.mul_ref(&s);
            }
            s_power += 1;
        }
        let factor = top.mul_monomial(&Monomial::var_pow(u, deg - 1));
        rem = rem.sub_ref(&factor.mul_ref(&derivs[k as usize]));
        let slot = multipliers.entry(k).or_insert_with(DiffPoly::zero);
        *slot = slot.add_ref(&factor);
    }
    multipliers.retain(|_, c| !c.is_zero());

    Ok(ReductionCertificate {
        indet: i,
        order: h,
        separant: s,
        s_power,
        multipliers,
        remainder: rem,
    })
}

// ---------------------------------------------------------------------------
// Resultants with cofactors.
// ---------------------------------------------------------------------------

/// Resultant of two polynomials in one derivative variable, together with
/// cofactors witnessing `resultant = a·p + b·g`.
///
/// The resultant is free of `v`, `a` has degree below `deg_v g`, and `b`
/// degree below `deg_v p`.
#[derive(Clone, Debug)]
pub struct ResultantCertificate<K> {
    pub v: DerivVar,
    pub resultant: DiffPoly<K>,
    pub a: DiffPoly<K>,
    pub b: DiffPoly<K>,
}

impl<K: DiffField> ResultantCertificate<K> {
    /// Re-check the Bezout identity and that the resultant is free of `v`.
    pub fn verify(&self, p: &DiffPoly<K>, g: &DiffPoly<K>) -> bool {
        let combo = self.a.mul_ref(p).add_ref(&self.b.mul_ref(g));
        combo == self.resultant && self.resultant.degree_in(self.v) == 0
    }
}

/// Resultant of `p` and `g` with respect to the derivative variable `v`,
/// via the Sylvester matrix (rows of `p`-shifts first, then `g`-shifts) and
/// fraction-free elimination. Cofactors come from expanding the matrix with
/// its last column replaced by the shifted polynomials themselves.
///
/// Degenerate shapes: if either input is zero everything is zero; if both are
/// constant in `v` the resultant is undefined ([`Error::BothConstantInV`]);
/// if exactly one is constant in `v` the classical power formula applies.
pub fn resultant_with_cofactors<K: DiffField>(
    p: &DiffPoly<K>,
    g: &DiffPoly<K>,
    v: DerivVar,
) -> Result<ResultantCertificate<K>> {
    if p.is_zero() || g.is_zero() {
        return Ok(ResultantCertificate {
            v,
            resultant: DiffPoly::zero(),
            a: DiffPoly::zero(),
            b: DiffPoly::zero(),
        });
    }
    let pc = p.coeffs_in_var(v);
    let gc = g.coeffs_in_var(v);
    let m = pc.len() - 1;
    let n = gc.len() - 1;

    if m == 0 && n == 0 {
        return Err(Error::BothConstantInV { var: var_label(v) });
    }
    if n == 0 {
        // res(p, g) = g^m with the trivial combination g^m = 0·p + g^(m-1)·g.
        return Ok(ResultantCertificate {
            v,
            resultant: g.pow(m as u32),
            a: DiffPoly::zero(),
            b: g.pow(m as u32 - 1),
        });
    }
    if m == 0 {
        return Ok(ResultantCertificate {
            v,
            resultant: p.pow(n as u32),
            a: p.pow(n as u32 - 1),
            b: DiffPoly::zero(),
        });
    }

    let size = m + n;
    let mut mat = vec![vec![DiffPoly::<K>::zero(); size]; size];
    for r in 0..n {
        for k in 0..=m {
            mat[r][r + k] = pc[m - k].clone();
        }
    }
    for i in 0..m {
        for k in 0..=n {
            mat[n + i][i + k] = gc[n - k].clone();
        }
    }

    let resultant = bareiss_det(mat.clone())?;

    // Expanding along the last column after replacing it by the column of
    // shifted inputs (v^(n-1-r)·p for the p-rows, v^(m-1-i)·g for the g-rows)
    // recovers the resultant as a·p + b·g.
    let last = size - 1;
    let mut a = DiffPoly::zero();
    let mut b = DiffPoly::zero();
    for r in 0..size {
        let mut minor = Vec::with_capacity(size - 1);
        for (ri, row) in mat.iter().enumerate() {
            if ri != r {
                minor.push(row[..last].to_vec());
            }
        }
        let mut cof = bareiss_det(minor)?;
        if (r + last) % 2 == 1 {
            cof = cof.neg_ref();
        }
        if cof.is_zero() {
            continue;
        }
        if r < n {
            let e = (n - 1 - r) as u32;
            a = a.add_ref(&cof.mul_monomial(&Monomial::var_pow(v, e)));
        } else {
            let e = (m - 1 - (r - n)) as u32;
            b = b.add_ref(&cof.mul_monomial(&Monomial::var_pow(v, e)));
        }
    }

    Ok(ResultantCertificate { v, resultant, a, b })
}

/// Fraction-free (Bareiss) determinant over the polynomial ring. Divisions by
/// the previous pivot are exact by construction; a failed division indicates
/// a corrupted matrix and reports as an internal error.
fn bareiss_det<K: DiffField>(mut m: Vec<Vec<DiffPoly<K>>>) -> Result<DiffPoly<K>> {
    let n = m.len();
    if n == 0 {
        return Ok(DiffPoly::one());
    }
    let mut negate = false;
    let mut prev = DiffPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(DiffPoly::zero()),
            }
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            let mik = std::mem::replace(&mut m[i][k], DiffPoly::zero());
            for j in k + 1..n {
                let t = pivot.mul_ref(&m[i][j]).sub_ref(&mik.mul_ref(&m[k][j]));
                m[i][j] = t
                    .div_exact(&prev)
                    .ok_or_else(|| Error::internal("fraction-free elimination division failed"))?;
            }
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { det.neg_ref() } else { det })
}

// ---------------------------------------------------------------------------
// Saturation membership.
// ---------------------------------------------------------------------------

/// Outcome of the saturation-ideal membership test.
#[derive(Clone, Debug)]
pub struct MembershipCertificate<K> {
    /// Whether `q` lies in the saturation of the differential ideal of `p`
    /// by the separant.
    pub member: bool,
    /// The partial reduction that produced the decisive remainder.
    pub reduction: ReductionCertificate<K>,
    /// `remainder / p` when the remainder is a multiple of `p`.
    pub quotient: Option<DiffPoly<K>>,
}

/// Membership of `q` in the saturation ideal of `p` (with respect to the
/// separant) over indeterminate `i`: partially reduce and test whether `p`
/// divides the remainder as a plain polynomial.
pub fn saturation_membership<K: DiffField>(
    q: &DiffPoly<K>,
    p: &DiffPoly<K>,
    i: u32,
) -> Result<MembershipCertificate<K>> {
    let reduction = partial_reduce(q, p, i)?;
    let quotient = reduction.remainder.div_exact(p);
    let member = reduction.remainder.is_zero() || quotient.is_some();
    Ok(MembershipCertificate {
        member,
        reduction,
        quotient,
    })
}

// ---------------------------------------------------------------------------
// Guard construction.
// ---------------------------------------------------------------------------

/// Result of folding an inequation into a single guard polynomial.
#[derive(Clone, Debug)]
pub struct TwoPolyResult<K> {
    /// The defining polynomial, unchanged.
    pub defining: DiffPoly<K>,
    /// Guard polynomial: nonzero, free of the leader of the defining
    /// polynomial, and contained in the ideal generated by the defining
    /// polynomial together with separant·inequation-remainder.
    pub guard: DiffPoly<K>,
    /// Partial remainder of the inequation.
    pub reduced_inequation: DiffPoly<K>,
    /// Resultant certificate backing the guard.
    pub resultant: ResultantCertificate<K>,
}

/// Replace the pair (defining polynomial, inequation) by (defining
/// polynomial, guard) where the guard also enforces a nonvanishing separant.
///
/// The guard is `res(p, separant·q̃)` in the leader of `p`, where `q̃` is the
/// partial remainder of the inequation `q`. Fails with [`Error::QInIdeal`]
/// when `q` already lies in the saturation ideal (no solution can satisfy the
/// inequation) and with [`Error::ResultantVanished`] when the resultant is
/// zero, which signals a common factor with the defining polynomial.
pub fn two_polynomials<K: DiffField>(
    p: &DiffPoly<K>,
    q: &DiffPoly<K>,
    i: u32,
) -> Result<TwoPolyResult<K>> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let membership = saturation_membership(q, p, i)?;
    if membership.member {
        return Err(Error::QInIdeal);
    }
    let si = p.separant_initial(i)?;
    let leader = DerivVar::new(i, si.order);
    let folded = si.separant.mul_ref(&membership.reduction.remainder);
    let resultant = resultant_with_cofactors(p, &folded, leader)?;
    if resultant.resultant.is_zero() {
        return Err(Error::ResultantVanished);
    }
    Ok(TwoPolyResult {
        defining: p.clone(),
        guard: resultant.resultant.clone(),
        reduced_inequation: membership.reduction.remainder,
        resultant,
    })
}

// ---------------------------------------------------------------------------
// Full Ritt reduction over a triangular system.
// ---------------------------------------------------------------------------

/// Reduce `q` by a triangular system of (distinguished indeterminate,
/// polynomial) pairs: partial reduction followed by pseudo-division in each
/// leader, repeated until a full pass leaves the remainder unchanged.
///
/// The remainder is zero whenever `q` lies in the ideal generated by the
/// system, its derivatives, and arbitrary separant/initial multiples, which
/// is exactly the shape of identity this helper is used to confirm.
pub fn ritt_reduce<K: DiffField>(
    q: &DiffPoly<K>,
    system: &[(u32, DiffPoly<K>)],
) -> Result<DiffPoly<K>> {
    let mut rem = q.clone();
    for _ in 0..64 {
        let mut changed = false;
        for (i, p) in system {
            let next = reduce_once(&rem, p, *i)?;
            if next != rem {
                rem = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(rem)
}

/// One partial-plus-algebraic reduction of `q` modulo `p` in indeterminate `i`.
fn reduce_once<K: DiffField>(q: &DiffPoly<K>, p: &DiffPoly<K>, i: u32) -> Result<DiffPoly<K>> {
    let mut rem = partial_reduce(q, p, i)?.remainder;
    let si = p.separant_initial(i)?;
    let u = DerivVar::new(i, si.order);
    let dp = si.degree;
    let init_one = si.initial.is_one();
    loop {
        let dq = rem.degree_in(u);
        if dq < dp {
            break;
        }
        let top = rem.coeffs_in_var(u).pop().expect("degree entry exists");
        if !init_one {
            rem = si.initial.mul_ref(&rem);
        }
        let factor = top.mul_monomial(&Monomial::var_pow(u, dq - dp));
        rem = rem.sub_ref(&factor.mul_ref(p));
    }
    Ok(rem)
}

// ---------------------------------------------------------------------------
// Irreducibility screen.
// ---------------------------------------------------------------------------

/// Cheap reducibility certificates for a defining polynomial: a nontrivial
/// monomial factor, a pure power product, or a repeated factor involving the
/// leader (detected by a vanishing resultant with the separant). Passing the
/// screen does not prove irreducibility; it only rejects inputs that are
/// certainly reducible.
pub fn irreducibility_screen<K: DiffField>(p: &DiffPoly<K>, i: u32) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let content = p.content_monomial();
    if !content.is_one() {
        if p.num_terms() > 1 {
            return Err(Error::ReducibleInput {
                reason: "all terms share a monomial factor".into(),
            });
        }
        if content.degree() >= 2 {
            return Err(Error::ReducibleInput {
                reason: "single term of degree at least two".into(),
            });
        }
        return Ok(()); // a single linear term is irreducible
    }
    if let Ok(si) = p.separant_initial(i) {
        if si.degree >= 2 {
            let leader = DerivVar::new(i, si.order);
            let cert = resultant_with_cofactors(p, &si.separant, leader)?;
            if cert.resultant.is_zero() {
                return Err(Error::ReducibleInput {
                    reason: "repeated factor in the leader".into(),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{BigInt, BigRational};
    use proptest::prelude::*;

    type Q = BigRational;
    type QP = DiffPoly<Q>;

    fn q(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    fn xp(i: u32, j: u32) -> QP {
        QP::var(DerivVar::new(i, j))
    }

    /// P = x*y' + (x' + 1)*y - 1 with x as indeterminate 1, y as 2.
    fn linear_pair_poly() -> QP {
        xp(1, 0)
            .mul_ref(&xp(2, 1))
            .add_ref(&xp(1, 1).add_ref(&QP::one()).mul_ref(&xp(2, 0)))
            .sub_ref(&QP::one())
    }

    #[test]
    fn partial_reduce_without_separant_power() {
        // Reducing x'' by x' - x needs no separant factor at all.
        let p = xp(1, 1).sub_ref(&xp(1, 0));
        let cert = partial_reduce(&xp(1, 2), &p, 1).unwrap();
        assert_eq!(cert.remainder, xp(1, 1));
        assert_eq!(cert.s_power, 0);
        assert_eq!(cert.multipliers.len(), 1);
        assert_eq!(cert.multipliers[&1], QP::one());
        assert!(cert.verify(&xp(1, 2), &p));
    }

    #[test]
    fn partial_reduce_with_separant_power() {
        // P = (y')^2 - 4y, separant 2y'. Reducing y'' multiplies once.
        let p = xp(1, 1).pow(2).sub_ref(&xp(1, 0).scale(&q(4, 1)));
        let cert = partial_reduce(&xp(1, 2), &p, 1).unwrap();
        assert_eq!(cert.remainder, xp(1, 1).scale(&q(4, 1)));
        assert_eq!(cert.s_power, 1);
        assert!(cert.verify(&xp(1, 2), &p));

        // The derivative of P itself reduces to zero.
        let cert = partial_reduce(&p.derive(), &p, 1).unwrap();
        assert!(cert.remainder.is_zero());
        assert!(cert.verify(&p.derive(), &p));
    }

    #[test]
    fn partial_reduce_leaves_low_order_input_alone() {
        let p = xp(1, 1).pow(2).sub_ref(&xp(1, 0).scale(&q(4, 1)));
        let low = xp(1, 1).mul_ref(&xp(1, 0)).add_ref(&QP::from_int(7));
        let cert = partial_reduce(&low, &p, 1).unwrap();
        assert_eq!(cert.remainder, low);
        assert_eq!(cert.s_power, 0);
        assert!(cert.multipliers.is_empty());

        assert!(matches!(
            partial_reduce(&xp(1, 2), &xp(2, 0), 1),
            Err(Error::UndefinedSeparant { indet: 1 })
        ));
    }

    #[test]
    fn resultant_matches_hand_computation() {
        // res((y')^2 - 4y, 2y') in y' is -16y with cofactors 4 and -2y'.
        let p = xp(1, 1).pow(2).sub_ref(&xp(1, 0).scale(&q(4, 1)));
        let g = xp(1, 1).scale(&q(2, 1));
        let v = DerivVar::new(1, 1);
        let cert = resultant_with_cofactors(&p, &g, v).unwrap();
        assert_eq!(cert.resultant, xp(1, 0).scale(&q(-16, 1)));
        assert_eq!(cert.a, QP::from_int(4));
        assert_eq!(cert.b, xp(1, 1).scale(&q(-2, 1)));
        assert!(cert.verify(&p, &g));
    }

    #[test]
    fn resultant_edge_cases() {
        let p = xp(1, 1).pow(2).sub_ref(&xp(1, 0).scale(&q(4, 1)));
        let v = DerivVar::new(1, 1);

        // Constant-in-v second argument: power formula.
        let g = xp(1, 0).pow(2).scale(&q(2, 1)); // 2y^2, free of y'
        let cert = resultant_with_cofactors(&p, &g, v).unwrap();
        assert_eq!(cert.resultant, xp(1, 0).pow(4).scale(&q(4, 1)));
        assert!(cert.verify(&p, &g));

        // Swapped: constant-in-v first argument.
        let cert = resultant_with_cofactors(&g, &p, v).unwrap();
        assert_eq!(cert.resultant, xp(1, 0).pow(4).scale(&q(4, 1)));
        assert!(cert.verify(&g, &p));

        // Both constant in v.
        assert!(matches!(
            resultant_with_cofactors(&g, &g, v),
            Err(Error::BothConstantInV { .. })
        ));

        // Zero input.
        let cert = resultant_with_cofactors(&QP::zero(), &p, v).unwrap();
        assert!(cert.resultant.is_zero());
        assert!(cert.verify(&QP::zero(), &p));
    }

    #[test]
    fn resultant_detects_common_factor() {
        // (y' - y) and (y' - y)·(y' + 1) share a factor: resultant vanishes.
        let f = xp(1, 1).sub_ref(&xp(1, 0));
        let g = f.mul_ref(&xp(1, 1).add_ref(&QP::one()));
        let cert = resultant_with_cofactors(&f, &g, DerivVar::new(1, 1)).unwrap();
        assert!(cert.resultant.is_zero());
        assert!(cert.verify(&f, &g));
    }

    #[test]
    fn membership_accepts_derivatives_and_rejects_outsiders() {
        let p = linear_pair_poly();
        for k in 0..4u32 {
            let cert = saturation_membership(&p.derive_n(k), &p, 2).unwrap();
            assert!(cert.member, "P^({k}) must be a member");
            if k >= 1 {
                assert!(cert.reduction.remainder.is_zero());
            }
        }
        // A combination with a unit offset is not a member.
        let outsider = p.derive().add_ref(&QP::one());
        let cert = saturation_membership(&outsider, &p, 2).unwrap();
        assert!(!cert.member);

        // x alone is not in the saturation ideal.
        let cert = saturation_membership(&xp(1, 0), &p, 2).unwrap();
        assert!(!cert.member);
        assert_eq!(cert.reduction.remainder, xp(1, 0));
    }

    #[test]
    fn two_polynomials_builds_the_guard() {
        // Defining polynomial x*y' + (x'+1)*y - 1 with inequation x: the
        // guard comes out as x^2 (separant times reduced inequation, raised
        // via the constant-in-leader resultant).
        let p = linear_pair_poly();
        let out = two_polynomials(&p, &xp(1, 0), 2).unwrap();
        assert_eq!(out.guard, xp(1, 0).pow(2));
        assert_eq!(out.reduced_inequation, xp(1, 0));
        assert!(out.resultant.verify(&p, &xp(1, 0).mul_ref(&xp(1, 0))));
        // Guard must not involve the leader y'.
        assert_eq!(out.guard.degree_in(DerivVar::new(2, 1)), 0);

        // An inequation inside the ideal is rejected.
        assert!(matches!(
            two_polynomials(&p, &p.derive(), 2),
            Err(Error::QInIdeal)
        ));
    }

    #[test]
    fn ritt_reduce_kills_ideal_elements() {
        let p = xp(1, 1).pow(2).sub_ref(&xp(1, 0).scale(&q(4, 1)));
        let system = vec![(1u32, p.clone())];
        // An honest ideal combination reduces to zero.
        let combo = p
            .derive()
            .mul_ref(&xp(1, 0))
            .add_ref(&p.mul_ref(&xp(1, 2)))
            .add_ref(&p.derive_n(2));
        assert!(ritt_reduce(&combo, &system).unwrap().is_zero());
        // A unit does not.
        assert!(!ritt_reduce(&QP::one(), &system).unwrap().is_zero());
    }

    #[test]
    fn ritt_reduce_lowers_leader_degree() {
        // Algebraic step: (y')^3 modulo (y')^2 - 4y leaves degree < 2.
        let p = xp(1, 1).pow(2).sub_ref(&xp(1, 0).scale(&q(4, 1)));
        let system = vec![(1u32, p.clone())];
        let r = ritt_reduce(&xp(1, 1).pow(3), &system).unwrap();
        assert!(r.degree_in(DerivVar::new(1, 1)) < 2);
        assert_eq!(r, xp(1, 0).mul_ref(&xp(1, 1)).scale(&q(4, 1)));
    }

    #[test]
    fn screen_flags_obvious_factorizations() {
        // Squarefree order-1 polynomial passes.
        let p = xp(1, 1).pow(2).sub_ref(&xp(1, 0).scale(&q(4, 1)));
        assert!(irreducibility_screen(&p, 1).is_ok());
        // A single linear term passes.
        assert!(irreducibility_screen(&xp(1, 1), 1).is_ok());

        // Pure square of a variable.
        assert!(matches!(
            irreducibility_screen(&xp(1, 0).pow(2), 1),
            Err(Error::ReducibleInput { .. })
        ));
        // Shared monomial factor.
        let shared = xp(1, 0)
            .mul_ref(&xp(2, 1))
            .add_ref(&xp(1, 0).mul_ref(&xp(2, 0)));
        assert!(matches!(
            irreducibility_screen(&shared, 2),
            Err(Error::ReducibleInput { .. })
        ));
        // Repeated factor in the leader.
        let sq = xp(1, 1).sub_ref(&xp(1, 0)).pow(2);
        assert!(matches!(
            irreducibility_screen(&sq, 1),
            Err(Error::ReducibleInput { .. })
        ));

        assert!(matches!(
            irreducibility_screen(&QP::zero(), 1),
            Err(Error::ZeroPolynomial)
        ));
    }

    // -- property tests ----------------------------------------------------

    fn arb_poly(indets: u32, max_order: u32, max_exp: u32, max_terms: usize) -> BoxedStrategy<QP> {
        let term = (
            proptest::collection::vec(
                (1..=indets, 0..=max_order, 1..=max_exp),
                0..=2usize,
            ),
            -3i64..=3,
        );
        proptest::collection::vec(term, 1..=max_terms)
            .prop_map(|terms| {
                let mut p = QP::zero();
                for (vars, c) in terms {
                    let mon = Monomial::from_pairs(
                        vars.into_iter()
                            .map(|(i, o, e)| (DerivVar::new(i, o), e))
                            .collect(),
                    );
                    p = p.add_ref(&QP::monomial(mon, q(c, 1)));
                }
                p
            })
            .boxed()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn partial_reduce_certificate_always_verifies(
            qq in arb_poly(2, 3, 2, 4),
            pp in arb_poly(2, 2, 2, 3),
        ) {
            prop_assume!(pp.order_wrt(1).is_some());
            let cert = partial_reduce(&qq, &pp, 1).unwrap();
            prop_assert!(cert.verify(&qq, &pp));
        }

        #[test]
        fn resultant_certificate_always_verifies(
            pp in arb_poly(2, 1, 1, 3),
            gg in arb_poly(2, 1, 1, 3),
        ) {
            let v = DerivVar::new(1, 1);
            match resultant_with_cofactors(&pp, &gg, v) {
                Ok(cert) => prop_assert!(cert.verify(&pp, &gg)),
                Err(Error::BothConstantInV { .. }) => {}
                Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
            }
        }

        #[test]
        fn membership_of_ideal_combinations(
            a in arb_poly(2, 1, 1, 2),
            k in 0u32..3,
        ) {
            let p = linear_pair_poly();
            let combo = a.mul_ref(&p.derive_n(k));
            prop_assume!(!combo.is_zero());
            let cert = saturation_membership(&combo, &p, 2).unwrap();
            prop_assert!(cert.member);
        }
    }
}
