//! End-to-end normalization: reduce a presented system to a hypersurface,
//! raise the order of the distinguished indeterminate, make the guard
//! manageable, and package the whole thing as an invertible change of
//! variables ready for series extension.
//!
//! The pipeline for a hypersurface `P` with inequation `Q` is fixed:
//! `two_polynomials` replaces `Q` by a guard free of the leader, a
//! high-order swap protects the distinguished indeterminate from the input
//! coordinates, and a shift makes the combined guard (initial, resultant of
//! `P` with its separant, and the carried inequation) manageable, so that no
//! choice of input series can kill it. Systems with more than one dependent
//! generator first go through a bounded primitive-element search that
//! collapses them to a hypersurface together with a table expressing every
//! original generator as a fraction over the new coordinates.

use std::collections::BTreeMap;

use num::{BigInt, BigRational};
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{format_diffpoly, DerivVar, DiffPoly, Monomial, VarNames};
use crate::reduction::{
    irreducibility_screen, resultant_with_cofactors, ritt_reduce, saturation_membership,
    two_polynomials,
};
use crate::scalar::{DiffField, RatT, RootField, C64};
use crate::series::{eval_on_series, extend_solution, ExtensionReport, TruncSeries};
use crate::transforms::{is_manageable, make_high_order, make_manageable, Automorphism, ManageableParams};

type Q = BigRational;
type QP = DiffPoly<Q>;

// ---------------------------------------------------------------------------
// Parameters and result types.
// ---------------------------------------------------------------------------

/// Knobs for the whole pipeline; the defaults handle the bundled fixtures.
#[derive(Clone, Debug)]
pub struct PipelineParams {
    /// Seed for every randomized search (manageability shifts, sampling).
    pub seed: u64,
    /// Trial budget for the manageability search.
    pub max_trials: u64,
    /// Largest derivative order a manageability shift may use (further capped
    /// so shifts cannot push the guard order past the defining order).
    pub shift_max_order: u32,
    /// Largest degree of a random manageability shift polynomial.
    pub shift_max_degree: u32,
    /// How many times each generator is differentiated while eliminating
    /// towards the primitive element.
    pub prolongation_bound: u32,
    /// Degree bound for the primitive-element candidate coefficients.
    pub candidate_degree: u32,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            seed: 0,
            max_trials: 4096,
            shift_max_order: 4,
            shift_max_degree: 3,
            prolongation_bound: 3,
            candidate_degree: 2,
        }
    }
}

/// Fractions expressing the original dependent generators over the reduced
/// coordinates: generator `i` equals `t[i] / q` with both sides in the first
/// `d + 1` indeterminates.
#[derive(Clone, Debug, PartialEq)]
pub struct Eq1Table {
    pub q: QP,
    pub t: BTreeMap<u32, QP>,
}

/// An invertible change of variables together with the transformed pair it
/// produces. The steps apply left to right; `hyper` is the composition of the
/// steps acting inside the first `d + 1` coordinates (everything after the
/// primitive-element renaming).
#[derive(Clone, Debug)]
pub struct ChangeOfVariables {
    /// Total indeterminate count of the ambient space (including an adjoined
    /// time indeterminate in time mode).
    pub n: u32,
    /// Number of free input coordinates.
    pub d: u32,
    /// Whether the system was presented over polynomial-in-time coefficients.
    pub time: bool,
    /// Index of the adjoined time indeterminate, when one was needed.
    pub t_index: Option<u32>,
    /// Ordered automorphisms on the full ambient space.
    pub steps: Vec<Automorphism<Q>>,
    /// Composition of the steps restricted to the first `d + 1` coordinates.
    pub hyper: Automorphism<Q>,
    /// Transformed defining polynomial, in the first `d + 1` coordinates.
    pub p_star: QP,
    /// Transformed guard; manageable in the distinguished indeterminate and
    /// of strictly lower order in it than `p_star`.
    pub guard_star: QP,
    /// Present when the input had more generators than a hypersurface.
    pub eq1: Option<Eq1Table>,
}

impl ChangeOfVariables {
    /// Trivial change of variables around an existing pair, mostly useful as
    /// the baseline in comparisons.
    pub fn identity(p: &QP, guard: &QP, n: u32, d: u32) -> Self {
        ChangeOfVariables {
            n,
            d,
            time: false,
            t_index: None,
            steps: Vec::new(),
            hyper: Automorphism::identity(d + 1),
            p_star: p.clone(),
            guard_star: guard.clone(),
            eq1: None,
        }
    }

    /// Composition of all steps on the full ambient space.
    pub fn composed(&self) -> Result<Automorphism<Q>> {
        let mut acc = Automorphism::identity(self.n);
        for s in &self.steps {
            acc = acc.then(s)?;
        }
        Ok(acc)
    }
}

/// Outcome of the bounded primitive-element search.
#[derive(Clone, Debug)]
pub struct PrimitiveElementResult {
    /// Renaming that sends the anchor coordinate to the primitive element;
    /// identity when the zero candidate already works.
    pub renaming: Automorphism<Q>,
    /// Candidate coefficients: generator index to the polynomial in the
    /// first basis coordinate it was weighted by.
    pub shifts: BTreeMap<u32, QP>,
    /// Characteristic polynomial of the primitive element over the basis, in
    /// the first `d + 1` indeterminates.
    pub p_i: QP,
    /// Common denominator of the generator expressions.
    pub q: QP,
    /// Numerators: original generator index to its expression times `q`.
    pub t: BTreeMap<u32, QP>,
}

// ---------------------------------------------------------------------------
// Hypersurface normalization.
// ---------------------------------------------------------------------------

fn max_order_excluding(p: &QP, i: u32) -> u32 {
    p.variables()
        .into_iter()
        .filter(|v| v.indet != i)
        .map(|v| v.order)
        .max()
        .unwrap_or(0)
}

/// Normalize a single defining polynomial in `d + 1` indeterminates with
/// inequation `q_ineq`, distinguished indeterminate `d + 1`.
pub fn normalize_hypersurface(
    p: &QP,
    q_ineq: &QP,
    d: u32,
    params: &PipelineParams,
) -> Result<ChangeOfVariables> {
    let i = d + 1;
    if p.is_zero() || q_ineq.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.order_wrt(i).is_none() {
        return Err(Error::NotDependent { indet: i });
    }
    if p.max_indet() > i || q_ineq.max_indet() > i {
        return Err(Error::PreconditionOrder {
            msg: format!("hypersurface data must live in the first {i} indeterminates"),
        });
    }
    irreducibility_screen(p, i)?;

    let two = two_polynomials(p, q_ineq, i)?;
    let s = two.guard;

    // With no input coordinates there is nothing for the guard to collide
    // with, so the order raise is skipped.
    let f1 = if d == 0 {
        Automorphism::identity(i)
    } else {
        make_high_order(p, &s, d)?
    };
    let p1 = f1.apply(p)?;
    let s1 = f1.apply(&s)?;

    let si = p1.separant_initial(i)?;
    let h1 = si.order;
    let rcert = resultant_with_cofactors(&p1, &si.separant, DerivVar::new(i, h1))?;
    if rcert.resultant.is_zero() {
        return Err(Error::ReducibleInput {
            reason: "the defining polynomial shares a factor with its separant".into(),
        });
    }
    let q_mgr = si.initial.mul_ref(&rcert.resultant).mul_ref(&s1);

    // Cap shift orders so the shifted guard stays strictly below the defining
    // polynomial's order in the distinguished indeterminate.
    let r_other = max_order_excluding(&q_mgr, i).max(max_order_excluding(&p1, i));
    let e_cap = h1.saturating_sub(r_other + 1);
    let mp = ManageableParams {
        seed: params.seed,
        max_order: params.shift_max_order.min(e_cap),
        max_degree: params.shift_max_degree,
        max_trials: params.max_trials,
    };
    let outcome = make_manageable(&q_mgr, i, i, &mp)?;
    let f2 = outcome.shift;
    let guard_star = outcome.transformed;
    let p_star = f2.apply(&p1)?;

    let hyper = f1.then(&f2)?;
    if p_star.order_wrt(i) <= guard_star.order_wrt(i) {
        return Err(Error::internal("guard order was not kept below the defining order"));
    }
    if !is_manageable(&guard_star, i) {
        return Err(Error::internal("guard lost manageability"));
    }
    if hyper.apply(p)? != p_star || hyper.apply_inverse(&p_star)? != *p {
        return Err(Error::internal("transformed pair does not match the composed substitution"));
    }

    Ok(ChangeOfVariables {
        n: i,
        d,
        time: false,
        t_index: None,
        steps: vec![f1, f2],
        hyper,
        p_star,
        guard_star,
        eq1: None,
    })
}

// ---------------------------------------------------------------------------
// Primitive element search.
// ---------------------------------------------------------------------------

fn poly_key(p: &QP, names: &VarNames) -> (u32, u32, usize, String) {
    (
        p.total_order().unwrap_or(0),
        p.leading().map(|(m, _)| m.degree()).unwrap_or(0),
        p.num_terms(),
        format_diffpoly(p, names),
    )
}

fn free_of(p: &QP, elim: &dyn Fn(DerivVar) -> bool) -> bool {
    p.variables().into_iter().all(|v| !elim(v))
}

/// Substitute one indeterminate by an image, leaving the rest alone.
fn subst_var(p: &QP, from: u32, image: &QP) -> Result<QP> {
    let mut map = BTreeMap::new();
    for j in p.indets() {
        let img = if j == from {
            image.clone()
        } else {
            QP::var(DerivVar::new(j, 0))
        };
        map.insert(j, img);
    }
    p.substitute(&map)
}

fn remap_indet(p: &QP, from: u32, to: u32) -> Result<QP> {
    subst_var(p, from, &QP::var(DerivVar::new(to, 0)))
}

fn monic(p: QP) -> QP {
    match p.leading() {
        Some((_, c)) => {
            let inv = c.try_inverse().expect("leading coefficient is nonzero");
            p.scale(&inv)
        }
        None => p,
    }
}

/// Eliminate every derivative variable matched by `elim` from the prolonged
/// generator set, highest-ranked first. Each round removes the current top
/// variable entirely: the cheapest polynomial containing it is used as the
/// resultant pivot against the others (a lone occurrence is dropped, since
/// its relation constrains only the projected-away variable). Resultants
/// introduce only lower-ranked variables, so the rounds terminate.
fn eliminate_vars(
    gens: &[QP],
    prolong: u32,
    elim: &dyn Fn(DerivVar) -> bool,
    names: &VarNames,
) -> Vec<QP> {
    let mut pool: Vec<QP> = Vec::new();
    for g in gens {
        let mut cur = g.clone();
        for _ in 0..=prolong {
            if !pool.contains(&cur) {
                pool.push(cur.clone());
            }
            cur = cur.derive();
        }
    }
    let mut budget: u32 = 512;
    loop {
        let target = pool
            .iter()
            .flat_map(|p| p.variables().into_iter())
            .filter(|v| elim(*v))
            .max();
        let Some(v) = target else { break };
        let (mut involved, mut rest): (Vec<QP>, Vec<QP>) =
            pool.into_iter().partition(|p| p.variables().contains(&v));
        if involved.len() >= 2 {
            involved.sort_by_cached_key(|p| poly_key(p, names));
            let pivot = involved.remove(0);
            for other in involved {
                if budget == 0 {
                    break;
                }
                budget -= 1;
                if let Ok(cert) = resultant_with_cofactors(&other, &pivot, v) {
                    if !cert.resultant.is_zero() && !rest.contains(&cert.resultant) {
                        rest.push(cert.resultant);
                    }
                }
            }
        }
        pool = rest;
        if budget == 0 {
            break;
        }
        if pool.len() > 48 {
            pool.sort_by_cached_key(|p| poly_key(p, names));
            pool.truncate(48);
        }
    }
    pool
}

fn candidate_shifts(n: u32, d: u32, params: &PipelineParams) -> Vec<BTreeMap<u32, QP>> {
    let mut out: Vec<BTreeMap<u32, QP>> = vec![BTreeMap::new()];
    let degrees: Vec<u32> = if d == 0 {
        vec![0]
    } else {
        (0..=params.candidate_degree).collect()
    };
    for j in d + 2..=n {
        for &e in &degrees {
            for c in [1i64, -1, 2, -2] {
                let mono = Monomial::var_pow(DerivVar::new(1, 0), e);
                let p_j = QP::from_int(c).mul_monomial(&mono);
                out.push(BTreeMap::from([(j, p_j)]));
            }
        }
    }
    if n > d + 2 {
        out.push((d + 2..=n).map(|j| (j, QP::one())).collect());
    }
    out
}

fn try_candidate(
    relations: &[QP],
    n: u32,
    d: u32,
    shifts: &BTreeMap<u32, QP>,
    params: &PipelineParams,
) -> Result<Option<PrimitiveElementResult>> {
    let zi = n + 1;
    let names = VarNames::numbered(zi);

    let mut b = QP::var(DerivVar::new(d + 1, 0));
    for (j, p_j) in shifts {
        b = b.add_ref(&p_j.mul_ref(&QP::var(DerivVar::new(*j, 0))));
    }
    let g0 = QP::var(DerivVar::new(zi, 0)).sub_ref(&b);
    let mut gens = vec![g0];
    gens.extend(relations.iter().cloned());

    // Characteristic polynomial of the primitive element over the basis.
    let elim_pi = |v: DerivVar| v.indet > d && v.indet != zi;
    let pool = eliminate_vars(&gens, params.prolongation_bound, &elim_pi, &names);
    let Some(p_i_raw) = pool
        .iter()
        .filter(|p| !p.is_zero() && free_of(p, &elim_pi) && p.order_wrt(zi).is_some())
        .min_by_key(|p| poly_key(p, &names))
        .cloned()
    else {
        return Ok(None);
    };
    let p_i_z = monic(p_i_raw);

    // A linear expression for each non-anchor dependent generator.
    let mut fractions: BTreeMap<u32, (QP, QP)> = BTreeMap::new();
    for idep in d + 2..=n {
        let elim_w = move |v: DerivVar| {
            (v.indet > d && v.indet != zi && v.indet != idep)
                || (v.indet == idep && v.order >= 1)
        };
        let pool = eliminate_vars(&gens, params.prolongation_bound, &elim_w, &names);
        let v0 = DerivVar::new(idep, 0);
        let Some(lin) = pool
            .iter()
            .filter(|p| free_of(p, &elim_w) && p.order_wrt(idep) == Some(0) && p.degree_in(v0) == 1)
            .min_by_key(|p| poly_key(p, &names))
            .cloned()
        else {
            return Ok(None);
        };
        let cs = lin.coeffs_in_var(v0);
        let den = cs[1].clone();
        let num = cs[0].neg_ref();
        if den.is_zero() {
            return Ok(None);
        }
        fractions.insert(idep, (num, den));
    }

    // Fold the individual denominators into one.
    let mut q = QP::one();
    let mut seen: Vec<QP> = Vec::new();
    for (_, den) in fractions.values() {
        if !den.is_one() && !seen.contains(den) {
            seen.push(den.clone());
            q = q.mul_ref(den);
        }
    }
    if q.leading().map(|(_, c)| c < &Q::zero()).unwrap_or(false) {
        q = q.neg_ref();
        for (num, den) in fractions.values_mut() {
            *num = num.neg_ref();
            *den = den.neg_ref();
        }
    }
    let mut table: BTreeMap<u32, QP> = BTreeMap::new();
    for (idep, (num, den)) in &fractions {
        let factor = if den.is_one() {
            q.clone()
        } else {
            match q.div_exact(den) {
                Some(f) => f,
                None => return Ok(None),
            }
        };
        table.insert(*idep, num.mul_ref(&factor));
    }
    let mut t_anchor = q.mul_ref(&QP::var(DerivVar::new(zi, 0)));
    for (j, p_j) in shifts {
        t_anchor = t_anchor.sub_ref(&p_j.mul_ref(&table[j]));
    }
    table.insert(d + 1, t_anchor);

    // Verify everything by reduction against the presented relations.
    let system: Vec<(u32, QP)> = relations
        .iter()
        .enumerate()
        .map(|(k, rel)| (d + 1 + k as u32, rel.clone()))
        .collect();
    let reduces_to_zero = |w: &QP| -> Result<bool> {
        let back = subst_var(w, zi, &b)?;
        Ok(ritt_reduce(&back, &system)?.is_zero())
    };
    if !reduces_to_zero(&p_i_z)? {
        return Ok(None);
    }
    for (idep, t_i) in &table {
        let w = q.mul_ref(&QP::var(DerivVar::new(*idep, 0))).sub_ref(t_i);
        if !reduces_to_zero(&w)? {
            return Ok(None);
        }
    }

    // Move to the reduced coordinates and make sure the denominator does not
    // vanish on the hypersurface.
    let p_i = remap_indet(&p_i_z, zi, d + 1)?;
    let q_r = remap_indet(&q, zi, d + 1)?;
    let mut t_r = BTreeMap::new();
    for (idep, t_i) in &table {
        t_r.insert(*idep, remap_indet(t_i, zi, d + 1)?);
    }
    if !q_r.is_one() && saturation_membership(&q_r, &p_i, d + 1)?.member {
        return Ok(None);
    }

    let renaming = if shifts.values().all(|p_j| p_j.is_zero()) {
        Automorphism::identity(n)
    } else {
        let mut forward = BTreeMap::new();
        let mut inverse = BTreeMap::new();
        for j in 1..=n {
            forward.insert(j, QP::var(DerivVar::new(j, 0)));
            inverse.insert(j, QP::var(DerivVar::new(j, 0)));
        }
        let anchor = QP::var(DerivVar::new(d + 1, 0));
        let mut offset = QP::zero();
        for (j, p_j) in shifts {
            offset = offset.add_ref(&p_j.mul_ref(&QP::var(DerivVar::new(*j, 0))));
        }
        forward.insert(d + 1, anchor.sub_ref(&offset));
        inverse.insert(d + 1, anchor.add_ref(&offset));
        Automorphism::new(n, forward, inverse, "primitive-element")?
    };

    Ok(Some(PrimitiveElementResult {
        renaming,
        shifts: shifts.clone(),
        p_i,
        q: q_r,
        t: t_r,
    }))
}

/// Best-effort search for a primitive element of a triangular presentation:
/// relation `k` defines generator `d + 1 + k` over the basis and the earlier
/// generators. Candidates weight the non-anchor generators by small
/// polynomials in the first basis coordinate; each candidate is verified by
/// reducing the produced characteristic polynomial and generator expressions
/// to zero against the presented relations. Exhausting the candidates proves
/// nothing, so that outcome is reported as a bound, not a disproof.
pub fn primitive_element_search(
    relations: &[QP],
    n: u32,
    d: u32,
    params: &PipelineParams,
) -> Result<PrimitiveElementResult> {
    if relations.len() as u32 != n - d {
        return Err(Error::PreconditionOrder {
            msg: format!(
                "{} relations cannot present {} dependent generators",
                relations.len(),
                n - d
            ),
        });
    }
    for (k, rel) in relations.iter().enumerate() {
        let dep = d + 1 + k as u32;
        if rel.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if rel.order_wrt(dep).is_none() {
            return Err(Error::NotDependent { indet: dep });
        }
    }
    if n == d + 1 {
        return Ok(PrimitiveElementResult {
            renaming: Automorphism::identity(n),
            shifts: BTreeMap::new(),
            p_i: relations[0].clone(),
            q: QP::one(),
            t: BTreeMap::from([(d + 1, QP::var(DerivVar::new(d + 1, 0)))]),
        });
    }
    for cand in candidate_shifts(n, d, params) {
        if let Some(found) = try_candidate(relations, n, d, &cand, params)? {
            return Ok(found);
        }
    }
    Err(Error::BoundExceeded {
        msg: format!(
            "no primitive element candidate verified within degree {} and prolongation {}",
            params.candidate_degree, params.prolongation_bound
        ),
    })
}

// ---------------------------------------------------------------------------
// Full normalization.
// ---------------------------------------------------------------------------

/// Normalize a presented system: a single relation goes straight to the
/// hypersurface pipeline; several relations go through the primitive-element
/// search first, with the search's denominator folded into the inequation.
pub fn normalize(
    relations: &[QP],
    q_ineq: &QP,
    n: u32,
    d: u32,
    params: &PipelineParams,
) -> Result<ChangeOfVariables> {
    if relations.is_empty() || n != d + relations.len() as u32 {
        return Err(Error::PreconditionOrder {
            msg: format!(
                "{} relations over {n} indeterminates do not leave a basis of {d}",
                relations.len()
            ),
        });
    }
    if n == d + 1 {
        return normalize_hypersurface(&relations[0], q_ineq, d, params);
    }
    if let Some(v) = q_ineq.variables().into_iter().find(|v| v.indet > d) {
        return Err(Error::PreconditionOrder {
            msg: format!(
                "with several relations the inequation may involve only the basis; found indeterminate {}",
                v.indet
            ),
        });
    }
    let step1 = primitive_element_search(relations, n, d, params)?;
    let q_eff = q_ineq.mul_ref(&step1.q);
    let cvh = normalize_hypersurface(&step1.p_i, &q_eff, d, params)?;
    let mut steps = vec![step1.renaming.clone()];
    for st in &cvh.steps {
        steps.push(st.extend_identity(n)?);
    }
    Ok(ChangeOfVariables {
        n,
        d,
        time: false,
        t_index: None,
        steps,
        hyper: cvh.hyper,
        p_star: cvh.p_star,
        guard_star: cvh.guard_star,
        eq1: Some(Eq1Table {
            q: step1.q,
            t: step1.t,
        }),
    })
}

fn poly_is_t_free(p: &DiffPoly<RatT>) -> bool {
    p.terms()
        .all(|(_, c)| c.as_tpoly().map(|tp| tp.is_constant()).unwrap_or(false))
}

fn drop_time(p: &DiffPoly<RatT>) -> Result<QP> {
    let mut out = QP::zero();
    for (m, c) in p.terms() {
        let tp = c.as_tpoly().ok_or_else(|| Error::NonPolynomialTimeCoefficient {
            coeff: c.to_string(),
        })?;
        if !tp.is_constant() {
            return Err(Error::internal("time-dependent coefficient in a time-free system"));
        }
        out = out.add_ref(&QP::constant(tp.coeff(0)).mul_monomial(m));
    }
    Ok(out)
}

fn expand_time_poly(p: &DiffPoly<RatT>, t_index: u32) -> Result<QP> {
    let mut out = QP::zero();
    for (m, c) in p.terms() {
        let tp = c.as_tpoly().ok_or_else(|| Error::NonPolynomialTimeCoefficient {
            coeff: c.to_string(),
        })?;
        for (e, a) in tp.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mono = m.mul(&Monomial::var_pow(DerivVar::new(t_index, 0), e as u32));
            out = out.add_ref(&QP::constant(a.clone()).mul_monomial(&mono));
        }
    }
    Ok(out)
}

/// Normalize a system over polynomial-in-time coefficients. A system that
/// never mentions time runs through the constant pipeline unchanged;
/// otherwise time is adjoined as one more dependent indeterminate pinned by
/// the relation that its derivative is one, and the augmented system is
/// normalized. The adjoined indeterminate is never the primitive-element
/// anchor and is fixed by every later step, so the extension can read the
/// time offset off its computed component.
pub fn normalize_time(
    relations: &[DiffPoly<RatT>],
    q_ineq: &DiffPoly<RatT>,
    n: u32,
    d: u32,
    params: &PipelineParams,
) -> Result<ChangeOfVariables> {
    let t_free = relations.iter().all(poly_is_t_free) && poly_is_t_free(q_ineq);
    if t_free {
        let rels: Vec<QP> = relations.iter().map(drop_time).collect::<Result<_>>()?;
        let ineq = drop_time(q_ineq)?;
        let mut cv = normalize(&rels, &ineq, n, d, params)?;
        cv.time = true;
        return Ok(cv);
    }
    if !poly_is_t_free(q_ineq) {
        return Err(Error::PreconditionOrder {
            msg: "the inequation may not involve time".into(),
        });
    }
    let t_index = n + 1;
    let mut rels: Vec<QP> = relations
        .iter()
        .map(|p| expand_time_poly(p, t_index))
        .collect::<Result<_>>()?;
    rels.push(QP::var(DerivVar::new(t_index, 1)).sub_ref(&QP::one()));
    let ineq = drop_time(q_ineq)?;
    let mut cv = normalize(&rels, &ineq, t_index, d, params)?;
    cv.time = true;
    cv.t_index = Some(t_index);
    Ok(cv)
}

// ---------------------------------------------------------------------------
// Extension through a change of variables.
// ---------------------------------------------------------------------------

/// A solution carried back to the original coordinates.
#[derive(Clone, Debug)]
pub struct OriginalSolution<K> {
    /// Original-coordinate series, time excluded.
    pub components: Vec<TruncSeries<K>>,
    /// Expansion point of time in time mode.
    pub lambda: Option<K>,
    /// Computed time component in time mode with time present.
    pub t_series: Option<TruncSeries<K>>,
    /// The raw extension in the final coordinates.
    pub report: ExtensionReport<K>,
}

fn series_text<K: DiffField>(s: &TruncSeries<K>) -> String {
    s.coeffs()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Extend input series through a change of variables: run the series
/// extension on the transformed pair, then carry the solution back to the
/// original coordinates via the recorded automorphisms and, when present,
/// the generator table. In time mode the computed time component must come
/// out affine with unit slope; its constant term is the expansion point.
pub fn extend_through<K: RootField>(
    cv: &ChangeOfVariables,
    inputs: &[TruncSeries<K>],
    trunc: u32,
) -> Result<OriginalSolution<K>> {
    if inputs.len() != cv.d as usize {
        return Err(Error::PreconditionOrder {
            msg: format!("expected {} input series, got {}", cv.d, inputs.len()),
        });
    }
    let dist = cv.d + 1;
    let p_star = cv.p_star.map_coeffs(K::from_rational);
    let guard_star = cv.guard_star.map_coeffs(K::from_rational);
    let mut comps: BTreeMap<u32, TruncSeries<K>> = inputs
        .iter()
        .enumerate()
        .map(|(j, s)| (j as u32 + 1, s.clone()))
        .collect();
    let report = extend_solution(&p_star, &guard_star, dist, &comps, trunc)?;
    comps.insert(dist, report.solution.clone());

    // Coordinates right after the primitive-element step.
    let mut w: BTreeMap<u32, TruncSeries<K>> = BTreeMap::new();
    for j in 1..=dist {
        let img = cv.hyper.forward_map()[&j].map_coeffs(K::from_rational);
        w.insert(j, eval_on_series(&img, &comps, trunc)?);
    }

    let mut components: Vec<TruncSeries<K>> = Vec::new();
    let mut t_series: Option<TruncSeries<K>> = None;
    match &cv.eq1 {
        None => {
            for j in 1..=cv.n {
                components.push(w[&j].clone());
            }
        }
        Some(tab) => {
            let qden = eval_on_series(&tab.q.map_coeffs(K::from_rational), &w, trunc)?;
            for j in 1..=cv.n {
                let s = if j <= cv.d {
                    w[&j].clone()
                } else {
                    let num =
                        eval_on_series(&tab.t[&j].map_coeffs(K::from_rational), &w, trunc)?;
                    num.div_unit(&qden)?
                };
                if Some(j) == cv.t_index {
                    t_series = Some(s);
                } else {
                    components.push(s);
                }
            }
        }
    }

    let lambda = if cv.time {
        match &t_series {
            Some(ts) => {
                if ts.trunc() < 1 {
                    return Err(Error::TruncationTooSmall {
                        got: ts.trunc(),
                        need: 1,
                    });
                }
                let lam = ts.coeff(0).expect("constant term").clone();
                let slope = ts.coeff(1).expect("linear term").clone() - K::one();
                let flat = (2..=ts.trunc()).all(|k| ts.coeff(k).expect("coeff").is_zero());
                if !slope.is_zero() || !flat {
                    return Err(Error::TimeComponentNotAffine {
                        component: series_text(ts),
                    });
                }
                Some(lam)
            }
            None => Some(K::zero()),
        }
    } else {
        None
    };

    Ok(OriginalSolution {
        components,
        lambda,
        t_series,
        report,
    })
}

/// Time-mode entry point: returns the expansion point of time together with
/// the original-coordinate solution tuple (series in the shifted time).
pub fn extend_solution_time<K: RootField>(
    cv: &ChangeOfVariables,
    inputs: &[TruncSeries<K>],
    trunc: u32,
) -> Result<(K, Vec<TruncSeries<K>>, ExtensionReport<K>)> {
    if !cv.time {
        return Err(Error::PreconditionOrder {
            msg: "the change of variables was not built in time mode".into(),
        });
    }
    let sol = extend_through(cv, inputs, trunc)?;
    let lambda = sol.lambda.clone().expect("time mode sets the expansion point");
    Ok((lambda, sol.components, sol.report))
}

// ---------------------------------------------------------------------------
// Surjectivity sampling.
// ---------------------------------------------------------------------------

/// One sampling trial; failures are recorded, never raised.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub trial: u32,
    pub backend: String,
    pub truncation: Option<u32>,
    pub residual_zero: bool,
    pub error: Option<String>,
}

impl TrialOutcome {
    pub fn succeeded(&self) -> bool {
        self.error.is_none() && self.residual_zero
    }
}

/// Sampling report for a change of variables.
#[derive(Clone, Debug)]
pub struct SampleReport {
    pub trials: u32,
    pub successes: u32,
    pub outcomes: Vec<TrialOutcome>,
}

fn random_input_series(rng: &mut ChaCha8Rng, trunc: u32) -> TruncSeries<Q> {
    let degree = 5.min(trunc);
    let mut coeffs = Vec::with_capacity(trunc as usize + 1);
    for _ in 0..=degree {
        let numer = rng.gen_range(-9i64..=9);
        let denom = rng.gen_range(1i64..=3);
        coeffs.push(Q::new(BigInt::from(numer), BigInt::from(denom)));
    }
    coeffs.resize(trunc as usize + 1, Q::zero());
    TruncSeries::new(coeffs)
}

/// Draw random rational polynomial inputs of degree at most five and extend
/// each through the transformed pair, falling back to the float backend when
/// the exact one finds no rational root. Failures are data in the report.
pub fn verify_surjectivity_sample(
    cv: &ChangeOfVariables,
    trials: u32,
    trunc: u32,
    seed: u64,
) -> SampleReport {
    let dist = cv.d + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = Vec::new();
    let mut successes = 0;
    for trial in 0..trials {
        let inputs: BTreeMap<u32, TruncSeries<Q>> = (1..=cv.d)
            .map(|j| (j, random_input_series(&mut rng, trunc)))
            .collect();
        let exact = extend_solution(&cv.p_star, &cv.guard_star, dist, &inputs, trunc);
        let outcome = match exact {
            Ok(report) => TrialOutcome {
                trial,
                backend: report.backend.to_string(),
                truncation: Some(report.truncation),
                residual_zero: report.residual_is_zero(),
                error: None,
            },
            Err(Error::NoRationalRoot { .. }) => {
                let pc = cv.p_star.map_coeffs(C64::from_rational);
                let gc = cv.guard_star.map_coeffs(C64::from_rational);
                let ic: BTreeMap<u32, TruncSeries<C64>> = inputs
                    .iter()
                    .map(|(j, s)| (*j, s.map(C64::from_rational)))
                    .collect();
                match extend_solution(&pc, &gc, dist, &ic, trunc) {
                    Ok(report) => TrialOutcome {
                        trial,
                        backend: report.backend.to_string(),
                        truncation: Some(report.truncation),
                        residual_zero: report.residual_is_zero(),
                        error: None,
                    },
                    Err(e) => TrialOutcome {
                        trial,
                        backend: "float".into(),
                        truncation: None,
                        residual_zero: false,
                        error: Some(e.to_string()),
                    },
                }
            }
            Err(e) => TrialOutcome {
                trial,
                backend: "exact".into(),
                truncation: None,
                residual_zero: false,
                error: Some(e.to_string()),
            },
        };
        if outcome.succeeded() {
            successes += 1;
        }
        outcomes.push(outcome);
    }
    SampleReport {
        trials,
        successes,
        outcomes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xp(i: u32, j: u32) -> QP {
        QP::var(DerivVar::new(i, j))
    }

    fn qs(coeffs: &[(i64, i64)]) -> TruncSeries<Q> {
        TruncSeries::new(
            coeffs
                .iter()
                .map(|&(n, d)| Q::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        )
    }

    // x2' - x1 is the linear integration fixture.
    fn linear_fixture() -> QP {
        xp(2, 1).sub_ref(&xp(1, 0))
    }

    // x1*x2' + (x1' + 1)*x2 - 1 is the projection counterexample.
    fn remark_fixture() -> QP {
        xp(1, 0)
            .mul_ref(&xp(2, 1))
            .add_ref(&xp(1, 1).add_ref(&QP::one()).mul_ref(&xp(2, 0)))
            .sub_ref(&QP::one())
    }

    #[test]
    fn linear_hypersurface_trace() {
        let cv = normalize_hypersurface(
            &linear_fixture(),
            &QP::one(),
            1,
            &PipelineParams::default(),
        )
        .unwrap();
        // Order raise with exponent 2, no manageability shift needed.
        let expected = xp(1, 1).add_ref(&xp(2, 3)).sub_ref(&xp(2, 0));
        assert_eq!(cv.p_star, expected);
        assert_eq!(cv.guard_star, QP::one());
        assert_eq!(cv.steps.len(), 2);
        assert!(cv.steps[1].is_identity());
        assert_eq!(cv.hyper.apply(&linear_fixture()).unwrap(), cv.p_star);
    }

    #[test]
    fn remark_hypersurface_trace() {
        let p = remark_fixture();
        let cv =
            normalize_hypersurface(&p, &xp(1, 0), 1, &PipelineParams::default()).unwrap();
        // Expected transformed polynomial under x1 -> x2, x2 -> x1 + x2''.
        let expected = xp(2, 0)
            .mul_ref(&xp(1, 1))
            .add_ref(&xp(2, 0).mul_ref(&xp(2, 3)))
            .add_ref(&xp(1, 0).mul_ref(&xp(2, 1)))
            .add_ref(&xp(2, 1).mul_ref(&xp(2, 2)))
            .add_ref(&xp(1, 0))
            .add_ref(&xp(2, 2))
            .sub_ref(&QP::one());
        assert_eq!(cv.p_star, expected);
        assert_eq!(cv.guard_star, xp(2, 0).pow(4));
        assert!(cv.steps[1].is_identity());
        assert!(cv.p_star.order_wrt(2) > cv.guard_star.order_wrt(2));
        assert!(is_manageable(&cv.guard_star, 2));
    }

    #[test]
    fn hypersurface_preconditions() {
        let params = PipelineParams::default();
        assert!(matches!(
            normalize_hypersurface(&xp(1, 1), &QP::one(), 1, &params),
            Err(Error::NotDependent { indet: 2 })
        ));
        // An inequation inside the saturation ideal is rejected.
        assert!(matches!(
            normalize_hypersurface(&xp(2, 1), &xp(2, 1), 1, &params),
            Err(Error::QInIdeal)
        ));
    }

    #[test]
    fn primitive_element_rational_chain() {
        // x2 = x1', x3 = x1'' are already rational in the basis.
        let rels = vec![xp(2, 0).sub_ref(&xp(1, 1)), xp(3, 0).sub_ref(&xp(1, 2))];
        let got =
            primitive_element_search(&rels, 3, 1, &PipelineParams::default()).unwrap();
        assert!(got.renaming.is_identity());
        assert!(got.q.is_one());
        assert_eq!(got.t[&3], xp(1, 2));
        assert_eq!(got.t[&2], xp(2, 0));
        // Characteristic polynomial of x2 over the basis, up to sign fixing.
        assert_eq!(got.p_i, xp(1, 1).sub_ref(&xp(2, 0)));
    }

    #[test]
    fn primitive_element_algebraic_anchor() {
        // x2^2 = x1 with x3 = x2': the anchor stays algebraic and the chain
        // rule prices the derivative expression with denominator 2*x2.
        let rels = vec![
            xp(2, 0).pow(2).sub_ref(&xp(1, 0)),
            xp(3, 0).sub_ref(&xp(2, 1)),
        ];
        let got =
            primitive_element_search(&rels, 3, 1, &PipelineParams::default()).unwrap();
        assert!(got.renaming.is_identity());
        assert_eq!(got.p_i, xp(2, 0).pow(2).sub_ref(&xp(1, 0)));
        assert_eq!(got.q, QP::from_int(2).mul_ref(&xp(2, 0)));
        assert_eq!(got.t[&3], xp(1, 1));
        assert_eq!(got.t[&2], QP::from_int(2).mul_ref(&xp(2, 0).pow(2)));
    }

    #[test]
    fn primitive_element_passthrough_and_bounds() {
        let rels = vec![linear_fixture()];
        let got =
            primitive_element_search(&rels, 2, 1, &PipelineParams::default()).unwrap();
        assert!(got.renaming.is_identity());
        assert_eq!(got.p_i, linear_fixture());

        // Nested square roots defeat a candidate sweep squeezed this hard.
        let rels = vec![
            xp(2, 0).pow(2).sub_ref(&xp(1, 0)),
            xp(3, 0).pow(2).sub_ref(&xp(2, 0)),
        ];
        let params = PipelineParams {
            candidate_degree: 0,
            prolongation_bound: 1,
            ..PipelineParams::default()
        };
        assert!(matches!(
            primitive_element_search(&rels, 3, 1, &params),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn normalize_triangular_composes() {
        let rels = vec![xp(2, 0).sub_ref(&xp(1, 1)), xp(3, 0).sub_ref(&xp(1, 2))];
        let cv = normalize(&rels, &QP::one(), 3, 1, &PipelineParams::default()).unwrap();
        assert_eq!(cv.n, 3);
        assert!(cv.eq1.is_some());
        let composed = cv.composed().unwrap();
        // Full-space composition stays invertible.
        for j in 1..=3 {
            let v = xp(j, 0);
            assert_eq!(composed.apply_inverse(&composed.apply(&v).unwrap()).unwrap(), v);
        }
        // Inequations touching dependents are out of scope for this mode.
        assert!(matches!(
            normalize(&rels, &xp(3, 0), 3, 1, &PipelineParams::default()),
            Err(Error::PreconditionOrder { .. })
        ));
    }

    #[test]
    fn extend_through_remark_fixture() {
        let p = remark_fixture();
        let params = PipelineParams::default();
        let cv = normalize_hypersurface(&p, &xp(1, 0), 1, &params).unwrap();
        // The input that defeats the naive projection extends fine here.
        let minus_t = qs(&[(0, 1), (-1, 1), (0, 1), (0, 1), (0, 1), (0, 1)]);
        let sol = extend_through::<Q>(&cv, &[minus_t.clone()], 5).unwrap();
        assert!(sol.report.residual_is_zero());
        assert_eq!(sol.components.len(), 2);
        // The recovered original tuple satisfies the original equation.
        let comps: BTreeMap<u32, TruncSeries<Q>> = sol
            .components
            .iter()
            .enumerate()
            .map(|(k, s)| (k as u32 + 1, s.clone()))
            .collect();
        let residual = eval_on_series(&p, &comps, 3).unwrap();
        assert!(residual.is_zero(), "residual {residual:?}");

        // Through the identity map the same input dies with residual -1.
        let id = ChangeOfVariables::identity(&p, &QP::one(), 2, 1);
        match extend_through::<Q>(&id, &[minus_t], 5) {
            Err(Error::OrderZeroResidual { residual }) => assert_eq!(residual, "-1"),
            other => panic!("expected the constant residual, got {other:?}"),
        }
    }

    #[test]
    fn time_mode_integration_fixture() {
        // x1' = t over no basis coordinates: the time offset comes out zero
        // and the solution is the antiderivative with zero constants.
        let rel: DiffPoly<RatT> = DiffPoly::var(DerivVar::new(1, 1))
            .sub_ref(&DiffPoly::constant(RatT::t()));
        let cv = normalize_time(&[rel], &DiffPoly::one(), 1, 0, &PipelineParams::default())
            .unwrap();
        assert_eq!(cv.t_index, Some(2));
        assert_eq!(cv.p_star, xp(1, 2).sub_ref(&QP::one()));
        let (lambda, comps, report) = extend_solution_time::<Q>(&cv, &[], 4).unwrap();
        assert_eq!(lambda, Q::zero());
        assert!(report.residual_is_zero());
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0], qs(&[(0, 1), (0, 1), (1, 2), (0, 1), (0, 1)]));
    }

    #[test]
    fn time_mode_without_time_short_circuits() {
        let rel: DiffPoly<RatT> = DiffPoly::var(DerivVar::new(2, 1))
            .sub_ref(&DiffPoly::var(DerivVar::new(1, 0)));
        let cv = normalize_time(&[rel], &DiffPoly::one(), 2, 1, &PipelineParams::default())
            .unwrap();
        assert!(cv.time);
        assert_eq!(cv.t_index, None);
        let inputs = vec![qs(&[(1, 1), (0, 1), (0, 1), (0, 1)])];
        let (lambda, comps, report) = extend_solution_time::<Q>(&cv, &inputs, 3).unwrap();
        assert_eq!(lambda, Q::zero());
        assert!(report.residual_is_zero());
        assert_eq!(comps.len(), 2);
    }

    #[test]
    fn time_rejects_true_denominators() {
        let coeff = RatT::new(crate::scalar::TPoly::one(), crate::scalar::TPoly::t());
        let rel: DiffPoly<RatT> = DiffPoly::var(DerivVar::new(1, 1))
            .sub_ref(&DiffPoly::constant(coeff));
        assert!(matches!(
            normalize_time(&[rel], &DiffPoly::one(), 1, 0, &PipelineParams::default()),
            Err(Error::NonPolynomialTimeCoefficient { .. })
        ));
    }

    #[test]
    fn sampling_succeeds_on_the_fixtures() {
        let params = PipelineParams::default();
        let linear = normalize_hypersurface(&linear_fixture(), &QP::one(), 1, &params).unwrap();
        let report = verify_surjectivity_sample(&linear, 5, 6, 7);
        assert_eq!(report.successes, 5, "outcomes {:?}", report.outcomes);

        let remark =
            normalize_hypersurface(&remark_fixture(), &xp(1, 0), 1, &params).unwrap();
        let report = verify_surjectivity_sample(&remark, 5, 6, 7);
        assert_eq!(report.successes, 5, "outcomes {:?}", report.outcomes);
    }
}
