//! Sparse differential polynomials.
//!
//! Provides:
//!
//! * [`DerivVar`] — the formal derivative `x_i^(j)` of an indeterminate,
//! * [`Monomial`] — a power product of derivative variables with cached
//!   degree and weight,
//! * [`DiffPoly`] — a differential polynomial with coefficients in any
//!   [`DiffField`], kept in canonical form (no zero coefficients, terms
//!   ordered by weight, then total degree, then lexicographically),
//! * [`DerivTable`] — an assignment of field values to derivative variables,
//! * [`VarNames`] — the indeterminate name table used for text output.
//!
//! The derivation follows the Leibniz rule termwise and additionally applies
//! the base field's own derivation to each coefficient, so the same code
//! serves both the constant base field and time mode.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::DiffField;

/// The `j`-th derivative of the `i`-th indeterminate, written `x_i^(j)`.
///
/// Indeterminate indices are 1-based. The ordering compares derivative order
/// first and indeterminate index second, which is the ranking the reduction
/// routines expect once the distinguished indeterminate is passed explicitly.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DerivVar {
    pub indet: u32,
    pub order: u32,
}

impl DerivVar {
    pub fn new(indet: u32, order: u32) -> Self {
        assert!(indet >= 1, "indeterminate indices are 1-based");
        DerivVar { indet, order }
    }

    /// The next derivative of the same indeterminate.
    pub fn next(self) -> Self {
        DerivVar {
            indet: self.indet,
            order: self.order + 1,
        }
    }
}

impl Ord for DerivVar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then(self.indet.cmp(&other.indet))
    }
}

impl PartialOrd for DerivVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Power product of derivative variables.
///
/// Exponent pairs are sorted by variable and strictly positive; `degree` is
/// the total degree and `weight` the derivation weight `Σ order·exp`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    vars: Vec<(DerivVar, u32)>,
    degree: u32,
    weight: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            vars: vec![],
            degree: 0,
            weight: 0,
        }
    }

    pub fn var(v: DerivVar) -> Self {
        Monomial::from_pairs(vec![(v, 1)])
    }

    pub fn var_pow(v: DerivVar, e: u32) -> Self {
        Monomial::from_pairs(vec![(v, e)])
    }

    pub fn from_pairs(pairs: Vec<(DerivVar, u32)>) -> Self {
        let mut map: BTreeMap<DerivVar, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        let vars: Vec<(DerivVar, u32)> = map.into_iter().collect();
        let degree = vars.iter().map(|(_, e)| *e).sum();
        let weight = vars.iter().map(|(v, e)| v.order * *e).sum();
        Monomial {
            vars,
            degree,
            weight,
        }
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn exponent(&self, v: DerivVar) -> u32 {
        self.vars
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|k| self.vars[k].1)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = (DerivVar, u32)> + '_ {
        self.vars.iter().copied()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut pairs = self.vars.clone();
        pairs.extend(other.vars.iter().copied());
        Monomial::from_pairs(pairs)
    }

    /// Divide exactly; `None` if some exponent would go negative.
    pub fn try_div(&self, other: &Self) -> Option<Self> {
        let mut pairs = Vec::with_capacity(self.vars.len());
        let mut need: BTreeMap<DerivVar, u32> = other.vars.iter().copied().collect();
        for (v, e) in &self.vars {
            match need.remove(v) {
                None => pairs.push((*v, *e)),
                Some(d) if d <= *e => pairs.push((*v, *e - d)),
                Some(_) => return None,
            }
        }
        if need.is_empty() {
            Some(Monomial::from_pairs(pairs))
        } else {
            None
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.try_div(self).is_some()
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Self) -> Self {
        let pairs = self
            .vars
            .iter()
            .filter_map(|(v, e)| {
                let f = other.exponent(*v);
                (f > 0).then(|| (*v, (*e).min(f)))
            })
            .collect();
        Monomial::from_pairs(pairs)
    }

    /// Split into the part built from derivatives of indeterminate `i` and
    /// the rest.
    pub fn split(&self, i: u32) -> (Monomial, Monomial) {
        let (ours, rest): (Vec<_>, Vec<_>) =
            self.vars.iter().copied().partition(|(v, _)| v.indet == i);
        (Monomial::from_pairs(ours), Monomial::from_pairs(rest))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .cmp(&other.weight)
            .then(self.degree.cmp(&other.degree))
            .then_with(|| {
                // Lexicographic tie-break, scanning variables downward.
                let mut a = self.vars.iter().rev();
                let mut b = other.vars.iter().rev();
                loop {
                    match (a.next(), b.next()) {
                        (None, None) => return Ordering::Equal,
                        (None, Some(_)) => return Ordering::Less,
                        (Some(_), None) => return Ordering::Greater,
                        (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                            // The side holding the higher-ranked variable wins.
                            Ordering::Less => return Ordering::Less,
                            Ordering::Greater => return Ordering::Greater,
                            Ordering::Equal => match ea.cmp(eb) {
                                Ordering::Equal => continue,
                                ord => return ord,
                            },
                        },
                    }
                }
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse differential polynomial over the coefficient field `K`.
#[derive(Clone, PartialEq, Debug)]
pub struct DiffPoly<K> {
    terms: BTreeMap<Monomial, K>,
}

impl<K: DiffField> DiffPoly<K> {
    pub fn zero() -> Self {
        DiffPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        DiffPoly::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        DiffPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        DiffPoly::constant(K::from_int(n))
    }

    pub fn var(v: DerivVar) -> Self {
        DiffPoly::monomial(Monomial::var(v), K::one())
    }

    pub fn monomial(m: Monomial, c: K) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in it {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<K> {
        match self.terms.len() {
            0 => Some(K::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    /// Leading term in the canonical monomial order; `None` for zero.
    pub fn leading(&self) -> Option<(&Monomial, &K)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg_ref(&self) -> Self {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = DiffPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    pub fn map_coeffs<K2: DiffField>(&self, f: impl Fn(&K) -> K2) -> DiffPoly<K2> {
        DiffPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Total derivative: Leibniz across each monomial plus the base field's
    /// derivation on coefficients.
    pub fn derive(&self) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let dc = c.derive();
            if !dc.is_zero() {
                out.add_term(m.clone(), dc);
            }
            for (v, e) in m.vars() {
                let lowered = m
                    .try_div(&Monomial::var(v))
                    .expect("exponent is positive")
                    .mul(&Monomial::var(v.next()));
                out.add_term(lowered, c.clone() * K::from_int(i64::from(e)));
            }
        }
        out
    }

    /// Iterated derivative.
    pub fn derive_n(&self, n: u32) -> Self {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derive();
        }
        p
    }

    /// Highest derivative order of indeterminate `i`; `None` when `i` is
    /// absent (order −∞).
    pub fn order_wrt(&self, i: u32) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.vars())
            .filter(|(v, _)| v.indet == i)
            .map(|(v, _)| v.order)
            .max()
    }

    /// Highest derivative order across all indeterminates; `None` for a
    /// constant polynomial.
    pub fn total_order(&self) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.vars())
            .map(|(v, _)| v.order)
            .max()
    }

    /// All indeterminate indices that occur.
    pub fn indets(&self) -> BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.vars())
            .map(|(v, _)| v.indet)
            .collect()
    }

    pub fn max_indet(&self) -> u32 {
        self.indets().into_iter().max().unwrap_or(0)
    }

    /// All derivative variables that occur.
    pub fn variables(&self) -> BTreeSet<DerivVar> {
        self.terms
            .keys()
            .flat_map(|m| m.vars())
            .map(|(v, _)| v)
            .collect()
    }

    pub fn degree_in(&self, v: DerivVar) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(v))
            .max()
            .unwrap_or(0)
    }

    /// Partial derivative with respect to one derivative variable.
    pub fn partial_deriv(&self, v: DerivVar) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                let lowered = m.try_div(&Monomial::var(v)).expect("exponent positive");
                out.add_term(lowered, c.clone() * K::from_int(i64::from(e)));
            }
        }
        out
    }

    /// Coefficients of the polynomial viewed as univariate in `v`, lowest
    /// power first; the result has `degree_in(v) + 1` entries (one entry
    /// `[self]` when `v` is absent).
    pub fn coeffs_in_var(&self, v: DerivVar) -> Vec<Self> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![DiffPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            let rest = m
                .try_div(&Monomial::var_pow(v, e as u32))
                .expect("exponent matches");
            out[e].add_term(rest, c.clone());
        }
        out
    }

    /// Separant, initial, order and leader degree with respect to
    /// indeterminate `i`.
    pub fn separant_initial(&self, i: u32) -> Result<SepInit<K>> {
        let order = self
            .order_wrt(i)
            .ok_or(Error::UndefinedSeparant { indet: i })?;
        let leader = DerivVar::new(i, order);
        let degree = self.degree_in(leader);
        let separant = self.partial_deriv(leader);
        let initial = self.coeffs_in_var(leader).pop().expect("nonempty");
        Ok(SepInit {
            order,
            degree,
            separant,
            initial,
        })
    }

    /// Apply the differential homomorphism sending each indeterminate to its
    /// image. Every occurring indeterminate needs an image; derivatives map
    /// to derivatives of the image.
    pub fn substitute(&self, images: &BTreeMap<u32, DiffPoly<K>>) -> Result<Self> {
        let mut cache: BTreeMap<u32, Vec<DiffPoly<K>>> = BTreeMap::new();
        for i in self.indets() {
            let base = images
                .get(&i)
                .ok_or(Error::MissingImage { indet: i })?
                .clone();
            cache.insert(i, vec![base]);
        }
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::constant(c.clone());
            for (v, e) in m.vars() {
                let col = cache.get_mut(&v.indet).expect("cached above");
                while col.len() <= v.order as usize {
                    let next = col.last().unwrap().derive();
                    col.push(next);
                }
                acc = acc.mul_ref(&col[v.order as usize].pow(e));
            }
            out = out.add_ref(&acc);
        }
        Ok(out)
    }

    /// Substitute a field value for a single derivative variable, leaving the
    /// rest of the polynomial intact.
    pub fn eval_var(&self, v: DerivVar, value: &K) -> Self {
        let mut acc = DiffPoly::zero();
        let mut power = K::one();
        for c in self.coeffs_in_var(v) {
            acc = acc.add_ref(&c.scale(&power));
            power = power * value.clone();
        }
        acc
    }

    /// Evaluate at a table of field values.
    pub fn evaluate(&self, table: &DerivTable<K>) -> Result<K> {
        let mut out = K::zero();
        for (m, c) in &self.terms {
            let mut acc = c.clone();
            for (v, e) in m.vars() {
                let val = table.get(v).ok_or_else(|| Error::UnassignedVariable {
                    var: format!("#{}^({})", v.indet, v.order),
                })?;
                acc = acc * val.pow_u32(e);
            }
            out = out + acc;
        }
        Ok(out)
    }

    /// Exact multivariate division: `Some(q)` with `self = q·d`, else `None`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quo = DiffPoly::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            let qm = rm.try_div(&dm)?;
            let qc = rc / dc.clone();
            let qt = DiffPoly::monomial(qm, qc);
            rem = rem.sub_ref(&qt.mul_ref(d));
            quo = quo.add_ref(&qt);
        }
        Some(quo)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// Greatest monomial dividing every term (the monomial content).
    pub fn content_monomial(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Monomial::one(),
            Some(m) => m.clone(),
        };
        it.fold(first, |acc, m| acc.gcd(m))
    }
}

/// Separant/initial bundle returned by [`DiffPoly::separant_initial`].
#[derive(Clone, Debug)]
pub struct SepInit<K> {
    /// Order of the leader `x_i^(h)`.
    pub order: u32,
    /// Degree of the polynomial in its leader.
    pub degree: u32,
    pub separant: DiffPoly<K>,
    pub initial: DiffPoly<K>,
}

impl<K: DiffField> Add for &DiffPoly<K> {
    type Output = DiffPoly<K>;
    fn add(self, rhs: Self) -> DiffPoly<K> {
        self.add_ref(rhs)
    }
}

impl<K: DiffField> Sub for &DiffPoly<K> {
    type Output = DiffPoly<K>;
    fn sub(self, rhs: Self) -> DiffPoly<K> {
        self.sub_ref(rhs)
    }
}

impl<K: DiffField> Mul for &DiffPoly<K> {
    type Output = DiffPoly<K>;
    fn mul(self, rhs: Self) -> DiffPoly<K> {
        self.mul_ref(rhs)
    }
}

impl<K: DiffField> Neg for &DiffPoly<K> {
    type Output = DiffPoly<K>;
    fn neg(self) -> DiffPoly<K> {
        self.neg_ref()
    }
}

/// Assignment of field values to derivative variables.
///
/// Values per indeterminate are contiguous from order 0 upward, which the
/// column-based construction enforces.
#[derive(Clone, Debug, Default)]
pub struct DerivTable<K> {
    cols: BTreeMap<u32, Vec<K>>,
}

impl<K: DiffField> DerivTable<K> {
    pub fn new() -> Self {
        DerivTable {
            cols: BTreeMap::new(),
        }
    }

    /// Assign `x_i^(j) = col[j]` for all `j < col.len()`.
    pub fn set_column(&mut self, indet: u32, col: Vec<K>) {
        self.cols.insert(indet, col);
    }

    /// Append the value of the next derivative of `x_i`.
    pub fn push(&mut self, indet: u32, value: K) {
        self.cols.entry(indet).or_default().push(value);
    }

    pub fn get(&self, v: DerivVar) -> Option<&K> {
        self.cols.get(&v.indet).and_then(|c| c.get(v.order as usize))
    }

    /// Highest assigned order for `x_i`.
    pub fn max_order(&self, indet: u32) -> Option<u32> {
        self.cols
            .get(&indet)
            .and_then(|c| c.len().checked_sub(1))
            .map(|n| n as u32)
    }

    pub fn column(&self, indet: u32) -> Option<&[K]> {
        self.cols.get(&indet).map(Vec::as_slice)
    }

    pub fn indets(&self) -> impl Iterator<Item = u32> + '_ {
        self.cols.keys().copied()
    }
}

/// Indeterminate name table (index ↔ display name), 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
}

impl VarNames {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for n in &names {
            if !is_identifier(n) {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: format!("invalid indeterminate name {n:?}"),
                });
            }
            if !seen.insert(n.clone()) {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: format!("duplicate indeterminate name {n:?}"),
                });
            }
        }
        Ok(VarNames { names })
    }

    /// `x1, x2, ..., xn`.
    pub fn numbered(n: u32) -> Self {
        VarNames {
            names: (1..=n).map(|k| format!("x{k}")).collect(),
        }
    }

    pub fn len(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, indet: u32) -> String {
        self.names
            .get((indet - 1) as usize)
            .cloned()
            .unwrap_or_else(|| format!("x{indet}"))
    }

    pub fn index(&self, name: &str) -> Option<u32> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|k| k as u32 + 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    /// Extend with a fresh name (used when adjoining `t`).
    pub fn push(&mut self, name: String) {
        self.names.push(name);
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Render one derivative variable: primes through order 3, caret form above.
fn format_var(v: DerivVar, names: &VarNames) -> String {
    let base = names.name(v.indet);
    match v.order {
        0..=3 => format!("{}{}", base, "'".repeat(v.order as usize)),
        k => format!("{base}^({k})"),
    }
}

/// Canonical text form: terms in descending monomial order, explicit `*`,
/// `^` powers, primes or `x^(k)` for derivatives. Reparses to the same
/// polynomial under the same name table.
pub fn format_diffpoly<K: DiffField>(p: &DiffPoly<K>, names: &VarNames) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (mon, coeff)) in p.terms().rev().enumerate() {
        let neg = coeff.display_negative();
        let mag = if neg { -coeff.clone() } else { coeff.clone() };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mut factors: Vec<String> = Vec::new();
        if mon.is_one() || !mag.is_one() {
            if mag.display_needs_parens() {
                factors.push(format!("({mag})"));
            } else {
                factors.push(mag.to_string());
            }
        }
        // Display order: by indeterminate, then derivative order.
        let mut vs: Vec<(DerivVar, u32)> = mon.vars().collect();
        vs.sort_by_key(|(v, _)| (v.indet, v.order));
        for (v, e) in vs {
            if e == 1 {
                factors.push(format_var(v, names));
            } else {
                factors.push(format!("{}^{}", format_var(v, names), e));
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

impl<K: DiffField> fmt::Display for DiffPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = VarNames::numbered(self.max_indet());
        write!(f, "{}", format_diffpoly(self, &names))
    }
}
