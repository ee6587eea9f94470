//! Polynomial normal forms for index terms.
//!
//! A normal form is a sum of monomials with nonnegative rational
//! coefficients, a monomial being a multiset of atoms. Atoms are index
//! variables, opaque powers (a power whose exponent is open), and an `Inf`
//! marker for products of ∞ with an open factor: `inf * i` is 0 when i = 0
//! and ∞ otherwise, so it cannot be collapsed to either a finite polynomial
//! or plain ∞.
//!
//! Canonical form:
//! - no zero coefficients; the `inf` flag (plain ∞, which absorbs any sum)
//!   implies an empty coefficient map;
//! - a monomial containing `Inf` has coefficient 1 and all multiplicities 1
//!   (only the zero-set of its atoms matters).

use super::number::Extended;
use crate::syntax::ast::{Index, Sort};
use num::{BigRational, One, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    Var(String, Sort),
    Inf,
    /// A power whose exponent could not be resolved to a closed natural.
    Pow(Box<PolyNF>, Box<PolyNF>),
}

/// A multiset of atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Monomial(pub BTreeMap<Atom, u64>);

impl Monomial {
    pub fn unit() -> Monomial {
        Monomial::default()
    }

    pub fn var(name: &str, sort: Sort) -> Monomial {
        let mut map = BTreeMap::new();
        map.insert(Atom::Var(name.to_string(), sort), 1);
        Monomial(map)
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has_inf(&self) -> bool {
        self.0.contains_key(&Atom::Inf)
    }

    /// Multiset union; collapses multiplicities if the result carries `Inf`.
    fn mul(&self, other: &Monomial) -> Monomial {
        let mut map = self.0.clone();
        for (atom, mult) in &other.0 {
            *map.entry(atom.clone()).or_insert(0) += mult;
        }
        let mut mono = Monomial(map);
        if mono.has_inf() {
            mono.collapse_mults();
        }
        mono
    }

    fn with_inf(&self) -> Monomial {
        let mut map = self.0.clone();
        map.insert(Atom::Inf, 1);
        let mut mono = Monomial(map);
        mono.collapse_mults();
        mono
    }

    fn collapse_mults(&mut self) {
        for mult in self.0.values_mut() {
            *mult = 1;
        }
    }

    fn eval(&self, env: &BTreeMap<String, Extended>) -> Option<Extended> {
        let mut vals = Vec::with_capacity(self.0.len());
        for (atom, mult) in &self.0 {
            let v = match atom {
                Atom::Var(name, _) => env.get(name)?.clone(),
                Atom::Inf => Extended::Infinity,
                Atom::Pow(base, exp) => {
                    let b = base.eval(env)?;
                    let e = exp.eval(env)?;
                    // Size-sorted exponents evaluate to naturals.
                    let k = e.as_nat()?;
                    b.pow(k)
                }
            };
            vals.push(v.pow(*mult));
        }
        // 0 annihilates before ∞ infects.
        if vals.iter().any(|v| v.is_zero()) {
            return Some(Extended::zero());
        }
        let mut acc = Extended::one();
        for v in vals {
            acc = acc.mul(&v);
        }
        Some(acc)
    }

    fn is_closed(&self) -> bool {
        self.0.keys().all(|atom| match atom {
            Atom::Var(..) => false,
            Atom::Inf => true,
            Atom::Pow(base, exp) => base.is_closed() && exp.is_closed(),
        })
    }

    fn collect_vars(&self, out: &mut BTreeSet<(String, Sort)>) {
        for atom in self.0.keys() {
            match atom {
                Atom::Var(name, sort) => {
                    out.insert((name.clone(), *sort));
                }
                Atom::Inf => {}
                Atom::Pow(base, exp) => {
                    base.collect_vars(out);
                    exp.collect_vars(out);
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct PolyNF {
    /// Monomial → coefficient. Empty map with `inf = false` is zero.
    pub terms: BTreeMap<Monomial, BigRational>,
    /// Plain ∞; absorbs every sum, so `terms` is empty when set.
    pub inf: bool,
}

impl PolyNF {
    pub fn zero() -> PolyNF {
        PolyNF::default()
    }

    pub fn infinity() -> PolyNF {
        PolyNF {
            terms: BTreeMap::new(),
            inf: true,
        }
    }

    pub fn constant(q: BigRational) -> PolyNF {
        let mut poly = PolyNF::zero();
        poly.insert(Monomial::unit(), q);
        poly
    }

    pub fn var(name: &str, sort: Sort) -> PolyNF {
        let mut poly = PolyNF::zero();
        poly.insert(Monomial::var(name, sort), BigRational::one());
        poly
    }

    pub fn is_zero(&self) -> bool {
        !self.inf && self.terms.is_empty()
    }

    pub fn is_infinite(&self) -> bool {
        self.inf
    }

    fn insert(&mut self, mono: Monomial, coeff: BigRational) {
        if self.inf || coeff.is_zero() {
            return;
        }
        if mono.has_inf() {
            if mono.0.len() == 1 {
                // ∞ times nothing open: absorbs the whole polynomial.
                *self = PolyNF::infinity();
            } else {
                self.terms.insert(mono, BigRational::one());
            }
        } else {
            let entry = self.terms.entry(mono.clone()).or_insert_with(BigRational::zero);
            *entry += coeff;
            if entry.is_zero() {
                self.terms.remove(&mono);
            }
        }
    }

    pub fn add(&self, other: &PolyNF) -> PolyNF {
        if self.inf || other.inf {
            return PolyNF::infinity();
        }
        let mut out = self.clone();
        for (mono, coeff) in &other.terms {
            out.insert(mono.clone(), coeff.clone());
        }
        out
    }

    pub fn mul(&self, other: &PolyNF) -> PolyNF {
        if self.is_zero() || other.is_zero() {
            return PolyNF::zero();
        }
        match (self.inf, other.inf) {
            (true, true) => PolyNF::infinity(),
            (true, false) => other.mul_infinity(),
            (false, true) => self.mul_infinity(),
            (false, false) => {
                let mut out = PolyNF::zero();
                for (ma, ca) in &self.terms {
                    for (mb, cb) in &other.terms {
                        out.insert(ma.mul(mb), ca * cb);
                        if out.inf {
                            return out;
                        }
                    }
                }
                out
            }
        }
    }

    /// Multiply a finite polynomial by plain ∞. A positive constant part
    /// forces ∞ outright; open monomials keep an `Inf` marker.
    fn mul_infinity(&self) -> PolyNF {
        if self.terms.contains_key(&Monomial::unit()) {
            return PolyNF::infinity();
        }
        let mut out = PolyNF::zero();
        for mono in self.terms.keys() {
            out.insert(mono.with_inf(), BigRational::one());
        }
        out
    }

    pub fn pow_nat(&self, exp: u64) -> PolyNF {
        let mut out = PolyNF::constant(BigRational::one());
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.terms.keys().all(|m| m.is_closed())
    }

    /// Exact value under a valuation; `None` on an unbound variable.
    pub fn eval(&self, env: &BTreeMap<String, Extended>) -> Option<Extended> {
        if self.inf {
            return Some(Extended::Infinity);
        }
        let mut acc = Extended::zero();
        for (mono, coeff) in &self.terms {
            let v = mono.eval(env)?;
            acc = acc.add(&Extended::from_rational(coeff.clone()).mul(&v));
        }
        Some(acc)
    }

    /// Value of a closed normal form.
    pub fn closed_value(&self) -> Option<Extended> {
        self.eval(&BTreeMap::new())
    }

    pub fn free_vars(&self) -> BTreeSet<(String, Sort)> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<(String, Sort)>) {
        for mono in self.terms.keys() {
            mono.collect_vars(out);
        }
    }

    /// The constant coefficient.
    pub fn constant_part(&self) -> BigRational {
        self.terms
            .get(&Monomial::unit())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Subtract a natural from the constant part, when possible. Used to
    /// orient case-refinement equalities `I = m + 1` as `m = I - 1`.
    pub fn sub_constant(&self, n: u64) -> Option<PolyNF> {
        if self.inf {
            return Some(self.clone());
        }
        let c = self.constant_part();
        let n = BigRational::from_integer(n.into());
        if c < n {
            return None;
        }
        let mut out = self.clone();
        let rest = c - n;
        out.terms.remove(&Monomial::unit());
        out.insert(Monomial::unit(), rest);
        Some(out)
    }

    /// Back to an index term; `normalize ∘ to_index` is the identity on
    /// normal forms.
    pub fn to_index(&self) -> Index {
        if self.inf {
            return Index::Inf;
        }
        if self.terms.is_empty() {
            return Index::Nat(0);
        }
        let mut total: Option<Index> = None;
        for (mono, coeff) in &self.terms {
            let term = monomial_to_index(mono, coeff);
            total = Some(match total {
                None => term,
                Some(acc) => Index::sum(acc, term),
            });
        }
        total.unwrap()
    }
}

fn rational_to_index(q: &BigRational) -> Index {
    if q.is_integer() {
        if let Some(n) = q.numer().to_u64() {
            return Index::Nat(n);
        }
    }
    Index::Rat(q.clone())
}

fn monomial_to_index(mono: &Monomial, coeff: &BigRational) -> Index {
    let mut factors: Vec<Index> = Vec::new();
    if !coeff.is_one() || mono.is_unit() {
        factors.push(rational_to_index(coeff));
    }
    for (atom, mult) in &mono.0 {
        let base = match atom {
            Atom::Var(name, sort) => Index::Var(name.clone(), *sort),
            Atom::Inf => Index::Inf,
            Atom::Pow(b, e) => Index::pow(b.to_index(), e.to_index()),
        };
        let factor = if *mult == 1 {
            base
        } else {
            Index::pow(base, Index::Nat(*mult))
        };
        factors.push(factor);
    }
    let mut it = factors.into_iter();
    let first = it.next().unwrap();
    it.fold(first, Index::prod)
}

/// Normal form of an index term. Distributes sums and products, expands
/// closed-exponent powers, and leaves open-exponent powers opaque. The
/// result evaluates identically to the input under every valuation.
pub fn normalize(index: &Index) -> PolyNF {
    match index {
        Index::Var(name, sort) => PolyNF::var(name, *sort),
        Index::Nat(n) => PolyNF::constant(BigRational::from_integer((*n).into())),
        Index::Rat(q) => PolyNF::constant(q.clone()),
        Index::Inf => PolyNF::infinity(),
        Index::Sum(a, b) => normalize(a).add(&normalize(b)),
        Index::Prod(a, b) => normalize(a).mul(&normalize(b)),
        Index::Pow(base, exp) => {
            let base_nf = normalize(base);
            let exp_nf = normalize(exp);
            if let Some(k) = exp_nf.closed_value().and_then(|v| v.as_nat()) {
                return base_nf.pow_nat(k);
            }
            // 1^e is 1 for every e, including open ones.
            if base_nf.closed_value() == Some(Extended::one()) {
                return PolyNF::constant(BigRational::one());
            }
            let mut mono = BTreeMap::new();
            mono.insert(Atom::Pow(Box::new(base_nf), Box::new(exp_nf)), 1);
            let mut poly = PolyNF::zero();
            poly.insert(Monomial(mono), BigRational::one());
            poly
        }
    }
}
