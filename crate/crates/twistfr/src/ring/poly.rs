use super::{fmt_rational, Coeff, Rational};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Index into the globally ordered variable list of a coordinate ring.
pub type VarId = u32;

/// A monomial as a sorted, duplicate-free list of `(variable, exponent)`
/// pairs with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(VarId, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(smallvec::smallvec![(v, 1)])
    }

    /// Builds a monomial from possibly unsorted, possibly repeated factors.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = &(VarId, u32)> {
        self.0.iter()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: SmallVec<[(VarId, u32); 4]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(v, e)), Some(&(w, f))) => match v.cmp(&w) {
                    Ordering::Less => {
                        out.push((v, e));
                        i += 1;
                    }
                    Ordering::Greater => {
                        out.push((w, f));
                        j += 1;
                    }
                    Ordering::Equal => {
                        out.push((v, e + f));
                        i += 1;
                        j += 1;
                    }
                },
                (Some(&p), None) => {
                    out.push(p);
                    i += 1;
                }
                (None, Some(&p)) => {
                    out.push(p);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    /// Divides out one power of `v`; `None` if `v` does not occur.
    pub fn div_var(&self, v: VarId) -> Option<Monomial> {
        let idx = self.0.iter().position(|&(w, _)| w == v)?;
        let mut out = self.0.clone();
        if out[idx].1 == 1 {
            out.remove(idx);
        } else {
            out[idx].1 -= 1;
        }
        Some(Monomial(out))
    }
}

/// Graded lexicographic order over the global variable order: compare total
/// degree first, then the exponent vectors lexicographically (a higher power
/// on an earlier variable wins).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(v, e)), Some(&(w, f))) => match v.cmp(&w) {
                    // earlier variable present only on one side: that side is
                    // lexicographically larger
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        match e.cmp(&f) {
                            Ordering::Equal => {}
                            ord => return ord,
                        }
                        i += 1;
                        j += 1;
                    }
                },
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => return Ordering::Equal,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("no value assigned to variable {0}")]
    MissingVariable(VarId),
}

/// Sparse multivariate polynomial with exact coefficients.
///
/// Terms are kept in a map with canonical (graded-lex) key order and no zero
/// coefficients, so `==` is structural equality of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparsePoly<C: Coeff = Rational> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> SparsePoly<C> {
    pub fn zero() -> Self {
        SparsePoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        SparsePoly { terms }
    }

    pub fn var(v: VarId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), C::one());
        SparsePoly { terms }
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SparsePoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = Vec::new();
        for m in self.terms.keys() {
            for &(v, _) in m.iter() {
                if !vs.contains(&v) {
                    vs.push(v);
                }
            }
        }
        vs.sort_unstable();
        vs
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = SparsePoly::zero();
        for (m, c) in self.terms.iter() {
            for (n, d) in other.terms.iter() {
                out.add_term(m.mul(n), c.mul(d));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return SparsePoly::zero();
        }
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul(c)))
                .collect(),
        }
    }

    /// Extends a derivation `d` defined on variables to this polynomial by
    /// linearity and the Leibniz rule.
    pub fn apply_derivation(&self, d: impl Fn(VarId) -> SparsePoly<C>) -> Self {
        let mut out = SparsePoly::zero();
        for (m, c) in self.terms.iter() {
            for &(v, e) in m.iter() {
                let rest = m.div_var(v).expect("variable occurs in monomial");
                let dv = d(v);
                if dv.is_zero() {
                    continue;
                }
                // multiplicity e from differentiating v^e
                let mut mult = C::zero();
                for _ in 0..e {
                    mult = mult.add(&C::one());
                }
                let coeff = c.mul(&mult);
                for (n, k) in dv.terms.iter() {
                    out.add_term(rest.mul(n), coeff.mul(k));
                }
            }
        }
        out
    }

    /// Renders with a caller-supplied variable namer, terms in descending
    /// canonical order.
    pub fn render(&self, name: impl Fn(VarId) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            let cs = format!("{c}");
            factors.push(cs);
            for &(v, e) in m.iter() {
                if e == 1 {
                    factors.push(name(v));
                } else {
                    factors.push(format!("{}^{}", name(v), e));
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

impl SparsePoly<Rational> {
    /// Exact evaluation at a full assignment of the polynomial's variables.
    pub fn eval(&self, point: &BTreeMap<VarId, Rational>) -> Result<Rational, PolyError> {
        let mut total = super::rat(0);
        for (m, c) in self.terms.iter() {
            let mut term = c.clone();
            for &(v, e) in m.iter() {
                let x = point.get(&v).ok_or(PolyError::MissingVariable(v))?;
                for _ in 0..e {
                    term *= x;
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Renders with rationals printed as `p/q` and no `1*` prefixes,
    /// e.g. `3/2*g1_11*g2_23`.
    pub fn render_canonical(&self, name: impl Fn(VarId) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut factors: Vec<String> = Vec::new();
            if m.is_one() || c != &super::rat(1) {
                factors.push(fmt_rational(c));
            }
            for &(v, e) in m.iter() {
                if e == 1 {
                    factors.push(name(v));
                } else {
                    factors.push(format!("{}^{}", name(v), e));
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, ratio};

    fn x() -> SparsePoly {
        SparsePoly::var(0)
    }
    fn y() -> SparsePoly {
        SparsePoly::var(1)
    }

    #[test]
    fn eval_examples() {
        // p = x*y - 1 at {x:2, y:3} -> 5
        let p = x().mul(&y()).sub(&SparsePoly::one());
        let mut pt = BTreeMap::new();
        pt.insert(0, rat(2));
        pt.insert(1, rat(3));
        assert_eq!(p.eval(&pt).unwrap(), rat(5));

        // zero polynomial evaluates to 0 anywhere
        assert_eq!(SparsePoly::zero().eval(&pt).unwrap(), rat(0));

        // (x+y)^2 at {1/2, 1/2} -> 1
        let s = x().add(&y());
        let sq = s.mul(&s);
        let mut pt = BTreeMap::new();
        pt.insert(0, ratio(1, 2));
        pt.insert(1, ratio(1, 2));
        assert_eq!(sq.eval(&pt).unwrap(), rat(1));
    }

    #[test]
    fn missing_variable_is_reported() {
        let p = x().mul(&y());
        let mut pt = BTreeMap::new();
        pt.insert(0, rat(2));
        assert_eq!(p.eval(&pt), Err(PolyError::MissingVariable(1)));
    }

    #[test]
    fn difference_normalizes_to_empty() {
        let p = x().mul(&y()).add(&SparsePoly::constant(ratio(7, 3)));
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.sub(&p).num_terms(), 0);
    }

    #[test]
    fn grlex_order() {
        // degree dominates
        assert!(Monomial::from_pairs([(5, 2)]) > Monomial::var(0));
        // same degree: earlier variable wins
        assert!(Monomial::from_pairs([(0, 1), (2, 1)]) > Monomial::from_pairs([(1, 1), (2, 1)]));
        assert!(Monomial::from_pairs([(0, 2)]) > Monomial::from_pairs([(0, 1), (1, 1)]));
    }

    #[test]
    fn derivation_leibniz() {
        // d/dx on x^2 y = 2 x y
        let p = x().mul(&x()).mul(&y());
        let d = p.apply_derivation(|v| {
            if v == 0 {
                SparsePoly::one()
            } else {
                SparsePoly::zero()
            }
        });
        assert_eq!(d, x().mul(&y()).scale(&rat(2)));
    }

    #[test]
    fn render_canonical_form() {
        let p = x().mul(&y()).scale(&ratio(3, 2));
        assert_eq!(
            p.render_canonical(|v| if v == 0 { "x".into() } else { "y".into() }),
            "3/2*x*y"
        );
    }
}
