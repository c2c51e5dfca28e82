//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`MultiPoly`] lives in an explicit ordered variable context
//! ([`VarSet`]). Terms are kept in a `BTreeMap` from exponent vector to
//! nonzero coefficient, so equality is structural and iteration order is
//! canonical. Contexts never merge implicitly: binary operations require
//! identical contexts and [`MultiPoly::embed`] moves a polynomial into a
//! larger context explicitly.
//!
//! Degrees stay tiny here (products of multilinear factors), while the
//! number of variables grows with the jet order, hence the sparse
//! exponent-vector representation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rat;
use super::AlgebraError;

/// Ordered list of variable names shared by the polynomials of one context.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Arc<Vec<String>>,
}

impl VarSet {
    /// Builds a context from distinct names; panics on duplicates.
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            assert!(
                !names[..i].contains(n),
                "duplicate variable name `{n}` in context"
            );
        }
        VarSet {
            names: Arc::new(names),
        }
    }

    pub fn empty() -> Self {
        VarSet::new(Vec::<String>::new())
    }

    /// `x{lo}, x{lo+1}, ..., x{hi}` (empty when `hi < lo`).
    pub fn numbered(prefix: &str, lo: usize, hi: usize) -> Self {
        VarSet::new((lo..=hi.max(lo.wrapping_sub(1))).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Concatenation; names must stay distinct.
    pub fn join(&self, other: &VarSet) -> VarSet {
        VarSet::new(self.names.iter().chain(other.names.iter()).cloned())
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names.join(", "))
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names.join(", "))
    }
}

type Expo = Vec<u32>;

/// Sparse multivariate polynomial over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    ctx: VarSet,
    terms: BTreeMap<Expo, Rat>,
}

impl MultiPoly {
    pub fn zero(ctx: &VarSet) -> Self {
        MultiPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &VarSet, c: Rat) -> Self {
        let mut p = MultiPoly::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(vec![0; ctx.len()], c);
        }
        p
    }

    pub fn one(ctx: &VarSet) -> Self {
        MultiPoly::constant(ctx, Rat::one())
    }

    pub fn var(ctx: &VarSet, name: &str) -> Result<Self, AlgebraError> {
        let idx = ctx
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        let mut exp = vec![0; ctx.len()];
        exp[idx] = 1;
        let mut p = MultiPoly::zero(ctx);
        p.terms.insert(exp, Rat::one());
        Ok(p)
    }

    /// Inserts `coef * x^exp`, merging with an existing term.
    pub fn add_term(&mut self, exp: Expo, coef: Rat) -> Result<(), AlgebraError> {
        if exp.len() != self.ctx.len() {
            return Err(AlgebraError::ArityMismatch {
                expected: self.ctx.len(),
                got: exp.len(),
            });
        }
        if coef.is_zero() {
            return Ok(());
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coef;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn context(&self) -> &VarSet {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Rat)> {
        self.terms.iter()
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            let (exp, c) = self.terms.iter().next().unwrap();
            if exp.iter().all(|&e| e == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn degree_in(&self, name: &str) -> Result<u32, AlgebraError> {
        let idx = self
            .ctx
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(self.terms.keys().map(|e| e[idx]).max().unwrap_or(0))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Degree at most one in every variable.
    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&p| p <= 1))
    }

    fn check_ctx(&self, other: &MultiPoly) -> Result<(), AlgebraError> {
        if self.ctx != other.ctx {
            return Err(AlgebraError::ContextMismatch {
                left: self.ctx.to_string(),
                right: other.ctx.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (exp, c) in &other.terms {
            out.add_term(exp.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ctx);
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_ctx(other)?;
        let mut out = MultiPoly::zero(&self.ctx);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Expo = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exp, ca * cb)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one(&self.ctx);
        for _ in 0..e {
            out = out.mul(self).expect("same context");
        }
        out
    }

    /// Full evaluation at a positional point (one value per context variable).
    pub fn evaluate_full(&self, point: &[Rat]) -> Result<Rat, AlgebraError> {
        if point.len() != self.ctx.len() {
            return Err(AlgebraError::ArityMismatch {
                expected: self.ctx.len(),
                got: point.len(),
            });
        }
        let mut acc = Rat::zero();
        for (exp, c) in &self.terms {
            let mut term = c.clone();
            for (i, &p) in exp.iter().enumerate() {
                if p > 0 {
                    term *= point[i].pow(p);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Substitutes one variable by an exact value; the variable stays in the
    /// context with exponent zero.
    pub fn substitute(&self, name: &str, value: &Rat) -> Result<MultiPoly, AlgebraError> {
        let idx = self
            .ctx
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        let mut out = MultiPoly::zero(&self.ctx);
        for (exp, c) in &self.terms {
            let p = exp[idx];
            let mut e = exp.clone();
            e[idx] = 0;
            out.add_term(e, c * &value.pow(p))?;
        }
        Ok(out)
    }

    /// Exact formal derivative.
    pub fn partial_derivative(&self, name: &str) -> Result<MultiPoly, AlgebraError> {
        let idx = self
            .ctx
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        let mut out = MultiPoly::zero(&self.ctx);
        for (exp, c) in &self.terms {
            let p = exp[idx];
            if p == 0 {
                continue;
            }
            let mut e = exp.clone();
            e[idx] = p - 1;
            out.add_term(e, c * &Rat::from_int(p as i64))?;
        }
        Ok(out)
    }

    /// Definite integration of the named variables over the given intervals,
    /// term by term: ∫ x^n dx = (hi^{n+1} − lo^{n+1})/(n+1). Bounds with
    /// `lo > hi` yield the signed integral. The integrated variables are
    /// removed from the context of the result.
    pub fn integrate_box(
        &self,
        bounds: &[(&str, Rat, Rat)],
    ) -> Result<MultiPoly, AlgebraError> {
        let mut current = self.clone();
        for (name, lo, hi) in bounds {
            current = current.integrate_one(name, lo, hi)?;
        }
        let remaining: Vec<&String> = current
            .ctx
            .names()
            .iter()
            .filter(|n| !bounds.iter().any(|(b, _, _)| b == n.as_str()))
            .collect();
        current.restrict(&VarSet::new(remaining.into_iter().cloned()))
    }

    fn integrate_one(&self, name: &str, lo: &Rat, hi: &Rat) -> Result<MultiPoly, AlgebraError> {
        let idx = self
            .ctx
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        let mut out = MultiPoly::zero(&self.ctx);
        for (exp, c) in &self.terms {
            let n = exp[idx];
            let mut e = exp.clone();
            e[idx] = 0;
            let factor = (hi.pow(n + 1) - lo.pow(n + 1)) / Rat::from_int((n + 1) as i64);
            out.add_term(e, c * &factor)?;
        }
        Ok(out)
    }

    /// Moves the polynomial into a context containing all its variables.
    pub fn embed(&self, target: &VarSet) -> Result<MultiPoly, AlgebraError> {
        let map: Vec<usize> = self
            .ctx
            .names()
            .iter()
            .map(|n| {
                target
                    .index_of(n)
                    .ok_or_else(|| AlgebraError::NotEmbeddable { var: n.clone() })
            })
            .collect::<Result<_, _>>()?;
        let mut out = MultiPoly::zero(target);
        for (exp, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &p) in exp.iter().enumerate() {
                e[map[i]] = p;
            }
            out.add_term(e, c.clone())?;
        }
        Ok(out)
    }

    /// Drops unused variables; fails if a dropped variable actually occurs.
    pub fn restrict(&self, target: &VarSet) -> Result<MultiPoly, AlgebraError> {
        let map: Vec<Option<usize>> = self
            .ctx
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect();
        for n in target.names() {
            if !self.ctx.contains(n) {
                return Err(AlgebraError::UnknownVariable(n.clone()));
            }
        }
        let mut out = MultiPoly::zero(target);
        for (exp, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &p) in exp.iter().enumerate() {
                match (map[i], p) {
                    (_, 0) => {}
                    (Some(j), p) => e[j] = p,
                    (None, _) => {
                        return Err(AlgebraError::VariableInUse {
                            var: self.ctx.names()[i].clone(),
                        })
                    }
                }
            }
            out.add_term(e, c.clone())?;
        }
        Ok(out)
    }

    /// Positional rename into a context of the same arity.
    pub fn rename(&self, target: &VarSet) -> Result<MultiPoly, AlgebraError> {
        if target.len() != self.ctx.len() {
            return Err(AlgebraError::ArityMismatch {
                expected: self.ctx.len(),
                got: target.len(),
            });
        }
        Ok(MultiPoly {
            ctx: target.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Coefficient of `name^power` as a polynomial in the same context (the
    /// extracted variable is removed from each term).
    pub fn coeff_of_power(&self, name: &str, power: u32) -> Result<MultiPoly, AlgebraError> {
        let idx = self
            .ctx
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        let mut out = MultiPoly::zero(&self.ctx);
        for (exp, c) in &self.terms {
            if exp[idx] == power {
                let mut e = exp.clone();
                e[idx] = 0;
                out.add_term(e, c.clone())?;
            }
        }
        Ok(out)
    }

    /// Exact range of a multilinear polynomial over an axis-aligned box: the
    /// extrema sit at vertices because the polynomial is affine in each
    /// variable. Only variables that actually occur are enumerated.
    pub fn vertex_range(&self, box_: &[(Rat, Rat)]) -> Result<(Rat, Rat), AlgebraError> {
        if box_.len() != self.ctx.len() {
            return Err(AlgebraError::ArityMismatch {
                expected: self.ctx.len(),
                got: box_.len(),
            });
        }
        for (i, name) in self.ctx.names().iter().enumerate() {
            if self.terms.keys().any(|e| e[i] > 1) {
                return Err(AlgebraError::NotMultilinear { var: name.clone() });
            }
        }
        let active: Vec<usize> = (0..self.ctx.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] == 1))
            .collect();
        let mut point: Vec<Rat> = box_.iter().map(|(lo, _)| lo.clone()).collect();
        let mut min: Option<Rat> = None;
        let mut max: Option<Rat> = None;
        for mask in 0u64..(1u64 << active.len()) {
            for (bit, &i) in active.iter().enumerate() {
                point[i] = if mask >> bit & 1 == 1 {
                    box_[i].1.clone()
                } else {
                    box_[i].0.clone()
                };
            }
            let v = self.evaluate_full(&point)?;
            min = Some(match min {
                None => v.clone(),
                Some(m) => m.min(v.clone()),
            });
            max = Some(match max {
                None => v,
                Some(m) => m.max(v),
            });
        }
        Ok((min.unwrap_or_else(Rat::zero), max.unwrap_or_else(Rat::zero)))
    }

    /// Conservative interval bound over a box, term by term. Sound for any
    /// polynomial; not tight in general.
    pub fn interval_bound(&self, box_: &[(Rat, Rat)]) -> Result<(Rat, Rat), AlgebraError> {
        if box_.len() != self.ctx.len() {
            return Err(AlgebraError::ArityMismatch {
                expected: self.ctx.len(),
                got: box_.len(),
            });
        }
        let mut lo_acc = Rat::zero();
        let mut hi_acc = Rat::zero();
        for (exp, c) in &self.terms {
            let mut m_lo = Rat::one();
            let mut m_hi = Rat::one();
            for (i, &p) in exp.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let (a, b) = pow_interval(&box_[i].0, &box_[i].1, p);
                let c1 = &m_lo * &a;
                let c2 = &m_lo * &b;
                let c3 = &m_hi * &a;
                let c4 = &m_hi * &b;
                m_lo = c1.clone().min(c2.clone()).min(c3.clone()).min(c4.clone());
                m_hi = c1.max(c2).max(c3).max(c4);
            }
            if c.is_negative() {
                lo_acc += &m_hi * c;
                hi_acc += &m_lo * c;
            } else {
                lo_acc += &m_lo * c;
                hi_acc += &m_hi * c;
            }
        }
        Ok((lo_acc, hi_acc))
    }
}

/// Interval power [lo,hi]^p for an interval that may straddle zero.
fn pow_interval(lo: &Rat, hi: &Rat, p: u32) -> (Rat, Rat) {
    let a = lo.pow(p);
    let b = hi.pow(p);
    if p % 2 == 1 {
        (a.min(b.clone()), a.max(b))
    } else {
        let hi_out = a.clone().max(b.clone());
        let lo_out = if lo.is_negative() && hi.is_positive() {
            Rat::zero()
        } else {
            a.min(b)
        };
        (lo_out, hi_out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
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
            let mag = c.abs();
            let vars: Vec<String> = exp
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    let n = &self.ctx.names()[i];
                    if p == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{p}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == Rat::one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {:?}", self, self.ctx)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    coef: Rat,
}

#[derive(Serialize, Deserialize)]
struct MultiPolyRepr {
    vars: Vec<String>,
    terms: Vec<TermRepr>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = MultiPolyRepr {
            vars: self.ctx.names().to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr {
                    exp: e.clone(),
                    coef: c.clone(),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MultiPolyRepr::deserialize(deserializer)?;
        let ctx = VarSet::new(repr.vars);
        let mut p = MultiPoly::zero(&ctx);
        for t in repr.terms {
            if t.coef.is_zero() {
                return Err(D::Error::custom("zero coefficient stored in term"));
            }
            p.add_term(t.exp, t.coef)
                .map_err(|e| D::Error::custom(e.to_string()))?;
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx3() -> VarSet {
        VarSet::new(["x", "y", "z"])
    }

    fn poly(ctx: &VarSet, terms: &[(&[u32], (i64, i64))]) -> MultiPoly {
        let mut p = MultiPoly::zero(ctx);
        for (e, (n, d)) in terms {
            p.add_term(e.to_vec(), Rat::new(*n, *d)).unwrap();
        }
        p
    }

    #[test]
    fn product_expansion() {
        // (1 - 3x)(2/9 - x/3) = x^2 - x + 2/9
        let ctx = VarSet::new(["x"]);
        let a = poly(&ctx, &[(&[0], (1, 1)), (&[1], (-3, 1))]);
        let b = poly(&ctx, &[(&[0], (2, 9)), (&[1], (-1, 3))]);
        let expect = poly(&ctx, &[(&[2], (1, 1)), (&[1], (-1, 1)), (&[0], (2, 9))]);
        assert_eq!(a.mul(&b).unwrap(), expect);
    }

    #[test]
    fn additive_identity_and_square() {
        let ctx = VarSet::new(["x"]);
        let p = poly(&ctx, &[(&[1], (5, 3)), (&[0], (-1, 7))]);
        assert_eq!(p.add(&MultiPoly::zero(&ctx)).unwrap(), p);
        // ((1-x)-x)^2 = 4x^2 - 4x + 1
        let q = poly(&ctx, &[(&[0], (1, 1)), (&[1], (-2, 1))]);
        let expect = poly(&ctx, &[(&[2], (4, 1)), (&[1], (-4, 1)), (&[0], (1, 1))]);
        assert_eq!(q.pow(2), expect);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = MultiPoly::one(&VarSet::new(["x"]));
        let b = MultiPoly::one(&VarSet::new(["y"]));
        assert!(matches!(
            a.add(&b),
            Err(AlgebraError::ContextMismatch { .. })
        ));
    }

    #[test]
    fn evaluation_roots() {
        let ctx = VarSet::new(["x"]);
        let p = poly(&ctx, &[(&[0], (1, 1)), (&[1], (-3, 1))]); // 1 - 3x
        assert_eq!(p.evaluate_full(&[Rat::new(1, 3)]).unwrap(), Rat::zero());
        let q = poly(&ctx, &[(&[0], (2, 9)), (&[1], (-1, 3))]); // 2/9 - x/3
        assert_eq!(q.evaluate_full(&[Rat::new(2, 3)]).unwrap(), Rat::zero());
        let ctx2 = VarSet::new(["x1", "x2"]);
        let xy = poly(&ctx2, &[(&[1, 1], (1, 1))]);
        assert_eq!(
            xy.evaluate_full(&[Rat::one(), Rat::one()]).unwrap(),
            Rat::one()
        );
    }

    #[test]
    fn box_integrals() {
        let ctx = VarSet::new(["x"]);
        // ∫_0^{2/3} (1-3x)(2/9-x/3) dx = 2/81
        let p = poly(&ctx, &[(&[0], (1, 1)), (&[1], (-3, 1))])
            .mul(&poly(&ctx, &[(&[0], (2, 9)), (&[1], (-1, 3))]))
            .unwrap();
        let v = p
            .integrate_box(&[("x", Rat::zero(), Rat::new(2, 3))])
            .unwrap();
        assert_eq!(v.as_constant().unwrap(), Rat::new(2, 81));

        // ∫_0^1 27 (1-x)^3 dx = 27/4
        let q = poly(&ctx, &[(&[0], (1, 1)), (&[1], (-1, 1))])
            .pow(3)
            .scale(&Rat::from_int(27));
        let v = q.integrate_box(&[("x", Rat::zero(), Rat::one())]).unwrap();
        assert_eq!(v.as_constant().unwrap(), Rat::new(27, 4));

        // unit mass over [0,1]^3
        let one = MultiPoly::one(&ctx3());
        let v = one
            .integrate_box(&[
                ("x", Rat::zero(), Rat::one()),
                ("y", Rat::zero(), Rat::one()),
                ("z", Rat::zero(), Rat::one()),
            ])
            .unwrap();
        assert_eq!(v.as_constant().unwrap(), Rat::one());

        // reversed bounds give the signed integral
        let lin = poly(&ctx, &[(&[1], (2, 1))]); // 2x
        let v = lin.integrate_box(&[("x", Rat::one(), Rat::zero())]).unwrap();
        assert_eq!(v.as_constant().unwrap(), Rat::from_int(-1));
    }

    #[test]
    fn partial_integration_keeps_symbolic_rest() {
        let ctx = VarSet::new(["x", "y"]);
        // ∫_0^1 (x + y) dx = 1/2 + y
        let p = poly(&ctx, &[(&[1, 0], (1, 1)), (&[0, 1], (1, 1))]);
        let v = p.integrate_box(&[("x", Rat::zero(), Rat::one())]).unwrap();
        assert_eq!(v.context().names(), &["y".to_string()]);
        let expect = poly(
            &VarSet::new(["y"]),
            &[(&[0], (1, 2)), (&[1], (1, 1))],
        );
        assert_eq!(v, expect);
    }

    #[test]
    fn derivative_examples() {
        let ctx = VarSet::new(["x"]);
        let p = poly(&ctx, &[(&[2], (1, 1)), (&[1], (-1, 1)), (&[0], (2, 9))]);
        let expect = poly(&ctx, &[(&[1], (2, 1)), (&[0], (-1, 1))]);
        assert_eq!(p.partial_derivative("x").unwrap(), expect);

        // ∂(a*h)/∂a at a=0 recovers h|_{a=0}
        let ctx2 = VarSet::new(["a", "h"]);
        let prod = poly(&ctx2, &[(&[1, 1], (1, 1)), (&[2, 0], (3, 1))]); // a*h + 3a^2
        let d = prod
            .partial_derivative("a")
            .unwrap()
            .substitute("a", &Rat::zero())
            .unwrap();
        assert_eq!(d, poly(&ctx2, &[(&[0, 1], (1, 1))]));
    }

    #[test]
    fn embed_restrict_round_trip() {
        let small = VarSet::new(["x"]);
        let big = VarSet::new(["w", "x", "y"]);
        let p = poly(&small, &[(&[1], (1, 1)), (&[0], (-2, 1))]);
        let q = p.embed(&big).unwrap();
        assert_eq!(q.degree_in("x").unwrap(), 1);
        assert_eq!(q.restrict(&small).unwrap(), p);
        // restricting away a used variable fails
        assert!(matches!(
            q.restrict(&VarSet::new(["w"])),
            Err(AlgebraError::VariableInUse { .. })
        ));
    }

    #[test]
    fn vertex_range_of_multilinear() {
        let ctx = VarSet::new(["x", "y"]);
        // 1 - 3x - 4y + 9xy on [0,1]^2: vertex values 1, -2, -3, 3
        let p = poly(
            &ctx,
            &[
                (&[0, 0], (1, 1)),
                (&[1, 0], (-3, 1)),
                (&[0, 1], (-4, 1)),
                (&[1, 1], (9, 1)),
            ],
        );
        let unit = vec![(Rat::zero(), Rat::one()), (Rat::zero(), Rat::one())];
        let (lo, hi) = p.vertex_range(&unit).unwrap();
        assert_eq!(lo, Rat::from_int(-3));
        assert_eq!(hi, Rat::from_int(3));
        let sq = p.pow(2);
        assert!(matches!(
            sq.vertex_range(&unit),
            Err(AlgebraError::NotMultilinear { .. })
        ));
    }

    #[test]
    fn interval_bound_is_sound() {
        let ctx = VarSet::new(["x"]);
        let p = poly(&ctx, &[(&[2], (1, 1)), (&[1], (-1, 1))]); // x^2 - x
        let (lo, hi) = p
            .interval_bound(&[(Rat::zero(), Rat::one())])
            .unwrap();
        // true range is [-1/4, 0]; the bound may be wider but must contain it
        assert!(lo <= Rat::new(-1, 4));
        assert!(hi >= Rat::zero());
    }

    #[test]
    fn serialization_shape_and_round_trip() {
        let ctx = VarSet::new(["a1", "a2"]);
        let p = poly(&ctx, &[(&[3, 1], (4, 1)), (&[0, 4], (-715933, 1944000))]);
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"vars\":[\"a1\",\"a2\"]"));
        assert!(json.contains("\"coef\":\"-715933/1944000\""));
        let q: MultiPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(p, q);
        // byte-identical second round
        assert_eq!(serde_json::to_string(&q).unwrap(), json);
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-20i64..20, 1i64..12).prop_map(|(n, d)| Rat::new(n, d))
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(
            (
                proptest::collection::vec(0u32..3, 3),
                arb_rat(),
            ),
            0..6,
        )
        .prop_map(|terms| {
            let mut p = MultiPoly::zero(&ctx3());
            for (e, c) in terms {
                p.add_term(e, c).unwrap();
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

        #[test]
        fn ring_laws(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            let assoc_l = p.add(&q).unwrap().add(&r).unwrap();
            let assoc_r = p.add(&q.add(&r).unwrap()).unwrap();
            prop_assert_eq!(assoc_l, assoc_r);
            let dist_l = p.mul(&q.add(&r).unwrap()).unwrap();
            let dist_r = p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap();
            prop_assert_eq!(dist_l, dist_r);
            prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
        }

        #[test]
        fn fundamental_theorem(p in arb_poly()) {
            let d = p.partial_derivative("x").unwrap();
            let integrated = d.integrate_box(&[("x", Rat::zero(), Rat::one())]).unwrap();
            let diff = p.substitute("x", &Rat::one()).unwrap()
                .sub(&p.substitute("x", &Rat::zero()).unwrap()).unwrap()
                .restrict(&VarSet::new(["y", "z"])).unwrap();
            prop_assert_eq!(integrated, diff);
        }

        #[test]
        fn evaluation_is_a_ring_homomorphism(p in arb_poly(), q in arb_poly(),
                                             x in arb_rat(), y in arb_rat(), z in arb_rat()) {
            let pt = [x, y, z];
            let sum = p.add(&q).unwrap().evaluate_full(&pt).unwrap();
            prop_assert_eq!(sum, p.evaluate_full(&pt).unwrap() + q.evaluate_full(&pt).unwrap());
            let prod = p.mul(&q).unwrap().evaluate_full(&pt).unwrap();
            prop_assert_eq!(prod, p.evaluate_full(&pt).unwrap() * q.evaluate_full(&pt).unwrap());
        }

        #[test]
        fn interval_bound_contains_samples(p in arb_poly(), t in 0u32..=8) {
            let (lo, hi) = p.interval_bound(&[
                (Rat::zero(), Rat::one()),
                (Rat::zero(), Rat::one()),
                (Rat::zero(), Rat::one()),
            ]).unwrap();
            let s = Rat::new(t as i64, 8);
            let v = p.evaluate_full(&[s.clone(), s.clone(), s]).unwrap();
            prop_assert!(lo <= v && v <= hi);
        }
    }
}
