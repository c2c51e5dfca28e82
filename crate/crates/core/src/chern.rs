//! The Chow/Chern ring of the tower of projectivized bundles over a
//! surface — the algebraic route to the intersection numbers.
//!
//! Generators are `u_1, …, u_k` (first Chern classes of the tautological
//! bundles, complex degree 1), `c1` (degree 1) and `c2` (degree 2) pulled
//! back from the base surface. Two families of relations cut the ring
//! down:
//!
//! * pullbacks of classes of degree > 2 from a surface vanish, and every
//!   class of degree > dim X_k = k+2 vanishes;
//! * on each level, `u_j² + c₁(V_{j−1}) u_j + c₂(V_{j−1}) = 0`, the fiber
//!   relation of the projectivized bundle. The sign convention is pinned
//!   by the anchor `u₁³ = c₁² − c₂` and guarded by a unit test.
//!
//! `(a_1 u_1 + … + a_k u_k)^{k+2}` expanded here equals
//! `F_k(a) c₁² − G_k(a) c₂`, with `F_k`, `G_k` universal polynomials: the
//! independent oracle against the Morse-integral route.

use crate::algebra::{AlgebraError, MultiPoly, Rat, VarSet};
use crate::recursion::{a_context, Weights};

#[derive(Debug, Clone, thiserror::Error)]
pub enum ChernError {
    #[error("tower level {level} exceeds ring order {k}")]
    LevelOutOfRange { level: usize, k: usize },
    #[error("class does not reduce to f*c1^2 + g*c2 after pushforward: residue {0}")]
    NotATopClass(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The truncated Chern ring of `X_k`, with or without the symbolic weight
/// variables `a_1..a_k` adjoined to the coefficient side.
pub struct TowerRing {
    k: usize,
    ctx: VarSet,
    /// `c₁(V_j)` for `j = 0..k`, in normal form.
    c1v: Vec<MultiPoly>,
    /// `c₂(V_j)` for `j = 0..k`, in normal form.
    c2v: Vec<MultiPoly>,
    /// `relations[j-1]` = normal form of `u_j²`.
    relations: Vec<MultiPoly>,
}

impl TowerRing {
    pub fn new(k: usize) -> Self {
        Self::build(k, false)
    }

    /// Ring with the weight variables adjoined, for symbolic expansion.
    pub fn with_weights(k: usize) -> Self {
        Self::build(k, true)
    }

    fn build(k: usize, with_weights: bool) -> Self {
        let mut names: Vec<String> = (1..=k).map(|j| format!("u{j}")).collect();
        names.push("c1".into());
        names.push("c2".into());
        let mut ctx = VarSet::new(names);
        if with_weights {
            ctx = ctx.join(&a_context(k));
        }
        let c1 = MultiPoly::var(&ctx, "c1").unwrap();
        let c2 = MultiPoly::var(&ctx, "c2").unwrap();
        let mut c1v = vec![c1];
        let mut c2v = vec![c2];
        let mut relations = Vec::with_capacity(k);
        for j in 1..=k {
            let u = MultiPoly::var(&ctx, &format!("u{j}")).unwrap();
            // u_j^2 = -c1(V_{j-1}) u_j - c2(V_{j-1}): already in normal form
            // because both classes are square-free in the u's and of level < j.
            let rel = c1v[j - 1]
                .mul(&u)
                .unwrap()
                .add(&c2v[j - 1])
                .unwrap()
                .neg();
            relations.push(rel);
            c1v.push(c1v[j - 1].add(&u).unwrap());
            // c2(V_j) = -c1(V_{j-1}) u_j - 2 u_j^2 reduces to
            // c1(V_{j-1}) u_j + 2 c2(V_{j-1}).
            c2v.push(
                c1v[j - 1]
                    .mul(&u)
                    .unwrap()
                    .add(&c2v[j - 1].scale(&Rat::from_int(2)))
                    .unwrap(),
            );
        }
        TowerRing {
            k,
            ctx,
            c1v,
            c2v,
            relations,
        }
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn context(&self) -> &VarSet {
        &self.ctx
    }

    fn u_index(&self, j: usize) -> usize {
        j - 1
    }

    pub fn u(&self, j: usize) -> MultiPoly {
        MultiPoly::var(&self.ctx, &format!("u{j}")).expect("generator")
    }

    /// Chern classes of `V_j` in the literal Whitney-formula shape:
    /// `(c₁(V_{j−1}) + u_j, −c₁(V_{j−1}) u_j − 2 u_j²)`; level 0 is `(c₁, c₂)`.
    pub fn chern_of_level(&self, j: usize) -> Result<(MultiPoly, MultiPoly), ChernError> {
        if j > self.k {
            return Err(ChernError::LevelOutOfRange { level: j, k: self.k });
        }
        if j == 0 {
            return Ok((self.c1v[0].clone(), self.c2v[0].clone()));
        }
        let u = self.u(j);
        let c1_here = self.c1v[j - 1].add(&u)?;
        let c2_here = self.c1v[j - 1]
            .mul(&u)?
            .add(&u.pow(2).scale(&Rat::from_int(2)))?
            .neg();
        Ok((c1_here, c2_here))
    }

    /// Complex degree of one monomial: `u`'s and `c1` count 1, `c2` counts 2,
    /// weight variables count 0.
    fn complex_degree(&self, exp: &[u32]) -> (u32, u32) {
        let c1_idx = self.k;
        let c2_idx = self.k + 1;
        let cdeg = exp[c1_idx] + 2 * exp[c2_idx];
        let udeg: u32 = exp[..self.k].iter().sum();
        (cdeg, udeg)
    }

    /// Drops monomials killed for dimension reasons.
    pub fn truncate(&self, e: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ctx);
        for (exp, c) in e.terms() {
            let (cdeg, udeg) = self.complex_degree(exp);
            if cdeg > 2 || cdeg + udeg > (self.k + 2) as u32 {
                continue;
            }
            out.add_term(exp.clone(), c.clone()).unwrap();
        }
        out
    }

    /// Normal form: fiber relations applied until every `u_j` exponent is
    /// at most 1, with eager dimension truncation.
    pub fn reduce(&self, e: &MultiPoly) -> MultiPoly {
        let mut cur = self.truncate(e);
        loop {
            let mut next = MultiPoly::zero(&self.ctx);
            let mut changed = false;
            'terms: for (exp, c) in cur.terms() {
                for j in (1..=self.k).rev() {
                    if exp[self.u_index(j)] >= 2 {
                        let mut rest = exp.clone();
                        rest[self.u_index(j)] -= 2;
                        let mut mono = MultiPoly::zero(&self.ctx);
                        mono.add_term(rest, c.clone()).unwrap();
                        next = next
                            .add(&mono.mul(&self.relations[j - 1]).unwrap())
                            .unwrap();
                        changed = true;
                        continue 'terms;
                    }
                }
                next.add_term(exp.clone(), c.clone()).unwrap();
            }
            cur = self.truncate(&next);
            if !changed {
                return cur;
            }
        }
    }

    /// Iterated fiber integration down to the base: at each level
    /// `π_* u_j = 1` and `π_* 1 = 0`, i.e. read off the `u_j`-linear
    /// coefficient, from the top of the tower down.
    pub fn pushforward_to_base(&self, e: &MultiPoly) -> Result<MultiPoly, ChernError> {
        let mut cur = self.reduce(e);
        for j in (1..=self.k).rev() {
            cur = cur.coeff_of_power(&format!("u{j}"), 1)?;
        }
        Ok(cur)
    }

    /// Expands `(a_1 u_1 + … + a_k u_k)^{k+2}` symbolically and reads off
    /// the universal intersection polynomials. Requires a ring built with
    /// [`TowerRing::with_weights`].
    pub fn intersection_polynomials(&self) -> Result<IntersectionForm, ChernError> {
        let mut lin = MultiPoly::zero(&self.ctx);
        for j in 1..=self.k {
            let a_j = MultiPoly::var(&self.ctx, &format!("a{j}"))?;
            lin = lin.add(&a_j.mul(&self.u(j))?)?;
        }
        let mut acc = MultiPoly::one(&self.ctx);
        for _ in 0..self.k + 2 {
            acc = self.reduce(&acc.mul(&lin)?);
        }
        let pushed = self.pushforward_to_base(&acc)?;
        // pushed = f*c1^2 + g*c2 with coefficients in the a's
        let ak_ctx = a_context(self.k);
        let f = pushed.coeff_of_power("c1", 2)?.coeff_of_power("c2", 0)?;
        let g = pushed.coeff_of_power("c2", 1)?.coeff_of_power("c1", 0)?;
        let rebuilt = f
            .mul(&MultiPoly::var(&self.ctx, "c1")?.pow(2))?
            .add(&g.mul(&MultiPoly::var(&self.ctx, "c2")?)?)?;
        if rebuilt != pushed {
            return Err(ChernError::NotATopClass(
                pushed.sub(&rebuilt)?.to_string(),
            ));
        }
        Ok(IntersectionForm {
            k: self.k,
            f: f.restrict(&ak_ctx)?,
            g: g.neg().restrict(&ak_ctx)?,
        })
    }
}

/// The universal pair `F_k`, `G_k` with
/// `(a·u)^{k+2} = F_k(a) c₁² − G_k(a) c₂`, homogeneous of degree `k+2`
/// in the context `a_1..a_k`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct IntersectionForm {
    pub k: usize,
    pub f: MultiPoly,
    pub g: MultiPoly,
}

impl IntersectionForm {
    /// Exact values `(F_k(a), G_k(a))`.
    pub fn eval(&self, a: &Weights) -> Result<(Rat, Rat), AlgebraError> {
        let point: Vec<Rat> = a.as_slice().to_vec();
        Ok((
            self.f.evaluate_full(&point)?,
            self.g.evaluate_full(&point)?,
        ))
    }

    /// `F_k(a)/G_k(a)`, or `None` where `G_k` vanishes.
    pub fn ratio(&self, a: &Weights) -> Result<Option<Rat>, AlgebraError> {
        let (f, g) = self.eval(a)?;
        if g.is_zero() {
            return Ok(None);
        }
        Ok(Some(f / g))
    }
}

/// Convenience: the intersection form of order `k` through the ring engine.
pub fn intersection_polynomials(k: usize) -> Result<IntersectionForm, ChernError> {
    TowerRing::with_weights(k).intersection_polynomials()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(ctx: &VarSet, pairs: &[(&str, u32)], coef: Rat) -> MultiPoly {
        let mut exp = vec![0u32; ctx.len()];
        for (name, p) in pairs {
            exp[ctx.index_of(name).unwrap()] = *p;
        }
        let mut out = MultiPoly::zero(ctx);
        out.add_term(exp, coef).unwrap();
        out
    }

    #[test]
    fn chern_classes_of_low_levels() {
        let ring = TowerRing::new(2);
        let ctx = ring.context().clone();
        let (c1_0, c2_0) = ring.chern_of_level(0).unwrap();
        assert_eq!(c1_0, term(&ctx, &[("c1", 1)], Rat::one()));
        assert_eq!(c2_0, term(&ctx, &[("c2", 1)], Rat::one()));

        let (c1_1, c2_1) = ring.chern_of_level(1).unwrap();
        let expect_c1 = term(&ctx, &[("c1", 1)], Rat::one())
            .add(&term(&ctx, &[("u1", 1)], Rat::one()))
            .unwrap();
        assert_eq!(c1_1, expect_c1);
        let expect_c2 = term(&ctx, &[("c1", 1), ("u1", 1)], Rat::from_int(-1))
            .add(&term(&ctx, &[("u1", 2)], Rat::from_int(-2)))
            .unwrap();
        assert_eq!(c2_1, expect_c2);

        // c2(V_2) = -(c1+u1) u2 - 2 u2^2
        let (_, c2_2) = ring.chern_of_level(2).unwrap();
        let expect = term(&ctx, &[("c1", 1), ("u2", 1)], Rat::from_int(-1))
            .add(&term(&ctx, &[("u1", 1), ("u2", 1)], Rat::from_int(-1)))
            .unwrap()
            .add(&term(&ctx, &[("u2", 2)], Rat::from_int(-2)))
            .unwrap();
        assert_eq!(c2_2, expect);
    }

    #[test]
    fn fiber_relation_sign_anchor() {
        // u1^2 -> -c1 u1 - c2, and u1^3 pushes to c1^2 - c2
        let ring = TowerRing::new(1);
        let ctx = ring.context().clone();
        let u1 = ring.u(1);
        let reduced = ring.reduce(&u1.pow(2));
        let expect = term(&ctx, &[("c1", 1), ("u1", 1)], Rat::from_int(-1))
            .add(&term(&ctx, &[("c2", 1)], Rat::from_int(-1)))
            .unwrap();
        assert_eq!(reduced, expect);

        let top = ring.pushforward_to_base(&u1.pow(3)).unwrap();
        let expect = term(&ctx, &[("c1", 2)], Rat::one())
            .add(&term(&ctx, &[("c2", 1)], Rat::from_int(-1)))
            .unwrap();
        assert_eq!(top, expect);

        // pullbacks of degree-3 classes from the surface die
        let c1 = MultiPoly::var(&ctx, "c1").unwrap();
        assert!(ring.reduce(&c1.pow(3)).is_zero());
    }

    #[test]
    fn order_one_form() {
        let form = intersection_polynomials(1).unwrap();
        let actx = a_context(1);
        let cube = term(&actx, &[("a1", 3)], Rat::one());
        assert_eq!(form.f, cube);
        assert_eq!(form.g, cube);
        assert_eq!(
            form.ratio(&Weights::from_ints(&[1])).unwrap(),
            Some(Rat::one())
        );
    }

    #[test]
    fn order_two_form_matches_frozen_oracle() {
        // Frozen from an independent computer-algebra expansion of the ring:
        // F2 = 4 a1^3 a2 + 4 a1 a2^3 - a2^4
        // G2 = 4 a1^3 a2 - 6 a1^2 a2^2 + 12 a1 a2^3 - 5 a2^4
        let form = intersection_polynomials(2).unwrap();
        let actx = a_context(2);
        let mk = |pairs: &[(&str, u32)], n: i64| term(&actx, pairs, Rat::from_int(n));
        let f_expect = mk(&[("a1", 3), ("a2", 1)], 4)
            .add(&mk(&[("a1", 1), ("a2", 3)], 4))
            .unwrap()
            .add(&mk(&[("a2", 4)], -1))
            .unwrap();
        let g_expect = mk(&[("a1", 3), ("a2", 1)], 4)
            .add(&mk(&[("a1", 2), ("a2", 2)], -6))
            .unwrap()
            .add(&mk(&[("a1", 1), ("a2", 3)], 12))
            .unwrap()
            .add(&mk(&[("a2", 4)], -5))
            .unwrap();
        assert_eq!(form.f, f_expect);
        assert_eq!(form.g, g_expect);

        // anchor evaluations
        assert_eq!(
            form.eval(&Weights::from_ints(&[2, 1])).unwrap(),
            (Rat::from_int(39), Rat::from_int(27))
        );
        assert_eq!(
            form.eval(&Weights::from_ints(&[0, 1])).unwrap(),
            (Rat::from_int(-1), Rat::from_int(-5))
        );
        assert_eq!(
            form.ratio(&Weights::from_ints(&[2, 1])).unwrap(),
            Some(Rat::new(13, 9))
        );
    }

    #[test]
    fn order_three_seed_values() {
        let form = intersection_polynomials(3).unwrap();
        let (f, g) = form.eval(&Weights::from_ints(&[6, 2, 1])).unwrap();
        assert_eq!(f, Rat::from_int(7170));
        assert_eq!(g, Rat::from_int(4452));
        assert_eq!(f / g, Rat::new(1195, 742));
    }

    #[test]
    fn forms_are_homogeneous_of_degree_k_plus_2() {
        for k in 1..=4 {
            let form = intersection_polynomials(k).unwrap();
            for poly in [&form.f, &form.g] {
                for (exp, _) in poly.terms() {
                    assert_eq!(exp.iter().sum::<u32>(), (k + 2) as u32);
                }
            }
        }
    }

    #[test]
    fn ratio_none_where_g_vanishes() {
        let form = intersection_polynomials(2).unwrap();
        // G2(1, 0) = 0
        assert_eq!(form.ratio(&Weights::from_ints(&[1, 0])).unwrap(), None);
    }
}
