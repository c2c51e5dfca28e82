//! The surface-case curvature recursion.
//!
//! Over a surface the curvature coefficients of the tautological bundles
//! propagate one level up the tower through products of 2×2 matrices
//! `R_s·T` with `R_s = [[1−x_s, x_s],[x_s, 1−x_s]]`, `T = [[1,−1],[0,1]]`
//! and `x_s = |v_s¹|² ∈ [0,1]`. This module builds those products exactly
//! as polynomial matrices, derives the vertical eigenvalues `θ_s^k` and the
//! horizontal trace/determinant pair of the curvature of a weighted bundle,
//! and exposes the single numeric propagation step.

use std::sync::{Mutex, OnceLock};

use crate::algebra::{AlgebraError, MultiPoly, Rat, VarSet};

#[derive(Debug, Clone, thiserror::Error)]
pub enum RecursionError {
    #[error("invalid level pair (p, q) = ({p}, {q}): need p >= q >= 1")]
    InvalidLevels { p: usize, q: usize },
    #[error("vertical index s = {s} out of range for order k = {k}")]
    SOutOfRange { s: usize, k: usize },
    #[error("weight vector has length {got}, expected {expected}")]
    WeightLength { expected: usize, got: usize },
    #[error("fiber coordinate {0} outside [0, 1]")]
    XOutOfDomain(Rat),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Value of the formal pair `(α_{0,1}, β_{0,1})` closing the horizontal
/// sums at level zero.
///
/// The empty matrix product is the identity, which forces `(1, 0)`; that
/// choice is the one consistent with the order-one curvature and with the
/// intersection-ring numbers, and it is the default everywhere. The
/// alternative `(1, 1)` is kept selectable so the discrepancy stays visible
/// in tests instead of silently reconciled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryConvention {
    /// `α_{0,1} = 1`, `β_{0,1} = 0` (empty product = identity).
    EmptyProduct,
    /// `α_{0,1} = β_{0,1} = 1`.
    AlphaBetaOne,
}

impl Default for BoundaryConvention {
    fn default() -> Self {
        BoundaryConvention::EmptyProduct
    }
}

impl BoundaryConvention {
    pub fn tag(self) -> &'static str {
        match self {
            BoundaryConvention::EmptyProduct => "alpha1-beta0",
            BoundaryConvention::AlphaBetaOne => "alpha1-beta1",
        }
    }
}

/// Weight vector `(a_1, …, a_k)` of a weighted bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weights {
    a: Vec<Rat>,
}

impl Weights {
    pub fn new(a: Vec<Rat>) -> Self {
        assert!(!a.is_empty(), "weight vector must have k >= 1 entries");
        Weights { a }
    }

    pub fn from_ints(a: &[i64]) -> Self {
        Weights::new(a.iter().map(|&n| Rat::from_int(n)).collect())
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    /// 1-based access: `get(j)` is `a_j`.
    pub fn get(&self, j: usize) -> &Rat {
        &self.a[j - 1]
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.a
    }
}

/// Context `x_q, …, x_p` (empty when `p < q`).
pub fn x_context(q: usize, p: usize) -> VarSet {
    if p < q {
        VarSet::empty()
    } else {
        VarSet::new((q..=p).map(|i| format!("x{i}")))
    }
}

/// Context `a_1, …, a_k`.
pub fn a_context(k: usize) -> VarSet {
    VarSet::new((1..=k).map(|i| format!("a{i}")))
}

/// The exact polynomial matrix `R_p·T · R_{p−1}·T ⋯ R_q·T`, laid out as
/// `[[δ, γ], [β, α]]`, with entries multilinear in `x_q, …, x_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    pub p: usize,
    pub q: usize,
    pub alpha: MultiPoly,
    pub beta: MultiPoly,
    pub gamma: MultiPoly,
    pub delta: MultiPoly,
}

impl TransferMatrix {
    pub fn context(&self) -> &VarSet {
        self.alpha.context()
    }

    /// `δα − γβ`, which must equal `Π_s (1 − 2 x_s)`.
    pub fn det(&self) -> MultiPoly {
        self.delta
            .mul(&self.alpha)
            .and_then(|da| da.sub(&self.gamma.mul(&self.beta)?))
            .expect("entries share a context")
    }

    fn mul_left_rt(&self, ctx: &VarSet, x: &MultiPoly) -> TransferMatrix {
        // R(x)·T = [[1-x, 2x-1], [x, 1-2x]] applied on the left.
        let one = MultiPoly::one(ctx);
        let m00 = one.sub(x).unwrap();
        let m01 = x.scale(&Rat::from_int(2)).sub(&one).unwrap();
        let m10 = x.clone();
        let m11 = one.sub(&x.scale(&Rat::from_int(2))).unwrap();
        let delta = m00.mul(&self.delta).unwrap().add(&m01.mul(&self.beta).unwrap()).unwrap();
        let gamma = m00.mul(&self.gamma).unwrap().add(&m01.mul(&self.alpha).unwrap()).unwrap();
        let beta = m10.mul(&self.delta).unwrap().add(&m11.mul(&self.beta).unwrap()).unwrap();
        let alpha = m10.mul(&self.gamma).unwrap().add(&m11.mul(&self.alpha).unwrap()).unwrap();
        TransferMatrix {
            p: self.p + 1,
            q: self.q,
            alpha,
            beta,
            gamma,
            delta,
        }
    }
}

fn transfer_cache() -> &'static Mutex<Vec<TransferMatrix>> {
    static CACHE: OnceLock<Mutex<Vec<TransferMatrix>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// `R_m·T ⋯ R_1·T` in context `x_1..x_m`, memoized: the matrix for general
/// `(p, q)` only depends on `p − q` up to relabeling.
fn transfer_base(m: usize) -> TransferMatrix {
    debug_assert!(m >= 1);
    let mut cache = transfer_cache().lock().unwrap();
    while cache.len() < m {
        let level = cache.len() + 1;
        let ctx = x_context(1, level);
        let next = if level == 1 {
            let x = MultiPoly::var(&ctx, "x1").unwrap();
            let identity = TransferMatrix {
                p: 0,
                q: 1,
                alpha: MultiPoly::one(&ctx),
                beta: MultiPoly::zero(&ctx),
                gamma: MultiPoly::zero(&ctx),
                delta: MultiPoly::one(&ctx),
            };
            identity.mul_left_rt(&ctx, &x)
        } else {
            let prev = cache.last().unwrap();
            let lifted = TransferMatrix {
                p: prev.p,
                q: prev.q,
                alpha: prev.alpha.embed(&ctx).unwrap(),
                beta: prev.beta.embed(&ctx).unwrap(),
                gamma: prev.gamma.embed(&ctx).unwrap(),
                delta: prev.delta.embed(&ctx).unwrap(),
            };
            let x = MultiPoly::var(&ctx, &format!("x{level}")).unwrap();
            lifted.mul_left_rt(&ctx, &x)
        };
        cache.push(next);
    }
    cache[m - 1].clone()
}

/// The product `R_p·T ⋯ R_q·T` as an exact polynomial matrix.
pub fn transfer_matrix(p: usize, q: usize) -> Result<TransferMatrix, RecursionError> {
    if q < 1 || p < q {
        return Err(RecursionError::InvalidLevels { p, q });
    }
    let base = transfer_base(p - q + 1);
    let target = x_context(q, p);
    Ok(TransferMatrix {
        p,
        q,
        alpha: base.alpha.rename(&target)?,
        beta: base.beta.rename(&target)?,
        gamma: base.gamma.rename(&target)?,
        delta: base.delta.rename(&target)?,
    })
}

/// `y_{p,q} = α_{p,q} − β_{p,q}`; the boundary value `y_{0,1} = 1` is the
/// constant polynomial in the empty context.
pub fn y(p: usize, q: usize) -> Result<MultiPoly, RecursionError> {
    if p + 1 == q {
        return Ok(MultiPoly::one(&VarSet::empty()));
    }
    let t = transfer_matrix(p, q)?;
    Ok(t.alpha.sub(&t.beta)?)
}

/// `w_{p,q} = α_{p,q} + β_{p,q}`; `w_{0,1} = 1` as for `y`.
pub fn w(p: usize, q: usize) -> Result<MultiPoly, RecursionError> {
    if p + 1 == q {
        return Ok(MultiPoly::one(&VarSet::empty()));
    }
    let t = transfer_matrix(p, q)?;
    Ok(t.alpha.add(&t.beta)?)
}

fn check_weights(k: usize, a: &Weights) -> Result<(), RecursionError> {
    if a.k() != k {
        return Err(RecursionError::WeightLength {
            expected: k,
            got: a.k(),
        });
    }
    Ok(())
}

/// The `s`-th vertical eigenvalue `θ_s^k = a_s + Σ_{j=s}^{k−1} a_{j+1} y_{j,s}`
/// as a multilinear polynomial in `x_s, …, x_{k−1}` (requires `1 ≤ s ≤ k−1`;
/// the `s = k` coefficient is the constant `a_k`).
pub fn theta(k: usize, s: usize, a: &Weights) -> Result<MultiPoly, RecursionError> {
    check_weights(k, a)?;
    if s < 1 || s >= k {
        return Err(RecursionError::SOutOfRange { s, k });
    }
    let ctx = x_context(s, k - 1);
    let mut acc = MultiPoly::constant(&ctx, a.get(s).clone());
    for j in s..k {
        let term = y(j, s)?.embed(&ctx)?.scale(a.get(j + 1));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Symbolic `θ_s^k` in the joint context `x_s..x_{k−1}, a_1..a_k`.
pub fn theta_symbolic(k: usize, s: usize) -> Result<MultiPoly, RecursionError> {
    if s < 1 || s >= k {
        return Err(RecursionError::SOutOfRange { s, k });
    }
    let ctx = x_context(s, k - 1).join(&a_context(k));
    let a_s = MultiPoly::var(&ctx, &format!("a{s}"))?;
    let mut acc = a_s;
    for j in s..k {
        let a_j1 = MultiPoly::var(&ctx, &format!("a{}", j + 1))?;
        let term = y(j, s)?.embed(&ctx)?.mul(&a_j1)?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// The pair `(Al, B) = (Σ_{ℓ=0}^{k−1} a_{ℓ+1} α_{ℓ,1}, Σ_{ℓ=0}^{k−1} a_{ℓ+1} β_{ℓ,1})`
/// governing the horizontal block: its trace is `Al + B` and its
/// determinant `Al·B + D (Al − B)²`.
pub fn horizontal_pair(k: usize, a: &Weights) -> Result<(MultiPoly, MultiPoly), RecursionError> {
    horizontal_pair_with(k, a, BoundaryConvention::default())
}

pub fn horizontal_pair_with(
    k: usize,
    a: &Weights,
    convention: BoundaryConvention,
) -> Result<(MultiPoly, MultiPoly), RecursionError> {
    check_weights(k, a)?;
    let ctx = x_context(1, k.saturating_sub(1));
    let (alpha0, beta0) = boundary_pair(convention);
    let mut al = MultiPoly::constant(&ctx, a.get(1) * &alpha0);
    let mut b = MultiPoly::constant(&ctx, a.get(1) * &beta0);
    for l in 1..k {
        let t = transfer_matrix(l, 1)?;
        al = al.add(&t.alpha.embed(&ctx)?.scale(a.get(l + 1)))?;
        b = b.add(&t.beta.embed(&ctx)?.scale(a.get(l + 1)))?;
    }
    Ok((al, b))
}

/// Symbolic `(Al, B)` in context `x_1..x_{k−1}, a_1..a_k`.
pub fn horizontal_pair_symbolic(
    k: usize,
    convention: BoundaryConvention,
) -> Result<(MultiPoly, MultiPoly), RecursionError> {
    let ctx = x_context(1, k - 1).join(&a_context(k));
    let (alpha0, beta0) = boundary_pair(convention);
    let a1 = MultiPoly::var(&ctx, "a1")?;
    let mut al = a1.scale(&alpha0);
    let mut b = a1.scale(&beta0);
    for l in 1..k {
        let a_l1 = MultiPoly::var(&ctx, &format!("a{}", l + 1))?;
        let t = transfer_matrix(l, 1)?;
        al = al.add(&t.alpha.embed(&ctx)?.mul(&a_l1)?)?;
        b = b.add(&t.beta.embed(&ctx)?.mul(&a_l1)?)?;
    }
    Ok((al, b))
}

fn boundary_pair(convention: BoundaryConvention) -> (Rat, Rat) {
    match convention {
        BoundaryConvention::EmptyProduct => (Rat::one(), Rat::zero()),
        BoundaryConvention::AlphaBetaOne => (Rat::one(), Rat::one()),
    }
}

/// Eigenvalue data of the curvature of a weighted bundle of order `k`:
/// the `k` vertical coefficients (as polynomials in `x_1..x_{k−1}`) and
/// the trace/determinant of the horizontal 2×2 block, with the base
/// determinant invariant `D` kept as a formal variable.
#[derive(Debug, Clone)]
pub struct CurvatureProfile {
    pub k: usize,
    /// `vertical[s−1] = θ_s^k` for `s < k`; `vertical[k−1]` is the constant `a_k`.
    pub vertical: Vec<MultiPoly>,
    /// `Al + B` in context `x_1..x_{k−1}`.
    pub horiz_trace: MultiPoly,
    /// `Al·B + D (Al − B)²` in context `x_1..x_{k−1}, D`.
    pub horiz_det: MultiPoly,
    /// The pair behind trace and det.
    pub al: MultiPoly,
    pub b: MultiPoly,
}

impl CurvatureProfile {
    /// Determinant with a concrete value of `D`, back in the x-context.
    pub fn det_at(&self, d: &Rat) -> MultiPoly {
        self.horiz_det
            .substitute("D", d)
            .and_then(|p| p.restrict(self.horiz_trace.context()))
            .expect("D is in the det context")
    }
}

/// Assembles the full curvature profile of the order-`k` bundle with
/// weight `a` (default boundary convention).
pub fn curvature_profile(k: usize, a: &Weights) -> Result<CurvatureProfile, RecursionError> {
    check_weights(k, a)?;
    let xc = x_context(1, k - 1);
    let mut vertical = Vec::with_capacity(k);
    for s in 1..k {
        vertical.push(theta(k, s, a)?.embed(&xc)?);
    }
    vertical.push(MultiPoly::constant(&xc, a.get(k).clone()));
    let (al, b) = horizontal_pair(k, a)?;
    let horiz_trace = al.add(&b)?;
    let dctx = xc.join(&VarSet::new(["D"]));
    let d = MultiPoly::var(&dctx, "D")?;
    let al_d = al.embed(&dctx)?;
    let b_d = b.embed(&dctx)?;
    let diff = al_d.sub(&b_d)?;
    let horiz_det = al_d.mul(&b_d)?.add(&d.mul(&diff.pow(2))?)?;
    Ok(CurvatureProfile {
        k,
        vertical,
        horiz_trace,
        horiz_det,
        al,
        b,
    })
}

/// One numeric propagation step of the diagonal curvature pair
/// `(c_{ij11}, c_{ij22})`: applies `R_s(x)·T` exactly. The free phase of
/// the unitary completion does not enter the diagonal components; see
/// [`conjugation_step_unitary`] for the literal conjugation with an
/// explicit phase.
pub fn conjugation_step(c_prev: (Rat, Rat), x: &Rat) -> Result<(Rat, Rat), RecursionError> {
    if x.is_negative() || x > &Rat::one() {
        return Err(RecursionError::XOutOfDomain(x.clone()));
    }
    let (c11, c22) = c_prev;
    // gamma = T · c
    let g1 = &c11 - &c22;
    let g2 = c22;
    let one_minus_x = Rat::one() - x.clone();
    Ok((
        &one_minus_x * &g1 + x * &g2,
        x * &g1 + &one_minus_x * &g2,
    ))
}

/// The same step through the literal unitary conjugation
/// `c_{λμ} = Σ_{α,β} γ_{αβ} ā_{λα} a_{μβ}` with the completion
/// `(a_{11}, a_{12}) = e^{iφ}(−v², v¹)`, `(a_{21}, a_{22}) = (v̄¹, v̄²)`,
/// `v¹ = √x`, `v² = √(1−x)`. Returns the diagonal pair, which must agree
/// with [`conjugation_step`] for every phase.
pub fn conjugation_step_unitary(c_prev: (f64, f64), x: f64, phase: f64) -> (f64, f64) {
    assert!((0.0..=1.0).contains(&x), "x outside [0,1]");
    let (c11, c22) = c_prev;
    let g = [c11 - c22, c22]; // diagonal of gamma^{(s)}
    let v1 = x.sqrt();
    let v2 = (1.0 - x).sqrt();
    let (cos_p, sin_p) = (phase.cos(), phase.sin());
    // rows of the unitary matrix as complex numbers (re, im)
    let a = [
        [(-v2 * cos_p, -v2 * sin_p), (v1 * cos_p, v1 * sin_p)],
        [(v1, 0.0), (v2, 0.0)],
    ];
    let mut diag = [0.0f64; 2];
    for (lam, row) in a.iter().enumerate() {
        let mut acc = 0.0;
        for (alpha, &(re, im)) in row.iter().enumerate() {
            // ā_{λα} a_{λα} = |a_{λα}|²
            acc += g[alpha] * (re * re + im * im);
        }
        diag[lam] = acc;
    }
    (diag[0], diag[1])
}
