//! Peetre K-functional between two polyhedral norms, via linear programming.
//!
//! K(f, t) = inf { ||f0||_0 + t ||f1||_1 : f = f0 + f1 } is computed as an
//! epigraph LP. As a function of t it is nondecreasing, concave and piecewise
//! linear; `k_profile` recovers the exact breakpoint structure by tangent
//! intersection, which later feeds the interpolation-norm quadrature.

use super::simplex::{add_norm_leq, Expr, LpBuilder, LpNum};
use super::{NormSpec, SpaceError};
use crate::scalar::{Rat, Scalar};
use crate::vector::CoordVector;
use num_traits::Zero;

/// Exact-or-float K-functional. Exact when `f` and `t` are exact rationals
/// and both specs are polyhedral.
pub fn k_functional(
    f: &CoordVector,
    t: &Scalar,
    spec0: &NormSpec,
    spec1: &NormSpec,
) -> Result<Scalar, SpaceError> {
    spec0.check_dim(f.dim())?;
    spec1.check_dim(f.dim())?;
    require_polyhedral(spec0)?;
    require_polyhedral(spec1)?;
    if t.to_f64() <= 0.0 {
        return Err(SpaceError::InvalidParameter("t must be positive".into()));
    }
    match (f.as_exact(), t.as_exact()) {
        (Some(fr), Some(tr)) => Ok(Scalar::Exact(k_functional_exact(&fr, tr, spec0, spec1)?)),
        _ => Ok(Scalar::Float(k_functional_f64(
            &f.to_f64s(),
            t.to_f64(),
            spec0,
            spec1,
        )?)),
    }
}

fn require_polyhedral(spec: &NormSpec) -> Result<(), SpaceError> {
    if spec.is_polyhedral() {
        Ok(())
    } else {
        Err(SpaceError::NotPolyhedral(format!("{spec:?}")))
    }
}

/// The K-functional LP together with the optimal decomposition part g = f0.
fn k_lp<T: LpNum>(
    f: &[T],
    t: &T,
    spec0: &NormSpec,
    spec1: &NormSpec,
) -> Result<(T, Vec<T>), SpaceError> {
    let mut b: LpBuilder<T> = LpBuilder::new();
    let g: Vec<Expr<T>> = (0..f.len()).map(|_| b.free_expr()).collect();
    let s0 = Expr::var(b.nonneg_var());
    let s1 = Expr::var(b.nonneg_var());
    add_norm_leq(&mut b, spec0, &g, &s0)?;
    let residual: Vec<Expr<T>> = g
        .iter()
        .zip(f)
        .map(|(gi, fi)| Expr::constant(fi.clone()).sub(gi))
        .collect();
    add_norm_leq(&mut b, spec1, &residual, &s1)?;
    let sol = b.solve_min(&s0.add(&s1.scale(t)))?;
    let g_opt = g.iter().map(|gi| gi.eval(&sol.x)).collect();
    Ok((sol.objective, g_opt))
}

pub fn k_functional_exact(
    f: &[Rat],
    t: &Rat,
    spec0: &NormSpec,
    spec1: &NormSpec,
) -> Result<Rat, SpaceError> {
    Ok(k_lp(f, t, spec0, spec1)?.0)
}

pub fn k_functional_f64(
    f: &[f64],
    t: f64,
    spec0: &NormSpec,
    spec1: &NormSpec,
) -> Result<f64, SpaceError> {
    // normalize by homogeneity so the float solver sees O(1) data
    let scale = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let fs: Vec<f64> = f.iter().map(|x| x / scale).collect();
    Ok(k_lp(&fs, &t, spec0, spec1)?.0 * scale)
}

/// Independent route to the X0+X1 norm ( = K(f,1) ): maximize <phi, f> over
/// the intersection of the two dual balls, described by one inequality per
/// unit-ball vertex of either space. Used as an oracle against the
/// decomposition LP.
pub fn sum_norm_via_dual_lp(
    f: &[Rat],
    spec0: &NormSpec,
    spec1: &NormSpec,
    vertex_budget: u128,
) -> Result<Rat, SpaceError> {
    let dim = f.len();
    let mut b: LpBuilder<Rat> = LpBuilder::new();
    let phi: Vec<Expr<Rat>> = (0..dim).map(|_| b.free_expr()).collect();
    let one = Expr::constant(Rat::from_integer(1.into()));
    for spec in [spec0, spec1] {
        for v in super::unit_ball_vertices_rat(spec, dim, vertex_budget)? {
            let mut lhs = Expr::constant(num_traits::Zero::zero());
            for (p, vi) in phi.iter().zip(&v) {
                if !vi.is_zero() {
                    lhs = lhs.add(&p.scale(vi));
                }
            }
            b.leq_zero(&lhs.sub(&one));
        }
    }
    let mut obj = Expr::constant(num_traits::Zero::zero());
    for (p, fi) in phi.iter().zip(f) {
        if !fi.is_zero() {
            obj = obj.add(&p.scale(fi));
        }
    }
    Ok(b.solve_max(&obj)?.objective)
}

/// Exact piecewise-linear profile of t -> K(f, t).
///
/// `pieces` holds maximal affine segments (intercept, slope) ordered by t
/// with their breakpoints; below the first breakpoint K(t) = t ||f||_1, above
/// the last K(t) = ||f||_0.
#[derive(Debug, Clone)]
pub struct KProfile {
    /// Breakpoints 0 < t_1 < ... < t_k (empty only for f = 0).
    pub breakpoints: Vec<f64>,
    /// Affine pieces (intercept, slope); piece i rules [t_i, t_{i+1}].
    /// pieces[0] rules (0, t_1] and always has intercept 0.
    pub pieces: Vec<(f64, f64)>,
    /// ||f|| in the first space: the large-t plateau value.
    pub norm0: f64,
    /// ||f|| in the second space: the slope at 0+.
    pub norm1: f64,
}

impl KProfile {
    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0);
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        let (a, s) = self.pieces[idx];
        a + s * t
    }

    pub fn is_zero(&self) -> bool {
        self.norm0 == 0.0
    }
}

/// Recover the exact breakpoint structure of K(f, .) by recursive tangent
/// intersection: each LP solve yields a supporting line of the concave
/// profile; where the lines of two bracket points meet, either the profile
/// agrees (a breakpoint) or a further solve splits the bracket.
pub fn k_profile(
    f: &[Rat],
    spec0: &NormSpec,
    spec1: &NormSpec,
    max_depth: u32,
) -> Result<KProfile, SpaceError> {
    k_profile_generic(f, spec0, spec1, max_depth)
}

/// Same recursion on f64 linear programs; breakpoints carry the solver
/// tolerance instead of being exact. This is what quadrature uses.
pub fn k_profile_f64(
    f: &[f64],
    spec0: &NormSpec,
    spec1: &NormSpec,
    max_depth: u32,
) -> Result<KProfile, SpaceError> {
    k_profile_generic(f, spec0, spec1, max_depth)
}

fn k_profile_generic<T: LpNum + PartialOrd>(
    f: &[T],
    spec0: &NormSpec,
    spec1: &NormSpec,
    max_depth: u32,
) -> Result<KProfile, SpaceError> {
    // normalize by homogeneity: K(cf, t) = c K(f, t) leaves breakpoints
    // unchanged and keeps the float solver on O(1) data
    let abs = |x: &T| if x.is_neg() { -x.clone() } else { x.clone() };
    let mut peak = T::lp_zero();
    for x in f {
        let a = abs(x);
        if a > peak {
            peak = a;
        }
    }
    if !peak.is_pos() {
        return Ok(KProfile {
            breakpoints: vec![],
            pieces: vec![(0.0, 0.0)],
            norm0: 0.0,
            norm1: 0.0,
        });
    }
    let fs: Vec<T> = f.iter().map(|x| x.clone() / peak.clone()).collect();
    let mut prof = k_profile_normalized(&fs, spec0, spec1, max_depth)?;
    let c = peak.to_approx_f64();
    prof.norm0 *= c;
    prof.norm1 *= c;
    for (a, s) in prof.pieces.iter_mut() {
        *a *= c;
        *s *= c;
    }
    Ok(prof)
}

fn k_profile_normalized<T: LpNum + PartialOrd>(
    f: &[T],
    spec0: &NormSpec,
    spec1: &NormSpec,
    max_depth: u32,
) -> Result<KProfile, SpaceError> {
    let norm_in = |g: &[T], spec: &NormSpec| -> Result<T, SpaceError> {
        // norm as a one-variable LP: min s subject to ||g|| <= s; tiny and
        // shared across both scalar types
        let mut b: LpBuilder<T> = LpBuilder::new();
        let s = Expr::var(b.nonneg_var());
        let entries: Vec<Expr<T>> = g.iter().map(|c| Expr::constant(c.clone())).collect();
        add_norm_leq(&mut b, spec, &entries, &s)?;
        Ok(b.solve_min(&s)?.objective)
    };
    let norm0 = norm_in(f, spec0)?;
    let norm1 = norm_in(f, spec1)?;
    if !norm0.is_pos() {
        return Ok(KProfile {
            breakpoints: vec![],
            pieces: vec![(0.0, 0.0)],
            norm0: 0.0,
            norm1: 0.0,
        });
    }

    // tangent at t: K(t) = ||g*||_0 + t ||f - g*||_1
    let tangent = |t: &T| -> Result<(T, T), SpaceError> {
        let (_, g) = k_lp(f, t, spec0, spec1)?;
        let a = norm_in(&g, spec0)?;
        let r: Vec<T> = f
            .iter()
            .zip(&g)
            .map(|(fi, gi)| fi.clone() - gi.clone())
            .collect();
        let s = norm_in(&r, spec1)?;
        Ok((a, s))
    };

    // bracket guaranteed to contain all breakpoints: K = t norm1 below
    // norm0/norm1 scaled down, K = norm0 above a matching upper bound
    let big = T::from_rat(&Rat::from_integer(1024.into()));
    let ratio = norm0.clone() / norm1.clone();
    let lo = ratio.clone() / big.clone();
    let hi = ratio * big;

    let mut lines: Vec<(T, T)> = vec![
        (T::lp_zero(), norm1.clone()), // tangent at 0+
        (norm0.clone(), T::lp_zero()), // tangent at infinity
    ];
    let mut stack = vec![(lo, lines[0].clone(), hi, lines[1].clone(), 0u32)];
    while let Some((ta, la, tb, lb, depth)) = stack.pop() {
        if la.1.approx_same(&lb.1, &norm1) {
            continue; // same slope: concavity makes the lines identical
        }
        if (tb.clone() - ta.clone()).approx_same(&T::lp_zero(), &tb) {
            continue; // bracket collapsed to solver precision
        }
        if depth >= max_depth {
            return Err(SpaceError::QuadratureFailure {
                last_lo: ta.to_approx_f64(),
                last_hi: tb.to_approx_f64(),
                last_change: f64::NAN,
            });
        }
        // intersection of the two supporting lines
        let t_star = (lb.0.clone() - la.0.clone()) / (la.1.clone() - lb.1.clone());
        let value_at_star = la.0.clone() + la.1.clone() * t_star.clone();
        let (a, s) = tangent(&t_star)?;
        let k_star = a.clone() + s.clone() * t_star.clone();
        if value_at_star.approx_same(&k_star, &norm0) {
            continue; // both lines are real pieces meeting at t_star
        }
        lines.push((a.clone(), s.clone()));
        stack.push((ta, la, t_star.clone(), (a.clone(), s.clone()), depth + 1));
        stack.push((t_star, (a, s), tb, lb, depth + 1));
    }

    // assemble the lower envelope: sort pieces by slope descending
    // (steepest rules smallest t), dedupe, intersect neighbours
    lines.sort_by(|x, y| {
        y.1.partial_cmp(&x.1)
            .unwrap()
            .then(x.0.partial_cmp(&y.0).unwrap())
    });
    // drop duplicate slopes (touching parallel supporting lines coincide)
    lines.dedup_by(|b, a| a.1.approx_same(&b.1, &norm1));
    let mut breakpoints = Vec::new();
    let mut pieces = Vec::new();
    for w in lines.windows(2) {
        let (a0, s0) = &w[0];
        let (a1, s1) = &w[1];
        let t = (a1.clone() - a0.clone()) / (s0.clone() - s1.clone());
        breakpoints.push(t.to_approx_f64());
    }
    for (a, s) in &lines {
        pieces.push((a.to_approx_f64(), s.to_approx_f64()));
    }
    Ok(KProfile {
        breakpoints,
        pieces,
        norm0: norm0.to_approx_f64(),
        norm1: norm1.to_approx_f64(),
    })
}
