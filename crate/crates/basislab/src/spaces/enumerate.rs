//! Shared machinery for exhaustive maximization over polyhedral unit-ball
//! vertices: a small arithmetic trait (so hot loops run on i128 when the
//! data allows, falling back to exact rationals), compiled norm evaluation
//! plans, and cyclic vertex walks with sparse deltas.

use super::{NormSpec, SpaceError};
use crate::scalar::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Minimal exact arithmetic needed by the enumeration loops.
pub(crate) trait Arith: Clone + Ord + std::fmt::Debug {
    fn zero_val() -> Self;
    fn acc_add(&mut self, o: &Self);
    fn acc_sub(&mut self, o: &Self);
    fn times(&self, o: &Self) -> Self;
    fn abs_val(&self) -> Self;
    fn of_i64(v: i64) -> Self;
}

impl Arith for i128 {
    fn zero_val() -> Self {
        0
    }
    fn acc_add(&mut self, o: &Self) {
        *self += o;
    }
    fn acc_sub(&mut self, o: &Self) {
        *self -= o;
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn abs_val(&self) -> Self {
        (*self).abs()
    }
    fn of_i64(v: i64) -> Self {
        v as i128
    }
}

impl Arith for Rat {
    fn zero_val() -> Self {
        Zero::zero()
    }
    fn acc_add(&mut self, o: &Self) {
        *self += o;
    }
    fn acc_sub(&mut self, o: &Self) {
        *self -= o;
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn abs_val(&self) -> Self {
        Signed::abs(self)
    }
    fn of_i64(v: i64) -> Self {
        Rat::from_integer(v.into())
    }
}

/// Compiled evaluator for a polyhedral norm on a coordinate range. All
/// comparisons are scale-invariant, so evaluating on commonly-scaled integer
/// vectors is sound.
#[derive(Debug, Clone)]
pub(crate) enum NormPlan {
    Sup { lo: usize, hi: usize },
    L1 { lo: usize, hi: usize },
    V1 { lo: usize, hi: usize },
    Max(Vec<NormPlan>),
}

impl NormPlan {
    pub fn compile(spec: &NormSpec, offset: usize, dim: usize) -> Result<NormPlan, SpaceError> {
        match spec {
            NormSpec::Lp { p } if p.is_one() => Ok(NormPlan::L1 {
                lo: offset,
                hi: offset + dim,
            }),
            NormSpec::Sup => Ok(NormPlan::Sup {
                lo: offset,
                hi: offset + dim,
            }),
            NormSpec::V1 => Ok(NormPlan::V1 {
                lo: offset,
                hi: offset + dim,
            }),
            NormSpec::DirectSumMax {
                left,
                left_dim,
                right,
                right_dim,
            } => Ok(NormPlan::Max(vec![
                NormPlan::compile(left, offset, *left_dim)?,
                NormPlan::compile(right, offset + left_dim, *right_dim)?,
            ])),
            other => Err(SpaceError::NotPolyhedral(format!("{other:?}"))),
        }
    }

    pub fn eval<S: Arith>(&self, w: &[S]) -> S {
        match self {
            NormPlan::Sup { lo, hi } => {
                let mut best = S::zero_val();
                for x in &w[*lo..*hi] {
                    let a = x.abs_val();
                    if a > best {
                        best = a;
                    }
                }
                best
            }
            NormPlan::L1 { lo, hi } => {
                let mut total = S::zero_val();
                for x in &w[*lo..*hi] {
                    total.acc_add(&x.abs_val());
                }
                total
            }
            NormPlan::V1 { lo, hi } => {
                let mut total = w[*lo].abs_val();
                for i in *lo..hi - 1 {
                    let mut d = w[i + 1].clone();
                    d.acc_sub(&w[i]);
                    total.acc_add(&d.abs_val());
                }
                total.acc_add(&w[hi - 1].abs_val());
                total
            }
            NormPlan::Max(parts) => parts
                .iter()
                .map(|p| p.eval(w))
                .max()
                .expect("nonempty max plan"),
        }
    }
}

/// A cyclic walk over the unit-ball vertices of one (non-product) spec,
/// scaled to integers by `scale`: vertex coordinates times `scale` are the
/// stored values. `deltas[i]` moves vertex i to vertex (i+1) mod count in
/// sparse (local column, new_value - old_value) form.
#[derive(Debug, Clone)]
pub(crate) struct VertexCycle<S> {
    pub count: usize,
    pub init: Vec<S>,
    pub deltas: Vec<Vec<(usize, S)>>,
}

/// Build the vertex cycle of a leaf spec. `scale` must be even for V1.
fn leaf_cycle<S: Arith>(spec: &NormSpec, dim: usize, scale: i64) -> VertexCycle<S> {
    let s = S::of_i64(scale);
    match spec {
        NormSpec::Sup => {
            // reflected Gray code: one sign flip per step
            let count = 1usize << dim;
            let init = vec![s.clone(); dim];
            let mut deltas = Vec::with_capacity(count);
            let mut state = vec![1i64; dim];
            for i in 1..=count {
                let bit = if i == count {
                    // wrap-around: returns to all-plus
                    let flips: Vec<usize> =
                        (0..dim).filter(|&b| state[b] < 0).collect();
                    let d = flips
                        .iter()
                        .map(|&b| {
                            state[b] = 1;
                            (b, S::of_i64(2 * scale))
                        })
                        .collect();
                    deltas.push(d);
                    break;
                } else {
                    i.trailing_zeros() as usize
                };
                let dv = S::of_i64(-2 * state[bit] * scale);
                state[bit] = -state[bit];
                deltas.push(vec![(bit, dv)]);
            }
            VertexCycle {
                count,
                init,
                deltas,
            }
        }
        NormSpec::Lp { p } if p.is_one() => {
            // +e_0, -e_0, +e_1, -e_1, ...
            let mut verts: Vec<Vec<S>> = Vec::with_capacity(2 * dim);
            for i in 0..dim {
                for sign in [1i64, -1] {
                    let mut v = vec![S::zero_val(); dim];
                    v[i] = S::of_i64(sign * scale);
                    verts.push(v);
                }
            }
            cycle_from_list(dim, verts)
        }
        NormSpec::V1 => {
            // half-height interval indicators, signs alternating per interval
            assert!(scale % 2 == 0, "V1 enumeration needs an even scale");
            let h = scale / 2;
            let mut verts: Vec<Vec<S>> = Vec::with_capacity(dim * (dim + 1));
            for i in 0..dim {
                for j in i..dim {
                    for sign in [1i64, -1] {
                        let mut v = vec![S::zero_val(); dim];
                        for k in i..=j {
                            v[k] = S::of_i64(sign * h);
                        }
                        verts.push(v);
                    }
                }
            }
            cycle_from_list(dim, verts)
        }
        other => unreachable!("leaf_cycle on {other:?}"),
    }
}

/// Generic cycle from a materialized vertex list (sparse diffs).
fn cycle_from_list<S: Arith>(dim: usize, verts: Vec<Vec<S>>) -> VertexCycle<S> {
    let count = verts.len();
    let init = verts[0].clone();
    let mut deltas = Vec::with_capacity(count);
    for i in 0..count {
        let cur = &verts[i];
        let next = &verts[(i + 1) % count];
        let mut d = Vec::new();
        for c in 0..dim {
            if cur[c] != next[c] {
                let mut dv = next[c].clone();
                dv.acc_sub(&cur[c]);
                d.push((c, dv));
            }
        }
        deltas.push(d);
    }
    let _ = dim;
    VertexCycle {
        count,
        init,
        deltas,
    }
}

/// Flatten a polyhedral spec into leaf components with global offsets.
pub(crate) fn flatten_components(
    spec: &NormSpec,
    offset: usize,
    dim: usize,
    out: &mut Vec<(NormSpec, usize, usize)>,
) {
    match spec {
        NormSpec::DirectSumMax {
            left,
            left_dim,
            right,
            right_dim,
        } => {
            flatten_components(left, offset, *left_dim, out);
            flatten_components(right, offset + left_dim, *right_dim, out);
        }
        other => out.push((other.clone(), offset, dim)),
    }
}

/// Product walk over all unit-ball vertices of a polyhedral spec, calling
/// `visit(step_index, v)` with the scaled current vertex after each move.
/// Returns the common scale.
pub(crate) struct ProductWalk<S> {
    pub dim: usize,
    pub scale: i64,
    pub total: u128,
    components: Vec<(usize, VertexCycle<S>)>, // (global offset, cycle)
}

impl<S: Arith> ProductWalk<S> {
    pub fn new(spec: &NormSpec, dim: usize, budget: u128) -> Result<Self, SpaceError> {
        spec.check_dim(dim)?;
        let total = super::vertex_count(spec, dim)?;
        if total > budget {
            return Err(SpaceError::BudgetExceeded {
                needed: total,
                budget,
            });
        }
        let mut leaves = Vec::new();
        flatten_components(spec, 0, dim, &mut leaves);
        let scale = if leaves.iter().any(|(s, _, _)| matches!(s, NormSpec::V1)) {
            2
        } else {
            1
        };
        let components = leaves
            .into_iter()
            .map(|(s, off, d)| (off, leaf_cycle::<S>(&s, d, scale)))
            .collect();
        Ok(ProductWalk {
            dim,
            scale,
            total,
            components,
        })
    }

    /// Initial scaled vertex.
    pub fn init(&self) -> Vec<S> {
        let mut v = vec![S::zero_val(); self.dim];
        for (off, c) in &self.components {
            for (k, x) in c.init.iter().enumerate() {
                v[off + k] = x.clone();
            }
        }
        v
    }

    /// Walk all vertices in order, maintaining `v`. The visitor sees each
    /// vertex exactly once, starting with the initial one, together with the
    /// sparse (global column, delta) changes applied since the previous
    /// vertex, so derived state like M*v can be maintained incrementally.
    pub fn walk(&self, mut visit: impl FnMut(u128, &[S], &[(usize, S)])) {
        let mut v = self.init();
        let mut counters = vec![0usize; self.components.len()];
        let mut buffer: Vec<(usize, S)> = Vec::new();
        visit(0, &v, &buffer);
        for step in 1..self.total {
            buffer.clear();
            // odometer: advance the last component, carrying on wrap
            for ci in (0..self.components.len()).rev() {
                let (off, cyc) = &self.components[ci];
                let idx = counters[ci];
                for (c, dv) in &cyc.deltas[idx] {
                    v[off + c].acc_add(dv);
                    buffer.push((off + c, dv.clone()));
                }
                counters[ci] = (idx + 1) % cyc.count;
                if counters[ci] != 0 {
                    break;
                }
            }
            visit(step, &v, &buffer);
        }
    }
}

/// Scale data for running a rational matrix on integer vertices: M_int =
/// M * den, so that M_int * v_scaled = (M v) * den * scale holds in integers.
pub(crate) struct ScaledMatrix {
    pub entries: Vec<i128>, // row-major
    pub den: BigInt,
    pub max_abs: i128,
}

/// Try to clear denominators of a rational matrix into i128 entries.
pub(crate) fn scale_matrix(m: &crate::matrix::RatMatrix) -> Option<ScaledMatrix> {
    let mut den = BigInt::one();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            den = den.lcm(m[(i, j)].denom());
        }
    }
    if den.bits() > 48 {
        return None;
    }
    let mut entries = Vec::with_capacity(m.rows() * m.cols());
    let mut max_abs: i128 = 0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let scaled = m[(i, j)].numer() * (&den / m[(i, j)].denom());
            let v = scaled.to_i128()?;
            max_abs = max_abs.max(v.abs());
            entries.push(v);
        }
    }
    Some(ScaledMatrix {
        entries,
        den,
        max_abs,
    })
}
