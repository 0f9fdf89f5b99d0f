//! Seidel's randomized incremental algorithm for small linear programs.
//!
//! Maximizes `c·x` subject to `aᵢ·x ≤ bᵢ` and a bounding box. The dimension is
//! at most [`MAX_DIM`]. Constraints are processed in the order given, so
//! callers wanting the expected-linear running time shuffle them first.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const MAX_DIM: usize = 4;

/// `normal · x ≤ offset`; only the first `dim` entries of `normal` are used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpace {
    pub normal: [f64; MAX_DIM],
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal([f64; MAX_DIM]),
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    dim: usize,
    objective: [f64; MAX_DIM],
    lower: [f64; MAX_DIM],
    upper: [f64; MAX_DIM],
    constraints: Vec<HalfSpace>,
}

const VIOLATION_TOL: f64 = 1e-12;
const EMPTY_TOL: f64 = 1e-10;

impl LinearProgram {
    /// `bounds[k] = (lo, hi)` for each of the `objective.len()` variables.
    pub fn new(objective: &[f64], bounds: &[(f64, f64)]) -> Self {
        let dim = objective.len();
        assert!(dim >= 1 && dim <= MAX_DIM, "dimension must be in 1..={MAX_DIM}");
        assert_eq!(bounds.len(), dim);
        let mut o = [0.0; MAX_DIM];
        let mut lo = [0.0; MAX_DIM];
        let mut hi = [0.0; MAX_DIM];
        for k in 0..dim {
            o[k] = objective[k];
            lo[k] = bounds[k].0;
            hi[k] = bounds[k].1;
        }
        LinearProgram {
            dim,
            objective: o,
            lower: lo,
            upper: hi,
            constraints: Vec::new(),
        }
    }

    pub fn push(&mut self, normal: &[f64], offset: f64) {
        let mut n = [0.0; MAX_DIM];
        n[..self.dim].copy_from_slice(&normal[..self.dim]);
        self.constraints.push(HalfSpace { normal: n, offset });
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Permutes the constraints with a seeded generator.
    pub fn shuffle(&mut self, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.constraints.shuffle(&mut rng);
    }

    pub fn maximize(&self) -> LpOutcome {
        match seidel(self.dim, &self.objective, &self.constraints, &self.lower, &self.upper) {
            Some(x) => LpOutcome::Optimal(x),
            None => LpOutcome::Infeasible,
        }
    }
}

fn dot(a: &[f64; MAX_DIM], x: &[f64; MAX_DIM], dim: usize) -> f64 {
    (0..dim).map(|k| a[k] * x[k]).sum()
}

fn violates(h: &HalfSpace, x: &[f64; MAX_DIM], dim: usize) -> bool {
    let lhs = dot(&h.normal, x, dim);
    let scale = h.offset.abs() + (0..dim).map(|k| (h.normal[k] * x[k]).abs()).sum::<f64>();
    lhs > h.offset + VIOLATION_TOL * scale.max(1e-300)
}

fn remove_index(v: &[f64; MAX_DIM], j: usize, dim: usize) -> [f64; MAX_DIM] {
    let mut out = [0.0; MAX_DIM];
    let mut t = 0;
    for k in 0..dim {
        if k != j {
            out[t] = v[k];
            t += 1;
        }
    }
    out
}

fn box_optimum(dim: usize, c: &[f64; MAX_DIM], lo: &[f64; MAX_DIM], hi: &[f64; MAX_DIM]) -> [f64; MAX_DIM] {
    let mut x = [0.0; MAX_DIM];
    for k in 0..dim {
        x[k] = if c[k] > 0.0 {
            hi[k]
        } else if c[k] < 0.0 {
            lo[k]
        } else {
            0.5 * (lo[k] + hi[k])
        };
    }
    x
}

fn solve_1d(c: f64, cons: &[HalfSpace], lo: f64, hi: f64) -> Option<f64> {
    let (mut l, mut h) = (lo, hi);
    let mut scale = lo.abs().max(hi.abs());
    for con in cons {
        let a = con.normal[0];
        let b = con.offset;
        let norm = a.abs();
        if norm <= 1e-14 * (b.abs() + 1.0) {
            if b < -EMPTY_TOL * (1.0 + b.abs()) {
                return None;
            }
            continue;
        }
        let bound = b / a;
        if a > 0.0 {
            h = h.min(bound);
        } else {
            l = l.max(bound);
        }
        scale = scale.max(bound.abs());
    }
    if l > h {
        if l - h <= EMPTY_TOL * (1.0 + scale) {
            return Some(0.5 * (l + h));
        }
        return None;
    }
    Some(if c > 0.0 {
        h
    } else if c < 0.0 {
        l
    } else {
        0.5 * (l + h)
    })
}

fn seidel(
    dim: usize,
    c: &[f64; MAX_DIM],
    cons: &[HalfSpace],
    lo: &[f64; MAX_DIM],
    hi: &[f64; MAX_DIM],
) -> Option<[f64; MAX_DIM]> {
    if dim == 1 {
        let mut x = [0.0; MAX_DIM];
        x[0] = solve_1d(c[0], cons, lo[0], hi[0])?;
        return Some(x);
    }
    let mut x = box_optimum(dim, c, lo, hi);
    for i in 0..cons.len() {
        let h = &cons[i];
        if !violates(h, &x, dim) {
            continue;
        }
        // optimum of the first i+1 constraints lies on h; eliminate the
        // coordinate with the largest coefficient
        let j = (0..dim)
            .max_by(|&p, &q| h.normal[p].abs().total_cmp(&h.normal[q].abs()))
            .unwrap_or(0);
        let pivot = h.normal[j];
        if pivot == 0.0 {
            if h.offset < 0.0 {
                return None;
            }
            continue;
        }
        // x_j = (offset - Σ_{k≠j} normal_k x_k) / pivot = base + Σ coef_k x_k
        let base = h.offset / pivot;
        let coef: [f64; MAX_DIM] = {
            let mut r = remove_index(&h.normal, j, dim);
            for v in r.iter_mut().take(dim - 1) {
                *v = -*v / pivot;
            }
            r
        };
        let project = |g: &HalfSpace| -> HalfSpace {
            let gj = g.normal[j];
            let mut n = remove_index(&g.normal, j, dim);
            for k in 0..dim - 1 {
                n[k] += gj * coef[k];
            }
            HalfSpace {
                normal: n,
                offset: g.offset - gj * base,
            }
        };
        let mut reduced = Vec::with_capacity(i + 2);
        // box bounds of the eliminated coordinate: lo_j ≤ base + coef·y ≤ hi_j
        let mut upper_j = [0.0; MAX_DIM];
        let mut lower_j = [0.0; MAX_DIM];
        for k in 0..dim - 1 {
            upper_j[k] = coef[k];
            lower_j[k] = -coef[k];
        }
        reduced.push(HalfSpace {
            normal: upper_j,
            offset: hi[j] - base,
        });
        reduced.push(HalfSpace {
            normal: lower_j,
            offset: base - lo[j],
        });
        reduced.extend(cons[..i].iter().map(project));
        let mut c_red = remove_index(c, j, dim);
        for k in 0..dim - 1 {
            c_red[k] += c[j] * coef[k];
        }
        let y = seidel(
            dim - 1,
            &c_red,
            &reduced,
            &remove_index(lo, j, dim),
            &remove_index(hi, j, dim),
        )?;
        let mut t = 0;
        let mut xj = base;
        for k in 0..dim {
            if k != j {
                x[k] = y[t];
                xj += coef[t] * y[t];
                t += 1;
            }
        }
        x[j] = xj;
    }
    Some(x)
}
