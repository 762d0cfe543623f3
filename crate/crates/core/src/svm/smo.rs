//! Binary C-SVM dual solver.
//!
//! Minimizes `f(a) = 1/2 a'Qa - e'a` subject to `0 <= a_i <= C` and
//! `y'a = 0`, with `Q_ij = y_i y_j K(x_i, x_j)`. Each step updates the
//! maximal violating pair analytically. Training rows are put into a
//! canonical order first, so the result does not depend on input order.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{KernelSpec, SvmError};
use crate::Scalar;

const TAU: f64 = 1e-12;
/// Relative objective gain that counts as progress.
const PROGRESS_EPS: f64 = 1e-15;
/// Dense kernel matrices are cached up to this many rows.
const DENSE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SmoOptions {
    /// Stop once the maximal KKT violation drops below this.
    pub tol: f64,
    /// Fail after this many consecutive updates that do not raise the dual
    /// objective; `None` means `10 * n`.
    pub max_stall: Option<usize>,
    pub max_iter: usize,
}

impl Default for SmoOptions {
    fn default() -> Self {
        Self { tol: 1e-3, max_stall: None, max_iter: 10_000_000 }
    }
}

/// Trained two-class model; `coef[i] = y_i * alpha_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinarySvm<T> {
    pub support_vectors: Vec<Vec<T>>,
    pub coef: Vec<T>,
    pub bias: T,
    pub kernel: KernelSpec<T>,
    pub dual_objective: T,
    pub kkt_gap: T,
    pub iterations: usize,
}

impl<T: Scalar> BinarySvm<T> {
    pub fn dim(&self) -> usize {
        self.support_vectors.first().map_or(0, Vec::len)
    }

    /// `sum_i coef_i K(sv_i, x) + bias`.
    pub fn decision(&self, x: &[T]) -> Result<T, SvmError<T>> {
        if !self.support_vectors.is_empty() && x.len() != self.dim() {
            return Err(SvmError::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(self.decision_unchecked(x))
    }

    pub(crate) fn decision_unchecked(&self, x: &[T]) -> T {
        self.support_vectors.iter().zip(&self.coef).map(|(sv, &c)| c * self.kernel.eval(sv, x)).sum::<T>() + self.bias
    }
}

pub fn decision<T: Scalar>(m: &BinarySvm<T>, x: &[T]) -> Result<T, SvmError<T>> {
    m.decision(x)
}

/// Dual objective `sum a - 1/2 sum_ij a_i a_j y_i y_j K_ij` (to be maximized).
pub fn dual_objective<T: Scalar>(x: &[Vec<T>], y: &[T], kernel: &KernelSpec<T>, alpha: &[T]) -> T {
    let mut quad = T::zero();
    for i in 0..x.len() {
        if alpha[i] == T::zero() {
            continue;
        }
        for j in 0..x.len() {
            quad += alpha[i] * alpha[j] * y[i] * y[j] * kernel.eval(&x[i], &x[j]);
        }
    }
    alpha.iter().copied().sum::<T>() - T::lit(0.5) * quad
}

struct QMatrix<'a, T: Scalar> {
    x: Vec<&'a [T]>,
    y: Vec<T>,
    kernel: KernelSpec<T>,
    dense: Option<Vec<T>>,
    diag: Vec<T>,
}

impl<'a, T: Scalar> QMatrix<'a, T> {
    fn new(x: Vec<&'a [T]>, y: Vec<T>, kernel: KernelSpec<T>) -> Self {
        let n = x.len();
        let diag = x.iter().map(|r| kernel.eval(r, r)).collect();
        let mut q = Self { x, y, kernel, dense: None, diag };
        if n <= DENSE_LIMIT {
            let mut dense = vec![T::zero(); n * n];
            for i in 0..n {
                for j in i..n {
                    let v = q.entry(i, j);
                    dense[i * n + j] = v;
                    dense[j * n + i] = v;
                }
            }
            q.dense = Some(dense);
        }
        q
    }

    fn entry(&self, i: usize, j: usize) -> T {
        self.y[i] * self.y[j] * self.kernel.eval(self.x[i], self.x[j])
    }

    fn row<'s>(&'s self, i: usize, buf: &'s mut Vec<T>) -> &'s [T] {
        let n = self.x.len();
        match &self.dense {
            Some(d) => &d[i * n..(i + 1) * n],
            None => {
                buf.clear();
                buf.extend((0..n).map(|j| self.entry(i, j)));
                buf
            }
        }
    }
}

fn lex_cmp<T: Scalar>(a: &[T], b: &[T]) -> Ordering {
    a.iter().zip(b).map(|(p, q)| p.partial_cmp(q).unwrap_or(Ordering::Equal)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// Trains a binary SVM on rows `x` with labels `y` in `{-1, +1}`.
pub fn train_binary<T: Scalar>(
    x: &[Vec<T>],
    y: &[T],
    kernel: &KernelSpec<T>,
    opts: &SmoOptions,
) -> Result<BinarySvm<T>, SvmError<T>> {
    kernel.validate()?;
    if x.is_empty() || x.len() != y.len() {
        return Err(SvmError::Empty);
    }
    let d = x[0].len();
    if let Some(r) = x.iter().find(|r| r.len() != d) {
        return Err(SvmError::DimensionMismatch { expected: d, got: r.len() });
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(SvmError::NonFinite);
    }
    if let Some(&bad) = y.iter().find(|&&v| v != T::one() && v != -T::one()) {
        return Err(SvmError::InvalidLabel(bad.to_f64_lossy()));
    }
    let n_pos = y.iter().filter(|&&v| v > T::zero()).count();
    if n_pos == 0 || n_pos == y.len() {
        return Err(SvmError::Degenerate("both labels must be present".into()));
    }
    let kernel = kernel.resolve(x);

    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(&x[a], &x[b]).then(y[a].partial_cmp(&y[b]).unwrap_or(Ordering::Equal)));
    let xs: Vec<&[T]> = order.iter().map(|&i| x[i].as_slice()).collect();
    let ys: Vec<T> = order.iter().map(|&i| y[i]).collect();

    let q = QMatrix::new(xs, ys, kernel);
    let solved = solve(&q, kernel.c, opts);
    let model = build_model(&q, &solved.alpha, &solved.grad, kernel, solved.objective, solved.gap, solved.iterations);
    if solved.converged {
        Ok(model)
    } else {
        let best = build_model(&q, &solved.best_alpha, &solved.best_grad, kernel, solved.best_objective, solved.best_gap, solved.iterations);
        Err(SvmError::NotConverged { iterations: solved.iterations, gap: solved.best_gap.to_f64_lossy(), pair: None, best: Box::new(best) })
    }
}

struct Solution<T> {
    alpha: Vec<T>,
    grad: Vec<T>,
    objective: T,
    gap: T,
    iterations: usize,
    converged: bool,
    best_alpha: Vec<T>,
    best_grad: Vec<T>,
    best_gap: T,
    best_objective: T,
}

/// `-1/2 sum a_t (G_t - 1)`, the dual objective in maximization form.
fn objective_from_grad<T: Scalar>(alpha: &[T], grad: &[T]) -> T {
    -T::lit(0.5) * alpha.iter().zip(grad).map(|(&a, &g)| a * (g - T::one())).sum::<T>()
}

/// Maximal violating pair `(i, j, gap)`, ties broken by lowest index.
fn select_pair<T: Scalar>(alpha: &[T], grad: &[T], y: &[T], c: T) -> Option<(usize, usize, T)> {
    let (mut i, mut gmax) = (None, T::neg_infinity());
    let (mut j, mut gmin) = (None, T::infinity());
    for t in 0..alpha.len() {
        let v = -y[t] * grad[t];
        let up = if y[t] > T::zero() { alpha[t] < c } else { alpha[t] > T::zero() };
        let low = if y[t] > T::zero() { alpha[t] > T::zero() } else { alpha[t] < c };
        if up && v > gmax {
            gmax = v;
            i = Some(t);
        }
        if low && v < gmin {
            gmin = v;
            j = Some(t);
        }
    }
    Some((i?, j?, gmax - gmin))
}

fn solve<T: Scalar>(q: &QMatrix<'_, T>, c: T, opts: &SmoOptions) -> Solution<T> {
    let n = q.x.len();
    let y = &q.y;
    let tol = T::lit(opts.tol);
    let max_stall = opts.max_stall.unwrap_or(10 * n);
    let mut alpha = vec![T::zero(); n];
    let mut grad = vec![-T::one(); n];
    let (mut buf_i, mut buf_j) = (Vec::new(), Vec::new());

    let mut objective = T::zero();
    let mut best_gap = T::infinity();
    let mut best_alpha = alpha.clone();
    let mut best_grad = grad.clone();
    let mut best_objective = objective;
    let mut stall = 0usize;
    let mut iterations = 0usize;
    let mut gap;
    let converged = loop {
        let Some((i, j, g)) = select_pair(&alpha, &grad, y, c) else {
            gap = T::zero();
            break true;
        };
        gap = g;
        if gap < best_gap {
            best_gap = gap;
            best_alpha.clone_from(&alpha);
            best_grad.clone_from(&grad);
            best_objective = objective;
        }
        if gap < tol {
            break true;
        }
        if stall > max_stall || iterations >= opts.max_iter {
            break false;
        }
        iterations += 1;

        let qi = q.row(i, &mut buf_i);
        let qj = q.row(j, &mut buf_j);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let tau = T::lit(TAU);
        if y[i] != y[j] {
            let mut quad = q.diag[i] + q.diag[j] + T::lit(2.0) * qi[j];
            if quad <= T::zero() {
                quad = tau;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > T::zero() {
                if alpha[j] < T::zero() {
                    alpha[j] = T::zero();
                    alpha[i] = diff;
                }
            } else if alpha[i] < T::zero() {
                alpha[i] = T::zero();
                alpha[j] = -diff;
            }
            if diff > T::zero() {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let mut quad = q.diag[i] + q.diag[j] - T::lit(2.0) * qi[j];
            if quad <= T::zero() {
                quad = tau;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < T::zero() {
                alpha[j] = T::zero();
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < T::zero() {
                alpha[i] = T::zero();
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for k in 0..n {
            grad[k] += qi[k] * di + qj[k] * dj;
        }
        let next = objective_from_grad(&alpha, &grad);
        debug_assert!(
            next >= objective - T::lit(1e-9) * (T::one() + objective.abs()),
            "dual objective decreased: {objective} -> {next}"
        );
        if next > objective + T::lit(PROGRESS_EPS) * (T::one() + objective.abs()) {
            stall = 0;
        } else {
            stall += 1;
        }
        objective = next;
    };
    Solution { alpha, grad, objective, gap, iterations, converged, best_alpha, best_grad, best_gap, best_objective }
}

fn build_model<T: Scalar>(
    q: &QMatrix<'_, T>,
    alpha: &[T],
    grad: &[T],
    kernel: KernelSpec<T>,
    objective: T,
    gap: T,
    iterations: usize,
) -> BinarySvm<T> {
    let c = kernel.c;
    let y = &q.y;
    let (mut ub, mut lb) = (T::infinity(), T::neg_infinity());
    let (mut free, mut sum_free) = (0usize, T::zero());
    for t in 0..alpha.len() {
        let yg = y[t] * grad[t];
        let pos = y[t] > T::zero();
        if alpha[t] >= c {
            if pos { lb = lb.max(yg) } else { ub = ub.min(yg) }
        } else if alpha[t] <= T::zero() {
            if pos { ub = ub.min(yg) } else { lb = lb.max(yg) }
        } else {
            free += 1;
            sum_free += yg;
        }
    }
    let rho = if free > 0 { sum_free / T::from_usize_lossy(free) } else { (ub + lb) / T::lit(2.0) };
    let mut support_vectors = Vec::new();
    let mut coef = Vec::new();
    for t in 0..alpha.len() {
        if alpha[t] > T::zero() {
            support_vectors.push(q.x[t].to_vec());
            coef.push(y[t] * alpha[t]);
        }
    }
    BinarySvm { support_vectors, coef, bias: -rho, kernel, dual_objective: objective, kkt_gap: gap.max(T::zero()), iterations }
}
