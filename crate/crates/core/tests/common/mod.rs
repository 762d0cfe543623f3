//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use grainsort::features::GrayImage;
use grainsort::svm::{BinarySvm, KernelSpec};
use grainsort::Matrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// O(n^2) forward DFT.
pub fn direct_dft(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(t, &v)| v * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (k * t % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

pub fn random_image<R: Rng>(rng: &mut R, rows: usize, cols: usize, levels: usize) -> GrayImage {
    let px = (0..rows * cols).map(|_| rng.random_range(0..levels) as u16).collect();
    GrayImage::new(Matrix::from_vec(rows, cols, px), levels).unwrap()
}

/// Double loop over every pixel and its displaced partner, both orders.
pub fn brute_pair_counts(img: &GrayImage, (dy, dx): (isize, isize)) -> Vec<Vec<u64>> {
    let g = img.levels;
    let mut out = vec![vec![0u64; g]; g];
    for r in 0..img.rows() as isize {
        for c in 0..img.cols() as isize {
            let (r2, c2) = (r + dy, c + dx);
            if r2 < 0 || c2 < 0 || r2 >= img.rows() as isize || c2 >= img.cols() as isize {
                continue;
            }
            let a = img.at(r as usize, c as usize);
            let b = img.at(r2 as usize, c2 as usize);
            out[a][b] += 1;
            out[b][a] += 1;
        }
    }
    out
}

/// Collects scan lines by walking `step` from every pixel whose predecessor is
/// out of bounds, then splits each line into maximal runs.
pub fn brute_runs(img: &GrayImage, (dy, dx): (isize, isize)) -> Vec<(usize, usize)> {
    let (rows, cols) = (img.rows() as isize, img.cols() as isize);
    let inside = |r: isize, c: isize| r >= 0 && c >= 0 && r < rows && c < cols;
    let mut runs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if inside(r - dy, c - dx) {
                continue;
            }
            let mut line = Vec::new();
            let (mut y, mut x) = (r, c);
            while inside(y, x) {
                line.push(img.at(y as usize, x as usize));
                y += dy;
                x += dx;
            }
            let mut start = 0;
            for i in 1..=line.len() {
                if i == line.len() || line[i] != line[start] {
                    runs.push((line[start], i - start));
                    start = i;
                }
            }
        }
    }
    runs
}

/// Euclidean projection onto `{0 <= a <= c, y'a = 0}` by bisection on the
/// multiplier of the equality constraint.
pub fn project(v: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let at = |mu: f64| -> Vec<f64> { v.iter().zip(y).map(|(&vi, &yi)| (vi - mu * yi).clamp(0.0, c)).collect() };
    let h = |mu: f64| at(mu).iter().zip(y).map(|(a, yi)| a * yi).sum::<f64>();
    let (mut lo, mut hi) = (-1.0, 1.0);
    while h(lo) < 0.0 {
        lo *= 2.0;
    }
    while h(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Maximizes the C-SVM dual with accelerated projected gradient; returns
/// `(alpha, objective)`.
pub fn qp_oracle(x: &[Vec<f64>], y: &[f64], kernel: &KernelSpec<f64>) -> (Vec<f64>, f64) {
    let n = x.len();
    let q: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| y[i] * y[j] * kernel.eval(&x[i], &x[j])).collect()).collect();
    let lipschitz = q.iter().map(|row| row.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max).max(1e-12);
    let grad = |a: &[f64]| -> Vec<f64> { (0..n).map(|i| (0..n).map(|j| q[i][j] * a[j]).sum::<f64>() - 1.0).collect() };
    let mut a = vec![0.0; n];
    let mut z = a.clone();
    let mut t = 1.0f64;
    for _ in 0..200_000 {
        let g = grad(&z);
        let step: Vec<f64> = z.iter().zip(&g).map(|(zi, gi)| zi - gi / lipschitz).collect();
        let next = project(&step, y, kernel.c);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let moved = next.iter().zip(&a).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        z = next.iter().zip(&a).map(|(n1, a0)| n1 + (t - 1.0) / t_next * (n1 - a0)).collect();
        a = next;
        t = t_next;
        if moved < 1e-13 * kernel.c {
            break;
        }
    }
    let obj = a.iter().sum::<f64>() - 0.5 * (0..n).map(|i| (0..n).map(|j| a[i] * a[j] * q[i][j]).sum::<f64>()).sum::<f64>();
    (a, obj)
}

/// Per-sample binarized recount of one class against the rest.
pub fn recount(y_true: &[usize], y_pred: &[usize], class: usize) -> (u64, u64, u64, u64) {
    let (mut tp, mut tn, mut fp, mut fn_) = (0, 0, 0, 0);
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t == class, p == class) {
            (true, true) => tp += 1,
            (false, false) => tn += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
        }
    }
    (tp, tn, fp, fn_)
}

/// Random labelled problem of 4..=20 points; even seeds use RBF, odd linear.
pub fn problem(seed: u64) -> (Vec<Vec<f64>>, Vec<f64>, KernelSpec<f64>) {
    let mut r = rng(seed);
    let n = r.random_range(4..=20);
    let d = r.random_range(1..=4);
    let x: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| r.random_range(-2.0..2.0)).collect()).collect();
    let mut y: Vec<f64> = x.iter().map(|row| if row[0] + 0.3 * r.random_range(-1.0..1.0) > 0.0 { 1.0 } else { -1.0 }).collect();
    y[0] = 1.0;
    y[1] = -1.0;
    let c = r.random_range(0.1..10.0);
    let kernel = if seed % 2 == 0 { KernelSpec::rbf(r.random_range(0.1..2.0), c) } else { KernelSpec::linear(c) };
    (x, y, kernel)
}

/// Recovers alpha per training row from the stored support vectors.
pub fn alphas(m: &BinarySvm<f64>, x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(y)
        .map(|(row, &yi)| {
            m.support_vectors.iter().zip(&m.coef).find(|(sv, &c)| *sv == row && c * yi > 0.0).map_or(0.0, |(_, &c)| c.abs())
        })
        .collect()
}

pub fn objective(m: &BinarySvm<f64>) -> f64 {
    let quad: f64 = m
        .support_vectors
        .iter()
        .zip(&m.coef)
        .map(|(a, &ca)| m.support_vectors.iter().zip(&m.coef).map(|(b, &cb)| ca * cb * m.kernel.eval(a, b)).sum::<f64>())
        .sum();
    m.coef.iter().map(|c| c.abs()).sum::<f64>() - 0.5 * quad
}

/// Largest violation of the first-order conditions over the maximal violating pair.
pub fn kkt_residual(m: &BinarySvm<f64>, x: &[Vec<f64>], y: &[f64]) -> f64 {
    let a = alphas(m, x, y);
    let c = m.kernel.c;
    let eps = 1e-12 * c;
    let (mut up, mut low) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..x.len() {
        let g = y[i] * (m.decision(&x[i]).unwrap() - m.bias) - 1.0;
        let v = -y[i] * g;
        let below = a[i] < c - eps;
        let above = a[i] > eps;
        if (y[i] > 0.0 && below) || (y[i] < 0.0 && above) {
            up = up.max(v);
        }
        if (y[i] < 0.0 && below) || (y[i] > 0.0 && above) {
            low = low.min(v);
        }
    }
    (up - low).max(0.0)
}
