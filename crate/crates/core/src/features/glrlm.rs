//! Gray-level run-length matrices and the eleven classic run-length features.

use serde::{Deserialize, Serialize};

use super::{FeatureError, GrayImage};
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Deg0,
    Deg45,
    Deg90,
    Deg135,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Deg0, Direction::Deg45, Direction::Deg90, Direction::Deg135];

    /// Scan step `(dy, dx)`; rows grow downward.
    pub fn step(self) -> (isize, isize) {
        match self {
            Direction::Deg0 => (0, 1),
            Direction::Deg45 => (-1, 1),
            Direction::Deg90 => (-1, 0),
            Direction::Deg135 => (-1, -1),
        }
    }
}

/// `counts[g][l - 1]` = number of maximal runs of gray `g` with length `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunLengthMatrix {
    pub levels: usize,
    pub max_run: usize,
    pub direction: Direction,
    pub counts: Vec<u64>,
}

impl RunLengthMatrix {
    pub fn get(&self, gray: usize, run_len: usize) -> u64 {
        self.counts[gray * self.max_run + run_len - 1]
    }

    pub fn n_runs(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Number of pixels covered by all runs.
    pub fn covered_pixels(&self) -> u64 {
        (0..self.levels).flat_map(|g| (1..=self.max_run).map(move |l| (g, l))).map(|(g, l)| l as u64 * self.get(g, l)).sum()
    }
}

/// Splits every scan line along `direction` into maximal runs.
pub fn glrlm(img: &GrayImage, direction: Direction) -> RunLengthMatrix {
    let max_run = img.rows().max(img.cols()).max(1);
    let mut counts = vec![0u64; img.levels * max_run];
    let step = direction.step();
    let back = (-step.0, -step.1);
    for r in 0..img.rows() {
        for c in 0..img.cols() {
            // only start at the first pixel of each scan line
            if img.neighbor(r, c, back).is_some() {
                continue;
            }
            let mut pos = (r, c);
            let mut gray = img.at(r, c);
            let mut len = 1;
            while let Some(next) = img.neighbor(pos.0, pos.1, step) {
                let g = img.at(next.0, next.1);
                if g == gray {
                    len += 1;
                } else {
                    counts[gray * max_run + len - 1] += 1;
                    gray = g;
                    len = 1;
                }
                pos = next;
            }
            counts[gray * max_run + len - 1] += 1;
        }
    }
    RunLengthMatrix { levels: img.levels, max_run, direction, counts }
}

/// `[SRE, LRE, GLN, RLN, RP, LGRE, HGRE, SRLGE, SRHGE, LRLGE, LRHGE]`, with
/// gray levels weighted from 1.
pub fn glrlm_features<T: Scalar>(r: &RunLengthMatrix, n_pixels: usize) -> Result<Vec<T>, FeatureError> {
    if n_pixels == 0 {
        return Err(FeatureError::InvalidParameter("pixel count must be positive".into()));
    }
    let n_runs = r.n_runs();
    if n_runs == 0 {
        return Err(FeatureError::NoRuns);
    }
    let mut f = [T::zero(); 11];
    let mut per_gray = vec![T::zero(); r.levels];
    let mut per_len = vec![T::zero(); r.max_run];
    for g in 0..r.levels {
        let i = T::from_usize_lossy(g + 1);
        let i2 = i * i;
        for l in 1..=r.max_run {
            let count = r.get(g, l);
            if count == 0 {
                continue;
            }
            let p = T::lit(count as f64);
            let j = T::from_usize_lossy(l);
            let j2 = j * j;
            per_gray[g] += p;
            per_len[l - 1] += p;
            f[0] += p / j2;
            f[1] += p * j2;
            f[5] += p / i2;
            f[6] += p * i2;
            f[7] += p / (i2 * j2);
            f[8] += p * i2 / j2;
            f[9] += p * j2 / i2;
            f[10] += p * i2 * j2;
        }
    }
    f[2] = per_gray.iter().map(|&v| v * v).sum();
    f[3] = per_len.iter().map(|&v| v * v).sum();
    let runs = T::lit(n_runs as f64);
    for (k, v) in f.iter_mut().enumerate() {
        if k != 4 {
            *v /= runs;
        }
    }
    f[4] = runs / T::from_usize_lossy(n_pixels);
    Ok(f.to_vec())
}
