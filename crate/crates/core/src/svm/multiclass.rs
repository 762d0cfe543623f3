//! One-vs-one reduction over standardized features.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{standardize_fit, train_binary, BinarySvm, KernelSpec, Scaler, SmoOptions, SvmError};
use crate::features::MethodTag;
use crate::Scalar;

/// Binary model separating `positive` (+1) from `negative` (-1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairModel<T> {
    pub positive: usize,
    pub negative: usize,
    pub model: BinarySvm<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MulticlassSvm<T> {
    pub class_ids: Vec<usize>,
    pub scaler: Scaler<T>,
    /// Kernel as configured; each pair model stores its resolved copy.
    pub kernel: KernelSpec<T>,
    pub pairs: Vec<PairModel<T>>,
    /// Feature chain the model was trained on, when known.
    #[serde(default)]
    pub method: Option<MethodTag>,
}

/// Vote tally for one input.
#[derive(Clone, Debug, PartialEq)]
pub struct Prediction<T> {
    pub class: usize,
    pub votes: Vec<usize>,
    pub margins: Vec<T>,
}

/// Trains `K (K - 1) / 2` pairwise models; every class in `0..n_classes`
/// must be present.
pub fn train_multiclass<T: Scalar>(
    x: &[Vec<T>],
    labels: &[usize],
    n_classes: usize,
    kernel: &KernelSpec<T>,
    opts: &SmoOptions,
) -> Result<MulticlassSvm<T>, SvmError<T>> {
    kernel.validate()?;
    if x.len() != labels.len() {
        return Err(SvmError::Degenerate(format!("{} rows but {} labels", x.len(), labels.len())));
    }
    if n_classes < 2 {
        return Err(SvmError::Degenerate(format!("need at least two classes, got {n_classes}")));
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >= n_classes) {
        return Err(SvmError::Degenerate(format!("label {bad} outside 0..{n_classes}")));
    }
    for class in 0..n_classes {
        if !labels.contains(&class) {
            return Err(SvmError::Degenerate(format!("class {class} has no training samples")));
        }
    }
    let scaler = standardize_fit(x)?;
    let xs = scaler.transform(x)?;
    let resolved = kernel.resolve(&xs);

    let class_pairs: Vec<(usize, usize)> = (0..n_classes).flat_map(|a| (a + 1..n_classes).map(move |b| (a, b))).collect();
    let pairs = class_pairs
        .par_iter()
        .map(|&(a, b)| {
            let (sub_x, sub_y): (Vec<Vec<T>>, Vec<T>) = xs
                .iter()
                .zip(labels)
                .filter(|(_, &l)| l == a || l == b)
                .map(|(row, &l)| (row.clone(), if l == a { T::one() } else { -T::one() }))
                .unzip();
            let model = train_binary(&sub_x, &sub_y, &resolved, opts).map_err(|e| match e {
                SvmError::NotConverged { iterations, gap, best, .. } => {
                    SvmError::NotConverged { iterations, gap, pair: Some((a, b)), best }
                }
                other => other,
            })?;
            Ok(PairModel { positive: a, negative: b, model })
        })
        .collect::<Result<Vec<_>, SvmError<T>>>()?;
    Ok(MulticlassSvm { class_ids: (0..n_classes).collect(), scaler, kernel: *kernel, pairs, method: None })
}

impl<T: Scalar> MulticlassSvm<T> {
    pub fn n_classes(&self) -> usize {
        self.class_ids.len()
    }

    pub fn dim(&self) -> usize {
        self.scaler.dim()
    }

    /// Majority vote; ties go to the largest summed `|decision|` among the
    /// tied classes, then to the lowest class id.
    pub fn predict_detailed(&self, x: &[T]) -> Result<Prediction<T>, SvmError<T>> {
        let z = self.scaler.transform_row(x)?;
        let k = self.n_classes();
        let mut votes = vec![0usize; k];
        let mut margins = vec![T::zero(); k];
        for p in &self.pairs {
            let d = p.model.decision_unchecked(&z);
            let winner = if d > T::zero() { p.positive } else { p.negative };
            votes[winner] += 1;
            margins[winner] += d.abs();
        }
        let mut class = 0;
        for c in 1..k {
            if votes[c] > votes[class] || (votes[c] == votes[class] && margins[c] > margins[class]) {
                class = c;
            }
        }
        Ok(Prediction { class: self.class_ids[class], votes, margins })
    }

    pub fn predict(&self, x: &[T]) -> Result<usize, SvmError<T>> {
        Ok(self.predict_detailed(x)?.class)
    }

    pub fn predict_all(&self, x: &[Vec<T>]) -> Result<Vec<usize>, SvmError<T>> {
        x.iter().map(|r| self.predict(r)).collect()
    }
}
