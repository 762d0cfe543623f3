//! Confusion-matrix accounting and the six one-vs-rest metrics.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::Scalar;

/// `counts[i * k + j]` = samples of true class `i` predicted as `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub n_classes: usize,
    pub counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn zeros(n_classes: usize) -> Self {
        Self { n_classes, counts: vec![0; n_classes * n_classes] }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let k = rows.len();
        assert!(rows.iter().all(|r| r.len() == k), "confusion matrix must be square");
        Self { n_classes: k, counts: rows.concat() }
    }

    pub fn get(&self, truth: usize, pred: usize) -> u64 {
        self.counts[truth * self.n_classes + pred]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n_classes).map(|c| self.get(c, c)).sum()
    }

    pub fn add(&mut self, other: &ConfusionMatrix) {
        assert_eq!(self.n_classes, other.n_classes);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

pub fn confusion(y_true: &[usize], y_pred: &[usize], n_classes: usize) -> Result<ConfusionMatrix, EvalError> {
    if y_true.len() != y_pred.len() {
        return Err(EvalError::LengthMismatch { truth: y_true.len(), pred: y_pred.len() });
    }
    let mut cm = ConfusionMatrix::zeros(n_classes);
    for (&t, &p) in y_true.iter().zip(y_pred) {
        if t >= n_classes || p >= n_classes {
            return Err(EvalError::LabelOutOfRange { label: t.max(p), n_classes });
        }
        cm.counts[t * n_classes + p] += 1;
    }
    Ok(cm)
}

/// Binary view of one class against the rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, tn: u64, fp: u64, fn_: u64) -> Self {
        Self { tp, tn, fp, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }
}

pub fn one_vs_rest_counts(cm: &ConfusionMatrix, class: usize) -> Result<ConfusionCounts, EvalError> {
    if class >= cm.n_classes {
        return Err(EvalError::LabelOutOfRange { label: class, n_classes: cm.n_classes });
    }
    let tp = cm.get(class, class);
    let row: u64 = (0..cm.n_classes).map(|j| cm.get(class, j)).sum();
    let col: u64 = (0..cm.n_classes).map(|i| cm.get(i, class)).sum();
    let (fn_, fp) = (row - tp, col - tp);
    Ok(ConfusionCounts { tp, fn_, fp, tn: cm.total() - tp - fn_ - fp })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metric {
    Sen,
    Spe,
    Acc,
    Pre,
    F1,
    Mcc,
}

impl Metric {
    pub const ALL: [Metric; 6] = [Metric::Sen, Metric::Spe, Metric::Acc, Metric::Pre, Metric::F1, Metric::Mcc];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Sen => "SEN",
            Metric::Spe => "SPE",
            Metric::Acc => "ACC",
            Metric::Pre => "PRE",
            Metric::F1 => "F1",
            Metric::Mcc => "MCC",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The six scores; any metric with a zero denominator is 0 and listed in
/// `undefined`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics<T> {
    pub sen: T,
    pub spe: T,
    pub acc: T,
    pub pre: T,
    pub f1: T,
    pub mcc: T,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<Metric>,
}

impl<T: Scalar> Metrics<T> {
    pub fn get(&self, m: Metric) -> T {
        match m {
            Metric::Sen => self.sen,
            Metric::Spe => self.spe,
            Metric::Acc => self.acc,
            Metric::Pre => self.pre,
            Metric::F1 => self.f1,
            Metric::Mcc => self.mcc,
        }
    }

    fn from_fn(mut f: impl FnMut(Metric) -> T, undefined: Vec<Metric>) -> Self {
        Self {
            sen: f(Metric::Sen),
            spe: f(Metric::Spe),
            acc: f(Metric::Acc),
            pre: f(Metric::Pre),
            f1: f(Metric::F1),
            mcc: f(Metric::Mcc),
            undefined,
        }
    }
}

/// Accuracy, sensitivity, specificity, precision, F1 and Matthews
/// correlation of a binary confusion.
pub fn metrics<T: Scalar>(c: &ConfusionCounts) -> Result<Metrics<T>, EvalError> {
    if c.total() == 0 {
        return Err(EvalError::EmptyCounts);
    }
    let f = |v: u64| T::lit(v as f64);
    let (tp, tn, fp, fn_) = (f(c.tp), f(c.tn), f(c.fp), f(c.fn_));
    let mut undefined = Vec::new();
    let mut ratio = |m: Metric, num: T, den: T| {
        if den > T::zero() {
            num / den
        } else {
            undefined.push(m);
            T::zero()
        }
    };
    let acc = ratio(Metric::Acc, tp + tn, tp + fn_ + tn + fp);
    let sen = ratio(Metric::Sen, tp, tp + fn_);
    let spe = ratio(Metric::Spe, tn, tn + fp);
    let pre = ratio(Metric::Pre, tp, tp + fp);
    let f1 = ratio(Metric::F1, T::lit(2.0) * tp, T::lit(2.0) * tp + fn_ + fp);
    let den = ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt();
    let mcc = ratio(Metric::Mcc, tp * tn - fp * fn_, den);
    undefined.sort();
    Ok(Metrics { sen, spe, acc, pre, f1, mcc: mcc.max(-T::one()).min(T::one()), undefined })
}

/// Unweighted mean of the per-class one-vs-rest metrics.
pub fn macro_metrics<T: Scalar>(cm: &ConfusionMatrix) -> Result<Metrics<T>, EvalError> {
    Ok(macro_with_per_class(cm)?.0)
}

pub(crate) fn macro_with_per_class<T: Scalar>(cm: &ConfusionMatrix) -> Result<(Metrics<T>, Vec<Metrics<T>>), EvalError> {
    if cm.n_classes < 2 {
        return Err(EvalError::TooFewClasses(cm.n_classes));
    }
    let per_class = (0..cm.n_classes)
        .map(|c| metrics::<T>(&one_vs_rest_counts(cm, c)?))
        .collect::<Result<Vec<_>, _>>()?;
    let k = T::from_usize_lossy(cm.n_classes);
    let mut undefined: Vec<Metric> = per_class.iter().flat_map(|m| m.undefined.iter().copied()).collect();
    undefined.sort();
    undefined.dedup();
    let mean = Metrics::from_fn(|m| per_class.iter().map(|p| p.get(m)).sum::<T>() / k, undefined);
    Ok((mean, per_class))
}
