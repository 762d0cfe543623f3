//! Cross-validation driver.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::macro_with_per_class;
use super::{confusion, kfold_split, BoxError, ConfusionMatrix, EvalError, FoldPlan, Metric, Metrics};
use crate::features::{extract_all, FeatureParams, MethodTag};
use crate::radar::AScan;
use crate::svm::{train_multiclass, KernelSpec, MulticlassSvm, SmoOptions};
use crate::Scalar;

/// Anything that can be fit on a training split and scored on a test split.
pub trait Learner<T: Scalar>: Sync {
    type Model: Send;

    fn fit(&self, x: &[Vec<T>], y: &[usize], n_classes: usize) -> Result<Self::Model, BoxError>;

    fn predict(&self, model: &Self::Model, x: &[Vec<T>]) -> Result<Vec<usize>, BoxError>;

    /// Hook used by the cross-validation loop; `truth` is for oracle learners
    /// only and is ignored by default.
    fn predict_fold(&self, model: &Self::Model, x: &[Vec<T>], _truth: &[usize]) -> Result<Vec<usize>, BoxError> {
        self.predict(model, x)
    }
}

/// Standardizer + one-vs-one SVM, both fit on the training split.
#[derive(Clone, Debug)]
pub struct SvmLearner<T> {
    pub kernel: KernelSpec<T>,
    pub opts: SmoOptions,
    pub method: Option<MethodTag>,
}

impl<T: Scalar> SvmLearner<T> {
    pub fn new(kernel: KernelSpec<T>, opts: SmoOptions) -> Self {
        Self { kernel, opts, method: None }
    }
}

impl<T: Scalar> Learner<T> for SvmLearner<T> {
    type Model = MulticlassSvm<T>;

    fn fit(&self, x: &[Vec<T>], y: &[usize], n_classes: usize) -> Result<MulticlassSvm<T>, BoxError> {
        let mut model = train_multiclass(x, y, n_classes, &self.kernel, &self.opts)?;
        model.method = self.method;
        Ok(model)
    }

    fn predict(&self, model: &MulticlassSvm<T>, x: &[Vec<T>]) -> Result<Vec<usize>, BoxError> {
        Ok(model.predict_all(x)?)
    }
}

/// Returns the true labels; exercises the pipeline without a classifier.
#[derive(Clone, Copy, Debug, Default)]
pub struct EchoLearner;

impl<T: Scalar> Learner<T> for EchoLearner {
    type Model = ();

    fn fit(&self, _x: &[Vec<T>], _y: &[usize], _n_classes: usize) -> Result<(), BoxError> {
        Ok(())
    }

    fn predict(&self, _model: &(), _x: &[Vec<T>]) -> Result<Vec<usize>, BoxError> {
        Err("echo learner can only score labelled folds".into())
    }

    fn predict_fold(&self, _model: &(), _x: &[Vec<T>], truth: &[usize]) -> Result<Vec<usize>, BoxError> {
        Ok(truth.to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldResult<T> {
    pub fold: usize,
    pub confusion: ConfusionMatrix,
    pub macro_metrics: Metrics<T>,
    pub per_class: Vec<Metrics<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvReport<T> {
    pub k: usize,
    pub seed: u64,
    pub n_classes: usize,
    pub folds: Vec<FoldResult<T>>,
    /// Mean of the per-fold macro metrics.
    pub mean: Metrics<T>,
    /// Sample standard deviation (k - 1 denominator) across folds.
    pub std: Metrics<T>,
    /// Sum of the fold confusion matrices.
    pub pooled: ConfusionMatrix,
}

impl<T: Scalar> CvReport<T> {
    pub fn fold_values(&self, m: Metric) -> Vec<T> {
        self.folds.iter().map(|f| f.macro_metrics.get(m)).collect()
    }
}

fn gather<T: Clone>(rows: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| rows[i].clone()).collect()
}

/// Runs the learner over every fold of `plan`, folds in parallel.
pub fn cross_validate_with<T: Scalar, L: Learner<T>>(
    features: &[Vec<T>],
    labels: &[usize],
    n_classes: usize,
    plan: &FoldPlan,
    learner: &L,
) -> Result<CvReport<T>, EvalError> {
    if features.len() != labels.len() || plan.assignments.len() != labels.len() {
        return Err(EvalError::LengthMismatch { truth: labels.len(), pred: features.len() });
    }
    if n_classes < 2 {
        return Err(EvalError::TooFewClasses(n_classes));
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >= n_classes) {
        return Err(EvalError::LabelOutOfRange { label: bad, n_classes });
    }
    let folds = (0..plan.k)
        .into_par_iter()
        .map(|fold| -> Result<FoldResult<T>, EvalError> {
            let annotate = |source: BoxError| EvalError::Fold { fold, source };
            let (train, test) = (plan.train_indices(fold), plan.test_indices(fold));
            let (test_x, test_y) = (gather(features, &test), gather(labels, &test));
            let model = learner.fit(&gather(features, &train), &gather(labels, &train), n_classes).map_err(annotate)?;
            let pred = learner.predict_fold(&model, &test_x, &test_y).map_err(annotate)?;
            let cm = confusion(&test_y, &pred, n_classes)?;
            let (macro_metrics, per_class) = macro_with_per_class(&cm)?;
            Ok(FoldResult { fold, confusion: cm, macro_metrics, per_class })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut pooled = ConfusionMatrix::zeros(n_classes);
    for f in &folds {
        pooled.add(&f.confusion);
    }
    let (mean, std) = summarize(&folds);
    Ok(CvReport { k: plan.k, seed: plan.seed, n_classes, folds, mean, std, pooled })
}

fn summarize<T: Scalar>(folds: &[FoldResult<T>]) -> (Metrics<T>, Metrics<T>) {
    let n = T::from_usize_lossy(folds.len());
    let mut undefined: Vec<Metric> = folds.iter().flat_map(|f| f.macro_metrics.undefined.iter().copied()).collect();
    undefined.sort();
    undefined.dedup();
    let mean_of = |m: Metric| folds.iter().map(|f| f.macro_metrics.get(m)).sum::<T>() / n;
    let std_of = |m: Metric| {
        if folds.len() < 2 {
            return T::zero();
        }
        let mu = mean_of(m);
        let ss: T = folds.iter().map(|f| (f.macro_metrics.get(m) - mu).powi(2)).sum();
        (ss / (n - T::one())).sqrt()
    };
    let build = |f: &dyn Fn(Metric) -> T, undefined: Vec<Metric>| Metrics {
        sen: f(Metric::Sen),
        spe: f(Metric::Spe),
        acc: f(Metric::Acc),
        pre: f(Metric::Pre),
        f1: f(Metric::F1),
        mcc: f(Metric::Mcc),
        undefined,
    };
    (build(&mean_of, undefined), build(&std_of, Vec::new()))
}

/// Stratified split, feature extraction and SVM scoring of one method.
pub fn cross_validate<T: Scalar>(
    scans: &[AScan<T>],
    method: MethodTag,
    features: &FeatureParams,
    kernel: &KernelSpec<T>,
    opts: &SmoOptions,
    k: usize,
    seed: u64,
) -> Result<CvReport<T>, EvalError> {
    let labels: Vec<usize> = scans.iter().map(|a| a.label.id()).collect();
    let x: Vec<Vec<T>> = extract_all(scans, method, features)?.into_iter().map(|v| v.values).collect();
    let plan = kfold_split(&labels, k, seed)?;
    let learner = SvmLearner { kernel: kernel.clone(), opts: opts.clone(), method: Some(method) };
    cross_validate_with(&x, &labels, crate::radar::SurfaceClass::ALL.len(), &plan, &learner)
}
