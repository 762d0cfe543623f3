mod common;

use grainsort::eval::{
    confusion, cross_validate_with, kfold_split, macro_metrics, metrics, one_vs_rest_counts, ConfusionCounts, Learner,
    SvmLearner,
};
use grainsort::svm::{KernelSpec, SmoOptions};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn f1_is_harmonic_mean_and_mcc_is_bounded() {
    let mut r = common::rng(77);
    for _ in 0..1000 {
        let c = ConfusionCounts::new(r.random_range(0..200), r.random_range(0..200), r.random_range(0..200), r.random_range(0..200));
        if c.total() == 0 {
            continue;
        }
        let m = metrics::<f64>(&c).unwrap();
        if m.pre + m.sen > 0.0 && c.tp + c.fp > 0 && c.tp + c.fn_ > 0 {
            let h = 2.0 * m.pre * m.sen / (m.pre + m.sen);
            assert!((m.f1 - h).abs() < 1e-12, "{c:?}");
        }
        assert!((-1.0..=1.0).contains(&m.mcc));
        for v in [m.sen, m.spe, m.acc, m.pre, m.f1] {
            assert!((0.0..=1.0).contains(&v));
        }
        let perfect = c.fp == 0 && c.fn_ == 0 && c.tp > 0 && c.tn > 0;
        assert_eq!(m.mcc == 1.0, perfect, "{c:?}");
    }
}

proptest! {
    #[test]
    fn confusion_identities(pairs in prop::collection::vec((0usize..4, 0usize..4), 1..200)) {
        let (t, p): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
        let cm = confusion(&t, &p, 4).unwrap();
        prop_assert_eq!(cm.total(), t.len() as u64);
        let mut tp_sum = 0;
        let mut support = 0;
        for c in 0..4 {
            let k = one_vs_rest_counts(&cm, c).unwrap();
            let (tp, tn, fp, fn_) = common::recount(&t, &p, c);
            prop_assert_eq!(k, ConfusionCounts::new(tp, tn, fp, fn_));
            prop_assert_eq!(k.tp + k.fn_, t.iter().filter(|&&v| v == c).count() as u64);
            tp_sum += k.tp;
            support += k.tp + k.fn_;
        }
        prop_assert_eq!(tp_sum, cm.trace());
        prop_assert_eq!(support, t.len() as u64);
    }

    #[test]
    fn folds_partition_and_stratify(counts in prop::collection::vec(10usize..40, 2..5), k in 2usize..10, seed in any::<u64>()) {
        let labels: Vec<usize> = counts.iter().enumerate().flat_map(|(c, &n)| std::iter::repeat_n(c, n)).collect();
        let plan = kfold_split(&labels, k, seed).unwrap();
        let mut hits = vec![0; labels.len()];
        for f in 0..k {
            let test = plan.test_indices(f);
            let train = plan.train_indices(f);
            prop_assert_eq!(test.len() + train.len(), labels.len());
            for &i in &test {
                hits[i] += 1;
            }
            for (c, &n) in counts.iter().enumerate() {
                let in_fold = test.iter().filter(|&&i| labels[i] == c).count();
                prop_assert!(in_fold == n / k || in_fold == n / k + 1);
            }
        }
        prop_assert!(hits.iter().all(|&h| h == 1));
        prop_assert_eq!(kfold_split(&labels, k, seed).unwrap(), plan);
    }
}

#[test]
fn one_sample_per_class_per_fold() {
    let labels = [0, 0, 0, 1, 1, 1, 2, 2, 2];
    let plan = kfold_split(&labels, 3, 4).unwrap();
    for f in 0..3 {
        let mut classes: Vec<usize> = plan.test_indices(f).iter().map(|&i| labels[i]).collect();
        classes.sort();
        assert_eq!(classes, vec![0, 1, 2]);
    }
    let single = kfold_split(&[0; 10], 10, 0).unwrap();
    assert!(single.fold_sizes().iter().all(|&s| s == 1));
}

fn blobs(seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut r = common::rng(seed);
    let labels: Vec<usize> = (0..60).map(|i| i % 3).collect();
    let x = labels.iter().map(|&l| vec![l as f64 * 1.5 + r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)]).collect();
    (x, labels)
}

#[test]
fn models_ignore_test_split_features() {
    let (x, labels) = blobs(3);
    let plan = kfold_split(&labels, 5, 9).unwrap();
    let learner = SvmLearner::new(KernelSpec::default(), SmoOptions::default());
    for fold in 0..5 {
        let train = plan.train_indices(fold);
        let mut perturbed = x.clone();
        for i in plan.test_indices(fold) {
            perturbed[i] = vec![1e3 * (i as f64 + 1.0), -7.0];
        }
        let fit = |rows: &[Vec<f64>]| {
            let tx: Vec<Vec<f64>> = train.iter().map(|&i| rows[i].clone()).collect();
            let ty: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
            learner.fit(&tx, &ty, 3).unwrap()
        };
        assert_eq!(fit(&x), fit(&perturbed));
    }
}

#[test]
fn same_seed_same_report() {
    let (x, labels) = blobs(5);
    let learner = SvmLearner::new(KernelSpec::default(), SmoOptions::default());
    let run = |seed| cross_validate_with(&x, &labels, 3, &kfold_split(&labels, 5, seed).unwrap(), &learner).unwrap();
    assert_eq!(run(1), run(1));
    let r = run(1);
    let cm_macro = macro_metrics::<f64>(&r.folds[0].confusion).unwrap();
    assert_eq!(cm_macro, r.folds[0].macro_metrics);
    let mean_acc = r.folds.iter().map(|f| f.macro_metrics.acc).sum::<f64>() / 5.0;
    assert!((r.mean.acc - mean_acc).abs() < 1e-15);
    let var = r.folds.iter().map(|f| (f.macro_metrics.acc - mean_acc).powi(2)).sum::<f64>() / 4.0;
    assert!((r.std.acc - var.sqrt()).abs() < 1e-15);
}
