use rayon::prelude::*;

use super::report::{EvaluationReport, Protocol};
use super::EvalError;
use crate::arff::Dataset;
use crate::classifiers::ClassDistribution;
use crate::features::{fit_vocabulary, texts_and_labels, transform_documents, VocabularyModel};
use crate::pipeline::{class_name, Pipeline, TrainedModel};
use crate::sampling::{shuffled_indices, stratified_folds};

/// Trains on `train_idx`, predicts `test_idx`. With `leaky` set, the
/// vocabulary is the one fitted on the whole dataset.
#[allow(clippy::too_many_arguments)]
fn train_and_predict(
    pipeline: &Pipeline,
    docs: &[String],
    labels: &[usize],
    class: &str,
    class_labels: &[String],
    leaky: Option<&VocabularyModel>,
    train_idx: &[usize],
    test_idx: &[usize],
) -> Result<(TrainedModel, Vec<ClassDistribution>), EvalError> {
    let trained = match leaky {
        Some(vocab) => {
            let vectorized = transform_documents(docs, labels, vocab, class, class_labels);
            pipeline.fit_vectorized(&vectorized, vocab, train_idx)?
        }
        None => pipeline.fit_documents(docs, labels, train_idx, class, class_labels)?,
    };
    let predictions = test_idx.iter().map(|&i| trained.predict_text(&docs[i])).collect();
    Ok((trained, predictions))
}

fn global_vocabulary(pipeline: &Pipeline, docs: &[String]) -> Result<Option<VocabularyModel>, EvalError> {
    if pipeline.leaky_vectorize {
        Ok(Some(fit_vocabulary(docs, &pipeline.tokenizer, &pipeline.options)?))
    } else {
        Ok(None)
    }
}

/// Trains on every instance and evaluates on the same instances.
pub fn evaluate_resubstitution(pipeline: &Pipeline, data: &Dataset) -> Result<EvaluationReport, EvalError> {
    let (docs, labels) = texts_and_labels(data)?;
    if docs.is_empty() {
        return Err(EvalError::NoInstances);
    }
    let all: Vec<usize> = (0..docs.len()).collect();
    let (_, predictions) =
        train_and_predict(pipeline, &docs, &labels, &class_name(data), data.class_labels(), None, &all, &all)?;
    EvaluationReport::from_predictions(Protocol::Resubstitution, data.class_labels(), &labels, &predictions)
}

/// Outcome of a cross-validation with the per-fold artefacts kept for
/// inspection.
#[derive(Debug, Clone)]
pub struct CrossValidation {
    pub report: EvaluationReport,
    /// Held-out instance indices of each fold.
    pub folds: Vec<Vec<usize>>,
    /// Vocabulary each fold's model was trained with.
    pub vocabularies: Vec<VocabularyModel>,
}

/// Stratified `k`-fold cross-validation. Folds run in parallel; predictions
/// are pooled in fold order into one report.
pub fn cross_validate(pipeline: &Pipeline, data: &Dataset, k: usize, seed: u64) -> Result<CrossValidation, EvalError> {
    let (docs, labels) = texts_and_labels(data)?;
    if k < 2 || k > docs.len() {
        return Err(EvalError::InvalidFolds { folds: k, instances: docs.len() });
    }
    let folds = stratified_folds(&labels, k, seed);
    let leaky = global_vocabulary(pipeline, &docs)?;
    let class = class_name(data);
    let outcomes: Vec<(VocabularyModel, Vec<ClassDistribution>)> = folds
        .par_iter()
        .map(|test_idx| {
            let mut held_out = vec![false; docs.len()];
            for &i in test_idx {
                held_out[i] = true;
            }
            let train_idx: Vec<usize> = (0..docs.len()).filter(|&i| !held_out[i]).collect();
            let (trained, predictions) = train_and_predict(
                pipeline,
                &docs,
                &labels,
                &class,
                data.class_labels(),
                leaky.as_ref(),
                &train_idx,
                test_idx,
            )?;
            Ok((trained.vocabulary, predictions))
        })
        .collect::<Result<_, EvalError>>()?;
    let mut actual = Vec::with_capacity(docs.len());
    let mut predictions = Vec::with_capacity(docs.len());
    let mut vocabularies = Vec::with_capacity(k);
    for (test_idx, (vocab, preds)) in folds.iter().zip(outcomes) {
        actual.extend(test_idx.iter().map(|&i| labels[i]));
        predictions.extend(preds);
        vocabularies.push(vocab);
    }
    let report = EvaluationReport::from_predictions(
        Protocol::CrossValidation { folds: k, seed },
        data.class_labels(),
        &actual,
        &predictions,
    )?;
    Ok(CrossValidation { report, folds, vocabularies })
}

/// Seeded shuffle; the first `round(N * train_percent / 100)` instances
/// train, the rest test.
pub fn percentage_split(
    pipeline: &Pipeline,
    data: &Dataset,
    train_percent: f64,
    seed: u64,
) -> Result<EvaluationReport, EvalError> {
    if !(train_percent > 0.0 && train_percent < 100.0) {
        return Err(EvalError::InvalidPercentage(train_percent));
    }
    let (docs, labels) = texts_and_labels(data)?;
    let n = docs.len();
    let n_train = (n as f64 * train_percent / 100.0).round() as usize;
    if n_train == 0 || n_train >= n {
        return Err(EvalError::EmptySplitPart { train: n_train.min(n), test: n - n_train.min(n) });
    }
    let order = shuffled_indices(n, seed);
    let (train_idx, test_idx) = order.split_at(n_train);
    let leaky = global_vocabulary(pipeline, &docs)?;
    let (_, predictions) = train_and_predict(
        pipeline,
        &docs,
        &labels,
        &class_name(data),
        data.class_labels(),
        leaky.as_ref(),
        train_idx,
        test_idx,
    )?;
    let actual: Vec<usize> = test_idx.iter().map(|&i| labels[i]).collect();
    EvaluationReport::from_predictions(
        Protocol::PercentageSplit { train_percent, seed },
        data.class_labels(),
        &actual,
        &predictions,
    )
}

/// Evaluates a trained model on a separate labelled test set, vectorized
/// with the training vocabulary.
pub fn evaluate_holdout(trained: &TrainedModel, test: &Dataset) -> Result<EvaluationReport, EvalError> {
    let vectorized = trained.vectorize(test)?;
    let predictions: Vec<ClassDistribution> =
        vectorized.rows.par_iter().map(|x| trained.model.predict_distribution(x)).collect();
    EvaluationReport::from_predictions(Protocol::Holdout, trained.class_labels(), &vectorized.labels, &predictions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arff::{AttributeSpec, Instance, Value};
    use crate::classifiers::{Algorithm, ClassifierSpec};
    use crate::features::{TokenizerSpec, VectorizerOptions};

    fn text_data(n: usize) -> Dataset {
        let labels = ["A", "B"];
        let mut d = Dataset::new(
            "t",
            vec![AttributeSpec::string("text"), AttributeSpec::nominal("class", labels)],
        );
        for i in 0..n {
            let c = i % 3 / 2;
            let text = format!("mot{} commun tok{}", c, i);
            d.instances.push(Instance::new(vec![Value::Text(text), Value::Text(labels[c].into())]));
        }
        d
    }

    fn pipeline(algorithm: Algorithm) -> Pipeline {
        Pipeline::new(ClassifierSpec::new(algorithm), TokenizerSpec::word(), VectorizerOptions::default())
    }

    #[test]
    fn zero_r_resubstitution_is_majority_rate() {
        let r = evaluate_resubstitution(&pipeline(Algorithm::ZeroR), &text_data(30)).unwrap();
        assert_eq!(r.correct, 20);
        assert_eq!(r.protocol, Protocol::Resubstitution);
    }

    #[test]
    fn split_sizes_follow_rounding() {
        let r = percentage_split(&pipeline(Algorithm::NaiveBayesMultinomial), &text_data(10), 60.0, 3).unwrap();
        assert_eq!(r.total, 4);
        assert_eq!(
            percentage_split(&pipeline(Algorithm::ZeroR), &text_data(10), 99.0, 3).unwrap_err(),
            EvalError::EmptySplitPart { train: 10, test: 0 }
        );
        assert!(percentage_split(&pipeline(Algorithm::ZeroR), &text_data(10), 100.0, 3).is_err());
        let a = percentage_split(&pipeline(Algorithm::NaiveBayesMultinomial), &text_data(30), 60.0, 8).unwrap();
        let b = percentage_split(&pipeline(Algorithm::NaiveBayesMultinomial), &text_data(30), 60.0, 8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fold_vocabularies_exclude_held_out_tokens() {
        let data = text_data(40);
        let cv = cross_validate(&pipeline(Algorithm::NaiveBayesMultinomial), &data, 10, 5).unwrap();
        assert_eq!(cv.report.total, 40);
        for (fold, vocab) in cv.folds.iter().zip(&cv.vocabularies) {
            for &i in fold {
                assert!(!vocab.contains(&format!("tok{i}")));
            }
        }
        assert!(cv.report.accuracy > 0.9);
    }

    #[test]
    fn leaky_vectorization_sees_every_token() {
        let data = text_data(20);
        let cv = cross_validate(&pipeline(Algorithm::NaiveBayesMultinomial).with_leaky_vectorize(true), &data, 5, 5).unwrap();
        assert!(cv.vocabularies.iter().all(|v| v.contains("tok0")));
    }

    #[test]
    fn fold_count_is_checked() {
        assert_eq!(
            cross_validate(&pipeline(Algorithm::ZeroR), &text_data(5), 6, 1).unwrap_err(),
            EvalError::InvalidFolds { folds: 6, instances: 5 }
        );
    }

    #[test]
    fn holdout_requires_matching_classes() {
        let trained = pipeline(Algorithm::NaiveBayesMultinomial).fit(&text_data(12)).unwrap();
        let r = evaluate_holdout(&trained, &text_data(9)).unwrap();
        assert_eq!(r.total, 9);
        let mut other = text_data(3);
        other.attributes[1] = AttributeSpec::nominal("class", ["B", "A"]);
        assert!(evaluate_holdout(&trained, &other).is_err());
    }
}
