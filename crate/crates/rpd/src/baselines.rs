//! Nearest-centroid baseline and the AUROC metric.
//!
//! The baseline scores a query by its Euclidean distance to each class
//! mean, which partitions the space into Voronoi cells of the means. AUROC
//! follows the Mann-Whitney formulation with midrank tie handling; by
//! convention throughout this crate, higher scores mean more anomalous and
//! anomalies are the positive class.

use crate::data::LabeledDataset;
use crate::linalg::distance;

#[derive(Debug, thiserror::Error)]
pub enum BaselineError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Per-class means.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidModel {
    d: usize,
    labels: Vec<usize>,
    means: Vec<Vec<f64>>,
}

impl CentroidModel {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn mean_of(&self, label: usize) -> Option<&[f64]> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| self.means[i].as_slice())
    }

    pub fn means(&self) -> &[Vec<f64>] {
        &self.means
    }
}

/// Distances from one query to every class mean.
#[derive(Debug, Clone)]
pub struct CentroidScore {
    pub distances: Vec<f64>,
    pub min: f64,
    pub argmin_label: usize,
}

pub fn fit_centroids(data: &LabeledDataset) -> Result<CentroidModel, BaselineError> {
    let labels = data.class_labels();
    if labels.is_empty() {
        return Err(BaselineError::InvalidArgument("dataset is empty".into()));
    }
    let d = data.dim();
    let mut means = vec![vec![0.0; d]; labels.len()];
    let mut counts = vec![0usize; labels.len()];
    for (point, label) in data.iter() {
        let k = labels.binary_search(&label).expect("label seen in scan");
        for (m, v) in means[k].iter_mut().zip(point) {
            *m += v;
        }
        counts[k] += 1;
    }
    for (mean, count) in means.iter_mut().zip(&counts) {
        for v in mean.iter_mut() {
            *v /= *count as f64;
        }
    }
    Ok(CentroidModel { d, labels, means })
}

pub fn centroid_score(model: &CentroidModel, x: &[f64]) -> Result<CentroidScore, BaselineError> {
    if x.len() != model.d {
        return Err(BaselineError::DimensionMismatch {
            expected: model.d,
            got: x.len(),
        });
    }
    let distances: Vec<f64> = model.means.iter().map(|m| distance(m, x)).collect();
    let mut min = f64::INFINITY;
    let mut argmin = 0;
    for (k, &dist) in distances.iter().enumerate() {
        if dist < min {
            min = dist;
            argmin = k;
        }
    }
    Ok(CentroidScore {
        distances,
        min,
        argmin_label: model.labels[argmin],
    })
}

/// Area under the ROC curve: the probability that a random positive
/// outranks a random negative, ties counted one half (midranks). Runs in
/// `O(n log n)` by sorting.
pub fn auroc(scores: &[f64], positive: &[bool]) -> Result<f64, BaselineError> {
    if scores.len() != positive.len() {
        return Err(BaselineError::InvalidArgument(format!(
            "{} scores for {} labels",
            scores.len(),
            positive.len()
        )));
    }
    if scores.iter().any(|v| !v.is_finite()) {
        return Err(BaselineError::InvalidArgument(
            "scores must be finite".into(),
        ));
    }
    let n = scores.len();
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = n - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(BaselineError::InvalidArgument(
            "need at least one positive and one negative".into(),
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Midranks over runs of exactly equal scores; ranks are 1-based.
    let mut rank_sum_pos = 0.0f64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let midrank = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            if positive[idx] {
                rank_sum_pos += midrank;
            }
        }
        i = j;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{fill_standard_normal, rng_from_seed, uniform_below};

    #[test]
    fn centroid_means_match_hand_cases() {
        let data = LabeledDataset::from_rows(vec![
            (vec![0.0, 0.0], 0),
            (vec![2.0, 0.0], 0),
            (vec![5.0, 5.0], 1),
        ])
        .unwrap();
        let model = fit_centroids(&data).unwrap();
        assert_eq!(model.mean_of(0).unwrap(), &[1.0, 0.0]);
        assert_eq!(model.mean_of(1).unwrap(), &[5.0, 5.0]);
    }

    #[test]
    fn centroid_means_match_recomputation() {
        let mut rng = rng_from_seed(700);
        let mut rows = Vec::new();
        for _ in 0..200 {
            let mut p = vec![0.0; 4];
            fill_standard_normal(&mut rng, &mut p);
            let label = uniform_below(&mut rng, 10);
            rows.push((p, label));
        }
        let data = LabeledDataset::from_rows(rows).unwrap();
        let model = fit_centroids(&data).unwrap();
        for &label in model.labels() {
            let mut sum = [0.0; 4];
            let mut count = 0usize;
            for (p, l) in data.iter() {
                if l == label {
                    for (s, v) in sum.iter_mut().zip(p) {
                        *s += v;
                    }
                    count += 1;
                }
            }
            for (s, m) in sum.iter().zip(model.mean_of(label).unwrap()) {
                assert!((s / count as f64 - m).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn centroid_score_hand_case() {
        let data =
            LabeledDataset::from_rows(vec![(vec![0.0, 0.0], 0), (vec![10.0, 0.0], 1)]).unwrap();
        let model = fit_centroids(&data).unwrap();
        let score = centroid_score(&model, &[6.0, 0.0]).unwrap();
        assert_eq!(score.distances, vec![6.0, 4.0]);
        assert_eq!(score.min, 4.0);
        assert_eq!(score.argmin_label, 1);
        let at_mean = centroid_score(&model, &[0.0, 0.0]).unwrap();
        assert_eq!(at_mean.distances[0], 0.0);
        assert!(matches!(
            centroid_score(&model, &[0.0]),
            Err(BaselineError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn auroc_perfect_and_tied() {
        let auc = auroc(&[1.0, 1.0, 0.0, 0.0], &[true, true, false, false]).unwrap();
        assert_eq!(auc, 1.0);
        let tied = auroc(&[0.3, 0.3, 0.3, 0.3], &[true, false, true, false]).unwrap();
        assert_eq!(tied, 0.5);
    }

    #[test]
    fn auroc_pairwise_hand_case() {
        // Positives {0.35, 0.8} against negatives {0.1, 0.4}: three of the
        // four pairs rank the positive higher.
        let auc = auroc(&[0.1, 0.4, 0.35, 0.8], &[false, false, true, true]).unwrap();
        assert_eq!(auc, 0.75);
    }

    #[test]
    fn auroc_rejects_single_class() {
        assert!(auroc(&[0.1, 0.2], &[true, true]).is_err());
        assert!(auroc(&[0.1], &[false]).is_err());
        assert!(auroc(&[0.1, 0.2], &[true]).is_err());
    }

    #[test]
    fn auroc_matches_pairwise_oracle_with_ties() {
        let mut rng = rng_from_seed(41);
        for _ in 0..100 {
            let n = 2 + uniform_below(&mut rng, 40);
            let scores: Vec<f64> = (0..n)
                .map(|_| uniform_below(&mut rng, 8) as f64 / 4.0)
                .collect();
            let mut positive: Vec<bool> = (0..n).map(|_| uniform_below(&mut rng, 2) == 1).collect();
            positive[0] = true;
            if n > 1 {
                positive[1] = false;
            }
            let fast = auroc(&scores, &positive).unwrap();
            let mut wins = 0.0f64;
            let mut pairs = 0.0f64;
            for i in 0..n {
                if !positive[i] {
                    continue;
                }
                for j in 0..n {
                    if positive[j] {
                        continue;
                    }
                    pairs += 1.0;
                    if scores[i] > scores[j] {
                        wins += 1.0;
                    } else if scores[i] == scores[j] {
                        wins += 0.5;
                    }
                }
            }
            assert!((fast - wins / pairs).abs() < 1e-12);
        }
    }
}
