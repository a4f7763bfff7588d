use crate::clustering::Clustering;
use crate::error::{Error, Result};

use super::assignment::max_weight_matching;

/// Agreement between a predicted clustering and ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Points labelled noise.
    pub outliers: usize,
    /// Points whose predicted cluster is matched to their true cluster.
    pub correct: usize,
    /// Everything else, noise included.
    pub incorrect: usize,
    /// Adjusted Rand index with noise treated as its own class.
    pub ari: f64,
    /// For predicted cluster `c` (index `c - 1`), the matched truth label.
    pub matching: Vec<Option<u32>>,
}

/// Predicted-by-truth counts, noise excluded; rows are predicted labels
/// `1..=C`, columns truth labels `1..=G`.
pub fn contingency(pred: &[u32], truth: &[u32]) -> Vec<Vec<i64>> {
    let c = pred.iter().copied().max().unwrap_or(0) as usize;
    let g = truth.iter().copied().max().unwrap_or(0) as usize;
    let mut table = vec![vec![0i64; g]; c];
    for (&p, &t) in pred.iter().zip(truth) {
        if p > 0 && t > 0 {
            table[p as usize - 1][t as usize - 1] += 1;
        }
    }
    table
}

fn pairs(x: i64) -> f64 {
    let x = x as f64;
    x * (x - 1.0) / 2.0
}

/// Adjusted Rand index of two labelings, every distinct label a class.
pub fn adjusted_rand_index(a: &[u32], b: &[u32]) -> f64 {
    let n = a.len() as i64;
    let ka = a.iter().copied().max().map_or(0, |m| m as usize + 1);
    let kb = b.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut table = vec![0i64; ka * kb];
    for (&x, &y) in a.iter().zip(b) {
        table[x as usize * kb + y as usize] += 1;
    }
    let index: f64 = table.iter().map(|&c| pairs(c)).sum();
    let rows: f64 = table.chunks(kb.max(1)).map(|r| pairs(r.iter().sum())).sum();
    let cols: f64 = (0..kb)
        .map(|j| pairs((0..ka).map(|i| table[i * kb + j]).sum()))
        .sum();
    let total = pairs(n);
    if total == 0.0 {
        return 1.0;
    }
    let expected = rows * cols / total;
    let max = (rows + cols) / 2.0;
    if max == expected {
        // Both labelings trivial (single class or all singletons): identical partitions.
        return 1.0;
    }
    (index - expected) / (max - expected)
}

/// Scores `pred` against `truth` (labels `1..=G`).
///
/// Predicted clusters are matched one-to-one to true clusters so that the
/// total overlap is maximal; unmatched clusters and noise count as incorrect.
pub fn evaluate(pred: &Clustering, truth: &[u32]) -> Result<EvalReport> {
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            what: "truth labels vs clustering",
            expected: pred.len(),
            got: truth.len(),
        });
    }
    if let Some(i) = truth.iter().position(|&t| t == 0) {
        return Err(Error::invalid("truth", format!("point {i} has truth label 0")));
    }
    let labels = pred.labels();
    let table = contingency(labels, truth);
    let (score, rows) = max_weight_matching(&table);
    let n = truth.len();
    let correct = score as usize;
    let mut matching: Vec<Option<u32>> = rows.iter().map(|m| m.map(|g| g as u32 + 1)).collect();
    matching.resize(pred.cluster_count() as usize, None);
    Ok(EvalReport {
        outliers: pred.noise_count(),
        correct,
        incorrect: n - correct,
        ari: adjusted_rand_index(labels, truth),
        matching,
    })
}


#[cfg(test)]
mod tests {
    use super::oracle::brute_force_matching;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn perfect_prediction() {
        let truth = vec![1, 1, 2, 2, 3, 3];
        let r = evaluate(&Clustering::from_labels(vec![2, 2, 3, 3, 1, 1]), &truth).unwrap();
        assert_eq!((r.outliers, r.correct, r.incorrect), (0, 6, 0));
        assert!((r.ari - 1.0).abs() < 1e-12);
        assert_eq!(r.matching, vec![Some(3), Some(1), Some(2)]);
    }

    #[test]
    fn all_noise() {
        let r = evaluate(&Clustering::from_labels(vec![0; 5]), &[1, 1, 2, 2, 2]).unwrap();
        assert_eq!((r.outliers, r.correct, r.incorrect), (5, 0, 5));
        assert!(r.matching.is_empty());
    }

    #[test]
    fn unmatched_clusters_and_noise_are_incorrect() {
        // Truth cluster 1 split in two predicted clusters; one noise point.
        let truth = vec![1, 1, 1, 1, 2, 2, 2];
        let pred = Clustering::from_labels(vec![1, 1, 3, 3, 2, 2, 0]);
        let r = evaluate(&pred, &truth).unwrap();
        assert_eq!((r.outliers, r.correct, r.incorrect), (1, 4, 3));
    }

    #[test]
    fn ari_reference_value() {
        // Classic example: ARI of [0,0,1,1] vs [0,0,1,2] is 4/7.
        let ari = adjusted_rand_index(&[0, 0, 1, 1], &[0, 0, 1, 2]);
        assert!((ari - 4.0 / 7.0).abs() < 1e-12, "{ari}");
        assert!(adjusted_rand_index(&[1, 2, 3], &[1, 1, 1]).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(evaluate(&Clustering::from_labels(vec![1, 1]), &[1]).is_err());
        assert!(evaluate(&Clustering::from_labels(vec![1, 1]), &[1, 0]).is_err());
    }

    proptest! {
        #[test]
        fn matching_equals_injective_map_oracle(
            c in 1usize..=6,
            g in 1usize..=6,
            cells in prop::collection::vec(0i64..40, 36),
        ) {
            let table: Vec<Vec<i64>> = (0..c).map(|i| (0..g).map(|j| cells[i * 6 + j]).collect()).collect();
            prop_assert_eq!(max_weight_matching(&table).0, brute_force_matching(&table));
        }

        #[test]
        fn counts_partition_n(
            pairs in prop::collection::vec((0u32..5, 1u32..5), 1..60),
        ) {
            let (pred, truth): (Vec<u32>, Vec<u32>) = pairs.into_iter().unzip();
            let r = evaluate(&Clustering::from_labels(pred.clone()), &truth).unwrap();
            prop_assert_eq!(r.correct + r.incorrect, truth.len());
            prop_assert!(r.outliers <= truth.len());
            prop_assert!(r.correct <= truth.len() - r.outliers);
            prop_assert!(r.ari <= 1.0 + 1e-12 && r.ari >= -1.0 - 1e-12);
        }
    }
}
