//! Histogram gradient-boosted regression trees with logistic loss.
//!
//! Binary problems grow a single tree series on `P(class 1)`; multiclass
//! problems grow one independent series per class (one-vs-rest) and
//! renormalize the per-class sigmoids. Trees grow depth-wise. Candidate
//! thresholds come from equal-frequency quantiles of each feature over the
//! training set, zeros included, so sparse columns stay cheap: samples not
//! stored in a column fall into the bin holding zero.

use serde::{Deserialize, Serialize};

use super::{check_training_set, normalize_ovr, sigmoid, TrainConfig};
use crate::error::{Error, Result};
use crate::sparse::SparseVector;

/// L2 penalty on leaf values.
const LEAF_LAMBDA: f64 = 1.0;
const MIN_SPLIT_GAIN: f64 = 1e-12;
/// Class priors are clipped away from 0 and 1 to keep the base score finite.
const PRIOR_CLIP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    /// Samples with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    nodes: Vec<TreeNode>,
}

impl RegressionTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn predict(&self, x: &SparseVector) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                TreeNode::Leaf { value } => return value,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if x.get(feature) <= threshold {
                        left
                    } else {
                        right
                    }
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], at: usize) -> usize {
            match nodes[at] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => {
                    1 + walk(nodes, left).max(walk(nodes, right))
                }
            }
        }
        walk(&self.nodes, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbdtModel {
    n_features: usize,
    n_classes: usize,
    learning_rate: f64,
    /// One entry per tree series (one for binary, `C` for multiclass).
    base_score: Vec<f64>,
    /// `trees[series][round]`.
    trees: Vec<Vec<RegressionTree>>,
}

impl GbdtModel {
    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn base_score(&self) -> &[f64] {
        &self.base_score
    }

    pub fn trees(&self) -> &[Vec<RegressionTree>] {
        &self.trees
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    fn raw_scores(&self, x: &SparseVector) -> Vec<f64> {
        self.base_score
            .iter()
            .zip(&self.trees)
            .map(|(&base, series)| base + series.iter().map(|t| t.predict(x)).sum::<f64>())
            .collect()
    }
}

pub fn gbdt_predict_proba(model: &GbdtModel, x: &SparseVector) -> Result<Vec<f64>> {
    x.check_dim(model.n_features)?;
    let raw = model.raw_scores(x);
    if model.n_classes == 2 {
        let p = sigmoid(raw[0]);
        return Ok(vec![1.0 - p, p]);
    }
    Ok(normalize_ovr(raw.into_iter().map(sigmoid).collect()))
}

pub fn gbdt_fit(
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
    cfg: &TrainConfig,
) -> Result<GbdtModel> {
    if cfg.n_bins < 2 {
        return Err(Error::Config(format!(
            "n_bins must be at least 2, got {}",
            cfg.n_bins
        )));
    }
    if cfg.n_bins > u16::MAX as usize + 1 {
        return Err(Error::Config(format!(
            "n_bins must be at most 65536, got {}",
            cfg.n_bins
        )));
    }
    if n_classes < 2 {
        return Err(Error::Config(
            "gradient boosting needs at least two classes".into(),
        ));
    }
    let dim = check_training_set(x, y, n_classes)?;
    let data = BinnedData::build(x, dim, cfg.n_bins);
    let series: Vec<usize> = if n_classes == 2 {
        vec![1]
    } else {
        (0..n_classes).collect()
    };

    let mut base_score = Vec::with_capacity(series.len());
    let mut trees = Vec::with_capacity(series.len());
    for positive in series {
        let targets: Vec<f64> = y
            .iter()
            .map(|&c| f64::from(u8::from(c == positive)))
            .collect();
        let (base, series_trees) = fit_series(&data, &targets, cfg);
        base_score.push(base);
        trees.push(series_trees);
    }
    Ok(GbdtModel {
        n_features: dim,
        n_classes,
        learning_rate: cfg.learning_rate,
        base_score,
        trees,
    })
}

fn fit_series(data: &BinnedData, targets: &[f64], cfg: &TrainConfig) -> (f64, Vec<RegressionTree>) {
    let n = targets.len();
    let prior = (targets.iter().sum::<f64>() / n as f64).clamp(PRIOR_CLIP, 1.0 - PRIOR_CLIP);
    let base = (prior / (1.0 - prior)).ln();
    if targets.iter().all(|&t| t == targets[0]) {
        return (base, Vec::new());
    }
    let mut scores = vec![base; n];
    let mut grad = vec![0.0; n];
    let mut hess = vec![0.0; n];
    let mut trees = Vec::with_capacity(cfg.n_rounds);
    for _ in 0..cfg.n_rounds {
        for i in 0..n {
            let p = sigmoid(scores[i]);
            grad[i] = p - targets[i];
            hess[i] = (p * (1.0 - p)).max(1e-16);
        }
        let (tree, leaf_of) = grow_tree(data, &grad, &hess, cfg);
        for i in 0..n {
            if let TreeNode::Leaf { value } = tree.nodes[leaf_of[i]] {
                scores[i] += value;
            }
        }
        trees.push(tree);
    }
    (base, trees)
}

/// Column-major binned copy of the training matrix.
struct BinnedData {
    n_samples: usize,
    /// Ascending cut values per feature; bin `k` holds `(cut[k-1], cut[k]]`.
    cuts: Vec<Vec<f64>>,
    zero_bin: Vec<u16>,
    /// Stored (nonzero) entries per feature as `(sample, bin)`.
    columns: Vec<Vec<(u32, u16)>>,
}

impl BinnedData {
    fn build(x: &[SparseVector], dim: usize, n_bins: usize) -> Self {
        let mut raw: Vec<Vec<(u32, f64)>> = vec![Vec::new(); dim];
        for (i, v) in x.iter().enumerate() {
            for (j, val) in v.iter() {
                raw[j].push((i as u32, val));
            }
        }
        let n = x.len();
        let mut cuts = Vec::with_capacity(dim);
        let mut zero_bin = Vec::with_capacity(dim);
        let mut columns = Vec::with_capacity(dim);
        for col in raw {
            let c = quantile_cuts(&col, n, n_bins);
            zero_bin.push(bin_of(&c, 0.0));
            let binned = if c.is_empty() {
                Vec::new()
            } else {
                col.iter().map(|&(i, v)| (i, bin_of(&c, v))).collect()
            };
            cuts.push(c);
            columns.push(binned);
        }
        Self {
            n_samples: n,
            cuts,
            zero_bin,
            columns,
        }
    }
}

fn bin_of(cuts: &[f64], v: f64) -> u16 {
    cuts.partition_point(|&c| c < v) as u16
}

/// Equal-frequency cut points over `n` values of which only the nonzero
/// ones are listed in `col`. Cuts at or above the maximum are dropped since
/// they cannot separate anything.
fn quantile_cuts(col: &[(u32, f64)], n: usize, n_bins: usize) -> Vec<f64> {
    let mut values: Vec<f64> = col.iter().map(|&(_, v)| v).collect();
    values.sort_by(f64::total_cmp);
    let n_neg = values.partition_point(|&v| v < 0.0);
    let n_zero = n - values.len();
    let at = |rank: usize| -> f64 {
        if rank < n_neg {
            values[rank]
        } else if rank < n_neg + n_zero {
            0.0
        } else {
            values[rank - n_zero]
        }
    };
    if n == 0 {
        return Vec::new();
    }
    let max = at(n - 1);
    let mut cuts: Vec<f64> = Vec::new();
    for q in 1..n_bins {
        let rank = (q * n).div_ceil(n_bins).saturating_sub(1);
        let v = at(rank);
        if v < max && cuts.last().is_none_or(|&last| v > last) {
            cuts.push(v);
        }
    }
    cuts
}

#[derive(Clone, Copy, Default)]
struct Stats {
    grad: f64,
    hess: f64,
    count: usize,
}

impl Stats {
    fn add(&mut self, g: f64, h: f64) {
        self.grad += g;
        self.hess += h;
        self.count += 1;
    }

    fn sub(self, other: Stats) -> Stats {
        Stats {
            grad: self.grad - other.grad,
            hess: self.hess - other.hess,
            count: self.count - other.count,
        }
    }

    fn score(&self) -> f64 {
        self.grad * self.grad / (self.hess + LEAF_LAMBDA)
    }

    fn leaf_value(&self) -> f64 {
        -self.grad / (self.hess + LEAF_LAMBDA)
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    gain: f64,
    feature: usize,
    bin: u16,
    left: Stats,
}

/// Grows one tree; returns it with each training sample's leaf node id.
fn grow_tree(
    data: &BinnedData,
    grad: &[f64],
    hess: &[f64],
    cfg: &TrainConfig,
) -> (RegressionTree, Vec<usize>) {
    let n = data.n_samples;
    let mut root = Stats::default();
    for i in 0..n {
        root.add(grad[i], hess[i]);
    }
    // node id per sample; leaves hold their stats until finalized
    let mut node_of = vec![0usize; n];
    let mut nodes = vec![TreeNode::Leaf { value: 0.0 }];
    let mut node_stats = vec![root];
    let mut frontier = vec![0usize];
    let min_leaf = cfg.min_leaf.max(1);

    for _depth in 0..cfg.max_depth {
        // slot in `frontier` for each node id, usize::MAX when inactive
        let mut slot = vec![usize::MAX; nodes.len()];
        let mut active = Vec::new();
        for &id in &frontier {
            if node_stats[id].count >= 2 * min_leaf {
                slot[id] = active.len();
                active.push(id);
            }
        }
        if active.is_empty() {
            break;
        }
        let mut best: Vec<Option<Candidate>> = vec![None; active.len()];
        let mut hist: Vec<Stats> = Vec::new();
        let mut touched: Vec<usize> = Vec::new();
        let mut touched_flag = vec![false; active.len()];
        for (feature, column) in data.columns.iter().enumerate() {
            if column.is_empty() {
                continue;
            }
            let n_bins = data.cuts[feature].len() + 1;
            let needed = active.len() * n_bins;
            if hist.len() < needed {
                hist.resize(needed, Stats::default());
            }
            for &(sample, bin) in column {
                let s = slot[node_of[sample as usize]];
                if s == usize::MAX {
                    continue;
                }
                if !touched_flag[s] {
                    touched_flag[s] = true;
                    touched.push(s);
                }
                hist[s * n_bins + bin as usize].add(grad[sample as usize], hess[sample as usize]);
            }
            touched.sort_unstable();
            for &s in &touched {
                let bins = &mut hist[s * n_bins..(s + 1) * n_bins];
                let total = node_stats[active[s]];
                let stored = bins.iter().fold(Stats::default(), |acc, b| Stats {
                    grad: acc.grad + b.grad,
                    hess: acc.hess + b.hess,
                    count: acc.count + b.count,
                });
                let zb = data.zero_bin[feature] as usize;
                let rest = total.sub(stored);
                bins[zb].grad += rest.grad;
                bins[zb].hess += rest.hess;
                bins[zb].count += rest.count;

                let parent = total.score();
                let mut left = Stats::default();
                for (k, b) in bins.iter().enumerate().take(n_bins - 1) {
                    left.grad += b.grad;
                    left.hess += b.hess;
                    left.count += b.count;
                    let right = total.sub(left);
                    if left.count < min_leaf || right.count < min_leaf {
                        continue;
                    }
                    let gain = left.score() + right.score() - parent;
                    if gain > MIN_SPLIT_GAIN && best[s].is_none_or(|c| gain > c.gain) {
                        best[s] = Some(Candidate {
                            gain,
                            feature,
                            bin: k as u16,
                            left,
                        });
                    }
                }
                bins.iter_mut().for_each(|b| *b = Stats::default());
                touched_flag[s] = false;
            }
            touched.clear();
        }

        // apply the chosen splits
        let mut split_of: Vec<Option<(Candidate, usize, usize)>> = vec![None; nodes.len()];
        let mut next_frontier = Vec::new();
        for (s, cand) in best.iter().enumerate() {
            let Some(cand) = *cand else { continue };
            let id = active[s];
            let left_id = nodes.len();
            let right_id = left_id + 1;
            nodes.push(TreeNode::Leaf { value: 0.0 });
            nodes.push(TreeNode::Leaf { value: 0.0 });
            node_stats.push(cand.left);
            node_stats.push(node_stats[id].sub(cand.left));
            nodes[id] = TreeNode::Split {
                feature: cand.feature,
                threshold: data.cuts[cand.feature][cand.bin as usize],
                left: left_id,
                right: right_id,
            };
            split_of[id] = Some((cand, left_id, right_id));
            next_frontier.push(left_id);
            next_frontier.push(right_id);
        }
        if next_frontier.is_empty() {
            break;
        }
        let old = node_of.clone();
        for id in node_of.iter_mut() {
            if let Some((cand, l, r)) = split_of[*id] {
                *id = if data.zero_bin[cand.feature] <= cand.bin {
                    l
                } else {
                    r
                };
            }
        }
        for (parent, entry) in split_of.iter().enumerate() {
            let Some((cand, l, r)) = *entry else { continue };
            for &(sample, bin) in &data.columns[cand.feature] {
                if old[sample as usize] == parent {
                    node_of[sample as usize] = if bin <= cand.bin { l } else { r };
                }
            }
        }
        // leaves that were not split stay in the tree as leaves
        frontier = next_frontier;
    }

    for (id, node) in nodes.iter_mut().enumerate() {
        if let TreeNode::Leaf { value } = node {
            *value = node_stats[id].leaf_value() * cfg.learning_rate;
        }
    }
    (RegressionTree { nodes }, node_of)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::predict;

    fn small_cfg(rounds: usize, depth: usize) -> TrainConfig {
        TrainConfig {
            n_rounds: rounds,
            max_depth: depth,
            min_leaf: 1,
            ..TrainConfig::gbdt_default()
        }
    }

    #[test]
    fn cuts_include_zero_mass() {
        // 6 samples: 0,0,0,1,2,3 → with 3 bins cuts at ranks 1 and 3
        let col = vec![(0, 1.0), (1, 2.0), (2, 3.0)];
        assert_eq!(quantile_cuts(&col, 6, 3), vec![0.0, 1.0]);
        // constant column has nothing to split
        assert!(quantile_cuts(&[], 5, 4).is_empty());
        let neg = vec![(0, -1.0), (1, 2.0)];
        assert_eq!(quantile_cuts(&neg, 3, 3), vec![-1.0, 0.0]);
    }

    #[test]
    fn threshold_data_single_split() {
        let xs = [-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0, 4.0];
        let x: Vec<_> = xs.iter().map(|&v| SparseVector::from_dense(&[v])).collect();
        let y: Vec<_> = xs.iter().map(|&v| usize::from(v >= 0.0)).collect();
        let m = gbdt_fit(&x, &y, 2, &small_cfg(10, 1)).unwrap();
        for (xi, &yi) in x.iter().zip(&y) {
            assert_eq!(predict(&gbdt_predict_proba(&m, xi).unwrap()), yi);
        }
        assert!(m.trees()[0].iter().all(|t| t.depth() <= 1));
    }

    #[test]
    fn zero_rounds_is_base_score() {
        let x: Vec<_> = (0..4)
            .map(|i| SparseVector::from_dense(&[i as f64]))
            .collect();
        let m = gbdt_fit(&x, &[0, 1, 0, 1], 2, &small_cfg(0, 3)).unwrap();
        let p = gbdt_predict_proba(&m, &x[0]).unwrap();
        assert_eq!(p, vec![0.5, 0.5]);
    }

    #[test]
    fn degenerate_targets() {
        let x: Vec<_> = (0..4)
            .map(|i| SparseVector::from_dense(&[i as f64]))
            .collect();
        let m = gbdt_fit(&x, &[1, 1, 1, 1], 2, &small_cfg(5, 3)).unwrap();
        assert!(m.trees()[0].is_empty());
        assert!(m.base_score()[0].is_finite());
        assert_eq!(predict(&gbdt_predict_proba(&m, &x[0]).unwrap()), 1);
    }

    #[test]
    fn multiclass_depth_and_determinism() {
        let x: Vec<_> = (0..60)
            .map(|i| SparseVector::from_dense(&[(i % 3) as f64, ((i * 7) % 5) as f64]))
            .collect();
        let y: Vec<_> = (0..60).map(|i| i % 3).collect();
        let cfg = TrainConfig {
            n_rounds: 5,
            max_depth: 2,
            min_leaf: 2,
            ..TrainConfig::gbdt_default()
        };
        let a = gbdt_fit(&x, &y, 3, &cfg).unwrap();
        let b = gbdt_fit(&x, &y, 3, &cfg).unwrap();
        assert_eq!(
            bincode::serialize(&a).unwrap(),
            bincode::serialize(&b).unwrap()
        );
        assert_eq!(a.trees().len(), 3);
        for series in a.trees() {
            for t in series {
                assert!(t.depth() <= 2);
            }
        }
        for xi in &x {
            let p = gbdt_predict_proba(&a, xi).unwrap();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        let correct = x
            .iter()
            .zip(&y)
            .filter(|(xi, &yi)| predict(&gbdt_predict_proba(&a, xi).unwrap()) == yi)
            .count();
        assert_eq!(correct, 60);
    }

    #[test]
    fn rejects_too_few_bins() {
        let x = vec![SparseVector::from_dense(&[1.0])];
        let cfg = TrainConfig {
            n_bins: 1,
            ..TrainConfig::gbdt_default()
        };
        assert!(gbdt_fit(&x, &[0], 2, &cfg).is_err());
    }
}
