#![allow(dead_code)]

use fairaudit_core::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random dataset with `k` features, binary sensitive attribute correlated
/// with the first feature, and target `y = b0 + Σ b_j x_j + beta·s + noise`.
pub fn random_dataset(seed: u64, n: usize, k: usize, beta: f64, noise: f64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: f64 = rng.gen_range(-3.0..3.0);
    let b0: f64 = rng.gen_range(-10.0..10.0);
    let coefs: Vec<f64> = (0..k).map(|_| rng.gen_range(-5.0..5.0)).collect();
    let mut sensitive = Vec::with_capacity(n);
    let mut columns = vec![Vec::with_capacity(n); k];
    let mut target = Vec::with_capacity(n);
    for i in 0..n {
        // both groups guaranteed non-empty
        let s = if i < 2 {
            i as f64
        } else if rng.gen_bool(0.4) {
            1.0
        } else {
            0.0
        };
        let mut y = b0 + beta * s;
        for (j, col) in columns.iter_mut().enumerate() {
            let x = rng.gen_range(-5.0..5.0) + if j == 0 { shift * s } else { 0.0 };
            y += coefs[j] * x;
            col.push(x);
        }
        if noise > 0.0 {
            y += noise * (rng.gen::<f64>() - 0.5);
        }
        sensitive.push(s);
        target.push(y);
    }
    let names = (1..=k).map(|j| format!("x{j}")).collect();
    Dataset::from_columns(columns, sensitive, target, names, "s", "y").unwrap()
}

pub fn permuted(d: &Dataset, order: &[usize]) -> Dataset {
    let columns = d
        .features()
        .iter()
        .map(|c| order.iter().map(|&i| c[i]).collect())
        .collect();
    Dataset::from_columns(
        columns,
        order.iter().map(|&i| d.sensitive()[i]).collect(),
        order.iter().map(|&i| d.target()[i]).collect(),
        d.feature_names().to_vec(),
        d.sensitive_name(),
        d.target_name(),
    )
    .unwrap()
}

/// O(n²) reference: share of cross-group pairs won by group 0, ties ½.
pub fn brute_force_auc(scores: &[f64], labels: &[u8]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &a) in scores.iter().enumerate() {
        if labels[i] != 0 {
            continue;
        }
        for (j, &b) in scores.iter().enumerate() {
            if labels[j] != 1 {
                continue;
            }
            pairs += 1.0;
            if a > b {
                wins += 1.0;
            } else if a == b {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}
