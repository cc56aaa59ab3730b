//! Standard distributions and random generators used by tests and examples.

use rand::Rng;

use super::CondDist;

/// `p(ab|xy) = ½·[a⊕b = x·y]`.
pub fn pr_box() -> CondDist {
    pr_variant(0)
}

/// The eight PR boxes `a⊕b = xy ⊕ αx ⊕ βy ⊕ γ`, with `(α, β, γ)` the bits of `k`.
pub fn pr_variant(k: usize) -> CondDist {
    let (alpha, beta, gamma) = (k >> 2 & 1, k >> 1 & 1, k & 1);
    CondDist::from_fn(vec![2, 2], vec![2, 2], 1e-12, |x, a| {
        let target = (x[0] * x[1]) ^ (alpha * x[0]) ^ (beta * x[1]) ^ gamma;
        if a[0] ^ a[1] == target {
            0.5
        } else {
            0.0
        }
    })
    .expect("valid PR box")
}

/// Party `i` answers `strategy[i][x]` on setting `x`.
pub fn deterministic(strategy: &[Vec<usize>], outcomes: &[usize]) -> CondDist {
    let settings = strategy.iter().map(|s| s.len()).collect();
    CondDist::from_fn(settings, outcomes.to_vec(), 1e-12, |x, a| {
        let hit = x.iter().zip(a).enumerate().all(|(i, (&xi, &ai))| strategy[i][xi] == ai);
        if hit {
            1.0
        } else {
            0.0
        }
    })
    .expect("valid deterministic table")
}

pub fn uniform(settings: &[usize], outcomes: &[usize]) -> CondDist {
    let per: usize = outcomes.iter().product();
    CondDist::from_fn(settings.to_vec(), outcomes.to_vec(), 1e-12, |_, _| 1.0 / per as f64)
        .expect("valid uniform table")
}

/// Convex combination; shapes must agree and weights sum to 1.
pub fn mix(parts: &[(f64, &CondDist)]) -> CondDist {
    let first = parts[0].1;
    let mut probs = vec![0.0; first.probs().len()];
    for (w, d) in parts {
        for (acc, v) in probs.iter_mut().zip(d.probs()) {
            *acc += w * v;
        }
    }
    CondDist::new(first.settings().to_vec(), first.outcomes().to_vec(), probs, 1e-9).expect("convex mixture")
}

/// `v·PR + (1−v)·uniform`.
pub fn noisy_pr_box(visibility: f64) -> CondDist {
    mix(&[
        (visibility, &pr_box()),
        (1.0 - visibility, &uniform(&[2, 2], &[2, 2])),
    ])
}

/// The two-qubit Hardy table: settings 0 = Z, 1 = ±; outcomes 0 = `0`/`+`,
/// 1 = `1`/`−`.
pub fn hardy() -> CondDist {
    let third = 1.0 / 3.0;
    let probs = vec![
        third, third, third, 0.0, // Z Z
        2.0 / 3.0, 0.0, 1.0 / 6.0, 1.0 / 6.0, // Z ±
        2.0 / 3.0, 1.0 / 6.0, 0.0, 1.0 / 6.0, // ± Z
        0.75, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0, // ± ±
    ];
    CondDist::new(vec![2, 2], vec![2, 2], probs, 1e-12).expect("valid Hardy table")
}

/// A random mixture of deterministic strategies on the given shape.
pub fn random_local(rng: &mut impl Rng, settings: &[usize], outcomes: &[usize], terms: usize) -> CondDist {
    let weights = random_simplex(rng, terms);
    let tables: Vec<CondDist> = (0..terms)
        .map(|_| {
            let strategy: Vec<Vec<usize>> = settings
                .iter()
                .zip(outcomes)
                .map(|(&m, &k)| (0..m).map(|_| rng.gen_range(0..k)).collect())
                .collect();
            deterministic(&strategy, outcomes)
        })
        .collect();
    let parts: Vec<(f64, &CondDist)> = weights.iter().copied().zip(tables.iter()).collect();
    mix(&parts)
}

/// A random no-signalling 2,2,2,2 table: a random local part mixed with a
/// random amount of one PR variant.
pub fn random_no_signalling(rng: &mut impl Rng) -> CondDist {
    let terms = rng.gen_range(1..=6);
    let local = random_local(rng, &[2, 2], &[2, 2], terms);
    let pr = pr_variant(rng.gen_range(0..8));
    let w: f64 = rng.gen();
    mix(&[(w, &pr), (1.0 - w, &local)])
}

fn random_simplex(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}
