use super::{digits, CondDist, NonlocalityError};

/// `max |Σ s_xy E(x,y)|` over the eight sign patterns with an odd number of
/// minus signs, where `E(x,y) = Σ (−1)^{a⊕b} p(ab|xy)`.
pub fn chsh_value(p: &CondDist) -> Result<f64, NonlocalityError> {
    if p.settings() != [2, 2] || p.outcomes() != [2, 2] {
        return Err(NonlocalityError::WrongShape(format!(
            "CHSH needs 2 parties with 2 settings and 2 outcomes, got settings {:?} outcomes {:?}",
            p.settings(),
            p.outcomes()
        )));
    }
    let corr: Vec<f64> = (0..4)
        .map(|ci| {
            let ctx = p.context(&[ci / 2, ci % 2]);
            ctx[0] - ctx[1] - ctx[2] + ctx[3]
        })
        .collect();
    let best = (0..16u32)
        .filter(|bits| bits.count_ones() % 2 == 1)
        .map(|bits| {
            (0..4)
                .map(|k| if bits >> k & 1 == 1 { -corr[k] } else { corr[k] })
                .sum::<f64>()
                .abs()
        })
        .fold(0.0, f64::max);
    Ok(best)
}

/// True when, for every proper subset of parties, its marginal does not
/// depend on the settings of the parties outside it.
pub fn no_signalling_check(p: &CondDist, tol: f64) -> bool {
    let n = p.parties();
    let settings = p.settings();
    let outcomes = p.outcomes();
    for mask in 1..(1usize << n) - 1 {
        let inside: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub_outcomes: Vec<usize> = inside.iter().map(|&i| outcomes[i]).collect();
        let sub_size: usize = sub_outcomes.iter().product();
        // marginal per full setting tuple, compared against the first tuple
        // with the same inside settings
        let mut reference: std::collections::HashMap<Vec<usize>, Vec<f64>> = Default::default();
        for ci in 0..p.num_contexts() {
            let x = digits(ci, settings);
            let mut m = vec![0.0; sub_size];
            for (ai, &v) in p.context(&x).iter().enumerate() {
                let a = p.outcome_tuple(ai);
                let idx = inside.iter().zip(&sub_outcomes).fold(0, |acc, (&i, &k)| acc * k + a[i]);
                m[idx] += v;
            }
            let key: Vec<usize> = inside.iter().map(|&i| x[i]).collect();
            match reference.get(&key) {
                Some(r) => {
                    if r.iter().zip(&m).any(|(a, b)| (a - b).abs() > tol) {
                        return false;
                    }
                }
                None => {
                    reference.insert(key, m);
                }
            }
        }
    }
    true
}
