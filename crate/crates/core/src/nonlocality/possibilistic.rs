use super::{checked_count, digits, CondDist, NonlocalityError, DEFAULT_MAX_ASSIGNMENTS};

/// One table cell `(x⃗, a⃗)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub setting: Vec<usize>,
    pub outcome: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PossibilisticReport {
    pub nonlocal: bool,
    /// First possible cell (lexicographically) that no global assignment
    /// avoiding all impossible cells extends.
    pub witness: Option<Cell>,
    /// The impossible cells that block the witness: for every global
    /// assignment extending it, the first impossible cell it hits.
    pub obstruction: Vec<Cell>,
}

pub fn possibilistic_check(p: &CondDist, tol: f64) -> Result<PossibilisticReport, NonlocalityError> {
    possibilistic_check_capped(p, tol, DEFAULT_MAX_ASSIGNMENTS)
}

/// Exhaustive possibilistic check; cells with `p ≤ tol` count as impossible.
pub fn possibilistic_check_capped(
    p: &CondDist,
    tol: f64,
    max_assignments: usize,
) -> Result<PossibilisticReport, NonlocalityError> {
    let radices: Vec<usize> = p
        .settings()
        .iter()
        .zip(p.outcomes())
        .flat_map(|(&m, &k)| std::iter::repeat_n(k, m))
        .collect();
    let total = checked_count(&radices, max_assignments)?;
    let first: Vec<usize> = p
        .settings()
        .iter()
        .scan(0, |acc, &m| {
            let f = *acc;
            *acc += m;
            Some(f)
        })
        .collect();
    let contexts = p.num_contexts();
    let per = p.outcomes_per_context();
    let possible = |ci: usize, ai: usize| p.probs()[ci * per + ai] > tol;
    let restrict = |s: &[usize], x: &[usize]| -> usize {
        let a: Vec<usize> = x.iter().zip(&first).map(|(&xi, &f)| s[f + xi]).collect();
        p.outcome_index(&a)
    };
    let settings: Vec<Vec<usize>> = (0..contexts).map(|ci| p.setting_tuple(ci)).collect();

    // cells reached by some assignment that avoids every impossible cell
    let mut covered = vec![false; contexts * per];
    for s in 0..total {
        let values = digits(s, &radices);
        let cells: Vec<usize> = settings.iter().map(|x| restrict(&values, x)).collect();
        if cells.iter().enumerate().all(|(ci, &ai)| possible(ci, ai)) {
            for (ci, &ai) in cells.iter().enumerate() {
                covered[ci * per + ai] = true;
            }
        }
    }

    let witness = (0..contexts * per).find(|&i| possible(i / per, i % per) && !covered[i]);
    let Some(w) = witness else {
        return Ok(PossibilisticReport {
            nonlocal: false,
            witness: None,
            obstruction: Vec::new(),
        });
    };
    let (wc, wa) = (w / per, w % per);
    let mut blocking: Vec<usize> = Vec::new();
    for s in 0..total {
        let values = digits(s, &radices);
        if restrict(&values, &settings[wc]) != wa {
            continue;
        }
        let hit = settings
            .iter()
            .enumerate()
            .map(|(ci, x)| ci * per + restrict(&values, x))
            .find(|&i| !possible(i / per, i % per))
            .expect("witness is not covered");
        if !blocking.contains(&hit) {
            blocking.push(hit);
        }
    }
    blocking.sort_unstable();
    let cell = |i: usize| Cell {
        setting: settings[i / per].clone(),
        outcome: p.outcome_tuple(i % per),
    };
    Ok(PossibilisticReport {
        nonlocal: true,
        witness: Some(cell(w)),
        obstruction: blocking.into_iter().map(cell).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlocality::fixtures;

    #[test]
    fn hardy_witness_and_obstruction() {
        let r = possibilistic_check(&fixtures::hardy(), 1e-9).unwrap();
        assert!(r.nonlocal);
        let w = r.witness.unwrap();
        assert_eq!((w.setting, w.outcome), (vec![1, 1], vec![1, 1]));
        let cells: Vec<(Vec<usize>, Vec<usize>)> =
            r.obstruction.into_iter().map(|c| (c.setting, c.outcome)).collect();
        assert_eq!(
            cells,
            vec![
                (vec![0, 0], vec![1, 1]),
                (vec![0, 1], vec![0, 1]),
                (vec![1, 0], vec![1, 0]),
            ]
        );
    }

    #[test]
    fn pr_box_is_flagged() {
        assert!(possibilistic_check(&fixtures::pr_box(), 1e-9).unwrap().nonlocal);
    }

    #[test]
    fn deterministic_is_not_flagged() {
        let p = fixtures::deterministic(&[vec![0, 1], vec![1, 1]], &[2, 2]);
        let r = possibilistic_check(&p, 1e-9).unwrap();
        assert!(!r.nonlocal);
        assert!(r.witness.is_none());
    }
}
