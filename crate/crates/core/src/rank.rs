//! Competition ("1-2-2-4") ranking shared by TOPSIS and the ensembles.

/// Ranks `values` in descending order. Equal values share the better rank
/// and the next distinct value skips the shared places.
///
/// ```
/// use coughrank::rank::competition_ranks;
/// assert_eq!(competition_ranks(&[0.3, 0.9, 0.3, 0.1]), vec![2, 1, 2, 4]);
/// ```
pub fn competition_ranks(values: &[f64]) -> Vec<usize> {
    competition_ranks_by(values, |a, b| a == b)
}

/// Like [`competition_ranks`] but with a caller-supplied equality used to
/// cluster neighbouring values (after sorting descending). Clusters chain:
/// a value joins the current cluster when it is `same` as the previous one.
pub fn competition_ranks_by<F>(values: &[f64], same: F) -> Vec<usize>
where
    F: Fn(f64, f64) -> bool,
{
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

    let mut ranks = vec![0; values.len()];
    let mut current = 1;
    for (pos, &idx) in order.iter().enumerate() {
        if pos > 0 {
            let prev = order[pos - 1];
            if !same(values[prev], values[idx]) {
                current = pos + 1;
            }
        }
        ranks[idx] = current;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distinct_values_form_a_permutation() {
        assert_eq!(competition_ranks(&[0.1, 0.5, 0.3]), vec![3, 1, 2]);
    }

    #[test]
    fn all_equal_share_rank_one() {
        assert_eq!(competition_ranks(&[0.4; 4]), vec![1; 4]);
    }

    #[test]
    fn custom_equality_chains_clusters() {
        let ranks = competition_ranks_by(&[0.80, 0.79, 0.78, 0.5], |a, b| (a - b).abs() <= 0.011);
        assert_eq!(ranks, vec![1, 1, 1, 4]);
    }

    #[test]
    fn empty_input() {
        assert!(competition_ranks(&[]).is_empty());
    }
}
