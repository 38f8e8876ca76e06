use crate::error::{contract, Result};

/// Positive parts of `regrets` normalized to a distribution; uniform when no
/// regret is positive.
pub fn regret_matching(regrets: &[f64]) -> Result<Vec<f64>> {
    if regrets.is_empty() {
        return contract("regret matching over an empty action set");
    }
    let mut out = vec![0.0; regrets.len()];
    regret_matching_into(regrets, 0.0, &mut out);
    Ok(out)
}

/// Regret matching that ignores regrets not above `floor`.
pub(crate) fn regret_matching_into(regrets: &[f64], floor: f64, out: &mut [f64]) {
    let clip = |r: f64| if r > floor { r } else { 0.0 };
    let total: f64 = regrets.iter().map(|&r| clip(r)).sum();
    if total > 0.0 {
        for (o, &r) in out.iter_mut().zip(regrets) {
            *o = clip(r) / total;
        }
    } else {
        out.fill(1.0 / regrets.len() as f64);
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn zero_regrets_give_uniform() {
        assert_eq!(regret_matching(&[0.0, 0.0, 0.0]).unwrap(), vec![1.0 / 3.0; 3]);
    }

    #[test]
    fn positive_parts_normalized() {
        let p = regret_matching(&[2.0, -1.0, 1.0]).unwrap();
        assert_eq!(p, vec![2.0 / 3.0, 0.0, 1.0 / 3.0]);
    }

    #[test]
    fn all_negative_gives_uniform() {
        assert_eq!(regret_matching(&[-5.0, -1.0]).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(regret_matching(&[]).is_err());
    }

    proptest! {
        #[test]
        fn output_is_a_distribution(regrets in prop::collection::vec(-1e6f64..1e6, 1..12)) {
            let p = regret_matching(&regrets).unwrap();
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            for (x, r) in p.iter().zip(&regrets) {
                prop_assert!(*x >= 0.0);
                if *r <= 0.0 && regrets.iter().any(|r| *r > 0.0) {
                    prop_assert_eq!(*x, 0.0);
                }
            }
        }
    }
}
