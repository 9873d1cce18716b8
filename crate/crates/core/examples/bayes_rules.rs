//! Bayes decisions under asymmetric costs, and the nearest-mean rule for
//! equal-prior Gaussian classes.
//!
//!     cargo run --example bayes_rules

use fairdice::decision::{
    bayes_decide, likelihood_ratio_threshold, monte_carlo_cost, nearest_mean_classifier,
};
use fairdice::{Classifier, CostMatrix, Density, Mixture};

fn main() -> fairdice::Result<()> {
    // two unit-variance classes at -1 and +1, the second twice as likely
    let mixture = Mixture::new(
        1,
        vec![
            (1.0 / 3.0, Density::gaussian(vec![-1.0], 1.0)?),
            (2.0 / 3.0, Density::gaussian(vec![1.0], 1.0)?),
        ],
    )?;

    for (miss_first, miss_second) in [(1.0, 1.0), (5.0, 1.0), (1.0, 5.0)] {
        let cost = CostMatrix::two_class(miss_first, miss_second)?;
        let threshold = likelihood_ratio_threshold(&mixture, &cost)?;
        let boundary = (0..=4000).map(|i| -2.0 + i as f64 * 0.001).find(|&x| {
            bayes_decide(&mixture, &cost, &[x])
                .map(|d| d.index() == 1)
                .unwrap_or(false)
        });
        let est = monte_carlo_cost(
            &mixture,
            &cost,
            &Classifier::bayes(&mixture, &cost)?,
            200_000,
            1,
        )?;
        println!(
            "cost(1->2)={miss_first} cost(2->1)={miss_second}: ratio threshold {threshold:.3}, \
             boundary near x={:.3}, expected cost {:.4} ± {:.4}",
            boundary.unwrap_or(f64::NAN),
            est.mean_cost,
            est.standard_error
        );
    }

    let gauss =
        Mixture::isotropic_gaussians(vec![vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 3.0]], 1.0)?;
    let nearest = nearest_mean_classifier(&gauss)?;
    let zero_one = CostMatrix::zero_one(3);
    for x in [[0.2, 0.1], [2.0, 0.4], [0.5, 2.5], [1.4, 1.6]] {
        let a = nearest.decide_seeded(&x, 0)?;
        let b = bayes_decide(&gauss, &zero_one, &x)?;
        println!("x={x:?}: nearest mean {a}, Bayes {b}");
    }
    Ok(())
}
