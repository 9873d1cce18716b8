//! Fictitious play on rock-paper-scissors and on a 2x2 game with a known
//! value, showing the empirical mix approach the equilibrium.
//!
//!     cargo run --release --example fictitious_play

use fairdice::games::{build_rock_paper_scissors, fictitious_play, solve_2x2_zero_sum};
use fairdice::NormalFormGame;

fn main() -> fairdice::Result<()> {
    let rps = build_rock_paper_scissors();
    for iters in [100, 1_000, 10_000, 100_000] {
        let fp = fictitious_play(&rps, iters, 3)?;
        println!(
            "RPS {iters:>6} iterations: row mix {:.3?}, value {:+.4} in [{:+.4}, {:+.4}]",
            fp.profile.row.probs(),
            fp.value,
            fp.lower_bound,
            fp.upper_bound
        );
    }

    let game = NormalFormGame::zero_sum(vec![vec![3.0, 0.0], vec![1.0, 2.0]])?;
    let exact = solve_2x2_zero_sum(&game)?;
    let fp = fictitious_play(&game, 100_000, 3)?;
    println!(
        "[[3,0],[1,2]]: exact value {}, fictitious play {:.4}",
        exact.value, fp.value
    );
    Ok(())
}
