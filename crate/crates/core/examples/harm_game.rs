//! A vehicle that must harm one of two parties. The vehicle (row) mixes so
//! that the environment is indifferent; a deterministic choice would be
//! exploitable.
//!
//!     cargo run --example harm_game

use fairdice::games::{build_harm_game, find_pure_nash, is_nash, solve_2x2_zero_sum};
use fairdice::HarmScenario;

fn main() -> fairdice::Result<()> {
    // two passengers (X) against six pedestrians (Y), equal merit
    let scenario = HarmScenario::new(1.0, 2.0, 1.0, 6.0)?;
    let game = build_harm_game(&scenario)?;
    println!("payoffs to the vehicle: {:?}", game.row_payoff().to_rows());
    println!("pure equilibria: {:?}", find_pure_nash(&game));

    let eq = solve_2x2_zero_sum(&game)?;
    let p = eq.profile.row.probs();
    println!(
        "harm X with probability {:.4}, harm Y with probability {:.4}",
        p[0], p[1]
    );
    println!(
        "environment mix {:?}, value {:.4}",
        eq.profile.col.probs(),
        eq.value
    );
    println!("equilibrium check: {}", is_nash(&game, &eq.profile, 1e-9));

    for (mx, vx, my, vy) in [
        (1.0, 1.0, 1.0, 1.0),
        (2.0, 1.0, 1.0, 1.0),
        (1.0, 10.0, 1.0, 1.0),
    ] {
        let eq = solve_2x2_zero_sum(&build_harm_game(&HarmScenario::new(mx, vx, my, vy)?)?)?;
        println!(
            "m=({mx},{my}) v=({vx},{vy}): harm X w.p. {:.4}",
            eq.profile.row.probs()[0]
        );
    }
    Ok(())
}
