//! Repeated play against an opponent that best-responds to observed action
//! frequencies. Pure policies are exploited; equilibrium mixing is not.
//!
//!     cargo run --release --example exploitation

use fairdice::games::{build_harm_game, build_matching_pennies, build_rock_paper_scissors};
use fairdice::repeated::{exploitability_report, run_batch};
use fairdice::{AgentPolicy, HarmScenario};

fn main() -> fairdice::Result<()> {
    let pennies = build_matching_pennies();
    let rps = build_rock_paper_scissors();
    let harm = build_harm_game(&HarmScenario::new(1.0, 2.0, 1.0, 6.0)?)?;
    let cases = [
        ("matching pennies", &pennies, "pure:0"),
        ("matching pennies", &pennies, "mixed:0.5,0.5"),
        ("rock-paper-scissors", &rps, "pure:0"),
        (
            "rock-paper-scissors",
            &rps,
            "mixed:0.3333333333333333,0.3333333333333333,0.3333333333333334",
        ),
        ("harm game", &harm, "pure:1"),
        ("harm game", &harm, "mixed:0.75,0.25"),
    ];
    for (name, game, policy) in cases {
        let policy: AgentPolicy = policy.parse()?;
        let r = exploitability_report(game, &policy, 10_000, 11)?;
        println!(
            "{name:<20} {policy:<22} policy avg {:+.4}  value {:+.4}  gap {:+.4}",
            r.policy_average,
            r.game_value.unwrap_or(f64::NAN),
            r.gap.unwrap_or(f64::NAN)
        );
    }

    let seeds: Vec<u64> = (0..20).collect();
    let fair = AgentPolicy::mixed(vec![0.5, 0.5])?;
    let runs = run_batch(&pennies, &fair, &AgentPolicy::exploiter(), 10_000, &seeds)?;
    let within = runs
        .iter()
        .filter(|s| s.average_col_payoff.abs() <= 0.05)
        .count();
    println!("fair coin vs exploiter: {within}/20 seeds keep the exploiter within ±0.05");
    Ok(())
}
