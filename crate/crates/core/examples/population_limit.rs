// Large-sample limits of γ_A for a finite joint law, checked by sampling.

use mlcop::dist::{consistency_check, population_gamma, DiscreteJoint};
use mlcop::ScoreFamily;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let joint = DiscreteJoint::new(
        vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![2.0, 1.0],
        ],
        vec![0.3, 0.1, 0.1, 0.3, 0.2],
    )?;
    for family in ScoreFamily::ALL {
        let pop = population_gamma(&joint, &[family], 0b11)?;
        let (emp, _) = consistency_check(&joint, &[family], 0b11, 20_000, 5)?;
        println!("{family:>8}: population {pop:+.5}, n = 20000 sample {emp:+.5}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
