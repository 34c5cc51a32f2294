// Per-lag display of the serial statistics of an FGM chain, where only the
// three-way subsets carry dependence.

use mlcop::simulate::rng::stream_rng;
use mlcop::simulate::{sample_series, CopulaModel, MarginSpec};
use mlcop::stats::{dependogram, Correction};
use mlcop::{test_randomness, ScoreFamily};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let series = sample_series(
        &CopulaModel::fgm(1.0)?,
        &MarginSpec::F5,
        1000,
        &mut stream_rng(11, 0),
    )?;
    let report = test_randomness(&series, 3, ScoreFamily::Spearman, 3)?;
    for point in dependogram(&report, 0.05, Correction::Bonferroni)? {
        let bar = "#".repeat((point.sqrt_n_r.abs() * 4.0).round() as usize);
        println!(
            "{:<9} {:+6.2} {:<20} {}",
            point.label,
            point.sqrt_n_r,
            bar,
            if point.exceeds { "*" } else { "" }
        );
    }
    println!(
        "critical value {:.3}",
        dependogram(&report, 0.05, Correction::Sidak)?[0].critical
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
