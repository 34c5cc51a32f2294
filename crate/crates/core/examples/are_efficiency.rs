// Asymptotic relative efficiencies between score families for continuous,
// Bernoulli and the power-study margins.

use mlcop::dist::{are, normal_quantile, TheoreticalMargin};
use mlcop::simulate::MarginSpec;
use mlcop::ScoreFamily;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let continuous = TheoreticalMargin::continuous(|u| normal_quantile(u).unwrap_or(f64::NAN));
    let v = are(
        ScoreFamily::Spearman,
        ScoreFamily::VanDerWaerden,
        &continuous,
        2,
    )?;
    println!(
        "continuous, spearman vs vdw, |A| = 2: {v:.5} ((3/pi)^2 = {:.5})",
        (3.0 / std::f64::consts::PI).powi(2)
    );

    let bern = TheoreticalMargin::bernoulli(0.3)?;
    println!(
        "bernoulli(0.3), savage vs blest: {}",
        are(ScoreFamily::Savage, ScoreFamily::BlestSquared, &bern, 3)?
    );

    println!("{:<4} {:>10} {:>10} {:>10}", "", "vdw", "savage", "blest");
    for spec in [
        MarginSpec::F2,
        MarginSpec::F3,
        MarginSpec::F5,
        MarginSpec::F6,
        MarginSpec::F7,
    ] {
        let m = spec.to_theoretical()?;
        let row: Vec<String> = [
            ScoreFamily::VanDerWaerden,
            ScoreFamily::Savage,
            ScoreFamily::BlestSquared,
        ]
        .iter()
        .map(|&g| are(ScoreFamily::Spearman, g, &m, 2).map(|a| format!("{a:10.4}")))
        .collect::<Result<_, _>>()?;
        println!("{:<4} {}", spec, row.join(" "));
    }
    for copula in ["gaussian", "clayton", "fgm"] {
        println!("{copula}: use {:?}", ScoreFamily::recommend_for(copula));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
