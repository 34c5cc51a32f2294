// A reduced power study: two models, two margins, 100 replications.
// The bundled desk configuration is `PowerStudyConfig::desk()`.

use mlcop::power::{run_power_study, PowerStudyConfig};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = PowerStudyConfig::from_toml_str(
        r#"
        seed = 1
        replications = 100
        n = [100]
        d = 5
        pmax = [2, 5]
        families = ["spearman", "savage"]
        models = ["indep", "clayton:tau=0.2"]
        margins = ["f2", "f6"]
        "#,
    )?;
    let table = run_power_study(&cfg)?;
    print!("{}", table.to_csv());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
