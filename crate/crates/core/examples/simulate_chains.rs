// Stationary copula chains: Kendall tau parameterization, conditional
// inverses and the seven margins.

use mlcop::simulate::rng::stream_rng;
use mlcop::simulate::{
    sample_series, sample_uniforms, tau_to_param, CopulaKind, CopulaModel, MarginSpec,
};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    for kind in [CopulaKind::Clayton, CopulaKind::Frank, CopulaKind::Gaussian] {
        println!(
            "{:>8}: tau 0.1 -> {:.6}",
            kind.token(),
            tau_to_param(kind, 0.1)?
        );
    }

    let tent = CopulaModel::TentMap;
    let mut v = 0.3;
    for _ in 0..3 {
        v = tent.conditional_inverse(&[v], 0.5)?;
        print!("{v} ");
    }
    println!();

    let u = sample_uniforms(
        &CopulaModel::parse("gaussian", Some("rho=0.5"))?,
        10,
        &mut stream_rng(1, 0),
    )?;
    println!("gaussian chain: {:.3?}", u);
    for spec in MarginSpec::ALL {
        let x = sample_series(&CopulaModel::Independence, &spec, 12, &mut stream_rng(2, 0))?;
        println!("{spec}: {x:?}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
