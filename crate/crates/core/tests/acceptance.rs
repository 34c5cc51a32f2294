// Acceptance criteria. Runs without the libtest harness so that each
// criterion prints one PASS/FAIL line; any failure gives a nonzero exit.

use std::time::Instant;

use mlcop::dist::{
    are, chi2_sf, consistency_check, normal_cdf, normal_pdf, population_gamma, DiscreteJoint,
    TheoreticalMargin,
};
use mlcop::power::{run_power_study, PowerStudyConfig, PowerTable};
use mlcop::simulate::rng::{open_unit, stream_rng};
use mlcop::simulate::{sample_series, CopulaModel, MarginSpec};
use mlcop::stats::{gamma_stat, gamma_via_integral, nonserial_bounds, SubsetFamily};
use mlcop::{test_independence, test_randomness, EmpiricalMargin, ScoreFamily};

const SEED: u64 = 20240501;
const REPLICATIONS: usize = 500;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn study(models: &str, margins: &str, n: usize, families: &str, pmax: &str) -> PowerTable {
    let cfg = PowerStudyConfig::from_toml_str(&format!(
        "seed = {SEED}\nreplications = {REPLICATIONS}\nd = 5\nn = [{n}]\nmodels = [{models}]\nmargins = [{margins}]\nfamilies = [{families}]\npmax = [{pmax}]\n"
    ))
    .expect("valid config");
    run_power_study(&cfg).expect("power study runs")
}

fn pct(
    table: &PowerTable,
    model: &str,
    margin: &str,
    n: usize,
    family: ScoreFamily,
    pmax: usize,
) -> f64 {
    table
        .find(model, margin, n, family, pmax)
        .expect("cell present")
        .reject_pct
}

fn c1_level_under_independence() -> Outcome {
    let start = Instant::now();
    let table = study(
        r#""indep""#,
        r#""f1","f2","f3","f4","f5","f6","f7""#,
        250,
        r#""spearman""#,
        "2",
    );
    let elapsed = start.elapsed().as_secs_f64();
    let rates: Vec<f64> = table.rows.iter().map(|r| r.reject_pct).collect();
    let ok = rates.len() == 7 && rates.iter().all(|&r| (2.5..=8.0).contains(&r)) && elapsed < 180.0;
    (
        ok,
        format!("rates {rates:?} % in [2.5, 8.0], {elapsed:.1} s"),
    )
}

fn c2_tent_map_power() -> Outcome {
    let table = study(
        r#""tent""#,
        r#""f1","f3""#,
        100,
        r#""spearman","savage""#,
        "2",
    );
    let f1 = pct(&table, "tent", "f1", 100, ScoreFamily::Spearman, 2);
    let f3 = pct(&table, "tent", "f3", 100, ScoreFamily::Savage, 2);
    let ok = (f1 - 84.8).abs() <= 5.0 && (f3 - 68.5).abs() <= 6.0;
    (
        ok,
        format!("F1 spearman {f1:.1} (84.8 ± 5), F3 savage {f3:.1} (68.5 ± 6)"),
    )
}

fn c3_score_family_ordering() -> Outcome {
    let table = study(
        r#""clayton:tau=0.1","gaussian:tau=0.1","fgm:theta=1""#,
        r#""f2""#,
        500,
        r#""spearman","vdw","savage""#,
        "2, 5",
    );
    let get = |m: &str, f: ScoreFamily, p: usize| pct(&table, m, "f2", 500, f, p);
    let clayton = (
        get("clayton:tau=0.1", ScoreFamily::Savage, 2),
        get("clayton:tau=0.1", ScoreFamily::Spearman, 2),
    );
    let gauss = (
        get("gaussian:tau=0.1", ScoreFamily::VanDerWaerden, 2),
        get("gaussian:tau=0.1", ScoreFamily::Spearman, 2),
    );
    let fgm = (
        get("fgm:theta=1", ScoreFamily::Spearman, 5),
        get("fgm:theta=1", ScoreFamily::Spearman, 2),
    );
    let ok = clayton.0 > clayton.1 && gauss.0 >= gauss.1 - 2.0 && fgm.0 > fgm.1;
    (ok, format!(
            "clayton savage {:.1} > spearman {:.1}; gaussian vdw {:.1} >= spearman {:.1} - 2; fgm pmax5 {:.1} > pmax2 {:.1}",
            clayton.0, clayton.1, gauss.0, gauss.1, fgm.0, fgm.1
        ),
    )
}

fn c4_alternating_binary_series() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for family in ScoreFamily::ALL {
        let r = test_randomness(&[0.0, 1.0, 0.0, 1.0], 2, family, 2).unwrap();
        worst = worst.max((r.wald.stat - 4.0).abs());
        ok &= r.wald.df == 1;
    }
    ok &= worst < 1e-10;
    (ok, format!("max |L - 4| = {worst:e}, df = 1"))
}

fn tied_corpus() -> Vec<Vec<Vec<f64>>> {
    let mut rng = stream_rng(SEED, 5);
    (0..20)
        .map(|i| {
            let n = 6 + 4 * i;
            let levels = [2.0, 3.0, 5.0, 1e6][i % 4];
            (0..2)
                .map(|_| {
                    (0..n)
                        .map(|_| (open_unit(&mut rng) * levels).floor())
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn c5_integral_representation() -> Outcome {
    let mut worst = [0.0f64; 3];
    let families = [
        ScoreFamily::Spearman,
        ScoreFamily::VanDerWaerden,
        ScoreFamily::Savage,
    ];
    for data in tied_corpus() {
        let margins: Vec<EmpiricalMargin> = data
            .iter()
            .map(|c| EmpiricalMargin::new(c).unwrap())
            .collect();
        let bounds = nonserial_bounds(&margins);
        for (k, &family) in families.iter().enumerate() {
            let cols: Vec<Vec<f64>> = margins
                .iter()
                .map(|m| m.score(family).unwrap().centered)
                .collect();
            let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
            let direct = gamma_stat(&refs, 0b11).unwrap();
            let integral = gamma_via_integral(&bounds, 0b11, &[family], 2000).unwrap();
            worst[k] = worst[k].max((direct - integral).abs());
        }
    }
    let ok = worst[0] < 1e-4 && worst[1] < 1e-3 && worst[2] < 1e-3;
    (
        ok,
        format!(
            "max diff spearman {:.2e}, vdw {:.2e}, savage {:.2e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn c6_identities() -> Outcome {
    let mut rng = stream_rng(SEED, 6);
    let x: Vec<f64> = (0..60)
        .map(|_| (open_unit(&mut rng) * 7.0).floor())
        .collect();
    let y: Vec<f64> = x
        .iter()
        .map(|v| v + (open_unit(&mut rng) * 3.0).floor())
        .collect();
    let z: Vec<f64> = (0..60).map(|_| open_unit(&mut rng)).collect();

    let mut mean_err: f64 = 0.0;
    for col in [&x, &y, &z] {
        let m = EmpiricalMargin::new(col).unwrap();
        for family in ScoreFamily::ALL {
            let s = m.score(family).unwrap();
            let mean = s.values.iter().sum::<f64>() / s.values.len() as f64;
            mean_err = mean_err.max((mean - family.mean()).abs());
        }
    }

    let transformed: Vec<Vec<f64>> = vec![
        x.iter().map(|v| (v * 0.5).exp()).collect(),
        y.iter().map(|v| v.powi(3) - 10.0).collect(),
        z.iter().map(|v| v.ln()).collect(),
    ];
    let original = vec![x.clone(), y.clone(), z.clone()];
    let mut invariant = true;
    for family in ScoreFamily::ALL {
        invariant &= test_independence(&original, &[family], 3).unwrap()
            == test_independence(&transformed, &[family], 3).unwrap();
        invariant &= test_randomness(&x, 4, family, 3).unwrap()
            == test_randomness(&transformed[0], 4, family, 3).unwrap();
    }

    let mut counts = true;
    for d in 2..=8usize {
        let count = |pmax: usize, serial: bool| SubsetFamily::new(d, pmax, serial).unwrap().len();
        counts &= count(d, true) == (1 << (d - 1)) - 1;
        counts &= count(d, false) == (1 << d) - d - 1;
        counts &= count(2, true) == d - 1;
        counts &= count(2, false) == d * (d - 1) / 2;
    }

    let ok = mean_err < 1e-10 && invariant && counts;
    (ok, format!("max |mean - mu| = {mean_err:.1e}, monotone invariance {invariant}, subset counts {counts}"),
    )
}

fn c7_null_calibration() -> Outcome {
    const SERIES: usize = 2000;
    let mut stats: Vec<f64> = Vec::with_capacity(SERIES);
    let mut wald_sum = 0.0;
    for k in 0..SERIES {
        let x = sample_series(
            &CopulaModel::Independence,
            &MarginSpec::F2,
            500,
            &mut stream_rng(SEED, 7000 + k as u64),
        )
        .unwrap();
        let r = test_randomness(&x, 5, ScoreFamily::Spearman, 2).unwrap();
        let first = r.subsets.iter().find(|s| s.mask == 0b11).unwrap();
        stats.push(r.n as f64 * first.r * first.r);
        wald_sum += r.wald.stat;
    }
    stats.sort_by(f64::total_cmp);
    let m = SERIES as f64;
    let ks = stats
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let cdf = 1.0 - chi2_sf(s, 1).unwrap();
            (cdf - i as f64 / m)
                .abs()
                .max(((i + 1) as f64 / m - cdf).abs())
        })
        .fold(0.0, f64::max);
    // Asymptotic Kolmogorov critical value at the 0.1% level.
    let critical = 1.949 / m.sqrt();
    let mean_wald = wald_sum / m;
    let ok = ks < critical && (mean_wald - 4.0).abs() <= 0.3;
    (
        ok,
        format!("KS {ks:.4} < {critical:.4}, mean L {mean_wald:.3} (4 ± 0.3)"),
    )
}

// Composite Simpson rule on [a, b] with `m` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn c8_are_oracle() -> Outcome {
    let continuous =
        TheoreticalMargin::continuous(|u| mlcop::dist::normal_quantile(u).unwrap_or(f64::NAN));
    let value = are(
        ScoreFamily::Spearman,
        ScoreFamily::VanDerWaerden,
        &continuous,
        2,
    )
    .unwrap();

    // In the z scale, cov(U, Z) = ∫ (Φ(z) − 1/2) z φ(z) dz and var(Z) = ∫ z² φ(z) dz.
    let cov = simpson(
        |z| (normal_cdf(z) - 0.5) * z * normal_pdf(z),
        -12.0,
        12.0,
        20_000,
    );
    let var_z = simpson(|z| z * z * normal_pdf(z), -12.0, 12.0, 20_000);
    let quadrature = (cov * cov / (var_z / 12.0)).powi(2);

    let mut bern_err: f64 = 0.0;
    for p in [0.1, 0.5, 0.8] {
        let m = TheoreticalMargin::bernoulli(p).unwrap();
        for k in ScoreFamily::ALL {
            for g in ScoreFamily::ALL {
                bern_err = bern_err.max((are(k, g, &m, 2).unwrap() - 1.0).abs());
            }
        }
    }
    let ok =
        (value - 0.91189).abs() <= 1e-4 && (value - quadrature).abs() <= 1e-4 && bern_err <= 1e-10;
    (ok, format!("are {value:.6}, quadrature {quadrature:.6}, (3/pi)^2 = 0.911891; bernoulli max |are - 1| = {bern_err:.1e}"),
    )
}

fn c9_consistency_under_dependence() -> Outcome {
    let joint = DiscreteJoint::new(vec![vec![0.0, 0.0], vec![1.0, 1.0]], vec![0.5, 0.5]).unwrap();
    let families = [ScoreFamily::Spearman];
    let population = population_gamma(&joint, &families, 0b11).unwrap();
    let (estimate, _) = consistency_check(&joint, &families, 0b11, 20_000, SEED).unwrap();

    // Monte Carlo standard error from independent replicates of the same estimator.
    let reps: Vec<f64> = (1..=200u64)
        .map(|k| {
            consistency_check(&joint, &families, 0b11, 20_000, SEED + k)
                .unwrap()
                .0
        })
        .collect();
    let mean = reps.iter().sum::<f64>() / reps.len() as f64;
    let se =
        (reps.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (reps.len() - 1) as f64).sqrt();

    let ok = (population - 0.0625).abs() < 1e-15 && (estimate - population).abs() <= 5.0 * se;
    (
        ok,
        format!(
            "population {population}, estimate {estimate:.6}, |diff| {:.2e} <= 5 se = {:.2e}",
            (estimate - population).abs(),
            5.0 * se
        ),
    )
}

fn main() -> std::process::ExitCode {
    let criteria: [Criterion; 9] = [
        ("level", c1_level_under_independence),
        ("tent map", c2_tent_map_power),
        ("score ordering", c3_score_family_ordering),
        ("small-instance oracle", c4_alternating_binary_series),
        ("integral equivalence", c5_integral_representation),
        ("identities", c6_identities),
        ("null calibration", c7_null_calibration),
        ("ARE oracle", c8_are_oracle),
        ("consistency", c9_consistency_under_dependence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        println!(
            "{} criterion {} ({name}): {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
        failed += usize::from(!ok);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        std::process::ExitCode::SUCCESS
    } else {
        std::process::ExitCode::FAILURE
    }
}
