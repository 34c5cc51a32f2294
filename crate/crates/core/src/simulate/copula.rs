use std::fmt;

use crate::dist::normal::{normal_cdf, normal_quantile_unchecked};
use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Dependence family of a stationary copula chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CopulaKind {
    Independence,
    TentMap,
    Fgm,
    Clayton,
    Frank,
    Gaussian,
}

impl CopulaKind {
    pub fn token(self) -> &'static str {
        match self {
            CopulaKind::Independence => "indep",
            CopulaKind::TentMap => "tent",
            CopulaKind::Fgm => "fgm",
            CopulaKind::Clayton => "clayton",
            CopulaKind::Frank => "frank",
            CopulaKind::Gaussian => "gaussian",
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        match token.trim().to_ascii_lowercase().as_str() {
            "indep" | "independence" => Ok(CopulaKind::Independence),
            "tent" => Ok(CopulaKind::TentMap),
            "fgm" => Ok(CopulaKind::Fgm),
            "clayton" => Ok(CopulaKind::Clayton),
            "frank" => Ok(CopulaKind::Frank),
            "gaussian" => Ok(CopulaKind::Gaussian),
            other => Err(Error::Input(format!(
                "unknown copula '{other}' (expected indep|tent|fgm|clayton|frank|gaussian)"
            ))),
        }
    }
}

/// Transition copula of a stationary Markov chain.
///
/// FGM is second order: (U_t, U_{t−1}, U_{t−2}) has density
/// `1 + θ Π_{j=1}^{3} (1 − 2u_j)`, whose bivariate margins are independent.
/// All other models are first order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CopulaModel {
    Independence,
    TentMap,
    Fgm { theta: f64 },
    Clayton { theta: f64 },
    Frank { theta: f64 },
    Gaussian { rho: f64 },
}

impl CopulaModel {
    pub fn fgm(theta: f64) -> Result<Self> {
        if !(theta.abs() <= 1.0) {
            return Err(Error::Argument(format!(
                "FGM needs |theta| <= 1, got {theta}"
            )));
        }
        Ok(CopulaModel::Fgm { theta })
    }

    pub fn clayton(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::Argument(format!(
                "Clayton needs theta > 0, got {theta}"
            )));
        }
        Ok(CopulaModel::Clayton { theta })
    }

    pub fn frank(theta: f64) -> Result<Self> {
        if theta == 0.0 || !theta.is_finite() {
            return Err(Error::Argument(format!(
                "Frank needs finite theta != 0, got {theta}"
            )));
        }
        Ok(CopulaModel::Frank { theta })
    }

    pub fn gaussian(rho: f64) -> Result<Self> {
        if !(rho.abs() < 1.0) {
            return Err(Error::Argument(format!(
                "Gaussian needs |rho| < 1, got {rho}"
            )));
        }
        Ok(CopulaModel::Gaussian { rho })
    }

    /// Builds a model from a family token and an optional strength such as
    /// `tau=0.1`, `theta=2` or `rho=0.3`. Without a strength, FGM uses θ = 1
    /// and the parametric families use Kendall's τ = 0.1.
    pub fn parse(kind: &str, strength: Option<&str>) -> Result<Self> {
        let kind = CopulaKind::parse(kind)?;
        let strength = match strength.map(str::trim).filter(|s| !s.is_empty()) {
            Some(s) => Some(parse_strength(s)?),
            None => None,
        };
        let param = match (kind, strength) {
            (CopulaKind::Independence | CopulaKind::TentMap, Some(_)) => {
                return Err(Error::Input(format!("{} takes no parameter", kind.token())))
            }
            (CopulaKind::Independence | CopulaKind::TentMap, None) => 0.0,
            (_, Some(Strength::Tau(tau))) => tau_to_param(kind, tau)?,
            (_, Some(Strength::Param(p))) => p,
            (CopulaKind::Fgm, None) => 1.0,
            (_, None) => tau_to_param(kind, 0.1)?,
        };
        match kind {
            CopulaKind::Independence => Ok(CopulaModel::Independence),
            CopulaKind::TentMap => Ok(CopulaModel::TentMap),
            CopulaKind::Fgm => CopulaModel::fgm(param),
            CopulaKind::Clayton => CopulaModel::clayton(param),
            CopulaKind::Frank => CopulaModel::frank(param),
            CopulaKind::Gaussian => CopulaModel::gaussian(param),
        }
    }

    pub fn kind(&self) -> CopulaKind {
        match self {
            CopulaModel::Independence => CopulaKind::Independence,
            CopulaModel::TentMap => CopulaKind::TentMap,
            CopulaModel::Fgm { .. } => CopulaKind::Fgm,
            CopulaModel::Clayton { .. } => CopulaKind::Clayton,
            CopulaModel::Frank { .. } => CopulaKind::Frank,
            CopulaModel::Gaussian { .. } => CopulaKind::Gaussian,
        }
    }

    /// Number of past values the transition depends on.
    pub fn order(&self) -> usize {
        match self {
            CopulaModel::Fgm { .. } => 2,
            _ => 1,
        }
    }

    /// Solves `P(U_t ≤ u | history) = w` for u.
    ///
    /// `history[0]` is U_{t−1} and, for second-order models, `history[1]` is
    /// U_{t−2}. The tent map is deterministic and ignores `w`.
    pub fn conditional_inverse(&self, history: &[f64], w: f64) -> Result<f64> {
        if history.len() != self.order() {
            return Err(Error::Argument(format!(
                "{} needs {} past values, got {}",
                self.kind().token(),
                self.order(),
                history.len()
            )));
        }
        if !(w > 0.0 && w < 1.0) {
            return Err(Error::Domain(format!("w must be in (0,1), got {w}")));
        }
        let v = history[0];
        let u = match *self {
            CopulaModel::Independence => w,
            CopulaModel::TentMap => 2.0 * v.min(1.0 - v),
            CopulaModel::Gaussian { rho } => normal_cdf(
                rho * normal_quantile_unchecked(v)
                    + (1.0 - rho * rho).sqrt() * normal_quantile_unchecked(w),
            ),
            CopulaModel::Clayton { theta } => {
                let a = w.powf(-theta / (1.0 + theta)) - 1.0;
                (a * v.powf(-theta) + 1.0).powf(-1.0 / theta)
            }
            CopulaModel::Frank { theta } => {
                let num = w * (-theta).exp_m1();
                let den = w + (1.0 - w) * (-theta * v).exp();
                -(num / den).ln_1p() / theta
            }
            CopulaModel::Fgm { theta } => {
                // Conditional cdf u + θc·u(1 − u); root of θc·u² − (1 + θc)u + w
                // in the stable form 2w / (b + √(b² − 4θc·w)).
                let c = theta * (1.0 - 2.0 * v) * (1.0 - 2.0 * history[1]);
                let b = 1.0 + c;
                2.0 * w / (b + (b * b - 4.0 * c * w).sqrt())
            }
        };
        Ok(u)
    }
}

impl fmt::Display for CopulaModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CopulaModel::Independence | CopulaModel::TentMap => f.write_str(self.kind().token()),
            CopulaModel::Fgm { theta }
            | CopulaModel::Clayton { theta }
            | CopulaModel::Frank { theta } => write!(f, "{}(theta={theta})", self.kind().token()),
            CopulaModel::Gaussian { rho } => write!(f, "gaussian(rho={rho})"),
        }
    }
}

enum Strength {
    Tau(f64),
    Param(f64),
}

fn parse_strength(s: &str) -> Result<Strength> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| Error::Input(format!("expected key=value strength, got '{s}'")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| Error::Input(format!("bad number in '{s}'")))?;
    match key.trim().to_ascii_lowercase().as_str() {
        "tau" => Ok(Strength::Tau(value)),
        "theta" | "rho" => Ok(Strength::Param(value)),
        other => Err(Error::Input(format!("unknown strength key '{other}'"))),
    }
}

/// First Debye function `D₁(x) = x⁻¹ ∫₀ˣ t / (eᵗ − 1) dt`.
pub(crate) fn debye1(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < 0.0 {
        return Ok(debye1(-x)? - x / 2.0);
    }
    let integrand = |t: f64| if t == 0.0 { 1.0 } else { t / t.exp_m1() };
    Ok(integrate(integrand, 0.0, x, 1e-14)? / x)
}

/// Kendall's τ of the Frank copula.
pub(crate) fn frank_tau(theta: f64) -> Result<f64> {
    Ok(1.0 - 4.0 / theta * (1.0 - debye1(theta)?))
}

/// Copula parameter attaining Kendall's τ.
///
/// Gaussian: ρ = sin(πτ/2). Clayton: θ = 2τ/(1 − τ). Frank: the θ solving
/// `τ = 1 − (4/θ)(1 − D₁(θ))`, bracketed and bisected.
pub fn tau_to_param(kind: CopulaKind, tau: f64) -> Result<f64> {
    let out_of_range = || {
        Error::Argument(format!(
            "tau = {tau} is not attainable for {}",
            kind.token()
        ))
    };
    match kind {
        CopulaKind::Gaussian => {
            if !(tau.abs() < 1.0) {
                return Err(out_of_range());
            }
            Ok((std::f64::consts::FRAC_PI_2 * tau).sin())
        }
        CopulaKind::Clayton => {
            if !(tau > 0.0 && tau < 1.0) {
                return Err(out_of_range());
            }
            Ok(2.0 * tau / (1.0 - tau))
        }
        CopulaKind::Frank => {
            if !(tau.abs() < 1.0) || tau == 0.0 {
                return Err(out_of_range());
            }
            let sign = tau.signum();
            let target = tau.abs();
            let (mut lo, mut hi) = (1e-8, 1.0);
            while frank_tau(hi)? < target {
                lo = hi;
                hi *= 2.0;
                if hi > 1e6 {
                    return Err(out_of_range());
                }
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if frank_tau(mid)? < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 * hi {
                    break;
                }
            }
            let theta = 0.5 * (lo + hi);
            let residual = (frank_tau(theta)? - target).abs();
            if residual > 1e-10 {
                return Err(Error::Numerical(format!(
                    "Frank inversion residual {residual:e} at tau = {tau}"
                )));
            }
            Ok(sign * theta)
        }
        CopulaKind::Fgm | CopulaKind::Independence | CopulaKind::TentMap => Err(Error::Argument(
            format!("{} is not parameterized by Kendall's tau", kind.token()),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Series `D₁(x) = 1 − x/4 + Σ_k B_{2k} x^{2k} / ((2k + 1)(2k)!)`.
    fn debye1_series(x: f64) -> f64 {
        let bernoulli = [
            1.0 / 6.0,
            -1.0 / 30.0,
            1.0 / 42.0,
            -1.0 / 30.0,
            5.0 / 66.0,
            -691.0 / 2730.0,
            7.0 / 6.0,
            -3617.0 / 510.0,
            43867.0 / 798.0,
            -174611.0 / 330.0,
            854513.0 / 138.0,
            -236364091.0 / 2730.0,
        ];
        let mut sum = 1.0 - x / 4.0;
        let mut fact = 1.0;
        for (k, b) in bernoulli.iter().enumerate() {
            let m = 2 * (k + 1);
            fact *= ((m - 1) * m) as f64;
            sum += b * x.powi(m as i32) / ((m + 1) as f64 * fact);
        }
        sum
    }

    #[test]
    fn debye_matches_series() {
        for x in [0.1, 0.5, 0.907, 1.5, -0.7] {
            assert!(
                (debye1(x).unwrap() - debye1_series(x)).abs() < 1e-12,
                "x={x}"
            );
        }
    }

    #[test]
    fn tau_examples() {
        let rho = tau_to_param(CopulaKind::Gaussian, 0.1).unwrap();
        assert!((rho - 0.156_434_5).abs() < 1e-7);
        let theta = tau_to_param(CopulaKind::Clayton, 0.1).unwrap();
        assert!((theta - 2.0 / 9.0).abs() < 1e-15);

        // Frank: bisect the series-based tau independently.
        let tau_series = |t: f64| 1.0 - 4.0 / t * (1.0 - debye1_series(t));
        let (mut lo, mut hi) = (0.5, 1.5);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if tau_series(mid) < 0.1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let frank = tau_to_param(CopulaKind::Frank, 0.1).unwrap();
        assert!((frank - 0.5 * (lo + hi)).abs() < 1e-9);
        assert!((frank - 0.907_368).abs() < 1e-5, "{frank}");
        assert!((tau_to_param(CopulaKind::Frank, -0.1).unwrap() + frank).abs() < 1e-9);
    }

    #[test]
    fn tau_out_of_range() {
        assert!(tau_to_param(CopulaKind::Clayton, -0.2).is_err());
        assert!(tau_to_param(CopulaKind::Clayton, 1.0).is_err());
        assert!(tau_to_param(CopulaKind::Gaussian, 1.0).is_err());
        assert!(tau_to_param(CopulaKind::Frank, 0.0).is_err());
        assert!(tau_to_param(CopulaKind::Fgm, 0.1).is_err());
    }

    #[test]
    fn conditional_inverse_examples() {
        let g = CopulaModel::gaussian(0.0).unwrap();
        assert!((g.conditional_inverse(&[0.3], 0.77).unwrap() - 0.77).abs() < 1e-14);

        let c = CopulaModel::clayton(2.0).unwrap();
        let expected = ((0.5f64.powf(-2.0 / 3.0) - 1.0) * 4.0 + 1.0).powf(-0.5);
        let u = c.conditional_inverse(&[0.5], 0.5).unwrap();
        assert!((u - expected).abs() < 1e-14);
        assert!((u - 0.5464).abs() < 1e-4);

        for theta in [-5.0, 0.907, 3.0] {
            let f = CopulaModel::frank(theta).unwrap();
            assert!((f.conditional_inverse(&[0.5], 0.5).unwrap() - 0.5).abs() < 1e-14);
        }

        let fgm = CopulaModel::fgm(1.0).unwrap();
        for w in [0.1, 0.5, 0.93] {
            assert!((fgm.conditional_inverse(&[0.5, 0.5], w).unwrap() - w).abs() < 1e-15);
        }

        let tent = CopulaModel::TentMap;
        let mut v = 0.3;
        for expected in [0.6, 0.8, 0.4] {
            v = tent.conditional_inverse(&[v], 0.5).unwrap();
            assert!((v - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn conditional_inverse_inverts_conditional_cdf() {
        // Clayton and Frank h-functions written out directly.
        let clayton_h = |theta: f64, u: f64, v: f64| {
            v.powf(-theta - 1.0) * (u.powf(-theta) + v.powf(-theta) - 1.0).powf(-1.0 / theta - 1.0)
        };
        let frank_h = |theta: f64, u: f64, v: f64| {
            let e = |x: f64| (-theta * x).exp_m1();
            (-theta * v).exp() * e(u) / ((-theta).exp_m1() + e(u) * e(v))
        };
        let fgm_cdf = |c: f64, u: f64| u + c * u * (1.0 - u);
        for v in [0.05, 0.4, 0.9] {
            for w in [0.02, 0.5, 0.97] {
                let u = CopulaModel::clayton(2.0)
                    .unwrap()
                    .conditional_inverse(&[v], w)
                    .unwrap();
                assert!((clayton_h(2.0, u, v) - w).abs() < 1e-12);
                let u = CopulaModel::frank(4.0)
                    .unwrap()
                    .conditional_inverse(&[v], w)
                    .unwrap();
                assert!((frank_h(4.0, u, v) - w).abs() < 1e-12);
                let u = CopulaModel::fgm(0.8)
                    .unwrap()
                    .conditional_inverse(&[v, 0.2], w)
                    .unwrap();
                let c = 0.8 * (1.0 - 2.0 * v) * (1.0 - 2.0 * 0.2);
                assert!((fgm_cdf(c, u) - w).abs() < 1e-14);
                assert!(u > 0.0 && u < 1.0);
            }
        }
    }

    #[test]
    fn strictly_increasing_in_w() {
        let models = [
            CopulaModel::clayton(0.2222).unwrap(),
            CopulaModel::frank(0.907).unwrap(),
            CopulaModel::gaussian(0.156).unwrap(),
            CopulaModel::clayton(8.0).unwrap(),
            CopulaModel::frank(-12.0).unwrap(),
        ];
        for m in models {
            for v in [0.01, 0.3, 0.5, 0.99] {
                let mut prev = 0.0;
                for k in 1..200 {
                    let u = m.conditional_inverse(&[v], k as f64 / 200.0).unwrap();
                    assert!(u > prev, "{m} v={v} k={k}");
                    prev = u;
                }
            }
        }
    }

    #[test]
    fn history_length_checked() {
        assert!(CopulaModel::fgm(1.0)
            .unwrap()
            .conditional_inverse(&[0.5], 0.5)
            .is_err());
        assert!(CopulaModel::Independence
            .conditional_inverse(&[0.5, 0.1], 0.5)
            .is_err());
        assert!(CopulaModel::Independence
            .conditional_inverse(&[0.5], 1.0)
            .is_err());
    }

    #[test]
    fn parameter_validation_and_parsing() {
        assert!(CopulaModel::clayton(0.0).is_err());
        assert!(CopulaModel::frank(0.0).is_err());
        assert!(CopulaModel::gaussian(1.0).is_err());
        assert!(CopulaModel::fgm(1.5).is_err());
        assert_eq!(
            CopulaModel::parse("fgm", None).unwrap(),
            CopulaModel::Fgm { theta: 1.0 }
        );
        match CopulaModel::parse("CLAYTON", Some("tau=0.1")).unwrap() {
            CopulaModel::Clayton { theta } => assert!((theta - 2.0 / 9.0).abs() < 1e-15),
            other => panic!("{other}"),
        }
        assert_eq!(
            CopulaModel::parse("gaussian", Some("rho=0.3")).unwrap(),
            CopulaModel::Gaussian { rho: 0.3 }
        );
        assert!(CopulaModel::parse("tent", Some("theta=1")).is_err());
        assert!(CopulaModel::parse("gumbel", None).is_err());
        assert!(CopulaModel::parse("frank", Some("kappa=1")).is_err());
    }
}
