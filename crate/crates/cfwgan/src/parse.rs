//! Text forms of command-line values.
//!
//! Laws: `gaussian:MEAN,SD`, `laplace:MEAN,SCALE`, `uniform:LO,HI`,
//! `gumbel:LOC,SCALE`, `logit-normal`. Row laws: `iid:<law>` or
//! `ar1[:COEF[:NOISE]]` with NOISE `t<dof>` or `gaussian`.

use crate::error::{CliError, CliResult};
use cfwgan_core::activation::ActivationKind;
use cfwgan_core::distributions::{Ar1Spec, ArNoise, ContinuousDistribution1D as D, DataSpec};
use cfwgan_core::kde::Bandwidth;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn numbers(args: &str, n: usize, what: &str) -> CliResult<Vec<f64>> {
    let v: Result<Vec<f64>, _> = args.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if v.len() == n => Ok(v),
        _ => Err(usage(format!(
            "{what} takes {n} comma-separated numbers, got `{args}`"
        ))),
    }
}

pub fn dist(text: &str) -> CliResult<D> {
    let (name, args) = text.split_once(':').unwrap_or((text, ""));
    let law = match name.trim().to_ascii_lowercase().as_str() {
        "gaussian" | "normal" => {
            let p = numbers(args, 2, "gaussian")?;
            D::gaussian(p[0], p[1])
        }
        "laplace" => {
            let p = numbers(args, 2, "laplace")?;
            D::laplace(p[0], p[1])
        }
        "uniform" => {
            let p = numbers(args, 2, "uniform")?;
            D::uniform(p[0], p[1])
        }
        "gumbel" => {
            let p = numbers(args, 2, "gumbel")?;
            D::gumbel(p[0], p[1])
        }
        "logit-normal" | "logitnormal" if args.is_empty() => Ok(D::LogitNormal),
        _ => return Err(usage(format!("unknown distribution `{text}`"))),
    };
    law.map_err(|e| usage(format!("`{text}`: {e}")))
}

pub fn data_spec(text: &str) -> CliResult<DataSpec> {
    if let Some(law) = text.strip_prefix("iid:") {
        return Ok(DataSpec::Iid(dist(law)?));
    }
    let mut parts = text.split(':');
    if parts.next() != Some("ar1") {
        return Err(usage(format!(
            "unknown data spec `{text}` (expected iid:<law> or ar1[:coef[:noise]])"
        )));
    }
    let mut spec = Ar1Spec::default();
    if let Some(c) = parts.next() {
        spec.coefficient = c
            .parse()
            .map_err(|_| usage(format!("bad AR coefficient `{c}`")))?;
    }
    if let Some(n) = parts.next() {
        spec.noise = match n {
            "gaussian" | "normal" => ArNoise::Gaussian,
            _ => {
                let dof = n.strip_prefix('t').and_then(|d| d.parse().ok());
                ArNoise::StudentT {
                    dof: dof.ok_or_else(|| usage(format!("bad AR noise `{n}`")))?,
                }
            }
        };
    }
    if parts.next().is_some() {
        return Err(usage(format!("trailing fields in `{text}`")));
    }
    spec.validate()
        .map_err(|e| usage(format!("`{text}`: {e}")))?;
    Ok(DataSpec::Ar1(spec))
}

pub fn activation(text: &str) -> CliResult<ActivationKind> {
    ActivationKind::ALL
        .into_iter()
        .find(|k| k.name() == text.to_ascii_lowercase())
        .ok_or_else(|| {
            usage(format!(
                "unknown activation `{text}` (linear, sigmoid, relu)"
            ))
        })
}

pub fn bandwidth(text: &str) -> CliResult<Bandwidth> {
    match text {
        "silverman" => Ok(Bandwidth::Silverman),
        "cdf" => Ok(Bandwidth::CdfPlugIn),
        _ => match text.parse::<f64>() {
            Ok(h) if h > 0.0 && h.is_finite() => Ok(Bandwidth::Fixed(h)),
            _ => Err(usage(format!(
                "bad bandwidth `{text}` (silverman, cdf or a positive number)"
            ))),
        },
    }
}

pub fn bandwidth_name(b: Bandwidth) -> String {
    match b {
        Bandwidth::Silverman => "silverman".into(),
        Bandwidth::CdfPlugIn => "cdf".into(),
        Bandwidth::Fixed(h) => h.to_string(),
    }
}

pub fn usize_list(text: &str, what: &str) -> CliResult<Vec<usize>> {
    let v: Result<Vec<usize>, _> = text.split(',').map(|s| s.trim().parse::<usize>()).collect();
    match v {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(usage(format!(
            "{what} must be a comma-separated list of integers, got `{text}`"
        ))),
    }
}

/// Rank rule for a baseline: a count `20`, `d`, or a fraction of d like `2/3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankRule {
    Fixed(usize),
    FractionOfD(u64, u64),
}

impl RankRule {
    pub fn parse(text: &str) -> CliResult<Self> {
        let bad = || {
            usage(format!(
                "bad rank `{text}` (integer, `d`, or a fraction like 2/3)"
            ))
        };
        if text == "d" {
            return Ok(Self::FractionOfD(1, 1));
        }
        if let Some((a, b)) = text.split_once('/') {
            let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if a == 0 || b == 0 || a > b {
                return Err(bad());
            }
            return Ok(Self::FractionOfD(a, b));
        }
        match text.parse::<usize>() {
            Ok(r) if r > 0 => Ok(Self::Fixed(r)),
            _ => Err(bad()),
        }
    }

    /// Rank for dimension d, rounding fractions to the nearest integer (at least 1).
    pub fn resolve(self, d: usize) -> usize {
        match self {
            Self::Fixed(r) => r,
            Self::FractionOfD(a, b) => (((d as u64 * a) as f64 / b as f64).round() as usize).max(1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laws() {
        assert_eq!(
            dist("gaussian:0,1").unwrap(),
            D::gaussian(0.0, 1.0).unwrap()
        );
        assert_eq!(
            dist("laplace:0,0.5").unwrap(),
            D::laplace(0.0, 0.5).unwrap()
        );
        assert_eq!(dist("logit-normal").unwrap(), D::LogitNormal);
        for bad in [
            "gaussian:0",
            "gaussian:0,-1",
            "cauchy:0,1",
            "laplace:a,b",
            "",
        ] {
            assert!(matches!(dist(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn row_laws() {
        assert_eq!(data_spec("ar1").unwrap(), DataSpec::Ar1(Ar1Spec::default()));
        assert_eq!(
            data_spec("ar1:0.3:gaussian").unwrap(),
            DataSpec::Ar1(Ar1Spec {
                coefficient: 0.3,
                noise: ArNoise::Gaussian
            })
        );
        assert_eq!(
            data_spec("ar1:0.5:t7").unwrap(),
            DataSpec::Ar1(Ar1Spec {
                coefficient: 0.5,
                noise: ArNoise::StudentT { dof: 7.0 }
            })
        );
        assert!(data_spec("ar1:1.5").is_err());
        assert!(data_spec("ar1:0.5:t2").is_err());
        assert!(matches!(
            data_spec("iid:laplace:0,1").unwrap(),
            DataSpec::Iid(_)
        ));
    }

    #[test]
    fn ranks_and_flags() {
        assert_eq!(RankRule::parse("2/3").unwrap().resolve(30), 20);
        assert_eq!(RankRule::parse("d").unwrap().resolve(7), 7);
        assert_eq!(RankRule::parse("20").unwrap().resolve(30), 20);
        assert!(RankRule::parse("0").is_err() && RankRule::parse("3/2").is_err());
        assert_eq!(bandwidth("0.5").unwrap(), Bandwidth::Fixed(0.5));
        assert!(bandwidth("-1").is_err());
        assert_eq!(activation("ReLU").unwrap(), ActivationKind::Relu);
        assert_eq!(usize_list("1, 2,30", "d").unwrap(), vec![1, 2, 30]);
        assert!(usize_list("1,x", "d").is_err());
    }
}
