use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};
use trapnorm::models::{IntervalModel, ModelKind};

/// Integrand selected with `--model`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Target {
    Line(ModelKind),
    Interval(IntervalModel),
}

impl FromStr for Target {
    type Err = anyhow::Error;

    fn from_str(text: &str) -> Result<Self> {
        let (kind, arg) = match text.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (text, None),
        };
        let number = |what: &str| -> Result<&str> {
            arg.ok_or_else(|| anyhow!("model {kind} needs :<{what}>"))
        };
        let target = match kind {
            "gauss" => Target::Line(ModelKind::Gaussian),
            "power" => Target::Line(ModelKind::Power {
                n: number("n")?.parse()?,
            }),
            "doublehump" => Target::Line(ModelKind::DoubleHump {
                a: number("a")?.parse()?,
            }),
            "In" => Target::Interval(IntervalModel::Polynomial {
                n: number("n")?.parse()?,
            }),
            "Jinf" => Target::Interval(IntervalModel::TanhKink),
            _ => bail!(
                "unknown model {text:?}; expected gauss, power:<n>, doublehump:<a>, In:<n> or Jinf"
            ),
        };
        if let Target::Line(k) = target {
            k.validate()?;
        }
        if arg.is_some() && matches!(kind, "gauss" | "Jinf") {
            bail!("model {kind} takes no argument");
        }
        Ok(target)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Line(ModelKind::Gaussian) => write!(f, "gauss"),
            Target::Line(ModelKind::Power { n }) => write!(f, "power:{n}"),
            Target::Line(ModelKind::DoubleHump { a }) => write!(f, "doublehump:{a}"),
            Target::Interval(IntervalModel::Polynomial { n }) => write!(f, "In:{n}"),
            Target::Interval(IntervalModel::TanhKink) => write!(f, "Jinf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Rule {
    Trap,
    Simpson,
    Em1,
    Em2,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Rule::Trap => "trap",
            Rule::Simpson => "simpson",
            Rule::Em1 => "em1",
            Rule::Em2 => "em2",
        };
        f.write_str(name)
    }
}
