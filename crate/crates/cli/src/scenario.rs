//! Scenario files and the flags that override them.

use std::path::Path;

use catport_core::protocol_math::SchmidtFrame;
use catport_core::protocols::{ChannelFamily, ChannelSpec, InputFrame, TeleportInput};
use catport_core::qstate::{QubitVector, C64};
use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::CliError;

/// Seed used when neither the flags nor the scenario file give one.
pub const DEFAULT_SEED: u64 = 24301;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Ghz,
    GhzClass,
    Cat,
}

impl Family {
    pub fn channel_family(self) -> ChannelFamily {
        match self {
            Family::Ghz => ChannelFamily::Ghz,
            Family::GhzClass => ChannelFamily::GhzClass,
            Family::Cat => ChannelFamily::Cat,
        }
    }

    pub fn default_n(self) -> usize {
        match self {
            Family::Cat => 3,
            _ => 2,
        }
    }
}

pub type Pair = [f64; 2];

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    pub zero: [Pair; 2],
    pub one: [Pair; 2],
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub a: Pair,
    pub b: Pair,
}

/// Contents of a scenario file. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub protocol: Option<Family>,
    pub n: Option<usize>,
    pub r: Option<f64>,
    pub epsilon: Option<f64>,
    pub alpha2: Option<f64>,
    pub alpha_phase: Option<f64>,
    pub alpha: Option<Pair>,
    pub beta: Option<Pair>,
    pub a2: Option<f64>,
    pub weights: Option<WeightSpec>,
    pub phis: Option<Vec<[Pair; 2]>>,
    pub phi_primes: Option<Vec<[Pair; 2]>>,
    /// Schmidt frames of the input: two for `ghz`, one (the last qubit) otherwise.
    pub frames: Option<Vec<FrameSpec>>,
    pub seed: Option<u64>,
}

/// Flags shared by the commands that build a single scenario.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Channel family.
    #[arg(long, value_enum)]
    pub protocol: Option<Family>,
    /// Number of Bobs (2 for ghz and ghz-class, 2 to 8 for cat).
    #[arg(long = "n", alias = "N")]
    pub n: Option<usize>,
    /// Overlap |⟨φ|φ'⟩| of every φ pair.
    #[arg(long)]
    pub r: Option<f64>,
    /// Phase of ⟨φ|φ'⟩.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// |α|² of the input state.
    #[arg(long)]
    pub alpha2: Option<f64>,
    /// Phase of α.
    #[arg(long)]
    pub alpha_phase: Option<f64>,
    /// Channel weight |a|²; anything but 0.5 runs the filtered protocol.
    #[arg(long)]
    pub a2: Option<f64>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read scenario {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("scenario {}: {e}", path.display())))
    }

    /// Applies command-line values on top of the file.
    pub fn overridden(mut self, args: &ScenarioArgs) -> Self {
        if args.alpha2.is_some() || args.alpha_phase.is_some() {
            self.alpha = None;
            self.beta = None;
        }
        if args.r.is_some() || args.epsilon.is_some() {
            self.phis = None;
            self.phi_primes = None;
        }
        if args.a2.is_some() {
            self.weights = None;
        }
        self.protocol = args.protocol.or(self.protocol);
        self.n = args.n.or(self.n);
        self.r = args.r.or(self.r);
        self.epsilon = args.epsilon.or(self.epsilon);
        self.alpha2 = args.alpha2.or(self.alpha2);
        self.alpha_phase = args.alpha_phase.or(self.alpha_phase);
        self.a2 = args.a2.or(self.a2);
        self
    }

    pub fn family(&self) -> Family {
        self.protocol.unwrap_or(Family::GhzClass)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    /// Builds the input and the channel.
    pub fn build(&self) -> Result<(TeleportInput, ChannelSpec), CliError> {
        let family = self.family();
        let n = self.n.unwrap_or(family.default_n());
        if n < 2 {
            return Err(CliError::Usage(format!("need at least two Bobs, got {n}")));
        }
        let (alpha, beta) = self.amplitudes()?;
        let frames = self.schmidt_frames(family)?;
        let usage = |e: catport_core::protocols::ProtocolError| CliError::Usage(e.to_string());

        let (input_frame, channel) = match family {
            Family::Ghz => {
                if n != 2 {
                    return Err(CliError::Usage(format!("the ghz protocol has two Bobs, not {n}")));
                }
                let frame = InputFrame::Schmidt { first: frames[0], second: frames[1] };
                (frame, ChannelSpec::ghz())
            }
            Family::GhzClass | Family::Cat => {
                let (phis, primes) = self.pairs(n)?;
                let frame =
                    InputFrame::Product { phis: phis.clone(), phi_primes: primes.clone(), last: frames[0] };
                let channel = if family == Family::GhzClass {
                    if n != 2 {
                        return Err(CliError::Usage(format!("the ghz-class protocol has two Bobs, not {n}")));
                    }
                    ChannelSpec::ghz_class(phis[0], primes[0])
                } else {
                    ChannelSpec::cat(phis, primes).map_err(usage)?
                };
                (frame, channel)
            }
        };
        let channel = match self.weights()? {
            Some((a, b)) => channel.with_weights(a, b).map_err(usage)?,
            None => channel,
        };
        let input = TeleportInput::new(alpha, beta, input_frame).map_err(usage)?;
        Ok((input, channel))
    }

    fn amplitudes(&self) -> Result<(C64, C64), CliError> {
        if let (Some(a), Some(b)) = (self.alpha, self.beta) {
            let (a, b) = (complex(a), complex(b));
            let norm = a.norm_sqr() + b.norm_sqr();
            if !norm.is_finite() || norm <= 0.0 {
                return Err(CliError::Usage("alpha and beta are both zero".into()));
            }
            return Ok((a / norm.sqrt(), b / norm.sqrt()));
        }
        if self.alpha.is_some() != self.beta.is_some() {
            return Err(CliError::Usage("give both alpha and beta or neither".into()));
        }
        let p = unit_interval("alpha2", self.alpha2.unwrap_or(0.5))?;
        let phase = finite("alpha-phase", self.alpha_phase.unwrap_or(0.0))?;
        Ok((C64::from_polar(p.sqrt(), phase), C64::new((1.0 - p).sqrt(), 0.0)))
    }

    fn weights(&self) -> Result<Option<(C64, C64)>, CliError> {
        if let Some(w) = &self.weights {
            let (a, b) = (complex(w.a), complex(w.b));
            let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
            if !norm.is_finite() || norm <= 0.0 {
                return Err(CliError::Usage("channel weights are both zero".into()));
            }
            return Ok(Some((a / norm, b / norm)));
        }
        match self.a2 {
            None => Ok(None),
            Some(a2) if a2 > 0.0 && a2 < 1.0 => Ok(Some((C64::new(a2.sqrt(), 0.0), C64::new((1.0 - a2).sqrt(), 0.0)))),
            Some(a2) => Err(CliError::Usage(format!("a2 must lie strictly between 0 and 1, got {a2}"))),
        }
    }

    fn pairs(&self, n: usize) -> Result<(Vec<QubitVector>, Vec<QubitVector>), CliError> {
        match (&self.phis, &self.phi_primes) {
            (Some(phis), Some(primes)) => {
                if phis.len() != n - 1 || primes.len() != n - 1 {
                    return Err(CliError::Usage(format!(
                        "{n} Bobs need {} φ and φ' vectors, got {} and {}",
                        n - 1,
                        phis.len(),
                        primes.len()
                    )));
                }
                let phis = phis.iter().map(|v| qubit("phis", v)).collect::<Result<_, _>>()?;
                let primes = primes.iter().map(|v| qubit("phi_primes", v)).collect::<Result<_, _>>()?;
                Ok((phis, primes))
            }
            (None, None) => {
                let (phi, prime) = overlap_pair(self.r.unwrap_or(0.5), self.epsilon.unwrap_or(0.0))?;
                Ok((vec![phi; n - 1], vec![prime; n - 1]))
            }
            _ => Err(CliError::Usage("give both phis and phi_primes or neither".into())),
        }
    }

    fn schmidt_frames(&self, family: Family) -> Result<Vec<SchmidtFrame>, CliError> {
        let wanted = if family == Family::Ghz { 2 } else { 1 };
        match &self.frames {
            None => Ok(vec![SchmidtFrame::computational(); wanted]),
            Some(frames) if frames.len() == wanted => frames
                .iter()
                .map(|f| {
                    SchmidtFrame::new(qubit("frames", &f.zero)?, qubit("frames", &f.one)?)
                        .map_err(|e| CliError::Usage(e.to_string()))
                })
                .collect(),
            Some(frames) => Err(CliError::Usage(format!(
                "the {} protocol takes {wanted} Schmidt frame(s), got {}",
                family.channel_family(),
                frames.len()
            ))),
        }
    }
}

/// `φ = |0⟩` and `φ' = r e^{iε}|0⟩ + √(1 − r²)|1⟩`, so `⟨φ|φ'⟩ = r e^{iε}`.
pub fn overlap_pair(r: f64, epsilon: f64) -> Result<(QubitVector, QubitVector), CliError> {
    let r = unit_interval("r", r)?;
    let epsilon = finite("epsilon", epsilon)?;
    let prime = QubitVector::normalized(C64::from_polar(r, epsilon), C64::new((1.0 - r * r).max(0.0).sqrt(), 0.0))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((QubitVector::zero(), prime))
}

fn complex([re, im]: Pair) -> C64 {
    C64::new(re, im)
}

fn qubit(field: &str, v: &[Pair; 2]) -> Result<QubitVector, CliError> {
    QubitVector::normalized(complex(v[0]), complex(v[1])).map_err(|e| CliError::Usage(format!("{field}: {e}")))
}

fn finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("{name} must be finite")))
    }
}

pub fn unit_interval(name: &str, x: f64) -> Result<f64, CliError> {
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("{name} must lie in [0, 1], got {x}")))
    }
}
