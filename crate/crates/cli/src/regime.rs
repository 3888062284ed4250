//! Parameter resolution and codec dispatch for the four code families.

use anyhow::{anyhow, bail, ensure, Result};
use clap::{Args, ValueEnum};
use respectra::exact::{self, ExactParams};
use respectra::gap::{self, GapParams};
use respectra::noisy::{self, NoisyParams};
use respectra::primal::{self, InputShaper, PrimalParams};
use respectra::{ceil_log2, BitString, Spectrum};

use crate::manifest::Manifest;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Regime {
    /// Full multispectrum, read length at least 2⌈log₂ n⌉ + 4.
    Exact,
    /// Full multispectrum, shorter reads, run-limited inputs.
    Primal,
    /// Up to G consecutive reads missing.
    Gap,
    /// Up to G consecutive reads missing and t flips per read.
    Noisy,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Exact => "exact",
            Regime::Primal => "primal",
            Regime::Gap => "gap",
            Regime::Noisy => "noisy",
        }
    }

    fn from_name(name: &str) -> Result<Self> {
        Regime::from_str(name, false).map_err(|_| anyhow!("unknown regime {name:?}"))
    }
}

#[derive(Args, Clone, Debug, Default)]
pub struct CodeArgs {
    /// Code length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Read length; derived from the other parameters when omitted.
    #[arg(long = "L")]
    pub read_len: Option<usize>,
    /// Maximum number of consecutive missing reads.
    #[arg(long = "G")]
    pub max_gap: Option<usize>,
    /// Maximum flips per read.
    #[arg(long = "t")]
    pub max_flips: Option<usize>,
    /// Primal regime: lines are raw payloads, shaped into run-limited inputs.
    #[arg(long)]
    pub payload: bool,
}

pub enum Codec {
    Exact(ExactParams),
    Primal { params: PrimalParams, shaper: Option<InputShaper> },
    Gap(GapParams),
    Noisy(NoisyParams),
}

fn reject(regime: Regime, flag: &str, value: Option<usize>) -> Result<()> {
    ensure!(value.is_none(), "--{flag} does not apply to the {} regime", regime.name());
    Ok(())
}

fn check_read_len(given: Option<usize>, derived: usize) -> Result<()> {
    match given {
        Some(l) if l != derived => bail!("--L {l} conflicts with the derived read length {derived}"),
        _ => Ok(()),
    }
}

impl Codec {
    pub fn build(regime: Regime, args: &CodeArgs) -> Result<Self> {
        ensure!(!args.payload || regime == Regime::Primal, "--payload applies only to the primal regime");
        let need_n = || args.n.ok_or_else(|| anyhow!("the {} regime needs --n", regime.name()));
        let codec = match regime {
            Regime::Exact => {
                reject(regime, "G", args.max_gap)?;
                reject(regime, "t", args.max_flips)?;
                let n = need_n()?;
                Codec::Exact(ExactParams::new(n, args.read_len.unwrap_or(2 * ceil_log2(n) + 4))?)
            }
            Regime::Primal => {
                reject(regime, "G", args.max_gap)?;
                reject(regime, "t", args.max_flips)?;
                let n = need_n()?;
                let params = PrimalParams::new(n, args.read_len.unwrap_or(PrimalParams::min_read_len(n)))?;
                let shaper = args.payload.then(|| InputShaper::new(params.message_len())).transpose()?;
                Codec::Primal { params, shaper }
            }
            Regime::Gap => {
                reject(regime, "t", args.max_flips)?;
                let g = args.max_gap.ok_or_else(|| anyhow!("the gap regime needs --G"))?;
                let p = GapParams::new(need_n()?, g)?;
                check_read_len(args.read_len, p.read_len())?;
                Codec::Gap(p)
            }
            Regime::Noisy => {
                let g = args.max_gap.ok_or_else(|| anyhow!("the noisy regime needs --G"))?;
                let t = args.max_flips.ok_or_else(|| anyhow!("the noisy regime needs --t"))?;
                let n = match args.n {
                    Some(n) => n,
                    None => NoisyParams::min_code_len(g, t)?,
                };
                let p = NoisyParams::new(n, g, t)?;
                check_read_len(args.read_len, p.read_len())?;
                Codec::Noisy(p)
            }
        };
        Ok(codec)
    }

    /// Rebuilds the codec recorded by an encode run, checking it belongs to `regime`.
    pub fn from_manifest(regime: Regime, m: &Manifest) -> Result<Self> {
        let recorded = Regime::from_name(m.get("regime").ok_or_else(|| anyhow!("manifest lacks regime"))?)?;
        ensure!(
            recorded == regime,
            "manifest describes the {} regime, not {}",
            recorded.name(),
            regime.name()
        );
        let args = CodeArgs {
            n: Some(m.required("n")?),
            read_len: Some(m.required("L")?),
            max_gap: m.parsed("G")?,
            max_flips: m.parsed("t")?,
            payload: m.parsed("payload")?.unwrap_or(false),
        };
        Self::build(regime, &args)
    }

    pub fn regime(&self) -> Regime {
        match self {
            Codec::Exact(_) => Regime::Exact,
            Codec::Primal { .. } => Regime::Primal,
            Codec::Gap(_) => Regime::Gap,
            Codec::Noisy(_) => Regime::Noisy,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Codec::Exact(p) => p.n(),
            Codec::Primal { params, .. } => params.n(),
            Codec::Gap(p) => p.n(),
            Codec::Noisy(p) => p.n(),
        }
    }

    pub fn read_len(&self) -> usize {
        match self {
            Codec::Exact(p) => p.read_len(),
            Codec::Primal { params, .. } => params.read_len(),
            Codec::Gap(p) => p.read_len(),
            Codec::Noisy(p) => p.read_len(),
        }
    }

    /// Length of each input line to [`Codec::encode`].
    pub fn input_len(&self) -> usize {
        match self {
            Codec::Exact(p) => p.message_len(),
            Codec::Primal { shaper: Some(s), .. } => s.capacity_bits(),
            Codec::Primal { params, .. } => params.message_len(),
            Codec::Gap(p) => p.message_len(),
            Codec::Noisy(p) => p.message_len(),
        }
    }

    /// Writes everything needed to rebuild this codec, plus derived lengths.
    pub fn record(&self, m: &mut Manifest) {
        m.set("regime", self.regime().name()).set("n", self.n()).set("L", self.read_len());
        match self {
            Codec::Exact(_) => {}
            Codec::Primal { params, shaper } => {
                m.set("payload", shaper.is_some()).set("zero_run", params.zero_run());
                if let Some(s) = shaper {
                    m.set("block_len", s.block_len()).set("blocks", s.blocks());
                }
            }
            Codec::Gap(p) => {
                m.set("G", p.max_gap()).set("window", p.window());
            }
            Codec::Noisy(p) => {
                m.set("G", p.max_gap())
                    .set("t", p.max_flips())
                    .set("window", p.window())
                    .set("prefix_len", p.prefix_len())
                    .set("suffix_parity_len", p.suffix_parity_len())
                    .set("length_modulus", p.length_modulus());
            }
        }
        m.set("input_len", self.input_len()).set("redundancy", self.n() - self.input_len());
    }

    pub fn encode(&self, x: &BitString) -> respectra::Result<BitString> {
        match self {
            Codec::Exact(p) => exact::lr_encode(x, p),
            Codec::Primal { params, shaper } => match shaper {
                Some(s) => primal::plr_encode(&s.shape(x)?, params),
                None => primal::plr_encode(x, params),
            },
            Codec::Gap(p) => gap::g_encode(x, p),
            Codec::Noisy(p) => noisy::gt_encode(x, p),
        }
    }

    pub fn decode(&self, c: &BitString) -> respectra::Result<BitString> {
        match self {
            Codec::Exact(p) => exact::lr_decode(c, p),
            Codec::Primal { params, shaper } => {
                let x = primal::plr_decode(c, params)?;
                match shaper {
                    Some(s) => s.extract(&x),
                    None => Ok(x),
                }
            }
            Codec::Gap(p) => gap::g_decode(c, p),
            Codec::Noisy(p) => noisy::gt_decode(c, p),
        }
    }

    pub fn assemble(&self, m: &Spectrum) -> respectra::Result<BitString> {
        match self {
            Codec::Exact(p) => exact::assemble_padded(m, p),
            Codec::Primal { params, .. } => primal::assemble(m, params),
            Codec::Gap(p) => gap::assemble_gapped(m, p),
            Codec::Noisy(p) => noisy::assemble_noisy(m, p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(n: Option<usize>, g: Option<usize>, t: Option<usize>) -> CodeArgs {
        CodeArgs { n, max_gap: g, max_flips: t, ..CodeArgs::default() }
    }

    #[test]
    fn derived_read_lengths() {
        assert_eq!(Codec::build(Regime::Exact, &args(Some(64), None, None)).unwrap().read_len(), 16);
        assert_eq!(Codec::build(Regime::Gap, &args(Some(256), Some(2), None)).unwrap().read_len(), 24);
        let noisy = Codec::build(Regime::Noisy, &args(None, Some(1), Some(1))).unwrap();
        assert_eq!((noisy.n(), noisy.read_len()), (643, 582));
    }

    #[test]
    fn manifest_rebuilds_the_codec() {
        let codec = Codec::build(Regime::Gap, &args(Some(256), Some(2), None)).unwrap();
        let mut m = Manifest::new("encode");
        codec.record(&mut m);
        assert_eq!(m.get("redundancy"), Some("9"));
        let again = Codec::from_manifest(Regime::Gap, &m).unwrap();
        assert_eq!((again.n(), again.read_len()), (256, 24));
        assert!(Codec::from_manifest(Regime::Exact, &m).is_err());
    }

    #[test]
    fn irrelevant_flags_are_rejected() {
        assert!(Codec::build(Regime::Exact, &args(Some(64), Some(1), None)).is_err());
        assert!(Codec::build(Regime::Gap, &args(Some(256), None, None)).is_err());
        let conflicting = CodeArgs { read_len: Some(30), ..args(Some(256), Some(2), None) };
        assert!(Codec::build(Regime::Gap, &conflicting).is_err());
    }
}
