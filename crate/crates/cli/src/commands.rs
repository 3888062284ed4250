use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use respectra::bounds::{self, BoundReport};
use respectra::channel::{gap_channel, noisy_channel, trace_to_text, DeletionPattern, GapConfig, NoiseConfig};
use respectra::{ceil_log2, BitString, Spectrum};

use crate::manifest::Manifest;
use crate::regime::{Codec, Regime};

/// A failed work item: its 1-based line (or block) number and the reason.
pub type Failure = (usize, String);

/// Non-blank lines of `path` with their 1-based line numbers.
fn numbered_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| (k + 1, l.trim().to_string()))
        .collect())
}

fn parse_line(line: &str, len: usize) -> std::result::Result<BitString, String> {
    let x: BitString = line.parse().map_err(|e| format!("{e}"))?;
    if x.len() != len {
        return Err(format!("expected {len} bits, found {}", x.len()));
    }
    Ok(x)
}

fn write_lines(path: &Path, lines: &[BitString]) -> Result<()> {
    let text: String = lines.iter().map(|x| format!("{x}\n")).collect();
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn sidecar(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_os_string();
    name.push(".manifest");
    PathBuf::from(name)
}

/// Successful outputs in input order and the failures, line-numbered.
fn map_lines(
    lines: &[(usize, String)],
    len: usize,
    f: impl Fn(&BitString) -> respectra::Result<BitString>,
) -> (Vec<BitString>, Vec<Failure>) {
    let mut out = Vec::new();
    let mut failed = Vec::new();
    for (k, line) in lines {
        match parse_line(line, len).and_then(|x| f(&x).map_err(|e| e.to_string())) {
            Ok(y) => out.push(y),
            Err(e) => failed.push((*k, e)),
        }
    }
    (out, failed)
}

pub struct Io<'a> {
    pub input: &'a Path,
    pub output: &'a Path,
    pub manifest: Option<&'a Path>,
}

pub fn encode(codec: &Codec, io: &Io<'_>) -> Result<Vec<Failure>> {
    let lines = numbered_lines(io.input)?;
    let (codewords, failed) = map_lines(&lines, codec.input_len(), |x| codec.encode(x));
    write_lines(io.output, &codewords)?;
    let mut m = Manifest::new("encode");
    codec.record(&mut m);
    m.set("input", io.input.display())
        .set("output", io.output.display())
        .set("items", codewords.len())
        .set("failed", failed.len());
    m.write(&io.manifest.map_or_else(|| sidecar(io.output), Path::to_path_buf))?;
    Ok(failed)
}

pub fn decode(codec: &Codec, io: &Io<'_>) -> Result<Vec<Failure>> {
    let lines = numbered_lines(io.input)?;
    let (messages, failed) = map_lines(&lines, codec.n(), |c| codec.decode(c));
    write_lines(io.output, &messages)?;
    Ok(failed)
}

pub struct Channel {
    pub read_len: usize,
    pub max_gap: usize,
    pub max_flips: usize,
    pub seed: u64,
    pub adversarial: bool,
    pub reliable: bool,
    pub exact_flips: bool,
}

impl Channel {
    fn record(&self, m: &mut Manifest) {
        m.set("L", self.read_len)
            .set("G", self.max_gap)
            .set("t", self.max_flips)
            .set("seed", self.seed)
            .set("adversarial", self.adversarial)
            .set("reliable", self.reliable)
            .set("exact_flips", self.exact_flips);
    }

    /// Per-item seeds come from one generator so every run is replayable from `seed`.
    fn shred(&self, x: &BitString, rng: &mut ChaCha8Rng) -> respectra::Result<(Spectrum, String)> {
        let (pattern_seed, flip_seed) = (rng.next_u64(), rng.next_u64());
        if self.read_len > x.len() {
            return Err(respectra::Error::Domain(format!(
                "read length {} exceeds codeword length {}",
                self.read_len,
                x.len()
            )));
        }
        let pattern = if self.adversarial {
            DeletionPattern::Adversarial
        } else {
            DeletionPattern::Random { seed: pattern_seed }
        };
        let gap = GapConfig { max_gap: self.max_gap, pattern };
        let (spectrum, trace) = if self.max_flips == 0 {
            gap_channel(x, self.read_len, &gap)?
        } else {
            let cfg = NoiseConfig {
                gap,
                max_flips: self.max_flips,
                exact_flips: self.exact_flips,
                seed: flip_seed,
                reliable: self.reliable,
            };
            noisy_channel(x, self.read_len, &cfg)?
        };
        Ok((spectrum, trace_to_text(&trace)))
    }
}

pub fn shred(channel: &Channel, io: &Io<'_>, trace_path: Option<&Path>) -> Result<Vec<Failure>> {
    ensure!(!channel.reliable || channel.max_flips > 0, "--reliable needs --t above 0");
    let lines = numbered_lines(io.input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(channel.seed);
    let (mut spectra, mut traces) = (String::new(), String::new());
    let mut failed = Vec::new();
    let mut items = 0;
    for (k, line) in &lines {
        let result = line
            .parse::<BitString>()
            .map_err(|e| e.to_string())
            .and_then(|x| channel.shred(&x, &mut rng).map_err(|e| e.to_string()));
        match result {
            Ok((spectrum, trace)) => {
                items += 1;
                spectra.push_str(&spectrum.to_text());
                let _ = write!(traces, "item={items} line={k}\n{trace}");
            }
            Err(e) => failed.push((*k, e)),
        }
    }
    std::fs::write(io.output, spectra).with_context(|| format!("writing {}", io.output.display()))?;
    if let Some(path) = trace_path {
        std::fs::write(path, traces).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut m = Manifest::new("shred");
    channel.record(&mut m);
    m.set("input", io.input.display())
        .set("output", io.output.display())
        .set("items", items)
        .set("failed", failed.len());
    if let Some(path) = trace_path {
        m.set("trace", path.display());
    }
    m.write(&io.manifest.map_or_else(|| sidecar(io.output), Path::to_path_buf))?;
    Ok(failed)
}

/// Reassembles each spectrum block; failures are numbered by block.
pub fn assemble(codec: &Codec, input: &Path, output: &Path) -> Result<Vec<Failure>> {
    let text = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let spectra = Spectrum::parse_many(&text).with_context(|| format!("parsing {}", input.display()))?;
    if let Some(s) = spectra.iter().find(|s| s.read_len() != codec.read_len()) {
        bail!("spectrum read length {} does not match the manifest's L = {}", s.read_len(), codec.read_len());
    }
    let mut codewords = Vec::new();
    let mut failed = Vec::new();
    for (k, s) in spectra.iter().enumerate() {
        match codec.assemble(s) {
            Ok(c) => codewords.push(c),
            Err(e) => failed.push((k + 1, e.to_string())),
        }
    }
    write_lines(output, &codewords)?;
    Ok(failed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum LengthRule {
    /// `2⌈log₂ n⌉ + 2`, the one-bit-redundancy threshold.
    #[value(name = "2logn+2")]
    TwoLogPlusTwo,
    /// `2⌈log₂ n⌉ + 4`, the exact codec's read length.
    #[value(name = "2logn+4")]
    TwoLogPlusFour,
}

impl LengthRule {
    fn read_len(self, n: usize) -> usize {
        match self {
            LengthRule::TwoLogPlusTwo => 2 * ceil_log2(n) + 2,
            LengthRule::TwoLogPlusFour => 2 * ceil_log2(n) + 4,
        }
    }
}

/// Inclusive range of code lengths, written `a..b` or `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LengthRange {
    pub lo: usize,
    pub hi: usize,
}

impl std::str::FromStr for LengthRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let number = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("bad length {v:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (number(a)?, number(b.trim_start_matches('='))?),
            None => (number(s)?, number(s)?),
        };
        if lo < 2 || lo > hi {
            return Err(format!("range {s:?} must satisfy 2 ≤ lo ≤ hi"));
        }
        Ok(Self { lo, hi })
    }
}

pub struct BoundsRequest {
    pub lengths: LengthRange,
    pub read_len: Option<usize>,
    pub rule: LengthRule,
    pub enumerate: bool,
    pub csv: bool,
}

struct Row {
    n: usize,
    read_len: usize,
    report: Option<BoundReport>,
    exact: Option<u64>,
    one_bit: bool,
}

fn fmt_count(x: f64) -> String {
    if !x.is_finite() {
        "inf".into()
    } else if x.abs() < 1e12 {
        format!("{x:.0}")
    } else {
        format!("{x:.6e}")
    }
}

fn fmt_flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "NO",
        None => "-",
    }
}

pub fn bounds(req: &BoundsRequest) -> Result<String> {
    let cap = bounds::budget();
    if req.enumerate && req.lengths.hi > cap {
        bail!("n = {} exceeds the enumeration budget {cap} (set {})", req.lengths.hi, bounds::BUDGET_ENV);
    }
    let mut rows = Vec::new();
    for n in req.lengths.lo..=req.lengths.hi {
        let read_len = req.read_len.unwrap_or_else(|| req.rule.read_len(n));
        let report = bounds::u_bounds(n, read_len).ok();
        let exact = if req.enumerate { Some(bounds::enumerate_u(n, read_len.max(2))?) } else { None };
        let report = report.map(|mut r| {
            r.exact_count = exact;
            r
        });
        rows.push(Row { n, read_len, report, exact, one_bit: bounds::redundancy_check(n) });
    }
    let mut out = String::new();
    if req.csv {
        out.push_str("n,L,lower,upper,exact\n");
        for r in &rows {
            let (lower, upper) = match &r.report {
                Some(b) => (b.lower.to_string(), format!("{:e}", b.upper())),
                None => (String::new(), String::new()),
            };
            let exact = r.exact.map_or_else(String::new, |e| e.to_string());
            let _ = writeln!(out, "{},{},{lower},{upper},{exact}", r.n, r.read_len);
        }
        return Ok(out);
    }
    let _ = writeln!(
        out,
        "{:>5} {:>4} {:>14} {:>14} {:>10} {:>8} {:>8} {:>8}",
        "n", "L", "lower", "upper", "exact", "lower_ok", "upper_ok", "one_bit"
    );
    for r in &rows {
        let (lower, upper, lower_ok, upper_ok) = match &r.report {
            Some(b) => (fmt_count(b.lower_f64()), fmt_count(b.upper()), b.lower_holds(), b.upper_holds()),
            None => ("-".into(), "-".into(), None, None),
        };
        let exact = r.exact.map_or_else(|| "-".into(), |e| e.to_string());
        let _ = writeln!(
            out,
            "{:>5} {:>4} {lower:>14} {upper:>14} {exact:>10} {:>8} {:>8} {:>8}",
            r.n,
            r.read_len,
            fmt_flag(lower_ok),
            fmt_flag(upper_ok),
            if r.one_bit { "yes" } else { "no" }
        );
    }
    Ok(out)
}

/// Failures as `line N: reason`, one per line.
pub fn describe(failed: &[Failure], unit: &str) -> String {
    failed.iter().map(|(k, e)| format!("{unit} {k}: {e}\n")).collect()
}

pub fn failed_numbers(failed: &[Failure]) -> String {
    failed.iter().map(|(k, _)| k.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn codec_for(regime: Regime, manifest: Option<&Path>, args: &crate::regime::CodeArgs) -> Result<Codec> {
    match manifest {
        Some(path) => {
            let given = [args.n, args.read_len, args.max_gap, args.max_flips];
            ensure!(
                given.iter().all(Option::is_none) && !args.payload,
                "give either --manifest or code parameters, not both"
            );
            Codec::from_manifest(regime, &Manifest::read(path)?)
        }
        None => Codec::build(regime, args),
    }
}
