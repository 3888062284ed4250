//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{all_strings, biased_bits, bits, plant_repeats, random_bits, rng};
use rand::seq::index::sample;
use rand::Rng;
use respectra::bits::{find_repeat, is_substring_unique};
use respectra::bounds::{rll_count, u_bounds};
use respectra::channel::{
    gap_channel, is_reliable, noisy_channel, satisfies_gap_bound, DeletionPattern, GapConfig, NoiseConfig,
    ReadOrigin,
};
use respectra::exact::{assemble_padded, assemble_unique, lr_decode, lr_encode, lr_encode_traced, ExactParams};
use respectra::gap::{assemble_gapped, g_decode, g_encode, GapParams};
use respectra::labeling::{label, unlabel, RllLabeler};
use respectra::noisy::{assemble_noisy_traced, gt_decode, gt_encode, DistanceCode, NoisyParams};
use respectra::primal::{self, plr_decode, plr_encode_traced, InputShaper, PrimalParams};
use respectra::{hamming, multispectrum, BitString, Spectrum};

type Outcome = Result<String, String>;

/// Name, runtime budget, check.
type Criterion = (&'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn spectrum(read_len: usize, reads: &[&str]) -> Spectrum {
    Spectrum::from_reads(read_len, reads.iter().map(|r| bits(r)).collect()).unwrap()
}

fn flipped(x: &BitString, pos: usize, len: usize, flips: &[usize]) -> BitString {
    let mut r = x.substring(pos, len).unwrap();
    for &o in flips {
        let b = r.bit(o).unwrap();
        r.set_bit(o, 1 - b).unwrap();
    }
    r
}

fn worked_examples() -> Outcome {
    let x = bits("00100");
    ensure!(multispectrum(&x, 2).unwrap() == spectrum(2, &["00", "01", "10", "00"]), "2-multispectrum of 00100");
    let (a, b) = (bits("01101"), bits("11011"));
    ensure!(x.period() == 3, "period of 00100 is {}", x.period());
    ensure!(multispectrum(&a, 3).unwrap() == multispectrum(&b, 3).unwrap(), "3-multispectra should agree");
    ensure!(multispectrum(&a, 3).unwrap() == spectrum(3, &["011", "110", "101"]), "3-multispectrum of 01101");
    ensure!(multispectrum(&a, 4).unwrap() == spectrum(4, &["0110", "1101"]), "4-multispectrum of 01101");
    ensure!(multispectrum(&b, 4).unwrap() == spectrum(4, &["1101", "1011"]), "4-multispectrum of 11011");
    ensure!(multispectrum(&a, 4).unwrap() != multispectrum(&b, 4).unwrap(), "4-multispectra should differ");

    let y = bits("10100101");
    ensure!(y.substring(1, 3).unwrap() == y.substring(6, 3).unwrap(), "101 at 1 and 6");
    let r = find_repeat(&y, 3).unwrap();
    ensure!((r.i, r.j) == (2, 5) && !r.overlaps(3), "earliest repeat of 10100101 is {:?}", (r.i, r.j));
    let r = find_repeat(&bits("1010100"), 3).unwrap();
    ensure!((r.i, r.j) == (1, 3) && r.overlaps(3), "overlapping repeat of 1010100 is {:?}", (r.i, r.j));

    let z = bits("0110100");
    let observed = spectrum(4, &["1010", "0100"]);
    ensure!(observed.is_submultiset_of(&multispectrum(&z, 4).unwrap()), "gapped reads are not reads of 0110100");
    ensure!(satisfies_gap_bound(&[3, 4], 4, 2) && !satisfies_gap_bound(&[3, 4], 4, 1), "gap of 0110100 is not 2");

    let w = bits("011010010001");
    let reads = vec![flipped(&w, 1, 7, &[7]), flipped(&w, 4, 7, &[]), flipped(&w, 5, 7, &[])];
    ensure!(reads == vec![bits("0110101"), bits("0100100"), bits("1001000")], "noisy reads {reads:?}");
    let s = Spectrum::from_reads(7, reads).unwrap();
    let trace = vec![
        ReadOrigin { position: 4, flips: vec![] },
        ReadOrigin { position: 1, flips: vec![7] },
        ReadOrigin { position: 5, flips: vec![] },
    ];
    ensure!(satisfies_gap_bound(&[1, 4, 5], 6, 2), "kept positions 1, 4, 5 exceed gap 2");
    ensure!(is_reliable(&w, &s, &trace).unwrap(), "(2,1)-constrained example is not reliable");
    Ok("all examples bit-exact".into())
}

fn exact_params() -> ExactParams {
    ExactParams::new(64, 16).unwrap()
}

fn exact_round_trips() -> Outcome {
    let p = exact_params();
    let w = p.read_len() - 1;
    let mut r = rng(1001);
    let mut rounds = 0;
    for k in 0..500 {
        let x = if k % 2 == 0 {
            random_bits(&mut r, p.message_len())
        } else {
            let bias = r.gen_range(0.05..0.95);
            let base = biased_bits(&mut r, p.message_len(), bias);
            plant_repeats(&mut r, &base, w, k % 4)
        };
        let (c, trace) = lr_encode_traced(&x, &p).unwrap();
        rounds += trace.rounds.len();
        ensure!(c.len() == p.n(), "input {k}: codeword length {}", c.len());
        let z = c.strip_trailing_zeros();
        ensure!(is_substring_unique(&z, w), "input {k}: encoder output has a repeated {w}-window");
        ensure!(z.len() >= w && z.bit(w).unwrap() == 1, "input {k}: bit {w} not set");
        ensure!(z.bit(z.len()).unwrap() == 1, "input {k}: encoder output does not end in 1");
        let m = multispectrum(&c, p.read_len()).unwrap();
        ensure!(assemble_padded(&m, &p).unwrap() == c, "input {k}: assembly differs");
        ensure!(lr_decode(&c, &p).unwrap() == x, "input {k}: decode differs");
    }
    Ok(format!("500/500 round trips, {rounds} replacement rounds"))
}

fn exact_redundancy() -> Outcome {
    let p = exact_params();
    ensure!(p.n() - p.message_len() == 2, "redundancy {}", p.n() - p.message_len());
    let mut r = rng(1002);
    let mut inputs = HashSet::new();
    let mut outputs = HashSet::new();
    for k in 0..100_000 {
        let x = if k % 4 == 0 {
            let base = biased_bits(&mut r, p.message_len(), 0.85);
            plant_repeats(&mut r, &base, 15, 2)
        } else {
            random_bits(&mut r, p.message_len())
        };
        if inputs.insert(x.clone()) {
            outputs.insert(lr_encode(&x, &p).unwrap());
        }
    }
    ensure!(inputs.len() == outputs.len(), "{} inputs map to {} codewords", inputs.len(), outputs.len());
    Ok(format!("62 -> 64 bits, {} distinct inputs, no collisions", inputs.len()))
}

fn exhaustive_small_assembly() -> Outcome {
    let mut checked = 0;
    for len in 6..=12 {
        for x in all_strings(len).filter(|x| is_substring_unique(x, 5)) {
            ensure!(assemble_unique(&multispectrum(&x, 6).unwrap()).unwrap() == x, "{x} does not reassemble");
            checked += 1;
        }
    }
    Ok(format!("{checked} 5-unique strings reassembled"))
}

fn bounds_sandwich() -> Outcome {
    let mut lower_violations = Vec::new();
    let mut upper_violations = Vec::new();
    let mut pairs = 0;
    for n in 2..=16 {
        for l in 2..=n {
            let b = u_bounds(n, l).unwrap();
            if b.is_vacuous() {
                continue;
            }
            let b = b.enumerated().unwrap();
            pairs += 1;
            if b.lower_holds() == Some(false) {
                lower_violations.push((n, l, b.exact_count.unwrap()));
            }
            if b.upper_holds() == Some(false) {
                upper_violations.push((n, l));
            }
        }
    }
    println!("    upper-bound violations (advisory): {upper_violations:?}");
    ensure!(
        lower_violations.is_empty(),
        "{} of {pairs} pairs fall below the lower bound (n, L, count): {lower_violations:?}",
        lower_violations.len()
    );
    Ok(format!("{pairs} pairs at or above the lower bound"))
}

fn primal_regime() -> Outcome {
    let (n, l) = (1024, 26);
    let p = PrimalParams::new(n, l).unwrap();
    let shaper = InputShaper::new(n - 3).unwrap();
    let b = shaper.block_len();
    let mut r = rng(1006);
    let mut rounds = 0;
    for k in 0..200 {
        let payload = random_bits(&mut r, shaper.capacity_bits());
        let mut v = shaper.shape(&payload).unwrap().into_vec();
        for _ in 0..k % 4 {
            let span = r.gen_range(2..6);
            let from = r.gen_range(0..shaper.blocks() - span);
            let to = r.gen_range(0..shaper.blocks() - span);
            let chunk = v[from * b..(from + span) * b].to_vec();
            v[to * b..(to + span) * b].copy_from_slice(&chunk);
        }
        let x = BitString::new(v).unwrap();
        let (c, trace) = plr_encode_traced(&x, &p).unwrap();
        rounds += trace.rounds.len();
        let z = c.strip_trailing_zeros();
        ensure!(is_substring_unique(&z, l - 1), "input {k}: output has a repeated {}-window", l - 1);
        let m = multispectrum(&c, l).unwrap();
        ensure!(primal::assemble(&m, &p).unwrap() == c, "input {k}: assembly differs");
        ensure!(plr_decode(&c, &p).unwrap() == x, "input {k}: decode differs");
        if k % 4 == 0 {
            ensure!(shaper.extract(&x).unwrap() == payload, "input {k}: payload not recovered");
        }
    }
    Ok(format!("200/200 inputs, {rounds} replacement rounds"))
}

fn gap_regime() -> Outcome {
    let p = GapParams::new(256, 2).unwrap();
    ensure!(p.read_len() == 24, "read length {}", p.read_len());
    ensure!(p.n() - p.message_len() == 9, "redundancy {}", p.n() - p.message_len());
    let mut r = rng(1007);
    let mut assemblies = 0;
    for k in 0..200 {
        let bias = r.gen_range(0.05..0.95);
        let base = biased_bits(&mut r, p.message_len(), bias);
        let copies = r.gen_range(0..4);
        let x = plant_repeats(&mut r, &base, p.window(), copies);
        let c = g_encode(&x, &p).unwrap();
        ensure!(g_decode(&c, &p).unwrap() == x, "codeword {k}: decode differs");
        let patterns = std::iter::once(DeletionPattern::Adversarial)
            .chain((0..20).map(|s| DeletionPattern::Random { seed: 1000 * k + s }));
        for pattern in patterns {
            let (m, _) = gap_channel(&c, 24, &GapConfig { max_gap: 2, pattern }).unwrap();
            ensure!(assemble_gapped(&m, &p).ok() == Some(c.clone()), "codeword {k}: {pattern:?} fails");
            assemblies += 1;
        }
    }
    Ok(format!("{assemblies}/{assemblies} gapped assemblies, redundancy 9"))
}

fn noisy_message(r: &mut impl Rng, p: &NoisyParams, zero_blocks: usize, near_copies: usize) -> BitString {
    let lt = p.window();
    let mut v = random_bits(r, p.message_len()).into_vec();
    for _ in 0..zero_blocks {
        let len = r.gen_range(lt..lt + 20).min(v.len());
        let at = r.gen_range(0..=v.len() - len);
        v[at..at + len].iter_mut().for_each(|b| *b = 0);
    }
    for _ in 0..near_copies {
        let from = r.gen_range(0..v.len() - lt);
        let to = r.gen_range(0..=v.len() - lt);
        let chunk = v[from..from + lt].to_vec();
        v[to..to + lt].copy_from_slice(&chunk);
        let flips = r.gen_range(0..=6);
        for k in sample(r, lt, flips) {
            v[to + k] ^= 1;
        }
    }
    BitString::new(v).unwrap()
}

fn noisy_regime() -> Outcome {
    let p = NoisyParams::new(NoisyParams::min_code_len(1, 1).unwrap(), 1, 1).unwrap();
    let (t, l, lt) = (p.max_flips(), p.read_len(), p.window());
    ensure!(l == 3 * lt && l <= p.n(), "read length {l}, window {lt}, n {}", p.n());
    let mut r = rng(1008);
    for k in 0..50u64 {
        let x = noisy_message(&mut r, &p, (k % 3) as usize, (k % 4) as usize);
        let c = gt_encode(&x, &p).unwrap();
        ensure!(gt_decode(&c, &p).unwrap() == x, "codeword {k}: decode differs");
        let end = c.strip_trailing_zeros().len();
        for s in 0..5u64 {
            let pattern = if s == 0 { DeletionPattern::Adversarial } else { DeletionPattern::Random { seed: 100 * k + s } };
            let cfg = NoiseConfig {
                gap: GapConfig { max_gap: 1, pattern },
                max_flips: t,
                exact_flips: s % 2 == 0,
                seed: 10 * k + s,
                reliable: true,
            };
            let (m, trace) = noisy_channel(&c, l, &cfg).unwrap();
            ensure!(is_reliable(&c, &m, &trace).unwrap(), "codeword {k} spectrum {s}: unreliable");
            let (y, phases) = assemble_noisy_traced(&m, &p).map_err(|e| format!("codeword {k} spectrum {s}: {e}"))?;
            ensure!(y == c, "codeword {k} spectrum {s}: wrong codeword");
            let prefix = &phases.after_prefix;
            let d = hamming(prefix, &c.substring(1, prefix.len()).unwrap()).unwrap();
            ensure!(d <= t, "codeword {k} spectrum {s}: prefix off by {d}");
            for est in &phases.extensions {
                let upto = est.len().min(c.len());
                for a in 1..=(upto + 1).saturating_sub(l) {
                    let d = hamming(&est.substring(a, l).unwrap(), &c.substring(a, l).unwrap()).unwrap();
                    ensure!(d <= 5 * t, "codeword {k} spectrum {s}: window {a} off by {d}");
                }
            }
            let fixed = &phases.after_majority;
            ensure!(
                fixed.len() == end && fixed.substring(1, end - l + 1).unwrap() == c.substring(1, end - l + 1).unwrap(),
                "codeword {k} spectrum {s}: majority pass inexact"
            );
        }
    }
    Ok(format!("250/250 spectra at n = {}, L = {l}", p.n()))
}

fn distance_code() -> Outcome {
    let p = NoisyParams::new(NoisyParams::min_code_len(1, 1).unwrap(), 1, 1).unwrap();
    let tau = p.correctable();
    let mut r = rng(1009);
    for (name, code) in [("suffix", p.suffix_code()), ("length", p.length_code())] {
        ensure!(code.correctable() >= tau, "{name} code corrects {}", code.correctable());
        for trial in 0..1000 {
            let word = code.encode(&random_bits(&mut r, code.message_len())).unwrap();
            let mut noisy = word.as_slice().to_vec();
            let errors = r.gen_range(0..=tau);
            for k in sample(&mut r, noisy.len(), errors) {
                noisy[k] ^= 1;
            }
            let decoded = code.decode(&BitString::new(noisy).unwrap());
            ensure!(decoded.ok() == Some(word), "{name} code trial {trial}: {errors} errors not corrected");
        }
    }
    for correctable in 1..=3 {
        let code = DistanceCode::for_length(15, correctable).unwrap();
        let k = code.message_len();
        let words: Vec<BitString> =
            (0u64..1 << k).map(|v| code.encode(&BitString::from_uint(v, k).unwrap()).unwrap()).collect();
        let min = (0..words.len())
            .flat_map(|a| (a + 1..words.len()).map(move |b| (a, b)))
            .map(|(a, b)| hamming(&words[a], &words[b]).unwrap())
            .min()
            .unwrap();
        ensure!(min > 2 * correctable, "length-15 code for {correctable} errors has distance {min}");
    }
    Ok(format!("2000 trials with up to {tau} errors, toy distances verified"))
}

fn labeling() -> Outcome {
    for n in [64, 256, 1024] {
        let labeler = RllLabeler::new(n).unwrap();
        let mut seen = HashSet::new();
        for k in 1..=n {
            let b = labeler.label(k).unwrap();
            ensure!(b.max_zero_run() < labeler.forbidden_run(), "n = {n}, label {k} = {b} has a long zero run");
            ensure!(labeler.unlabel(&b).unwrap() == k, "n = {n}, label {k} does not invert");
            ensure!(seen.insert(b), "n = {n}, label {k} repeats");
            ensure!(unlabel(&label(k, n).unwrap(), n).unwrap() == k, "n = {n}, plain label {k} does not invert");
        }
    }
    for width in 1..=16 {
        let mut by_run = vec![0u128; width + 1];
        for s in all_strings(width) {
            by_run[s.max_zero_run()] += 1;
        }
        let mut cumulative = 0;
        for (max_run, count) in by_run.iter().enumerate() {
            cumulative += count;
            ensure!(rll_count(width, max_run).unwrap() == cumulative, "rll_count({width}, {max_run})");
        }
    }
    Ok("labels bijective and run-limited, rll_count matches brute force".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("worked examples", Duration::from_secs(1), worked_examples),
        ("exact regime round trip, n = 64", Duration::from_secs(30), exact_round_trips),
        ("exact regime redundancy and injectivity", Duration::from_secs(60), exact_redundancy),
        ("exhaustive assembly of 5-unique strings", Duration::from_secs(60), exhaustive_small_assembly),
        ("bounds on unique-window string counts", Duration::from_secs(600), bounds_sandwich),
        ("primal regime, n = 1024", Duration::from_secs(300), primal_regime),
        ("gap regime, n = 256, G = 2", Duration::from_secs(300), gap_regime),
        ("noisy regime at desk scale", Duration::from_secs(900), noisy_regime),
        ("distance code", Duration::from_secs(60), distance_code),
        ("position labels", Duration::from_secs(30), labeling),
    ];
    let mut failed = Vec::new();
    for (k, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| Err(format!("panicked: {}", panic_message(e.as_ref()))));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed > budget {
                Err(format!("{detail}; took {elapsed:.1?}, budget {budget:?}"))
            } else {
                Ok(detail)
            }
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", k + 1),
            Err(reason) => {
                println!("FAIL {:>2} {name}: {reason} ({elapsed:.2?})", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed {failed:?}");
        ExitCode::FAILURE
    }
}

fn panic_message(e: &(dyn std::any::Any + Send)) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown panic".into())
}
