mod common;

use std::collections::HashSet;

use common::{biased_bits, plant_repeats, random_bits, rng};
use proptest::prelude::*;
use rand::Rng;
use respectra::bits::is_substring_unique;
use respectra::channel::{gap_channel, satisfies_gap_bound, DeletionPattern, GapConfig};
use respectra::exact::{assemble_padded, ExactParams};
use respectra::gap::{assemble_gapped, g_decode, g_encode, g_encode_traced, grr_decode, grr_encode_traced, GapParams};
use respectra::{multispectrum, BitString, Spectrum};

fn params() -> GapParams {
    GapParams::new(256, 2).unwrap()
}

fn message(r: &mut impl Rng, p: &GapParams) -> BitString {
    let bias = r.gen_range(0.05..0.95);
    let base = biased_bits(r, p.message_len(), bias);
    let copies = r.gen_range(0..4);
    plant_repeats(r, &base, p.window(), copies)
}

fn check_grr_output(z: &BitString, p: &GapParams) {
    let (lhat, g) = (p.window(), p.max_gap());
    assert!(is_substring_unique(z, lhat));
    assert_eq!(z.bit(z.len()).unwrap(), 1);
    let end = (lhat + g).min(z.len());
    assert!((lhat..=end).all(|k| z.bit(k).unwrap() == 1));
}

#[test]
fn parameters_at_n_256() {
    let p = params();
    assert_eq!((p.window(), p.read_len(), p.message_len()), (21, 24, 247));
}

#[test]
fn codewords_have_expected_shape() {
    let p = params();
    let mut r = rng(30);
    let mut rounds = 0;
    for _ in 0..200 {
        let x = message(&mut r, &p);
        let (c, trace) = g_encode_traced(&x, &p).unwrap();
        assert_eq!(c.len(), 256);
        assert_eq!(c.substring(1, 3).unwrap().to_string(), "110");
        check_grr_output(&c.strip_trailing_zeros(), &p);
        for round in &trace.rounds {
            let rec = round.record.to_string();
            assert_eq!(rec.len(), p.window() - 1);
            assert!(rec.ends_with("1111"));
        }
        rounds += trace.rounds.len();
        assert_eq!(g_decode(&c, &p).unwrap(), x);
    }
    assert!(rounds > 100, "expected repeat rounds, got {rounds}");
}

#[test]
fn grr_round_trip_with_fixups() {
    let p = params();
    let mut r = rng(31);
    let mut fixups = 0;
    for _ in 0..300 {
        let base = biased_bits(&mut r, 254, 0.7);
        let mut x = plant_repeats(&mut r, &base, 21, 3).into_vec();
        for b in &mut x[20..23] {
            *b = 1;
        }
        *x.last_mut().unwrap() = 1;
        let x = BitString::new(x).unwrap();
        let (z, trace) = grr_encode_traced(&x, &p).unwrap();
        fixups += trace.rounds.iter().filter(|r| r.fixup).count();
        check_grr_output(&z, &p);
        assert_eq!(grr_decode(&z, 254, &p).unwrap(), x);
    }
    assert!(fixups > 0, "no round exercised the window fixup");
}

#[test]
fn unique_message_window_restores_trivially() {
    let p = params();
    let mut x = random_bits(&mut rng(32), p.message_len());
    for k in 21..=23 {
        x.set_bit(k, 1).unwrap();
    }
    let c = g_encode(&x, &p).unwrap();
    assert_eq!(g_decode(&c, &p).unwrap(), x);
}

#[test]
fn full_spectrum_agrees_with_padded_assembly() {
    let p = params();
    let exact = ExactParams::new(256, 24).unwrap();
    let mut r = rng(33);
    for _ in 0..50 {
        let c = g_encode(&message(&mut r, &p), &p).unwrap();
        let m = multispectrum(&c, 24).unwrap();
        assert_eq!(assemble_gapped(&m, &p).unwrap(), c);
        assert_eq!(assemble_padded(&m, &exact).unwrap(), c);
    }
}

#[test]
fn adversarial_and_random_gaps_recover() {
    let p = params();
    let mut r = rng(34);
    for k in 0..40 {
        let c = g_encode(&message(&mut r, &p), &p).unwrap();
        let adversarial = GapConfig { max_gap: 2, pattern: DeletionPattern::Adversarial };
        let (m, _) = gap_channel(&c, 24, &adversarial).unwrap();
        assert_eq!(assemble_gapped(&m, &p).unwrap(), c, "codeword {k}");
        for seed in 0..5 {
            let cfg = GapConfig { max_gap: 2, pattern: DeletionPattern::Random { seed } };
            let (m, _) = gap_channel(&c, 24, &cfg).unwrap();
            assert_eq!(assemble_gapped(&m, &p).unwrap(), c, "codeword {k} seed {seed}");
        }
    }
}

/// Every deletion pattern with gaps of at most `G`, over all positions of a short code.
#[test]
fn every_gap_pattern_recovers_at_toy_length() {
    let p = GapParams::new(40, 1).unwrap();
    let l = p.read_len();
    let total = 40 - l + 1;
    let mut r = rng(35);
    for _ in 0..5 {
        let c = g_encode(&message(&mut r, &p), &p).unwrap();
        let full = multispectrum(&c, l).unwrap();
        let windows: Vec<BitString> = (1..=total).map(|k| c.substring(k, l).unwrap()).collect();
        let mut checked = 0;
        for mask in 0u64..1 << total {
            let kept: Vec<usize> = (1..=total).filter(|k| mask >> (k - 1) & 1 == 1).collect();
            if !satisfies_gap_bound(&kept, total, 1) {
                continue;
            }
            let reads = kept.iter().map(|&k| windows[k - 1].clone()).collect();
            let m = Spectrum::from_reads(l, reads).unwrap();
            assert!(m.is_submultiset_of(&full));
            assert_eq!(assemble_gapped(&m, &p).unwrap(), c);
            checked += 1;
        }
        assert!(checked > 100);
    }
}

#[test]
fn encoding_is_injective() {
    let p = params();
    let mut r = rng(36);
    let mut seen = HashSet::new();
    for _ in 0..20_000 {
        let x = random_bits(&mut r, p.message_len());
        assert!(seen.insert(g_encode(&x, &p).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_through_random_gaps(seed in any::<u64>()) {
        let p = params();
        let mut r = rng(seed);
        let x = message(&mut r, &p);
        let c = g_encode(&x, &p).unwrap();
        let cfg = GapConfig { max_gap: 2, pattern: DeletionPattern::Random { seed } };
        let (m, _) = gap_channel(&c, 24, &cfg).unwrap();
        let y = assemble_gapped(&m, &p).unwrap();
        prop_assert_eq!(g_decode(&y, &p).unwrap(), x);
    }
}
