mod common;

use common::{bits, random_bits, rng};
use proptest::prelude::*;
use respectra::channel::{
    gap_channel, is_reliable, kept_positions, noisy_channel, parse_trace, satisfies_gap_bound, trace_to_text,
    DeletionPattern, GapConfig, NoiseConfig, ReadOrigin,
};
use respectra::{multispectrum, set_spectrum, BitString, Spectrum};

fn spectrum(read_len: usize, reads: &[&str]) -> Spectrum {
    Spectrum::from_reads(read_len, reads.iter().map(|r| bits(r)).collect()).unwrap()
}

#[test]
fn multispectrum_examples() {
    let x = bits("00100");
    assert_eq!(multispectrum(&x, 2).unwrap(), spectrum(2, &["00", "01", "10", "00"]));
    assert_eq!(multispectrum(&bits("01101"), 3).unwrap(), multispectrum(&bits("11011"), 3).unwrap());
    assert_ne!(multispectrum(&bits("01101"), 4).unwrap(), multispectrum(&bits("11011"), 4).unwrap());
    assert_eq!(multispectrum(&x, 5).unwrap(), spectrum(5, &["00100"]));
    assert!(multispectrum(&x, 6).is_err());
}

#[test]
fn set_spectrum_examples() {
    let set: Vec<BitString> = set_spectrum(&bits("00100"), 2).unwrap().into_iter().collect();
    assert_eq!(set, vec![bits("00"), bits("01"), bits("10")]);
    assert_eq!(set_spectrum(&bits("111"), 1).unwrap().len(), 1);
}

#[test]
fn gapped_example_has_gap_two() {
    let x = bits("0110100");
    let full = multispectrum(&x, 4).unwrap();
    let observed = spectrum(4, &["1010", "0100"]);
    assert!(observed.is_submultiset_of(&full));
    assert!(satisfies_gap_bound(&[3, 4], 4, 2));
    assert!(!satisfies_gap_bound(&[3, 4], 4, 1));
}

fn flipped(x: &BitString, pos: usize, len: usize, flips: &[usize]) -> BitString {
    let mut r = x.substring(pos, len).unwrap();
    for &o in flips {
        let b = r.bit(o).unwrap();
        r.set_bit(o, 1 - b).unwrap();
    }
    r
}

#[test]
fn noisy_example_with_short_reads_is_constrained_but_tied() {
    let x = bits("0110100");
    let reads = vec![flipped(&x, 3, 4, &[2]), flipped(&x, 4, 4, &[2])];
    assert_eq!(reads, vec![bits("1110"), bits("0000")]);
    let s = Spectrum::from_reads(4, reads).unwrap();
    let trace = vec![ReadOrigin { position: 4, flips: vec![2] }, ReadOrigin { position: 3, flips: vec![2] }];
    // Sorted order puts 0000 (from position 4) first.
    assert_eq!(s.reads()[0], bits("0000"));
    assert!(satisfies_gap_bound(&[3, 4], 4, 2));
    assert!(trace.iter().all(|o| o.flips.len() <= 1));
    // x_4 and x_5 each have one correct and one flipped copy.
    assert!(!is_reliable(&x, &s, &trace).unwrap());
}

#[test]
fn noisy_example_with_long_reads_is_reliable() {
    let x = bits("011010010001");
    let reads = vec![flipped(&x, 1, 7, &[7]), flipped(&x, 4, 7, &[]), flipped(&x, 5, 7, &[])];
    assert_eq!(reads, vec![bits("0110101"), bits("0100100"), bits("1001000")]);
    assert!(satisfies_gap_bound(&[1, 4, 5], 6, 2));
    let s = Spectrum::from_reads(7, reads).unwrap();
    let trace = vec![
        ReadOrigin { position: 4, flips: vec![] },
        ReadOrigin { position: 1, flips: vec![7] },
        ReadOrigin { position: 5, flips: vec![] },
    ];
    assert_eq!(s.reads()[0], bits("0100100"));
    assert_eq!(s.reads()[1], bits("0110101"));
    assert!(is_reliable(&x, &s, &trace).unwrap());
}

#[test]
fn single_flipped_cover_is_unreliable() {
    let x = bits("0110");
    let s = spectrum(4, &["0111"]);
    assert!(!is_reliable(&x, &s, &vec![ReadOrigin { position: 1, flips: vec![4] }]).unwrap());
    let wrong = vec![ReadOrigin { position: 1, flips: vec![] }];
    assert!(is_reliable(&x, &s, &wrong).is_err());
}

#[test]
fn adversarial_pattern_with_gap_one_keeps_half() {
    let mut r = rng(1);
    for len in 10..40 {
        let x = random_bits(&mut r, len);
        let cfg = GapConfig { max_gap: 1, pattern: DeletionPattern::Adversarial };
        let (s, trace) = gap_channel(&x, 5, &cfg).unwrap();
        assert_eq!(s.len(), (len - 5 + 1).div_ceil(2));
        assert_eq!(trace.len(), s.len());
    }
}

#[test]
fn zero_gap_keeps_everything() {
    let x = random_bits(&mut rng(2), 50);
    for pattern in [DeletionPattern::Adversarial, DeletionPattern::Random { seed: 3 }] {
        let (s, _) = gap_channel(&x, 8, &GapConfig { max_gap: 0, pattern }).unwrap();
        assert_eq!(s, multispectrum(&x, 8).unwrap());
    }
}

#[test]
fn zero_flips_match_the_deletion_channel() {
    let x = random_bits(&mut rng(4), 60);
    let gap = GapConfig { max_gap: 2, pattern: DeletionPattern::Random { seed: 9 } };
    let cfg = NoiseConfig { gap, max_flips: 0, exact_flips: false, seed: 5, reliable: true };
    assert_eq!(noisy_channel(&x, 10, &cfg).unwrap().0, gap_channel(&x, 10, &gap).unwrap().0);
}

proptest! {
    #[test]
    fn spectrum_text_round_trips(seed in any::<u64>(), len in 1usize..60, l in 1usize..10) {
        let x = random_bits(&mut rng(seed), len.max(l));
        let s = multispectrum(&x, l).unwrap();
        prop_assert_eq!(s.len(), x.len() - l + 1);
        prop_assert_eq!(Spectrum::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn gap_channel_output_is_a_bounded_gap_subspectrum(seed in any::<u64>(), g in 0usize..5) {
        let x = random_bits(&mut rng(seed), 80);
        let cfg = GapConfig { max_gap: g, pattern: DeletionPattern::Random { seed } };
        let (s, trace) = gap_channel(&x, 12, &cfg).unwrap();
        prop_assert!(s.is_submultiset_of(&multispectrum(&x, 12).unwrap()));
        let mut positions: Vec<usize> = trace.iter().map(|o| o.position).collect();
        positions.sort_unstable();
        prop_assert!(satisfies_gap_bound(&positions, 69, g));
        prop_assert_eq!(positions, kept_positions(69, &cfg));
    }

    #[test]
    fn reliable_noisy_channel_is_reliable(seed in any::<u64>(), g in 0usize..3, t in 0usize..3) {
        let x = random_bits(&mut rng(seed), 90);
        let gap = GapConfig { max_gap: g, pattern: DeletionPattern::Random { seed: seed ^ 7 } };
        let cfg = NoiseConfig { gap, max_flips: t, exact_flips: false, seed, reliable: true };
        let (s, trace) = noisy_channel(&x, 30, &cfg).unwrap();
        prop_assert!(is_reliable(&x, &s, &trace).unwrap());
        prop_assert!(trace.iter().all(|o| o.flips.len() <= t));
        prop_assert_eq!(parse_trace(&trace_to_text(&trace)).unwrap(), trace);
    }
}
