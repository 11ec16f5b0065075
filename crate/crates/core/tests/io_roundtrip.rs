use proptest::prelude::*;
use scalefree::graphgen::{Graph, SetSystem};
use scalefree::io::{
    format_g17, parse_edgelist, parse_setsystem, parse_spectrum_csv, write_edgelist,
    write_setsystem, write_spectrum_csv,
};
use scalefree::{scale_free_spectrum, DegreeSpectrum, Params, PowerTail, Spectrum, SpectrumKind};

proptest! {
    #[test]
    fn g17_round_trips(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_g17(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn signed_spectrum_round_trips(entries in prop::collection::vec(-1e3f64..1e3, 1..50)) {
        let s = Spectrum::signed(entries).unwrap();
        let back: Spectrum = parse_spectrum_csv(&write_spectrum_csv(&s, &[])).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn probability_spectrum_round_trips(raw in prop::collection::vec(0.0f64..1.0, 1..50)) {
        let total: f64 = raw.iter().sum::<f64>().max(1.0);
        let s = Spectrum::probability(raw.iter().map(|v| v / total).collect()).unwrap();
        let back: Spectrum = parse_spectrum_csv(&write_spectrum_csv(&s, &["note".into()])).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn edgelist_round_trips(n in 1usize..40, pairs in prop::collection::vec((0usize..40, 0usize..40), 0..80)) {
        let edges: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(u, v)| (u % n, v % n))
            .filter(|(u, v)| u != v)
            .collect();
        let g = Graph::from_edges(n, edges).unwrap();
        prop_assert_eq!(parse_edgelist(&write_edgelist(&g)).unwrap(), g);
    }

    #[test]
    fn setsystem_round_trips(
        n in 1usize..30,
        sets in prop::collection::vec(prop::collection::vec(0usize..30, 0..8), 0..20),
    ) {
        let sets: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|s| s.into_iter().map(|v| v % n).collect())
            .collect();
        let f = SetSystem::new(n, sets).unwrap();
        prop_assert_eq!(parse_setsystem(&write_setsystem(&f)).unwrap(), f);
    }
}

#[test]
fn family_with_tail_round_trips() {
    for (beta, k) in [(1.5, 2), (2.5, 3), (3.7, 5)] {
        let s = scale_free_spectrum(&Params::new(beta, k).unwrap(), 30).unwrap();
        let text = write_spectrum_csv(&s, &[]);
        assert!(text.starts_with("degree,frequency\n"));
        assert!(text.contains("# tail beta="));
        let back: Spectrum = parse_spectrum_csv(&text).unwrap();
        assert_eq!(back, s);
    }
    let tail = PowerTail::new(1.5, 1.0, 3);
    let signed = DegreeSpectrum::new(vec![1.0, -0.5, -0.125], SpectrumKind::Signed, Some(tail)).unwrap();
    let back: Spectrum = parse_spectrum_csv(&write_spectrum_csv(&signed, &[])).unwrap();
    assert_eq!(back, signed);
}

#[test]
fn parse_examples() {
    let g = parse_edgelist("0 1\n1 2\n").unwrap();
    assert_eq!(g.n(), 3);
    assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    let f = parse_setsystem("0 1 2\n").unwrap();
    assert_eq!(f.sets(), &[vec![0, 1, 2]]);

    let err = parse_edgelist("0 1\n1 x\n").unwrap_err().to_string();
    assert!(err.contains("line 2"), "{err}");
    let err = parse_setsystem("0 1\n2 -3\n").unwrap_err().to_string();
    assert!(err.contains("line 2"), "{err}");
    let err = parse_spectrum_csv::<f64>("degree,frequency\n0,0.5\nthree,0.5\n")
        .unwrap_err()
        .to_string();
    assert!(err.contains("line 3"), "{err}");
}
