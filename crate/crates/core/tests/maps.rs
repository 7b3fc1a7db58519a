use nondense::avoidance::avoidance_subshift;
use nondense::dimension::{bowen_root, dimension_sweep};
use nondense::maps::{code_map, parse_rational, point_to_symbols, rational, slopes_2_4, times_k, Branch, PiecewiseLinearMarkovMap, Rational};
use nondense::{EventuallyPeriodicPoint, Symbol, Word};
use num_traits::{ToPrimitive, Zero};

/// Cylinder intervals of depth `n` with their itineraries, built by pulling
/// intervals back through the branches; no use of the coded subshift.
fn cylinders(map: &PiecewiseLinearMarkovMap, n: usize) -> Vec<(Rational, Rational, Vec<Symbol>)> {
    let mut level: Vec<(Rational, Rational, Vec<Symbol>)> = map
        .branches()
        .iter()
        .enumerate()
        .map(|(i, b)| (b.domain.0.clone(), b.domain.1.clone(), vec![i as Symbol]))
        .collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for (i, b) in map.branches().iter().enumerate() {
            let (lo, hi) = b.image();
            for (a, c, w) in &level {
                if &lo <= a && c <= &hi {
                    let p = inverse(b, a);
                    let q = inverse(b, c);
                    let (p, q) = if p <= q { (p, q) } else { (q, p) };
                    let mut v = vec![i as Symbol];
                    v.extend_from_slice(w);
                    next.push((p, q, v));
                }
            }
        }
        level = next;
    }
    level
}

fn inverse(b: &Branch, y: &Rational) -> Rational {
    &b.domain.0 + (y - &b.left_value) / &b.slope
}

fn log_lengths(cyl: &[(Rational, Rational, Vec<Symbol>)], avoid: &[Symbol]) -> Vec<f64> {
    cyl.iter()
        .filter(|(_, _, w)| avoid.is_empty() || !w.windows(avoid.len()).any(|x| x == avoid))
        .map(|(a, b, _)| (b - a).to_f64().unwrap().ln())
        .collect()
}

/// The `s` at which covering sums of consecutive depths agree.
fn ratio_dimension(map: &PiecewiseLinearMarkovMap, depth: usize, avoid: &[Symbol]) -> f64 {
    let fine = log_lengths(&cylinders(map, depth), avoid);
    let coarse = log_lengths(&cylinders(map, depth - 1), avoid);
    let sum = |v: &[f64], s: f64| v.iter().map(|l| (s * l).exp()).sum::<f64>();
    let (mut lo, mut hi) = (0.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sum(&fine, mid) > sum(&coarse, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn coded_word_counts_match_inverse_branches() {
    for map in [times_k(2), times_k(3), slopes_2_4()] {
        let (s, _) = code_map(&map).unwrap();
        for n in 1..=6 {
            let cyl = cylinders(&map, n);
            assert_eq!(cyl.len() as u128, s.count_words(n), "{} n={n}", map.label());
            for (_, _, w) in &cyl {
                assert!(s.is_admissible(w));
            }
        }
    }
}

#[test]
fn cylinder_lengths_follow_the_potential() {
    let map = slopes_2_4();
    let (s, phi) = code_map(&map).unwrap();
    for (a, b, w) in cylinders(&map, 6) {
        let l = (&b - &a).to_f64().unwrap().ln();
        // |I_w| = |J_{w_last}| exp(-S_{n-1} phi)
        let last = &map.branches()[*w.last().unwrap() as usize];
        let base = (&last.domain.1 - &last.domain.0).to_f64().unwrap().ln();
        let sum = phi.birkhoff_sum(&s, &w[..w.len() - 1]).unwrap();
        assert!((l - (base - sum)).abs() < 1e-12);
    }
}

#[test]
fn box_counting_agrees_with_bowen_roots() {
    let map = slopes_2_4();
    let (s, phi) = code_map(&map).unwrap();
    let full = bowen_root(&s, &phi).unwrap().s_star;
    let boxed = ratio_dimension(&map, 10, &[]);
    assert!((boxed - full).abs() < 1e-3, "{boxed} vs {full}");

    let z0 = EventuallyPeriodicPoint::fixed(0);
    let rows = dimension_sweep(&s, &phi, &z0, 4).unwrap();
    let boxed = ratio_dimension(&map, 20, &[0, 0, 0, 0]);
    assert!((boxed - rows[3].1.s_star).abs() < 1e-4, "{boxed} vs {}", rows[3].1.s_star);

    let tri = times_k(3);
    let (s3, phi3) = code_map(&tri).unwrap();
    let row = dimension_sweep(&s3, &phi3, &z0, 1).unwrap()[0].1;
    assert!((ratio_dimension(&tri, 8, &[0]) - row.s_star).abs() < 1e-9);
}

#[test]
fn itineraries_land_in_their_cylinders() {
    let map = slopes_2_4();
    for (a, b, w) in cylinders(&map, 5) {
        let mid = (&a + &b) / rational(2, 1);
        assert_eq!(point_to_symbols(&map, &mid, 5).unwrap().symbols(), &w[..]);
    }
}

#[test]
fn itinerary_errors() {
    assert!(point_to_symbols(&times_k(2), &rational(1, 2), 2).is_err());
    assert!(point_to_symbols(&slopes_2_4(), &rational(3, 4), 1).is_err());
    assert_eq!(point_to_symbols(&times_k(2), &rational(1, 3), 4).unwrap(), Word::from_digits("0101"));
    assert_eq!(point_to_symbols(&times_k(3), &Rational::zero(), 5).unwrap(), Word::from_digits("00000"));
}

#[test]
fn gapped_domains_and_reversed_slopes() {
    // tent-like map with a negative branch
    let tent = PiecewiseLinearMarkovMap::new(
        vec![
            Branch::new(rational(0, 1), rational(1, 2), rational(2, 1), Rational::zero()),
            Branch::new(rational(1, 2), rational(1, 1), rational(-2, 1), rational(1, 1)),
        ],
        "tent",
    )
    .unwrap();
    let (s, phi) = code_map(&tent).unwrap();
    assert_eq!(s.transition_count(), 4);
    assert!((bowen_root(&s, &phi).unwrap().s_star - 1.0).abs() < 1e-9);
    assert_eq!(cylinders(&tent, 5).len(), 32);
    assert!(avoidance_subshift(&s, &EventuallyPeriodicPoint::fixed(0), 2).is_ok());
    assert_eq!(parse_rational("-3/6").unwrap(), rational(-1, 2));
}
