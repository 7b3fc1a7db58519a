use nondense::dimension::{bowen_root, dimension_csv, dimension_sweep, pressure_scaled, sweep_lower_bound};
use nondense::maps::{code_map, slopes_2_4, times_k};
use nondense::pressure::pressure;
use nondense::{EventuallyPeriodicPoint, Error, Potential, Sft, Word};
use proptest::prelude::*;

fn systems() -> Vec<(Sft, Potential)> {
    let mut out: Vec<(Sft, Potential)> = [2, 3, 10].into_iter().map(|k| code_map(&times_k(k)).unwrap()).collect();
    out.push(code_map(&slopes_2_4()).unwrap());
    let full2 = Sft::full_shift(2);
    out.push((full2.clone(), Potential::from_symbol_values(&full2, &[0.5, 2.0]).unwrap()));
    let gm = Sft::golden_mean();
    out.push((gm.clone(), Potential::constant(&gm, 1.0)));
    out
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn times_k_maps_have_full_dimension() {
    for k in [2, 3, 10] {
        let (s, phi) = code_map(&times_k(k)).unwrap();
        let r = bowen_root(&s, &phi).unwrap();
        assert!((r.s_star - 1.0).abs() < 1e-9, "k={k}: {}", r.s_star);
        assert!(r.lo <= r.s_star && r.s_star <= r.hi && r.hi - r.lo <= 1e-10);
        for s_val in [0.0, 0.3, 1.0, 1.7] {
            let p = pressure_scaled(&s, &phi, s_val).unwrap();
            let ln_k = (k as f64).ln();
            assert!((p - (ln_k - s_val * ln_k)).abs() < 1e-12);
        }
    }
}

#[test]
fn middle_third_cantor_levels() {
    let (s, phi) = code_map(&times_k(3)).unwrap();
    let z0 = EventuallyPeriodicPoint::fixed(0);
    let rows = dimension_sweep(&s, &phi, &z0, 7).unwrap();
    assert!((rows[0].1.s_star - 2f64.ln() / 3f64.ln()).abs() < 1e-6);
    assert!(rows[6].1.s_star >= 0.99, "{}", rows[6].1.s_star);
    for w in rows.windows(2) {
        assert!(w[0].1.s_star <= w[1].1.s_star + 1e-12);
    }
    assert_eq!(sweep_lower_bound(&rows), rows[6].1.s_star);
    let csv = dimension_csv(&rows);
    assert_eq!(csv.lines().next(), Some("n,s_star,lo,hi,residual"));
    assert_eq!(csv.lines().count(), 8);
}

#[test]
fn slopes_two_four_root_solves_the_determinant_condition() {
    let (s, phi) = code_map(&slopes_2_4()).unwrap();
    let exact = bisect(|t| 2f64.powf(-t) + 8f64.powf(-t) - 1.0, 0.0, 1.0);
    assert!((exact - 0.5514630897455955).abs() < 1e-14);
    assert!((bowen_root(&s, &phi).unwrap().s_star - exact).abs() < 1e-10);
    // the fixed point 0 of the slope-2 branch: avoiding "0" leaves nothing
    let rows = dimension_sweep(&s, &phi, &EventuallyPeriodicPoint::fixed(0), 4).unwrap();
    assert!(rows[0].1.empty && rows[0].1.s_star == 0.0);
    // avoiding "00" leaves the single orbit (01)^inf
    assert!(rows[1].1.s_star.abs() < 1e-10);
    assert!(rows[3].1.s_star > rows[2].1.s_star);
}

#[test]
fn pressure_scaled_is_strictly_decreasing() {
    for (s, phi) in systems() {
        let root = bowen_root(&s, &phi).unwrap().s_star;
        let grid: Vec<f64> = (0..20).map(|i| 2.0 * root * i as f64 / 19.0).collect();
        let values: Vec<f64> = grid.iter().map(|&t| pressure_scaled(&s, &phi, t).unwrap()).collect();
        for w in values.windows(2) {
            assert!(w[1] < w[0], "{}", s.label());
        }
    }
}

#[test]
fn unit_potential_gives_entropy() {
    for (s, _) in systems() {
        let h = pressure(&s, &Potential::zero(&s)).unwrap().value;
        let r = bowen_root(&s, &Potential::constant(&s, 1.0)).unwrap();
        assert!(r.lo - 1e-12 <= h && h <= r.hi + 1e-12, "{}: {h} not in [{}, {}]", s.label(), r.lo, r.hi);
    }
}

#[test]
fn doubling_phi_halves_the_root() {
    for (s, phi) in systems() {
        let a = bowen_root(&s, &phi).unwrap().s_star;
        let b = bowen_root(&s, &phi.scaled(2.0)).unwrap().s_star;
        assert!((a - 2.0 * b).abs() < 1e-9, "{}: {a} vs 2 * {b}", s.label());
    }
}

#[test]
fn nonpositive_potentials_are_rejected() {
    let s = Sft::full_shift(2);
    let phi = Potential::from_symbol_values(&s, &[1.0, 0.0]).unwrap();
    assert!(matches!(bowen_root(&s, &phi), Err(Error::NonPositivePotential(_))));
    let z0 = EventuallyPeriodicPoint::periodic(Word::from_digits("01")).unwrap();
    assert!(dimension_sweep(&s, &Potential::constant(&s, 1.0), &z0, 3).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn root_scales_inversely(c in 0.1f64..10.0, which in 0usize..6) {
        let (s, phi) = &systems()[which];
        let a = bowen_root(s, phi).unwrap().s_star;
        let b = bowen_root(s, &phi.scaled(c)).unwrap().s_star;
        prop_assert!((a - c * b).abs() < 1e-9 * (1.0 + a));
    }
}
