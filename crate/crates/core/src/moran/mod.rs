//! The Moran-type construction behind `P(E(z0), phi) >= C - 4 eta`, executed
//! on finite levels of a mixing SFT.
//!
//! Separated families `S_k` (all admissible `n_k`-words) are split into
//! `M`-blocks with a visit to `y` between blocks, the resulting segments are
//! concatenated with `m`-connectors according to the times `t_k`, and the
//! atomic measures `mu_k` are weighted by `exp S_n phi`. Every estimate of the
//! construction is then checked exhaustively on the built levels.

mod checks;
mod family;
mod points;
mod report;
mod schedule;

pub use checks::{
    ball_bound_lines, build_measure, check_avoidance, check_ball_bound, check_cardinality,
    check_prefix_consistency, check_separation, measure_line, AtomicMeasure, BallBoundReport,
    MASS_TOL,
};
pub use family::{build_family, family_log_mass, interleave_with_y, Connectors, SeparatedFamily};
pub use points::{bits_per_symbol, build_points, point_count, PointSet, SortedPoints, MAX_POINTS};
pub use report::{CheckLine, MoranReport, Status, REPORT_FORMAT};
pub use schedule::{BlockKind, MoranSchedule};

use crate::avoidance::{avoidance_subshift, is_transitive_point, level_pressure, MAX_LEVEL_BLOCKS};
use crate::error::Result;
use crate::potential::Potential;
use crate::pressure::pressure;
use crate::symbolic::{EventuallyPeriodicPoint, Sft, SymbolicMetric};

/// Constants of the construction; `eps = 2^-e`, `eps0 = 2^-e0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MoranParams {
    pub e: u32,
    pub e0: u32,
    pub eta: f64,
    pub c: f64,
    pub big_m: usize,
    pub m: usize,
    pub n_seq: Vec<usize>,
    pub big_n_seq: Vec<usize>,
    pub y: EventuallyPeriodicPoint,
    pub z0: EventuallyPeriodicPoint,
}

impl MoranParams {
    pub fn certificate_value(&self) -> f64 {
        self.c - 4.0 * self.eta
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Add `z0`'s own prefix to every avoidance scan; the scan must then fail.
    pub inject_adversarial: bool,
}

pub(crate) fn neumaier_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub(crate) fn neumaier_log_sum_exp(logs: &[f64]) -> f64 {
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    let scaled: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    top + neumaier_sum(&scaled).ln()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub lines: Vec<CheckLine>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        !self.lines.iter().any(CheckLine::failed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| l.failed())
    }
}

/// Smallest `M` with `2m(C + ||phi||)/(M + 2m) < eta`.
pub fn minimal_block_length(c: f64, norm: f64, m: usize, eta: f64) -> usize {
    let need = 2.0 * m as f64 * (c + norm) / eta - 2.0 * m as f64;
    let mut big_m = need.max(0.0).floor() as usize;
    while 2.0 * m as f64 * (c + norm) / (big_m + 2 * m) as f64 >= eta {
        big_m += 1;
    }
    big_m.max(1)
}

/// Checks every standing hypothesis of the construction, naming the violated quantity.
pub fn validate_params(params: &MoranParams, sft: &Sft, phi: &Potential) -> ValidationReport {
    let mut lines = Vec::new();
    let mut push = |name: &str, ok: bool, detail: String| lines.push(CheckLine::new(name, Status::from(ok), detail));

    let alphabet_ok = phi.alphabet() == sft.size();
    push(
        "potential alphabet",
        alphabet_ok,
        format!("potential on {} symbols, subshift on {}", phi.alphabet(), sft.size()),
    );
    push("potential depth", phi.depth() == 1, format!("depth {} (the construction needs 1)", phi.depth()));

    let seq_ok = !params.n_seq.is_empty()
        && params.n_seq.len() == params.big_n_seq.len()
        && !params.n_seq.contains(&0)
        && params.big_n_seq.first().is_some_and(|&n| n > 0)
        && params.big_n_seq.windows(2).all(|w| w[0] < w[1]);
    push(
        "sequences",
        seq_ok,
        format!(
            "n = {:?}, N = {:?} (equal lengths, positive, N strictly increasing)",
            params.n_seq, params.big_n_seq
        ),
    );
    let n1 = params.n_seq.first().copied().unwrap_or(0);
    push("n_1 > M", n1 > params.big_m, format!("n_1 = {n1}, M = {}", params.big_m));
    push("M, m positive", params.big_m > 0 && params.m > 0, format!("M = {}, m = {}", params.big_m, params.m));

    let z0_ok = params.z0.is_admissible_in(sft);
    let y_ok = params.y.is_admissible_in(sft);
    push("z0 admissible", z0_ok, format!("z0 = {}", params.z0));
    push("y admissible", y_ok, format!("y = {}", params.y));
    if z0_ok {
        match is_transitive_point(sft, &params.z0) {
            Ok(t) => push(
                "z0 non-transitive",
                !t,
                if t {
                    format!("the orbit of {} is dense", params.z0)
                } else {
                    format!("the orbit closure of {} is a proper subset", params.z0)
                },
            ),
            Err(e) => push("z0 non-transitive", false, e.to_string()),
        }
    }

    let eps = SymbolicMetric::radius(params.e);
    let eps0 = SymbolicMetric::radius(params.e0);
    push("eps < 1/9", eps < 1.0 / 9.0, format!("eps = 2^-{} = {eps}", params.e));
    push("eps < eps0", params.e > params.e0, format!("eps = 2^-{}, eps0 = 2^-{}", params.e, params.e0));
    if z0_ok && y_ok {
        let d = SymbolicMetric::orbit_distance(&params.y, &params.z0);
        push(
            "d(y, O(z0)) >= 2 eps0",
            d >= 2.0 * eps0,
            format!("d(y, O(z0)) = {d}, 2 eps0 = {}", 2.0 * eps0),
        );
    }

    let norm = phi.sup_norm();
    if alphabet_ok {
        match phi.variation(sft, params.e.saturating_sub(1)) {
            Ok(v) => push(
                "Var(phi, 2 eps) < eta",
                params.e >= 1 && v < params.eta,
                format!("Var(phi, 2^-{}) = {v}, eta = {}", params.e.saturating_sub(1), params.eta),
            ),
            Err(e) => push("Var(phi, 2 eps) < eta", false, e.to_string()),
        }
    }
    let block_ratio = 2.0 * params.m as f64 * (params.c + norm) / (params.big_m + 2 * params.m) as f64;
    push(
        "block length 2m(C + ||phi||)/(M + 2m) < eta",
        block_ratio < params.eta,
        format!(
            "2*{m}*({c} + {norm})/({bm} + 2*{m}) = {block_ratio}, eta = {eta}; smallest admissible M is {min}",
            m = params.m,
            c = params.c,
            bm = params.big_m,
            eta = params.eta,
            min = minimal_block_length(params.c, norm, params.m.max(1), params.eta),
        ),
    );
    if alphabet_ok {
        match pressure(sft, phi) {
            Ok(p) => push(
                "C < P_top(phi)",
                params.c < p.value - p.error_bound,
                format!("C = {}, P_top(phi) = {} (bracket width {})", params.c, p.value, p.error_bound),
            ),
            Err(e) => push("C < P_top(phi)", false, e.to_string()),
        }
    }
    match sft.primitivity_gap() {
        Ok(g) => push(
            "specification gap",
            params.m + 1 >= g,
            format!("A^{g} > 0, connectors of length m = {} need m + 1 >= {g}", params.m),
        ),
        Err(e) => push("specification gap", false, e.to_string()),
    }
    if alphabet_ok && phi.depth() == 1 {
        for (k, &n) in params.n_seq.iter().enumerate() {
            let target = n as f64 * (params.c - params.eta);
            match family_log_mass(sft, phi, n) {
                Ok(lm) => push(
                    &format!("M_{} >= exp(n_{}(C - eta))", k + 1, k + 1),
                    lm >= target,
                    format!("log M_{} = {lm}, n_{}(C - eta) = {target}", k + 1, k + 1),
                ),
                Err(e) => push(&format!("M_{} >= exp(n_{}(C - eta))", k + 1, k + 1), false, e.to_string()),
            }
        }
    }
    ValidationReport { lines }
}

/// `C - 4 eta` when no check failed.
pub fn pdp_certificate(lines: &[CheckLine], params: &MoranParams) -> Option<f64> {
    if lines.iter().any(CheckLine::failed) {
        None
    } else {
        Some(params.certificate_value())
    }
}

fn header(params: &MoranParams, sft: &Sft, phi: &Potential) -> Vec<(String, String)> {
    let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    vec![
        ("system".into(), sft.label().to_string()),
        (
            "potential".into(),
            if phi.label().is_empty() { "unnamed" } else { phi.label() }.to_string(),
        ),
        (
            "params".into(),
            format!(
                "e={} e0={} eta={} C={} M={} m={} n=({}) N=({}) y={} z0={}",
                params.e,
                params.e0,
                params.eta,
                params.c,
                params.big_m,
                params.m,
                list(&params.n_seq),
                list(&params.big_n_seq),
                params.y,
                params.z0
            ),
        ),
    ]
}

/// Validates, builds every level, and runs all checks.
///
/// Errors are reserved for inputs the construction cannot be run on at all
/// (guards, malformed sequences); failed hypotheses and failed checks are
/// reported as lines.
pub fn verify(sft: &Sft, phi: &Potential, params: &MoranParams, opts: VerifyOptions) -> Result<MoranReport> {
    let validation = validate_params(params, sft, phi);
    let mut report = MoranReport {
        header: header(params, sft, phi),
        lines: validation.lines.clone(),
        certificate: None,
    };
    if !validation.passed() {
        report.lines.push(CheckLine::new(
            "construction",
            Status::NotApplicable,
            "skipped: hypotheses not satisfied",
        ));
        return Ok(report);
    }

    let schedule = MoranSchedule::new(params)?;
    let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    report.header.push((
        "schedule".into(),
        format!(
            "c=({}) n_hat=({}) t=({})",
            list(&schedule.c),
            list(&schedule.n_hat),
            schedule.t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        ),
    ));
    report
        .header
        .push(("y-visit".into(), format!("symbol {}", params.y.symbol_at(0))));

    let levels = schedule.levels();
    let families = params
        .n_seq
        .iter()
        .map(|&n| build_family(sft, phi, n))
        .collect::<Result<Vec<_>>>()?;
    for (k, f) in families.iter().enumerate() {
        let dp = family_log_mass(sft, phi, f.n)?;
        report.lines.push(CheckLine::new(
            format!("family k={}", k + 1),
            Status::from(((f.log_mass - dp).exp_m1()).abs() <= MASS_TOL),
            format!(
                "#S_{} = {} words of length {}; log M_{} = {} by enumeration, {} by transfer",
                k + 1,
                f.len(),
                f.n,
                k + 1,
                f.log_mass,
                dp
            ),
        ));
    }

    let mut built = Vec::with_capacity(levels);
    for k in 1..=levels {
        built.push(build_points(sft, params, &schedule, &families, k)?);
    }
    let mut measures = Vec::with_capacity(levels);
    for (i, pts) in built.iter().enumerate() {
        report.lines.push(check_cardinality(pts, &families, &schedule));
        let injected = if opts.inject_adversarial {
            vec![params.z0.prefix(pts.len).into_inner()]
        } else {
            Vec::new()
        };
        report.lines.push(check_avoidance(sft, pts, params, &injected));
        if i + 1 < levels {
            report.lines.push(check_prefix_consistency(pts, &built[i + 1]));
        }
        match build_measure(pts, &families, &schedule) {
            Ok(m) => {
                report.lines.push(measure_line(&m));
                measures.push(m);
            }
            Err(e) => {
                report
                    .lines
                    .push(CheckLine::new(format!("kappa product k={}", i + 1), Status::Fail, e.to_string()));
                return Ok(report);
            }
        }
    }

    let sorted: Vec<SortedPoints> = built.into_iter().map(PointSet::into_sorted).collect();
    for s in &sorted {
        report.lines.push(check_separation(s));
    }
    for k in 1..levels {
        for level in &sorted[k..] {
            let r = check_ball_bound(sft, phi, params, &schedule, &families, &measures, level, k)?;
            report.lines.extend(ball_bound_lines(&r));
        }
    }

    report.certificate = pdp_certificate(&report.lines, params);
    if let Some(cert) = report.certificate {
        let l = params.big_m + 2 * params.m + params.e as usize;
        let line = if sft.count_words(l) <= MAX_LEVEL_BLOCKS {
            let level = avoidance_subshift(sft, &params.z0, l)?;
            let p = level_pressure(sft, &level, phi)?;
            CheckLine::new(
                "certificate bound",
                Status::from(cert <= p.value + p.error_bound),
                format!("C - 4 eta = {cert} <= P(avoid {l}-cylinder of z0, phi) = {}", p.value),
            )
        } else {
            CheckLine::new(
                "certificate bound",
                Status::NotApplicable,
                format!("the {l}-block presentation exceeds {MAX_LEVEL_BLOCKS} states"),
            )
        };
        report.lines.push(line);
        if report.lines.last().is_some_and(CheckLine::failed) {
            report.certificate = None;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Word;

    fn acceptance_params() -> MoranParams {
        MoranParams {
            e: 5,
            e0: 3,
            eta: 0.2,
            c: 0.5,
            big_m: 6,
            m: 1,
            n_seq: vec![7, 8],
            big_n_seq: vec![1, 2],
            y: EventuallyPeriodicPoint::periodic(Word::from_digits("1")).unwrap(),
            z0: EventuallyPeriodicPoint::periodic(Word::from_digits("0")).unwrap(),
        }
    }

    #[test]
    fn validation_examples() {
        let s = Sft::full_shift(2);
        let zero = Potential::zero(&s);
        let mut p = acceptance_params();
        assert!(validate_params(&p, &s, &zero).passed());
        p.big_m = 1;
        p.n_seq = vec![7, 8];
        let r = validate_params(&p, &s, &zero);
        let failed: Vec<_> = r.failures().map(|l| l.name.as_str()).collect();
        assert_eq!(failed, vec!["block length 2m(C + ||phi||)/(M + 2m) < eta"]);
        let mut p = acceptance_params();
        p.c = std::f64::consts::LN_2;
        let failed: Vec<_> = validate_params(&p, &s, &zero)
            .failures()
            .map(|l| l.name.clone())
            .collect();
        assert!(failed.contains(&"C < P_top(phi)".to_string()));
    }

    #[test]
    fn minimal_block_length_solves_the_inequality() {
        assert_eq!(minimal_block_length(0.5, 0.0, 1, 0.2), 4);
        let m = minimal_block_length(0.69, 0.0, 1, 0.001);
        assert!(2.0 * 0.69 / ((m + 2) as f64) < 0.001);
        assert!(2.0 * 0.69 / ((m + 1) as f64) >= 0.001);
    }

    #[test]
    fn certificate_requires_clean_checks() {
        let p = acceptance_params();
        let ok = vec![CheckLine::new("a", Status::Pass, "")];
        assert_eq!(pdp_certificate(&ok, &p), Some(0.5 - 0.8));
        let bad = vec![CheckLine::new("a", Status::Fail, "")];
        assert_eq!(pdp_certificate(&bad, &p), None);
    }

    #[test]
    fn small_two_level_run_passes() {
        let s = Sft::full_shift(2);
        let phi = Potential::from_symbol_values(&s, &[0.0, std::f64::consts::LN_2]).unwrap();
        let p = MoranParams {
            e: 4,
            e0: 2,
            eta: 0.49,
            c: 0.4,
            big_m: 4,
            m: 1,
            n_seq: vec![5, 6],
            big_n_seq: vec![1, 2],
            y: EventuallyPeriodicPoint::periodic(Word::from_digits("1")).unwrap(),
            z0: EventuallyPeriodicPoint::periodic(Word::from_digits("0")).unwrap(),
        };
        let r = verify(&s, &phi, &p, VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let r = verify(&s, &phi, &p, VerifyOptions { inject_adversarial: true }).unwrap();
        assert!(!r.passed());
        assert!(r.line("avoidance k=2").unwrap().detail.contains("injected #131072 at position 0"));
        assert!(r.certificate.is_none());
    }
}
