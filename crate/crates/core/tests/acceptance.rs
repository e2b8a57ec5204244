//! Acceptance suite. Prints one line per criterion and exits nonzero on any
//! unexpected result.
//!
//! Two criteria compare against reference values that do
//! not hold. They are listed in `KNOWN` with the exact mismatches expected. A
//! known criterion prints FAIL and does not fail the run as long as the
//! observed mismatches are exactly the listed ones. Any other mismatch, or a
//! known criterion that starts passing, fails the run.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use hurwitz_core::arith::{format_rational, rat};
use hurwitz_core::chiodo::elsv_rhs_g0_n3;
use hurwitz_core::cutjoin::{verify_cut_and_join, verify_cut_and_join_with, ShiftConvention, WedgeSource};
use hurwitz_core::spectral::*;
use hurwitz_core::wedge::*;
use hurwitz_core::Rational;

const QR12: [(u32, u32); 4] = [(1, 1), (1, 2), (2, 1), (2, 2)];
const TR_BOX: [(u32, usize); 5] = [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)];
/// Quadratic and extended loop instances `(g, n)`: the top correlator is
/// `W_{g, n+1}`, one of `TR_BOX`.
const LOOP_BOX: [(u32, usize); 5] = [(0, 2), (0, 3), (1, 0), (1, 1), (2, 0)];

struct Known {
    criterion: u32,
    mismatches: &'static [&'static str],
    reason: &'static str,
}

const KNOWN: &[Known] = &[
    Known {
        criterion: 1,
        mismatches: &["C5 at (3): reference 11/3, computed 11/2"],
        reason: "the central character of C5 on size-3 partitions forces 11/2",
    },
    Known {
        criterion: 3,
        mismatches: &[
            "(0,3) q=1 r=1: constant residual -2/1",
            "(0,3) q=2 r=1: constant residual -2/1",
            "(1,1) q=1 r=1: constant residual 1/24",
            "(1,1) q=2 r=1: constant residual 1/24",
        ],
        reason: "the reference shift has the wrong sign for odd r; the sign-corrected shift leaves zero residual on the whole box",
    },
];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    mismatches: Vec<String>,
    detail: String,
}

fn check(label: impl Into<String>, ok: bool, mismatches: &mut Vec<String>) {
    if !ok {
        mismatches.push(label.into());
    }
}

fn criterion_1() -> Outcome {
    let reference: [&[(&[u32], Rational)]; 5] = [
        &[(&[1], rat(1, 1))],
        &[(&[2], rat(1, 1))],
        &[(&[3], rat(1, 1)), (&[1, 1], rat(1, 1)), (&[1], rat(1, 12))],
        &[(&[4], rat(1, 1)), (&[2, 1], rat(2, 1)), (&[2], rat(5, 4))],
        &[
            (&[5], rat(1, 1)),
            (&[3, 1], rat(3, 1)),
            (&[2, 2], rat(4, 1)),
            (&[3], rat(11, 3)),
            (&[1, 1, 1], rat(4, 1)),
            (&[1, 1], rat(3, 2)),
            (&[1], rat(1, 80)),
        ],
    ];
    let mut mismatches = Vec::new();
    for (i, table) in reference.iter().enumerate() {
        let n = i as u32 + 1;
        let computed = completed_cycle(n).expect("completed cycle");
        let expected: std::collections::BTreeMap<Partition, Rational> =
            table.iter().map(|(p, c)| (Partition::new(p.to_vec()), c.clone())).collect();
        let keys: BTreeSet<&Partition> = computed.keys().chain(expected.keys()).collect();
        for k in keys {
            let zero = rat(0, 1);
            let (a, b) = (expected.get(k).unwrap_or(&zero), computed.get(k).unwrap_or(&zero));
            if a != b {
                let parts: Vec<String> = k.parts().iter().map(|x| x.to_string()).collect();
                mismatches.push(format!(
                    "C{n} at ({}): reference {}, computed {}",
                    parts.join(","),
                    format_rational(a),
                    format_rational(b)
                ));
            }
        }
    }
    Outcome { mismatches, detail: "n = 1..5".into() }
}

fn criterion_2() -> Outcome {
    let mut mismatches = Vec::new();
    let mut keys = 0;
    for d in 1..=6u32 {
        for mu in Partition::all_of_size(d) {
            for q in 1..=3 {
                for r in 1..=3 {
                    // m = (2g - 2 + n + d/q)/r <= 4 bounds the genus
                    for g in 0..=8 {
                        let key = HurwitzKey { g, mu: mu.clone(), q, r };
                        match key.m() {
                            Ok(m) if m <= 4 => {}
                            _ => continue,
                        }
                        keys += 1;
                        for connected in [false, true] {
                            let wedge =
                                if connected { connected_hurwitz(&key) } else { disconnected_hurwitz(&key) }.expect("wedge");
                            let oracle = brute_force_hurwitz(&key, connected, DEFAULT_ORACLE_BOUND).expect("oracle");
                            check(format!("{key:?} connected={connected}"), wedge == oracle, &mut mismatches);
                        }
                    }
                }
            }
        }
    }
    Outcome { mismatches, detail: format!("{keys} keys, connected and disconnected") }
}

fn cut_join_box() -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    for g in 0..=2u32 {
        for n in 1..=5usize {
            let chi = 2 * g as i64 - 2 + n as i64;
            if (1..=3).contains(&chi) {
                out.push((g, n));
            }
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let mut mismatches = Vec::new();
    let mut consistent_zero = true;
    let cases = cut_join_box();
    for &(g, n) in &cases {
        for (q, r) in QR12 {
            let residual = verify_cut_and_join(g, n, q, r, 10).expect("cut-and-join");
            if !residual.is_empty() {
                let non_constant = residual.terms().any(|(e, _)| e.iter().any(|&x| x != 0));
                let constant = residual.terms().find(|(e, _)| e.iter().all(|&x| x == 0)).map(|(_, c)| format_rational(c));
                mismatches.push(match (non_constant, constant) {
                    (false, Some(c)) => format!("({g},{n}) q={q} r={r}: constant residual {c}"),
                    _ => format!("({g},{n}) q={q} r={r}: {} residual terms", residual.len()),
                });
            }
            let mut src = WedgeSource::new(q, r, 10);
            let fixed = verify_cut_and_join_with(&mut src, g, n, ShiftConvention::SeriesConsistent).expect("cut-and-join");
            consistent_zero &= fixed.is_empty();
        }
    }
    if !consistent_zero {
        mismatches.push("sign-corrected shift leaves a residual".into());
    }
    Outcome {
        mismatches,
        detail: format!(
            "{} (g,n) x 4 (q,r), degree <= 10; sign-corrected shift: {}",
            cases.len(),
            if consistent_zero { "all zero" } else { "NONZERO" }
        ),
    }
}

fn criterion_4() -> Outcome {
    let mut mismatches = Vec::new();
    let mut coeffs = 0;
    for (q, r) in QR12 {
        let mut store = CorrelatorStore::new(SpectralCurve::new(q, r));
        for (g, n) in TR_BOX {
            let tr = hurwitz_from_recursion(&mut store, g, n, 8).expect("recursion");
            let wedge = free_energy(g, n, q, r, 8);
            coeffs += wedge.len();
            check(format!("({g},{n}) q={q} r={r}"), tr.sub(&wedge).is_empty(), &mut mismatches);
        }
    }
    Outcome { mismatches, detail: format!("{coeffs} nonzero coefficients, mu_i <= 8") }
}

fn criterion_5() -> Outcome {
    let mut mismatches = Vec::new();
    let mut runs = 0;
    for (q, r) in QR12 {
        let mut store = CorrelatorStore::new(SpectralCurve::new(q, r));
        let big_n = store.curve().n();
        let tag = |what: &str, g: u32, n: usize| format!("{what} ({g},{n}) q={q} r={r}");
        for (g, n) in TR_BOX {
            let lle = check_linear_loop(&mut store, g, n).expect("linear loop");
            check(tag("linear", g, n), lle.passed(), &mut mismatches);
            check(tag("projection", g, n), check_projection(&mut store, g, n).expect("projection"), &mut mismatches);
            runs += 2;
        }
        for (g, n) in LOOP_BOX {
            // two orders past the principal part, so the N = 1 comparison sees
            // more than two vanishing polar parts
            let qle = check_quadratic_loop_to(&mut store, g, n, 2).expect("quadratic loop");
            check(tag("quadratic", g, n), qle.passed(), &mut mismatches);
            let one = extended_qle_to(&mut store, g, 1, n, 2).expect("extended N=1");
            check(tag("extended N=1", g, n), one.passed(), &mut mismatches);
            check(
                tag("extended N=1 vs quadratic", g, n),
                one.expression.prec() >= 2 && one.expression.agrees_with(&qle.delta.expression, big_n),
                &mut mismatches,
            );
            let two = extended_qle_probe(&mut store, g, 2, n).expect("extended N=2");
            check(tag("extended N=2", g, n), two.passed(), &mut mismatches);
            runs += 4;
        }
    }
    Outcome { mismatches, detail: format!("{runs} checks") }
}

fn criterion_6() -> Outcome {
    let mut mismatches = Vec::new();
    let mut tests = 0;
    for (g, n) in [(0u32, 3usize), (1, 1), (1, 2)] {
        for (q, r) in QR12 {
            let qr = q * r;
            let fit = 3 * qr;
            let rep = quasi_polynomiality_check(g, n, q, r, fit, fit + qr, 4).expect("quasi-polynomiality");
            tests += rep.fits.iter().map(|f| f.test_points).sum::<usize>();
            check(format!("({g},{n}) q={q} r={r}"), rep.passed, &mut mismatches);
        }
    }
    Outcome { mismatches, detail: format!("{tests} held-out values") }
}

fn criterion_7() -> Outcome {
    let mut mismatches = Vec::new();
    let mut cases = 0;
    for q in 1..=3 {
        for r in 1..=3 {
            for a in 1..=9u32 {
                for b in 1..=a {
                    for c in 1..=b {
                        let mu = [a, b, c];
                        let Ok(rhs) = elsv_rhs_g0_n3(q, r, mu) else { continue };
                        let lhs = connected_hurwitz(&HurwitzKey::new(0, &mu, q, r)).expect("wedge");
                        cases += 1;
                        check(format!("q={q} r={r} mu={mu:?}"), lhs == rhs, &mut mismatches);
                    }
                }
            }
        }
    }
    Outcome { mismatches, detail: format!("{cases} admissible mu") }
}

fn polynomial(arity: usize) -> GlobalRat {
    let mut f = QPoly::zero(arity);
    let mut e = vec![0u32; arity];
    for (i, c) in [rat(3, 1), rat(-1, 2), rat(5, 7)].into_iter().enumerate() {
        for (j, x) in e.iter_mut().enumerate() {
            *x = ((i + 1) * (j + 2) % 4) as u32;
        }
        f.add_term(e.clone(), c);
    }
    GlobalRat::polynomial(f)
}

fn criterion_8() -> Outcome {
    const ORDER: i64 = 8;
    let mut mismatches = Vec::new();
    for (q, r) in QR12 {
        let c = SpectralCurve::new(q, r);
        let tag = |what: &str| format!("{what} q={q} r={r}");
        let ss = regularized_w02(&c, W02Combination::SymSym, ORDER).expect("SS");
        check(tag("SS holomorphic"), ss.is_holomorphic(), &mut mismatches);
        let sd = regularized_w02(&c, W02Combination::SymDelta, ORDER).expect("SΔ");
        // a simple pole on the axis t2 = 0 and nothing on the diagonals
        check(tag("SΔ axis pole only"), sd.valuations() == (-1, 0) && sd.times_monomial(0, 1).is_holomorphic(), &mut mismatches);
        let dd = regularized_w02(&c, W02Combination::PlainDeltaDelta, ORDER).expect("ΔΔ");
        let display = delta_delta_singular_part(&c, ORDER).expect("display");
        check(
            tag("ΔΔ singular part"),
            !dd.times_monomial(1, 1).is_holomorphic() && dd.sub(&display).times_monomial(1, 1).is_holomorphic(),
            &mut mismatches,
        );
        for arity in 1..=3 {
            let rep = symmetrization_probe(&c, &polynomial(arity), ORDER).expect("symmetrization");
            check(tag(&format!("symmetrization arity {arity}")), rep.holds(), &mut mismatches);
        }
        let rep = symmetrization_probe_w02(&c, ORDER).expect("symmetrization of W̃02");
        check(tag("symmetrization W̃02"), rep.holds(), &mut mismatches);
    }
    Outcome { mismatches, detail: format!("order {ORDER}, arities 1..3 and W̃02") }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "completed-cycle table", criterion_1),
        (2, "wedge vs brute force", criterion_2),
        (3, "cut-and-join, reference shift", criterion_3),
        (4, "topological recursion vs wedge", criterion_4),
        (5, "loop-equation suite", criterion_5),
        (6, "quasi-polynomiality", criterion_6),
        (7, "qr-ELSV at (0,3)", criterion_7),
        (8, "W̃02 regularization", criterion_8),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN.iter().find(|k| k.criterion == id);
        let observed: BTreeSet<&str> = out.mismatches.iter().map(String::as_str).collect();
        let (status, note, ok) = match known {
            None if observed.is_empty() => ("PASS", String::new(), true),
            None => ("FAIL", String::new(), false),
            Some(k) if observed == k.mismatches.iter().copied().collect() => {
                ("FAIL", format!(" [known: {}]", k.reason), true)
            }
            Some(_) if observed.is_empty() => ("PASS", " [listed as a known failure; update KNOWN]".into(), false),
            Some(_) => ("FAIL", " [differs from the known mismatches]".into(), false),
        };
        println!("criterion {id} {name}: {status} ({}; {secs:.1}s){note}", out.detail);
        for m in &out.mismatches {
            println!("    mismatch: {m}");
        }
        if !ok {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        println!("acceptance: no unexpected results");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} unexpected result(s)");
        ExitCode::FAILURE
    }
}
