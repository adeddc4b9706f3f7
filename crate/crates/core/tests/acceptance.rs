//! One PASS/FAIL line per acceptance criterion. A FAIL is a finding about
//! the reference values, recorded in the report; it does not fail the build.
//! Runs without the libtest harness so the verdicts are never captured.

use std::time::Instant;

use einres_core::verify::{ClaimReport, SuiteReport};
use einres_core::{run_properties, verify, Report, Status, SuiteName, VerifyOptions, Waivers};

const PROPERTY_SEED: u64 = 0x5eed;

struct Verdict {
    criterion: u32,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn suite(report: &Report, name: SuiteName) -> &SuiteReport {
    report.suite(name).unwrap_or_else(|| panic!("suite {name} missing from report"))
}

fn claim<'a>(s: &'a SuiteReport, id: &str) -> &'a ClaimReport {
    s.claim(id).unwrap_or_else(|| panic!("claim {id} missing from {}", s.suite))
}

fn describe(c: &ClaimReport) -> String {
    let mut s = format!("{}={}", c.id, c.status.as_str());
    if !c.differing.is_empty() {
        s += &format!(" [{}]", c.differing.join(","));
    }
    s
}

fn exact(s: &SuiteReport, ids: &[&str]) -> (bool, String) {
    let cs: Vec<_> = ids.iter().map(|id| claim(s, id)).collect();
    let pass = cs.iter().all(|c| c.status == Status::Match);
    (pass, cs.iter().map(|c| describe(c)).collect::<Vec<_>>().join("; "))
}

fn criteria(report: &Report) -> Vec<Verdict> {
    let mut out = Vec::new();

    let interior = suite(report, SuiteName::Interior);
    let c = claim(interior, "einstein_2_2");
    out.push(Verdict {
        criterion: 1,
        title: "interior constants and dual-route agreement",
        pass: c.status == Status::Match && !c.checks.is_empty() && c.checks_agree(),
        detail: format!("{} with {} route check(s)", describe(c), c.checks.len()),
    });

    let traces = suite(report, SuiteName::Traces);
    let exact_ids = [
        "curvature_leaf_normal",
        "curvature_leaf_leaf",
        "curvature_normal_normal",
        "trace_e_2_2",
        "trace_e_4_2",
        "trace_e_2_4",
        "f_vanishes_2_2",
        "normal_pair_trace",
        "sigma0_normal_trace",
        "sigma0_tangential_trace",
    ];
    let (ok, mut detail) = exact(traces, &exact_ids);
    let leaf = claim(traces, "leaf_pair_trace");
    detail += &format!("; {}", describe(leaf));
    out.push(Verdict {
        criterion: 2,
        title: "trace identities",
        pass: ok && leaf.status == Status::ConventionFlag,
        detail,
    });

    let d2d2 = suite(report, SuiteName::BoundaryD2D2);
    let (cases, detail) = exact(d2d2, &["phi_1", "phi_2", "phi_3", "phi_4", "phi_5", "phi_total"]);
    let sum = claim(d2d2, "phi_printed_sum");
    out.push(Verdict {
        criterion: 3,
        title: "boundary D²·D⁻² per-case values and total",
        pass: cases && sum.status == Status::Match,
        detail: format!("{detail}; {}", describe(sum)),
    });

    let (pass, detail) = exact(
        d2d2,
        &["pi_plus_sigma0", "d_xin_pi_plus_sigma0", "pi_plus_dxn_sigma0", "d2_xin_pi_plus_sigma0"],
    );
    out.push(Verdict { criterion: 4, title: "π⁺ milestones term by term", pass, detail });

    let (pass, detail) = exact(d2d2, &["extrinsic_boundary_term"]);
    out.push(Verdict { criterion: 5, title: "extrinsic-curvature coefficient", pass, detail });

    let d1d3 = suite(report, SuiteName::BoundaryD1D3);
    let ids = ["phi_tilde_1", "phi_tilde_2", "phi_tilde_3", "phi_tilde_4", "phi_tilde_5", "phi_tilde_total"];
    let accepted = |c: &ClaimReport| match c.status {
        Status::Match => true,
        Status::Mismatch => c.waived && !c.checks.is_empty() && c.checks_agree(),
        _ => false,
    };
    let cs: Vec<_> = ids.iter().map(|id| claim(d1d3, id)).collect();
    let sum = claim(d1d3, "phi_tilde_printed_sum");
    let mut detail: Vec<String> = cs
        .iter()
        .map(|c| {
            let waived = if c.waived { " waived" } else { "" };
            format!("{}{waived}, oracle {}", describe(c), if c.checks_agree() { "agrees" } else { "DISAGREES" })
        })
        .collect();
    detail.push(describe(sum));
    out.push(Verdict {
        criterion: 6,
        title: "boundary D·D⁻³: matches or oracle-backed waivers, printed sum exact",
        pass: cs.iter().all(|c| accepted(c)) && sum.status == Status::Match,
        detail: detail.join("; "),
    });

    let props = run_properties(PROPERTY_SEED);
    out.push(Verdict {
        criterion: 7,
        title: "analytic property sweeps",
        pass: props.iter().all(|p| p.passed()),
        detail: props
            .iter()
            .map(|p| format!("{} {}/{}", p.name, p.samples - p.failures, p.samples))
            .collect::<Vec<_>>()
            .join("; "),
    });
    out
}

fn main() {
    let start = Instant::now();
    let opts = VerifyOptions { waivers: Waivers::shipped(), ..VerifyOptions::default() };
    let report = verify(&SuiteName::ALL, &opts).expect("verification runs");
    for v in criteria(&report) {
        println!("{} criterion {}: {} — {}", if v.pass { "PASS" } else { "FAIL" }, v.criterion, v.title, v.detail);
    }
    println!("elapsed {:.2}s", start.elapsed().as_secs_f64());
    // the shipped waivers cover every known reference discrepancy
    let unwaived: Vec<_> = report.failures().map(|(s, c)| format!("{s}/{}", c.id)).collect();
    if !unwaived.is_empty() {
        eprintln!("unwaived failures: {unwaived:?}");
        std::process::exit(1);
    }
}
