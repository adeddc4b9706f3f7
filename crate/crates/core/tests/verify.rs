use einres_core::{load_suite, verify, Status, SuiteName, VerifyOptions, Waivers};

fn run(name: SuiteName, waivers: Waivers) -> einres_core::Report {
    verify(&[name], &VerifyOptions { waivers, ..VerifyOptions::default() }).unwrap()
}

#[test]
fn waivers_only_change_the_exit_code() {
    let waived = run(SuiteName::BoundaryD2D2, Waivers::shipped());
    let bare = run(SuiteName::BoundaryD2D2, Waivers::none());
    assert_eq!(waived.exit_code(), 0);
    assert_eq!(bare.exit_code(), 1);
    let (a, b) = (waived.suite(SuiteName::BoundaryD2D2).unwrap(), bare.suite(SuiteName::BoundaryD2D2).unwrap());
    for (x, y) in a.claims.iter().zip(&b.claims) {
        assert_eq!((x.status, &x.computed), (y.status, &y.computed), "{}", x.id);
    }
    let phi5 = a.claim("phi_5").unwrap();
    assert_eq!(phi5.status, Status::Mismatch);
    assert!(phi5.waived && phi5.checks_agree());
}

#[test]
fn every_case_claim_carries_an_oracle_check() {
    for name in [SuiteName::BoundaryD2D2, SuiteName::BoundaryD1D3] {
        let r = run(name, Waivers::shipped());
        let s = r.suite(name).unwrap();
        let cases: Vec<_> = s.claims.iter().filter(|c| c.target.starts_with("Case")).collect();
        assert_eq!(cases.len(), 5, "{name}");
        for c in cases {
            assert!(!c.checks.is_empty() && c.checks_agree(), "{name}/{}", c.id);
        }
    }
}

#[test]
fn supplementary_totals() {
    let r = run(SuiteName::BoundaryD1D3, Waivers::shipped());
    let s = r.suite(SuiteName::BoundaryD1D3).unwrap();
    let sup = |id: &str| &s.supplementary.iter().find(|x| x.id == id).unwrap().values;
    let composed = sup("total_with_composed_sigma_m4");
    assert_eq!(composed["tangential"], "1/24");
    assert_eq!(composed["normal"], "1/8");
    // the umbilic model absorbs every second-fundamental-form term
    assert_eq!(sup("total_umbilic")["residual"], "0");
    assert_eq!(sup("total_with_composed_sigma_m4_umbilic")["residual"], "0");

    let r = run(SuiteName::BoundaryD2D2, Waivers::shipped());
    let umb = &r.suite(SuiteName::BoundaryD2D2).unwrap().supplementary[0].values;
    assert_eq!((umb["tangential"].as_str(), umb["normal"].as_str(), umb["residual"].as_str()), ("0", "-1", "0"));
}

#[test]
fn interior_and_traces_need_no_waivers() {
    let r = verify(&[SuiteName::Interior, SuiteName::Traces], &VerifyOptions::default()).unwrap();
    assert_eq!(r.exit_code(), 0);
    let traces = r.suite(SuiteName::Traces).unwrap();
    assert_eq!(traces.claim("leaf_pair_trace").unwrap().status, Status::ConventionFlag);
    assert!(r.to_markdown().contains("convention-flag"));
}

#[test]
fn shipped_suites_round_trip() {
    for name in SuiteName::ALL {
        let s = load_suite(name.as_str()).unwrap();
        assert_eq!(s.name, name);
        assert!(!s.expected.is_empty());
    }
}
