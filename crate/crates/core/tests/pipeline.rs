use chemoblow_core::pipeline::{cmd_verify, Status};
use chemoblow_core::sim::Verdict;
use chemoblow_core::RunConfig;

fn status(report: &chemoblow_core::VerifyReport, name: &str) -> Status {
    report.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check {name}")).status
}

#[test]
fn bounded_run_passes_with_blowup_checks_not_applicable() {
    let cfg = RunConfig::from_toml_str(include_str!("../../../configs/bounded.toml")).unwrap();
    let out = cmd_verify(&cfg).unwrap();
    let r = &out.report;
    assert!(matches!(r.simulation.verdict, Verdict::ReachedTEnd { .. }));
    assert!(r.pass, "{:#?}", r.checks);
    assert_eq!(status(r, "lp_apriori_bound"), Status::Pass);
    assert!(r.lp_apriori.is_some());
    for name in ["lp_divergence", "t_osgood_below_t_cross", "t_explicit_below_t_cross"] {
        assert_eq!(status(r, name), Status::NotApplicable, "{name}");
    }
    assert_eq!(out.simulation.checkpoints.len(), 3);
}

#[test]
fn constant_state_has_vanishing_residual() {
    let cfg = RunConfig::from_toml_str(include_str!("../../../configs/constant.toml")).unwrap();
    let out = cmd_verify(&cfg).unwrap();
    assert!(out.report.pass);
    assert!(out.report.residual.max_relative <= 1e-12);
    let first = out.simulation.rows.first().unwrap();
    assert!(out.simulation.rows.iter().all(|r| r.linf == first.linf));
}

#[test]
fn blowup_bounds_precede_crossing() {
    let cfg = RunConfig::from_toml_str(include_str!("../../../configs/blowup.toml")).unwrap();
    let out = cmd_verify(&cfg).unwrap();
    let r = &out.report;
    let Verdict::BlowupThreshold { t_cross } = r.simulation.verdict else { panic!("{:?}", r.simulation.verdict) };
    assert!(r.bound.bound.t_explicit <= r.bound.bound.t_osgood);
    assert!(r.bound.bound.t_osgood < t_cross);
    assert_eq!(status(r, "lp_divergence"), Status::Pass);
}
