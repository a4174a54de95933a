use clap::Parser;

use super::*;

fn config(args: &[&str]) -> Result<RunConfig, CliError> {
    let cli = Cli::try_parse_from(std::iter::once("rsp-forge").chain(args.iter().copied()))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    RunConfig::from_command(&cli.command)
}

#[test]
fn lists_and_defaults_parse() {
    let cfg = config(&["sweep", "--n", "2,3", "--p0", "0,0.5,1", "--seed", "7"]).unwrap();
    assert_eq!(cfg.command, "sweep");
    assert_eq!(cfg.n, vec![2, 3]);
    assert_eq!(cfg.p0, vec![0.0, 0.5, 1.0]);
    assert_eq!(cfg.seed, 7);
    assert_eq!(cfg.format, OutputFormat::Json);
    let cfg = config(&["security", "--protocol", "P2", "--n", "2", "--p0", "0"]).unwrap();
    assert_eq!(cfg.protocol, Some(ProtocolId::P2));
}

#[test]
fn invalid_configs_are_usage_errors() {
    for args in [
        &["security"][..],
        &["correctness", "--protocol", "P1", "--theta", "8"],
        &["sweep", "--p0", "1.5"],
        &["sweep", "--n", "6"],
        &["security", "--protocol", "P2", "--n", "2,3"],
        &["twirl-check"],
        &["twirl-check", "--which", "gl", "--n", "5"],
        &["collaborative", "--group", "nonsense"],
        &["security", "--protocol", "P5", "--group", "u2"],
        &["compose", "--protocol", "P3"],
        &["correctness", "--protocol", "P9"],
        &["collaborative", "--clients", "0"],
        &["security", "--protocol", "P4", "--samples", "0"],
    ] {
        let err = config(args).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{args:?}");
    }
}

#[test]
fn report_echoes_the_config_without_timing() {
    let cfg = config(&["correctness", "--protocol", "P1", "--theta", "0"]).unwrap();
    let report = run(&cfg).unwrap();
    assert!(report.pass);
    assert_eq!(report.elapsed_seconds, None);
    let v: serde_json::Value = serde_json::from_slice(&report.to_json().unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["theta"], 0);
    assert_eq!(v["config"]["protocol"], "P1");
    assert!(v.get("elapsed_seconds").is_none());

    let timed = config(&["correctness", "--protocol", "P1", "--theta", "0", "--timing"]).unwrap();
    assert!(run(&timed).unwrap().elapsed_seconds.is_some());
}

#[test]
fn pair_checks_use_the_tolerance() {
    assert!(Check::pair("x", 1.0, 1.0 + 1e-10).pass);
    assert!(!Check::pair("x", 1.0, 1.0 + 1e-8).pass);
    assert!(Check::at_most("y", 0.5, 0.5).pass);
    assert!(!Check::at_most("y", 0.6, 0.5).pass);
}

#[test]
fn csv_lists_checks_when_there_are_no_rows() {
    let cfg = config(&["twirl-check", "--which", "design", "--format", "csv"]).unwrap();
    let text = String::from_utf8(run(&cfg).unwrap().to_csv().unwrap()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,pass,closed_form,state_level"));
    assert!(lines.next().unwrap().starts_with("clifford t=1,true,1.0,"));
}
