//! Acceptance suite. One line per criterion, nonzero exit if any fails.
//! Runs at default settings: 128 points, two Fourier modes per component.

mod common;

use std::path::Path;
use std::time::Instant;

use gaugekin::cli::{parse_model_spec, print_document, run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use gaugekin::ewmodel::{build_ew_model, run_ew_suite, Hypercharges, SCAN_DIRECTIONS};
use gaugekin::gauge::{FieldDecl, FourierMatter, MatterField, ModelSpec, Rep, Sector, ADOPTED_V_COMMUTATOR_SIGN};
use gaugekin::liealg::{algebra_residuals, structure_constants, su_basis, u1_basis_uncharged};
use gaugekin::verify::{
    check_covariant_transform, check_infinitesimal_gauge_law, check_local_invariance, check_pure_gauge_flatness,
    check_second_derivative, commutator_residuals, run_suite, Corruption, Ensemble, VerifyOptions,
};
use num_complex::Complex64;
use proptest::test_runner::{Config, TestRunner};

const ALGEBRA_TOL: f64 = 1e-11;
const EPSILON_TOL: f64 = 1e-12;
const INVARIANCE_TOL: f64 = 1e-8;
const COVARIANT_TOL: f64 = 1e-9;
const SECOND_DERIVATIVE_TOL: f64 = 1e-8;
const ADOPTED_SIGN_TOL: f64 = 1e-9;
const REJECTED_SIGN_MIN: f64 = 1e-3;
const SIGN_VOTES_NEEDED: usize = 9;
const FLATNESS_TOL: f64 = 1e-9;
const RATIO_RANGE: (f64, f64) = (3.0, 5.0);
const EW_SUITE_TOL: f64 = 1e-8;
const RESIDUAL_SYMMETRY_TOL: f64 = 1e-12;
const B_LAW_TOL: f64 = 1e-12;
const CORRUPTION_MIN: f64 = 1e-3;
const ROUND_TRIP_CASES: u32 = 1000;
const CONFIGS: u64 = 10;
const BUDGET_SECS: f64 = 60.0;

type Outcome = Result<String, String>;

fn models() -> Vec<ModelSpec> {
    let su2_u1 = ModelSpec::new(
        "su2xu1",
        su_basis(2).unwrap().with_coupling(0.65),
        u1_basis_uncharged().with_coupling(0.35),
        vec![
            FieldDecl::fermion("l", Rep::Bifundamental).with_charge(-1.0),
            FieldDecl::fermion("e", Rep::FundamentalV).with_charge(-2.0),
            FieldDecl::scalar("h", Rep::Bifundamental).with_charge(1.0),
        ],
    );
    let su3_su2 = ModelSpec::new(
        "su3xsu2",
        su_basis(3).unwrap().with_coupling(0.9),
        su_basis(2).unwrap().with_coupling(0.6),
        vec![
            FieldDecl::fermion("q", Rep::Bifundamental),
            FieldDecl::fermion("u", Rep::FundamentalU),
            FieldDecl::scalar("s", Rep::Bifundamental),
        ],
    );
    let su2_su2 = ModelSpec::new(
        "su2xsu2",
        su_basis(2).unwrap().with_coupling(0.65),
        su_basis(2).unwrap().with_coupling(0.5),
        vec![
            FieldDecl::fermion("q", Rep::Bifundamental),
            FieldDecl::scalar("d", Rep::FundamentalV),
        ],
    );
    vec![su2_u1.unwrap(), su3_su2.unwrap(), su2_su2.unwrap()]
}

fn config_opts(k: u64) -> VerifyOptions {
    VerifyOptions { seed: 1000 + k, ..Default::default() }
}

fn model_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("models").join(name).display().to_string()
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let code = run(std::iter::once("gaugekin").chain(args.iter().copied()), &mut out, &mut std::io::sink());
    (code, out)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn algebra() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=4 {
        worst = worst.max(algebra_residuals(&su_basis(n).map_err(|e| e.to_string())?).max());
    }
    // f_abc = -2i Tr([T_a, T_b] T_c) on the Pauli matrices, against ε_abc
    let b = su_basis(2).map_err(|e| e.to_string())?;
    let f = structure_constants(&b);
    let t = b.generators();
    let mut eps_err: f64 = 0.0;
    for a in 0..3 {
        for bb in 0..3 {
            for c in 0..3 {
                let levi = match (a, bb, c) {
                    (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                    (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
                    _ => 0.0,
                };
                let comm = &t[a] * &t[bb] - &t[bb] * &t[a];
                let traced = (Complex64::new(0.0, -2.0) * (comm * &t[c]).trace()).re;
                eps_err = eps_err.max((f.get(a, bb, c) - levi).abs()).max((traced - levi).abs());
            }
        }
    }
    check(
        worst <= ALGEBRA_TOL && eps_err <= EPSILON_TOL,
        format!("max algebra residual {worst:.2e} (<= {ALGEBRA_TOL:.0e}), |f - eps| {eps_err:.2e} (<= {EPSILON_TOL:.0e})"),
    )
}

struct Sweep {
    local: f64,
    covariant: f64,
    second: f64,
    sign_votes: usize,
    sign_trials: usize,
    worst_adopted: f64,
    weakest_rejected: f64,
}

fn sweep(models: &[ModelSpec]) -> Result<Sweep, String> {
    let mut s = Sweep {
        local: 0.0,
        covariant: 0.0,
        second: 0.0,
        sign_votes: 0,
        sign_trials: 0,
        worst_adopted: 0.0,
        weakest_rejected: f64::INFINITY,
    };
    for m in models {
        for k in 0..CONFIGS {
            let opts = config_opts(k);
            let ens = Ensemble::random(m, &opts).map_err(|e| e.to_string())?;
            s.local = s.local.max(check_local_invariance(m, &ens, &opts).residual_max);
            s.covariant = s.covariant.max(check_covariant_transform(m, &ens, &opts).residual_max);
            s.second = s.second.max(check_second_derivative(m, &ens, &opts).residual_max);
            if m.is_abelian(Sector::V) || s.sign_trials >= CONFIGS as usize {
                continue;
            }
            let probe = FourierMatter::random(m, FieldDecl::scalar("probe", Rep::Bifundamental), 7000 + k, 2, 0.5)
                .map_err(|e| e.to_string())?;
            let mut fields: Vec<&dyn MatterField> = ens.fields.iter().map(|f| f.as_ref()).collect();
            fields.push(&probe);
            let pairs = commutator_residuals(m, &fields, &ens.config, &ens.points, ADOPTED_V_COMMUTATOR_SIGN)
                .map_err(|e| e.to_string())?;
            let adopted = pairs.iter().map(|p| p.0).fold(0.0, f64::max);
            let rejected = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
            s.sign_trials += 1;
            s.worst_adopted = s.worst_adopted.max(adopted);
            s.weakest_rejected = s.weakest_rejected.min(rejected);
            if adopted <= ADOPTED_SIGN_TOL && rejected >= REJECTED_SIGN_MIN {
                s.sign_votes += 1;
            }
        }
    }
    Ok(s)
}

fn sign_ledger(models: &[ModelSpec]) -> Outcome {
    let report = run_suite(&models[1], &config_opts(0));
    let adopted = report.sign_ledger.get("v_sector_commutator_sign").cloned().unwrap_or_default();
    let oracle = report.sign_ledger.get("v_sector_commutator_sign_oracle").cloned().unwrap_or_default();
    check(adopted == "-1" && oracle == "-1", format!("ledger v_sector_commutator_sign={adopted}, oracle={oracle}"))
}

fn flatness(models: &[ModelSpec]) -> Outcome {
    let mut worst: f64 = 0.0;
    for m in models {
        let opts = config_opts(0);
        let ens = Ensemble::random(m, &opts).map_err(|e| e.to_string())?;
        worst = worst.max(check_pure_gauge_flatness(m, &ens, &opts).residual_max);
    }
    check(worst <= FLATNESS_TOL, format!("max |F| of pure gauge {worst:.2e} (<= {FLATNESS_TOL:.0e})"))
}

fn infinitesimal(models: &[ModelSpec]) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for m in models {
        let opts = config_opts(0);
        let ens = Ensemble::random(m, &opts).map_err(|e| e.to_string())?;
        let r = check_infinitesimal_gauge_law(m, &ens, &opts);
        // residual is |ratio - 4|, so the range [3, 5] is residual <= 1
        ok &= r.points > 0 && r.residual_max <= (RATIO_RANGE.1 - RATIO_RANGE.0) / 2.0;
        notes.push(format!("{}: {}", m.name, r.notes));
    }
    check(ok, format!("ratios in [{}, {}]; {}", RATIO_RANGE.0, RATIO_RANGE.1, notes.join("; ")))
}

fn electroweak() -> Outcome {
    let ew = build_ew_model(0.65, 0.35, 1.0, Hypercharges::default()).map_err(|e| e.to_string())?;
    let r = run_ew_suite(&ew, &VerifyOptions { tol: EW_SUITE_TOL, ..Default::default() });
    let get = |n: &str| r.check(n).ok_or_else(|| format!("{n} missing"));
    let sym = get("residual_symmetry")?;
    let scan = get("symmetry_breaking_scan")?;
    let b = get("ew_b_law")?;
    let higgs = get("higgs_linearization")?;
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    let ok = failed.is_empty()
        && sym.residual_max <= RESIDUAL_SYMMETRY_TOL
        && scan.pass
        && scan.points == SCAN_DIRECTIONS
        && b.residual_max <= B_LAW_TOL
        && higgs.residual_max <= 1.0;
    check(
        ok,
        format!(
            "{}/{} checks pass; residual symmetry {:.2e}; {}; B law {:.2e}; higgs {}{}",
            r.checks.len() - failed.len(),
            r.checks.len(),
            sym.residual_max,
            scan.notes,
            b.residual_max,
            higgs.notes,
            if failed.is_empty() { String::new() } else { format!("; failed {failed:?}") }
        ),
    )
}

fn negative_controls() -> Outcome {
    let path = model_path("mohapatra-pati.gk");
    let mut lines = Vec::new();
    let mut ok = true;
    for c in Corruption::ALL {
        let name = c.check_name();
        let (code, out) = cli(&["verify", &path, "--corrupt", name]);
        let doc: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
        let entry = doc["checks"].as_array().and_then(|cs| cs.iter().find(|x| x["name"] == name));
        // null encodes a non-finite residual
        let residual = entry.map(|e| e["residual_max"].as_f64().unwrap_or(f64::INFINITY)).unwrap_or(0.0);
        ok &= code == EXIT_FAIL && residual > CORRUPTION_MIN;
        lines.push(format!("{name} {residual:.1e} exit {code}"));
    }
    check(ok, lines.join(", "))
}

fn parser() -> Outcome {
    let mut runner = TestRunner::new(Config { cases: ROUND_TRIP_CASES, failure_persistence: None, ..Config::default() });
    runner
        .run(&common::document(), |doc| {
            let text = print_document(&doc);
            let back = parse_model_spec(&text).map_err(|e| proptest::test_runner::TestCaseError::fail(e.to_string()))?;
            proptest::prop_assert_eq!(&back, &doc);
            proptest::prop_assert_eq!(print_document(&back), text);
            Ok(())
        })
        .map_err(|e| format!("round trip: {e}"))?;
    let mut codes = Vec::new();
    for (file, want) in [
        ("gws.gk", EXIT_PASS),
        ("mohapatra-pati.gk", EXIT_PASS),
        ("pati-salam.gk", EXIT_PASS),
        ("broken.gk", EXIT_FAIL),
    ] {
        let code = cli(&["verify", &model_path(file)]).0;
        if code != want {
            return Err(format!("{file} exited {code}, expected {want}"));
        }
        codes.push(format!("{file} {code}"));
    }
    let missing = cli(&["verify", "nonexistent.gk"]).0;
    check(
        missing == EXIT_USAGE,
        format!("{ROUND_TRIP_CASES} round trips; {}, nonexistent.gk {missing}", codes.join(", ")),
    )
}

fn determinism() -> Outcome {
    let path = model_path("gws.gk");
    let runs: Vec<Vec<u8>> = ["1", "4", "0", "0"]
        .iter()
        .map(|t| cli(&["verify", &path, "--seed", "42", "--threads", t]).1)
        .collect();
    let same = runs.windows(2).all(|w| w[0] == w[1]) && !runs[0].is_empty();
    check(same, format!("{} byte reports identical over threads 1, 4, default x2", runs[0].len()))
}

fn main() {
    let start = Instant::now();
    let ms = models();
    let mut results: Vec<(u32, &str, Outcome)> = vec![(1, "algebra", algebra())];
    match sweep(&ms) {
        Ok(s) => {
            results.push((
                2,
                "local invariance",
                check(
                    s.local <= INVARIANCE_TOL,
                    format!("max relative residual {:.2e} over 3 models x {CONFIGS} configs (<= {INVARIANCE_TOL:.0e})", s.local),
                ),
            ));
            results.push((
                3,
                "covariant laws",
                check(
                    s.covariant <= COVARIANT_TOL && s.second <= SECOND_DERIVATIVE_TOL,
                    format!(
                        "first {:.2e} (<= {COVARIANT_TOL:.0e}), second {:.2e} (<= {SECOND_DERIVATIVE_TOL:.0e})",
                        s.covariant, s.second
                    ),
                ),
            ));
            let ledger = sign_ledger(&ms);
            let votes_ok = s.sign_votes >= SIGN_VOTES_NEEDED && s.sign_trials == CONFIGS as usize;
            let detail = format!(
                "{}/{} configs; worst adopted {:.2e}, weakest rejected {:.2e}; {}",
                s.sign_votes,
                s.sign_trials,
                s.worst_adopted,
                s.weakest_rejected,
                ledger.as_ref().unwrap_or_else(|e| e)
            );
            results.push((4, "commutator sign", check(votes_ok && ledger.is_ok(), detail)));
        }
        Err(e) => {
            for (n, name) in [(2, "local invariance"), (3, "covariant laws"), (4, "commutator sign")] {
                results.push((n, name, Err(e.clone())));
            }
        }
    }
    results.push((5, "pure-gauge flatness", flatness(&ms)));
    results.push((6, "infinitesimal law", infinitesimal(&ms)));
    results.push((7, "electroweak", electroweak()));
    results.push((8, "negative controls", negative_controls()));
    results.push((9, "parser and exit codes", parser()));
    results.push((10, "determinism", determinism()));

    let elapsed = start.elapsed().as_secs_f64();
    let mut failures = 0;
    for (n, name, r) in &results {
        let (tag, detail) = match r {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {n:>2} {name}: {detail}");
    }
    let timing = elapsed <= BUDGET_SECS;
    println!("[{}] runtime {elapsed:.1}s (<= {BUDGET_SECS}s)", if timing { "PASS" } else { "FAIL" });
    if failures > 0 || !timing {
        std::process::exit(1);
    }
}
