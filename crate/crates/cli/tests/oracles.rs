use std::path::{Path, PathBuf};

use beew::fit::FitOptions;
use beew::FamilyId;
use beew_cli::commands::{
    cmd_compare, cmd_fit, cmd_simulate, parse_theta, CompareRequest, DataSpec, FitRequest,
    SimulateRequest,
};
use beew_cli::data::to_csv;

fn write_sample(
    dir: &Path,
    name: &str,
    model: FamilyId,
    theta: &str,
    n: usize,
    seed: u64,
) -> PathBuf {
    let (pairs, _) = cmd_simulate(&SimulateRequest {
        theta: parse_theta(model, theta).unwrap(),
        n,
        seed,
        out: None,
    });
    let path = dir.join(name);
    std::fs::write(&path, to_csv(&pairs)).unwrap();
    path
}

fn spec(path: PathBuf) -> DataSpec {
    DataSpec {
        path,
        tie_eps: 1e-9,
        rescale: 1.0,
    }
}

#[test]
fn fit_recovers_the_simulating_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let truth = [1.5, 0.5, 1.2, 0.04];
    let path = write_sample(
        dir.path(),
        "bge.csv",
        FamilyId::Exp,
        "1.5,0.5,1.2,0.04",
        500,
        7,
    );
    let doc = cmd_fit(&FitRequest {
        data: spec(path),
        model: FamilyId::Exp,
        options: FitOptions::default(),
        init: vec![],
    })
    .unwrap();
    assert!(doc.em.as_ref().unwrap().converged);
    for (p, t) in doc.parameters.iter().zip(truth) {
        let se = p.se.unwrap();
        assert!(
            (p.estimate - t).abs() <= 3.0 * se,
            "{}: {} ± {se} vs {t}",
            p.name,
            p.estimate
        );
    }
}

#[test]
fn half_of_the_pairs_tie_when_the_shared_shape_is_half_the_total() {
    let (pairs, doc) = cmd_simulate(&SimulateRequest {
        theta: parse_theta(FamilyId::Exp, "1,1,2,1").unwrap(),
        n: 100_000,
        seed: 11,
        out: None,
    });
    let fraction = doc.ties as f64 / pairs.len() as f64;
    assert!((fraction - 0.5).abs() < 0.005, "{fraction}");
}

#[test]
fn every_family_fits_its_own_simulations() {
    let cases = [
        (FamilyId::Exp, "1.5,0.5,1.2,0.04"),
        (FamilyId::Lfr, "1,0.6,0.8,0.5,1"),
        (FamilyId::Weib, "0.8,1.2,1,0.5,1.8"),
        (FamilyId::Gomp, "1.2,0.7,0.9,0.3,0.6"),
        (FamilyId::Wg, "1,0.8,0.6,0.7,0.5,1,0.8"),
        (FamilyId::Mwe, "0.9,1.4,1.1,1.2,2,1.5"),
    ];
    let dir = tempfile::tempdir().unwrap();
    for (i, (id, theta)) in cases.into_iter().enumerate() {
        let path = write_sample(
            dir.path(),
            &format!("{id}.csv"),
            id,
            theta,
            300,
            40 + i as u64,
        );
        let doc = cmd_fit(&FitRequest {
            data: spec(path),
            model: id,
            options: FitOptions::default(),
            init: vec![],
        })
        .unwrap_or_else(|e| panic!("{id}: {e}"));
        assert!(doc.loglik.is_finite(), "{id}");
        assert_eq!(doc.parameters.len(), beew::fit::free_parameter_count(id));
    }
}

#[test]
fn lrt_detects_a_linear_failure_rate() {
    let dir = tempfile::tempdir().unwrap();
    let seeds = 50;
    let mut rejections = 0;
    for seed in 0..seeds {
        let path = write_sample(
            dir.path(),
            "lfr.csv",
            FamilyId::Lfr,
            "1.5,0.5,1.2,0.2,1.5",
            500,
            seed,
        );
        let doc = cmd_compare(&CompareRequest {
            data: spec(path),
            base: FamilyId::Exp,
            full: FamilyId::Lfr,
            options: FitOptions::default(),
        })
        .unwrap();
        assert!(doc.full.loglik >= doc.base.loglik - 1e-6, "seed {seed}");
        if doc.lrt.p_value < 0.05 {
            rejections += 1;
        }
    }
    assert!(
        rejections as f64 >= 0.8 * seeds as f64,
        "{rejections}/{seeds}"
    );
}
