//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Criterion 10 (CLI byte-determinism) lives in the CLI crate's tests.

mod common;

use bilimit_core::classify::{
    classify_absolute, classify_pringsheim, classify_regular, row_col_verdicts,
    successive_sum_check, ClassifierConfig,
};
use bilimit_core::fubini::{
    classify_integral_pringsheim, classify_integral_regular, fubini_check, strip_uniformity,
    FubiniConfig, FubiniError, IntegralClassifierConfig, StripOrientation,
};
use bilimit_core::integral::{iterated_rect, Integrand, IterationOrder, RectRegion};
use bilimit_core::series::PrefixSumTable;
use bilimit_core::verdict::Status;
use bilimit_core::zoo::{fixture, oracle_partial_sum, FixtureId};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn series_cfg(eps: f64, caps: usize) -> ClassifierConfig {
    ClassifierConfig {
        eps,
        cap_m: caps,
        cap_n: caps,
        ..ClassifierConfig::default()
    }
}

fn integral_cfg(eps: f64, cap: f64) -> IntegralClassifierConfig {
    IntegralClassifierConfig {
        eps,
        x_cap: cap,
        y_cap: cap,
        ..IntegralClassifierConfig::default()
    }
}

fn table(id: FixtureId, caps: usize) -> PrefixSumTable {
    fixture(id).table(caps, caps).unwrap().unwrap()
}

fn embed(id: FixtureId, caps: usize) -> Integrand {
    fixture(id).integrand(caps, caps).unwrap().unwrap()
}

#[test]
fn criterion_01_fixture_corner_fidelity() {
    let h = 0.5;
    let t3 = 1.0 / 3.0;
    let q = 0.25;
    let f5 = 0.2;
    let s6 = 1.0 / 6.0;
    // The visible 6x6 corner of each fixture, frozen literally.
    let corners: [(FixtureId, [[f64; 6]; 6]); 6] = [
        (
            FixtureId::Ex1,
            [
                [1.0, -1.0, 2.0, -2.0, 3.0, -3.0],
                [-1.0, 1.0, -2.0, 2.0, -3.0, 3.0],
                [2.0, -2.0, 0.0, 0.0, 0.0, 0.0],
                [-2.0, 2.0, 0.0, 0.0, 0.0, 0.0],
                [3.0, -3.0, 0.0, 0.0, 0.0, 0.0],
                [-3.0, 3.0, 0.0, 0.0, 0.0, 0.0],
            ],
        ),
        (
            FixtureId::Ex2,
            [
                [1.0, -1.0, 0.0, 0.0, 0.0, 0.0],
                [-1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, -1.0, 0.0, 0.0],
                [0.0, 0.0, -1.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 0.0, 1.0, -1.0],
                [0.0, 0.0, 0.0, 0.0, -1.0, 1.0],
            ],
        ),
        (
            FixtureId::Ex3,
            [
                [1.0, -1.0, 1.0, -1.0, 1.0, -1.0],
                [-1.0, 1.0, -1.0, 1.0, -1.0, 1.0],
                [1.0, -1.0, h, -h, h, -h],
                [-1.0, 1.0, -h, h, -h, h],
                [1.0, -1.0, h, -h, t3, -t3],
                [-1.0, 1.0, -h, h, -t3, t3],
            ],
        ),
        (
            FixtureId::Ex4,
            [
                [1.0, -1.0, 1.0, -1.0, 1.0, -1.0],
                [-1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            ],
        ),
        (
            FixtureId::Ex5,
            [
                [1.0, -1.0, 0.0, 0.0, 0.0, 0.0],
                [0.0, h, -h, 0.0, 0.0, 0.0],
                [0.0, 0.0, t3, -t3, 0.0, 0.0],
                [0.0, 0.0, 0.0, q, -q, 0.0],
                [0.0, 0.0, 0.0, 0.0, f5, -f5],
                [0.0, 0.0, 0.0, 0.0, 0.0, s6],
            ],
        ),
        (
            FixtureId::Fig6,
            [
                [1.0, -1.0, h, -h, t3, -t3],
                [-1.0, 1.0, -h, h, -t3, t3],
                [h, -h, t3, -t3, q, -q],
                [-h, h, -t3, t3, -q, q],
                [t3, -t3, q, -q, f5, -f5],
                [-t3, t3, -q, q, -f5, f5],
            ],
        ),
    ];
    for (id, matrix) in corners {
        let fx = fixture(id);
        let src = fx.source().unwrap();
        for (j, row) in matrix.iter().enumerate() {
            for (k, &want) in row.iter().enumerate() {
                let got = src.term(j as i64, k as i64);
                assert_eq!(got.re, want, "{id} term ({j},{k})");
                assert_eq!(got.im, 0.0);
            }
        }
    }
    println!("criterion 1 (fixture corner fidelity): PASS");
}

#[test]
fn criterion_02_oracle_equivalence() {
    for id in [FixtureId::Ex1, FixtureId::Ex2, FixtureId::Ex3] {
        let t = table(id, 64);
        let mut checked = 0;
        for m in 0..=64i64 {
            for n in 0..=64i64 {
                if let Some(expect) = oracle_partial_sum(id, m, n) {
                    let got = t.partial_sum(m, n).unwrap();
                    assert!(
                        (got - expect).norm() <= 1e-12,
                        "{id} s({m},{n}) = {got}, oracle {expect}"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 0, "{id} oracle covered no points");
    }
    println!("criterion 2 (oracle equivalence): PASS");
}

#[test]
fn criterion_03_verdict_matrix() {
    // ex1: Pringsheim converges to 0 (exactly, even at eps 1e-9); regular fails.
    let t = table(FixtureId::Ex1, 64);
    let p = classify_pringsheim(&t, &series_cfg(1e-9, 64)).unwrap();
    assert_eq!(p.status, Status::Converges);
    assert_eq!(p.limit.unwrap(), ZERO);
    let r = classify_regular(&t, &series_cfg(0.5, 64)).unwrap();
    assert_eq!(r.status, Status::Diverges);

    // ex2: Pringsheim fails; all rows and columns converge.
    let t = table(FixtureId::Ex2, 64);
    let p = classify_pringsheim(&t, &series_cfg(0.5, 64)).unwrap();
    assert_eq!(p.status, Status::Diverges);
    let mut c = series_cfg(0.5, 64);
    c.report_range = Some(48);
    let rc = row_col_verdicts(fixture(FixtureId::Ex2).source().unwrap(), &c).unwrap();
    assert!(rc.all_converge());

    // ex3: Pringsheim converges with limit near 0; rows and columns do not
    // all converge (at oscillation-scale eps every one of them diverges).
    let t = table(FixtureId::Ex3, 64);
    let p = classify_pringsheim(&t, &series_cfg(0.1, 64)).unwrap();
    assert_eq!(p.status, Status::Converges);
    assert!(p.limit.unwrap().norm() <= 0.1);
    let rc = row_col_verdicts(
        fixture(FixtureId::Ex3).source().unwrap(),
        &series_cfg(0.02, 64),
    )
    .unwrap();
    assert!(!rc.all_converge());
    assert!(rc.rows.iter().all(|v| v.is_diverges()));
    let r = classify_regular(&t, &series_cfg(0.5, 64)).unwrap();
    assert_eq!(r.status, Status::Diverges);

    // ex4: Pringsheim fails while every inner block vanishes identically.
    let t = table(FixtureId::Ex4, 64);
    let p = classify_pringsheim(&t, &series_cfg(0.5, 64)).unwrap();
    assert_eq!(p.status, Status::Diverges);
    for (m_hi, n_hi) in [(1, 1), (6, 6), (7, 23), (64, 64), (13, 2)] {
        assert_eq!(t.block_sum(1, 1, m_hi, n_hi).unwrap(), ZERO);
    }

    // ex5: regular converges, absolute diverges.
    let t = table(FixtureId::Ex5, 128);
    let r = classify_regular(&t, &series_cfg(1e-2, 128)).unwrap();
    assert_eq!(r.status, Status::Converges);
    let abs =
        PrefixSumTable::build_abs(fixture(FixtureId::Ex5).source().unwrap(), 128, 128).unwrap();
    let a = classify_absolute(&abs, &series_cfg(1e-2, 128)).unwrap();
    assert_eq!(a.status, Status::Diverges);

    // fig6 embedded (ex6): the integral converges regularly.
    let f6 = embed(FixtureId::Ex6, 1024);
    let r = classify_integral_regular(&f6, &integral_cfg(1e-2, 1024.0)).unwrap();
    assert_eq!(r.status, Status::Converges);

    // ex7: the integral converges to 0 in Pringsheim's sense but not regularly.
    let d = Integrand::DyadicBlocks;
    let p = classify_integral_pringsheim(&d, &integral_cfg(1e-2, 1024.0)).unwrap();
    assert_eq!(p.status, Status::Converges);
    assert_eq!(p.limit.unwrap(), ZERO);
    let r = classify_integral_regular(&d, &integral_cfg(1e-2, 1024.0)).unwrap();
    assert_eq!(r.status, Status::Diverges);

    println!("criterion 3 (verdict matrix): PASS");
}

#[test]
fn criterion_04_successive_summation() {
    for id in [FixtureId::Ex5, FixtureId::Fig6] {
        let t = table(id, 256);
        let rep = successive_sum_check(&t, &series_cfg(1e-2, 256)).unwrap();
        assert!(rep.passed);
        assert!(
            rep.gaps.iter().all(|&g| g < 1e-6),
            "{id} gaps {:?}",
            rep.gaps
        );
    }
    println!("criterion 4 (successive summation residuals): PASS");
}

#[test]
fn criterion_05_finite_fubini_identity() {
    let mut integrands: Vec<(String, Integrand)> = Vec::new();
    for id in [
        FixtureId::Ex1,
        FixtureId::Ex2,
        FixtureId::Ex3,
        FixtureId::Ex4,
        FixtureId::Ex5,
        FixtureId::Fig6,
    ] {
        integrands.push((id.to_string(), embed(id, 48)));
    }
    integrands.push(("ex7".to_string(), Integrand::DyadicBlocks));

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, f) in &integrands {
        for i in 0..100 {
            let x = rng.gen_range(0.0..40.0);
            let x1 = rng.gen_range(x..=40.0);
            let y = rng.gen_range(0.0..40.0);
            let y1 = rng.gen_range(y..=40.0);
            let r = RectRegion::new(x, x1, y, y1).unwrap();
            let direct = f.rect_integral(&r).unwrap();
            let inner_v = iterated_rect(f, &r, IterationOrder::InnerV).unwrap();
            let inner_u = iterated_rect(f, &r, IterationOrder::InnerU).unwrap();
            assert!(
                (direct - inner_v).norm() <= 1e-9,
                "{name} rect {i}: direct {direct} vs inner-v {inner_v}"
            );
            assert!(
                (direct - inner_u).norm() <= 1e-9,
                "{name} rect {i}: direct {direct} vs inner-u {inner_u}"
            );
        }
    }
    println!("criterion 5 (finite iterated-integral identity): PASS");
}

#[test]
fn criterion_06_successive_integration() {
    let f6 = embed(FixtureId::Ex6, 1024);
    let cfg = FubiniConfig {
        classify: integral_cfg(1e-2, 1024.0),
        residual_eps: 1e-7,
    };
    let rep = fubini_check(&f6, &cfg).unwrap();
    assert!(rep.stabilized);
    let combined = rep.residuals.i1_vs_i2 + rep.residuals.i1_vs_pringsheim;
    assert!(combined < 1e-6, "combined residual {combined}");
    for v in [rep.i1_limit, rep.i2_limit, rep.pringsheim] {
        assert!(v.norm() < 1e-9, "limit {v} should vanish");
    }

    match fubini_check(&Integrand::DyadicBlocks, &cfg) {
        Err(FubiniError::HypothesisRejected { verdict }) => {
            assert_eq!(verdict.status, Status::Diverges);
            let w = verdict.witness.expect("divergence carries a witness");
            assert!(
                (w.magnitude() - 0.125).abs() <= 1e-12,
                "witness mass {}",
                w.magnitude()
            );
        }
        other => panic!("dyadic field must be rejected, got {other:?}"),
    }
    println!("criterion 6 (successive integration): PASS");
}

#[test]
fn criterion_07_embedding_round_trip() {
    for id in [
        FixtureId::Ex1,
        FixtureId::Ex2,
        FixtureId::Ex3,
        FixtureId::Ex4,
        FixtureId::Ex5,
        FixtureId::Fig6,
    ] {
        let f = embed(id, 33);
        let t = table(id, 32);
        for m in 0..=32i64 {
            for n in 0..=32i64 {
                let i = f.partial_integral(m as f64, n as f64).unwrap();
                let s = t.partial_sum(m - 1, n - 1).unwrap();
                assert!(
                    (i - s).norm() <= 1e-12,
                    "{id}: I({m},{n}) = {i} vs s({},{}) = {s}",
                    m - 1,
                    n - 1
                );
            }
        }
    }
    println!("criterion 7 (cell embedding round trip): PASS");
}

#[test]
fn criterion_08_implication_lattice() {
    let implies = |a: Status, b: Status| a != Status::Converges || b == Status::Converges;

    // Built-in fixtures at their documented caps.
    for (id, caps) in [
        (FixtureId::Ex1, 64),
        (FixtureId::Ex2, 64),
        (FixtureId::Ex3, 64),
        (FixtureId::Ex4, 64),
        (FixtureId::Ex5, 128),
        (FixtureId::Fig6, 256),
    ] {
        let cfg = series_cfg(1e-2, caps);
        let src = fixture(id).source().unwrap().clone();
        let t = table(id, caps);
        let abs = PrefixSumTable::build_abs(&src, caps, caps).unwrap();
        let p = classify_pringsheim(&t, &cfg).unwrap();
        let r = classify_regular(&t, &cfg).unwrap();
        let a = classify_absolute(&abs, &cfg).unwrap();
        assert!(implies(a.status, r.status), "{id}: absolute => regular");
        assert!(implies(r.status, p.status), "{id}: regular => pringsheim");
        if r.status == Status::Converges {
            let rc = row_col_verdicts(&src, &cfg).unwrap();
            assert!(rc.all_converge(), "{id}: regular => rows/cols converge");
        }
    }

    // 100 seeded nonnegative sources: half crisply convergent, half crisply
    // divergent. The lattice must hold and Pringsheim must agree with
    // absolute convergence throughout.
    let cfg = series_cfg(1e-2, 64);
    for seed in 0..100u64 {
        let (src, expect_converges) = if seed % 2 == 0 {
            (random_geometric_source(seed), true)
        } else {
            (random_floor_source(seed), false)
        };
        let t = PrefixSumTable::build(&src, 64, 64).unwrap();
        let abs = PrefixSumTable::build_abs(&src, 64, 64).unwrap();
        let p = classify_pringsheim(&t, &cfg).unwrap();
        let r = classify_regular(&t, &cfg).unwrap();
        let a = classify_absolute(&abs, &cfg).unwrap();
        assert!(
            implies(a.status, r.status),
            "seed {seed}: absolute => regular"
        );
        assert!(
            implies(r.status, p.status),
            "seed {seed}: regular => pringsheim"
        );
        assert_eq!(
            p.status, a.status,
            "seed {seed}: nonnegative pringsheim <=> absolute"
        );
        if expect_converges {
            assert_eq!(p.status, Status::Converges, "seed {seed}");
        } else {
            assert_eq!(p.status, Status::Diverges, "seed {seed}");
        }
    }
    println!("criterion 8 (implication lattice): PASS");
}

#[test]
fn criterion_09_dyadic_non_uniformity() {
    let cfg = IntegralClassifierConfig {
        eps: 0.1,
        x_cap: 1024.0,
        y_cap: 1024.0,
        ..IntegralClassifierConfig::default()
    };
    let rep = strip_uniformity(
        &Integrand::DyadicBlocks,
        1.0,
        &cfg,
        StripOrientation::Horizontal,
    )
    .unwrap();
    assert!(
        rep.rho.is_none(),
        "no rho within the cap: {:?}",
        rep.sup_table
    );
    assert!(
        rep.persistent_deviation >= 0.125 - 1e-12,
        "persistent deviation {}",
        rep.persistent_deviation
    );
    println!("criterion 9 (dyadic strip non-uniformity): PASS");
}
