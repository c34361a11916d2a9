//! Property checks driven by a deterministic proptest runner.

use pathcast::models::sui::{sui_gamma, SuiTerrain};
use pathcast::models::walfisch::WiGeometry;
use pathcast::models::{
    cost231_hata_path_loss, ericsson_path_loss, free_space_loss, okumura_path_loss, sui_path_loss,
    sui_reference_loss, wi_los_path_loss, wi_nlos_path_loss, EricssonCoefficients,
};
use pathcast::scenario::ModelId;
use pathcast::{
    evaluate, invert_cell_range, sweep, CurveTable, Environment, FidelityMode, RadioLink, Scenario,
    Spacing,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const CASES: u32 = 256;

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

fn env() -> impl Strategy<Value = Environment> {
    prop_oneof![
        Just(Environment::Urban),
        Just(Environment::Suburban),
        Just(Environment::Rural)
    ]
}

fn mode() -> impl Strategy<Value = FidelityMode> {
    prop_oneof![Just(FidelityMode::AsPrinted), Just(FidelityMode::Corrected)]
}

fn model() -> impl Strategy<Value = ModelId> {
    proptest::sample::select(ModelId::ALL.to_vec())
}

fn scenario(env: Environment, f: f64, d: f64, hb: f64, hr: f64, mode: FidelityMode) -> Scenario {
    let mut s = Scenario::defaults(env, f, hb).unwrap();
    s.link.distance_m = d;
    s.link.rx_height_m = hr;
    s.mode = mode;
    s
}

pub fn additivity(cases: u32) -> Result<(), String> {
    let table = CurveTable::builtin();
    let strat = (
        model(),
        env(),
        mode(),
        800.0..2000.0f64,
        1000.0..20_000.0f64,
        20.0..100.0f64,
        1.0..10.0f64,
        any::<bool>(),
        any::<bool>(),
    );
    run(
        cases,
        strat,
        |(m, e, md, f, d, hb, hr, margin, shadowing)| {
            let mut s = scenario(e, f, d, hb, hr, md);
            s.apply_shadow_margin = margin;
            s.include_sui_shadowing = shadowing;
            let r =
                evaluate(m, &s, Some(&table)).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let sum: f64 = r.components.iter().map(|c| c.value_db).sum();
            prop_assert!(
                (r.total_db - sum).abs() <= 1e-9,
                "{m} total {} sum {}",
                r.total_db,
                sum
            );
            Ok(())
        },
    )
}

pub fn distance_monotonicity(cases: u32) -> Result<(), String> {
    let table = CurveTable::builtin();
    let strat = (
        env(),
        mode(),
        800.0..2000.0f64,
        1000.0..50_000.0f64,
        1.001..3.0f64,
        10.0..80.0f64,
        1.0..5.0f64,
    );
    run(cases, strat, |(e, md, f, d1, ratio, hb, hr)| {
        let d2 = d1 * ratio;
        let pair = |g: &dyn Fn(&RadioLink) -> f64| {
            let a = RadioLink::new(f, d1, hb, hr).unwrap();
            let b = RadioLink::new(f, d2, hb, hr).unwrap();
            (g(&a), g(&b))
        };
        let (a, b) = pair(&|l| sui_path_loss(l, e, true).unwrap().total_db);
        prop_assert!(b > a, "sui {a} -> {b}");
        let (a, b) = pair(&|l| cost231_hata_path_loss(l, e, md).unwrap().total_db);
        prop_assert!(b > a, "hata {a} -> {b}");
        let (a, b) = pair(&|l| wi_los_path_loss(l).unwrap().total_db);
        prop_assert!(b > a, "wi los {a} -> {b}");
        let c = EricssonCoefficients::default();
        let (a, b) = pair(&|l| ericsson_path_loss(l, &c, md).unwrap().total_db);
        prop_assert!(b > a, "ericsson {a} -> {b}");
        if d2 <= 100_000.0 {
            let (a, b) = pair(&|l| table.amu_lookup(l.frequency_mhz, l.distance_m).unwrap());
            prop_assert!(b >= a, "amu {a} -> {b}");
            let (a, b) = pair(&|l| okumura_path_loss(l, e, &table).unwrap().total_db);
            prop_assert!(b > a, "okumura {a} -> {b}");
        }
        Ok(())
    })
}

pub fn free_space_frequency_monotonicity(cases: u32) -> Result<(), String> {
    let strat = (100.0..6000.0f64, 1.001..2.0f64, 200.0..50_000.0f64);
    let geometry = WiGeometry::urban();
    run(cases, strat, |(f1, ratio, d)| {
        let f2 = f1 * ratio;
        prop_assert!(
            sui_reference_loss(f2, 100.0).unwrap() > sui_reference_loss(f1, 100.0).unwrap()
        );
        prop_assert!(free_space_loss(f2, d).unwrap() > free_space_loss(f1, d).unwrap());
        let l_o = |f: f64| {
            let link = RadioLink::new(f, d, 30.0, 3.0).unwrap();
            wi_nlos_path_loss(&geometry, &link, FidelityMode::Corrected)
                .unwrap()
                .component("free_space")
                .unwrap()
        };
        prop_assert!(l_o(f2) > l_o(f1));
        Ok(())
    })
}

pub fn gamma_ordering(cases: u32) -> Result<(), String> {
    run(cases, 10.0..=80.0f64, |hb| {
        let g = |t: SuiTerrain| sui_gamma(t.params(), hb).unwrap();
        prop_assert!(g(SuiTerrain::A) > g(SuiTerrain::B), "hb {hb}");
        prop_assert!(g(SuiTerrain::B) > g(SuiTerrain::C), "hb {hb}");
        Ok(())
    })
}

pub fn mode_agreement(cases: u32) -> Result<(), String> {
    let strat = (
        env(),
        150.0..3000.0f64,
        200.0..20_000.0f64,
        20.0..100.0f64,
        1.0..10.0f64,
    );
    run(cases, strat, |(e, f, d, hb, hr)| {
        let both = |m: ModelId, e: Environment| {
            let a = evaluate(m, &scenario(e, f, d, hb, hr, FidelityMode::AsPrinted), None).unwrap();
            let b = evaluate(m, &scenario(e, f, d, hb, hr, FidelityMode::Corrected), None).unwrap();
            (a, b)
        };
        let (a, b) = both(ModelId::Sui, e);
        prop_assert_eq!(a.total_db.to_bits(), b.total_db.to_bits());
        prop_assert_eq!(a.components, b.components);
        let (a, b) = both(ModelId::Cost231Hata, Environment::Urban);
        prop_assert_eq!(a.total_db.to_bits(), b.total_db.to_bits());
        let (a, b) = both(ModelId::WalfischIkegami, Environment::Rural);
        prop_assert_eq!(a.total_db.to_bits(), b.total_db.to_bits());
        Ok(())
    })
}

pub fn interpolation(cases: u32) -> Result<(), String> {
    let t = CurveTable::builtin();
    let nf = t.frequencies_mhz().len();
    let nd = t.distances_km().len();
    let strat = (0..nf - 1, 0..nd - 1, 0.0..=1.0f64, 0.0..=1.0f64, env());
    run(cases, strat, |(i, j, u, v, e)| {
        let fs = t.frequencies_mhz();
        let ds = t.distances_km();
        prop_assert_eq!(
            t.amu_lookup(fs[i], ds[j] * 1000.0).unwrap(),
            t.amu_node(i, j)
        );
        prop_assert_eq!(
            t.amu_lookup(fs[i + 1], ds[j + 1] * 1000.0).unwrap(),
            t.amu_node(i + 1, j + 1)
        );

        let f = fs[i] * (fs[i + 1] / fs[i]).powf(u);
        let d_km = ds[j] * (ds[j + 1] / ds[j]).powf(v);
        let value = t.amu_lookup(f, d_km * 1000.0).unwrap();
        let corners = [
            t.amu_node(i, j),
            t.amu_node(i + 1, j),
            t.amu_node(i, j + 1),
            t.amu_node(i + 1, j + 1),
        ];
        let lo = corners.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = corners.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(
            value >= lo - 1e-9 && value <= hi + 1e-9,
            "{value} outside [{lo}, {hi}]"
        );

        if let Some(rows) = t.garea_rows(e) {
            let k = i.min(rows.len() - 2);
            prop_assert_eq!(t.garea_lookup(rows[k].0, e).unwrap(), rows[k].1);
            let g = t
                .garea_lookup(rows[k].0 * (rows[k + 1].0 / rows[k].0).powf(u), e)
                .unwrap();
            let (a, b) = (rows[k].1.min(rows[k + 1].1), rows[k].1.max(rows[k + 1].1));
            prop_assert!(g >= a - 1e-9 && g <= b + 1e-9);
        }
        Ok(())
    })
}

pub fn sweep_determinism(cases: u32) -> Result<(), String> {
    let table = CurveTable::builtin();
    let strat = (
        model(),
        env(),
        mode(),
        800.0..2000.0f64,
        1000.0..5000.0f64,
        1.5..15.0f64,
        2usize..200,
        any::<bool>(),
    );
    run(
        cases,
        strat,
        |(m, e, md, f, d_min, ratio, steps, linear)| {
            let s = scenario(e, f, d_min, 30.0, 3.0, md);
            let d_max = d_min * ratio;
            let spacing = if linear {
                Spacing::Linear
            } else {
                Spacing::Log
            };
            let a = sweep(m, &s, d_min, d_max, steps, spacing, Some(&table)).unwrap();
            let b = sweep(m, &s, d_min, d_max, steps, spacing, Some(&table)).unwrap();
            prop_assert_eq!(a.len(), steps);
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a[0].0, d_min);
            prop_assert_eq!(a[steps - 1].0, d_max);
            for (d, r) in &a {
                let seq = evaluate(m, &s.with_distance(*d).unwrap(), Some(&table)).unwrap();
                prop_assert_eq!(seq.total_db.to_bits(), r.total_db.to_bits());
            }
            Ok(())
        },
    )
}

/// Round-trips random loss targets through the cell-range inversion; returns
/// the worst residual in dB.
pub fn inversion_round_trip(cases: u32) -> Result<f64, String> {
    let table = CurveTable::builtin();
    let monotone = vec![
        (ModelId::Sui, Environment::Urban),
        (ModelId::Sui, Environment::Rural),
        (ModelId::Okumura, Environment::Suburban),
        (ModelId::Cost231Hata, Environment::Urban),
        (ModelId::Cost231Hata, Environment::Rural),
        (ModelId::WalfischIkegami, Environment::Rural),
        (ModelId::Ericsson9999, Environment::Urban),
    ];
    let strat = (
        proptest::sample::select(monotone),
        mode(),
        1500.0..2000.0f64,
        20.0..100.0f64,
        0.0..=1.0f64,
    );
    let worst = std::cell::Cell::new(0.0f64);
    run(cases, strat, |((m, e), md, f, hb, p)| {
        let (d_min, d_max) = (1000.0, 20_000.0);
        let s = scenario(e, f, d_min, hb, 3.0, md);
        let pl = |d: f64| {
            evaluate(m, &s.with_distance(d).unwrap(), Some(&table))
                .unwrap()
                .total_db
        };
        let target = pl(d_min) + p * (pl(d_max) - pl(d_min));
        let d = invert_cell_range(m, &s, target, d_min, d_max, Some(&table))
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let residual = (pl(d) - target).abs();
        worst.set(worst.get().max(residual));
        prop_assert!(
            residual <= 1e-6,
            "{m} {e} target {target}: d {d} residual {residual}"
        );
        Ok(())
    })?;
    Ok(worst.get())
}
