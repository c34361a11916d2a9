//! Straight-line re-derivations of every model, checked against the library
//! on seeded random inputs.

use pathcast::models::walfisch::{MetroFactor, WiGeometry};
use pathcast::models::{
    cost231_hata_path_loss, ericsson_path_loss, okumura_path_loss, sui_path_loss, wi_los_path_loss,
    wi_nlos_path_loss, EricssonCoefficients,
};
use pathcast::{CurveTable, Environment, FidelityMode, RadioLink};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const POINTS: usize = 500;
pub const TOL_DB: f64 = 1e-9;
pub const MODES: [FidelityMode; 2] = [FidelityMode::AsPrinted, FidelityMode::Corrected];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleModel {
    Sui,
    Okumura,
    Hata,
    WalfischNlos,
    WalfischLos,
    Ericsson,
}

impl OracleModel {
    pub const ALL: [OracleModel; 6] = [
        OracleModel::Sui,
        OracleModel::Okumura,
        OracleModel::Hata,
        OracleModel::WalfischNlos,
        OracleModel::WalfischLos,
        OracleModel::Ericsson,
    ];
}

/// Evaluates `points` random inputs; returns the largest absolute deviation.
pub fn check(model: OracleModel, mode: FidelityMode, points: usize) -> Result<f64, String> {
    let seed = 0x5eed ^ (model as u64) << 8 ^ (mode == FidelityMode::Corrected) as u64;
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let table = CurveTable::builtin();
    let mut worst: f64 = 0.0;
    let mut floored = 0usize;
    for _ in 0..points {
        let (label, got, want) = match model {
            OracleModel::Sui => sui_case(&mut r),
            OracleModel::Okumura => okumura_case(&mut r, &table),
            OracleModel::Hata => hata_case(&mut r, mode),
            OracleModel::WalfischNlos => {
                let (label, got, want, floor) = wi_nlos_case(&mut r, mode);
                floored += floor as usize;
                (label, got, want)
            }
            OracleModel::WalfischLos => wi_los_case(&mut r),
            OracleModel::Ericsson => ericsson_case(&mut r, mode),
        };
        let diff = (got - want).abs();
        if diff.is_nan() || diff > TOL_DB {
            return Err(format!("{label} ({mode}): library {got} vs oracle {want}"));
        }
        worst = worst.max(diff);
    }
    if model == OracleModel::WalfischNlos && floored == 0 {
        return Err("no sample exercised the free-space floor".into());
    }
    Ok(worst)
}

fn lg(x: f64) -> f64 {
    x.log10()
}

fn fspl(f_mhz: f64, d_m: f64) -> f64 {
    let lambda = 299_792_458.0 / (f_mhz * 1e6);
    20.0 * lg(4.0 * std::f64::consts::PI * d_m / lambda)
}

fn pick_env(r: &mut ChaCha8Rng) -> Environment {
    Environment::ALL[r.gen_range(0..3)]
}

fn sui_case(r: &mut ChaCha8Rng) -> (String, f64, f64) {
    let f = r.gen_range(500.0..6000.0);
    let d = r.gen_range(150.0..50_000.0);
    let hr = r.gen_range(1.0..10.0);
    let hb = r.gen_range(10.0..80.0);
    let env = pick_env(r);
    let (a, b, c) = match env {
        Environment::Urban => (4.6, 0.0075, 12.6),
        Environment::Suburban => (4.0, 0.0065, 17.1),
        Environment::Rural => (3.6, 0.005, 20.0),
    };
    let gamma = a - b * hb + c / hb;
    let xh = match env {
        Environment::Rural => -20.0 * lg(hr / 2000.0),
        _ => -10.8 * lg(hr / 2000.0),
    };
    let alpha = if env == Environment::Urban { 6.6 } else { 5.2 };
    let s = 0.65 * lg(f).powi(2) - 1.3 * lg(f) + alpha;
    let want = fspl(f, 100.0) + 10.0 * gamma * lg(d / 100.0) + 6.0 * lg(f / 2000.0) + xh + s;
    let link = RadioLink::new(f, d, hb, hr).unwrap();
    let got = sui_path_loss(&link, env, true).unwrap().total_db;
    (format!("sui f={f} d={d} hb={hb} hr={hr} {env}"), got, want)
}

/// Bilinear interpolation in (log f, log d) written from the node grid alone.
fn amu_oracle(t: &CurveTable, f: f64, d_km: f64) -> f64 {
    let fs = t.frequencies_mhz();
    let ds = t.distances_km();
    let i = (0..fs.len() - 1).find(|&i| f <= fs[i + 1]).unwrap();
    let j = (0..ds.len() - 1).find(|&j| d_km <= ds[j + 1]).unwrap();
    let u = (lg(f) - lg(fs[i])) / (lg(fs[i + 1]) - lg(fs[i]));
    let v = (lg(d_km) - lg(ds[j])) / (lg(ds[j + 1]) - lg(ds[j]));
    let q = |a: usize, b: usize| t.amu_node(a, b);
    (1.0 - u) * (1.0 - v) * q(i, j)
        + u * (1.0 - v) * q(i + 1, j)
        + (1.0 - u) * v * q(i, j + 1)
        + u * v * q(i + 1, j + 1)
}

fn garea_oracle(t: &CurveTable, f: f64, env: Environment) -> f64 {
    if env == Environment::Urban {
        return 0.0;
    }
    let rows = t.garea_rows(env).unwrap();
    let k = (0..rows.len() - 1).find(|&k| f <= rows[k + 1].0).unwrap();
    let (f0, g0) = rows[k];
    let (f1, g1) = rows[k + 1];
    let u = (lg(f) - lg(f0)) / (lg(f1) - lg(f0));
    (1.0 - u) * g0 + u * g1
}

fn okumura_case(r: &mut ChaCha8Rng, table: &CurveTable) -> (String, f64, f64) {
    let f = r.gen_range(100.0..3000.0);
    let d = r.gen_range(1000.0..100_000.0);
    let hr = r.gen_range(1.0..10.0);
    let hb = r.gen_range(20.0..1000.0);
    let env = pick_env(r);
    let want = fspl(f, d) + amu_oracle(table, f, d / 1000.0)
        - 20.0 * lg(hb / 200.0)
        - 10.0 * lg(hr / 3.0)
        - garea_oracle(table, f, env);
    let link = RadioLink::new(f, d, hb, hr).unwrap();
    let got = okumura_path_loss(&link, env, table).unwrap().total_db;
    (
        format!("okumura f={f} d={d} hb={hb} hr={hr} {env}"),
        got,
        want,
    )
}

fn hata_case(r: &mut ChaCha8Rng, mode: FidelityMode) -> (String, f64, f64) {
    let f = r.gen_range(1500.0..2000.0);
    let d = r.gen_range(1000.0..20_000.0);
    let hr = r.gen_range(1.0..10.0);
    let hb = r.gen_range(30.0..200.0);
    let env = pick_env(r);
    let a_hr = match (env, mode) {
        (Environment::Urban, _) => 3.2 * lg(11.75 * hr).powi(2) - 4.97,
        (_, FidelityMode::Corrected) => (1.1 * lg(f) - 0.7) * hr - (1.56 * lg(f) - 0.8),
        (_, FidelityMode::AsPrinted) => 1.1 * lg(f) - 0.7 * hr - (1.58 * f - 0.8),
    };
    let c = if env == Environment::Urban { 3.0 } else { 0.0 };
    let want =
        46.3 + 33.9 * lg(f) - 13.82 * lg(hb) - a_hr + (44.9 - 6.55 * lg(hb)) * lg(d / 1000.0) + c;
    let link = RadioLink::new(f, d, hb, hr).unwrap();
    let got = cost231_hata_path_loss(&link, env, mode).unwrap().total_db;
    (format!("hata f={f} d={d} hb={hb} hr={hr} {env}"), got, want)
}

fn random_geometry(r: &mut ChaCha8Rng, hr: f64) -> WiGeometry {
    let metro_factor = match r.gen_range(0..3) {
        0 => MetroFactor::Suburban,
        1 => MetroFactor::Metropolitan,
        _ => MetroFactor::Custom(r.gen_range(0.2..2.0)),
    };
    WiGeometry {
        street_width_m: r.gen_range(5.0..50.0),
        building_separation_m: r.gen_range(10.0..100.0),
        roof_height_m: r.gen_range(hr + 0.5..40.0),
        orientation_deg: r.gen_range(0.0..=90.0),
        metro_factor,
        los: false,
    }
}

fn wi_nlos_oracle(g: &WiGeometry, f: f64, d_m: f64, hb: f64, hr: f64, mode: FidelityMode) -> f64 {
    let d = d_m / 1000.0;
    let phi = g.orientation_deg;
    let l_ori = if phi < 35.0 {
        -10.0 + 0.354 * phi
    } else if phi < 55.0 {
        2.5 + 0.075 * (phi - 35.0)
    } else {
        4.0 - 0.114 * (phi - 55.0)
    };
    let l_rts = -16.9 - 10.0 * lg(g.street_width_m)
        + 10.0 * lg(f)
        + 20.0 * lg(g.roof_height_m - hr)
        + l_ori;

    let dh = hb - g.roof_height_m;
    let k = match g.metro_factor {
        MetroFactor::Suburban => 0.7,
        MetroFactor::Metropolitan => 1.5,
        MetroFactor::Custom(k) => k,
    };
    let (l_bsh, k_a, k_d, k_f) = if dh > 0.0 {
        let l_bsh = -18.0 * lg(1.0 + dh);
        match mode {
            FidelityMode::Corrected => (l_bsh, 54.0, 18.0, -4.0 + k * (f / 925.0 - 1.0)),
            FidelityMode::AsPrinted => (
                l_bsh,
                54.0,
                18.0 + 15.0 * dh / g.roof_height_m,
                -4.0 + k * f / 924.0,
            ),
        }
    } else {
        let k_a_std = if d >= 0.5 {
            54.0 - 0.8 * dh
        } else {
            54.0 - 0.8 * dh * d / 0.5
        };
        let k_d_std = 18.0 - 15.0 * dh / g.roof_height_m;
        match mode {
            FidelityMode::Corrected => (0.0, k_a_std, k_d_std, -4.0 + k * (f / 925.0 - 1.0)),
            FidelityMode::AsPrinted if d > 0.5 => {
                (0.0, 54.0 + 0.8 * dh, 18.0, -4.0 + k * f / 924.0)
            }
            FidelityMode::AsPrinted => (0.0, k_a_std, k_d_std, -4.0 + k * f / 924.0),
        }
    };
    let l_msd = l_bsh + k_a + k_d * lg(d) + k_f * lg(f) - 9.0 * lg(g.building_separation_m);
    let l_o = 32.45 + 20.0 * lg(d) + 20.0 * lg(f);
    l_o + (l_rts + l_msd).max(0.0)
}

fn wi_nlos_case(r: &mut ChaCha8Rng, mode: FidelityMode) -> (String, f64, f64, bool) {
    let f = r.gen_range(800.0..2000.0);
    let d = r.gen_range(20.0..5000.0);
    let hr = r.gen_range(1.0..3.0);
    let hb = r.gen_range(4.0..60.0);
    let g = random_geometry(r, hr);
    let link = RadioLink::new(f, d, hb, hr).unwrap();
    let res = wi_nlos_path_loss(&g, &link, mode).unwrap();
    let floored = res.component("diffraction_floor").is_some();
    let want = wi_nlos_oracle(&g, f, d, hb, hr, mode);
    (
        format!("wi nlos f={f} d={d} hb={hb} hr={hr} {g:?}"),
        res.total_db,
        want,
        floored,
    )
}

fn wi_los_case(r: &mut ChaCha8Rng) -> (String, f64, f64) {
    let f = r.gen_range(800.0..2000.0);
    let d = r.gen_range(20.0..5000.0);
    let link = RadioLink::new(f, d, 30.0, 3.0).unwrap();
    let got = wi_los_path_loss(&link).unwrap().total_db;
    let want = 42.64 + 26.0 * lg(d / 1000.0) + 20.0 * lg(f);
    (format!("wi los f={f} d={d}"), got, want)
}

fn ericsson_case(r: &mut ChaCha8Rng, mode: FidelityMode) -> (String, f64, f64) {
    let f = r.gen_range(150.0..3000.0);
    let d = r.gen_range(200.0..50_000.0);
    let hr = r.gen_range(1.0..10.0);
    let hb = r.gen_range(15.0..200.0);
    let c = EricssonCoefficients {
        a0: r.gen_range(20.0..50.0),
        a1: r.gen_range(20.0..40.0),
        a2: r.gen_range(5.0..20.0),
        a3: r.gen_range(0.0..1.0),
    };
    let rx = match mode {
        FidelityMode::AsPrinted => 3.2 * lg(11.75).powi(2),
        FidelityMode::Corrected => 3.2 * lg(11.75 * hr).powi(2),
    };
    let g = 44.49 * lg(f) - 4.78 * lg(f).powi(2);
    let ld = lg(d / 1000.0);
    let want = c.a0 + c.a1 * ld + c.a2 * lg(hb) + c.a3 * lg(hb) * ld - rx + g;
    let link = RadioLink::new(f, d, hb, hr).unwrap();
    let got = ericsson_path_loss(&link, &c, mode).unwrap().total_db;
    (
        format!("ericsson f={f} d={d} hb={hb} hr={hr} {c:?}"),
        got,
        want,
    )
}
