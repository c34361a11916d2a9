//! Okumura median-attenuation and area-gain curve tables.
//!
//! The curve family is only published graphically, so the data travels as a
//! small CSV asset:
//!
//! ```text
//! # comments are ignored
//! AMU,1,2,5,10          <- distances in km, strictly increasing
//! 100,15.1,17.8,21.4,24.4
//! 1000,21.1,24.1,28.0,31.0
//!
//! GAREA,freq_mhz,environment,gain_db
//! 100,suburban,6.0
//! 1000,suburban,10.2
//! # source: <provenance, required>
//! ```
//!
//! Lookups interpolate bilinearly in (log f, log d) and reject points outside
//! the grid unless [`BoundsPolicy::Clamp`] is requested.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;

use crate::error::{Error, Result};
use crate::models::Environment;

const BUILTIN_CSV: &str = include_str!("../data/okumura_default.csv");

/// What to do with a lookup outside the sampled grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundsPolicy {
    #[default]
    Reject,
    /// Clamp to the nearest edge and annotate the lookup.
    Clamp,
}

/// A lookup result plus any clamping annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct Lookup {
    pub value_db: f64,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    frequencies_mhz: Vec<f64>,
    distances_km: Vec<f64>,
    /// Row-major: `amu[i][j]` is at `frequencies_mhz[i]`, `distances_km[j]`.
    amu: Vec<Vec<f64>>,
    garea: BTreeMap<Environment, Vec<(f64, f64)>>,
    source_tag: String,
}

impl CurveTable {
    /// Builds and validates a table from its parts.
    ///
    /// `garea_rows` holds `(frequency_mhz, environment, gain_db)` triples in any order.
    pub fn new(
        frequencies_mhz: Vec<f64>,
        distances_km: Vec<f64>,
        amu: Vec<Vec<f64>>,
        garea_rows: Vec<(f64, Environment, f64)>,
        source_tag: impl Into<String>,
    ) -> Result<Self> {
        check_axis("frequency", &frequencies_mhz)?;
        check_axis("distance", &distances_km)?;
        if amu.len() != frequencies_mhz.len() {
            return Err(Error::CurveInvariant(format!(
                "rectangular grid: {} frequency rows but {} value rows",
                frequencies_mhz.len(),
                amu.len()
            )));
        }
        for (row, f) in amu.iter().zip(&frequencies_mhz) {
            if row.len() != distances_km.len() {
                return Err(Error::CurveInvariant(format!(
                    "rectangular grid: row for {f} MHz has {} values, expected {}",
                    row.len(),
                    distances_km.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::CurveInvariant(format!(
                    "finite cells: row for {f} MHz contains {v}"
                )));
            }
        }

        let mut garea: BTreeMap<Environment, Vec<(f64, f64)>> = BTreeMap::new();
        for (f, env, gain) in garea_rows {
            if !(f > 0.0 && f.is_finite()) || !gain.is_finite() {
                return Err(Error::CurveInvariant(format!(
                    "area gain row ({f}, {env}, {gain}) is not finite/positive"
                )));
            }
            if env == Environment::Urban && gain != 0.0 {
                return Err(Error::CurveInvariant(format!(
                    "urban area gain must be 0 dB (got {gain} dB at {f} MHz)"
                )));
            }
            garea.entry(env).or_default().push((f, gain));
        }
        for (env, rows) in garea.iter_mut() {
            rows.sort_by(|a, b| a.0.total_cmp(&b.0));
            if rows.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::CurveInvariant(format!(
                    "duplicate area gain frequency for {env}"
                )));
            }
        }

        let source_tag = source_tag.into();
        if source_tag.trim().is_empty() {
            return Err(Error::CurveInvariant("source tag is required".into()));
        }

        Ok(CurveTable {
            frequencies_mhz,
            distances_km,
            amu,
            garea,
            source_tag,
        })
    }

    /// The table bundled with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_CSV).expect("bundled curve table is valid")
    }

    pub fn from_reader(mut reader: impl Read) -> Result<Self> {
        let mut text = String::new();
        reader
            .read_to_string(&mut text)
            .map_err(|e| Error::CurveParse {
                line: 0,
                message: e.to_string(),
            })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_table(text)
    }

    pub fn frequencies_mhz(&self) -> &[f64] {
        &self.frequencies_mhz
    }

    pub fn distances_km(&self) -> &[f64] {
        &self.distances_km
    }

    pub fn amu_node(&self, freq_index: usize, dist_index: usize) -> f64 {
        self.amu[freq_index][dist_index]
    }

    /// Area-gain samples for one environment, sorted by frequency.
    pub fn garea_rows(&self, environment: Environment) -> Option<&[(f64, f64)]> {
        self.garea.get(&environment).map(Vec::as_slice)
    }

    pub fn source_tag(&self) -> &str {
        &self.source_tag
    }

    /// Median attenuation A_mu(f, d) with out-of-grid points rejected.
    pub fn amu_lookup(&self, frequency_mhz: f64, distance_m: f64) -> Result<f64> {
        self.amu_lookup_with(frequency_mhz, distance_m, BoundsPolicy::Reject)
            .map(|l| l.value_db)
    }

    pub fn amu_lookup_with(
        &self,
        frequency_mhz: f64,
        distance_m: f64,
        policy: BoundsPolicy,
    ) -> Result<Lookup> {
        let mut notes = Vec::new();
        let (fi, ft) = locate(
            "frequency_mhz",
            &self.frequencies_mhz,
            frequency_mhz,
            policy,
            &mut notes,
        )?;
        let (di, dt) = locate(
            "distance_km",
            &self.distances_km,
            distance_m / 1000.0,
            policy,
            &mut notes,
        )?;
        let lerp = |a: f64, b: f64, t: f64| (1.0 - t) * a + t * b;
        let g = &self.amu;
        let (fj, dj) = (next(fi, ft), next(di, dt));
        let lo = lerp(g[fi][di], g[fi][dj], dt);
        let hi = lerp(g[fj][di], g[fj][dj], dt);
        Ok(Lookup {
            value_db: lerp(lo, hi, ft),
            notes,
        })
    }

    /// Area gain G_AREA(f, env). Urban is the reference environment and is
    /// always 0 dB.
    pub fn garea_lookup(&self, frequency_mhz: f64, environment: Environment) -> Result<f64> {
        self.garea_lookup_with(frequency_mhz, environment, BoundsPolicy::Reject)
            .map(|l| l.value_db)
    }

    pub fn garea_lookup_with(
        &self,
        frequency_mhz: f64,
        environment: Environment,
        policy: BoundsPolicy,
    ) -> Result<Lookup> {
        if environment == Environment::Urban {
            return Ok(Lookup {
                value_db: 0.0,
                notes: Vec::new(),
            });
        }
        let rows = self
            .garea
            .get(&environment)
            .ok_or_else(|| Error::MissingEnvironment(environment.to_string()))?;
        if rows.len() == 1 {
            return Ok(Lookup {
                value_db: rows[0].1,
                notes: Vec::new(),
            });
        }
        let freqs: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let mut notes = Vec::new();
        let (i, t) = locate("frequency_mhz", &freqs, frequency_mhz, policy, &mut notes)?;
        let j = next(i, t);
        Ok(Lookup {
            value_db: (1.0 - t) * rows[i].1 + t * rows[j].1,
            notes,
        })
    }

    /// Serializes back into the CSV carrier format.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str("AMU");
        for d in &self.distances_km {
            let _ = write!(out, ",{d}");
        }
        out.push('\n');
        for (f, row) in self.frequencies_mhz.iter().zip(&self.amu) {
            let _ = write!(out, "{f}");
            for v in row {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out.push_str("\nGAREA,freq_mhz,environment,gain_db\n");
        for (env, rows) in &self.garea {
            for (f, g) in rows {
                let _ = writeln!(out, "{f},{env},{g}");
            }
        }
        let _ = writeln!(out, "# source: {}", self.source_tag);
        out
    }
}

fn next(i: usize, t: f64) -> usize {
    if t == 0.0 {
        i
    } else {
        i + 1
    }
}

fn check_axis(axis: &str, values: &[f64]) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::CurveInvariant(format!(
            "{axis} axis: >= 2 samples required (got {})",
            values.len()
        )));
    }
    if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::CurveInvariant(format!(
            "{axis} axis: samples must be finite and positive"
        )));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::CurveInvariant(format!(
            "{axis} axis: samples must be strictly increasing"
        )));
    }
    Ok(())
}

/// Finds the cell holding `x` on a sorted axis and the fractional position
/// within it, measured in log space. Nodes map to `t == 0` exactly, except the
/// last node which maps to `t == 1` of the final cell.
fn locate(
    axis: &'static str,
    samples: &[f64],
    x: f64,
    policy: BoundsPolicy,
    notes: &mut Vec<String>,
) -> Result<(usize, f64)> {
    let (min, max) = (samples[0], samples[samples.len() - 1]);
    let x = if x < min || x > max || x.is_nan() {
        match policy {
            BoundsPolicy::Reject => {
                return Err(Error::OutOfGrid {
                    axis,
                    value: x,
                    min,
                    max,
                })
            }
            BoundsPolicy::Clamp => {
                let clamped = if x < min || x.is_nan() { min } else { max };
                notes.push(format!("{axis} {x} clamped to table bound {clamped}"));
                clamped
            }
        }
    } else {
        x
    };

    let n = samples.len();
    if x == max {
        return Ok((n - 2, 1.0));
    }
    // Largest i with samples[i] <= x.
    let i = samples.partition_point(|&s| s <= x) - 1;
    if samples[i] == x {
        return Ok((i, 0.0));
    }
    let (l0, l1) = (samples[i].log10(), samples[i + 1].log10());
    Ok((i, (x.log10() - l0) / (l1 - l0)))
}

fn parse_number(field: &str, line: usize, what: &str) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| Error::CurveParse {
        line,
        message: format!("malformed {what} '{}'", field.trim()),
    })?;
    if !v.is_finite() {
        return Err(Error::CurveParse {
            line,
            message: format!("non-finite {what} '{}'", field.trim()),
        });
    }
    Ok(v)
}

#[derive(PartialEq)]
enum Section {
    Start,
    Amu,
    Garea,
}

fn parse_table(text: &str) -> Result<CurveTable> {
    let mut section = Section::Start;
    let mut distances: Vec<f64> = Vec::new();
    let mut frequencies: Vec<f64> = Vec::new();
    let mut grid: Vec<Vec<f64>> = Vec::new();
    let mut garea_rows = Vec::new();
    let mut source: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(tag) = comment.trim_start().strip_prefix("source:") {
                source = Some(tag.trim().to_string());
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        match fields[0] {
            "AMU" => {
                if section != Section::Start {
                    return Err(Error::CurveParse {
                        line: line_no,
                        message: "duplicate AMU header".into(),
                    });
                }
                for f in &fields[1..] {
                    distances.push(parse_number(f, line_no, "distance")?);
                }
                if distances.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::CurveParse {
                        line: line_no,
                        message: "distances must be strictly increasing".into(),
                    });
                }
                section = Section::Amu;
            }
            "GAREA" => {
                if section != Section::Amu {
                    return Err(Error::CurveParse {
                        line: line_no,
                        message: "GAREA section must follow the AMU grid".into(),
                    });
                }
                if fields[1..] != ["freq_mhz", "environment", "gain_db"] {
                    return Err(Error::CurveParse {
                        line: line_no,
                        message: "expected header GAREA,freq_mhz,environment,gain_db".into(),
                    });
                }
                section = Section::Garea;
            }
            _ => match section {
                Section::Start => {
                    return Err(Error::CurveParse {
                        line: line_no,
                        message: "expected AMU header line".into(),
                    })
                }
                Section::Amu => {
                    let f = parse_number(fields[0], line_no, "frequency")?;
                    if let Some(&prev) = frequencies.last() {
                        if f <= prev {
                            return Err(Error::CurveParse {
                                line: line_no,
                                message: "frequencies must be strictly increasing".into(),
                            });
                        }
                    }
                    if fields.len() - 1 != distances.len() {
                        return Err(Error::CurveParse {
                            line: line_no,
                            message: format!(
                                "non-rectangular grid: {} values for {} distances",
                                fields.len() - 1,
                                distances.len()
                            ),
                        });
                    }
                    let row = fields[1..]
                        .iter()
                        .map(|v| parse_number(v, line_no, "attenuation"))
                        .collect::<Result<Vec<_>>>()?;
                    frequencies.push(f);
                    grid.push(row);
                }
                Section::Garea => {
                    if fields.len() != 3 {
                        return Err(Error::CurveParse {
                            line: line_no,
                            message: "area gain rows need freq_mhz,environment,gain_db".into(),
                        });
                    }
                    let f = parse_number(fields[0], line_no, "frequency")?;
                    let env: Environment = fields[1].parse().map_err(|e| Error::CurveParse {
                        line: line_no,
                        message: e,
                    })?;
                    let g = parse_number(fields[2], line_no, "gain")?;
                    garea_rows.push((f, env, g));
                }
            },
        }
    }

    if section == Section::Start {
        return Err(Error::CurveParse {
            line: 0,
            message: "missing AMU header".into(),
        });
    }
    let source = source
        .ok_or_else(|| Error::CurveInvariant("missing '# source:' provenance line".into()))?;
    CurveTable::new(frequencies, distances, grid, garea_rows, source)
}
