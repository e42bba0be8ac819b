//! Reproducible datasets: figure tables, CSV output and a checksummed JSON
//! manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::diffraction::{
    efficiency_vs_depth, efficiency_vs_drive, engrave_and_probe, ideal_efficiency,
    optical_depth_grid, EfficiencyCurve,
};
use crate::engraving::{
    contrast, engrave_small_angle, entrance_profile, EngravingRegime, GratingProfile, IdealKind,
    MediumSpec,
};
use crate::excitation::{
    replica_alignment_scan, sinusoidal_pump, PhaseGrid, PulsePairSpec, ScanDomain,
};
use crate::kinetics::LevelScheme;
use crate::{Error, Result};

/// `(1/L) int_0^L alpha(z, phi) dz` by the trapezoidal rule.
pub fn depth_averaged_absorption(profile: &GratingProfile) -> Vec<f64> {
    let z = profile.z();
    let n = profile.grid().len();
    let mut acc = vec![0.0; n];
    for i in 0..profile.n_z() {
        let h = z[i + 1] - z[i];
        for (k, a) in acc.iter_mut().enumerate() {
            *a += 0.5 * h * (profile.row(i)[k] + profile.row(i + 1)[k]);
        }
    }
    let length = z[z.len() - 1] - z[0];
    if length == 0.0 {
        return profile.entrance().to_vec();
    }
    acc.iter().map(|a| a / length).collect()
}

/// Figures that can be regenerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FigureId {
    /// Standard-scheme entrance profiles for several pumping powers.
    StandardEntrance,
    /// ISG entrance profiles for several pumping powers.
    IsgEntrance,
    /// Replica alignment scan of a finite-bandwidth pulse pair.
    ReplicaScan,
    /// Grating evolution with depth, both schemes and both regimes.
    DepthEvolution,
    /// Efficiency against optical depth: four engraved and two ideal curves.
    Efficiency,
    /// Efficiency against the number of engraving pulse pairs.
    PairCount,
    /// Calculated depth-averaged ISG profile.
    DepthAveraged,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        Self::StandardEntrance,
        Self::IsgEntrance,
        Self::ReplicaScan,
        Self::DepthEvolution,
        Self::Efficiency,
        Self::PairCount,
        Self::DepthAveraged,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::StandardEntrance => "2",
            Self::IsgEntrance => "3",
            Self::ReplicaScan => "5",
            Self::DepthEvolution => "6",
            Self::Efficiency => "7",
            Self::PairCount => "8",
            Self::DepthAveraged => "9-calc",
        }
    }
}

impl std::fmt::Display for FigureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

/// Optional changes to the default figure parameters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOverrides {
    pub standard: Option<LevelScheme>,
    pub isg: Option<LevelScheme>,
    /// `zeta <r>` for the standard scheme.
    pub standard_drive: Option<f64>,
    /// `xi <r>` for the ISG scheme.
    pub isg_drive: Option<f64>,
    /// `alpha0 L` of single-depth figures.
    pub optical_depth: Option<f64>,
    pub od_step: Option<f64>,
    pub od_max: Option<f64>,
    pub n_phi: Option<usize>,
    pub n_z: Option<usize>,
}

/// Whether a reference value is a simulation target or a measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceKind {
    /// Value a faithful simulation is expected to reach.
    Target,
    /// Laboratory measurement; not reproducible by the model.
    Measured,
}

/// A value to overlay on a plotted dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceMarker {
    pub series: String,
    pub quantity: String,
    pub x: Option<f64>,
    pub value: f64,
    pub kind: ReferenceKind,
}

fn marker(
    series: &str,
    quantity: &str,
    x: Option<f64>,
    value: f64,
    kind: ReferenceKind,
) -> ReferenceMarker {
    ReferenceMarker {
        series: series.into(),
        quantity: quantity.into(),
        x,
        value,
        kind,
    }
}

/// One table row: a series label and one value per numeric column.
#[derive(Debug, Clone, PartialEq)]
pub struct DataRow {
    pub series: String,
    pub values: Vec<f64>,
}

/// Table behind one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureDataset {
    pub id: FigureId,
    /// Numeric column names; the CSV adds a leading `series` column.
    pub columns: Vec<String>,
    pub rows: Vec<DataRow>,
    pub metadata: BTreeMap<String, Value>,
    pub references: Vec<ReferenceMarker>,
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 || (1e-5..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl FigureDataset {
    fn new(id: FigureId, columns: &[&str]) -> Self {
        Self {
            id,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
            references: Vec::new(),
        }
    }

    fn push(&mut self, series: &str, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(DataRow {
            series: series.to_string(),
            values,
        });
    }

    fn meta(&mut self, key: &str, value: Value) {
        self.metadata.insert(key.to_string(), value);
    }

    /// Names of the series in order of first appearance.
    pub fn series(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.series.as_str()) {
                out.push(&r.series);
            }
        }
        out
    }

    /// Values of `column` for the rows of `series`.
    pub fn column(&self, series: &str, column: &str) -> Option<Vec<f64>> {
        let c = self.columns.iter().position(|n| n == column)?;
        Some(
            self.rows
                .iter()
                .filter(|r| r.series == series)
                .map(|r| r.values[c])
                .collect(),
        )
    }

    /// Comma-separated text with a header row and LF line endings.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::from("series");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.series);
            for v in &r.values {
                if !v.is_finite() {
                    return Err(Error::invalid(
                        "dataset",
                        format!("non-finite value in series `{}`", r.series),
                    ));
                }
                let _ = write!(out, ",{}", format_number(*v));
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn file_name(&self) -> String {
        format!("figure-{}.csv", self.id)
    }
}

/// Hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Manifest entry for one written dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub file: String,
    pub columns: Vec<String>,
    pub rows: usize,
    pub sha256: String,
    pub metadata: BTreeMap<String, Value>,
    pub references: Vec<ReferenceMarker>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub generator: String,
    pub datasets: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn new(datasets: Vec<ManifestEntry>) -> Self {
        Self {
            generator: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            datasets,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serialises");
        s.push('\n');
        s
    }
}

/// Builds the manifest entry for `dataset` rendered as `csv`.
pub fn manifest_entry(dataset: &FigureDataset, csv: &str) -> ManifestEntry {
    ManifestEntry {
        id: dataset.id.to_string(),
        file: dataset.file_name(),
        columns: dataset.columns.clone(),
        rows: dataset.rows.len(),
        sha256: sha256_hex(csv.as_bytes()),
        metadata: dataset.metadata.clone(),
        references: dataset.references.clone(),
    }
}

/// Writes each dataset as CSV into `dir` together with `manifest.json`.
///
/// Entries of an existing manifest in `dir` are kept unless rewritten here or
/// their file is gone, and entries are listed in figure order, so the
/// manifest does not depend on the order figures were generated in.
pub fn write_datasets(dir: &Path, datasets: &[FigureDataset]) -> io::Result<Manifest> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join("manifest.json");
    let mut entries: Vec<ManifestEntry> = std::fs::read_to_string(&path)
        .ok()
        .and_then(|text| serde_json::from_str::<Manifest>(&text).ok())
        .map(|m| m.datasets)
        .unwrap_or_default();
    entries
        .retain(|e| !datasets.iter().any(|d| d.id.as_str() == e.id) && dir.join(&e.file).is_file());
    for d in datasets {
        let csv = d
            .to_csv()
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        std::fs::write(dir.join(d.file_name()), &csv)?;
        entries.push(manifest_entry(d, &csv));
    }
    let rank = |id: &str| {
        FigureId::ALL
            .iter()
            .position(|f| f.as_str() == id)
            .unwrap_or(FigureId::ALL.len())
    };
    entries.sort_by(|a, b| rank(&a.id).cmp(&rank(&b.id)).then_with(|| a.id.cmp(&b.id)));
    let manifest = Manifest::new(entries);
    std::fs::write(path, manifest.to_json())?;
    Ok(manifest)
}

/// Measured value next to the model's expectation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub quantity: &'static str,
    /// Laboratory value (stored, never computed).
    pub measured: f64,
    /// Value the model is expected to give at the same operating point.
    pub expected: f64,
    /// Value computed by this crate, when requested.
    pub simulated: Option<f64>,
}

/// Drive reached after the full 2000-pair engraving sequence.
pub const EXPERIMENT_MAX_DRIVE: f64 = 11.3;
/// Drive of a single engraving pair.
pub const EXPERIMENT_MIN_DRIVE: f64 = 0.005;
pub const EXPERIMENT_MAX_PAIRS: f64 = 2000.0;
/// Drive at which the depth-averaged profile was calculated.
pub const AVERAGED_PROFILE_DRIVE: f64 = 6.0;
pub const EXPERIMENT_OPTICAL_DEPTH: f64 = 2.0;

/// `xi <r>` after `pairs` engraving pairs, linear between 1 and 2000.
pub fn drive_for_pairs(pairs: f64) -> f64 {
    EXPERIMENT_MIN_DRIVE
        + (pairs - 1.0) / (EXPERIMENT_MAX_PAIRS - 1.0)
            * (EXPERIMENT_MAX_DRIVE - EXPERIMENT_MIN_DRIVE)
}

/// The three laboratory values and the model's expectations.
pub fn experiment_reference() -> Vec<ExperimentRow> {
    vec![
        ExperimentRow {
            quantity: "small-angle efficiency",
            measured: 0.11,
            expected: 0.165,
            simulated: None,
        },
        ExperimentRow {
            quantity: "large-angle efficiency",
            measured: 0.063,
            expected: 0.103,
            simulated: None,
        },
        ExperimentRow {
            quantity: "depth-averaged contrast",
            measured: 1.60,
            expected: 1.82,
            simulated: None,
        },
    ]
}

/// [`experiment_reference`] with the `simulated` column filled in.
pub fn experiment_comparison(grid: &PhaseGrid, n_z: usize) -> Result<Vec<ExperimentRow>> {
    let scheme = LevelScheme::tm_yag_isg();
    let xi = scheme.xi()?;
    let medium = MediumSpec::tm_yag(EXPERIMENT_OPTICAL_DEPTH)?;
    let field = sinusoidal_pump(grid, EXPERIMENT_MAX_DRIVE / xi)?;
    let small = engrave_and_probe(&scheme, &field, &medium, EngravingRegime::SmallAngle, n_z)?.1;
    let large = engrave_and_probe(&scheme, &field, &medium, EngravingRegime::LargeAngle, n_z)?.1;
    let averaged = averaged_contrast(
        &scheme,
        AVERAGED_PROFILE_DRIVE,
        EXPERIMENT_OPTICAL_DEPTH,
        grid,
        n_z,
    )?;
    let mut rows = experiment_reference();
    rows[0].simulated = Some(small.eta);
    rows[1].simulated = Some(large.eta);
    rows[2].simulated = Some(averaged);
    Ok(rows)
}

/// Contrast of the depth-averaged collinear (small-angle) grating.
pub fn averaged_contrast(
    scheme: &LevelScheme,
    drive: f64,
    optical_depth: f64,
    grid: &PhaseGrid,
    n_z: usize,
) -> Result<f64> {
    let field = sinusoidal_pump(grid, drive / scheme.drive_scale())?;
    let medium = MediumSpec::tm_yag(optical_depth)?;
    let p = engrave_small_angle(scheme, &field, &medium, n_z)?;
    Ok(contrast(&depth_averaged_absorption(&p), medium.alpha0))
}

struct Setup {
    standard: LevelScheme,
    isg: LevelScheme,
    standard_drive: f64,
    isg_drive: f64,
    grid: PhaseGrid,
    n_z: usize,
}

impl Setup {
    fn new(o: &FigureOverrides) -> Result<Self> {
        let standard = o.standard.unwrap_or_else(LevelScheme::tm_yag_standard);
        let isg = o.isg.unwrap_or_else(LevelScheme::tm_yag_isg);
        standard.zeta()?;
        isg.xi()?;
        Ok(Self {
            standard,
            isg,
            standard_drive: o.standard_drive.unwrap_or(0.9),
            isg_drive: o.isg_drive.unwrap_or(30.0),
            grid: PhaseGrid::new(o.n_phi.unwrap_or(PhaseGrid::DEFAULT_POINTS))?,
            n_z: o.n_z.unwrap_or(400),
        })
    }

    fn record(&self, d: &mut FigureDataset) {
        d.meta("n_phi", json!(self.grid.len()));
        d.meta("n_z", json!(self.n_z));
    }
}

fn profile_family(
    id: FigureId,
    scheme: &LevelScheme,
    symbol: &str,
    drives: &[f64],
    grid: &PhaseGrid,
) -> Result<FigureDataset> {
    let mut d = FigureDataset::new(id, &["phi", "alpha_norm"]);
    for &drive in drives {
        let field = sinusoidal_pump(grid, drive / scheme.drive_scale())?;
        let row = entrance_profile(scheme, &field, 1.0)?;
        let series = format!("{symbol}={}", format_number(drive));
        for (k, a) in row.iter().enumerate() {
            d.push(&series, vec![grid.phi(k), *a]);
        }
    }
    d.meta("scheme", json!(scheme.kind()));
    d.meta("drives", json!(drives));
    d.meta("regime", json!(EngravingRegime::EntranceOnly));
    Ok(d)
}

fn curve_rows(d: &mut FigureDataset, c: &EfficiencyCurve) {
    for (x, e) in c.x.iter().zip(&c.eta) {
        d.push(&c.label, vec![*x, *e]);
    }
}

/// Regenerates the dataset behind figure `id`.
pub fn reproduce_figure(id: FigureId, overrides: &FigureOverrides) -> Result<FigureDataset> {
    use ReferenceKind::{Measured, Target};
    let s = Setup::new(overrides)?;
    let od = overrides.optical_depth.unwrap_or(EXPERIMENT_OPTICAL_DEPTH);
    let mut d = match id {
        FigureId::StandardEntrance => {
            let drives = [0.05, 0.2, 0.5, 0.9, 2.0, 6.0];
            let mut d = profile_family(id, &s.standard, "zeta_r", &drives, &s.grid)?;
            d.references
                .push(marker("zeta_r=0.9", "contrast", None, 0.63, Target));
            d
        }
        FigureId::IsgEntrance => {
            let drives = [0.1, 0.5, 1.0, 3.0, 10.0, 30.0];
            let mut d = profile_family(id, &s.isg, "xi_r", &drives, &s.grid)?;
            d.references
                .push(marker("xi_r=30", "contrast", None, 1.97, Target));
            d
        }
        FigureId::ReplicaScan => replica_figure(&s)?,
        FigureId::DepthEvolution => depth_figure(&s, od)?,
        FigureId::Efficiency => efficiency_figure(&s, overrides)?,
        FigureId::PairCount => {
            let mut d = FigureDataset::new(id, &["pairs", "xi_r", "eta"]);
            let pairs = [
                1.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0, 1500.0, 2000.0,
            ];
            let drives: Vec<f64> = pairs.iter().map(|&p| drive_for_pairs(p)).collect();
            for regime in [EngravingRegime::SmallAngle, EngravingRegime::LargeAngle] {
                let c = efficiency_vs_drive(&s.isg, &drives, regime, od, &s.grid, s.n_z)?;
                for ((p, x), e) in pairs.iter().zip(&c.x).zip(&c.eta) {
                    d.push(&c.label, vec![*p, *x, *e]);
                }
            }
            d.meta("scheme", json!(s.isg.kind()));
            d.meta("optical_depth", json!(od));
            for (series, row) in ["isg-small-angle", "isg-large-angle"]
                .iter()
                .zip(experiment_reference())
            {
                d.references
                    .push(marker(series, "eta", Some(2000.0), row.expected, Target));
                d.references
                    .push(marker(series, "eta", Some(2000.0), row.measured, Measured));
            }
            d
        }
        FigureId::DepthAveraged => {
            let drive = overrides.isg_drive.unwrap_or(AVERAGED_PROFILE_DRIVE);
            let field = sinusoidal_pump(&s.grid, drive / s.isg.xi()?)?;
            let medium = MediumSpec::tm_yag(od)?;
            let p = engrave_small_angle(&s.isg, &field, &medium, s.n_z)?;
            let avg = depth_averaged_absorption(&p);
            let mut d = FigureDataset::new(id, &["phi", "alpha_norm"]);
            for (k, a) in avg.iter().enumerate() {
                d.push("calculated", vec![s.grid.phi(k), a / medium.alpha0]);
            }
            d.meta("scheme", json!(s.isg.kind()));
            d.meta("drive", json!(drive));
            d.meta("optical_depth", json!(od));
            d.meta("regime", json!(EngravingRegime::SmallAngle));
            d.meta("contrast", json!(contrast(&avg, medium.alpha0)));
            d.references
                .push(marker("calculated", "contrast", None, 1.82, Target));
            d.references
                .push(marker("calculated", "contrast", None, 1.60, Measured));
            d
        }
    };
    s.record(&mut d);
    Ok(d)
}

fn replica_figure(s: &Setup) -> Result<FigureDataset> {
    let mut d = FigureDataset::new(FigureId::ReplicaScan, &["nu_hz", "alpha_norm"]);
    let tau = 1e-6;
    let drive = 0.5;
    // overlapping replicas: broad pulses in frequency, splitting below 1/tau
    let broad = PulsePairSpec::gaussian(0.05, 50e-9, tau, 1e-3);
    let overlap = ScanDomain {
        half_span_periods: 24,
        bins_per_period: 32,
    };
    let ratios = [0.25, 0.5, 0.75, 1.0];
    for p in replica_alignment_scan(&s.isg, &broad, drive, &ratios, overlap)? {
        let series = format!("ratio={}", format_number(p.ratio));
        for (nu, a) in p.nu.iter().zip(&p.alpha) {
            d.push(&series, vec![*nu, *a]);
        }
    }
    // separated replicas: narrow spectrum, splitting far beyond it
    let narrow = PulsePairSpec::gaussian(0.05, 400e-9, tau, 1e-3);
    let separated = ScanDomain {
        half_span_periods: 16,
        bins_per_period: 32,
    };
    for p in replica_alignment_scan(&s.isg, &narrow, drive, &[8.0], separated)? {
        for (nu, a) in p.nu.iter().zip(&p.alpha) {
            d.push("ratio=8", vec![*nu, *a]);
        }
    }
    d.meta("scheme", json!(s.isg.kind()));
    d.meta("drive", json!(drive));
    d.meta("delay_s", json!(tau));
    d.meta("envelope", json!("gaussian"));
    d.meta("fwhm_s", json!({"overlapping": 50e-9, "separated": 400e-9}));
    Ok(d)
}

fn depth_figure(s: &Setup, od: f64) -> Result<FigureDataset> {
    let mut d = FigureDataset::new(
        FigureId::DepthEvolution,
        &["optical_depth", "phi", "alpha_norm"],
    );
    let medium = MediumSpec::tm_yag(od)?;
    let cases = [
        ("standard", &s.standard, s.standard_drive),
        ("isg", &s.isg, s.isg_drive),
    ];
    let jobs: Vec<_> = cases
        .iter()
        .flat_map(|c| {
            [
                (c, EngravingRegime::SmallAngle),
                (c, EngravingRegime::LargeAngle),
            ]
        })
        .collect();
    let profiles = jobs
        .par_iter()
        .map(|((_, scheme, drive), regime)| {
            let field = sinusoidal_pump(&s.grid, drive / scheme.drive_scale())?;
            Ok(engrave_and_probe(scheme, &field, &medium, *regime, s.n_z)?.0)
        })
        .collect::<Result<Vec<_>>>()?;
    let fractions = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut contrasts = serde_json::Map::new();
    for (((name, _, _), regime), p) in jobs.iter().zip(&profiles) {
        let series = format!("{name}-{regime}");
        for f in fractions {
            let i = p.nearest_depth(f * medium.length);
            for (k, a) in p.row(i).iter().enumerate() {
                d.push(&series, vec![f * od, s.grid.phi(k), a / medium.alpha0]);
            }
        }
        contrasts.insert(series, json!([p.contrast_at(0), p.contrast_at(p.n_z())]));
    }
    d.meta("optical_depth", json!(od));
    d.meta(
        "drives",
        json!({"standard": s.standard_drive, "isg": s.isg_drive}),
    );
    d.meta("contrast_in_out", Value::Object(contrasts));
    use ReferenceKind::Target;
    d.references.push(marker(
        "isg-large-angle",
        "output contrast",
        Some(od),
        1.57,
        Target,
    ));
    d.references.push(marker(
        "standard-small-angle",
        "output contrast",
        Some(od),
        0.41,
        Target,
    ));
    d.references.push(marker(
        "standard-large-angle",
        "output contrast",
        Some(od),
        0.35,
        Target,
    ));
    Ok(d)
}

fn efficiency_figure(s: &Setup, o: &FigureOverrides) -> Result<FigureDataset> {
    let ods = optical_depth_grid(o.od_step.unwrap_or(0.05), o.od_max.unwrap_or(3.0))?;
    let mut d = FigureDataset::new(FigureId::Efficiency, &["optical_depth", "eta"]);
    let jobs = [
        (&s.standard, s.standard_drive, EngravingRegime::SmallAngle),
        (&s.standard, s.standard_drive, EngravingRegime::LargeAngle),
        (&s.isg, s.isg_drive, EngravingRegime::SmallAngle),
        (&s.isg, s.isg_drive, EngravingRegime::LargeAngle),
    ];
    let mut maxima = serde_json::Map::new();
    for (scheme, drive, regime) in jobs {
        let c = efficiency_vs_depth(
            scheme,
            drive / scheme.drive_scale(),
            regime,
            &ods,
            &s.grid,
            s.n_z,
        )?;
        curve_rows(&mut d, &c);
        maxima.insert(c.label.clone(), json!(c.argmax()));
    }
    for kind in [IdealKind::Sinusoidal, IdealKind::Square] {
        let c = ideal_efficiency(kind, &ods);
        curve_rows(&mut d, &c);
        maxima.insert(c.label.clone(), json!(c.argmax()));
    }
    d.meta(
        "drives",
        json!({"standard": s.standard_drive, "isg": s.isg_drive}),
    );
    d.meta("argmax", Value::Object(maxima));
    use ReferenceKind::Target;
    d.references
        .push(marker("isg-small-angle", "eta", Some(2.0), 0.183, Target));
    d.references.push(marker(
        "isg-large-angle",
        "max eta",
        Some(1.8),
        0.116,
        Target,
    ));
    d.references.push(marker(
        "standard-small-angle",
        "max eta",
        None,
        0.0175,
        Target,
    ));
    d.references.push(marker(
        "standard-large-angle",
        "max eta",
        None,
        0.015,
        Target,
    ));
    d.references
        .push(marker("ideal-sinusoidal", "eta", Some(2.0), 0.135, Target));
    d.references
        .push(marker("ideal-square", "eta", Some(2.0), 0.219, Target));
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engraving::ideal_grating;

    #[test]
    fn numbers_round_trip() {
        for x in [
            0.0,
            1.8,
            0.1 + 0.2,
            1e-20,
            -3.5e-7,
            123456.789,
            2.0f64.sqrt(),
        ] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_number(1.8), "1.8");
    }

    #[test]
    fn figure_ids_parse() {
        for id in FigureId::ALL {
            assert_eq!(id.as_str().parse::<FigureId>().unwrap(), id);
        }
        assert_eq!(
            "4".parse::<FigureId>(),
            Err(Error::UnknownFigure("4".into()))
        );
    }

    #[test]
    fn uniform_grating_average_is_itself() {
        let grid = PhaseGrid::new(32).unwrap();
        let m = MediumSpec::new(2.0, 1.0).unwrap();
        let p = ideal_grating(IdealKind::Sinusoidal, &m, &grid, 10).unwrap();
        let avg = depth_averaged_absorption(&p);
        for (a, b) in avg.iter().zip(p.entrance()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn pair_count_mapping() {
        assert_eq!(drive_for_pairs(1.0), 0.005);
        assert!((drive_for_pairs(2000.0) - 11.3).abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let mut d = FigureDataset::new(FigureId::DepthAveraged, &["phi", "alpha_norm"]);
        d.push("a", vec![0.0, 1.5]);
        d.push("a", vec![0.5, 1e-9]);
        let csv = d.to_csv().unwrap();
        assert_eq!(csv, "series,phi,alpha_norm\na,0,1.5\na,0.5,1e-9\n");
        d.push("b", vec![f64::NAN, 0.0]);
        assert!(d.to_csv().is_err());
    }

    #[test]
    fn checksum_is_stable() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn entrance_family_is_deterministic() {
        let o = FigureOverrides {
            n_phi: Some(64),
            ..Default::default()
        };
        let a = reproduce_figure(FigureId::IsgEntrance, &o).unwrap();
        let b = reproduce_figure(FigureId::IsgEntrance, &o).unwrap();
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
        assert_eq!(a.series().len(), 6);
    }
}
