use std::fmt::Write as _;
use std::path::Path;

use isg::bench::{format_number, reproduce_figure, write_datasets, FigureId, FigureOverrides};
use isg::config::{
    ConfigError, Geometry, SchemeConfig, SimConfig, Simulation, SweepAxis, SweepConfig,
};
use isg::diffraction::{
    efficiency_vs_depth, efficiency_vs_drive, engrave_and_probe, ideal_efficiency,
    probe_efficiency, EfficiencyCurve, ProbeResult,
};
use isg::engraving::{
    contrast, engrave_large_angle, engrave_small_angle, entrance_profile, ideal_grating,
    EngravingRegime, FourierGrating, GratingProfile, TM_YAG_LENGTH, TM_YAG_WAVELENGTH,
};
use isg::excitation::sinusoidal_pump;
use isg::kinetics::SchemeKind;
use isg::validate::{compare_with_oracle, oracle_equivalence, run_suite, SuiteSettings};
use num_complex::Complex64;
use serde::Serialize;

use crate::args::{Cli, Command, FigureArgs, OracleArgs, SimArgs, SweepArgs, ValidateArgs};
use crate::error::CliError;
use crate::output::{default_dir, write_to, Target};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let log = Log { quiet: cli.quiet };
    match &cli.command {
        Command::Engrave(a) => engrave(a, log),
        Command::Probe(a) => probe(a, log),
        Command::Sweep(a) => sweep(a, log),
        Command::Figure(a) => figure(a, log),
        Command::Oracle(a) => oracle(a, log),
        Command::Validate(a) => validate(a, log),
    }
}

#[derive(Clone, Copy)]
struct Log {
    quiet: bool,
}

impl Log {
    fn say(self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn wrote(self, target: &Target) {
        if let Target::File(p) = target {
            self.say(format!("wrote {}", p.display()));
        }
    }
}

fn load(path: Option<&Path>) -> Result<SimConfig, CliError> {
    Ok(match path {
        Some(p) => SimConfig::load(p)?,
        None => SimConfig::default(),
    })
}

fn parse<T>(flag: &str, text: &str) -> Result<T, CliError>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    text.parse()
        .map_err(|e: T::Err| CliError::field(flag, e.to_string()))
}

/// Lays the flags over the config file.
fn overlay(a: &SimArgs, cfg: &mut SimConfig) -> Result<(), CliError> {
    if let Some(p) = &a.preset {
        cfg.scheme = Some(SchemeConfig::Preset(p.clone()));
    }
    if let Some(d) = a.xr.or(a.zr) {
        cfg.drive = Some(d);
        cfg.r_avg = None;
    }
    if let Some(r) = a.r_avg {
        cfg.r_avg = Some(r);
        cfg.drive = None;
    }
    if let Some(od) = a.od {
        cfg.optical_depth = Some(od);
        if a.alpha0.is_none() {
            cfg.alpha0 = None;
        }
    }
    if let Some(alpha0) = a.alpha0 {
        cfg.alpha0 = Some(alpha0);
        if a.od.is_none() {
            cfg.optical_depth = None;
        }
    }
    if let Some(l) = a.length {
        cfg.length = Some(l);
        if let Some(g) = &mut cfg.geometry {
            g.length = l;
        }
    }
    if let Some(r) = &a.regime {
        cfg.regime = Some(parse("--regime", r)?);
        cfg.geometry = None;
    }
    if let Some(angle) = a.angle {
        let old = cfg.geometry;
        cfg.geometry = Some(Geometry {
            angle,
            wavelength: a
                .wavelength
                .or(old.map(|g| g.wavelength))
                .unwrap_or(TM_YAG_WAVELENGTH),
            length: cfg
                .length
                .or(old.map(|g| g.length))
                .unwrap_or(TM_YAG_LENGTH),
        });
        cfg.regime = None;
    } else if let Some(w) = a.wavelength {
        match &mut cfg.geometry {
            Some(g) => g.wavelength = w,
            None => {
                return Err(CliError::field(
                    "--wavelength",
                    "needs --angle or a geometry",
                ))
            }
        }
    }
    if cfg.regime.is_none() && cfg.geometry.is_none() {
        cfg.regime = Some(EngravingRegime::SmallAngle);
    }
    if a.n_phi.is_some() {
        cfg.grid.n_phi = a.n_phi;
    }
    if a.n_z.is_some() {
        cfg.grid.n_z = a.n_z;
    }
    if let Some(kind) = &a.ideal {
        cfg.ideal = Some(parse("--ideal", kind)?);
    }
    Ok(())
}

fn resolve(a: &SimArgs, cfg: &SimConfig) -> Result<Simulation, CliError> {
    let sim = cfg.resolve()?;
    let sublevel = sim.scheme.kind().is_sublevel();
    if a.xr.is_some() && !sublevel {
        return Err(CliError::field(
            "--xr",
            "applies to lambda3 and tm5 schemes; use --zr",
        ));
    }
    if a.zr.is_some() && sublevel {
        return Err(CliError::field(
            "--zr",
            "applies to standard schemes; use --xr",
        ));
    }
    Ok(sim)
}

fn simulation(a: &SimArgs) -> Result<Simulation, CliError> {
    let mut cfg = load(a.config.as_deref())?;
    overlay(a, &mut cfg)?;
    resolve(a, &cfg)
}

fn engraved(sim: &Simulation) -> Result<GratingProfile, CliError> {
    if let Some(kind) = sim.ideal {
        return Ok(ideal_grating(kind, &sim.medium, &sim.grid, sim.n_z)?);
    }
    let field = sinusoidal_pump(&sim.grid, sim.r_avg())?;
    Ok(match sim.regime {
        EngravingRegime::SmallAngle => {
            engrave_small_angle(&sim.scheme, &field, &sim.medium, sim.n_z)?
        }
        EngravingRegime::LargeAngle => {
            engrave_large_angle(&sim.scheme, &field, &sim.medium, sim.n_z)?.0
        }
        EngravingRegime::EntranceOnly => {
            let row = entrance_profile(&sim.scheme, &field, sim.medium.alpha0)?;
            GratingProfile::new(
                sim.grid,
                vec![0.0],
                row,
                sim.medium.alpha0,
                Some(sim.scheme.kind()),
                EngravingRegime::EntranceOnly,
            )?
        }
        EngravingRegime::UniformIdeal => {
            return Err(CliError::field("regime", "uniform-ideal needs --ideal"))
        }
    })
}

/// `z` then one column per phase; alpha in m^-1.
fn profile_csv(p: &GratingProfile) -> String {
    let mut s = String::from("z");
    for phi in p.grid().phases() {
        s.push(',');
        s.push_str(&format_number(phi));
    }
    s.push('\n');
    for (z, row) in p.z().iter().zip(p.rows()) {
        s.push_str(&format_number(*z));
        for a in row {
            s.push(',');
            s.push_str(&format_number(*a));
        }
        s.push('\n');
    }
    s
}

fn engrave(a: &SimArgs, log: Log) -> Result<(), CliError> {
    let sim = simulation(a)?;
    let profile = engraved(&sim)?;
    let target = Target::resolve(a.out.as_deref(), sim.output.as_deref(), "engrave.csv");
    write_to(&target, &profile_csv(&profile))?;
    log.say(format!(
        "{} {}: contrast {:.6} at entrance, {:.6} at exit",
        scheme_name(profile.scheme()),
        profile.regime(),
        profile.contrast_at(0),
        contrast(profile.output(), profile.alpha0()),
    ));
    log.wrote(&target);
    Ok(())
}

#[derive(Serialize)]
struct ProbeReport {
    scheme: Option<SchemeKind>,
    regime: EngravingRegime,
    drive: Option<f64>,
    optical_depth: f64,
    #[serde(flatten)]
    result: ProbeResult,
}

fn probe(a: &SimArgs, log: Log) -> Result<(), CliError> {
    let sim = simulation(a)?;
    let report = match sim.ideal {
        Some(kind) => {
            let a0 = sim.medium.alpha0;
            let a1 = Complex64::new(kind.first_harmonic() * a0, 0.0);
            let grating = FourierGrating::uniform(a0, a1, sim.medium.length, sim.n_z)?;
            ProbeReport {
                scheme: None,
                regime: EngravingRegime::UniformIdeal,
                drive: None,
                optical_depth: sim.medium.optical_depth(),
                result: probe_efficiency(&grating)?,
            }
        }
        None => {
            let field = sinusoidal_pump(&sim.grid, sim.r_avg())?;
            let (_, result) =
                engrave_and_probe(&sim.scheme, &field, &sim.medium, sim.regime, sim.n_z)?;
            ProbeReport {
                scheme: Some(sim.scheme.kind()),
                regime: sim.regime,
                drive: Some(sim.drive),
                optical_depth: sim.medium.optical_depth(),
                result,
            }
        }
    };
    let mut body = serde_json::to_string_pretty(&report).expect("report serialises");
    body.push('\n');
    let target = Target::resolve(a.out.as_deref(), sim.output.as_deref(), "probe.json");
    write_to(&target, &body)?;
    log.say(format!(
        "eta = {:.4} % (T0 = {:.4})",
        100.0 * report.result.eta,
        report.result.transmission
    ));
    log.wrote(&target);
    Ok(())
}

fn scheme_name(kind: Option<SchemeKind>) -> &'static str {
    kind.map_or("ideal", SchemeKind::as_str)
}

fn curve_csv(c: &EfficiencyCurve, axis: SweepAxis) -> String {
    let x = match axis {
        SweepAxis::OpticalDepth => "optical_depth",
        SweepAxis::Drive => "drive",
    };
    let mut s = format!("{x},eta,transmission,regime,scheme\n");
    for i in 0..c.x.len() {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            format_number(c.x[i]),
            format_number(c.eta[i]),
            format_number(c.transmission[i]),
            c.regime,
            scheme_name(c.scheme),
        );
    }
    s
}

fn sweep(a: &SweepArgs, log: Log) -> Result<(), CliError> {
    let mut cfg = load(a.sim.config.as_deref())?;
    overlay(&a.sim, &mut cfg)?;
    if a.over.is_some() || a.step.is_some() || a.max.is_some() || a.values.is_some() {
        let mut s = cfg.sweep.take().unwrap_or_default();
        if let Some(over) = &a.over {
            s.over = Some(match over.as_str() {
                "optical-depth" | "od" => SweepAxis::OpticalDepth,
                "drive" => SweepAxis::Drive,
                other => {
                    return Err(CliError::field(
                        "--over",
                        format!("unknown axis `{other}` (optical-depth, drive)"),
                    ))
                }
            });
        }
        if a.step.is_some() || a.max.is_some() {
            s.values = None;
        }
        s = SweepConfig {
            step: a.step.or(s.step),
            max: a.max.or(s.max),
            values: a.values.clone().or(s.values),
            ..s
        };
        cfg.sweep = Some(s);
    }
    let sim = resolve(&a.sim, &cfg)?;
    let xs = &sim.sweep.values;
    let curve = match (sim.sweep.axis, sim.ideal) {
        (SweepAxis::OpticalDepth, Some(kind)) => ideal_efficiency(kind, xs),
        (SweepAxis::Drive, Some(_)) => {
            return Err(CliError::field(
                "sweep.over",
                "an ideal grating has no drive",
            ))
        }
        (SweepAxis::OpticalDepth, None) => {
            efficiency_vs_depth(&sim.scheme, sim.r_avg(), sim.regime, xs, &sim.grid, sim.n_z)?
        }
        (SweepAxis::Drive, None) => efficiency_vs_drive(
            &sim.scheme,
            xs,
            sim.regime,
            sim.medium.optical_depth(),
            &sim.grid,
            sim.n_z,
        )?,
    };
    let target = Target::resolve(a.sim.out.as_deref(), sim.output.as_deref(), "sweep.csv");
    write_to(&target, &curve_csv(&curve, sim.sweep.axis))?;
    let (x, eta) = curve.argmax();
    log.say(format!(
        "{}: {} points, max eta = {:.4} % at {}",
        curve.label,
        xs.len(),
        100.0 * eta,
        x
    ));
    log.wrote(&target);
    Ok(())
}

fn overrides(a: &FigureArgs) -> Result<FigureOverrides, CliError> {
    let mut o = FigureOverrides::default();
    if let Some(path) = &a.config {
        let cfg = SimConfig::load(path)?;
        let scheme = cfg.scheme.as_ref().map(SchemeConfig::build).transpose()?;
        let drive = match (cfg.drive, cfg.r_avg, scheme) {
            (Some(d), _, _) => Some(d),
            (None, Some(r), Some(s)) => Some(r * s.drive_scale()),
            (None, Some(_), None) => {
                return Err(CliError::Config(ConfigError::Field {
                    field: "r_avg".into(),
                    reason: "needs an explicit scheme for a figure".into(),
                }))
            }
            (None, None, _) => None,
        };
        let sublevel = scheme.is_none_or(|s| s.kind().is_sublevel());
        if sublevel {
            o.isg = scheme;
            o.isg_drive = drive;
        } else {
            o.standard = scheme;
            o.standard_drive = drive;
        }
        o.optical_depth = cfg.optical_depth;
        o.n_phi = cfg.grid.n_phi;
        o.n_z = cfg.grid.n_z;
        if let Some(s) = &cfg.sweep {
            o.od_step = s.step;
            o.od_max = s.max;
        }
    }
    let flags = [
        (&mut o.isg_drive, a.xr),
        (&mut o.standard_drive, a.zr),
        (&mut o.optical_depth, a.od),
        (&mut o.od_step, a.od_step),
        (&mut o.od_max, a.od_max),
    ];
    for (slot, flag) in flags {
        if flag.is_some() {
            *slot = flag;
        }
    }
    if a.n_phi.is_some() {
        o.n_phi = a.n_phi;
    }
    if a.n_z.is_some() {
        o.n_z = a.n_z;
    }
    Ok(o)
}

fn figure(a: &FigureArgs, log: Log) -> Result<(), CliError> {
    let mut ids = Vec::new();
    for text in &a.ids {
        if text == "all" {
            ids.extend(FigureId::ALL);
        } else {
            ids.push(parse::<FigureId>("figure", text)?);
        }
    }
    ids.dedup();
    let o = overrides(a)?;
    let to_stdout = a.out.as_deref() == Some(Path::new("-"));
    if to_stdout && ids.len() != 1 {
        return Err(CliError::field("--out", "`-` takes a single figure"));
    }
    let datasets = ids
        .iter()
        .map(|&id| reproduce_figure(id, &o))
        .collect::<isg::Result<Vec<_>>>()?;
    for d in &datasets {
        log.say(format!("figure {}: {} rows", d.id, d.rows.len()));
    }
    if to_stdout {
        return write_to(&Target::Stdout, &datasets[0].to_csv()?);
    }
    let dir = a.out.clone().unwrap_or_else(default_dir);
    write_datasets(&dir, &datasets).map_err(|source| CliError::Write {
        path: dir.clone(),
        source,
    })?;
    log.say(format!(
        "wrote {} dataset(s) and manifest.json to {}",
        datasets.len(),
        dir.display()
    ));
    Ok(())
}

fn oracle(a: &OracleArgs, log: Log) -> Result<(), CliError> {
    if let Some(points) = a.points {
        let outcome = oracle_equivalence(points);
        write_to(&target_or_stdout(a.out.as_deref()), &format!("{outcome}\n"))?;
        return if outcome.passed {
            Ok(())
        } else {
            Err(CliError::Failed("oracle comparison failed".into()))
        };
    }
    let mut cfg = load(a.config.as_deref())?;
    if let Some(p) = &a.preset {
        cfg.scheme = Some(SchemeConfig::Preset(p.clone()));
    }
    cfg.regime.get_or_insert(EngravingRegime::SmallAngle);
    if cfg.geometry.is_some() {
        cfg.regime = None;
    }
    let sim = cfg.resolve()?;
    let r = a.r.unwrap_or_else(|| sim.r_avg());
    let report = compare_with_oracle(&sim.scheme, r, a.r_prime.unwrap_or(0.0))?;
    let mut body = serde_json::to_string_pretty(&report).expect("report serialises");
    body.push('\n');
    let target = Target::resolve(a.out.as_deref(), sim.output.as_deref(), "oracle.json");
    write_to(&target, &body)?;
    log.say(format!(
        "{}: max |closed - oracle| = {:.2e}, conservation {:.2e}",
        if report.passed { "PASS" } else { "FAIL" },
        report.max_error,
        report.conservation_error
    ));
    log.wrote(&target);
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Failed("closed form and oracle disagree".into()))
    }
}

fn target_or_stdout(out: Option<&Path>) -> Target {
    match out {
        Some(p) if p != Path::new("-") => Target::File(p.to_path_buf()),
        _ => Target::Stdout,
    }
}

fn validate(a: &ValidateArgs, log: Log) -> Result<(), CliError> {
    let settings = SuiteSettings {
        n_phi: a.n_phi,
        n_z: a.n_z,
        oracle_points: a.points,
    };
    let outcomes = run_suite(settings);
    let mut body = String::new();
    for o in &outcomes {
        let _ = writeln!(body, "{o}");
    }
    let target = target_or_stdout(a.out.as_deref());
    write_to(&target, &body)?;
    log.wrote(&target);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "{failed} of {} checks failed",
            outcomes.len()
        )))
    }
}
