//! Argument structs, config-file parsing and parameter resolution.
//!
//! Every knob resolves through the same precedence chain:
//! explicit flag > config file entry > preset > built-in default.
//! dB-to-linear conversion happens here and only here; the library works in
//! linear SNR throughout.

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use dirtymac::RateMethod;
use std::collections::HashMap;
use std::path::{Path, PathBuf};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Comma-separated float list, e.g. `--mu 1,2`.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .with_context(|| format!("bad number {tok:?} in list {s:?}"))
        })
        .collect()
}

/// Grid shape `N1xN2`, e.g. `50x50`.
pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| anyhow!("grid must look like 50x50, got {s:?}"))?;
    Ok((
        a.trim().parse().with_context(|| format!("bad grid {s:?}"))?,
        b.trim().parse().with_context(|| format!("bad grid {s:?}"))?,
    ))
}

pub fn parse_method(s: &str) -> Result<RateMethod> {
    match s.trim().to_ascii_lowercase().as_str() {
        "quadrature" => Ok(RateMethod::Quadrature),
        "exact" => Ok(RateMethod::Exact),
        "approx" => Ok(RateMethod::Approx),
        other => bail!("method must be quadrature, exact or approx, got {other:?}"),
    }
}

pub fn method_name(m: RateMethod) -> &'static str {
    match m {
        RateMethod::Quadrature => "quadrature",
        RateMethod::Exact => "exact",
        RateMethod::Approx => "approx",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyChoice {
    Lower,
    Upper,
    Independence,
    Frank,
    Fgm,
}

impl FamilyChoice {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Lower => "lower",
            Self::Upper => "upper",
            Self::Independence => "independence",
            Self::Frank => "frank",
            Self::Fgm => "fgm",
        }
    }
}

pub fn parse_families(s: &str) -> Result<Vec<FamilyChoice>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(all_families());
    }
    let mut out = Vec::new();
    for tok in s.split(',') {
        let fam = match tok.trim().to_ascii_lowercase().as_str() {
            "lower" | "lower-frechet" => FamilyChoice::Lower,
            "upper" | "upper-frechet" => FamilyChoice::Upper,
            "independence" | "indep" => FamilyChoice::Independence,
            "frank" => FamilyChoice::Frank,
            "fgm" => FamilyChoice::Fgm,
            other => bail!(
                "unknown family {other:?}; choose from lower, upper, independence, frank, fgm"
            ),
        };
        if out.contains(&fam) {
            bail!("family {tok:?} listed twice");
        }
        out.push(fam);
    }
    Ok(out)
}

pub fn all_families() -> Vec<FamilyChoice> {
    vec![
        FamilyChoice::Lower,
        FamilyChoice::Upper,
        FamilyChoice::Independence,
        FamilyChoice::Frank,
        FamilyChoice::Fgm,
    ]
}

pub fn families_to_string(fams: &[FamilyChoice]) -> String {
    fams.iter()
        .map(|f| f.name())
        .collect::<Vec<_>>()
        .join(",")
}

/// Snap accumulated sweep values to 12 significant digits so `0.1 * 3`
/// prints as `0.3` and the snapped value is the parameter actually used.
fn snap(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{x:.11e}").parse().expect("snapped float reparses")
}

pub fn sweep_values(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        bail!("sweep step must be positive, got {step}");
    }
    if stop < start || stop.is_nan() || start.is_nan() {
        bail!("sweep stop {stop} is below start {start}");
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| snap(start + i as f64 * step)).collect())
}

// ---------------------------------------------------------------------------
// Config files: `key = value` lines, `#` comments, keys match the long flag
// names with `-` or `_` interchangeable.

pub fn read_config(path: &Path) -> Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            anyhow!(
                "{}:{}: expected key = value, got {line:?}",
                path.display(),
                lineno + 1
            )
        })?;
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

struct Config {
    map: HashMap<String, String>,
    allowed: &'static [&'static str],
}

impl Config {
    fn load(path: Option<&Path>, allowed: &'static [&'static str]) -> Result<Self> {
        let map = match path {
            Some(p) => read_config(p)?,
            None => HashMap::new(),
        };
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) {
                bail!(
                    "unknown config key {key:?}; allowed keys: {}",
                    allowed.join(", ")
                );
            }
        }
        Ok(Self { map, allowed })
    }

    fn get<T, F>(&self, key: &str, parse: F) -> Result<Option<T>>
    where
        F: FnOnce(&str) -> Result<T>,
    {
        debug_assert!(self.allowed.contains(&key));
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => parse(raw).map(Some).with_context(|| format!("config key {key}")),
        }
    }

    fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key, |s| s.parse::<f64>().map_err(Into::into))
    }

    fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        self.get(key, |s| s.parse::<u64>().map_err(Into::into))
    }

    fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        self.get(key, |s| s.parse::<usize>().map_err(Into::into))
    }
}

// ---------------------------------------------------------------------------
// outage-sweep

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Gbar1Db,
    Ro,
}

impl SweepVar {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Gbar1Db => "gbar1_db",
            Self::Ro => "ro",
        }
    }
}

fn parse_sweep_var(s: &str) -> Result<SweepVar> {
    match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
        "gbar1_db" => Ok(SweepVar::Gbar1Db),
        "ro" => Ok(SweepVar::Ro),
        other => bail!("sweep variable must be gbar1-db or ro, got {other:?}"),
    }
}

#[derive(Debug, Args, Default)]
pub struct SweepArgs {
    /// Named parameter bundle: fig2 (outage vs mean SNR) or fig3 (outage vs
    /// target rate).
    #[arg(long)]
    pub preset: Option<String>,
    /// key = value file applied between preset and flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Variable to sweep: gbar1-db or ro.
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Path-loss exponent (> 2).
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub d1: Option<f64>,
    #[arg(long)]
    pub d2: Option<f64>,
    /// Mean-SNR ratios gbar2/gbar1, comma separated.
    #[arg(long)]
    pub mu: Option<String>,
    /// Mean SNR of link 1 in dB (fixed value when sweeping ro).
    #[arg(long = "gbar1-db", allow_negative_numbers = true)]
    pub gbar1_db: Option<f64>,
    /// Per-user target rate (fixed value when sweeping gbar1-db).
    #[arg(long)]
    pub ro: Option<f64>,
    /// FGM dependence parameters, comma separated, each in [-1, 1].
    #[arg(long = "theta-fgm", allow_hyphen_values = true)]
    pub theta_fgm: Option<String>,
    /// Frank dependence parameters, comma separated.
    #[arg(long = "theta-frank", allow_hyphen_values = true)]
    pub theta_frank: Option<String>,
    /// Copula families to tabulate (comma list or `all`).
    #[arg(long)]
    pub families: Option<String>,
    /// Also tabulate Monte-Carlo estimates with this many samples.
    #[arg(long)]
    pub mc: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone)]
pub struct SweepParams {
    pub preset: Option<String>,
    pub sweep: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub alpha: f64,
    pub d1: f64,
    pub d2: f64,
    pub mu: Vec<f64>,
    pub gbar1_db: f64,
    pub ro: f64,
    pub theta_fgm: Vec<f64>,
    pub theta_frank: Vec<f64>,
    pub families: Vec<FamilyChoice>,
    pub mc: Option<usize>,
    pub seed: u64,
}

const SWEEP_CONFIG_KEYS: &[&str] = &[
    "sweep",
    "start",
    "stop",
    "step",
    "alpha",
    "d1",
    "d2",
    "mu",
    "gbar1_db",
    "ro",
    "theta_fgm",
    "theta_frank",
    "families",
    "mc",
    "seed",
];

impl SweepParams {
    pub fn resolve(args: &SweepArgs) -> Result<Self> {
        // Built-in defaults.
        let mut p = SweepParams {
            preset: None,
            sweep: SweepVar::Gbar1Db,
            start: 0.0,
            stop: 30.0,
            step: 1.0,
            alpha: 3.5,
            d1: 1.0,
            d2: 1.0,
            mu: vec![1.0],
            gbar1_db: 10.0,
            ro: 1.0,
            theta_fgm: vec![1.0],
            theta_frank: vec![30.0],
            families: all_families(),
            mc: None,
            seed: 42,
        };
        // Preset layer.
        match args.preset.as_deref() {
            None => {}
            Some("fig2") => {
                p.preset = Some("fig2".into());
                p.mu = vec![1.0, 2.0];
            }
            Some("fig3") => {
                p.preset = Some("fig3".into());
                p.sweep = SweepVar::Ro;
                p.start = 0.1;
                p.stop = 5.0;
                p.step = 0.1;
                p.mu = vec![1.0, 2.0];
                p.theta_fgm = vec![1.0, -1.0];
                p.theta_frank = vec![30.0, -30.0];
            }
            Some(other) => bail!("unknown preset {other:?} for outage-sweep (fig2, fig3)"),
        }
        // Config layer.
        let cfg = Config::load(args.config.as_deref(), SWEEP_CONFIG_KEYS)?;
        if let Some(v) = cfg.get("sweep", parse_sweep_var)? {
            p.sweep = v;
        }
        for (slot, key) in [
            (&mut p.start, "start"),
            (&mut p.stop, "stop"),
            (&mut p.step, "step"),
            (&mut p.alpha, "alpha"),
            (&mut p.d1, "d1"),
            (&mut p.d2, "d2"),
            (&mut p.gbar1_db, "gbar1_db"),
            (&mut p.ro, "ro"),
        ] {
            if let Some(v) = cfg.get_f64(key)? {
                *slot = v;
            }
        }
        if let Some(v) = cfg.get("mu", parse_list)? {
            p.mu = v;
        }
        if let Some(v) = cfg.get("theta_fgm", parse_list)? {
            p.theta_fgm = v;
        }
        if let Some(v) = cfg.get("theta_frank", parse_list)? {
            p.theta_frank = v;
        }
        if let Some(v) = cfg.get("families", parse_families)? {
            p.families = v;
        }
        if let Some(v) = cfg.get_usize("mc")? {
            p.mc = Some(v);
        }
        if let Some(v) = cfg.get_u64("seed")? {
            p.seed = v;
        }
        // Flag layer.
        if let Some(s) = &args.sweep {
            p.sweep = parse_sweep_var(s)?;
        }
        for (slot, flag) in [
            (&mut p.start, args.start),
            (&mut p.stop, args.stop),
            (&mut p.step, args.step),
            (&mut p.alpha, args.alpha),
            (&mut p.d1, args.d1),
            (&mut p.d2, args.d2),
            (&mut p.gbar1_db, args.gbar1_db),
            (&mut p.ro, args.ro),
        ] {
            if let Some(v) = flag {
                *slot = v;
            }
        }
        if let Some(s) = &args.mu {
            p.mu = parse_list(s)?;
        }
        if let Some(s) = &args.theta_fgm {
            p.theta_fgm = parse_list(s)?;
        }
        if let Some(s) = &args.theta_frank {
            p.theta_frank = parse_list(s)?;
        }
        if let Some(s) = &args.families {
            p.families = parse_families(s)?;
        }
        if let Some(n) = args.mc {
            p.mc = Some(n);
        }
        if let Some(s) = args.seed {
            p.seed = s;
        }
        // Range sanity that the library cannot see from single values.
        if p.sweep == SweepVar::Ro && p.start <= 0.0 {
            // The default gbar1-db range starts at 0; a rate sweep must not.
            bail!("target-rate sweep must start above 0, got {}", p.start);
        }
        if p.mu.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            bail!("mu values must be positive, got {:?}", p.mu);
        }
        if p.families.is_empty() {
            bail!("no families selected");
        }
        Ok(p)
    }
}

// ---------------------------------------------------------------------------
// coverage-grid

#[derive(Debug, Args, Default)]
pub struct GridArgs {
    /// Named parameter bundle: fig4 (coverage regions under FGM dependence).
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Mean SNR of link 1 at unit distance, in dB.
    #[arg(long = "gbar1-db", allow_negative_numbers = true)]
    pub gbar1_db: Option<f64>,
    /// Mean-SNR ratio gbar2/gbar1.
    #[arg(long)]
    pub mu: Option<f64>,
    /// FGM dependence parameters, one region per value.
    #[arg(long = "theta-fgm", allow_hyphen_values = true)]
    pub theta_fgm: Option<String>,
    /// Sum-rate threshold defining the region.
    #[arg(long = "target-rate")]
    pub target_rate: Option<f64>,
    /// Grid shape N1xN2.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long = "d1-max")]
    pub d1_max: Option<f64>,
    #[arg(long = "d2-max")]
    pub d2_max: Option<f64>,
    /// Rate evaluation: quadrature, exact or approx.
    #[arg(long)]
    pub method: Option<String>,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone)]
pub struct GridParams {
    pub preset: Option<String>,
    pub alpha: f64,
    pub gbar1_db: f64,
    pub mu: f64,
    pub theta_fgm: Vec<f64>,
    pub target_rate: f64,
    pub n1: usize,
    pub n2: usize,
    pub d1_max: f64,
    pub d2_max: f64,
    pub method: RateMethod,
}

const GRID_CONFIG_KEYS: &[&str] = &[
    "alpha",
    "gbar1_db",
    "mu",
    "theta_fgm",
    "target_rate",
    "grid",
    "d1_max",
    "d2_max",
    "method",
];

impl GridParams {
    pub fn resolve(args: &GridArgs) -> Result<Self> {
        let mut p = GridParams {
            preset: None,
            alpha: 3.5,
            gbar1_db: 10.0,
            mu: 1.0,
            theta_fgm: vec![-1.0, 0.0, 1.0],
            target_rate: 0.5,
            n1: 50,
            n2: 50,
            d1_max: 2.0,
            d2_max: 2.0,
            method: RateMethod::Exact,
        };
        match args.preset.as_deref() {
            None => {}
            // fig4 is the documented name for the built-in defaults.
            Some("fig4") => p.preset = Some("fig4".into()),
            Some(other) => bail!("unknown preset {other:?} for coverage-grid (fig4)"),
        }
        let cfg = Config::load(args.config.as_deref(), GRID_CONFIG_KEYS)?;
        for (slot, key) in [
            (&mut p.alpha, "alpha"),
            (&mut p.gbar1_db, "gbar1_db"),
            (&mut p.mu, "mu"),
            (&mut p.target_rate, "target_rate"),
            (&mut p.d1_max, "d1_max"),
            (&mut p.d2_max, "d2_max"),
        ] {
            if let Some(v) = cfg.get_f64(key)? {
                *slot = v;
            }
        }
        if let Some(v) = cfg.get("theta_fgm", parse_list)? {
            p.theta_fgm = v;
        }
        if let Some((n1, n2)) = cfg.get("grid", parse_grid)? {
            p.n1 = n1;
            p.n2 = n2;
        }
        if let Some(m) = cfg.get("method", parse_method)? {
            p.method = m;
        }
        for (slot, flag) in [
            (&mut p.alpha, args.alpha),
            (&mut p.gbar1_db, args.gbar1_db),
            (&mut p.mu, args.mu),
            (&mut p.target_rate, args.target_rate),
            (&mut p.d1_max, args.d1_max),
            (&mut p.d2_max, args.d2_max),
        ] {
            if let Some(v) = flag {
                *slot = v;
            }
        }
        if let Some(s) = &args.theta_fgm {
            p.theta_fgm = parse_list(s)?;
        }
        if let Some(s) = &args.grid {
            let (n1, n2) = parse_grid(s)?;
            p.n1 = n1;
            p.n2 = n2;
        }
        if let Some(s) = &args.method {
            p.method = parse_method(s)?;
        }
        if !(p.mu > 0.0 && p.mu.is_finite()) {
            bail!("mu must be positive, got {}", p.mu);
        }
        if p.theta_fgm.is_empty() {
            bail!("need at least one theta-fgm value");
        }
        Ok(p)
    }
}

// ---------------------------------------------------------------------------
// validate

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Which suite to run: copula, outage, coverage, mc or all.
    pub suite: String,
    /// Seed for the Monte-Carlo checks and randomized parameter points.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Optional CSV report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_and_grid_parsers() {
        assert_eq!(parse_list("1, 2,0.5").unwrap(), vec![1.0, 2.0, 0.5]);
        assert!(parse_list("1,abc").is_err());
        assert_eq!(parse_grid("50x50").unwrap(), (50, 50));
        assert_eq!(parse_grid("8X4").unwrap(), (8, 4));
        assert!(parse_grid("50").is_err());
    }

    #[test]
    fn sweep_value_snapping() {
        let vals = sweep_values(0.1, 0.5, 0.1).unwrap();
        assert_eq!(vals, vec![0.1, 0.2, 0.3, 0.4, 0.5]);
        let ints = sweep_values(0.0, 30.0, 1.0).unwrap();
        assert_eq!(ints.len(), 31);
        assert_eq!(ints[30], 30.0);
        assert!(sweep_values(1.0, 0.0, 0.1).is_err());
        assert!(sweep_values(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!(parse_families("all").unwrap().len(), 5);
        assert_eq!(
            parse_families("frank, fgm").unwrap(),
            vec![FamilyChoice::Frank, FamilyChoice::Fgm]
        );
        assert!(parse_families("frank,frank").is_err());
        assert!(parse_families("gauss").is_err());
    }

    #[test]
    fn precedence_flag_over_config_over_preset() {
        let dir = std::env::temp_dir().join("dirtymac-params-test");
        std::fs::create_dir_all(&dir).unwrap();
        let cfg_path = dir.join("sweep.conf");
        std::fs::write(&cfg_path, "alpha = 4.0\nro = 2.0\n# comment\nmu = 1,3\n").unwrap();
        let args = SweepArgs {
            preset: Some("fig3".into()),
            config: Some(cfg_path),
            ro: Some(0.25),
            out: PathBuf::from("unused.csv"),
            ..Default::default()
        };
        let p = SweepParams::resolve(&args).unwrap();
        // flag beats config
        assert_eq!(p.ro, 0.25);
        // config beats preset/defaults
        assert_eq!(p.alpha, 4.0);
        assert_eq!(p.mu, vec![1.0, 3.0]);
        // preset fields survive where nothing overrides
        assert_eq!(p.sweep, SweepVar::Ro);
        assert_eq!(p.theta_frank, vec![30.0, -30.0]);
        assert_eq!(p.families.len(), 5);
    }

    #[test]
    fn unknown_config_key_is_rejected() {
        let dir = std::env::temp_dir().join("dirtymac-params-test2");
        std::fs::create_dir_all(&dir).unwrap();
        let cfg_path = dir.join("bad.conf");
        std::fs::write(&cfg_path, "alhpa = 4.0\n").unwrap();
        let args = SweepArgs {
            config: Some(cfg_path),
            out: PathBuf::from("unused.csv"),
            ..Default::default()
        };
        assert!(SweepParams::resolve(&args).is_err());
    }

    #[test]
    fn db_conversion() {
        assert!((db_to_linear(0.0) - 1.0).abs() < 1e-15);
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
        assert!((db_to_linear(20.0) - 100.0).abs() < 1e-10);
    }
}
