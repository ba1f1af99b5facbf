//! Run configuration: defaults, then a `key = value` file, then flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use tdhf_core::circuit::SwapConvention;
use tdhf_core::integrals::BasisName;
use tdhf_core::tdhf::{FieldEvaluation, FieldPulse, MeasurementMode, TdhfConfig};

use crate::formats::Units;

/// Default bound on the largest column deviation against the reference
/// propagator, for the default pulse at `dt = 0.05`.
pub const DEFAULT_TOLERANCE: f64 = 1e-4;
pub const DEFAULT_OUTPUT: &str = "trajectory.csv";
/// Row budget of the plotting CSV.
pub const PLOT_ROWS: usize = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: line {line}: {message}")]
    File { path: String, line: usize, message: String },
    #[error("invalid value `{value}` for {key}")]
    Value { key: String, value: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    X,
    Y,
    Z,
}

impl Polarization {
    pub fn vector(self) -> [f64; 3] {
        match self {
            Self::X => [1.0, 0.0, 0.0],
            Self::Y => [0.0, 1.0, 0.0],
            Self::Z => [0.0, 0.0, 1.0],
        }
    }
}

impl FromStr for Polarization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Self::X),
            "y" => Ok(Self::Y),
            "z" => Ok(Self::Z),
            _ => Err(format!("expected x, y or z, found `{s}`")),
        }
    }
}

pub fn parse_mode(s: &str) -> Result<MeasurementMode, String> {
    match s.to_ascii_lowercase().as_str() {
        "zonly" | "z-only" | "z" => Ok(MeasurementMode::ZOnly),
        "rdm" | "full-rdm" | "fullrdm" => Ok(MeasurementMode::FullRdm),
        _ => Err(format!("expected zonly or rdm, found `{s}`")),
    }
}

pub fn parse_field_evaluation(s: &str) -> Result<FieldEvaluation, String> {
    match s.to_ascii_lowercase().as_str() {
        "start" => Ok(FieldEvaluation::Start),
        "midpoint" | "mid" => Ok(FieldEvaluation::Midpoint),
        _ => Err(format!("expected start or midpoint, found `{s}`")),
    }
}

pub fn parse_convention(s: &str) -> Result<SwapConvention, String> {
    match s.to_ascii_lowercase().as_str() {
        "fermionic" => Ok(SwapConvention::Fermionic),
        "iswap" => Ok(SwapConvention::ISwap),
        _ => Err(format!("expected fermionic or iswap, found `{s}`")),
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("expected true or false, found `{s}`")),
    }
}

/// One layer of settings; unset fields fall through to the layer below.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    pub geometry: Option<PathBuf>,
    pub units: Option<Units>,
    pub basis: Option<String>,
    pub fcidump: Option<PathBuf>,
    pub n_elec: Option<usize>,
    pub e_max: Option<f64>,
    pub omega: Option<f64>,
    pub polarization: Option<Polarization>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub mode: Option<MeasurementMode>,
    pub compress: Option<bool>,
    pub field_evaluation: Option<FieldEvaluation>,
    pub convention: Option<SwapConvention>,
    pub shots: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub reference: Option<bool>,
    pub strict: Option<bool>,
    pub tolerance: Option<f64>,
    pub emit_plot_data: Option<bool>,
}

macro_rules! overlay {
    ($hi:expr, $lo:expr; $($f:ident),*) => {
        ConfigLayer { $($f: $hi.$f.or($lo.$f),)* }
    };
}

impl ConfigLayer {
    /// Parses the flat `key = value` format. Relative paths are taken
    /// relative to `base`.
    pub fn parse(text: &str, origin: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut layer = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ConfigError::File { path: origin.to_string(), line: i + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
            layer.set(key.trim(), value.trim(), base).map_err(err)?;
        }
        Ok(layer)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        Self::parse(&text, &path.display().to_string(), base)
    }

    fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<(), String> {
        fn num<T: FromStr>(v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("invalid number `{v}`"))
        }
        let path = || base.join(value);
        match key {
            "geometry" => self.geometry = Some(path()),
            "units" => self.units = Some(value.parse().map_err(|e: crate::formats::FormatError| e.to_string())?),
            "basis" => self.basis = Some(value.to_string()),
            "fcidump" => self.fcidump = Some(path()),
            "n_elec" => self.n_elec = Some(num(value)?),
            "e_max" => self.e_max = Some(num(value)?),
            "omega" => self.omega = Some(num(value)?),
            "polarization" => self.polarization = Some(value.parse()?),
            "dt" => self.dt = Some(num(value)?),
            "t_final" => self.t_final = Some(num(value)?),
            "mode" => self.mode = Some(parse_mode(value)?),
            "compress" => self.compress = Some(parse_bool(value)?),
            "field_evaluation" => self.field_evaluation = Some(parse_field_evaluation(value)?),
            "convention" => self.convention = Some(parse_convention(value)?),
            "shots" => self.shots = Some(num(value)?),
            "seed" => self.seed = Some(num(value)?),
            "output" => self.output = Some(path()),
            "reference" => self.reference = Some(parse_bool(value)?),
            "strict" => self.strict = Some(parse_bool(value)?),
            "tolerance" => self.tolerance = Some(num(value)?),
            "emit_plot_data" => self.emit_plot_data = Some(parse_bool(value)?),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// `self` wins wherever it is set. Choosing a basis or an integral file
    /// in `self` hides the other source from `lower`.
    pub fn over(self, lower: Self) -> Self {
        let mut lower = lower;
        if self.basis.is_some() || self.fcidump.is_some() {
            lower.basis = None;
            lower.fcidump = None;
        }
        overlay!(self, lower; geometry, units, basis, fcidump, n_elec, e_max, omega, polarization, dt,
            t_final, mode, compress, field_evaluation, convention, shots, seed, output, reference, strict,
            tolerance, emit_plot_data)
    }

    /// Fills defaults and checks the result.
    pub fn resolve(self) -> Result<RunConfig, ConfigError> {
        let system = match (self.basis, self.fcidump) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::Invalid("give either a basis or an integral file, not both".into()))
            }
            (None, Some(path)) => SystemSource::Fcidump(path),
            (basis, None) => {
                let name = basis.as_deref().unwrap_or("sto-3g");
                let basis = BasisName::from_str(name)
                    .map_err(|_| ConfigError::Invalid(format!("unsupported basis `{name}`")))?;
                let geometry = self
                    .geometry
                    .ok_or_else(|| ConfigError::Invalid("a geometry file is required with a basis".into()))?;
                SystemSource::Basis { geometry, units: self.units, basis }
            }
        };
        let defaults = TdhfConfig::default();
        let pulse = FieldPulse::new(
            self.e_max.unwrap_or(defaults.pulse.e_max),
            self.omega.unwrap_or(defaults.pulse.omega),
            self.polarization.map_or(defaults.pulse.polarization, Polarization::vector),
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let tdhf = TdhfConfig {
            pulse,
            dt: self.dt.unwrap_or(defaults.dt),
            t_final: self.t_final.unwrap_or_else(|| pulse.duration()),
            mode: self.mode.unwrap_or(defaults.mode),
            compress: self.compress.unwrap_or(defaults.compress),
            field_evaluation: self.field_evaluation.unwrap_or(defaults.field_evaluation),
            shots: self.shots.unwrap_or(defaults.shots),
            seed: self.seed.unwrap_or(defaults.seed),
            convention: self.convention.unwrap_or(defaults.convention),
        };
        tdhf.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let tolerance = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(ConfigError::Value { key: "tolerance".into(), value: tolerance.to_string() });
        }
        Ok(RunConfig {
            system,
            n_elec: self.n_elec,
            tdhf,
            output: self.output.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT)),
            reference: self.reference.unwrap_or(false),
            strict: self.strict.unwrap_or(false),
            tolerance,
            emit_plot_data: self.emit_plot_data.unwrap_or(false),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SystemSource {
    Basis { geometry: PathBuf, units: Option<Units>, basis: BasisName },
    Fcidump(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemSource,
    /// Overrides the neutral-molecule count or the integral file header.
    pub n_elec: Option<usize>,
    pub tdhf: TdhfConfig,
    pub output: PathBuf,
    pub reference: bool,
    pub strict: bool,
    pub tolerance: f64,
    pub emit_plot_data: bool,
}

impl RunConfig {
    /// `<stem>.<tag>.csv` beside the main output.
    pub fn sibling_output(&self, tag: &str) -> PathBuf {
        let stem = self.output.file_stem().map_or_else(|| "trajectory".into(), |s| s.to_string_lossy().into_owned());
        self.output.with_file_name(format!("{stem}.{tag}.csv"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layer(text: &str) -> ConfigLayer {
        ConfigLayer::parse(text, "test.cfg", Path::new("/cfg")).unwrap()
    }

    #[test]
    fn defaults() {
        let cfg = ConfigLayer { geometry: Some("h2.xyz".into()), ..Default::default() }.resolve().unwrap();
        assert_eq!(cfg.tdhf, TdhfConfig::default());
        assert_eq!(cfg.tdhf.n_steps(), 3770);
        assert!(matches!(cfg.system, SystemSource::Basis { basis: BasisName::Sto3g, .. }));
        assert_eq!(cfg.output, PathBuf::from(DEFAULT_OUTPUT));
        assert_eq!(cfg.sibling_output("reference"), PathBuf::from("trajectory.reference.csv"));
    }

    #[test]
    fn file_keys_and_precedence() {
        let file = layer("geometry = h2.xyz\nbasis = 6-31g  # split valence\ne_max = 1.07\nmode = zonly\ncompress = false\npolarization = x\n");
        assert_eq!(file.geometry, Some(PathBuf::from("/cfg/h2.xyz")));
        let flags = ConfigLayer { e_max: Some(0.0), ..Default::default() };
        let cfg = flags.over(file).resolve().unwrap();
        assert_eq!(cfg.tdhf.pulse.e_max, 0.0);
        assert_eq!(cfg.tdhf.pulse.polarization, [1.0, 0.0, 0.0]);
        assert_eq!(cfg.tdhf.mode, MeasurementMode::ZOnly);
        assert!(!cfg.tdhf.compress);
        assert!(matches!(cfg.system, SystemSource::Basis { basis: BasisName::SixThirtyOneG, .. }));
    }

    #[test]
    fn omega_sets_default_duration() {
        let cfg = ConfigLayer { geometry: Some("g".into()), omega: Some(0.2), ..Default::default() }.resolve().unwrap();
        assert!((cfg.tdhf.t_final - 6.0 * std::f64::consts::PI / 0.2).abs() < 1e-12);
    }

    #[test]
    fn integral_file_in_flags_replaces_file_basis() {
        let file = layer("geometry = h2.xyz\nbasis = sto-3g\n");
        let flags = ConfigLayer { fcidump: Some("h2.fcidump".into()), ..Default::default() };
        assert_eq!(flags.over(file).resolve().unwrap().system, SystemSource::Fcidump("h2.fcidump".into()));
        let both = layer("basis = sto-3g\nfcidump = x\n");
        assert!(both.resolve().is_err());
    }

    #[test]
    fn rejects_bad_settings() {
        for text in ["colour = blue\n", "dt 0.1\n", "dt = fast\n", "mode = sideways\n", "strict = maybe\n"] {
            assert!(ConfigLayer::parse(text, "t", Path::new("")).is_err(), "{text}");
        }
        let base = || ConfigLayer { geometry: Some("g".into()), ..Default::default() };
        assert!(ConfigLayer { dt: Some(0.0), ..base() }.resolve().is_err());
        assert!(ConfigLayer { t_final: Some(0.01), ..base() }.resolve().is_err());
        assert!(ConfigLayer { basis: Some("cc-pvdz".into()), ..base() }.resolve().is_err());
        assert!(ConfigLayer { shots: Some(10), ..base() }.resolve().is_err());
        assert!(ConfigLayer { tolerance: Some(-1.0), ..base() }.resolve().is_err());
        assert!(ConfigLayer::default().resolve().is_err());
    }
}
