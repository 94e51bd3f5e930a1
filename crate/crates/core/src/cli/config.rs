use std::path::{Path, PathBuf};

use clap::Parser;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::hydrogenic::AtomicState;
use crate::radial::{BasisKind, KnotLayout, RadialBasisConfig};
use crate::tdse::DEFAULT_DAMPING;
use crate::units::CODATA_2018;

/// Complex-scaling angle used when the user does not pick one.
pub const DEFAULT_THETA: f64 = 0.2;

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Command-line flags. A JSON config file uses the same names as keys.
#[derive(Debug, Default, Clone, Parser, Deserialize)]
#[command(
    name = "acstark",
    version,
    about = "Dynamic Stark shift and ionization of hydrogen-like atoms in circularly polarized light",
    allow_negative_numbers = true
)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// Reference state label, e.g. 1S, 2S, 2P+1
    #[arg(long)]
    pub state: Option<String>,
    /// Nuclear charge (1-11)
    #[arg(long)]
    pub z: Option<u32>,
    /// Laser angular frequency in atomic units
    #[arg(long)]
    pub omega_au: Option<f64>,
    /// Laser vacuum wavelength in nm
    #[arg(long)]
    pub lambda_nm: Option<f64>,
    /// Laser frequency in Hz
    #[arg(long)]
    pub omega_hz: Option<f64>,
    /// Intensity in W/m²
    #[arg(long)]
    pub intensity: Option<f64>,
    /// Intensity in atomic units
    #[arg(long)]
    pub intensity_au: Option<f64>,
    /// Transition such as 1S-2S (with --two-photon)
    #[arg(long)]
    pub transition: Option<String>,
    /// Tune to the two-photon midpoint ω = (E_e − E_g)/2 of --transition
    #[arg(long)]
    #[serde(default)]
    pub two_photon: bool,
    /// Frequency scan in a.u.: start,stop,count[,log|linear]
    #[arg(long)]
    pub scan: Option<String>,
    /// Photon number of the quantized mode
    #[arg(long)]
    pub n_photons: Option<u64>,
    /// Quantization volume in Bohr³
    #[arg(long)]
    pub volume_au: Option<f64>,
    /// Run the time-dependent oracle
    #[arg(long)]
    #[serde(default)]
    pub oracle: bool,
    /// Adiabatic damping ε of the oracle drive (a.u.)
    #[arg(long)]
    pub damping: Option<f64>,
    /// Radial basis: bspline or sturmian
    #[arg(long)]
    pub basis_kind: Option<String>,
    /// Number of radial functions per channel
    #[arg(long)]
    pub basis_n: Option<usize>,
    /// Radial box in Bohr
    #[arg(long)]
    pub box_radius: Option<f64>,
    /// B-spline order
    #[arg(long)]
    pub spline_order: Option<usize>,
    /// Knot layout: linear or exponential
    #[arg(long)]
    pub knot_layout: Option<String>,
    /// Complex-scaling angle in radians (0 disables)
    #[arg(long)]
    pub theta: Option<f64>,
    /// Output format: csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Output file (default stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Oracle mode: write t, Re c_φ, Im c_φ to this CSV file
    #[arg(long)]
    pub dump_trace: Option<PathBuf>,
    /// JSON file with the same keys as the flags; flags take precedence
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Options {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }

    /// Flags override the file.
    pub fn merged_over(self, file: Options) -> Options {
        Options {
            state: self.state.or(file.state),
            z: self.z.or(file.z),
            omega_au: self.omega_au.or(file.omega_au),
            lambda_nm: self.lambda_nm.or(file.lambda_nm),
            omega_hz: self.omega_hz.or(file.omega_hz),
            intensity: self.intensity.or(file.intensity),
            intensity_au: self.intensity_au.or(file.intensity_au),
            transition: self.transition.or(file.transition),
            two_photon: self.two_photon || file.two_photon,
            scan: self.scan.or(file.scan),
            n_photons: self.n_photons.or(file.n_photons),
            volume_au: self.volume_au.or(file.volume_au),
            oracle: self.oracle || file.oracle,
            damping: self.damping.or(file.damping),
            basis_kind: self.basis_kind.or(file.basis_kind),
            basis_n: self.basis_n.or(file.basis_n),
            box_radius: self.box_radius.or(file.box_radius),
            spline_order: self.spline_order.or(file.spline_order),
            knot_layout: self.knot_layout.or(file.knot_layout),
            theta: self.theta.or(file.theta),
            format: self.format.or(file.format),
            out: self.out.or(file.out),
            dump_trace: self.dump_trace.or(file.dump_trace),
            config: self.config,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Shift,
    Scan,
    Quantized,
    Oracle,
    TwoPhotonPreset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl ScanGrid {
    pub fn parse(spec: &str) -> Result<Self, ConfigError> {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            return err(format!("scan {spec:?} is not start,stop,count[,log|linear]"));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| ConfigError(format!("bad scan bound {s:?}")))
        };
        let start = num(parts[0])?;
        let stop = num(parts[1])?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| ConfigError(format!("bad scan count {:?}", parts[2])))?;
        let spacing = match parts.get(3).copied() {
            None | Some("linear") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some(other) => return err(format!("unknown scan spacing {other:?}")),
        };
        if count < 2 {
            return err("scan count must be ≥ 2");
        }
        if !(start > 0.0 && stop > start && stop.is_finite()) {
            return err(format!("scan needs 0 < start < stop, got {start}..{stop}"));
        }
        Ok(Self {
            start,
            stop,
            count,
            spacing,
        })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.count - 1;
        (0..self.count)
            .map(|k| {
                let s = k as f64 / n as f64;
                if k == n {
                    return self.stop;
                }
                match self.spacing {
                    Spacing::Linear => self.start + s * (self.stop - self.start),
                    Spacing::Log => self.start * (self.stop / self.start).powf(s),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A validated run, all physical quantities in atomic units.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(serialize_with = "ser_state")]
    pub state: AtomicState,
    pub omega: Option<f64>,
    pub intensity: f64,
    pub scan: Option<ScanGrid>,
    pub transition: Option<String>,
    pub n_photons: Option<u64>,
    pub volume: Option<f64>,
    pub damping: f64,
    pub basis: RadialBasisConfig,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub dump_trace: Option<PathBuf>,
}

fn ser_state<S: serde::Serializer>(s: &AtomicState, ser: S) -> Result<S::Ok, S::Error> {
    (s.label(), s.z()).serialize(ser)
}

fn positive(name: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        err(format!("{name} must be positive, got {v}"))
    }
}

fn parse_state(label: &str, z: u32) -> Result<AtomicState, ConfigError> {
    AtomicState::from_label(label, z).map_err(|e| ConfigError(e.to_string()))
}

pub fn parse_config(opts: Options) -> Result<RunConfig, ConfigError> {
    let opts = match &opts.config {
        Some(path) => {
            let file = Options::from_file(path)?;
            opts.merged_over(file)
        }
        None => opts,
    };
    let z = opts.z.unwrap_or(1);
    if !(1..=crate::hydrogenic::MAX_Z).contains(&z) {
        return err(format!("Z = {z} outside 1..={}", crate::hydrogenic::MAX_Z));
    }

    let transition = match (&opts.transition, opts.two_photon) {
        (Some(t), true) => {
            let (g, e) = t
                .split_once('-')
                .ok_or_else(|| ConfigError(format!("transition {t:?} is not of the form 1S-2S")))?;
            Some((parse_state(g, z)?, parse_state(e, z)?))
        }
        (Some(_), false) => return err("--transition needs --two-photon"),
        (None, true) => return err("--two-photon needs --transition"),
        (None, false) => None,
    };

    let modes = [
        opts.scan.is_some(),
        opts.n_photons.is_some(),
        opts.oracle,
        transition.is_some(),
    ];
    if modes.iter().filter(|&&m| m).count() > 1 {
        return err("choose one of --scan, --n-photons, --oracle, --two-photon");
    }
    let mode = match modes {
        [true, ..] => Mode::Scan,
        [_, true, ..] => Mode::Quantized,
        [_, _, true, _] => Mode::Oracle,
        [.., true] => Mode::TwoPhotonPreset,
        _ => Mode::Shift,
    };

    let state = match (&opts.state, transition) {
        (Some(label), _) => parse_state(label, z)?,
        (None, Some((g, _))) => g,
        (None, None) => parse_state("1S", z)?,
    };

    let k = &CODATA_2018;
    let freq_inputs = [
        opts.omega_au.map(|w| positive("--omega-au", w)),
        opts.lambda_nm
            .map(|l| positive("--lambda-nm", l).map(|l| k.nm_to_omega_au(l))),
        opts.omega_hz
            .map(|f| positive("--omega-hz", f).map(|f| k.hz_to_hartree(f))),
    ];
    let given: Vec<f64> = freq_inputs.into_iter().flatten().collect::<Result<_, _>>()?;
    if given.len() > 1 {
        return err("give only one of --omega-au, --lambda-nm, --omega-hz");
    }
    let mut omega = given.first().copied();
    if let Some((g, e)) = transition {
        if omega.is_some() {
            return err("--two-photon fixes the frequency; drop --omega-au/--lambda-nm/--omega-hz");
        }
        let w = (e.energy() - g.energy()) / 2.0;
        if !(w > 0.0) {
            return err(format!(
                "transition {} → {} has no positive midpoint",
                g.label(),
                e.label()
            ));
        }
        omega = Some(w);
    }
    let scan = opts.scan.as_deref().map(ScanGrid::parse).transpose()?;
    if scan.is_some() && omega.is_some() {
        return err("--scan replaces the single frequency");
    }
    if scan.is_none() && omega.is_none() {
        return err("a frequency is required (--omega-au, --lambda-nm, --omega-hz or --two-photon)");
    }

    let intensity = match (opts.intensity, opts.intensity_au) {
        (Some(_), Some(_)) => return err("give only one of --intensity, --intensity-au"),
        (Some(i), None) => Some((i, k.intensity_si_to_au(i))),
        (None, Some(i)) => Some((i, i)),
        (None, None) => None,
    };
    if let Some((raw, _)) = intensity {
        if !(raw >= 0.0 && raw.is_finite()) {
            return err(format!("intensity must be ≥ 0, got {raw}"));
        }
    }
    let mut intensity = intensity.map(|(_, au)| au);

    let mut volume = opts.volume_au.map(|v| positive("--volume-au", v)).transpose()?;
    if mode == Mode::Quantized {
        let n = opts.n_photons.unwrap_or(0);
        let w = omega.expect("frequency checked above");
        match (volume, intensity) {
            (Some(_), Some(_)) => return err("quantized mode takes --volume-au or an intensity, not both"),
            (None, Some(i)) => {
                if n == 0 || i <= 0.0 {
                    return err("matching a volume to the intensity needs n_L ≥ 1 and intensity > 0");
                }
                volume = Some(n as f64 * w * k.speed_of_light_au() / i);
            }
            (None, None) => return err("quantized mode needs --volume-au or an intensity"),
            (Some(v), None) => {
                intensity = Some(k.speed_of_light_au() * n as f64 * w / v);
            }
        }
    } else if volume.is_some() {
        return err("--volume-au only applies with --n-photons");
    }
    let intensity = intensity.unwrap_or(0.0);

    let damping = opts.damping.map(|d| positive("--damping", d)).transpose()?;
    if damping.is_some() && mode != Mode::Oracle {
        return err("--damping only applies with --oracle");
    }
    if opts.dump_trace.is_some() && mode != Mode::Oracle {
        return err("--dump-trace only applies with --oracle");
    }

    let mut basis = RadialBasisConfig::for_state(&state).with_scaling(DEFAULT_THETA);
    if let Some(kind) = &opts.basis_kind {
        basis.kind = match kind.as_str() {
            "bspline" => BasisKind::Bspline,
            "sturmian" => BasisKind::Sturmian,
            other => return err(format!("unknown basis kind {other:?}")),
        };
    }
    if let Some(layout) = &opts.knot_layout {
        basis.knot_layout = match layout.as_str() {
            "linear" => KnotLayout::Linear,
            "exponential" => KnotLayout::Exponential,
            other => return err(format!("unknown knot layout {other:?}")),
        };
    }
    if let Some(n) = opts.basis_n {
        basis.count = n;
    }
    if let Some(r) = opts.box_radius {
        basis.box_radius = r;
    }
    if let Some(k) = opts.spline_order {
        basis.spline_order = k;
    }
    if let Some(t) = opts.theta {
        basis.scaling_angle = t;
    }
    basis.validate().map_err(|e| ConfigError(e.to_string()))?;

    let format = match opts.format.as_deref() {
        None | Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        Some(other) => return err(format!("unknown format {other:?}")),
    };

    Ok(RunConfig {
        mode,
        state,
        omega,
        intensity,
        scan,
        transition: opts.transition.filter(|_| mode == Mode::TwoPhotonPreset),
        n_photons: opts.n_photons,
        volume,
        damping: damping.unwrap_or(DEFAULT_DAMPING),
        basis,
        format,
        out: opts.out,
        dump_trace: opts.dump_trace,
    })
}

impl RunConfig {
    /// SHA-256 of the canonical JSON form of everything that affects the data.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}
