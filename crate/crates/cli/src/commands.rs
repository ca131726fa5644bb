use std::fs;
use std::path::Path;

use hyperent_core::analysis::{compact_bipartite, optimize_bell};
use hyperent_core::engineering::{
    assemble_ghz, collapse_degrees, design_oam_controls, design_qudit_controls, design_tensor_controls,
};
use hyperent_core::source::build_pair_state;
use hyperent_core::{
    AnalysisReport, BellSettings, Complex64, DegreeEncoding, Design, ModeBasis, PairState, Pol, QuditState,
    SetupConfig, TargetSpec,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::files::{BasisFile, ComplexPair, SetupFile, TargetFile, TargetKind};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Named reference setups usable wherever a target state is expected.
pub const BUILTINS: [&str; 5] = ["balanced", "qutrit", "ghz3", "ghz4", "ghz5"];

const ORDERING: &str = "index = signal * dim + idler; photon index = (arm * 2 + pol) * oam_dim + (oam - oam_min); \
                        arm s=0 m=1 l=2, pol H=0 V=1";

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn text(bytes: &[u8], path: &Path) -> Result<String, CliError> {
    String::from_utf8(bytes.to_vec()).map_err(|_| CliError::Schema(format!("{} is not UTF-8", path.display())))
}

pub fn load_setup(path: &Path) -> Result<(SetupConfig, Vec<u8>), CliError> {
    let bytes = read(path)?;
    let cfg = SetupFile::parse(&text(&bytes, path)?)?.to_config()?;
    Ok((cfg, bytes))
}

/// Setup for a builtin name.
pub fn builtin_setup(name: &str) -> Result<SetupConfig, CliError> {
    let ghz = |k| -> Result<SetupConfig, CliError> { Ok(assemble_ghz(&DegreeEncoding::ghz(k)?)?.config) };
    match name {
        "balanced" => Ok(SetupConfig::balanced(ModeBasis::default())),
        "qutrit" => {
            let w = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
            Ok(design_qudit_controls(&TargetSpec::new(vec![3], vec![w; 3])?, 3)?.config)
        }
        "ghz3" => ghz(3),
        "ghz4" => ghz(4),
        "ghz5" => ghz(5),
        other => Err(CliError::Schema(format!("unknown builtin {other:?}; expected one of {BUILTINS:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub signal: String,
    pub idler: String,
    pub amplitude: ComplexPair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildOutput {
    pub ordering: String,
    pub basis: BasisFile,
    pub success_probability: f64,
    pub coincidence_fraction: f64,
    pub overall_probability: f64,
    /// Nonzero amplitudes with their mode labels, in index order.
    pub terms: Vec<Term>,
    /// Full normalized amplitude array in the documented ordering, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<ComplexPair>>,
}

pub fn build(setup: &Path, dense: bool) -> Result<String, CliError> {
    let (cfg, _) = load_setup(setup)?;
    let pair = build_pair_state(&cfg)?;
    let basis = *pair.basis();
    let d = basis.dim();
    let amps = pair.state.amplitudes();
    let terms = amps
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > hyperent_core::ALGEBRA_TOL)
        .map(|(i, a)| Term {
            signal: basis.decode(i / d).expect("index in basis").to_string(),
            idler: basis.decode(i % d).expect("index in basis").to_string(),
            amplitude: [a.re, a.im],
        })
        .collect();
    let out = BuildOutput {
        ordering: ORDERING.into(),
        basis: BasisFile { oam_min: basis.oam_min(), oam_max: basis.oam_max() },
        success_probability: pair.success_probability,
        coincidence_fraction: pair.coincidence_fraction,
        overall_probability: pair.overall_probability(),
        terms,
        amplitudes: dense.then(|| amps.iter().map(|a| [a.re, a.im]).collect()),
    };
    Ok(crate::json::to_string(&out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignMode {
    QuditPol,
    Oam3x3,
    Tensor,
    Ghz(usize),
}

impl std::str::FromStr for DesignMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "qudit-pol" => Ok(DesignMode::QuditPol),
            "oam-3x3" => Ok(DesignMode::Oam3x3),
            "tensor" => Ok(DesignMode::Tensor),
            "ghz-3" => Ok(DesignMode::Ghz(3)),
            "ghz-4" => Ok(DesignMode::Ghz(4)),
            "ghz-5" => Ok(DesignMode::Ghz(5)),
            _ => Err(format!("unknown mode {s:?}; expected qudit-pol, oam-3x3, tensor, ghz-3, ghz-4 or ghz-5")),
        }
    }
}

pub struct DesignOutput {
    pub setup: String,
    pub fidelity: f64,
    pub notices: Vec<String>,
}

pub fn design(mode: DesignMode, target: Option<&Path>) -> Result<DesignOutput, CliError> {
    let design: Design = match mode {
        DesignMode::Ghz(k) => assemble_ghz(&DegreeEncoding::ghz(k)?)?,
        _ => {
            let path = target.ok_or_else(|| CliError::Schema("this mode needs --target".into()))?;
            let bytes = read(path)?;
            let file = TargetFile::parse(&text(&bytes, path)?)?;
            let expected = match mode {
                DesignMode::QuditPol => TargetKind::Qudit,
                DesignMode::Oam3x3 => TargetKind::Oam,
                _ => TargetKind::Tensor,
            };
            if file.kind != expected {
                return Err(CliError::Schema(format!("mode needs a {expected:?} target, file has {:?}", file.kind)));
            }
            let spec = TargetSpec::new(file.dims()?, file.coefficients())?;
            match mode {
                DesignMode::QuditPol => design_qudit_controls(&spec, spec.state().dims()[0])?,
                DesignMode::Oam3x3 => design_oam_controls(&spec)?,
                _ => design_tensor_controls(&spec)?,
            }
        }
    };
    Ok(DesignOutput {
        setup: crate::json::to_string(&SetupFile::from_config(&design.config)),
        fidelity: design.round_trip_fidelity()?,
        notices: design.notices.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub input_hash: String,
    pub tool_version: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub report: AnalysisReport,
    pub provenance: Provenance,
}

pub struct AnalyzeArgs<'a> {
    pub setup: &'a Path,
    pub target: Option<&'a str>,
    pub bell: Option<usize>,
    pub seed: u64,
    pub restarts: usize,
}

/// Two-qudit register for a `d`-dimensional Bell test: the occupied
/// signal × idler block when it is exactly `d × d`, or for `d = 6` the
/// OAM × polarization digits of a state spanning several OAM values and
/// both polarizations.
pub fn bell_register(pair: &PairState, d: usize) -> Result<QuditState, CliError> {
    let (compact, _, _) = compact_bipartite(&pair.state, &[0])?;
    if compact.dims() == [d, d] {
        return Ok(compact);
    }
    if d == 6 {
        let modes: Vec<_> = pair
            .state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > hyperent_core::ALGEBRA_TOL)
            .flat_map(|(i, _)| {
                let dim = pair.basis().dim();
                [pair.basis().decode(i / dim), pair.basis().decode(i % dim)]
            })
            .flatten()
            .collect();
        let mut oams: Vec<i32> = modes.iter().map(|m| m.oam).collect();
        oams.sort();
        oams.dedup();
        let both_pols = [Pol::H, Pol::V].iter().all(|p| modes.iter().any(|m| m.pol == *p));
        if oams.len() >= 2 && both_pols {
            if let Ok(q) = collapse_degrees(pair, 3, 2) {
                return Ok(q);
            }
        }
    }
    let dims = compact.dims();
    Err(CliError::Dimension(format!(
        "state occupies a {}x{} signal x idler block; --bell {d} needs {d}x{d}{}",
        dims[0],
        dims[1],
        if d == 6 { " or a state spanning OAM 0..2 and both polarizations" } else { "" }
    )))
}

pub fn analyze(args: &AnalyzeArgs) -> Result<String, CliError> {
    let (cfg, setup_bytes) = load_setup(args.setup)?;
    let pair = build_pair_state(&cfg)?;
    let mut hasher = Sha256::new();
    hasher.update(&setup_bytes);
    let target_state = match args.target {
        None => {
            hasher.update(b"\0target:none");
            None
        }
        Some(t) if BUILTINS.contains(&t) => {
            hasher.update(format!("\0target:builtin:{t}").as_bytes());
            Some(build_pair_state(&builtin_setup(t)?)?)
        }
        Some(t) => {
            let (tcfg, bytes) = load_setup(Path::new(t))?;
            hasher.update(b"\0target:file:");
            hasher.update(&bytes);
            Some(build_pair_state(&tcfg)?)
        }
    };
    if let Some(t) = &target_state {
        if t.basis() != pair.basis() {
            return Err(CliError::Dimension(format!("target basis {} differs from setup basis {}", t.basis(), pair.basis())));
        }
    }
    hasher.update(format!("\0bell:{:?}\0restarts:{}", args.bell, args.restarts).as_bytes());
    let mut report = AnalysisReport::new(&pair, target_state.as_ref().map(|t| &t.state))?;
    if let Some(d) = args.bell {
        let register = bell_register(&pair, d)?;
        let settings = BellSettings { restarts: args.restarts, ..BellSettings::new(d, args.seed) };
        settings.validate()?;
        report = report.with_bell(d, &optimize_bell(&register, &settings)?);
    }
    let file = ReportFile {
        report,
        provenance: Provenance {
            input_hash: hex::encode(hasher.finalize()),
            tool_version: TOOL_VERSION.into(),
            seed: args.seed,
        },
    };
    Ok(crate::json::to_string(&file))
}
