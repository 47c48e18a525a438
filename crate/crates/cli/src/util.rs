use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use scldpc::constellation::{ModeSpec, SignalingMode, PRESET_NAMES};
use scldpc::protograph::{sc_ensemble, ScEnsemble};

/// Exit status for bad arguments, inputs or plans.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit status for failures after validation passed.
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            Self::Validation(_) => EXIT_VALIDATION,
            Self::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Validation(m) => write!(f, "invalid input: {m}"),
            Self::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Wraps an error as a validation failure of `field`.
pub fn invalid<E: Display>(field: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Validation(format!("{field}: {e}"))
}

pub fn runtime<E: Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

/// A preset name or the path of a JSON mode description.
pub fn load_mode(arg: &str) -> CliResult<SignalingMode> {
    let spec = match ModeSpec::preset(arg) {
        Some(s) => s,
        None => {
            let path = Path::new(arg);
            if !path.is_file() {
                return Err(CliError::Validation(format!(
                    "--mode: {arg:?} is neither a preset ({}) nor a readable file",
                    PRESET_NAMES.join(", ")
                )));
            }
            let text = fs::read_to_string(path).map_err(invalid("--mode"))?;
            serde_json::from_str::<ModeSpec>(&text).map_err(invalid("--mode"))?
        }
    };
    spec.build().map_err(invalid("--mode"))
}

/// `dv,dc`.
pub fn parse_ensemble(arg: &str) -> CliResult<ScEnsemble> {
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    let [dv, dc] = parts[..] else {
        return Err(CliError::Validation(format!("--ensemble: expected dv,dc, got {arg:?}")));
    };
    let dv: usize = dv.parse().map_err(invalid("--ensemble.dv"))?;
    let dc: usize = dc.parse().map_err(invalid("--ensemble.dc"))?;
    sc_ensemble(dv, dc).map_err(invalid("--ensemble"))
}

/// `a,b,c` or `start:stop:step` (inclusive of `stop` up to rounding).
pub fn parse_grid(arg: &str) -> CliResult<Vec<f64>> {
    let num = |s: &str| s.trim().parse::<f64>().map_err(invalid("--snr"));
    let out = if arg.contains(':') {
        let parts: Vec<&str> = arg.split(':').collect();
        let [a, b, step] = parts[..] else {
            return Err(CliError::Validation(format!("--snr: expected start:stop:step, got {arg:?}")));
        };
        let (a, b, step) = (num(a)?, num(b)?, num(step)?);
        if !(step > 0.0) || b < a {
            return Err(CliError::Validation(format!("--snr: empty range {arg:?}")));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| a + i as f64 * step).map(|x| (x * 1e9).round() / 1e9).collect()
    } else {
        arg.split(',').map(num).collect::<CliResult<Vec<_>>>()?
    };
    if out.is_empty() || out.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Validation(format!("--snr: no finite values in {arg:?}")));
    }
    Ok(out)
}

/// Output directory, created on demand.
pub fn out_file(dir: &Path, name: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir.join(name))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}
