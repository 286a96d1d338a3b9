//! Line-oriented `key = value` configuration files. Unknown keys are
//! rejected; `#` starts a comment. Command line flags override file values.

use crooked_core::surface::FixedPointChoice;

use crate::{CliError, CliResult};

#[derive(Clone, Debug)]
pub struct Config {
    pub traces: (f64, f64, f64),
    pub depth: usize,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub clip_radius: f64,
    pub samples: usize,
    pub words: usize,
    pub segments: usize,
    pub fixed_point_choice: FixedPointChoice,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            traces: (3.0, 3.0, 3.0),
            depth: 4,
            seed: 7,
            tolerance: None,
            clip_radius: 8.0,
            samples: 10_000,
            words: 4,
            segments: 12,
            fixed_point_choice: FixedPointChoice::Plus,
        }
    }
}

pub fn parse_traces(s: &str) -> CliResult<(f64, f64, f64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::invalid(format!(
            "traces must be three comma-separated numbers, got `{s}`"
        )));
    }
    let mut v = [0.0f64; 3];
    for (slot, part) in v.iter_mut().zip(parts.iter()) {
        *slot = part
            .parse()
            .map_err(|_| CliError::invalid(format!("bad trace value `{part}`")))?;
    }
    Ok((v[0], v[1], v[2]))
}

impl Config {
    pub fn apply_line(&mut self, line: &str, location: &str) -> CliResult<()> {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            return Ok(());
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::invalid(format!("{location}: expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let value = value.trim();
        let parse_f64 = |v: &str| -> CliResult<f64> {
            v.parse()
                .map_err(|_| CliError::invalid(format!("{location}: bad number `{v}` for `{key}`")))
        };
        let parse_usize = |v: &str| -> CliResult<usize> {
            v.parse()
                .map_err(|_| CliError::invalid(format!("{location}: bad integer `{v}` for `{key}`")))
        };
        match key {
            "traces" => self.traces = parse_traces(value)?,
            "depth" => self.depth = parse_usize(value)?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| CliError::invalid(format!("{location}: bad seed `{value}`")))?
            }
            "tolerance" => self.tolerance = Some(parse_f64(value)?),
            "clip_radius" => self.clip_radius = parse_f64(value)?,
            "samples" => self.samples = parse_usize(value)?,
            "words" => self.words = parse_usize(value)?,
            "segments" => self.segments = parse_usize(value)?,
            "fixed_point_choice" => {
                self.fixed_point_choice = match value {
                    "plus" => FixedPointChoice::Plus,
                    "minus" => FixedPointChoice::Minus,
                    other => {
                        return Err(CliError::invalid(format!(
                            "{location}: fixed_point_choice must be `plus` or `minus`, got `{other}`"
                        )))
                    }
                }
            }
            other => {
                return Err(CliError::invalid(format!(
                    "{location}: unknown configuration key `{other}`"
                )))
            }
        }
        Ok(())
    }

    pub fn from_file(path: &str) -> CliResult<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("cannot read config `{path}`: {e}")))?;
        let mut cfg = Config::default();
        for (idx, line) in text.lines().enumerate() {
            cfg.apply_line(line, &format!("{path}:{}", idx + 1))?;
        }
        Ok(cfg)
    }
}
