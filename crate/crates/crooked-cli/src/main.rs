use std::process::ExitCode;

use crooked_cli::commands::{self, DomainTarget};
use crooked_cli::config::{parse_traces, Config};
use crooked_cli::{CliError, CliResult, Outcome};

const USAGE: &str = "\
crooked — proper affine deformations of hyperbolic one-holed tori

USAGE:
  crooked tiles   --traces 3,3,3 --depth 4 --out tiles.svg [--report tiles.txt]
  crooked nielsen --traces 3,3,3 --words 6 --out nielsen.svg
  crooked domain  --traces 3,3,3 --u 1,1,1,1,1,1 --out dom.obj [--report dom.txt]
  crooked domain  --traces 3,3,3 --alpha 2,2,2 --out dom.obj
  crooked verify  [--config cfg.txt] [--report verify.txt]
  crooked farey   --depth 8 --out tree.txt

FLAGS (every command):
  --config <file>        line-oriented `key = value` configuration
  --traces x,y,z         trace triple (x,y,z > 2 and x²+y²+z² ≤ xyz)
  --depth <n>            tree depth
  --seed <n>             sampling seed
  --words <n>            word-length bound
  --samples <n>          sample count for verification
  --clip-radius <r>      mesh clipping radius
  --segments <n>         mesh resolution
  --choice plus|minus    fixed null ray when the boundary is hyperbolic
  --tolerance <t>        override all verification tolerances
  --u a,b,c,d,e,f        vertex coefficients (u0+,u0-,u1+,u1-,u2+,u2-)
  --alpha a,b,c          Margulis-invariant target
  --out <file>           output path
  --report <file>        machine-readable result file

EXIT CODES: 0 success, 1 verification failure, 2 invalid input.
";

struct Args {
    command: String,
    out: Option<String>,
    report: Option<String>,
    u: Option<[f64; 6]>,
    alpha: Option<[f64; 3]>,
    config: Config,
}

fn parse_list<const N: usize>(raw: &str, what: &str) -> CliResult<[f64; N]> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(CliError::invalid(format!(
            "{what} needs {N} comma-separated numbers, got `{raw}`"
        )));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts.iter()) {
        *slot = part
            .parse()
            .map_err(|_| CliError::invalid(format!("bad number `{part}` in {what}")))?;
    }
    Ok(out)
}

fn parse_args(argv: &[String]) -> CliResult<Args> {
    let Some(command) = argv.first() else {
        return Err(CliError::invalid(USAGE.to_string()));
    };
    if command == "--help" || command == "-h" || command == "help" {
        return Err(CliError {
            outcome: Outcome::Success,
            message: USAGE.to_string(),
        });
    }
    // Config file first, flags override.
    let mut config_path: Option<String> = None;
    let mut it = argv[1..].iter().peekable();
    let mut pending: Vec<(String, String)> = Vec::new();
    while let Some(flag) = it.next() {
        let value = match flag.as_str() {
            "--help" | "-h" => {
                return Err(CliError {
                    outcome: Outcome::Success,
                    message: USAGE.to_string(),
                })
            }
            _ => it
                .next()
                .ok_or_else(|| CliError::invalid(format!("flag `{flag}` needs a value")))?
                .clone(),
        };
        if flag == "--config" {
            config_path = Some(value);
        } else {
            pending.push((flag.clone(), value));
        }
    }
    let mut config = match config_path {
        Some(p) => Config::from_file(&p)?,
        None => Config::default(),
    };
    let mut out = None;
    let mut report = None;
    let mut u = None;
    let mut alpha = None;
    for (flag, value) in pending {
        match flag.as_str() {
            "--traces" => config.traces = parse_traces(&value)?,
            "--depth" => {
                config.depth = value
                    .parse()
                    .map_err(|_| CliError::invalid(format!("bad depth `{value}`")))?
            }
            "--seed" => {
                config.seed = value
                    .parse()
                    .map_err(|_| CliError::invalid(format!("bad seed `{value}`")))?
            }
            "--words" => {
                config.words = value
                    .parse()
                    .map_err(|_| CliError::invalid(format!("bad word bound `{value}`")))?
            }
            "--samples" => {
                config.samples = value
                    .parse()
                    .map_err(|_| CliError::invalid(format!("bad sample count `{value}`")))?
            }
            "--segments" => {
                config.segments = value
                    .parse()
                    .map_err(|_| CliError::invalid(format!("bad segment count `{value}`")))?
            }
            "--clip-radius" => {
                config.clip_radius = value
                    .parse()
                    .map_err(|_| CliError::invalid(format!("bad clip radius `{value}`")))?
            }
            "--tolerance" => {
                config.tolerance = Some(
                    value
                        .parse()
                        .map_err(|_| CliError::invalid(format!("bad tolerance `{value}`")))?,
                )
            }
            "--choice" => {
                config.fixed_point_choice = match value.as_str() {
                    "plus" => crooked_core::surface::FixedPointChoice::Plus,
                    "minus" => crooked_core::surface::FixedPointChoice::Minus,
                    other => {
                        return Err(CliError::invalid(format!(
                            "--choice must be plus or minus, got `{other}`"
                        )))
                    }
                }
            }
            "--u" => u = Some(parse_list::<6>(&value, "--u")?),
            "--alpha" => alpha = Some(parse_list::<3>(&value, "--alpha")?),
            "--out" => out = Some(value),
            "--report" => report = Some(value),
            other => return Err(CliError::invalid(format!("unknown flag `{other}`"))),
        }
    }
    Ok(Args {
        command: command.clone(),
        out,
        report,
        u,
        alpha,
        config,
    })
}

fn require_out(args: &Args) -> CliResult<&str> {
    args.out
        .as_deref()
        .ok_or_else(|| CliError::invalid("--out <file> is required".to_string()))
}

fn default_report_path(out: &str) -> String {
    match out.rsplit_once('.') {
        Some((stem, _)) => format!("{stem}.report.txt"),
        None => format!("{out}.report.txt"),
    }
}

fn run(args: &Args) -> CliResult<()> {
    match args.command.as_str() {
        "tiles" => {
            let out = require_out(args)?;
            let (svg, report) = commands::cmd_tiles(&args.config)?;
            std::fs::write(out, svg)?;
            let report_path = args
                .report
                .clone()
                .unwrap_or_else(|| default_report_path(out));
            std::fs::write(&report_path, report)?;
            println!("wrote {out} and {report_path}");
            Ok(())
        }
        "nielsen" => {
            let out = require_out(args)?;
            let (svg, triangles) = commands::cmd_nielsen(&args.config)?;
            std::fs::write(out, svg)?;
            println!("wrote {out} ({triangles} triangles)");
            Ok(())
        }
        "domain" => {
            let out = require_out(args)?;
            let target = match (args.u, args.alpha) {
                (Some(u), None) => DomainTarget::Coefficients(u),
                (None, Some(a)) => DomainTarget::Alpha(a),
                (None, None) => {
                    return Err(CliError::invalid(
                        "domain needs --u or --alpha".to_string(),
                    ))
                }
                (Some(_), Some(_)) => {
                    return Err(CliError::invalid(
                        "domain takes --u or --alpha, not both".to_string(),
                    ))
                }
            };
            let (objtext, report) = commands::cmd_domain(&args.config, &target)?;
            std::fs::write(out, objtext)?;
            let report_path = args
                .report
                .clone()
                .unwrap_or_else(|| default_report_path(out));
            std::fs::write(&report_path, report)?;
            println!("wrote {out} and {report_path}");
            Ok(())
        }
        "verify" => {
            let (report, all_passed, lines) = commands::cmd_verify(&args.config)?;
            for line in &lines {
                println!("{line}");
            }
            if let Some(path) = &args.report {
                std::fs::write(path, report)?;
                println!("wrote {path}");
            }
            if all_passed {
                Ok(())
            } else {
                Err(CliError::verification("verification failed".to_string()))
            }
        }
        "farey" => {
            let out = require_out(args)?;
            let text = commands::cmd_farey(args.config.depth)?;
            std::fs::write(out, text)?;
            println!("wrote {out}");
            Ok(())
        }
        other => Err(CliError::invalid(format!(
            "unknown command `{other}`\n\n{USAGE}"
        ))),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let args = match parse_args(&argv) {
        Ok(a) => a,
        Err(e) => {
            if e.outcome == Outcome::Success {
                println!("{}", e.message);
                return ExitCode::from(0);
            }
            eprintln!("{}", e.message);
            return ExitCode::from(e.outcome.code() as u8);
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::from(0),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.outcome.code() as u8)
        }
    }
}
