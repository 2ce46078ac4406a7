use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use polelab_core::io::{
    exact_string, float_string, pole_rows, resolve_model, save_model, write_csv, write_json, PoleRow, SweepRow,
    POLE_COLUMNS, SWEEP_COLUMNS,
};
use polelab_core::numeric::rational::{format_rational, parse_rational};
use polelab_core::perturb::{ec_perturb, power_op, power_op_permissive, root_op, shift, sign_power};
use polelab_core::spectral::{admissible_from, spectral_functions, FUNCTION_NAMES};
use polelab_core::suite::{self, NamedModel, SuiteConfig};
use polelab_core::symbol::{is_differential, is_odd_class, ncr, power_int};
use polelab_core::{io as pio, ExactScalar, PerturbationParams, Rational, SpectralModel, SpectralOptions, DEFAULT_PREC};

#[derive(Parser)]
#[command(name = "polelab", version, about = "Poles and residues of spectral zeta and eta functions")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_PREC)]
    prec: u32,
    /// Number of correction terms used for pole tables (default n + m + 4).
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Lowest k of the admissible points k/m.
    #[arg(long, global = true, default_value_t = -2, allow_hyphen_values = true)]
    floor: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Args, Clone)]
struct Perturbation {
    /// Constant shift a: P + a (applied after ε and c).
    #[arg(long, allow_hyphen_values = true)]
    shift: Option<String>,
    /// P + ε|P|, with |ε| < 1.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    /// Adds c F|P|^(-n), c ≥ 0.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
}

impl Perturbation {
    fn values(&self) -> Result<(Rational, Rational, Rational)> {
        let p = |x: &Option<String>| -> Result<Rational> {
            Ok(match x {
                Some(t) => parse_rational(t)?,
                None => Rational::new(),
            })
        };
        Ok((p(&self.shift)?, p(&self.epsilon)?, p(&self.c)?))
    }

    fn is_empty(&self) -> bool {
        self.shift.is_none() && self.epsilon.is_none() && self.c.is_none()
    }

    fn apply(&self, model: &SpectralModel) -> Result<SpectralModel> {
        let (a, eps, c) = self.values()?;
        apply(model, &a, &eps, &c)
    }
}

fn apply(model: &SpectralModel, a: &Rational, eps: &Rational, c: &Rational) -> Result<SpectralModel> {
    let base = if *eps != 0 || *c != 0 { ec_perturb(model, eps, c)? } else { model.clone() };
    Ok(shift(&base, a)?)
}

#[derive(Subcommand)]
enum Command {
    /// Residues of ζ↑, ζ↓, ζ(|P|) and η at the admissible points k/m, floor ≤ k ≤ n, k ≠ 0.
    Poles {
        /// Library model (name or name:a) or model file.
        model: String,
        #[command(flatten)]
        perturbation: Perturbation,
        /// Keep only these functions.
        #[arg(long, value_delimiter = ',')]
        function: Vec<String>,
    },
    /// Residue trajectories as one parameter varies over a range.
    Sweep {
        model: String,
        #[arg(long, value_parser = ["a", "epsilon", "c"])]
        param: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Fixed values of the parameters not being swept.
        #[command(flatten)]
        perturbation: Perturbation,
        /// Keep only these points σ.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        sigma: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        function: Vec<String>,
    },
    /// Run suite checks (all by default) and report verdicts.
    Check {
        ids: Vec<String>,
        /// Run model-dependent checks on this model instead of their defaults.
        #[arg(long)]
        model: Option<String>,
        #[command(flatten)]
        perturbation: Perturbation,
        #[arg(long)]
        exact_only: bool,
        #[arg(long, default_value_t = suite::DEFAULT_SEED)]
        seed: u64,
    },
    /// Evaluate spectral functions at a point s (rational, decimal or complex like 1/2+3i).
    Eval {
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[command(flatten)]
        perturbation: Perturbation,
        #[arg(long, value_delimiter = ',')]
        function: Vec<String>,
        /// Decimal digits shown for non-exact values.
        #[arg(long, default_value_t = 30)]
        digits: usize,
    },
    /// Emit a perturbed model file.
    Perturb {
        model: String,
        #[command(flatten)]
        perturbation: Perturbation,
        /// Build F(Q_ε,c + a)|Q_ε,c + a|^m from Q = F|P|^(1/m) instead of (P_ε,c) + a.
        #[arg(long)]
        power: bool,
        /// With --power, accept a outside the gap range and record a note in the model.
        #[arg(long)]
        permissive: bool,
        /// Emit Q = F|P|^(1/m).
        #[arg(long, conflicts_with = "power")]
        root: bool,
        /// Emit F|P|^m.
        #[arg(long, conflicts_with_all = ["power", "root"])]
        sign_power: Option<u32>,
    },
    /// Residue data of a symbol file on the circle.
    Symbol {
        file: PathBuf,
        /// Integer power taken before the residue.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        power: i64,
    },
}

fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn check_functions(list: &[String]) -> Result<()> {
    for f in list {
        if !FUNCTION_NAMES.contains(&f.as_str()) {
            bail!("unknown function {f:?}; expected one of {}", FUNCTION_NAMES.join(", "));
        }
    }
    Ok(())
}

fn keep(list: &[String], name: &str) -> bool {
    list.is_empty() || list.iter().any(|f| f == name)
}

fn opts(cli: &Cli) -> SpectralOptions {
    SpectralOptions { depth: cli.depth, prec: cli.prec }
}

fn pole_table(cli: &Cli, model: &SpectralModel) -> Result<Vec<PoleRow>> {
    let fns = spectral_functions(model, &opts(cli))?;
    Ok(pole_rows(&admissible_from(&fns, model, cli.floor)?))
}

fn emit<T: serde::Serialize>(cli: &Cli, rows: &[T], header: &[&str]) -> Result<()> {
    let out = out_writer(&cli.output)?;
    match cli.format {
        Format::Json => write_json(rows, out)?,
        _ => write_csv(rows, header, out)?,
    }
    Ok(())
}

/// `n` evenly spaced exact values from `lo` to `hi`; empty when `lo > hi` or `n = 0`.
fn linspace(lo: &Rational, hi: &Rational, n: usize) -> Vec<Rational> {
    if n == 0 || lo > hi {
        return Vec::new();
    }
    if n == 1 {
        return vec![lo.clone()];
    }
    let step = Rational::from(hi - lo) / Rational::from(n as u64 - 1);
    (0..n).map(|i| (&step * Rational::from(i as u64)) + lo).collect()
}

fn parse_point(text: &str) -> Result<ExactScalar> {
    let t = text.trim();
    if let Ok(r) = parse_rational(t) {
        return Ok(ExactScalar::from(r));
    }
    t.parse::<ExactScalar>().with_context(|| format!("cannot parse s = {text:?}"))
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Poles { model, perturbation, function } => {
            check_functions(function)?;
            let m = perturbation.apply(&resolve_model(model)?)?;
            let rows: Vec<PoleRow> = pole_table(cli, &m)?.into_iter().filter(|r| keep(function, &r.function)).collect();
            emit(cli, &rows, &POLE_COLUMNS)?;
        }
        Command::Sweep { model, param, from, to, samples, perturbation, sigma, function } => {
            check_functions(function)?;
            let base = resolve_model(model)?;
            let sigmas = sigma.iter().map(|s| parse_rational(s)).collect::<polelab_core::Result<Vec<_>>>()?;
            let (a0, e0, c0) = perturbation.values()?;
            let mut rows = Vec::new();
            for v in linspace(&parse_rational(from)?, &parse_rational(to)?, *samples) {
                let (a, e, c) = match param.as_str() {
                    "a" => (v.clone(), e0.clone(), c0.clone()),
                    "epsilon" => (a0.clone(), v.clone(), c0.clone()),
                    _ => (a0.clone(), e0.clone(), v.clone()),
                };
                let m = apply(&base, &a, &e, &c)?;
                for r in pole_table(cli, &m)? {
                    let at = sigmas.is_empty() || sigmas.iter().any(|s| format_rational(s) == r.sigma);
                    if at && keep(function, &r.function) {
                        rows.push(SweepRow {
                            parameter: param.clone(),
                            value: format_rational(&v),
                            sigma: r.sigma,
                            function: r.function,
                            residue_exact: r.residue_exact,
                            residue_float: r.residue_float,
                        });
                    }
                }
            }
            emit(cli, &rows, &SWEEP_COLUMNS)?;
        }
        Command::Check { ids, model, perturbation, exact_only, seed } => {
            let named = match model {
                Some(name) => {
                    let m = perturbation.apply(&resolve_model(name)?)?;
                    let mut label = name.clone();
                    if !perturbation.is_empty() {
                        let (a, e, c) = perturbation.values()?;
                        label = format!("{name} (a = {}, ε = {}, c = {})", format_rational(&a), format_rational(&e), format_rational(&c));
                    }
                    Some(NamedModel { name: label, model: m })
                }
                None if !perturbation.is_empty() => bail!("--shift, --epsilon and --c need --model"),
                None => None,
            };
            let config = SuiteConfig {
                ids: ids.clone(),
                exact_only: *exact_only,
                prec: cli.prec,
                depth: cli.depth,
                seed: *seed,
                model: named,
            };
            let verdicts = suite::run_all(&config)?;
            let mut out = out_writer(&cli.output)?;
            match cli.format {
                Format::Json => writeln!(out, "{}", suite::report_json(&verdicts)?)?,
                _ => write!(out, "{}", suite::report_text(&verdicts))?,
            }
            out.flush()?;
            if !suite::all_pass(&verdicts) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Eval { model, s, perturbation, function, digits } => {
            check_functions(function)?;
            let m = perturbation.apply(&resolve_model(model)?)?;
            let point = parse_point(s)?;
            let fns = spectral_functions(&m, &opts(cli))?;
            #[derive(serde::Serialize)]
            struct Value {
                function: &'static str,
                s: String,
                exact: String,
                float: String,
                decimal: String,
            }
            let mut values = Vec::new();
            for name in FUNCTION_NAMES.iter().filter(|n| keep(function, n)) {
                let v = fns.get(name).expect("known").evaluate(&point, cli.prec)?;
                let decimal = match &v {
                    ExactScalar::Approx(b) => b.to_decimal(*digits),
                    other => other.to_string(),
                };
                values.push(Value { function: name, s: point.to_string(), exact: exact_string(&v), float: float_string(&v), decimal });
            }
            let mut out = out_writer(&cli.output)?;
            match cli.format {
                Format::Json => write_json(&values, out)?,
                Format::Csv => write_csv(&values, &["function", "s", "exact", "float", "decimal"], out)?,
                Format::Text => {
                    for v in &values {
                        writeln!(out, "{}({}) = {}", v.function, v.s, v.decimal)?;
                    }
                }
            }
        }
        Command::Perturb { model, perturbation, power, permissive, root, sign_power: sp } => {
            let base = resolve_model(model)?;
            let out_model = if *power {
                let (a, e, c) = perturbation.values()?;
                let params = PerturbationParams::new(a, e, c)?;
                if *permissive {
                    power_op_permissive(&base, &params)?
                } else {
                    power_op(&base, &params)?
                }
            } else if *root {
                root_op(&perturbation.apply(&base)?)?
            } else if let Some(k) = sp {
                sign_power(&perturbation.apply(&base)?, *k)?
            } else {
                perturbation.apply(&base)?
            };
            match &cli.output {
                Some(p) => save_model(&out_model, p)?,
                None => println!("{}", out_model.to_json()?),
            }
        }
        Command::Symbol { file, power } => {
            let sym = pio::load_symbol(file)?;
            let p = power_int(&sym, *power)?;
            let res = ncr(&p)?;
            let mut out = out_writer(&cli.output)?;
            let report = serde_json::json!({
                "order": p.order(),
                "power": power,
                "odd_class": is_odd_class(&p),
                "differential": is_differential(&p),
                "residue": res.to_string(),
            });
            match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
                _ => writeln!(
                    out,
                    "order {}  odd-class {}  differential {}  Res = {}",
                    p.order(),
                    is_odd_class(&p),
                    is_differential(&p),
                    res
                )?,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
