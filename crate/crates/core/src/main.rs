//! Command-line surface: one subcommand per artifact (field profile, force
//! curve, deflection comparison, shape study, limiting force, coil
//! resistance, parameter sweep, full design pipeline).
//!
//! Exit codes: 0 success, 1 infeasible design, 2 input error, 3 numerical
//! error.

use clap::{Parser, Subcommand, ValueEnum};
use empump::config::{parse_config, DesignConfig};
use empump::design::{
    design_pipeline, optimal_gap, run_sweep, trend_verdicts, DesignProblem, ForceModel,
    SweepParameter, SweepSpec,
};
use empump::io::{
    write_deflection_compare_csv, write_field_csv, write_force_curve_csv, write_shapes_csv,
    write_sweep_csv, ReportDocument,
};
use empump::magnetics::{coil_resistance, field_profile, spiral_to_loops_with_fidelity};
use empump::plate::{
    center_deflection_eq2, compare_shapes, force_for_deflection, limiting_force_eq3,
    solve_circular_fd, ShapeFixture,
};
use empump::{Error, Result, COPPER_RESISTIVITY};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "empump", version, about = "Electromagnetic micropump actuator design toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Point,
    Volavg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParameterArg {
    Turns,
    Width,
    Spacing,
    Current,
    Gap,
}

#[derive(Parser, Debug)]
struct CommonArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default depends on the subcommand).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// On-axis field and gradient profile (CSV).
    Field {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of profile steps.
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Force vs. current curve at the optimal gap (CSV).
    Force {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Analytic vs. finite-difference center deflection (CSV).
    Deflect {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Equal-area circle/square/rectangle deflection comparison (CSV).
    Shapes {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Plastic limiting force of the diaphragm.
    Limit {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// DC resistance of the spiral coil.
    Resist {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Force sweep over one coil parameter.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = ParameterArg::Width)]
        parameter: ParameterArg,
        /// Comma-separated sweep values (um for geometry, A for current).
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Full design pipeline: deflection target to feasibility report.
    Design {
        #[command(flatten)]
        common: CommonArgs,
        /// Force model for the magnetic stages.
        #[arg(long, value_enum, default_value_t = ModelArg::Volavg)]
        model: ModelArg,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            e.exit_code()
        }
    });
}

fn with_output<F>(out: &Option<PathBuf>, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path)?;
            f(&mut file)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn format_or(common: &CommonArgs, default: Format, allowed: &[Format]) -> Result<Format> {
    let format = common.format.unwrap_or(default);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        Err(Error::Config {
            key: "--format".into(),
            reason: format!("{format:?} is not supported by this subcommand"),
        })
    }
}

fn force_model(cfg: &DesignConfig, arg: ModelArg) -> ForceModel {
    match arg {
        ModelArg::Point => ForceModel::Point,
        ModelArg::Volavg => ForceModel::VolumeAveraged {
            quadrature_order: cfg.quadrature_order as usize,
        },
    }
}

/// Default gap search range: from one magnet thickness above the coil
/// plane out to twice the coil envelope.
fn gap_range(cfg: &DesignConfig) -> (f64, f64) {
    (cfg.magnet.thickness, 2.0 * cfg.coil.outer_radius())
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Field { common, steps } => {
            format_or(&common, Format::Csv, &[Format::Csv])?;
            let cfg = parse_config(&common.config)?;
            let coil = spiral_to_loops_with_fidelity(&cfg.coil, cfg.current, cfg.fidelity);
            let (z_lo, z_hi) = gap_range(&cfg);
            let samples = field_profile(&coil, 0.0, z_lo, z_hi, steps)?;
            with_output(&common.out, |w| write_field_csv(&samples, w))?;
            Ok(0)
        }
        Command::Force { common } => {
            format_or(&common, Format::Csv, &[Format::Csv])?;
            let cfg = parse_config(&common.config)?;
            let model = ForceModel::VolumeAveraged {
                quadrature_order: cfg.quadrature_order as usize,
            };
            let unit = spiral_to_loops_with_fidelity(&cfg.coil, 1.0, cfg.fidelity);
            let best = optimal_gap(
                &unit,
                &cfg.magnet,
                ForceModel::Point,
                gap_range(&cfg),
                1e-6,
            )?;
            let f_unit = model.force(&unit, &cfg.magnet, best.gap)?;
            // Force is exactly linear in current; scale the unit solve.
            let rows: Vec<(f64, f64)> = (2..=10)
                .map(|i| {
                    let current = i as f64 / 10.0;
                    (current, f_unit * current)
                })
                .collect();
            with_output(&common.out, |w| write_force_curve_csv(&rows, w))?;
            Ok(0)
        }
        Command::Deflect { common } => {
            format_or(&common, Format::Csv, &[Format::Csv])?;
            let cfg = parse_config(&common.config)?;
            let a = cfg.diaphragm.radius;
            let c = cfg.magnet.radius;
            let rigidity = cfg.diaphragm.flexural_rigidity();
            let mut rows = Vec::new();
            for i in 1..=10 {
                let f = 2e-6 * i as f64;
                let w_eq2 = center_deflection_eq2(f, a, c, rigidity)?;
                let w_fd = solve_circular_fd(a, c, f, rigidity, cfg.fd_nodes as usize)?
                    .center_deflection();
                rows.push((f, w_eq2, w_fd));
            }
            with_output(&common.out, |w| write_deflection_compare_csv(&rows, w))?;
            Ok(0)
        }
        Command::Shapes { common } => {
            format_or(&common, Format::Csv, &[Format::Csv])?;
            let cfg = parse_config(&common.config)?;
            let rigidity = cfg.diaphragm.flexural_rigidity();
            let f_target = force_for_deflection(
                cfg.target_deflection,
                cfg.diaphragm.radius,
                cfg.magnet.radius,
                rigidity,
            )?;
            if f_target <= 0.0 {
                return Err(Error::Config {
                    key: "target.deflection_um".into(),
                    reason: "shape comparison needs a positive target deflection".into(),
                });
            }
            let mut fixture =
                ShapeFixture::new(cfg.diaphragm.radius, cfg.magnet.radius, rigidity);
            fixture.n_circle = (cfg.fd_nodes as usize).min(512);
            let forces = [0.5 * f_target, f_target, 1.5 * f_target];
            let rows = compare_shapes(&fixture, &forces)?;
            with_output(&common.out, |w| write_shapes_csv(&rows, w))?;
            Ok(0)
        }
        Command::Limit { common } => {
            let format = format_or(&common, Format::Json, &[Format::Json, Format::Text])?;
            let cfg = parse_config(&common.config)?;
            let kappa = cfg.diaphragm.kappa(&cfg.magnet);
            let lim = limiting_force_eq3(
                cfg.diaphragm.thickness,
                cfg.diaphragm.yield_strength,
                kappa,
                cfg.diaphragm.poisson_ratio,
            )?;
            #[allow(non_snake_case)]
            #[derive(Serialize)]
            struct LimitOut {
                kappa: f64,
                limiting_force_uN: f64,
                branch: String,
            }
            let doc = LimitOut {
                kappa,
                limiting_force_uN: lim.force * 1e6,
                branch: lim.branch.to_string(),
            };
            with_output(&common.out, |w| match format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut *w, &doc)?;
                    writeln!(w)?;
                    Ok(())
                }
                _ => {
                    writeln!(w, "kappa          : {:.4}", doc.kappa)?;
                    writeln!(w, "limiting force : {:.2} uN", doc.limiting_force_uN)?;
                    writeln!(w, "branch         : {}", doc.branch)?;
                    Ok(())
                }
            })?;
            Ok(0)
        }
        Command::Resist { common } => {
            let format = format_or(&common, Format::Json, &[Format::Json, Format::Text])?;
            let cfg = parse_config(&common.config)?;
            let resistance = coil_resistance(&cfg.coil, COPPER_RESISTIVITY);
            with_output(&common.out, |w| match format {
                Format::Json => {
                    writeln!(w, "{{\n  \"resistance_ohm\": {resistance}\n}}")?;
                    Ok(())
                }
                _ => {
                    writeln!(w, "coil resistance: {resistance:.4} ohm")?;
                    Ok(())
                }
            })?;
            Ok(0)
        }
        Command::Sweep {
            common,
            parameter,
            values,
        } => {
            let format = format_or(&common, Format::Csv, &[Format::Csv, Format::Json])?;
            let cfg = parse_config(&common.config)?;
            let (param, label, default_values, scale): (SweepParameter, &str, Vec<f64>, f64) =
                match parameter {
                    ParameterArg::Turns => {
                        (SweepParameter::Turns, "turns", vec![5.0, 10.0, 20.0, 40.0], 1.0)
                    }
                    ParameterArg::Width => (
                        SweepParameter::ConductorWidth,
                        "width_um",
                        vec![15.0, 25.0, 35.0],
                        1e-6,
                    ),
                    ParameterArg::Spacing => (
                        SweepParameter::TurnSpacing,
                        "spacing_um",
                        vec![10.0, 20.0, 40.0],
                        1e-6,
                    ),
                    ParameterArg::Current => (
                        SweepParameter::Current,
                        "current_a",
                        (2..=10).map(|i| i as f64 / 10.0).collect(),
                        1.0,
                    ),
                    ParameterArg::Gap => (
                        SweepParameter::Gap,
                        "gap_um",
                        vec![200.0, 400.0, 600.0, 800.0],
                        1e-6,
                    ),
                };
            let boundary_values = values.unwrap_or(default_values);
            let spec = SweepSpec {
                parameter: param,
                values: boundary_values.iter().map(|v| v * scale).collect(),
                coil: cfg.coil,
                magnet: cfg.magnet,
                gap: 620e-6,
                current: cfg.current,
                model: ForceModel::Point,
                fidelity: cfg.fidelity,
            };
            let rows = run_sweep(&spec)?;
            let table: Vec<(f64, f64)> = boundary_values
                .iter()
                .zip(&rows)
                .map(|(&v, r)| (v, r.force))
                .collect();
            match format {
                Format::Csv => {
                    with_output(&common.out, |w| write_sweep_csv(label, &table, w))?
                }
                _ => {
                    #[derive(Serialize)]
                    struct SweepOut {
                        parameter: String,
                        rows: Vec<SweepRowOut>,
                        trend_verdicts: VerdictsOut,
                    }
                    #[allow(non_snake_case)]
                    #[derive(Serialize)]
                    struct SweepRowOut {
                        value: f64,
                        force_uN: f64,
                    }
                    #[derive(Serialize)]
                    struct VerdictsOut {
                        turns_plateau: bool,
                        turns_top_gain: f64,
                        width_decreasing: bool,
                        spacing_decreasing: bool,
                    }
                    let v = trend_verdicts(&cfg.magnet)?;
                    let doc = SweepOut {
                        parameter: label.to_string(),
                        rows: table
                            .iter()
                            .map(|&(value, force)| SweepRowOut {
                                value,
                                force_uN: force * 1e6,
                            })
                            .collect(),
                        trend_verdicts: VerdictsOut {
                            turns_plateau: v.turns_plateau,
                            turns_top_gain: v.turns_top_gain,
                            width_decreasing: v.width_decreasing,
                            spacing_decreasing: v.spacing_decreasing,
                        },
                    };
                    with_output(&common.out, |w| {
                        serde_json::to_writer_pretty(&mut *w, &doc)?;
                        writeln!(w)?;
                        Ok(())
                    })?;
                }
            }
            Ok(0)
        }
        Command::Design { common, model } => {
            let format = format_or(&common, Format::Json, &[Format::Json, Format::Text])?;
            let cfg = parse_config(&common.config)?;
            let fm = force_model(&cfg, model);
            let problem = DesignProblem {
                coil: cfg.coil,
                magnet: cfg.magnet,
                diaphragm: cfg.diaphragm,
                target_deflection: cfg.target_deflection,
                safety_factor: cfg.safety_factor,
                current_ceiling: cfg.current_ceiling,
                model: fm,
                fidelity: cfg.fidelity,
            };
            let report = design_pipeline(&problem)?;
            let kappa = cfg.diaphragm.kappa(&cfg.magnet);
            let branch = limiting_force_eq3(
                cfg.diaphragm.thickness,
                cfg.diaphragm.yield_strength,
                kappa,
                cfg.diaphragm.poisson_ratio,
            )?
            .branch;
            let doc = ReportDocument::new(&report, &cfg, branch, fm.label());
            with_output(&common.out, |w| match format {
                Format::Json => doc.write_json(w),
                _ => doc.write_text(w),
            })?;
            Ok(if report.feasible { 0 } else { 1 })
        }
    }
}
