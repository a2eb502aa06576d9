//! Inverse design: optimal coil-magnet gap, required current, safety
//! margins, coil-parameter trend studies, and the end-to-end pipeline.

use crate::error::{Error, Result};
use crate::magnetics::{force_point, force_volavg, spiral_to_loops_with_fidelity, CoilModel};
use crate::model::{CoilSpec, DesignReport, DiaphragmSpec, MagnetSpec};
use crate::plate::{force_for_deflection, limiting_force_eq3, LimitBranch};

/// How the magnetic force on the magnet is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceModel {
    /// F = M_z V_m dB_z/dz sampled on-axis at the magnet mid-plane.
    Point,
    /// Gradient integrated over the magnet cylinder by Gauss-Legendre
    /// quadrature of the given starting order.
    VolumeAveraged { quadrature_order: usize },
}

impl ForceModel {
    pub fn label(&self) -> &'static str {
        match self {
            ForceModel::Point => "point",
            ForceModel::VolumeAveraged { .. } => "volume_averaged",
        }
    }

    /// Signed force on the magnet at the given mid-plane gap.
    pub fn force(&self, coil: &CoilModel, magnet: &MagnetSpec, gap: f64) -> Result<f64> {
        match *self {
            ForceModel::Point => force_point(coil, magnet, gap),
            ForceModel::VolumeAveraged { quadrature_order } => {
                force_volavg(coil, magnet, gap, quadrature_order)
            }
        }
    }
}

/// Gap that maximizes the force magnitude, and the signed force there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalGap {
    pub gap: f64,
    pub force: f64,
}

/// Find the gap in `z_range` that maximizes |force| on the magnet: coarse
/// grid scan followed by golden-section refinement of the bracketing
/// interval down to `resolution`.
///
/// Errors with `RangeTooNarrow` if the coarse argmax sits on a range
/// boundary, since the bracket would then be one-sided.
pub fn optimal_gap(
    coil: &CoilModel,
    magnet: &MagnetSpec,
    model: ForceModel,
    z_range: (f64, f64),
    resolution: f64,
) -> Result<OptimalGap> {
    let (lo, hi) = z_range;
    if !(lo > magnet.thickness / 2.0 && hi > lo) {
        return Err(Error::Geometry(format!(
            "gap search range [{lo}, {hi}] must start above half the magnet thickness"
        )));
    }
    if !(resolution > 0.0 && resolution <= 1e-6) {
        return Err(Error::Geometry(format!(
            "gap resolution must be in (0, 1 um], got {resolution}"
        )));
    }
    const COARSE: usize = 128;
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    let z_at = |i: usize| lo + (hi - lo) * i as f64 / COARSE as f64;
    for i in 0..=COARSE {
        let f = model.force(coil, magnet, z_at(i))?.abs();
        if f > best {
            best = f;
            best_i = i;
        }
    }
    if best_i == 0 || best_i == COARSE {
        return Err(Error::RangeTooNarrow {
            z: z_at(best_i),
            lo,
            hi,
        });
    }
    // Golden-section maximization of |F| on the bracketing interval.
    let mut a = z_at(best_i - 1);
    let mut b = z_at(best_i + 1);
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = model.force(coil, magnet, x1)?.abs();
    let mut f2 = model.force(coil, magnet, x2)?.abs();
    while b - a > resolution {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = model.force(coil, magnet, x2)?.abs();
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = model.force(coil, magnet, x1)?.abs();
        }
    }
    let gap = (a + b) / 2.0;
    Ok(OptimalGap {
        gap,
        force: model.force(coil, magnet, gap)?,
    })
}

/// Current required to produce total force magnitude `f_target` at the
/// given gap, by exact linearity in current: I = F_target / |F(1 A)|.
pub fn solve_current(
    coil: &CoilSpec,
    magnet: &MagnetSpec,
    gap: f64,
    f_target: f64,
    model: ForceModel,
    fidelity: u32,
) -> Result<f64> {
    if f_target < 0.0 {
        return Err(Error::Geometry(format!(
            "target force must be >= 0, got {f_target}"
        )));
    }
    let unit = spiral_to_loops_with_fidelity(coil, 1.0, fidelity);
    let f_unit = model.force(&unit, magnet, gap)?.abs();
    if f_unit == 0.0 {
        return Err(Error::NoSolution(
            "coil produces zero force at 1 A at this gap".into(),
        ));
    }
    Ok(f_target / f_unit)
}

/// Safety assessment of an applied force against the plastic limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafetyMargin {
    /// F_lim / F_applied; infinite at zero applied force.
    pub margin: f64,
    /// margin >= the requested safety factor.
    pub safe: bool,
    /// The limiting force itself, N.
    pub limiting_force: f64,
    /// Which branch of the limiting-force formula applied.
    pub branch: LimitBranch,
}

pub fn safety_margin(
    f_applied: f64,
    diaphragm: &DiaphragmSpec,
    kappa: f64,
    safety_factor: f64,
) -> Result<SafetyMargin> {
    if f_applied < 0.0 {
        return Err(Error::Geometry(format!(
            "applied force must be >= 0, got {f_applied}"
        )));
    }
    let lim = limiting_force_eq3(
        diaphragm.thickness,
        diaphragm.yield_strength,
        kappa,
        diaphragm.poisson_ratio,
    )?;
    let margin = if f_applied == 0.0 {
        f64::INFINITY
    } else {
        lim.force / f_applied
    };
    Ok(SafetyMargin {
        margin,
        safe: margin >= safety_factor,
        limiting_force: lim.force,
        branch: lim.branch,
    })
}

/// Swept coil parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Turns,
    ConductorWidth,
    TurnSpacing,
    Current,
    Gap,
}

impl SweepParameter {
    pub fn label(&self) -> &'static str {
        match self {
            SweepParameter::Turns => "turns",
            SweepParameter::ConductorWidth => "conductor_width",
            SweepParameter::TurnSpacing => "turn_spacing",
            SweepParameter::Current => "current",
            SweepParameter::Gap => "gap",
        }
    }
}

/// One force-vs-parameter study: everything except `parameter` is held at
/// the snapshot values.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    /// Strictly monotone parameter values (turns still given as f64).
    pub values: Vec<f64>,
    pub coil: CoilSpec,
    pub magnet: MagnetSpec,
    /// Evaluation gap, m.
    pub gap: f64,
    /// Coil current, A.
    pub current: f64,
    pub model: ForceModel,
    pub fidelity: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// Signed force at this parameter value, N.
    pub force: f64,
}

/// Evaluate the response at each sweep value, in input order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.values.len() < 3 {
        return Err(Error::InvalidSpec {
            field: "sweep.values",
            reason: format!("need at least 3 sweep values, got {}", spec.values.len()),
        });
    }
    let monotone = spec.values.windows(2).all(|w| w[1] > w[0])
        || spec.values.windows(2).all(|w| w[1] < w[0]);
    if !monotone {
        return Err(Error::InvalidSpec {
            field: "sweep.values",
            reason: "sweep values must be strictly monotone".into(),
        });
    }
    spec.values
        .iter()
        .map(|&value| {
            let force = evaluate_sweep_point(spec, value)?;
            Ok(SweepRow { value, force })
        })
        .collect()
}

fn evaluate_sweep_point(spec: &SweepSpec, value: f64) -> Result<f64> {
    let mut coil = spec.coil;
    let mut current = spec.current;
    let mut gap = spec.gap;
    match spec.parameter {
        SweepParameter::Turns => {
            if value <= 0.0 || value.fract() != 0.0 {
                return Err(Error::InvalidSpec {
                    field: "sweep.values",
                    reason: format!("turn count must be a positive integer, got {value}"),
                });
            }
            coil.turns = value as u32;
        }
        SweepParameter::ConductorWidth => coil.conductor_width = value,
        SweepParameter::TurnSpacing => coil.turn_spacing = value,
        SweepParameter::Current => current = value,
        SweepParameter::Gap => gap = value,
    }
    // Re-validate the mutated geometry.
    let coil = CoilSpec::new(
        coil.turns,
        coil.inner_radius,
        coil.conductor_width,
        coil.turn_spacing,
        coil.conductor_thickness,
    )?;
    let model = spiral_to_loops_with_fidelity(&coil, current, spec.fidelity);
    spec.model.force(&model, &spec.magnet, gap)
}

/// Automated verdicts on the three coil-parameter trends, evaluated at the
/// study geometry (inner radius 400 um, width 25 um, spacing 20 um) with
/// the point force model at a fixed 200 um gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendVerdicts {
    /// Force gain from the top doubling of the turns grid {5, 10, 20, 40}
    /// stays below the plateau threshold.
    pub turns_plateau: bool,
    /// Relative force gain over that top doubling.
    pub turns_top_gain: f64,
    /// |F| strictly decreasing across the width grid {15, 25, 35} um.
    pub width_decreasing: bool,
    /// |F| strictly decreasing across the spacing grid {10, 20, 40} um.
    pub spacing_decreasing: bool,
}

/// Plateau threshold: force gain per doubling of turns below this counts
/// as "no appreciable enhancement".
pub const PLATEAU_THRESHOLD: f64 = 0.15;

/// Inner radius of the trend-study geometry, m.
pub const STUDY_INNER_RADIUS: f64 = 400e-6;

/// Gap at which the trend studies are evaluated, m.
pub const STUDY_GAP: f64 = 200e-6;

fn study_coil(turns: u32, width: f64, spacing: f64) -> Result<CoilSpec> {
    CoilSpec::new(turns, STUDY_INNER_RADIUS, width, spacing, 20e-6)
}

fn study_sweep(
    magnet: &MagnetSpec,
    parameter: SweepParameter,
    values: Vec<f64>,
) -> Result<Vec<SweepRow>> {
    run_sweep(&SweepSpec {
        parameter,
        values,
        coil: study_coil(10, 25e-6, 20e-6)?,
        magnet: *magnet,
        gap: STUDY_GAP,
        current: 1.0,
        model: ForceModel::Point,
        fidelity: 1,
    })
}

/// Evaluate the three trend verdicts at the study geometry.
pub fn trend_verdicts(magnet: &MagnetSpec) -> Result<TrendVerdicts> {
    let turns = study_sweep(magnet, SweepParameter::Turns, vec![5.0, 10.0, 20.0, 40.0])?;
    let n = turns.len();
    let top_lo = turns[n - 2].force.abs();
    let top_hi = turns[n - 1].force.abs();
    let turns_top_gain = (top_hi - top_lo) / top_lo;
    let width = study_sweep(
        magnet,
        SweepParameter::ConductorWidth,
        vec![15e-6, 25e-6, 35e-6],
    )?;
    let spacing = study_sweep(
        magnet,
        SweepParameter::TurnSpacing,
        vec![10e-6, 20e-6, 40e-6],
    )?;
    let strictly_decreasing =
        |rows: &[SweepRow]| rows.windows(2).all(|w| w[1].force.abs() < w[0].force.abs());
    Ok(TrendVerdicts {
        turns_plateau: turns_top_gain <= PLATEAU_THRESHOLD,
        turns_top_gain,
        width_decreasing: strictly_decreasing(&width),
        spacing_decreasing: strictly_decreasing(&spacing),
    })
}

/// Everything the end-to-end pipeline needs, in SI units.
#[derive(Debug, Clone, Copy)]
pub struct DesignProblem {
    pub coil: CoilSpec,
    pub magnet: MagnetSpec,
    pub diaphragm: DiaphragmSpec,
    /// Target center deflection, m.
    pub target_deflection: f64,
    /// Required F_lim / F margin for feasibility.
    pub safety_factor: f64,
    /// Maximum allowed coil current, A.
    pub current_ceiling: f64,
    pub model: ForceModel,
    pub fidelity: u32,
}

/// Target deflection -> required force -> optimal gap -> required current
/// -> safety margin. Errors carry the stage at which they arose; an
/// over-ceiling current or an unsafe margin is an infeasible report, not
/// an error.
pub fn design_pipeline(p: &DesignProblem) -> Result<DesignReport> {
    if p.target_deflection < 0.0 {
        return Err(Error::InvalidSpec {
            field: "target.deflection_um",
            reason: format!("must be >= 0, got {}", p.target_deflection),
        });
    }
    let required_force = force_for_deflection(
        p.target_deflection,
        p.diaphragm.radius,
        p.magnet.radius,
        p.diaphragm.flexural_rigidity(),
    )
    .map_err(|e| e.at_stage("force_for_deflection"))?;

    let unit_coil = spiral_to_loops_with_fidelity(&p.coil, 1.0, p.fidelity);
    let z_range = (p.magnet.thickness, 2.0 * p.coil.outer_radius());
    let best = optimal_gap(&unit_coil, &p.magnet, p.model, z_range, 1e-6)
        .map_err(|e| e.at_stage("optimal_gap"))?;

    let required_current = solve_current(
        &p.coil,
        &p.magnet,
        best.gap,
        required_force,
        p.model,
        p.fidelity,
    )
    .map_err(|e| e.at_stage("solve_current"))?;

    let kappa = p.diaphragm.kappa(&p.magnet);
    let safety = safety_margin(required_force, &p.diaphragm, kappa, p.safety_factor)
        .map_err(|e| e.at_stage("safety_margin"))?;

    let over_ceiling = required_current > p.current_ceiling;
    let infeasible_stage = if over_ceiling {
        Some("solve_current")
    } else if !safety.safe {
        Some("safety_margin")
    } else {
        None
    };
    Ok(DesignReport {
        target_deflection: p.target_deflection,
        required_force,
        required_current,
        optimal_gap: best.gap,
        limiting_force: safety.limiting_force,
        safety_factor_achieved: safety.margin,
        feasible: infeasible_stage.is_none(),
        attractive: best.force < 0.0,
        infeasible_stage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnetics::{spiral_to_loops, LoopSet};
    use approx::assert_relative_eq;

    fn reference_coil() -> CoilSpec {
        CoilSpec::new(10, 1250e-6, 25e-6, 20e-6, 20e-6).unwrap()
    }

    fn reference_magnet() -> MagnetSpec {
        MagnetSpec::new(1222e-6, 20e-6, 0.3, None).unwrap()
    }

    fn reference_diaphragm() -> DiaphragmSpec {
        DiaphragmSpec::new(1955e-6, 80e-6, 750e3, 0.5, 130e3).unwrap()
    }

    #[test]
    fn optimal_gap_single_loop_analytic() {
        // Point-model argmax of a single loop lies at z = R/2.
        let radius = 1e-3;
        let coil = CoilModel::from_layers(vec![LoopSet::new(vec![radius], 1.0, 0.0).unwrap()])
            .unwrap();
        let best = optimal_gap(
            &coil,
            &reference_magnet(),
            ForceModel::Point,
            (50e-6, 2e-3),
            0.1e-6,
        )
        .unwrap();
        assert!((best.gap - radius / 2.0).abs() < 1e-6, "gap {}", best.gap);
    }

    #[test]
    fn optimal_gap_reference_coil_bracket() {
        let coil = spiral_to_loops(&reference_coil(), 1.0);
        let best = optimal_gap(
            &coil,
            &reference_magnet(),
            ForceModel::Point,
            (100e-6, 2e-3),
            1e-6,
        )
        .unwrap();
        assert!(
            (500e-6..=900e-6).contains(&best.gap),
            "gap {} outside bracket",
            best.gap
        );
        assert!(best.force < 0.0, "force should attract the magnet");
    }

    #[test]
    fn optimal_gap_invariant_under_current_scaling() {
        let magnet = reference_magnet();
        let gaps: Vec<f64> = [0.3, 1.0, 2.5]
            .iter()
            .map(|&i| {
                let coil = spiral_to_loops(&reference_coil(), i);
                optimal_gap(&coil, &magnet, ForceModel::Point, (100e-6, 2e-3), 0.1e-6)
                    .unwrap()
                    .gap
            })
            .collect();
        assert!((gaps[0] - gaps[1]).abs() < 0.5e-6);
        assert!((gaps[1] - gaps[2]).abs() < 0.5e-6);
    }

    #[test]
    fn optimal_gap_boundary_is_an_error() {
        // Range entirely past the maximum: argmax lands on the lower edge.
        let coil = spiral_to_loops(&reference_coil(), 1.0);
        let err = optimal_gap(
            &coil,
            &reference_magnet(),
            ForceModel::Point,
            (2e-3, 5e-3),
            1e-6,
        )
        .unwrap_err();
        assert!(matches!(err, Error::RangeTooNarrow { .. }), "{err}");
    }

    #[test]
    fn solve_current_round_trip() {
        let coil_spec = reference_coil();
        let magnet = reference_magnet();
        let gap = 620e-6;
        let model = ForceModel::Point;
        let coil09 = spiral_to_loops(&coil_spec, 0.9);
        let f09 = model.force(&coil09, &magnet, gap).unwrap().abs();
        let i = solve_current(&coil_spec, &magnet, gap, f09, model, 1).unwrap();
        assert_relative_eq!(i, 0.9, max_relative = 1e-12);
        // Doubling the target doubles the current.
        let i2 = solve_current(&coil_spec, &magnet, gap, 2.0 * f09, model, 1).unwrap();
        assert_relative_eq!(i2, 1.8, max_relative = 1e-12);
    }

    #[test]
    fn safety_margin_fixture() {
        let d = reference_diaphragm();
        let kappa = d.kappa(&reference_magnet());
        let m = safety_margin(16e-6, &d, kappa, 2.0).unwrap();
        assert_relative_eq!(m.margin, 135.0, max_relative = 0.01);
        assert!(m.safe);
        assert_eq!(m.branch, LimitBranch::SmallKappa);
        // The published datasheet limit (377 uN) also clears the margin.
        assert!(377e-6 / 16e-6 >= 2.0);
    }

    #[test]
    fn safety_margin_boundaries() {
        let d = reference_diaphragm();
        let kappa = d.kappa(&reference_magnet());
        let zero = safety_margin(0.0, &d, kappa, 2.0).unwrap();
        assert!(zero.margin.is_infinite() && zero.safe);
        let lim = limiting_force_eq3(d.thickness, d.yield_strength, kappa, d.poisson_ratio)
            .unwrap()
            .force;
        let at_limit = safety_margin(lim, &d, kappa, 1.5).unwrap();
        assert_relative_eq!(at_limit.margin, 1.0, max_relative = 1e-12);
        assert!(!at_limit.safe);
    }

    #[test]
    fn sweep_current_is_exactly_linear() {
        let spec = SweepSpec {
            parameter: SweepParameter::Current,
            values: vec![0.2, 0.4, 0.6, 0.8, 1.0],
            coil: reference_coil(),
            magnet: reference_magnet(),
            gap: 620e-6,
            current: 1.0,
            model: ForceModel::Point,
            fidelity: 1,
        };
        let rows = run_sweep(&spec).unwrap();
        let ratio = rows[4].force / rows[0].force;
        assert_relative_eq!(ratio, 5.0, max_relative = 1e-9);
    }

    #[test]
    fn sweep_rejects_bad_value_lists() {
        let mut spec = SweepSpec {
            parameter: SweepParameter::Current,
            values: vec![0.2, 0.4],
            coil: reference_coil(),
            magnet: reference_magnet(),
            gap: 620e-6,
            current: 1.0,
            model: ForceModel::Point,
            fidelity: 1,
        };
        assert!(run_sweep(&spec).is_err());
        spec.values = vec![0.2, 0.6, 0.4];
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn trend_verdicts_hold_at_study_geometry() {
        let v = trend_verdicts(&reference_magnet()).unwrap();
        assert!(
            v.turns_plateau,
            "turns gain {:.3} above threshold",
            v.turns_top_gain
        );
        assert!(v.width_decreasing);
        assert!(v.spacing_decreasing);
    }

    #[test]
    fn pipeline_reference_fixture_is_feasible() {
        let p = DesignProblem {
            coil: reference_coil(),
            magnet: reference_magnet(),
            diaphragm: reference_diaphragm(),
            target_deflection: 15e-6,
            safety_factor: 2.0,
            current_ceiling: 1.0,
            model: ForceModel::Point,
            fidelity: 1,
        };
        let report = design_pipeline(&p).unwrap();
        assert_relative_eq!(report.required_force, 16.07e-6, max_relative = 1e-3);
        assert!(report.feasible, "{report:?}");
        assert!(report.attractive);
        assert!(report.infeasible_stage.is_none());
        assert!(report.safety_factor_achieved > 100.0);
    }

    #[test]
    fn pipeline_zero_target() {
        let p = DesignProblem {
            coil: reference_coil(),
            magnet: reference_magnet(),
            diaphragm: reference_diaphragm(),
            target_deflection: 0.0,
            safety_factor: 2.0,
            current_ceiling: 1.0,
            model: ForceModel::Point,
            fidelity: 1,
        };
        let report = design_pipeline(&p).unwrap();
        assert_eq!(report.required_force, 0.0);
        assert_eq!(report.required_current, 0.0);
        assert!(report.feasible);
    }

    #[test]
    fn pipeline_excessive_target_is_infeasible_not_an_error() {
        let p = DesignProblem {
            coil: reference_coil(),
            magnet: reference_magnet(),
            diaphragm: reference_diaphragm(),
            // 100x the reference target pushes the current past the ceiling.
            target_deflection: 1500e-6,
            safety_factor: 2.0,
            current_ceiling: 1.0,
            model: ForceModel::Point,
            fidelity: 1,
        };
        let report = design_pipeline(&p).unwrap();
        assert!(!report.feasible);
        assert_eq!(report.infeasible_stage, Some("solve_current"));
        assert!(report.required_current > 1.0);
    }

    #[test]
    fn pipeline_current_monotone_in_target() {
        let mut currents = Vec::new();
        for &target in &[5e-6, 15e-6, 30e-6] {
            let p = DesignProblem {
                coil: reference_coil(),
                magnet: reference_magnet(),
                diaphragm: reference_diaphragm(),
                target_deflection: target,
                safety_factor: 2.0,
                current_ceiling: 10.0,
                model: ForceModel::Point,
                fidelity: 1,
            };
            currents.push(design_pipeline(&p).unwrap().required_current);
        }
        assert!(currents[0] < currents[1] && currents[1] < currents[2]);
    }

    #[test]
    fn pipeline_deterministic() {
        let p = DesignProblem {
            coil: reference_coil(),
            magnet: reference_magnet(),
            diaphragm: reference_diaphragm(),
            target_deflection: 15e-6,
            safety_factor: 2.0,
            current_ceiling: 1.0,
            model: ForceModel::Point,
            fidelity: 1,
        };
        let r1 = design_pipeline(&p).unwrap();
        let r2 = design_pipeline(&p).unwrap();
        assert_eq!(r1.required_current.to_bits(), r2.required_current.to_bits());
        assert_eq!(r1.optimal_gap.to_bits(), r2.optimal_gap.to_bits());
    }
}
