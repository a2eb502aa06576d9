//! Magnetostatics of the planar spiral coil: fields, gradients, forces on
//! the coaxial magnet, and winding resistance.
//!
//! The spiral is approximated as concentric circular filament loops at the
//! conductor centerlines (error O(pitch/radius), ~3% for the geometries of
//! interest). Coordinates are cylindrical (r, z) with the coil in the z = 0
//! plane and +z up.

use crate::elliptic::{ellipe, ellipk};
use crate::error::{Error, Result};
use crate::model::{CoilSpec, FieldSample, MagnetSpec};
use crate::quadrature::gauss_legendre;
use crate::MU_0;

/// Minimum allowed distance to a filament before evaluation is rejected.
const FILAMENT_EXCLUSION: f64 = 1e-9;

/// Concentric filament loops in a single plane, all carrying `current`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopSet {
    radii: Vec<f64>,
    current: f64,
    plane_z: f64,
}

impl LoopSet {
    pub fn new(radii: Vec<f64>, current: f64, plane_z: f64) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidSpec {
                field: "loopset.radii",
                reason: "must be non-empty".into(),
            });
        }
        if !radii.windows(2).all(|w| w[1] > w[0]) || radii[0] <= 0.0 {
            return Err(Error::InvalidSpec {
                field: "loopset.radii",
                reason: "must be positive and strictly increasing".into(),
            });
        }
        if !current.is_finite() {
            return Err(Error::InvalidSpec {
                field: "loopset.current",
                reason: "must be finite".into(),
            });
        }
        Ok(Self {
            radii,
            current,
            plane_z,
        })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn current(&self) -> f64 {
        self.current
    }

    pub fn plane_z(&self) -> f64 {
        self.plane_z
    }
}

/// Filament discretization of a spiral coil: one or more loop planes
/// (several when the conductor cross-section is subdivided).
#[derive(Debug, Clone, PartialEq)]
pub struct CoilModel {
    layers: Vec<LoopSet>,
}

impl CoilModel {
    pub fn from_layers(layers: Vec<LoopSet>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidSpec {
                field: "coilmodel.layers",
                reason: "must be non-empty".into(),
            });
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[LoopSet] {
        &self.layers
    }

    /// Sum of filament currents: conserved under cross-section subdivision.
    pub fn total_current(&self) -> f64 {
        self.layers
            .iter()
            .map(|l| l.current * l.radii.len() as f64)
            .sum()
    }

    pub fn filament_count(&self) -> usize {
        self.layers.iter().map(|l| l.radii.len()).sum()
    }

    /// Axial flux density B_z at (r, z), T.
    pub fn bz(&self, r: f64, z: f64) -> Result<f64> {
        let mut total = 0.0;
        for layer in &self.layers {
            let dz = z - layer.plane_z;
            for &radius in &layer.radii {
                let (_, bz) = loop_field_offaxis(radius, layer.current, r, dz)?;
                total += bz;
            }
        }
        Ok(total)
    }

    /// Radial and axial flux density at (r, z), T.
    pub fn field(&self, r: f64, z: f64) -> Result<(f64, f64)> {
        let mut br = 0.0;
        let mut bz = 0.0;
        for layer in &self.layers {
            let dz = z - layer.plane_z;
            for &radius in &layer.radii {
                let (lbr, lbz) = loop_field_offaxis(radius, layer.current, r, dz)?;
                br += lbr;
                bz += lbz;
            }
        }
        Ok((br, bz))
    }
}

/// Discretize a spiral coil into filament loops at the conductor
/// centerlines, one loop per turn, in the z = 0 plane.
pub fn spiral_to_loops(coil: &CoilSpec, current: f64) -> CoilModel {
    spiral_to_loops_with_fidelity(coil, current, 1)
}

/// Like [`spiral_to_loops`], subdividing each conductor cross-section into
/// a `fidelity` x `fidelity` filament grid carrying current / fidelity^2
/// each. Total current is conserved exactly.
pub fn spiral_to_loops_with_fidelity(coil: &CoilSpec, current: f64, fidelity: u32) -> CoilModel {
    let f = fidelity.max(1);
    let sub_current = current / (f as f64 * f as f64);
    let mut layers = Vec::with_capacity(f as usize);
    for iz in 0..f {
        // z offsets centered on the conductor mid-plane z = 0.
        let z = ((iz as f64 + 0.5) / f as f64 - 0.5) * coil.conductor_thickness;
        let mut radii = Vec::with_capacity((coil.turns * f) as usize);
        for n in 0..coil.turns {
            let band_start = coil.inner_radius + n as f64 * coil.pitch();
            for ir in 0..f {
                radii.push(band_start + (ir as f64 + 0.5) / f as f64 * coil.conductor_width);
            }
        }
        layers.push(LoopSet::new(radii, sub_current, z).expect("valid layout"));
    }
    CoilModel::from_layers(layers).expect("non-empty")
}

/// On-axis B_z of a single circular loop: mu0 I R^2 / (2 (R^2 + z^2)^{3/2}).
pub fn loop_bz_onaxis(radius: f64, current: f64, z: f64) -> f64 {
    MU_0 * current * radius * radius / (2.0 * (radius * radius + z * z).powf(1.5))
}

/// Off-axis (B_r, B_z) of a single circular loop at radius `radius` in the
/// z = 0 plane, via complete elliptic integrals. Reduces exactly to the
/// on-axis closed form at r = 0.
pub fn loop_field_offaxis(radius: f64, current: f64, r: f64, z: f64) -> Result<(f64, f64)> {
    let dr = r - radius;
    if (dr * dr + z * z).sqrt() <= FILAMENT_EXCLUSION {
        return Err(Error::SingularPoint { r, z });
    }
    if r < 1e-12 {
        return Ok((0.0, loop_bz_onaxis(radius, current, z)));
    }
    let sum = radius + r;
    let denom2 = sum * sum + z * z;
    let denom = denom2.sqrt();
    let m = (4.0 * radius * r / denom2).min(1.0 - 1e-15);
    let k = ellipk(m);
    let e = ellipe(m);
    let diff2 = dr * dr + z * z;
    let pref = MU_0 * current / (2.0 * std::f64::consts::PI);
    let bz = pref / denom * (k + (radius * radius - r * r - z * z) / diff2 * e);
    let br = pref * z / (r * denom) * (-k + (radius * radius + r * r + z * z) / diff2 * e);
    Ok((br, bz))
}

/// dB_z/dz of the summed coil field at (r, z): central difference with one
/// Richardson extrapolation step. Step delta = min(1 um, |z|/100).
pub fn coil_dbz_dz(coil: &CoilModel, r: f64, z: f64) -> Result<f64> {
    let delta = if z.abs() < 1e-10 {
        1e-6
    } else {
        1e-6_f64.min(z.abs() / 100.0)
    };
    let d1 = central_diff(coil, r, z, delta)?;
    let d2 = central_diff(coil, r, z, delta / 2.0)?;
    Ok((4.0 * d2 - d1) / 3.0)
}

fn central_diff(coil: &CoilModel, r: f64, z: f64, delta: f64) -> Result<f64> {
    Ok((coil.bz(r, z + delta)? - coil.bz(r, z - delta)?) / (2.0 * delta))
}

/// Point-model force on the magnet: F = M_z V_m dB_z/dz evaluated on-axis
/// at the magnet mid-plane height `gap`. Signed: negative pulls the magnet
/// toward the coil plane.
pub fn force_point(coil: &CoilModel, magnet: &MagnetSpec, gap: f64) -> Result<f64> {
    if gap <= 0.0 {
        return Err(Error::Geometry(format!("gap must be > 0, got {gap}")));
    }
    let grad = coil_dbz_dz(coil, 0.0, gap)?;
    Ok(magnet.magnetization() * magnet.volume() * grad)
}

/// Volume-averaged force: F = M_z * integral of dB_z/dz over the magnet
/// cylinder, by tensor-product Gauss-Legendre quadrature in (r, z).
///
/// The order is doubled until the force changes by < 0.1%; failing to
/// converge by order 64 is an error.
pub fn force_volavg(
    coil: &CoilModel,
    magnet: &MagnetSpec,
    gap: f64,
    quadrature_order: usize,
) -> Result<f64> {
    let z_lo = gap - magnet.thickness / 2.0;
    let z_hi = gap + magnet.thickness / 2.0;
    if z_lo <= 0.0 {
        return Err(Error::Geometry(format!(
            "magnet bottom face must be above the coil plane (gap {gap}, thickness {})",
            magnet.thickness
        )));
    }
    let mut order = quadrature_order.clamp(2, 64);
    let mut prev = volavg_integral(coil, magnet, z_lo, z_hi, order)?;
    while order < 64 {
        let next_order = (order * 2).min(64);
        let next = volavg_integral(coil, magnet, z_lo, z_hi, next_order)?;
        if (next - prev).abs() < 1e-3 * next.abs().max(1e-300) {
            return Ok(next);
        }
        order = next_order;
        prev = next;
    }
    Err(Error::Convergence(
        "volume-averaged force did not converge by quadrature order 64".into(),
    ))
}

fn volavg_integral(
    coil: &CoilModel,
    magnet: &MagnetSpec,
    z_lo: f64,
    z_hi: f64,
    order: usize,
) -> Result<f64> {
    let (xs, ws) = gauss_legendre(order);
    let r_half = magnet.radius / 2.0;
    let z_half = (z_hi - z_lo) / 2.0;
    let z_mid = (z_hi + z_lo) / 2.0;
    let mut acc = 0.0;
    for (xr, wr) in xs.iter().zip(&ws) {
        let r = r_half * (xr + 1.0);
        for (xz, wz) in xs.iter().zip(&ws) {
            let z = z_mid + z_half * xz;
            let grad = coil_dbz_dz(coil, r, z)?;
            acc += wr * wz * 2.0 * std::f64::consts::PI * r * grad;
        }
    }
    Ok(magnet.magnetization() * acc * r_half * z_half)
}

/// DC resistance of the spiral: R = rho L / (w t) with L the sum of the
/// centerline circumferences.
pub fn coil_resistance(coil: &CoilSpec, resistivity: f64) -> f64 {
    let length: f64 = (0..coil.turns)
        .map(|n| 2.0 * std::f64::consts::PI * coil.centerline_radius(n))
        .sum();
    resistivity * length / (coil.conductor_width * coil.conductor_thickness)
}

/// Sample B_z and dB_z/dz at `steps`+1 evenly spaced heights, fixed radial
/// offset `r`. Sample order follows the z grid.
pub fn field_profile(
    coil: &CoilModel,
    r: f64,
    z_min: f64,
    z_max: f64,
    steps: usize,
) -> Result<Vec<FieldSample>> {
    if steps == 0 || z_max <= z_min {
        return Err(Error::Geometry(format!(
            "bad profile range [{z_min}, {z_max}] with {steps} steps"
        )));
    }
    let mut samples = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let z = z_min + (z_max - z_min) * i as f64 / steps as f64;
        let bz = coil.bz(r, z)?;
        if !bz.is_finite() {
            return Err(Error::SingularPoint { r, z });
        }
        samples.push(FieldSample {
            r,
            z,
            bz,
            dbz_dz: coil_dbz_dz(coil, r, z)?,
        });
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn table1_coil() -> CoilSpec {
        CoilSpec::new(10, 1250e-6, 25e-6, 20e-6, 20e-6).unwrap()
    }

    fn table3_magnet() -> MagnetSpec {
        MagnetSpec::new(1222e-6, 20e-6, 0.3, Some(47.7e3)).unwrap()
    }

    /// Brute-force Biot-Savart over the loop angle (midpoint rule; the
    /// integrand is periodic and smooth so convergence is spectral).
    fn biot_savart_oracle(radius: f64, current: f64, r: f64, z: f64, panels: usize) -> (f64, f64) {
        let mut br = 0.0;
        let mut bz = 0.0;
        for i in 0..panels {
            let phi = (i as f64 + 0.5) * 2.0 * std::f64::consts::PI / panels as f64;
            let d2 = r * r + radius * radius - 2.0 * r * radius * phi.cos() + z * z;
            let d3 = d2 * d2.sqrt();
            bz += radius * (radius - r * phi.cos()) / d3;
            br += radius * z * phi.cos() / d3;
        }
        let scale = MU_0 * current / (4.0 * std::f64::consts::PI) * 2.0 * std::f64::consts::PI
            / panels as f64;
        (br * scale, bz * scale)
    }

    fn analytic_onaxis_gradient(radius: f64, current: f64, z: f64) -> f64 {
        -3.0 * MU_0 * current * radius * radius * z
            / (2.0 * (radius * radius + z * z).powf(2.5))
    }

    #[test]
    fn spiral_layout_matches_turn_by_turn_oracle() {
        let coil = table1_coil();
        let model = spiral_to_loops(&coil, 1.0);
        assert_eq!(model.layers().len(), 1);
        let radii = model.layers()[0].radii();
        assert_eq!(radii.len(), 10);
        for (n, &r) in radii.iter().enumerate() {
            assert_relative_eq!(r, 1262.5e-6 + 45e-6 * n as f64, max_relative = 1e-12);
        }
    }

    #[test]
    fn single_turn_loop() {
        let coil = CoilSpec::new(1, 400e-6, 25e-6, 20e-6, 20e-6).unwrap();
        let model = spiral_to_loops(&coil, 0.5);
        assert_eq!(model.filament_count(), 1);
        assert_relative_eq!(model.layers()[0].radii()[0], 412.5e-6, max_relative = 1e-12);
    }

    #[test]
    fn fidelity_conserves_current() {
        let coil = table1_coil();
        let base = spiral_to_loops(&coil, 0.9);
        let fine = spiral_to_loops_with_fidelity(&coil, 0.9, 2);
        assert_eq!(fine.filament_count(), 4 * base.filament_count());
        assert_relative_eq!(fine.total_current(), base.total_current(), max_relative = 1e-12);
    }

    #[test]
    fn onaxis_center_formula() {
        assert_relative_eq!(loop_bz_onaxis(1e-3, 1.0, 0.0), 6.2832e-4, max_relative = 1e-4);
        assert_relative_eq!(
            loop_bz_onaxis(1e-3, 1.0, 1e-3),
            6.2832e-4 / 2.0_f64.powf(1.5),
            max_relative = 1e-4
        );
    }

    #[test]
    fn onaxis_far_field_decay() {
        let near = loop_bz_onaxis(1e-3, 1.0, 10e-3);
        let far = loop_bz_onaxis(1e-3, 1.0, 20e-3);
        // z^-3 asymptotics
        assert_relative_eq!(near / far, 8.0, max_relative = 2e-2);
        assert!(loop_bz_onaxis(1e-3, 1.0, 1.0) < 1e-12);
    }

    #[test]
    fn offaxis_reduces_to_onaxis() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let radius = rng.gen_range(0.2e-3..3e-3);
            let z = rng.gen_range(-2e-3..2e-3);
            let (br, bz) = loop_field_offaxis(radius, 1.0, 0.0, z).unwrap();
            assert_eq!(br, 0.0);
            assert_relative_eq!(bz, loop_bz_onaxis(radius, 1.0, z), max_relative = 1e-12);
        }
    }

    #[test]
    fn offaxis_matches_biot_savart_oracle() {
        let (br, bz) = loop_field_offaxis(1e-3, 1.0, 0.5e-3, 0.5e-3).unwrap();
        let (br_o, bz_o) = biot_savart_oracle(1e-3, 1.0, 0.5e-3, 0.5e-3, 16384);
        assert_relative_eq!(bz, bz_o, max_relative = 1e-8);
        assert_relative_eq!(br, br_o, max_relative = 1e-8);
    }

    #[test]
    fn mirror_symmetry() {
        for &(r, z) in &[(0.3e-3, 0.4e-3), (1.4e-3, 0.2e-3), (2.5e-3, 1.0e-3)] {
            let (br_p, bz_p) = loop_field_offaxis(1e-3, 1.0, r, z).unwrap();
            let (br_m, bz_m) = loop_field_offaxis(1e-3, 1.0, r, -z).unwrap();
            assert_relative_eq!(bz_p, bz_m, max_relative = 1e-12);
            assert_relative_eq!(br_p, -br_m, max_relative = 1e-12);
        }
    }

    #[test]
    fn singular_point_rejected() {
        assert!(matches!(
            loop_field_offaxis(1e-3, 1.0, 1e-3, 0.0),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn superposition() {
        let coil = table1_coil();
        let model = spiral_to_loops(&coil, 1.0);
        let (r, z) = (0.7e-3, 0.4e-3);
        let total = model.bz(r, z).unwrap();
        let mut summed = 0.0;
        for &radius in model.layers()[0].radii() {
            summed += loop_field_offaxis(radius, 1.0, r, z).unwrap().1;
        }
        assert_relative_eq!(total, summed, max_relative = 1e-12);
    }

    #[test]
    fn gradient_zero_on_plane() {
        let coil = CoilSpec::new(1, 1e-3, 25e-6, 20e-6, 20e-6).unwrap();
        let model = spiral_to_loops(&coil, 1.0);
        let g = coil_dbz_dz(&model, 0.0, 0.0).unwrap();
        assert!(g.abs() < 1e-6, "gradient on the coil plane should vanish, got {g}");
    }

    #[test]
    fn gradient_matches_analytic_onaxis() {
        let radius = 1.0125e-3; // single-turn centerline for inner radius 1 mm
        let coil = CoilSpec::new(1, 1e-3, 25e-6, 20e-6, 20e-6).unwrap();
        let model = spiral_to_loops(&coil, 1.0);
        for &z in &[0.2e-3, 0.5e-3, 1.0e-3, 2.0e-3] {
            let got = coil_dbz_dz(&model, 0.0, z).unwrap();
            let want = analytic_onaxis_gradient(radius, 1.0, z);
            assert_relative_eq!(got, want, max_relative = 1e-8);
        }
        // Direct-evaluation anchor: R = 1 mm filament, z = 0.5 mm.
        let single = CoilModel::from_layers(vec![LoopSet::new(vec![1e-3], 1.0, 0.0).unwrap()])
            .unwrap();
        let got = coil_dbz_dz(&single, 0.0, 0.5e-3).unwrap();
        assert_relative_eq!(got, analytic_onaxis_gradient(1e-3, 1.0, 0.5e-3), max_relative = 1e-9);
        assert_relative_eq!(got, -0.539_54, max_relative = 1e-4);
    }

    #[test]
    fn gradient_step_halving_stability() {
        let model = spiral_to_loops(&table1_coil(), 1.0);
        // Against a quarter-step Richardson result.
        let g = coil_dbz_dz(&model, 0.4e-3, 0.62e-3).unwrap();
        let d1 = central_diff(&model, 0.4e-3, 0.62e-3, 0.25e-6).unwrap();
        let d2 = central_diff(&model, 0.4e-3, 0.62e-3, 0.125e-6).unwrap();
        let refined = (4.0 * d2 - d1) / 3.0;
        assert_relative_eq!(g, refined, max_relative = 1e-6);
    }

    #[test]
    fn gradient_argmax_at_half_radius() {
        let single = CoilModel::from_layers(vec![LoopSet::new(vec![1e-3], 1.0, 0.0).unwrap()])
            .unwrap();
        let step = 1e-6;
        let mut best = (0.0, 0.0);
        let mut z = step;
        while z < 1.5e-3 {
            let g = coil_dbz_dz(&single, 0.0, z).unwrap().abs();
            if g > best.1 {
                best = (z, g);
            }
            z += step;
        }
        assert!((best.0 - 0.5e-3).abs() <= step);
    }

    #[test]
    fn force_point_linearity_and_zero() {
        let magnet = table3_magnet();
        let zero = spiral_to_loops(&table1_coil(), 0.0);
        assert_eq!(force_point(&zero, &magnet, 620e-6).unwrap(), 0.0);
        let half = spiral_to_loops(&table1_coil(), 0.45);
        let full = spiral_to_loops(&table1_coil(), 0.9);
        let f_half = force_point(&half, &magnet, 620e-6).unwrap();
        let f_full = force_point(&full, &magnet, 620e-6).unwrap();
        assert_relative_eq!(2.0 * f_half, f_full, max_relative = 1e-12);
    }

    #[test]
    fn force_point_magnitude_at_design_point() {
        // Rigid-magnet point model at the published design point. The
        // published FEA value is 18.4 uN; the point model ignores the
        // magnet's large radius, so only a loose factor-4 band applies.
        let model = spiral_to_loops(&table1_coil(), 1.0);
        let f = force_point(&model, &table3_magnet(), 620e-6).unwrap();
        assert!(f < 0.0, "aligned current and magnetization attract");
        let mag = f.abs();
        assert!(mag > 18.4e-6 / 4.0 && mag < 18.4e-6 * 4.0, "got {mag}");
    }

    #[test]
    fn force_point_rejects_bad_gap() {
        let model = spiral_to_loops(&table1_coil(), 1.0);
        assert!(force_point(&model, &table3_magnet(), 0.0).is_err());
    }

    #[test]
    fn volavg_degenerate_limit_matches_point() {
        let model = spiral_to_loops(&table1_coil(), 1.0);
        let tiny = MagnetSpec::new(2e-6, 2e-6, 0.3, None).unwrap();
        let fp = force_point(&model, &tiny, 620e-6).unwrap();
        let fv = force_volavg(&model, &tiny, 620e-6, 8).unwrap();
        assert_relative_eq!(fv, fp, max_relative = 5e-3);
    }

    #[test]
    fn volavg_linearity() {
        let magnet = table3_magnet();
        let one = spiral_to_loops(&table1_coil(), 1.0);
        let two = spiral_to_loops(&table1_coil(), 2.0);
        let f1 = force_volavg(&one, &magnet, 620e-6, 16).unwrap();
        let f2 = force_volavg(&two, &magnet, 620e-6, 16).unwrap();
        assert_relative_eq!(f2, 2.0 * f1, max_relative = 1e-9);
    }

    #[test]
    fn volavg_cauchy_in_order() {
        let magnet = table3_magnet();
        let model = spiral_to_loops(&table1_coil(), 1.0);
        let z_lo = 620e-6 - magnet.thickness / 2.0;
        let z_hi = 620e-6 + magnet.thickness / 2.0;
        let f: Vec<f64> = [4, 8, 16, 32]
            .iter()
            .map(|&o| volavg_integral(&model, &magnet, z_lo, z_hi, o).unwrap())
            .collect();
        let d1 = (f[1] - f[0]).abs();
        let d2 = (f[2] - f[1]).abs();
        let d3 = (f[3] - f[2]).abs();
        assert!(d2 <= d1 && d3 <= d2, "deltas {d1} {d2} {d3} not shrinking");
    }

    #[test]
    fn volavg_rejects_magnet_touching_plane() {
        let model = spiral_to_loops(&table1_coil(), 1.0);
        assert!(force_volavg(&model, &table3_magnet(), 5e-6, 16).is_err());
    }

    #[test]
    fn resistance_table_fixture() {
        let coil = table1_coil();
        let length: f64 = (0..10)
            .map(|n| 2.0 * std::f64::consts::PI * (1262.5e-6 + 45e-6 * n as f64))
            .sum();
        assert_relative_eq!(length, 92.05e-3, max_relative = 1e-3);
        let r = coil_resistance(&coil, crate::COPPER_RESISTIVITY);
        assert!((r - 3.23).abs() / 3.23 < 0.10, "R = {r}");
    }

    #[test]
    fn resistance_single_turn_and_thickness_law() {
        let coil = CoilSpec::new(1, 1e-3, 25e-6, 20e-6, 20e-6).unwrap();
        let r = coil_resistance(&coil, 1.68e-8);
        let centerline = 1.0125e-3;
        assert_relative_eq!(
            r,
            1.68e-8 * 2.0 * std::f64::consts::PI * centerline / (25e-6 * 20e-6),
            max_relative = 1e-12
        );
        let thick = CoilSpec::new(1, 1e-3, 25e-6, 20e-6, 40e-6).unwrap();
        assert_relative_eq!(coil_resistance(&thick, 1.68e-8), r / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn profile_preserves_order_and_is_finite() {
        let model = spiral_to_loops(&table1_coil(), 1.0);
        let samples = field_profile(&model, 0.0, 100e-6, 2000e-6, 19).unwrap();
        assert_eq!(samples.len(), 20);
        assert!(samples.windows(2).all(|w| w[1].z > w[0].z));
        assert!(samples.iter().all(|s| s.bz.is_finite() && s.dbz_dz.is_finite()));
    }
}
