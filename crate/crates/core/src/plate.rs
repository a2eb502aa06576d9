//! Clamped thin-plate bending: the analytic center-deflection and limiting
//! force formulas, plus independent finite-difference Kirchhoff solvers for
//! circular, square, and rectangular diaphragms.
//!
//! Small-deflection Kirchhoff theory is used throughout, with no
//! membrane/large-deflection correction.

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};

/// Load applied to a plate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LoadPatch {
    /// Uniform pressure over a central disc of the given radius carrying
    /// the given total force (F = pi c^2 q).
    CentralDisc { radius: f64, total_force: f64 },
    /// Uniform pressure over the whole plate carrying the given total force.
    Uniform { total_force: f64 },
}

impl LoadPatch {
    pub fn total_force(&self) -> f64 {
        match *self {
            LoadPatch::CentralDisc { total_force, .. } => total_force,
            LoadPatch::Uniform { total_force } => total_force,
        }
    }
}

/// Plate outline. Equal-area constructors derive square/rectangular plates
/// from a reference circle radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlateShape {
    Circle { radius: f64 },
    Square { side: f64 },
    Rectangle { lx: f64, ly: f64 },
}

impl PlateShape {
    /// Square with the same surface area as a circle of radius `a`.
    pub fn square_equal_area(a: f64) -> Self {
        PlateShape::Square {
            side: a * std::f64::consts::PI.sqrt(),
        }
    }

    /// Rectangle (aspect >= 1, lx the longer side) with the same surface
    /// area as a circle of radius `a`.
    pub fn rectangle_equal_area(a: f64, aspect: f64) -> Result<Self> {
        if !(aspect >= 1.0) {
            return Err(Error::Geometry(format!(
                "rectangle aspect ratio must be >= 1, got {aspect}"
            )));
        }
        let ly = (std::f64::consts::PI * a * a / aspect).sqrt();
        Ok(PlateShape::Rectangle {
            lx: aspect * ly,
            ly,
        })
    }

    pub fn area(&self) -> f64 {
        match *self {
            PlateShape::Circle { radius } => std::f64::consts::PI * radius * radius,
            PlateShape::Square { side } => side * side,
            PlateShape::Rectangle { lx, ly } => lx * ly,
        }
    }
}

/// Plate outline plus thickness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateGeometry {
    pub shape: PlateShape,
    pub thickness: f64,
}

/// Which branch of the piecewise limiting-force formula applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitBranch {
    /// k < 4.5: F_lim = h^2 sigma_y 4 pi k^2 / (6 k^2 - 3).
    SmallKappa,
    /// k >= 4.5: F_lim = h^2 sigma_y 8 pi k^2 / ((1 + nu)(12 k^2 ln k + 3)).
    LargeKappa,
}

impl std::fmt::Display for LimitBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LimitBranch::SmallKappa => write!(f, "k < 4.5"),
            LimitBranch::LargeKappa => write!(f, "k >= 4.5"),
        }
    }
}

/// Limiting force together with the branch that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitingForce {
    pub force: f64,
    pub branch: LimitBranch,
}

/// Center deflection of an edge-clamped circular plate of radius `a` under
/// total force `f` spread uniformly over a central disc of radius `c`:
/// w = (F c^2 / 16 pi D) (kappa^2 - ln kappa - 3/4), kappa = a/c.
pub fn center_deflection_eq2(f: f64, a: f64, c: f64, rigidity: f64) -> Result<f64> {
    let kappa = kappa_checked(a, c)?;
    if !(rigidity > 0.0) {
        return Err(Error::Geometry(format!(
            "flexural rigidity must be > 0, got {rigidity}"
        )));
    }
    let factor = kappa * kappa - kappa.ln() - 0.75;
    Ok(f * c * c / (16.0 * std::f64::consts::PI * rigidity) * factor)
}

/// Exact algebraic inversion of the center-deflection formula (linear in F).
pub fn force_for_deflection(w_target: f64, a: f64, c: f64, rigidity: f64) -> Result<f64> {
    let w_unit = center_deflection_eq2(1.0, a, c, rigidity)?;
    Ok(w_target / w_unit)
}

fn kappa_checked(a: f64, c: f64) -> Result<f64> {
    let kappa = a / c;
    if !(kappa > 1.0) {
        return Err(Error::Geometry(format!(
            "loaded-area radius must be smaller than the plate radius (kappa = {kappa})"
        )));
    }
    Ok(kappa)
}

/// Plastic limiting force of the clamped circular plate under a central
/// disc load, piecewise in k = a/c with the branch threshold at k = 4.5.
/// Logarithms are natural in both branches.
pub fn limiting_force_eq3(
    thickness: f64,
    yield_strength: f64,
    k: f64,
    poisson_ratio: f64,
) -> Result<LimitingForce> {
    if !(k > 1.0) {
        return Err(Error::Geometry(format!("limiting force requires k > 1, got {k}")));
    }
    if !(thickness > 0.0 && yield_strength > 0.0) {
        return Err(Error::Geometry(
            "thickness and yield strength must be > 0".into(),
        ));
    }
    let h2_sigma = thickness * thickness * yield_strength;
    let pi = std::f64::consts::PI;
    if k < 4.5 {
        Ok(LimitingForce {
            force: h2_sigma * 4.0 * pi * k * k / (6.0 * k * k - 3.0),
            branch: LimitBranch::SmallKappa,
        })
    } else {
        Ok(LimitingForce {
            force: h2_sigma * 8.0 * pi * k * k
                / ((1.0 + poisson_ratio) * (12.0 * k * k * k.ln() + 3.0)),
            branch: LimitBranch::LargeKappa,
        })
    }
}

/// Axisymmetric deflection profile w(r) on a uniform radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub r: Vec<f64>,
    pub w: Vec<f64>,
}

impl RadialProfile {
    pub fn center_deflection(&self) -> f64 {
        self.w[0]
    }
}

/// Deflection field w(x, y) on a uniform grid (node-centered, boundary
/// nodes included).
#[derive(Debug, Clone, PartialEq)]
pub struct GridProfile {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// w[ix][iy]
    pub w: Vec<Vec<f64>>,
}

impl GridProfile {
    pub fn center_deflection(&self) -> f64 {
        self.w
            .iter()
            .flatten()
            .copied()
            .fold(0.0_f64, |m, v| if v.abs() > m.abs() { v } else { m })
    }
}

/// Solve the axisymmetric clamped-plate problem D grad^4 w = q(r) on a
/// uniform radial grid of `n_nodes` intervals, with a uniform pressure over
/// the central disc r <= c (set c = a for a full-area uniform load).
///
/// Boundary conditions: w(a) = w'(a) = 0 (clamped rim); regularity at the
/// center via symmetric ghost nodes and a quartic fit for the r = 0 row.
/// The disc edge cell is weighted by its covered annulus fraction and the
/// discrete load is rescaled to carry exactly `f`.
pub fn solve_circular_fd(a: f64, c: f64, f: f64, rigidity: f64, n_nodes: usize) -> Result<RadialProfile> {
    if n_nodes < 64 {
        return Err(Error::Geometry(format!(
            "circular FD solver needs at least 64 nodes, got {n_nodes}"
        )));
    }
    if !(c > 0.0 && c <= a) {
        return Err(Error::Geometry(format!(
            "disc radius must lie in (0, a] (c = {c}, a = {a})"
        )));
    }
    let n = n_nodes;
    let dr = a / n as f64;
    let mut mat = BandedMatrix::zeros(n, 2, 2);
    let add = |m: &mut BandedMatrix, i: usize, j: i64, v: f64| {
        // Fold ghosts: symmetry at the center, clamped slope at the rim,
        // Dirichlet w(a) = 0.
        let col = match j {
            -1 => 1,
            -2 => 2,
            j if j == n as i64 => return,
            j if j == n as i64 + 1 => n - 1,
            j => j as usize,
        };
        m.add(i, col, v);
    };
    // Center row: grad^4 w(0) from the symmetric quartic fit.
    let fac = 16.0 / (3.0 * dr.powi(4));
    add(&mut mat, 0, 0, 3.0 * fac);
    add(&mut mat, 0, 1, -4.0 * fac);
    add(&mut mat, 0, 2, fac);
    let c4 = 1.0 / dr.powi(4);
    let c3 = 1.0 / (2.0 * dr.powi(3));
    let c2 = 1.0 / (dr * dr);
    let c1 = 1.0 / (2.0 * dr);
    for i in 1..n {
        let ri = i as f64 * dr;
        let ii = i as i64;
        // w''''
        for (off, v) in [(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)] {
            add(&mut mat, i, ii + off, v * c4);
        }
        // (2/r) w'''
        for (off, v) in [(-2, -1.0), (-1, 2.0), (1, -2.0), (2, 1.0)] {
            add(&mut mat, i, ii + off, v * c3 * 2.0 / ri);
        }
        // -(1/r^2) w''
        for (off, v) in [(-1, 1.0), (0, -2.0), (1, 1.0)] {
            add(&mut mat, i, ii + off, -v * c2 / (ri * ri));
        }
        // (1/r^3) w'
        for (off, v) in [(-1, -1.0), (1, 1.0)] {
            add(&mut mat, i, ii + off, v * c1 / (ri * ri * ri));
        }
    }
    let q_nominal = f / (std::f64::consts::PI * c * c);
    let mut q = vec![0.0; n];
    if c == a {
        // Full-area uniform load: the nominal pressure is already exact at
        // every node; fractional-coverage rescaling would smear the rim
        // half-cell over the interior and cost an order of accuracy.
        q.fill(q_nominal);
    } else {
        // Disc load with fractional edge coverage, rescaled so the
        // discrete cell loads sum to exactly f.
        let mut discrete_total = 0.0;
        for (i, qi) in q.iter_mut().enumerate() {
            let ri = i as f64 * dr;
            let lo = (ri - dr / 2.0).max(0.0);
            let hi = ri + dr / 2.0;
            let cell_area = std::f64::consts::PI * (hi * hi - lo * lo);
            let covered = if lo < c {
                std::f64::consts::PI * (c.min(hi).powi(2) - lo * lo)
            } else {
                0.0
            };
            *qi = q_nominal * covered / cell_area;
            discrete_total += *qi * cell_area;
        }
        if discrete_total != 0.0 {
            let scale = f / discrete_total;
            for qi in &mut q {
                *qi *= scale;
            }
        }
    }
    let rhs: Vec<f64> = q.iter().map(|qi| qi / rigidity).collect();
    let mut w = mat.solve(rhs)?;
    w.push(0.0); // clamped rim node
    let r = (0..=n).map(|i| i as f64 * dr).collect();
    Ok(RadialProfile { r, w })
}

/// Pressure values at the interior nodes of a rectangular grid for a
/// central-disc load, rasterized with 4x4 subcell sampling and rescaled so
/// the discrete total equals `total_force` exactly.
fn disc_load_grid(
    nx_cells: usize,
    ny_cells: usize,
    hx: f64,
    hy: f64,
    cx: f64,
    cy: f64,
    radius: f64,
    total_force: f64,
) -> Vec<f64> {
    let nxi = nx_cells - 1;
    let nyi = ny_cells - 1;
    let mut q = vec![0.0; nxi * nyi];
    let mut total = 0.0;
    let sub = 4;
    for iy in 1..ny_cells {
        for ix in 1..nx_cells {
            let x0 = ix as f64 * hx - hx / 2.0;
            let y0 = iy as f64 * hy - hy / 2.0;
            let mut inside = 0u32;
            for sy in 0..sub {
                for sx in 0..sub {
                    let x = x0 + (sx as f64 + 0.5) / sub as f64 * hx;
                    let y = y0 + (sy as f64 + 0.5) / sub as f64 * hy;
                    let dx = x - cx;
                    let dy = y - cy;
                    if dx * dx + dy * dy <= radius * radius {
                        inside += 1;
                    }
                }
            }
            let frac = inside as f64 / (sub * sub) as f64;
            let v = frac; // provisional, rescaled below
            q[(iy - 1) * nxi + (ix - 1)] = v;
            total += v * hx * hy;
        }
    }
    if total > 0.0 {
        let scale = total_force / total;
        for v in &mut q {
            *v *= scale;
        }
    }
    q
}

/// Solve the clamped rectangular (or square) plate D grad^4 w = q with the
/// 13-point biharmonic stencil on a grid with `n_nodes` nodes along the
/// shorter side. Clamped edges: w = 0 on the boundary, zero normal slope
/// via ghost-node reflection.
pub fn solve_rect_fd(
    geom: &PlateGeometry,
    load: &LoadPatch,
    rigidity: f64,
    n_nodes: usize,
) -> Result<GridProfile> {
    let (lx, ly) = match geom.shape {
        PlateShape::Square { side } => (side, side),
        PlateShape::Rectangle { lx, ly } => {
            if lx >= ly {
                (lx, ly)
            } else {
                (ly, lx)
            }
        }
        PlateShape::Circle { .. } => {
            return Err(Error::Geometry(
                "rectangular solver does not handle circular plates".into(),
            ))
        }
    };
    if n_nodes < 65 {
        return Err(Error::Geometry(format!(
            "rectangular FD solver needs at least 65 nodes per shorter side, got {n_nodes}"
        )));
    }
    let ny_cells = n_nodes - 1;
    let nx_cells = ((lx / ly) * ny_cells as f64).round() as usize;
    let hx = lx / nx_cells as f64;
    let hy = ly / ny_cells as f64;
    let nxi = nx_cells - 1;
    let nyi = ny_cells - 1;
    let n_unknowns = nxi * nyi;
    // Order unknowns along the shorter interior dimension to minimize the
    // bandwidth (2 * inner dimension).
    let swap = nxi > nyi;
    let inner = if swap { nyi } else { nxi };
    let band = 2 * inner;
    let idx = |ix: usize, iy: usize| -> usize {
        let (i, o) = if swap { (iy, ix) } else { (ix, iy) };
        (o - 1) * inner + (i - 1)
    };
    let mut mat = BandedMatrix::zeros(n_unknowns, band, band);
    let cx4 = 1.0 / hx.powi(4);
    let cy4 = 1.0 / hy.powi(4);
    let cc = 1.0 / (hx * hx * hy * hy);
    for iy in 1..ny_cells {
        for ix in 1..nx_cells {
            let row = idx(ix, iy);
            let mut acc = |jx: i64, jy: i64, v: f64| {
                // Reflected ghosts (zero normal slope), Dirichlet boundary.
                let jx = if jx == -1 {
                    1
                } else if jx == nx_cells as i64 + 1 {
                    nx_cells as i64 - 1
                } else {
                    jx
                };
                let jy = if jy == -1 {
                    1
                } else if jy == ny_cells as i64 + 1 {
                    ny_cells as i64 - 1
                } else {
                    jy
                };
                if jx <= 0 || jx >= nx_cells as i64 || jy <= 0 || jy >= ny_cells as i64 {
                    return;
                }
                mat.add(row, idx(jx as usize, jy as usize), v);
            };
            let (ixi, iyi) = (ix as i64, iy as i64);
            acc(ixi, iyi, 6.0 * cx4 + 6.0 * cy4 + 8.0 * cc);
            for s in [-1i64, 1] {
                acc(ixi + s, iyi, -4.0 * cx4 - 4.0 * cc);
                acc(ixi, iyi + s, -4.0 * cy4 - 4.0 * cc);
                acc(ixi + 2 * s, iyi, cx4);
                acc(ixi, iyi + 2 * s, cy4);
            }
            for sx in [-1i64, 1] {
                for sy in [-1i64, 1] {
                    acc(ixi + sx, iyi + sy, 2.0 * cc);
                }
            }
        }
    }
    let q = match *load {
        LoadPatch::Uniform { total_force } => {
            vec![total_force / (lx * ly); n_unknowns]
        }
        LoadPatch::CentralDisc { radius, total_force } => {
            if 2.0 * radius > ly {
                return Err(Error::Geometry(format!(
                    "disc load (radius {radius}) does not fit the plate (shorter side {ly})"
                )));
            }
            disc_load_grid(nx_cells, ny_cells, hx, hy, lx / 2.0, ly / 2.0, radius, total_force)
        }
    };
    let rhs: Vec<f64> = q.iter().map(|qi| qi / rigidity).collect();
    let sol = mat.solve(rhs)?;
    let mut w = vec![vec![0.0; ny_cells + 1]; nx_cells + 1];
    for iy in 1..ny_cells {
        for ix in 1..nx_cells {
            w[ix][iy] = sol[idx(ix, iy)];
        }
    }
    Ok(GridProfile {
        x: (0..=nx_cells).map(|i| i as f64 * hx).collect(),
        y: (0..=ny_cells).map(|i| i as f64 * hy).collect(),
        w,
    })
}

/// Solve at `n_nodes` and at the doubled grid; return the refined center
/// deflection and the relative change. A change above 2% at n >= 257 is a
/// discretization failure.
pub fn solve_rect_center_converged(
    geom: &PlateGeometry,
    load: &LoadPatch,
    rigidity: f64,
    n_nodes: usize,
) -> Result<(f64, f64)> {
    let coarse = solve_rect_fd(geom, load, rigidity, n_nodes)?.center_deflection();
    let fine_nodes = 2 * (n_nodes - 1) + 1;
    let fine = solve_rect_fd(geom, load, rigidity, fine_nodes)?.center_deflection();
    let change = if fine == 0.0 {
        0.0
    } else {
        ((fine - coarse) / fine).abs()
    };
    if change > 0.02 && n_nodes >= 257 {
        return Err(Error::Convergence(format!(
            "rectangular plate center deflection changed {:.2}% from {} to {} nodes",
            change * 100.0,
            n_nodes,
            fine_nodes
        )));
    }
    Ok((fine, change))
}

/// Equal-area, equal-thickness shape comparison fixture.
#[derive(Debug, Clone, Copy)]
pub struct ShapeFixture {
    /// Reference circular plate radius a, m.
    pub circle_radius: f64,
    /// Loaded-disc radius c, m.
    pub disc_radius: f64,
    /// Flexural rigidity shared by all plates, N·m.
    pub rigidity: f64,
    /// Rectangle aspect ratio (>= 1).
    pub aspect: f64,
    /// Radial nodes for the circular solver.
    pub n_circle: usize,
    /// Nodes per shorter side for the rectangular solver.
    pub n_rect: usize,
}

impl ShapeFixture {
    pub fn new(circle_radius: f64, disc_radius: f64, rigidity: f64) -> Self {
        Self {
            circle_radius,
            disc_radius,
            rigidity,
            aspect: 2.0,
            n_circle: 512,
            n_rect: 65,
        }
    }
}

/// One row of the shape-comparison table.
#[derive(Debug, Clone, Copy)]
pub struct ShapeComparison {
    pub force: f64,
    pub w_circle: f64,
    pub w_square: f64,
    pub w_rectangle: f64,
    /// circle > square > rectangle, strictly (not asserted at F = 0).
    pub strictly_ordered: bool,
}

/// Center deflections of equal-area circle, square, and rectangle plates
/// under the same central-disc load, per applied force.
pub fn compare_shapes(fixture: &ShapeFixture, forces: &[f64]) -> Result<Vec<ShapeComparison>> {
    let a = fixture.circle_radius;
    let square = PlateGeometry {
        shape: PlateShape::square_equal_area(a),
        thickness: 0.0,
    };
    let rect = PlateGeometry {
        shape: PlateShape::rectangle_equal_area(a, fixture.aspect)?,
        thickness: 0.0,
    };
    let mut rows = Vec::with_capacity(forces.len());
    for &force in forces {
        let w_circle =
            solve_circular_fd(a, fixture.disc_radius, force, fixture.rigidity, fixture.n_circle)?
                .center_deflection();
        let load = LoadPatch::CentralDisc {
            radius: fixture.disc_radius,
            total_force: force,
        };
        let w_square =
            solve_rect_fd(&square, &load, fixture.rigidity, fixture.n_rect)?.center_deflection();
        let w_rectangle =
            solve_rect_fd(&rect, &load, fixture.rigidity, fixture.n_rect)?.center_deflection();
        rows.push(ShapeComparison {
            force,
            w_circle,
            w_square,
            w_rectangle,
            strictly_ordered: w_circle > w_square && w_square > w_rectangle,
        });
    }
    Ok(rows)
}
