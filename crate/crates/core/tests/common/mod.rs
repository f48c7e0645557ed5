//! Independent oracles: closed forms and finite differences that do not
//! route through the library's own derivative or tensor code.
#![allow(dead_code)]

use clairaut::cli::{self, LoadedScenario, RunOptions, BUNDLED};
use clairaut::{Expr, Matrix, Vector};

pub fn bundled(name: &str) -> LoadedScenario {
    let text = BUNDLED.iter().find(|(n, _)| *n == name).expect("bundled").1;
    cli::load_scenario_str(text, name, &RunOptions::default()).expect("bundled scenario loads")
}

pub fn bundled_with_f(name: &str, f: &str) -> LoadedScenario {
    let text = BUNDLED.iter().find(|(n, _)| *n == name).expect("bundled").1;
    let text = text.replace("f = \"ln(sqrt(x1^2 + x2^2))\"", &format!("f = \"{f}\""));
    cli::load_scenario_str(&text, name, &RunOptions::default()).expect("scenario loads")
}

pub fn v(x: &[f64]) -> Vector {
    Vector::from_vec(x.to_vec())
}

/// Central difference with `h = ε^{1/3} max(1, |p_i|)`.
pub fn fd_partial(e: &Expr, p: &[f64], i: usize) -> f64 {
    let h = f64::EPSILON.cbrt() * p[i].abs().max(1.0);
    let mut a = p.to_vec();
    let mut b = p.to_vec();
    a[i] += h;
    b[i] -= h;
    (e.eval(&a).unwrap() - e.eval(&b).unwrap()) / (2.0 * h)
}

/// `grad ln sqrt(x1² + x2²)` on flat R⁴.
pub fn grad_ln_r(p: &Vector) -> Vector {
    let r2 = p[0] * p[0] + p[1] * p[1];
    v(&[p[0] / r2, p[1] / r2, 0.0, 0.0])
}

/// Clairaut constant of the line `p0 + t v0` for the circle fibration:
/// distance of the line's projection from the axis, `|x1 v2 − x2 v1| / ‖v‖`.
pub fn line_clairaut_constant(p0: &Vector, v0: &Vector) -> f64 {
    (p0[0] * v0[1] - p0[1] * v0[0]).abs() / v0.norm()
}

/// Smallest `sqrt(x1² + x2²)` along `p0 + t v0`, `t ∈ [0, len]`.
pub fn line_min_radius(p0: &Vector, v0: &Vector, len: f64) -> f64 {
    let (a, b) = (v0[0] * v0[0] + v0[1] * v0[1], p0[0] * v0[0] + p0[1] * v0[1]);
    let t = if a > 0.0 { (-b / a).clamp(0.0, len) } else { 0.0 };
    let (x, y) = (p0[0] + t * v0[0], p0[1] + t * v0[1]);
    (x * x + y * y).sqrt()
}

/// `R(t) J R(t)^T` and its `t`-derivative, `R` rotating the `(e2, e3)`-plane.
pub fn twisted_phi_and_derivative(t: f64) -> (Matrix, Matrix) {
    let (c, s) = (t.cos(), t.sin());
    let r = Matrix::from_row_slice(4, 4, &[1., 0., 0., 0., 0., c, -s, 0., 0., s, c, 0., 0., 0., 0., 1.]);
    let dr = Matrix::from_row_slice(4, 4, &[0., 0., 0., 0., 0., -s, -c, 0., 0., c, -s, 0., 0., 0., 0., 0.]);
    let j = Matrix::from_row_slice(4, 4, &[0., 1., 0., 0., -1., 0., 0., 0., 0., 0., 0., 1., 0., 0., -1., 0.]);
    let phi = &r * &j * r.transpose();
    let dphi = &dr * &j * r.transpose() + &r * &j * dr.transpose();
    (phi, dphi)
}

/// Lower bound on the symmetrised `∇φ` residual of the twisted structure on
/// flat R⁴: `‖(∇_{e1}φ)e1 + (∇_{e1}φ)e1‖ = 2 ‖(∂_1 φ) e1‖ = 2` at every point.
pub const TWISTED_NEARLY_KAEHLER_FLOOR: f64 = 2.0;
