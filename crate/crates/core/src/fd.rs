//! Central finite differences.

use crate::linalg::{Matrix, Vector};

/// Default step.
pub const STEP: f64 = 1e-5;
/// Relative tolerance for comparisons against a first-order difference.
pub const REL_TOL: f64 = 1e-4;
/// Absolute floor added to [`REL_TOL`].
pub const ABS_FLOOR: f64 = 1e-8;

/// `(f(x + h d) − f(x − h d)) / 2h`.
pub fn directional<F>(f: F, x: &Vector, d: &Vector, h: f64) -> Vector
where
    F: Fn(&Vector) -> Vector,
{
    (f(&(x + d * h)) - f(&(x - d * h))) / (2.0 * h)
}

pub fn directional_scalar<F>(f: F, x: &Vector, d: &Vector, h: f64) -> f64
where
    F: Fn(&Vector) -> f64,
{
    (f(&(x + d * h)) - f(&(x - d * h))) / (2.0 * h)
}

pub fn gradient<F>(f: F, x: &Vector, h: f64) -> Vector
where
    F: Fn(&Vector) -> f64,
{
    let mut g = Vector::zeros(x.len());
    let mut y = x.clone();
    for i in 0..x.len() {
        y[i] = x[i] + h;
        let plus = f(&y);
        y[i] = x[i] - h;
        let minus = f(&y);
        y[i] = x[i];
        g[i] = (plus - minus) / (2.0 * h);
    }
    g
}

/// Columns are partial derivatives.
pub fn jacobian<F>(f: F, x: &Vector, h: f64) -> Matrix
where
    F: Fn(&Vector) -> Vector,
{
    let cols: Vec<Vector> = (0..x.len())
        .map(|i| {
            let mut e = Vector::zeros(x.len());
            e[i] = 1.0;
            directional(&f, x, &e, h)
        })
        .collect();
    Matrix::from_columns(&cols)
}

/// Lie bracket `[X, Y] = DY·X − DX·Y` of vector fields on a coordinate patch.
pub fn commutator<F, G>(x_field: F, y_field: G, at: &Vector, h: f64) -> Vector
where
    F: Fn(&Vector) -> Vector,
    G: Fn(&Vector) -> Vector,
{
    let x = x_field(at);
    let y = y_field(at);
    directional(&y_field, at, &x, h) - directional(&x_field, at, &y, h)
}

/// `|a − b| ≤ rel·|b| + abs` in the max norm.
pub fn close(a: &Vector, b: &Vector, rel: f64, abs: f64) -> bool {
    (a - b).amax() <= rel * b.amax() + abs
}

/// `|a − b| / (|b| + abs)` in the max norm.
pub fn relative_error(a: &Vector, b: &Vector, abs: f64) -> f64 {
    (a - b).amax() / (b.amax() + abs)
}

/// `|a − b| / (|b| + ABS_FLOOR/REL_TOL)`: at most [`REL_TOL`] exactly when
/// `close(a, b, REL_TOL, ABS_FLOOR)`.
pub fn scaled_error(a: &Vector, b: &Vector) -> f64 {
    (a - b).amax() / (b.amax() + ABS_FLOOR / REL_TOL)
}
