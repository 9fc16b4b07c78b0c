//! Fiberwise linear Poisson structures on the duals of the algebroids, in
//! coordinates `(x, ξ)` where `x` is a chart of `Sⁿ` and `ξ` are the fiber
//! coordinates dual to a local frame. The structure is
//! `{ξₐ, xⁱ} = ρₐⁱ(x)`, `{ξₐ, ξ_b} = Cₐ_bᶜ(x) ξ_c`, `{xⁱ, xʲ} = 0`.

use serde::{Deserialize, Serialize};

use crate::fd;
use crate::linalg::{numerical_rank, Matrix, Vector};

use super::fields::{stereo_base_point, stereo_differential};
use super::{anchor_lz_basis, bracket_lz_coefficients};

/// Which dual bundle and chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualChart {
    /// Slice algebroid `TSⁿ`, stereographic chart from `p₀`, coordinate frame.
    SliceStereo,
    /// Slice algebroid, stereographic chart from `−p₀` (covers `p₀` at the origin).
    SliceAntipodal,
    /// Algebroid of `Z` with the frame `X̃`, stereographic chart from `p₀`.
    LineStereo,
}

impl DualChart {
    pub fn rank(&self, n: usize) -> usize {
        match self {
            DualChart::LineStereo => n + 1,
            _ => n,
        }
    }

    pub fn dim(&self, n: usize) -> usize {
        n + self.rank(n)
    }

    /// Last coordinate of the base point and its gradient in the chart.
    fn alpha_with_gradient(&self, x: &Vector) -> (f64, Vector) {
        let q = 1.0 + x.norm_squared();
        match self {
            DualChart::SliceAntipodal => ((1.0 - x.norm_squared()) / q, x * (-4.0 / (q * q))),
            _ => ((x.norm_squared() - 1.0) / q, x * (4.0 / (q * q))),
        }
    }

    /// `ρ` as a `n × rank` matrix.
    pub fn anchor_matrix(&self, x: &Vector) -> Matrix {
        let n = x.len();
        match self {
            DualChart::LineStereo => {
                let p = stereo_base_point(x);
                let cols: Vec<Vector> = (0..=n).map(|a| stereo_differential(&p, &anchor_lz_basis(a, &p))).collect();
                Matrix::from_columns(&cols)
            }
            _ => {
                let (alpha, _) = self.alpha_with_gradient(x);
                Matrix::identity(n, n) * (alpha - 1.0)
            }
        }
    }

    /// `Σ_c Cₐ_bᶜ ξ_c` as a `rank × rank` matrix.
    pub fn structure_contracted(&self, x: &Vector, xi: &Vector) -> Matrix {
        let n = x.len();
        match self {
            DualChart::LineStereo => {
                let p = stereo_base_point(x);
                Matrix::from_fn(n + 1, n + 1, |a, b| bracket_lz_coefficients(a, b, &p).dot(xi))
            }
            _ => {
                // [∂_a, ∂_b] = (∂_a α) ∂_b − (∂_b α) ∂_a
                let (_, grad) = self.alpha_with_gradient(x);
                Matrix::from_fn(n, n, |a, b| grad[a] * xi[b] - grad[b] * xi[a])
            }
        }
    }

    /// Poisson matrix `Π^{IJ} = {z^I, z^J}` at `z = (x, ξ)`.
    pub fn poisson_matrix(&self, z: &Vector) -> Matrix {
        let n = self.base_dim(z);
        let r = self.rank(n);
        let x = z.rows(0, n).into_owned();
        let xi = z.rows(n, r).into_owned();
        let rho = self.anchor_matrix(&x);
        let c = self.structure_contracted(&x, &xi);
        let mut m = Matrix::zeros(n + r, n + r);
        for a in 0..r {
            for i in 0..n {
                m[(n + a, i)] = rho[(i, a)];
                m[(i, n + a)] = -rho[(i, a)];
            }
            for b in 0..r {
                m[(n + a, n + b)] = c[(a, b)];
            }
        }
        m
    }

    fn base_dim(&self, z: &Vector) -> usize {
        match self {
            DualChart::LineStereo => (z.len() - 1) / 2,
            _ => z.len() / 2,
        }
    }

    /// `{F, G}(z) = ∇Fᵗ Π ∇G` with gradients by central differences.
    pub fn bracket<F, G>(&self, f: F, g: G, z: &Vector) -> f64
    where
        F: Fn(&Vector) -> f64,
        G: Fn(&Vector) -> f64,
    {
        let df = fd::gradient(f, z, fd::STEP);
        let dg = fd::gradient(g, z, fd::STEP);
        df.dot(&(self.poisson_matrix(z) * dg))
    }

    /// Largest `|{z^I,{z^J,z^K}} + cyclic|` over coordinate triples.
    pub fn max_jacobiator(&self, z: &Vector) -> f64 {
        let d = z.len();
        let pi = self.poisson_matrix(z);
        let derivs: Vec<Matrix> = (0..d)
            .map(|l| {
                let mut e = Vector::zeros(d);
                e[l] = 1.0;
                (self.poisson_matrix(&(z + &e * fd::STEP)) - self.poisson_matrix(&(z - &e * fd::STEP)))
                    / (2.0 * fd::STEP)
            })
            .collect();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let mut total = 0.0;
                    for l in 0..d {
                        total += pi[(i, l)] * derivs[l][(j, k)]
                            + pi[(j, l)] * derivs[l][(k, i)]
                            + pi[(k, l)] * derivs[l][(i, j)];
                    }
                    worst = worst.max(total.abs());
                }
            }
        }
        worst
    }

    pub fn rank_at(&self, z: &Vector) -> usize {
        numerical_rank(&self.poisson_matrix(z), 1e-8)
    }
}

/// The slice bracket written directly from its coordinate formulas:
/// `{pᵢ, pⱼ} = 4(xⁱpⱼ − xʲpᵢ)/(1+|x|²)²`, `{pᵢ, xʲ} = −2δᵢʲ/(1+|x|²)`.
pub fn slice_stereo_closed_form(z: &Vector) -> Matrix {
    let n = z.len() / 2;
    let x = z.rows(0, n);
    let p = z.rows(n, n);
    let q = 1.0 + x.norm_squared();
    let mut m = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(n + i, i)] = -2.0 / q;
        m[(i, n + i)] = 2.0 / q;
        for j in 0..n {
            m[(n + i, n + j)] = 4.0 * (x[i] * p[j] - x[j] * p[i]) / (q * q);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_vector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn slice_bracket_matches_coordinate_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let z = random_vector(&mut rng, 6, 1.0);
        let m = DualChart::SliceStereo.poisson_matrix(&z);
        assert!((m - slice_stereo_closed_form(&z)).amax() < 1e-15);
    }

    #[test]
    fn base_functions_commute_and_origin_momenta_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let z = random_vector(&mut rng, 6, 1.0);
        let f = |v: &Vector| v[0] * v[1] + v[2].sin();
        let g = |v: &Vector| v[0].exp() - v[2];
        assert!(DualChart::SliceStereo.bracket(f, g, &z).abs() < 1e-10);
        let mut at_origin = z.clone();
        at_origin.rows_mut(0, 3).fill(0.0);
        let p1 = |v: &Vector| v[3];
        let p2 = |v: &Vector| v[4];
        assert!(DualChart::SliceStereo.bracket(p1, p2, &at_origin).abs() < 1e-10);
    }

    #[test]
    fn jacobi_and_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for chart in [DualChart::SliceStereo, DualChart::SliceAntipodal, DualChart::LineStereo] {
            let z = random_vector(&mut rng, chart.dim(3), 0.8);
            assert!(chart.max_jacobiator(&z) < 1e-7, "{chart:?} {}", chart.max_jacobiator(&z));
        }
        let z = random_vector(&mut rng, 6, 0.8);
        assert_eq!(DualChart::SliceStereo.rank_at(&z), 6);
    }

    #[test]
    fn vanishes_over_p0() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut z = random_vector(&mut rng, 6, 1.0);
        z.rows_mut(0, 3).fill(0.0);
        assert_eq!(DualChart::SliceAntipodal.poisson_matrix(&z).amax(), 0.0);
        assert_eq!(DualChart::SliceAntipodal.rank_at(&z), 0);
    }
}
