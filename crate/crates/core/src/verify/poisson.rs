//! Linear Poisson structures on the dual bundles.

use serde_json::json;

use super::{vec_json, CheckDef, Ctx, Outcome, Suite, Threshold, Tracker};
use crate::algebroid::poisson::{slice_stereo_closed_form, DualChart};
use crate::linalg::{numerical_rank, random_vector, Vector};

const CHARTS: [DualChart; 3] = [DualChart::SliceStereo, DualChart::SliceAntipodal, DualChart::LineStereo];

pub(super) fn checks() -> Vec<CheckDef> {
    let named = |name, anchor, tol, run| CheckDef { name, suite: Suite::Poisson, anchor, threshold: Threshold::Named(tol), run };
    let exact = |name, anchor, run| CheckDef { name, suite: Suite::Poisson, anchor, threshold: Threshold::Exact, run };
    vec![
        named("poisson-slice-coordinate-formulas", "slice bracket in stereographic coordinates matches its coordinate formulas", "bracket-identities", slice_closed_form),
        exact("poisson-antisymmetry", "Poisson matrices are antisymmetric with vanishing base block", antisymmetry),
        named("poisson-leibniz", "bracket is a derivation in each argument", "fd-relative", leibniz),
        named("poisson-base-functions-commute", "base functions commute and momenta commute at the chart origin", "bracket-identities", base_functions),
        named("poisson-jacobi", "Jacobi identity by finite differences in all three charts", "poisson-jacobi", jacobi),
        exact("poisson-maximal-rank", "slice Poisson matrix has full rank away from p0", maximal_rank),
        exact("poisson-vanishes-over-p0", "slice bracket vanishes on the fiber over p0 in the antipodal chart", vanishes_over_p0),
    ]
}

fn slice_closed_form(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let z = random_vector(&mut ctx.rng, 2 * ctx.n, 1.0);
        let m = DualChart::SliceStereo.poisson_matrix(&z);
        let expected = slice_stereo_closed_form(&z);
        t.record((m - &expected).amax() / expected.amax().max(1.0), || json!({ "z": vec_json(&z) }));
    }
    t.finish()
}

fn antisymmetry(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    for i in 0..ctx.samples {
        let chart = CHARTS[i % CHARTS.len()];
        let z = random_vector(&mut ctx.rng, chart.dim(n), 1.0);
        let m = chart.poisson_matrix(&z);
        let antisymmetric = m == -m.transpose();
        let base_block = m.view((0, 0), (n, n)).iter().all(|&v| v == 0.0);
        t.tally(antisymmetric && base_block, || json!({ "chart": chart, "z": vec_json(&z) }));
    }
    t.finish_count()
}

/// `{F, GH} = G{F, H} + H{F, G}` for random linear `F, G, H`. Gradients of
/// quadratics are exact under central differences up to rounding.
fn leibniz(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    for i in 0..ctx.samples {
        let chart = CHARTS[i % CHARTS.len()];
        let d = chart.dim(n);
        let z = random_vector(&mut ctx.rng, d, 1.0);
        let (a, b, c) = (random_vector(&mut ctx.rng, d, 1.0), random_vector(&mut ctx.rng, d, 1.0), random_vector(&mut ctx.rng, d, 1.0));
        let f = |v: &Vector| a.dot(v);
        let g = |v: &Vector| b.dot(v);
        let h = |v: &Vector| c.dot(v);
        let left = chart.bracket(f, |v: &Vector| g(v) * h(v), &z);
        let right = g(&z) * chart.bracket(f, h, &z) + h(&z) * chart.bracket(f, g, &z);
        let antisym = chart.bracket(f, g, &z) + chart.bracket(g, f, &z);
        let residual = (left - right).abs().max(antisym.abs()) / left.abs().max(right.abs()).max(1.0);
        t.record(residual, || json!({ "chart": chart, "z": vec_json(&z) }));
    }
    t.finish()
}

fn base_functions(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    for _ in 0..ctx.samples {
        let mut z = random_vector(&mut ctx.rng, 2 * n, 1.0);
        let a = random_vector(&mut ctx.rng, n, 1.0);
        let f = |v: &Vector| v.rows(0, n).dot(&a);
        let g = |v: &Vector| v.rows(0, n).norm_squared();
        let commuting = DualChart::SliceStereo.bracket(f, g, &z).abs();
        z.rows_mut(0, n).fill(0.0);
        let mut origin: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                origin = origin.max(DualChart::SliceStereo.bracket(|v: &Vector| v[n + i], |v: &Vector| v[n + j], &z).abs());
            }
        }
        t.record(commuting.max(origin), || json!({ "z": vec_json(&z), "a": vec_json(&a) }));
    }
    t.finish()
}

fn jacobi(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for i in 0..ctx.heavy_samples() {
        let chart = CHARTS[i % CHARTS.len()];
        let z = random_vector(&mut ctx.rng, chart.dim(ctx.n), 0.8);
        t.record(chart.max_jacobiator(&z), || json!({ "chart": chart, "z": vec_json(&z) }));
    }
    t.finish()
}

fn maximal_rank(ctx: &mut Ctx) -> Outcome {
    let threshold = ctx.tol.get("rank-threshold");
    let mut t = Tracker::new();
    for _ in 0..ctx.heavy_samples() {
        let z = random_vector(&mut ctx.rng, 2 * ctx.n, 1.0);
        let rank = numerical_rank(&DualChart::SliceStereo.poisson_matrix(&z), threshold);
        t.tally(rank == 2 * ctx.n, || json!({ "z": vec_json(&z), "rank": rank }));
    }
    t.finish_count()
}

fn vanishes_over_p0(ctx: &mut Ctx) -> Outcome {
    let threshold = ctx.tol.get("rank-threshold");
    let mut t = Tracker::new();
    let n = ctx.n;
    for _ in 0..ctx.heavy_samples() {
        let mut z = random_vector(&mut ctx.rng, 2 * n, 1.0);
        z.rows_mut(0, n).fill(0.0);
        let m = DualChart::SliceAntipodal.poisson_matrix(&z);
        let rank = numerical_rank(&m, threshold);
        t.tally(m.amax() == 0.0 && rank == 0, || json!({ "z": vec_json(&z), "rank": rank }));
    }
    t.finish_count()
}
