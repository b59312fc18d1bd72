//! Gradient flows of `f_a` on the embedded manifolds.
//!
//! Direction names follow the sign applied to the gradient: an
//! [`Direction::Ascending`] flow solves `dφ/dt = grad f` so `f` increases
//! along it. A point whose ascending flow tends to `p` as `t → +∞` lies in
//! the descending cell of `p` (dimension = index of `p`); a point whose
//! descending flow tends to `p` lies in the ascending cell.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::RngCore;

use crate::config::{FLOW_CONVERGE_DIST, FLOW_GRAD_STOP};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::manifold::ManifoldPoint;
use crate::morse::{Label, MorseSetup};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Ascending,
    Descending,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Ascending => 1.0,
            Direction::Descending => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    pub dt: f64,
    pub max_t: f64,
    pub grad_stop: f64,
    pub converge_dist: f64,
    /// Keep every intermediate point; otherwise only the first and last.
    pub keep_points: bool,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            dt: 0.01,
            max_t: 200.0,
            grad_stop: FLOW_GRAD_STOP,
            converge_dist: FLOW_CONVERGE_DIST,
            keep_points: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<ManifoldPoint>,
    pub f_values: Vec<f64>,
    pub grad_norms: Vec<f64>,
    pub direction: Direction,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
    pub fn last_point(&self) -> &ManifoldPoint {
        self.points.last().expect("trajectory has a start point")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub limit_label: Option<Label>,
    pub converged: bool,
    pub steps: usize,
    pub final_grad_norm: f64,
    /// Ambient distance from the final point to the nearest critical point.
    pub final_distance: f64,
}

/// State types the Runge-Kutta kernel can advance.
pub trait FlowState: Clone {
    /// `self + s·other`.
    fn axpy(&self, s: f64, other: &Self) -> Self;
}

impl FlowState for Vec<f64> {
    fn axpy(&self, s: f64, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a + s * b).collect()
    }
}

impl FlowState for Matrix {
    fn axpy(&self, s: f64, other: &Self) -> Self {
        Matrix::axpy(self, s, other)
    }
}

/// One classical fourth-order Runge-Kutta step.
pub fn rk4_step<S: FlowState>(x: &S, dt: f64, field: impl Fn(&S) -> S) -> S {
    let k1 = field(x);
    let k2 = field(&x.axpy(0.5 * dt, &k1));
    let k3 = field(&x.axpy(0.5 * dt, &k2));
    let k4 = field(&x.axpy(dt, &k3));
    x.axpy(dt / 6.0, &k1)
        .axpy(dt / 3.0, &k2)
        .axpy(dt / 3.0, &k3)
        .axpy(dt / 6.0, &k4)
}

/// Nearest-critical-point lookup with an ambiguity margin of half the
/// smallest pairwise distance between critical matrices.
#[derive(Debug, Clone)]
pub struct Classifier {
    critical: Vec<(Label, Matrix)>,
    margin: f64,
}

impl Classifier {
    pub fn new(setup: &MorseSetup) -> Result<Self> {
        let critical: Vec<(Label, Matrix)> = setup
            .enumerate_critical()?
            .into_iter()
            .map(|c| (c.label, c.point.into_matrix()))
            .collect();
        let mut min_pair = f64::INFINITY;
        for i in 0..critical.len() {
            for j in i + 1..critical.len() {
                min_pair = min_pair.min((&critical[i].1 - &critical[j].1).norm());
            }
        }
        Ok(Classifier {
            critical,
            margin: 0.5 * min_pair,
        })
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Nearest label and its distance, without the margin test.
    pub fn nearest(&self, x: &Matrix) -> (Label, f64) {
        let mut best = (self.critical[0].0.clone(), f64::INFINITY);
        for (label, m) in &self.critical {
            let d = (x - m).norm();
            if d < best.1 {
                best = (label.clone(), d);
            }
        }
        best
    }

    pub fn classify(&self, x: &Matrix) -> Result<Label> {
        let (label, distance) = self.nearest(x);
        if !(distance < self.margin) {
            return Err(Error::Ambiguous {
                distance,
                margin: self.margin,
            });
        }
        Ok(label)
    }
}

/// Label of the critical point nearest to `x`.
pub fn classify_limit(setup: &MorseSetup, x: &Matrix) -> Result<Label> {
    let x = setup.manifold().coerce(x)?;
    Classifier::new(setup)?.classify(&x)
}

/// RK4 on the ambient field `±grad f`, retracting after every step.
pub fn integrate(
    setup: &MorseSetup,
    x0: &ManifoldPoint,
    direction: Direction,
    opts: &FlowOptions,
) -> Result<(Trajectory, FlowResult)> {
    let classifier = Classifier::new(setup)?;
    integrate_with(setup, &classifier, x0, direction, opts)
}

pub fn integrate_with(
    setup: &MorseSetup,
    classifier: &Classifier,
    x0: &ManifoldPoint,
    direction: Direction,
    opts: &FlowOptions,
) -> Result<(Trajectory, FlowResult)> {
    if !(opts.dt > 0.0) || !opts.dt.is_finite() {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {}", opts.dt)));
    }
    if !(opts.max_t >= 0.0) {
        return Err(Error::InvalidArgument(format!("max_t must be nonnegative, got {}", opts.max_t)));
    }
    let m = setup.manifold();
    if x0.manifold() != m {
        return Err(Error::InvalidArgument("start point lies on a different manifold".into()));
    }
    let sign = direction.sign();
    let field = |x: &Matrix| setup.gradient_raw(x).scale(sign);

    let mut traj = Trajectory {
        times: vec![0.0],
        points: vec![x0.clone()],
        f_values: vec![setup.f_raw(x0.matrix())],
        grad_norms: vec![setup.gradient_raw(x0.matrix()).norm()],
        direction,
    };
    let mut current = x0.clone();
    let mut steps = 0usize;
    let mut t = 0.0;
    while *traj.grad_norms.last().unwrap() >= opts.grad_stop && t < opts.max_t {
        let next = rk4_step(current.matrix(), opts.dt, field);
        current = m.retract(&next)?;
        steps += 1;
        t = steps as f64 * opts.dt;
        traj.times.push(t);
        traj.f_values.push(setup.f_raw(current.matrix()));
        traj.grad_norms.push(setup.gradient_raw(current.matrix()).norm());
        if opts.keep_points {
            traj.points.push(current.clone());
        }
    }
    if !opts.keep_points && steps > 0 {
        traj.points.push(current.clone());
    }
    let final_grad_norm = *traj.grad_norms.last().unwrap();
    let (nearest, final_distance) = classifier.nearest(current.matrix());
    let converged = final_grad_norm < opts.grad_stop && final_distance < opts.converge_dist;
    let result = FlowResult {
        limit_label: converged.then_some(nearest),
        converged,
        steps,
        final_grad_norm,
        final_distance,
    };
    Ok((traj, result))
}

/// Closed-form flow of the model `f = f(0) − |x|² + |y|²`:
/// `(a e^{−2t}, b e^{2t})`.
pub fn model_flow(a: &[f64], b: &[f64], t: f64) -> (Vec<f64>, Vec<f64>) {
    let da = (-2.0 * t).exp();
    let db = (2.0 * t).exp();
    (a.iter().map(|v| v * da).collect(), b.iter().map(|v| v * db).collect())
}

/// Largest deviation of RK4 on the model field `(−2x, 2y)` from
/// [`model_flow`] over `[0, t_end]`.
pub fn model_flow_rk4_error(a: &[f64], b: &[f64], dt: f64, t_end: f64) -> f64 {
    let p = a.len();
    let field = |s: &Vec<f64>| -> Vec<f64> {
        s.iter()
            .enumerate()
            .map(|(i, v)| if i < p { -2.0 * v } else { 2.0 * v })
            .collect()
    };
    let mut state: Vec<f64> = a.iter().chain(b).copied().collect();
    let steps = (t_end / dt).round() as usize;
    let mut worst: f64 = 0.0;
    for k in 1..=steps {
        state = rk4_step(&state, dt, field);
        let (ea, eb) = model_flow(a, b, k as f64 * dt);
        for (s, e) in state.iter().zip(ea.iter().chain(&eb)) {
            worst = worst.max((s - e).abs());
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport {
    /// Smallest observed `±df/dt` (sign chosen so monotone flows give ≥ 0).
    pub min_df_dt: f64,
    /// Smallest step `±(f_{k+1} − f_k)`.
    pub min_step: f64,
    /// Largest `| ±df/dt − |grad|² |` over the trajectory.
    pub max_abs_mismatch: f64,
    /// Largest relative mismatch over steps with `|grad|² ≥ 1e-4`.
    pub max_rel_mismatch: f64,
}

/// Compare the finite-difference rate of change of `f` with `|grad f|²`.
pub fn monotonicity_report(traj: &Trajectory) -> MonotonicityReport {
    let sign = traj.direction.sign();
    let mut rep = MonotonicityReport {
        min_df_dt: 0.0,
        min_step: 0.0,
        max_abs_mismatch: 0.0,
        max_rel_mismatch: 0.0,
    };
    let mut first = true;
    for k in 0..traj.len().saturating_sub(1) {
        let dt = traj.times[k + 1] - traj.times[k];
        let step = sign * (traj.f_values[k + 1] - traj.f_values[k]);
        let rate = step / dt;
        let g2 = 0.5 * (traj.grad_norms[k].powi(2) + traj.grad_norms[k + 1].powi(2));
        if first {
            rep.min_df_dt = rate;
            rep.min_step = step;
            first = false;
        }
        rep.min_df_dt = rep.min_df_dt.min(rate);
        rep.min_step = rep.min_step.min(step);
        let mismatch = (rate - g2).abs();
        rep.max_abs_mismatch = rep.max_abs_mismatch.max(mismatch);
        if g2 >= 1e-4 {
            rep.max_rel_mismatch = rep.max_rel_mismatch.max(mismatch / g2);
        }
    }
    rep
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Census {
    pub counts: BTreeMap<Label, usize>,
    pub failures: usize,
}

/// Ascending flows from `samples` seeded random points, tallied by limit.
/// Sample `i` draws its start point from stream `i` of `seed`.
pub fn descending_cell_census(
    setup: &MorseSetup,
    samples: usize,
    seed: u64,
    opts: &FlowOptions,
) -> Result<Census> {
    let classifier = Classifier::new(setup)?;
    let opts = FlowOptions {
        keep_points: false,
        ..*opts
    };
    let mut census = Census::default();
    for i in 0..samples {
        let x0 = sample_start(setup, seed, i as u64);
        match integrate_with(setup, &classifier, &x0, Direction::Ascending, &opts) {
            Ok((_, FlowResult {
                limit_label: Some(label),
                ..
            })) => *census.counts.entry(label).or_insert(0) += 1,
            _ => census.failures += 1,
        }
    }
    Ok(census)
}

/// Start point for sample `i` of a seeded batch.
pub fn sample_start(setup: &MorseSetup, seed: u64, i: u64) -> ManifoldPoint {
    let point_seed = stream_rng(seed, i).next_u64();
    setup.manifold().random_point(point_seed)
}

/// Shortest string that parses back to `v`: positional notation for
/// magnitudes in `[1e-5, 1e16)` and zero, scientific otherwise.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// CSV with header `t,f,grad_norm,<entries>`; entries are named `x_r_c`
/// (1-based) with `_re/_im` or `_re/_i/_j/_k` suffixes over C and H.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::new();
    let first = traj.points[0].matrix();
    let (rows, cols, field) = (first.rows(), first.cols(), first.field());
    let suffixes: &[&str] = match field {
        Field::Real => &[""],
        Field::Complex => &["_re", "_im"],
        Field::Quaternion => &["_re", "_i", "_j", "_k"],
    };
    out.push_str("t,f,grad_norm");
    for r in 1..=rows {
        for c in 1..=cols {
            for s in suffixes {
                let _ = write!(out, ",x_{r}_{c}{s}");
            }
        }
    }
    out.push('\n');
    let with_points = traj.points.len() == traj.len();
    for k in 0..traj.len() {
        let _ = write!(
            out,
            "{},{},{}",
            format_number(traj.times[k]),
            format_number(traj.f_values[k]),
            format_number(traj.grad_norms[k])
        );
        if with_points {
            for s in traj.points[k].matrix().entries() {
                for v in &s.components()[..field.real_dim()] {
                    let _ = write!(out, ",{}", format_number(*v));
                }
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::Manifold;

    #[test]
    fn stationary_start() {
        let s = MorseSetup::new(Manifold::grass(4, 2).unwrap()).unwrap();
        let c = s.critical_point(&Label::Subset(vec![1, 3])).unwrap();
        let (traj, res) = integrate(&s, &c.point, Direction::Ascending, &FlowOptions::default()).unwrap();
        assert_eq!(traj.len(), 1);
        assert!(res.converged);
        assert_eq!(res.limit_label, Some(Label::Subset(vec![1, 3])));
        let rep = monotonicity_report(&traj);
        assert_eq!(rep.max_abs_mismatch, 0.0);
    }

    #[test]
    fn classify_examples() {
        let g = MorseSetup::new(Manifold::grass(4, 2).unwrap()).unwrap();
        let x = g.critical_matrix(&Label::Subset(vec![1, 3])).unwrap();
        assert_eq!(classify_limit(&g, &x).unwrap(), Label::Subset(vec![1, 3]));
        let u3 = MorseSetup::new(Manifold::unitary(3).unwrap()).unwrap();
        let mut near = Matrix::identity(3, Field::Complex);
        near[(0, 1)] = crate::linalg::Scalar::real(1e-7);
        assert_eq!(classify_limit(&u3, &near).unwrap(), Label::Subset(vec![]));
        let a = u3.critical_matrix(&Label::Subset(vec![])).unwrap();
        let b = u3.critical_matrix(&Label::Subset(vec![1])).unwrap();
        let mid = (&a + &b).scale(0.5);
        assert!(matches!(classify_limit(&u3, &mid), Err(Error::Ambiguous { .. })));
    }

    #[test]
    fn model_flow_examples() {
        let (x, y) = model_flow(&[1.0, -2.0], &[0.5], 0.0);
        assert_eq!((x, y), (vec![1.0, -2.0], vec![0.5]));
        let (x, y) = model_flow(&[1.0], &[0.0], 20.0);
        assert!(x[0] < 1e-17 && y[0] == 0.0);
        assert!(model_flow_rk4_error(&[1.0, 0.3], &[0.7], 1e-3, 3.0) <= 1e-8);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let e1 = model_flow_rk4_error(&[1.0], &[1.0], 0.1, 3.0);
        let e2 = model_flow_rk4_error(&[1.0], &[1.0], 0.05, 3.0);
        assert!(e1 / e2 >= 12.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn census_of_nothing() {
        let g = MorseSetup::new(Manifold::grass(4, 2).unwrap()).unwrap();
        let c = descending_cell_census(&g, 0, 1, &FlowOptions::default()).unwrap();
        assert!(c.counts.is_empty());
    }

    #[test]
    fn csv_header() {
        let s = MorseSetup::new(Manifold::unitary(1).unwrap()).unwrap();
        let c = s.critical_point(&Label::Subset(vec![])).unwrap();
        let (traj, _) = integrate(&s, &c.point, Direction::Ascending, &FlowOptions::default()).unwrap();
        let csv = trajectory_csv(&traj);
        assert_eq!(csv, "t,f,grad_norm,x_1_1_re,x_1_1_im\n0,0,0,1,0\n");
        for v in [1.0085409468297559e-8, -4.77e-21, 0.1, 25.01, 3e20, -0.0] {
            assert_eq!(format_number(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(format_number(1.5e-8), "1.5e-8");
    }
}
