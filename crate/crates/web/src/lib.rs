//! WebAssembly bindings for the demo page in `www/`. Every export returns a
//! JSON string; errors surface as JavaScript exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use morsekit::flow::{integrate, sample_start, Direction, FlowOptions};
use morsekit::symfunc::{structure_constants, Partition, RingSpec};
use morsekit::{Field, Manifold, MorseSetup};

fn manifold(kind: &str, n: usize, k: usize) -> Result<Manifold, String> {
    let m = match kind {
        "orth" => Manifold::orth(n, Field::Real),
        "unitary" => Manifold::unitary(n),
        "symplectic" => Manifold::symplectic(n),
        "so" => Manifold::special_orth(n),
        "grass" => Manifold::grass(n, k),
        "lagrangian" => Manifold::lagrangian(n),
        "cs" => Manifold::cplx_str(n),
        "flag" => Manifold::flag_default(n),
        other => return Err(format!("unknown manifold kind {other:?}")),
    };
    m.map_err(|e| e.to_string())
}

pub fn critical_points_json(kind: &str, n: usize, k: usize) -> Result<String, String> {
    if n > 8 {
        return Err("the demo is limited to n <= 8".into());
    }
    let setup = MorseSetup::new(manifold(kind, n, k)?).map_err(|e| e.to_string())?;
    let mut points = Vec::new();
    for c in setup.enumerate_critical().map_err(|e| e.to_string())? {
        let f = setup.f_value(&c.point).map_err(|e| e.to_string())?;
        points.push(json!({"label": c.label.to_string(), "index": c.index, "f": f}));
    }
    let poincare = setup
        .poincare(morsekit::Ring::Z2)
        .map_err(|e| e.to_string())?;
    Ok(json!({
        "manifold": setup.manifold().to_string(),
        "dim": setup.manifold().dim(),
        "critical_points": points,
        "poincare_z2": poincare.to_string(),
    })
    .to_string())
}

/// Ascending flow from a seeded start, thinned to every `stride`-th step.
pub fn flow_trajectory_json(kind: &str, n: usize, k: usize, seed: u32, dt: f64, stride: usize) -> Result<String, String> {
    if n > 6 {
        return Err("the demo is limited to n <= 6 for flows".into());
    }
    let setup = MorseSetup::new(manifold(kind, n, k)?).map_err(|e| e.to_string())?;
    let opts = FlowOptions {
        dt,
        max_t: 100.0,
        ..FlowOptions::default()
    };
    let x0 = sample_start(&setup, u64::from(seed), 0);
    let (traj, res) = integrate(&setup, &x0, Direction::Ascending, &opts).map_err(|e| e.to_string())?;
    let stride = stride.max(1);
    let keep = |v: &[f64]| -> Vec<f64> {
        let mut out: Vec<f64> = v.iter().step_by(stride).copied().collect();
        if (v.len() - 1) % stride != 0 {
            out.push(*v.last().unwrap());
        }
        out
    };
    let limit = match &res.limit_label {
        Some(l) => Value::String(l.to_string()),
        None => Value::Null,
    };
    Ok(json!({
        "manifold": setup.manifold().to_string(),
        "t": keep(&traj.times),
        "f": keep(&traj.f_values),
        "grad_norm": keep(&traj.grad_norms),
        "converged": res.converged,
        "limit": limit,
        "steps": res.steps,
    })
    .to_string())
}

pub fn schubert_product_json(space: &str, n: usize, k: usize, lambda: &str, mu: &str) -> Result<String, String> {
    let spec = match space {
        "grass" => RingSpec::GrassQuotient { n, k },
        "so" => RingSpec::TruncatedZ2 { n, vars: 2 * (n / 2) },
        "cs" => RingSpec::SchurPRing { n },
        other => return Err(format!("unknown space {other:?}")),
    };
    if n > 8 {
        return Err("the demo is limited to n <= 8".into());
    }
    let a = Partition::parse(lambda).map_err(|e| e.to_string())?;
    let b = Partition::parse(mu).map_err(|e| e.to_string())?;
    let c = structure_constants(&spec, &a, &b).map_err(|e| e.to_string())?;
    let terms: serde_json::Map<String, Value> = c
        .iter()
        .map(|(p, v)| (p.to_string(), Value::String(v.to_string())))
        .collect();
    Ok(json!({"ring": spec.to_string(), "terms": terms}).to_string())
}

#[wasm_bindgen]
pub fn critical_points(kind: &str, n: usize, k: usize) -> Result<String, JsError> {
    critical_points_json(kind, n, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn flow_trajectory(kind: &str, n: usize, k: usize, seed: u32, dt: f64, stride: usize) -> Result<String, JsError> {
    flow_trajectory_json(kind, n, k, seed, dt, stride).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn schubert_product(space: &str, n: usize, k: usize, lambda: &str, mu: &str) -> Result<String, JsError> {
    schubert_product_json(space, n, k, lambda, mu).map_err(|e| JsError::new(&e))
}
