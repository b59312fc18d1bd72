use morsekit_web::{critical_points_json, flow_trajectory_json, schubert_product_json};
use serde_json::Value;

#[test]
fn critical_points_of_grassmannian() {
    let v: Value = serde_json::from_str(&critical_points_json("grass", 4, 2).unwrap()).unwrap();
    assert_eq!(v["critical_points"].as_array().unwrap().len(), 6);
    assert_eq!(v["poincare_z2"], "1 + t^2 + 2t^4 + t^6 + t^8");
    assert!(critical_points_json("torus", 3, 0).is_err());
}

#[test]
fn flow_reaches_the_maximum() {
    let v: Value = serde_json::from_str(&flow_trajectory_json("so", 3, 0, 42, 0.01, 50).unwrap()).unwrap();
    assert_eq!(v["converged"], true);
    assert_eq!(v["limit"], "{2,3}");
    let f: Vec<f64> = v["f"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!(f.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    assert_eq!(v["t"].as_array().unwrap().len(), f.len());
}

#[test]
fn products() {
    let v: Value = serde_json::from_str(&schubert_product_json("grass", 4, 2, "1", "1").unwrap()).unwrap();
    assert_eq!(v["terms"], serde_json::json!({"(2)": "1", "(1,1)": "1"}));
    assert!(schubert_product_json("grass", 4, 2, "3", "1").is_err());
}
