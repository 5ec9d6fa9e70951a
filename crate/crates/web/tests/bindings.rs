use serde_json::Value;

use vieta_tubes_web::{count, project, realize, volume};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn count_box_curve() {
    let v = parse(count("sl", "1,-1", "", "0.1", "4:12:1", "box", 1).unwrap());
    assert_eq!(v["points"].as_array().unwrap().len(), 9);
    assert!((v["fit"]["slope"].as_f64().unwrap() - 1.0).abs() < 0.05);
}

#[test]
fn count_samples_large_boxes() {
    let v = parse(count("sl", "1,0,-1", "+,-,-", "0.1", "6,7,8", "q-member", 3).unwrap());
    let modes: Vec<&str> = v["points"].as_array().unwrap().iter().map(|p| p["mode"].as_str().unwrap()).collect();
    assert_eq!(modes.last(), Some(&"sampled"));
}

#[test]
fn realize_and_project() {
    let v = parse(realize("1,-3,1").unwrap());
    assert_eq!(v["matrix"], serde_json::json!([["0", "-1"], ["1", "3"]]));
    let w = parse(project("[[2,1],[1,1]]").unwrap());
    assert!((w["jordan"]["lambda"][0].as_f64().unwrap() - 0.9624).abs() < 1e-4);
    assert_eq!(realize("1,-3,-1").unwrap_err().kind(), "determinant_not_one");
}

#[test]
fn volume_slope() {
    let v = parse(volume("sl", "1,-1", "4,8", 0.5, 4000, 2).unwrap());
    assert!((v["slope"].as_f64().unwrap() - 2.0).abs() < 0.05);
}
