use ppm_web::{generate_line, incidence_json, match_json, order_json};
use serde_json::Value;

fn json(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn incidence_view() {
    let v = json(incidence_json("2 4 1 3").unwrap());
    assert_eq!(v["values"], serde_json::json!([2, 4, 1, 3]));
    assert_eq!(v["index_path"], serde_json::json!([[1, 2], [2, 3], [3, 4]]));
    // values 1,2,3,4 sit at indices 3,1,4,2
    assert_eq!(v["value_path"], serde_json::json!([[3, 1], [1, 4], [4, 2]]));
    assert_eq!(v["planar"], true);
    assert!(incidence_json("1 1").unwrap_err().contains("more than once"));
}

#[test]
fn order_view() {
    for st in ["identity", "even-odd", "m", "separator", "exact"] {
        let v = json(order_json("1 5 4 6 3 7 8 2", st).unwrap());
        assert_eq!(v["tau"].as_array().unwrap().len(), 8);
        assert_eq!(v["profile"].as_array().unwrap().len(), 9);
    }
    assert!(order_json("1 2", "fastest").is_err());
}

#[test]
fn match_view() {
    for algo in ["naive", "even-odd", "dp:identity", "dp:m", "dp:separator"] {
        let v = json(match_json("1 5 4 6 3 7 8 2", "2 3 1", algo).unwrap());
        assert_eq!(v["contains"], true, "{algo}");
        assert_eq!(v["witness"].as_array().unwrap().len(), 3, "{algo}");
        let v = json(match_json("1 5 4 6 3 7 8 2", "3 1 2", algo).unwrap());
        assert_eq!(v["contains"], false, "{algo}");
    }
    assert!(match_json("1 2", "1", "magic").is_err());
    assert!(match_json("1 2", "1", "dp:magic").is_err());
}

#[test]
fn generators() {
    assert_eq!(generate_line("grid", 8, 1, 0).unwrap(), "4 5 3 6 2 7 1 8");
    assert_eq!(generate_line("random", 9, 0, 4).unwrap(), generate_line("random", 9, 0, 4).unwrap());
    assert_eq!(generate_line("jordan", 12, 0, 1).unwrap().split(' ').count(), 12);
    assert!(generate_line("random", 10_000, 0, 1).is_err());
    assert!(generate_line("spiral", 4, 0, 1).is_err());
}
