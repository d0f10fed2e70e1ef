use tlr_core::algebra::{rs_code, Field};
use tlr_core::concat::thommesen_sample;
use tlr_core::format::{load_code, load_concat, load_linear, save_code, save_concat, AnyCode};
use num_rational::Ratio;

#[test]
fn rs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("rs.json");
    let c = rs_code(&Field::with_order(4).unwrap(), 4, 2).unwrap();
    save_code(&p, &c).unwrap();
    assert_eq!(load_linear(&p).unwrap(), c);
}

#[test]
fn wrong_rank_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    let text = r#"{"field":{"s":2,"poly":7},"n":4,"k":2,"systematic":false,"permutation":null,"generator":[[1,2],[2,3],[3,1],[0,0]]}"#;
    std::fs::write(&p, text).unwrap();
    assert!(load_code(&p).is_err());
}

#[test]
fn thommesen_round_trip_keeps_every_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cc.json");
    let outer = rs_code(&Field::with_order(4).unwrap(), 4, 2).unwrap();
    let cc = thommesen_sample(&outer, Ratio::new(1, 2), 17).unwrap();
    assert_eq!(cc.inners().len(), 4);
    save_concat(&p, &cc).unwrap();
    let back = load_concat(&p).unwrap();
    assert_eq!(back.outer().generator(), cc.outer().generator());
    for (a, b) in back.inners().iter().zip(cc.inners()) {
        assert_eq!(a.generator(), b.generator());
    }
    assert!(matches!(load_code(&p).unwrap(), AnyCode::Concat(_)));
}
