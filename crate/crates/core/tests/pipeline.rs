use proptest::prelude::*;
use tlr_core::algebra::{rs_code, Field};
use tlr_core::format::{code_from_json, code_to_json};
use tlr_core::listrec::{brute_force_list_recover, corrupt_to_lists, dist_to_lists, ChannelMode};
use tlr_core::tensor::tensor_power;
use tlr_core::Radius;

fn rs42() -> tlr_core::algebra::LinearCode {
    rs_code(&Field::with_order(4).unwrap(), 4, 2).unwrap()
}

#[test]
fn tensor_power_agrees_with_its_explicit_generator() {
    let tc = tensor_power(&rs42(), 2).unwrap();
    let lc = tc.to_linear_code().unwrap();
    assert_eq!((lc.n(), lc.k()), (16, 4));
    assert_eq!(lc.min_distance().unwrap(), 9);
    let msg = [1, 0, 3, 2];
    assert_eq!(tc.encode(&msg).unwrap(), lc.encode(&msg).unwrap());
    let back = code_from_json(&code_to_json(&lc)).unwrap();
    assert_eq!(back, lc);
}

proptest! {
    #[test]
    fn planted_message_is_always_recovered(a in 0u16..4, b in 0u16..4, seed in any::<u64>(), sparse in any::<bool>()) {
        let code = rs42();
        let word = code.encode(&[a, b]).unwrap();
        let alpha = Radius::new(1, 4).unwrap();
        let mode = if sparse { ChannelMode::Sparse } else { ChannelMode::Filled };
        let s = corrupt_to_lists(&word, code.field(), alpha, 2, seed, mode).unwrap();
        prop_assert!(dist_to_lists(&word, &s).unwrap() <= num_rational::Ratio::new(1, 4));
        let found = brute_force_list_recover(&code, &s, alpha).unwrap();
        prop_assert!(found.contains(&vec![a, b]));
        prop_assert!(found.len() <= 8);
    }
}
