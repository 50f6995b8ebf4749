mod common;

use num_rational::Ratio;

use common::oracle;
use treefit::hardness::{generate_micro_instance, ThreePartitionInstance};
use treefit::pipeline::brute_force_contains;

#[test]
fn micro_yes_instance_agrees_with_oracle() {
    let inst = ThreePartitionInstance::new_micro(3, vec![1, 1, 1]).unwrap();
    let out = generate_micro_instance(&inst, Ratio::from_integer(1)).unwrap();
    let e = out
        .forward_certificate(&inst.solve_brute().unwrap())
        .unwrap();
    assert!(oracle::certificate_ok(&out.g, &out.t, &e));
    assert!(oracle::contains(&out.g, &out.t));
}

#[test]
fn micro_no_instance_agrees_with_oracle() {
    let inst = ThreePartitionInstance::new_micro(4, vec![1, 1, 1, 1, 1, 3]).unwrap();
    assert!(inst.solve_brute().is_none());
    let out = generate_micro_instance(&inst, Ratio::from_integer(1)).unwrap();
    let verdict = brute_force_contains(&out.g, &out.t, 1 << 26).expect("within the node cap");
    assert_eq!(verdict.decided(), Some(false));
}

#[test]
fn micro_two_triples_yes() {
    let inst = ThreePartitionInstance::new_micro(4, vec![1, 1, 2, 2, 1, 1]).unwrap();
    let out = generate_micro_instance(&inst, Ratio::from_integer(1)).unwrap();
    let partition = inst.solve_brute().unwrap();
    assert!(oracle::certificate_ok(
        &out.g,
        &out.t,
        &out.forward_certificate(&partition).unwrap()
    ));
    assert_eq!(
        brute_force_contains(&out.g, &out.t, 1 << 26)
            .unwrap()
            .decided(),
        Some(true)
    );
}
