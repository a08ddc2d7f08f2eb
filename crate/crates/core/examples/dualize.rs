use solenoids::duality::{check_relatively_prime, dual_presentation, membership_roundtrip, GroupPresentation};
use solenoids::exactnum::rational;

fn main() {
    let list = GroupPresentation::from_list(vec![
        vec![rational(1, 2), rational(1, 3)],
        vec![rational(1, 4), rational(1, 9)],
        vec![rational(3, 8), rational(2, 27)],
    ])
    .unwrap();
    println!("relatively prime: {:?}", check_relatively_prime(&list));

    let dual = dual_presentation(&list, 3).unwrap();
    for (i, m) in dual.matrices.iter().enumerate() {
        println!("bonding {}: {m}", i + 1);
    }
    println!("deltas:\n{}", dual.deltas);
    for c in &dual.coordinates {
        println!("coordinate: {c}");
    }

    let report = membership_roundtrip(&list, 3).unwrap();
    for step in &report.steps {
        println!("generator {} coordinate {}: mu={} nu={} r={} s={}", step.generator, step.index, step.mu, step.nu, step.r, step.s);
    }
}
