use num_complex::Complex64;
use proptest::prelude::*;
use qframes::choi::{double_ket, link, wire};
use qframes::frame_change::{born_weights, build_j_a_to_b, BoundaryData};
use qframes::linalg::{self, Matrix};
use qframes::sampling::{haar_unitary, random_state, sample_rng};
use qframes::switch::{self, build_switch, fill, A_I, A_O, B_I, B_O};
use qframes::{insert_gate, scaffold, weyl_basis, LabeledTensor, SystemLabel};
use rand::Rng;

fn random_tensor(names: &[(&str, usize)], seed: u64, index: u64) -> LabeledTensor {
    let mut rng = sample_rng(seed, "props", "tensor", index);
    let labels: Vec<SystemLabel> = names.iter().map(|(n, d)| SystemLabel::new(*n, *d)).collect();
    let size: usize = names.iter().map(|(_, d)| d).product();
    let data = (0..size)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    LabeledTensor::new(labels, data).unwrap()
}

fn pair(seed: u64, d: usize, check: &str) -> (Matrix, Matrix) {
    let mut rng = sample_rng(seed, "props", check, 0);
    (haar_unitary(d, &mut rng), haar_unitary(d, &mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn contraction_is_associative(seed in any::<u64>(), a in 1usize..4, b in 1usize..4, c in 1usize..4) {
        let x = random_tensor(&[("i", a), ("j", b)], seed, 0);
        let y = random_tensor(&[("j", b), ("k", c)], seed, 1);
        let z = random_tensor(&[("k", c), ("l", 2)], seed, 2);
        let left = link(&link(&x, &y).unwrap(), &z).unwrap();
        let right = link(&x, &link(&y, &z).unwrap()).unwrap();
        prop_assert!(left.distance(&right).unwrap() < 1e-12 * (1.0 + left.norm()));
    }

    #[test]
    fn contraction_matches_matrix_product(seed in any::<u64>(), a in 1usize..5, b in 1usize..5, c in 1usize..5) {
        let x = random_tensor(&[("i", a), ("j", b)], seed, 3);
        let y = random_tensor(&[("j", b), ("k", c)], seed, 4);
        let got = link(&x, &y).unwrap().to_matrix(&["i"], &["k"]).unwrap();
        let oracle = x.to_matrix(&["i"], &["j"]).unwrap() * y.to_matrix(&["j"], &["k"]).unwrap();
        prop_assert!((got - oracle).norm() < 1e-12);
    }

    #[test]
    fn product_norm_is_multiplicative(seed in any::<u64>(), a in 1usize..5, b in 1usize..5) {
        let x = random_tensor(&[("p", a), ("q", 2)], seed, 5);
        let y = random_tensor(&[("r", b)], seed, 6);
        let n = x.product(&y).unwrap().norm();
        prop_assert!((n - x.norm() * y.norm()).abs() < 1e-12 * n.max(1.0));
    }

    #[test]
    fn global_phase_is_invisible(seed in any::<u64>(), theta in -3.1f64..3.1) {
        let x = random_tensor(&[("p", 3), ("q", 2)], seed, 7);
        let y = x.scale(Complex64::from_polar(1.0, theta));
        let cmp = x.equal_up_to_phase(&y, 1e-12).unwrap();
        prop_assert!(cmp.equal);
        let tau = std::f64::consts::TAU;
        let wrapped = (cmp.phase + theta + tau / 2.0).rem_euclid(tau) - tau / 2.0;
        prop_assert!(wrapped.abs() < 1e-9);
        let z = random_tensor(&[("p", 3), ("q", 2)], seed, 8);
        let forward = x.equal_up_to_phase(&z, 0.0).unwrap().error;
        let backward = z.equal_up_to_phase(&x, 0.0).unwrap().error;
        prop_assert!((forward - backward).abs() < 1e-12);
    }

    #[test]
    fn relabel_round_trip(seed in any::<u64>()) {
        let x = random_tensor(&[("p", 2), ("q", 3)], seed, 9);
        let back = x.relabel_many(&[("p", "q"), ("q", "p")]).unwrap()
            .relabel_many(&[("p", "q"), ("q", "p")]).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn double_kets_compose(seed in any::<u64>(), d in 2usize..5) {
        let (u, v) = pair(seed, d, "compose");
        let chained = link(&double_ket(&u, "b", "a"), &double_ket(&v, "c", "b")).unwrap();
        prop_assert!(chained.distance(&double_ket(&(&v * &u), "c", "a")).unwrap() < 1e-12);
        let through_wire = link(&double_ket(&u, "b", "a"), &wire("c", "b", d)).unwrap();
        prop_assert!(through_wire.distance(&double_ket(&u, "c", "a")).unwrap() < 1e-13);
    }

    #[test]
    fn insertions_commute(seed in any::<u64>(), d in 2usize..4) {
        let (ua, ub) = pair(seed, d, "commute");
        let w = build_switch(d).unwrap();
        let ab = insert_gate(&insert_gate(&w, &ua, A_O, A_I).unwrap(), &ub, B_O, B_I).unwrap();
        let ba = insert_gate(&insert_gate(&w, &ub, B_O, B_I).unwrap(), &ua, A_O, A_I).unwrap();
        prop_assert!(ab.distance(&ba).unwrap() < 1e-13);
    }

    #[test]
    fn weyl_basis_resolves_identity(d in 2usize..6) {
        let basis = weyl_basis(d).unwrap();
        let n = d * d;
        let mut acc = Matrix::zeros(n, n);
        for u in basis.elements() {
            let v = Matrix::from_iterator(n, 1, u.iter().cloned());
            acc += &v * v.adjoint();
        }
        let target = linalg::identity(n) * Complex64::new(d as f64, 0.0);
        prop_assert!((acc - target).norm() < 1e-12);
    }

    #[test]
    fn filled_switch_is_unitary(seed in any::<u64>(), d in 2usize..4) {
        let (ua, ub) = pair(seed, d, "unitary");
        let m = switch::induced_map(&fill(&build_switch(d).unwrap(), &ua, &ub).unwrap()).unwrap();
        prop_assert!(linalg::unitarity_error(&m) < 1e-12);
    }

    #[test]
    fn perspective_change_keeps_born_weights(seed in any::<u64>()) {
        let d = 2;
        let mut rng = sample_rng(seed, "props", "born", 0);
        let ua = haar_unitary(d, &mut rng);
        let ub = haar_unitary(d, &mut rng);
        let ctrl = random_state(2, &mut rng);
        let b = BoundaryData::with_control(random_state(d, &mut rng), random_state(d, &mut rng), [ctrl[0], ctrl[1]]).unwrap();
        let (p, q) = born_weights(&build_j_a_to_b(d).unwrap(), &ua, &ub, &b).unwrap();
        prop_assert!((p - q).abs() < 1e-12);
        prop_assert!(p <= 1.0 + 1e-12);
    }

    #[test]
    fn scaffold_reduces_to_flipped_switch(seed in any::<u64>()) {
        let (ua, ub) = pair(seed, 2, "scaffold");
        prop_assert!(scaffold::reduce_to_switch_error(&ua, &ub).unwrap() < 1e-13);
        prop_assert!(scaffold::composite_error(&ua, &ub).unwrap() < 1e-13);
        prop_assert!(scaffold::gate_fragment_error(&ua, &ub).unwrap() < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn switch_branches_order_gates(seed in any::<u64>(), d in 2usize..4) {
        // Direct oracle: control 0 applies U_B U_A, control 1 applies U_A U_B.
        let (ua, ub) = pair(seed, d, "order");
        let m = switch::induced_map(&fill(&build_switch(d).unwrap(), &ua, &ub).unwrap()).unwrap();
        let mut oracle = Matrix::zeros(2 * d, 2 * d);
        oracle.view_mut((0, 0), (d, d)).copy_from(&(&ub * &ua));
        oracle.view_mut((d, d), (d, d)).copy_from(&(&ua * &ub));
        prop_assert!((m - oracle).norm() < 1e-12);
    }
}
