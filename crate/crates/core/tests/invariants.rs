//! Property tests for the structural invariants of each module.

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tate_transfer::algebra::{cyclic_table, group_algebra, matrix_algebra, s3_table, trivial_algebra, Algebra, Sym, SymmetricAlgebra, SymmetrisingForm};
use tate_transfer::arith::{Mat, Q};
use tate_transfer::bimodules::{algebra_over_ground, induction_bimodule, matrix_bimodule, Adjunction, Bimodule};
use tate_transfer::cli::{parse_instance, run_tasks, validate};
use tate_transfer::duality::{check_theorem1, phi_form, tate_pairing, Scaling};
use tate_transfer::lattices::{
    hom_space, projective_basis, projective_factoring_subspace, tate_ext, tate_ext_shifted, ExtGroup, Lattice, ShiftTower,
};
use tate_transfer::oracle_matrix::{compare_with_generic, MatrixInstance};

fn cyclic(p: u64, m: usize) -> Sym {
    group_algebra(p, &cyclic_table(m), None, &format!("C{m}")).unwrap()
}

fn s3(p: u64) -> Sym {
    group_algebra(p, &s3_table().0, None, "S3").unwrap()
}

fn trivial(a: &Sym) -> Lattice {
    Lattice::one_dim(a, &vec![Q::one(); a.alg.gens.len()], "triv")
}

fn sign_s3(a: &Sym) -> Lattice {
    let (_, perms) = s3_table();
    let vals = perms.iter().map(|p| {
        let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        Mat::scalar(1, &Q::int(if inv % 2 == 0 { 1 } else { -1 }))
    });
    Lattice::from_basis_actions(a.clone(), vals.collect(), "sgn").unwrap()
}

fn tower(u: &Lattice) -> Arc<ShiftTower> {
    ShiftTower::canonical(u.rebind(&u.alg).unwrap())
}

/// (U, V) pairs with nonzero stable Hom in some degree.
fn lattice_pairs() -> Vec<(Lattice, Lattice)> {
    let c2 = cyclic(2, 2);
    let c3 = cyclic(3, 3);
    let g = s3(3);
    vec![
        (trivial(&c2), trivial(&c2)),
        (trivial(&c3), trivial(&c3)),
        (trivial(&g), sign_s3(&g)),
        (sign_s3(&g), sign_s3(&g)),
        (trivial(&c3), (*tower(&trivial(&c3)).level(1).unwrap()).rebind(&c3).unwrap()),
    ]
}

fn unit_upper(n: usize, entries: &[i64]) -> Mat {
    let mut t = Mat::identity(n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            t.row_mut(i)[j] = Q::int(entries[k % entries.len()]);
            k += 1;
        }
    }
    t
}

/// The same algebra and form written in the basis given by the columns of `t`.
fn change_basis(a: &Sym, t: &Mat) -> Sym {
    let n = a.n();
    let t_inv = t.inverse().unwrap();
    let cols: Vec<Vec<Q>> = (0..n).map(|i| t.col(i)).collect();
    let c: Vec<Vec<Vec<Q>>> = (0..n)
        .map(|i| (0..n).map(|j| t_inv.mul_vec(&a.alg.mul(&cols[i], &cols[j]))).collect())
        .collect();
    let alg = Algebra::from_dense(a.p(), &c, t_inv.mul_vec(&a.alg.unit), "rebased");
    let form = SymmetrisingForm { coeffs: cols.iter().map(|v| a.s(v)).collect() };
    SymmetricAlgebra::new(alg, form).unwrap()
}

fn bimodules() -> Vec<Arc<Bimodule>> {
    let c2 = cyclic(2, 2);
    let c3 = cyclic(3, 3);
    let g = s3(3);
    let h = cyclic(3, 3);
    let ma = matrix_algebra(5, 2).unwrap().rescaled(&Q::int(2)).unwrap();
    let mb = matrix_algebra(5, 1).unwrap().rescaled(&Q::int(3)).unwrap();
    vec![
        Arc::new(algebra_over_ground(&c2, &trivial_algebra(2))),
        Arc::new(algebra_over_ground(&c3, &trivial_algebra(3))),
        Arc::new(induction_bimodule(&g, &h, &[0, 1, 2])),
        Arc::new(matrix_bimodule(&ma, &mb, 2, 1).unwrap()),
    ]
}

fn unit_of(p: u64, k: i64) -> Q {
    let k = k.rem_euclid(8 * p as i64) + 1;
    if k % p as i64 == 0 {
        Q::int(k + 1)
    } else {
        Q::int(k)
    }
}

#[test]
fn adjunction_triangle_identities_and_central_pi() {
    for m in bimodules() {
        let adj = Adjunction::new(m.clone()).unwrap();
        let bad = adj.triangle_failures().unwrap();
        assert!(bad.is_empty(), "{}: {bad:?}", m.name);
        assert!(adj.a().alg.is_central(&adj.pi_m().unwrap()), "{}: π_M not central", m.name);
        assert!(adj.b().alg.is_central(&adj.pi_md().unwrap()), "{}: π_M∨ not central", m.name);
    }
}

#[test]
fn projective_basis_exists_iff_hom_pr_is_everything() {
    let mut cases = Vec::new();
    for a in [cyclic(2, 2), cyclic(2, 3), cyclic(3, 3), s3(3), s3(5)] {
        cases.push(trivial(&a));
        cases.push(Lattice::regular(&a));
        cases.push(Lattice::free(&a, 2));
        cases.push(Lattice::direct_sum(&[&trivial(&a), &Lattice::regular(&a)]));
        let t = tower(&trivial(&a));
        cases.push((*t.level(1).unwrap()).rebind(&a).unwrap());
    }
    let g = s3(2);
    cases.push(sign_s3(&g));
    let mut seen = [false; 2];
    for u in &cases {
        let h = hom_space(u, u).unwrap();
        let pr = projective_factoring_subspace(u, u, &h).unwrap();
        let full = pr.rank() == h.rank() && pr.exps().iter().all(|&e| e == 0);
        assert_eq!(projective_basis(u).is_ok(), full, "{} over {}", u.name, u.alg.name());
        seen[full as usize] = true;
    }
    assert!(seen[0] && seen[1]);
}

#[test]
fn odd_degree_pairing_is_not_vacuous() {
    let (u, v) = &lattice_pairs()[4];
    let (tu, tv) = (tower(u), tower(v));
    let x = ExtGroup::new(&tu, &tv, 1).unwrap();
    let y = ExtGroup::new(&tv, &tu, -1).unwrap();
    let a = &x.generators()[0];
    assert!(y.generators().iter().any(|b| !tate_pairing(a, b).unwrap().is_zero()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn z_is_basis_independent(entries in prop::collection::vec(-4i64..=4, 1..8), which in 0usize..4) {
        let a = match which {
            0 => cyclic(3, 3),
            1 => s3(3),
            2 => matrix_algebra(5, 2).unwrap(),
            _ => cyclic(2, 4),
        };
        let t = unit_upper(a.n(), &entries);
        let b = change_basis(&a, &t);
        prop_assert_eq!(t.mul_vec(&b.z), a.z.clone());
        prop_assert!(b.alg.is_central(&b.z));
    }

    #[test]
    fn dimension_shift_preserves_ext(
        pair in 0usize..5,
        (a, n) in prop::sample::select(vec![-1i32, 1, 2]).prop_flat_map(|a| (Just(a), -2i32..=(3 - a).min(2))),
    ) {
        // Level 4 over S3 is already minutes of work, so the total level stays at most 3.
        let (u, v) = &lattice_pairs()[pair];
        let direct = tate_ext(u, v, n).unwrap();
        let shifted = tate_ext_shifted(&tower(u), &tower(v), a, n).unwrap();
        prop_assert_eq!(direct, shifted);
    }

    #[test]
    fn pairing_ignores_projective_factoring_maps(pair in 0usize..5, n in -1i32..=1, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, v) = &lattice_pairs()[pair];
        let (tu, tv) = (tower(u), tower(v));
        let x = ExtGroup::new(&tu, &tv, n).unwrap();
        let y = ExtGroup::new(&tv, &tu, -n).unwrap();
        let (a, b) = (x.random(&mut rng), y.random(&mut rng));
        let (pa, pb) = (x.random_pr(&mut rng), y.random_pr(&mut rng));
        let base = tate_pairing(&a, &b).unwrap();
        prop_assert_eq!(tate_pairing(&a.add(&pa).unwrap(), &b).unwrap(), base.clone());
        prop_assert_eq!(tate_pairing(&a, &b.add(&pb).unwrap()).unwrap(), base);
    }

    #[test]
    fn pairing_is_bilinear(pair in 0usize..5, n in -1i32..=1, c in -5i64..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, v) = &lattice_pairs()[pair];
        let (tu, tv) = (tower(u), tower(v));
        let x = ExtGroup::new(&tu, &tv, n).unwrap();
        let y = ExtGroup::new(&tv, &tu, -n).unwrap();
        let (a1, a2, b) = (x.random(&mut rng), x.random(&mut rng), y.random(&mut rng));
        let c = Q::int(c);
        let combo = a1.scaled(&c).add(&a2).unwrap();
        let lhs = phi_form(&combo, &b).unwrap();
        let rhs = &(&c * &phi_form(&a1, &b).unwrap()) + &phi_form(&a2, &b).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum = tate_pairing(&a1, &b).unwrap().add(&tate_pairing(&a2, &b).unwrap());
        prop_assert_eq!(tate_pairing(&a1.add(&a2).unwrap(), &b).unwrap(), sum);
    }

    #[test]
    fn pairing_symmetry_carries_degree_sign(pair in 0usize..5, n in -2i32..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, v) = &lattice_pairs()[pair];
        let (tu, tv) = (tower(u), tower(v));
        let x = ExtGroup::new(&tu, &tv, n).unwrap();
        let y = ExtGroup::new(&tv, &tu, -n).unwrap();
        let (a, b) = (x.random(&mut rng), y.random(&mut rng));
        let swapped = tate_pairing(&b, &a).unwrap();
        let expected = if n % 2 == 0 { swapped } else { swapped.neg() };
        prop_assert_eq!(tate_pairing(&a, &b).unwrap(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn theorem1_survives_unit_rescalings(which in 0usize..3, l in any::<i64>(), m in any::<i64>(), n in -1i32..=1, seed in any::<u64>()) {
        let ms = bimodules();
        let bm = &ms[which];
        let p = bm.p();
        let a = bm.left.clone();
        let u = trivial(&a);
        let v = if which == 2 { sign_s3(&a) } else { trivial(&a) };
        let sc = Scaling { lambda: unit_of(p, l), mu: unit_of(p, m) };
        for r in check_theorem1(bm, &u, &v, n, 3, seed, &sc).unwrap() {
            prop_assert!(r.pass, "{} {}: {} vs {}", r.instance, r.relation, r.lhs, r.rhs);
        }
    }

    #[test]
    fn oracle_matches_generic_path(d in 1usize..=3, e in 1usize..=2, l in any::<i64>(), m in any::<i64>()) {
        let p = 7;
        let inst = MatrixInstance::new(d, e, unit_of(p, l), unit_of(p, m)).unwrap();
        for c in compare_with_generic(&inst, p).unwrap() {
            prop_assert!(c.pass, "{}: {} vs {}", c.name, c.lhs, c.rhs);
        }
        let y = Mat::identity(d);
        prop_assert!(inst.check_scaled_transfer(&y).iter().all(|c| c.pass));
    }
}

fn integer_only(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(n) => n.is_u64() || n.is_i64(),
        serde_json::Value::Array(xs) => xs.iter().all(integer_only),
        serde_json::Value::Object(m) => m.values().all(integer_only),
        _ => true,
    }
}

#[test]
fn report_numbers_are_exact() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../instances/c2.json")).unwrap();
    let inst = validate(parse_instance(&text).unwrap()).unwrap();
    let r = run_tasks(&inst, 11);
    assert_eq!(r.exit_code(), 0);
    let v = serde_json::to_value(&r).unwrap();
    assert!(integer_only(&v), "report contains a floating-point number");
    for t in &r.tasks {
        for e in &t.entries {
            assert!(!e.value.contains('.') || e.value.contains(' '), "{}: {}", e.label, e.value);
        }
    }
}
