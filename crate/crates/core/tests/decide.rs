mod support;

use num_traits::Zero;
use orbilat::exact::{rat, Int, IntMatrix, Rat, RatMatrix};
use orbilat::isometry::LatticeIsometry;
use orbilat::lattice::Lattice;
use orbilat::leech::{coinvariant_class, ClassTag, DEFAULT_SEED};
use orbilat::orbifold::decide::{cosets_with_roots, invariant_sublattices, Witness};
use orbilat::orbifold::{decide_extra, Branch};

fn sqrt2_e8() -> Lattice {
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for i in 0..7 {
        let mut r = vec![Rat::zero(); 8];
        r[i] = rat(1, 1);
        r[i + 1] = rat(-1, 1);
        rows.push(r);
    }
    let mut r = vec![Rat::zero(); 8];
    r[6] = rat(1, 1);
    r[7] = rat(1, 1);
    rows.push(r);
    rows.push(vec![rat(1, 2); 8]);
    Lattice::span(&RatMatrix::from_rows(rows, 8).unwrap(), rat(2, 1))
}

#[test]
fn scaled_e8_with_minus_one_takes_binary_branch() {
    let l = sqrt2_e8();
    assert_eq!(l.rank(), 8);
    assert_eq!(l.det(), rat(256, 1));
    let minus = LatticeIsometry::new(l.clone(), IntMatrix::identity(8).scale(&Int::from(-1))).unwrap();
    let v = decide_extra(&l, &minus).unwrap();
    assert!(v.has_extra);
    assert_eq!(v.branch, Branch::BinaryConstruction);
    match v.witness {
        Witness::BinaryCoset { coset_roots, .. } => assert_eq!(coset_roots, 16),
        other => panic!("unexpected witness {other:?}"),
    }
}

#[test]
fn norm_two_cosets_of_scaled_e8_are_the_frames() {
    // 120 classes of E8/2E8 hold roots, 135 hold norm-4 frames.
    let l = sqrt2_e8();
    assert_eq!(cosets_with_roots(&l, 2).unwrap(), 135);
}

fn qualifying_count(l: &Lattice, g: &LatticeIsometry, p: u64) -> usize {
    support::cosets::qualifying_cosets(l, g, p).len()
}

#[test]
fn control_sublattice_has_no_extra_automorphism() {
    let c = coinvariant_class(ClassTag::B3, DEFAULT_SEED).unwrap();
    let subs = invariant_sublattices(&c.coinvariant, &c.isometry).unwrap();
    assert_eq!(subs.len(), 364);
    let m = &subs[0];
    let g = c.isometry.restrict(m).unwrap();
    assert!(m.is_even() && m.is_rootless().unwrap());
    assert!(g.is_fixed_point_free());
    assert_eq!(g.order(), 3);
    assert_eq!(m.discriminant_group().unwrap().label(), "Z_3^6 x Z_9");
    let v = decide_extra(m, &g).unwrap();
    assert!(!v.has_extra);
    assert_eq!(v.branch, Branch::None);
    assert_eq!(qualifying_count(m, &g, 3), 0);
}

#[test]
fn oracle_agrees_on_the_coinvariant_itself() {
    let c = coinvariant_class(ClassTag::B3, DEFAULT_SEED).unwrap();
    assert!(qualifying_count(&c.coinvariant, &c.isometry, 3) > 0);
    assert!(decide_extra(&c.coinvariant, &c.isometry).unwrap().has_extra);
}

#[test]
fn fixed_points_are_rejected() {
    let l = sqrt2_e8();
    let id = LatticeIsometry::identity(l.clone());
    assert!(decide_extra(&l, &id).is_err());
}
