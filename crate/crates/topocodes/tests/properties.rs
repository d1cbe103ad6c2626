use proptest::prelude::*;
use topocodes::builders::{build, Family, LatticeSpec};
use topocodes::decode::{adjudicate, ml_decode_exact, outcome, syndrome, ErrorModel, MwpmDecoder};
use topocodes::gf2::{BitMatrix, BitVec};
use topocodes::stab::{code_for, PauliOp, StabilizerCode};

fn code(f: Family, s: usize) -> StabilizerCode {
    code_for(&build(&LatticeSpec::new(f, s)).unwrap()).unwrap()
}

fn bits(n: usize) -> impl Strategy<Value = BitVec> {
    proptest::collection::vec(any::<bool>(), n).prop_map(|b| BitVec::from_bools(&b))
}

fn matrix(r: usize, c: usize) -> impl Strategy<Value = BitMatrix> {
    proptest::collection::vec(bits(c), r).prop_map(move |rows| BitMatrix::from_rows(c, rows))
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix(7, 11)) {
        let ker = m.kernel_basis();
        prop_assert_eq!(m.rank() + ker.len(), 11);
        for k in &ker {
            prop_assert!(m.mul_vec(k).is_zero());
        }
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn solve_inverts_mul(m in matrix(6, 9), x in bits(9)) {
        let b = m.mul_vec(&x);
        let y = m.solve(&b).expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn symplectic_product_is_symmetric(x1 in bits(10), z1 in bits(10), x2 in bits(10), z2 in bits(10)) {
        let a = PauliOp::from_parts(x1, z1);
        let b = PauliOp::from_parts(x2, z2);
        prop_assert_eq!(a.commutes(&b), b.commutes(&a));
        let ab = a.multiply(&b);
        let ba = b.multiply(&a);
        prop_assert!(ab.same_up_to_phase(&ba));
        let rel = (ab.alpha + 4 - ba.alpha) % 4;
        prop_assert_eq!(rel, if a.commutes(&b) { 0 } else { 2 });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matching_reproduces_syndromes(x in bits(85), z in bits(85)) {
        let c = code(Family::PlanarToric, 7);
        let e = PauliOp::from_parts(x, z);
        let s = syndrome(&c, &e).unwrap();
        let corr = MwpmDecoder::new(&c).unwrap().decode(&s).unwrap();
        prop_assert_eq!(syndrome(&c, &corr).unwrap(), s);
        prop_assert!(outcome(&c, &e, &corr).is_ok());
    }

    #[test]
    fn ml_reproduces_syndromes(x in bits(19)) {
        let c = code(Family::Triangular666, 5);
        let model = ErrorModel::new(0.1, 0.1).unwrap();
        let e = PauliOp::x_type(x);
        let s = syndrome(&c, &e).unwrap();
        let r = ml_decode_exact(&c, &s, &model).unwrap();
        prop_assert_eq!(syndrome(&c, &r.correction).unwrap(), s);
    }

    #[test]
    fn adjudication_ignores_stabilizers(x in bits(32), faces in bits(16), stars in bits(16)) {
        let c = code(Family::Toric, 4);
        let e = PauliOp::x_type(x);
        let s = syndrome(&c, &e).unwrap();
        let corr = MwpmDecoder::new(&c).unwrap().decode(&s).unwrap();
        let mut stab = PauliOp::identity(c.n);
        for f in faces.ones_iter() {
            stab = stab.multiply(&PauliOp::x_type(c.hx.row(f).clone()));
        }
        for v in stars.ones_iter() {
            stab = stab.multiply(&PauliOp::z_type(c.hz.row(v).clone()));
        }
        let shifted = corr.multiply(&stab);
        prop_assert_eq!(adjudicate(&c, &e, &corr).unwrap(), adjudicate(&c, &e, &shifted).unwrap());
        // a logical on top of a good correction makes it fail
        if adjudicate(&c, &e, &corr).unwrap() {
            let flipped = corr.multiply(&c.logical_x[0]);
            prop_assert!(!adjudicate(&c, &e, &flipped).unwrap());
        }
    }
}
