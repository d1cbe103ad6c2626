use topocodes::builders::{build, Family, LatticeSpec};
use topocodes::gf2::BitVec;
use topocodes::stab::{
    check_constraints, code_for, codespace_check, colored_string, commutes, distance, multiply, transversal_check,
    Gate, PauliKind, PauliOp, StabilizerCode,
};
use topocodes::Color;

fn code(f: Family, s: usize) -> StabilizerCode {
    code_for(&build(&LatticeSpec::new(f, s)).unwrap()).unwrap()
}

#[test]
fn single_qubit_anticommutation() {
    let x = PauliOp::x_on(3, &[1]);
    let z = PauliOp::z_on(3, &[1]);
    assert!(!commutes(&x, &z).unwrap());
    assert!(commutes(&x, &PauliOp::z_on(3, &[2])).unwrap());
    assert!(commutes(&x, &PauliOp::z_on(4, &[2])).is_err());
    // XZ = -iY, and (XZ)(ZX) = 1
    let xz = multiply(&x, &z).unwrap();
    let zx = multiply(&z, &x).unwrap();
    assert_eq!((xz.alpha + 4 - zx.alpha) % 4, 2);
    assert!(multiply(&xz, &zx).unwrap().is_identity());
}

#[test]
fn toric_generators_commute() {
    let c = code(Family::Toric, 4);
    assert_eq!((c.n, c.k()), (32, 2));
    for f in c.hx.rows() {
        for v in c.hz.rows() {
            assert!(PauliOp::x_type(f.clone()).commutes(&PauliOp::z_type(v.clone())));
        }
    }
    for g in c.generators() {
        assert!(c.in_normalizer(&g).unwrap());
        assert!(c.in_stabilizer(&g).unwrap());
    }
}

#[test]
fn toric_logicals_pair_up() {
    for d in [2, 3, 5, 8] {
        let c = code(Family::Toric, d);
        assert_eq!((c.n, c.k()), (2 * d * d, 2));
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(c.logical_x[i].commutes(&c.logical_z[j]), i != j, "d={d} pair ({i},{j})");
            }
            assert!(c.in_normalizer(&c.logical_x[i]).unwrap());
            assert!(!c.in_stabilizer(&c.logical_x[i]).unwrap());
            // X logicals are cycles of the lattice, Z logicals cycles of the dual
            assert!(c.lattice.is_cycle(&c.logical_x[i].x).unwrap());
        }
    }
}

#[test]
fn non_cycles_leave_the_normalizer() {
    let c = code(Family::Toric, 3);
    let x = PauliOp::x_on(c.n, &[0, 1]);
    assert!(!c.lattice.is_cycle(&x.x).unwrap());
    assert!(!c.in_normalizer(&x).unwrap());
}

#[test]
fn sphere_and_planar_parameters() {
    assert_eq!(code(Family::SurfaceWithHoles, 1).k(), 0);
    assert_eq!(code(Family::SurfaceWithHoles, 3).k(), 0);
    let p = code(Family::PlanarToric, 7);
    assert_eq!((p.n, p.k()), (85, 1));
    assert_eq!(distance(&p, 0).unwrap().distance(), Some(7));
}

#[test]
fn constraint_counts() {
    let t = check_constraints(&code(Family::Toric, 3)).unwrap();
    assert!(t.ok);
    assert_eq!(t.relations.len(), 2);
    assert_eq!(t.independent, 9 + 9 - 2);
    let h = check_constraints(&code(Family::HoneycombTorus, 4)).unwrap();
    assert!(h.ok);
    assert_eq!(h.relations.len(), 4);
    assert_eq!(h.independent, 2 * 48 - 4);
    assert!(check_constraints(&code(Family::PlanarToric, 3)).is_err());
}

#[test]
fn color_code_parameters() {
    let h = code(Family::HoneycombTorus, 4);
    assert_eq!((h.n, h.k()), (96, 4));
    assert_eq!(h.k(), h.k_by_rank());
    let t = code(Family::Triangular488, 9);
    assert_eq!((t.n, t.k()), (73, 1));
    for d in [3, 5] {
        let c = code(Family::Triangular666, d);
        assert_eq!(c.k(), 1);
        // one string-net class: same support, anticommuting
        assert_eq!(c.logical_x[0].x, c.logical_z[0].z);
        assert!(!c.logical_x[0].commutes(&c.logical_z[0]));
    }
}

#[test]
fn honeycomb_logicals_use_two_colors() {
    let h = code(Family::HoneycombTorus, 2);
    assert_eq!(h.k(), 4);
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(h.logical_x[i].commutes(&h.logical_z[j]), i != j);
        }
        assert!(h.in_normalizer(&h.logical_x[i]).unwrap());
        assert!(!h.in_stabilizer(&h.logical_z[i]).unwrap());
    }
}

fn face_loop(c: &StabilizerCode, f: usize) -> Vec<usize> {
    c.lattice.faces[f].clone()
}

#[test]
fn colored_strings_on_face_boundaries() {
    let h = code(Family::HoneycombTorus, 2);
    let colors = h.lattice.face_colors.clone().unwrap();
    for f in 0..h.lattice.nf() {
        let path = face_loop(&h, f);
        let mut prod = PauliOp::identity(h.n);
        for col in [Color::R, Color::G, Color::B] {
            let s = colored_string(&h, &path, col, PauliKind::X).unwrap();
            // trivial loops are stabilizers
            assert!(h.in_stabilizer(&s).unwrap());
            if col == colors[f] {
                assert!(s.is_identity());
            }
            prod = prod.multiply(&s);
        }
        assert!(prod.is_identity());
    }
}

#[test]
fn colored_strings_around_the_torus() {
    let h = code(Family::HoneycombTorus, 2);
    let reps = h.lattice.homology().unwrap().h1_reps;
    let (a, b) = (reps[0].support(), reps[1].support());
    let xb = colored_string(&h, &a, Color::B, PauliKind::X).unwrap();
    let xg = colored_string(&h, &a, Color::G, PauliKind::X).unwrap();
    let xr = colored_string(&h, &a, Color::R, PauliKind::X).unwrap();
    assert!(xb.multiply(&xg).multiply(&xr).is_identity());
    assert!(!h.in_stabilizer(&xb).unwrap());

    let zb = colored_string(&h, &b, Color::B, PauliKind::Z).unwrap();
    let zg = colored_string(&h, &b, Color::G, PauliKind::Z).unwrap();
    assert!(xb.commutes(&zb));
    assert!(!xb.commutes(&zg));

    // a homologous loop differs by a stabilizer
    let shifted_chain = reps[0].xor(&h.lattice.boundary_maps().unwrap().d2.column(0));
    let shifted = colored_string(&h, &shifted_chain.support(), Color::B, PauliKind::X).unwrap();
    assert!(h.in_stabilizer(&shifted.multiply(&xb)).unwrap());

    // an open path is rejected on a closed lattice
    assert!(colored_string(&h, &a[..1], Color::B, PauliKind::X).is_err());
    assert!(colored_string(&code(Family::Toric, 2), &[0], Color::B, PauliKind::X).is_err());
}

#[test]
fn distances() {
    let t = distance(&code(Family::Toric, 8), 0).unwrap();
    assert!(t.exact);
    assert_eq!(t.distance(), Some(8));
    assert_eq!(t.witness.as_ref().unwrap().weight(), 8);

    let c = code(Family::Triangular666, 3);
    let r = distance(&c, 3).unwrap();
    assert_eq!(r.distance(), Some(3));
    let w = r.witness.unwrap();
    assert!(c.in_normalizer(&w).unwrap() && !c.in_stabilizer(&w).unwrap());
    // every Pauli of weight <= 2 is detectable or trivial
    for a in 0..c.n {
        for b in a..c.n {
            for pa in 1..4u8 {
                for pb in 1..4u8 {
                    let mut x = BitVec::zeros(c.n);
                    let mut z = BitVec::zeros(c.n);
                    for (q, p) in [(a, pa), (b, pb)] {
                        if p & 1 == 1 {
                            x.flip(q);
                        }
                        if p & 2 == 2 {
                            z.flip(q);
                        }
                    }
                    let op = PauliOp::from_parts(x, z);
                    if c.in_normalizer(&op).unwrap() {
                        assert!(c.in_stabilizer(&op).unwrap() || op.is_identity());
                    }
                }
            }
        }
    }

    let big = distance(&code(Family::Triangular488, 9), 4).unwrap();
    assert!(!big.exact);
    assert_eq!(big.lower_bound, 5);
    assert_eq!(big.upper_bound, Some(9));
}

#[test]
fn codespace_enumeration() {
    let r = codespace_check(&code(Family::Toric, 2)).unwrap();
    assert!(r.ok);
    assert_eq!((r.chains, r.cycles, r.classes), (256, 32, 4));
    assert_eq!(r.annihilated, 256 - 32);
    let s = codespace_check(&code(Family::SurfaceWithHoles, 1)).unwrap();
    assert!(s.ok);
    assert_eq!(s.classes, 1);
    assert!(codespace_check(&code(Family::Toric, 4)).is_err());
}

#[test]
fn transversal_gates() {
    let t = transversal_check(&code(Family::Toric, 3), Gate::HAll).unwrap();
    assert_eq!(t.matches_dual, Some(true));

    let h = transversal_check(&code(Family::HoneycombTorus, 2), Gate::PAll).unwrap();
    assert!(!h.preserved);
    assert!(!h.failures.is_empty());
    assert!(h.failures.iter().all(|f| f.size == 6 && f.sign == -1));

    let c = code(Family::Triangular666, 3);
    let hh = transversal_check(&c, Gate::HAll).unwrap();
    assert!(hh.preserved);
    assert_eq!(hh.logical_action.as_deref(), Some("H"));

    let t3 = transversal_check(&code(Family::Triangular488, 3), Gate::PAll).unwrap();
    assert!(t3.preserved);
    assert_eq!(t3.logical_x_weight.map(|w| w % 2), Some(1));
    assert!(t3.logical_action.is_some());

    for f in [Family::Toric, Family::Triangular666] {
        let cn = transversal_check(&code(f, 3), Gate::CnotPairwise).unwrap();
        assert!(cn.preserved);
        assert_eq!(cn.logical_action.as_deref(), Some("CNOT"));
    }
}

#[test]
fn code_json_has_checks() {
    let c = code(Family::PlanarToric, 3);
    let v = c.to_json();
    assert_eq!(v["n"], 13);
    assert_eq!(v["k"], 1);
    assert_eq!(v["x_checks"].as_array().unwrap().len(), c.hx.nrows());
    assert_eq!(c.check_matrix_text().lines().count(), c.hx.nrows() + c.hz.nrows());
}
