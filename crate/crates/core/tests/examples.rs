//! Worked examples with known answers, one test per operation.

use algmat::constructions::{
    counterexample_matroid, dowling_q3, dowling_rep_matrix, fano_nonfano, qnf_rep_matrix,
    reid_rep_matrix, FanoKind, GroupRep, GroupTable,
};
use algmat::derivation::{
    bounded_dependence, derivation_matroid, frobenius_shift, gradient_matrix, DerivationError,
    PolyAssignment, Polynomial,
};
use algmat::field::{parse_field, ReducibleWitness};
use algmat::matroid::{check_rank_axioms, is_isomorphic, line_saturate, LineFamily, ViolationKind};
use algmat::multilinear::{matroid_from_klinear, search_rank3_rep, validate_klinear};
use algmat::{
    direct_sum, FieldError, FieldSpec, GroundSet, KLinearRep, MatrixError, MatrixF, Matroid,
};

fn f7() -> FieldSpec {
    FieldSpec::prime(7).unwrap()
}

fn qnf() -> Matroid {
    matroid_from_klinear(qnf_rep_matrix(&GroupRep::quaternion_f49()).unwrap()).unwrap()
}

fn six() -> PolyAssignment {
    PolyAssignment::from_strs(
        3,
        3,
        &[
            "x1",
            "x2^3",
            "x3",
            "x1 + x2^3",
            "x1 + x3",
            "x1 + x2^3 + 2*x3",
        ],
    )
    .unwrap()
}

fn pi1() -> PolyAssignment {
    PolyAssignment::from_strs(3, 2, &["x1", "x2", "x1 + x2"]).unwrap()
}

#[test]
fn field_construction() {
    let f = FieldSpec::new(7, &[0, 1]).unwrap();
    assert_eq!(f.order(), 7);
    assert_eq!(FieldSpec::new(7, &[1, 0, 1]).unwrap().order(), 49);
    match FieldSpec::new(7, &[5, 0, 1]) {
        Err(FieldError::ReducibleModulus { witness, .. }) => {
            assert_eq!(witness, ReducibleWitness::Root(3))
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse_field("GF(6)").map_err(|e| e.kind),
        Err(algmat::ParseErrorKind::Field(
            FieldError::NonPrimeCharacteristic(6)
        ))
    ));
}

#[test]
fn field_arithmetic() {
    let f = f7();
    assert_eq!(f.from_int(3).add(&f.from_int(5)).unwrap(), f.one());
    let g = FieldSpec::gf49();
    let t = g.gen();
    assert_eq!(t.mul(&t).unwrap(), g.from_int(6));
    let six_t = g.from_int(6).mul(&t).unwrap();
    assert_eq!(t.inv().unwrap(), six_t);
}

#[test]
fn roots_of_unity() {
    assert_eq!(
        FieldSpec::gf49().root_of_unity(4).unwrap(),
        FieldSpec::gf49().gen()
    );
    assert!(matches!(
        f7().root_of_unity(4),
        Err(FieldError::NoSuchRoot { .. })
    ));
    let f5 = FieldSpec::prime(5).unwrap();
    assert_eq!(f5.root_of_unity(4).unwrap(), f5.from_int(2));
}

#[test]
fn frobenius_on_elements() {
    let f = f7();
    for a in f.elements() {
        assert_eq!(a.frobenius_power(1), a);
    }
    let g = FieldSpec::gf49();
    let t = g.gen();
    assert_eq!(t.frobenius_power(1), g.from_int(6).mul(&t).unwrap());
    assert_eq!(t.frobenius_power(0), t);
}

#[test]
fn ranks_and_determinants() {
    let g = FieldSpec::gf49();
    assert_eq!(MatrixF::identity(&f7(), 6).rank(), 6);
    let i = MatrixF::identity(&g, 2);
    let z = MatrixF::zeros(&g, 2, 2);
    let m = MatrixF::block_assemble(&[
        vec![i.clone(), z.clone(), i.clone()],
        vec![z.clone(), i.clone(), i.clone()],
        vec![z.clone(), z.clone(), i.clone()],
    ])
    .unwrap();
    assert_eq!(m.rank(), 6);

    let rho = GroupRep::quaternion_f49();
    let q8 = rho.group();
    let (e, me, j, k) = (0, 1, 4, 6);
    let minus_minus_e = q8.mul(q8.mul(e, me), me);
    assert_eq!(
        rho.image(e).sub(rho.image(minus_minus_e)).unwrap().rank(),
        0
    );
    let s = i.add(rho.image(j)).unwrap().add(rho.image(k)).unwrap();
    // 1 + j + k has coordinates (1, 0, 1, 1) and norm 3
    let norm: i64 = [1i64, 0, 1, 1].iter().map(|x| x * x).sum();
    assert_eq!(s.determinant().unwrap(), g.from_int(norm));
    assert_eq!(norm, 3);
    assert_eq!(i.determinant().unwrap(), g.one());
    for img in rho.images() {
        assert_eq!(img.determinant().unwrap(), g.one());
    }
}

#[test]
fn block_assembly() {
    let g = FieldSpec::gf49();
    let rep = qnf_rep_matrix(&GroupRep::quaternion_f49()).unwrap();
    assert_eq!((rep.matrix().rows(), rep.matrix().cols()), (6, 56));
    let i = MatrixF::identity(&g, 2);
    assert_eq!(MatrixF::block_assemble(&[vec![i.clone()]]).unwrap(), i);
    let wide = MatrixF::zeros(&g, 2, 3);
    assert!(matches!(
        MatrixF::block_assemble(&[vec![i.clone(), i.clone()], vec![wide, i]]),
        Err(MatrixError::RaggedBlocks(_))
    ));
}

#[test]
fn matroid_ranks() {
    let c = counterexample_matroid();
    let all: Vec<usize> = (0..c.len()).collect();
    assert_eq!(c.rank(&all), 6);
    assert_eq!(c.rank(&[]), 0);
    assert_eq!(qnf().rank_of(&["p1", "-e^(2)", "O"]).unwrap(), 2);
}

#[test]
fn axiom_checker() {
    let u23 = Matroid::uniform(2, GroundSet::numbered(3));
    assert!(check_rank_axioms(&u23, 3).passed());
    let bad = Matroid::from_oracle(GroundSet::new(["a", "b"]).unwrap(), |s: &[usize]| {
        match s.len() {
            0 => 0,
            1 => 1,
            _ => 3,
        }
    });
    let v = check_rank_axioms(&bad, 2).violation.unwrap();
    assert_eq!(
        (v.kind, v.set, v.e),
        (ViolationKind::UnitIncrease, vec![0], Some(1))
    );
    let c2 = dowling_q3(&GroupTable::cyclic(2));
    assert!(check_rank_axioms(&c2, 9).passed());
}

#[test]
fn minors() {
    let q = dowling_q3(&GroupTable::quaternion());
    assert!(qnf().delete(&["O"]).unwrap().same_as(&q));
    let u23 = Matroid::uniform(2, GroundSet::numbered(3));
    let u22 = Matroid::uniform(2, GroundSet::numbered(2));
    assert!(u23.restrict(&["1", "2"]).unwrap().same_as(&u22));
    let c = dowling_q3(&GroupTable::trivial())
        .contract(&["p1"])
        .unwrap();
    assert_eq!((c.len(), c.full_rank()), (5, 2));
}

#[test]
fn direct_sums() {
    let r7 = matroid_from_klinear(reid_rep_matrix(7, 1, &f7()).unwrap()).unwrap();
    let s = direct_sum(&[qnf(), r7]);
    assert_eq!((s.len(), s.full_rank()), (45, 6));
    let f = fano_nonfano(FanoKind::Fano);
    assert!(direct_sum(&[f.clone(), Matroid::empty()]).same_as(&f));
}

#[test]
fn simplification() {
    let d = derivation_matroid(&six()).simplification_data();
    assert_eq!(d.loops, vec![1]);
    assert_eq!(
        d.nontrivial_classes().cloned().collect::<Vec<_>>(),
        vec![vec![0, 3]]
    );
    let n = fano_nonfano(FanoKind::NonFano).simplification_data();
    assert!(n.loops.is_empty() && n.nontrivial_classes().count() == 0);
    let pi2 = frobenius_shift(&pi1(), &[0, 0, 1]).unwrap();
    assert_eq!(
        derivation_matroid(&pi2).simplification_data().loops,
        vec![2]
    );
}

#[test]
fn triple_counts() {
    assert_eq!(
        dowling_q3(&GroupTable::quaternion())
            .dependent_triples()
            .len(),
        424
    );
    assert_eq!(fano_nonfano(FanoKind::NonFano).dependent_triples().len(), 6);
    assert_eq!(fano_nonfano(FanoKind::Fano).dependent_triples().len(), 7);
    assert_eq!(
        dowling_q3(&GroupTable::trivial()).dependent_triples().len(),
        4
    );
    assert_eq!(
        dowling_q3(&GroupTable::cyclic(2)).dependent_triples().len(),
        16
    );
}

#[test]
fn isomorphisms() {
    let labels = ["p1", "p2", "p3", "-e^(1)", "-e^(2)", "-e^(3)", "O"];
    let minor = qnf().restrict(&labels).unwrap();
    let non = fano_nonfano(FanoKind::NonFano);
    assert!(is_isomorphic(&minor, &non).is_some());
    let fano = fano_nonfano(FanoKind::Fano);
    assert!(is_isomorphic(&fano, &non).is_none());
    assert_eq!(is_isomorphic(&fano, &fano), Some((0..7).collect()));
}

#[test]
fn saturation() {
    let fam = LineFamily::from_labels(
        GroundSet::numbered(6),
        &[vec!["1", "5", "3"], vec!["4", "6", "3"]],
    )
    .unwrap();
    let sat = line_saturate(&fam, &[(0, 3)]);
    assert_eq!(sat.family.line_labels(), vec![vec!["1", "3", "5", "6"]]);
    assert_eq!(sat.partition[0], vec![0, 3]);
    let apart = LineFamily::from_labels(
        GroundSet::numbered(5),
        &[vec!["1", "2", "3"], vec!["3", "4", "5"]],
    )
    .unwrap();
    assert_eq!(line_saturate(&apart, &[]).family, apart);

    let q = dowling_q3(&GroupTable::cyclic(2));
    let mut fam = LineFamily::from_matroid(&q);
    let added = q.ground().indices(&["e^(1)", "e^(2)", "g^(3)"]).unwrap();
    assert_eq!(q.rank(&added), 3);
    fam.lines.push(added.into_iter().collect());
    assert!(line_saturate(&fam, &[]).family.collinear(&[0, 1, 2]));
}

#[test]
fn validation() {
    assert!(validate_klinear(&qnf_rep_matrix(&GroupRep::quaternion_f49()).unwrap()).is_valid());
    let gf9 = qnf_rep_matrix(&GroupRep::quaternion(&FieldSpec::gf9()).unwrap()).unwrap();
    assert!(!validate_klinear(&gf9).is_valid());
    let any = KLinearRep::new(
        MatrixF::from_ints(&f7(), &[vec![1, 2, 3]]),
        1,
        GroundSet::numbered(3),
    )
    .unwrap();
    assert!(validate_klinear(&any).is_valid());
}

#[test]
fn extraction() {
    let f = f7();
    let c3 = GroupRep::cyclic_diagonal(3, &f.from_int(2), &[1]).unwrap();
    let rep = dowling_rep_matrix(&c3).unwrap();
    assert_eq!((rep.matrix().rows(), rep.matrix().cols()), (3, 12));
    let m = matroid_from_klinear(rep).unwrap();
    assert!(m.same_as(&dowling_q3(&GroupTable::cyclic(3))));
    let q = qnf();
    assert_eq!((q.len(), q.full_rank()), (28, 3));
}

#[test]
fn representability_search() {
    let f2 = FieldSpec::prime(2).unwrap();
    let f3 = FieldSpec::prime(3).unwrap();
    let fano = fano_nonfano(FanoKind::Fano);
    assert!(search_rank3_rep(&fano, &f2).unwrap().is_some());
    assert!(search_rank3_rep(&fano, &f3).unwrap().is_none());
    let found = search_rank3_rep(&fano_nonfano(FanoKind::NonFano), &f3)
        .unwrap()
        .unwrap();
    let back =
        matroid_from_klinear(KLinearRep::new(found, 1, GroundSet::numbered(7)).unwrap()).unwrap();
    assert!(back.same_as(&fano_nonfano(FanoKind::NonFano)));
}

#[test]
fn groups() {
    let q = GroupTable::quaternion();
    assert_eq!(q.len(), 8);
    let (i, j, k) = (
        q.index_of("i").unwrap(),
        q.index_of("j").unwrap(),
        q.index_of("k").unwrap(),
    );
    assert_eq!(q.mul(i, j), k);
    assert_eq!(q.mul(j, i), q.index_of("-k").unwrap());
    let c2 = GroupTable::cyclic(2);
    assert_eq!(c2.names(), ["e", "g"]);
    assert_eq!(c2.mul(1, 1), 0);
    assert_eq!(GroupTable::trivial().names(), ["e"]);
}

#[test]
fn fixed_point_freeness() {
    assert!(GroupRep::quaternion_f49().is_fixed_point_free());
    let f5 = FieldSpec::prime(5).unwrap();
    let faithful = GroupRep::cyclic_diagonal(4, &f5.from_int(2), &[1, 0]).unwrap();
    let fp = faithful.fixed_point().unwrap();
    assert_eq!(fp.vector, vec![f5.zero(), f5.one()]);
    let scalar = GroupRep::cyclic_diagonal(4, &f5.from_int(2), &[1, 1]).unwrap();
    assert!(scalar.is_fixed_point_free());
}

#[test]
fn dowling_counts() {
    for (g, n, t) in [
        (GroupTable::trivial(), 6, 4),
        (GroupTable::cyclic(2), 9, 16),
        (GroupTable::quaternion(), 27, 424),
    ] {
        let m = dowling_q3(&g);
        assert_eq!((m.len(), m.dependent_triples().len()), (n, t));
    }
}

#[test]
fn quaternion_images() {
    let rho = GroupRep::quaternion_f49();
    let g = rho.field().clone();
    let q = rho.group();
    let (i, j, k) = (
        q.index_of("i").unwrap(),
        q.index_of("j").unwrap(),
        q.index_of("k").unwrap(),
    );
    assert_eq!(rho.image(i).mul(rho.image(j)).unwrap(), *rho.image(k));
    let nz = g.gen().neg();
    assert_eq!(
        *rho.image(k),
        MatrixF::from_codes(&g, 2, 2, vec![0, nz.code(), nz.code(), 0])
    );
    assert_eq!(*rho.image(0), MatrixF::identity(&g, 2));
    let me = rho.image(q.index_of("-e").unwrap());
    assert_eq!(me.mul(me).unwrap(), *rho.image(0));
}

#[test]
fn dowling_matrices() {
    let rep = dowling_rep_matrix(&GroupRep::quaternion_f49()).unwrap();
    assert_eq!((rep.matrix().rows(), rep.matrix().cols()), (6, 54));
    let m = matroid_from_klinear(rep).unwrap();
    assert!(m.same_as(&dowling_q3(&GroupTable::quaternion())));

    let f = f7();
    let trivial = GroupRep::cyclic_diagonal(1, &f.one(), &[1]).unwrap();
    let a = dowling_rep_matrix(&trivial).unwrap();
    let expect = MatrixF::from_ints(
        &f,
        &[
            vec![1, 0, 0, -1, 0, 1],
            vec![0, 1, 0, 1, -1, 0],
            vec![0, 0, 1, 0, 1, -1],
        ],
    );
    assert_eq!(*a.matrix(), expect);

    let ext = qnf_rep_matrix(&GroupRep::quaternion_f49()).unwrap();
    assert_eq!(ext.labels().name(27), "O");
    let o = ext
        .matrix()
        .select_columns(&ext.block(27).collect::<Vec<_>>());
    let i = MatrixF::identity(ext.field(), 2);
    assert_eq!(
        o,
        MatrixF::block_assemble(&[vec![i.clone()], vec![i.clone()], vec![i]]).unwrap()
    );
}

#[test]
fn reid_geometries() {
    let b = reid_rep_matrix(7, 1, &f7()).unwrap();
    assert_eq!((b.matrix().rows(), b.matrix().cols()), (3, 17));
    let r7 = matroid_from_klinear(b).unwrap();
    assert_eq!((r7.len(), r7.full_rank()), (17, 3));
    let r7k2 = matroid_from_klinear(reid_rep_matrix(7, 2, &FieldSpec::gf49()).unwrap()).unwrap();
    assert!(r7.same_as(&r7k2));
    let r2 = reid_rep_matrix(2, 1, &FieldSpec::prime(2).unwrap()).unwrap();
    assert_eq!((r2.matrix().rows(), r2.matrix().cols()), (3, 7));
    assert!(matroid_from_klinear(r2)
        .unwrap()
        .same_as(&fano_nonfano(FanoKind::Fano)));
}

#[test]
fn fano_pair() {
    let non = fano_nonfano(FanoKind::NonFano);
    assert_eq!(non.rank_of(&["4", "5", "6"]).unwrap(), 3);
    assert_eq!(fano_nonfano(FanoKind::Fano).len(), 7);
}

#[test]
fn counterexample() {
    let c = counterexample_matroid();
    assert_eq!((c.len(), c.full_rank()), (45, 6));
}

#[test]
fn partial_derivatives() {
    let x2c = Polynomial::parse("x2^3", 3, 3).unwrap();
    assert!(x2c.partial_derivative(1).unwrap().is_zero());
    let f = Polynomial::parse("x1 + x3", 3, 3).unwrap();
    assert_eq!(
        f.partial_derivative(0).unwrap(),
        Polynomial::constant(3, 3, 1)
    );
}

#[test]
fn gradients() {
    let g = gradient_matrix(&six());
    let cols: Vec<String> = (0..6).map(|e| g.column_text(e)).collect();
    assert_eq!(
        cols,
        ["(1,0,0)", "(0,0,0)", "(0,0,1)", "(1,0,0)", "(1,0,1)", "(1,0,2)"]
    );
    let g1 = gradient_matrix(&pi1());
    let cols: Vec<String> = (0..3).map(|e| g1.column_text(e)).collect();
    assert_eq!(cols, ["(1,0)", "(0,1)", "(1,1)"]);
    let consts = PolyAssignment::from_strs(3, 2, &["1", "2"]).unwrap();
    let z = gradient_matrix(&consts).constant_matrix().unwrap();
    assert_eq!(z.rank(), 0);
}

#[test]
fn derivation_matroids() {
    let m = derivation_matroid(&six());
    for set in [&["2"][..], &["1", "4"], &["1", "3", "6"], &["3", "5", "6"]] {
        assert!(m.rank_of(set).unwrap() < set.len(), "{set:?}");
    }
    let u23 = Matroid::uniform(2, GroundSet::numbered(3));
    assert!(derivation_matroid(&pi1()).same_as(&u23));
    let pi2 = PolyAssignment::from_strs(3, 2, &["x1", "x2", "(x1 + x2)^3"]).unwrap();
    assert_eq!(derivation_matroid(&pi2).rank_of(&["3"]).unwrap(), 0);
}

#[test]
fn frobenius_shifts() {
    let pi2 = frobenius_shift(&pi1(), &[0, 0, 1]).unwrap();
    assert_eq!(
        pi2.image(2),
        &Polynomial::parse("(x1 + x2)^3", 3, 2).unwrap()
    );
    assert_eq!(frobenius_shift(&pi1(), &[0, 0, 0]).unwrap(), pi1());
    assert!(matches!(
        frobenius_shift(&pi1(), &[0, 0, -1]),
        Err(DerivationError::NegativeShift { .. })
    ));
}

#[test]
fn annihilators() {
    let fs = ["x1", "x2^3", "x1 + x2^3"].map(|s| Polynomial::parse(s, 3, 2).unwrap());
    let p = bounded_dependence(&fs, 1).unwrap().unwrap();
    assert_eq!(p.display_with("Y"), "Y1 + Y2 + 2*Y3");
    let sq = ["x1", "x1^2"].map(|s| Polynomial::parse(s, 3, 1).unwrap());
    assert_eq!(
        bounded_dependence(&sq, 2)
            .unwrap()
            .unwrap()
            .display_with("Y"),
        "Y1^2 + 2*Y2"
    );
    let free = ["x1", "x2"].map(|s| Polynomial::parse(s, 3, 2).unwrap());
    assert!(bounded_dependence(&free, 3).unwrap().is_none());
}
