use criterion::{black_box, criterion_group, criterion_main, Criterion};

use algmat::constructions::{
    dowling_q3, fano_nonfano, qnf_rep_matrix, FanoKind, GroupRep, GroupTable,
};
use algmat::multilinear::{search_rank3_rep, validate_klinear};
use algmat::FieldSpec;

fn validation(c: &mut Criterion) {
    let rep = qnf_rep_matrix(&GroupRep::quaternion_f49()).expect("fixed-point free");
    c.bench_function("validate 2-linear 6x56 over GF(49)", |b| {
        b.iter(|| validate_klinear(black_box(&rep)))
    });
    let bad = qnf_rep_matrix(&GroupRep::quaternion(&FieldSpec::gf9()).expect("has i"))
        .expect("fixed-point free");
    c.bench_function("find witness 6x56 over GF(9)", |b| {
        b.iter(|| validate_klinear(black_box(&bad)))
    });
}

fn ranks(c: &mut Criterion) {
    let rep = qnf_rep_matrix(&GroupRep::quaternion_f49()).expect("fixed-point free");
    let sets: Vec<Vec<usize>> = (0..28)
        .map(|i| (i..28).step_by(5).take(6).collect())
        .collect();
    c.bench_function("column rank of 6-element blocks", |b| {
        b.iter(|| {
            sets.iter()
                .map(|s| rep.column_rank(black_box(s)))
                .sum::<usize>()
        })
    });
}

fn triples(c: &mut Criterion) {
    let q = dowling_q3(&GroupTable::quaternion());
    c.bench_function("dependent triples of Q3(Q8)", |b| {
        b.iter(|| q.dependent_triples().len())
    });
}

fn search(c: &mut Criterion) {
    let c3 = dowling_q3(&GroupTable::cyclic(3));
    let f5 = FieldSpec::prime(5).expect("prime");
    c.bench_function("rank-3 search Q3(C3) over GF(5)", |b| {
        b.iter(|| search_rank3_rep(black_box(&c3), &f5))
    });
    let fano = fano_nonfano(FanoKind::Fano);
    let f3 = FieldSpec::prime(3).expect("prime");
    c.bench_function("rank-3 search Fano over GF(3)", |b| {
        b.iter(|| search_rank3_rep(black_box(&fano), &f3))
    });
}

criterion_group!(benches, validation, ranks, triples, search);
criterion_main!(benches);
