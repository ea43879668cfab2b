//! Concrete groups, representations, Dowling and Reid geometries, the Fano
//! pair and the 45-element direct sum.
//!
//! Dowling labels are `p1, p2, p3`, then `<g>^(1)` for each group element in
//! group order, then `<g>^(2)`, then `<g>^(3)`; the extended matrix appends `O`.
//! Reid and Fano elements are labelled `1, 2, ...` in column order.

use thiserror::Error;

use crate::field::{FieldError, FieldSpec};
use crate::matrix::MatrixF;
use crate::matroid::{direct_sum, GroundSet, Matroid};
use crate::multilinear::{direct_sum_rep, matroid_from_klinear, KLinearRep};

mod group;
mod rep;

pub use group::GroupTable;
pub use rep::{FixedPoint, GroupRep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("representation is not fixed-point free: `{element}` fixes a nonzero vector")]
    NotFixedPointFree { element: String },
    #[error("characteristic mismatch: p={p} but the field has characteristic {field_char}")]
    CharacteristicMismatch { p: u32, field_char: u32 },
    #[error(transparent)]
    Field(FieldError),
}

/// Labels of `Q_3(G)`: joints, then the three copies of the group.
pub fn dowling_labels(g: &GroupTable) -> Vec<String> {
    let mut names: Vec<String> = ["p1", "p2", "p3"].map(String::from).to_vec();
    for copy in 1..=3 {
        names.extend(g.names().iter().map(|n| format!("{n}^({copy})")));
    }
    names
}

/// The rank-3 Dowling geometry `Q_3(G)`.
///
/// Dependent triples: any three points on one edge `{p1,p2} ∪ G^(1)`,
/// `{p2,p3} ∪ G^(2)`, `{p1,p3} ∪ G^(3)`, and `{a^(1), b^(2), c^(3)}` whenever
/// `b·a·c = e`.
pub fn dowling_q3(g: &GroupTable) -> Matroid {
    let n = g.len();
    let ground = GroundSet::new(dowling_labels(g)).expect("group names are valid labels");
    let copy = |c: usize, a: usize| 3 + c * n + a;
    let edges: [Vec<usize>; 3] = [
        [0, 1]
            .into_iter()
            .chain((0..n).map(|a| copy(0, a)))
            .collect(),
        [1, 2]
            .into_iter()
            .chain((0..n).map(|a| copy(1, a)))
            .collect(),
        [0, 2]
            .into_iter()
            .chain((0..n).map(|a| copy(2, a)))
            .collect(),
    ];
    let mut triples = Vec::new();
    for edge in &edges {
        for (i, &x) in edge.iter().enumerate() {
            for (j, &y) in edge.iter().enumerate().skip(i + 1) {
                for &z in &edge[j + 1..] {
                    triples.push([x, y, z]);
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let c = g.inv(g.mul(b, a));
            triples.push([copy(0, a), copy(1, b), copy(2, c)]);
        }
    }
    Matroid::from_dependent_triples(ground, 3.min(3 + 3 * n), &[], &[], triples)
        .expect("rank cap 3")
}

fn require_fixed_point_free(rep: &GroupRep) -> Result<(), ConstructionError> {
    match rep.fixed_point() {
        None => Ok(()),
        Some(fp) => Err(ConstructionError::NotFixedPointFree {
            element: rep.group().name(fp.element).to_string(),
        }),
    }
}

fn dowling_blocks(rep: &GroupRep) -> Vec<[MatrixF; 3]> {
    let f = rep.field();
    let k = rep.dim();
    let i = MatrixF::identity(f, k);
    let z = MatrixF::zeros(f, k, k);
    let mi = i.neg();
    let mut cols = vec![
        [i.clone(), z.clone(), z.clone()],
        [z.clone(), i.clone(), z.clone()],
        [z.clone(), z.clone(), i.clone()],
    ];
    cols.extend(
        rep.images()
            .iter()
            .map(|r| [mi.clone(), r.clone(), z.clone()]),
    );
    cols.extend(
        rep.images()
            .iter()
            .map(|r| [z.clone(), mi.clone(), r.clone()]),
    );
    cols.extend(
        rep.images()
            .iter()
            .map(|r| [r.clone(), z.clone(), mi.clone()]),
    );
    cols
}

fn assemble(cols: &[[MatrixF; 3]], k: usize, labels: Vec<String>) -> KLinearRep {
    let grid: Vec<Vec<MatrixF>> = (0..3)
        .map(|row| cols.iter().map(|c| c[row].clone()).collect())
        .collect();
    let m = MatrixF::block_assemble(&grid).expect("uniform k x k blocks");
    KLinearRep::new(m, k, GroundSet::new(labels).expect("valid labels")).expect("shape")
}

/// The `3k x (3+3n)k` block matrix `A_ρ` with column blocks `p_i = e_i ⊗ I`,
/// `g^(1) = (-I, ρ(g), 0)`, `g^(2) = (0, -I, ρ(g))`, `g^(3) = (ρ(g), 0, -I)`.
pub fn dowling_rep_matrix(rep: &GroupRep) -> Result<KLinearRep, ConstructionError> {
    require_fixed_point_free(rep)?;
    Ok(assemble(
        &dowling_blocks(rep),
        rep.dim(),
        dowling_labels(rep.group()),
    ))
}

/// `A_ρ` extended by the element `O` with column block `(I, I, I)`.
pub fn qnf_rep_matrix(rep: &GroupRep) -> Result<KLinearRep, ConstructionError> {
    require_fixed_point_free(rep)?;
    let mut cols = dowling_blocks(rep);
    let i = MatrixF::identity(rep.field(), rep.dim());
    cols.push([i.clone(), i.clone(), i]);
    let mut labels = dowling_labels(rep.group());
    labels.push("O".into());
    Ok(assemble(&cols, rep.dim(), labels))
}

/// The Reid matrix `B` with `k x k` identity blocks: `(I,0,0)`, `(0,I,0)`,
/// `(0,0,I)`, `(I,I,0)`, `(I,0,I)`, then `(0,I,cI)` and then `(I,I,cI)` for
/// `c = 1..p-1`.
pub fn reid_rep_matrix(p: u32, k: usize, f: &FieldSpec) -> Result<KLinearRep, ConstructionError> {
    if f.characteristic() != p {
        return Err(ConstructionError::CharacteristicMismatch {
            p,
            field_char: f.characteristic(),
        });
    }
    let i = MatrixF::identity(f, k);
    let z = MatrixF::zeros(f, k, k);
    let c_i = |c: u32| MatrixF::scalar(f, k, &f.from_int(c as i64));
    let mut cols = vec![
        [i.clone(), z.clone(), z.clone()],
        [z.clone(), i.clone(), z.clone()],
        [z.clone(), z.clone(), i.clone()],
        [i.clone(), i.clone(), z.clone()],
        [i.clone(), z.clone(), i.clone()],
    ];
    cols.extend((1..p).map(|c| [z.clone(), i.clone(), c_i(c)]));
    cols.extend((1..p).map(|c| [i.clone(), i.clone(), c_i(c)]));
    let labels = (1..=cols.len()).map(|l| l.to_string()).collect();
    Ok(assemble(&cols, k, labels))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FanoKind {
    Fano,
    NonFano,
}

/// The Fano matroid (Reid matrix for `p = 2` over `GF(2)`) or the non-Fano
/// matroid (columns `e1, e2, e3, e1+e2, e2+e3, e1+e3, e1+e2+e3` over `GF(7)`).
pub fn fano_nonfano(kind: FanoKind) -> Matroid {
    let rep = match kind {
        FanoKind::Fano => {
            reid_rep_matrix(2, 1, &FieldSpec::prime(2).expect("2 is prime")).expect("char 2")
        }
        FanoKind::NonFano => {
            let f = FieldSpec::prime(7).expect("7 is prime");
            let m = MatrixF::from_ints(
                &f,
                &[
                    vec![1, 0, 0, 1, 0, 1, 1],
                    vec![0, 1, 0, 1, 1, 0, 1],
                    vec![0, 0, 1, 0, 1, 1, 1],
                ],
            );
            KLinearRep::new(m, 1, GroundSet::numbered(7)).expect("7 columns")
        }
    };
    matroid_from_klinear(rep).expect("k = 1 is always valid")
}

/// Block-diagonal 2-linear representation of [`counterexample_matroid`]
/// (`12 x 90` over `GF(49)`).
pub fn counterexample_rep() -> KLinearRep {
    let qnf = qnf_rep_matrix(&GroupRep::quaternion_f49()).expect("fixed-point free");
    let reid = reid_rep_matrix(7, 2, &FieldSpec::gf49()).expect("characteristic 7");
    direct_sum_rep(&[qnf, reid]).expect("same field and block size")
}

/// The extended Dowling matroid of the quaternion representation over `GF(49)`
/// summed with the Reid geometry for `p = 7`, `k = 2`, also over `GF(49)`.
pub fn counterexample_matroid() -> Matroid {
    let qnf = qnf_rep_matrix(&GroupRep::quaternion_f49()).expect("fixed-point free");
    let reid = reid_rep_matrix(7, 2, &FieldSpec::gf49()).expect("characteristic 7");
    direct_sum(&[
        matroid_from_klinear(qnf).expect("valid 2-linear representation"),
        matroid_from_klinear(reid).expect("valid 2-linear representation"),
    ])
}
