//! Matrix representations of finite groups and the fixed-point-free test.

use super::{ConstructionError, GroupTable};
use crate::field::{parse_field, FieldElement, FieldSpec};
use crate::matrix::MatrixF;
use crate::text::{column_of, key_value, Lines, ParseError};

/// A homomorphism `G -> GL_k(F)`, one image per group element in group order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRep {
    group: GroupTable,
    field: FieldSpec,
    dim: usize,
    images: Vec<MatrixF>,
}

/// A non-identity element whose image fixes a nonzero vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPoint {
    pub element: usize,
    pub vector: Vec<FieldElement>,
}

impl GroupRep {
    /// Checks shapes, `ρ(e) = I`, invertibility and `ρ(g)ρ(h) = ρ(gh)` for all pairs.
    pub fn new(group: GroupTable, images: Vec<MatrixF>) -> Result<Self, ConstructionError> {
        let bad = |s: String| Err(ConstructionError::InvalidRepresentation(s));
        if images.len() != group.len() {
            return bad(format!(
                "{} images for {} group elements",
                images.len(),
                group.len()
            ));
        }
        let field = images[0].field().clone();
        let dim = images[0].rows();
        for (a, m) in images.iter().enumerate() {
            if m.field() != &field {
                return bad(format!(
                    "image of `{}` is over another field",
                    group.name(a)
                ));
            }
            if m.rows() != dim || m.cols() != dim {
                return bad(format!("image of `{}` is not {dim} x {dim}", group.name(a)));
            }
            if m.rank() != dim {
                return bad(format!("image of `{}` is singular", group.name(a)));
            }
        }
        if images[0] != MatrixF::identity(&field, dim) {
            return bad("identity does not map to I".into());
        }
        for a in 0..group.len() {
            for b in 0..group.len() {
                let prod = images[a].mul(&images[b]).expect("shapes checked");
                if prod != images[group.mul(a, b)] {
                    return bad(format!(
                        "not a homomorphism at ({}, {})",
                        group.name(a),
                        group.name(b)
                    ));
                }
            }
        }
        Ok(Self {
            group,
            field,
            dim,
            images,
        })
    }

    /// `g^a -> diag(ζ^(a c_1), ..., ζ^(a c_d))` for the cyclic group of order `m`.
    pub fn cyclic_diagonal(
        m: usize,
        zeta: &FieldElement,
        exponents: &[u64],
    ) -> Result<Self, ConstructionError> {
        let field = zeta.field().clone();
        let d = exponents.len();
        let images = (0..m as u64)
            .map(|a| {
                let mut img = MatrixF::zeros(&field, d, d);
                for (i, &c) in exponents.iter().enumerate() {
                    img.set(i, i, &zeta.pow(a * c)).expect("same field");
                }
                img
            })
            .collect();
        Self::new(GroupTable::cyclic(m), images)
    }

    /// The 2-dimensional representation of `Q_8` with `ζ` the canonical fourth
    /// root of unity of `field`:
    /// `i -> diag(ζ, -ζ)`, `j -> [[0,-1],[1,0]]`, `k -> [[0,-ζ],[-ζ,0]]`.
    pub fn quaternion(field: &FieldSpec) -> Result<Self, ConstructionError> {
        let zeta = field.root_of_unity(4).map_err(ConstructionError::Field)?;
        let z = zeta.code();
        let nz = field.neg_code(z);
        let one = field.one().code();
        let m1 = field.neg_code(one);
        let i = MatrixF::from_codes(field, 2, 2, vec![z, 0, 0, nz]);
        let j = MatrixF::from_codes(field, 2, 2, vec![0, m1, one, 0]);
        let k = MatrixF::from_codes(field, 2, 2, vec![0, nz, nz, 0]);
        let id = MatrixF::identity(field, 2);
        let images = [id, i, j, k]
            .into_iter()
            .flat_map(|m| [m.clone(), m.neg()])
            .collect();
        Self::new(GroupTable::quaternion(), images)
    }

    /// The quaternion representation over `GF(49) = F_7[t]/(t^2+1)`.
    pub fn quaternion_f49() -> Self {
        Self::quaternion(&FieldSpec::gf49()).expect("GF(49) has fourth roots of unity")
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image(&self, a: usize) -> &MatrixF {
        &self.images[a]
    }

    pub fn images(&self) -> &[MatrixF] {
        &self.images
    }

    /// First non-identity element (in group order) with eigenvalue 1, if any.
    pub fn fixed_point(&self) -> Option<FixedPoint> {
        let id = MatrixF::identity(&self.field, self.dim);
        (1..self.group.len()).find_map(|a| {
            let d = self.images[a].sub(&id).expect("same shape");
            d.kernel().into_iter().next().map(|v| FixedPoint {
                element: a,
                vector: v.into_iter().map(|c| self.field.element(c)).collect(),
            })
        })
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.fixed_point().is_none()
    }

    /// `grouprep dim=<k> over <field>`, the group file, then one matrix per element.
    pub fn to_text(&self) -> String {
        let mut s = format!("grouprep dim={} over {}\n", self.dim, self.field);
        s.push_str(&self.group.to_text());
        for m in &self.images {
            s.push_str(&m.to_text());
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(text);
        let what = "`grouprep dim=<k> over <field>`";
        let (ln, header) = lines.next_line(what)?;
        let rest = header
            .strip_prefix("grouprep ")
            .ok_or_else(|| ParseError::expected(ln, 1, what))?;
        let (dim_tok, rest) = rest.split_once(' ').unwrap_or((rest, ""));
        let dim_s = key_value(dim_tok, "dim", ln, column_of(header, dim_tok))?;
        let dim: usize = dim_s
            .parse()
            .map_err(|_| ParseError::expected(ln, column_of(header, dim_s), "dimension"))?;
        let field_text = rest
            .strip_prefix("over ")
            .ok_or_else(|| ParseError::expected(ln, column_of(header, rest), "`over <field>`"))?;
        let field =
            parse_field(field_text).map_err(|e| e.at(ln, column_of(header, field_text) - 1))?;
        let group = GroupTable::parse_lines(&mut lines)?;
        let mut images = Vec::with_capacity(group.len());
        for a in 0..group.len() {
            let at = lines.peek_line().map(|(n, _)| n).unwrap_or(ln);
            let m = MatrixF::parse_lines(&mut lines)?;
            if m.field() != &field || m.rows() != dim || m.cols() != dim {
                return Err(ParseError::invalid(
                    at,
                    1,
                    format!(
                        "image of `{}` must be {dim} x {dim} over {field}",
                        group.name(a)
                    ),
                ));
            }
            images.push(m);
        }
        lines.finish()?;
        Self::new(group, images).map_err(|e| ParseError::invalid(ln, 1, e.to_string()))
    }
}
