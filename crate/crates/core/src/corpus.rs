//! The shipped corpus: every displayed matrix, pinned to its published
//! basis ordering, with machine re-verification against the canonical
//! constructors.
//!
//! Variable indexing is zero-based (`x0..xn`); displays published with
//! one-based labels are shifted accordingly.

use crate::error::{Error, Result};
use crate::ideals::FormSpace;
use crate::model::LinearFormMatrix;
use crate::parse::{parse_linear, parse_poly};
use crate::poly::{Alphabet, Poly};
use crate::scalar::{Field, Scalar};

/// A corpus entry: a pinned matrix with its provenance.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub label: &'static str,
    pub description: &'static str,
    pub n: usize,
    pub claimed_rank: usize,
    pub matrix: LinearFormMatrix,
}

fn grid(field: Field, n: usize, rows: &[&str], param: Option<&Scalar>) -> Result<LinearFormMatrix> {
    let parsed: Vec<Vec<Poly>> = rows
        .iter()
        .map(|row| {
            row.split(',')
                .map(|cell| parse_linear(field, n, cell.trim(), param))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let r = parsed.len();
    let c = parsed[0].len();
    if parsed.iter().any(|row| row.len() != c) {
        return Err(Error::invalid("ragged display grid"));
    }
    let mut m = LinearFormMatrix::zero(field, n, r, c);
    for (i, row) in parsed.iter().enumerate() {
        for (j, form) in row.iter().enumerate() {
            m.set_entry(i, j, form);
        }
    }
    Ok(m)
}

fn forms(field: Field, n: usize, c: u32, basis: &[&str]) -> Result<FormSpace> {
    FormSpace::new(
        n,
        c,
        basis
            .iter()
            .map(|s| parse_poly(field, Alphabet::Dual, n, s, None))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// The 5x10 contraction matrix of the quotient bundle on P^4.
pub fn m_quot(field: Field) -> CorpusEntry {
    CorpusEntry {
        label: "m_quot",
        description: "quotient bundle Q on P4: V against wedge2 V-dual, constant rank 4",
        n: 4,
        claimed_rank: 4,
        matrix: crate::model::quotient_model(field, 4).matrix().clone(),
    }
}

/// The 5x5 skew matrix of constant rank four (three skew forms in five
/// variables with a rank-three wedge relation).
pub fn m_drez(field: Field) -> CorpusEntry {
    let rows = [
        "0,    x0,  0,   0,   x2",
        "-x0,  0,   x1,  x2,  0",
        "0,   -x1,  0,   x0,  0",
        "0,   -x2, -x0,  0,   x1",
        "-x2,  0,   0,  -x1,  0",
    ];
    CorpusEntry {
        label: "m_drez",
        description: "rank-four skew 5x5 from the nondegenerate-conic syzygy bundle on P2",
        n: 2,
        claimed_rank: 4,
        matrix: grid(field, 2, &rows, None).expect("pinned display"),
    }
}

/// The conic-apolar form space `H` with its published basis order.
pub fn conic_h_space(field: Field) -> FormSpace {
    forms(field, 2, 2, &["x0*x1 - x2^2", "x0*x2", "x1*x2", "x0^2", "x1^2"]).expect("conic basis")
}

/// The 5x5 syzygy matrix of the conic-apolar space, constant rank four.
pub fn conic_h(field: Field) -> CorpusEntry {
    let rows = [
        "x0,  x2,  0,  -x1,  0",
        "x1,  0,   x2,  0,  -x0",
        "0,   x0,  0,  -x2,  0",
        "0,   x1, -x0,  0,   0",
        "0,   0,   x1,  0,  -x2",
    ];
    CorpusEntry {
        label: "conic_h",
        description: "syzygies of the conic-apolar quadric space on P2, constant rank 4",
        n: 2,
        claimed_rank: 4,
        matrix: grid(field, 2, &rows, None).expect("pinned display"),
    }
}

/// Full quadric space on P2 (rows) against its eight syzygies (columns):
/// the universal 6x8 of constant rank five.
pub fn universal_drezet(field: Field) -> CorpusEntry {
    let rows = [
        "-x1, -x2,  0,   0,   0,   0,   0,   0",
        "0,    0,   x0,  0,  -x2,  0,   0,   0",
        "0,    0,   0,   x0,  0,   x1,  0,   0",
        "x0,   0,  -x1,  0,   0,   0,  -x2,  x2",
        "0,    x0,  0,  -x2,  0,   0,   0,  -x1",
        "0,    0,   0,   0,   x1, -x2,  x0,  0",
    ];
    CorpusEntry {
        label: "universal_drezet",
        description: "universal quadric syzygy pairing on P2 (rows x0^2,x1^2,x2^2,x0x1,x0x2,x1x2), constant rank 5",
        n: 2,
        claimed_rank: 5,
        matrix: grid(field, 2, &rows, None).expect("pinned display"),
    }
}

/// Row basis of the universal display, in its published order.
pub fn universal_drezet_rows(field: Field) -> FormSpace {
    forms(field, 2, 2, &["x0^2", "x1^2", "x2^2", "x0*x1", "x0*x2", "x1*x2"]).expect("basis")
}

/// The degenerate rank-one space: a 6x5 matrix of bounded rank four whose
/// only drop point is the first coordinate point.
pub fn h2_bounded(field: Field) -> CorpusEntry {
    let rows = [
        "x0,  0,  -x1,  0,   0",
        "x2,  0,   0,  -x1,  0",
        "0,   x0,  0,   0,  -x2",
        "0,   x1,  0,  -x2,  0",
        "0,   0,   x2, -x0,  0",
        "0,   0,   x2,  0,  -x1",
    ];
    CorpusEntry {
        label: "h2_6x5",
        description: "syzygies over the rank-one-degenerate quadric space (columns x1^2,x2^2,x0x1,x1x2,x0x2); bounded rank 4, drop at [1:0:0]",
        n: 2,
        claimed_rank: 4,
        matrix: grid(field, 2, &rows, None).expect("pinned display"),
    }
}

/// Column basis of the bounded 6x5 display.
pub fn h2_space(field: Field) -> FormSpace {
    forms(field, 2, 2, &["x1^2", "x2^2", "x0*x1", "x1*x2", "x0*x2"]).expect("basis")
}

/// The diagonal-pencil form space on P3 for a parameter `t`.
pub fn pencil_space(field: Field, t: &Scalar) -> FormSpace {
    let q0 = format!(
        "x0^2 + {}*x2^2 - x3^2",
        t.to_coeff_string()
    );
    let basis = [
        "x0*x1".to_string(),
        "x0*x2".to_string(),
        "x0*x3".to_string(),
        "x1*x2".to_string(),
        "x1*x3".to_string(),
        "x2*x3".to_string(),
        q0,
        "x1^2 - x2^2 + x3^2".to_string(),
    ];
    let polys: Vec<Poly> = basis
        .iter()
        .map(|s| parse_poly(field, Alphabet::Dual, 3, s, None).expect("pencil basis"))
        .collect();
    FormSpace::new(3, 2, polys).expect("independent")
}

/// The 12x8 syzygy matrix of the diagonal pencil on P3, constant rank 7
/// for parameters outside {0, 1}.
///
/// The second published row reads `x_2 Q_13 - x_1 Q_14`, which is not a
/// relation; the corpus pins the intended syzygy `x_2 Q_13 - x_1 Q_23`.
pub fn pencil(field: Field, t: &Scalar) -> CorpusEntry {
    let rows = [
        "x2,  -x1,   0,    0,    0,    0,        0,   0",
        "0,    x1,   0,   -x0,   0,    0,        0,   0",
        "x3,   0,   -x1,   0,    0,    0,        0,   0",
        "0,    0,    x1,   0,   -x0,   0,        0,   0",
        "0,    x3,  -x2,   0,    0,    0,        0,   0",
        "0,    0,    x2,   0,    0,   -x0,       0,   0",
        "0,    0,    0,    x3,  -x2,   0,        0,   0",
        "0,    0,    0,    0,    x2,  -x1,       0,   0",
        "-x1,  x2,  -x3,   0,    0,    0,        0,   x0",
        "-x0,  0,    0,   -T*x2, x3,   0,        x1,  0",
        "0,   -x0,   0,   -T*x1, 0,    (1-T)*x3, x2,  T*x2",
        "0,    0,   -x0,   0,   -x1,   (1-T)*x2, x3,  x3",
    ];
    CorpusEntry {
        label: "pencil_12x8",
        description: "syzygies of the diagonal quadric pencil on P3 (columns x0x1,x0x2,x0x3,x1x2,x1x3,x2x3,Q0,Q1), constant rank 7 for T outside {0,1}",
        n: 3,
        claimed_rank: 7,
        matrix: grid(field, 3, &rows, Some(t)).expect("pinned display"),
    }
}

/// The 10x10 castling matrix of the twisted cubic, constant rank 7.
///
/// Three published rows carry sign slips against the published kernel
/// basis itself (the printed matrix evaluates to rank 8 at `[1:1:0:0]`);
/// rows 5, 6 and 10 below are the exact pairings of the published kernel
/// tensors.
pub fn twisted_cubic(field: Field) -> CorpusEntry {
    let rows = [
        "x3,  -x2,   0,    0,    0,    0,    0,    0,    0,    0",
        "0,    0,    x3,   0,    0,   -x0,   0,    0,    0,    0",
        "0,    0,    0,    0,    0,    0,    x1,  -x0,   0,    0",
        "0,    0,    x1,  -x0,   0,    0,   -x2,   0,    x0,   0",
        "0,   -x1,   0,    0,   -x3,   x2,   0,    0,    0,    0",
        "-x0,  0,    0,   -x2,   x1,   0,    0,    x3,   0,   -x1",
        "0,    0,    x2,   0,   -x0,   0,   -x3,   0,    0,    x0",
        "0,   -x0,   0,   -x3,   0,    x1,   0,    0,    0,    0",
        "0,    0,    0,    0,    0,    0,   -x3,   x2,  -x1,   x0",
        "x1,  -x0,   0,    0,    0,    0,    0,    0,   -x3,   x2",
    ];
    CorpusEntry {
        label: "twisted_cubic",
        description: "castled presentation of the twisted cubic (Hankel pencil), 10x10 of constant rank 7",
        n: 3,
        claimed_rank: 7,
        matrix: grid(field, 3, &rows, None).expect("pinned display"),
    }
}

/// The Hankel pencil tensors presenting the twisted cubic.
pub fn twisted_cubic_tensors(field: Field) -> Vec<crate::linalg::Matrix> {
    vec![
        crate::linalg::Matrix::from_i64_rows(
            field,
            &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]],
        ),
        crate::linalg::Matrix::from_i64_rows(
            field,
            &[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]],
        ),
    ]
}

/// The symmetric 10x10 exterior-square pairing on P4, constant rank 6.
pub fn wedge2q(field: Field) -> CorpusEntry {
    CorpusEntry {
        label: "wedge2q_10x10",
        description: "exterior square of the quotient bundle on P4: the wedge pairing, constant rank 6",
        n: 4,
        claimed_rank: 6,
        matrix: crate::model::wedge2q_model(field).matrix().clone(),
    }
}

/// The published form of the exterior-square display, for the regression
/// diff against the constructor.
pub fn wedge2q_display(field: Field) -> LinearFormMatrix {
    let rows = [
        "0,   0,   0,   0,   0,   0,   0,   x4,  -x3,  x2",
        "0,   0,   0,   0,   0,  -x4,  x3,  0,   0,   -x1",
        "0,   0,   0,   0,   x4,  0,  -x2,  0,   x1,   0",
        "0,   0,   0,   0,  -x3,  x2,  0,  -x1,  0,    0",
        "0,   0,   x4, -x3,  0,   0,   0,   0,   0,    x0",
        "0,  -x4,  0,   x2,  0,   0,   0,   0,  -x0,   0",
        "0,   x3, -x2,  0,   0,   0,   0,   x0,  0,    0",
        "x4,  0,   0,  -x1,  0,   0,   x0,  0,   0,    0",
        "-x3, 0,   x1,  0,   0,  -x0,  0,   0,   0,    0",
        "x2, -x1,  0,   0,   x0,  0,   0,   0,   0,    0",
    ];
    grid(field, 4, &rows, None).expect("pinned display")
}

/// The plane quartic used for the Pfaffian example.
pub fn quartic_form(field: Field) -> Poly {
    parse_poly(field, Alphabet::Primal, 2, "e0^3*e1 + e1^3*e2 + e2^3*e0", None).expect("quartic")
}

/// The apolar cubics of the quartic, in the published column order of the
/// skew display.
///
/// The published column labels transpose two of the generators; the order
/// consistent with the displayed entries (every row a syzygy, the matrix
/// skew) is `A_2, A_0, A_1, B_0, B_1, B_2, E`.
pub fn quartic_space(field: Field) -> FormSpace {
    forms(
        field,
        2,
        3,
        &[
            "x2^3 - x0^2*x1", // A2
            "x0^3 - x1^2*x2", // A0
            "x1^3 - x2^2*x0", // A1
            "x0^2*x2",        // B0
            "x1^2*x0",        // B1
            "x2^2*x1",        // B2
            "x0*x1*x2",       // E
        ],
    )
    .expect("quartic-apolar basis")
}

/// The 7x7 skew matrix of constant rank 6 attached to the plane quartic.
pub fn quartic_skew(field: Field) -> CorpusEntry {
    let rows = [
        "0,   0,   0,   x1,  0,   0,  -x0",
        "0,   0,   0,   0,   x2,  0,  -x1",
        "0,   0,   0,   0,   0,   x0, -x2",
        "-x1, 0,   0,   0,  -x0,  x2,  0",
        "0,  -x2,  0,   x0,  0,  -x1,  0",
        "0,   0,  -x0, -x2,  x1,  0,   0",
        "x0,  x1,  x2,  0,   0,   0,   0",
    ];
    CorpusEntry {
        label: "quartic_7x7",
        description: "skew syzygy matrix of the cubics apolar to a plane quartic, constant rank 6 (Pfaffian family)",
        n: 2,
        claimed_rank: 6,
        matrix: grid(field, 2, &rows, None).expect("pinned display"),
    }
}

/// The mixed-extension 8x8 of constant rank 6 on P2.
pub fn mixed(field: Field) -> CorpusEntry {
    let rows = [
        "0,   x2, -x1,  0,   0,   0,   0,   0",
        "-x2, 0,   x0,  0,   0,  -x1,  0,   0",
        "x1, -x0,  0,   0,   x2,  0,   0,   0",
        "0,   0,   0,   x1,  0,   0,  -x0,  0",
        "0,   0,   0,   x2,  0,   0,   0,  -x0",
        "0,   0,   0,   0,   x0,  0,  -x1,  0",
        "0,   0,   0,   0,   0,   x0,  0,  -x2",
        "0,   0,   0,   0,   0,   0,   x2, -x1",
    ];
    CorpusEntry {
        label: "mixed_8x8",
        description: "extension of the quotient bundle by a degenerate syzygy bundle on P2, constant rank 6",
        n: 2,
        claimed_rank: 6,
        matrix: grid(field, 2, &rows, None).expect("pinned display"),
    }
}

/// Column basis of the mixed display inside `V^v + S^2 V^v`: pairs
/// `(linear part, quadric part)`.
pub fn mixed_columns(field: Field) -> Vec<(Poly, Poly)> {
    let pairs = [
        ("x0", "-x1*x2"),
        ("x1", "0"),
        ("x2", "0"),
        ("0", "x0^2"),
        ("0", "x1^2"),
        ("0", "x2^2"),
        ("0", "x0*x1"),
        ("0", "x0*x2"),
    ];
    pairs
        .iter()
        .map(|(l, q)| {
            let lin = if *l == "0" {
                Poly::zero(field, Alphabet::Dual, 2, 1)
            } else {
                parse_poly(field, Alphabet::Dual, 2, l, None).expect("linear part")
            };
            let quad = if *q == "0" {
                Poly::zero(field, Alphabet::Dual, 2, 2)
            } else {
                parse_poly(field, Alphabet::Dual, 2, q, None).expect("quadric part")
            };
            (lin, quad)
        })
        .collect()
}

/// The explicit net-of-quadrics form space on P3 (seven quadrics).
pub fn net_space(field: Field) -> FormSpace {
    forms(
        field,
        3,
        2,
        &[
            "x0^2 + x1^2 - x3^2", // Q0
            "x0^2 - x2^2 + x3^2", // Q1
            "x0*x1",              // A
            "x1*x2",              // B
            "x2*x3",              // C
            "x0*x2 - x0*x3",      // D
            "x0*x3 - x1*x3",      // E
        ],
    )
    .expect("net basis")
}

/// The 8x7 syzygy matrix of the net of quadrics, constant rank 6.
///
/// The last published entry reads `2x_0 + x_1`; the syzygy identity forces
/// `x_1 - 2x_0`, which is what the corpus pins.
pub fn net(field: Field) -> CorpusEntry {
    let rows = [
        "0,   0,   x2,      -x0,   0,      0,        0",
        "0,   0,   0,        x3,  -x1,     0,        0",
        "0,   0,   x3 - x2,  0,    0,      x1,       0",
        "0,   0,   0,        0,    x1-x0,  0,        x2",
        "x0, -x0, -x1,       0,    x0,    -x2-2*x3,  0",
        "0,   x1, -x0,       x2,  -x0,     x3,       x3",
        "x2,  0,  -x3,      -x1,   x3,    -x0,      -x0",
        "x3,  x3, -x2-2*x3,  0,    x2,     x1,       x1-2*x0",
    ];
    CorpusEntry {
        label: "net_7x8",
        description: "syzygies of an explicit net-of-quadrics complement on P3, constant rank 6 (instanton family)",
        n: 3,
        claimed_rank: 6,
        matrix: grid(field, 3, &rows, None).expect("pinned display"),
    }
}

/// The square-free quadric space on P3 whose matrix has bounded rank 5
/// with drops at the four coordinate points.
pub fn fermat_space(field: Field) -> FormSpace {
    forms(field, 3, 2, &["x0*x1", "x0*x2", "x0*x3", "x1*x2", "x1*x3", "x2*x3"]).expect("basis")
}

/// The 8x6 square-free-quadric matrix of generic rank 5.
pub fn fermat(field: Field) -> CorpusEntry {
    let rows = [
        "0,   -x1,  0,    x0,   0,    0",
        "x2,   0,   0,   -x0,   0,    0",
        "x3,   0,  -x1,   0,    0,    0",
        "-x3,  0,   0,    0,    x0,   0",
        "0,   -x3,  x2,   0,    0,    0",
        "0,    0,  -x2,   0,    0,    x0",
        "0,    0,   0,    0,   -x2,   x1",
        "0,    0,   0,    x3,   0,   -x1",
    ];
    CorpusEntry {
        label: "fermat_6x8",
        description: "syzygies of the square-free quadrics on P3: bounded rank 5, drops at the four coordinate points",
        n: 3,
        claimed_rank: 5,
        matrix: grid(field, 3, &rows, None).expect("pinned display"),
    }
}

/// Labels of the constant-rank corpus (criterion by certification).
pub fn constant_rank_entries(field: Field) -> Vec<CorpusEntry> {
    let five = field.from_i64(5);
    vec![
        m_drez(field),
        m_quot(field),
        conic_h(field),
        universal_drezet(field),
        pencil(field, &five),
        twisted_cubic(field),
        wedge2q(field),
        quartic_skew(field),
        mixed(field),
        net(field),
    ]
}

/// The bounded-rank corpus entries.
pub fn bounded_rank_entries(field: Field) -> Vec<CorpusEntry> {
    vec![fermat(field), h2_bounded(field)]
}

/// Every corpus entry, constant and bounded, at the default parameter.
pub fn all_entries(field: Field) -> Vec<CorpusEntry> {
    let mut v = constant_rank_entries(field);
    v.extend(bounded_rank_entries(field));
    v
}

/// Checks that each row of a syzygy-style display is a genuine relation of
/// the given column basis.
pub fn verify_syzygy_rows(entry: &CorpusEntry, columns: &FormSpace) -> Result<()> {
    let m = &entry.matrix;
    if m.cols != columns.dim() {
        return Err(Error::invalid("column count does not match the basis"));
    }
    for i in 0..m.rows {
        let mut acc = Poly::zero(m.field, Alphabet::Dual, m.n, columns.c + 1);
        for j in 0..m.cols {
            acc = acc.add(&m.entry(i, j).mul(&columns.basis()[j])?)?;
        }
        if !acc.is_zero() {
            return Err(Error::invalid(format!(
                "row {i} of {} is not a syzygy of the pinned basis",
                entry.label
            )));
        }
    }
    Ok(())
}

/// Checks that each column of a sections-by-syzygies display is a genuine
/// relation of the given row basis.
pub fn verify_syzygy_cols(entry: &CorpusEntry, rows: &FormSpace) -> Result<()> {
    let m = &entry.matrix;
    if m.rows != rows.dim() {
        return Err(Error::invalid("row count does not match the basis"));
    }
    for j in 0..m.cols {
        let mut acc = Poly::zero(m.field, Alphabet::Dual, m.n, rows.c + 1);
        for i in 0..m.rows {
            acc = acc.add(&m.entry(i, j).mul(&rows.basis()[i])?)?;
        }
        if !acc.is_zero() {
            return Err(Error::invalid(format!(
                "column {j} of {} is not a syzygy of the pinned basis",
                entry.label
            )));
        }
    }
    Ok(())
}

/// Flattens matrix rows to coefficient vectors, for row-space comparisons
/// against canonical constructions.
pub fn row_space(m: &LinearFormMatrix) -> crate::linalg::Subspace {
    let nv = m.n + 1;
    let rows: Vec<Vec<Scalar>> = (0..m.rows)
        .map(|i| {
            let mut v = Vec::with_capacity(m.cols * nv);
            for j in 0..m.cols {
                for k in 0..nv {
                    v.push(m.coeff_at(i, j, k).clone());
                }
            }
            v
        })
        .collect();
    crate::linalg::Subspace::from_rows(m.field, m.cols * nv, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::{is_ordinary, syz1};
    use crate::model::{
        castled_model, drezet_model, mixed_model, pfaffian_kernel_vector, pfaffian_verify,
    };

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn syzygy_displays_verify() {
        verify_syzygy_rows(&conic_h(q()), &conic_h_space(q())).unwrap();
        verify_syzygy_rows(&h2_bounded(q()), &h2_space(q())).unwrap();
        verify_syzygy_rows(&quartic_skew(q()), &quartic_space(q())).unwrap();
        verify_syzygy_rows(&net(q()), &net_space(q())).unwrap();
        verify_syzygy_rows(&fermat(q()), &fermat_space(q())).unwrap();
        let five = q().from_i64(5);
        verify_syzygy_rows(&pencil(q(), &five), &pencil_space(q(), &five)).unwrap();
        verify_syzygy_cols(&universal_drezet(q()), &universal_drezet_rows(q())).unwrap();
    }

    #[test]
    fn displays_span_the_canonical_syzygy_spaces() {
        // Row spaces of the displays equal the canonical drezet models.
        for (entry, space) in [
            (conic_h(q()), conic_h_space(q())),
            (h2_bounded(q()), h2_space(q())),
            (quartic_skew(q()), quartic_space(q())),
            (net(q()), net_space(q())),
            (fermat(q()), fermat_space(q())),
        ] {
            let model = drezet_model(&space, true).unwrap();
            assert_eq!(
                row_space(&entry.matrix),
                row_space(model.matrix()),
                "display {} spans a different syzygy space",
                entry.label
            );
        }
        let five = q().from_i64(5);
        let p = pencil_space(q(), &five);
        let model = drezet_model(&p, false).unwrap();
        assert_eq!(row_space(&pencil(q(), &five).matrix), row_space(model.matrix()));
        assert_eq!(syz1(&p).dim(), 12);
    }

    #[test]
    fn twisted_cubic_display_matches_castling() {
        let model = castled_model(q(), 3, 3, &twisted_cubic_tensors(q())).unwrap();
        let entry = twisted_cubic(q());
        // The display rows are the kernel side; the constructor stores the
        // same pairing with rows on the kernel side as well.
        assert_eq!(row_space(&entry.matrix), row_space(model.matrix()));
    }

    #[test]
    fn wedge2q_display_matches_constructor() {
        assert_eq!(wedge2q(q()).matrix, wedge2q_display(q()));
    }

    #[test]
    fn quartic_display_is_skew_pfaffian() {
        let entry = quartic_skew(q());
        assert!(entry.matrix.is_skew_symmetric());
        let p = quartic_space(q());
        assert!(pfaffian_verify(&entry.matrix, &p).unwrap());
        // The apolar space of the quartic equals the pinned basis span.
        let ap = crate::model::apolar_space(&quartic_form(q()), 3).unwrap();
        assert_eq!(ap.as_subspace(), p.as_subspace());
        // Kernel identity M * pf = 0.
        let pf = pfaffian_kernel_vector(&entry.matrix).unwrap();
        for i in 0..7 {
            let mut acc = Poly::zero(q(), Alphabet::Dual, 2, 4);
            for j in 0..7 {
                acc = acc.add(&entry.matrix.entry(i, j).mul(&pf[j]).unwrap()).unwrap();
            }
            assert!(acc.is_zero(), "kernel identity fails at row {i}");
        }
        // Not ordinary, with one missing cubic direction.
        let (ord, h1) = is_ordinary(&p);
        assert!(!ord);
        assert_eq!(h1, 1);
    }

    #[test]
    fn mixed_display_rows_are_relations() {
        let entry = mixed(q());
        let cols = mixed_columns(q());
        for i in 0..8 {
            let mut lin = Poly::zero(q(), Alphabet::Dual, 2, 2);
            let mut quad = Poly::zero(q(), Alphabet::Dual, 2, 3);
            for (j, (l, qd)) in cols.iter().enumerate() {
                let entry_form = entry.matrix.entry(i, j);
                if !l.is_zero() {
                    lin = lin.add(&entry_form.mul(l).unwrap()).unwrap();
                }
                if !qd.is_zero() {
                    quad = quad.add(&entry_form.mul(qd).unwrap()).unwrap();
                }
            }
            assert!(lin.is_zero() && quad.is_zero(), "row {i} fails");
        }
        // The display spans the same syzygies as the constructor.
        let a0 = [q().one(), q().zero(), q().zero()];
        let q0 = parse_poly(q(), Alphabet::Primal, 2, "e1*e2", None).unwrap();
        let model = mixed_model(&a0, &q0).unwrap();
        assert_eq!((model.matrix().rows, model.matrix().cols), (8, 8));
    }
}
