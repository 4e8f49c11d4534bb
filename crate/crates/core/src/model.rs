//! Section models and the constructors for every matrix family: quotient
//! contractions, exterior squares, Drézet syzygy matrices, Pfaffians,
//! mixed extensions, castling presentations, and evaluation-kernel models.

use crate::chern::PresentationClass;
use crate::error::{Error, Result};
use crate::ideals::{base_point_free, syz1, syzygy_forms, BasePointVerdict, FormSpace};
use crate::linalg::{Matrix, Subspace};
use crate::multivector::wedge_basis;
use crate::poly::{monomial_basis, sym_dim, Alphabet, Monomial, Poly};
use crate::scalar::{Field, Scalar};

/// An `a x b` matrix whose entries are linear forms in `n+1` variables,
/// stored as the coefficient tensor `a x b x (n+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormMatrix {
    pub n: usize,
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    coeff: Vec<Scalar>,
}

impl LinearFormMatrix {
    pub fn zero(field: Field, n: usize, rows: usize, cols: usize) -> LinearFormMatrix {
        LinearFormMatrix { n, rows, cols, field, coeff: vec![field.zero(); rows * cols * (n + 1)] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.cols + j) * (self.n + 1) + k
    }

    pub fn coeff_at(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.coeff[self.idx(i, j, k)]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let at = self.idx(i, j, k);
        self.coeff[at] = v;
    }

    pub fn set_entry(&mut self, i: usize, j: usize, form: &Poly) {
        assert_eq!(form.degree(), 1, "entries must be linear forms");
        assert_eq!(form.n, self.n);
        for k in 0..=self.n {
            self.set_coeff(i, j, k, form.coeff(&Monomial::var(self.n, k)));
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Poly {
        let coeffs: Vec<Scalar> = (0..=self.n).map(|k| self.coeff_at(i, j, k).clone()).collect();
        Poly::linear(self.field, Alphabet::Dual, &coeffs)
    }

    /// Builds from integer coefficient tensors (row-major, innermost the
    /// variable index); used for pinned constructions.
    pub fn from_i64_tensor(
        field: Field,
        n: usize,
        rows: usize,
        cols: usize,
        tensor: &[i64],
    ) -> LinearFormMatrix {
        assert_eq!(tensor.len(), rows * cols * (n + 1));
        let mut m = LinearFormMatrix::zero(field, n, rows, cols);
        for (at, &v) in tensor.iter().enumerate() {
            m.coeff[at] = field.from_i64(v);
        }
        m
    }

    /// Scalar matrix at a point.
    pub fn eval_at(&self, point: &[Scalar]) -> Matrix {
        assert_eq!(point.len(), self.n + 1);
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            let mut acc = self.field.zero();
            for k in 0..=self.n {
                let c = self.coeff_at(i, j, k);
                if !c.is_zero() {
                    acc = acc.add(&c.mul(&point[k]));
                }
            }
            acc
        })
    }

    pub fn transpose(&self) -> LinearFormMatrix {
        let mut out = LinearFormMatrix::zero(self.field, self.n, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..=self.n {
                    out.set_coeff(j, i, k, self.coeff_at(i, j, k).clone());
                }
            }
        }
        out
    }

    pub fn is_skew_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..=self.n {
                    if *self.coeff_at(i, j, k) != self.coeff_at(j, i, k).neg() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Integer coefficient view when every coefficient is a small integer
    /// after clearing row denominators; rank at any point is unchanged.
    pub fn integer_view(&self) -> Option<Vec<i64>> {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::{One, Signed};
        let mut out = Vec::with_capacity(self.coeff.len());
        for i in 0..self.rows {
            let mut lcm = BigInt::one();
            for j in 0..self.cols {
                for k in 0..=self.n {
                    match self.coeff_at(i, j, k) {
                        Scalar::Rational(r) => lcm = lcm.lcm(r.denom()),
                        Scalar::Prime { .. } => return None,
                    }
                }
            }
            for j in 0..self.cols {
                for k in 0..=self.n {
                    let r = self.coeff_at(i, j, k).as_rational()?;
                    let v = r.numer() * (&lcm / r.denom());
                    if v.abs() > BigInt::from(i64::MAX / 2) {
                        return None;
                    }
                    out.push(i64::try_from(&v).ok()?);
                }
            }
        }
        Some(out)
    }
}

/// Transformed matrix `R * M * C` from full-rank row/column combinations.
pub fn subselect(
    m: &LinearFormMatrix,
    row_combos: &Matrix,
    col_combos: &Matrix,
) -> Result<LinearFormMatrix> {
    if row_combos.cols != m.rows || col_combos.rows != m.cols {
        return Err(Error::AmbientMismatch(row_combos.cols, m.rows));
    }
    if row_combos.rank() != row_combos.rows {
        return Err(Error::invalid("row combination matrix is rank-deficient"));
    }
    if col_combos.rank() != col_combos.cols {
        return Err(Error::invalid("column combination matrix is rank-deficient"));
    }
    let mut out = LinearFormMatrix::zero(m.field, m.n, row_combos.rows, col_combos.cols);
    for i in 0..out.rows {
        for j in 0..out.cols {
            for k in 0..=m.n {
                let mut acc = m.field.zero();
                for a in 0..m.rows {
                    let r = row_combos.get(i, a);
                    if r.is_zero() {
                        continue;
                    }
                    for b in 0..m.cols {
                        let c = col_combos.get(b, j);
                        if c.is_zero() {
                            continue;
                        }
                        acc = acc.add(&r.mul(m.coeff_at(a, b, k)).mul(c));
                    }
                }
                out.set_coeff(i, j, k, acc);
            }
        }
    }
    Ok(out)
}

/// Which side of the section pairing indexes the rows of the stored matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSide {
    /// Rows are `H^0(E)` (the `m_E` convention).
    SectionsA,
    /// Rows are `H^0(E^v(1))` (syzygy-style constructors).
    SectionsB,
}

/// Bases of `H^0(E)` and `H^0(E^v(1))` with the evaluable pairing into
/// linear forms, plus enough provenance to drive the series calculus and
/// the structural generation checks.
#[derive(Debug, Clone)]
pub struct SectionModel {
    pub n: usize,
    /// Claimed rank of the underlying bundle.
    pub rank: usize,
    pub field: Field,
    pub labels_a: Vec<String>,
    pub labels_b: Vec<String>,
    pub row_side: RowSide,
    pub class: PresentationClass,
    pub source: String,
    matrix: LinearFormMatrix,
    /// Extra payload for evaluation-kernel models: the section space
    /// `Sigma` inside `wedge^2 V^v`.
    pub sigma: Option<Subspace>,
}

impl SectionModel {
    pub fn matrix(&self) -> &LinearFormMatrix {
        &self.matrix
    }

    pub fn dim_a(&self) -> usize {
        self.labels_a.len()
    }

    pub fn dim_b(&self) -> usize {
        self.labels_b.len()
    }

    /// The pairing `m_E(s_i, sigma_j)` regardless of storage orientation.
    pub fn pair(&self, a_index: usize, b_index: usize) -> Poly {
        match self.row_side {
            RowSide::SectionsA => self.matrix.entry(a_index, b_index),
            RowSide::SectionsB => self.matrix.entry(b_index, a_index),
        }
    }

    /// `m_E(s, sigma_j)` for a section `s` given by coordinates in the
    /// `sectionsA` basis.
    pub fn pair_section(&self, s: &[Scalar], b_index: usize) -> Poly {
        assert_eq!(s.len(), self.dim_a());
        let mut acc = Poly::zero(self.field, Alphabet::Dual, self.n, 1);
        for (i, c) in s.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.pair(i, b_index).scale(c)).expect("linear forms");
            }
        }
        acc
    }
}

/// The stored matrix of a model (spec operation `pairing_matrix`).
pub fn pairing_matrix(model: &SectionModel) -> LinearFormMatrix {
    model.matrix.clone()
}

/// The quotient bundle `Q` on `P^n`: sections `V` against `wedge^2 V^v`,
/// paired by the interior product. Rows are `V`, columns the lex pairs.
pub fn quotient_model(field: Field, n: usize) -> SectionModel {
    let pairs = wedge_basis(n, 2);
    let mut m = LinearFormMatrix::zero(field, n, n + 1, pairs.len());
    for k in 0..=n {
        for (col, pair) in pairs.iter().enumerate() {
            let (i, j) = (pair[0], pair[1]);
            if k == i {
                m.set_coeff(k, col, j, field.one());
            } else if k == j {
                m.set_coeff(k, col, i, field.from_i64(-1));
            }
        }
    }
    SectionModel {
        n,
        rank: n,
        field,
        labels_a: (0..=n).map(|k| format!("e{k}")).collect(),
        labels_b: pairs.iter().map(|p| format!("x{}^x{}", p[0], p[1])).collect(),
        row_side: RowSide::SectionsA,
        class: PresentationClass::Quotient { n },
        source: format!("quotient n={n}"),
        matrix: m,
        sigma: None,
    }
}

/// `wedge^2 Q` on `P^4`: the symmetric pairing
/// `wedge^2 V (x) wedge^2 V -> wedge^4 V ~ V^v` in the lex pair basis.
pub fn wedge2q_model(field: Field) -> SectionModel {
    let n = 4;
    let pairs = wedge_basis(n, 2);
    let mut m = LinearFormMatrix::zero(field, n, pairs.len(), pairs.len());
    for (r, pr) in pairs.iter().enumerate() {
        for (c, pc) in pairs.iter().enumerate() {
            let mut all: Vec<usize> = Vec::with_capacity(5);
            all.extend_from_slice(pr);
            all.extend_from_slice(pc);
            let missing: Vec<usize> = (0..=n).filter(|i| !all.contains(i)).collect();
            if missing.len() != 1 {
                continue;
            }
            all.push(missing[0]);
            if let Some(sign) = perm_sign(&all) {
                m.set_coeff(r, c, missing[0], field.from_i64(sign));
            }
        }
    }
    let labels: Vec<String> = pairs.iter().map(|p| format!("e{}^e{}", p[0], p[1])).collect();
    SectionModel {
        n,
        rank: 6,
        field,
        labels_a: labels.clone(),
        labels_b: labels,
        row_side: RowSide::SectionsA,
        class: PresentationClass::Wedge2Q,
        source: "wedge2q".into(),
        matrix: m,
        sigma: None,
    }
}

/// Sign of the permutation taking `idx` to sorted order; `None` on repeats.
fn perm_sign(idx: &[usize]) -> Option<i64> {
    let mut v = idx.to_vec();
    let mut sign = 1i64;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Space of degree-`c` dual forms apolar to a primal form `f`: the kernel
/// of the catalecticant contraction `S^c V^v -> S^{d-c} V`.
pub fn apolar_space(f: &Poly, c: u32) -> Result<FormSpace> {
    if f.alphabet != Alphabet::Primal {
        return Err(Error::AlphabetMismatch { expected: "e", got: "x" });
    }
    let d = f.degree();
    if c < 1 || c > d {
        return Err(Error::invalid("apolar degree must satisfy 1 <= c <= deg f"));
    }
    let n = f.n;
    let field = f.field;
    let source = monomial_basis(n, c);
    let target = monomial_basis(n, d - c);
    let rows: Vec<Vec<Scalar>> = source
        .iter()
        .map(|m| {
            let q = Poly::monomial(field, Alphabet::Dual, n, m.clone(), field.one());
            let res = f.contract_by(&q).expect("degree checked");
            target.iter().map(|t| res.coeff(t)).collect()
        })
        .collect();
    let kernel = Matrix::from_rows(field, rows).transpose().kernel_basis();
    let basis: Vec<Poly> = kernel
        .basis_vectors()
        .into_iter()
        .map(|v| {
            Poly::from_terms(
                field,
                Alphabet::Dual,
                n,
                c,
                source.iter().cloned().zip(v.into_iter()),
            )
            .expect("homogeneous")
        })
        .collect();
    if basis.is_empty() {
        return Err(Error::invalid("apolar space is zero"));
    }
    FormSpace::new(n, c, basis)
}

/// Drézet model: rows are the canonical linear syzygies of `P`, columns
/// the `P` basis; entry `(s, j)` is the `j`-th linear form of syzygy `s`.
///
/// Requires `P` base-point-free unless `allow_base_points` is set, in
/// which case the matrix is only of bounded rank.
pub fn drezet_model(p: &FormSpace, allow_base_points: bool) -> Result<SectionModel> {
    let verdict = base_point_free(p, p.c + 3);
    let mut flag = String::new();
    match &verdict {
        BasePointVerdict::Free { .. } => {}
        BasePointVerdict::BasePoints { witness, .. } => {
            if !allow_base_points {
                let w = witness
                    .as_ref()
                    .map(|w| {
                        w.iter().map(Scalar::to_coeff_string).collect::<Vec<_>>().join(",")
                    })
                    .unwrap_or_else(|| "(irrational locus)".into());
                return Err(Error::invalid(format!(
                    "form space has base points (witness {w}); rank is only bounded"
                )));
            }
            flag = " [base points: bounded rank only]".into();
        }
        BasePointVerdict::Unknown => {
            if !allow_base_points {
                return Err(Error::invalid(
                    "base-point-freeness undecided; pass allow_base_points to proceed",
                ));
            }
            flag = " [base-point status unknown]".into();
        }
    }
    let syz = syz1(p);
    let forms = syzygy_forms(p, &syz);
    let mut m = LinearFormMatrix::zero(p.field, p.n, forms.len(), p.dim());
    for (i, syzygy) in forms.iter().enumerate() {
        for (j, l) in syzygy.iter().enumerate() {
            m.set_entry(i, j, l);
        }
    }
    Ok(SectionModel {
        n: p.n,
        rank: p.dim() - 1,
        field: p.field,
        labels_a: (0..p.dim()).map(|j| format!("P{j}")).collect(),
        labels_b: (0..forms.len()).map(|i| format!("syz{i}")).collect(),
        row_side: RowSide::SectionsB,
        class: PresentationClass::Drezet { n: p.n, c: p.c, e: p.dim() - 1 },
        source: format!("drezet n={} c={} dimP={}{flag}", p.n, p.c, p.dim()),
        matrix: m,
        sigma: None,
    })
}

/// Pfaffian of a skew matrix of polynomial entries (row expansion).
pub fn pfaffian_poly(a: &[Vec<Poly>]) -> Poly {
    let m = a.len();
    assert!(m > 0 && a.iter().all(|r| r.len() == m));
    let field = a[0][0].field;
    let n = a[0][0].n;
    let deg_one = a[0][0].degree();
    if m % 2 == 1 {
        return Poly::zero(field, Alphabet::Dual, n, (deg_one * m as u32) / 2);
    }
    fn rec(a: &[Vec<Poly>], live: &[usize]) -> Poly {
        let field = a[0][0].field;
        let n = a[0][0].n;
        if live.is_empty() {
            let mut one = Poly::zero(field, Alphabet::Dual, n, 0);
            one = one
                .add(&Poly::monomial(field, Alphabet::Dual, n, Monomial::one(n), field.one()))
                .unwrap();
            return one;
        }
        let i = live[0];
        let mut acc: Option<Poly> = None;
        for (pos, &j) in live.iter().enumerate().skip(1) {
            let rest: Vec<usize> =
                live[1..].iter().copied().filter(|&x| x != j).collect();
            let sub = rec(a, &rest);
            let sign = if pos % 2 == 1 { 1 } else { -1 };
            let term = a[i][j].mul(&sub).unwrap().scale(&field.from_i64(sign));
            acc = Some(match acc {
                None => term,
                Some(s) => s.add(&term).unwrap(),
            });
        }
        acc.expect("nonempty expansion")
    }
    rec(a, &(0..m).collect::<Vec<_>>())
}

/// The signed principal sub-Pfaffians of an odd skew matrix of linear
/// forms: entry `i` is `(-1)^i Pf(M with row/column i deleted)`. The signs
/// are fixed so that `M * pf = 0` holds as a polynomial identity.
pub fn pfaffian_kernel_vector(m: &LinearFormMatrix) -> Result<Vec<Poly>> {
    if !m.is_skew_symmetric() {
        return Err(Error::invalid("matrix is not skew-symmetric"));
    }
    if m.rows % 2 == 0 {
        return Err(Error::invalid("kernel Pfaffians need odd size"));
    }
    let entries: Vec<Vec<Poly>> =
        (0..m.rows).map(|i| (0..m.cols).map(|j| m.entry(i, j)).collect()).collect();
    let mut out = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let keep: Vec<usize> = (0..m.rows).filter(|&r| r != i).collect();
        let sub: Vec<Vec<Poly>> = keep
            .iter()
            .map(|&r| keep.iter().map(|&c| entries[r][c].clone()).collect())
            .collect();
        let sign = if i % 2 == 0 { 1 } else { -1 };
        out.push(pfaffian_poly(&sub).scale(&m.field.from_i64(sign)));
    }
    Ok(out)
}

/// Checks that the principal sub-Pfaffians of a skew matrix span exactly
/// the given form space.
pub fn pfaffian_verify(m: &LinearFormMatrix, p: &FormSpace) -> Result<bool> {
    let pf = pfaffian_kernel_vector(m)?;
    let degree = pf[0].degree();
    if degree != p.c {
        return Ok(false);
    }
    let dim = sym_dim(p.n, p.c);
    let span = Subspace::from_rows(
        m.field,
        dim,
        pf.iter().map(Poly::coeff_vec).collect(),
    );
    Ok(span == p.as_subspace())
}

/// Mixed extension on `P^2`: `A = (a_0, q_0)^perp` inside `V^v + S^2 V^v`,
/// with rows the linear syzygies of `A` and columns the `A` basis.
pub fn mixed_model(a0: &[Scalar], q0: &Poly) -> Result<SectionModel> {
    let n = 2usize;
    if a0.len() != n + 1 || q0.n != n {
        return Err(Error::AmbientMismatch(a0.len(), n + 1));
    }
    if q0.alphabet != Alphabet::Primal || q0.degree() != 2 {
        return Err(Error::invalid("q0 must be a primal quadric"));
    }
    let field = q0.field;
    let q0_rank = quadric_rank(q0);
    if q0_rank == 0 {
        return Err(Error::invalid("q0 is zero"));
    }
    let mut flags = Vec::new();
    if q0_rank == 1 {
        flags.push("q0 rank one: twisted dual not globally generated".to_string());
    }
    if a0_in_span(a0, q0) {
        flags.push("a0 in span(q0): extension splits".to_string());
    }
    // A = orthogonal of (a0, q0) in V^v + S^2 V^v under the contraction pairing.
    let vdim = n + 1;
    let mons2 = monomial_basis(n, 2);
    let ambient = vdim + mons2.len();
    let mut pairing_row = Vec::with_capacity(ambient);
    for k in 0..vdim {
        pairing_row.push(a0[k].clone());
    }
    for m in &mons2 {
        let q = Poly::monomial(field, Alphabet::Dual, n, m.clone(), field.one());
        let v = q0.contract_by(&q).expect("full contraction");
        pairing_row.push(if v.is_zero() { field.zero() } else { v.coeff(&Monomial::one(n)) });
    }
    let a_space = Matrix::from_rows(field, vec![pairing_row]).kernel_basis();
    let a_basis = a_space.basis_vectors();
    let adim = a_basis.len();

    // Linear syzygies of A: (l_i) with sum l_i lambda_i = 0 and
    // sum l_i kappa_i = 0, inside A (x) V^v.
    let mons3 = monomial_basis(n, 3);
    let target_cols = mons2.len() + mons3.len();
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(adim * vdim);
    for elem in &a_basis {
        let lambda = Poly::linear(field, Alphabet::Dual, &elem[..vdim]);
        let kappa = Poly::from_terms(
            field,
            Alphabet::Dual,
            n,
            2,
            mons2.iter().cloned().zip(elem[vdim..].iter().cloned()),
        )
        .expect("homogeneous");
        for v in 0..vdim {
            let x = Poly::monomial(field, Alphabet::Dual, n, Monomial::var(n, v), field.one());
            let p2 = lambda.mul(&x).expect("same alphabet");
            let p3 = kappa.mul(&x).expect("same alphabet");
            let mut row = Vec::with_capacity(target_cols);
            for m in &mons2 {
                row.push(p2.coeff(m));
            }
            for m in &mons3 {
                row.push(p3.coeff(m));
            }
            rows.push(row);
        }
    }
    let syz = Matrix::from_rows(field, rows).transpose().kernel_basis();
    let mut m = LinearFormMatrix::zero(field, n, syz.dim(), adim);
    for (i, s) in syz.basis_vectors().iter().enumerate() {
        for j in 0..adim {
            let l = Poly::linear(field, Alphabet::Dual, &s[j * vdim..(j + 1) * vdim]);
            m.set_entry(i, j, &l);
        }
    }
    let mut source = format!("mixed a0/q0 rank {q0_rank}");
    for f in &flags {
        source.push_str(&format!(" [{f}]"));
    }
    Ok(SectionModel {
        n,
        rank: 6,
        field,
        labels_a: (0..adim).map(|j| format!("A{j}")).collect(),
        labels_b: (0..syz.dim()).map(|i| format!("syz{i}")).collect(),
        row_side: RowSide::SectionsB,
        class: PresentationClass::Mixed { n, e: 6 },
        source,
        matrix: m,
        sigma: None,
    })
}

/// Rank of a primal quadric (rank of its Gram matrix).
pub fn quadric_rank(q: &Poly) -> usize {
    let n = q.n;
    let field = q.field;
    let gram = Matrix::from_fn(field, n + 1, n + 1, |i, j| {
        let mut e = vec![0u32; n + 1];
        e[i] += 1;
        e[j] += 1;
        let c = q.coeff(&Monomial::new(e));
        if i == j {
            c.mul_i64(2)
        } else {
            c
        }
    });
    gram.rank()
}

fn a0_in_span(a0: &[Scalar], q0: &Poly) -> bool {
    let n = q0.n;
    let field = q0.field;
    let gram = Matrix::from_fn(field, n + 1, n + 1, |i, j| {
        let mut e = vec![0u32; n + 1];
        e[i] += 1;
        e[j] += 1;
        let c = q0.coeff(&Monomial::new(e));
        if i == j {
            c.mul_i64(2)
        } else {
            c
        }
    });
    let span = Subspace::from_rows(
        field,
        n + 1,
        (0..=n).map(|i| gram.row(i).to_vec()).collect(),
    );
    span.contains(a0)
}

/// A castling presentation `0 -> A_k (x) O -> B_c (x) Q -> E -> 0`, with
/// `A_k` spanned by tensors in `B_c (x) V` given as `c x (n+1)` scalar
/// matrices.
pub fn castled_model(field: Field, n: usize, c: usize, a_gens: &[Matrix]) -> Result<SectionModel> {
    let k = a_gens.len();
    if k == 0 {
        return Err(Error::invalid("castling needs at least one tensor"));
    }
    for g in a_gens {
        if g.rows != c || g.cols != n + 1 {
            return Err(Error::invalid("castling tensors must be c x (n+1)"));
        }
    }
    if let Some(w) = rank_one_in_span(field, a_gens)? {
        return Err(Error::invalid(format!(
            "image contains a rank-one tensor (combination {w}); cokernel is not a bundle"
        )));
    }
    let vdim = n + 1;
    let ambient = c * vdim;
    // A as a subspace of B (x) V, coordinates (b index, variable index).
    let a_rows: Vec<Vec<Scalar>> = a_gens
        .iter()
        .map(|g| {
            let mut v = Vec::with_capacity(ambient);
            for b in 0..c {
                for j in 0..vdim {
                    v.push(g.get(b, j).clone());
                }
            }
            v
        })
        .collect();
    let a_sub = Subspace::from_rows(field, ambient, a_rows);
    if a_sub.dim() != k {
        return Err(Error::invalid("castling tensors are dependent"));
    }
    // sectionsA: complement coordinates (non-pivot slots of the RREF).
    let mut pivot = vec![false; ambient];
    for row in a_sub.basis_vectors() {
        let lead = (0..ambient).find(|&j| row[j].is_one()).expect("rref row");
        pivot[lead] = true;
    }
    let complement: Vec<usize> = (0..ambient).filter(|&j| !pivot[j]).collect();

    // sectionsB: kernel of the contraction B^v (x) ^2 V^v -> A^v (x) V^v.
    let pairs = wedge_basis(n, 2);
    let src = c * pairs.len();
    let dst = k * vdim;
    let contraction = Matrix::from_fn(field, src, dst, |row, col| {
        let (b, pair_idx) = (row / pairs.len(), row % pairs.len());
        let (a, var) = (col / vdim, col % vdim);
        // omega = beta_b (x) x_i ^ x_j applied to M(alpha_a) = sum_t b_t (x) u_t:
        // picks u_b and contracts: (x_i ^ x_j)(u_b, e_var).
        let (i, j) = (pairs[pair_idx][0], pairs[pair_idx][1]);
        let u = a_gens[a].row(b);
        // (x_i ^ x_j)(u, e_var) = u_i * delta(var=j) - u_j * delta(var=i)
        if var == j {
            u[i].clone()
        } else if var == i {
            u[j].neg()
        } else {
            field.zero()
        }
    });
    let omega = contraction.transpose().kernel_basis();

    // Injectivity of B^v -> A^v (x) V (columns of the tensors).
    let bdual = Matrix::from_fn(field, c, k * vdim, |b, col| {
        let (a, var) = (col / vdim, col % vdim);
        a_gens[a].get(b, var).clone()
    });
    if bdual.rank() != c {
        return Err(Error::invalid("induced map on B-dual is not injective"));
    }

    let rank = c * n - k;
    let mut m = LinearFormMatrix::zero(field, n, omega.dim(), complement.len());
    for (r, w) in omega.basis_vectors().iter().enumerate() {
        for (col, &slot) in complement.iter().enumerate() {
            let (b, var) = (slot / vdim, slot % vdim);
            // pair(class of b (x) e_var, omega) = omega(b)(e_var, .)
            let mut coeffs = vec![field.zero(); vdim];
            for (pi, pair) in pairs.iter().enumerate() {
                let c_val = &w[b * pairs.len() + pi];
                if c_val.is_zero() {
                    continue;
                }
                let (i, j) = (pair[0], pair[1]);
                if var == i {
                    coeffs[j] = coeffs[j].add(c_val);
                } else if var == j {
                    coeffs[i] = coeffs[i].sub(c_val);
                }
            }
            let l = Poly::linear(field, Alphabet::Dual, &coeffs);
            m.set_entry(r, col, &l);
        }
    }
    Ok(SectionModel {
        n,
        rank,
        field,
        labels_a: complement
            .iter()
            .map(|&s| format!("b{}(x)e{}", s / vdim, s % vdim))
            .collect(),
        labels_b: (0..omega.dim()).map(|i| format!("omega{i}")).collect(),
        row_side: RowSide::SectionsB,
        class: PresentationClass::Steiner { n, c: c as u32, e: rank },
        source: format!("castled k={k} c={c} n={n}"),
        matrix: m,
        sigma: None,
    })
}

/// Exact rank-one detection in the span of up to two `c x (n+1)` tensors:
/// direct minor check for one, binary-form gcd of the 2x2 minors for a
/// pencil. Returns a witness description when found.
fn rank_one_in_span(field: Field, gens: &[Matrix]) -> Result<Option<String>> {
    let minors_2x2 = |m: &Matrix| -> bool {
        for r1 in 0..m.rows {
            for r2 in r1 + 1..m.rows {
                for c1 in 0..m.cols {
                    for c2 in c1 + 1..m.cols {
                        let det = m
                            .get(r1, c1)
                            .mul(m.get(r2, c2))
                            .sub(&m.get(r1, c2).mul(m.get(r2, c1)));
                        if !det.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    };
    match gens.len() {
        1 => Ok(if minors_2x2(&gens[0]) { Some("the generator itself".into()) } else { None }),
        2 => {
            // 2x2 minors of s*M1 + t*M2 are binary quadratics in (s, t);
            // a common projective root means a rank-one member.
            let (m1, m2) = (&gens[0], &gens[1]);
            let mut forms: Vec<[Scalar; 3]> = Vec::new();
            for r1 in 0..m1.rows {
                for r2 in r1 + 1..m1.rows {
                    for c1 in 0..m1.cols {
                        for c2 in c1 + 1..m1.cols {
                            let a = m1.get(r1, c1).mul(m1.get(r2, c2)).sub(&m1.get(r1, c2).mul(m1.get(r2, c1)));
                            let c = m2.get(r1, c1).mul(m2.get(r2, c2)).sub(&m2.get(r1, c2).mul(m2.get(r2, c1)));
                            let b = m1
                                .get(r1, c1)
                                .mul(m2.get(r2, c2))
                                .add(&m2.get(r1, c1).mul(m1.get(r2, c2)))
                                .sub(&m1.get(r1, c2).mul(m2.get(r2, c1)))
                                .sub(&m2.get(r1, c2).mul(m1.get(r2, c1)));
                            forms.push([a, b, c]);
                        }
                    }
                }
            }
            // Root at t=0 (member M1): all minors of M1 vanish.
            if forms.iter().all(|f| f[0].is_zero()) {
                return Ok(Some("the first generator".into()));
            }
            // Otherwise dehomogenize at s=1 and take a gcd over the quadratics.
            let mut g: Vec<Scalar> = vec![field.one()];
            let mut have = false;
            for f in &forms {
                let poly = vec![f[0].clone(), f[1].clone(), f[2].clone()];
                if poly.iter().all(Scalar::is_zero) {
                    continue;
                }
                g = if have { poly_gcd(field, &g, &poly) } else { poly };
                have = true;
                if g.len() == 1 {
                    return Ok(None);
                }
            }
            Ok(if have && g.len() > 1 { Some("a pencil member".into()) } else { None })
        }
        _ => Ok(None), // precondition delegated to the caller for k > 2
    }
}

/// Monic gcd of univariate polynomials with ascending coefficients.
fn poly_gcd(field: Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    fn trim(mut v: Vec<Scalar>) -> Vec<Scalar> {
        while v.len() > 1 && v.last().unwrap().is_zero() {
            v.pop();
        }
        v
    }
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !(b.len() == 1 && b[0].is_zero()) {
        // a mod b
        let mut r = a.clone();
        let lead = b.last().unwrap().clone();
        while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
            let shift = r.len() - b.len();
            let factor = r.last().unwrap().div(&lead).expect("nonzero lead");
            for i in 0..b.len() {
                let v = r[shift + i].sub(&factor.mul(&b[i]));
                r[shift + i] = v;
            }
            r = trim(r);
            if r.iter().all(Scalar::is_zero) {
                r = vec![field.zero()];
                break;
            }
        }
        a = b;
        b = r;
    }
    let lead = a.last().unwrap().clone();
    if !lead.is_zero() && !lead.is_one() {
        let inv = lead.inv().expect("nonzero");
        for v in a.iter_mut() {
            *v = v.mul(&inv);
        }
    }
    a
}

/// Evaluation-kernel model from a section space `Sigma` inside
/// `wedge^2 V^v`: rows are a basis of `(V^v (x) Sigma) ^ wedge^3 V^v`,
/// columns the `Sigma` basis.
pub fn sigma_model(sigma: &Subspace, n: usize) -> Result<SectionModel> {
    let field = sigma.field;
    let pairs = wedge_basis(n, 2);
    if sigma.ambient != pairs.len() {
        return Err(Error::AmbientMismatch(sigma.ambient, pairs.len()));
    }
    let dim_sigma = sigma.dim();
    if dim_sigma <= n {
        return Err(Error::invalid("Sigma must have dimension more than n"));
    }
    let e = dim_sigma - n;
    if n >= 6 && !(2 * e > (n - 1) * (n - 1) && 2 * e <= n * (n - 1)) {
        return Err(Error::invalid(format!(
            "rank e={e} outside the constant-rank range ((n-1)^2/2, n(n-1)/2] for n={n}"
        )));
    }
    if n < 6 {
        return Err(Error::invalid("evaluation-kernel models need n >= 6"));
    }
    let vdim = n + 1;
    // The intersection `(V^v (x) Sigma) ^ wedge^3 V^v` is the kernel of
    // the small composite `wedge^3 V^v -> V^v (x) (wedge^2 V^v / Sigma)`:
    // each `x_i`-block of the embedded triple must annihilate
    // `Theta = Sigma^perp`, which keeps the elimination tiny.
    let theta = Matrix::from_rows(field, sigma.basis_vectors()).kernel_basis();
    let triples = wedge_basis(n, 3);
    let pair_index = |i: usize, j: usize| pairs.iter().position(|p| p[0] == i && p[1] == j).unwrap();
    // Embedded triple: x_a^x_b^x_c -> x_a (x) x_bc - x_b (x) x_ac + x_c (x) x_ab.
    let blocks_of = |t: &[usize]| -> Vec<(usize, usize, i64)> {
        let (a, b, c) = (t[0], t[1], t[2]);
        vec![
            (a, pair_index(b, c), 1),
            (b, pair_index(a, c), -1),
            (c, pair_index(a, b), 1),
        ]
    };
    let conditions = Matrix::from_fn(field, triples.len(), vdim * theta.dim(), |row, col| {
        let (i, t) = (col / theta.dim(), col % theta.dim());
        let mut acc = field.zero();
        for (block, slot, sign) in blocks_of(&triples[row]) {
            if block == i {
                let th = theta.basis().get(t, slot);
                if !th.is_zero() {
                    acc = acc.add(&th.mul_i64(sign));
                }
            }
        }
        acc
    });
    let kernel = if theta.dim() == 0 {
        Subspace::full(field, triples.len())
    } else {
        conditions.transpose().kernel_basis()
    };
    let expected = (e * vdim) as i64 - 2 * crate::poly::binomial(vdim as u64, 3) as i64;
    if kernel.dim() as i64 != expected {
        return Err(Error::invalid(format!(
            "section space is non-generic: intersection dimension {} differs from expected {}",
            kernel.dim(),
            expected
        )));
    }
    // Row r is sum over triples of kernel coefficients; entry (r, t) is the
    // linear form pairing against the Sigma basis vector t. With Sigma in
    // RREF the expansion over Sigma is a pivot read-off.
    let sigma_basis = sigma.basis_vectors();
    let sigma_pivots: Vec<usize> = sigma_basis
        .iter()
        .map(|row| (0..pairs.len()).find(|&j| row[j].is_one()).expect("rref pivot"))
        .collect();
    let mut m = LinearFormMatrix::zero(field, n, kernel.dim(), dim_sigma);
    for (r, w) in kernel.basis_vectors().iter().enumerate() {
        // Assemble the V^v (x) wedge^2 V^v tensor blockwise, sparsely.
        let mut blocks: Vec<Vec<Scalar>> = vec![vec![field.zero(); pairs.len()]; vdim];
        for (ti, coeff) in w.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (block, slot, sign) in blocks_of(&triples[ti]) {
                blocks[block][slot] = blocks[block][slot].add(&coeff.mul_i64(sign));
            }
        }
        for (t, &pt) in sigma_pivots.iter().enumerate() {
            let coeffs: Vec<Scalar> = (0..vdim).map(|i| blocks[i][pt].clone()).collect();
            let l = Poly::linear(field, Alphabet::Dual, &coeffs);
            m.set_entry(r, t, &l);
        }
    }
    Ok(SectionModel {
        n,
        rank: e,
        field,
        labels_a: (0..kernel.dim()).map(|r| format!("w{r}")).collect(),
        labels_b: (0..dim_sigma).map(|t| format!("sigma{t}")).collect(),
        row_side: RowSide::SectionsA,
        class: PresentationClass::Sigma { n, e },
        source: format!("sigma n={n} e={e}"),
        matrix: m,
        sigma: Some(sigma.clone()),
    })
}

/// Block-diagonal direct sum of section models (all normalized to
/// `m_E` orientation).
pub fn direct_sum(models: &[SectionModel]) -> Result<SectionModel> {
    if models.is_empty() {
        return Err(Error::invalid("empty direct sum"));
    }
    let n = models[0].n;
    let field = models[0].field;
    for m in models {
        if m.n != n || m.field != field {
            return Err(Error::AmbientMismatch(m.n, n));
        }
    }
    let dim_a: usize = models.iter().map(SectionModel::dim_a).sum();
    let dim_b: usize = models.iter().map(SectionModel::dim_b).sum();
    let mut m = LinearFormMatrix::zero(field, n, dim_a, dim_b);
    let (mut ra, mut cb) = (0usize, 0usize);
    let mut labels_a = Vec::new();
    let mut labels_b = Vec::new();
    for (idx, sub) in models.iter().enumerate() {
        for i in 0..sub.dim_a() {
            for j in 0..sub.dim_b() {
                let p = sub.pair(i, j);
                m.set_entry(ra + i, cb + j, &p);
            }
        }
        labels_a.extend(sub.labels_a.iter().map(|l| format!("{idx}:{l}")));
        labels_b.extend(sub.labels_b.iter().map(|l| format!("{idx}:{l}")));
        ra += sub.dim_a();
        cb += sub.dim_b();
    }
    Ok(SectionModel {
        n,
        rank: models.iter().map(|m| m.rank).sum(),
        field,
        labels_a,
        labels_b,
        row_side: RowSide::SectionsA,
        class: models[0].class,
        source: format!("direct sum of {} models", models.len()),
        matrix: m,
        sigma: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly_i64;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn quotient_model_shapes_and_signs() {
        let m = quotient_model(q(), 4);
        assert_eq!((m.matrix().rows, m.matrix().cols), (5, 10));
        // Row e_0, column x0^x1 should be +x1; row e_1 same column is -x0.
        assert!(m.matrix().coeff_at(0, 0, 1).is_one());
        assert_eq!(*m.matrix().coeff_at(1, 0, 0), q().from_i64(-1));
        let m6 = quotient_model(q(), 6);
        assert_eq!((m6.matrix().rows, m6.matrix().cols), (7, 21));
    }

    #[test]
    fn wedge2q_is_symmetric_with_unit_signs() {
        let m = wedge2q_model(q());
        assert_eq!((m.matrix().rows, m.matrix().cols), (10, 10));
        // Entry ((0,1),(2,3)) -> +x4; ((0,1),(0,2)) -> 0.
        assert!(m.matrix().coeff_at(0, 7, 4).is_one());
        for k in 0..5 {
            assert!(m.matrix().coeff_at(0, 1, k).is_zero());
        }
        assert_eq!(m.matrix().transpose(), *m.matrix());
    }

    #[test]
    fn apolar_space_of_power_and_quartic() {
        // F = e0^d: everything missing enough x0 powers; codimension 1.
        let f = poly_i64(q(), Alphabet::Primal, 2, 3, &[(&[3, 0, 0], 1)]);
        let p = apolar_space(&f, 2).unwrap();
        assert_eq!(p.dim(), sym_dim(2, 2) - 1);

        // The plane quartic e0^3 e1 + e1^3 e2 + e2^3 e0.
        let f = poly_i64(
            q(),
            Alphabet::Primal,
            2,
            4,
            &[(&[3, 1, 0], 1), (&[0, 3, 1], 1), (&[1, 0, 3], 1)],
        );
        let p = apolar_space(&f, 3).unwrap();
        assert_eq!(p.dim(), 7);
        // The displayed generators are apolar to it.
        for (exps, c2, e2) in [
            ((&[3u32, 0, 0], &[0u32, 2, 1]), 1i64, -1i64),
            ((&[0, 3, 0], &[1, 0, 2]), 1, -1),
            ((&[0, 0, 3], &[2, 1, 0]), 1, -1),
        ] {
            let g = poly_i64(q(), Alphabet::Dual, 2, 3, &[(exps.0, c2), (exps.1, e2)]);
            assert!(f.contract_by(&g).unwrap().is_zero(), "not apolar: {g}");
            assert!(p.as_subspace().contains(&g.coeff_vec()));
        }
    }

    fn conic_h() -> FormSpace {
        let d = |t: &[(&[u32], i64)]| poly_i64(q(), Alphabet::Dual, 2, 2, t);
        FormSpace::new(
            2,
            2,
            vec![
                d(&[(&[1, 1, 0], 1), (&[0, 0, 2], -1)]),
                d(&[(&[1, 0, 1], 1)]),
                d(&[(&[0, 1, 1], 1)]),
                d(&[(&[2, 0, 0], 1)]),
                d(&[(&[0, 2, 0], 1)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn drezet_model_rows_are_syzygies() {
        let h = conic_h();
        let model = drezet_model(&h, false).unwrap();
        assert_eq!((model.matrix().rows, model.matrix().cols), (5, 5));
        for i in 0..5 {
            let mut acc = Poly::zero(q(), Alphabet::Dual, 2, 3);
            for j in 0..5 {
                acc = acc.add(&model.matrix().entry(i, j).mul(&h.basis()[j]).unwrap()).unwrap();
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn pfaffian_small_cases() {
        // Pf of [[0, a], [-a, 0]] = a.
        let a = poly_i64(q(), Alphabet::Dual, 2, 1, &[(&[1, 0, 0], 1)]);
        let z = Poly::zero(q(), Alphabet::Dual, 2, 1);
        let pf = pfaffian_poly(&[vec![z.clone(), a.clone()], vec![a.scale(&q().from_i64(-1)), z]]);
        assert_eq!(pf, a);
    }

    #[test]
    fn castled_twisted_cubic_dimensions() {
        // The Hankel pencil presenting the twisted cubic.
        let m1 = Matrix::from_i64_rows(q(), &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let m2 = Matrix::from_i64_rows(q(), &[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let model = castled_model(q(), 3, 3, &[m1, m2]).unwrap();
        assert_eq!(model.rank, 7);
        assert_eq!((model.matrix().rows, model.matrix().cols), (10, 10));
    }

    #[test]
    fn castled_rejects_rank_one() {
        let m1 = Matrix::from_i64_rows(q(), &[&[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        assert!(castled_model(q(), 3, 3, &[m1]).is_err());
        // This pencil has no rank-one member: the minors 2s^2 and t^2 only
        // vanish together at the origin.
        let m1 = Matrix::from_i64_rows(q(), &[&[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 0, 0]]);
        let m2 = Matrix::from_i64_rows(q(), &[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let r = rank_one_in_span(q(), &[m1, m2]).unwrap();
        assert!(r.is_none());
        let m3 = Matrix::from_i64_rows(q(), &[&[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        let m4 = Matrix::from_i64_rows(q(), &[&[0, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        // All members of this pencil are rank one.
        assert!(rank_one_in_span(q(), &[m3, m4]).unwrap().is_some());
    }

    #[test]
    fn mixed_model_is_8x8() {
        let a0 = [q().one(), q().zero(), q().zero()];
        let q0 = poly_i64(q(), Alphabet::Primal, 2, 2, &[(&[0, 1, 1], 1)]);
        let model = mixed_model(&a0, &q0).unwrap();
        assert_eq!((model.matrix().rows, model.matrix().cols), (8, 8));
        assert_eq!(model.rank, 6);
    }

    #[test]
    fn subselect_identity_and_rank_guard() {
        let m = quotient_model(q(), 4);
        let id_r = Matrix::identity(q(), 5);
        let id_c = Matrix::identity(q(), 10);
        assert_eq!(subselect(m.matrix(), &id_r, &id_c).unwrap(), *m.matrix());
        let bad = Matrix::zero(q(), 5, 5);
        assert!(subselect(m.matrix(), &bad, &id_c).is_err());
    }
}
