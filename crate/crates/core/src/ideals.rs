//! Graded multiplication maps, linear syzygies, Hilbert functions, and the
//! Macaulay-growth machinery.
//!
//! Ideal graded pieces are always built by brute multiplication against
//! monomial bases (Macaulay matrices); no Groebner bases anywhere.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::poly::{monomial_basis, sym_dim, Alphabet, Monomial, Poly};
use crate::scalar::{Field, Scalar};

/// A subspace of degree-`c` dual forms, given by an independent basis.
#[derive(Debug, Clone)]
pub struct FormSpace {
    pub n: usize,
    pub c: u32,
    pub field: Field,
    basis: Vec<Poly>,
}

impl FormSpace {
    pub fn new(n: usize, c: u32, basis: Vec<Poly>) -> Result<FormSpace> {
        if basis.is_empty() {
            return Err(Error::invalid("form space needs at least one form"));
        }
        let field = basis[0].field;
        for p in &basis {
            if p.alphabet != Alphabet::Dual {
                return Err(Error::AlphabetMismatch { expected: "x", got: "e" });
            }
            if p.n != n || p.degree() != c || p.field != field {
                return Err(Error::invalid("form space basis must be degree-c duals on P^n"));
            }
        }
        let coeffs = Matrix::from_rows(field, basis.iter().map(Poly::coeff_vec).collect());
        if coeffs.rank() != basis.len() {
            return Err(Error::invalid("form space basis is dependent"));
        }
        Ok(FormSpace { n, c, field, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn as_subspace(&self) -> Subspace {
        Subspace::from_rows(
            self.field,
            sym_dim(self.n, self.c),
            self.basis.iter().map(Poly::coeff_vec).collect(),
        )
    }

    /// Whether `other` spans a subspace of this space.
    pub fn contains_space(&self, other: &FormSpace) -> bool {
        self.c == other.c
            && self.n == other.n
            && self.as_subspace().contains_subspace(&other.as_subspace())
    }
}

/// Matrix of the multiplication map `P (x) S^d -> S^{c+d}` in the fixed
/// monomial bases. Rows are source pairs `(P_i, m_j)` with the `P` index
/// outer; columns are target monomials.
pub fn mult_map(p: &FormSpace, d: u32) -> Matrix {
    let mons = monomial_basis(p.n, d);
    let target = monomial_basis(p.n, p.c + d);
    let mut rows = Vec::with_capacity(p.dim() * mons.len());
    for form in p.basis() {
        for m in &mons {
            let prod = form
                .mul(&Poly::monomial(p.field, Alphabet::Dual, p.n, m.clone(), p.field.one()))
                .expect("same alphabet");
            rows.push(target.iter().map(|t| prod.coeff(t)).collect());
        }
    }
    Matrix::from_rows(p.field, rows)
}

/// Canonical basis of the space of linear syzygies of `P`: tuples
/// `(l_0, ..., l_e)` of linear forms with `sum l_i P_i = 0`, inside
/// `P (x) V^v` with coordinates ordered `(P index, variable index)`.
pub fn syz1(p: &FormSpace) -> Subspace {
    mult_map(p, 1).transpose().kernel_basis()
}

/// Extracts the syzygy tuples as vectors of linear forms.
pub fn syzygy_forms(p: &FormSpace, syz: &Subspace) -> Vec<Vec<Poly>> {
    let nv = p.n + 1;
    syz.basis_vectors()
        .into_iter()
        .map(|v| {
            (0..p.dim())
                .map(|i| Poly::linear(p.field, Alphabet::Dual, &v[i * nv..(i + 1) * nv]))
                .collect()
        })
        .collect()
}

/// Ordinariness: surjectivity of `P (x) V^v -> S^{c+1}`, with the cokernel
/// dimension (the `h^1` of the twisted dual).
pub fn is_ordinary(p: &FormSpace) -> (bool, usize) {
    let m = mult_map(p, 1);
    let coker = sym_dim(p.n, p.c + 1) - m.rank();
    (coker == 0, coker)
}

/// `dim coker(P (x) S^m -> S^{c+m})` for `m <= 1`; for `m < 0` the source
/// vanishes, so the answer is `dim S^{c+m}` (or 0 below degree 0).
pub fn drezet_h1_twist(p: &FormSpace, m: i32) -> usize {
    if m >= 0 {
        let m = m as u32;
        sym_dim(p.n, p.c + m) - mult_map(p, m).rank()
    } else {
        let d = p.c as i64 + m as i64;
        if d < 0 {
            0
        } else {
            sym_dim(p.n, d as u32)
        }
    }
}

/// Dimension of the degree-`t` graded piece of the ideal generated by
/// `gens` (mixed degrees allowed), by Macaulay-matrix rank.
pub fn ideal_graded_dim(field: Field, n: usize, gens: &[Poly], t: u32) -> usize {
    let target = monomial_basis(n, t);
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for g in gens {
        if g.degree() > t || g.is_zero() {
            continue;
        }
        for m in monomial_basis(n, t - g.degree()) {
            let prod = g
                .mul(&Poly::monomial(field, g.alphabet, n, m, field.one()))
                .expect("same alphabet");
            rows.push(target.iter().map(|mt| prod.coeff(mt)).collect());
        }
    }
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(field, rows).rank()
}

/// Hilbert function of `R/(gens)` at degree `t`.
pub fn hilbert_fn(field: Field, n: usize, gens: &[Poly], t: u32) -> usize {
    sym_dim(n, t) - ideal_graded_dim(field, n, gens, t)
}

/// h-vector of an Artinian quotient: values of the Hilbert function until
/// it reaches zero. Errors if it has not vanished by `tmax` (non-Artinian
/// input at desk scale).
pub fn h_vector(field: Field, n: usize, gens: &[Poly], tmax: u32) -> Result<HVector> {
    let mut values = Vec::new();
    for t in 0..=tmax {
        let h = hilbert_fn(field, n, gens, t);
        if h == 0 {
            return HVector::new(values);
        }
        values.push(h as u64);
    }
    Err(Error::invalid(format!("Hilbert function still positive at degree {tmax}")))
}

/// The h-vector of a standard graded Artinian algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HVector {
    values: Vec<u64>,
}

impl HVector {
    /// Trailing zeros are trimmed; the empty vector stands for the zero
    /// algebra (e.g. `R/(1)` in degenerate linkage checks).
    pub fn new(mut values: Vec<u64>) -> Result<HVector> {
        while values.last() == Some(&0) {
            values.pop();
        }
        if !values.is_empty() && values[0] != 1 {
            return Err(Error::invalid("h-vector must start with h_0 = 1"));
        }
        Ok(HVector { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> u64 {
        self.values.get(i).copied().unwrap_or(0)
    }

    /// Socle degree: last index with a positive value.
    pub fn socle_degree(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

/// The `r`-th binomial expansion of `a >= 1`: the unique decreasing chain
/// `a = C(m_r, r) + C(m_{r-1}, r-1) + ... + C(m_e, e)` with
/// `m_r > m_{r-1} > ... > m_e >= e >= 1`, returned as `(m_i, i)` pairs.
pub fn binom_expand(a: u64, r: u64) -> Result<Vec<(u64, u64)>> {
    if a < 1 || r < 1 {
        return Err(Error::invalid("binomial expansion needs a >= 1, r >= 1"));
    }
    let mut out = Vec::new();
    let mut rest = a;
    let mut i = r;
    while rest > 0 {
        if i == 0 {
            return Err(Error::invalid("binomial expansion ran out of indices"));
        }
        let mut m = i;
        while crate::poly::binomial(m + 1, i) <= rest {
            m += 1;
        }
        out.push((m, i));
        rest -= crate::poly::binomial(m, i);
        i -= 1;
    }
    Ok(out)
}

/// Macaulay's upper function `a^{<r>}`.
pub fn macaulay_upper(a: u64, r: u64) -> Result<u64> {
    if a == 0 {
        return Ok(0);
    }
    Ok(binom_expand(a, r)?
        .into_iter()
        .map(|(m, i)| crate::poly::binomial(m + 1, i + 1))
        .sum())
}

/// Macaulay's inequalities: `h_0 = 1` and `h_{t+1} <= h_t^{<t>}` for all
/// `t >= 1`.
pub fn macaulay_check(h: &HVector) -> bool {
    if h.get(0) != 1 {
        return false;
    }
    for t in 1..=h.socle_degree() {
        let ht = h.get(t);
        let next = h.get(t + 1);
        if ht == 0 {
            if next != 0 {
                return false;
            }
            continue;
        }
        match macaulay_upper(ht, t as u64) {
            Ok(bound) => {
                if next > bound {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

/// Linkage identity `h_i - h^1_i = h^2_{r-i}` for ideals linked by an
/// Artinian complete intersection with h-vector `h` and socle degree `r`.
pub fn linkage_defect(h_j: &HVector, h_i: &HVector, h_l: &HVector, r: usize) -> bool {
    for i in 0..=r {
        let lhs = h_j.get(i) as i64 - h_i.get(i) as i64;
        let rhs = h_l.get(r - i) as i64;
        if lhs != rhs {
            return false;
        }
    }
    // Beyond the socle everything must agree as well.
    for i in r + 1..=h_j.socle_degree().max(h_i.socle_degree()) {
        if h_j.get(i) != h_i.get(i) {
            return false;
        }
    }
    true
}

/// Degree-`t` graded piece dimension of the colon ideal `(J : I)`, by
/// brute linear algebra: `f` with `f * g in J` for every generator `g`.
pub fn colon_graded_dim(
    field: Field,
    n: usize,
    j_gens: &[Poly],
    i_gens: &[Poly],
    t: u32,
) -> usize {
    let source = monomial_basis(n, t);
    // Intersection of kernels of f -> f*g mod J over generators g.
    let mut space = Subspace::full(field, source.len());
    for g in i_gens {
        let d = t + g.degree();
        let target = monomial_basis(n, d);
        // Rows of J's graded piece at degree d.
        let mut j_rows: Vec<Vec<Scalar>> = Vec::new();
        for jg in j_gens {
            if jg.degree() > d {
                continue;
            }
            for m in monomial_basis(n, d - jg.degree()) {
                let prod = jg
                    .mul(&Poly::monomial(field, Alphabet::Dual, n, m, field.one()))
                    .expect("same alphabet");
                j_rows.push(target.iter().map(|mt| prod.coeff(mt)).collect());
            }
        }
        let j_piece = Subspace::from_rows(field, target.len(), j_rows);
        // Solve f*g in J_d: stack multiplication rows against J's basis and
        // take the kernel coordinates on the f side.
        let mult_rows: Vec<Vec<Scalar>> = source
            .iter()
            .map(|m| {
                let prod = g
                    .mul(&Poly::monomial(field, Alphabet::Dual, n, m.clone(), field.one()))
                    .expect("same alphabet");
                target.iter().map(|mt| prod.coeff(mt)).collect()
            })
            .collect();
        let k = source.len();
        let jdim = j_piece.dim();
        let sys = Matrix::from_fn(field, target.len(), k + jdim, |row, col| {
            if col < k {
                mult_rows[col][row].clone()
            } else {
                j_piece.basis().get(col - k, row).neg()
            }
        });
        let ker = sys.kernel_basis();
        let rows: Vec<Vec<Scalar>> =
            ker.basis_vectors().into_iter().map(|v| v[..k].to_vec()).collect();
        let sol = Subspace::from_rows(field, k, rows);
        space = space.intersect(&sol).expect("same ambient");
        if space.dim() == 0 {
            break;
        }
    }
    space.dim()
}

/// Outcome of the base-point-freeness certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasePointVerdict {
    /// The ideal's degree-`d` piece fills `S^d`: the projective zero locus
    /// is empty (Nullstellensatz certificate).
    Free { certifying_degree: u32 },
    /// Common zeros exist; a rational witness when the search found one,
    /// and the stabilized Hilbert value (the locus degree) when the
    /// certificate came from Hilbert-function stabilization.
    BasePoints { witness: Option<Vec<Scalar>>, locus_degree: Option<u64> },
    Unknown,
}

/// Certified base-point-freeness check.
///
/// YES comes from the graded piece filling `S^d` for some `d <= dmax`.
/// NO comes from either a concrete common zero (structured points, 0/1
/// vectors, then seeded random points), or from Hilbert-function
/// stabilization (`HF(d) = HF(d+1) = c >= 1` with `d >= c` pins the
/// Hilbert polynomial at the constant `c`, so the locus is nonempty).
pub fn base_point_free(p: &FormSpace, dmax: u32) -> BasePointVerdict {
    if let Some(w) = search_common_zero(p.field, p.n, p.basis(), 0x5eed_b0) {
        return BasePointVerdict::BasePoints { witness: Some(w), locus_degree: None };
    }
    let mut prev: Option<(u32, usize)> = None;
    for d in p.c..=dmax {
        let h = hilbert_fn(p.field, p.n, p.basis(), d);
        if h == 0 {
            return BasePointVerdict::Free { certifying_degree: d };
        }
        if let Some((pd, ph)) = prev {
            if ph == h && pd as usize >= h {
                return BasePointVerdict::BasePoints { witness: None, locus_degree: Some(h as u64) };
            }
        }
        prev = Some((d, h));
    }
    BasePointVerdict::Unknown
}

/// Looks for a projective point where every given form vanishes:
/// coordinate points, all 0/1 patterns (small `n`), signed pairs, then
/// seeded random small-integer points.
pub fn search_common_zero(
    field: Field,
    n: usize,
    forms: &[Poly],
    seed: u64,
) -> Option<Vec<Scalar>> {
    let vanishes =
        |pt: &[Scalar]| forms.iter().all(|f| f.eval(pt).is_zero());
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    for i in 0..=n {
        let mut v = vec![0i64; n + 1];
        v[i] = 1;
        candidates.push(v);
    }
    for i in 0..=n {
        for j in i + 1..=n {
            for s in [1i64, -1] {
                let mut v = vec![0i64; n + 1];
                v[i] = 1;
                v[j] = s;
                candidates.push(v);
            }
        }
    }
    if n <= 7 {
        for mask in 1u32..(1 << (n + 1)) {
            candidates.push((0..=n).map(|i| ((mask >> i) & 1) as i64).collect());
        }
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let v: Vec<i64> = (0..=n).map(|_| rng.gen_range(-5..=5)).collect();
        if v.iter().any(|&x| x != 0) {
            candidates.push(v);
        }
    }
    for cand in candidates {
        let pt: Vec<Scalar> = cand.iter().map(|&x| field.from_i64(x)).collect();
        if vanishes(&pt) {
            return Some(pt);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly_i64;

    fn q() -> Field {
        Field::Rational
    }

    fn dual(n: usize, d: u32, terms: &[(&[u32], i64)]) -> Poly {
        poly_i64(q(), Alphabet::Dual, n, d, terms)
    }

    /// The conic-apolar space from the running example.
    pub(crate) fn conic_h() -> FormSpace {
        FormSpace::new(
            2,
            2,
            vec![
                dual(2, 2, &[(&[1, 1, 0], 1), (&[0, 0, 2], -1)]),
                dual(2, 2, &[(&[1, 0, 1], 1)]),
                dual(2, 2, &[(&[0, 1, 1], 1)]),
                dual(2, 2, &[(&[2, 0, 0], 1)]),
                dual(2, 2, &[(&[0, 2, 0], 1)]),
            ],
        )
        .unwrap()
    }

    fn fermat_squarefree() -> FormSpace {
        let mut basis = Vec::new();
        for i in 0..4usize {
            for j in i + 1..4 {
                let mut e = [0u32; 4];
                e[i] = 1;
                e[j] = 1;
                basis.push(dual(3, 2, &[(&e, 1)]));
            }
        }
        FormSpace::new(3, 2, basis).unwrap()
    }

    #[test]
    fn mult_map_shapes_and_ranks() {
        // P = <x0, x1> on P^1, d=1: 4x3 of rank 3.
        let p = FormSpace::new(
            1,
            1,
            vec![dual(1, 1, &[(&[1, 0], 1)]), dual(1, 1, &[(&[0, 1], 1)])],
        )
        .unwrap();
        let m = mult_map(&p, 1);
        assert_eq!((m.rows, m.cols), (4, 3));
        assert_eq!(m.rank(), 3);

        // P = S^2 on P^2, d=1: 18x10 surjective.
        let full: Vec<Poly> = monomial_basis(2, 2)
            .into_iter()
            .map(|m| Poly::monomial(q(), Alphabet::Dual, 2, m, q().one()))
            .collect();
        let p = FormSpace::new(2, 2, full).unwrap();
        let m = mult_map(&p, 1);
        assert_eq!((m.rows, m.cols), (18, 10));
        assert_eq!(m.rank(), 10);
        assert_eq!(syz1(&p).dim(), 8);
    }

    #[test]
    fn conic_syzygies_and_ordinariness() {
        let h = conic_h();
        assert_eq!(syz1(&h).dim(), 5);
        let (ord, h1) = is_ordinary(&h);
        assert!(ord);
        assert_eq!(h1, 0);
        // Rows of syz1 are genuine syzygies.
        for syz in syzygy_forms(&h, &syz1(&h)) {
            let mut acc = Poly::zero(q(), Alphabet::Dual, 2, 3);
            for (l, p) in syz.iter().zip(h.basis()) {
                acc = acc.add(&l.mul(p).unwrap()).unwrap();
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn fermat_syzygies_and_base_points() {
        let p = fermat_squarefree();
        assert_eq!(syz1(&p).dim(), 8);
        match base_point_free(&p, 5) {
            BasePointVerdict::BasePoints { witness: Some(w), .. } => {
                assert!(p.basis().iter().all(|f| f.eval(&w).is_zero()));
                // Coordinate points are base points.
                assert_eq!(w.iter().filter(|c| !c.is_zero()).count(), 1);
            }
            other => panic!("expected base points, got {other:?}"),
        }
    }

    #[test]
    fn conic_is_base_point_free() {
        match base_point_free(&conic_h(), 4) {
            BasePointVerdict::Free { certifying_degree } => assert!(certifying_degree <= 4),
            other => panic!("expected free, got {other:?}"),
        }
        // Single power has a whole hyperplane of zeros.
        let p = FormSpace::new(2, 2, vec![dual(2, 2, &[(&[2, 0, 0], 1)])]).unwrap();
        assert!(matches!(
            base_point_free(&p, 5),
            BasePointVerdict::BasePoints { witness: Some(_), .. }
        ));
    }

    #[test]
    fn h1_twists_of_generic_net_complement() {
        // Generic 7-dim quadric space on P^3: h1 twists (0,-1,-2) -> (3,4,1).
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let mons = monomial_basis(3, 2);
        let basis: Vec<Poly> = (0..7)
            .map(|_| {
                Poly::from_terms(
                    q(),
                    Alphabet::Dual,
                    3,
                    2,
                    mons.iter().map(|m| {
                        (m.clone(), q().from_i64(rng.gen_range(-9i64..=9)))
                    }),
                )
                .unwrap()
            })
            .collect();
        let p = FormSpace::new(3, 2, basis).unwrap();
        assert_eq!(drezet_h1_twist(&p, 0), 3);
        assert_eq!(drezet_h1_twist(&p, -1), 4);
        assert_eq!(drezet_h1_twist(&p, -2), 1);
        let full: Vec<Poly> = monomial_basis(2, 2)
            .into_iter()
            .map(|m| Poly::monomial(q(), Alphabet::Dual, 2, m, q().one()))
            .collect();
        let pf = FormSpace::new(2, 2, full).unwrap();
        assert_eq!(drezet_h1_twist(&pf, 0), 0);
    }

    #[test]
    fn complete_intersection_h_vector() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let mons = monomial_basis(3, 2);
        let gens: Vec<Poly> = (0..4)
            .map(|_| {
                Poly::from_terms(
                    q(),
                    Alphabet::Dual,
                    3,
                    2,
                    mons.iter().map(|m| (m.clone(), q().from_i64(rng.gen_range(-9i64..=9)))),
                )
                .unwrap()
            })
            .collect();
        let h = h_vector(q(), 3, &gens, 8).unwrap();
        assert_eq!(h.values(), &[1, 4, 6, 4, 1]);
        assert!(macaulay_check(&h));
    }

    #[test]
    fn binomial_expansion_and_upper() {
        assert_eq!(binom_expand(2, 2).unwrap(), vec![(2, 2), (1, 1)]);
        assert_eq!(macaulay_upper(2, 2).unwrap(), 2);
        assert_eq!(macaulay_upper(2, 1).unwrap(), 3);
        let good = HVector::new(vec![1, 4, 6, 4, 1]).unwrap();
        assert!(macaulay_check(&good));
        let bad = HVector::new(vec![1, 2, 4]).unwrap();
        assert!(!macaulay_check(&bad));
    }

    #[test]
    fn linkage_self_link_degenerate() {
        // I = J linked through J itself leaves L = (1), the zero algebra.
        let h = HVector::new(vec![1, 4, 6, 4, 1]).unwrap();
        let zero_algebra = HVector::new(vec![]).unwrap();
        assert!(linkage_defect(&h, &h, &zero_algebra, 4));
        assert!(!linkage_defect(&h, &HVector::new(vec![1, 4]).unwrap(), &zero_algebra, 4));
    }

    #[test]
    fn mac_lemma_bound_on_six_quadrics() {
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        let mons = monomial_basis(3, 2);
        for _ in 0..5 {
            let gens: Vec<Poly> = (0..6)
                .map(|_| {
                    Poly::from_terms(
                        q(),
                        Alphabet::Dual,
                        3,
                        2,
                        mons.iter().map(|m| (m.clone(), q().from_i64(rng.gen_range(-9i64..=9)))),
                    )
                    .unwrap()
                })
                .collect();
            let p = FormSpace::new(3, 2, gens).unwrap();
            if !matches!(base_point_free(&p, 5), BasePointVerdict::Free { .. }) {
                continue;
            }
            assert!(hilbert_fn(q(), 3, p.basis(), 3) <= 3);
        }
    }
}
