//! Homogeneous multivariate polynomials in two dual alphabets, and the
//! apolarity contraction pairing between them.
//!
//! Primal polynomials live in `S^d V` (variables `e_i`), dual ones in
//! `S^d V^v` (variables `x_i`). Contraction is differentiation:
//! `x^a | e^b = prod_i b_i!/(b_i-a_i)! e^(b-a)` when `b >= a`, else 0.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Which symmetric algebra a polynomial lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// `S^d V`, variables `e_i`.
    Primal,
    /// `S^d V^v`, variables `x_i`.
    Dual,
}

impl Alphabet {
    pub fn var_prefix(&self) -> &'static str {
        match self {
            Alphabet::Primal => "e",
            Alphabet::Dual => "x",
        }
    }
}

/// Exponent vector of a monomial in `n+1` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial { exps }
    }

    pub fn one(n: usize) -> Monomial {
        Monomial { exps: vec![0; n + 1] }
    }

    pub fn var(n: usize, i: usize) -> Monomial {
        let mut exps = vec![0; n + 1];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.exps.len(), other.exps.len());
        Monomial { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    fn fmt_with(&self, prefix: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{prefix}{i}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Graded-lexicographic order, fixed once: lower degree first, then
/// lexicographically by exponent vector with earlier variables dominant
/// (so within one degree: `x0^2 < x0*x1 < x0*x2 < x1^2 < ...`).
impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All degree-`d` monomials in `n+1` variables, in the fixed graded-lex
/// order. Count is `C(n+d, d)`.
pub fn monomial_basis(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(sym_dim(n, d));
    let mut current = vec![0u32; n + 1];
    fill(&mut out, &mut current, 0, d, n);
    fn fill(out: &mut Vec<Monomial>, current: &mut Vec<u32>, var: usize, left: u32, n: usize) {
        if var == n {
            current[var] = left;
            out.push(Monomial::new(current.clone()));
            current[var] = 0;
            return;
        }
        for e in (0..=left).rev() {
            current[var] = e;
            fill(out, current, var + 1, left - e, n);
        }
        current[var] = 0;
    }
    out
}

/// `dim S^d` of `n+1` variables, i.e. `C(n+d, d)`.
pub fn sym_dim(n: usize, d: u32) -> usize {
    binomial(n as u64 + d as u64, d as u64) as usize
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// A homogeneous sparse polynomial. The zero polynomial keeps a declared
/// degree so homogeneity checks stay total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub alphabet: Alphabet,
    pub n: usize,
    pub field: Field,
    degree: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(field: Field, alphabet: Alphabet, n: usize, degree: u32) -> Poly {
        Poly { alphabet, n, field, degree, terms: BTreeMap::new() }
    }

    pub fn monomial(field: Field, alphabet: Alphabet, n: usize, m: Monomial, c: Scalar) -> Poly {
        let mut p = Poly::zero(field, alphabet, n, m.degree());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(
        field: Field,
        alphabet: Alphabet,
        n: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Poly> {
        let mut p = Poly::zero(field, alphabet, n, degree);
        for (m, c) in terms {
            if m.nvars() != n + 1 {
                return Err(Error::invalid("monomial has wrong variable count"));
            }
            if m.degree() != degree {
                return Err(Error::invalid(format!(
                    "non-homogeneous term of degree {} in degree-{} polynomial",
                    m.degree(),
                    degree
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Linear form with the given coefficient vector.
    pub fn linear(field: Field, alphabet: Alphabet, coeffs: &[Scalar]) -> Poly {
        let n = coeffs.len() - 1;
        let mut p = Poly::zero(field, alphabet, n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let v = old.add(&c);
                if !v.is_zero() {
                    self.terms.insert(m, v);
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.compatible(other)?;
        if !self.is_zero() && !other.is_zero() && self.degree != other.degree {
            return Err(Error::invalid("adding polynomials of different degrees"));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut out = Poly { degree, ..self.clone() };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut out = Poly::zero(self.field, self.alphabet, self.n, self.degree);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v.mul(c));
        }
        out
    }

    /// Homogeneous product. Errors on alphabet or ambient mismatch.
    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet.var_prefix(),
                got: other.alphabet.var_prefix(),
            });
        }
        self.compatible_ambient(other)?;
        let mut out = Poly::zero(self.field, self.alphabet, self.n, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// Apolarity contraction of a primal tensor by a dual form, in the
    /// differentiation convention. Requires characteristic 0 or `p` larger
    /// than the degree of `self`, so the multinomial factors stay units.
    ///
    /// `self` is primal of degree `d`, `q` is dual of degree `c <= d`; the
    /// result is primal of degree `d - c`.
    pub fn contract_by(&self, q: &Poly) -> Result<Poly> {
        if self.alphabet != Alphabet::Primal {
            return Err(Error::AlphabetMismatch { expected: "e", got: self.alphabet.var_prefix() });
        }
        if q.alphabet != Alphabet::Dual {
            return Err(Error::AlphabetMismatch { expected: "x", got: q.alphabet.var_prefix() });
        }
        self.compatible_ambient(q)?;
        if q.degree > self.degree {
            return Err(Error::DegreeUnderflow { top: self.degree, bottom: q.degree });
        }
        let p = self.field.characteristic();
        if p != 0 && p <= self.degree as u64 {
            return Err(Error::CharacteristicTooSmall { p, degree: self.degree });
        }
        let mut out = Poly::zero(self.field, Alphabet::Primal, self.n, self.degree - q.degree);
        for (beta, t_coeff) in &self.terms {
            for (alpha, q_coeff) in &q.terms {
                if !alpha.divides(beta) {
                    continue;
                }
                // prod_i b_i!/(b_i - a_i)!
                let mut c = t_coeff.mul(q_coeff);
                let mut rest = Vec::with_capacity(self.n + 1);
                for i in 0..=self.n {
                    let (a, b) = (alpha.exps()[i], beta.exps()[i]);
                    for k in 0..a {
                        c = c.mul_i64((b - k) as i64);
                    }
                    rest.push(b - a);
                }
                out.add_term(Monomial::new(rest), c);
            }
        }
        Ok(out)
    }

    /// Evaluates at a point (coordinates in the ambient field).
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.n + 1);
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&point[i]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Coefficient vector over `monomial_basis(n, degree)`.
    pub fn coeff_vec(&self) -> Vec<Scalar> {
        let basis = monomial_basis(self.n, self.degree);
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    fn compatible(&self, other: &Poly) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet.var_prefix(),
                got: other.alphabet.var_prefix(),
            });
        }
        self.compatible_ambient(other)
    }

    fn compatible_ambient(&self, other: &Poly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch(self.n, other.n));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let s = c.to_coeff_string();
            let (sign, mag) = if let Some(stripped) = s.strip_prefix('-') {
                ("-", stripped.to_string())
            } else {
                ("+", s)
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if mag != "1" || m.degree() == 0 {
                write!(f, "{mag}")?;
                if m.degree() > 0 {
                    write!(f, "*")?;
                }
            }
            if m.degree() > 0 {
                m.fmt_with(self.alphabet.var_prefix(), f)?;
            }
        }
        Ok(())
    }
}

/// Builds a polynomial from (exponents, integer coefficient) pairs; handy
/// for pinned constructions and tests.
pub fn poly_i64(
    field: Field,
    alphabet: Alphabet,
    n: usize,
    degree: u32,
    terms: &[(&[u32], i64)],
) -> Poly {
    Poly::from_terms(
        field,
        alphabet,
        n,
        degree,
        terms.iter().map(|(e, c)| (Monomial::new(e.to_vec()), field.from_i64(*c))),
    )
    .expect("well-formed literal polynomial")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn basis_counts_and_order() {
        assert_eq!(monomial_basis(2, 2).len(), 6);
        assert_eq!(monomial_basis(3, 3).len(), 20);
        assert_eq!(monomial_basis(4, 0).len(), 1);
        let b = monomial_basis(2, 2);
        let exps: Vec<&[u32]> = b.iter().map(|m| m.exps()).collect();
        assert_eq!(
            exps,
            vec![
                &[2, 0, 0][..],
                &[1, 1, 0],
                &[1, 0, 1],
                &[0, 2, 0],
                &[0, 1, 1],
                &[0, 0, 2]
            ]
        );
    }

    #[test]
    fn product_examples() {
        let x0 = poly_i64(q(), Alphabet::Dual, 2, 1, &[(&[1, 0, 0], 1)]);
        let x1 = poly_i64(q(), Alphabet::Dual, 2, 1, &[(&[0, 1, 0], 1)]);
        let p = x0.mul(&x1).unwrap();
        assert_eq!(p, poly_i64(q(), Alphabet::Dual, 2, 2, &[(&[1, 1, 0], 1)]));

        // (x0*x1 - x2^2) * x2
        let a = poly_i64(q(), Alphabet::Dual, 2, 2, &[(&[1, 1, 0], 1), (&[0, 0, 2], -1)]);
        let x2 = poly_i64(q(), Alphabet::Dual, 2, 1, &[(&[0, 0, 1], 1)]);
        let prod = a.mul(&x2).unwrap();
        assert_eq!(
            prod,
            poly_i64(q(), Alphabet::Dual, 2, 3, &[(&[1, 1, 1], 1), (&[0, 0, 3], -1)])
        );

        let zero = Poly::zero(q(), Alphabet::Dual, 2, 4);
        assert!(zero.mul(&a).unwrap().is_zero());

        let e0 = poly_i64(q(), Alphabet::Primal, 2, 1, &[(&[1, 0, 0], 1)]);
        assert!(matches!(e0.mul(&x2), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn contraction_examples() {
        // x0 | e0^3 = 3 e0^2
        let t = poly_i64(q(), Alphabet::Primal, 2, 3, &[(&[3, 0, 0], 1)]);
        let x0 = poly_i64(q(), Alphabet::Dual, 2, 1, &[(&[1, 0, 0], 1)]);
        assert_eq!(
            t.contract_by(&x0).unwrap(),
            poly_i64(q(), Alphabet::Primal, 2, 2, &[(&[2, 0, 0], 3)])
        );

        // x0^2 | (e0^2 l + e0 k + g) = 2 l  with l = e1, say
        let t = poly_i64(q(), Alphabet::Primal, 2, 3, &[(&[2, 1, 0], 1), (&[1, 0, 2], 5), (&[0, 3, 0], 7)]);
        let x00 = poly_i64(q(), Alphabet::Dual, 2, 2, &[(&[2, 0, 0], 1)]);
        assert_eq!(
            t.contract_by(&x00).unwrap(),
            poly_i64(q(), Alphabet::Primal, 2, 1, &[(&[0, 1, 0], 2)])
        );

        // x1*x2 | e0*e1^2 = 0
        let t = poly_i64(q(), Alphabet::Primal, 2, 3, &[(&[1, 2, 0], 1)]);
        let x12 = poly_i64(q(), Alphabet::Dual, 2, 2, &[(&[0, 1, 1], 1)]);
        assert!(t.contract_by(&x12).unwrap().is_zero());
    }

    #[test]
    fn contraction_characteristic_guard() {
        let f = Field::Prime(5);
        let t = poly_i64(f, Alphabet::Primal, 1, 6, &[(&[6, 0], 1)]);
        let x0 = poly_i64(f, Alphabet::Dual, 1, 1, &[(&[1, 0], 1)]);
        assert!(matches!(
            t.contract_by(&x0),
            Err(Error::CharacteristicTooSmall { .. })
        ));
    }

    #[test]
    fn gram_matrix_of_contraction_is_diagonal_factorials() {
        // In equal degree, <x^a, e^b> = a! * delta_ab.
        let (n, d) = (2usize, 3u32);
        let basis = monomial_basis(n, d);
        for a in &basis {
            for b in &basis {
                let t = Poly::monomial(q(), Alphabet::Primal, n, b.clone(), q().one());
                let x = Poly::monomial(q(), Alphabet::Dual, n, a.clone(), q().one());
                let v = t.contract_by(&x).unwrap();
                let got = if v.is_zero() { q().zero() } else { v.coeff(&Monomial::one(n)) };
                let expect = if a == b {
                    let mut acc = q().one();
                    for &e in a.exps() {
                        for k in 1..=e {
                            acc = acc.mul_i64(k as i64);
                        }
                    }
                    acc
                } else {
                    q().zero()
                };
                assert_eq!(got, expect, "a={a:?} b={b:?}");
            }
        }
    }
}
