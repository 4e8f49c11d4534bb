//! Antisymmetric tensors with the wedge and interior products.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Alphabet;
use crate::scalar::{Field, Scalar};

/// A step-`k` antisymmetric tensor over `n+1` coordinates, stored on the
/// basis of strictly increasing index tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multivector {
    pub alphabet: Alphabet,
    pub n: usize,
    pub field: Field,
    step: usize,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

/// All strictly increasing `k`-tuples in `0..=n`, lexicographic.
pub fn wedge_basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut tuple = Vec::with_capacity(k);
    fn rec(out: &mut Vec<Vec<usize>>, tuple: &mut Vec<usize>, start: usize, k: usize, n: usize) {
        if tuple.len() == k {
            out.push(tuple.clone());
            return;
        }
        for i in start..=n {
            tuple.push(i);
            rec(out, tuple, i + 1, k, n);
            tuple.pop();
        }
    }
    rec(&mut out, &mut tuple, 0, k, n);
    out
}

/// Sorts indices, returning the permutation sign; `None` on a repeat.
fn sort_with_sign(mut idx: Vec<usize>) -> Option<(Vec<usize>, i64)> {
    let mut sign = 1i64;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((idx, sign))
}

impl Multivector {
    pub fn zero(field: Field, alphabet: Alphabet, n: usize, step: usize) -> Multivector {
        Multivector { alphabet, n, field, step, terms: BTreeMap::new() }
    }

    /// Basis element `e_{i1} ^ ... ^ e_{ik}` (indices need not be sorted;
    /// the sign is tracked).
    pub fn basis_elem(field: Field, alphabet: Alphabet, n: usize, idx: &[usize], c: Scalar) -> Multivector {
        let mut m = Multivector::zero(field, alphabet, n, idx.len());
        m.add_term(idx.to_vec(), c);
        m
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &[usize]) -> Scalar {
        self.terms.get(idx).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, idx: Vec<usize>, c: Scalar) {
        assert_eq!(idx.len(), self.step, "tuple step mismatch");
        assert!(idx.iter().all(|&i| i <= self.n), "index out of range");
        if c.is_zero() {
            return;
        }
        let Some((sorted, sign)) = sort_with_sign(idx) else { return };
        let c = if sign < 0 { c.neg() } else { c };
        match self.terms.remove(&sorted) {
            None => {
                self.terms.insert(sorted, c);
            }
            Some(old) => {
                let v = old.add(&c);
                if !v.is_zero() {
                    self.terms.insert(sorted, v);
                }
            }
        }
    }

    pub fn add(&self, other: &Multivector) -> Result<Multivector> {
        self.compatible(other)?;
        if self.step != other.step {
            return Err(Error::invalid("adding multivectors of different steps"));
        }
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Multivector {
        let mut out = Multivector::zero(self.field, self.alphabet, self.n, self.step);
        if c.is_zero() {
            return out;
        }
        for (idx, v) in &self.terms {
            out.terms.insert(idx.clone(), v.mul(c));
        }
        out
    }

    /// Antisymmetric product with shuffle signs.
    pub fn wedge(&self, other: &Multivector) -> Result<Multivector> {
        self.compatible(other)?;
        let step = self.step + other.step;
        if step > self.n + 1 {
            return Err(Error::StepOverflow { step, max: self.n + 1 });
        }
        let mut out = Multivector::zero(self.field, self.alphabet, self.n, step);
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                let mut idx = ia.clone();
                idx.extend_from_slice(ib);
                out.add_term(idx, ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// Interior product: contraction of the first slot with the vector `v`
    /// (coordinates in the opposite alphabet).
    pub fn interior(&self, v: &[Scalar]) -> Result<Multivector> {
        if self.step == 0 {
            return Err(Error::StepOverflow { step: 0, max: self.n + 1 });
        }
        if v.len() != self.n + 1 {
            return Err(Error::AmbientMismatch(v.len(), self.n + 1));
        }
        let mut out = Multivector::zero(self.field, self.alphabet, self.n, self.step - 1);
        for (idx, c) in &self.terms {
            for (pos, &i) in idx.iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let mut rest: Vec<usize> = idx.clone();
                rest.remove(pos);
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                out.add_term(rest, c.mul(&v[i]).mul_i64(sign));
            }
        }
        Ok(out)
    }

    /// Coordinates over `wedge_basis(n, step)`.
    pub fn coeff_vec(&self) -> Vec<Scalar> {
        wedge_basis(self.n, self.step).iter().map(|idx| self.coeff(idx)).collect()
    }

    pub fn from_coeff_vec(
        field: Field,
        alphabet: Alphabet,
        n: usize,
        step: usize,
        coeffs: &[Scalar],
    ) -> Multivector {
        let basis = wedge_basis(n, step);
        assert_eq!(coeffs.len(), basis.len());
        let mut m = Multivector::zero(field, alphabet, n, step);
        for (idx, c) in basis.into_iter().zip(coeffs) {
            m.add_term(idx, c.clone());
        }
        m
    }

    fn compatible(&self, other: &Multivector) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet.var_prefix(),
                got: other.alphabet.var_prefix(),
            });
        }
        if self.n != other.n {
            return Err(Error::AmbientMismatch(self.n, other.n));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let prefix = self.alphabet.var_prefix();
        let mut first = true;
        for (idx, c) in &self.terms {
            let s = c.to_coeff_string();
            let (sign, mag) =
                if let Some(st) = s.strip_prefix('-') { ("-", st.to_string()) } else { ("+", s) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if mag != "1" {
                write!(f, "{mag}*")?;
            }
            let names: Vec<String> = idx.iter().map(|i| format!("{prefix}{i}")).collect();
            write!(f, "{}", names.join("^"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn mv(idx: &[usize], c: i64) -> Multivector {
        Multivector::basis_elem(q(), Alphabet::Primal, 5, idx, q().from_i64(c))
    }

    #[test]
    fn wedge_basic() {
        let a = mv(&[1, 2], 1);
        let b = mv(&[3, 4], 1);
        let w = a.wedge(&b).unwrap();
        assert_eq!(w.coeff(&[1, 2, 3, 4]), q().one());
        assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn rankfour_wedge_relation() {
        // (e1^e2 + e3^e4) ^ (e2^e3 + e4^e5) - 1/2 (e1^e5 + e2^e4)^2 = 0
        let w1 = mv(&[1, 2], 1).add(&mv(&[3, 4], 1)).unwrap();
        let w2 = mv(&[2, 3], 1).add(&mv(&[4, 5], 1)).unwrap();
        let w3 = mv(&[1, 5], 1).add(&mv(&[2, 4], 1)).unwrap();
        let lhs = w1.wedge(&w2).unwrap();
        let rhs = w3.wedge(&w3).unwrap().scale(&q().from_ratio(1, 2).unwrap());
        let diff = lhs.add(&rhs.scale(&q().from_i64(-1))).unwrap();
        assert!(diff.is_zero(), "relation fails: {diff}");
    }

    #[test]
    fn interior_examples() {
        let f = q();
        let x01 = Multivector::basis_elem(f, Alphabet::Dual, 2, &[0, 1], f.one());
        let e0 = [f.one(), f.zero(), f.zero()];
        let r = x01.interior(&e0).unwrap();
        assert_eq!(r.coeff(&[1]), f.one());
        assert_eq!(r.coeff(&[0]), f.zero());

        let e2 = [f.zero(), f.zero(), f.one()];
        assert!(x01.interior(&e2).unwrap().is_zero());

        // interior(e0+e2, x0^x1 + x1^x2) = x1 - x1 = 0
        let m = x01
            .add(&Multivector::basis_elem(f, Alphabet::Dual, 2, &[1, 2], f.one()))
            .unwrap();
        let v = [f.one(), f.zero(), f.one()];
        assert!(m.interior(&v).unwrap().is_zero());
    }

    #[test]
    fn step_overflow_errors() {
        let a = mv(&[0, 1, 2], 1);
        let b = mv(&[3, 4, 5], 1);
        assert!(a.wedge(&b).unwrap().coeff(&[0, 1, 2, 3, 4, 5]).is_one());
        let c = mv(&[0, 1], 1);
        assert!(matches!(
            a.wedge(&b).unwrap().wedge(&c),
            Err(Error::StepOverflow { .. })
        ));
    }
}
