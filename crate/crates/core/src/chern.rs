//! Truncated Chern/Segre calculus in the hyperplane class.
//!
//! Series live in `Z[h]/(h^{n+1})` with exact rational coefficients.
//! Derived bundles (duals, twists, exterior and symmetric squares) are
//! handled through formal roots, converting between elementary symmetric
//! functions and power sums with the Newton identities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::binomial;

/// A polynomial in the hyperplane class `h`, truncated at `h^{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    pub n: usize,
    coeffs: Vec<BigRational>,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl Series {
    pub fn one(n: usize) -> Series {
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[0] = BigRational::one();
        Series { n, coeffs }
    }

    pub fn from_coeffs(n: usize, mut coeffs: Vec<BigRational>) -> Series {
        coeffs.resize(n + 1, BigRational::zero());
        Series { n, coeffs }
    }

    pub fn from_i64(n: usize, coeffs: &[i64]) -> Series {
        Series::from_coeffs(n, coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// `1 + a*h`.
    pub fn linear(n: usize, a: i64) -> Series {
        let mut s = Series::one(n);
        if n >= 1 {
            s.coeffs[1] = rat(a);
        }
        s
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn mul(&self, other: &Series) -> Series {
        assert_eq!(self.n, other.n, "series truncation mismatch");
        let mut coeffs = vec![BigRational::zero(); self.n + 1];
        for i in 0..=self.n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=self.n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        Series { n: self.n, coeffs }
    }

    /// Multiplicative inverse mod `h^{n+1}`; requires constant term 1.
    pub fn inv(&self) -> Result<Series> {
        if !self.coeffs[0].is_one() {
            return Err(Error::invalid("series inversion needs constant term 1"));
        }
        let mut out = vec![BigRational::zero(); self.n + 1];
        out[0] = BigRational::one();
        for k in 1..=self.n {
            let mut acc = BigRational::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &out[k - i];
            }
            out[k] = -acc;
        }
        Ok(Series { n: self.n, coeffs: out })
    }

    pub fn pow(&self, e: i64) -> Result<Series> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Series::one(self.n);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

/// Formal Chern roots of a rank-`e` bundle: power sums `p_1..p_n` of the
/// roots, with `c_k` truncated to zero beyond `min(e, n)`.
#[derive(Debug, Clone)]
pub struct FormalRoots {
    pub rank: usize,
    pub n: usize,
    power_sums: Vec<BigRational>,
}

/// Derived-bundle operations on formal roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivedOp {
    Dual,
    Twist(i64),
    Wedge2,
    Sym2,
}

impl FormalRoots {
    /// Reads roots from a total Chern class.
    pub fn from_chern(c: &Series, rank: usize) -> FormalRoots {
        let n = c.n;
        // sigma_k, zero beyond min(rank, n).
        let mut sigma = vec![BigRational::zero(); n + 1];
        for k in 1..=n.min(rank) {
            sigma[k] = c.coeff(k);
        }
        // Newton: p_k = sigma_1 p_{k-1} - sigma_2 p_{k-2} + ... + (-1)^{k-1} k sigma_k
        let mut p = vec![BigRational::zero(); n + 1];
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for i in 1..k {
                let sgn = if (i - 1) % 2 == 0 { 1 } else { -1 };
                acc += rat(sgn) * &sigma[i] * &p[k - i];
            }
            let sgn = if (k - 1) % 2 == 0 { 1 } else { -1 };
            acc += rat(sgn) * rat(k as i64) * &sigma[k];
            p[k] = acc;
        }
        FormalRoots { rank, n, power_sums: p }
    }

    /// Total Chern class recovered from the power sums.
    pub fn chern(&self) -> Series {
        let n = self.n;
        let mut sigma = vec![BigRational::zero(); n + 1];
        sigma[0] = BigRational::one();
        for k in 1..=n {
            // sigma_k = (1/k) * sum_{i=1..k} (-1)^{i-1} sigma_{k-i} p_i
            let mut acc = BigRational::zero();
            for i in 1..=k {
                let sgn = if (i - 1) % 2 == 0 { 1 } else { -1 };
                acc += rat(sgn) * &sigma[k - i] * &self.power_sums[i];
            }
            sigma[k] = acc / rat(k as i64);
        }
        for k in 1..=n {
            if k > self.rank {
                sigma[k] = BigRational::zero();
            }
        }
        Series::from_coeffs(n, sigma)
    }

    pub fn apply(&self, op: DerivedOp) -> Result<FormalRoots> {
        let n = self.n;
        let e = self.rank;
        let p = &self.power_sums;
        let p0 = rat(e as i64);
        let at = |k: usize| -> BigRational {
            if k == 0 {
                p0.clone()
            } else {
                p[k].clone()
            }
        };
        let (rank, sums): (usize, Vec<BigRational>) = match op {
            DerivedOp::Dual => (
                e,
                (0..=n)
                    .map(|k| if k % 2 == 0 { at(k) } else { -at(k) })
                    .collect(),
            ),
            DerivedOp::Twist(t) => (
                e,
                (0..=n)
                    .map(|k| {
                        let mut acc = BigRational::zero();
                        for j in 0..=k {
                            let b = rat(binomial(k as u64, j as u64) as i64);
                            let tp = rat(t).pow((k - j) as i32);
                            acc += b * tp * at(j);
                        }
                        acc
                    })
                    .collect(),
            ),
            DerivedOp::Wedge2 => {
                if e < 2 {
                    return Err(Error::invalid("wedge square needs rank >= 2"));
                }
                let rank = (e * (e - 1)) / 2;
                let sums = (0..=n)
                    .map(|k| {
                        let mut conv = BigRational::zero();
                        for m in 0..=k {
                            conv += rat(binomial(k as u64, m as u64) as i64) * at(m) * at(k - m);
                        }
                        let two_k = rat(2).pow(k as i32);
                        (conv - two_k * at(k)) / rat(2)
                    })
                    .collect();
                (rank, sums)
            }
            DerivedOp::Sym2 => {
                if e < 2 {
                    return Err(Error::invalid("symmetric square needs rank >= 2"));
                }
                let rank = (e * (e + 1)) / 2;
                let sums = (0..=n)
                    .map(|k| {
                        let mut conv = BigRational::zero();
                        for m in 0..=k {
                            conv += rat(binomial(k as u64, m as u64) as i64) * at(m) * at(k - m);
                        }
                        let two_k = rat(2).pow(k as i32);
                        (conv + two_k * at(k)) / rat(2)
                    })
                    .collect();
                (rank, sums)
            }
        };
        let mut power_sums = sums;
        power_sums[0] = rat(rank as i64);
        Ok(FormalRoots { rank, n, power_sums })
    }
}

/// Presentation shapes the series calculus understands directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresentationClass {
    /// Trivial bundle of any rank.
    Trivial,
    /// `0 -> O(-1) -> O^{n+1} -> Q -> 0` on `P^n`.
    Quotient { n: usize },
    /// Second exterior power of the quotient bundle on `P^4`.
    Wedge2Q,
    /// `0 -> O(-c) -> O^{e+1} -> E -> 0`.
    Drezet { n: usize, c: u32, e: usize },
    /// `0 -> O(-1)^c -> O^{e+c} -> E -> 0` (castled presentations included).
    Steiner { n: usize, c: u32, e: usize },
    /// `0 -> O(-1) + O(-2) -> O^{e+2} -> E -> 0`.
    Mixed { n: usize, e: usize },
    /// Twisted evaluation kernel of `Q^v(1)` on sections `Sigma`.
    Sigma { n: usize, e: usize },
}

/// Total Chern class of the presented bundle, by Whitney multiplicativity
/// along the defining exact sequence.
pub fn chern_of_presentation(p: PresentationClass, n: usize) -> Result<Series> {
    match p {
        PresentationClass::Trivial => Ok(Series::one(n)),
        PresentationClass::Quotient { n: m } => {
            check_n(m, n)?;
            Series::linear(n, -1).inv()
        }
        PresentationClass::Wedge2Q => {
            check_n(4, n)?;
            let q = Series::linear(n, -1).inv()?;
            let roots = FormalRoots::from_chern(&q, 4);
            Ok(roots.apply(DerivedOp::Wedge2)?.chern())
        }
        PresentationClass::Drezet { n: m, c, .. } => {
            check_n(m, n)?;
            Series::linear(n, -(c as i64)).inv()
        }
        PresentationClass::Steiner { n: m, c, .. } => {
            check_n(m, n)?;
            Series::linear(n, -1).pow(-(c as i64))
        }
        PresentationClass::Mixed { n: m, .. } => {
            check_n(m, n)?;
            Series::linear(n, -1).mul(&Series::linear(n, -2)).inv()
        }
        PresentationClass::Sigma { n: m, e } => {
            check_n(m, n)?;
            // F = Q^v(1); K_e = ker(Sigma (x) O -> F); E = K_e(1).
            let q = Series::linear(n, -1).inv()?;
            let f = FormalRoots::from_chern(&q, n)
                .apply(DerivedOp::Dual)?
                .apply(DerivedOp::Twist(1))?;
            let k = f.chern().inv()?;
            let e_roots = FormalRoots::from_chern(&k, e).apply(DerivedOp::Twist(1))?;
            Ok(e_roots.chern())
        }
    }
}

fn check_n(m: usize, n: usize) -> Result<()> {
    if m != n {
        return Err(Error::AmbientMismatch(m, n));
    }
    Ok(())
}

/// Total Segre class, the inverse of the total Chern class.
pub fn segre(c: &Series) -> Result<Series> {
    c.inv()
}

/// Minimal number of general sections generating a rank-`e` bundle at
/// every point: `e - 1 + min{k >= 0 : s_k = 0}`, or `e + n` when no Segre
/// coefficient vanishes in the truncation.
pub fn min_generating_sections(chern: &Series, e: usize) -> Result<usize> {
    let s = segre(chern)?;
    for k in 0..=chern.n {
        if s.coeff(k).is_zero() {
            return Ok(e - 1 + k);
        }
    }
    Ok(e + chern.n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_inverse() {
        let s = Series::linear(4, -1).inv().unwrap();
        assert_eq!(s, Series::from_i64(4, &[1, 1, 1, 1, 1]));
    }

    #[test]
    fn quotient_dual_twist_segre_on_p4() {
        // The series (1-2h)/(1-h)^5 expands to 1+3h+5h^2+5h^3+0h^4.
        let direct = Series::linear(4, -2).mul(&Series::linear(4, -1).pow(-5).unwrap());
        assert_eq!(direct, Series::from_i64(4, &[1, 3, 5, 5, 0]));

        // s(Q^v(1)) itself is (1+2h)/(1+h)^5, the same sequence up to the
        // sign flip h -> -h forced by c_1(Q^v(1)) = 3. The vanishing index
        // and section count are the sign-independent content.
        let q = chern_of_presentation(PresentationClass::Quotient { n: 4 }, 4).unwrap();
        let dt = FormalRoots::from_chern(&q, 4)
            .apply(DerivedOp::Dual)
            .unwrap()
            .apply(DerivedOp::Twist(1))
            .unwrap()
            .chern();
        let s = segre(&dt).unwrap();
        assert_eq!(s, Series::linear(4, 2).mul(&Series::linear(4, 1).pow(-5).unwrap()));
        assert_eq!(s, Series::from_i64(4, &[1, -3, 5, -5, 0]));
        assert_eq!(dt.coeff(1), rat(3));
        assert_eq!(min_generating_sections(&dt, 4).unwrap(), 7);
    }

    #[test]
    fn wedge2q_segre_and_section_count() {
        let c = chern_of_presentation(PresentationClass::Wedge2Q, 4).unwrap();
        let s = segre(&c).unwrap();
        // s(^2 Q) = (1-h)^5/(1-2h), so s_4 = 1.
        let direct = Series::linear(4, -1)
            .pow(5)
            .unwrap()
            .mul(&Series::linear(4, -2).inv().unwrap());
        assert_eq!(s, direct);
        assert_eq!(s.coeff(4), rat(1));
        assert_eq!(min_generating_sections(&c, 6).unwrap(), 10);
    }

    #[test]
    fn drezet_segre_is_one_minus_ch() {
        for (n, c) in [(2usize, 2i64), (3, 2), (2, 3), (4, 3)] {
            let ch =
                chern_of_presentation(PresentationClass::Drezet { n, c: c as u32, e: 0 }, n)
                    .unwrap();
            let s = segre(&ch).unwrap();
            let mut expect = Series::one(n);
            expect = expect.mul(&Series::linear(n, -c));
            assert_eq!(s, expect);
        }
    }

    #[test]
    fn steiner_chern_binomials() {
        let c = chern_of_presentation(PresentationClass::Steiner { n: 4, c: 3, e: 9 }, 4).unwrap();
        for k in 0..=4usize {
            assert_eq!(c.coeff(k), rat(binomial(3 + k as u64 - 1, k as u64) as i64));
        }
    }

    #[test]
    fn rank6_drezet_dual_twist_on_p3() {
        // s(E_P^v(1)) = (1+3h)/(1+h)^7 has s_3 = 0; a_min = 8.
        let ch = chern_of_presentation(PresentationClass::Drezet { n: 3, c: 2, e: 6 }, 3).unwrap();
        let dt = FormalRoots::from_chern(&ch, 6)
            .apply(DerivedOp::Dual)
            .unwrap()
            .apply(DerivedOp::Twist(1))
            .unwrap()
            .chern();
        let s = segre(&dt).unwrap();
        let direct = Series::linear(3, 3).mul(&Series::linear(3, 1).pow(-7).unwrap());
        assert_eq!(s, direct);
        assert!(s.coeff(3).is_zero());
        assert_eq!(min_generating_sections(&dt, 6).unwrap(), 8);
    }

    #[test]
    fn twist_zero_is_identity_and_dual_involutive() {
        let c = chern_of_presentation(PresentationClass::Quotient { n: 4 }, 4).unwrap();
        let r = FormalRoots::from_chern(&c, 4);
        assert_eq!(r.apply(DerivedOp::Twist(0)).unwrap().chern(), c);
        assert_eq!(
            r.apply(DerivedOp::Dual).unwrap().apply(DerivedOp::Dual).unwrap().chern(),
            c
        );
    }

    #[test]
    fn sigma_presentation_c1() {
        // c_1(E) = e - n + 1 for the evaluation-kernel models.
        for e in [13usize, 14, 15] {
            let c = chern_of_presentation(PresentationClass::Sigma { n: 6, e }, 6).unwrap();
            assert_eq!(c.coeff(1), rat((e - 6 + 1) as i64));
        }
    }
}
