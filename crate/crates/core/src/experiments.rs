//! Batch experiment drivers: seeded random sweeps over the generic
//! statements (ordinariness and generation of generic syzygy bundles,
//! corank criteria, Macaulay bounds, evaluation-kernel ranges).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::certify::{certify_section_model, CertVerdict, CertifyOptions};
use crate::error::{Error, Result};
use crate::generation::{
    drezet_gen_at, random_points, scan, structured_points, Point, Verdict,
};
use crate::ideals::{
    base_point_free, hilbert_fn, is_ordinary, syz1, BasePointVerdict, FormSpace,
};
use crate::linalg::Subspace;
use crate::model::sigma_model;
use crate::multivector::wedge_basis;
use crate::poly::{monomial_basis, Alphabet, Monomial, Poly};
use crate::scalar::{Field, Scalar};

/// One line of a sample run.
#[derive(Debug, Clone)]
pub struct SampleRow {
    pub experiment: String,
    pub trial: usize,
    pub params: String,
    pub pass: bool,
    pub detail: String,
}

/// A full experiment outcome with the aggregate rate.
#[derive(Debug, Clone)]
pub struct SampleReport {
    pub rows: Vec<SampleRow>,
}

impl SampleReport {
    pub fn passes(&self) -> usize {
        self.rows.iter().filter(|r| r.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("experiment,trial,params,pass,detail\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.experiment,
                r.trial,
                r.params.replace(',', ";"),
                r.pass,
                r.detail.replace(',', ";")
            ));
        }
        out.push_str(&format!("# passes: {}/{}\n", self.passes(), self.rows.len()));
        out
    }
}

/// Random form space of the given dimension, seeded.
pub fn random_form_space(
    field: Field,
    n: usize,
    c: u32,
    dim: usize,
    rng: &mut ChaCha20Rng,
) -> FormSpace {
    let mons = monomial_basis(n, c);
    loop {
        let basis: Vec<Poly> = (0..dim)
            .map(|_| {
                Poly::from_terms(
                    field,
                    Alphabet::Dual,
                    n,
                    c,
                    mons.iter()
                        .map(|m| (m.clone(), field.from_i64(rng.gen_range(-9i64..=9)))),
                )
                .expect("homogeneous")
            })
            .collect();
        if let Ok(p) = FormSpace::new(n, c, basis) {
            return p;
        }
    }
}

/// Generic syzygy-bundle sweep: ordinariness plus a generation scan over
/// structured and random points.
pub fn drezet_generic(
    n: usize,
    c: u32,
    dim_p: usize,
    trials: usize,
    points: usize,
    seed: u64,
) -> Result<SampleReport> {
    let field = Field::Rational;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for trial in 0..trials {
        let p = random_form_space(field, n, c, dim_p, &mut rng);
        let (ordinary, h1) = is_ordinary(&p);
        let mut pts = structured_points(field, n);
        pts.extend(random_points(field, n, points, seed ^ (trial as u64) << 8));
        let report = scan(&pts, |v| drezet_gen_at(&p, v))?;
        let pass = ordinary && report.all_generated();
        rows.push(SampleRow {
            experiment: "drezet-generic".into(),
            trial,
            params: format!("n={n} c={c} dimP={dim_p}"),
            pass,
            detail: format!(
                "ordinary={ordinary} h1={h1} syz={} failures={}",
                syz1(&p).dim(),
                report.failures.len()
            ),
        });
    }
    Ok(SampleReport { rows })
}

/// The corank-one sweep: for the hyperplane orthogonal to
/// `e0 e1 + e2^2 + ... + e_{k-1}^2`, generation holds iff `k > 2`, with
/// the failure at the distinguished point `[e0]`.
pub fn corank1(n: usize) -> Result<SampleReport> {
    let field = Field::Rational;
    let mut rows = Vec::new();
    for k in 2..=(n + 1) {
        let mut terms: Vec<(Monomial, Scalar)> = Vec::new();
        let mut exps = vec![0u32; n + 1];
        exps[0] = 1;
        exps[1] = 1;
        terms.push((Monomial::new(exps), field.one()));
        for i in 2..k {
            let mut exps = vec![0u32; n + 1];
            exps[i] = 2;
            terms.push((Monomial::new(exps), field.one()));
        }
        let t = Poly::from_terms(field, Alphabet::Primal, n, 2, terms)?;
        let p = crate::model::apolar_space(&t, 2)?;
        let (ordinary, _) = is_ordinary(&p);
        let v = Point::coordinate(field, n, 0);
        let verdict = drezet_gen_at(&p, &v)?;
        let expect_generated = k > 2;
        let mut pass = ordinary && verdict.is_generated() == expect_generated;
        let mut detail = format!("ordinary={ordinary} generated_at_e0={}", verdict.is_generated());
        if let Verdict::NotGenerated(w) = &verdict {
            // The failure witness must be the cubic e0 e1^2 modulo e0^3.
            if let crate::generation::Witness::PrimalTensor(tensor) = w {
                let e03 = crate::generation::point_power(&v, 3);
                let witness_cubic =
                    Poly::from_terms(
                        field,
                        Alphabet::Primal,
                        n,
                        3,
                        vec![(
                            Monomial::new({
                                let mut e = vec![0u32; n + 1];
                                e[0] = 1;
                                e[1] = 2;
                                e
                            }),
                            field.one(),
                        )],
                    )?;
                let dim = tensor.coeff_vec().len();
                let span = Subspace::from_rows(
                    field,
                    dim,
                    vec![e03.coeff_vec(), witness_cubic.coeff_vec()],
                );
                let ok = span.contains(&tensor.coeff_vec());
                pass = pass && ok;
                detail.push_str(&format!(" witness_in_span={ok}"));
            }
        }
        rows.push(SampleRow {
            experiment: "corank1".into(),
            trial: k,
            params: format!("n={n} k={k}"),
            pass,
            detail,
        });
    }
    Ok(SampleReport { rows })
}

/// Whether a diagonal pencil contains a member of rank exactly two, and a
/// description of one if so.
pub fn diagonal_pencil_rank_two(lambda: &[i64], mu: &[i64]) -> Option<(i64, i64)> {
    let m = lambda.len();
    for i in 0..m {
        for j in i + 1..m {
            let det = lambda[i] * mu[j] - lambda[j] * mu[i];
            if det != 0 {
                continue;
            }
            // Common annihilator (alpha, beta) of coordinates i and j.
            let (a, b) = if lambda[i] != 0 || mu[i] != 0 {
                (-mu[i], lambda[i])
            } else {
                (-mu[j], lambda[j])
            };
            if a == 0 && b == 0 {
                continue;
            }
            let nonzero = (0..m)
                .filter(|&t| a * lambda[t] + b * mu[t] != 0)
                .count();
            if nonzero == 2 {
                return Some((a, b));
            }
        }
    }
    None
}

/// Builds the form space orthogonal to a diagonal pencil on `P^n`.
pub fn diagonal_pencil_space(field: Field, lambda: &[i64], mu: &[i64]) -> Result<FormSpace> {
    let n = lambda.len() - 1;
    let mons = monomial_basis(n, 2);
    // Conditions only constrain the diagonal coefficients.
    let mut basis: Vec<Poly> = Vec::new();
    for m in &mons {
        if m.exps().iter().all(|&e| e != 2) {
            basis.push(Poly::monomial(field, Alphabet::Dual, n, m.clone(), field.one()));
        }
    }
    // Two linear conditions on the n+1 diagonal entries.
    let sys = crate::linalg::Matrix::from_rows(
        field,
        vec![
            lambda.iter().map(|&v| field.from_i64(v)).collect(),
            mu.iter().map(|&v| field.from_i64(v)).collect(),
        ],
    );
    for combo in sys.kernel_basis().basis_vectors() {
        let mut terms = Vec::new();
        for (i, c) in combo.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0u32; n + 1];
                exps[i] = 2;
                terms.push((Monomial::new(exps), c.clone()));
            }
        }
        basis.push(Poly::from_terms(field, Alphabet::Dual, n, 2, terms)?);
    }
    FormSpace::new(n, 2, basis)
}

/// Corank-two sweep on `P^3`: pencils with no rank-two member generate;
/// planted rank-two members produce failures.
pub fn corank2(trials: usize, seed: u64) -> Result<SampleReport> {
    let field = Field::Rational;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut trial = 0;
    while trial < trials {
        let lambda: Vec<i64> = (0..4).map(|_| rng.gen_range(-9i64..=9)).collect();
        let mu: Vec<i64> = (0..4).map(|_| rng.gen_range(-9i64..=9)).collect();
        // Pencil members must all have full support behavior: skip pencils
        // with a rank-two member or degenerate data.
        if lambda.iter().zip(&mu).any(|(&l, &m)| l == 0 && m == 0) {
            continue;
        }
        if diagonal_pencil_rank_two(&lambda, &mu).is_some() {
            continue;
        }
        let Ok(p) = diagonal_pencil_space(field, &lambda, &mu) else { continue };
        if p.dim() != 8 {
            continue;
        }
        let (ordinary, _) = is_ordinary(&p);
        let mut pts = structured_points(field, 3);
        pts.extend(random_points(field, 3, 60, seed ^ 0x1111 ^ (trial as u64) << 9));
        let report = scan(&pts, |v| drezet_gen_at(&p, v))?;
        rows.push(SampleRow {
            experiment: "corank2".into(),
            trial,
            params: format!("lambda={lambda:?} mu={mu:?}"),
            pass: ordinary && report.all_generated(),
            detail: format!("ordinary={ordinary} failures={}", report.failures.len()),
        });
        trial += 1;
    }
    // Planted rank-two members: the sum member is diag(1,-1,0,0).
    let planted = [
        ([2i64, 1, 1, -1], [-1i64, -2, -1, 1]),
        ([1, 1, 2, 3], [1, -3, -2, -3]),
        ([3, 2, -1, 5], [-2, -3, 1, -5]),
    ];
    for (idx, (lambda, mu)) in planted.iter().enumerate() {
        if diagonal_pencil_rank_two(lambda, mu).is_none() {
            return Err(Error::invalid("planted pencil lost its rank-two member"));
        }
        let p = diagonal_pencil_space(field, lambda, mu)?;
        let pts = structured_points(field, 3);
        let report = scan(&pts, |v| drezet_gen_at(&p, v))?;
        rows.push(SampleRow {
            experiment: "corank2-planted".into(),
            trial: idx,
            params: format!("lambda={lambda:?} mu={mu:?}"),
            pass: !report.all_generated(),
            detail: format!("failures={}", report.failures.len()),
        });
    }
    Ok(SampleReport { rows })
}

/// Macaulay bound sweep: base-point-free systems of six quadrics in four
/// variables have `dim (R/I)_3 <= 3`.
pub fn mac_bound(trials: usize, seed: u64) -> Result<SampleReport> {
    let field = Field::Rational;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut trial = 0;
    while trial < trials {
        let p = random_form_space(field, 3, 2, 6, &mut rng);
        if !matches!(base_point_free(&p, 5), BasePointVerdict::Free { .. }) {
            continue;
        }
        let h3 = hilbert_fn(field, 3, p.basis(), 3);
        rows.push(SampleRow {
            experiment: "mac-bound".into(),
            trial,
            params: "six quadrics in four variables".into(),
            pass: h3 <= 3,
            detail: format!("dim(R/I)_3 = {h3}"),
        });
        trial += 1;
    }
    Ok(SampleReport { rows })
}

/// Random section space of the given dimension inside `wedge^2 V^v`.
pub fn random_sigma(field: Field, n: usize, dim: usize, rng: &mut ChaCha20Rng) -> Subspace {
    let ambient = wedge_basis(n, 2).len();
    loop {
        let rows: Vec<Vec<Scalar>> = (0..dim)
            .map(|_| (0..ambient).map(|_| field.from_i64(rng.gen_range(-9i64..=9))).collect())
            .collect();
        let s = Subspace::from_rows(field, ambient, rows);
        if s.dim() == dim {
            return s;
        }
    }
}

/// Evaluation-kernel sweep: random section spaces in the theorem's range
/// must produce the predicted row count and certify constant rank.
pub fn sigma_range(
    n: usize,
    e: usize,
    trials: usize,
    seed: u64,
    opts: &CertifyOptions,
) -> Result<SampleReport> {
    let field = Field::Rational;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let expected_rows = (e * (n + 1)) as i64 - 2 * crate::poly::binomial(n as u64 + 1, 3) as i64;
    for trial in 0..trials {
        let sigma = random_sigma(field, n, e + n, &mut rng);
        let model = sigma_model(&sigma, n)?;
        let rows_ok = model.matrix().rows as i64 == expected_rows;
        let cert = certify_section_model(&model, opts);
        let constant = matches!(cert.verdict, CertVerdict::Constant { .. });
        rows.push(SampleRow {
            experiment: "sigma-range".into(),
            trial,
            params: format!("n={n} e={e}"),
            pass: rows_ok && constant,
            detail: format!(
                "rows={} expected={} verdict={:?} lower={:?}",
                model.matrix().rows,
                expected_rows,
                short_verdict(&cert.verdict),
                short_lower(&cert.lower)
            ),
        });
    }
    Ok(SampleReport { rows })
}

fn short_verdict(v: &CertVerdict) -> &'static str {
    match v {
        CertVerdict::Constant { .. } => "CONSTANT",
        CertVerdict::BoundedOnly { .. } => "BOUNDED_ONLY",
        CertVerdict::Refuted { .. } => "REFUTED",
        CertVerdict::Unknown => "UNKNOWN",
    }
}

fn short_lower(l: &crate::certify::LowerOutcome) -> String {
    match l {
        crate::certify::LowerOutcome::Certified { degree, .. } => format!("nullstellensatz@{degree}"),
        crate::certify::LowerOutcome::Structural { .. } => "structural".into(),
        crate::certify::LowerOutcome::LocusNonempty { locus_degree, .. } => {
            format!("nonempty(deg {locus_degree})")
        }
        crate::certify::LowerOutcome::Inconclusive { reason, .. } => format!("inconclusive: {reason}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corank1_sweep_p3() {
        let report = corank1(3).unwrap();
        assert!(report.all_pass(), "{}", report.to_csv());
    }

    #[test]
    fn corank2_small() {
        let report = corank2(3, 42).unwrap();
        assert!(report.all_pass(), "{}", report.to_csv());
    }

    #[test]
    fn mac_bound_small() {
        let report = mac_bound(5, 42).unwrap();
        assert!(report.all_pass(), "{}", report.to_csv());
    }

    #[test]
    fn drezet_generic_small() {
        let report = drezet_generic(3, 2, 7, 3, 40, 42).unwrap();
        assert!(report.all_pass(), "{}", report.to_csv());
    }
}
