//! Property suites for the module invariants, 200+ random cases each.

use proptest::prelude::*;

use constrank_core::chern::{
    chern_of_presentation, segre, DerivedOp, FormalRoots, PresentationClass, Series,
};
use constrank_core::doc::MatrixDocument;
use constrank_core::generation::{drezet_gen_at, drezet_gen_at_general, Point, Verdict, Witness};
use constrank_core::ideals::{
    h_vector, hilbert_fn, is_ordinary, macaulay_check, syz1, syzygy_forms, FormSpace,
};
use constrank_core::linalg::{Matrix, Subspace};
use constrank_core::model::{drezet_model, LinearFormMatrix};
use constrank_core::multivector::{wedge_basis, Multivector};
use constrank_core::poly::{monomial_basis, sym_dim, Alphabet, Monomial, Poly};
use constrank_core::scalar::{Field, Scalar};

fn q() -> Field {
    Field::Rational
}

fn sc(v: i64) -> Scalar {
    q().from_i64(v)
}

/// Random homogeneous polynomial of the given degree.
fn poly_strategy(alphabet: Alphabet, n: usize, d: u32) -> impl Strategy<Value = Poly> {
    let dim = sym_dim(n, d);
    proptest::collection::vec(-9i64..=9, dim).prop_map(move |coeffs| {
        Poly::from_terms(
            q(),
            alphabet,
            n,
            d,
            monomial_basis(n, d).into_iter().zip(coeffs.into_iter().map(sc)),
        )
        .unwrap()
    })
}

fn multivector_strategy(n: usize, k: usize) -> impl Strategy<Value = Multivector> {
    let dim = wedge_basis(n, k).len();
    proptest::collection::vec(-9i64..=9, dim).prop_map(move |coeffs| {
        let cs: Vec<Scalar> = coeffs.into_iter().map(sc).collect();
        Multivector::from_coeff_vec(q(), Alphabet::Primal, n, k, &cs)
    })
}

fn matrix_strategy(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-9i64..=9, rows * cols).prop_map(move |v| {
        Matrix::from_fn(q(), rows, cols, |i, j| sc(v[i * cols + j]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(220))]

    // Contraction composition: (x^a | (x^g | T)) = (x^{a+g} | T).
    #[test]
    fn contraction_composition(
        t in poly_strategy(Alphabet::Primal, 2, 5),
        a in proptest::collection::vec(0u32..=2, 3),
        g in proptest::collection::vec(0u32..=2, 3),
    ) {
        let da: u32 = a.iter().sum();
        let dg: u32 = g.iter().sum();
        prop_assume!(da + dg <= 5);
        let xa = Poly::monomial(q(), Alphabet::Dual, 2, Monomial::new(a.clone()), sc(1));
        let xg = Poly::monomial(q(), Alphabet::Dual, 2, Monomial::new(g.clone()), sc(1));
        let combined = Monomial::new(a.iter().zip(&g).map(|(x, y)| x + y).collect());
        let xag = Poly::monomial(q(), Alphabet::Dual, 2, combined, sc(1));
        let lhs = t.contract_by(&xg).unwrap().contract_by(&xa).unwrap();
        let rhs = t.contract_by(&xag).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    // Wedge is graded-anticommutative.
    #[test]
    fn wedge_graded_anticommutative(
        a in multivector_strategy(5, 2),
        b in multivector_strategy(5, 3),
    ) {
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let sign = if (a.step() * b.step()) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(ab, ba.scale(&sc(sign)));
    }

    // Interior contraction is an antiderivation.
    #[test]
    fn interior_antiderivation(
        a in multivector_strategy(5, 2),
        b in multivector_strategy(5, 2),
        v in proptest::collection::vec(-9i64..=9, 6),
    ) {
        let vv: Vec<Scalar> = v.into_iter().map(sc).collect();
        let lhs = a.wedge(&b).unwrap().interior(&vv).unwrap();
        let term1 = a.interior(&vv).unwrap().wedge(&b).unwrap();
        let term2 = a.wedge(&b.interior(&vv).unwrap()).unwrap();
        let sign = if a.step() % 2 == 0 { 1 } else { -1 };
        let rhs = term1.add(&term2.scale(&sc(sign))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    // Rank-nullity over random matrices.
    #[test]
    fn rank_nullity(m in matrix_strategy(5, 8)) {
        prop_assert_eq!(m.rank() + m.kernel_basis().dim(), m.cols);
        // Kernel really annihilates.
        for v in m.kernel_basis().basis_vectors() {
            let col = Matrix::from_rows(q(), vec![v]).transpose();
            let prod = m.mul(&col);
            for i in 0..prod.rows {
                prop_assert!(prod.get(i, 0).is_zero());
            }
        }
    }

    // Equal row spaces produce identical canonical RREF.
    #[test]
    fn rref_canonical(m in matrix_strategy(4, 6), u in matrix_strategy(4, 4)) {
        prop_assume!(u.rank() == 4);
        let transformed = u.mul(&m);
        prop_assert_eq!(m.rref().0, transformed.rref().0);
        // Idempotence.
        let (r, _) = m.rref();
        prop_assert_eq!(r.rref().0, r);
    }

    // Grassmann dimension formula on random subspace pairs.
    #[test]
    fn grassmann_formula(a in matrix_strategy(4, 7), b in matrix_strategy(5, 7)) {
        let sa = Subspace::from_rows(q(), 7, (0..a.rows).map(|i| a.row(i).to_vec()).collect());
        let sb = Subspace::from_rows(q(), 7, (0..b.rows).map(|i| b.row(i).to_vec()).collect());
        let inter = sa.intersect(&sb).unwrap();
        let sum = sa.sum(&sb).unwrap();
        prop_assert_eq!(inter.dim() + sum.dim(), sa.dim() + sb.dim());
        // The intersection is inside both.
        prop_assert!(sa.contains_subspace(&inter));
        prop_assert!(sb.contains_subspace(&inter));
    }

    // Containment of explicit row combinations.
    #[test]
    fn contains_row_combinations(m in matrix_strategy(3, 6), c in proptest::collection::vec(-9i64..=9, 3)) {
        let s = Subspace::from_rows(q(), 6, (0..m.rows).map(|i| m.row(i).to_vec()).collect());
        let mut v = vec![sc(0); 6];
        for (i, coeff) in c.iter().enumerate() {
            for j in 0..6 {
                v[j] = v[j].add(&sc(*coeff).mul(m.get(i, j)));
            }
        }
        prop_assert!(s.contains(&v));
    }

    // c(E) * s(E) = 1 for every presentation class.
    #[test]
    fn chern_times_segre_is_one(
        n in 2usize..=5,
        c in 1u32..=3,
        e in 4usize..=8,
    ) {
        let classes = [
            PresentationClass::Quotient { n },
            PresentationClass::Drezet { n, c, e },
            PresentationClass::Steiner { n, c, e },
        ];
        for class in classes {
            let ch = chern_of_presentation(class, n).unwrap();
            let s = segre(&ch).unwrap();
            prop_assert_eq!(ch.mul(&s), Series::one(n));
        }
    }

    // Whitney multiplicativity on random split series, plus the dual
    // involution and twist additivity through formal roots.
    #[test]
    fn whitney_and_root_transforms(
        a in proptest::collection::vec(-5i64..=5, 4),
        b in proptest::collection::vec(-5i64..=5, 4),
        t1 in -2i64..=2,
        t2 in -2i64..=2,
    ) {
        let n = 4;
        let mut ca = vec![1i64];
        ca.extend(&a);
        let mut cb = vec![1i64];
        cb.extend(&b);
        let sa = Series::from_i64(n, &ca);
        let sb = Series::from_i64(n, &cb);
        // Whitney: the direct sum multiplies total classes; here the sum
        // of a rank-4 and a rank-4 split is rank 8 with product series.
        let product = sa.mul(&sb);
        let ra = FormalRoots::from_chern(&sa, 4);
        prop_assert_eq!(
            ra.apply(DerivedOp::Dual).unwrap().apply(DerivedOp::Dual).unwrap().chern(),
            sa.clone()
        );
        let tw = ra
            .apply(DerivedOp::Twist(t1)).unwrap()
            .apply(DerivedOp::Twist(t2)).unwrap()
            .chern();
        prop_assert_eq!(tw, ra.apply(DerivedOp::Twist(t1 + t2)).unwrap().chern());
        // c1 additivity from the product series.
        prop_assert_eq!(product.coeff(1), sa.coeff(1) + sb.coeff(1));
    }

    // c1 bookkeeping: c1(E) + c1(E^v(1)) = rank for every presentation.
    #[test]
    fn c1_bookkeeping(n in 2usize..=5, c in 1u32..=3, e in 4usize..=8) {
        for class in [
            PresentationClass::Quotient { n },
            PresentationClass::Drezet { n, c, e },
            PresentationClass::Steiner { n, c, e },
        ] {
            let rank = match class {
                PresentationClass::Quotient { n } => n,
                _ => e,
            };
            let ch = chern_of_presentation(class, n).unwrap();
            let dt = FormalRoots::from_chern(&ch, rank)
                .apply(DerivedOp::Dual).unwrap()
                .apply(DerivedOp::Twist(1)).unwrap()
                .chern();
            let want = num_rational::BigRational::from_integer((rank as i64).into());
            prop_assert_eq!(ch.coeff(1) + dt.coeff(1), want);
        }
    }
}

/// Random independent form space over P^2 quadrics.
fn form_space_strategy(n: usize, c: u32, dim: usize) -> impl Strategy<Value = FormSpace> {
    let full = sym_dim(n, c);
    proptest::collection::vec(-9i64..=9, dim * full).prop_filter_map(
        "independent basis",
        move |coeffs| {
            let basis: Vec<Poly> = (0..dim)
                .map(|i| {
                    Poly::from_terms(
                        q(),
                        Alphabet::Dual,
                        n,
                        c,
                        monomial_basis(n, c)
                            .into_iter()
                            .zip(coeffs[i * full..(i + 1) * full].iter().map(|&v| sc(v))),
                    )
                    .unwrap()
                })
                .collect();
            FormSpace::new(n, c, basis).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // Syzygy dimension bookkeeping: rank-nullity on the multiplication map.
    #[test]
    fn syzygy_dimension_formula(p in form_space_strategy(2, 2, 5)) {
        let syz = syz1(&p);
        let (_, coker) = is_ordinary(&p);
        let expected = (p.n + 1) * p.dim() + coker - sym_dim(p.n, p.c + 1);
        prop_assert_eq!(syz.dim(), expected);
    }

    // Every syzygy row of a model is literally a relation.
    #[test]
    fn syzygy_rows_are_relations(p in form_space_strategy(2, 2, 5)) {
        for syzygy in syzygy_forms(&p, &syz1(&p)) {
            let mut acc = Poly::zero(q(), Alphabet::Dual, 2, 3);
            for (l, form) in syzygy.iter().zip(p.basis()) {
                acc = acc.add(&l.mul(form).unwrap()).unwrap();
            }
            prop_assert!(acc.is_zero());
        }
    }

    // Inheritance at the syzygy level: extending the basis can only grow
    // the syzygy space, and zero-padded syzygies stay syzygies.
    #[test]
    fn syzygy_inheritance(p in form_space_strategy(2, 2, 6)) {
        let small = FormSpace::new(2, 2, p.basis()[..5].to_vec()).unwrap();
        let small_syz = syz1(&small);
        let big_syz = syz1(&p);
        prop_assert!(small_syz.dim() <= big_syz.dim());
        // Zero-padding embeds the small syzygies into the big space.
        let nv = 3;
        for row in small_syz.basis_vectors() {
            let mut padded = row.clone();
            padded.extend(vec![sc(0); nv]);
            prop_assert!(big_syz.contains(&padded));
        }
    }

    // Hilbert functions of sampled quadric ideals satisfy the Macaulay
    // growth bound through degree 6.
    #[test]
    fn sampled_hilbert_functions_pass_macaulay(p in form_space_strategy(3, 2, 4)) {
        if let Ok(h) = h_vector(q(), 3, p.basis(), 8) {
            prop_assert!(macaulay_check(&h), "h = {:?}", h.values());
        } else {
            // Not Artinian by degree 8: still check the finite prefix.
            let values: Vec<u64> =
                (0..=6u32).map(|t| hilbert_fn(q(), 3, p.basis(), t) as u64).collect();
            for t in 1..=5usize {
                let bound = constrank_core::ideals::macaulay_upper(values[t], t as u64).unwrap();
                prop_assert!(values[t + 1] <= bound);
            }
        }
    }

    // Generation verdicts are invariant under scaling the point.
    #[test]
    fn verdict_scale_invariance(
        p in form_space_strategy(2, 2, 5),
        v in proptest::collection::vec(-9i64..=9, 3),
        lambda in 1i64..=9,
    ) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let (ordinary, _) = is_ordinary(&p);
        prop_assume!(ordinary);
        let pt = Point::from_i64(q(), &v).unwrap();
        let scaled = Point::new(pt.coords().iter().map(|c| c.mul_i64(-lambda)).collect()).unwrap();
        let a = drezet_gen_at(&p, &pt).unwrap();
        let b = drezet_gen_at(&p, &scaled).unwrap();
        prop_assert_eq!(a.is_generated(), b.is_generated());
    }

    // The two generation criteria agree on ordinary spaces, and failure
    // witnesses re-verify independently.
    #[test]
    fn criteria_agree_and_witnesses_verify(
        p in form_space_strategy(2, 2, 4),
        v in proptest::collection::vec(-5i64..=5, 3),
    ) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let (ordinary, _) = is_ordinary(&p);
        prop_assume!(ordinary);
        let pt = Point::from_i64(q(), &v).unwrap();
        let a = drezet_gen_at(&p, &pt).unwrap();
        let b = drezet_gen_at_general(&p, &pt).unwrap();
        prop_assert_eq!(a.is_generated(), b.is_generated());
        if let Verdict::NotGenerated(Witness::PrimalTensor(t)) = &a {
            // Contracting the witness by every element of P must land in
            // the line through the point.
            let vpoly = Poly::linear(q(), Alphabet::Primal, pt.coords());
            for form in p.basis() {
                let image = t.contract_by(form).unwrap();
                // image ^ v = 0 as vectors: check proportionality by 2x2 minors.
                for i in 0..3 {
                    for j in i + 1..3 {
                        let mi = Monomial::var(2, i);
                        let mj = Monomial::var(2, j);
                        let det = image.coeff(&mi).mul(&vpoly.coeff(&mj))
                            .sub(&image.coeff(&mj).mul(&vpoly.coeff(&mi)));
                        prop_assert!(det.is_zero());
                    }
                }
            }
        }
    }

    // Matrix documents round-trip exactly.
    #[test]
    fn matrix_document_round_trip(
        coeffs in proptest::collection::vec(-99i64..=99, 2 * 3 * 3),
        dens in proptest::collection::vec(1i64..=9, 2 * 3 * 3),
    ) {
        let mut m = LinearFormMatrix::zero(q(), 2, 2, 3);
        for i in 0..2 {
            for j in 0..3 {
                for k in 0..3 {
                    let at = (i * 3 + j) * 3 + k;
                    m.set_coeff(i, j, k, q().from_ratio(coeffs[at], dens[at]).unwrap());
                }
            }
        }
        let doc = MatrixDocument::from_matrix(&m, "prop", "property test", None);
        let back = MatrixDocument::from_json(&doc.to_json()).unwrap().to_matrix().unwrap();
        prop_assert_eq!(back, m);
    }
}

proptest! {
    // Heavier cases: fewer iterations but still well beyond the spot-check
    // threshold when combined with the suites above.
    #![proptest_config(ProptestConfig::with_cases(200))]

    // Generation monotonicity along inclusions (ordinary small space
    // generated at v implies the bigger space is generated at v).
    #[test]
    fn generation_monotone_under_inclusion(
        p in form_space_strategy(2, 2, 6),
        v in proptest::collection::vec(-5i64..=5, 3),
    ) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let small = FormSpace::new(2, 2, p.basis()[..5].to_vec()).unwrap();
        let (ord_small, _) = is_ordinary(&small);
        prop_assume!(ord_small);
        let pt = Point::from_i64(q(), &v).unwrap();
        if drezet_gen_at(&small, &pt).unwrap().is_generated() {
            prop_assert!(drezet_gen_at_general(&p, &pt).unwrap().is_generated());
        }
    }
}

#[test]
fn drezet_models_on_random_spaces_have_syzygy_rows() {
    // Non-proptest batch: the constructor path end to end, 200 spaces.
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(2024);
    let mons = monomial_basis(2, 2);
    let mut built = 0;
    while built < 200 {
        let basis: Vec<Poly> = (0..5)
            .map(|_| {
                Poly::from_terms(
                    q(),
                    Alphabet::Dual,
                    2,
                    2,
                    mons.iter().map(|m| (m.clone(), sc(rng.gen_range(-9i64..=9)))),
                )
                .unwrap()
            })
            .collect();
        let Ok(p) = FormSpace::new(2, 2, basis) else { continue };
        let Ok(model) = drezet_model(&p, true) else { continue };
        for i in 0..model.matrix().rows {
            let mut acc = Poly::zero(q(), Alphabet::Dual, 2, 3);
            for j in 0..model.matrix().cols {
                acc = acc.add(&model.matrix().entry(i, j).mul(&p.basis()[j]).unwrap()).unwrap();
            }
            assert!(acc.is_zero());
        }
        built += 1;
    }
}
