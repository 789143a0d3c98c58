use hyperform_core::matrix::Matrix;
use hyperform_core::oracle::{local_zero_oracle, LocalZero};
use hyperform_core::primes::odd_prime_divisors;
use hyperform_core::qforms::{
    diagonalize, equivalent_over_q, global_anisotropic, hasse_invariant, isotropy_search,
    local_anisotropic, local_anisotropic_rank4, projectively_equivalent, signature,
    ternary_represents, DiagonalForm, Signature, SymmetricRationalMatrix,
};
use hyperform_core::{Error, Place, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

fn form(c: &[i64]) -> DiagonalForm {
    DiagonalForm::from_i64s(c).unwrap()
}

fn coeff() -> impl Strategy<Value = i64> {
    prop_oneof![-20i64..=-1, 1i64..=20]
}

/// Exhaustive oracle: isotropic over Q_p iff the brute-force search finds a
/// liftable zero.
fn oracle_isotropic(f: &DiagonalForm, v: &Place) -> bool {
    match local_zero_oracle(f.coeffs(), v, 64).unwrap() {
        LocalZero::Isotropic { .. } => true,
        LocalZero::Anisotropic => false,
        LocalZero::Indeterminate => panic!("oracle indeterminate for {f} at {v}"),
    }
}

#[test]
fn signature_examples() {
    assert_eq!(signature(&form(&[1, 1, 1, 1, -1])), Signature { positives: 4, negatives: 1 });
    assert_eq!(signature(&form(&[-1])), Signature { positives: 0, negatives: 1 });
    assert_eq!(signature(&form(&[1, 1, 1, 7, -7])), Signature { positives: 4, negatives: 1 });
}

#[test]
fn form_text_round_trip() {
    let f: DiagonalForm = "<1, 1, 1, -7>".parse().unwrap();
    assert_eq!(f, form(&[1, 1, 1, -7]));
    assert_eq!(f.to_string().parse::<DiagonalForm>().unwrap(), f);
    assert!("<1,0>".parse::<DiagonalForm>().is_err());
    assert!("<>".parse::<DiagonalForm>().is_err());
}

#[test]
fn hasse_examples() {
    for v in [Place::Real, Place::Two, Place::odd(3).unwrap(), Place::odd(7).unwrap()] {
        assert_eq!(hasse_invariant(&form(&[1, 1, 1, 1]), &v).unwrap(), Sign::Plus);
    }
    assert_eq!(hasse_invariant(&form(&[1, 1, 1, -7]), &Place::Two).unwrap(), Sign::Plus);
}

#[test]
fn hasse_two_adic_simplification() {
    // c_2(<-q, 1, aS, a>) = (-q, S)_2 (a, -S)_2 whenever -qS is 1 mod 8
    use hyperform_core::padic::hilbert;
    for q in [3i64, 7, 11, 19, 23, 43] {
        for a in [3i64, 5, 7, 13, 37] {
            for s in [5i64, 13, 21, 65, 85] {
                if (-q * s).rem_euclid(8) != 1 {
                    continue;
                }
                let f = form(&[-q, 1, a * s, a]);
                let direct = hasse_invariant(&f, &Place::Two).unwrap();
                let simplified = hilbert(&b(-q), &b(s), &Place::Two).unwrap()
                    * hilbert(&b(a), &b(-s), &Place::Two).unwrap();
                assert_eq!(direct, simplified, "q={q} a={a} S={s}");
            }
        }
    }
}

#[test]
fn rank4_examples() {
    assert!(local_anisotropic_rank4(&form(&[1, 1, 1, -7]), &Place::Two).unwrap());
    for v in [Place::Two, Place::odd(3).unwrap(), Place::odd(5).unwrap()] {
        assert!(!local_anisotropic_rank4(&form(&[1, 1, 1, -1]), &v).unwrap());
    }
    for p in [7, 23, 31, 47, 71] {
        let f = form(&[1, 1, 1, -p]);
        assert!(local_anisotropic_rank4(&f, &Place::Two).unwrap());
        assert!(!oracle_isotropic(&f, &Place::Two));
    }
    assert!(matches!(
        local_anisotropic_rank4(&form(&[1, 1, 1]), &Place::Two),
        Err(Error::WrongRank { .. })
    ));
    assert!(matches!(
        local_anisotropic_rank4(&form(&[1, 1, 1, -7]), &Place::Real),
        Err(Error::RealPlaceNotAllowed)
    ));
}

#[test]
fn ternary_represents_examples() {
    let (q, p) = (5i64, 3i64);
    let g = form(&[1, q, -p * p]);
    for s in [1i64, 3, 7, 11, 15] {
        assert!(ternary_represents(&g, &b(s), &Place::Real).unwrap());
        assert!(ternary_represents(&g, &b(s), &Place::odd(q).unwrap()).unwrap());
    }
    assert!(!ternary_represents(&form(&[1, 1, 1]), &b(-1), &Place::Real).unwrap());
    assert!(ternary_represents(&form(&[1, 2]), &b(1), &Place::Two).is_err());
}

#[test]
fn ternary_represents_matches_oracle() {
    // g represents S iff g ⊥ <-S> is isotropic
    let places = [Place::Real, Place::Two, Place::odd(3).unwrap(), Place::odd(5).unwrap()];
    for g in [[1i64, 1, 1], [1, 5, -9], [1, 3, -25], [2, 3, 5], [1, -2, 7]] {
        let g = form(&g);
        for s in [-7i64, -3, -1, 1, 2, 3, 5, 6, 7, 15] {
            let mut coeffs = g.coeffs().to_vec();
            coeffs.push(b(-s));
            let ext = DiagonalForm::new(coeffs).unwrap();
            for v in &places {
                assert_eq!(
                    ternary_represents(&g, &b(s), v).unwrap(),
                    oracle_isotropic(&ext, v),
                    "{g} represents {s} at {v}"
                );
            }
        }
    }
}

#[test]
fn global_examples() {
    let d = global_anisotropic(&form(&[1, 1, 1, -7])).unwrap();
    assert!(d.anisotropic);
    assert_eq!(d.witness, Some(Place::Two));
    for f in [[1i64, 1, 1, 1, -1], [1, 1, 1, 7, -7], [2, 3, 5, 7, -11]] {
        let d = global_anisotropic(&form(&f)).unwrap();
        assert!(!d.anisotropic && d.witness.is_none());
    }
    assert!(!global_anisotropic(&form(&[1, -1])).unwrap().anisotropic);
    assert_eq!(global_anisotropic(&form(&[1, 2, 3])).unwrap().witness, Some(Place::Real));
}

#[test]
fn search_examples() {
    assert_eq!(isotropy_search(&form(&[1, -1]), 1).unwrap(), Some(vec![b(1), b(1)]));
    // <1,1,-3> is anisotropic at 3
    assert!(global_anisotropic(&form(&[1, 1, -3])).unwrap().anisotropic);
    assert_eq!(isotropy_search(&form(&[1, 1, -3]), 30).unwrap(), None);
    assert_eq!(isotropy_search(&form(&[1, 1, 1, -7]), 50).unwrap(), None);
    assert!(isotropy_search(&form(&[1, -1]), 0).is_err());
}

#[test]
fn diagonalize_examples() {
    let id = SymmetricRationalMatrix::from_integer_rows(vec![
        vec![b(1), b(0), b(0)],
        vec![b(0), b(1), b(0)],
        vec![b(0), b(0), b(1)],
    ])
    .unwrap();
    let d = diagonalize(&id).unwrap();
    assert!(d.diagonal.iter().all(|x| x.is_one()));
    let hyp = SymmetricRationalMatrix::from_integer_rows(vec![vec![b(0), b(1)], vec![b(1), b(0)]]).unwrap();
    let d = diagonalize(&hyp).unwrap();
    assert!(d.diagonal[0].clone() * d.diagonal[1].clone() < BigRational::zero());
    assert_eq!(d.transform.congruence(hyp.matrix()), Matrix::diagonal(&d.diagonal));
    assert!(matches!(
        diagonalize(&SymmetricRationalMatrix::from_integer_rows(vec![vec![b(1), b(1)], vec![b(1), b(1)]]).unwrap()),
        Err(Error::SingularMatrix)
    ));
    assert!(matches!(
        SymmetricRationalMatrix::from_integer_rows(vec![vec![b(1), b(2)], vec![b(3), b(1)]]),
        Err(Error::NotSymmetric)
    ));
}

#[test]
fn diagonalize_recovers_p_block() {
    // A·diag(1,-1)·Aᵗ = diag(p,-p); diagonalizing A·diag(1,-1)·Aᵗ and diag(1,-1) gives equivalent forms
    let a = Matrix::from_rows(vec![vec![b(4), b(3)], vec![b(3), b(4)]]);
    let m = a.mul(&Matrix::diagonal(&[b(1), b(-1)])).mul(&a.transpose());
    let sym = SymmetricRationalMatrix::from_integer_rows(m.to_rows()).unwrap();
    let d = diagonalize(&sym).unwrap();
    assert_eq!(d.transform.congruence(sym.matrix()), Matrix::diagonal(&d.diagonal));
    let as_form = rational_diagonal_to_form(&d.diagonal);
    assert!(equivalent_over_q(&as_form, &form(&[7, -7])).unwrap());
    assert!(equivalent_over_q(&as_form, &form(&[1, -1])).unwrap());
}

#[test]
fn equivalence_examples() {
    let f = form(&[1, 1, 1, -7]);
    assert!(equivalent_over_q(&f, &f).unwrap());
    for p in [7i64, 23, 31, 47] {
        assert!(equivalent_over_q(&form(&[1, 1, 1, p, -p]), &form(&[1, 1, 1, 1, -1])).unwrap());
    }
    assert!(!equivalent_over_q(&f, &form(&[1, 1, 1, -15])).unwrap());
    assert!(matches!(
        equivalent_over_q(&f, &form(&[1, 1, 1])),
        Err(Error::RankMismatch { .. })
    ));
    assert_eq!(projectively_equivalent(&f, &form(&[9, 9, 9, -63])).unwrap(), Some(b(1)));
    let sym = form(&[1, 2, -1, -2]);
    let neg = form(&[-1, -2, 1, 2]);
    assert!(projectively_equivalent(&sym, &neg).unwrap().is_some());
    assert_eq!(projectively_equivalent(&form(&[1, 1, 1, -7]), &form(&[1, 1, 1, -23])).unwrap(), None);
}

#[test]
fn equivalence_is_an_equivalence_relation() {
    let corpus: Vec<DiagonalForm> = [-6i64, -3, -2, -1, 1, 2, 3, 5, 6]
        .iter()
        .flat_map(|&x| [-7i64, -1, 1, 2, 7].map(move |y| [1, x, y]))
        .map(|c| form(&c))
        .collect();
    let n = corpus.len();
    let eq: Vec<Vec<bool>> = corpus
        .iter()
        .map(|f| corpus.iter().map(|g| equivalent_over_q(f, g).unwrap()).collect())
        .collect();
    for i in 0..n {
        assert!(eq[i][i]);
        for j in 0..n {
            assert_eq!(eq[i][j], eq[j][i]);
            if eq[i][j] {
                assert!(projectively_equivalent(&corpus[i], &corpus[j]).unwrap().is_some());
                for k in 0..n {
                    if eq[j][k] {
                        assert!(eq[i][k]);
                    }
                }
            }
        }
    }
}

/// Clears denominators with squares: `n/d` has the square class of `n·d`.
fn rational_diagonal_to_form(diag: &[BigRational]) -> DiagonalForm {
    DiagonalForm::new(diag.iter().map(|x| x.numer() * x.denom()).collect()).unwrap()
}

fn places_for(f: &DiagonalForm, g: &DiagonalForm) -> Vec<Place> {
    let mut places = vec![Place::Real, Place::Two];
    let mut primes = odd_prime_divisors(&(f.determinant() * g.determinant())).unwrap();
    primes.extend([3, 5, 7].map(b));
    primes.sort();
    primes.dedup();
    places.extend(primes.into_iter().map(|p| Place::odd(p).unwrap()));
    places
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hasse_is_basis_stable(
        c in prop::collection::vec(coeff(), 3),
        t in prop::collection::vec(-2i64..=2, 9),
    ) {
        let f = form(&c);
        let t = Matrix::from_rows(t.chunks(3).map(|r| r.iter().map(|&x| b(x)).collect()).collect());
        prop_assume!(!t.determinant().is_zero());
        let m = t.congruence(&Matrix::diagonal(f.coeffs()));
        let d = diagonalize(&SymmetricRationalMatrix::from_integer_rows(m.to_rows()).unwrap()).unwrap();
        let sym = SymmetricRationalMatrix::from_integer_rows(m.to_rows()).unwrap();
        prop_assert_eq!(d.transform.congruence(sym.matrix()), Matrix::diagonal(&d.diagonal));
        let g = rational_diagonal_to_form(&d.diagonal);
        for v in places_for(&f, &g) {
            prop_assert_eq!(hasse_invariant(&f, &v).unwrap(), hasse_invariant(&g, &v).unwrap(), "at {}", v);
        }
        prop_assert!(equivalent_over_q(&f, &g).unwrap());
    }

    #[test]
    fn rank4_criterion_matches_oracle(c in prop::collection::vec(coeff(), 4), p in prop::sample::select(vec![2i64, 3, 5, 7])) {
        let f = form(&c);
        let v = Place::prime(p).unwrap();
        prop_assert_eq!(local_anisotropic_rank4(&f, &v).unwrap(), !oracle_isotropic(&f, &v));
    }

    #[test]
    fn low_rank_criteria_match_oracle(c in prop::collection::vec(coeff(), 1..=3), p in prop::sample::select(vec![2i64, 3, 5, 7])) {
        let f = form(&c);
        let v = Place::prime(p).unwrap();
        prop_assert_eq!(local_anisotropic(&f, &v).unwrap(), !oracle_isotropic(&f, &v));
    }

    #[test]
    fn global_decision_matches_search(c in prop::collection::vec(coeff(), 2..=4)) {
        let f = form(&c);
        let d = global_anisotropic(&f).unwrap();
        let found = isotropy_search(&f, 60).unwrap();
        if d.anisotropic {
            prop_assert!(found.is_none(), "{} anisotropic at {:?} but search found {:?}", f, d.witness, found);
        } else {
            let x = found.expect("isotropic small form has a zero within bound 60");
            prop_assert!(f.evaluate(&x).is_zero());
        }
    }
}
