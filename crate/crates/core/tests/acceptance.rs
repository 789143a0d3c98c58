//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use hyperform_core::census::{
    census_table, cross_section_orientable, exclude_1011_cover, exclude_closed_hypersurface,
    exclusion_threshold, manifold_1011, orbit, parse_code, CrossSectionCode, RuleId, Verdict,
};
use hyperform_core::collar::{
    ball_volume, cosh_cubed_integral, tube_volume, volume_from_euler, volume_obstruction,
};
use hyperform_core::equiv::{a_identity_holds, build_witness, verify_form_equivalence, witness_failures};
use hyperform_core::oracle::hilbert_oracle;
use hyperform_core::padic::{hilbert, valuation};
use hyperform_core::primes::{is_prime_u64, odd_prime_divisors};
use hyperform_core::qforms::{
    global_anisotropic, isotropy_search, projectively_equivalent, DiagonalForm, Signature,
};
use hyperform_core::subforms::{generate_family, verify_certificate, Family, ParityCase};
use hyperform_core::{Place, Sign};
use num_bigint::BigInt;
use num_traits::Zero;

use common::simpson;

type Outcome = Result<String, String>;

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn nonzero_range(n: i64) -> impl Iterator<Item = i64> + Clone {
    (-n..=n).filter(|&x| x != 0)
}

fn reciprocity() -> Outcome {
    let mut pairs = 0;
    for a in nonzero_range(100) {
        for c in nonzero_range(100) {
            let mut places = vec![Place::Real, Place::Two];
            for p in odd_prime_divisors(&b(a * c)).map_err(|e| e.to_string())? {
                places.push(Place::odd(p).unwrap());
            }
            let prod: Sign = places.iter().map(|v| hilbert(&b(a), &b(c), v).unwrap()).product();
            ensure(prod == Sign::Plus, || format!("product over places is -1 for ({a}, {c})"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn oracle_agreement() -> Outcome {
    let places: Vec<Place> = [-1i64, 2, 3, 5, 7, 11, 13]
        .iter()
        .map(|&p| if p < 0 { Place::Real } else { Place::prime(p).unwrap() })
        .collect();
    let mut checked = 0;
    for v in &places {
        for a in nonzero_range(50) {
            for c in nonzero_range(50) {
                // depth v(a) + v(b) + 3, at least 6 at 2
                let depth = match v.characteristic() {
                    None => 1,
                    Some(p) => {
                        let d = valuation(&b(a), &p).unwrap().exponent + valuation(&b(c), &p).unwrap().exponent + 3;
                        if *v == Place::Two {
                            d.max(6)
                        } else {
                            d
                        }
                    }
                };
                let formula = hilbert(&b(a), &b(c), v).unwrap();
                let oracle = hilbert_oracle(&b(a), &b(c), v, depth).unwrap().sign();
                ensure(oracle == Some(formula), || {
                    format!("({a},{c}) at {v}: formula {formula}, oracle {oracle:?}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} symbols"))
}

fn anisotropy_of_q_p() -> Outcome {
    let mut count = 0;
    for p in (7..10_000u64).step_by(8).filter(|&p| is_prime_u64(p)) {
        let f = DiagonalForm::from_i64s(&[1, 1, 1, -(p as i64)]).unwrap();
        let d = global_anisotropic(&f).unwrap();
        ensure(d.anisotropic && d.witness == Some(Place::Two), || format!("p = {p}: {d:?}"))?;
        count += 1;
    }
    for p in [7i64, 23, 31, 47, 71] {
        let f = DiagonalForm::from_i64s(&[1, 1, 1, -p]).unwrap();
        let found = isotropy_search(&f, 50).unwrap();
        ensure(found.is_none(), || format!("p = {p}: search found {found:?}"))?;
    }
    Ok(format!("{count} primes anisotropic at 2; no zero up to 50 for 5 primes"))
}

fn equivalence_identity() -> Outcome {
    let primes: Vec<u64> = (7..1_000_000u64).step_by(8).filter(|&p| is_prime_u64(p)).collect();
    for &p in &primes {
        ensure(a_identity_holds(&b(p as i64)).unwrap(), || format!("identity fails at p = {p}"))?;
    }
    let step = primes.len() / 100;
    let sample: Vec<u64> = primes.iter().step_by(step).take(100).copied().collect();
    for &p in &sample {
        let check = verify_form_equivalence(&b(p as i64)).map_err(|e| e.to_string())?;
        ensure(check.invariants_agree && check.congruence_holds, || format!("p = {p}: {check:?}"))?;
    }
    Ok(format!("identity on {} primes; both checks agree on {} sampled", primes.len(), sample.len()))
}

fn families() -> Result<Vec<Family>, String> {
    [65i64, 5, 15, 3]
        .iter()
        .map(|&s| generate_family(&b(s), 5).map_err(|e| format!("S = {s}: {e}")))
        .collect()
}

fn family_certificates(families: &[Family]) -> Outcome {
    let mut cases = Vec::new();
    for fam in families {
        let s = &fam.params.s_value;
        ensure(fam.certificates.len() == 5, || format!("S = {s}: {} certificates", fam.certificates.len()))?;
        cases.push(fam.parity_case);
        for cert in &fam.certificates {
            let report = verify_certificate(&fam.ambient, cert);
            ensure(report.ok, || format!("S = {s}: {} fails verification", cert.subform))?;
            ensure(cert.subform.signature() == Signature { positives: 3, negatives: 1 }, || {
                format!("S = {s}: {} has wrong signature", cert.subform)
            })?;
            let found = isotropy_search(&cert.subform, 100).unwrap();
            ensure(found.is_none(), || format!("S = {s}: {} has zero {found:?}", cert.subform))?;
        }
        for (i, f) in fam.certificates.iter().enumerate() {
            for g in &fam.certificates[i + 1..] {
                let lambda = projectively_equivalent(&f.subform, &g.subform).unwrap();
                ensure(lambda.is_none(), || {
                    format!("S = {s}: {} ~ {} via {lambda:?}", f.subform, g.subform)
                })?;
            }
        }
    }
    for case in [ParityCase::Case1Even, ParityCase::Case1Odd, ParityCase::Case2Even, ParityCase::Case2Odd] {
        ensure(cases.contains(&case), || format!("parity case {case:?} not covered"))?;
    }
    Ok("20 certificates verified, 40 pairs inequivalent, all four parity cases".into())
}

fn volume_contradiction() -> Outcome {
    let required = 16.0 * tube_volume(0.9427).unwrap();
    let available = 8.0 * PI * PI / 3.0;
    ensure((28.7..=29.1).contains(&required), || format!("16 V'(0.9427) = {required}"))?;
    ensure((26.31..=26.33).contains(&available), || format!("8 pi^2 / 3 = {available}"))?;
    ensure((volume_from_euler(2) - available).abs() < 1e-12, || "volume_from_euler(2) mismatch".into())?;
    let v = volume_obstruction(2, 16, 0.9427).unwrap();
    ensure(v.contradiction, || format!("{v:?}"))?;
    Ok(format!("required {required:.4} > available {available:.4}"))
}

fn quadrature() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 1..=100 {
        let r = 0.1 * i as f64;
        let q = simpson(&|t: f64| 4.0 * PI * t.sinh().powi(2), 0.0, r, 1e-13);
        let err = (ball_volume(r).unwrap() - q).abs() / q;
        ensure(err < 1e-10, || format!("ball volume at r = {r}: relative error {err:e}"))?;
        worst = worst.max(err);
        let d = 0.03 * i as f64;
        let q = simpson(&|t: f64| t.cosh().powi(3), 0.0, d, 1e-13);
        let err = (cosh_cubed_integral(d) - q).abs() / q;
        ensure(err < 1e-10, || format!("cosh^3 integral at d = {d}: relative error {err:e}"))?;
        worst = worst.max(err);
    }
    Ok(format!("200 grid points, worst relative error {worst:.1e}"))
}

fn census_replay() -> Outcome {
    let code = parse_code("14FF28").map_err(|e| e.to_string())?;
    ensure(code.expanded() == "11114444FFFFFFFF22228888", || code.expanded())?;
    let rec = manifold_1011();
    ensure(rec.k_codes.iter().all(cross_section_orientable), || "a 1011 code is not orientable".into())?;
    let reference: CrossSectionCode = "147".parse().unwrap();
    let o = orbit(&reference);
    for s in ["714", "274", "172"] {
        ensure(o.contains(&s.parse().unwrap()), || format!("{s} not in the orbit of 147"))?;
    }
    let table = census_table();
    ensure(table.len() == 22, || format!("{} records", table.len()))?;
    for r in &table {
        let expected = match r.index {
            1 => RuleId::L3,
            2..=15 => RuleId::L2,
            _ => RuleId::L1,
        };
        let v = exclude_closed_hypersurface(r).verdict;
        ensure(v == Verdict::Excluded(expected), || format!("record {}: {v:?}", r.index))?;
    }
    let trace = exclude_1011_cover();
    ensure(trace.verdict == Verdict::Excluded(RuleId::Volume), || format!("{trace}"))?;
    let last = trace.steps.last().map(|s| s.outcome.clone()).unwrap_or_default();
    ensure(last.ends_with("28.9 > 26.3: contradiction"), || last.clone())?;
    Ok(format!("22 records excluded; 1011 cover: {last}"))
}

/// An odd prime dividing no coefficient: rank-4 forms are isotropic there.
fn non_witness_place(f: &DiagonalForm) -> Place {
    let d = f.determinant();
    let p = (3u64..).step_by(2).find(|&p| is_prime_u64(p) && !(&d % p).is_zero()).unwrap();
    Place::odd(p).unwrap()
}

fn mutation_honesty(families: &[Family]) -> Outcome {
    let mut mutants = 0;
    for fam in families {
        for cert in &fam.certificates {
            for i in 0..cert.basis.len() {
                for j in 0..cert.basis[i].len() {
                    let mut bad = cert.clone();
                    bad.basis[i][j] += 1;
                    ensure(!verify_certificate(&fam.ambient, &bad).ok, || {
                        format!("basis perturbation ({i},{j}) of {} accepted", cert.subform)
                    })?;
                    mutants += 1;
                }
            }
            let mut bad = cert.clone();
            bad.witness_place = non_witness_place(&cert.subform);
            ensure(!verify_certificate(&fam.ambient, &bad).ok, || {
                format!("witness moved to {} accepted for {}", bad.witness_place, cert.subform)
            })?;
            mutants += 1;
        }
    }
    for rec in census_table() {
        let mut raised = rec;
        raised.b1 = exclusion_threshold(&rec);
        ensure(exclude_closed_hypersurface(&raised).verdict == Verdict::NotExcluded, || {
            format!("record {} still excluded with b1 = {}", rec.index, raised.b1)
        })?;
        mutants += 1;
    }
    let mut w = build_witness(&b(7)).map_err(|e| e.to_string())?;
    w.t[(4, 4)] += 1;
    ensure(!witness_failures(&w).is_empty(), || "tampered congruence accepted".into())?;
    mutants += 1;
    Ok(format!("{mutants} mutants all rejected"))
}

fn run(name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("PASS  {name}: {detail} ({secs:.2} s)");
            true
        }
        Err(detail) => {
            println!("FAIL  {name}: {detail} ({secs:.2} s)");
            false
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let fams = families();
    let family_secs = start.elapsed().as_secs_f64();
    let with_families = |f: fn(&[Family]) -> Outcome| {
        let fams = &fams;
        move || match fams {
            Ok(fams) => f(fams),
            Err(e) => Err(e.clone()),
        }
    };
    let results = [
        run("1 Hilbert reciprocity sweep", reciprocity),
        run("2 formula/oracle agreement", oracle_agreement),
        run("3 anisotropy of <1,1,1,-p>", anisotropy_of_q_p),
        run("4 block identity and form equivalence", equivalence_identity),
        run(
            &format!("5 subform families (generated in {family_secs:.2} s)"),
            with_families(family_certificates),
        ),
        run("6 volume contradiction", volume_contradiction),
        run("7 closed forms vs quadrature", quadrature),
        run("8 census replay", census_replay),
        run("9 mutation honesty", with_families(mutation_honesty)),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("{passed}/{} acceptance criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
