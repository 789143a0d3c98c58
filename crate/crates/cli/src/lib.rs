//! Command-line front end: every library module as a subcommand producing a
//! [`Report`] rendered as text or as one line of JSON.

pub mod report;

use std::io::Write;

use clap::{Parser, Subcommand};
use hyperform_core::census::{
    census_record, census_table, exclude_closed_hypersurface, exclude_cover, exclusion_threshold,
    manifold_1011, Verdict, WEEKS_VOLUME,
};
use hyperform_core::collar::{collar_profile, collar_radius, ball_volume, volume_obstruction};
use hyperform_core::equiv::{build_witness, verify_form_equivalence, witness_failures};
use hyperform_core::json::int_value;
use hyperform_core::oracle::{hilbert_oracle, local_zero_oracle, LocalZero};
use hyperform_core::padic::{hilbert, valuation};
use hyperform_core::primes::odd_prime_divisors;
use hyperform_core::qforms::{
    candidate_places, global_anisotropic, hasse_invariant, isotropy_search, local_anisotropic,
    projectively_equivalent, DiagonalForm,
};
use hyperform_core::subforms::{
    generate_family_with, monson_parameters, monson_parameters_with_a, verify_certificate,
    VerifyOptions, DEFAULT_TERNARY_BOUND,
};
use hyperform_core::{Error, Place, Sign};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub use report::{Report, ReportCheck};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable selecting report verbosity: `quiet` prints only
/// the conclusion, `debug` adds timing on stderr. Anything else is normal.
pub const VERBOSITY_ENV: &str = "HYPERFORM_VERBOSITY";

/// Largest prime at which reports cross-check symbols with the brute-force
/// oracle.
const ORACLE_PRIME_LIMIT: u64 = 50;

#[derive(Debug, Parser)]
#[command(
    name = "hyperform",
    version,
    about = "Quadratic form invariants, anisotropic subform certificates, collar volumes and census exclusions",
    after_help = "Exit status: 0 success, 1 domain error, 2 verification failure, 64 usage error.\n\
                  Set HYPERFORM_VERBOSITY=quiet|debug to change text output."
)]
struct Cli {
    /// Emit line-delimited JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hilbert symbol (a, b) at one place, or at all relevant places.
    #[command(allow_negative_numbers = true)]
    Hilbert {
        a: BigInt,
        b: BigInt,
        /// -1 (or "real") for the real place, otherwise a prime.
        #[arg(long)]
        place: Option<Place>,
    },
    /// Hasse invariants of a diagonal form, e.g. `hasse 1 1 1 -7` or `hasse "<1,1,1,-7>"`.
    #[command(allow_negative_numbers = true)]
    Hasse {
        #[arg(required = true, num_args = 1..)]
        coeffs: Vec<String>,
        #[arg(long)]
        place: Option<Place>,
    },
    /// Local or global anisotropy of a diagonal form.
    #[command(allow_negative_numbers = true)]
    Aniso {
        #[arg(required = true, num_args = 1..)]
        coeffs: Vec<String>,
        #[arg(long)]
        place: Option<Place>,
        /// Bound for the exhaustive integer search run as a cross-check.
        #[arg(long, default_value_t = 50)]
        search: u64,
    },
    /// Verified anisotropic signature (3,1) subforms of the Monson form for S.
    Subforms {
        #[arg(long = "S")]
        s: BigInt,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Use the (skip+1)-th admissible prime a.
        #[arg(long, default_value_t = 0)]
        skip: u64,
        /// Use this a instead of searching.
        #[arg(long)]
        a: Option<BigInt>,
        /// Box bound for the ternary solver.
        #[arg(long, default_value_t = DEFAULT_TERNARY_BOUND)]
        bound: u64,
    },
    /// Integral congruence taking <1,1,1,1,-1> to <1,1,1,-p,p> for p = -1 mod 8.
    EquivWitness { p: BigInt },
    /// Collar radius, tube volume and optionally the volume obstruction.
    #[command(allow_negative_numbers = true)]
    Collar {
        #[arg(long = "A")]
        a: f64,
        #[arg(long, requires = "copies")]
        chi: Option<u64>,
        #[arg(long, requires = "chi")]
        copies: Option<u64>,
    },
    /// Replay the exclusion rules on one census record or all 22.
    CensusExclude { index: Option<u32> },
    /// Replay the volume argument for the double cover of census manifold 1011.
    #[command(name = "link-1011")]
    Link1011 {
        /// Lower bound for the volume of a closed hyperbolic 3-manifold.
        #[arg(long = "A", default_value_t = WEEKS_VOLUME)]
        a: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verbosity {
    Quiet,
    Normal,
    Debug,
}

fn verbosity() -> Verbosity {
    match std::env::var(VERBOSITY_ENV).as_deref() {
        Ok("quiet") | Ok("0") => Verbosity::Quiet,
        Ok("debug") | Ok("2") => Verbosity::Debug,
        _ => Verbosity::Normal,
    }
}

/// Parses `argv` (program name first), runs the command and writes the
/// report. Returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let echo = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let echo = format!("hyperform {echo}");
    let verbosity = verbosity();
    let start = std::time::Instant::now();
    let report = match dispatch(cli.command, echo) {
        Ok(report) => report,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_DOMAIN;
        }
    };
    if cli.json {
        let _ = writeln!(out, "{}", report.to_json_line());
    } else if verbosity == Verbosity::Quiet {
        let _ = writeln!(out, "{}", report.conclusion);
    } else {
        let _ = write!(out, "{}", report.to_text());
    }
    if verbosity == Verbosity::Debug {
        let _ = writeln!(err, "elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    let status = exit_status(&report);
    if status == EXIT_VERIFICATION {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        let _ = writeln!(err, "verification failed: {}", failed.join(", "));
    }
    status
}

/// 0 when every check in the report passed, 2 otherwise.
pub fn exit_status(report: &Report) -> i32 {
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}

fn dispatch(command: Command, echo: String) -> Result<Report, Error> {
    match command {
        Command::Hilbert { a, b, place } => hilbert_report(echo, &a, &b, place),
        Command::Hasse { coeffs, place } => hasse_report(echo, &parse_form(&coeffs)?, place),
        Command::Aniso { coeffs, place, search } => aniso_report(echo, &parse_form(&coeffs)?, place, search),
        Command::Subforms { s, count, skip, a, bound } => subforms_report(echo, &s, count, skip, a, bound),
        Command::EquivWitness { p } => equiv_report(echo, &p),
        Command::Collar { a, chi, copies } => collar_report(echo, a, chi.zip(copies)),
        Command::CensusExclude { index } => census_report(echo, index),
        Command::Link1011 { a } => link_report(echo, a),
    }
}

/// Accepts `1 1 1 -7`, `1,1,1,-7` or `<1,1,1,-7>`.
fn parse_form(parts: &[String]) -> Result<DiagonalForm, Error> {
    parts.join(",").parse()
}

fn places_for(n: &BigInt) -> Result<Vec<Place>, Error> {
    let mut places = vec![Place::Real, Place::Two];
    for p in odd_prime_divisors(n)? {
        places.push(Place::odd(p)?);
    }
    Ok(places)
}

fn sign_map(entries: &[(Place, Sign)]) -> Value {
    Value::Object(entries.iter().map(|(v, s)| (v.to_string(), json!(s))).collect::<Map<_, _>>())
}

/// Oracle depth `v(a) + v(b) + 3`, at least 6 at 2.
fn oracle_depth(a: &BigInt, b: &BigInt, p: &BigInt) -> Result<u32, Error> {
    let d = valuation(a, p)?.exponent + valuation(b, p)?.exponent + 3;
    Ok(if *p == BigInt::from(2) { d.max(6) } else { d })
}

fn small_prime(place: &Place) -> bool {
    place
        .characteristic()
        .and_then(|p| p.to_u64())
        .is_some_and(|p| p <= ORACLE_PRIME_LIMIT)
}

fn hilbert_report(echo: String, a: &BigInt, b: &BigInt, place: Option<Place>) -> Result<Report, Error> {
    let inputs = json!({ "a": int_value(a), "b": int_value(b), "place": place });
    match place {
        Some(v) => {
            let s = hilbert(a, b, &v)?;
            let mut report = Report::new(echo, inputs, json!({ "symbol": s }));
            if v == Place::Real || small_prime(&v) {
                let depth = match v.characteristic() {
                    Some(p) => oracle_depth(a, b, &p)?,
                    None => 1,
                };
                let oracle = hilbert_oracle(a, b, &v, depth)?.sign();
                report = report.check(ReportCheck::new(
                    "oracle",
                    oracle == Some(s),
                    "exhaustive search for a liftable zero of a x^2 + b y^2 - z^2",
                    format!("oracle gives {}", oracle.map_or("indeterminate".to_string(), |o| o.to_string())),
                ));
            }
            Ok(report.conclude(format!("({a}, {b})_{v} = {s}")))
        }
        None => {
            let places = places_for(&(a * b))?;
            let entries = places
                .iter()
                .map(|v| Ok((v.clone(), hilbert(a, b, v)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            let product: Sign = entries.iter().map(|(_, s)| *s).product();
            let minus: Vec<String> = entries.iter().filter(|(_, s)| *s == Sign::Minus).map(|(v, _)| v.to_string()).collect();
            Ok(Report::new(echo, inputs, json!({ "symbols": sign_map(&entries), "product": product }))
                .check(ReportCheck::new(
                    "reciprocity",
                    product == Sign::Plus,
                    "the product of all Hilbert symbols is 1",
                    format!("product over {} places is {product}", entries.len()),
                ))
                .conclude(if minus.is_empty() {
                    format!("({a}, {b}) = 1 at every place")
                } else {
                    format!("({a}, {b}) = -1 exactly at places {}", minus.join(", "))
                }))
        }
    }
}

fn hasse_report(echo: String, f: &DiagonalForm, place: Option<Place>) -> Result<Report, Error> {
    let inputs = json!({ "form": f, "place": place });
    let places = match &place {
        Some(v) => vec![v.clone()],
        None => {
            let mut primes = BigInt::from(1);
            for c in f.coeffs() {
                primes *= c;
            }
            places_for(&primes)?
        }
    };
    let entries = places
        .iter()
        .map(|v| Ok((v.clone(), hasse_invariant(f, v)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let result = json!({
        "rank": f.rank(),
        "determinant": int_value(&f.determinant()),
        "signature": f.signature(),
        "hasse": sign_map(&entries),
    });
    let mut report = Report::new(echo, inputs, result);
    if place.is_none() {
        let product: Sign = entries.iter().map(|(_, s)| *s).product();
        report = report.check(ReportCheck::new(
            "product formula",
            product == Sign::Plus,
            "the Hasse invariants multiply to 1 over all places",
            format!("product over {} places is {product}", entries.len()),
        ));
    }
    let text: Vec<String> = entries.iter().map(|(v, s)| format!("c_{v} = {s}")).collect();
    Ok(report.conclude(format!("{f}: {}", text.join(", "))))
}

fn aniso_report(echo: String, f: &DiagonalForm, place: Option<Place>, bound: u64) -> Result<Report, Error> {
    let inputs = json!({ "form": f, "place": place, "search_bound": bound });
    if let Some(v) = place {
        let aniso = local_anisotropic(f, &v)?;
        let mut report = Report::new(echo, inputs, json!({ "anisotropic": aniso }));
        if v == Place::Real || small_prime(&v) {
            match local_zero_oracle(f.coeffs(), &v, 64) {
                Ok(zero) => {
                    let oracle = match zero {
                        LocalZero::Isotropic { .. } => Some(false),
                        LocalZero::Anisotropic => Some(true),
                        LocalZero::Indeterminate => None,
                    };
                    report = report.check(ReportCheck::new(
                        "local oracle",
                        oracle == Some(aniso),
                        "exhaustive search for a liftable primitive zero",
                        match oracle {
                            Some(true) => "oracle finds no zero".to_string(),
                            Some(false) => "oracle finds a liftable zero".to_string(),
                            None => "oracle indeterminate".to_string(),
                        },
                    ));
                }
                Err(Error::OracleTooLarge(_)) => {}
                Err(e) => return Err(e),
            }
        }
        let word = if aniso { "anisotropic" } else { "isotropic" };
        return Ok(report.conclude(format!("{f} is {word} at {v}")));
    }
    let decision = global_anisotropic(f)?;
    let local = if f.is_definite() || f.rank() >= 5 {
        Vec::new()
    } else {
        candidate_places(f)?
            .into_iter()
            .map(|v| Ok((v.to_string(), json!(local_anisotropic(f, &v)?))))
            .collect::<Result<Vec<_>, Error>>()?
    };
    let found = isotropy_search(f, bound)?;
    let result = json!({
        "anisotropic": decision.anisotropic,
        "witness": decision.witness,
        "local_anisotropic": Value::Object(local.into_iter().collect()),
        "search_zero": found.as_ref().map(|x| x.iter().map(int_value).collect::<Vec<_>>()),
    });
    let consistent = !(decision.anisotropic && found.is_some());
    let conclusion = match (&decision.witness, decision.anisotropic) {
        (Some(w), true) => format!("{f} is anisotropic over Q, witnessed at {w}"),
        _ => format!("{f} is isotropic over Q"),
    };
    Ok(Report::new(echo, inputs, result)
        .check(ReportCheck::new(
            "integer search",
            consistent,
            "an anisotropic form has no nonzero integer zero",
            match &found {
                Some(x) => format!("zero {x:?} within bound {bound}"),
                None => format!("no zero within bound {bound}"),
            },
        ))
        .conclude(conclusion))
}

fn subforms_report(
    echo: String,
    s: &BigInt,
    count: usize,
    skip: u64,
    a: Option<BigInt>,
    bound: u64,
) -> Result<Report, Error> {
    let inputs = json!({
        "S": int_value(s),
        "count": count,
        "skip": skip,
        "a": a.as_ref().map(int_value),
        "ternary_bound": bound,
    });
    let params = match &a {
        Some(a) => monson_parameters_with_a(s, a)?,
        None => monson_parameters(s, skip)?,
    };
    let family = generate_family_with(&params, count, bound, VerifyOptions::default())?;
    let mut report = Report::new(
        echo,
        inputs,
        json!({
            "params": family.params,
            "parity_case": family.parity_case.to_string(),
            "ambient": family.ambient.form,
            "certificates": family.certificates,
            "collisions": family.collisions.len(),
            "rejections": family.rejections,
        }),
    );
    for (i, cert) in family.certificates.iter().enumerate() {
        let verdict = verify_certificate(&family.ambient, cert);
        let failures: Vec<String> = verdict.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        report = report.check(ReportCheck::new(
            &format!("certificate {i}"),
            verdict.ok,
            "Gram matrix, signature, local criterion and oracle at the witness, integer search",
            if failures.is_empty() {
                format!("{} anisotropic at {}", cert.subform, cert.witness_place)
            } else {
                failures.join("; ")
            },
        ));
    }
    let mut equivalent = Vec::new();
    for (i, f) in family.certificates.iter().enumerate() {
        for (j, g) in family.certificates.iter().enumerate().skip(i + 1) {
            if let Some(lambda) = projectively_equivalent(&f.subform, &g.subform)? {
                equivalent.push(format!("{i}~{j} (lambda = {lambda})"));
            }
        }
    }
    let pairs = count * count.saturating_sub(1) / 2;
    report = report.check(ReportCheck::new(
        "projective inequivalence",
        equivalent.is_empty(),
        "scan of squarefree scalars supported on -1, 2 and the primes of both determinants",
        if equivalent.is_empty() {
            format!("{pairs} pairs inequivalent")
        } else {
            equivalent.join(", ")
        },
    ));
    Ok(report.conclude(format!(
        "{} verified, pairwise projectively inequivalent certificates for S = {s} (a = {}, {})",
        family.certificates.len(),
        params.a,
        family.parity_case
    )))
}

fn equiv_report(echo: String, p: &BigInt) -> Result<Report, Error> {
    let witness = build_witness(p)?;
    let check = verify_form_equivalence(p)?;
    let failures = witness_failures(&witness);
    Ok(Report::new(echo, json!({ "p": int_value(p) }), serde_json::to_value(&witness).expect("serializes"))
        .check(ReportCheck::new(
            "explicit congruence",
            failures.is_empty(),
            "exact integer products A D A^t and T^t J T",
            if failures.is_empty() { "all identities hold".to_string() } else { failures.join("; ") },
        ))
        .check(ReportCheck::new(
            "invariants",
            check.invariants_agree,
            "rank, signature, determinant class and Hasse invariants",
            format!("invariants agree = {}", check.invariants_agree),
        ))
        .conclude(format!("T^t J T = <1,1,1,-{p},{p}> with det A = {}", witness.det_a)))
}

fn collar_report(echo: String, a: f64, obstruction: Option<(u64, u64)>) -> Result<Report, Error> {
    let profile = collar_profile(a)?;
    let back = 2.0 * ball_volume(collar_radius(2.0 * profile.d4)?)?;
    let mut result = json!({ "profile": profile });
    let inputs = json!({ "A": a, "chi": obstruction.map(|o| o.0), "copies": obstruction.map(|o| o.1) });
    let mut conclusion = format!("tube volume {}", report::round_sig(profile.tube_volume));
    if let Some((chi, copies)) = obstruction {
        let v = volume_obstruction(chi, copies, a)?;
        conclusion = if v.contradiction {
            format!(
                "required {} > available {}: contradiction",
                report::round_sig(v.required),
                report::round_sig(v.available)
            )
        } else {
            format!(
                "required {} <= available {}: no contradiction",
                report::round_sig(v.required),
                report::round_sig(v.available)
            )
        };
        result["obstruction"] = serde_json::to_value(&v).expect("serializes");
    }
    Ok(Report::new(echo, inputs, result)
        .check(ReportCheck::new(
            "collar round trip",
            (back - a).abs() <= 1e-9 * a.max(1.0),
            "2 V(r(2 d4(A))) = A",
            format!("recovered A = {}", report::round_sig(back)),
        ))
        .conclude(conclusion))
}

fn census_report(echo: String, index: Option<u32>) -> Result<Report, Error> {
    let records = match index {
        Some(i) => vec![census_record(i)?],
        None => census_table(),
    };
    let traces: Vec<_> = records.iter().map(exclude_closed_hypersurface).collect();
    let mut report = Report::new(
        echo,
        json!({ "index": index }),
        json!({ "traces": traces }),
    );
    let mut excluded = 0;
    for (rec, trace) in records.iter().zip(&traces) {
        let expected = rec.b1 < exclusion_threshold(rec);
        if trace.verdict.is_excluded() {
            excluded += 1;
        }
        report = report.check(ReportCheck::new(
            &format!("record {}", rec.index),
            expected == trace.verdict.is_excluded(),
            "verdict agrees with the largest applicable lower bound on b1",
            match trace.verdict {
                Verdict::Excluded(rule) => format!("excluded by {rule}"),
                Verdict::NotExcluded => "not excluded".to_string(),
            },
        ));
    }
    Ok(report.conclude(format!("{excluded} of {} records excluded", records.len())))
}

fn link_report(echo: String, a: f64) -> Result<Report, Error> {
    let record = manifold_1011();
    let trace = exclude_cover(&record, a)?;
    let direct = volume_obstruction(2 * record.euler_characteristic, 16, a)?;
    let lines: Vec<String> = trace.to_string().lines().map(str::to_string).collect();
    let conclusion = trace.steps.last().map(|s| s.outcome.clone()).unwrap_or_default();
    let reached_volume = trace.steps.last().is_some_and(|s| s.rule == hyperform_core::census::RuleId::Volume);
    let consistent = !reached_volume || trace.verdict.is_excluded() == direct.contradiction;
    Ok(Report::new(
        echo,
        json!({ "A": a, "manifold": record.name, "code": record.code.compact() }),
        json!({ "trace": lines, "steps": trace.steps, "verdict": trace.verdict }),
    )
    .check(ReportCheck::new(
        "volume recomputed",
        consistent,
        "direct comparison of (4 pi^2 / 3) chi with 16 V'(A)",
        format!(
            "required {} vs available {}",
            report::round_sig(direct.required),
            report::round_sig(direct.available)
        ),
    ))
    .conclude(conclusion))
}
