use std::fmt;
use std::io::Read;
use std::path::Path;

use serde_json::{json, Value};

use cayley_core::cayley::{inverse_cayley_with, obstruction_check_with};
use cayley_core::io::{self, AnyMatrix};
use cayley_core::linalg::leading_principal_minor;
use cayley_core::normal_form::{
    represent_exact, represent_with, signed_cayley_rep_with, squared_cayley_rep_with, weyl_two_factor_with,
    OrthRepresentation,
};
use cayley_core::random::{self, rng_from_seed};
use cayley_core::sign_perturb::{
    adjacent_flip_chain, kahan_enumerate_bounded, kahan_identity_check, sign_assign, sign_matrix_sum_check,
    surviving_signs, verify_block_pairing,
};
use cayley_core::tol::Tolerances;
use cayley_core::{Backend, DiagonalPerturbation, Error, Matrix, Rational, Scalar, SignVector, SkewSymmetric};

use crate::args::{ChecksArgs, Cli, GenCommand, Mode, PerturbArgs, RepresentArgs};
use crate::report::{digest, scalar_json, Report};

/// Largest dimension for the CLI's `2^n` enumerations.
pub const CLI_ENUMERATION_BOUND: usize = 12;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    ModeInapplicable(String),
    ChecksFailed(usize),
}

impl CliError {
    /// 2: parse or usage, 3: mathematical precondition, 4: resource bound.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 2,
            CliError::Core(Error::Parse(_) | Error::NonSquare { .. } | Error::DimensionMismatch { .. }) => 2,
            CliError::Core(Error::DimensionTooLarge { .. }) => 4,
            CliError::Core(_) | CliError::ModeInapplicable(_) => 3,
            CliError::ChecksFailed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::ModeInapplicable(msg) => write!(f, "mode inapplicable: {msg}"),
            CliError::ChecksFailed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn read_input(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn read_matrix(path: &Path, cli: &Cli) -> CliResult<AnyMatrix> {
    let backend = cli.exact.then_some(Backend::Rational);
    Ok(io::parse_any(&read_input(path)?, backend)?)
}

fn tolerances(cli: &Cli, force: bool) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(t) = cli.tol {
        tol.orth = t;
    }
    if force {
        tol.orth = f64::INFINITY;
    }
    tol
}

// ---------------------------------------------------------------- represent

pub fn represent(cli: &Cli, args: &RepresentArgs) -> CliResult<Report> {
    let tol = tolerances(cli, args.force);
    match read_matrix(&args.input, cli)? {
        AnyMatrix::Float(r) => {
            let rep = represent_float(&r, args.mode, &tol)?;
            Ok(represent_report(cli, &r, &rep))
        }
        AnyMatrix::Rational(r) => {
            let rep = match args.mode {
                None => represent_exact(&r)?,
                Some(Mode::Plain) => OrthRepresentation::PlainCayley(plain(&r, &tol)?),
                Some(Mode::Signed) => signed_cayley_rep_with(&r, &tol)?,
                Some(m @ (Mode::Squared | Mode::TwoFactor)) => {
                    return Err(CliError::ModeInapplicable(format!(
                        "{m:?} needs rotation square roots, which are irrational in general; drop --exact"
                    )))
                }
            };
            Ok(represent_report(cli, &r, &rep))
        }
    }
}

fn plain<T: Scalar>(r: &Matrix<T>, tol: &Tolerances) -> CliResult<SkewSymmetric<T>> {
    inverse_cayley_with(r, tol).map_err(|e| match e {
        Error::MinusOneEigenvalue => CliError::ModeInapplicable(
            "R admits the eigenvalue -1 (or has determinant -1), so no plain Cayley parameter exists".into(),
        ),
        other => other.into(),
    })
}

fn represent_float(r: &Matrix<f64>, mode: Option<Mode>, tol: &Tolerances) -> CliResult<OrthRepresentation<f64>> {
    let not_rotation = |e: Error| match e {
        Error::NotSpecialOrthogonal => {
            CliError::ModeInapplicable("R has determinant -1; use --mode signed".into())
        }
        other => other.into(),
    };
    Ok(match mode {
        None => represent_with(r, tol)?,
        Some(Mode::Plain) => OrthRepresentation::PlainCayley(plain(r, tol)?),
        Some(Mode::Squared) => squared_cayley_rep_with(r, tol).map_err(not_rotation)?,
        Some(Mode::TwoFactor) => weyl_two_factor_with(r, tol).map_err(not_rotation)?,
        Some(Mode::Signed) => signed_cayley_rep_with(r, tol)?,
    })
}

fn represent_report<T: Scalar>(cli: &Cli, r: &Matrix<T>, rep: &OrthRepresentation<T>) -> Report {
    let mut report = Report::new("represent", T::BACKEND, cli.seed);
    report.input_digest = Some(digest(r));
    let kind = rep.kind();
    let mut result = json!({
        "representation": kind,
        "formula": kind.formula(),
        "input": io::to_json(r),
    });
    report.line(format!("representation: {kind:?}"));
    report.line(format!("formula: {}", kind.formula()));
    match rep {
        OrthRepresentation::PlainCayley(s) | OrthRepresentation::SquaredCayley(s) => {
            result["skew"] = io::to_json(s.as_matrix());
            report.matrix("S", s.as_matrix());
        }
        OrthRepresentation::TwoFactor(s1, s2) => {
            result["skew_factors"] = json!([io::to_json(s1.as_matrix()), io::to_json(s2.as_matrix())]);
            report.matrix("S1", s1.as_matrix());
            report.matrix("S2", s2.as_matrix());
        }
        OrthRepresentation::SignedCayley { signs, skew } => {
            result["signs"] = json!(signs.to_ints());
            result["skew"] = io::to_json(skew.as_matrix());
            report.line(format!("E = diag{signs}"));
            report.matrix("S", skew.as_matrix());
        }
    }
    report.residuals = represent_residuals(&result).expect("payload was just built");
    report.result = result;
    report
}

fn skew_from_json(v: &Value) -> CliResult<AnyMatrix> {
    Ok(io::from_json_value(v, None)?)
}

/// Rebuilds the representation from a `represent` payload and evaluates it.
pub fn represent_residuals(result: &Value) -> CliResult<std::collections::BTreeMap<String, f64>> {
    let input = io::from_json_value(&result["input"], None)?;
    let kind = result["representation"].as_str().unwrap_or_default().to_string();
    match input {
        AnyMatrix::Float(r) => residuals_for::<f64>(&r, &kind, result, |m| Ok(m.to_float())),
        AnyMatrix::Rational(r) => residuals_for::<Rational>(&r, &kind, result, |m| Ok(m.to_rational()?)),
    }
}

fn residuals_for<T: Scalar>(
    r: &Matrix<T>,
    kind: &str,
    result: &Value,
    convert: impl Fn(&AnyMatrix) -> CliResult<Matrix<T>>,
) -> CliResult<std::collections::BTreeMap<String, f64>> {
    let skew = |v: &Value| -> CliResult<SkewSymmetric<T>> {
        Ok(SkewSymmetric::project(&convert(&skew_from_json(v)?)?))
    };
    let mut skew_dev = 0.0f64;
    let mut track = |v: &Value| -> CliResult<SkewSymmetric<T>> {
        let m = convert(&skew_from_json(v)?)?;
        skew_dev = skew_dev.max((&m + &m.transpose()).max_abs());
        skew(v)
    };
    let rep = match kind {
        "PlainCayley" => OrthRepresentation::PlainCayley(track(&result["skew"])?),
        "SquaredCayley" => OrthRepresentation::SquaredCayley(track(&result["skew"])?),
        "TwoFactor" => OrthRepresentation::TwoFactor(
            track(&result["skew_factors"][0])?,
            track(&result["skew_factors"][1])?,
        ),
        "SignedCayley" => {
            let ints: Vec<i64> = result["signs"]
                .as_array()
                .map(|a| a.iter().filter_map(Value::as_i64).collect())
                .unwrap_or_default();
            OrthRepresentation::SignedCayley { signs: SignVector::from_ints(&ints)?, skew: track(&result["skew"])? }
        }
        other => return Err(CliError::Io(format!("unknown representation {other:?}"))),
    };
    let mut out = std::collections::BTreeMap::new();
    out.insert("reconstruction".to_string(), rep.evaluate()?.max_abs_diff(r));
    out.insert("orthogonality".to_string(), r.orthogonality_residual());
    out.insert("skew".to_string(), skew_dev);
    Ok(out)
}

// ---------------------------------------------------------------- perturb

pub fn perturb(cli: &Cli, args: &PerturbArgs) -> CliResult<Report> {
    match read_matrix(&args.input, cli)? {
        AnyMatrix::Float(a) => perturb_typed(cli, args, &a),
        AnyMatrix::Rational(a) => perturb_typed(cli, args, &a),
    }
}

fn magnitudes<T: Scalar>(args: &PerturbArgs, n: usize) -> CliResult<Vec<T>> {
    let c: Vec<T> = match (&args.c, &args.c_scale) {
        (Some(tokens), _) => tokens.iter().map(|t| T::parse_token(t.trim())).collect::<Result<_, _>>()?,
        (None, Some(s)) => vec![T::parse_token(s)?; n],
        (None, None) => vec![T::one(); n],
    };
    if c.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c.len() }.into());
    }
    Ok(c)
}

fn perturb_typed<T: Scalar>(cli: &Cli, args: &PerturbArgs, a: &Matrix<T>) -> CliResult<Report> {
    let n = a.n();
    let c: Vec<T> = magnitudes(args, n)?;
    let search = sign_assign(a, &c)?;

    let mut report = Report::new("perturb", T::BACKEND, cli.seed);
    report.input_digest = Some(digest(a));
    let mut result = json!({
        "input": io::to_json(a),
        "c": c.iter().map(scalar_json).collect::<Vec<_>>(),
        "signs": search.signs.to_ints(),
        "minors": search.minor_values.iter().map(scalar_json).collect::<Vec<_>>(),
        "determinant": scalar_json(&search.determinant()),
        "flips": search.flips,
        "certified": search.certified(),
    });
    report.line(format!("signs: {}", search.signs));
    report.line(format!(
        "leading minors: {}",
        search.minor_values.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    ));
    report.line(format!("det(E + A) = {}", search.determinant()));
    report.line(format!("flips: {}", search.flips));
    if !search.certified() {
        let warning = "floating-point determinant: nonzeroness is not certified, rerun with --exact";
        result["warning"] = json!(warning);
        report.line(format!("warning: {warning}"));
    }

    if args.oracle {
        let survivors = surviving_signs(a, &c, CLI_ENUMERATION_BOUND)?;
        let contains = survivors.contains(&search.signs);
        let total = 1u64 << n;
        result["oracle"] = json!({
            "survivors": survivors.len(),
            "total": total,
            "contains_greedy": contains,
        });
        report.line(format!(
            "oracle: {} of {total} sign vectors give an invertible E + A; greedy answer {}",
            survivors.len(),
            if contains { "is among them" } else { "is NOT among them" }
        ));
    }

    report.residuals = perturb_residuals::<T>(&result)?;
    report.result = result;
    Ok(report)
}

/// Recomputes `det(E + A)` and every leading minor from a `perturb` payload
/// and compares them with the reported values.
pub fn perturb_residuals<T: Scalar>(result: &Value) -> CliResult<std::collections::BTreeMap<String, f64>> {
    let parse = |v: &Value| -> CliResult<T> {
        match v {
            Value::Number(x) => Ok(T::parse_token(&x.to_string())?),
            Value::String(s) => Ok(T::parse_token(s)?),
            _ => Err(CliError::Io("malformed scalar in payload".into())),
        }
    };
    let a: Matrix<T> = match io::from_json_value(&result["input"], Some(T::BACKEND))? {
        AnyMatrix::Float(m) => m.map(|v| T::parse_token(&v.to_string()).expect("float token")),
        AnyMatrix::Rational(m) => m.map(|v| T::parse_token(&v.to_string()).expect("rational token")),
    };
    let c = result["c"].as_array().map(|a| a.iter().map(parse).collect::<CliResult<Vec<T>>>()).unwrap_or(Ok(vec![]))?;
    let ints: Vec<i64> =
        result["signs"].as_array().map(|a| a.iter().filter_map(Value::as_i64).collect()).unwrap_or_default();
    let e = DiagonalPerturbation::new(c, SignVector::from_ints(&ints)?)?.matrix();
    let sum = &e + &a;
    let reported = parse(&result["determinant"])?;
    let mut minor_dev = 0.0f64;
    if let Some(minors) = result["minors"].as_array() {
        for (k, m) in minors.iter().enumerate() {
            let fresh = leading_principal_minor(&sum, k + 1)?;
            minor_dev = minor_dev.max((fresh - parse(m)?).abs_f64());
        }
    }
    let mut out = std::collections::BTreeMap::new();
    out.insert("determinant".to_string(), (sum.determinant() - reported).abs_f64());
    out.insert("minors".to_string(), minor_dev);
    Ok(out)
}

// ---------------------------------------------------------------- checks

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn bounded(n: usize) -> CliResult<()> {
    if n > CLI_ENUMERATION_BOUND {
        Err(Error::DimensionTooLarge { n, bound: CLI_ENUMERATION_BOUND }.into())
    } else {
        Ok(())
    }
}

pub fn checks(cli: &Cli, args: &ChecksArgs) -> CliResult<Report> {
    let nothing_selected =
        args.sum_zero.is_none() && !args.det_identity && args.enumerate.is_none() && args.chain.is_none();
    let mut results = Vec::new();
    let mut digest_of_input = None;

    if let Some(n) = args.sum_zero.or(nothing_selected.then_some(4)) {
        bounded(n)?;
        let sum = sign_matrix_sum_check::<Rational>(n)?;
        results.push(Check {
            name: format!("sum-zero n={n}"),
            passed: sum == Matrix::zeros(n),
            detail: format!("sum of {} sign matrices is {}", 1u64 << n, if sum == Matrix::zeros(n) { "zero" } else { "NOT zero" }),
        });
    }

    if args.det_identity || nothing_selected {
        let n = args.n;
        if n == 0 {
            return Err(Error::Parse("--n must be at least 1".into()).into());
        }
        let mut rng = rng_from_seed(cli.seed);
        let mut ok = 0;
        for _ in 0..args.trials {
            let (a, b, col) = random::one_column_pair(n, &mut rng);
            let (lhs, rhs) = kahan_identity_check(&a, &b, col)?;
            if lhs == rhs {
                ok += 1;
            }
        }
        results.push(Check {
            name: format!("det-identity n={n}"),
            passed: ok == args.trials,
            detail: format!("{ok}/{} pairs satisfy det(A + B) = 2^(n-1) (det A + det B)", args.trials),
        });
    }

    if let Some(path) = &args.enumerate {
        let a = io::parse_any(&read_input(path)?, Some(Backend::Rational))?.to_rational()?;
        bounded(a.n())?;
        digest_of_input = Some(digest(&a));
        let survivors = kahan_enumerate_bounded(&a, CLI_ENUMERATION_BOUND)?;
        let list: Vec<String> = survivors.iter().map(|e| format!("E_{} = {e}", e.index())).collect();
        results.push(Check {
            name: "enumerate".into(),
            passed: !survivors.is_empty(),
            detail: format!(
                "{} surviving sign vector(s) of {}: {}",
                survivors.len(),
                1u64 << a.n(),
                list.join("; ")
            ),
        });
    }

    if let Some(n) = args.chain.or(nothing_selected.then_some(4)) {
        bounded(n)?;
        let chain = adjacent_flip_chain(n)?;
        let single = chain.windows(2).filter(|w| w[0].differing_positions(&w[1]).len() == 1).count();
        results.push(Check {
            name: format!("chain n={n}"),
            passed: verify_block_pairing(&chain),
            detail: format!(
                "aligned block halves differ in one position at every level; {single}/{} consecutive pairs differ in exactly one position",
                chain.len().saturating_sub(1)
            ),
        });
    }

    let mut report = Report::new("checks", Backend::Rational, cli.seed);
    report.input_digest = digest_of_input;
    for c in &results {
        report.line(format!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
    }
    report.result = json!({
        "checks": results
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect::<Vec<_>>(),
    });
    Ok(report)
}

pub fn failed_checks(report: &Report) -> usize {
    report.result["checks"]
        .as_array()
        .map(|a| a.iter().filter(|c| c["passed"] == json!(false)).count())
        .unwrap_or(0)
}

// ---------------------------------------------------------------- gen

pub fn gen(cli: &Cli, cmd: &GenCommand) -> CliResult<(Report, String)> {
    let mut rng = rng_from_seed(cli.seed);
    let (m, name) = match *cmd {
        GenCommand::Haar { n, improper } => {
            let m = if improper { random::haar_improper(n, &mut rng) } else { random::haar_rotation(n, &mut rng) };
            (AnyMatrix::Float(m), "gen haar")
        }
        GenCommand::Singular { n, rank } => (AnyMatrix::Rational(random::singular_matrix(n, rank, &mut rng)?), "gen singular"),
        GenCommand::Skew { n } => {
            (AnyMatrix::Float(random::gaussian_skew(n, &mut rng).into_matrix()), "gen skew")
        }
        GenCommand::Int { n } => (AnyMatrix::Rational(random::integer_matrix(n, -5, 5, &mut rng)), "gen int"),
    };
    let mut report = Report::new(name, m.backend(), cli.seed);
    report.result = json!({ "matrix": m.to_json() });
    if let (GenCommand::Haar { improper, .. }, AnyMatrix::Float(q)) = (cmd, &m) {
        let target = if *improper { -1.0 } else { 1.0 };
        report.residuals.insert("orthogonality".into(), q.orthogonality_residual());
        report.residuals.insert("determinant".into(), (q.determinant() - target).abs());
        let obstructed = obstruction_check_with(q, &Tolerances::default()).map(|o| o.is_obstructed()).unwrap_or(false);
        report.result["obstructed"] = json!(obstructed);
    }
    if let AnyMatrix::Rational(q) = &m {
        report.result["rank"] = json!(cayley_core::linalg::rank(q));
    }
    let text = m.to_text();
    report.lines = text.lines().map(str::to_string).collect();
    Ok((report, text))
}
