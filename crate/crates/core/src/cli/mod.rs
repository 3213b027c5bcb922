//! Command-line front end.

pub mod fixtures;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cecomplex::{Cochain, Complex};
use crate::exactla::{format_q, parse_q, QVector};
use crate::homologic::{is_homologic, quadratic_constraints, self_bracket};
use crate::homvf::{chain_field_correspondence, encode_differential, MAX_CORRESPONDENCE_DIM};
use crate::liealg::{
    adjoint_module, nilpotent_part, parabolic_nilradical, restricted_adjoint, trivial_module, GradedLieAlgebra,
};
use crate::rootsys::{CartanType, RootSystem, DEFAULT_WEYL_BOUND};
use crate::superbracket::{
    induced_bracket, sl3_report, degree_one_relations, weight_action, BracketAlgebra, Classes, Presentation,
};
use fixtures::{fixture_basis, verify_fixtures, FixtureSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "liecohom", version, about = "Cohomology of nilpotent Lie algebras and the bracket on it")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimensions of H^k(n; M).
    Dims(Common),
    /// Representatives of a basis of H^k(n; M).
    Basis(Common),
    /// Multiplication table of l = Π(H^{·+1}(n; n)).
    Table(WithFixtures),
    /// Derived and lower-central-style series of l.
    DerivedSeries(WithFixtures),
    /// Whether x is odd with [x, x] = 0.
    HomologicCheck(HomologicCheck),
    /// Components of [x, x] as quadratic forms for x with the given support.
    HomologicConstraints(HomologicConstraints),
    /// Compares H^i(n_max; M) with the length counts of the Weyl group.
    Bwb(Common),
    /// Brackets among the degree-one classes c_i, b_j.
    Theorem2(Common),
    /// The homological vector field of n.
    QfieldCheck(Common),
    /// Checks a fixture file against the computed cohomology.
    VerifyFixtures(VerifyFixtures),
    /// Writes a basis and its table in the fixture format.
    Export(WithFixtures),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Cartan type such as A2, B3, G2.
    #[arg(long = "type")]
    cartan: Option<String>,
    #[arg(long, value_enum)]
    coeff: Option<Coeff>,
    /// Comma-separated removed simple roots, counted from 1.
    #[arg(long)]
    parabolic: Option<String>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct WithFixtures {
    #[command(flatten)]
    common: Common,
    /// Use the basis of a fixture file (`g2`, `sl3` or a path).
    #[arg(long)]
    fixtures: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct HomologicCheck {
    #[command(flatten)]
    basis: WithFixtures,
    /// Coefficients as `name=value` pairs, e.g. `h0_1=1,h2_3=-1/2`.
    #[arg(long)]
    x: String,
}

#[derive(Args, Debug, Clone)]
struct HomologicConstraints {
    #[command(flatten)]
    basis: WithFixtures,
    /// Comma-separated names; defaults to every odd class of `--degree`,
    /// or every odd class.
    #[arg(long)]
    support: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct VerifyFixtures {
    /// Fixture file; `g2` and `sl3` name the bundled ones.
    #[arg(long)]
    file: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Coeff {
    AdjointN,
    AdjointG,
    Trivial,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Other(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// What a command produced: the report and whether its checks passed.
struct Outcome {
    text: String,
    json: Value,
    passed: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, passed: true }
    }
}

/// Runs the command line `args` (including the program name), writing the
/// report to stdout or `--out`. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (code, out) = run_captured(args);
    if !out.is_empty() {
        if code == EXIT_USAGE {
            eprint!("{out}");
        } else {
            print!("{out}");
        }
    }
    code
}

/// As [`run`], returning the text that would go to the terminal.
pub fn run_captured<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let (format, out) = output_options(&cli.command);
    match dispatch(&cli.command) {
        Ok(o) => {
            let mut body = match format {
                Format::Text => o.text,
                Format::Json => serde_json::to_string_pretty(&o.json).expect("json") + "\n",
            };
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, &body) {
                    return (EXIT_FAILED, format!("error: cannot write {}: {e}\n", path.display()));
                }
                body = String::new();
            }
            (if o.passed { EXIT_OK } else { EXIT_FAILED }, body)
        }
        Err(CliError::Usage(m)) => (EXIT_USAGE, format!("error: {m}\n")),
        Err(CliError::Other(e)) => (EXIT_FAILED, format!("error: {e:#}\n")),
    }
}

fn output_options(c: &Command) -> (Format, Option<PathBuf>) {
    let common = match c {
        Command::Dims(c) | Command::Basis(c) | Command::Bwb(c) | Command::Theorem2(c) | Command::QfieldCheck(c) => c,
        Command::Table(w) | Command::DerivedSeries(w) | Command::Export(w) => &w.common,
        Command::HomologicCheck(h) => &h.basis.common,
        Command::HomologicConstraints(h) => &h.basis.common,
        Command::VerifyFixtures(v) => return (v.format, v.out.clone()),
    };
    // `export` always writes the fixture format.
    let format = if matches!(c, Command::Export(_)) { Format::Json } else { common.format };
    (format, common.out.clone())
}

fn dispatch(c: &Command) -> Result<Outcome, CliError> {
    match c {
        Command::Dims(c) => dims(c),
        Command::Basis(c) => basis(c),
        Command::Table(w) => table(w),
        Command::DerivedSeries(w) => derived_series(w),
        Command::HomologicCheck(h) => homologic_check(h),
        Command::HomologicConstraints(h) => homologic_constraints(h),
        Command::Bwb(c) => bwb(c),
        Command::Theorem2(c) => theorem2(c),
        Command::QfieldCheck(c) => qfield_check(c),
        Command::VerifyFixtures(v) => verify(v),
        Command::Export(w) => export(w),
    }
}

struct Setup {
    rs: RootSystem,
    n: GradedLieAlgebra,
    maximal: bool,
}

impl Setup {
    fn from(c: &Common) -> Result<Self, CliError> {
        let Some(t) = &c.cartan else { return usage("--type is required") };
        let t: CartanType = t.parse().map_err(|e| CliError::Usage(format!("--type {t}: {e}")))?;
        let rs = RootSystem::new(t);
        match &c.parabolic {
            None => Ok(Setup { n: nilpotent_part(&rs), rs, maximal: true }),
            Some(p) => {
                let mut removed = Vec::new();
                for s in p.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let i: usize = s.parse().map_err(|_| CliError::Usage(format!("--parabolic: bad index {s:?}")))?;
                    if i == 0 || i > rs.rank() {
                        return usage(format!("--parabolic: simple roots are numbered 1..={}", rs.rank()));
                    }
                    removed.push(i - 1);
                }
                let n = parabolic_nilradical(&rs, &removed).map_err(|e| CliError::Usage(e.to_string()))?;
                let maximal = removed.len() == rs.rank();
                Ok(Setup { rs, n, maximal })
            }
        }
    }

    fn complex(&self, coeff: Coeff) -> Result<Complex, CliError> {
        let m = match coeff {
            Coeff::AdjointN => adjoint_module(&self.n),
            Coeff::AdjointG => restricted_adjoint(&self.rs, &self.n),
            Coeff::Trivial => trivial_module(&self.n),
        };
        Complex::new(self.n.clone(), m).map_err(|e| CliError::Other(e.into()))
    }
}

fn tuple(v: &[usize]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn root_name(rs: &RootSystem, i: usize) -> String {
    rs.positive_roots()[i].0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// `e_{1,3} ⊗ f^{1,0}∧f^{1,1}` style for cochains with values in `n`.
pub fn format_cochain(rs: &RootSystem, c: &Cochain, module_is_n: bool) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (&(a, w), x) in c.terms() {
        let neg = x < &crate::exactla::q(0);
        let abs = if neg { -x.clone() } else { x.clone() };
        s.push_str(match (s.is_empty(), neg) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        });
        if abs != crate::exactla::q(1) {
            let _ = write!(s, "{} ", format_q(&abs));
        }
        if module_is_n {
            let _ = write!(s, "e_{{{}}}", root_name(rs, a));
        } else {
            let _ = write!(s, "m_{a}");
        }
        let f: Vec<String> = w.indices().into_iter().map(|i| format!("f^{{{}}}", root_name(rs, i))).collect();
        if !f.is_empty() {
            let _ = write!(s, " ⊗ {}", f.join("∧"));
        }
    }
    s
}

fn dims(c: &Common) -> Result<Outcome, CliError> {
    let setup = Setup::from(c)?;
    let cx = setup.complex(c.coeff.unwrap_or(Coeff::AdjointN))?;
    let dims = match c.degree {
        Some(k) if k > cx.top_degree() => return usage(format!("--degree {k} exceeds dim n = {}", cx.top_degree())),
        Some(k) => vec![cx.cohomology_degree(k).dim()],
        None => cx.cohomology().dims(),
    };
    let text = match c.degree {
        Some(k) => format!("dim H^{k} = {}\n", dims[0]),
        None => format!("{}\n", tuple(&dims)),
    };
    Ok(Outcome::ok(text, json!({ "degree": c.degree, "dims": dims })))
}

fn basis(c: &Common) -> Result<Outcome, CliError> {
    let setup = Setup::from(c)?;
    let coeff = c.coeff.unwrap_or(Coeff::AdjointN);
    let cx = setup.complex(coeff)?;
    let degrees: Vec<usize> = match c.degree {
        Some(k) if k > cx.top_degree() => return usage(format!("--degree {k} exceeds dim n = {}", cx.top_degree())),
        Some(k) => vec![k],
        None => (0..=cx.top_degree()).collect(),
    };
    let mut text = String::new();
    let mut items = Vec::new();
    for k in degrees {
        let h = cx.cohomology_degree(k);
        let _ = writeln!(text, "H^{k}: dim {}", h.dim());
        for (j, (w, rep)) in h.representatives().into_iter().enumerate() {
            let name = format!("h{k}_{}", j + 1);
            let shown = format_cochain(&setup.rs, &rep, coeff == Coeff::AdjointN);
            let _ = writeln!(text, "  {name}  weight {:?}  {shown}", w.0);
            items.push(json!({ "name": name, "degree": k, "weight": w.0, "cochain": shown }));
        }
    }
    Ok(Outcome::ok(text, json!(items)))
}

struct Built {
    rs: RootSystem,
    alg: BracketAlgebra,
    classes: Classes,
    p: Presentation,
}

fn load_fixtures(which: &str) -> Result<FixtureSet, CliError> {
    match which {
        "g2" => Ok(FixtureSet::g2()),
        "sl3" => Ok(FixtureSet::sl3()),
        path => FixtureSet::load(path.as_ref()).map_err(|e| CliError::Usage(format!("{path}: {e}"))),
    }
}

fn build(w: &WithFixtures) -> Result<Built, CliError> {
    if matches!(w.common.coeff, Some(c) if c != Coeff::AdjointN) {
        return usage("the bracket needs --coeff adjoint-n");
    }
    if let Some(which) = &w.fixtures {
        if w.common.parabolic.is_some() {
            return usage("--fixtures describes n_max; drop --parabolic");
        }
        let fx = load_fixtures(which)?;
        if let Some(t) = &w.common.cartan {
            let given: CartanType = t.parse().map_err(|e| CliError::Usage(format!("--type {t}: {e}")))?;
            if given != fx.root_system().map_err(|e| CliError::Usage(e.to_string()))?.cartan_type() {
                return usage(format!("--type {t} does not match the fixture algebra {}", fx.algebra));
            }
        }
        let b = fixture_basis(&fx)?;
        return Ok(Built { rs: b.rs, alg: b.algebra, classes: b.classes, p: b.presentation });
    }
    let setup = Setup::from(&w.common)?;
    let cx = setup.complex(Coeff::AdjointN)?;
    let h = cx.cohomology();
    let alg = BracketAlgebra::new(cx).map_err(|e| CliError::Other(e.into()))?;
    let classes = Classes::canonical(h);
    let p = induced_bracket(&alg, &classes).map_err(|e| CliError::Other(e.into()))?;
    Ok(Built { rs: setup.rs, alg, classes, p })
}

fn table_json(p: &Presentation) -> Value {
    let mut map = serde_json::Map::new();
    for i in 0..p.dim() {
        for j in 0..p.dim() {
            let v = &p.table[i][j];
            let entry: serde_json::Map<String, Value> =
                v.iter().map(|(t, c)| (p.labels[t].name.clone(), Value::String(format_q(c)))).collect();
            map.insert(format!("{},{}", p.labels[i].name, p.labels[j].name), Value::Object(entry));
        }
    }
    json!({ "labels": p.labels, "table": map })
}

fn table(w: &WithFixtures) -> Result<Outcome, CliError> {
    let b = build(w)?;
    let p = match w.common.degree {
        None => b.p.clone(),
        Some(k) => restrict(&b.p, |d| d == k),
    };
    Ok(Outcome::ok(format!("{p}"), table_json(&p)))
}

/// Rows of the table for classes of the selected degrees.
fn restrict(p: &Presentation, keep: impl Fn(usize) -> bool) -> Presentation {
    let mut out = p.clone();
    for i in 0..p.dim() {
        if !keep(p.labels[i].degree) {
            for j in 0..p.dim() {
                out.table[i][j] = QVector::zeros(p.dim());
                out.table[j][i] = QVector::zeros(p.dim());
            }
        }
    }
    out
}

fn series_text(p: &Presentation, name: &str, series: &[Vec<QVector>]) -> (String, Vec<usize>) {
    let dims: Vec<usize> = series.iter().map(Vec::len).collect();
    let mut s = format!("{name}: {}\n", tuple(&dims));
    for (i, term) in series.iter().enumerate() {
        if !term.is_empty() && term.len() <= 4 {
            let span: Vec<String> = term.iter().map(|v| p.format_vector(v)).collect();
            let _ = writeln!(s, "  l_({i}) = span({})", span.join("; "));
        }
    }
    (s, dims)
}

fn derived_series(w: &WithFixtures) -> Result<Outcome, CliError> {
    let b = build(w)?;
    let (t1, d1) = series_text(&b.p, "derived", &b.p.derived_series());
    let (t2, d2) = series_text(&b.p, "lower central", &b.p.lower_central_series());
    Ok(Outcome::ok(t1 + &t2, json!({ "derived": d1, "lower_central": d2 })))
}

fn parse_x(p: &Presentation, s: &str) -> Result<QVector, CliError> {
    let mut x = QVector::zeros(p.dim());
    for part in s.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let Some((name, value)) = part.split_once('=') else {
            return usage(format!("--x: expected name=value, got {part:?}"));
        };
        let i = p.index_of(name.trim()).ok_or_else(|| CliError::Usage(format!("--x: unknown class {name}")))?;
        let c = parse_q(value.trim()).map_err(|_| CliError::Usage(format!("--x: bad coefficient {value:?}")))?;
        x.add_at(i, &c);
    }
    Ok(x)
}

fn homologic_check(h: &HomologicCheck) -> Result<Outcome, CliError> {
    let b = build(&h.basis)?;
    let x = parse_x(&b.p, &h.x)?;
    let ok = is_homologic(&x, &b.p).map_err(|e| CliError::Usage(e.to_string()))?;
    let sq = self_bracket(&x, &b.p);
    let text = format!("[x, x] = {}\nhomologic: {}\n", b.p.format_vector(&sq), if ok { "yes" } else { "no" });
    Ok(Outcome { text, json: json!({ "homologic": ok, "square": b.p.format_vector(&sq) }), passed: ok })
}

fn homologic_constraints(h: &HomologicConstraints) -> Result<Outcome, CliError> {
    let b = build(&h.basis)?;
    let p = &b.p;
    let support: Vec<usize> = match &h.support {
        Some(s) => s
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|n| p.index_of(n).ok_or_else(|| CliError::Usage(format!("--support: unknown class {n}"))))
            .collect::<Result<_, _>>()?,
        None => (0..p.dim())
            .filter(|&i| p.labels[i].parity() == 1 && h.basis.common.degree.map_or(true, |k| p.labels[i].degree == k))
            .collect(),
    };
    let forms = quadratic_constraints(p, &support).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text = String::new();
    let mut items = Vec::new();
    for f in &forms {
        let _ = writeln!(text, "{}: {} = 0", p.labels[f.component].name, f.format(p));
        items.push(json!({ "component": p.labels[f.component].name, "form": f.format(p) }));
    }
    if forms.is_empty() {
        text.push_str("[x, x] = 0 identically\n");
    }
    Ok(Outcome::ok(text, json!(items)))
}

fn bwb(c: &Common) -> Result<Outcome, CliError> {
    let setup = Setup::from(c)?;
    if !setup.maximal {
        return usage("bwb compares with Weyl group counts, which needs n_max");
    }
    let coeff = c.coeff.unwrap_or(Coeff::Trivial);
    if coeff == Coeff::AdjointN {
        return usage("bwb needs a g-module: --coeff trivial or adjoint-g");
    }
    let counts = setup.rs.weyl_length_counts(DEFAULT_WEYL_BOUND).map_err(|e| CliError::Other(e.into()))?;
    let dims = setup.complex(coeff)?.cohomology().dims();
    let passed = counts == dims;
    let text = format!(
        "Weyl length counts: {}\ndim H^i(n; M):      {}\n{}\n",
        tuple(&counts),
        tuple(&dims),
        if passed { "equal" } else { "DIFFERENT" }
    );
    Ok(Outcome { text, json: json!({ "weyl": counts, "cohomology": dims, "equal": passed }), passed })
}

fn theorem2(c: &Common) -> Result<Outcome, CliError> {
    let setup = Setup::from(c)?;
    if !setup.maximal {
        return usage("theorem2 is about n_max; drop --parabolic");
    }
    let w = WithFixtures { common: Common { coeff: None, ..c.clone() }, fixtures: None };
    let b = build(&w)?;
    let t = setup.rs.cartan_type().to_string();
    let mut text = String::new();
    let mut passed;
    let mut doc = serde_json::Map::new();
    if setup.rs.rank() == 1 {
        // Only c_1; b_1 = c_1 here.
        let dims = by_l_degree(&b.p);
        let commutative = b.p.table.iter().all(|row| row.iter().all(QVector::is_zero));
        let l0: Vec<usize> = (0..b.p.dim()).filter(|&i| b.p.labels[i].degree == 1).collect();
        let l0_comm = l0.iter().all(|&i| l0.iter().all(|&j| b.p.table[i][j].is_zero()));
        let _ = writeln!(text, "dim l_j: {dims:?}");
        let _ = writeln!(text, "l_0 commutative: {}", yes(l0_comm));
        let _ = writeln!(text, "l commutative: {}", yes(commutative));
        for i in 0..b.p.dim() {
            for j in 0..b.p.dim() {
                if !b.p.table[i][j].is_zero() {
                    let _ = writeln!(text, "  [{}, {}] = {}", b.p.labels[i].name, b.p.labels[j].name, b.p.format_vector(&b.p.table[i][j]));
                }
            }
        }
        passed = l0_comm && commutative && b.p.dim() == 1;
        doc.insert("dims".into(), json!(dims));
        doc.insert("l0_commutative".into(), json!(l0_comm));
        doc.insert("commutative".into(), json!(commutative));
    } else if t == "A2" {
        let r = sl3_report(&b.rs, &b.alg, &b.classes);
        let _ = writeln!(text, "[b1, b2] = c2 - c1: {}", yes(r.b1_b2));
        for rel in &r.gl2_relations {
            let _ = writeln!(text, "{}: {}", rel.relation, yes(rel.holds));
        }
        for (j, m) in &r.modules {
            let _ = match m {
                Some(parts) => writeln!(
                    text,
                    "l_{j}: {}",
                    parts.iter().map(|(z, h, d)| format!("L^{{{h};{z}}} (dim {d})")).collect::<Vec<_>>().join(" + ")
                ),
                None => writeln!(text, "l_{j}: not a sum of irreducibles with distinct central values"),
            };
        }
        passed = r.b1_b2 && r.gl2_relations.iter().all(|r| r.holds);
        doc.insert("sl3".into(), json!(r));
    } else {
        let rels = degree_one_relations(&b.rs, &b.alg, &b.classes);
        for rel in rels.iter().filter(|r| !r.holds) {
            let _ = writeln!(text, "FAILS: {}", rel.relation);
        }
        let _ = writeln!(text, "{} of {} relations hold", rels.iter().filter(|r| r.holds).count(), rels.len());
        passed = rels.iter().all(|r| r.holds);
        doc.insert("relations".into(), json!(rels));
    }
    if setup.rs.rank() > 1 {
        let wa = weight_action(&b.rs, &b.alg, &b.classes);
        let holds = wa.iter().filter(|r| r.holds).count();
        let _ = writeln!(text, "[c_i, h] = w_i(h) h: {holds} of {} hold", wa.len());
        passed &= holds == wa.len();
        doc.insert("weight_action".into(), json!(wa));
    }
    doc.insert("passed".into(), json!(passed));
    Ok(Outcome { text, json: Value::Object(doc), passed })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// `dim l_j` keyed by `j`.
fn by_l_degree(p: &Presentation) -> BTreeMap<i64, usize> {
    let mut m = BTreeMap::new();
    for l in &p.labels {
        *m.entry(l.degree as i64 - 1).or_insert(0) += 1;
    }
    m
}

fn qfield_check(c: &Common) -> Result<Outcome, CliError> {
    let setup = Setup::from(c)?;
    let qf = encode_differential(&setup.n);
    let qq = qf.bracket(&qf).map_err(|e| CliError::Other(e.into()))?;
    let jacobi = setup.n.jacobi_check().is_ok();
    let mut text = format!(
        "Q has {} terms\n[Q, Q] = 0: {}\nJacobi identity: {}\n",
        qf.len(),
        yes(qq.is_zero()),
        yes(jacobi)
    );
    let mut passed = qq.is_zero() == jacobi;
    let mut doc = json!({ "q_terms": qf.len(), "q_squared_zero": qq.is_zero(), "jacobi": jacobi });
    if setup.n.dim() <= MAX_CORRESPONDENCE_DIM {
        let r = chain_field_correspondence(&setup.n).map_err(|e| CliError::Other(e.into()))?;
        let _ = writeln!(
            text,
            "cochains vs fields: {} bracket pairs ({}), {} mismatches; {} differentials, {} mismatches",
            r.bracket_pairs_checked,
            if r.exhaustive { "all" } else { "sampled" },
            r.bracket_mismatches,
            r.differential_checked,
            r.differential_mismatches
        );
        passed &= r.agrees();
        doc["correspondence"] = json!(r);
    } else {
        let _ = writeln!(text, "cochains vs fields: skipped, dim n > {MAX_CORRESPONDENCE_DIM}");
    }
    Ok(Outcome { text, json: doc, passed })
}

fn verify(v: &VerifyFixtures) -> Result<Outcome, CliError> {
    let fx = load_fixtures(&v.file)?;
    let r = verify_fixtures(&fx)?;
    let mut text = String::new();
    match (&r.signs, &r.match_failure) {
        (Some(s), _) => {
            let _ = writeln!(text, "basis signs: {s:?}");
        }
        (None, Some(f)) => {
            let _ = writeln!(text, "no sign assignment works; best makes {} cocycles, {} fails", f.best_cocycles, f.failing);
        }
        (None, None) => {}
    }
    let bad: Vec<&str> = r.cochains.iter().filter(|c| !c.cocycle || c.coboundary).map(|c| c.name.as_str()).collect();
    let _ = writeln!(text, "cochains: {} checked, {} failing {:?}", r.cochains.len(), bad.len(), bad);
    let _ = match &r.spanning {
        Ok(()) => writeln!(text, "spanning: yes"),
        Err(e) => writeln!(text, "spanning: no ({e})"),
    };
    let failed: Vec<_> = r.failed_entries().collect();
    let _ = writeln!(
        text,
        "table: {} entries, {} weight rows, {} mismatches",
        r.entries.len(),
        r.weight_rows.len(),
        failed.len()
    );
    for e in &failed {
        let _ = writeln!(text, "  [{}, {}] expected {} computed {}", e.left, e.right, e.expected, e.computed);
    }
    let passed = r.passed();
    let _ = writeln!(text, "{}", if passed { "PASS" } else { "FAIL" });
    Ok(Outcome { text, json: serde_json::to_value(&r).map_err(|e| CliError::Other(e.into()))?, passed })
}

fn export(w: &WithFixtures) -> Result<Outcome, CliError> {
    let fx = match &w.fixtures {
        Some(which) => load_fixtures(which)?,
        None => {
            let b = build(w)?;
            let named: Vec<(String, Cochain)> =
                b.p.labels.iter().map(|l| l.name.clone()).zip(b.classes.reps().iter().cloned()).collect();
            FixtureSet::from_cochains(&b.rs.cartan_type().to_string(), &b.rs, &named).with_table(&b.p)
        }
    };
    let json = serde_json::to_value(&fx).map_err(|e| CliError::Other(e.into()))?;
    Ok(Outcome::ok(fx.to_json(), json))
}
