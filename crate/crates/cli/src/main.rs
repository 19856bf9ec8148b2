//! Command-line front end: gluing-matrix classification, the two end-to-end
//! symmetry verdicts, and direct wrappers around the algebra and
//! linking-matrix engines. All output is deterministic; `--machine`
//! switches every subcommand to key=value lines.
//!
//! Exit codes: 0 success, 2 hypothesis failure, 3 parse error, 4 search
//! budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use splice_floer::complex::Grading;
use splice_floer::cone::reduce_cone;
use splice_floer::gluing::{GluingMatrix, Sign, Type2Verdict};
use splice_floer::iota::{find_local_map, is_local_map, verify_iota, IotaComplex};
use splice_floer::kirby::{h1_order, normalize_step, CobordismData};
use splice_floer::textio;
use splice_floer::{
    a_n_complex, b_complex, blow_down, change_sign_identity, classify_type1, classify_type2,
    d_invariant, evaluate_word, factorize, is_splice_homology_sphere, family_word_report,
    lens_d, presentation_from_word, reduce, surgery_cone, type1_cobordism, type1_filling,
    type2_cobordism, v_map, Error, GeneratorWord, ParseError, DEFAULT_SEARCH_BUDGET,
};

#[derive(Parser)]
#[command(name = "splicefloer", version, about = "Symmetric splice calculator: gluing classification, surgery presentations, and exact involutive complex algebra")]
struct Cli {
    /// Emit key=value lines instead of prose.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MatrixArgs {
    /// Matrix entries as `a,b;c,d`.
    #[arg(long)]
    matrix: String,
    /// Basis convention the matrix is written in: phi (det -1) or psi (det +1).
    #[arg(long)]
    basis: String,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a gluing matrix against both symmetry families.
    Classify(MatrixArgs),
    /// Full first-symmetry verdict: normalization, cobordism data, model.
    VerdictType1 {
        #[command(flatten)]
        matrix: MatrixArgs,
        /// Directory to write re-verifiable witness files into.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Full second-symmetry verdict from two knot complex files.
    VerdictType2 {
        #[arg(long)]
        knot0: PathBuf,
        #[arg(long)]
        knot1: PathBuf,
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Reduce a complex to its normal form.
    Reduce { file: PathBuf },
    /// Print the d-invariant of a complex.
    DInv { file: PathBuf },
    /// Verify the involution axioms on an iota-complex file.
    IotaVerify { file: PathBuf },
    /// Search for (or check) a local map between two iota-complex files.
    LocalMap {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        /// Check this map file instead of searching.
        #[arg(long)]
        check: Option<PathBuf>,
        /// Search cap in kernel bits (overrides SPLICE_FLOER_BUDGET).
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Build the surgery cone over A, B and a comparison map file.
    Cone {
        /// Complex file for A.
        #[arg(long)]
        a: PathBuf,
        /// Complex file for B (must reduce to a single tower).
        #[arg(long)]
        b: PathBuf,
        /// Map file for v: A -> B.
        #[arg(long)]
        map: PathBuf,
        /// Overall grading shift, e.g. -1/4.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        shift: String,
    },
    /// Tensor two complexes (plain, involutive, or bigraded — matching kinds).
    Tensor { file1: PathBuf, file2: PathBuf },
    /// Dualize a complex file.
    Dual { file: PathBuf },
    /// Factor a psi-mode matrix into H and T(k) generators.
    Factorize(MatrixArgs),
    /// Print the chain surgery presentation of a symmetric-family word.
    Present {
        /// Family parameter: use the word H T(-n) H T(n) H.
        #[arg(long, conflicts_with = "word")]
        n: Option<i64>,
        /// Explicit word such as "H T(-2) H T(2) H".
        #[arg(long)]
        word: Option<String>,
    },
    /// Blow down a component of a presentation file.
    Blowdown {
        file: PathBuf,
        #[arg(long)]
        index: usize,
    },
    /// Print handle-cobordism data for one of the standard families.
    Cobordism {
        /// One of: type1, type1-filling, type2.
        #[arg(long)]
        family: String,
        /// Family parameter echoed into the type1 target description.
        #[arg(long, default_value_t = 0)]
        n: i64,
    },
}

struct Out {
    machine: bool,
}

impl Out {
    fn kv(&self, key: &str, value: impl std::fmt::Display) {
        if self.machine {
            println!("{key}={value}");
        } else {
            println!("{key}: {value}");
        }
    }

    fn block(&self, text: &str) {
        print!("{text}");
    }
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure { code, msg: msg.into() }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::new(3, e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchBudgetExceeded { .. } => 4,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(1, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out { machine: cli.machine };
    match run(cli.command, &out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))
}

fn parse_matrix(args: &MatrixArgs) -> Result<GluingMatrix, Failure> {
    let entries = textio::parse_matrix_arg(&args.matrix)?;
    let basis = textio::parse_basis_arg(&args.basis)?;
    Ok(GluingMatrix::new(entries, basis))
}

fn budget_from(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("SPLICE_FLOER_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_SEARCH_BUDGET)
}

fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "+",
        Sign::Minus => "-",
    }
}

fn run(cmd: Command, out: &Out) -> Result<(), Failure> {
    match cmd {
        Command::Classify(args) => classify_cmd(&args, out),
        Command::VerdictType1 { matrix, witness_dir } => {
            verdict_type1_cmd(&matrix, witness_dir.as_deref(), out)
        }
        Command::VerdictType2 { knot0, knot1, witness_dir } => {
            verdict_type2_cmd(&knot0, &knot1, witness_dir.as_deref(), out)
        }
        Command::Reduce { file } => reduce_cmd(&file, out),
        Command::DInv { file } => {
            let text = read(&file)?;
            let c = if textio::looks_iota(&text) {
                textio::parse_iota_complex(&text)?.complex
            } else {
                textio::parse_complex(&text)?
            };
            let d = d_invariant(&c)?;
            if out.machine {
                out.kv("d", d);
            } else {
                println!("{d}");
            }
            Ok(())
        }
        Command::IotaVerify { file } => iota_verify_cmd(&file, out),
        Command::LocalMap { from, to, check, budget } => {
            local_map_cmd(&from, &to, check.as_deref(), budget, out)
        }
        Command::Cone { a, b, map, shift } => cone_cmd(&a, &b, &map, &shift, out),
        Command::Tensor { file1, file2 } => tensor_cmd(&file1, &file2, out),
        Command::Dual { file } => dual_cmd(&file, out),
        Command::Factorize(args) => {
            let m = parse_matrix(&args)?;
            let w = factorize(&m)?;
            println!("{w}");
            Ok(())
        }
        Command::Present { n, word } => present_cmd(n, word.as_deref(), out),
        Command::Blowdown { file, index } => {
            let p = textio::parse_presentation(&read(&file)?)?;
            let q = blow_down(&p, index)?;
            out.block(&textio::write_presentation("blown-down", &q));
            out.kv("h1", h1_order(&q));
            Ok(())
        }
        Command::Cobordism { family, n } => cobordism_cmd(&family, n, out),
    }
}

fn classify_cmd(args: &MatrixArgs, out: &Out) -> Result<(), Failure> {
    let m = parse_matrix(args)?;
    out.kv("matrix", textio::format_matrix(&m));
    out.kv("basis", m.mode);
    if !m.is_valid() {
        out.kv("valid", format!("no (determinant {})", m.det()));
        out.kv("type1", "none");
        out.kv("type2", "none");
        return Ok(());
    }
    out.kv(
        "homology_sphere",
        if is_splice_homology_sphere(&m) { "yes" } else { "no" },
    );
    match classify_type1(&m) {
        Some((n, sign)) => {
            out.kv("type1", format!("n={n} sign={}", sign_str(sign)));
            normalization_path(n, sign, out)?;
        }
        None => out.kv("type1", "none"),
    }
    match classify_type2(&m) {
        Type2Verdict::Admissible => out.kv("type2", "admissible"),
        Type2Verdict::B1Splice => out.kv("type2", "none: b1=1 splice"),
        Type2Verdict::No => out.kv("type2", "none"),
    }
    Ok(())
}

/// Walk the family parameter to zero: a sign change when needed, then one
/// double-blow-up move per unit of n, checking |H1| = 1 throughout.
/// Returns the final presentation.
fn normalization_path(
    n: i64,
    sign: Sign,
    out: &Out,
) -> Result<splice_floer::SurgeryPresentation, Failure> {
    let mut cur_n = n;
    if sign == Sign::Minus {
        assert!(change_sign_identity(-n));
        cur_n = -n;
        out.kv(
            "normalize",
            format!("negate the gluing (companions reversed): n={n} sign=- -> n={cur_n} sign=+"),
        );
    }
    let mut pres = presentation_from_word(&GeneratorWord::symmetric_family(cur_n), "K", "mK")?;
    out.kv("h1", h1_order(&pres));
    let mut moves = 0;
    while cur_n != 0 {
        let dir = if cur_n > 0 { -1 } else { 1 };
        pres = normalize_step(&pres, dir)?;
        cur_n += dir;
        moves += 1;
        out.kv(
            "normalize",
            format!(
                "two clasp blow-ups + companion retirement: n -> {cur_n}, |H1| = {}",
                h1_order(&pres)
            ),
        );
        if h1_order(&pres) != 1 {
            return Err(Failure::new(2, "normalization broke the homology sphere"));
        }
    }
    out.kv("normalize_moves", moves);
    Ok(pres)
}

fn verdict_type1_cmd(
    args: &MatrixArgs,
    witness_dir: Option<&Path>,
    out: &Out,
) -> Result<(), Failure> {
    let m = parse_matrix(args)?;
    let Some((n, sign)) = classify_type1(&m) else {
        return Err(Failure::new(
            2,
            format!("matrix {} is not in the first symmetry family", m),
        ));
    };
    out.kv("matrix", textio::format_matrix(&m));
    out.kv("classification", format!("type1 n={n} sign={}", sign_str(sign)));
    let pres = normalization_path(n, sign, out)?;
    out.block(&textio::write_presentation("normalized", &pres));

    let w = type1_cobordism(n);
    emit_cobordism(&w, out);

    let model = IotaComplex::trivial_at(w.grading_shift);
    out.kv(
        "model",
        format!("F[U]_{{{}}} with identity involution", w.grading_shift),
    );
    // Witness algebra: the model class is its own inverse under tensor.
    let x = model.tensor(&model.dual());
    let budget = budget_from(None);
    let trivial = IotaComplex::trivial();
    let to = find_local_map(&x, &trivial, budget)?
        .ok_or_else(|| Failure::new(2, "no local map from model (x) dual to the trivial complex"))?;
    let from = find_local_map(&trivial, &x, budget)?
        .ok_or_else(|| Failure::new(2, "no local map from the trivial complex to model (x) dual"))?;
    out.kv(
        "witness",
        "model (x) dual(model) is locally trivial; local maps found both ways",
    );
    if let Some(dir) = witness_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("tensor.iota"), textio::write_iota_complex(&x))?;
        fs::write(dir.join("trivial.iota"), textio::write_iota_complex(&trivial))?;
        fs::write(dir.join("to_trivial.map"), textio::write_map("to_trivial", &to))?;
        fs::write(dir.join("from_trivial.map"), textio::write_map("from_trivial", &from))?;
        out.kv("witness_dir", dir.display());
    }
    out.kv(
        "verdict",
        "locally trivial (conditional on cobordism-map naturality)",
    );
    Ok(())
}

fn verdict_type2_cmd(
    knot0: &Path,
    knot1: &Path,
    witness_dir: Option<&Path>,
    out: &Out,
) -> Result<(), Failure> {
    let k0 = textio::parse_knotlike(&read(knot0)?)?;
    let k1 = textio::parse_knotlike(&read(knot1)?)?;
    for (label, k) in [("knot0", &k0), ("knot1", &k1)] {
        let v = k.validate();
        if !v.is_empty() {
            return Err(Failure::new(2, format!("{label} is not a valid knot complex: {}", v[0])));
        }
        if !k.is_locally_trivial() {
            return Err(Failure::new(2, format!("{label} not locally trivial")));
        }
        out.kv(label, format!("{} ({} generators): locally trivial", k.name, k.rank()));
    }
    let sum = k0.tensor(&k1);
    out.kv("connected_sum", format!("{} generators", sum.rank()));
    let a1 = a_n_complex(&sum, 1)?;
    let d_a1 = d_invariant(&a1)?;
    out.kv("d_a1", d_a1);
    if d_a1 != Grading::from_integer(0) {
        return Err(Failure::new(2, format!("d(A_1) = {d_a1}, need 0")));
    }
    let shift = lens_d(2, 1)?;
    out.kv("shift", shift);
    let cone = surgery_cone(&a1, &b_complex(&sum)?, &v_map(&sum, 1)?, shift)?;
    out.kv("cone", format!("{} generators", cone.iota.complex.rank()));
    let red = reduce_cone(&cone)?;
    assert_eq!(is_local_map(&red.to_model, &cone.iota, &red.model), Ok(true));
    assert_eq!(is_local_map(&red.from_model, &red.model, &cone.iota), Ok(true));
    out.kv(
        "surgery_class",
        format!("F[U]_{{{shift}}} with identity involution; local maps verified both ways"),
    );
    let dual_grading = red.model.dual().complex.gens[0].grading;
    out.kv("dual_class", format!("F[U]_{{{dual_grading}}}"));
    if let Some(dir) = witness_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("cone.iota"), textio::write_iota_complex(&cone.iota))?;
        fs::write(dir.join("model.iota"), textio::write_iota_complex(&red.model))?;
        fs::write(dir.join("to_model.map"), textio::write_map("to_model", &red.to_model))?;
        fs::write(
            dir.join("from_model.map"),
            textio::write_map("from_model", &red.from_model),
        )?;
        out.kv("witness_dir", dir.display());
    }
    out.kv(
        "verdict",
        "locally trivial (conditional on cobordism-map naturality)",
    );
    Ok(())
}

fn reduce_cmd(file: &Path, out: &Out) -> Result<(), Failure> {
    let text = read(file)?;
    let c = if textio::looks_iota(&text) {
        textio::parse_iota_complex(&text)?.complex
    } else {
        textio::parse_complex(&text)?
    };
    let r = reduce(&c)?;
    out.kv("tower", r.normal_form.tower_grading);
    for s in &r.normal_form.steps {
        out.kv("step", format!("top={} length={}", s.top_grading, s.length));
    }
    out.block(&textio::write_complex(&r.reduced));
    Ok(())
}

fn iota_verify_cmd(file: &Path, out: &Out) -> Result<(), Failure> {
    let x = textio::parse_iota_complex(&read(file)?)?;
    let rep = verify_iota(&x);
    if rep.is_ok() {
        out.kv("ok", "iota-complex verified");
        if let Some(h) = rep.square_homotopy {
            out.block(&textio::write_map("square_homotopy", &h));
        }
        Ok(())
    } else {
        for v in &rep.violations {
            out.kv("violation", v);
        }
        Err(Failure::new(2, "iota-complex verification failed"))
    }
}

fn local_map_cmd(
    from: &Path,
    to: &Path,
    check: Option<&Path>,
    budget: Option<usize>,
    out: &Out,
) -> Result<(), Failure> {
    let x1 = textio::parse_iota_complex(&read(from)?)?;
    let x2 = textio::parse_iota_complex(&read(to)?)?;
    match check {
        Some(map_path) => {
            let m = textio::parse_map(&read(map_path)?, &x1.complex, &x2.complex)?;
            let ok = is_local_map(&m, &x1, &x2)?;
            out.kv("local", if ok { "yes" } else { "no" });
            if ok {
                Ok(())
            } else {
                Err(Failure::new(2, "map is not a local map"))
            }
        }
        None => {
            match find_local_map(&x1, &x2, budget_from(budget))? {
                Some(f) => {
                    out.kv("found", "yes");
                    out.block(&textio::write_map("local_map", &f));
                }
                None => out.kv("found", "none"),
            }
            Ok(())
        }
    }
}

fn cone_cmd(a: &Path, b: &Path, map: &Path, shift: &str, out: &Out) -> Result<(), Failure> {
    let a = textio::parse_complex(&read(a)?)?;
    let b = textio::parse_complex(&read(b)?)?;
    let v = textio::parse_map(&read(map)?, &a, &b)?;
    let shift: Grading = shift
        .parse()
        .map_err(|_| Failure::new(3, format!("bad shift `{shift}` (expected integer or p/q)")))?;
    let cone = surgery_cone(&a, &b, &v, shift)?;
    out.block(&textio::write_iota_complex(&cone.iota));
    Ok(())
}

fn tensor_cmd(file1: &Path, file2: &Path, out: &Out) -> Result<(), Failure> {
    let t1 = read(file1)?;
    let t2 = read(file2)?;
    match (textio::looks_knotlike(&t1), textio::looks_knotlike(&t2)) {
        (true, true) => {
            let c = textio::parse_knotlike(&t1)?.tensor(&textio::parse_knotlike(&t2)?);
            out.block(&textio::write_knotlike(&c));
        }
        (false, false) => match (textio::looks_iota(&t1), textio::looks_iota(&t2)) {
            (true, true) => {
                let x = textio::parse_iota_complex(&t1)?.tensor(&textio::parse_iota_complex(&t2)?);
                out.block(&textio::write_iota_complex(&x));
            }
            (false, false) => {
                let c = textio::parse_complex(&t1)?.tensor(&textio::parse_complex(&t2)?);
                out.block(&textio::write_complex(&c));
            }
            _ => {
                return Err(Failure::new(
                    2,
                    "cannot tensor an iota-complex with a plain complex",
                ))
            }
        },
        _ => {
            return Err(Failure::new(
                2,
                "cannot tensor a bigraded complex with a one-variable complex",
            ))
        }
    }
    Ok(())
}

fn dual_cmd(file: &Path, out: &Out) -> Result<(), Failure> {
    let text = read(file)?;
    if textio::looks_knotlike(&text) {
        out.block(&textio::write_knotlike(&textio::parse_knotlike(&text)?.mirror()));
    } else if textio::looks_iota(&text) {
        out.block(&textio::write_iota_complex(
            &textio::parse_iota_complex(&text)?.dual(),
        ));
    } else {
        out.block(&textio::write_complex(&textio::parse_complex(&text)?.dual()));
    }
    Ok(())
}

fn present_cmd(n: Option<i64>, word: Option<&str>, out: &Out) -> Result<(), Failure> {
    let w = match (n, word) {
        (Some(n), None) => {
            let rep = family_word_report(n);
            out.kv("word", &rep.word);
            out.kv(
                "word_value_vs_family",
                format!("{} (reversed order: {})", rep.relation, rep.reversed_relation),
            );
            rep.word
        }
        (None, Some(text)) => {
            let w = textio::parse_word(text)?;
            out.kv("word", &w);
            let value = evaluate_word(&w);
            out.kv("value", textio::format_matrix(&value));
            w
        }
        _ => return Err(Failure::new(3, "present needs exactly one of --n or --word")),
    };
    let p = presentation_from_word(&w, "K", "mK")?;
    out.block(&textio::write_presentation("splice", &p));
    out.kv("h1", h1_order(&p));
    Ok(())
}

fn emit_cobordism(w: &CobordismData, out: &Out) {
    out.kv("chi", w.chi);
    out.kv("sigma", w.sigma);
    out.kv("b1", w.b1);
    out.kv("b2plus", w.b2_plus);
    out.kv("b2minus", w.b2_minus);
    out.kv("even", if w.even_form { "yes" } else { "no" });
    out.kv(
        "negative_definite",
        if w.is_negative_definite() { "yes" } else { "no" },
    );
    out.kv("shift", w.grading_shift);
    out.kv("target", &w.target);
}

fn cobordism_cmd(family: &str, n: i64, out: &Out) -> Result<(), Failure> {
    let w = match family {
        "type1" => type1_cobordism(n),
        "type1-filling" => type1_filling(),
        "type2" => type2_cobordism(),
        other => {
            return Err(Failure::new(
                3,
                format!("unknown family `{other}` (type1, type1-filling, type2)"),
            ))
        }
    };
    out.kv("family", family);
    emit_cobordism(&w, out);
    Ok(())
}
