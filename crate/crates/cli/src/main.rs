//! Command-line surface: generate the matrix families, certify constant
//! rank, list syzygies, evaluate Segre series, compute Hilbert functions,
//! run generation scans, and drive batch experiments.
//!
//! Exit codes for `certify`: 0 = CONSTANT, 2 = BOUNDED_ONLY, 3 = REFUTED,
//! 4 = UNKNOWN, 1 = usage or parse error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;

use constrank_core::certify::{
    certify_constant_rank, certify_section_model, CertVerdict, CertifyOptions,
};
use constrank_core::chern::{
    chern_of_presentation, min_generating_sections, segre, DerivedOp, FormalRoots,
    PresentationClass,
};
use constrank_core::corpus;
use constrank_core::doc::{CertificateDocument, FormsDocument, MatrixDocument};
use constrank_core::experiments;
use constrank_core::generation::{
    drezet_gen_at, drezet_gen_at_general, mixed_gen_at, random_points, scan, sigma_gen_at,
    structured_points, Verdict,
};
use constrank_core::ideals::{hilbert_fn, is_ordinary, syz1, syzygy_forms};
use constrank_core::model::{
    apolar_space, castled_model, direct_sum, drezet_model, mixed_model, pairing_matrix,
    quotient_model, sigma_model, wedge2q_model, SectionModel,
};
use constrank_core::parse::parse_poly;
use constrank_core::poly::Alphabet;
use constrank_core::scalar::{Field, Scalar};

#[derive(Parser)]
#[command(name = "constrank", version, about = "exact constant-rank matrices of linear forms")]
struct Cli {
    /// Coefficient field: `Q` or `Fp:<prime>` (default from CONSTRANK_FIELD, else Q).
    #[arg(long, global = true)]
    field: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a matrix of linear forms from a presentation family.
    Gen(GenArgs),
    /// Certify that a matrix file has constant rank.
    Certify(CertifyArgs),
    /// List the linear syzygies of a form space.
    Syz {
        /// Form-space file (JSON).
        forms: PathBuf,
    },
    /// Segre series and minimal generating-section count of a presentation.
    Segre(SegreArgs),
    /// Hilbert function of the ideal generated by a form space.
    Hilbert {
        forms: PathBuf,
        /// Highest degree to evaluate.
        #[arg(long, default_value_t = 6)]
        upto: u32,
    },
    /// Pointwise generation scan over structured plus random points.
    Scan(ScanArgs),
    /// Batch experiments with seeded sampling; prints CSV.
    Sample(SampleArgs),
    /// Write every corpus matrix to a directory.
    Corpus {
        #[arg(long, default_value = "corpus")]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct GenArgs {
    /// quotient | wedge2q | drezet | apolar | mixed | castled | sigma |
    /// pencil-example | net-example | quartic-example
    family: String,
    #[arg(long)]
    n: Option<usize>,
    /// Form-space file for `drezet`.
    #[arg(long)]
    forms: Option<PathBuf>,
    /// Primal form expression for `apolar` (e.g. "e0^3*e1 + e1^3*e2 + e2^3*e0").
    #[arg(long)]
    form: Option<String>,
    /// Apolar degree for `apolar`.
    #[arg(long)]
    c: Option<u32>,
    /// Section coordinates for `mixed`, comma-separated (e.g. "1,0,0").
    #[arg(long)]
    a0: Option<String>,
    /// Primal quadric for `mixed` (e.g. "e1*e2").
    #[arg(long)]
    q0: Option<String>,
    /// Preset for `castled`: twisted-cubic | three-quotients | two-quotients.
    #[arg(long)]
    preset: Option<String>,
    /// Rank parameter for `sigma`.
    #[arg(long)]
    e: Option<usize>,
    /// Pencil parameter for `pencil-example`.
    #[arg(long = "T")]
    t: Option<String>,
    /// Allow base points (bounded rank) in `drezet`.
    #[arg(long, default_value_t = false)]
    allow_base_points: bool,
    #[arg(long, default_value_t = 0xC0FFEE)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    file: PathBuf,
    /// Claimed constant rank.
    #[arg(long)]
    rank: usize,
    /// Highest Nullstellensatz degree to try (default rank + n + 2).
    #[arg(long)]
    dmax: Option<u32>,
    /// Random points for sampled upper bounds on large grids.
    #[arg(long, default_value_t = 100_000)]
    points: usize,
    #[arg(long, default_value_t = 0xC0FFEE)]
    seed: u64,
    /// Write the certificate document here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SegreArgs {
    /// quotient | wedge2q | drezet | steiner | mixed | sigma
    kind: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    c: Option<u32>,
    #[arg(long)]
    e: Option<usize>,
    /// Also report the twisted dual `E^v(1)`.
    #[arg(long, default_value_t = false)]
    dual_twist: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// drezet | mixed | sigma
    kind: String,
    #[arg(long)]
    forms: Option<PathBuf>,
    #[arg(long)]
    a0: Option<String>,
    #[arg(long)]
    q0: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    e: Option<usize>,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, default_value_t = 0xC0FFEE)]
    seed: u64,
}

#[derive(Args)]
struct SampleArgs {
    /// drezet-generic | corank1 | corank2 | mac-bound | sigma-range
    experiment: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0xC0FFEE)]
    seed: u64,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    c: Option<u32>,
    #[arg(long)]
    e: Option<usize>,
    /// Dimension of the sampled form spaces (drezet-generic).
    #[arg(long)]
    dimp: Option<usize>,
    #[arg(long, default_value_t = 60)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_field(arg: &Option<String>) -> Result<Field> {
    let spec = match arg {
        Some(s) => s.clone(),
        None => std::env::var("CONSTRANK_FIELD").unwrap_or_else(|_| "Q".into()),
    };
    if spec == "Q" {
        return Ok(Field::Rational);
    }
    if let Some(p) = spec.strip_prefix("Fp:") {
        let p: u64 = p.parse().context("bad prime in field spec")?;
        return Ok(Field::prime_checked(p, 64)?);
    }
    bail!("unknown field {spec:?} (expected Q or Fp:<prime>)")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let field = parse_field(&cli.field)?;
    match cli.command {
        Command::Gen(args) => cmd_gen(field, args),
        Command::Certify(args) => cmd_certify(field, args),
        Command::Syz { forms } => cmd_syz(forms),
        Command::Segre(args) => cmd_segre(args),
        Command::Hilbert { forms, upto } => cmd_hilbert(forms, upto),
        Command::Scan(args) => cmd_scan(field, args),
        Command::Sample(args) => cmd_sample(args),
        Command::Corpus { out_dir } => cmd_corpus(field, out_dir),
    }
}

fn emit_matrix(doc: &MatrixDocument, out: Option<PathBuf>) -> Result<ExitCode> {
    let json = doc.to_json();
    match out {
        Some(path) => fs::write(&path, json).with_context(|| format!("writing {path:?}"))?,
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn model_doc(model: &SectionModel, label: &str) -> MatrixDocument {
    MatrixDocument::from_matrix(
        &pairing_matrix(model),
        label,
        &model.source,
        Some(model.rank),
    )
}

fn cmd_gen(field: Field, args: GenArgs) -> Result<ExitCode> {
    let doc = match args.family.as_str() {
        "quotient" => {
            let n = args.n.ok_or_else(|| anyhow!("quotient needs --n"))?;
            model_doc(&quotient_model(field, n), &format!("quotient_n{n}"))
        }
        "wedge2q" => model_doc(&wedge2q_model(field), "wedge2q_10x10"),
        "drezet" => {
            let path = args.forms.ok_or_else(|| anyhow!("drezet needs --forms FILE"))?;
            let space = FormsDocument::from_json(&fs::read_to_string(&path)?)?.to_space()?;
            let model = drezet_model(&space, args.allow_base_points)?;
            model_doc(&model, "drezet")
        }
        "apolar" => {
            let n = args.n.ok_or_else(|| anyhow!("apolar needs --n"))?;
            let c = args.c.ok_or_else(|| anyhow!("apolar needs --c"))?;
            let expr = args.form.ok_or_else(|| anyhow!("apolar needs --form EXPR"))?;
            let f = parse_poly(field, Alphabet::Primal, n, &expr, None)?;
            let p = apolar_space(&f, c)?;
            let model = drezet_model(&p, args.allow_base_points)?;
            model_doc(&model, "apolar")
        }
        "mixed" => {
            let a0 = parse_coords(field, &args.a0.ok_or_else(|| anyhow!("mixed needs --a0"))?)?;
            let q0 = parse_poly(
                field,
                Alphabet::Primal,
                2,
                &args.q0.ok_or_else(|| anyhow!("mixed needs --q0"))?,
                None,
            )?;
            model_doc(&mixed_model(&a0, &q0)?, "mixed_8x8")
        }
        "castled" => {
            let preset = args.preset.ok_or_else(|| anyhow!("castled needs --preset"))?;
            match preset.as_str() {
                "twisted-cubic" => {
                    let tensors = corpus::twisted_cubic_tensors(field);
                    model_doc(&castled_model(field, 3, 3, &tensors)?, "twisted_cubic")
                }
                "three-quotients" | "two-quotients" => {
                    let n = args.n.unwrap_or(3);
                    let copies = if preset == "three-quotients" { 3 } else { 2 };
                    let q = quotient_model(field, n);
                    let model = direct_sum(&vec![q; copies])?;
                    model_doc(&model, &format!("{preset}_n{n}"))
                }
                other => bail!("unknown castled preset {other:?}"),
            }
        }
        "sigma" => {
            let n = args.n.ok_or_else(|| anyhow!("sigma needs --n"))?;
            let e = args.e.ok_or_else(|| anyhow!("sigma needs --e"))?;
            let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(args.seed);
            let sigma = experiments::random_sigma(field, n, e + n, &mut rng);
            model_doc(&sigma_model(&sigma, n)?, &format!("sigma_n{n}_e{e}"))
        }
        "pencil-example" => {
            let t = args.t.as_deref().unwrap_or("5");
            let t = Scalar::parse(field, t)?;
            let entry = corpus::pencil(field, &t);
            MatrixDocument::from_matrix(
                &entry.matrix,
                entry.label,
                entry.description,
                Some(entry.claimed_rank),
            )
        }
        "net-example" => corpus_doc(corpus::net(field)),
        "quartic-example" => corpus_doc(corpus::quartic_skew(field)),
        other => bail!("unknown family {other:?}"),
    };
    emit_matrix(&doc, args.out)
}

fn corpus_doc(entry: corpus::CorpusEntry) -> MatrixDocument {
    MatrixDocument::from_matrix(
        &entry.matrix,
        entry.label,
        entry.description,
        Some(entry.claimed_rank),
    )
}

fn parse_coords(field: Field, s: &str) -> Result<Vec<Scalar>> {
    s.split(',')
        .map(|part| Ok(Scalar::parse(field, part.trim())?))
        .collect()
}

fn cmd_certify(field: Field, args: CertifyArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.file).with_context(|| format!("reading {:?}", args.file))?;
    let doc = MatrixDocument::from_json(&text)?;
    let mut matrix = doc.to_matrix()?;
    // An explicit --field Fp:<p> reduces a rational matrix for screening.
    if field != matrix.field {
        if let Field::Prime(_) = field {
            let mut reduced =
                constrank_core::model::LinearFormMatrix::zero(field, matrix.n, matrix.rows, matrix.cols);
            for i in 0..matrix.rows {
                for j in 0..matrix.cols {
                    for k in 0..=matrix.n {
                        let s = matrix.coeff_at(i, j, k).to_coeff_string();
                        let v = Scalar::parse(Field::Rational, &s)?;
                        let (num, den) = match v {
                            Scalar::Rational(r) => (r.numer().clone(), r.denom().clone()),
                            _ => unreachable!(),
                        };
                        let p = field.characteristic();
                        let nm = Scalar::parse(field, &(num % p).to_string())?;
                        let dn = Scalar::parse(field, &(den % p).to_string())?;
                        reduced.set_coeff(i, j, k, nm.div(&dn)?);
                    }
                }
            }
            matrix = reduced;
        }
    }
    let opts = CertifyOptions {
        dmax: args.dmax,
        sampling_points: args.points,
        seed: args.seed,
        ..Default::default()
    };
    let cert = certify_constant_rank(&matrix, args.rank, &opts);
    let code = match &cert.verdict {
        CertVerdict::Constant { .. } => 0u8,
        CertVerdict::BoundedOnly { .. } => 2,
        CertVerdict::Refuted { .. } => 3,
        CertVerdict::Unknown => 4,
    };
    let cert_doc = CertificateDocument::new(&doc, cert);
    let json = cert_doc.to_json();
    match args.out {
        Some(path) => {
            fs::write(&path, &json)?;
            println!("verdict: {}", verdict_line(&cert_doc.certificate.verdict));
        }
        None => println!("{json}"),
    }
    Ok(ExitCode::from(code))
}

fn verdict_line(v: &CertVerdict) -> String {
    match v {
        CertVerdict::Constant { rank } => format!("CONSTANT({rank})"),
        CertVerdict::BoundedOnly { rank, drop_points, locus_degree } => format!(
            "BOUNDED_ONLY({rank}) with {} drop witness(es){}",
            drop_points.len(),
            locus_degree
                .map(|d| format!(", drop locus of degree {d}"))
                .unwrap_or_default()
        ),
        CertVerdict::Refuted { point } => {
            format!("REFUTED at [{}] with rank {}", point.coords.join(":"), point.rank)
        }
        CertVerdict::Unknown => "UNKNOWN".into(),
    }
}

fn cmd_syz(path: PathBuf) -> Result<ExitCode> {
    let space = FormsDocument::from_json(&fs::read_to_string(&path)?)?.to_space()?;
    let syz = syz1(&space);
    let (ordinary, h1) = is_ordinary(&space);
    println!(
        "form space: n={} degree={} dim={}  |  syzygies: {}  ordinary: {ordinary} (h1 = {h1})",
        space.n,
        space.c,
        space.dim(),
        syz.dim()
    );
    for (i, tuple) in syzygy_forms(&space, &syz).iter().enumerate() {
        let parts: Vec<String> = tuple
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_zero())
            .map(|(j, l)| format!("({l})*P{j}"))
            .collect();
        println!("  syz{i}: {} = 0", parts.join(" + "));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_segre(args: SegreArgs) -> Result<ExitCode> {
    let n = args.n;
    let class = match args.kind.as_str() {
        "quotient" => PresentationClass::Quotient { n },
        "wedge2q" => PresentationClass::Wedge2Q,
        "drezet" => PresentationClass::Drezet {
            n,
            c: args.c.ok_or_else(|| anyhow!("drezet needs --c"))?,
            e: args.e.ok_or_else(|| anyhow!("drezet needs --e"))?,
        },
        "steiner" => PresentationClass::Steiner {
            n,
            c: args.c.ok_or_else(|| anyhow!("steiner needs --c"))?,
            e: args.e.ok_or_else(|| anyhow!("steiner needs --e"))?,
        },
        "mixed" => PresentationClass::Mixed { n, e: args.e.unwrap_or(6) },
        "sigma" => PresentationClass::Sigma {
            n,
            e: args.e.ok_or_else(|| anyhow!("sigma needs --e"))?,
        },
        other => bail!("unknown presentation {other:?}"),
    };
    let rank = match class {
        PresentationClass::Quotient { n } => n,
        PresentationClass::Wedge2Q => 6,
        PresentationClass::Drezet { e, .. }
        | PresentationClass::Steiner { e, .. }
        | PresentationClass::Mixed { e, .. }
        | PresentationClass::Sigma { e, .. } => e,
        PresentationClass::Trivial => 0,
    };
    let chern = chern_of_presentation(class, n)?;
    let s = segre(&chern)?;
    println!("c(E) = {}", series_string(&chern));
    println!("s(E) = {}", series_string(&s));
    println!("min generating sections a_min(E) = {}", min_generating_sections(&chern, rank)?);
    if args.dual_twist {
        let dt = FormalRoots::from_chern(&chern, rank)
            .apply(DerivedOp::Dual)?
            .apply(DerivedOp::Twist(1))?
            .chern();
        let sdt = segre(&dt)?;
        println!("c(E^v(1)) = {}", series_string(&dt));
        println!("s(E^v(1)) = {}", series_string(&sdt));
        println!(
            "min generating sections a_min(E^v(1)) = {}",
            min_generating_sections(&dt, rank)?
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn series_string(s: &constrank_core::chern::Series) -> String {
    let parts: Vec<String> = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| match k {
            0 => format!("{c}"),
            1 => format!("{c}*h"),
            _ => format!("{c}*h^{k}"),
        })
        .collect();
    parts.join(" + ")
}

fn cmd_hilbert(path: PathBuf, upto: u32) -> Result<ExitCode> {
    let space = FormsDocument::from_json(&fs::read_to_string(&path)?)?.to_space()?;
    let values: Vec<String> = (0..=upto)
        .map(|t| hilbert_fn(space.field, space.n, space.basis(), t).to_string())
        .collect();
    println!("HF(R/I, 0..{upto}) = ({})", values.join(", "));
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(field: Field, args: ScanArgs) -> Result<ExitCode> {
    let (n, check): (usize, Box<dyn FnMut(&constrank_core::generation::Point) -> constrank_core::error::Result<Verdict>>) =
        match args.kind.as_str() {
            "drezet" => {
                let path = args.forms.ok_or_else(|| anyhow!("drezet scan needs --forms"))?;
                let space = FormsDocument::from_json(&fs::read_to_string(&path)?)?.to_space()?;
                let n = space.n;
                let (ordinary, _) = is_ordinary(&space);
                (
                    n,
                    Box::new(move |v| {
                        if ordinary {
                            drezet_gen_at(&space, v)
                        } else {
                            drezet_gen_at_general(&space, v)
                        }
                    }),
                )
            }
            "mixed" => {
                let a0 = parse_coords(field, &args.a0.ok_or_else(|| anyhow!("mixed needs --a0"))?)?;
                let q0 = parse_poly(
                    field,
                    Alphabet::Primal,
                    2,
                    &args.q0.ok_or_else(|| anyhow!("mixed needs --q0"))?,
                    None,
                )?;
                (2, Box::new(move |v| mixed_gen_at(&a0, &q0, v)))
            }
            "sigma" => {
                let n = args.n.ok_or_else(|| anyhow!("sigma needs --n"))?;
                let e = args.e.ok_or_else(|| anyhow!("sigma needs --e"))?;
                let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(args.seed);
                let sigma = experiments::random_sigma(field, n, e + n, &mut rng);
                let theta = constrank_core::linalg::Matrix::from_rows(field, sigma.basis_vectors())
                    .kernel_basis();
                (n, Box::new(move |v| sigma_gen_at(&theta, n, v)))
            }
            other => bail!("unknown scan kind {other:?}"),
        };
    let mut pts = structured_points(field, n);
    pts.extend(random_points(field, n, args.points, args.seed));
    let mut check = check;
    let report = scan(&pts, |v| check(v))?;
    for entry in report.entries.iter() {
        if let Verdict::NotGenerated(w) = &entry.verdict {
            println!("NOT GENERATED at {}: {}", entry.point.display(), w.display());
        }
    }
    println!(
        "scan: {} points, {} failures ({} structured + {} random; a clean pass is probabilistic evidence only)",
        report.entries.len(),
        report.failures.len(),
        structured_points(field, n).len(),
        args.points
    );
    Ok(ExitCode::from(if report.all_generated() { 0 } else { 2 }))
}

fn cmd_sample(args: SampleArgs) -> Result<ExitCode> {
    let report = match args.experiment.as_str() {
        "drezet-generic" => experiments::drezet_generic(
            args.n.unwrap_or(3),
            args.c.unwrap_or(2),
            args.dimp.unwrap_or(7),
            args.trials,
            args.points,
            args.seed,
        )?,
        "corank1" => experiments::corank1(args.n.unwrap_or(3))?,
        "corank2" => experiments::corank2(args.trials, args.seed)?,
        "mac-bound" => experiments::mac_bound(args.trials, args.seed)?,
        "sigma-range" => experiments::sigma_range(
            args.n.unwrap_or(6),
            args.e.ok_or_else(|| anyhow!("sigma-range needs --e"))?,
            args.trials,
            args.seed,
            &CertifyOptions::default(),
        )?,
        other => bail!("unknown experiment {other:?}"),
    };
    let csv = report.to_csv();
    match args.out {
        Some(path) => fs::write(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(ExitCode::from(if report.all_pass() { 0 } else { 2 }))
}

fn cmd_corpus(field: Field, out_dir: PathBuf) -> Result<ExitCode> {
    fs::create_dir_all(&out_dir)?;
    for entry in corpus::all_entries(field) {
        let doc = corpus_doc(entry);
        let path = out_dir.join(format!("{}.json", doc.metadata.label));
        fs::write(&path, doc.to_json())?;
        println!("wrote {path:?}");
    }
    // Companion form-space files used by syz/hilbert/scan.
    for (label, space) in [
        ("conic_h_space", corpus::conic_h_space(field)),
        ("quartic_space", corpus::quartic_space(field)),
        ("net_space", corpus::net_space(field)),
        ("fermat_space", corpus::fermat_space(field)),
        ("h2_space", corpus::h2_space(field)),
        ("pencil_space_t5", corpus::pencil_space(field, &field.from_i64(5))),
    ] {
        let doc = FormsDocument::from_space(&space, label);
        let path = out_dir.join(format!("{label}.json"));
        fs::write(&path, doc.to_json())?;
        println!("wrote {path:?}");
    }
    Ok(ExitCode::SUCCESS)
}
