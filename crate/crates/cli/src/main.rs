mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gfusion_core::fixtures::{
    decaying_shift_family, identity_family, iterated_shift_family, one_sided_shift_family,
    random_representable_family, random_self_adjoint_family, ScanFixture, SubspaceDims, WindowSpec,
};
use gfusion_core::framefile::{load_frame_file, save_frame_file};
use gfusion_core::perturbation::{
    check_perturbation_condition, minimal_alpha_lower_bound, verify_perturbed_frame,
    ConditionVerdict, PerturbationParams,
};
use gfusion_core::representation::{
    invertibility_obstruction_scan, kernel_shift_invariance, sandwich_audit, solve_representer,
    RepresentError,
};
use gfusion_core::{Family64, StructureChecks, WindowSemantics};

use report::{Report, Verdict};

/// Exit status: 0 all asserted verdicts pass, 1 input error, 2 verdict failure.
const EXIT_INPUT_ERROR: u8 = 1;
const EXIT_VERDICT_FAILURE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "gfusion",
    about = "Frame bounds, duals, operator representation and perturbation analysis \
             for g-fusion frame families",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Tolerance for residual and verdict checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for all randomized probes.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Report format; csv applies to scan tables only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Frame bounds, tightness, structural checks and reconstruction quality.
    Analyze { file: PathBuf },
    /// Solve the representer and audit its norm sandwich and kernel shift.
    Represent {
        file: PathBuf,
        /// Fail (exit 2) when the sandwich does not hold; refuses to assert
        /// if its hypotheses fail.
        #[arg(long)]
        assert_sandwich: bool,
    },
    /// Check the perturbation condition between two families and compare the
    /// guaranteed bounds with the measured ones.
    Perturb {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        /// Random probes per coefficient pattern.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Window-growth divergence scan on a registered fixture.
    Scan {
        /// One of: identity, reflection, translation.
        #[arg(long)]
        fixture: String,
        /// Comma-separated window half-widths.
        #[arg(long, value_delimiter = ',')]
        windows: Vec<usize>,
    },
    /// Generate a fixture family and write it as a FrameFile.
    Fixture {
        #[command(subcommand)]
        which: FixtureCommand,
    },
}

#[derive(Subcommand)]
enum FixtureCommand {
    /// Two-sided geometrically decaying shifts on [-half-width, half-width].
    DecayingShift {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        half_width: usize,
        #[arg(long, default_value_t = 1)]
        base: usize,
        #[arg(long, default_value_t = 0.5)]
        decay: f64,
    },
    /// One-sided decaying shifts on [0, length]; exactly representable.
    OneSidedShift {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 1)]
        base: usize,
        #[arg(long, default_value_t = 0.5)]
        decay: f64,
    },
    /// Unitary translation family shift(k * x) on [-half-width, half-width].
    IteratedShift {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        half_width: usize,
        #[arg(long, default_value_t = 1)]
        shift: usize,
    },
    /// Random self-adjoint members on random subspaces.
    RandomSelfAdjoint {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        members: usize,
        #[arg(long, default_value_t = 0.5)]
        lo: f64,
        #[arg(long, default_value_t = 2.0)]
        hi: f64,
        /// Smallest subspace dimension; defaults to the full space.
        #[arg(long)]
        dim_min: Option<usize>,
        /// Largest subspace dimension; defaults to the full space.
        #[arg(long)]
        dim_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Cyclic)]
        semantics: SemanticsArg,
    },
    /// Cyclic commuting self-adjoint family with an exact representer.
    RandomRepresentable {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        members: usize,
        #[arg(long, default_value_t = 0.5)]
        lo: f64,
        #[arg(long, default_value_t = 2.0)]
        hi: f64,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Constant identity family.
    Identity {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        members: usize,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Truncated)]
        semantics: SemanticsArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Truncated,
    Cyclic,
}

impl From<SemanticsArg> for WindowSemantics {
    fn from(value: SemanticsArg) -> Self {
        match value {
            SemanticsArg::Truncated => WindowSemantics::Truncated,
            SemanticsArg::Cyclic => WindowSemantics::Cyclic,
        }
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors by default; the report contract
    // reserves 2 for verdict failures, so usage problems map to 1 here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_INPUT_ERROR);
            }
            // help or version output
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Scan { .. }) {
        return Err("csv output is only available for scan".into());
    }
    match &cli.command {
        Command::Analyze { file } => cmd_analyze(&cli, file),
        Command::Represent {
            file,
            assert_sandwich,
        } => cmd_represent(&cli, file, *assert_sandwich),
        Command::Perturb {
            file_a,
            file_b,
            alpha,
            beta,
            samples,
        } => cmd_perturb(&cli, file_a, file_b, *alpha, *beta, *samples),
        Command::Scan { fixture, windows } => cmd_scan(&cli, fixture, windows),
        Command::Fixture { which } => cmd_fixture(&cli, which),
    }
}

fn load(path: &PathBuf) -> Result<Family64, String> {
    load_frame_file(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Print to stdout, tolerating a closed pipe (e.g. piping into `head`).
fn print_stdout(text: &str) {
    use std::io::Write as _;
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn emit(cli: &Cli, report: &Report) -> Result<ExitCode, String> {
    let text = report.to_json();
    match &cli.output {
        Some(path) => report::write_atomic(path, &text).map_err(|e| e.to_string())?,
        None => {
            print_stdout(&text);
            print_stdout("\n");
        }
    }
    Ok(if report.all_verdicts_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERDICT_FAILURE)
    })
}

fn cmd_analyze(cli: &Cli, file: &PathBuf) -> Result<ExitCode, String> {
    let family = load(file)?;
    let mut report = Report::new("analyze");
    report.input("file", file.display().to_string());
    report.input("tol", cli.tol);
    report.input("seed", cli.seed);

    let bounds = family.frame_bounds().map_err(|e| e.to_string())?;
    report.result("dim", family.dim() as i64);
    report.result("members", family.len() as i64);
    report.result("semantics", family.semantics().as_str());
    report.result("lower_bound", bounds.lower);
    report.result("upper_bound", bounds.upper);

    let is_frame = bounds.is_frame(1e-9);
    report.result("is_frame", is_frame);
    if is_frame {
        let tight_gap = (bounds.upper - bounds.lower) / bounds.upper;
        report.result("is_tight", tight_gap <= cli.tol);
        report.result("tightness_gap", tight_gap);
    }

    let structure = family.validate_structure(StructureChecks::all(), cli.tol);
    report.result("structure_all_ok", structure.all_ok());
    report.result("structure_self_adjoint", structure.self_adjoint_ok());
    report.result("structure_onto_subspace", structure.onto_ok());
    let per_member: Vec<serde_json::Value> = structure
        .members
        .iter()
        .map(|m| {
            serde_json::json!({
                "k": m.k,
                "range_ok": m.range_ok,
                "self_adjoint_ok": m.self_adjoint.map(|c| c.ok),
                "onto_ok": m.onto_subspace.map(|c| c.ok),
                "projection_ok": m.projection.map(|c| c.ok),
            })
        })
        .collect();
    report.result("structure_members", serde_json::Value::Array(per_member));

    if is_frame {
        let dual = family.canonical_dual().map_err(|e| e.to_string())?;
        let mut rng = gfusion_core::sampling::rng_from_seed(cli.seed);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let f = gfusion_core::sampling::random_unit_vector(&mut rng, family.dim());
            let rebuilt = family.reconstruct(&dual, &f).map_err(|e| e.to_string())?;
            let err =
                gfusion_core::numerics::vec_norm(&gfusion_core::numerics::vec_sub(&rebuilt, &f));
            worst = worst.max(err);
        }
        report.result("reconstruction_residual", worst);
        report.verdict(Verdict::new(
            "canonical_dual_reconstruction",
            worst <= gfusion_core::frame::RECONSTRUCTION_TOL,
            worst,
            gfusion_core::frame::RECONSTRUCTION_TOL,
        ));
    } else {
        report.result("reconstruction_residual", serde_json::Value::Null);
        report.result(
            "reconstruction_skipped",
            "family is not a frame at the 1e-9 spectral ratio",
        );
    }
    emit(cli, &report)
}

fn cmd_represent(cli: &Cli, file: &PathBuf, assert_sandwich: bool) -> Result<ExitCode, String> {
    let family = load(file)?;
    let mut report = Report::new("represent");
    report.input("file", file.display().to_string());
    report.input("tol", cli.tol);
    report.input("seed", cli.seed);
    report.input("assert_sandwich", assert_sandwich);

    let rep = solve_representer(&family).map_err(|e| e.to_string())?;
    report.result("residual", rep.residual);
    report.result("representable", rep.residual <= cli.tol);
    report.result("op_norm", rep.op_norm);
    report.result("min_singular", rep.min_singular);

    let audit = sandwich_audit(&family, &rep, cli.tol).map_err(|e| e.to_string())?;
    report.result("bounds_on_span_lower", audit.bounds_on_span.lower);
    report.result("bounds_on_span_upper", audit.bounds_on_span.upper);
    report.result("span_dim", audit.span_dim as i64);
    match audit.upper_limit {
        Some(limit) => report.result("sqrt_b_over_a", limit),
        None => report.result("sqrt_b_over_a", serde_json::Value::Null),
    }
    let failures: Vec<serde_json::Value> = audit
        .failures
        .iter()
        .map(|h| serde_json::Value::String(h.key().to_string()))
        .collect();
    report.result("hypothesis_failures", serde_json::Value::Array(failures));
    match audit.within {
        Some(within) => report.result("sandwich_holds", within),
        None => report.result("sandwich_holds", serde_json::Value::Null),
    }

    if assert_sandwich {
        if audit.hypotheses_hold() {
            let limit = audit.upper_limit.expect("hypotheses include frame on span");
            report.verdict(Verdict::new(
                "norm_sandwich",
                audit.within.unwrap_or(false),
                audit.op_norm,
                limit + cli.tol,
            ));
        } else {
            let names: Vec<String> = audit.failures.iter().map(|h| h.to_string()).collect();
            report.result(
                "sandwich_assertion_refused",
                format!("hypotheses failed: {}", names.join("; ")),
            );
            eprintln!(
                "refusing to assert the norm sandwich; failed hypotheses: {}",
                names.join("; ")
            );
        }
    }

    match kernel_shift_invariance(&family, &rep, cli.tol) {
        Ok(kernel) => {
            report.result("kernel_dim", kernel.kernel_dim as i64);
            report.result("kernel_max_violation", kernel.max_violation);
        }
        Err(RepresentError::SemanticsUnsupported { .. }) => {
            report.result(
                "kernel_skipped",
                "truncated window has no cyclic shift; kernel invariance not defined",
            );
        }
        Err(RepresentError::HypothesisViolation { hypothesis }) => {
            report.result("kernel_skipped", format!("hypothesis failed: {hypothesis}"));
        }
        Err(e) => return Err(e.to_string()),
    }
    emit(cli, &report)
}

fn cmd_perturb(
    cli: &Cli,
    file_a: &PathBuf,
    file_b: &PathBuf,
    alpha: f64,
    beta: f64,
    samples: usize,
) -> Result<ExitCode, String> {
    let family = load(file_a)?;
    let perturbed = load(file_b)?;
    let params = PerturbationParams::new(alpha, beta).map_err(|e| e.to_string())?;

    let mut report = Report::new("perturb");
    report.input("file_a", file_a.display().to_string());
    report.input("file_b", file_b.display().to_string());
    report.input("alpha", alpha);
    report.input("beta", beta);
    report.input("samples", samples as i64);
    report.input("seed", cli.seed);
    report.input("tol", cli.tol);

    let verdict = check_perturbation_condition(&family, &perturbed, &params, samples, cli.seed)
        .map_err(|e| e.to_string())?;
    let min_alpha = minimal_alpha_lower_bound(&family, &perturbed, samples, cli.seed)
        .map_err(|e| e.to_string())?;
    report.result("minimal_alpha_lower_bound", min_alpha);

    match &verdict {
        ConditionVerdict::PassedSampled => {
            report.result("condition", "passed_sampled");
            report.verdict(Verdict::new("perturbation_condition", true, 0.0, 0.0));
            let outcome = verify_perturbed_frame(&family, &perturbed, &params, &verdict, cli.tol)
                .map_err(|e| e.to_string())?;
            report.result("theoretical_lower", outcome.theoretical.lower);
            report.result("theoretical_upper", outcome.theoretical.upper);
            report.result("computed_lower", outcome.computed.lower);
            report.result("computed_upper", outcome.computed.upper);
            report.verdict(Verdict::new(
                "perturbed_lower_bound",
                outcome.lower_ok,
                outcome.computed.lower,
                outcome.theoretical.lower,
            ));
            report.verdict(Verdict::new(
                "perturbed_upper_bound",
                outcome.upper_ok,
                outcome.computed.upper,
                outcome.theoretical.upper,
            ));
        }
        ConditionVerdict::ViolatedWitness(w) => {
            report.result("condition", "violated_witness");
            report.result(
                "witness",
                serde_json::json!({
                    "coefficients": w.coefficients
                        .iter()
                        .map(|c| vec![c.re, c.im])
                        .collect::<Vec<_>>(),
                    "vector": w.vector
                        .iter()
                        .map(|c| vec![c.re, c.im])
                        .collect::<Vec<_>>(),
                    "lhs": w.lhs,
                    "rhs": w.rhs,
                }),
            );
            report.verdict(Verdict::new("perturbation_condition", false, w.lhs, w.rhs));
        }
    }
    emit(cli, &report)
}

fn cmd_scan(cli: &Cli, fixture_name: &str, windows: &[usize]) -> Result<ExitCode, String> {
    let fixture = ScanFixture::from_name(fixture_name).ok_or_else(|| {
        format!(
            "unknown fixture {fixture_name:?}; registered fixtures: {}",
            ScanFixture::NAMES.join(", ")
        )
    })?;
    if windows.is_empty() {
        return Err("scan requires at least one window half-width".into());
    }
    let generator =
        move |half_width: usize| -> Result<(Family64, gfusion_core::Matrix64), RepresentError> {
            fixture.generate::<f64>(half_width)
        };
    let scan = invertibility_obstruction_scan(&generator, windows).map_err(|e| e.to_string())?;

    if cli.format == Format::Csv {
        let mut text =
            String::from("half_width,members,upper_bound,predicted,rel_error,ratio_ok\n");
        for row in &scan.rows {
            text.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.half_width,
                row.member_count,
                row.upper_bound,
                row.predicted,
                row.rel_error,
                row.ratio_ok
            ));
        }
        match &cli.output {
            Some(path) => report::write_atomic(path, &text).map_err(|e| e.to_string())?,
            None => print_stdout(&text),
        }
        let slope_ok = scan.slope_ok && scan.ratios_ok;
        if let Some(slope) = scan.growth_slope {
            eprintln!(
                "growth slope {slope} ({})",
                if slope_ok { "pass" } else { "fail" }
            );
        }
        return Ok(if slope_ok {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(EXIT_VERDICT_FAILURE)
        });
    }

    let mut report = Report::new("scan");
    report.input("fixture", fixture.name());
    report.input("seed", cli.seed);
    report.input("tol", cli.tol);
    report.input(
        "windows",
        serde_json::Value::Array(
            windows
                .iter()
                .map(|w| serde_json::Value::from(*w as i64))
                .collect(),
        ),
    );
    report.result("base_bound", scan.base_bound);
    let rows: Vec<serde_json::Value> = scan
        .rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "half_width": r.half_width,
                "members": r.member_count,
                "upper_bound": r.upper_bound,
                "predicted": r.predicted,
                "rel_error": r.rel_error,
                "ratio_ok": r.ratio_ok,
            })
        })
        .collect();
    report.result("rows", serde_json::Value::Array(rows));
    match scan.growth_slope {
        Some(slope) => {
            report.result("growth_slope", slope);
            report.verdict(Verdict::new(
                "growth_slope_linear",
                scan.slope_ok,
                slope,
                0.05,
            ));
        }
        None => {
            report.result("growth_slope", serde_json::Value::Null);
        }
    }
    report.verdict(Verdict::new(
        "growth_ratios_linear",
        scan.ratios_ok,
        if scan.ratios_ok { 0.0 } else { 1.0 },
        0.05,
    ));
    emit(cli, &report)
}

fn cmd_fixture(cli: &Cli, which: &FixtureCommand) -> Result<ExitCode, String> {
    let family: Family64 = match which {
        FixtureCommand::DecayingShift {
            n,
            half_width,
            base,
            decay,
        } => decaying_shift_family(*n, *half_width, *base, *decay).map_err(|e| e.to_string())?,
        FixtureCommand::OneSidedShift {
            n,
            length,
            base,
            decay,
        } => one_sided_shift_family(*n, *length, *base, *decay).map_err(|e| e.to_string())?,
        FixtureCommand::IteratedShift {
            n,
            half_width,
            shift,
        } => iterated_shift_family(*n, *half_width, *shift, None).map_err(|e| e.to_string())?,
        FixtureCommand::RandomSelfAdjoint {
            n,
            members,
            lo,
            hi,
            dim_min,
            dim_max,
            semantics,
        } => {
            let window = match semantics {
                SemanticsArg::Cyclic => WindowSpec::cyclic(*members),
                SemanticsArg::Truncated => WindowSpec::truncated(0, *members as i64 - 1),
            };
            let dims = match (dim_min, dim_max) {
                (None, None) => SubspaceDims::Full,
                (lo_d, hi_d) => SubspaceDims::Range {
                    lo: lo_d.unwrap_or(1),
                    hi: hi_d.unwrap_or(*n),
                },
            };
            random_self_adjoint_family(*n, window, cli.seed, (*lo, *hi), dims)
                .map_err(|e| e.to_string())?
        }
        FixtureCommand::RandomRepresentable {
            n,
            members,
            lo,
            hi,
            rank,
        } => {
            let (family, _) =
                random_representable_family(*n, *members, cli.seed, (*lo, *hi), rank.unwrap_or(*n))
                    .map_err(|e| e.to_string())?;
            family
        }
        FixtureCommand::Identity {
            n,
            members,
            semantics,
        } => identity_family(*n, *members, (*semantics).into()).map_err(|e| e.to_string())?,
    };

    match &cli.output {
        Some(path) => {
            save_frame_file(&family, path).map_err(|e| e.to_string())?;
        }
        None => {
            print_stdout(&gfusion_core::framefile::write_frame_file_string(&family));
        }
    }
    Ok(ExitCode::SUCCESS)
}
