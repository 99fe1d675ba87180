use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ffvault::minutiae::{minutiae_vault_demo, parse_minutiae, synthetic_minutiae, DemoParams};
use ffvault::multi_fuzzy_set::{PartitionDescription, SetDescription, SetKind};
use ffvault::security::{
    explicit_report, scenario_report, ScenarioParams, ScenarioReport, SecurityReport,
};
use ffvault::selftest::{run_selftest, Fault};
use ffvault::vault::{
    fuzzy_lock, fuzzy_unlock, LockParams, UnlockDiagnostics, Vault, DEFAULT_DELTA, DEFAULT_RHO,
};

const EXIT_IO: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NULL: u8 = 3;

/// Lock and unlock keys in fuzzy-fuzzy vaults.
#[derive(Parser)]
#[command(name = "ffvault", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Lock a key and write the vault file.
    Lock(LockArgs),
    /// Try to unlock a vault with a probe set.
    Unlock(UnlockArgs),
    /// Evaluate spurious-polynomial counts for a preset or explicit parameters.
    Analyze(AnalyzeArgs),
    /// Lock a key under fingerprint minutiae and unlock it again.
    MinutiaeDemo(DemoArgs),
    /// Run the built-in checks.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct LockArgs {
    /// Key bytes in hex.
    #[arg(long)]
    key_hex: String,
    /// Locking set JSON file.
    #[arg(long)]
    locking_set: PathBuf,
    /// Field partition JSON file.
    #[arg(long)]
    field_partition: PathBuf,
    /// Coefficient count.
    #[arg(long)]
    k: usize,
    /// Total vault points.
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = DEFAULT_RHO)]
    rho: f64,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    subset_index: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Expected field size; checked against the input files.
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct UnlockArgs {
    #[arg(long)]
    vault: PathBuf,
    /// Unlocking set JSON file.
    #[arg(long)]
    probe_set: PathBuf,
    #[arg(long, default_value_t = 0)]
    subset_index: usize,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    /// Key length in bytes.
    #[arg(long)]
    key_len: usize,
    /// Maximum number of k-subsets to try.
    #[arg(long, default_value_t = 100_000)]
    effort_cap: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Named scenario; otherwise all explicit parameters are required.
    #[arg(long, conflicts_with_all = ["q", "k", "r", "t", "t_mfj", "m_a", "m_f", "n"])]
    preset: Option<String>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    t: Option<u64>,
    #[arg(long = "t-mfj")]
    t_mfj: Option<u64>,
    #[arg(long = "m-a")]
    m_a: Option<u64>,
    #[arg(long = "m-f")]
    m_f: Option<u64>,
    /// Polynomial degree; defaults to k - 1.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value_t = 0.5)]
    mu: f64,
    /// Cardinality of the membership family collection.
    #[arg(long, default_value_t = 1)]
    family_card: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct DemoArgs {
    /// Minutiae text file; random minutiae are used when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Number of random minutiae.
    #[arg(long, default_value_t = 12)]
    count: usize,
    #[arg(long, default_value = "6d696e75746961652064656d6f21")]
    key_hex: String,
    #[arg(long, default_value_t = 8)]
    k: usize,
    #[arg(long, default_value_t = 200)]
    r: usize,
    #[arg(long, default_value_t = DEFAULT_RHO)]
    rho: f64,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    /// Probe orientation jitter in degrees.
    #[arg(long, default_value_t = 0.0)]
    jitter: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum InjectedFault {
    Crc,
    Census,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<InjectedFault>,
}

enum Failure {
    Io(String),
    Invalid(String),
}

type CmdResult = Result<u8, Failure>;

fn invalid(e: impl ToString) -> Failure {
    Failure::Invalid(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn cmd_lock(a: LockArgs) -> CmdResult {
    let key = hex::decode(a.key_hex.trim()).map_err(|e| invalid(format!("--key-hex: {e}")))?;
    let lock_desc: SetDescription = parse_json(&a.locking_set, &read(&a.locking_set)?)?;
    let field_desc: PartitionDescription =
        parse_json(&a.field_partition, &read(&a.field_partition)?)?;
    if let Some(q) = a.q {
        if lock_desc.q != q || field_desc.q != q {
            return Err(invalid(format!(
                "--q {q} does not match the input files (locking set q = {}, partition q = {})",
                lock_desc.q, field_desc.q
            )));
        }
    }
    let q = lock_desc.q;
    if a.r as u64 > q {
        return Err(invalid(format!("r exceeds field size ({} > {q})", a.r)));
    }
    let locking = lock_desc.into_set(SetKind::Locking).map_err(invalid)?;
    let field = field_desc.into_set().map_err(invalid)?;
    let params = LockParams {
        rho: a.rho,
        delta: a.delta,
        ..LockParams::new(a.subset_index, a.k, a.r).with_seed(a.seed)
    };
    let (vault, _) = fuzzy_lock(&key, &locking, &field, &params).map_err(invalid)?;
    fs::write(&a.out, vault.to_json())
        .map_err(|e| Failure::Io(format!("{}: {e}", a.out.display())))?;
    match a.format {
        Format::Json => print_json(&json!({
            "q": vault.q(),
            "n": vault.n(),
            "r": vault.r(),
            "crc_variant": vault.crc_variant(),
            "out": a.out,
        })),
        Format::Text => {
            println!("q            {}", vault.q());
            println!("n            {}", vault.n());
            println!("r            {}", vault.r());
            println!("crc_variant  {}", vault.crc_variant());
            println!("wrote        {}", a.out.display());
        }
    }
    Ok(0)
}

fn report_unlock(format: Format, key: Option<&[u8]>, d: &UnlockDiagnostics) -> u8 {
    eprintln!(
        "matched={} subsets_tried={} effort_exhausted={}",
        d.matched, d.subsets_tried, d.effort_exhausted
    );
    let hex_key = key.map(hex::encode);
    match format {
        Format::Json => print_json(&json!({ "key": hex_key, "diagnostics": d })),
        Format::Text => println!("{}", hex_key.as_deref().unwrap_or("null")),
    }
    if key.is_some() {
        0
    } else {
        EXIT_NULL
    }
}

fn cmd_unlock(a: UnlockArgs) -> CmdResult {
    let vault = Vault::from_json(&read(&a.vault)?).map_err(invalid)?;
    let probe_text = read(&a.probe_set)?;
    if a.effort_cap == 0 {
        return Err(invalid("effort cap must be positive"));
    }
    if probe_text.trim().is_empty() {
        return Ok(report_unlock(a.format, None, &UnlockDiagnostics::default()));
    }
    let desc: SetDescription = parse_json(&a.probe_set, &probe_text)?;
    if desc.subsets.is_empty() {
        return Ok(report_unlock(a.format, None, &UnlockDiagnostics::default()));
    }
    if desc.q != vault.q() {
        return Err(invalid(format!(
            "probe set q = {} differs from vault q = {}",
            desc.q,
            vault.q()
        )));
    }
    let probes = desc.into_set(SetKind::Unlocking).map_err(invalid)?;
    let res = fuzzy_unlock(&vault, &probes, a.subset_index, a.delta, a.key_len, a.effort_cap)
        .map_err(invalid)?;
    Ok(report_unlock(a.format, res.key.as_deref(), &res.diagnostics))
}

fn fmt_log2(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.6}")
    }
}

fn render_report(r: &SecurityReport, out: &mut String) {
    let p = &r.params;
    let _ = writeln!(out, "[{}]", r.label);
    let _ = writeln!(
        out,
        "  params              q={} k={} r={} t={} t_MFj={} m_A={} m_F={} n={} mu={} |E|={}",
        p.q, p.k, p.r, p.t, p.t_mfj, p.m_a, p.m_f, p.n, p.mu, p.family_card
    );
    let _ = writeln!(out, "  log2 N              {}", fmt_log2(r.log2_n));
    if let Some(x) = r.log2_n_exact {
        let _ = writeln!(out, "  log2 N (exact)      {}", fmt_log2(x));
    }
    let _ = writeln!(out, "  security bits       {}", fmt_log2(r.security_bits));
    let _ = writeln!(out, "  log2 family bound   {}", fmt_log2(r.log2_family_bound));
    let _ = writeln!(out, "  attacker prob       {:e}", r.attacker_prob);
    let _ = writeln!(out, "  attacker log2       {}", fmt_log2(r.attacker_log2));
    let _ = writeln!(out, "  product-form prob   {:e}", r.attacker_prob_product_form);
    if let Some(c) = r.reported {
        let _ = writeln!(
            out,
            "  reported            N = 2^{}, {}-bit security",
            c.log2_n, c.security_bits
        );
    }
    if r.discrepancy_flag {
        let _ = writeln!(
            out,
            "  DISCREPANCY         computed values differ from the reported claims by more than 1 bit"
        );
    }
}

fn explicit_params(a: &AnalyzeArgs) -> Result<ScenarioParams, Failure> {
    let need = |v: Option<u64>, flag: &str| {
        v.ok_or_else(|| invalid(format!("missing --{flag} (or use --preset)")))
    };
    let k = need(a.k, "k")?;
    Ok(ScenarioParams {
        q: need(a.q, "q")?,
        k,
        r: need(a.r, "r")?,
        t: need(a.t, "t")?,
        t_mfj: need(a.t_mfj, "t-mfj")?,
        m_a: need(a.m_a, "m-a")?,
        m_f: need(a.m_f, "m-f")?,
        n: a.n.unwrap_or(k.saturating_sub(1)),
        mu: a.mu,
        family_card: a.family_card,
    })
}

fn cmd_analyze(a: AnalyzeArgs) -> CmdResult {
    let report: ScenarioReport = match &a.preset {
        Some(name) => scenario_report(name).map_err(invalid)?,
        None => explicit_report(explicit_params(&a)?).map_err(invalid)?,
    };
    match a.format {
        Format::Json => print_json(&report),
        Format::Text => {
            let mut out = format!("scenario {}\n", report.scenario);
            for r in &report.reports {
                render_report(r, &mut out);
            }
            print!("{out}");
        }
    }
    Ok(0)
}

fn cmd_demo(a: DemoArgs) -> CmdResult {
    let key = hex::decode(a.key_hex.trim()).map_err(|e| invalid(format!("--key-hex: {e}")))?;
    let minutiae = match &a.input {
        Some(path) => parse_minutiae(&read(path)?).map_err(invalid)?,
        None => synthetic_minutiae(a.count, a.seed),
    };
    let params = DemoParams {
        k: a.k,
        r: a.r,
        rho: a.rho,
        delta: a.delta,
        jitter_degrees: a.jitter,
        seed: a.seed,
        ..DemoParams::default()
    };
    let out = minutiae_vault_demo(&minutiae, &key, &params).map_err(invalid)?;
    let d = &out.result.diagnostics;
    let hex_key = out.result.key.as_deref().map(hex::encode);
    match a.format {
        Format::Json => print_json(&json!({
            "minutiae": minutiae.len(),
            "elements": out.elements,
            "q": out.vault.q(),
            "r": out.vault.r(),
            "key": hex_key,
            "diagnostics": d,
        })),
        Format::Text => {
            println!("minutiae       {}", minutiae.len());
            println!("vault points   {}", out.vault.r());
            println!("matched        {}", d.matched);
            println!("subsets tried  {}", d.subsets_tried);
            println!("key            {}", hex_key.as_deref().unwrap_or("null"));
        }
    }
    Ok(if out.result.is_null() { EXIT_NULL } else { 0 })
}

fn cmd_selftest(a: SelftestArgs) -> CmdResult {
    let fault = a.inject_fault.map(|f| match f {
        InjectedFault::Crc => Fault::Crc,
        InjectedFault::Census => Fault::Census,
    });
    let report = run_selftest(fault);
    match a.format {
        Format::Json => print_json(&report),
        Format::Text => {
            for c in &report.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                println!("{tag} {:<22} {}", c.name, c.detail);
            }
        }
    }
    Ok(if report.passed() { 0 } else { EXIT_IO })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Lock(a) => cmd_lock(a),
        Command::Unlock(a) => cmd_unlock(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::MinutiaeDemo(a) => cmd_demo(a),
        Command::Selftest(a) => cmd_selftest(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
