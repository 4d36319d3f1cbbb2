use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use facering::cleanmap::{self, Composite, EnvelopeMap};
use facering::complex;
use facering::envelope::{Envelope, MonomialBox};
use facering::poset::PosetFile;
use facering::ring::{self, Multidegree};
use facering::{bundled, ElementId, Field, SimplicialPoset};

static TEXT_TO_STDERR: AtomicBool = AtomicBool::new(false);

macro_rules! say {
    ($($t:tt)*) => {
        if TEXT_TO_STDERR.load(Ordering::Relaxed) {
            let _ = writeln!(std::io::stderr(), $($t)*);
        } else {
            let _ = writeln!(std::io::stdout(), $($t)*);
        }
    };
}

#[derive(Parser)]
#[command(name = "facering", version, about = "Face rings of simplicial posets, their injective envelopes and clean maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Poset JSON file, or the name of a bundled poset
    #[arg(long)]
    poset: Option<String>,
    /// Coefficient field: Q, F<p>, or Fp together with --prime
    #[arg(long, default_value = "Q")]
    field: String,
    /// Characteristic for --field Fp
    #[arg(long)]
    prime: Option<u64>,
    /// Write the JSON certificate here (`-` for stdout)
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the simplicial poset axioms
    Validate {
        /// Poset JSON file or bundled name (defaults to --poset)
        #[arg(value_name = "POSET")]
        file: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Generators of I_P, the omega shift, membership and normal forms
    Ring {
        #[command(flatten)]
        common: Common,
        /// Decide whether a polynomial lies in I_P
        #[arg(long)]
        member: Option<String>,
        /// Print the straightened normal form of a polynomial
        #[arg(long)]
        straighten: Option<String>,
    },
    /// Envelopes *E_x: variable partitions and annihilator sweeps
    Envelope {
        #[command(flatten)]
        common: Common,
        /// Solve for the annihilator of I_P in degree --deg
        #[arg(long)]
        ann: bool,
        /// Multidegree, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        deg: Option<Vec<i64>>,
        /// Bound on the depth of inverse parts
        #[arg(long, default_value_t = 3)]
        depth: u32,
        /// Restrict to one element
        #[arg(long)]
        element: Option<String>,
    },
    /// Certify clean maps between envelopes
    Cleanmap {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        check_linearity: bool,
        #[arg(long)]
        check_clean: bool,
        /// Perturb by a non-clean automorphism and reconstruct it
        #[arg(long)]
        tau: bool,
        /// Bound on |Laurent exponent| and on each inverse exponent
        #[arg(long = "box", default_value_t = 2)]
        bx: u32,
        /// Bound on the depth of inverse parts
        #[arg(long, default_value_t = 3)]
        depth: u32,
        /// Upper end of a single cover map
        #[arg(long)]
        from: Option<String>,
        /// Lower end of a single cover map
        #[arg(long)]
        to: Option<String>,
    },
    /// The envelope complex and degree slices of the scalar complex
    Complex {
        #[command(flatten)]
        common: Common,
        /// Degree of the slice to solve
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Option<Vec<i64>>,
        /// Compare with reduced simplicial homology
        #[arg(long)]
        oracle: bool,
        /// Check d.d = 0 and cleanness of every component
        #[arg(long)]
        dd: bool,
        /// Laurent exponent bound for the d.d check
        #[arg(long = "box", default_value_t = 2)]
        bx: u32,
        /// Depth bound for the d.d check
        #[arg(long, default_value_t = 2)]
        depth: u32,
    },
}

enum Failure {
    Usage(String),
    Invalid,
    Property,
}

type Run = Result<(Value, bool), Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn load_poset(spec: Option<&str>) -> Result<(String, Arc<SimplicialPoset>), Failure> {
    let spec = spec.ok_or_else(|| Failure::Usage("no poset given (use --poset)".into()))?;
    let path = Path::new(spec);
    let bare = !spec.contains(std::path::MAIN_SEPARATOR) && !spec.contains('/');
    let stem = spec.strip_suffix(".json").unwrap_or(spec);
    if !path.exists() && bare && bundled::source(stem).is_some() {
        let p = bundled::poset(stem).map_err(usage)?;
        return Ok((stem.to_string(), Arc::new(p)));
    }
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
    let file: PosetFile = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
    let p = SimplicialPoset::from_file(&file).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
    let name = path.file_stem().map_or(spec.to_string(), |s| s.to_string_lossy().into_owned());
    Ok((name, Arc::new(p)))
}

fn require_valid(p: &SimplicialPoset) -> Result<(), Failure> {
    let report = p.validate();
    if report.ok {
        Ok(())
    } else {
        eprintln!("{report}");
        Err(Failure::Invalid)
    }
}

fn parse_field(c: &Common) -> Result<Field, Failure> {
    match (c.field.as_str(), c.prime) {
        ("Fp" | "fp", Some(p)) => Field::prime(p).map_err(usage),
        ("Fp" | "fp", None) => Err(Failure::Usage("--field Fp needs --prime".into())),
        (f, None) => f.parse().map_err(usage),
        (f, Some(p)) => {
            let field: Field = f.parse().map_err(usage)?;
            if field.characteristic() == p {
                Ok(field)
            } else {
                Err(Failure::Usage(format!("--prime {p} conflicts with --field {f}")))
            }
        }
    }
}

fn element(p: &SimplicialPoset, name: &str) -> Result<ElementId, Failure> {
    p.id(name).ok_or_else(|| Failure::Usage(format!("unknown element `{name}`")))
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn cmd_validate(file: Option<String>, common: &Common) -> Run {
    let spec = file.or_else(|| common.poset.clone());
    let (name, p) = load_poset(spec.as_deref())?;
    let report = p.validate();
    say!("{name}: {} elements, {} atoms, rank {}", p.len(), p.n_atoms(), p.max_rank());
    say!("{report}");
    let cert = json!({ "poset": name, "ok": report.ok, "violations": report.violations });
    if report.ok {
        Ok((cert, true))
    } else {
        emit(common, &cert)?;
        Err(Failure::Invalid)
    }
}

fn cmd_ring(common: &Common, member: Option<String>, straighten: Option<String>) -> Run {
    let (name, p) = load_poset(common.poset.as_deref())?;
    require_valid(&p)?;
    let field = parse_field(common)?;
    let gens: Vec<String> = ring::face_ring_generators(&p, field)
        .iter()
        .map(|g| g.display(&p).to_string())
        .collect();
    let omega = ring::omega_shift(&p);
    say!("{name} over {field}: {} generators of I_P", gens.len());
    for g in &gens {
        say!("  {g}");
    }
    say!("omega shift: {omega}");
    let mut cert = json!({ "poset": name, "field": field.to_string(), "generators": gens, "omega": omega.0 });
    if let Some(text) = member {
        let f = ring::parse_polynomial(&p, &text, field).map_err(usage)?;
        let m = ring::ideal_member(&p, &f);
        say!("member {text}: {m}");
        cert["member"] = json!({ "input": text, "result": m });
    }
    if let Some(text) = straighten {
        let f = ring::parse_polynomial(&p, &text, field).map_err(usage)?;
        let s = ring::straighten(&p, &f).display(&p).to_string();
        say!("straighten {text}: {s}");
        cert["straighten"] = json!({ "input": text, "result": s });
    }
    Ok((cert, true))
}

fn cmd_envelope(common: &Common, ann: bool, deg: Option<Vec<i64>>, depth: u32, only: Option<String>) -> Run {
    let (name, p) = load_poset(common.poset.as_deref())?;
    require_valid(&p)?;
    let field = parse_field(common)?;
    let xs: Vec<ElementId> = match &only {
        Some(s) => vec![element(&p, s)?],
        None => p.elements().collect(),
    };
    let deg = match deg {
        Some(d) if d.len() != p.n_atoms() => {
            return Err(Failure::Usage(format!("--deg needs {} entries", p.n_atoms())));
        }
        d => d.map(Multidegree),
    };
    if ann && deg.is_none() {
        return Err(Failure::Usage("--ann needs --deg".into()));
    }
    if depth == 0 {
        eprintln!("warning: depth bound 0 only sees the copy of S_x");
    }
    let mut rows = Vec::new();
    let mut ok = true;
    say!("{name} over {field}, depth <= {depth}");
    for x in xs {
        let env = Envelope::new(p.clone(), x);
        let names = |v: &[ElementId]| v.iter().map(|&z| p.name(z).to_string()).collect::<Vec<_>>();
        let mut row = json!({
            "element": p.name(x),
            "laurent": names(env.laurent_vars()),
            "inverse": names(env.inverse_vars()),
        });
        if let Some(a) = &deg {
            row["monomials"] = json!(env.monomials_of_degree(a, depth).len());
        }
        if ann {
            let a = deg.as_ref().unwrap();
            let basis = env.annihilator_basis(a, depth, field).map_err(usage)?;
            let expected = env.sx_dimension(a);
            let pass = basis.len() == expected;
            ok &= pass;
            say!("  *E_{}: annihilator dim {} (expected {expected}) {}", p.name(x), basis.len(), status(pass));
            row["annihilator"] = json!({
                "dim": basis.len(),
                "expected": expected,
                "basis": basis.iter().map(|e| env.to_json(e)).collect::<Vec<_>>(),
                "status": status(pass),
            });
        } else {
            say!(
                "  *E_{}: Laurent in {:?}, inverse in {:?}",
                p.name(x),
                names(env.laurent_vars()),
                names(env.inverse_vars())
            );
        }
        rows.push(row);
    }
    let cert = json!({
        "poset": name,
        "field": field.to_string(),
        "deg": deg.map(|d| d.0),
        "depth": depth,
        "envelopes": rows,
    });
    Ok((cert, ok))
}

fn selected_maps(p: &Arc<SimplicialPoset>, field: Field, from: Option<String>, to: Option<String>) -> Result<Vec<cleanmap::CleanMap>, Failure> {
    match (from, to) {
        (Some(f), Some(t)) => {
            let (x, z) = (element(p, &f)?, element(p, &t)?);
            let chains = p.saturated_chains(x, z);
            if chains.is_empty() {
                return Err(Failure::Usage(format!("`{t}` is not below `{f}`")));
            }
            chains
                .iter()
                .map(|c| cleanmap::compose_chain(p, field, c).map_err(usage))
                .collect()
        }
        (None, None) => {
            let mut out = Vec::new();
            for x in p.elements() {
                for &y in p.covered_by(x) {
                    out.push(cleanmap::cover_clean_map(p, field, x, y).map_err(usage)?);
                }
            }
            Ok(out)
        }
        _ => Err(Failure::Usage("--from and --to go together".into())),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_cleanmap(
    common: &Common,
    mut linearity: bool,
    mut clean: bool,
    tau: bool,
    bx: u32,
    depth: u32,
    from: Option<String>,
    to: Option<String>,
) -> Run {
    let (name, p) = load_poset(common.poset.as_deref())?;
    require_valid(&p)?;
    let field = parse_field(common)?;
    if !linearity && !clean && !tau {
        linearity = true;
        clean = true;
    }
    let bound = MonomialBox {
        laurent: bx as i32,
        max_exponent: Some(bx),
        depth: Some(depth),
    };
    say!("{name} over {field}");
    let mut reports = Vec::new();
    let mut ok = true;
    let maps = selected_maps(&p, field, from, to)?;
    for map in &maps {
        if clean {
            reports.push(cleanmap::check_clean(map, depth).map_err(usage)?);
        }
        if linearity {
            reports.push(cleanmap::check_linearity(map, &bound).map_err(usage)?);
        }
    }
    for pair in maps.windows(2) {
        if pair[0].source() == pair[1].source() && pair[0].target() == pair[1].target() {
            reports.push(cleanmap::check_agree(&pair[0], &pair[1], &bound).map_err(usage)?);
        }
    }
    for r in &reports {
        say!("  {r}");
        ok &= r.passed();
    }
    let mut cert = json!({ "poset": name, "field": field.to_string(), "reports": reports });
    if tau {
        let mut rounds = Vec::new();
        for x in p.elements().filter(|&x| p.rank(x) >= 2) {
            let round = tau_roundtrip(&p, field, x, &bound, depth)?;
            ok &= round["status"] == "pass";
            say!("  tau roundtrip at {}: {}", p.name(x), round["status"].as_str().unwrap());
            rounds.push(round);
        }
        cert["tau"] = Value::Array(rounds);
    }
    Ok((cert, ok))
}

fn tau_roundtrip(p: &Arc<SimplicialPoset>, field: Field, x: ElementId, bound: &MonomialBox, depth: u32) -> Result<Value, Failure> {
    let env = Envelope::new(p.clone(), x);
    let y = p.covered_by(x)[0];
    let psi: Arc<dyn EnvelopeMap> = Arc::new(cleanmap::cover_clean_map(p, field, x, y).map_err(usage)?);
    let sigma = cleanmap::nonclean_automorphism(&env, field, &field.one()).map_err(usage)?;
    let phi: Arc<dyn EnvelopeMap> = Arc::new(Composite::new(Arc::new(sigma), psi.clone()));
    let perturbed = cleanmap::check_clean(phi.as_ref(), depth).map_err(usage)?;
    let tau = cleanmap::materialize_tau(&env, phi.clone(), bound).map_err(usage)?;
    let psi_tau = Composite::new(Arc::new(tau.clone()), psi);
    let agree = cleanmap::check_agree(&psi_tau, phi.as_ref(), bound).map_err(usage)?;
    let fixed = Composite::new(Arc::new(tau.neumann_inverse(256)), phi);
    let repaired = cleanmap::check_clean(&fixed, depth).map_err(usage)?;
    let pass = !perturbed.passed() && agree.passed() && repaired.passed();
    Ok(json!({
        "element": p.name(x),
        "target": p.name(y),
        "perturbed_clean": perturbed,
        "psi_tau_equals_phi": agree,
        "repaired_clean": repaired,
        "status": status(pass),
    }))
}

fn cmd_complex(common: &Common, a: Option<Vec<i64>>, oracle: bool, dd: bool, bx: u32, depth: u32) -> Run {
    let (name, p) = load_poset(common.poset.as_deref())?;
    require_valid(&p)?;
    let field = parse_field(common)?;
    let mut cert = json!({ "poset": name, "field": field.to_string() });
    let mut ok = true;
    let g = complex::build_gamma(&p, field).map_err(usage)?;
    for (r, xs) in g.terms() {
        let names: Vec<String> = xs.iter().map(|&x| format!("*E_{}", p.name(x))).collect();
        say!("Gamma^-{r} = {}", names.join(" + "));
    }
    if let Some(a) = a {
        if a.len() != p.n_atoms() {
            return Err(Failure::Usage(format!("--a needs {} entries", p.n_atoms())));
        }
        let a = Multidegree(a);
        let rep = match complex::cohomology_report(&name, &p, &a, field, oracle) {
            Err(complex::ComplexError::NotAComplex(why)) => {
                eprintln!("oracle skipped: {why}");
                complex::cohomology_report(&name, &p, &a, field, false).map_err(usage)?
            }
            r => r.map_err(usage)?,
        };
        say!("cohomology at a = {:?}:", rep.a);
        for (i, d) in &rep.dims {
            let o = rep.oracle.as_ref().map(|o| format!(" (oracle {})", o[i])).unwrap_or_default();
            say!("  H^{i}: {d}{o}");
        }
        if let Some(m) = rep.matches {
            say!("match: {m}");
            ok &= m;
        }
        cert = serde_json::to_value(&rep).unwrap();
        cert["field"] = json!(field.to_string());
    }
    if dd {
        let bound = MonomialBox::by_depth(bx as i32, depth);
        let rep = g.verify_dd_zero(&bound).map_err(usage)?;
        say!("d.d = 0 on {} ({} checks over {} diamonds): {}", rep.bound, rep.checked, rep.diamonds.len(), rep.status);
        ok &= rep.status == cleanmap::Status::Pass;
        let mut clean = Vec::new();
        for c in g.components() {
            let r = cleanmap::check_clean(&c.map, depth).map_err(usage)?;
            ok &= r.passed();
            clean.push(r);
        }
        say!(
            "components clean to depth {depth}: {}",
            status(clean.iter().all(cleanmap::PropertyReport::passed))
        );
        cert["dd"] = serde_json::to_value(&rep).unwrap();
        cert["clean"] = serde_json::to_value(&clean).unwrap();
    }
    Ok((cert, ok))
}

fn emit(common: &Common, cert: &Value) -> Result<(), Failure> {
    let Some(path) = &common.json else {
        return Ok(());
    };
    let text = serde_json::to_string_pretty(cert).unwrap() + "\n";
    if path.as_os_str() == "-" {
        let _ = std::io::stdout().write_all(text.as_bytes());
        Ok(())
    } else {
        fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common_json = match &cli.command {
        Command::Validate { common, .. }
        | Command::Ring { common, .. }
        | Command::Envelope { common, .. }
        | Command::Cleanmap { common, .. }
        | Command::Complex { common, .. } => common.json.as_deref(),
    };
    TEXT_TO_STDERR.store(common_json.is_some_and(|p| p.as_os_str() == "-"), Ordering::Relaxed);
    let (common, result) = match cli.command {
        Command::Validate { file, common } => {
            let r = cmd_validate(file, &common);
            (common, r)
        }
        Command::Ring { common, member, straighten } => {
            let r = cmd_ring(&common, member, straighten);
            (common, r)
        }
        Command::Envelope { common, ann, deg, depth, element } => {
            let r = cmd_envelope(&common, ann, deg, depth, element);
            (common, r)
        }
        Command::Cleanmap { common, check_linearity, check_clean, tau, bx, depth, from, to } => {
            let r = cmd_cleanmap(&common, check_linearity, check_clean, tau, bx, depth, from, to);
            (common, r)
        }
        Command::Complex { common, a, oracle, dd, bx, depth } => {
            let r = cmd_complex(&common, a, oracle, dd, bx, depth);
            (common, r)
        }
    };
    let outcome = result.and_then(|(cert, ok)| {
        emit(&common, &cert)?;
        if ok {
            Ok(())
        } else {
            Err(Failure::Property)
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Property) => {
            eprintln!("property check failed");
            ExitCode::from(3)
        }
    }
}
