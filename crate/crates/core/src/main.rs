use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use affine_va::arith::Rational;
use affine_va::hc::{
    integral_members, p0_generators, parse_chain_specs, parse_families, parse_named_polys, span_dimension,
    verify_classification, IntegralMembers, WeightFamily,
};
use affine_va::lie::{SlAlgebra, Weight};
use affine_va::poly::CartanPoly;
use affine_va::singular::{search_singular, verify_singular, verify_singular_extended};
use affine_va::text::ParseError;
use affine_va::uea::UeaElement;
use affine_va::vacuum::{VacuumContext, VacuumElement};
use affine_va::wnum::{low_weight_candidates, minimal_w_top};
use affine_va::zhu::{zhu_image, zhu_image_oracle};

#[derive(Parser)]
#[command(name = "affine-va", version, about = "Exact computations in affine vertex algebras of type A")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Args, Clone)]
struct AlgebraArgs {
    /// Algebra, e.g. sl6.
    #[arg(long, default_value = "sl6")]
    algebra: String,
    #[arg(long, default_value = "-7/2", allow_hyphen_values = true)]
    level: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a vacuum-module vector is annihilated by the raising operators.
    VerifySingular {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        input: PathBuf,
        /// Also apply every e[i,j](0) and every x(1).
        #[arg(long)]
        extended: bool,
    },
    /// Basis of the singular vectors of a given weight and degree.
    SearchSingular {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        #[arg(long)]
        degree: i64,
        /// Write each basis vector to DIR/kernel_<i>.vac.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Image of a vacuum-module vector in U(sl_n).
    ZhuImage {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Compare with the recursive evaluation.
        #[arg(long)]
        cross_check: bool,
        /// Expected image; exit 1 if it differs.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Evaluate the generator polynomials along every weight family.
    Classify {
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
        /// Families file; defaults to FIXTURES/families.txt.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Add 1 to coordinate COORD (default 1) of the base of family IDX (1-based).
        #[arg(long, value_name = "IDX[:COORD]")]
        perturb: Option<String>,
        /// Recompute the polynomials from the chain fixture and compare.
        #[arg(long)]
        regenerate: bool,
    },
    /// Minimal W-algebra top data and the low-weight candidate table.
    WNumerics {
        #[arg(long, default_value = "4")]
        bound: String,
        /// Also report top data for this weight of sl_{m+2}.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        #[arg(long, default_value = "-7/2", allow_hyphen_values = true)]
        level: String,
    },
}

enum Failure {
    Usage(String),
    Math,
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Math) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let fmt = cli.format;
    match &cli.cmd {
        Cmd::VerifySingular { alg, input, extended } => {
            let ctx = context(alg)?;
            let v = VacuumElement::parse(&ctx, &read(input)?).map_err(|e| located(input, e))?;
            let report = if *extended { verify_singular_extended(&ctx, &v) } else { verify_singular(&ctx, &v) }
                .map_err(|e| e.to_string())?;
            match fmt {
                Format::Text => println!("{report}"),
                Format::Records => {
                    for c in &report.checks {
                        println!("{}", json!({"record": "check", "operator": c.label, "zero": c.is_zero, "terms": c.residual.len()}));
                    }
                    println!(
                        "{}",
                        json!({"record": "summary", "weight": report.weight.to_string(), "degree": report.degree, "pass": report.passed()})
                    );
                }
            }
            status(report.passed())
        }
        Cmd::SearchSingular { alg, weight, degree, output } => {
            let ctx = context(alg)?;
            let w: Weight = weight.parse().map_err(|e| format!("--weight: {e}"))?;
            ctx.algebra().check_weight(&w).map_err(|e| format!("--weight: {e}"))?;
            let kernel = if *degree == 0 {
                if w.coords.iter().all(|c| c.is_zero()) {
                    vec![VacuumElement::vacuum()]
                } else {
                    Vec::new()
                }
            } else if *degree < 0 {
                Vec::new()
            } else {
                search_singular(&ctx, &w, *degree).map_err(|e| e.to_string())?
            };
            let a = ctx.algebra();
            if let Some(dir) = output {
                fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
                for (i, v) in kernel.iter().enumerate() {
                    let path = dir.join(format!("kernel_{}.vac", i + 1));
                    fs::write(&path, render_lines(&v.render(a))).map_err(|e| format!("{}: {e}", path.display()))?;
                }
            }
            match fmt {
                Format::Text => {
                    println!("weight {w} degree {degree}: kernel dimension {}", kernel.len());
                    if output.is_none() {
                        for (i, v) in kernel.iter().enumerate() {
                            println!("# kernel vector {}", i + 1);
                            print!("{}", render_lines(&v.render(a)));
                        }
                    }
                }
                Format::Records => {
                    for (i, v) in kernel.iter().enumerate() {
                        println!("{}", json!({"record": "kernel", "index": i + 1, "terms": v.len(), "vector": v.render(a)}));
                    }
                    println!("{}", json!({"record": "summary", "weight": w.to_string(), "degree": degree, "dimension": kernel.len()}));
                }
            }
            Ok(())
        }
        Cmd::ZhuImage { alg, input, output, cross_check, expect } => {
            let ctx = context(alg)?;
            let v = VacuumElement::parse(&ctx, &read(input)?).map_err(|e| located(input, e))?;
            let img = zhu_image(&ctx, &v);
            let a = ctx.algebra();
            let text = render_lines(&img.render(a));
            if let Some(out) = output {
                fs::write(out, &text).map_err(|e| format!("{}: {e}", out.display()))?;
            }
            let mut ok = true;
            let oracle = cross_check.then(|| zhu_image_oracle(&ctx, &v) == img);
            if oracle == Some(false) {
                ok = false;
            }
            let matches = match expect {
                Some(path) => {
                    let want = UeaElement::parse(a, &read(path)?).map_err(|e| located(path, e))?;
                    Some(want == img)
                }
                None => None,
            };
            if matches == Some(false) {
                ok = false;
            }
            match fmt {
                Format::Text => {
                    if output.is_none() {
                        print!("{text}");
                    }
                    if let Some(o) = oracle {
                        println!("# recursive evaluation: {}", if o { "agrees" } else { "DIFFERS" });
                    }
                    if let Some(m) = matches {
                        println!("# expected image: {}", if m { "matches" } else { "DIFFERS" });
                    }
                }
                Format::Records => {
                    println!(
                        "{}",
                        json!({"record": "image", "terms": img.terms().count(), "image": img.render(a), "oracle": oracle, "expected": matches})
                    );
                }
            }
            status(ok)
        }
        Cmd::Classify { fixtures, input, perturb, regenerate } => classify(fmt, fixtures, input.as_deref(), perturb.as_deref(), *regenerate),
        Cmd::WNumerics { bound, weight, level } => {
            let bound: Rational = bound.parse().map_err(|e| format!("--bound: {e}"))?;
            let rows = low_weight_candidates(&bound).map_err(|e| e.to_string())?;
            match fmt {
                Format::Text => {
                    println!("{:>3} {:>3} {:>4} {:>8} {:>8}", "q", "n", "t", "h", "J");
                    for r in &rows {
                        println!("{:>3} {:>3} {:>4} {:>8} {:>8}", r.q, r.n, r.t, r.conformal_weight.to_string(), r.j_eigenvalue.to_string());
                    }
                }
                Format::Records => {
                    for r in &rows {
                        println!(
                            "{}",
                            json!({"record": "row", "q": r.q, "n": r.n, "t": r.t, "h": r.conformal_weight.to_string(), "J": r.j_eigenvalue.to_string()})
                        );
                    }
                }
            }
            if let Some(w) = weight {
                let w: Weight = w.parse().map_err(|e| format!("--weight: {e}"))?;
                if w.coords.is_empty() {
                    return Err("--weight needs at least one coordinate".to_string().into());
                }
                let k: Rational = level.parse().map_err(|e| format!("--level: {e}"))?;
                let m = w.len() - 1;
                let top = minimal_w_top(m, &k, &w).map_err(|e| e.to_string())?;
                match fmt {
                    Format::Text => println!("top of {w}: J = {}, h = {}", top.j_eigenvalue, top.conformal_weight),
                    Format::Records => println!(
                        "{}",
                        json!({"record": "top", "weight": w.to_string(), "J": top.j_eigenvalue.to_string(), "h": top.conformal_weight.to_string()})
                    ),
                }
            }
            Ok(())
        }
    }
}

fn classify(fmt: Format, fixtures: &Path, input: Option<&Path>, perturb: Option<&str>, regenerate: bool) -> Outcome {
    let fam_path = input.map(Path::to_path_buf).unwrap_or_else(|| fixtures.join("families.txt"));
    let mut families = parse_families(&read(&fam_path)?).map_err(|e| located(&fam_path, e))?;
    let poly_path = fixtures.join("p0.poly");
    let l = families.first().map(WeightFamily::rank).unwrap_or(5);
    if families.iter().any(|f| f.rank() != l) {
        return Err(format!("{}: families of different ranks", fam_path.display()).into());
    }
    let named = parse_named_polys(l, &read(&poly_path)?).map_err(|e| located(&poly_path, e))?;
    let polys: Vec<CartanPoly> = named.iter().map(|(_, p)| p.clone()).collect();
    if let Some(spec) = perturb {
        let (idx, coord) = match spec.split_once(':') {
            Some((a, b)) => (a, b),
            None => (spec, "1"),
        };
        let idx: usize = idx.parse().map_err(|_| format!("--perturb: bad family index `{idx}`"))?;
        let coord: usize = coord.parse().map_err(|_| format!("--perturb: bad coordinate `{coord}`"))?;
        if idx == 0 || idx > families.len() || coord == 0 || coord > l {
            return Err(format!("--perturb {spec} out of range").into());
        }
        let f = &mut families[idx - 1];
        f.base.coords[coord - 1] = &f.base.coords[coord - 1] + &Rational::one();
    }
    let report = verify_classification(&polys, &families);
    let mut ok = report.passed();
    let mut regen = None;
    if regenerate {
        let n = l + 1;
        let alg = SlAlgebra::new(n).map_err(|e| e.to_string())?;
        let vp = fixtures.join("v_prime.uea");
        let v = UeaElement::parse(&alg, &read(&vp)?).map_err(|e| located(&vp, e))?;
        let cp = fixtures.join("chains.txt");
        let specs = parse_chain_specs(&read(&cp)?).map_err(|e| located(&cp, e))?;
        let got = p0_generators(&alg, &v, &specs).map_err(|e| e.to_string())?;
        let cmp: Vec<(String, bool)> = specs
            .iter()
            .zip(&got)
            .map(|(s, g)| {
                let want = named.iter().find(|(name, _)| *name == s.name).map(|(_, p)| p);
                (s.name.clone(), want == Some(g))
            })
            .collect();
        if cmp.iter().any(|(_, m)| !m) {
            ok = false;
        }
        regen = Some((cmp, span_dimension(&got)));
    }
    match fmt {
        Format::Text => {
            for p in &report.pairs {
                let status = if p.value.is_zero() { "ok" } else { "FAIL" };
                if !p.value.is_zero() {
                    println!("{} family {} ({}): {status} {}", named[p.poly].0, p.family + 1, families[p.family], p.value);
                }
            }
            let bad = report.failures().count();
            println!("{} polynomials x {} families: {} zero, {} nonzero", polys.len(), families.len(), report.pairs.len() - bad, bad);
            for (i, f) in families.iter().enumerate() {
                let m = integral_members(f);
                if m != IntegralMembers::None {
                    println!("family {} ({f}) dominant integral for {m}", i + 1);
                }
            }
            if let Some((cmp, dim)) = &regen {
                for (name, m) in cmp {
                    println!("{name} from chains: {}", if *m { "matches" } else { "DIFFERS" });
                }
                println!("span dimension {dim}");
            }
            println!("{}", if ok { "PASS" } else { "FAIL" });
        }
        Format::Records => {
            for p in &report.pairs {
                println!(
                    "{}",
                    json!({"record": "pair", "poly": named[p.poly].0, "family": p.family + 1, "zero": p.value.is_zero(), "value": p.value.to_string()})
                );
            }
            for (i, f) in families.iter().enumerate() {
                println!("{}", json!({"record": "integral", "family": i + 1, "members": integral_members(f).to_string()}));
            }
            if let Some((cmp, dim)) = &regen {
                for (name, m) in cmp {
                    println!("{}", json!({"record": "regenerated", "poly": name, "matches": m}));
                }
                println!("{}", json!({"record": "span", "dimension": dim}));
            }
            println!("{}", json!({"record": "summary", "pairs": report.pairs.len(), "nonzero": report.failures().count(), "pass": ok}));
        }
    }
    status(ok)
}

fn context(a: &AlgebraArgs) -> Result<VacuumContext, String> {
    let n: usize = a
        .algebra
        .strip_prefix("sl")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| format!("--algebra: expected slN, got `{}`", a.algebra))?;
    let k: Rational = a.level.parse().map_err(|e| format!("--level: {e}"))?;
    VacuumContext::new(n, k).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn located(path: &Path, e: ParseError) -> String {
    format!("{}:{}:{}: {}", path.display(), e.pos.line, e.pos.col, e.msg)
}

fn status(ok: bool) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Math)
    }
}

fn render_lines(s: &str) -> String {
    format!("{}\n", s.trim_end())
}
