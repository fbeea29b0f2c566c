//! `harmonic`: batch verification runs with JSON or CSV reports.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use harmonic_core::cyclic_algebra::{
    random_jet, standard_pairs, standard_recipes, theorem_a_report, AlgebraDescriptor, AlgebraElement, AlgebraWindow,
    Pairing,
};
use harmonic_core::globalfield::{GlobalTestFunction, Place, RationalFn, DEFAULT_MAX_ENUM};
use harmonic_core::localfield::{LocalTestFunction, PlaceData, Window};
use harmonic_core::motivic::{euler_product, ConstructibleSet, MPoly, MotivicClass, Recipe};
use harmonic_core::poly::Poly;
use harmonic_core::scalars::{field_of_order, prime_power, Fe, GaloisField};

#[derive(Parser, Serialize)]
#[command(name = "harmonic", version, about = "Exact finite-field harmonic analysis checks")]
struct RunConfig {
    #[command(subcommand)]
    command: Command,
    /// Field order.
    #[arg(long, global = true)]
    q: Option<u32>,
    /// Characteristic; sets q when q is absent.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Degree of the cyclic algebra.
    #[arg(long, global = true, default_value_t = 3)]
    n: u32,
    /// Comma-separated places, e.g. "t,t+1,inf,t^2+t+1".
    #[arg(long, global = true)]
    places: Option<String>,
    /// Window "N,M": pole order N and depth M.
    #[arg(long, global = true)]
    window: Option<String>,
    /// Series precision B, or the largest extension degree for charsum.
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
enum Command {
    /// Specializations of [X, h] over F_{q^d}.
    Charsum(SetArgs),
    /// Euler product against stable-subset and point-count series.
    Euler {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = 0)]
        lshift: i64,
        /// Use the recipe a ≡ 0.
        #[arg(long)]
        zero: bool,
    },
    /// Local Fourier inversion on the delta basis.
    LocalFourier {
        #[arg(long, default_value_t = 0)]
        nu: i64,
    },
    /// Poisson summation on every coset indicator, or on a function file.
    Poisson {
        #[arg(long, default_value_t = 1)]
        arity: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_ENUM)]
        max_enum: u128,
    },
    /// Cyclic-algebra checks: relations, reduced invariants, valuation additivity.
    AlgCheck,
    /// Transforms of invariant recipes on two forms at matched pairs.
    TheoremA {
        #[arg(long, default_value_t = 2)]
        shift: i64,
        #[arg(long, value_enum, default_value_t = PairingArg::Trace)]
        pairing: PairingArg,
    },
}

#[derive(clap::Args, Serialize)]
struct SetArgs {
    /// Comma-separated variable names.
    #[arg(long, default_value = "x")]
    vars: String,
    /// Equation f = 0, repeatable.
    #[arg(long = "eq")]
    equations: Vec<String>,
    /// Inequation g ≠ 0, repeatable.
    #[arg(long = "neq")]
    inequations: Vec<String>,
    /// The polynomial h.
    #[arg(long, default_value = "0")]
    h: String,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum PairingArg {
    Trace,
    Dot,
}

/// Command output: a JSON result, CSV rows and the overall flag.
struct Outcome {
    result: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    ok: bool,
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match run(&config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(config: &RunConfig) -> Result<bool> {
    let outcome = match &config.command {
        Command::Charsum(set) => charsum(config, set)?,
        Command::Euler { set, lshift, zero } => euler(config, set, *lshift, *zero)?,
        Command::LocalFourier { nu } => local_fourier(config, *nu)?,
        Command::Poisson { arity, max_enum } => poisson(config, *arity, *max_enum)?,
        Command::AlgCheck => alg_check(config)?,
        Command::TheoremA { shift, pairing } => theorem_a(config, *shift, *pairing)?,
    };
    let text = match config.format {
        Format::Json => {
            let report = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": config,
                "result": outcome.result,
                "ok": outcome.ok,
            });
            serde_json::to_string_pretty(&report)? + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&outcome.header)?;
            for row in &outcome.rows {
                w.write_record(row)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    match &config.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(outcome.ok)
}

fn field(config: &RunConfig) -> Result<Arc<GaloisField>> {
    let q = match (config.q, config.p) {
        (Some(q), Some(p)) => {
            let (c, _) = prime_power(q).ok_or_else(|| anyhow!("{q} is not a prime power"))?;
            if c != p {
                bail!("q = {q} does not have characteristic {p}");
            }
            q
        }
        (Some(q), None) => q,
        (None, Some(p)) => p,
        (None, None) => 2,
    };
    Ok(field_of_order(q)?)
}

fn window(config: &RunConfig, default: (u32, u32)) -> Result<Window> {
    let Some(s) = &config.window else {
        return Ok(Window::new(default.0, default.1));
    };
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [n, m] => Ok(Window::new(n.parse().context("window pole")?, m.parse().context("window depth")?)),
        _ => bail!("window must be \"N,M\", got {s:?}"),
    }
}

fn places(config: &RunConfig, f: &Arc<GaloisField>, default: &str) -> Result<Vec<Place>> {
    config
        .places
        .as_deref()
        .unwrap_or(default)
        .split(',')
        .map(|s| Place::parse(f, s.trim()).with_context(|| format!("place {s:?}")))
        .collect()
}

fn constructible(f: &Arc<GaloisField>, set: &SetArgs) -> Result<(ConstructibleSet, MPoly)> {
    let vars: Vec<&str> = set.vars.split(',').map(str::trim).filter(|v| !v.is_empty()).collect();
    let eqs: Vec<&str> = set.equations.iter().map(String::as_str).collect();
    let neqs: Vec<&str> = set.inequations.iter().map(String::as_str).collect();
    let x = ConstructibleSet::parse(f, &vars, &eqs, &neqs).context("parsing the set")?;
    let h = MPoly::parse(f, &set.h, &vars).context("parsing h")?;
    Ok((x, h))
}

fn charsum(config: &RunConfig, set: &SetArgs) -> Result<Outcome> {
    let class = match &config.input {
        Some(path) => MotivicClass::from_json(&fs::read_to_string(path)?)?,
        None => {
            let f = field(config)?;
            let (x, h) = constructible(&f, set)?;
            MotivicClass::generator(x, h)?
        }
    };
    let top = config.precision.unwrap_or(3);
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for d in 1..=top {
        let v = class.specialize(d)?;
        rows.push(vec![d.to_string(), v.to_string()]);
        values.push(json!({"degree": d, "value": v}));
    }
    Ok(Outcome {
        result: json!({"class": serde_json::from_str::<Value>(&class.to_json())?, "specializations": values}),
        header: vec!["degree", "value"],
        rows,
        ok: true,
    })
}

fn euler(config: &RunConfig, set: &SetArgs, lshift: i64, zero: bool) -> Result<Outcome> {
    let f = field(config)?;
    let (x, h) = constructible(&f, set)?;
    let recipe = if zero { Recipe::Zero } else { Recipe::Character { h, lshift } };
    let b = config.precision.unwrap_or(4);
    let series = euler_product(&x, &recipe, b)?;
    let rows = (0..=b as usize)
        .map(|k| {
            vec![
                k.to_string(),
                series.lhs[k].to_string(),
                series.rhs[k].to_string(),
                series.point_counts[k].to_string(),
            ]
        })
        .collect();
    let ok = series.agree();
    Ok(Outcome {
        result: json!({"series": series, "match": ok}),
        header: vec!["power", "lhs", "rhs", "point_counts"],
        rows,
        ok,
    })
}

fn local_fourier(config: &RunConfig, nu: i64) -> Result<Outcome> {
    let f = field(config)?;
    let w = window(config, (1, 1))?;
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for place in places(config, &f, "t")? {
        let pd = PlaceData::with_nu(&f, place.clone(), nu)?;
        let size = (f.order() as usize)
            .checked_pow(pd.jet_dim(w) as u32)
            .ok_or_else(|| anyhow!("window too large"))?;
        let mut equal = 0;
        for i in 0..size {
            let phi = LocalTestFunction::delta(&pd, 1, w, i)?;
            if phi.fourier1()?.fourier1()? == phi.negate_argument() {
                equal += 1;
            }
        }
        ok &= equal == size;
        rows.push(vec![place.to_string(), w.to_string(), size.to_string(), equal.to_string()]);
        results.push(json!({"place": place.to_string(), "window": w, "nu": nu, "cases": size, "equal_cases": equal}));
    }
    Ok(Outcome {
        result: json!({"inversion": results}),
        header: vec!["place", "window", "cases", "equal_cases"],
        rows,
        ok,
    })
}

fn poisson(config: &RunConfig, arity: usize, cap: u128) -> Result<Outcome> {
    if let Some(path) = &config.input {
        let phi = GlobalTestFunction::from_json(&fs::read_to_string(path)?)?;
        let r = phi.poisson_report(cap)?;
        return Ok(Outcome {
            rows: vec![vec![r.lhs.to_string(), r.rhs.to_string(), r.equal.to_string()]],
            header: vec!["lhs", "rhs", "equal"],
            ok: r.equal,
            result: serde_json::to_value(&r)?,
        });
    }
    let f = field(config)?;
    let w = window(config, (1, 1))?;
    let support: Vec<(Place, Window)> = places(config, &f, "t,t+1,inf")?.into_iter().map(|p| (p, w)).collect();
    let summary = GlobalTestFunction::poisson_basis(&f, &support, arity, cap)?;
    Ok(Outcome {
        rows: vec![vec![
            summary.places.join(" "),
            summary.cases.to_string(),
            summary.equal_cases.to_string(),
            summary.empty_cosets.to_string(),
        ]],
        header: vec!["places", "cases", "equal_cases", "empty_cosets"],
        ok: summary.all_equal,
        result: serde_json::to_value(&summary)?,
    })
}

fn random_element(d: &Arc<AlgebraDescriptor>, rng: &mut ChaCha8Rng) -> Result<AlgebraElement> {
    let f = d.base();
    let n = d.n() as usize;
    let table = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let cs = (0..3).map(|_| Fe(rng.gen_range(0..f.order()))).collect();
                    RationalFn::from_poly(Poly::new(f, cs))
                })
                .collect()
        })
        .collect();
    Ok(AlgebraElement::new(d, table)?)
}

fn alg_check(config: &RunConfig) -> Result<Outcome> {
    let f = field(config)?;
    let d = AlgebraDescriptor::new(f.order(), config.n, 1)?;
    let samples = config.samples.unwrap_or(1000);
    let w = window(config, (0, 4))?;
    let jets = AlgebraWindow::from_t_window(config.n, w.pole, w.depth);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut checks = Vec::new();

    let s = AlgebraElement::s(&d);
    let t = RationalFn::t(&f);
    let mut power = AlgebraElement::one(&d);
    for _ in 0..config.n {
        power = power.mul(&s)?;
    }
    checks.push(("s^n = t", power == AlgebraElement::scalar(&d, &t), String::new()));
    let cp = s.reduced_char_poly()?;
    checks.push(("Nrd(s) = t", cp.norm() == t, cp.norm().to_string()));
    let binomial = cp.coeffs[1..config.n as usize].iter().all(RationalFn::is_zero) && cp.coeffs[0] == t.neg();
    checks.push(("charpoly(s) = X^n - t", binomial, cp.to_string()));

    let mut assoc_bad = 0;
    for _ in 0..samples.min(100) {
        let (x, y, z) = (random_element(&d, &mut rng)?, random_element(&d, &mut rng)?, random_element(&d, &mut rng)?);
        if x.mul(&y)?.mul(&z)? != x.mul(&y.mul(&z)?)? {
            assoc_bad += 1;
        }
    }
    checks.push(("associativity", assoc_bad == 0, format!("{assoc_bad} failures")));

    let mut tested = 0;
    let mut bad = 0;
    while tested < samples {
        let (x, y) = (random_jet(&d, jets, &mut rng), random_jet(&d, jets, &mut rng));
        let (Some(a), Some(b)) = (x.w_valuation(), y.w_valuation()) else { continue };
        tested += 1;
        let exact = x.mul_lifts(&y)?.w_valuation();
        let truncated = x.mul(&y)?.w_valuation();
        if exact != Some(a + b) || truncated != Some(a + b).filter(|&v| v < jets.hi) {
            bad += 1;
        }
    }
    checks.push(("w additive on jet pairs", bad == 0, format!("{tested} pairs at {jets}, {bad} violations")));

    let ok = checks.iter().all(|c| c.1);
    let rows = checks.iter().map(|(n, p, d)| vec![n.to_string(), p.to_string(), d.clone()]).collect();
    let result = checks
        .iter()
        .map(|(n, p, d)| json!({"check": n, "passed": p, "detail": d}))
        .collect::<Vec<_>>();
    Ok(Outcome {
        result: json!({"checks": result}),
        header: vec!["check", "passed", "detail"],
        rows,
        ok,
    })
}

fn theorem_a(config: &RunConfig, shift: i64, pairing: PairingArg) -> Result<Outcome> {
    let f = field(config)?;
    let d = AlgebraDescriptor::new(f.order(), config.n, 1)?;
    let dd = AlgebraDescriptor::new(f.order(), config.n, 2)?;
    let w = window(config, (0, 2))?;
    if w.pole != 0 {
        bail!("theorem-a uses windows on S_0; got pole order {}", w.pole);
    }
    let jets = AlgebraWindow::from_t_window(config.n, 0, w.depth);
    let recipes = standard_recipes(&d, w.depth as usize)?;
    let pairs = standard_pairs(&d, &dd)?;
    let pairing = match pairing {
        PairingArg::Trace => Pairing::ReducedTrace,
        PairingArg::Dot => Pairing::Dot,
    };
    let report = theorem_a_report(&recipes, &pairs, jets, shift, pairing)?;
    let rows = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.pair_id.to_string(),
                serde_json::to_value(&r.provenance).unwrap().as_str().unwrap_or_default().to_string(),
                r.recipe.clone(),
                r.charpoly.clone(),
                r.value_d.to_string(),
                r.value_ddot.to_string(),
                r.equal.to_string(),
            ]
        })
        .collect();
    Ok(Outcome {
        ok: report.all_equal(),
        result: serde_json::to_value(&report)?,
        header: vec!["pair_id", "provenance", "recipe", "charpoly", "value_d", "value_ddot", "equal"],
        rows,
    })
}
