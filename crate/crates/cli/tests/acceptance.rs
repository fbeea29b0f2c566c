//! Acceptance suite: one pass/fail line per criterion.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{ensure, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use harmonic_core::cyclic_algebra::{
    random_jet, standard_pairs, standard_recipes, theorem_a_report, AlgebraDescriptor, AlgebraElement, AlgebraWindow,
    Pairing,
};
use harmonic_core::globalfield::{residue, rr_basis, Divisor, GlobalTestFunction, Place, RationalFn, DEFAULT_MAX_ENUM};
use harmonic_core::localfield::{LocalTestFunction, PlaceData, Window};
use harmonic_core::motivic::{closed_points, euler_product, orbit_norm_value, ConstructibleSet, MPoly, Recipe};
use harmonic_core::scalars::{extension, field_of_order, psi, CycScalar, Fe, GaloisField};

/// Pairs seeded for the valuation check.
const VALUATION_PAIRS: usize = 1000;
const VALUATION_SEED: u64 = 2024;
/// Minimum number of matched pairs for the Theorem A check.
const MIN_PAIRS: usize = 20;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    check: fn() -> Result<String>,
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn pl(f: &Arc<GaloisField>, s: &str) -> Place {
    Place::parse(f, s).unwrap()
}

/// t² + t + 1 is irreducible over F_2 only; t² + 1 plays its role over F_3.
fn quadratic(q: u32) -> &'static str {
    if q == 2 {
        "t^2 + t + 1"
    } else {
        "t^2 + 1"
    }
}

/// The place t = 1.
fn one_place(q: u32) -> &'static str {
    if q == 2 {
        "t + 1"
    } else {
        "t + 2"
    }
}

fn character_relations() -> Result<String> {
    let mut checked = 0;
    for q in [2, 3, 4, 8, 9] {
        let f = field_of_order(q)?;
        let p = f.characteristic();
        let mut total = CycScalar::zero(p);
        for x in 0..q {
            total += &psi(&f, Fe(x));
        }
        ensure!(total.is_zero(), "sum of ψ over F_{q} is {total}");
        for x in 0..q {
            for y in 0..q {
                let lhs = psi(&f, f.add(Fe(x), Fe(y)));
                ensure!(lhs == &psi(&f, Fe(x)) * &psi(&f, Fe(y)), "ψ not additive at q={q}");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} additivity pairs"))
}

fn local_inversion() -> Result<String> {
    let mut cases = 0;
    for q in [2, 3] {
        let f = field_of_order(q)?;
        for place in ["t", quadratic(q)] {
            for nu in [0, 2] {
                let pd = PlaceData::with_nu(&f, pl(&f, place), nu)?;
                for total in 0..=3u32 {
                    for pole in 0..=total {
                        let w = Window::new(pole, total - pole);
                        if (w.depth as i64) < nu {
                            continue;
                        }
                        let size = (q as usize).pow(pd.jet_dim(w) as u32);
                        for i in 0..size {
                            let phi = LocalTestFunction::delta(&pd, 1, w, i)?;
                            ensure!(
                                phi.fourier1()?.fourier1()? == phi.negate_argument(),
                                "q={q} {place} ν={nu} {w} delta {i}"
                            );
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{cases} delta functions"))
}

fn poisson() -> Result<String> {
    let windows = [Window::new(0, 0), Window::new(0, 1), Window::new(1, 0), Window::new(1, 1)];
    let (mut cases, mut empty) = (0u64, 0u64);
    for q in [2, 3] {
        let f = field_of_order(q)?;
        let all = [Place::Infinity, pl(&f, "t"), pl(&f, one_place(q)), pl(&f, quadratic(q))];
        for mask in 0..16u32 {
            let mut configs: Vec<Vec<(Place, Window)>> = vec![vec![]];
            for (_, p) in all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1) {
                configs = configs
                    .into_iter()
                    .flat_map(|c| {
                        windows.iter().map(move |w| {
                            let mut c = c.clone();
                            c.push((p.clone(), *w));
                            c
                        })
                    })
                    .collect();
            }
            for c in configs {
                let s = GlobalTestFunction::poisson_basis(&f, &c, 1, DEFAULT_MAX_ENUM)?;
                ensure!(s.all_equal, "q={q} support {:?}", s.places);
                cases += s.cases as u64;
                empty += s.empty_cosets as u64;
            }
        }
    }
    // Jets ≡ t mod t² + t + 1 over F_2: the residue lies in F_4 ∖ F_2.
    let f = field_of_order(2)?;
    let support = [(pl(&f, "t^2 + t + 1"), Window::new(0, 1))];
    let fixture = GlobalTestFunction::from_fn(&f, &support, 1, |x| {
        CycScalar::from_integer(2, (x == [Fe::ZERO, Fe::ONE]) as i64)
    })?;
    let r = fixture.poisson_report(DEFAULT_MAX_ENUM)?;
    ensure!(r.lhs.is_zero() && r.rhs.is_zero() && r.equal, "fixture gives {} vs {}", r.lhs, r.rhs);
    ensure!(empty > 0, "no empty cosets met");
    Ok(format!("{cases} coset indicators, {empty} empty cosets, fixture 0 = 0"))
}

fn case_one_scalar() -> Result<String> {
    let mut checked = 0;
    for q in [2, 3] {
        let f = field_of_order(q)?;
        let p = f.characteristic();
        let cases: Vec<(Vec<(Place, Window)>, i64)> = vec![
            (vec![], 0),
            (vec![(pl(&f, "t"), Window::new(1, 1))], 1),
            (vec![(Place::Infinity, Window::new(1, 1))], 1),
            (vec![(pl(&f, "t"), Window::new(1, 1)), (Place::Infinity, Window::new(1, 1))], 2),
            (vec![(pl(&f, "t"), Window::new(2, 0))], 2),
            (vec![(pl(&f, quadratic(q)), Window::new(1, 0))], 2),
        ];
        for (support, deg) in cases {
            let phi = GlobalTestFunction::indicator(&f, &support, 1)?;
            let ft = phi.global_fourier()?;
            let dual = GlobalTestFunction::delta(&f, &ft.support(), 1, 0)?;
            ensure!(
                ft == dual.scale(&CycScalar::power_of(p, q as u64, deg + 1)),
                "q={q} deg D={deg}"
            );
            checked += 1;
        }
    }
    Ok(format!("{checked} divisors"))
}

fn rational_points() -> Result<String> {
    for q in [2, 3, 4] {
        let f = field_of_order(q)?;
        let one = GlobalTestFunction::indicator(&f, &[], 1)?;
        let v = one.delta_k(DEFAULT_MAX_ENUM)?;
        ensure!(v == CycScalar::from_integer(f.characteristic(), q as i64), "q={q}: {v}");
    }
    Ok("q = 2, 3, 4".into())
}

fn euler() -> Result<String> {
    let mut series = 0;
    for q in [2, 3] {
        let f = field_of_order(q)?;
        let line = ConstructibleSet::affine(&f, 1);
        let punctured = ConstructibleSet::parse(&f, &["x"], &[], &["x"])?;
        for x in [line, punctured] {
            let recipes = [
                Recipe::Zero,
                Recipe::one(&x),
                Recipe::Character { h: MPoly::parse(&f, "x", &["x"])?, lshift: 0 },
                Recipe::Character { h: MPoly::parse(&f, "x^2 + 1", &["x"])?, lshift: -1 },
            ];
            for r in &recipes {
                let s = euler_product(&x, r, 4)?;
                ensure!(s.agree(), "q={q} {r:?}: {:?} vs {:?}", s.lhs, s.rhs);
                series += 1;
            }
        }
    }
    Ok(format!("{series} series to t^4"))
}

fn orbit_norms() -> Result<String> {
    let f = field_of_order(2)?;
    let line = ConstructibleSet::affine(&f, 1);
    let mut points = 0;
    for h in ["x", "x^2 + 1", "x^3 + x"] {
        let hp = MPoly::parse(&f, h, &["x"])?;
        for v in closed_points(&line, 3)?.into_iter().filter(|v| v.degree() >= 2) {
            let ext = extension(&f, v.degree())?;
            let direct = ext.top().absolute_trace(hp.eval_in(&ext, &[v.point()[0]]));
            for k in 0..v.degree() {
                ensure!(
                    orbit_norm_value(&v.conjugate(k), &hp)? == CycScalar::zeta_pow(2, direct),
                    "h={h} at a degree-{} point",
                    v.degree()
                );
            }
            points += 1;
        }
    }
    ensure!(points == 3 * (1 + 2), "expected 1 quadratic and 2 cubic points per h");
    Ok(format!("{points} closed points"))
}

fn division_structure() -> Result<String> {
    let d = AlgebraDescriptor::new(2, 3, 1)?;
    let f = d.base().clone();
    let t = RationalFn::t(&f);
    let cp = AlgebraElement::s(&d).reduced_char_poly()?;
    ensure!(cp.norm() == t, "Nrd(s) = {}", cp.norm());
    ensure!(
        cp.coeffs.len() == 4 && cp.coeffs[0] == t.neg() && cp.coeffs[1].is_zero() && cp.coeffs[2].is_zero(),
        "charpoly(s) = {cp}"
    );
    let window = AlgebraWindow::from_t_window(3, 0, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(VALUATION_SEED);
    let mut tested = 0;
    while tested < VALUATION_PAIRS {
        let (x, y) = (random_jet(&d, window, &mut rng), random_jet(&d, window, &mut rng));
        let (Some(a), Some(b)) = (x.w_valuation(), y.w_valuation()) else { continue };
        tested += 1;
        ensure!(x.mul_lifts(&y)?.w_valuation() == Some(a + b), "lifted product");
        ensure!(
            x.mul(&y)?.w_valuation() == Some(a + b).filter(|&v| v < window.hi),
            "truncated product"
        );
    }
    Ok(format!("{tested} pairs at {window}, charpoly {cp}"))
}

fn theorem_a() -> Result<String> {
    let d = AlgebraDescriptor::new(2, 3, 1)?;
    let dd = AlgebraDescriptor::new(2, 3, 2)?;
    let recipes = standard_recipes(&d, 2)?;
    let pairs = standard_pairs(&d, &dd)?;
    ensure!(pairs.len() >= MIN_PAIRS, "only {} pairs", pairs.len());
    let report = theorem_a_report(&recipes, &pairs, AlgebraWindow::from_t_window(3, 0, 2), 2, Pairing::ReducedTrace)?;
    ensure!(report.skipped.is_empty(), "{} skipped rows", report.skipped.len());
    if let Some(r) = report.rows.iter().find(|r| !r.equal) {
        anyhow::bail!("pair {} recipe {}: {} vs {}", r.pair_id, r.recipe, r.value_d, r.value_ddot);
    }
    let nonzero = report.rows.iter().filter(|r| !r.value_d.is_zero()).count();
    Ok(format!("{} rows over {} pairs, {nonzero} nonzero", report.rows.len(), pairs.len()))
}

fn residue_theorem() -> Result<String> {
    let mut functions = 0;
    for q in [2, 3] {
        let f = field_of_order(q)?;
        let places = [Place::Infinity, pl(&f, "t"), pl(&f, one_place(q)), pl(&f, quadratic(q))];
        let mut divisors = vec![Divisor::new()];
        for p in &places {
            divisors = divisors
                .into_iter()
                .flat_map(|d| {
                    (-1..=4).map(move |k| {
                        let mut d = d.clone();
                        d.add_place(p.clone(), k);
                        d
                    })
                })
                .collect();
        }
        for d in divisors.into_iter().filter(|d| d.degree() <= 4) {
            for g in rr_basis(&f, &d) {
                let mut sites: Vec<Place> = g.divisor().iter().map(|(p, _)| p.clone()).collect();
                if !sites.contains(&Place::Infinity) {
                    sites.push(Place::Infinity);
                }
                let mut total = Fe::ZERO;
                for p in &sites {
                    total = f.add(total, residue(&g, p)?.trace);
                }
                ensure!(total == Fe::ZERO, "q={q} D={d} f={g}");
                functions += 1;
            }
        }
    }
    Ok(format!("{functions} basis functions"))
}

fn determinism() -> Result<String> {
    let runs: &[&[&str]] = &[
        &["alg-check", "--samples", "50", "--seed", "7"],
        &["euler", "--q", "3", "--h", "x^2 + x"],
        &["poisson", "--q", "2", "--places", "t,inf", "--format", "csv"],
        &["charsum", "--q", "4", "--h", "x^3"],
    ];
    for args in runs {
        let run = || Command::new(env!("CARGO_BIN_EXE_harmonic")).args(*args).output();
        let (a, b) = (run()?, run()?);
        ensure!(a.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&a.stderr));
        ensure!(a.stdout == b.stdout, "{args:?} differs between runs");
    }
    Ok(format!("{} commands byte-identical", runs.len()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "character relations", limit: secs(1), check: character_relations },
        Criterion { id: 2, name: "local Fourier inversion", limit: secs(10), check: local_inversion },
        Criterion { id: 3, name: "Poisson summation", limit: secs(60), check: poisson },
        Criterion { id: 4, name: "case-1 scalar", limit: secs(10), check: case_one_scalar },
        Criterion { id: 5, name: "rational-point functional", limit: None, check: rational_points },
        Criterion { id: 6, name: "Euler product comparison", limit: secs(30), check: euler },
        Criterion { id: 7, name: "orbit norm compatibility", limit: None, check: orbit_norms },
        Criterion { id: 8, name: "division structure", limit: secs(30), check: division_structure },
        Criterion { id: 9, name: "Theorem A at level (0,2)", limit: secs(600), check: theorem_a },
        Criterion { id: 10, name: "global residue theorem", limit: None, check: residue_theorem },
        Criterion { id: 11, name: "determinism", limit: None, check: determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let verdict = match (&outcome, c.limit) {
            (Err(e), _) => format!("FAIL  {e:#}"),
            (Ok(_), Some(limit)) if elapsed > limit => format!("FAIL  took {elapsed:.2?}, limit {limit:?}"),
            (Ok(detail), _) => format!("PASS  {detail}"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {:>2} {:<28} {:>9.2?}  {verdict}", c.id, c.name, elapsed);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
