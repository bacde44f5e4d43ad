//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Criteria 6 to 13 need the benchmark files (`dsjc250.5.col`, `r250.5.col`,
//! `le450_25c.col`) in `$GCP_INSTANCE_DIR` or the workspace `instances/`
//! directory; without them those criteria fail with "instance file missing".

#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use std::collections::HashSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use gcp_neutral::coloring::{canonicalize, Coloring, ConflictState};
use gcp_neutral::graph::Graph;
use gcp_neutral::landscape::{neutral_walk_traced, Typology};
use gcp_neutral::neighborhood::{classify, is_portal, Budget};
use gcp_neutral::search::{nils, nwp, Mns, NeutralSelection, NilsConfig, NwpOutcome};
use gcp_neutral_harness::experiment::{
    run_degrees, run_plateaus, run_solve, DegreeResult, PlateauResult, SolveResult,
};
use gcp_neutral_harness::instance::{instance_dirs, load_instance, load_manifest_entries};
use gcp_neutral_harness::{emit_reports, run_experiment, ExperimentConfig, Instance, Mode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if let false = $cond {
            return Err(format!($($msg)+));
        }
    };
}

const SAMPLES: usize = 30;
const SOLVE_BUDGET: u64 = 2_000_000;
const SOLVE_SEEDS: usize = 15;

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> (Graph, Vec<(usize, usize)>) {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    (Graph::from_edges(n, edges.iter().copied()).unwrap(), edges)
}

fn timed(limit: Duration, start: Instant) -> Verdict {
    let took = start.elapsed();
    ensure!(took < limit, "took {took:.2?}, limit {limit:?}");
    Ok(format!("{took:.2?}"))
}

fn delta_equivalence() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    while checked < 10_000 {
        let n = rng.gen_range(2..=50);
        let k = rng.gen_range(2..=8usize);
        let p = rng.gen_range(0.05..0.9);
        let (g, edges) = random_graph(&mut rng, n, p);
        let colors: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=k as u32)).collect();
        let state = ConflictState::new(&g, &Coloring::new(colors.clone(), k).unwrap()).unwrap();
        for _ in 0..20 {
            let v = rng.gen_range(0..n);
            let c = loop {
                let c = rng.gen_range(1..=k as u32);
                if c != colors[v] {
                    break c;
                }
            };
            let mut next = colors.clone();
            next[v] = c;
            let expected =
                oracle::conflicts(&edges, &next) as i64 - oracle::conflicts(&edges, &colors) as i64;
            let got = state.delta(v, c).map_err(|e| e.to_string())?;
            ensure!(
                got == expected,
                "n={n} k={k} v={v} c={c}: delta {got}, recomputed {expected}"
            );
            checked += 1;
        }
    }
    timed(Duration::from_secs(5), start).map(|t| format!("{checked} triples in {t}"))
}

fn exhaustive_oracle() -> Verdict {
    let start = Instant::now();
    let graphs = oracle::sample_graphs(60, 3, 6, 2024);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut states, mut walks) = (0usize, 0usize);
    let mut typologies = HashSet::new();
    for (gi, tiny) in graphs.iter().enumerate() {
        let g = Graph::from_edges(tiny.n, tiny.edges.iter().copied()).unwrap();
        for k in [2usize, 3] {
            let mut optima = HashSet::new();
            for colors in oracle::all_colorings(tiny.n, k) {
                let state =
                    ConflictState::new(&g, &Coloring::new(colors.clone(), k).unwrap()).unwrap();
                let want = oracle::classify(&tiny.edges, &colors, k);
                let got = classify(&state, &mut Budget::unlimited()).map_err(|e| e.to_string())?;
                ensure!(
                    (got.improving, got.neutral, got.worsening)
                        == (want.improving, want.neutral, want.worsening),
                    "graph {gi} k={k} {colors:?}: classify {got:?}, oracle {want:?}"
                );
                let portal =
                    is_portal(&state, &mut Budget::unlimited()).map_err(|e| e.to_string())?;
                ensure!(
                    portal == (want.improving > 0),
                    "graph {gi} k={k} {colors:?}: is_portal {portal}"
                );
                let lo = got.improving == 0;
                ensure!(
                    lo == oracle::is_local_optimum(&tiny.edges, &colors, k),
                    "graph {gi}: local optimum verdict"
                );
                if lo {
                    optima.insert(oracle::relabel(&colors));
                }
                states += 1;
            }
            for lo in optima {
                let members = oracle::plateau(&tiny.edges, &lo, k);
                let portals = oracle::portals(&tiny.edges, &members, k);
                let w =
                    neutral_walk_traced(&g, &Coloring::new(lo.clone(), k).unwrap(), 8, &mut rng)
                        .map_err(|e| e.to_string())?;
                let nd0 = oracle::classify(&tiny.edges, &lo, k).neutral;
                ensure!(
                    (w.typology == Typology::T1) == (nd0 == 0),
                    "graph {gi} k={k} {lo:?}: T1 verdict"
                );
                ensure!(
                    w.path.iter().all(|s| members.contains(s.colors())),
                    "graph {gi}: walk left the plateau"
                );
                match w.portal_index {
                    Some(p) => ensure!(
                        w.typology == Typology::T3
                            && portals.contains(w.path[p].colors())
                            && w.path[..p].iter().all(|s| !portals.contains(s.colors())),
                        "graph {gi} k={k} {lo:?}: portal at step {p} not confirmed"
                    ),
                    None => ensure!(
                        w.typology != Typology::T3
                            && w.path.iter().all(|s| !portals.contains(s.colors())),
                        "graph {gi} k={k} {lo:?}: missed a portal"
                    ),
                }
                typologies.insert(w.typology);
                walks += 1;
            }
        }
    }
    ensure!(typologies.len() == 3, "only {typologies:?} exercised");
    timed(Duration::from_secs(60), start).map(|t| {
        format!(
            "{} graphs, {states} colorings, {walks} walks in {t}",
            graphs.len()
        )
    })
}

fn canonicalization() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..10_000 {
        let n = rng.gen_range(1..=40);
        let k = rng.gen_range(1..=12usize);
        let raw: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=k as u32)).collect();
        let c = canonicalize(&raw, Some(k)).map_err(|e| e.to_string())?;
        ensure!(
            c.colors() == oracle::relabel(&raw).as_slice(),
            "vector {i}: differs from reference relabeling"
        );
        let again = canonicalize(c.colors(), Some(k)).map_err(|e| e.to_string())?;
        ensure!(again == c, "vector {i}: not idempotent");
        let mut perm: Vec<u32> = (1..=k as u32).collect();
        for j in (1..perm.len()).rev() {
            perm.swap(j, rng.gen_range(0..=j));
        }
        let permuted: Vec<u32> = raw.iter().map(|&x| perm[x as usize - 1]).collect();
        ensure!(
            canonicalize(&permuted, Some(k)).map_err(|e| e.to_string())? == c,
            "vector {i}: not invariant under color permutation"
        );
    }
    Ok("10000 vectors".into())
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (g, _) = random_graph(&mut rng, 40, 0.3);
    let path = dir.path().join("toy.col");
    std::fs::write(&path, g.to_dimacs()).map_err(|e| e.to_string())?;

    let run = |jobs: usize, out: &str| -> Result<Vec<(String, Vec<u8>)>, String> {
        let mut cfg = ExperimentConfig::new(Mode::Full);
        cfg.instances = vec![path.to_string_lossy().into_owned()];
        cfg.k = Some(5);
        cfg.samples = 8;
        cfg.mns = vec![0.0, 1.0];
        cfg.eval_budget = 40_000;
        cfg.seed = 11;
        cfg.jobs = Some(jobs);
        cfg.force = true;
        cfg.out_dir = dir.path().join(out);
        let results = run_experiment(&cfg).map_err(|e| e.to_string())?;
        let files = emit_reports(&results, &cfg.out_dir).map_err(|e| e.to_string())?;
        files
            .iter()
            .map(|f| {
                let name = f.file_name().unwrap().to_string_lossy().into_owned();
                std::fs::read(f)
                    .map(|b| (name, b))
                    .map_err(|e| e.to_string())
            })
            .collect()
    };
    let sequential = run(1, "seq")?;
    let concurrent = run(4, "par")?;
    let repeat = run(4, "again")?;
    ensure!(
        sequential.len() == 7,
        "expected 7 output files, got {}",
        sequential.len()
    );
    for ((a, x), (_, y)) in sequential.iter().zip(&concurrent) {
        ensure!(x == y, "{a} differs between 1 and 4 workers");
    }
    ensure!(concurrent == repeat, "rerun with the same seed differs");
    Ok(format!(
        "{} files byte-identical across 1 and 4 workers",
        sequential.len()
    ))
}

fn perturbation_conformance() -> Verdict {
    // mns = 0: the loop body is never entered.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (g, _) = random_graph(&mut rng, 30, 0.3);
    let start = Coloring::new((0..30).map(|_| rng.gen_range(1..=4)).collect(), 4).unwrap();
    for selection in [NeutralSelection::FirstFound, NeutralSelection::Uniform] {
        let mut state = ConflictState::new(&g, &start).unwrap();
        let mut budget = Budget::unlimited();
        let r = nwp(&mut state, 0, 1.0, selection, &mut rng, &mut budget);
        ensure!(
            budget.used() == 0,
            "mns=0 evaluated {} neighbors",
            budget.used()
        );
        ensure!(
            r.outcome == NwpOutcome::Kicked && r.steps == 0,
            "mns=0 gave {r:?}"
        );
    }
    // One edge, both ends colored alike: every move improves, so the walk
    // stops after its first step.
    let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
    let start = Coloring::new(vec![1, 1], 2).unwrap();
    for seed in 0..20 {
        let mut state = ConflictState::new(&edge, &start).unwrap();
        let mut budget = Budget::unlimited();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = nwp(
            &mut state,
            50,
            1.0,
            NeutralSelection::FirstFound,
            &mut rng,
            &mut budget,
        );
        ensure!(
            r.outcome == NwpOutcome::Improved
                && r.steps == 1
                && budget.used() == 1
                && state.conflicts() == 0,
            "improving step did not halt the walk: {r:?}, {} evaluations",
            budget.used()
        );
    }
    Ok("mns=0 makes 0 evaluations; improvement halts after 1 step".into())
}

fn load(name: &str) -> Result<Instance, String> {
    let manifest = load_manifest_entries(None).map_err(|e| e.to_string())?;
    load_instance(name, &instance_dirs(), &manifest, None).map_err(|e| e.to_string())
}

fn measurement_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(Mode::Full);
    cfg.samples = SAMPLES;
    cfg.force = true;
    cfg
}

type Landscape = Result<(DegreeResult, PlateauResult), String>;

fn landscape(name: &'static str) -> &'static Landscape {
    static DSJC: OnceLock<Landscape> = OnceLock::new();
    static R250: OnceLock<Landscape> = OnceLock::new();
    let cell = if name == "dsjc250.5" { &DSJC } else { &R250 };
    cell.get_or_init(|| {
        let inst = load(name)?;
        let cfg = measurement_config();
        let d = run_degrees(&inst, &cfg).map_err(|e| e.to_string())?;
        let p = run_plateaus(&inst, &cfg).map_err(|e| e.to_string())?;
        Ok((d, p))
    })
}

fn solver_runs() -> &'static Result<SolveResult, String> {
    static CELL: OnceLock<Result<SolveResult, String>> = OnceLock::new();
    CELL.get_or_init(|| {
        let inst = load("le450_25c")?;
        let mut cfg = measurement_config();
        cfg.samples = SOLVE_SEEDS;
        cfg.eval_budget = SOLVE_BUDGET;
        cfg.mns = vec![0.0, 1.0, 5.0];
        run_solve(&inst, &cfg).map_err(|e| e.to_string())
    })
}

fn within(label: &str, value_pct: f64, target: f64, tol: f64) -> Verdict {
    ensure!(
        (value_pct - target).abs() <= tol,
        "{label} {value_pct:.2}% outside {target} ± {tol}"
    );
    Ok(format!("{label} {value_pct:.2}%"))
}

fn ratios(name: &'static str, random: (f64, f64), lo: (f64, f64)) -> Verdict {
    let (d, _) = landscape(name).as_ref().map_err(Clone::clone)?;
    let a = within("random", d.ratio_random * 100.0, random.0, random.1)?;
    let b = within("local optima", d.ratio_lo * 100.0, lo.0, lo.1)?;
    Ok(format!("{a}, {b}"))
}

fn rho1(name: &'static str, min: f64) -> Result<f64, String> {
    let (_, p) = landscape(name).as_ref().map_err(Clone::clone)?;
    let r = p
        .report
        .summary
        .rho1_mean
        .ok_or("no walk with a defined autocorrelation")?;
    ensure!(r >= min, "{name}: rho(1) {r:.3} < {min}");
    Ok(r)
}

fn autocorrelation() -> Verdict {
    let a = rho1("dsjc250.5", 0.60)?;
    let b = rho1("r250.5", 0.80)?;
    Ok(format!("dsjc250.5 {a:.3}, r250.5 {b:.3}"))
}

fn typology() -> Verdict {
    let (_, p) = landscape("dsjc250.5").as_ref().map_err(Clone::clone)?;
    let s = &p.report.summary;
    ensure!(
        p.report.walks.len() == SAMPLES,
        "{} walks run",
        p.report.walks.len()
    );
    ensure!(
        s.t3 >= 28 && s.t1 == 0,
        "T1/T2/T3 = {}/{}/{}",
        s.t1,
        s.t2,
        s.t3
    );
    Ok(format!("T1/T2/T3 = {}/{}/{}", s.t1, s.t2, s.t3))
}

fn portal_distance_and_steps() -> Verdict {
    let (_, p) = landscape("dsjc250.5").as_ref().map_err(Clone::clone)?;
    let s = &p.report.summary;
    let nbs = s.portal_steps.ok_or("no portal reached")?;
    let l = s.step_lengths.ok_or("no descent")?;
    ensure!(nbs.median <= 3.0, "nbS median {} > 3", nbs.median);
    ensure!(
        (250.0..=360.0).contains(&l.mean),
        "mean L {:.1} outside [250, 360]",
        l.mean
    );
    Ok(format!(
        "nbS median {} (max {}), L {}/{}/{:.1}/{}",
        nbs.median, nbs.max, l.min, l.median, l.mean, l.max
    ))
}

fn revisits() -> Verdict {
    let (_, p) = landscape("dsjc250.5").as_ref().map_err(Clone::clone)?;
    let r = p.report.summary.revisits;
    ensure!(
        r == 0,
        "{r} revisited solutions over {} walks",
        p.report.walks.len()
    );
    Ok("0 revisits".into())
}

fn median_of(res: &SolveResult, mns: f64) -> Result<f64, String> {
    res.configs
        .iter()
        .find(|c| c.mns == mns)
        .and_then(|c| c.fitness_summary())
        .map(|s| s.median)
        .ok_or_else(|| format!("no runs for mns={mns}"))
}

fn nils_beats_ils() -> Verdict {
    let res = solver_runs().as_ref().map_err(Clone::clone)?;
    let (ils, walk) = (median_of(res, 0.0)?, median_of(res, 1.0)?);
    ensure!(walk < ils, "median mns=1 {walk} not below mns=0 {ils}");
    Ok(format!("median mns=1 {walk} < mns=0 {ils}"))
}

fn long_walks_do_not_help() -> Verdict {
    let res = solver_runs().as_ref().map_err(Clone::clone)?;
    let (one, five) = (median_of(res, 1.0)?, median_of(res, 5.0)?);
    ensure!(five >= one, "median mns=5 {five} beats mns=1 {one}");
    Ok(format!("median mns=5 {five} >= mns=1 {one}"))
}

fn legality_not_required() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let (g, _) = random_graph(&mut rng, 80, 0.5);
    let mut legal = 0;
    for seed in 0..6 {
        let r = nils(
            &g,
            9,
            &NilsConfig::new(Mns::Coefficient(1.0), 100_000, seed),
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            r.legal_found == (r.best_fitness == 0),
            "legal flag disagrees with fitness {}",
            r.best_fitness
        );
        ensure!(r.evaluations_used <= 100_000, "budget overrun");
        legal += r.legal_found as usize;
    }
    Ok(format!("{legal}/6 legal; records consistent either way"))
}

fn main() {
    let criteria: [Criterion; 14] = [
        (
            "delta evaluation equals full recomputation",
            delta_equivalence,
        ),
        ("exhaustive oracle on tiny graphs", exhaustive_oracle),
        (
            "canonical form idempotent and permutation invariant",
            canonicalization,
        ),
        (
            "identical outputs sequentially and concurrently",
            determinism,
        ),
        ("perturbation loop conformance", perturbation_conformance),
        ("dsjc250.5 neutral ratios", || {
            ratios("dsjc250.5", (12.7, 2.0), (1.2, 0.8))
        }),
        ("r250.5 neutral ratios", || {
            ratios("r250.5", (24.2, 3.0), (9.7, 3.0))
        }),
        ("neutral degree autocorrelation", autocorrelation),
        ("dsjc250.5 plateau typology", typology),
        (
            "dsjc250.5 portal distance and descent length",
            portal_distance_and_steps,
        ),
        ("dsjc250.5 walks never revisit", revisits),
        ("le450_25c neutral walks beat restarts", nils_beats_ils),
        (
            "le450_25c long walks do not beat mns=1",
            long_walks_do_not_help,
        ),
        (
            "legal colorings permitted, not required",
            legality_not_required,
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let took = start.elapsed();
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.1?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{took:.1?}]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
