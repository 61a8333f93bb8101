//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use proxnet::attack::{critical_fraction, run_attack, AttackKind, AttackStrategy, QNormalization};
use proxnet::community::grid_like_ratio;
use proxnet::experiment::{
    cmd_experiment, run_experiment, ExperimentConfig, MeshSource, NullModel, ResultRecord,
};
use proxnet::graph::{betweenness, Graph};
use proxnet::null_models::{relocate_to_lattice, rewire_degree_preserving, RelocationSpec, RewireSpec};
use proxnet::proximity::{build_graph, build_gg, build_rng, check_planar_embedding, Construction, ProximityRule};
use proxnet::spatial::{lattice_points, place_uniform, BoundingBox, Placement, PointSet, SyntheticMesh};
use proxnet::stats::{anova_oneway, pearson};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.into_iter().collect();
    v.iter().sum::<f64>() / v.len() as f64
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn config(placements: &[Placement], attacks: &[AttackKind], seeds: u64) -> ExperimentConfig {
    ExperimentConfig {
        placements: placements.to_vec(),
        kinds: vec![ProximityRule::Rng, ProximityRule::Gg],
        sizes: vec![1024],
        attacks: attacks.to_vec(),
        null_models: vec![],
        seeds: (0..seeds).collect(),
        mesh: MeshSource::Synthetic(SyntheticMesh::default()),
        output_dir: "unused".into(),
        uni_snapped: false,
        construction: Construction::Delaunay,
        q_norm: QNormalization::ByN,
        rf_runs: 1,
        swaps_per_edge: 10,
        write_curves: false,
    }
}

fn select<'a>(
    records: &'a [ResultRecord],
    placement: Placement,
    kind: ProximityRule,
    attack: AttackKind,
) -> impl Iterator<Item = &'a ResultRecord> + 'a {
    records
        .iter()
        .filter(move |r| r.key.placement == placement && r.key.kind == kind && r.key.attack == attack)
}

fn geometry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sets = 120;
    for i in 0..sets {
        let n = rng.gen_range(3..=60);
        let raw = random_points(n, 10_000 + i);
        let pts = PointSet::new(raw.clone(), Placement::External, None).map_err(|e| e.to_string())?;
        let (gg, rn) = (build_gg(&pts), build_rng(&pts));
        let gg_edges: Vec<_> = gg.edges().collect();
        let rng_edges: Vec<_> = rn.edges().collect();
        if gg_edges != gabriel_oracle(&raw) || rng_edges != rng_oracle(&raw) {
            return Err(format!("set {i} (N={n}) differs from the literal oracle"));
        }
        if !rng_edges.iter().all(|&(u, v)| gg.has_edge(u, v)) {
            return Err(format!("set {i}: RNG not contained in GG"));
        }
        for g in [&gg, &rn] {
            if !check_planar_embedding(g).map_err(|e| e.to_string())?.planar {
                return Err(format!("set {i}: crossing edges"));
            }
        }
    }
    Ok(format!("{sets} point sets, N<=60, edge-for-edge equal, RNG within GG, planar"))
}

fn lattice_grid() -> Outcome {
    let pts = lattice_points(32, 500.0).map_err(|e| e.to_string())?;
    let rng = grid_like_ratio(&build_graph(&pts, ProximityRule::Rng, Construction::Literal));
    let gg = grid_like_ratio(&build_graph(&pts, ProximityRule::Gg, Construction::Literal));
    check(rng == 0.765625 && gg == 0.765625, format!("RNG {rng}, GG {gg}, want 0.765625"))
}

fn percolation() -> Outcome {
    let pts = lattice_points(64, 500.0).map_err(|e| e.to_string())?;
    let g = build_graph(&pts, ProximityRule::Rng, Construction::Delaunay);
    let qc = mean((0..20).map(|s| critical_fraction(&run_attack(&g, AttackStrategy::rf(s)), QNormalization::ByN).q_c));
    check(within(qc, 0.4073, 0.05), format!("mean q_c over 20 seeds {qc:.4}, want 0.4073 +/- 0.05"))
}

fn analytical(records: &[ResultRecord]) -> Outcome {
    let targets = [
        (ProximityRule::Rng, AttackKind::Rf, 0.205),
        (ProximityRule::Gg, AttackKind::Rf, 0.365),
        (ProximityRule::Rng, AttackKind::Id, 0.12),
        (ProximityRule::Gg, AttackKind::Id, 0.263),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (kind, attack, want) in targets {
        let runs: Vec<f64> = select(records, Placement::Uni, kind, attack).filter_map(|r| r.qc).collect();
        let got = mean(runs.iter().copied());
        ok &= runs.len() >= 20 && within(got, want, 0.05);
        parts.push(format!("{kind}/{attack} {got:.4} (want {want}, n={})", runs.len()));
    }
    check(ok, parts.join("; "))
}

fn average_degree(records: &[ResultRecord]) -> Outcome {
    let targets = [(ProximityRule::Rng, 2.50, 0.1), (ProximityRule::Gg, 3.86, 0.15)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (kind, want, tol) in targets {
        let k: Vec<f64> = select(records, Placement::Uni, kind, AttackKind::Rf).map(|r| r.metrics.avg_degree).collect();
        let got = mean(k.iter().copied());
        ok &= k.len() >= 10 && within(got, want, tol);
        parts.push(format!("{kind} <k> {got:.4} (want {want} +/- {tol}, n={})", k.len()));
    }
    check(ok, parts.join("; "))
}

fn oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..50 {
        let n = rng.gen_range(2..=30);
        let p = rng.gen_range(0.05..0.4);
        let g = random_graph(n, p, 600 + i);
        let (fast, slow) = (betweenness(&g), betweenness_oracle(&g));
        if let Some(v) = (0..n).find(|&v| (fast[v] - slow[v]).abs() > 1e-9) {
            return Err(format!("graph {i}: betweenness of node {v} is {} vs {}", fast[v], slow[v]));
        }
    }
    for i in 0..20 {
        let n = rng.gen_range(3..40);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| v * 0.3 + rng.gen_range(-10.0..10.0)).collect();
        let c = pearson(&x, &y).map_err(|e| e.to_string())?;
        let (r, p) = pearson_oracle(&x, &y);
        if (c.r - r).abs() > 1e-6 || (c.p - p).abs() > 1e-6 {
            return Err(format!("pearson sample {i}: ({}, {}) vs ({r}, {p})", c.r, c.p));
        }
        let groups: Vec<Vec<f64>> = (0..rng.gen_range(2..5))
            .map(|g| (0..rng.gen_range(2..9)).map(|_| g as f64 * 0.5 + rng.gen_range(0.0..3.0)).collect())
            .collect();
        let slices: Vec<&[f64]> = groups.iter().map(|g| g.as_slice()).collect();
        let a = anova_oneway(&slices).map_err(|e| e.to_string())?;
        let (f, p, eta) = anova_oracle(&groups);
        let fa = a.f.unwrap_or(f64::INFINITY);
        if (fa - f).abs() > 1e-6 * f.max(1.0) || (a.p - p).abs() > 1e-6 || (a.eta_squared - eta).abs() > 1e-6 {
            return Err(format!("anova sample {i}: F {fa} vs {f}, p {} vs {p}", a.p));
        }
    }
    Ok("50 graphs to 1e-9; 20 Pearson and 20 ANOVA samples to 1e-6".into())
}

fn null_models() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let n = rng.gen_range(4..60);
        let g = random_graph(n, rng.gen_range(0.05..0.5), 700 + i);
        if g.edge_count() < 2 {
            continue;
        }
        let (h, _) = rewire_degree_preserving(&g, RewireSpec::new(i)).map_err(|e| e.to_string())?;
        if h.degrees() != g.degrees() {
            return Err(format!("rewire input {i} changed the degree sequence"));
        }
    }
    let region = BoundingBox::new(0.0, 0.0, 1000.0, 1000.0).map_err(|e| e.to_string())?;
    let mut nonplanar = 0;
    for seed in 0..10 {
        let pts = place_uniform(&region, 1024, seed).map_err(|e| e.to_string())?;
        for rule in [ProximityRule::Rng, ProximityRule::Gg] {
            let g = build_graph(&pts, rule, Construction::Delaunay);
            let spec = RelocationSpec::for_nodes(1024, 500.0, seed).map_err(|e| e.to_string())?;
            let (h, report) = relocate_to_lattice(&g, spec).map_err(|e| e.to_string())?;
            let deviation = degree_deviation(&g, &h);
            if deviation != report.dropped_stubs {
                return Err(format!("relocation seed {seed}: deviation {deviation} vs dropped {}", report.dropped_stubs));
            }
            if !check_planar_embedding(&h).map_err(|e| e.to_string())?.planar {
                nonplanar += 1;
            }
        }
    }
    check(
        nonplanar > 0,
        format!("100 rewires keep degrees; 20 relocations account for dropped stubs, {nonplanar} non-planar"),
    )
}

/// Total shortfall of realized degrees against the requested sequence.
fn degree_deviation(before: &Graph, after: &Graph) -> usize {
    let total = |g: &Graph| g.degrees().iter().sum::<usize>();
    total(before) - total(after)
}

/// `records` holds all three attacks; `ordering` holds ID and RF over a
/// larger seed set, since their class means differ by less than the
/// seed-to-seed spread for some classes.
fn qualitative(records: &[ResultRecord], ordering: &[ResultRecord]) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let placements = [Placement::Pop, Placement::Inv, Placement::Uni];
    let mean_r = |p, k, a| mean(select(records, p, k, a).map(|r| r.r));
    for kind in [ProximityRule::Rng, ProximityRule::Gg] {
        let [pop, inv, uni] = placements.map(|p| mean_r(p, kind, AttackKind::Rb));
        let a = uni > pop && uni > inv;
        ok &= a;
        parts.push(format!("(a) {kind} R^RB Pop {pop:.4} Inv {inv:.4} Uni {uni:.4}"));
        for p in placements {
            let rb = mean_r(p, kind, AttackKind::Rb);
            let [id, rf] = [AttackKind::Id, AttackKind::Rf].map(|a| mean(select(ordering, p, kind, a).map(|r| r.r)));
            let c = rb < id && id < rf;
            ok &= c;
            parts.push(format!("(c) {kind}/{p} {rb:.4} < {id:.4} < {rf:.4}{}", if c { "" } else { " VIOLATED" }));
        }
    }
    let rb: Vec<&ResultRecord> = records.iter().filter(|r| r.key.attack == AttackKind::Rb).collect();
    let q: Vec<f64> = rb.iter().filter_map(|r| r.metrics.q).collect();
    let r: Vec<f64> = rb.iter().map(|r| r.r).collect();
    let corr = pearson(&q, &r).map_err(|e| e.to_string())?;
    ok &= corr.r < 0.0;
    parts.push(format!("(b) r(Q, R^RB) = {:.4} over {} networks", corr.r, q.len()));
    parts.push("RB means over 10 seeds, ID and RF means over 40".to_string());
    check(ok, parts.join("; "))
}

fn determinism(reference: &ExperimentConfig) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut small = config(&[Placement::Pop, Placement::Inv, Placement::Uni, Placement::Lattice], &[AttackKind::Rb, AttackKind::Id, AttackKind::Rf], 3);
    small.sizes = vec![100];
    small.null_models = vec![NullModel::Rewire, NullModel::Relocate];
    small.rf_runs = 3;
    small.write_curves = true;
    let mut bytes = Vec::new();
    for (name, cfg) in [("grid", &small), ("uniform", reference)] {
        let mut runs = Vec::new();
        for run in 0..2 {
            let mut c = cfg.clone();
            c.output_dir = dir.path().join(format!("{name}{run}"));
            cmd_experiment(&c).map_err(|e| e.to_string())?;
            runs.push(std::fs::read(c.output_dir.join("results.csv")).map_err(|e| e.to_string())?);
        }
        if runs[0] != runs[1] {
            return Err(format!("{name} config produced different results.csv bytes"));
        }
        bytes.push(runs[0].len());
    }
    Ok(format!("two configs rerun byte-identical ({} and {} bytes)", bytes[0], bytes[1]))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: usize, name: &str, start: Instant, outcome: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] criterion {id} {name}: {detail} ({secs:.1}s)");
    };

    let t = Instant::now();
    report(1, "geometry oracle equivalence", t, geometry());
    let t = Instant::now();
    report(2, "lattice grid-like ratio", t, lattice_grid());
    let t = Instant::now();
    report(3, "percolation reference", t, percolation());

    let t = Instant::now();
    let uniform_cfg = config(&[Placement::Uni], &[AttackKind::Id, AttackKind::Rf], 20);
    let uniform = run_experiment(&uniform_cfg).map(|o| o.records);
    match &uniform {
        Ok(records) => {
            report(4, "analytical thresholds", t, analytical(records));
            let t = Instant::now();
            report(5, "average degree", t, average_degree(records));
        }
        Err(e) => {
            report(4, "analytical thresholds", t, Err(e.to_string()));
            report(5, "average degree", t, Err(e.to_string()));
        }
    }

    let t = Instant::now();
    report(6, "betweenness and statistics oracles", t, oracles());
    let t = Instant::now();
    report(7, "null-model contracts", t, null_models());

    let t = Instant::now();
    let grid = config(
        &[Placement::Pop, Placement::Inv, Placement::Uni],
        &[AttackKind::Rb, AttackKind::Id, AttackKind::Rf],
        10,
    );
    let ordering = config(&[Placement::Pop, Placement::Inv, Placement::Uni], &[AttackKind::Id, AttackKind::Rf], 40);
    let outcome = run_experiment(&grid)
        .and_then(|o| run_experiment(&ordering).map(|w| (o, w)))
        .map_err(|e| e.to_string())
        .and_then(|(o, w)| {
            let failed = o.summary.failed_cells.len() + w.summary.failed_cells.len();
            if failed == 0 {
                qualitative(&o.records, &w.records)
            } else {
                Err(format!("{failed} failed cells"))
            }
        });
    report(8, "qualitative reproduction", t, outcome);

    let t = Instant::now();
    report(9, "determinism", t, determinism(&uniform_cfg));

    if failed == 0 {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
