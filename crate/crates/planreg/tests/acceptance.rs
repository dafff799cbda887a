//! Acceptance suite: one test per release criterion, each printing a single
//! PASS line on success (run with `--nocapture` to see them). Failures
//! panic with the criterion number.

use std::path::Path;
use std::process::Command;

use planreg::instances::{generate_instance, InstanceSpec};
use planreg::io;
use planreg_core::geom::{arc_rect_dist_max, arc_rect_dist_min, Arc, Point2, Rect, TAU};
use planreg_core::objective::trimmed_objective;
use planreg_core::queue::{cheap_bound, check_consistency, init_queue, update_queue};
use planreg_core::relax::relaxation_bound;
use planreg_core::{bnb, PointSet, RigidTransform2, SolverConfig, TransformBox, TrimConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, half_range: f64) -> PointSet {
    let pts = (0..n)
        .map(|_| {
            Point2::new(
                rng.gen_range(-half_range..half_range),
                rng.gen_range(-half_range..half_range),
            )
        })
        .collect();
    PointSet::new(pts).unwrap()
}

fn random_box(rng: &mut ChaCha8Rng, zr: f64, max_theta_width: f64) -> TransformBox {
    let x0 = rng.gen_range(-zr..zr * 0.5);
    let y0 = rng.gen_range(-zr..zr * 0.5);
    let wx = rng.gen_range(0.01..zr * 0.5);
    let wy = rng.gen_range(0.01..zr * 0.5);
    let t0 = rng.gen_range(0.0..TAU * 0.75);
    let wt = rng.gen_range(1e-3..max_theta_width.min(TAU - t0));
    TransformBox::new(
        Point2::new(x0, y0),
        Point2::new(x0 + wx, y0 + wy),
        t0,
        t0 + wt,
    )
    .unwrap()
}

fn random_transform_in(rng: &mut ChaCha8Rng, b: &TransformBox) -> RigidTransform2 {
    RigidTransform2::new(
        Point2::new(
            rng.gen_range(b.z_min.x..=b.z_max.x),
            rng.gen_range(b.z_min.y..=b.z_max.y),
        ),
        rng.gen_range(b.theta_min..=b.theta_max),
    )
}

/// Upper bound on the restricted minimum: objective at box corners, center
/// and random interior transforms.
fn sampled_min_objective(
    rng: &mut ChaCha8Rng,
    b: &TransformBox,
    src: &PointSet,
    dest: &PointSet,
    trim: TrimConfig,
    samples: usize,
) -> f64 {
    let mut best = f64::INFINITY;
    let mut eval = |t: &RigidTransform2| {
        let v = trimmed_objective(t, src, dest, trim).unwrap();
        if v < best {
            best = v;
        }
    };
    for &zx in &[b.z_min.x, b.z_max.x] {
        for &zy in &[b.z_min.y, b.z_max.y] {
            for &th in &[b.theta_min, b.theta_max] {
                eval(&RigidTransform2::new(Point2::new(zx, zy), th));
            }
        }
    }
    let (zc, tc) = b.center();
    eval(&RigidTransform2::new(zc, tc));
    for _ in 0..samples {
        eval(&random_transform_in(rng, b));
    }
    best
}

fn pass(criterion: u32, message: &str) {
    println!("criterion {criterion}: PASS — {message}");
}

// --- criterion 1: bound soundness -----------------------------------------

#[test]
fn criterion_1_bound_soundness() {
    let mut rng = rng(0xac1);
    let cases = 1000;
    for case in 0..cases {
        let src = random_points(&mut rng, 6, 3.0);
        let dest = random_points(&mut rng, 6, 3.0);
        let trim = TrimConfig { p: 4 };
        let bx = random_box(&mut rng, 3.0, TAU);
        let queues: Vec<_> = src.iter().map(|p| init_queue(&bx, *p, &dest)).collect();
        let sampled = sampled_min_objective(&mut rng, &bx, &src, &dest, trim, 10_000);

        // bounds and objective round through different arithmetic paths, so
        // equality cases can differ in the last ulp; anything beyond that
        // slack is a genuine violation
        let slack = 1e-12 * sampled.max(1.0);
        let phi_c = cheap_bound(&queues, trim);
        assert!(
            phi_c <= sampled + slack,
            "criterion 1 FAIL: case {case}, cheap bound {phi_c} > sampled min {sampled}"
        );
        if bx.theta_max - bx.theta_min < std::f64::consts::FRAC_PI_2 {
            let phi_r = relaxation_bound(&bx, &queues, &src, &dest, trim).unwrap();
            assert!(
                phi_r <= sampled + slack,
                "criterion 1 FAIL: case {case}, relaxation bound {phi_r} > sampled min {sampled}"
            );
        }
    }
    pass(
        1,
        &format!("no bound violation over {cases} (instance, box) pairs x 10^4 samples"),
    );
}

// --- criterion 2: arc/rect distance oracle agreement ----------------------

/// Distance profile along the arc parameter, minimized / maximized by dense
/// sampling plus golden-section refinement of the best bracket.
fn refined_extremum(arc: &Arc, rect: &Rect, maximize: bool) -> f64 {
    let eval = |t: f64| {
        let u = arc.point_at(t);
        if maximize {
            rect.vertices()
                .into_iter()
                .map(|v| u.dist_sq(v))
                .fold(0.0_f64, f64::max)
        } else {
            u.dist_sq(rect.clamp(u))
        }
    };
    let coarse = 4000;
    let step = arc.width() / coarse as f64;
    let mut best = f64::INFINITY;
    let mut best_t = arc.theta_min;
    for k in 0..=coarse {
        let t = arc.theta_min + step * k as f64;
        let v = if maximize { -eval(t) } else { eval(t) };
        if v < best {
            best = v;
            best_t = t;
        }
    }
    // golden-section search inside the winning bracket
    let (mut a, mut b) = (
        (best_t - step).max(arc.theta_min),
        (best_t + step).min(arc.theta_max),
    );
    let inv_phi = 0.618_033_988_749_894_9;
    for _ in 0..80 {
        let x1 = b - inv_phi * (b - a);
        let x2 = a + inv_phi * (b - a);
        let f1 = if maximize { -eval(x1) } else { eval(x1) };
        let f2 = if maximize { -eval(x2) } else { eval(x2) };
        if f1 < f2 {
            b = x2;
        } else {
            a = x1;
        }
    }
    eval(0.5 * (a + b))
}

#[test]
fn criterion_2_distance_oracle_agreement() {
    let mut rng = rng(0xac2);
    let cases = 500;
    for case in 0..cases {
        let radius = rng.gen_range(0.0..4.0);
        let t0 = rng.gen_range(-TAU..TAU);
        let w = rng.gen_range(1e-6..TAU);
        let arc = Arc::new(radius, t0, t0 + w);
        let cx = rng.gen_range(-4.0..4.0);
        let cy = rng.gen_range(-4.0..4.0);
        let rect = Rect::new(
            Point2::new(cx, cy),
            Point2::new(cx + rng.gen_range(0.0..3.0), cy + rng.gen_range(0.0..3.0)),
        );
        let olo = refined_extremum(&arc, &rect, false);
        let ohi = refined_extremum(&arc, &rect, true);
        let lo = arc_rect_dist_min(&arc, &rect);
        let hi = arc_rect_dist_max(&arc, &rect);
        // exact bound direction (up to refinement rounding), tight agreement
        assert!(
            lo <= olo + 1e-12,
            "criterion 2 FAIL: case {case}, min {lo} > oracle {olo}"
        );
        assert!(
            hi >= ohi - 1e-12,
            "criterion 2 FAIL: case {case}, max {hi} < oracle {ohi}"
        );
        assert!(
            olo - lo <= 1e-4,
            "criterion 2 FAIL: case {case}, min gap {}",
            olo - lo
        );
        assert!(
            hi - ohi <= 1e-4,
            "criterion 2 FAIL: case {case}, max gap {}",
            hi - ohi
        );
    }
    pass(
        2,
        &format!("min/max agree with the refined sampling oracle on {cases} pairs"),
    );
}

// --- criterion 3: queue equivalence ---------------------------------------

#[test]
fn criterion_3_queue_equivalence() {
    let mut rng = rng(0xac3);
    let chains = 500;
    for chain in 0..chains {
        let dest = random_points(&mut rng, 8, 3.0);
        let p = Point2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let mut bx =
            TransformBox::new(Point2::new(-3.0, -3.0), Point2::new(3.0, 3.0), 0.0, TAU).unwrap();
        let mut q = init_queue(&bx, p, &dest);
        for depth in 0..5 {
            let (lo, hi) = bx.split(1.0).unwrap();
            let (qlo, _) = update_queue(&lo, &q, p, &dest);
            let (qhi, _) = update_queue(&hi, &q, p, &dest);
            let pick_lo = rng.gen_bool(0.5);
            bx = if pick_lo { lo } else { hi };
            q = if pick_lo { qlo } else { qhi };

            assert!(
                check_consistency(&q, &bx, p, &dest).is_consistent(),
                "criterion 3 FAIL: chain {chain} depth {depth} inconsistent"
            );
            let fresh = init_queue(&bx, p, &dest);
            let (a, b) = (q.head().d, fresh.head().d);
            assert!(
                (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300),
                "criterion 3 FAIL: chain {chain} depth {depth} head {a} vs fresh {b}"
            );
        }
    }
    pass(
        3,
        &format!("{chains} split chains of depth 5: consistent, heads match fresh init"),
    );
}

// --- criterion 4: error-scaling laws --------------------------------------

#[test]
fn criterion_4_error_scaling_laws() {
    let mut rng = rng(0xac4);
    let instances = 12;
    let mut cheap_ok = 0;
    let mut relax_ok = 0;
    for _ in 0..instances {
        let src = random_points(&mut rng, 8, 2.0);
        let dest = random_points(&mut rng, 8, 2.0);
        let trim = TrimConfig { p: 6 };
        let scale = src.max_norm();
        let zc = Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let tc = rng.gen_range(0.5..1.5);

        let mut gaps_c = Vec::new();
        let mut gaps_r = Vec::new();
        for k in 0..7 {
            let h = 0.4 * 0.5_f64.powi(k);
            let ht = h / scale;
            let bx = TransformBox::new(
                Point2::new(zc.x - h, zc.y - h),
                Point2::new(zc.x + h, zc.y + h),
                tc - ht,
                tc + ht,
            )
            .unwrap();
            let queues: Vec<_> = src.iter().map(|p| init_queue(&bx, *p, &dest)).collect();
            let sampled = sampled_min_objective(&mut rng, &bx, &src, &dest, trim, 20_000);
            gaps_c.push((sampled - cheap_bound(&queues, trim)).max(0.0));
            let phi_r = relaxation_bound(&bx, &queues, &src, &dest, trim).unwrap();
            gaps_r.push((sampled - phi_r).max(0.0));
        }
        let window = |gaps: &[f64], lo: f64, hi: f64| {
            let ratios: Vec<f64> = gaps.windows(2).map(|w| w[0] / w[1].max(1e-300)).collect();
            ratios
                .windows(4)
                .any(|w| w.iter().all(|r| (lo..=hi).contains(r)))
        };
        if window(&gaps_c, 1.5, 3.0) {
            cheap_ok += 1;
        }
        if window(&gaps_r, 2.5, 6.0) {
            relax_ok += 1;
        }
    }
    assert!(
        cheap_ok >= 10,
        "criterion 4 FAIL: linear law held on only {cheap_ok}/{instances} instances"
    );
    assert!(
        relax_ok >= 10,
        "criterion 4 FAIL: quadratic law held on only {relax_ok}/{instances} instances"
    );
    pass(4, &format!(
        "linear law on {cheap_ok}/{instances}, quadratic law on {relax_ok}/{instances} instances over 4+ halvings"
    ));
}

// --- criterion 5: global recovery -----------------------------------------

fn benchmark_root_box() -> TransformBox {
    TransformBox::new(Point2::new(-10.0, -10.0), Point2::new(10.0, 10.0), 0.0, TAU).unwrap()
}

fn angle_error(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % TAU;
    d.min(TAU - d)
}

#[test]
fn criterion_5_global_recovery() {
    for seed in 0..10 {
        let inst = generate_instance(&InstanceSpec::new(50, 1e-3, seed)).unwrap();
        let mut cfg = SolverConfig::new(benchmark_root_box(), 40);
        cfg.epsilon = 1e-4;
        cfg.delta = 0.1;
        let res = bnb::solve(&inst.src, &inst.dest, &cfg).unwrap();
        assert!(res.certified, "criterion 5 FAIL: seed {seed} uncertified");
        let dz = (res.transform.z - inst.true_transform.z).norm();
        let dth = angle_error(res.transform.theta, inst.true_transform.theta);
        assert!(
            dz <= 1e-2 && dth <= 1e-2,
            "criterion 5 FAIL: seed {seed} |dz| = {dz}, |dtheta| = {dth}"
        );
    }
    pass(
        5,
        "10/10 seeds certified with pose error within 1e-2 (n=50, sigma=1e-3)",
    );
}

// --- criterion 6: ablation A (relaxation bound) ---------------------------

#[test]
fn criterion_6_relaxation_ablation() {
    let mut wins = 0;
    for seed in 0..10 {
        let inst = generate_instance(&InstanceSpec::new(50, 1e-2, seed)).unwrap();
        let mut cfg = SolverConfig::new(benchmark_root_box(), 40);
        cfg.epsilon = 1e-4;
        cfg.delta = 0.1;
        let with_relax = bnb::solve(&inst.src, &inst.dest, &cfg).unwrap();

        // the cheap-bound-only solver is orders of magnitude slower here, so
        // cap it: a capped run has already created more nodes than the
        // relaxation run, which decides the strict comparison either way
        cfg.delta = 0.0;
        cfg.max_iterations = with_relax.stats.nodes_created + 1;
        let without_relax = bnb::solve(&inst.src, &inst.dest, &cfg).unwrap();

        if with_relax.stats.nodes_created < without_relax.stats.nodes_created {
            wins += 1;
        }
    }
    assert!(
        wins >= 8,
        "criterion 6 FAIL: delta=0.1 created fewer nodes on only {wins}/10 seeds"
    );
    pass(
        6,
        &format!("delta=0.1 created strictly fewer nodes than delta=0 on {wins}/10 seeds"),
    );
}

// --- criterion 7: ablation B (candidate queue) ----------------------------

#[test]
fn criterion_7_queue_ablation() {
    for seed in 0..10 {
        let inst = generate_instance(&InstanceSpec::new(30, 1e-2, seed)).unwrap();
        let mut cfg = SolverConfig::new(benchmark_root_box(), 24);
        cfg.epsilon = 1e-4;
        cfg.delta = 0.1;
        let incremental = bnb::solve(&inst.src, &inst.dest, &cfg).unwrap();
        cfg.incremental_queues = false;
        let fresh = bnb::solve(&inst.src, &inst.dest, &cfg).unwrap();
        assert!(
            incremental.stats.dmin_evaluations < fresh.stats.dmin_evaluations,
            "criterion 7 FAIL: seed {seed}, incremental {} vs fresh {}",
            incremental.stats.dmin_evaluations,
            fresh.stats.dmin_evaluations
        );
    }
    pass(
        7,
        "queue updates used strictly fewer d_min evaluations on 10/10 seeds (n=30)",
    );
}

// --- criterion 8: grid-search equivalence at tiny scale -------------------

#[test]
fn criterion_8_grid_oracle_equivalence() {
    let mut rng = rng(0xac8);
    for case in 0..20 {
        let src = random_points(&mut rng, 5, 2.0);
        let dest = random_points(&mut rng, 5, 2.0);
        let trim = TrimConfig { p: 4 };
        let zc = Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let tc = rng.gen_range(0.5..2.0);
        let h = 0.05;
        let root = TransformBox::new(
            Point2::new(zc.x - h, zc.y - h),
            Point2::new(zc.x + h, zc.y + h),
            tc - h,
            tc + h,
        )
        .unwrap();

        let mut cfg = SolverConfig::new(root, trim.p);
        cfg.epsilon = 1e-6;
        let res = bnb::solve(&src, &dest, &cfg).unwrap();
        assert!(res.certified, "criterion 8 FAIL: case {case} uncertified");

        // 100^3 = 10^6 grid cells, evaluated at cell centers
        let cells = 100;
        let mut grid_min = f64::INFINITY;
        for i in 0..cells {
            for j in 0..cells {
                for k in 0..cells {
                    let frac = |n: usize| (n as f64 + 0.5) / cells as f64;
                    let t = RigidTransform2::new(
                        Point2::new(
                            root.z_min.x + 2.0 * h * frac(i),
                            root.z_min.y + 2.0 * h * frac(j),
                        ),
                        root.theta_min + 2.0 * h * frac(k),
                    );
                    grid_min = grid_min.min(trimmed_objective(&t, &src, &dest, trim).unwrap());
                }
            }
        }
        assert!(
            res.objective <= grid_min + 1e-12,
            "criterion 8 FAIL: case {case} solver {} above grid {grid_min}",
            res.objective
        );
        // discretization error: within half a cell diagonal of the true
        // minimizer, a transformed point moves by at most
        // step * (1 + max source norm), shifting each squared residual by
        // at most 2 * move * sqrt(residual) + move^2
        let step = 2.0 * h / cells as f64;
        let reach = step * (1.0 + src.max_norm());
        let worst = grid_min.sqrt() + reach;
        let tol = 2.0 * trim.p as f64 * reach * worst;
        assert!(
            grid_min - res.objective <= tol,
            "criterion 8 FAIL: case {case} grid {grid_min} vs solver {} (tol {tol})",
            res.objective
        );
    }
    pass(
        8,
        "solver matches a 10^6-cell grid search within discretization error on 20 instances",
    );
}

// --- criterion 9: pairwise + map workflow ---------------------------------

fn planreg_bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_planreg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_synthetic_scans(dir: &Path, count: usize, seed: u64) -> Vec<RigidTransform2> {
    let mut rng = rng(seed);
    let master: Vec<Point2> = (0..40)
        .map(|_| Point2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
        .collect();
    let mut poses = vec![RigidTransform2::identity()];
    for _ in 1..count {
        poses.push(RigidTransform2::new(
            Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            rng.gen_range(0.0..TAU),
        ));
    }
    for (i, pose) in poses.iter().enumerate() {
        let inv = pose.inverse();
        let pts: Vec<Point2> = master
            .iter()
            .map(|w| {
                inv.apply(*w) + Point2::new(rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3))
            })
            .collect();
        io::write_point_set(
            &PointSet::new(pts).unwrap(),
            dir.join(format!("scan_{i}.txt")),
        )
        .unwrap();
    }
    poses
}

#[test]
fn criterion_9_pairwise_map_workflow() {
    let dir = tempfile::tempdir().unwrap();
    let scans = dir.path().join("scans");
    std::fs::create_dir(&scans).unwrap();
    let truth = write_synthetic_scans(&scans, 4, 0xac9);

    let graph_path = dir.path().join("graph.json");
    let out = planreg_bin(&[
        "pairwise",
        "--scans",
        scans.to_str().unwrap(),
        "--out-graph",
        graph_path.to_str().unwrap(),
        "--eps",
        "1e-3",
    ]);
    assert!(
        out.status.success(),
        "criterion 9 FAIL: pairwise exited {:?}\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );

    let poses_path = dir.path().join("poses.json");
    let svg_path = dir.path().join("map.svg");
    let out = planreg_bin(&[
        "map",
        "--graph",
        graph_path.to_str().unwrap(),
        "--reference",
        "0",
        "--out-poses",
        poses_path.to_str().unwrap(),
        "--plot",
        svg_path.to_str().unwrap(),
        "--scans",
        scans.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "criterion 9 FAIL: map exited {:?}\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );

    let poses = io::read_poses(&poses_path).unwrap();
    let probe = Point2::new(1.0, -2.0);
    for (i, pose) in poses.iter().enumerate() {
        let err = pose.apply(probe).dist_sq(truth[i].apply(probe)).sqrt();
        assert!(
            err <= 1e-2,
            "criterion 9 FAIL: composed pose {i} off by {err}"
        );
    }
    assert!(std::fs::read_to_string(&svg_path)
        .unwrap()
        .starts_with("<?xml"));
    pass(
        9,
        "pairwise + map on 4 synthetic scans recovered all poses within 1e-2",
    );
}
