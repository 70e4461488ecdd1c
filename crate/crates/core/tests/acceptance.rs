//! Acceptance criteria 1 to 13. Each criterion prints one PASS/FAIL line to
//! stderr (bypassing the test harness capture). Sub-checks that cannot hold
//! as stated are listed in `KNOWN_UNATTAINABLE`; they must keep failing, and
//! everything else must pass. Criterion 13 is reported only.

use std::io::Write;
use std::time::{Duration, Instant};

use itertools::Itertools;
use levelgraph::catalog;
use levelgraph::lagrange;
use levelgraph::levelset;
use levelgraph::morse;
use levelgraph::poly::Polynomial;
use levelgraph::rational::{int, ratio};
use levelgraph::refinement;
use levelgraph::sard;
use levelgraph::spectral::{self, NodalOptions, DEFAULT_TOL};
use levelgraph::topology::{self, DEFAULT_BUDGET};
use levelgraph::variety::{self, Domain, VarietyOptions};
use levelgraph::{Rational, SimplicialGraph, Vertex, VertexFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EIGEN_TOL: f64 = 1e-8;
const HUB_TOL: f64 = 1e-8;
const SPECTRA_TIME: Duration = Duration::from_secs(1);
const SARD_TIME: Duration = Duration::from_secs(60);
const VARIETY_TIME: Duration = Duration::from_secs(120);
const SARD_TRIALS: usize = 50;
const RANDOM_FUNCTIONS: u64 = 20;
const MC_SAMPLES: usize = 10_000;
const MC_SIGMAS: f64 = 3.0;
/// Floor for the Monte Carlo comparison when the sample variance is zero.
const MC_FLOOR: f64 = 1e-12;

/// (criterion, sub-check, reason)
const KNOWN_UNATTAINABLE: &[(u32, &str, &str)] = &[
    (3, "literal extended values", "the listed 35/3 at the triangle (2,3,5) is (1+15+17)/3 = 11"),
    (
        10,
        "max-rank pass implies 1-graph",
        "a tetrahedron split 1|3 by f and 2|2 by g passes the rank test but gives a degree-3 locus vertex",
    ),
];

struct Check {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn check(name: &'static str, ok: bool, detail: impl Into<String>) -> Check {
    Check { name, ok, detail: detail.into() }
}

struct Outcome {
    id: u32,
    title: &'static str,
    checks: Vec<Check>,
    elapsed: Duration,
}

fn line(text: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{text}");
}

fn random_level(f: &VertexFunction, rng: &mut ChaCha8Rng) -> Rational {
    let r = f.range();
    let gap = rng.gen_range(0..r.len() - 1);
    let t = ratio(rng.gen_range(1..100), 100);
    &r[gap] + (&r[gap + 1] - &r[gap]) * t
}

fn middle_level(f: &VertexFunction) -> Rational {
    f.gap_midpoint(f.range().len() / 2 - 1).unwrap()
}

fn sixteen_cell() -> SimplicialGraph {
    catalog::cross_polytope(3).unwrap()
}

fn random_three_sphere(seed: u64) -> SimplicialGraph {
    catalog::suspension(&catalog::random_sphere(seed, 8))
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn criterion_1() -> Vec<Check> {
    let start = Instant::now();
    let octa = spectral::spectrum(&catalog::octahedron_mirrored(), DEFAULT_TOL).unwrap();
    let wheel = spectral::spectrum(&catalog::wheel(7).unwrap(), DEFAULT_TOL).unwrap();
    let elapsed = start.elapsed();
    vec![
        check(
            "octahedron spectrum",
            close(&octa.eigenvalues, &[0.0, 4.0, 4.0, 4.0, 6.0, 6.0], EIGEN_TOL),
            format!("{:?}", octa.eigenvalues),
        ),
        check(
            "wheel(7) spectrum",
            close(&wheel.eigenvalues, &[0.0, 2.0, 2.0, 4.0, 4.0, 5.0, 7.0], EIGEN_TOL),
            format!("{:?}", wheel.eigenvalues),
        ),
        check("runtime", elapsed < SPECTRA_TIME, format!("{elapsed:?}")),
    ]
}

fn criterion_2() -> Vec<Check> {
    let g = catalog::octahedron_mirrored();
    let f2 = VertexFunction::from_ints(&[-1, -2, -3, 3, 2, 1]);
    let f3 = VertexFunction::from_ints(&[1, 2, -3, -3, 2, 1]);
    let s2 = levelset::level_surface(&g, &f2, &int(0)).unwrap();
    let s3 = levelset::level_surface(&g, &f3, &int(0)).unwrap();
    let v2 = topology::is_dgraph(&s2.graph, 1, DEFAULT_BUDGET);
    let v3 = topology::is_dgraph(&s3.graph, 1, DEFAULT_BUDGET);
    vec![
        check("{f2=0} is C12", s2.component_sizes() == [12], format!("{:?}", s2.component_sizes())),
        check("{f3=0} is C8 + C8", s3.component_sizes() == [8, 8], format!("{:?}", s3.component_sizes())),
        check("both are 1-graphs", v2.is_yes() && v3.is_yes(), format!("{:?} {:?}", v2.verdict, v3.verdict)),
    ]
}

fn criterion_3() -> Vec<Check> {
    let g = catalog::octahedron_polar();
    let f = VertexFunction::from_ints(&[13, 15, 17, 19, 1, 31]);
    let trace = sard::sard_pipeline(&g, &[f.clone(), f], &[int(2), ratio(17, 2)], DEFAULT_BUDGET).unwrap();
    let first = &trace.stages[0];
    let mut labels = first.surface.graph.labels().unwrap().to_vec();
    labels.sort();
    let mut expected_labels: Vec<String> =
        ["(1,5)", "(1,2,5)", "(2,5)", "(2,3,5)", "(3,5)", "(3,4,5)", "(4,5)", "(1,4,5)"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    expected_labels.sort();
    let cycle = first.surface.component_sizes() == [8] && first.verification.is_yes() && labels == expected_labels;
    let second = &trace.stages[1];
    let mut values = second.extended.values().to_vec();
    values.sort();
    let sorted = |mut v: Vec<Rational>| {
        v.sort();
        v
    };
    let literal = sorted(vec![int(7), int(8), int(9), int(10), ratio(29, 3), ratio(35, 3), ratio(37, 3), int(11)]);
    let corrected = sorted(vec![int(7), int(8), int(9), int(10), ratio(29, 3), int(11), ratio(37, 3), int(11)]);
    let zero_graph =
        !second.surface.is_empty() && topology::is_dgraph(&second.surface.graph, 0, DEFAULT_BUDGET).is_yes();
    let shown: Vec<String> = values.iter().map(|q| q.to_string()).collect();
    vec![
        check("8-vertex cycle at c=2", cycle, format!("{labels:?}")),
        check("literal extended values", values == literal, shown.join(" ")),
        check("recomputed extended values", values == corrected, shown.join(" ")),
        check("c2=17/2 gives a 0-graph", zero_graph, format!("{} points", second.surface.graph.vertex_count())),
    ]
}

/// Stirling numbers of the second kind.
fn stirling2(n: usize, k: usize) -> u64 {
    let mut t = vec![vec![0u64; k + 1]; n + 1];
    t[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            t[i][j] = j as u64 * t[i - 1][j] + t[i - 1][j - 1];
        }
    }
    t[n][k]
}

/// Chains in the face poset: a chain of length `k+1` topped by an
/// `m`-simplex is an ordered partition of its `m+1` vertices into `k+1` blocks.
fn refined_f_vector(parent: &[usize]) -> Vec<usize> {
    let factorial = |n: usize| (1..=n as u64).product::<u64>();
    (0..parent.len())
        .map(|k| {
            parent
                .iter()
                .enumerate()
                .map(|(m, &fm)| fm as u64 * factorial(k + 1) * stirling2(m + 1, k + 1))
                .sum::<u64>() as usize
        })
        .collect()
}

fn criterion_4() -> Vec<Check> {
    let g = sixteen_cell();
    let r = refinement::barycentric(&g);
    let fv = r.graph.f_vector();
    vec![
        check("f-vector (80,464,768,384)", fv == [80, 464, 768, 384], format!("{fv:?}")),
        check("f-vector matches chain count", fv == refined_f_vector(&g.f_vector()), format!("{fv:?}")),
        check("chi = 0", r.graph.euler_characteristic() == 0, r.graph.euler_characteristic().to_string()),
    ]
}

fn criterion_5() -> Vec<Check> {
    let start = Instant::now();
    let pools: [(i64, Vec<SimplicialGraph>); 2] = [
        (
            2,
            vec![
                catalog::octahedron_mirrored(),
                catalog::icosahedron(),
                catalog::random_sphere(5, 20),
                catalog::random_sphere(6, 40),
            ],
        ),
        (
            3,
            vec![
                sixteen_cell(),
                random_three_sphere(5),
                random_three_sphere(6),
                catalog::suspension(&catalog::icosahedron()),
            ],
        ),
    ];
    let mut checks = Vec::new();
    for (d, graphs) in &pools {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + *d as u64);
        let mut failures = Vec::new();
        let mut nonempty = 0;
        for trial in 0..SARD_TRIALS {
            let g = &graphs[trial % graphs.len()];
            let f = VertexFunction::random_injective(g.vertex_count(), rng.gen());
            let c = random_level(&f, &mut rng);
            let s = levelset::level_surface(g, &f, &c).unwrap();
            if s.is_empty() {
                continue;
            }
            nonempty += 1;
            if !topology::is_dgraph(&s.graph, d - 1, DEFAULT_BUDGET).is_yes() {
                failures.push(trial);
            }
        }
        let name = if *d == 2 { "d=2 trials" } else { "d=3 trials" };
        checks.push(check(name, failures.is_empty(), format!("{nonempty} nonempty, failures {failures:?}")));
    }
    let elapsed = start.elapsed();
    checks.push(check("runtime", elapsed < SARD_TIME, format!("{elapsed:?}")));
    checks
}

fn catalog_graphs() -> Vec<(&'static str, SimplicialGraph)> {
    vec![
        ("cycle(12)", catalog::cycle(12).unwrap()),
        ("wheel(7)", catalog::wheel(7).unwrap()),
        ("octahedron", catalog::octahedron_mirrored()),
        ("octahedron-polar", catalog::octahedron_polar()),
        ("icosahedron", catalog::icosahedron()),
        ("16-cell", sixteen_cell()),
        ("cross-polytope(4)", catalog::cross_polytope(4).unwrap()),
        ("kuhn 4x4", catalog::kuhn_grid(&[4, 4], false).unwrap()),
        ("kuhn 4x4x4 torus", catalog::kuhn_grid(&[4, 4, 4], true).unwrap()),
        ("random 2-sphere", catalog::random_sphere(3, 15)),
        ("random 3-sphere", random_three_sphere(3)),
    ]
}

fn criterion_6() -> Vec<Check> {
    let mut gb_bad = Vec::new();
    let mut ph_bad = Vec::new();
    for (name, g) in catalog_graphs() {
        let chi = g.euler_characteristic();
        if morse::curvature(&g).total != int(chi) {
            gb_bad.push(name);
        }
        for seed in 0..RANDOM_FUNCTIONS {
            let f = VertexFunction::random_injective(g.vertex_count(), seed);
            let (sum, chi2) = morse::ph_sum_check(&g, &f).unwrap();
            if sum != chi || chi2 != chi {
                ph_bad.push((name, seed));
            }
        }
    }
    vec![
        check("sum K = chi", gb_bad.is_empty(), format!("{gb_bad:?}")),
        check("sum i_f = chi", ph_bad.is_empty(), format!("{ph_bad:?}")),
    ]
}

fn criterion_7() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let shape: Vec<usize> = (0..3).map(|_| rng.gen_range(4..=6)).collect();
    let torus = catalog::kuhn_grid(&shape, true).unwrap();
    let zero = |g: &SimplicialGraph| morse::curvature(g).values.iter().all(|k| *k == int(0));
    vec![check("16-cell", zero(&sixteen_cell()), ""), check("Kuhn 3-torus", zero(&torus), format!("shape {shape:?}"))]
}

fn criterion_8() -> Vec<Check> {
    let graphs = [
        ("octahedron", catalog::octahedron_mirrored()),
        ("icosahedron", catalog::icosahedron()),
        ("16-cell", sixteen_cell()),
    ];
    let mut identity_bad = Vec::new();
    let mut surface_bad = Vec::new();
    for (name, g) in &graphs {
        let d = g.dimension().unwrap() as i64;
        for seed in 0..RANDOM_FUNCTIONS {
            let f = VertexFunction::random_injective(g.vertex_count(), 800 + seed);
            for x in g.vertices() {
                let j = morse::ph_index(g, &f, x).unwrap().symmetric;
                let b = morse::central_surface(g, &f, x).unwrap();
                let half_chi = ratio(b.graph.euler_characteristic(), 2);
                let predicted = if d % 2 == 0 { int(1) - half_chi } else { -half_chi };
                if j != predicted {
                    identity_bad.push((*name, seed, x));
                }
                if !topology::is_dgraph(&b.graph, d - 2, DEFAULT_BUDGET).is_yes() {
                    surface_bad.push((*name, seed, x));
                }
            }
        }
    }
    vec![
        check("j_f from chi(B_f)", identity_bad.is_empty(), format!("{identity_bad:?}")),
        check("B_f is a (d-2)-graph", surface_bad.is_empty(), format!("{surface_bad:?}")),
    ]
}

/// j_f(x) averaged over every ordering of the closed ball, by brute force.
fn permutation_average(g: &SimplicialGraph, x: Vertex) -> Rational {
    let sphere: Vec<Vertex> = g.neighbors(x).to_vec();
    let ball: Vec<Vertex> = std::iter::once(x).chain(sphere.iter().copied()).collect();
    let mut total = int(0);
    let mut count = 0i64;
    for order in ball.iter().permutations(ball.len()) {
        let rank = |v: Vertex| order.iter().position(|&&u| u == v).unwrap();
        let below: Vec<Vertex> = sphere.iter().copied().filter(|&y| rank(y) < rank(x)).collect();
        let above: Vec<Vertex> = sphere.iter().copied().filter(|&y| rank(y) > rank(x)).collect();
        let chi = |vs: &[Vertex]| g.induced(vs).graph.euler_characteristic();
        total += int(2 - chi(&below) - chi(&above));
        count += 2;
    }
    total / int(count)
}

fn criterion_9() -> Vec<Check> {
    let ico = catalog::icosahedron();
    let k = morse::curvature(&ico);
    let mut exact_bad = Vec::new();
    for x in ico.vertices() {
        let brute = permutation_average(&ico, x);
        let fast = morse::exact_index_average(&ico, x).unwrap();
        if brute != k.values[x as usize] || fast != brute {
            exact_bad.push(x);
        }
    }
    let g = sixteen_cell();
    let kc = morse::curvature(&g);
    let mut mc_detail = Vec::new();
    let mut mc_ok = true;
    for x in g.vertices() {
        let e = morse::index_expectation(&g, x, MC_SAMPLES, 900 + x as u64).unwrap();
        let target = levelgraph::rational::to_f64(&kc.values[x as usize]);
        let tol = (MC_SIGMAS * e.standard_error).max(MC_FLOOR);
        mc_ok &= (e.estimate - target).abs() <= tol;
        mc_detail.push(format!("{:.4}±{:.4}", e.estimate, e.standard_error));
    }
    vec![
        check("icosahedron exact average = K", exact_bad.is_empty(), format!("{exact_bad:?}")),
        check("16-cell Monte Carlo within 3 SE", mc_ok, mc_detail.join(" ")),
    ]
}

fn criterion_10() -> Vec<Check> {
    let g = sixteen_cell();
    let mut regular_fail = Vec::new();
    let mut found = 0;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        for _attempt in 0..200 {
            let f = VertexFunction::random_injective(g.vertex_count(), rng.gen());
            let h = VertexFunction::random_injective(g.vertex_count(), rng.gen());
            let cs = [middle_level(&f), middle_level(&h)];
            let fs = [f, h];
            if !lagrange::max_rank_check(&g, &fs, &cs).unwrap().ok {
                continue;
            }
            let locus = levelset::simultaneous_locus(&g, &fs, &cs).unwrap();
            if locus.is_empty() {
                continue;
            }
            found += 1;
            if !topology::is_dgraph(&locus.graph, 1, DEFAULT_BUDGET).is_yes() {
                regular_fail.push(seed);
            }
            break;
        }
    }
    let f = VertexFunction::random_injective(g.vertex_count(), 77);
    let c = middle_level(&f);
    let pair = [f.clone(), f];
    let cs = [c.clone(), c];
    let rank = lagrange::max_rank_check(&g, &pair, &cs).unwrap();
    let locus = levelset::simultaneous_locus(&g, &pair, &cs).unwrap();
    let degenerate_fails = !topology::is_dgraph(&locus.graph, 1, DEFAULT_BUDGET).is_yes();
    vec![
        check(
            "max-rank pass implies 1-graph",
            found == 20 && regular_fail.is_empty(),
            format!("{found} passing pairs, non-1-graph seeds {regular_fail:?}"),
        ),
        check(
            "F=(f,f) is rejected",
            !rank.ok && rank.violation.is_some() && degenerate_fails,
            format!("violation {:?}", rank.violation.map(|v| v.dependent)),
        ),
    ]
}

fn criterion_11() -> Vec<Check> {
    let start = Instant::now();
    let opts = |step| VarietyOptions { step, periodic: false, perturb: true, budget: DEFAULT_BUDGET };
    let circle = variety::triangulate_variety(
        &[Polynomial::parse("x^2+y^2-2").unwrap()],
        &"-2,2;-2,2".parse::<Domain>().unwrap(),
        &opts(ratio(1, 4)),
    )
    .unwrap();
    let cg = circle.graph();
    let circle_ok = topology::is_dgraph(cg, 1, 0).is_yes() && topology::components(cg).len() == 1;
    let sphere = variety::triangulate_variety(
        &[Polynomial::parse("x^2+y^2+z^2-2").unwrap()],
        &"-2,2;-2,2;-2,2".parse::<Domain>().unwrap(),
        &opts(ratio(1, 2)),
    )
    .unwrap();
    let sv = topology::is_sphere(sphere.graph(), 2, DEFAULT_BUDGET);
    let elapsed = start.elapsed();
    vec![
        check("circle is one cycle", circle_ok, format!("{} vertices", cg.vertex_count())),
        check(
            "sphere is a 2-sphere",
            sv.is_yes(),
            format!("{:?}, f-vector {:?}", sv.verdict, sphere.graph().f_vector()),
        ),
        check("runtime", elapsed < VARIETY_TIME, format!("{elapsed:?}")),
    ]
}

fn criterion_12() -> Vec<Check> {
    let opts = NodalOptions { perturbation_seed: Some(1), ..NodalOptions::default() };
    let mut graphs = vec![("icosahedron", catalog::icosahedron())];
    let r1 = refinement::barycentric(&graphs[0].1).graph;
    let r2 = refinement::barycentric(&r1).graph;
    graphs.push(("refinement 1", r1));
    graphs.push(("refinement 2", r2));
    let mut checks = Vec::new();
    for (name, g) in graphs {
        let sp = spectral::spectrum(&g, DEFAULT_TOL).unwrap();
        let mut bad = Vec::new();
        for k in 2..=g.vertex_count() {
            let r = spectral::nodal_report_with(&g, &sp, k, &opts).unwrap();
            if r.positive_components > k - 1 {
                bad.push((k, r.positive_components));
            }
        }
        let ok = bad.is_empty();
        let detail = format!("{} vertices, violations {:?}", g.vertex_count(), &bad[..bad.len().min(5)]);
        checks.push(Check {
            name: match name {
                "icosahedron" => "icosahedron",
                "refinement 1" => "first refinement",
                _ => "second refinement",
            },
            ok,
            detail,
        });
    }
    let wheel = catalog::wheel(7).unwrap();
    let sp = spectral::spectrum(&wheel, DEFAULT_TOL).unwrap();
    let entries = spectral::eigenfunction_principle_check(&wheel, &sp);
    let worst = entries.iter().map(|e| e.value).fold(0.0, f64::max);
    checks.push(check(
        "wheel(7) hub entries vanish",
        !entries.is_empty() && worst < HUB_TOL,
        format!("{} entries, max {worst:e}", entries.len()),
    ));
    checks
}

fn criterion_13() -> Vec<Check> {
    let opts = NodalOptions { perturbation_seed: Some(1), ..NodalOptions::default() };
    [("16-cell", sixteen_cell()), ("random 3-sphere", random_three_sphere(13))]
        .into_iter()
        .map(|(name, g)| match spectral::ground_state_surface(&g, &opts, DEFAULT_BUDGET) {
            Ok(gs) => check(
                if name == "16-cell" { "16-cell ground state" } else { "random 3-sphere ground state" },
                gs.sphere.is_yes(),
                format!("{:?}, f-vector {:?}", gs.sphere.verdict, gs.report.nodal_surface.graph.f_vector()),
            ),
            Err(e) => check(
                if name == "16-cell" { "16-cell ground state" } else { "random 3-sphere ground state" },
                false,
                e.to_string(),
            ),
        })
        .collect()
}

fn run(id: u32, title: &'static str, f: fn() -> Vec<Check>) -> Outcome {
    let start = Instant::now();
    let checks = f();
    Outcome { id, title, checks, elapsed: start.elapsed() }
}

fn known(id: u32, name: &str) -> Option<&'static str> {
    KNOWN_UNATTAINABLE.iter().find(|(c, n, _)| *c == id && *n == name).map(|(_, _, why)| *why)
}

#[test]
fn acceptance_criteria() {
    let table: [(u32, &'static str, fn() -> Vec<Check>); 13] = [
        (1, "golden spectra", criterion_1),
        (2, "golden nodal loci", criterion_2),
        (3, "golden Sard stage", criterion_3),
        (4, "barycentric refinement of the 16-cell", criterion_4),
        (5, "Sard property suite", criterion_5),
        (6, "Gauss-Bonnet and Poincare-Hopf", criterion_6),
        (7, "odd-dimension curvature", criterion_7),
        (8, "central-surface identities", criterion_8),
        (9, "index expectation", criterion_9),
        (10, "commutative regularity", criterion_10),
        (11, "variety triangulation", criterion_11),
        (12, "Courant-Fiedler and eigenfunction principle", criterion_12),
        (13, "ground-state nodal surface (reported only)", criterion_13),
    ];
    let mut problems = Vec::new();
    for (id, title, f) in table {
        let o = run(id, title, f);
        let passed = o.checks.iter().all(|c| c.ok);
        line(&format!(
            "criterion {:>2} {} {} ({:.2?})",
            o.id,
            if passed { "PASS" } else { "FAIL" },
            o.title,
            o.elapsed
        ));
        for c in &o.checks {
            let note = match (c.ok, known(o.id, c.name)) {
                (false, Some(why)) => format!(" [known unattainable: {why}]"),
                (true, Some(_)) => " [listed as unattainable but passed]".into(),
                _ => String::new(),
            };
            line(&format!("    {} {}: {}{}", if c.ok { "ok  " } else { "FAIL" }, c.name, c.detail, note));
            if o.id == 13 {
                continue;
            }
            match (c.ok, known(o.id, c.name)) {
                (false, None) => problems.push(format!("{}: {} failed: {}", o.id, c.name, c.detail)),
                (true, Some(_)) => problems.push(format!("{}: {} unexpectedly passed", o.id, c.name)),
                _ => {}
            }
        }
    }
    assert!(problems.is_empty(), "acceptance problems:\n{}", problems.join("\n"));
}
