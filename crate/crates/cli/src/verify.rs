use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use hyperlat::linegraph::{random_orientation, signed_line_graph};
use hyperlat::spectra::{
    count_flat, eigenvalues, identity_report, BoundsReport, Coupling, SpectralOptions,
};
use hyperlat::tiling::{catalog_instance, generate_layout, ring_counts};
use hyperlat::{LayoutGraph, SchlafliSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::commands::{build_layout, read_layout, write_json};
use crate::config::VerifyArgs;
use crate::CliError;

pub const MATRIX_P: std::ops::RangeInclusive<u32> = 4..=8;
pub const MATRIX_Q: std::ops::RangeInclusive<u32> = 3..=6;
pub const MATRIX_MAX_RINGS: usize = 3;

struct Target {
    label: String,
    layout: LayoutGraph,
}

#[derive(Debug, Clone, Serialize)]
struct Check {
    target: String,
    check: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Debug, Serialize)]
struct Report {
    seed: u64,
    switches: usize,
    passed: bool,
    checks: Vec<Check>,
}

fn layout_label(layout: &LayoutGraph) -> String {
    format!("{} rings={}", layout.spec, layout.rings)
}

fn targets(args: &VerifyArgs) -> Result<Vec<Target>, CliError> {
    if let Some(path) = &args.graph {
        let layout = read_layout(path)?;
        return Ok(vec![Target {
            label: layout_label(&layout),
            layout,
        }]);
    }
    if args.matrix {
        let mut out = Vec::new();
        for p in MATRIX_P {
            for q in MATRIX_Q {
                let spec = SchlafliSpec::new(p, q)?;
                if spec.tau() < 4 {
                    continue;
                }
                for rings in 1..=MATRIX_MAX_RINGS {
                    let layout = generate_layout(spec, rings)?;
                    out.push(Target {
                        label: layout_label(&layout),
                        layout,
                    });
                }
            }
        }
        out.push(Target {
            label: "dodecahedron".into(),
            layout: catalog_instance("dodecahedron")?,
        });
        return Ok(out);
    }
    let layout = build_layout(&args.source)?;
    let label = args
        .source
        .catalog
        .clone()
        .unwrap_or_else(|| layout_label(&layout));
    Ok(vec![Target { label, layout }])
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn check_target(
    target: &Target,
    opts: &SpectralOptions,
    seed: u64,
    switches: usize,
) -> Result<Vec<Check>, CliError> {
    let layout = &target.layout;
    let g = &layout.graph;
    let mut checks = Vec::new();
    let mut push = |check: &'static str, passed: bool, detail: String| {
        checks.push(Check {
            target: target.label.clone(),
            check,
            passed,
            detail,
        })
    };

    if !layout.faces.is_empty() {
        let res = layout.check_invariants();
        push(
            "structure",
            res.is_ok(),
            res.err().map_or_else(|| "faces, Euler and degrees ok".into(), |e| e.to_string()),
        );
    }
    if layout.rings > 0 {
        let expected = ring_counts(layout.spec, layout.rings)?;
        let observed = layout.observed_ring_counts();
        let ok = observed.iter().enumerate().all(|(j, &(b, big_b))| {
            expected.free(j + 1) == b as i128 && expected.anchored(j + 1) == big_b as i128
        });
        push("ring_counts", ok, format!("observed (b_j, B_j) = {observed:?}"));
    }

    let full = identity_report(g, Coupling::FullWave, None, opts)?;
    push(
        "identity_full",
        full.passed(),
        format!("max deviation {:.3e}", full.max_deviation),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orientation = random_orientation(g, &mut rng);
    let half = identity_report(g, Coupling::HalfWave, Some(&orientation), opts)?;
    push(
        "identity_half",
        half.passed(),
        format!("max deviation {:.3e}", half.max_deviation),
    );

    let full_max = *full.line_spectrum.last().expect("non-empty spectrum");
    let half_max = *half.line_spectrum.last().expect("non-empty spectrum");
    match BoundsReport::evaluate(g, full_max, half_max) {
        Ok(b) => push(
            "bounds",
            b.passed(),
            format!(
                "full max {full_max:.9} in {:?}, half max {half_max:.9} in {:?}",
                b.full_range, b.half_range
            ),
        ),
        Err(e) => push("bounds", false, e.to_string()),
    }

    let (n, m) = (g.vertex_count(), g.edge_count());
    let bipartite = g.is_bipartite();
    let flat_full = count_flat(&full.line_spectrum, opts.flat_tol);
    let flat_half = count_flat(&half.line_spectrum, opts.flat_tol);
    let want_full = m - n + usize::from(bipartite);
    push(
        "flat_full",
        flat_full == want_full,
        format!("{flat_full} flat states, expected {want_full}"),
    );
    push(
        "flat_half",
        flat_half == m - n + 1,
        format!("{flat_half} flat states, expected {}", m - n + 1),
    );
    if bipartite {
        let d = max_abs_diff(&full.line_spectrum, &half.line_spectrum);
        push(
            "gauge_equivalence",
            d <= opts.identity_tol,
            format!("bipartite, full vs half deviation {d:.3e}"),
        );
    } else {
        push(
            "gauge_equivalence",
            flat_half == flat_full + 1,
            format!("not bipartite, flat counts {flat_full} (full) vs {flat_half} (half)"),
        );
    }

    let mut slg = signed_line_graph(g, &orientation)?;
    for _ in 0..switches {
        slg.switch_in_place(rng.random_range(0..m))?;
    }
    let switched = eigenvalues(&slg.adjacency_matrix(), opts.max_dim)?;
    let d = max_abs_diff(&switched, &half.line_spectrum);
    push(
        "switching",
        d <= opts.identity_tol,
        format!("{switches} switches, deviation {d:.3e}"),
    );
    Ok(checks)
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    let opts = args.tolerances.resolve()?;
    if args.jobs == 0 {
        return Err(CliError::Input("--jobs must be positive".into()));
    }
    let targets = targets(args)?;
    type Slot = Mutex<Option<Result<Vec<Check>, CliError>>>;
    let results: Vec<Slot> = targets.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..args.jobs.min(targets.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(t) = targets.get(i) else { break };
                let r = check_target(t, &opts, args.seed, args.switches);
                *results[i].lock().expect("result slot") = Some(r);
            });
        }
    });

    let mut checks = Vec::new();
    for slot in results {
        let r = slot.into_inner().expect("result slot").expect("every target ran");
        checks.extend(r?);
    }
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("{status} {} {}: {}", c.target, c.check, c.detail);
    }
    let passed = checks.iter().all(|c| c.passed);
    let failures = checks.iter().filter(|c| !c.passed).count();
    write_json(
        &args.out_dir,
        "verify_report.json",
        &Report {
            seed: args.seed,
            switches: args.switches,
            passed,
            checks,
        },
    )?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{failures} check(s) failed")))
    }
}
