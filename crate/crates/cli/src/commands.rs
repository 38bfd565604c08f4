use std::fs;
use std::path::Path;

use hyperlat::flatband::{
    flat_band_basis, independent_even_cycle_states, DEFAULT_SEARCH_BUDGET,
    MAX_CYCLE_SEARCH_VERTICES,
};
use hyperlat::growth::{convergence_table, growth_report};
use hyperlat::io::{
    convergence_csv, flat_states_csv, flat_states_sidecar, histogram_csv, spectrum_csv, GraphJson,
    LineGraphJson, SignedLineGraphJson,
};
use hyperlat::linegraph::{default_orientation, line_graph, random_orientation, signed_line_graph};
use hyperlat::spectra::{
    coupling_matrix, eigenvalues, hamiltonian_spectrum, histogram, HamiltonianParams,
};
use hyperlat::tiling::{catalog_instance, generate_layout};
use hyperlat::{LayoutGraph, Orientation, SchlafliSpec, SpectrumMultiset};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{GenerateArgs, GrowthArgs, LayoutSource, Mode, SpectrumArgs, MIN_BINS};
use crate::CliError;

pub fn build_layout(source: &LayoutSource) -> Result<LayoutGraph, CliError> {
    if let Some(name) = &source.catalog {
        return Ok(catalog_instance(name)?);
    }
    match (source.p, source.q, source.rings) {
        (Some(p), Some(q), Some(rings)) => Ok(generate_layout(SchlafliSpec::new(p, q)?, rings)?),
        _ => Err(CliError::Input(
            "give --p, --q and --rings, or --catalog NAME".into(),
        )),
    }
}

pub fn read_layout(path: &Path) -> Result<LayoutGraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let parsed: GraphJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))?;
    parsed
        .into_layout()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .and_then(|()| fs::write(dir.join(name), contents))
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", dir.join(name).display())))
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("cannot serialise {name}: {e}")))?;
    text.push('\n');
    write_file(dir, name, &text)
}

pub fn generate(args: &GenerateArgs) -> Result<(), CliError> {
    let layout = build_layout(&args.source)?;
    let g = &layout.graph;
    let orientation = match args.seed {
        Some(seed) => random_orientation(g, &mut ChaCha8Rng::seed_from_u64(seed)),
        None => default_orientation(g),
    };
    let lg = line_graph(g)?;
    let slg = signed_line_graph(g, &orientation)?;
    write_json(&args.out_dir, "layout.json", &GraphJson::from_layout(&layout))?;
    write_json(&args.out_dir, "line_graph.json", &LineGraphJson::new(&layout, &lg))?;
    write_json(
        &args.out_dir,
        "signed_line_graph.json",
        &SignedLineGraphJson::new(&layout, &slg),
    )?;
    println!(
        "{} rings={} n={} m={} -> {}",
        layout.spec,
        layout.rings,
        g.vertex_count(),
        g.edge_count(),
        args.out_dir.display()
    );
    Ok(())
}

fn read_orientation(path: &Path, layout: &LayoutGraph) -> Result<Orientation, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let parsed: SignedLineGraphJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))?;
    Ok(parsed.orientation_for(&layout.graph)?)
}

pub fn spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    if args.bins < MIN_BINS {
        return Err(CliError::Input(format!("--bins must be at least {MIN_BINS}")));
    }
    let opts = args.tolerances.resolve()?;
    let params = match (args.omega0, args.t) {
        (Some(omega0), Some(t)) => Some(HamiltonianParams::new(omega0, t, args.mode.coupling())?),
        _ => None,
    };
    let layout = read_layout(&args.graph)?;
    let g = &layout.graph;
    let orientation = match (&args.orientation, args.mode) {
        (Some(path), Mode::Half) => Some(read_orientation(path, &layout)?),
        _ => None,
    };
    let matrix = coupling_matrix(g, args.mode.coupling(), orientation.as_ref())?;
    let values = eigenvalues(&matrix, opts.max_dim)?;
    let spectrum = SpectrumMultiset::from_values(&values, opts.cluster_tol);
    let hist = histogram(&values, args.bins, opts.flat_tol)?;

    let tag = args.mode.tag();
    write_file(&args.out_dir, &format!("spectrum_{tag}.csv"), &spectrum_csv(&spectrum))?;
    write_file(&args.out_dir, &format!("histogram_{tag}.csv"), &histogram_csv(&hist))?;
    if let Some(params) = params {
        let physical = hamiltonian_spectrum(&spectrum, &params)?;
        write_file(
            &args.out_dir,
            &format!("physical_spectrum_{tag}.csv"),
            &spectrum_csv(&physical),
        )?;
    }
    if args.flat_states {
        let mut states = None;
        if args.mode == Mode::Full && g.vertex_count() <= MAX_CYCLE_SEARCH_VERTICES {
            let search = independent_even_cycle_states(g, None, DEFAULT_SEARCH_BUDGET)?;
            if search.complete() {
                states = Some(search.states);
            }
        }
        let states = match states {
            Some(s) => s,
            None => flat_band_basis(&matrix, &opts)?,
        };
        write_file(
            &args.out_dir,
            &format!("flat_states_{tag}.csv"),
            &flat_states_csv(&states),
        )?;
        write_json(
            &args.out_dir,
            &format!("flat_states_{tag}.json"),
            &flat_states_sidecar(&states),
        )?;
    }
    println!(
        "{tag}-wave spectrum of {} ({} levels): {} distinct values, flat band {}",
        args.graph.display(),
        values.len(),
        spectrum.entries().len(),
        hist.flat_band_count
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct GrowthRow {
    ring: usize,
    t_ell: i128,
    n_ell: i128,
    m_ell: i128,
    c_ell: Option<f64>,
    f_ell: f64,
    f_ell_half_wave: f64,
    avg_degree: f64,
}

#[derive(Debug, Serialize)]
struct GrowthFile {
    summary: hyperlat::growth::GrowthReport,
    rows: Vec<GrowthRow>,
}

pub fn growth(args: &GrowthArgs) -> Result<(), CliError> {
    let spec = SchlafliSpec::new(args.p, args.q)?;
    let table = convergence_table(spec, args.lmax)?;
    let rows = (1..=args.lmax)
        .map(|ring| {
            let r = growth_report(spec, ring)?;
            Ok(GrowthRow {
                ring,
                t_ell: r.t_ell,
                n_ell: r.n_ell,
                m_ell: r.m_ell,
                c_ell: r.c_ell,
                f_ell: r.f_ell,
                f_ell_half_wave: r.f_ell_half_wave,
                avg_degree: r.avg_degree,
            })
        })
        .collect::<Result<Vec<_>, hyperlat::Error>>()?;
    let summary = growth_report(spec, args.lmax)?;
    println!("{spec}: sigma={:.6} f_inf={:.4}", summary.sigma, summary.f_inf);
    write_json(&args.out_dir, "growth_report.json", &GrowthFile { summary, rows })?;
    write_file(&args.out_dir, "convergence.csv", &convergence_csv(&table))?;
    Ok(())
}
