//! Subcommand front end. Every command prints one JSON document (or a CSV
//! table with `--format csv`) on stdout; diagnostics go to stderr only.
//!
//! Exit codes: 0 success, 1 verification suite had a failing case, 2 domain
//! error, 3 convergence error, 64 usage error. `FERMILAB_QUAD_N` overrides
//! the default quadrature size where a command does not set `--quad`.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fermilab_core::coupling::{
    CouplingSpec, DefectVariant, TwoGraphAngles, conjugation_residual, embed_bound_state,
    factorization_residual, hybrid_unitary, two_graph_k,
};
use fermilab_core::dispersion::{
    Mult, band_report, band_witness, coupled_chain_bands, dispersion_samples, multiplicity_1d,
};
use fermilab_core::greens::{
    fourth_order_chain_defect, resolvent_delta, synth_defect, unbounded_support_check,
};
use fermilab_core::lattice::eigen_residual;
use fermilab_core::num::rng::SplitMix64;
use fermilab_core::qgraph::Bc;
use fermilab_core::qgraph::chain::chain_bound_state;
use fermilab_core::qgraph::grid::grid_bound_state;
use fermilab_core::{C64, Error, Result, greens, models};

use crate::formats::{
    BandOut, DecayOut, MultOut, csv_f64, csv_table, read_matrix, read_stencil, to_json_doc,
};
use crate::verify::{SuiteConfig, suite_run};

const DEFAULT_QUAD_N: usize = 64;

#[derive(Parser)]
#[command(
    name = "fermilab",
    version,
    about = "Periodic lattice and quantum-graph operators with locally perturbed bound states"
)]
struct Cli {
    /// output format for the document on stdout (default json)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// write the document to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BcArg {
    Neumann,
    Dirichlet,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Uniform,
    Projected,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fourth-order chain: alternating exponential defect eigenfunction
    Ex1 {
        /// decay rate, in (0, ln(2+sqrt 3))
        #[arg(long)]
        alpha: f64,
        /// half-width of the verification box
        #[arg(long, default_value_t = 50)]
        r#box: i64,
    },
    /// Two coupled chains: split bands against sampled multiplicity
    Ex2 {
        /// shared onsite level of both chains
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// onsite detuning between the chains
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        /// onsite hop between the chains
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
    },
    /// Ladder quantum graph: bound state from a retuned defect rung
    Ex3 {
        /// edge frequency; the anti-symmetric class must be gapped there
        #[arg(long)]
        mu: f64,
        /// rungs on each side of the defect
        #[arg(long, default_value_t = 30)]
        cells: usize,
    },
    /// Stack layers of a lattice through an involution and embed a bound state
    Coupled {
        /// JSON stencil of the single layer
        #[arg(long)]
        stencil: PathBuf,
        /// JSON involution that mixes the layers
        #[arg(long = "K", alias = "k")]
        k: PathBuf,
        /// mixing angle of the defect lift
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        /// mixing phase of the defect lift
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        /// inter-layer hopping strength
        #[arg(long, allow_hyphen_values = true)]
        lambda0: f64,
        /// how the defect spreads across the layers
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// single-layer eigenvalue; default sits 1 below the spectrum
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
        /// half-width of the synthesis box
        #[arg(long, default_value_t = 16)]
        r#box: i64,
        /// quadrature points per dimension; overrides FERMILAB_QUAD_N
        #[arg(long)]
        quad: Option<usize>,
    },
    /// Lattice Green's function at a point mass, with the defect it induces
    Green {
        /// JSON stencil of the lattice operator
        #[arg(long)]
        stencil: PathBuf,
        /// spectral parameter, off the spectrum
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        /// half-width of the synthesis box
        #[arg(long, default_value_t = 12)]
        r#box: i64,
        /// quadrature points per dimension; overrides FERMILAB_QUAD_N
        #[arg(long)]
        quad: Option<usize>,
        /// fiber component carrying the point mass
        #[arg(long, default_value_t = 0)]
        component: usize,
    },
    /// Planar quantum graph with dangling edges: defect-edge bound state
    Grid2d {
        /// edge frequency of the bound-state class
        #[arg(long)]
        mu: f64,
        /// condition at the free ends of the dangling edges
        #[arg(long, value_enum)]
        bc: BcArg,
        /// half-width of the vertex box
        #[arg(long, default_value_t = 8)]
        r#box: i64,
        /// quadrature points for the defect-strength integral; overrides FERMILAB_QUAD_N
        #[arg(long)]
        quad: Option<usize>,
    },
    /// Spectral bands and Floquet multiplicities of a stencil
    Bands {
        /// JSON stencil of the lattice operator
        #[arg(long)]
        stencil: PathBuf,
        /// grid start; default half a unit below the spectral hull
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<f64>,
        /// grid end; default half a unit above the spectral hull
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<f64>,
        /// energy grid points
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Run the verification suite
    Verify {
        /// JSON case list; omitted means the built-in default suite
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Parses argv and runs; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Error::Domain(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Error::Convergence(msg)) => {
            eprintln!("error: {msg}");
            3
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let format = cli.format.unwrap_or(Format::Json);
    let (doc, code) = match cli.cmd {
        Cmd::Ex1 { alpha, r#box } => (cmd_ex1(alpha, r#box, format)?, 0),
        Cmd::Ex2 { a, b, c } => (cmd_ex2(a, b, c, format)?, 0),
        Cmd::Ex3 { mu, cells } => (cmd_ex3(mu, cells, format)?, 0),
        Cmd::Coupled { stencil, k, theta, phi, lambda0, variant, lambda, r#box, quad } => (
            cmd_coupled(&stencil, &k, theta, phi, lambda0, variant, lambda, r#box, quad, format)?,
            0,
        ),
        Cmd::Green { stencil, lambda, r#box, quad, component } => {
            (cmd_green(&stencil, lambda, r#box, quad, component, format)?, 0)
        }
        Cmd::Grid2d { mu, bc, r#box, quad } => (cmd_grid2d(mu, bc, r#box, quad, format)?, 0),
        Cmd::Bands { stencil, lo, hi, samples } => {
            (cmd_bands(&stencil, lo, hi, samples, format)?, 0)
        }
        Cmd::Verify { config } => cmd_verify(config.as_deref(), format)?,
    };
    emit(cli.out.as_deref(), &doc)?;
    Ok(code)
}

fn emit(out: Option<&Path>, doc: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, doc)
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{doc}");
            Ok(())
        }
    }
}

fn quad_size(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("FERMILAB_QUAD_N") {
        Ok(s) => s
            .parse::<usize>()
            .map_err(|_| Error::Domain(format!("FERMILAB_QUAD_N={s:?} is not a grid size"))),
        Err(_) => Ok(DEFAULT_QUAD_N),
    }
}

fn no_csv(cmd: &str) -> Error {
    Error::Domain(format!("{cmd} has no tabular form; use --format json"))
}

/// `embedded` plus the band interval that witnesses it; `false` carries none.
fn verdict(
    a: &fermilab_core::lattice::PeriodicStencil,
    x: f64,
) -> Result<(bool, Option<(f64, f64)>)> {
    match fermilab_core::coupling::interior_band_witness(a, x) {
        Ok(w) => Ok((true, Some(w))),
        Err(Error::Domain(msg)) if msg.contains("embedding failure") => Ok((false, None)),
        Err(e) => Err(e),
    }
}

#[derive(Serialize)]
struct Ex1Doc {
    model: &'static str,
    alpha: f64,
    lambda: f64,
    v0: f64,
    v1: f64,
    r#box: i64,
    interior_residual: f64,
    multiplicity: MultOut,
    embedded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<(f64, f64)>,
    decay: DecayOut,
}

fn cmd_ex1(alpha: f64, half_width: i64, format: Format) -> Result<String> {
    if half_width < 2 {
        return Err(Error::domain("box must be at least 2"));
    }
    let fam = fourth_order_chain_defect(alpha)?;
    let a = models::fourth_order_chain();
    let u = fam.field(half_width);
    let defect = fam.potential();
    let interior_residual = eigen_residual(&a, Some(&defect), &u, fam.lambda)?;
    let multiplicity = MultOut(multiplicity_1d(&a, fam.lambda)?);
    let (embedded, witness) = verdict(&a, fam.lambda)?;
    let decay = DecayOut::from(&greens::fit_decay(&u)?);
    match format {
        Format::Json => to_json_doc(&Ex1Doc {
            model: "fourth_order_chain",
            alpha: fam.alpha,
            lambda: fam.lambda,
            v0: fam.v0,
            v1: fam.v1,
            r#box: half_width,
            interior_residual,
            multiplicity,
            embedded,
            witness,
            decay,
        }),
        Format::Csv => {
            let mut rows = Vec::new();
            for g in -half_width..=half_width {
                let v = u.get(&[g], 0);
                rows.push(vec![g.to_string(), csv_f64(v.re)?]);
            }
            csv_table(&["g", "v"], &rows)
        }
    }
}

#[derive(Serialize)]
struct Ex2Doc {
    model: &'static str,
    a: f64,
    b: f64,
    c: f64,
    split: f64,
    /// `[lo, hi, multiplicity]` triples, ascending and disjoint
    bands: Vec<BandOut>,
    /// closed-form intervals re-checked against root-counted multiplicity
    /// at every band midpoint and outside the hull
    sampled_ok: bool,
}

fn cmd_ex2(a: f64, b: f64, c: f64, format: Format) -> Result<String> {
    let split = (b * b + c * c).sqrt();
    let bands: Vec<BandOut> = coupled_chain_bands(a, b, c)
        .into_iter()
        .map(|(lo, hi, m)| BandOut { lo, hi, multiplicity: m })
        .collect();
    let st = models::coupled_chain_pair(a, b, c);
    let mut sampled_ok = true;
    for band in &bands {
        let mid = 0.5 * (band.lo + band.hi);
        sampled_ok &= multiplicity_1d(&st, mid)? == Mult::Count(band.multiplicity);
    }
    if let (Some(first), Some(last)) = (bands.first(), bands.last()) {
        sampled_ok &= multiplicity_1d(&st, first.lo - 1.0)? == Mult::Count(0);
        sampled_ok &= multiplicity_1d(&st, last.hi + 1.0)? == Mult::Count(0);
    }
    match format {
        Format::Json => {
            to_json_doc(&Ex2Doc { model: "coupled_chain_pair", a, b, c, split, bands, sampled_ok })
        }
        Format::Csv => {
            let mut rows = Vec::new();
            for band in &bands {
                rows.push(vec![
                    csv_f64(band.lo)?,
                    csv_f64(band.hi)?,
                    band.multiplicity.to_string(),
                ]);
            }
            csv_table(&["lo", "hi", "multiplicity"], &rows)
        }
    }
}

#[derive(Serialize)]
struct Ex3Doc {
    model: &'static str,
    mu: f64,
    lambda: f64,
    z: f64,
    nu: f64,
    v0: f64,
    cells: usize,
    max_vertex_residual: f64,
    defect_flux_residual: f64,
    decay_ratio: f64,
    embedded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<(f64, f64)>,
}

fn cmd_ex3(mu: f64, cells: usize, format: Format) -> Result<String> {
    let st = chain_bound_state(mu, cells)?;
    match format {
        Format::Json => to_json_doc(&Ex3Doc {
            model: "chain_graph",
            mu: st.mu,
            lambda: st.lambda,
            z: st.z,
            nu: st.nu,
            v0: st.v0,
            cells: st.cells.len(),
            max_vertex_residual: st.max_vertex_residual,
            defect_flux_residual: st.defect_flux_residual,
            decay_ratio: st.decay_ratio,
            embedded: st.embedded,
            witness: st.band_interval,
        }),
        Format::Csv => {
            let mut rows = Vec::new();
            for cell in &st.cells {
                rows.push(vec![
                    cell.g.to_string(),
                    csv_f64(cell.c)?,
                    csv_f64(cell.d)?,
                    csv_f64(cell.rung)?,
                ]);
            }
            csv_table(&["g", "c", "d", "rung"], &rows)
        }
    }
}

#[derive(Serialize)]
struct EmbeddingDoc {
    lambda: f64,
    eigenvalue: f64,
    r#box: i64,
    quad_n: usize,
    input_residual: f64,
    residual: f64,
    witness: (f64, f64),
    decay: DecayOut,
}

#[derive(Serialize)]
struct CoupledDoc {
    dim: usize,
    fiber: usize,
    layers: usize,
    theta: f64,
    phi: f64,
    lambda0: f64,
    variant: &'static str,
    /// `max |K^2 - I|`
    involution_defect: f64,
    /// `max |K - K*|`
    hermitian_defect: f64,
    /// spectrum of the mixing matrix
    energies: Vec<f64>,
    /// worst `|A U - U A~|` over random quasimomenta
    conjugation_residual: f64,
    /// worst relative determinant-factorization mismatch over random Laurent
    /// points
    factorization_residual: f64,
    /// present when the mixing matrix equals the two-layer form at
    /// `(theta, phi)`, so a bound state can be lifted through it
    #[serde(skip_serializing_if = "Option::is_none")]
    embedding: Option<EmbeddingDoc>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_coupled(
    stencil_path: &Path,
    k_path: &Path,
    theta: f64,
    phi: f64,
    lambda0: f64,
    variant: VariantArg,
    lambda: Option<f64>,
    half_width: i64,
    quad: Option<usize>,
    format: Format,
) -> Result<String> {
    if format == Format::Csv {
        return Err(no_csv("coupled"));
    }
    let base = read_stencil(stencil_path)?;
    let k = read_matrix(k_path)?;
    let quad_n = quad_size(quad)?;
    let m = k.rows();

    let k2 = k.mul(&k);
    let involution_defect = k2.sub(&fermilab_core::num::cmat::CMat::identity(m)).max_abs();
    let hermitian_defect = k.hermitian_defect();
    let rabi = models::identity_stencil(base.dim(), base.fiber(), lambda0);
    let spec = CouplingSpec::new(base.clone(), rabi, k.clone())?;
    let (_, energies) = hybrid_unitary(&k)?;

    let mut rng = SplitMix64::new(0x5eed_c011_u64);
    let points: Vec<Vec<f64>> = (0..100)
        .map(|_| {
            (0..base.dim())
                .map(|_| rng.next_in(-core::f64::consts::PI, core::f64::consts::PI))
                .collect()
        })
        .collect();
    let conjugation = conjugation_residual(&spec, &points)?;

    let mut factorization = 0.0f64;
    for &lam in &[-1.3, 0.7, 2.9] {
        for _ in 0..40 {
            let z: Vec<C64> = (0..base.dim())
                .map(|_| {
                    let t = rng.next_in(-core::f64::consts::PI, core::f64::consts::PI);
                    C64::new(t.cos(), t.sin())
                })
                .collect();
            factorization = factorization.max(factorization_residual(&spec, &z, lam)?);
        }
    }

    let angles = TwoGraphAngles { theta, phi, lambda0 };
    let matches_two_layer = m == 2 && two_graph_k(&angles).sub(&k).max_abs() <= 1e-10;
    let embedding = if matches_two_layer {
        let hull = band_witness(&base, 512)?;
        let lam = lambda.unwrap_or_else(|| {
            hull.iter().map(|w| w.0).fold(f64::INFINITY, f64::min) - 1.0
        });
        let g = resolvent_delta(&base, lam, quad_n, half_width, 0)?;
        let defect = synth_defect(&g)?;
        let var = match variant {
            VariantArg::Uniform => DefectVariant::Uniform,
            VariantArg::Projected => DefectVariant::Projected,
        };
        let pair = embed_bound_state(&base, &defect, &g.u, lam, &angles, var)?;
        let decay = DecayOut::from(&greens::fit_decay(&pair.state.combined)?);
        Some(EmbeddingDoc {
            lambda: lam,
            eigenvalue: pair.eigenvalue,
            r#box: half_width,
            quad_n,
            input_residual: pair.input_residual,
            residual: pair.residual,
            witness: pair.witness,
            decay,
        })
    } else {
        None
    };

    to_json_doc(&CoupledDoc {
        dim: base.dim(),
        fiber: base.fiber(),
        layers: m,
        theta,
        phi,
        lambda0,
        variant: match variant {
            VariantArg::Uniform => "uniform",
            VariantArg::Projected => "projected",
        },
        involution_defect,
        hermitian_defect,
        energies,
        conjugation_residual: conjugation,
        factorization_residual: factorization,
        embedding,
    })
}

#[derive(Serialize)]
struct SupportDoc {
    laurent_terms: usize,
    radii: Vec<i64>,
    support: Vec<i64>,
    grows: bool,
}

#[derive(Serialize)]
struct GreenDoc {
    lambda: f64,
    component: usize,
    quad_n: usize,
    r#box: i64,
    u0: f64,
    /// defect strength `-1/u0` that makes the field a bound state
    v0: f64,
    /// interior residual of the field as an eigenfunction of the defective
    /// operator
    bound_residual: f64,
    decay: DecayOut,
    support: SupportDoc,
}

fn cmd_green(
    stencil_path: &Path,
    lambda: f64,
    half_width: i64,
    quad: Option<usize>,
    component: usize,
    format: Format,
) -> Result<String> {
    let a = read_stencil(stencil_path)?;
    let quad_n = quad_size(quad)?;
    let g = resolvent_delta(&a, lambda, quad_n, half_width, component)?;
    let defect = synth_defect(&g)?;
    let bound_residual = eigen_residual(&a, Some(&defect), &g.u, lambda)?;
    let decay = DecayOut::from(&greens::fit_decay(&g.u)?);
    let radii = vec![(half_width / 3).max(2), (2 * half_width / 3).max(3), half_width];
    let growth = unbounded_support_check(&a, lambda, &radii, quad_n)?;
    match format {
        Format::Json => to_json_doc(&GreenDoc {
            lambda,
            component,
            quad_n,
            r#box: half_width,
            u0: g.u0,
            v0: g.v0,
            bound_residual,
            decay,
            support: SupportDoc {
                laurent_terms: growth.laurent_terms,
                radii: growth.radii,
                support: growth.support,
                grows: growth.grows,
            },
        }),
        Format::Csv => {
            let mut header: Vec<String> = (0..a.dim()).map(|i| format!("x{}", i + 1)).collect();
            header.push("component".to_string());
            header.push("re".to_string());
            header.push("im".to_string());
            let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
            let mut rows = Vec::new();
            for site in g.u.sites() {
                for comp in 0..a.fiber() {
                    let v = g.u.get(&site, comp);
                    let mut row: Vec<String> = site.iter().map(|x| x.to_string()).collect();
                    row.push(comp.to_string());
                    row.push(csv_f64(v.re)?);
                    row.push(csv_f64(v.im)?);
                    rows.push(row);
                }
            }
            csv_table(&header_refs, &rows)
        }
    }
}

#[derive(Serialize)]
struct Grid2dDoc {
    model: &'static str,
    bc: &'static str,
    mu: f64,
    lambda: f64,
    nu: f64,
    v0: f64,
    quad_n: usize,
    r#box: i64,
    max_vertex_residual: f64,
    defect_ode_residual: f64,
    residual: f64,
    imag_peak_rel: f64,
    decay: DecayOut,
    alpha_predicted: f64,
    /// `[radius, numeric support radius]` pairs on nested sub-boxes
    support: Vec<(i64, i64)>,
    tail_grows: bool,
    embedded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<(f64, f64)>,
}

fn cmd_grid2d(mu: f64, bc: BcArg, half_width: i64, quad: Option<usize>, format: Format) -> Result<String> {
    let bc = match bc {
        BcArg::Neumann => Bc::Neumann,
        BcArg::Dirichlet => Bc::Dirichlet,
    };
    let quad_n = quad_size(quad)?;
    let st = grid_bound_state(bc, mu, half_width, quad_n)?;
    match format {
        Format::Json => to_json_doc(&Grid2dDoc {
            model: "grid_graph",
            bc: bc.name(),
            mu: st.mu,
            lambda: st.lambda,
            nu: st.nu,
            v0: st.v0,
            quad_n: st.quad_n,
            r#box: half_width,
            max_vertex_residual: st.max_vertex_residual,
            defect_ode_residual: st.defect_ode_residual,
            residual: st.residual,
            imag_peak_rel: st.imag_peak_rel,
            decay: DecayOut::from(&st.decay),
            alpha_predicted: st.alpha_predicted,
            support: st.support.clone(),
            tail_grows: st.tail_grows,
            embedded: st.embedded,
            witness: st.band_interval,
        }),
        Format::Csv => {
            let mut rows = Vec::new();
            for site in st.k_field.sites() {
                let row = vec![
                    site[0].to_string(),
                    site[1].to_string(),
                    csv_f64(st.k_field.get(&site, 0).re)?,
                    csv_f64(st.c1.get(&site, 0).re)?,
                    csv_f64(st.d1.get(&site, 0).re)?,
                    csv_f64(st.c2.get(&site, 0).re)?,
                    csv_f64(st.d2.get(&site, 0).re)?,
                ];
                rows.push(row);
            }
            csv_table(&["g1", "g2", "k", "c1", "d1", "c2", "d2"], &rows)
        }
    }
}

#[derive(Serialize)]
struct BandsDoc {
    dim: usize,
    fiber: usize,
    lo: f64,
    hi: f64,
    samples: usize,
    /// `[lo, hi, multiplicity]` triples from root counting (1D only)
    bands: Vec<BandOut>,
    /// per-branch value ranges over the sampled torus
    branch_ranges: Vec<(f64, f64)>,
}

fn cmd_bands(
    stencil_path: &Path,
    lo: Option<f64>,
    hi: Option<f64>,
    samples: usize,
    format: Format,
) -> Result<String> {
    let a = read_stencil(stencil_path)?;
    if samples < 2 {
        return Err(Error::domain("need at least 2 samples"));
    }
    let witness = band_witness(&a, 512)?;
    let hull_lo = witness.iter().map(|w| w.0).fold(f64::INFINITY, f64::min);
    let hull_hi = witness.iter().map(|w| w.1).fold(f64::NEG_INFINITY, f64::max);
    let lo = lo.unwrap_or(hull_lo - 0.5);
    let hi = hi.unwrap_or(hull_hi + 0.5);
    if !(lo < hi) {
        return Err(Error::domain("lo must be below hi"));
    }
    match format {
        Format::Json => {
            let bands = if a.dim() == 1 {
                band_report(&a, lo, hi, samples)?
                    .intervals
                    .into_iter()
                    .map(|(l, h, m)| BandOut { lo: l, hi: h, multiplicity: m })
                    .collect()
            } else {
                Vec::new()
            };
            to_json_doc(&BandsDoc {
                dim: a.dim(),
                fiber: a.fiber(),
                lo,
                hi,
                samples,
                bands,
                branch_ranges: witness,
            })
        }
        Format::Csv => {
            if a.dim() != 1 {
                return Err(Error::domain(
                    "dispersion table is one-dimensional; use --format json",
                ));
            }
            let mut header = vec!["k".to_string()];
            for i in 0..a.fiber() {
                header.push(format!("lambda{i}"));
            }
            let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
            let mut rows = Vec::new();
            for (k, lams) in dispersion_samples(&a, samples)? {
                let mut row = vec![csv_f64(k)?];
                for l in lams {
                    row.push(csv_f64(l)?);
                }
                rows.push(row);
            }
            csv_table(&header_refs, &rows)
        }
    }
}

fn cmd_verify(config: Option<&Path>, format: Format) -> Result<(String, i32)> {
    if format == Format::Csv {
        return Err(no_csv("verify"));
    }
    let cfg: SuiteConfig = match config {
        Some(p) => crate::formats::read_json(p)?,
        None => SuiteConfig::default(),
    };
    let report = suite_run(&cfg)?;
    for c in &report.cases {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let tag = if c.negative_control { " (negative control)" } else { "" };
        eprintln!("{status} {}{tag}: residual {:.3e}", c.case, c.residual_interior);
    }
    let code = if report.pass { 0 } else { 1 };
    Ok((to_json_doc(&report)?, code))
}
