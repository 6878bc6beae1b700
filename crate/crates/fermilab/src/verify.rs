//! Verification harness: residual-versus-box studies, decay fits, embedding
//! verdicts, oracle comparisons, and an aggregate suite with expected-fail
//! accounting for negative controls.
//!
//! Every report is self-describing: the thresholds it was judged against are
//! embedded in it, and `pass` is exactly the conjunction of those checks.
//! An `embedded: true` verdict always carries the band interval that
//! witnesses it.

use fermilab_core::coupling::{
    self, DefectVariant, TwoGraphAngles, embed_bound_state, interior_band_witness,
};
use fermilab_core::greens::{
    self, brute_force_green, fourth_order_chain_defect, resolvent_delta, support_radius,
    synth_defect,
};
use fermilab_core::lattice::{LatticeField, PeriodicStencil, SiteDiagonal, eigen_residual};
use fermilab_core::num::cmat::CMat;
use fermilab_core::qgraph::chain::{ChainBoundState, chain_bound_state, chain_bound_state_with_nu};
use fermilab_core::qgraph::grid::{GridBoundState, grid_bound_state, grid_bound_state_with_nu};
use fermilab_core::qgraph::{Bc, chain, grid};
use fermilab_core::{C64, Error, Result, models};
use serde::{Deserialize, Serialize};

use crate::formats::DecayOut;

/// All pass/fail cut-offs in one place. A config file may override any
/// subset; the defaults are the ones the acceptance checks use.
#[derive(Serialize, Deserialize, Clone, Copy, Debug)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// interior residual on the largest box must not exceed this
    pub residual_max: f64,
    /// each residual may grow at most this factor from the previous box
    pub trend_factor: f64,
    /// residuals below this floor count as rounding noise for the trend test
    pub trend_floor: f64,
    /// negative controls must push the residual at least this high
    pub control_min: f64,
    /// exponential decay fits must reach this r-squared
    pub r2_min: f64,
    /// relative mismatch against a direct-solve oracle
    pub oracle_rel_max: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            residual_max: 1e-8,
            trend_factor: 2.0,
            trend_floor: 1e-12,
            control_min: 1e-3,
            r2_min: 0.99,
            oracle_rel_max: 1e-6,
        }
    }
}

/// One verified case. `pass` is the conjunction of every check the fields
/// record, judged against the embedded `thresholds`.
#[derive(Serialize, Clone)]
pub struct VerificationReport {
    pub case: String,
    pub kind: String,
    pub negative_control: bool,
    /// interior residual on the largest box
    pub residual_interior: f64,
    /// `(box, interior residual)` pairs, ascending box
    pub residual_trend: Vec<(i64, f64)>,
    pub embedded: bool,
    /// band interval certifying the embedding; present whenever `embedded`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay: Option<DecayOut>,
    /// relative mismatch against an independent direct solve
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_diff: Option<f64>,
    /// `(box, numeric support radius)` pairs when support growth was probed
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_support: Option<Vec<(i64, i64)>>,
    /// for negative controls: whether the residual blew past `control_min`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub control_fired: Option<bool>,
    pub thresholds: Thresholds,
    pub pass: bool,
}

struct ReportParts {
    residual_trend: Vec<(i64, f64)>,
    embedded: bool,
    witness: Option<(f64, f64)>,
    decay: Option<DecayOut>,
    oracle_diff: Option<f64>,
    tail_support: Option<Vec<(i64, i64)>>,
}

fn assemble(
    case: &str,
    kind: &str,
    negative_control: bool,
    parts: ReportParts,
    thr: &Thresholds,
) -> Result<VerificationReport> {
    let trend = &parts.residual_trend;
    if trend.is_empty() {
        return Err(Error::domain("no boxes to verify"));
    }
    let residual_interior = trend[trend.len() - 1].1;
    let residual_ok = residual_interior <= thr.residual_max;
    let trend_ok = trend
        .windows(2)
        .all(|w| w[1].1 <= thr.trend_factor * w[0].1.max(thr.trend_floor));
    let witness_ok = !parts.embedded || parts.witness.is_some();
    let decay_ok = parts.decay.as_ref().is_none_or(|d| d.r2 >= thr.r2_min && d.alpha > 0.0);
    let oracle_ok = parts.oracle_diff.is_none_or(|d| d <= thr.oracle_rel_max);
    let tail_ok = parts
        .tail_support
        .as_ref()
        .is_none_or(|t| t.len() < 2 || t.windows(2).all(|w| w[1].1 > w[0].1));
    let pass = residual_ok && trend_ok && witness_ok && decay_ok && oracle_ok && tail_ok;
    let control_fired =
        if negative_control { Some(residual_interior >= thr.control_min) } else { None };
    Ok(VerificationReport {
        case: case.to_string(),
        kind: kind.to_string(),
        negative_control,
        residual_interior,
        residual_trend: parts.residual_trend,
        embedded: parts.embedded,
        witness: parts.witness,
        decay: parts.decay,
        oracle_diff: parts.oracle_diff,
        tail_support: parts.tail_support,
        control_fired,
        thresholds: *thr,
        pass,
    })
}

/// Witness lookup that treats "not interior to any band" as a clean
/// `embedded = false` rather than an error.
fn embedding_verdict(a: &PeriodicStencil, x: f64) -> Result<(bool, Option<(f64, f64)>)> {
    match interior_band_witness(a, x) {
        Ok(w) => Ok((true, Some(w))),
        Err(Error::Domain(msg)) if msg.contains("embedding failure") => Ok((false, None)),
        Err(e) => Err(e),
    }
}

/// Residual-versus-box study of a lattice eigenpair with a finite-range
/// defect: residual at each box, decay fit and support radii on the largest,
/// and an embedding verdict for the eigenvalue.
pub fn verify_combinatorial(
    case: &str,
    a: &PeriodicStencil,
    defect: &SiteDiagonal,
    lambda: f64,
    boxes: &[i64],
    mut u_at: impl FnMut(i64) -> Result<LatticeField>,
    oracle_diff: Option<f64>,
    negative_control: bool,
    thr: &Thresholds,
) -> Result<VerificationReport> {
    if boxes.is_empty() {
        return Err(Error::domain("no boxes to verify"));
    }
    let mut sorted = boxes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut residual_trend = Vec::with_capacity(sorted.len());
    let mut tail = Vec::with_capacity(sorted.len());
    let mut last: Option<LatticeField> = None;
    for &b in &sorted {
        if b < 2 {
            return Err(Error::domain("box must be at least 2"));
        }
        let u = u_at(b)?;
        if u.dim() != a.dim() || u.fiber() != a.fiber() || u.half_width() != b {
            return Err(Error::domain("field shape does not match stencil and box"));
        }
        let r = eigen_residual(a, Some(defect), &u, lambda)?;
        residual_trend.push((b, r));
        tail.push((b, support_radius(&u)));
        last = Some(u);
    }
    let u_last = last.expect("at least one box");
    let decay = greens::fit_decay(&u_last).ok().map(|d| DecayOut::from(&d));
    let (embedded, witness) = embedding_verdict(a, lambda)?;
    let parts = ReportParts {
        residual_trend,
        embedded,
        witness,
        decay,
        oracle_diff,
        tail_support: Some(tail),
    };
    assemble(case, "combinatorial", negative_control, parts, thr)
}

/// A quantum-graph bound state to verify, with every vertex condition
/// already rechecked by its constructor.
pub enum QuantumModel<'a> {
    Chain(&'a ChainBoundState),
    Grid(&'a GridBoundState),
}

/// Report over a quantum-graph bound state: the vertex and defect-edge
/// residuals, the embedding verdict the state carries, and (on the grid)
/// the decay fit and support growth.
pub fn verify_quantum(
    case: &str,
    model: QuantumModel<'_>,
    negative_control: bool,
    thr: &Thresholds,
) -> Result<VerificationReport> {
    let parts = match model {
        QuantumModel::Chain(st) => {
            let residual = st.max_vertex_residual.max(st.defect_flux_residual);
            let span = st.cells.last().map(|c| c.g).unwrap_or(0);
            ReportParts {
                residual_trend: vec![(span, residual)],
                embedded: st.embedded,
                witness: st.band_interval,
                decay: None,
                oracle_diff: None,
                tail_support: None,
            }
        }
        QuantumModel::Grid(st) => ReportParts {
            residual_trend: vec![(st.k_field.half_width(), st.residual)],
            embedded: st.embedded,
            witness: st.band_interval,
            decay: Some(DecayOut::from(&st.decay)),
            oracle_diff: None,
            tail_support: Some(st.support.clone()),
        },
    };
    let kind = match model {
        QuantumModel::Chain(_) => "quantum_chain",
        QuantumModel::Grid(_) => "quantum_grid",
    };
    assemble(case, kind, negative_control, parts, thr)
}

fn parse_bc(s: &str) -> Result<Bc> {
    match s {
        "neumann" => Ok(Bc::Neumann),
        "dirichlet" => Ok(Bc::Dirichlet),
        other => Err(Error::Domain(format!(
            "unknown boundary class {other:?}: expected neumann or dirichlet"
        ))),
    }
}

fn parse_variant(s: &str) -> Result<DefectVariant> {
    match s {
        "uniform" => Ok(DefectVariant::Uniform),
        "projected" => Ok(DefectVariant::Projected),
        other => Err(Error::Domain(format!(
            "unknown defect variant {other:?}: expected uniform or projected"
        ))),
    }
}

fn base_stencil(name: &str) -> Result<PeriodicStencil> {
    match name {
        "chain4" => Ok(models::fourth_order_chain()),
        "chain" => Ok(models::nn_chain()),
        "grid2" => Ok(models::grid_adjacency(2)),
        other => Err(Error::Domain(format!(
            "unknown base stencil {other:?}: expected chain, chain4, or grid2"
        ))),
    }
}

/// One case descriptor in a suite config. Field checking is loose here:
/// `flatten` forwards everything except `id` and `negative_control` to the
/// kind payload, so strictness lives in the payload types.
#[derive(Deserialize, Clone)]
pub struct Case {
    pub id: String,
    #[serde(default)]
    pub negative_control: bool,
    #[serde(flatten)]
    pub kind: CaseKind,
}

/// What a case runs. Shift fields deliberately corrupt the construction and
/// exist for negative controls.
#[derive(Deserialize, Clone)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CaseKind {
    /// Closed-form alternating defect family on the fourth-order chain.
    ChainDefect {
        alpha: f64,
        boxes: Vec<i64>,
        #[serde(default)]
        v0_shift: f64,
    },
    /// Rank-one defect synthesized from the lattice Green's function,
    /// optionally compared against a Dirichlet-truncated direct solve.
    GreensDefect {
        base: String,
        lambda: f64,
        quad_n: usize,
        boxes: Vec<i64>,
        #[serde(default)]
        oracle_box: Option<i64>,
        #[serde(default)]
        v0_shift: f64,
    },
    /// Two-layer construction: the Green's-function eigenpair lifted through
    /// an involution so its eigenvalue lands inside a band of the stack.
    Embedding {
        base: String,
        lambda: f64,
        theta: f64,
        phi: f64,
        #[serde(default)]
        lambda0: Option<f64>,
        variant: String,
        quad_n: usize,
        boxes: Vec<i64>,
    },
    /// Ladder quantum graph folded by parity, defect rung retuned.
    ChainGraph {
        mu: f64,
        cells: usize,
        #[serde(default)]
        nu_shift: f64,
    },
    /// Planar quantum graph with dangling edges, defect edge retuned.
    GridGraph {
        mu: f64,
        bc: String,
        #[serde(rename = "box")]
        half_width: i64,
        quad_n: usize,
        #[serde(default)]
        nu_shift: f64,
    },
}

/// Suite configuration: thresholds, a case list, and an optional id filter.
/// `cases` omitted means the built-in default list; `only` selects a subset
/// by id and rejects ids that are not present.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub thresholds: Option<Thresholds>,
    #[serde(default)]
    pub cases: Option<Vec<Case>>,
    #[serde(default)]
    pub only: Option<Vec<String>>,
}

/// Aggregate suite result. `pass` ignores negative controls (they are
/// expected to fail); `controls_fired` says whether every control's residual
/// actually blew up.
#[derive(Serialize)]
pub struct SuiteReport {
    pub thresholds: Thresholds,
    pub cases: Vec<VerificationReport>,
    pub controls_expected: usize,
    pub controls_fired: usize,
    pub pass: bool,
}

/// The default case list: every construction the library certifies, plus
/// one negative control of each flavor.
pub fn default_cases() -> Vec<Case> {
    fn case(id: &str, negative_control: bool, kind: CaseKind) -> Case {
        Case { id: id.to_string(), negative_control, kind }
    }
    vec![
        case(
            "chain-defect",
            false,
            CaseKind::ChainDefect { alpha: core::f64::consts::LN_2, boxes: vec![10, 20, 50], v0_shift: 0.0 },
        ),
        case(
            "greens-1d",
            false,
            CaseKind::GreensDefect {
                base: "chain".to_string(),
                lambda: -3.0,
                quad_n: 64,
                boxes: vec![8, 16, 24],
                oracle_box: Some(40),
                v0_shift: 0.0,
            },
        ),
        case(
            "greens-2d",
            false,
            CaseKind::GreensDefect {
                base: "grid2".to_string(),
                lambda: -5.0,
                quad_n: 64,
                boxes: vec![6, 10, 14],
                oracle_box: Some(20),
                v0_shift: 0.0,
            },
        ),
        case(
            "embedding-uniform",
            false,
            CaseKind::Embedding {
                base: "grid2".to_string(),
                lambda: -5.0,
                theta: 0.9,
                phi: 0.4,
                lambda0: None,
                variant: "uniform".to_string(),
                quad_n: 64,
                boxes: vec![8, 12, 16],
            },
        ),
        case(
            "embedding-projected",
            false,
            CaseKind::Embedding {
                base: "grid2".to_string(),
                lambda: -5.0,
                theta: 0.9,
                phi: 0.4,
                lambda0: None,
                variant: "projected".to_string(),
                quad_n: 64,
                boxes: vec![8, 12, 16],
            },
        ),
        case(
            "chain-graph",
            false,
            CaseKind::ChainGraph { mu: core::f64::consts::TAU + 0.1, cells: 30, nu_shift: 0.0 },
        ),
        case(
            "grid-graph",
            false,
            CaseKind::GridGraph {
                mu: 0.5,
                bc: "dirichlet".to_string(),
                half_width: 6,
                quad_n: 64,
                nu_shift: 0.0,
            },
        ),
        case(
            "control-combinatorial",
            true,
            CaseKind::ChainDefect { alpha: core::f64::consts::LN_2, boxes: vec![20], v0_shift: 0.1 },
        ),
        case(
            "control-quantum",
            true,
            CaseKind::GridGraph {
                mu: 0.5,
                bc: "dirichlet".to_string(),
                half_width: 6,
                quad_n: 64,
                nu_shift: 1e-2,
            },
        ),
    ]
}

fn shift_origin(v: &SiteDiagonal, dim: usize, shift: f64) -> SiteDiagonal {
    let mut out = SiteDiagonal::new();
    let origin = vec![0i64; dim];
    let mut seen_origin = false;
    for (x, m) in v.entries() {
        if *x == origin {
            seen_origin = true;
            let bump = CMat::identity(m.rows()).scale(C64::new(shift, 0.0));
            out.insert(x.clone(), m.add(&bump));
        } else {
            out.insert(x.clone(), m.clone());
        }
    }
    if !seen_origin && shift != 0.0 {
        out.insert(origin, CMat::identity(1).scale(C64::new(shift, 0.0)));
    }
    out
}

/// Runs one case against the thresholds.
pub fn run_case(c: &Case, thr: &Thresholds) -> Result<VerificationReport> {
    match &c.kind {
        CaseKind::ChainDefect { alpha, boxes, v0_shift } => {
            let fam = fourth_order_chain_defect(*alpha)?;
            let a = models::fourth_order_chain();
            let defect = shift_origin(&fam.potential(), 1, *v0_shift);
            verify_combinatorial(
                &c.id,
                &a,
                &defect,
                fam.lambda,
                boxes,
                |b| Ok(fam.field(b)),
                None,
                c.negative_control,
                thr,
            )
        }
        CaseKind::GreensDefect { base, lambda, quad_n, boxes, oracle_box, v0_shift } => {
            let a = base_stencil(base)?;
            let b_max = boxes.iter().copied().max().ok_or_else(|| Error::domain("no boxes"))?;
            let g = resolvent_delta(&a, *lambda, *quad_n, b_max, 0)?;
            let defect = shift_origin(&synth_defect(&g)?, a.dim(), *v0_shift);
            let oracle_diff = match oracle_box {
                Some(ob) => Some(oracle_rel_diff(&a, *lambda, *quad_n, b_max, *ob)?),
                None => None,
            };
            verify_combinatorial(
                &c.id,
                &a,
                &defect,
                *lambda,
                boxes,
                |b| resolvent_delta(&a, *lambda, *quad_n, b, 0).map(|g| g.u),
                oracle_diff,
                c.negative_control,
                thr,
            )
        }
        CaseKind::Embedding { base, lambda, theta, phi, lambda0, variant, quad_n, boxes } => {
            let a = base_stencil(base)?;
            let variant = parse_variant(variant)?;
            let l0 = match lambda0 {
                Some(v) => *v,
                None => coupling::select_lambda0(&a, *lambda)?,
            };
            let angles = TwoGraphAngles { theta: *theta, phi: *phi, lambda0: l0 };
            let mut sorted = boxes.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.is_empty() {
                return Err(Error::domain("no boxes to verify"));
            }
            let mut residual_trend = Vec::with_capacity(sorted.len());
            let mut tail = Vec::with_capacity(sorted.len());
            let mut last_pair = None;
            for &b in &sorted {
                let g = resolvent_delta(&a, *lambda, *quad_n, b, 0)?;
                let defect = synth_defect(&g)?;
                let pair = embed_bound_state(&a, &defect, &g.u, *lambda, &angles, variant)?;
                residual_trend.push((b, pair.residual));
                tail.push((b, support_radius(&pair.state.combined)));
                last_pair = Some(pair);
            }
            let pair = last_pair.expect("at least one box");
            let decay = greens::fit_decay(&pair.state.combined).ok().map(|d| DecayOut::from(&d));
            let parts = ReportParts {
                residual_trend,
                embedded: true,
                witness: Some(pair.witness),
                decay,
                oracle_diff: None,
                tail_support: Some(tail),
            };
            assemble(&c.id, "embedding", c.negative_control, parts, thr)
        }
        CaseKind::ChainGraph { mu, cells, nu_shift } => {
            let st = if *nu_shift == 0.0 {
                chain_bound_state(*mu, *cells)?
            } else {
                let nu = chain::chain_defect_nu(*mu, 0)? + nu_shift;
                chain_bound_state_with_nu(*mu, nu, *cells)?
            };
            verify_quantum(&c.id, QuantumModel::Chain(&st), c.negative_control, thr)
        }
        CaseKind::GridGraph { mu, bc, half_width, quad_n, nu_shift } => {
            let bc = parse_bc(bc)?;
            let st = if *nu_shift == 0.0 {
                grid_bound_state(bc, *mu, *half_width, *quad_n)?
            } else {
                let nu = grid::grid_nu_root(bc, *mu, *quad_n, 0)? + nu_shift;
                grid_bound_state_with_nu(bc, *mu, nu, *half_width, *quad_n)?
            };
            verify_quantum(&c.id, QuantumModel::Grid(&st), c.negative_control, thr)
        }
    }
}

/// Relative mismatch between the quadrature field and a Dirichlet-truncated
/// direct solve, on the inner half of the quadrature box where truncation
/// error is negligible.
fn oracle_rel_diff(
    a: &PeriodicStencil,
    lambda: f64,
    quad_n: usize,
    quad_box: i64,
    oracle_box: i64,
) -> Result<f64> {
    if oracle_box < quad_box {
        return Err(Error::domain("oracle box must be at least the quadrature box"));
    }
    let g = resolvent_delta(a, lambda, quad_n, quad_box, 0)?;
    let direct = brute_force_green(a, lambda, oracle_box, 0)?;
    let inner = (quad_box / 2).max(1);
    let sites = LatticeField::zeros(a.dim(), a.fiber(), inner).sites();
    let mut worst = 0.0f64;
    for site in sites {
        for comp in 0..a.fiber() {
            let q = g.u.get(&site, comp);
            let d = direct.get(&site, comp);
            let denom = q.norm().max(1e-300);
            worst = worst.max((q - d).norm() / denom);
        }
    }
    Ok(worst)
}

/// Runs a whole suite: cases in parallel, reports merged by case id.
///
/// The exit decision is `pass`: true iff every non-control case passes.
pub fn suite_run(config: &SuiteConfig) -> Result<SuiteReport> {
    let thr = config.thresholds.unwrap_or_default();
    let mut cases = match &config.cases {
        Some(list) => list.clone(),
        None => default_cases(),
    };
    {
        let mut ids: Vec<&str> = cases.iter().map(|c| c.id.as_str()).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("duplicate case id in config"));
        }
    }
    if let Some(only) = &config.only {
        for want in only {
            if !cases.iter().any(|c| &c.id == want) {
                return Err(Error::Domain(format!("unknown case id {want:?}")));
            }
        }
        cases.retain(|c| only.contains(&c.id));
    }
    let mut reports: Vec<VerificationReport> = Vec::with_capacity(cases.len());
    if !cases.is_empty() {
        let results: Vec<Result<VerificationReport>> = std::thread::scope(|scope| {
            let handles: Vec<_> =
                cases.iter().map(|c| scope.spawn(|| run_case(c, &thr))).collect();
            handles
                .into_iter()
                .map(|h| match h.join() {
                    Ok(r) => r,
                    Err(_) => Err(Error::convergence("case worker panicked")),
                })
                .collect()
        });
        for r in results {
            reports.push(r?);
        }
    }
    reports.sort_by(|x, y| x.case.cmp(&y.case));
    let controls_expected = reports.iter().filter(|r| r.negative_control).count();
    let controls_fired =
        reports.iter().filter(|r| r.negative_control && r.control_fired == Some(true)).count();
    let pass = reports.iter().filter(|r| !r.negative_control).all(|r| r.pass);
    Ok(SuiteReport { thresholds: thr, cases: reports, controls_expected, controls_fired, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_defect_case_passes() {
        let thr = Thresholds::default();
        let c = Case {
            id: "t".into(),
            negative_control: false,
            kind: CaseKind::ChainDefect {
                alpha: core::f64::consts::LN_2,
                boxes: vec![10, 20],
                v0_shift: 0.0,
            },
        };
        let r = run_case(&c, &thr).unwrap();
        assert!(r.pass);
        assert!(r.residual_interior <= 1e-12);
        assert!(r.embedded && r.witness.is_some());
        let d = r.decay.unwrap();
        assert!((d.alpha - core::f64::consts::LN_2).abs() < 1e-6);
        let t = r.tail_support.unwrap();
        assert!(t[1].1 > t[0].1);
    }

    #[test]
    fn corrupted_defect_fails_loudly() {
        let thr = Thresholds::default();
        let c = Case {
            id: "t".into(),
            negative_control: true,
            kind: CaseKind::ChainDefect {
                alpha: core::f64::consts::LN_2,
                boxes: vec![20],
                v0_shift: 0.1,
            },
        };
        let r = run_case(&c, &thr).unwrap();
        assert!(!r.pass);
        assert!(r.residual_interior >= 1e-3);
        assert_eq!(r.control_fired, Some(true));
    }

    #[test]
    fn suite_empty_config_is_empty_pass() {
        let cfg = SuiteConfig {
            thresholds: None,
            cases: Some(Vec::new()),
            only: None,
        };
        let rep = suite_run(&cfg).unwrap();
        assert!(rep.pass);
        assert!(rep.cases.is_empty());
    }

    #[test]
    fn suite_rejects_unknown_id() {
        let cfg = SuiteConfig {
            thresholds: None,
            cases: Some(Vec::new()),
            only: Some(vec!["missing".into()]),
        };
        assert!(suite_run(&cfg).is_err());
    }

    #[test]
    fn suite_filter_runs_selected_case() {
        let cfg = SuiteConfig {
            thresholds: None,
            cases: None,
            only: Some(vec!["chain-defect".into(), "control-combinatorial".into()]),
        };
        let rep = suite_run(&cfg).unwrap();
        assert_eq!(rep.cases.len(), 2);
        assert!(rep.pass);
        assert_eq!(rep.controls_expected, 1);
        assert_eq!(rep.controls_fired, 1);
        let control = rep.cases.iter().find(|r| r.negative_control).unwrap();
        assert!(!control.pass);
    }
}
