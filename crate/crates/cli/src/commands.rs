//! The four subcommands, each producing a CSV table.

use qsm_core::analytic::{average_energy_ideal_sho, loop_term_grand_potential, LoopOrder};
use qsm_core::meanfield::{build_local_modes, meanfield_weight, LennardJones, ModeStatus, NEWTON_MAX_ITER, NEWTON_TOL};
use qsm_core::quadrature::{loop_energy, loop_grand_potential};
use qsm_core::{weighted_w, CutoffPolicy, PhasePoint, QuadratureGrid, SeriesTruncation, Statistics, ThermoState, WMethod};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::config::{Command, MethodKind, RunConfig};
use crate::error::CliError;
use crate::format::fmt_g;

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Header comment, column line and rows, LF-terminated.
    pub fn render(&self, header: &str) -> String {
        let mut out = String::from(header);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn run(cfg: &RunConfig) -> Result<Table, CliError> {
    match cfg.command {
        Command::WeightProfile => weight_profile(cfg),
        Command::GrandPotential => grand_potential(cfg),
        Command::Energy => energy(cfg),
        Command::MeanfieldDemo => meanfield_demo(cfg),
    }
}

fn truncation(cfg: &RunConfig) -> Result<SeriesTruncation<f64>, CliError> {
    Ok(match cfg.nmax {
        Some(n) => SeriesTruncation::fixed(n)?,
        None => SeriesTruncation::adaptive(),
    })
}

fn method(cfg: &RunConfig) -> Result<WMethod<f64>, CliError> {
    let m = match cfg.method {
        MethodKind::Exact => WMethod::ExactSeries(truncation(cfg)?),
        MethodKind::BigW => WMethod::BigW { order: cfg.bigw_order },
        MethodKind::SmallW => WMethod::SmallW {
            order: cfg.smallw_order,
        },
    };
    m.validate()?;
    Ok(m)
}

fn grid(cfg: &RunConfig, beta: f64) -> Result<QuadratureGrid<f64>, CliError> {
    Ok(match cfg.nodes {
        Some(n) => QuadratureGrid::gauss(beta, n)?,
        None => QuadratureGrid::for_beta(beta),
    })
}

fn cutoff(cfg: &RunConfig) -> Result<CutoffPolicy<f64>, CliError> {
    Ok(match cfg.cutoff {
        Some(r) => CutoffPolicy::symmetric(r)?,
        None => CutoffPolicy::none(),
    })
}

fn state(cfg: &RunConfig, beta: f64, stats: Statistics) -> Result<ThermoState<f64>, CliError> {
    let ts = ThermoState::new(beta, cfg.z, cfg.d, stats)?;
    ts.check_convergence()?;
    Ok(ts)
}

fn weight_profile(cfg: &RunConfig) -> Result<Table, CliError> {
    let exact = WMethod::ExactSeries(truncation(cfg)?);
    let big = WMethod::BigW { order: cfg.bigw_order };
    let small = WMethod::SmallW {
        order: cfg.smallw_order,
    };
    big.validate()?;
    small.validate()?;
    let line: Vec<f64> = match cfg.line_max {
        Some(m) => (0..cfg.points).map(|k| m * k as f64 / (cfg.points - 1) as f64).collect(),
        None => vec![0.0],
    };
    let mut t = Table::new(["beta", "P", "Q", "re_exact", "re_bigW", "re_smallw", "boltzmann"]);
    for &beta in &cfg.betas {
        let ts = ThermoState::new(beta, cfg.z, cfg.d, Statistics::Boson)?;
        for &x in &line {
            let pt = PhasePoint::new(vec![x; cfg.d], vec![x; cfg.d])?;
            let mut row = vec![fmt_g(beta), fmt_g(x), fmt_g(x)];
            for m in [&exact, &big, &small] {
                row.push(fmt_g(weighted_w(&pt, &ts, m)?.re));
            }
            row.push(fmt_g((-beta * pt.energy()).exp()));
            t.push(row);
        }
    }
    Ok(t)
}

fn grand_potential(cfg: &RunConfig) -> Result<Table, CliError> {
    let m = method(cfg)?;
    let pol = cutoff(cfg)?;
    let stats = if cfg.fermion {
        Statistics::Fermion
    } else {
        Statistics::Boson
    };
    let mut t = Table::new(["beta", "analytic_l1", "quad_l1", "analytic_l2", "quad_l2"]);
    for &beta in &cfg.betas {
        let ts = state(cfg, beta, stats)?;
        let g = grid(cfg, beta)?;
        t.push(vec![
            fmt_g(beta),
            fmt_g(loop_term_grand_potential(&ts, 1)),
            fmt_g(loop_grand_potential(1, &ts, &g, &pol, &m)?),
            fmt_g(loop_term_grand_potential(&ts, 2)),
            fmt_g(loop_grand_potential(2, &ts, &g, &pol, &m)?),
        ]);
    }
    Ok(t)
}

fn energy(cfg: &RunConfig) -> Result<Table, CliError> {
    let m = method(cfg)?;
    let pol = cutoff(cfg)?;
    let l_max = LoopOrder::new(cfg.l_max)?;
    let mut t = Table::new([
        "beta".to_string(),
        format!("analytic_{}mer_boson", cfg.l_max),
        format!("analytic_{}mer_fermion", cfg.l_max),
        "quad_dimer_boson".to_string(),
        "quad_dimer_fermion".to_string(),
    ]);
    for &beta in &cfg.betas {
        let g = grid(cfg, beta)?;
        let mut analytic = Vec::new();
        let mut quad = Vec::new();
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let ts = state(cfg, beta, stats)?;
            analytic.push(average_energy_ideal_sho(&ts, l_max)?);
            quad.push(loop_energy(1, &ts, &g, &pol, &m, cfg.use_wh)? + loop_energy(2, &ts, &g, &pol, &m, cfg.use_wh)?);
        }
        t.push(vec![
            fmt_g(beta),
            fmt_g(analytic[0]),
            fmt_g(analytic[1]),
            fmt_g(quad[0]),
            fmt_g(quad[1]),
        ]);
    }
    Ok(t)
}

fn status_name(s: ModeStatus) -> &'static str {
    match s {
        ModeStatus::Valid => "valid",
        ModeStatus::NotConverged => "not_converged",
        ModeStatus::SingularHessian => "singular_hessian",
        ModeStatus::NonPositiveCurvature => "non_positive_curvature",
        ModeStatus::TooFar => "too_far",
    }
}

fn chain(cfg: &RunConfig) -> Vec<Vec<f64>> {
    if let Some(ps) = &cfg.positions {
        return ps.clone();
    }
    let centre = (cfg.particles as f64 - 1.0) / 2.0;
    (0..cfg.particles)
        .map(|k| {
            let mut q = vec![0.0; cfg.d];
            q[0] = (k as f64 - centre) * cfg.spacing;
            q
        })
        .collect()
}

fn meanfield_demo(cfg: &RunConfig) -> Result<Table, CliError> {
    let d = cfg.d;
    let config = chain(cfg);
    let model = LennardJones::new(d, cfg.confinement);
    let modes = build_local_modes(&model, &config, NEWTON_TOL, NEWTON_MAX_ITER)?;
    let tr = truncation(cfg)?;

    let axes = |prefix: &'static str| (0..d).map(move |a| format!("{prefix}_{a}"));
    let mut columns: Vec<String> = ["kind", "index", "beta", "status", "u_bar"].map(String::from).to_vec();
    columns.extend(axes("q"));
    columns.extend(axes("q_bar"));
    columns.extend(axes("omega"));
    columns.push("re_weight".into());
    columns.push("im_weight".into());
    let mut t = Table::new(columns);
    let blank = || vec![String::new(); d];

    for (j, (mode, q)) in modes.iter().zip(&config).enumerate() {
        let mut row = vec![
            "particle".to_string(),
            j.to_string(),
            String::new(),
            status_name(mode.status).to_string(),
            fmt_g(mode.u_bar),
        ];
        row.extend(q.iter().map(|&x| fmt_g(x)));
        row.extend(mode.q_bar.iter().map(|&x| fmt_g(x)));
        if mode.is_valid() {
            row.extend(mode.freqs.iter().map(|&x| fmt_g(x)));
        } else {
            row.extend(blank());
        }
        row.extend([String::new(), String::new()]);
        t.push(row);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for &beta in &cfg.betas {
        let ts = ThermoState::new(beta, cfg.z, d, Statistics::Boson)?;
        let maxwell = Normal::new(0.0, 1.0 / beta.sqrt()).expect("positive width");
        for s in 0..cfg.samples {
            let momenta: Vec<Vec<f64>> = (0..config.len())
                .map(|_| (0..d).map(|_| maxwell.sample(&mut rng)).collect())
                .collect();
            let w = meanfield_weight(&modes, &config, &momenta, &ts, &tr)?;
            let mut row = vec![
                "weight".to_string(),
                s.to_string(),
                fmt_g(beta),
                String::new(),
                String::new(),
            ];
            row.extend(blank());
            row.extend(blank());
            row.extend(blank());
            row.push(fmt_g(w.re));
            row.push(fmt_g(w.im));
            t.push(row);
        }
    }
    Ok(t)
}
