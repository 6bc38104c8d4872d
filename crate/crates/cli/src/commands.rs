//! The four subcommands: simulate, fit, summarize, density-grid.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use copmix::copula::Theta;
use copmix::inference::{
    coclustering_matrix, density_grid, lpml, modal_cluster_count, posterior_tau, post_mcmc_refit,
    select_partition,
};
use copmix::numeric::{acf, empirical_kendall_tau, mean};
use copmix::sampler::{run_chain, PosteriorDraws};
use copmix::simulation::{preset, preset_names, sample_preset, MixtureSpec, Preset};
use copmix::Dataset;

use crate::config::RunConfig;
use crate::drawsfile::{read_draws, write_draws};
use crate::error::{CliError, CliResult};
use crate::ingest::{load_dataset, write_dataset};
use crate::report::SummaryReport;

const ACF_MAX_LAG: usize = 40;

fn ensure_out_dir(cfg: &RunConfig) -> CliResult<()> {
    std::fs::create_dir_all(&cfg.out)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", cfg.out.display())))
}

fn out_path(cfg: &RunConfig, name: &str) -> PathBuf {
    cfg.out.join(name)
}

/// `simulate`: draws a dataset from a named preset, or from the manual
/// mixture spec in the config, and writes `dataset.csv`.
pub fn cmd_simulate(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    ensure_out_dir(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let data = match &cfg.preset {
        Some(name) => {
            let p = preset(name).ok_or_else(|| {
                CliError::Config(format!(
                    "unknown preset {name}; available: {}",
                    preset_names().join(", ")
                ))
            })?;
            sample_preset(&p, &mut rng).map_err(|e| CliError::Numeric(e.to_string()))?
        }
        None => {
            let family = cfg.family()?;
            let n = cfg
                .n
                .ok_or_else(|| CliError::Config("simulate needs a preset or n".into()))?;
            if cfg.mixture_weights.is_empty() {
                return Err(CliError::Config(
                    "simulate needs a preset or mixture_weights/mixture_thetas".into(),
                ));
            }
            let spec = MixtureSpec::new(
                family,
                cfg.mixture_weights.clone(),
                cfg.mixture_thetas.clone(),
                cfg.dimension,
                n,
            )
            .map_err(|e| CliError::Config(e.to_string()))?;
            copmix::simulation::sample_mixture(&spec, &mut rng)
                .map_err(|e| CliError::Numeric(e.to_string()))?
        }
    };
    let path = out_path(cfg, "dataset.csv");
    write_dataset(&data, &path)?;
    Ok(vec![path])
}

/// `fit`: runs the Gibbs sampler on the dataset and writes the draws file
/// plus the batch/trace/ACF diagnostics.
pub fn cmd_fit(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    ensure_out_dir(cfg)?;
    let data_path = cfg
        .data
        .as_ref()
        .ok_or_else(|| CliError::Config("fit needs --data".into()))?;
    let data = load_dataset(data_path, cfg.rank_transform)?;
    if data.n() < 2 {
        return Err(CliError::Data(format!(
            "fit needs at least 2 observations, got {}",
            data.n()
        )));
    }
    let mcmc = cfg.mcmc()?;
    let draws = run_chain(&mcmc, &data).map_err(|e| CliError::Numeric(e.to_string()))?;

    let draws_path = out_path(cfg, "draws.csv");
    write_draws(&draws, &draws_path)?;

    let acc_path = out_path(cfg, "acceptance.csv");
    let mut acc = String::from("batch,iteration,accept_theta,accept_a,accept_b,kappa_theta,kappa_a,kappa_b\n");
    for b in &draws.batches {
        acc.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            b.batch, b.iteration, b.accept_theta, b.accept_a, b.accept_b, b.kappa_theta, b.kappa_a, b.kappa_b
        ));
    }
    std::fs::write(&acc_path, acc)?;

    // Trace and autocorrelation of b and the observation-pooled theta.
    let b_series: Vec<f64> = draws.draws.iter().map(|d| d.b).collect();
    let theta_series: Vec<f64> = draws
        .draws
        .iter()
        .map(|d| mean(&d.labels.iter().map(|&l| d.theta_star[l]).collect::<Vec<_>>()))
        .collect();
    let trace_path = out_path(cfg, "trace.csv");
    let mut trace = String::from("iter,b,theta_pooled\n");
    for (d, (bv, tv)) in draws.draws.iter().zip(b_series.iter().zip(&theta_series)) {
        trace.push_str(&format!("{},{},{}\n", d.iteration, bv, tv));
    }
    std::fs::write(&trace_path, trace)?;

    let acf_path = out_path(cfg, "acf.csv");
    let acf_b = acf(&b_series, ACF_MAX_LAG);
    let acf_t = acf(&theta_series, ACF_MAX_LAG);
    let mut acf_text = String::from("lag,acf_b,acf_theta_pooled\n");
    for (lag, (ab, at)) in acf_b.iter().zip(&acf_t).enumerate() {
        acf_text.push_str(&format!("{lag},{ab},{at}\n"));
    }
    std::fs::write(&acf_path, acf_text)?;

    Ok(vec![draws_path, acc_path, trace_path, acf_path])
}

/// Rebuilds in-memory posterior draws from a draws file, recomputing the
/// per-observation log densities against the dataset.
pub fn rebuild_draws(cfg: &RunConfig, data: &Dataset) -> CliResult<PosteriorDraws> {
    let draws_path = cfg
        .draws
        .clone()
        .unwrap_or_else(|| out_path(cfg, "draws.csv"));
    let (meta, mut records) = read_draws(&draws_path)?;
    if meta.n != data.n() || meta.p != data.p() {
        return Err(CliError::Data(format!(
            "draws file is for n={} p={}, dataset has n={} p={}",
            meta.n,
            meta.p,
            data.n(),
            data.p()
        )));
    }
    if let Some(f) = cfg.family {
        if f != meta.family {
            return Err(CliError::Config(format!(
                "family {f} conflicts with draws file family {}",
                meta.family
            )));
        }
    }
    for d in &mut records {
        let mut lds = Vec::with_capacity(data.n());
        for i in 0..data.n() {
            let theta = Theta::unchecked(meta.family, d.theta_star[d.labels[i]]);
            match theta.log_density(data.point(i)) {
                Ok(v) if v.is_finite() => lds.push(v),
                _ => {
                    return Err(CliError::Numeric(format!(
                        "non-finite log-density for observation {i} at theta={} (iteration {})",
                        theta.value(),
                        d.iteration
                    )))
                }
            }
        }
        d.log_densities = lds;
    }
    Ok(PosteriorDraws {
        family: meta.family,
        n: meta.n,
        p: meta.p,
        n_iter: meta.n_iter,
        burn_in: meta.burn_in,
        thin: meta.thin,
        seed: meta.seed,
        draws: records,
        batches: Vec::new(),
        final_kappa_theta: f64::NAN,
        final_kappa_a: f64::NAN,
        final_kappa_b: f64::NAN,
    })
}

/// `summarize`: LPML, posterior Kendall tau, modal cluster count, the
/// Binder-selected partition and its refit table, written to `summary.txt`.
pub fn cmd_summarize(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    ensure_out_dir(cfg)?;
    let data_path = cfg
        .data
        .as_ref()
        .ok_or_else(|| CliError::Config("summarize needs --data".into()))?;
    let data = load_dataset(data_path, cfg.rank_transform)?;
    let draws = rebuild_draws(cfg, &data)?;
    let mut cfg_for_g0 = cfg.clone();
    cfg_for_g0.family = Some(draws.family);
    let g0 = cfg_for_g0.centering()?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let lp = lpml(&draws);
    let tau = posterior_tau(&draws, &g0, &mut rng);
    let modal_m = modal_cluster_count(&draws);
    let psm = coclustering_matrix(&draws);
    let partition = select_partition(&psm, cfg.binder_candidates, &mut rng);
    let clusters = post_mcmc_refit(&partition, &data, &g0, &draws, &mut rng)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    let empirical = empirical_kendall_tau(&data.column(0), &data.column(1));

    let report = SummaryReport {
        draws: &draws,
        lpml: &lp,
        tau: &tau,
        empirical_tau: empirical,
        modal_m,
        partition: &partition,
        clusters: &clusters,
    };
    let path = out_path(cfg, "summary.txt");
    std::fs::write(&path, report.render())?;
    Ok(vec![path])
}

/// `density-grid`: posterior-mean predictive bivariate density on a G x G
/// grid, written with a one-line header.
pub fn cmd_density_grid(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    ensure_out_dir(cfg)?;
    let data_path = cfg
        .data
        .as_ref()
        .ok_or_else(|| CliError::Config("density-grid needs --data".into()))?;
    let data = load_dataset(data_path, cfg.rank_transform)?;
    let draws = rebuild_draws(cfg, &data)?;
    let mut cfg_for_g0 = cfg.clone();
    cfg_for_g0.family = Some(draws.family);
    let g0 = cfg_for_g0.centering()?;

    let (i, j) = cfg.pair;
    if i == 0 || j == 0 {
        return Err(CliError::Config("pair coordinates are 1-based".into()));
    }
    let pair = (i - 1, j - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let grid = density_grid(&draws, &g0, cfg.grid, pair, &mut rng)
        .map_err(|e| CliError::Config(e.to_string()))?;

    let path = out_path(cfg, "density_grid.csv");
    let mut out = format!(
        "# resolution={} pair={},{} family={}\n",
        grid.resolution,
        pair.0 + 1,
        pair.1 + 1,
        draws.family
    );
    for row in grid.values.chunks(grid.resolution) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.6e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    std::fs::write(&path, out)?;
    Ok(vec![path])
}
