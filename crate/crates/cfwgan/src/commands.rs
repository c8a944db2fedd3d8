//! The experiment commands, on fully resolved flag sets.

use crate::cli::{ConvergenceFlags, Fit1dFlags, SgdFlags, SlicedBoundFlags, SlicedCompareFlags};
use crate::error::{CliError, CliResult};
use crate::io::{emit, fmt_float, read_samples, ResultTable, VERSION};
use crate::parallel;
use crate::parse::{self, RankRule};
use cfwgan_core::distributions::{sample_matrix, ContinuousDistribution1D, SampleMatrix};
use cfwgan_core::kde::KdeModel;
use cfwgan_core::ot1d::Order;
use cfwgan_core::rng;
use cfwgan_core::sgd::{fit_w1, SgdConfig};
use cfwgan_core::sliced::{
    column, optimal_theta_w1, optimal_theta_w2, paired_difference, r_pca, sigma_tilde, summarize,
    ub_value, SigmaTilde, SlicedEvalConfig,
};
use cfwgan_core::special::gamma_ratio_sq;
use cfwgan_core::wgan1d::{solve_w2, solve_w2_linear, solve_w2_plugin, Branch, SolveReport};
use std::time::Instant;

/// Tag of the projection seed derived from the root seed.
pub const PROJECTION_STREAMS: u64 = 1;

fn usage(msg: &str) -> CliError {
    CliError::Usage(msg.into())
}

/// `n` draws from the law on stream `index` under the seed.
fn draw(law: &ContinuousDistribution1D, n: usize, seed: u64, index: u64) -> Vec<f64> {
    let mut r = rng::stream(seed, index);
    (0..n).map(|_| law.sample(&mut r)).collect()
}

fn sample_column(x: &SampleMatrix, col: usize) -> CliResult<Vec<f64>> {
    if col >= x.cols() {
        return Err(CliError::Precondition(format!(
            "column {col} out of range: the file has {} columns",
            x.cols()
        )));
    }
    Ok(x.column(col))
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::NonNegativeTheta2 => "nonnegative",
        Branch::NonPositiveTheta2 => "nonpositive",
    }
}

pub fn fit1d(f: Fit1dFlags) -> CliResult<()> {
    let activation = parse::activation(f.activation.as_deref().unwrap_or("linear"))?;
    let (report, source): (SolveReport, &str) = match (&f.dist, &f.data) {
        (Some(d), None) => (solve_w2(&parse::dist(d)?, activation)?, "population"),
        (None, Some(path)) => {
            let x = sample_column(&read_samples(path)?, f.column.unwrap_or(0))?;
            let kde = KdeModel::fit_with(
                &x,
                parse::bandwidth(f.common.bandwidth.as_deref().unwrap_or("cdf"))?,
            )?;
            (solve_w2_plugin(&x, &kde, activation)?, "plug-in")
        }
        _ => return Err(usage("give exactly one of --dist or --data")),
    };
    let p = report.params;
    println!("theta1={}", fmt_float(p.theta1));
    println!("theta2={}", fmt_float(p.theta2));
    println!("branch={}", branch_name(report.branch));
    println!("objective={}", fmt_float(report.objective_value));
    if let Some(out) = &f.common.out {
        let json = serde_json::json!({
            "version": VERSION,
            "config": f,
            "source": source,
            "activation": activation.name(),
            "theta1": p.theta1,
            "theta2": p.theta2,
            "branch": branch_name(report.branch),
            "objective": report.objective_value,
            "condition": report.condition_value,
        });
        emit(
            Some(out),
            &(serde_json::to_string_pretty(&json).expect("report serializes") + "\n"),
        )?;
    }
    Ok(())
}

pub fn convergence(f: ConvergenceFlags) -> CliResult<()> {
    let dist_text = f.dist.clone().ok_or_else(|| usage("--dist is required"))?;
    let law = parse::dist(&dist_text)?;
    let sizes = parse::usize_list(
        f.sizes
            .as_deref()
            .unwrap_or("1000,2000,5000,10000,20000,50000"),
        "--sizes",
    )?;
    if sizes[0] < 2 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(usage("--sizes must be strictly ascending and at least 2"));
    }
    let trials = f.trials.unwrap_or(10);
    let bandwidth = parse::bandwidth(f.common.bandwidth.as_deref().unwrap_or("cdf"))?;
    let seed = f.common.seed.unwrap_or(0);
    let truth = solve_w2_linear(&law)?.params.theta2;
    let mut f = f;
    f.sizes.get_or_insert_with(|| {
        sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",")
    });
    f.trials.get_or_insert(trials);
    let mut table = ResultTable::new(&f, &["dist", "M", "trial", "theta2_hat", "abs_err"])?;
    let largest = *sizes.last().expect("nonempty");
    for trial in 0..trials {
        // Sizes are nested prefixes of one draw per trial.
        let x = draw(&law, largest, seed, trial as u64);
        for &m in &sizes {
            let kde = KdeModel::fit_with(&x[..m], bandwidth)?;
            let est = cfwgan_core::wgan1d::empirical_theta2_linear(&x[..m], &kde)?;
            table.row([
                dist_text.clone(),
                m.to_string(),
                trial.to_string(),
                fmt_float(est),
                fmt_float((est - truth).abs()),
            ])?;
        }
    }
    emit(f.common.out.as_deref(), &table.into_string()?)
}

pub fn sgd_w1(f: SgdFlags) -> CliResult<()> {
    let seed = f.common.seed.unwrap_or(0);
    let d = SgdConfig::default();
    let mut f = f;
    let x = match (&f.dist, &f.data) {
        (Some(text), None) => {
            let n = *f.samples.get_or_insert(100_000);
            draw(&parse::dist(text)?, n, seed, 1)
        }
        (None, Some(path)) => sample_column(&read_samples(path)?, f.column.unwrap_or(0))?,
        _ => return Err(usage("give exactly one data source: --dist or --data")),
    };
    let cfg = SgdConfig {
        learning_rate: *f.learning_rate.get_or_insert(d.learning_rate),
        momentum: *f.momentum.get_or_insert(d.momentum),
        batch_size: *f.batch_size.get_or_insert(d.batch_size),
        iterations: *f.iterations.get_or_insert(d.iterations),
        seed,
        init: (
            *f.init_theta1.get_or_insert(d.init.0),
            *f.init_theta2.get_or_insert(d.init.1),
        ),
        activation: d.activation,
        bandwidth: parse::bandwidth(f.common.bandwidth.as_deref().unwrap_or("cdf"))?,
    };
    let (g, trace) = fit_w1(&x, &cfg)?;
    let mut table = ResultTable::new(&f, &["iteration", "theta1", "theta2", "residual_norm"])?;
    for (i, p) in trace.points.iter().enumerate() {
        table.row([
            i.to_string(),
            fmt_float(p.theta1),
            fmt_float(p.theta2),
            fmt_float(p.residual_norm),
        ])?;
    }
    emit(f.common.out.as_deref(), &table.into_string()?)?;
    eprintln!(
        "theta1={} theta2={}",
        fmt_float(g.theta1),
        fmt_float(g.theta2)
    );
    Ok(())
}

pub fn sliced_compare(f: SlicedCompareFlags) -> CliResult<()> {
    let mut f = f;
    let seed = f.common.seed.unwrap_or(0);
    let threads = f.common.threads.unwrap_or(1);
    if threads == 0 {
        return Err(usage("--threads must be at least 1"));
    }
    let q = Order::from_int(*f.q.get_or_insert(2)).map_err(|_| usage("--q must be 1 or 2"))?;
    let rule = RankRule::parse(f.r.get_or_insert_with(|| "2/3".into()))?;
    let n_projections = *f.projections.get_or_insert(20_000);
    let timing = *f.timing.get_or_insert(false);
    // Data rows and projections must not share streams.
    let cfg = SlicedEvalConfig {
        n_projections,
        q,
        seed: rng::derive_seed(seed, PROJECTION_STREAMS),
        parallel: threads > 1,
    };
    let datasets: Vec<SampleMatrix> = match &f.data {
        Some(path) => {
            f.d = None;
            vec![read_samples(path)?]
        }
        None => {
            let spec = parse::data_spec(
                f.data_spec
                    .get_or_insert_with(|| "iid:laplace:0,0.7071067811865476".into()),
            )?;
            let m = *f.samples.get_or_insert(20_000);
            let dims = parse::usize_list(f.d.get_or_insert_with(|| "30".into()), "--d")?;
            dims.iter()
                .map(|&d| sample_matrix(&spec, d, m, seed))
                .collect::<Result<_, _>>()?
        }
    };
    let mut table = ResultTable::new(
        &f,
        &[
            "d",
            "r",
            "method",
            "q",
            "n_projections",
            "seed",
            "value",
            "stderr",
            "wall_ms",
            "flops_note",
        ],
    )?;
    for x in &datasets {
        let d = x.cols();
        let proposed_r = f.proposed_r.unwrap_or(d);
        if proposed_r < d {
            return Err(CliError::Precondition(format!(
                "the isotropic generator needs r >= d (got r = {proposed_r}, d = {d})"
            )));
        }
        let r = rule.resolve(d);
        if r > d {
            return Err(CliError::Precondition(format!(
                "r-PCA rank {r} exceeds d = {d}"
            )));
        }
        let t0 = Instant::now();
        let st = sigma_tilde(x);
        let proposed = match q {
            Order::Two => optimal_theta_w2(d, proposed_r, st)?,
            Order::One => optimal_theta_w1(d, proposed_r, st)?,
        };
        let proposed_ms = t0.elapsed().as_secs_f64() * 1e3;
        let t1 = Instant::now();
        let pca = r_pca(x, r)?;
        let pca_ms = t1.elapsed().as_secs_f64() * 1e3;
        let terms = parallel::sliced_terms(x, &[&proposed, &pca], &cfg, threads)?;
        let (a, b) = (column(&terms, 0), column(&terms, 1));
        let rows = [
            (
                "proposed",
                proposed_r,
                summarize(&a, q),
                Some(proposed_ms),
                "O(Md) for the mean squared norm",
            ),
            (
                "r-pca",
                r,
                summarize(&b, q),
                Some(pca_ms),
                "O(Md^2 + d^3) for covariance and eigendecomposition",
            ),
            (
                "difference",
                r,
                paired_difference(&a, &b, q)?,
                None,
                "proposed minus r-pca; jackknife over shared projections",
            ),
        ];
        for (method, rank, est, ms, note) in rows {
            let wall = match (timing, ms) {
                (true, Some(ms)) => format!("{ms:.3}"),
                _ => String::new(),
            };
            table.row([
                d.to_string(),
                rank.to_string(),
                method.to_string(),
                q.as_f64().to_string(),
                n_projections.to_string(),
                seed.to_string(),
                fmt_float(est.value),
                fmt_float(est.stderr),
                wall,
                note.to_string(),
            ])?;
        }
    }
    emit(f.common.out.as_deref(), &table.into_string()?)
}

pub fn sliced_bound(f: SlicedBoundFlags) -> CliResult<()> {
    let mut f = f;
    let dims = parse::usize_list(
        f.d.get_or_insert_with(|| "1,2,3,5,10,20,50,100,200,500,1000,2000".into()),
        "--d",
    )?;
    if dims.contains(&0) {
        return Err(usage("--d entries must be at least 1"));
    }
    let sigma = *f.sigma.get_or_insert(1.0);
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(usage("--sigma must be finite and nonnegative"));
    }
    let mut table = ResultTable::new(&f, &["d", "g", "ub_value"])?;
    for d in dims {
        let g = gamma_ratio_sq(d as u64)?;
        table.row([
            d.to_string(),
            fmt_float(g),
            fmt_float(ub_value(d, SigmaTilde(sigma))?),
        ])?;
    }
    emit(f.common.out.as_deref(), &table.into_string()?)
}
