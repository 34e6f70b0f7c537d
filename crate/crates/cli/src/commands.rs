//! Implementations of the five subcommands.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use mallows_avoid::io as mio;
use mallows_avoid::perm::{CanonicalPattern, Pattern3};
use mallows_avoid::permuton::{self, CellVariant, Excursion};
use mallows_avoid::sampler::{coupled_equilibration, run_chain_with, RunConfig};
use mallows_avoid::theory;

use crate::config::*;
use crate::CliError;

/// Path with the extension replaced by `suffix` (e.g. `run.csv` ->
/// `run.meta.json`).
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    writeln!(w)?;
    Ok(())
}

/// The canonical chain equivalent of a six-pattern request: `reverse` and
/// `complement` swap inversions with non-inversions, so those routes run
/// the canonical chain at `-beta`.
fn canonical_request(pattern: Pattern3, beta: f64) -> (CanonicalPattern, f64) {
    let canonical = pattern.canonical();
    let beta = if pattern.symmetry().flips_inversions() {
        -beta
    } else {
        beta
    };
    (canonical, beta)
}

pub fn sample(args: SampleArgs) -> Result<i32, CliError> {
    let a = args.resolve()?;
    let (canonical, canonical_beta) = canonical_request(a.pattern, a.beta);
    let cfg = RunConfig {
        pattern: canonical,
        n: a.n,
        beta: canonical_beta,
        steps: a.steps,
        seed: a.seed,
        thin: a.thin,
        init: a.init,
        coupling_check: a.coupling_check,
    };
    cfg.validate()?;

    let symmetry = a.pattern.symmetry();
    let mut samples_writer = if a.thin > 0 {
        Some(create(&sibling(&a.out, "samples.txt"))?)
    } else {
        None
    };
    let mut stream_error: Option<std::io::Error> = None;
    let record = run_chain_with(&cfg, |_, state| {
        if let Some(w) = samples_writer.as_mut() {
            if stream_error.is_none() {
                let p = symmetry.apply(&state.to_permutation());
                if let Err(e) = writeln!(w, "{}", mio::permutation_to_line(&p)) {
                    stream_error = Some(e);
                }
            }
        }
    })?;
    if let Some(e) = stream_error {
        return Err(e.into());
    }

    let final_permutation = symmetry.apply(&record.final_permutation);
    let mut w = create(&a.out)?;
    mio::write_permutation_csv(&mut w, &final_permutation)?;
    drop(w);

    let coupling = if a.coupling_check {
        let diag = coupled_equilibration(&cfg, 100)?;
        let rows: Vec<Vec<f64>> = diag
            .checkpoints
            .iter()
            .map(|c| vec![c.step as f64, c.sup_distance])
            .collect();
        let mut w = create(&sibling(&a.out, "coupling.csv"))?;
        writeln!(w, "step,sup_distance")?;
        for c in &diag.checkpoints {
            writeln!(w, "{},{}", c.step, mio::format_f64(c.sup_distance))?;
        }
        drop(rows);
        Some(diag.final_sup_distance)
    } else {
        None
    };

    let metadata = json!({
        "command": "sample",
        "pattern": a.pattern,
        "n": a.n,
        "beta": a.beta,
        "steps": a.steps,
        "seed": a.seed,
        "thin": a.thin,
        "init": a.init,
        "coupling_check": a.coupling_check,
        "out": a.out,
        "canonical_pattern": canonical,
        "canonical_beta": canonical_beta,
        "accept_rate": record.accept_rate,
        "final_inv": record.final_inv,
        "wall_time_seconds": record.wall_seconds,
        "coupling_final_sup_distance": coupling,
        "version": env!("CARGO_PKG_VERSION"),
    });
    write_json(&sibling(&a.out, "meta.json"), &metadata)?;
    println!(
        "sampled {} ({} steps, accept rate {:.4}, inv {}) -> {}",
        a.pattern,
        a.steps,
        record.accept_rate,
        record.final_inv,
        a.out.display()
    );
    Ok(0)
}

pub fn limit(args: LimitArgs) -> Result<i32, CliError> {
    let a = args.resolve()?;
    std::fs::create_dir_all(&a.out)?;
    let g = a.grid;

    // curve.csv: the limit RLM curve and its excursion on the same grid
    let curve_rows: Vec<Vec<f64>> = (0..=g)
        .map(|k| {
            let x = k as f64 / g as f64;
            vec![
                x,
                permuton::limit_rlm_curve(a.pattern, a.beta, x),
                permuton::limit_excursion(a.pattern, a.beta, x),
            ]
        })
        .collect();
    let mut w = create(&a.out.join("curve.csv"))?;
    mio::write_float_csv(&mut w, "x,f,phi", &curve_rows)?;

    // measures.csv: per-abscissa densities of the two limit components
    // (231: graph and antidiagonal weights; 321: the logistic pair)
    let density_rows: Vec<Vec<f64>> = (0..=g)
        .map(|k| {
            let x = k as f64 / g as f64;
            let (rho1, rho2) = if a.beta <= 0.0 {
                match a.pattern {
                    CanonicalPattern::P231 => (1.0, 0.0),
                    CanonicalPattern::P321 => (0.5, 0.5),
                }
            } else {
                match a.pattern {
                    CanonicalPattern::P231 => {
                        let fp = permuton::limit_rlm_curve_231_prime(a.beta, x);
                        (fp.min(1.0), (1.0 - fp).max(0.0))
                    }
                    CanonicalPattern::P321 => {
                        let r1 = 1.0 / (1.0 + (a.beta * (0.5 - x)).exp());
                        (r1, 1.0 - r1)
                    }
                }
            };
            vec![x, rho1, rho2]
        })
        .collect();
    let mut w = create(&a.out.join("measures.csv"))?;
    mio::write_float_csv(&mut w, "x,rho1,rho2", &density_rows)?;

    let mu = permuton::limit_permuton(a.pattern, a.beta);
    if let Some(cdf_grid) = a.cdf_grid {
        let mut w = create(&a.out.join("permuton_cdf.csv"))?;
        mio::write_permuton_cdf_csv(&mut w, &mu.to_grid(cdf_grid))?;
    }
    let x_star = if a.pattern == CanonicalPattern::P231 && a.beta > 0.0 {
        Some(permuton::limit_x_star(a.beta))
    } else {
        None
    };
    let summary = json!({
        "command": "limit",
        "pattern": a.pattern,
        "beta": a.beta,
        "grid": g,
        "cdf_grid": a.cdf_grid,
        "out": a.out,
        "x_star": x_star,
        "component_masses": mu.component_masses(),
        "version": env!("CARGO_PKG_VERSION"),
    });
    write_json(&a.out.join("summary.json"), &summary)?;
    println!("limit curves for {} at beta={} -> {}", a.pattern, a.beta, a.out.display());
    Ok(0)
}

pub fn partition(args: PartitionArgs) -> Result<i32, CliError> {
    let a = args.resolve()?;
    std::fs::create_dir_all(&a.out)?;
    let table = theory::partition_convergence(a.pattern, a.beta, &a.sizes);

    let mut w = create(&a.out.join("partition.csv"))?;
    writeln!(w, "n,log_z_over_n,limit,residual")?;
    for row in &table.rows {
        writeln!(
            w,
            "{},{},{},{}",
            row.n,
            mio::format_f64(row.log_z_over_n),
            mio::format_f64(row.limit),
            mio::format_f64(row.residual)
        )?;
    }
    drop(w);

    if a.exact {
        for &n in &a.sizes {
            if n > theory::N_MAX_EXACT {
                eprintln!("note: skipping exact polynomial for n={n} (cap {})", theory::N_MAX_EXACT);
                continue;
            }
            let poly = theory::partition_poly(a.pattern, n)?;
            let mut w = create(&a.out.join(format!("poly_{}_n{}.csv", a.pattern, n)))?;
            writeln!(w, "k,coeff")?;
            for (k, c) in poly.coefficients.iter().enumerate() {
                writeln!(w, "{k},{c}")?;
            }
        }
    }

    let summary = json!({
        "command": "partition",
        "pattern": a.pattern,
        "beta": a.beta,
        "n_list": a.sizes,
        "exact": a.exact,
        "out": a.out,
        "limit": table.rows.first().map(|r| r.limit),
        "version": env!("CARGO_PKG_VERSION"),
    });
    write_json(&a.out.join("summary.json"), &summary)?;
    println!(
        "partition table for {} at beta={} ({} rows) -> {}",
        a.pattern,
        a.beta,
        table.rows.len(),
        a.out.display()
    );
    Ok(0)
}

pub fn compare(args: CompareArgs) -> Result<i32, CliError> {
    let a = args.resolve()?;
    let content = std::fs::read_to_string(&a.input)?;
    let p = mio::read_permutation_auto(&content)?;
    if !p.avoids(a.pattern.as_pattern()) {
        return Err(CliError::Usage(format!(
            "input permutation does not avoid {}",
            a.pattern
        )));
    }
    let n = p.len();

    let mu_limit = permuton::limit_permuton(a.pattern, a.beta).to_grid(a.grid);
    let diagnostics = match a.pattern {
        CanonicalPattern::P231 => {
            let phi = permuton::empirical_excursion(a.pattern, &p)?;
            let target = Excursion::from_fn(2 * n, |t| permuton::limit_excursion_231(a.beta, t));
            let excursion_distance = phi.sup_distance(&target)?;
            let mu_emp = permuton::permuton_of_perm(&p, CellVariant::Antidiagonal, a.grid);
            json!({
                "excursion_sup_distance": excursion_distance,
                "permuton_cdf_distance": mu_emp.sup_distance(&mu_limit)?,
            })
        }
        CanonicalPattern::P321 => {
            let pair = permuton::empirical_measure_pair(&p)?;
            let target = theory::minimizer_321(a.beta, n);
            let pair_distance = pair.kolmogorov_distance(&target)?;
            let mu_emp = permuton::permuton_of_perm(&p, CellVariant::Diagonal, a.grid);
            json!({
                "pair_kolmogorov_distance": pair_distance,
                "permuton_cdf_distance": mu_emp.sup_distance(&mu_limit)?,
            })
        }
    };

    let report = json!({
        "command": "compare",
        "input": a.input,
        "pattern": a.pattern,
        "beta": a.beta,
        "grid": a.grid,
        "n": n,
        "out": a.out,
        "diagnostics": diagnostics,
        "version": env!("CARGO_PKG_VERSION"),
    });
    write_json(&a.out, &report)?;
    println!("compare diagnostics -> {}", a.out.display());
    Ok(0)
}

pub fn validate(args: ValidateArgs) -> Result<i32, CliError> {
    let n_max = args.n_max.unwrap_or(8);
    let report = mallows_avoid::oracle::validate_all(n_max)?;
    for suite in &report.suites {
        let status = if suite.failures == 0 { "pass" } else { "FAIL" };
        print!(
            "{status} {suite_name} (n <= {n}, {cases} cases",
            suite_name = suite.suite,
            n = suite.n,
            cases = suite.cases
        );
        if suite.failures > 0 {
            print!(
                ", {} failures, first: {}",
                suite.failures,
                suite.first_counterexample.as_deref().unwrap_or("-")
            );
        }
        println!(")");
    }
    if let Some(out) = &args.out {
        write_json(out, &report)?;
    }
    Ok(if report.passed() { 0 } else { 1 })
}
