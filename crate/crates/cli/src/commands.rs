use std::fs;
use std::path::Path;

use dnls_core::exec;
use dnls_core::{
    compare_limit_energy, minimize, phi_gradient, residuals, truncation_study, verify_state,
    Boundary, GroundStateResult, Potential, PotentialKind,
};
use serde::Serialize;

use crate::config::{self, GraphSpec, PotentialSpec, RunConfig};
use crate::error::CliError;
use crate::output::{self, fmt, write_result, write_toml};

/// Outcome of a command that ran to completion.
pub enum Status {
    Ok,
    /// Non-convergence or a failed verification.
    Failed,
}

fn status_of(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Failed
    }
}

fn report(name: &str, r: &GroundStateResult) {
    println!(
        "{name}: energy {} converged {} after {} iterations (residual {:.2e})",
        fmt(r.energy),
        r.converged,
        r.iterations,
        r.residuals.pointwise_sup
    );
}

pub fn solve(path: &Path) -> Result<Status, CliError> {
    let loaded = config::load(path)?;
    config::check_command(&loaded.config, "solve")?;
    let p = config::build_problem(&loaded.config)?;
    let r = minimize(&p, &loaded.config.solver)?;
    let out = write_result(
        &loaded.output_dir(),
        loaded.output_name(),
        "solve",
        &loaded.config,
        p.graph(),
        &r,
    )?;
    report(loaded.output_name(), &r);
    println!("wrote {}", out.display());
    Ok(status_of(r.converged))
}

#[derive(Serialize)]
struct VerifyRecord {
    result: String,
    passed: bool,
    stored_residuals_reproduced: bool,
    report: dnls_core::VerifyReport,
}

pub fn verify(result_path: &Path) -> Result<Status, CliError> {
    let record = output::read_record(result_path)?;
    let base = result_path.parent().unwrap_or(Path::new(""));
    let p = config::build_problem(&record.config)?;
    let u = output::read_field_csv(&base.join(&record.result.solution_csv), p.graph())?;

    let res = residuals(&p, &u)?;
    let nehari = res.nehari.unwrap_or(f64::INFINITY);
    let close = |a: f64, b: f64| a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    let reproduced = close(res.pointwise_sup, record.result.pointwise_residual)
        && close(nehari, record.result.nehari_residual);
    if !reproduced {
        log::warn!(
            "stored residuals ({:e}, {:e}) differ from recomputed ({:e}, {:e})",
            record.result.pointwise_residual,
            record.result.nehari_residual,
            res.pointwise_sup,
            nehari
        );
    }

    let rep = verify_state(&p, &u, record.result.converged, &record.config.verify)?;
    let passed = rep.passed() && reproduced && rep.converged;
    println!(
        "pointwise {} ({:.2e} <= {:.2e}); nehari {} ({:.2e} <= {:.2e}); inf-max {} ({} of {} rays below c)",
        word(rep.pointwise_pass),
        rep.pointwise_residual,
        rep.pointwise_limit,
        word(rep.nehari_pass),
        rep.nehari_residual,
        rep.nehari_limit,
        word(rep.inf_max_pass),
        rep.ray_violations,
        record.config.verify.rays
    );
    let stem = result_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "result".into());
    let out = base.join(format!("{stem}_verify.toml"));
    write_toml(
        &out,
        &VerifyRecord {
            result: result_path.display().to_string(),
            passed,
            stored_residuals_reproduced: reproduced,
            report: rep,
        },
    )?;
    println!("wrote {}", out.display());
    Ok(status_of(passed))
}

fn word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn sweep(path: &Path) -> Result<Status, CliError> {
    let base_value = config::read_value(path)?;
    let loaded = config::located(config::from_value(base_value.clone())?, path);
    config::check_command(&loaded.config, "sweep")?;
    let spec = loaded
        .config
        .sweep
        .clone()
        .ok_or_else(|| CliError::Config("sweep: section is required for sweep".into()))?;
    let entries = config::expand_sweep(&base_value, &spec)?;
    let problems = entries
        .iter()
        .map(|e| {
            config::build_problem(&e.config).map_err(|err| match err {
                CliError::Config(m) => CliError::Config(format!("sweep entry {}: {m}", e.index)),
                other => other,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let dir = loaded.output_dir();
    fs::create_dir_all(&dir)?;
    let name = loaded.output_name().to_string();
    let jobs: Vec<usize> = (0..entries.len()).collect();
    let results = exec::with_workers(spec.workers, || {
        exec::map(&jobs, |&i| -> Result<GroundStateResult, CliError> {
            let e = &entries[i];
            let r = minimize(&problems[i], &e.config.solver)?;
            write_result(
                &dir,
                &format!("{name}_sweep{:03}", e.index),
                "sweep",
                &e.config,
                problems[i].graph(),
                &r,
            )?;
            Ok(r)
        })
    });

    let table = dir.join(format!("{name}_sweep.csv"));
    let mut w = csv::Writer::from_path(&table)?;
    let mut header = vec!["index".to_string()];
    header.extend(spec.axes.iter().map(|a| a.parameter.clone()));
    header.extend(
        [
            "energy",
            "converged",
            "iterations",
            "pointwise_residual",
            "nehari_residual",
            "result",
        ]
        .map(String::from),
    );
    w.write_record(&header)?;
    let mut all_converged = true;
    for (e, r) in entries.iter().zip(results) {
        let r = r?;
        all_converged &= r.converged;
        let mut row = vec![e.index.to_string()];
        row.extend(e.assignments.iter().map(|(_, v)| v.to_string()));
        row.extend([
            fmt(r.energy),
            r.converged.to_string(),
            r.iterations.to_string(),
            fmt(r.residuals.pointwise_sup),
            fmt(r.residuals.nehari.unwrap_or(f64::INFINITY)),
            format!("{name}_sweep{:03}.toml", e.index),
        ]);
        w.write_record(&row)?;
        report(&format!("entry {}", e.index), &r);
    }
    w.flush()?;
    println!("wrote {}", table.display());
    Ok(status_of(all_converged))
}

#[derive(Serialize)]
struct TruncationRecord {
    schema: String,
    dim: usize,
    sizes: Vec<usize>,
    energies: Vec<f64>,
    monotone: bool,
    all_converged: bool,
    table_csv: String,
    config: RunConfig,
}

pub fn truncate(path: &Path) -> Result<Status, CliError> {
    let loaded = config::load(path)?;
    let cfg = &loaded.config;
    config::check_command(cfg, "truncate")?;
    let sizes = cfg
        .truncate
        .as_ref()
        .map(|t| t.sizes.clone())
        .ok_or_else(|| CliError::Config("truncate: section is required for truncate".into()))?;
    let dim = match &cfg.graph {
        GraphSpec::Lattice {
            dim,
            boundary: Boundary::DirichletBox,
            ..
        } => *dim,
        _ => {
            return Err(CliError::Config(
                "graph: truncation needs a lattice with boundary = \"dirichlet_box\"".into(),
            ))
        }
    };
    if sizes.is_empty() || sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config(format!(
            "truncate.sizes: {sizes:?} must be non-empty and strictly increasing"
        )));
    }
    let size_config = |l: usize| RunConfig {
        graph: GraphSpec::Lattice {
            dim,
            sides: vec![l; dim],
            boundary: Boundary::DirichletBox,
        },
        ..cfg.clone()
    };
    // validate every size before solving any
    for &l in &sizes {
        config::build_problem(&size_config(l))?;
    }
    let nl = config::build_nonlinearity(
        &cfg.nonlinearity,
        &config::build_graph(&size_config(sizes[0]).graph)?,
    )?;
    let study = truncation_study(
        dim,
        &sizes,
        |g| {
            config::build_potential(&cfg.potential, g)
                .map_err(|e| dnls_core::Error::Precondition(e.to_string()))
        },
        std::sync::Arc::new(nl),
        &cfg.solver,
    )?;

    let dir = loaded.output_dir();
    fs::create_dir_all(&dir)?;
    let name = loaded.output_name();
    let table = format!("{name}_truncation.csv");
    let mut w = csv::Writer::from_path(dir.join(&table))?;
    w.write_record([
        "size",
        "energy",
        "decrease",
        "converged",
        "iterations",
        "result",
    ])?;
    for (row, r) in study.rows.iter().zip(&study.results) {
        let sc = size_config(row.size);
        let g = config::build_graph(&sc.graph)?;
        let rec = format!("{name}_L{}", row.size);
        write_result(&dir, &rec, "truncate", &sc, &g, r)?;
        w.write_record([
            row.size.to_string(),
            fmt(row.energy),
            row.decrease.map(fmt).unwrap_or_default(),
            row.converged.to_string(),
            row.iterations.to_string(),
            format!("{rec}.toml"),
        ])?;
        println!("L = {}: energy {}", row.size, fmt(row.energy));
    }
    w.flush()?;
    let monotone = study.is_monotone();
    if !monotone {
        log::warn!("energies increase with the box size; some solve missed its ground state");
    }
    let all_converged = study.rows.iter().all(|r| r.converged);
    write_toml(
        &dir.join(format!("{name}_truncation.toml")),
        &TruncationRecord {
            schema: output::SCHEMA.into(),
            dim,
            sizes,
            energies: study.rows.iter().map(|r| r.energy).collect(),
            monotone,
            all_converged,
            table_csv: table,
            config: cfg.clone(),
        },
    )?;
    println!("monotone: {monotone}");
    Ok(status_of(all_converged))
}

#[derive(Serialize)]
struct CompareRecord {
    schema: String,
    c: f64,
    c_inf: f64,
    gap: f64,
    well_result: String,
    limit_result: String,
    config: RunConfig,
}

pub fn compare(path: &Path) -> Result<Status, CliError> {
    let loaded = config::load(path)?;
    let cfg = &loaded.config;
    config::check_command(cfg, "compare")?;
    let vinf = match &cfg.potential {
        PotentialSpec::Well { vinf, .. } => *vinf,
        _ => {
            return Err(CliError::Config(
                "potential.kind: compare needs kind = \"well\"".into(),
            ))
        }
    };
    let p = config::build_problem(cfg)?;
    let cmp = compare_limit_energy(&p, &cfg.solver)?;

    let dir = loaded.output_dir();
    let name = loaded.output_name();
    let limit_cfg = RunConfig {
        potential: PotentialSpec::Constant { value: vinf },
        ..cfg.clone()
    };
    let well_path = write_result(
        &dir,
        &format!("{name}_well"),
        "compare",
        cfg,
        p.graph(),
        &cmp.well,
    )?;
    let limit_path = write_result(
        &dir,
        &format!("{name}_limit"),
        "compare",
        &limit_cfg,
        p.graph(),
        &cmp.limit,
    )?;
    let file_name = |p: &Path| {
        p.file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned()
    };
    write_toml(
        &dir.join(format!("{name}_compare.toml")),
        &CompareRecord {
            schema: output::SCHEMA.into(),
            c: cmp.c,
            c_inf: cmp.c_inf,
            gap: cmp.gap,
            well_result: file_name(&well_path),
            limit_result: file_name(&limit_path),
            config: cfg.clone(),
        },
    )?;
    println!(
        "c = {}, c_inf = {}, gap = {}",
        fmt(cmp.c),
        fmt(cmp.c_inf),
        fmt(cmp.gap)
    );
    if matches!(p.potential().kind(), PotentialKind::BoundedWell { .. }) && cmp.gap <= 0.0 {
        log::warn!("no strict gap although V dips below V_inf");
    }
    Ok(status_of(cmp.well.converged && cmp.limit.converged))
}

/// One row per vertex: coordinates, `u`, `V` and the signed residual
/// `-Δu + V u - f(x, u)`.
pub fn export_plotdata(result_path: &Path, out: &Path) -> Result<Status, CliError> {
    let record = output::read_record(result_path)?;
    let base = result_path.parent().unwrap_or(Path::new(""));
    let p = config::build_problem(&record.config)?;
    let g = p.graph();
    let u = output::read_field_csv(&base.join(&record.result.solution_csv), g)?;
    let grad = phi_gradient(&p, &u)?;
    let v: &Potential = p.potential();

    let mut w = csv::Writer::from_path(out)?;
    let mut header = vec!["vertex_index".to_string()];
    header.extend(g.coordinate_names());
    header.extend(["u", "V", "residual"].map(String::from));
    w.write_record(&header)?;
    for x in 0..g.vertex_count() {
        let mut row = vec![x.to_string()];
        row.extend(g.coordinates(x).iter().map(|c| c.to_string()));
        row.extend([fmt(u[x]), fmt(v.values()[x]), fmt(grad[x])]);
        w.write_record(&row)?;
    }
    w.flush()?;
    println!("wrote {}", out.display());
    Ok(Status::Ok)
}
