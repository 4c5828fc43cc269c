use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use num_traits::ToPrimitive;
use serde::Serialize;

use cpop_core::analysis::{
    asymptotic_turning_angle, asymptotic_turning_angle_qmc, diagonal_stats_parallel,
    ensemble_stats_parallel, expected_chord_lengths, fit_reciprocal_model,
};
use cpop_core::combinatorics::{
    entringer_closed_form, entringer_table, ez_table_entringer, ez_table_recursive,
};
use cpop_core::geometry::{extract_action_angle, reconstruct, PolygonSampler};
use cpop_core::io::{
    fmt_f64, read_action_angle_csv, read_fit_points, read_polygons, write_action_angle_csv,
    write_csv, write_entringer_csv, write_extensions_csv, DiagonalWriter, PolygonFormat,
    PolygonWriter,
};
use cpop_core::polytope::{sample_diagonals_into, MIN_EDGES};
use cpop_core::rng::{split_work, RngState};
use cpop_core::{ActionAngleCoords, DiagonalVector, DihedralVector, Polygon};

use crate::manifest::RunManifest;
use crate::{
    ChordsArgs, Command, CoordsArgs, CoordsTarget, CurvatureScanArgs, FitArgs, Format,
    IntegratePhiArgs, Method, Output, RejectionStatsArgs, Route, SampleArgs, SampleDiagonalsArgs,
    TableKind, TablesArgs,
};

/// Exact chord means are computed up to this n; beyond it the column is
/// left empty.
const EXACT_CHORD_MAX_N: usize = 300;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Sample(a) => sample(a),
        Command::SampleDiagonals(a) => sample_diagonals(a),
        Command::Coords(a) => coords(a),
        Command::Tables(a) => tables(a),
        Command::Chords(a) => chords(a),
        Command::CurvatureScan(a) => curvature_scan(a),
        Command::RejectionStats(a) => rejection_stats(a),
        Command::IntegratePhi(a) => integrate_phi(a),
        Command::Fit(a) => fit(a),
    }
}

/// Runs `body` against the output file (or stdout) and pairs a written
/// file with its manifest.
fn emit<P: Serialize>(
    output: &Output,
    command: &str,
    params: &P,
    seed: Option<u64>,
    workers: usize,
    body: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match &output.out {
        Some(path) => {
            let manifest = RunManifest::new(command, params, seed, workers)?;
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
            manifest.write_for(path)
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    ensure!(n >= MIN_EDGES, "n = {n} is below the minimum of {MIN_EDGES} edges");
    Ok(())
}

fn polygon_format(f: Format) -> PolygonFormat {
    match f {
        Format::Csv => PolygonFormat::Csv,
        Format::Jsonl => PolygonFormat::Jsonl,
    }
}

/// Fills one buffer per worker chunk, in parallel when `threads > 1`;
/// the buffers are returned in worker order.
fn per_worker<F>(count: u64, seed: u64, threads: usize, work: F) -> Result<Vec<Vec<u8>>>
where
    F: Fn(u64, u64, &mut RngState) -> Result<Vec<u8>> + Sync,
{
    let chunks = split_work(count, threads);
    if chunks.len() == 1 {
        return Ok(vec![work(0, count, &mut RngState::from_seed(seed))?]);
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .enumerate()
            .map(|(w, &(offset, len))| {
                let work = &work;
                scope.spawn(move || work(offset, len, &mut RngState::for_worker(seed, w as u64)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker thread panicked"))
            .collect()
    })
}

fn sample(a: SampleArgs) -> Result<()> {
    check_n(a.n)?;
    let (seed, threads) = (a.sampling.seed, usize::from(a.sampling.threads));
    let format = polygon_format(a.format);
    let buffers = per_worker(a.count, seed, threads, |offset, len, rng| {
        let mut w = PolygonWriter::resume(Vec::new(), format, offset);
        let mut s = PolygonSampler::new();
        for k in 0..len {
            s.sample(a.n, rng)?;
            w.write(s.vertices(), seed, offset + k)?;
        }
        Ok(w.finish()?)
    })?;
    emit(&a.output, "sample", &a, Some(seed), threads, |out| {
        if format == PolygonFormat::Csv {
            // header only; the buffers continue the stream
            PolygonWriter::new(&mut *out, format)?.finish()?;
        }
        for b in &buffers {
            out.write_all(b)?;
        }
        Ok(())
    })
}

fn sample_diagonals(a: SampleDiagonalsArgs) -> Result<()> {
    check_n(a.n)?;
    let (seed, threads) = (a.sampling.seed, usize::from(a.sampling.threads));
    let m = a.n - 3;
    let buffers = per_worker(a.count, seed, threads, |_, len, rng| {
        let mut buf = Vec::new();
        let mut out = Vec::new();
        {
            let mut w = DiagonalWriter::new(&mut out, m)?;
            for _ in 0..len {
                sample_diagonals_into(a.n, rng, &mut buf)?;
                w.write(&buf)?;
            }
            w.finish()?;
        }
        // drop the per-worker header line
        let body = out.iter().position(|&b| b == b'\n').map_or(0, |p| p + 1);
        Ok(out.split_off(body))
    })?;
    emit(&a.output, "sample-diagonals", &a, Some(seed), threads, |out| {
        DiagonalWriter::new(&mut *out, m)?.finish()?;
        for b in &buffers {
            out.write_all(b)?;
        }
        Ok(())
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

fn coords(a: CoordsArgs) -> Result<()> {
    let format = polygon_format(a.format);
    match a.to {
        CoordsTarget::ActionAngle => {
            let polygons = read_polygons(open(&a.input)?, format)
                .with_context(|| format!("reading {}", a.input.display()))?;
            ensure!(!polygons.is_empty(), "no polygons in {}", a.input.display());
            let n = polygons[0].len();
            let mut rows = Vec::with_capacity(polygons.len());
            for (k, v) in polygons.into_iter().enumerate() {
                ensure!(v.len() == n, "polygon {k} has {} vertices, expected {n}", v.len());
                let p = Polygon::from_vertices(v).with_context(|| format!("polygon {k}"))?;
                let c = extract_action_angle(&p).with_context(|| format!("polygon {k}"))?;
                rows.push((c.diagonals().as_slice().to_vec(), c.dihedrals().as_slice().to_vec()));
            }
            check_n(n)?;
            emit(&a.output, "coords", &a, None, 1, |out| {
                write_action_angle_csv(
                    out,
                    n - 3,
                    rows.iter().map(|(d, t)| (d.as_slice(), t.as_slice())),
                )?;
                Ok(())
            })
        }
        CoordsTarget::Vertices => {
            let rows = read_action_angle_csv(open(&a.input)?)
                .with_context(|| format!("reading {}", a.input.display()))?;
            let mut polygons = Vec::with_capacity(rows.len());
            for (k, (d, theta)) in rows.into_iter().enumerate() {
                let n = d.len() + 3;
                let coords = ActionAngleCoords::new(DiagonalVector::new(n, d)?, DihedralVector::new(n, theta)?)
                    .with_context(|| format!("row {k}"))?;
                polygons.push(reconstruct(&coords));
            }
            emit(&a.output, "coords", &a, None, 1, |out| {
                let mut w = PolygonWriter::new(out, format)?;
                for (k, p) in polygons.iter().enumerate() {
                    w.write(p.vertices(), 0, k as u64)?;
                }
                w.finish()?;
                Ok(())
            })
        }
    }
}

fn tables(a: TablesArgs) -> Result<()> {
    match a.kind {
        TableKind::Entringer => {
            let table = entringer_table(a.max_n);
            if a.route != Route::Recurrence {
                for n in 0..=a.max_n {
                    for k in 0..=n {
                        let closed = entringer_closed_form(n, k)?;
                        ensure!(
                            &closed == table.get(n, k),
                            "routes disagree at E({n},{k}): {closed} vs {}",
                            table.get(n, k)
                        );
                    }
                }
            }
            emit(&a.output, "tables", &a, None, 1, |out| Ok(write_entringer_csv(out, &table)?))
        }
        TableKind::Extensions => {
            ensure!(a.max_n >= 1, "--max-n must be at least 1");
            let table = match a.route {
                Route::Formula => ez_table_entringer(a.max_n),
                Route::Recurrence => ez_table_recursive(a.max_n),
                Route::Both => {
                    let f = ez_table_entringer(a.max_n);
                    let r = ez_table_recursive(a.max_n);
                    if let Some(((n, i, x), (_, _, y))) =
                        f.entries().zip(r.entries()).find(|(p, q)| p.2 != q.2)
                    {
                        bail!("routes disagree at e(Z_{{{n},{i}}}): {x} vs {y}");
                    }
                    f
                }
            };
            emit(&a.output, "tables", &a, None, 1, |out| Ok(write_extensions_csv(out, &table)?))
        }
    }
}

fn chords(a: ChordsArgs) -> Result<()> {
    check_n(a.n)?;
    let (seed, threads) = (a.sampling.seed, usize::from(a.sampling.threads));
    let stats = diagonal_stats_parallel(a.n, a.count, seed, threads)?;
    let exact = if a.n <= EXACT_CHORD_MAX_N {
        Some(expected_chord_lengths(a.n)?)
    } else {
        None
    };
    let rows: Vec<Vec<String>> = stats
        .chord_means
        .iter()
        .enumerate()
        .map(|(k, &m)| {
            let e = exact
                .as_ref()
                .and_then(|e| e[k].to_f64())
                .map(fmt_f64)
                .unwrap_or_default();
            vec![(k + 1).to_string(), fmt_f64(m), e]
        })
        .collect();
    emit(&a.output, "chords", &a, Some(seed), threads, |out| {
        Ok(write_csv(out, &["i", "empirical_mean", "exact_mean"], &rows)?)
    })
}

fn curvature_scan(a: CurvatureScanArgs) -> Result<()> {
    let (seed, threads) = (a.sampling.seed, usize::from(a.sampling.threads));
    let mut rows = Vec::with_capacity(a.n_list.len());
    for &n in &a.n_list {
        check_n(n)?;
        let s = ensemble_stats_parallel(n, a.count, seed, threads)?;
        rows.push(vec![
            n.to_string(),
            s.count.to_string(),
            fmt_f64(s.mean_turning_angle),
            fmt_f64(s.se_turning_angle),
            fmt_f64(s.mean_total_curvature),
            fmt_f64(s.rejection_rate),
            fmt_f64(s.mean_attempts),
        ]);
    }
    emit(&a.output, "curvature-scan", &a, Some(seed), threads, |out| {
        Ok(write_csv(
            out,
            &[
                "n",
                "count",
                "mean_turning_angle",
                "se",
                "mean_total_curvature",
                "rejection_rate",
                "mean_attempts",
            ],
            &rows,
        )?)
    })
}

fn rejection_stats(a: RejectionStatsArgs) -> Result<()> {
    check_n(a.n_min)?;
    ensure!(a.n_min <= a.n_max, "--n-min must not exceed --n-max");
    let (seed, threads) = (a.sampling.seed, usize::from(a.sampling.threads));
    let mut rows = Vec::new();
    for n in a.n_min..=a.n_max {
        let s = diagonal_stats_parallel(n, a.count, seed, threads)?;
        rows.push(vec![
            n.to_string(),
            s.count.to_string(),
            s.attempts.to_string(),
            fmt_f64(s.rejection_rate),
            fmt_f64(s.mean_attempts),
        ]);
    }
    emit(&a.output, "rejection-stats", &a, Some(seed), threads, |out| {
        Ok(write_csv(
            out,
            &["n", "count", "attempts", "rejection_rate", "mean_attempts"],
            &rows,
        )?)
    })
}

fn integrate_phi(a: IntegratePhiArgs) -> Result<()> {
    ensure!(a.tol > 0.0, "--tol must be positive");
    let mut rows = Vec::new();
    let mut values = Vec::new();
    if a.method != Method::Qmc {
        let gl = asymptotic_turning_angle(a.tol)?;
        rows.push(vec!["gl".to_string(), fmt_f64(gl.value), fmt_f64(gl.last_change)]);
        values.push(gl.value);
    }
    if a.method != Method::Gl {
        ensure!(a.qmc_points > 0 && a.qmc_shifts > 0, "QMC needs points and shifts");
        let q = asymptotic_turning_angle_qmc(a.qmc_points, a.qmc_shifts, a.seed);
        rows.push(vec!["qmc".to_string(), fmt_f64(q.value), fmt_f64(q.spread)]);
        values.push(q.value);
    }
    if let [gl, qmc] = values[..] {
        ensure!(
            (gl - qmc).abs() <= a.agree,
            "methods disagree: gl {gl} vs qmc {qmc} (allowed {})",
            a.agree
        );
    }
    let seed = (a.method != Method::Gl).then_some(a.seed);
    emit(&a.output, "integrate-phi", &a, seed, 1, |out| {
        Ok(write_csv(out, &["method", "value", "error_estimate"], &rows)?)
    })
}

fn fit(a: FitArgs) -> Result<()> {
    let points = read_fit_points(open(&a.input)?).with_context(|| format!("reading {}", a.input.display()))?;
    let f = fit_reciprocal_model(&points)?;
    emit(&a.output, "fit", &a, None, 1, |out| {
        Ok(write_csv(
            out,
            &["a", "b", "r_squared"],
            &[vec![fmt_f64(f.a), fmt_f64(f.b), fmt_f64(f.r_squared)]],
        )?)
    })
}
