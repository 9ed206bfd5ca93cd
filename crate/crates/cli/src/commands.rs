use std::io::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use tgd_core::kernel::check_smooth_operator;
use tgd_core::metrics::{argmax_offsets, crossing_offsets, pearson, rmse, zero_crossings};
use tgd_core::noise::add_noise;
use tgd_core::op1d::{baseline_central_difference, baseline_ld_operator, baseline_smooth_then_diff, tgd_1d};
use tgd_core::spectrum::{gaussian_equal_support, spectrum, upper_half_band_mean};
use tgd_core::{convolve, convolve_separable, Boundary, Order, SampledField};

use crate::args::{ApplyArgs, GenOpArgs, MetricsArgs, NoiseArgs, OpFormat, Settings, SpectrumArgs, ValidateArgs};
use crate::error::{CliError, CliResult};
use crate::io;
use crate::ops::{build_kernel, build_op, load_op, AnyOp, DEFAULT_N};

const DEFAULT_SMOOTH_SIGMA: f64 = 2.0;

/// Writes to `path`, or to stdout when absent.
fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => io::write_bytes(p, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn gen_op(s: &Settings, args: &GenOpArgs) -> CliResult<()> {
    let (op, kernel) = build_op(&args.op, &s.config, None, s.integer)?;
    let report = kernel.validate();
    eprintln!("constraints: {}", serde_json::to_string(&report).expect("report serializes"));
    let bytes = match args.format {
        OpFormat::Json => op.to_json(),
        OpFormat::Csv => match &op {
            AnyOp::Nd(nd) if nd.dims == 2 => io::format_matrix(&nd.weights, nd.side()),
            _ => return Err(CliError::Validation("csv output is for 2D operators".into())),
        },
    };
    emit(s.output(&args.output).as_deref(), bytes.as_bytes())
}

/// Removes `n` samples from both ends, matching valid-mode output.
fn crop(values: Vec<f64>, n: usize, boundary: Boundary) -> Vec<f64> {
    if boundary == Boundary::Valid {
        values[n..values.len() - n].to_vec()
    } else {
        values
    }
}

fn uniform_spacing(field: &SampledField) -> CliResult<f64> {
    let h = field.spacing[0];
    if field.spacing.iter().any(|&x| x != h) {
        return Err(CliError::Validation("norm constants need equal spacing on every axis".into()));
    }
    Ok(h)
}

pub fn apply(s: &Settings, args: &ApplyArgs) -> CliResult<()> {
    let input = s.input(&args.input)?;
    let loaded = io::read_field(&input, args.column.as_deref())?;
    let mut field = loaded.field;
    if let Some(h) = args.spacing {
        let dims = field.dims();
        field = field.with_spacing(vec![h; dims])?;
    }
    let op = match &args.op_file {
        Some(p) => {
            let op = load_op(p)?;
            if s.integer {
                match op {
                    AnyOp::OneD(o) if o.order != Order::Smooth => AnyOp::OneD(o.to_integer_scale()),
                    AnyOp::Nd(o) => AnyOp::Nd(o.to_integer_scale()),
                    other => other,
                }
            } else {
                op
            }
        }
        None => build_op(&args.op, &s.config, Some(field.dims()), s.integer)?.0,
    };
    if op.dims() != field.dims() {
        return Err(tgd_core::TgdError::DimsMismatch { op: op.dims(), field: field.dims() }.into());
    }
    let output = s.output(&args.output);
    match op {
        AnyOp::OneD(op) => {
            let norm = s.norm_constant && op.order != Order::Smooth;
            let out = tgd_1d(&field, &op, s.boundary, norm)?;
            let mut names = vec!["tgd".to_string()];
            let mut columns = vec![out.values];
            let compare = args.compare.clone().or_else(|| s.config.compare.clone()).unwrap_or_default();
            // baselines are per-sample differences; match the TGD column's units
            let h = field.spacing[0];
            let unit = if norm { if op.order == Order::Second { 1.0 / (h * h) } else { 1.0 / h } } else { 1.0 };
            let per_unit = |v: Vec<f64>| -> Vec<f64> { v.into_iter().map(|x| x * unit).collect() };
            for name in compare {
                let values = match name.as_str() {
                    "central" => per_unit(crop(baseline_central_difference(&field, op.order)?.values, op.n, s.boundary)),
                    "ld" => {
                        first_order_only(&op, "ld")?;
                        tgd_1d(&field, &baseline_ld_operator(op.n)?, s.boundary, norm)?.values
                    }
                    "smoothdiff" => {
                        first_order_only(&op, "smoothdiff")?;
                        let sigma = args.smooth_sigma.unwrap_or(DEFAULT_SMOOTH_SIGMA);
                        per_unit(crop(baseline_smooth_then_diff(&field, sigma)?.values, op.n, s.boundary))
                    }
                    other => return Err(CliError::Usage(format!("unknown comparison '{other}'"))),
                };
                names.push(name);
                columns.push(values);
            }
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            emit(output.as_deref(), io::format_columns(&refs, &columns).as_bytes())?;
            if let Some(plot) = &args.plot {
                let first = if s.boundary == Boundary::Valid { op.n } else { 0 };
                let x: Vec<f64> = (0..columns[0].len()).map(|i| (first + i) as f64 * field.spacing[0]).collect();
                let series: Vec<(&str, &[f64])> = refs.iter().copied().zip(columns.iter().map(Vec::as_slice)).collect();
                io::write_bytes(plot, io::format_tidy(&series, &x).as_bytes())?;
            }
            Ok(())
        }
        AnyOp::Nd(op) => {
            if args.compare.is_some() {
                return Err(CliError::Usage("--compare applies to 1D signals".into()));
            }
            let mut out = if args.separable && op.separable_factors.is_some() {
                convolve_separable(&field, &op, s.boundary)?
            } else {
                convolve(&field, &op, s.boundary)?
            };
            if s.norm_constant {
                let h = uniform_spacing(&field)?;
                let k = op.norm_constant() / h.powi(if op.kind.order() == Order::First { 1 } else { 2 });
                out.values.iter_mut().for_each(|v| *v *= k);
            }
            match output {
                Some(p) => io::write_field(&p, &out, "tgd"),
                None if out.dims() == 2 => emit(None, io::format_matrix(&out.values, out.shape[1]).as_bytes()),
                None => Err(CliError::Usage("3D output needs --output".into())),
            }
        }
    }
}

fn first_order_only(op: &tgd_core::DiscreteOperator1D, name: &str) -> CliResult<()> {
    if op.order != Order::First {
        return Err(CliError::Validation(format!("the {name} baseline is first order")));
    }
    Ok(())
}

pub fn noise(s: &Settings, args: &NoiseArgs) -> CliResult<()> {
    let seed = s.seed.ok_or_else(|| CliError::Usage("noise needs --seed".into()))?;
    let sigma = args
        .sigma
        .or(s.config.noise.as_ref().map(|n| n.sigma))
        .ok_or_else(|| CliError::Usage("noise needs --sigma".into()))?;
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(CliError::Validation(format!("sigma must be non-negative, got {sigma}")));
    }
    let input = s.input(&args.input)?;
    let output = s
        .output(&args.output)
        .ok_or_else(|| CliError::Usage("noise needs --output".into()))?;
    let is_volume = input.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if sigma == 0.0 && !is_volume && args.column.is_none() {
        return io::write_bytes(&output, &io::read_bytes(&input)?);
    }
    let loaded = io::read_field(&input, args.column.as_deref())?;
    let noisy = add_noise(&loaded.field, sigma, seed);
    io::write_field(&output, &noisy, loaded.column.as_deref().unwrap_or("value"))
}

pub fn metrics(s: &Settings, args: &MetricsArgs) -> CliResult<()> {
    let a = io::read_field(&args.input, args.column.as_deref())?.field;
    let b = io::read_field(&args.reference, args.reference_column.as_deref())?.field;
    if a.shape != b.shape {
        return Err(CliError::Validation(format!("shape mismatch: {:?} vs {:?}", a.shape, b.shape)));
    }
    let mut report = json!({
        "samples": a.len(),
        "pearson": pearson(&a.values, &b.values),
        "rmse": rmse(&a.values, &b.values),
    });
    if a.dims() == 1 {
        report["zero_crossings"] = json!(zero_crossings(&a.values));
    }
    if let Some(edges) = &args.edges {
        if a.dims() != 1 {
            return Err(CliError::Validation("--edges applies to 1D signals".into()));
        }
        let peaks = argmax_offsets(&a.values, edges, args.window);
        let crossings = crossing_offsets(&a.values, edges, args.window);
        let max_peak = peaks.iter().fold(0.0f64, |m, p| m.max(p.1));
        let max_crossing = crossings
            .iter()
            .map(|c| c.map_or(f64::INFINITY, |(_, d)| d))
            .fold(0.0f64, f64::max);
        report["edges"] = json!(edges);
        report["argmax"] = json!(peaks.iter().map(|p| json!({"at": p.0, "offset": p.1})).collect::<Vec<_>>());
        report["max_argmax_offset"] = json!(max_peak);
        report["crossings"] = json!(crossings
            .iter()
            .map(|c| c.map(|(at, d)| json!({"at": at, "offset": d})))
            .collect::<Vec<_>>());
        // null when an edge has no crossing in its window
        report["max_crossing_offset"] = if max_crossing.is_finite() { json!(max_crossing) } else { Value::Null };
    }
    emit(s.output(&args.output).as_deref(), json_line(&report).as_bytes())
}

pub fn spectrum_cmd(s: &Settings, args: &SpectrumArgs) -> CliResult<()> {
    let op = match &args.op_file {
        Some(p) => load_op(p)?,
        None => build_op(&args.op, &s.config, Some(1), false)?.0,
    };
    let AnyOp::OneD(op) = op else {
        return Err(CliError::Validation("spectrum needs a 1D operator".into()));
    };
    let mags = spectrum(&op.weights, args.n_fft)?;
    let freq: Vec<f64> = (0..mags.len()).map(|k| k as f64 / args.n_fft as f64).collect();
    let mut names = vec!["frequency", "magnitude"];
    let mut columns = vec![freq.clone(), mags.clone()];
    eprintln!("upper half band mean: magnitude {}", upper_half_band_mean(&mags));
    match args.compare.as_deref() {
        None => {}
        Some("gaussian") => {
            let g = spectrum(&gaussian_equal_support(op.n), args.n_fft)?;
            eprintln!("upper half band mean: gaussian {}", upper_half_band_mean(&g));
            names.push("gaussian");
            columns.push(g);
        }
        Some(other) => return Err(CliError::Usage(format!("unknown spectrum comparison '{other}'"))),
    }
    emit(s.output(&args.output).as_deref(), io::format_columns(&names, &columns).as_bytes())?;
    if let Some(plot) = &args.plot {
        let series: Vec<(&str, &[f64])> = names[1..].iter().copied().zip(columns[1..].iter().map(Vec::as_slice)).collect();
        io::write_bytes(plot, io::format_tidy(&series, &freq).as_bytes())?;
    }
    Ok(())
}

pub fn validate_kernel(s: &Settings, args: &ValidateArgs) -> CliResult<()> {
    let w = match (args.w, args.size) {
        (Some(w), _) => w,
        (None, Some(n)) => n as f64 + 0.5,
        (None, None) => s
            .config
            .kernel
            .as_ref()
            .map(|d| d.w)
            .unwrap_or(DEFAULT_N as f64 + 0.5),
    };
    let kernel = build_kernel(&args.kernel, &s.config, w)?;
    let report = kernel.validate();
    let mut out = json!({
        "family": kernel.name(),
        "W": kernel.w,
        "report": report,
        "ok": report.all_ok(),
    });
    let mut ok = report.all_ok();
    if args.as_smooth {
        let (smooth_ok, violation) = check_smooth_operator(|x| kernel.eval(x.abs()), kernel.w);
        out["as_smooth"] = json!({"c3_ok": smooth_ok, "violation": violation});
        ok &= smooth_ok;
    }
    emit(None, json_line(&out).as_bytes())?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Validation(format!("{} kernel fails its constraints", kernel.name().as_str())))
    }
}
