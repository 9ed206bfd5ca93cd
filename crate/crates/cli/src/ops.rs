//! Kernel and operator construction from flags, config or JSON files.

use std::path::Path;

use serde_json::Value;
use tgd_core::kernel::{default_table, make_kernel, FamilyName, Intercept, KernelDef, Params};
use tgd_core::op1d::{build_continuous, discretize, discretize_by_sampling, smooth_samples, smooth_weights};
use tgd_core::opnd::{lot_operator, orthogonal_operator, orthogonal_operator_sampled, rotate_operator, rotational_operator};
use tgd_core::{DiscreteOperator1D, DiscreteOperatorND, KernelSpec, Mode, Order, Provenance, RotateSpec, RotationWeight};

use crate::args::{Config, ConstructionArg, KernelArgs, OpArgs, RotationArg};
use crate::error::{CliError, CliResult};
use crate::io;

pub const DEFAULT_N: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub enum AnyOp {
    OneD(DiscreteOperator1D),
    Nd(DiscreteOperatorND),
}

impl AnyOp {
    pub fn dims(&self) -> usize {
        match self {
            AnyOp::OneD(_) => 1,
            AnyOp::Nd(op) => op.dims,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = match self {
            AnyOp::OneD(op) => serde_json::to_string_pretty(op),
            AnyOp::Nd(op) => serde_json::to_string_pretty(op),
        }
        .expect("operators serialize");
        s.push('\n');
        s
    }

    fn to_integer_scale(&self) -> CliResult<AnyOp> {
        match self {
            AnyOp::OneD(op) if op.order == Order::Smooth => {
                Err(CliError::Validation("integer scaling applies to first and second order operators".into()))
            }
            AnyOp::OneD(op) => Ok(AnyOp::OneD(op.to_integer_scale())),
            AnyOp::Nd(op) => Ok(AnyOp::Nd(op.to_integer_scale())),
        }
    }
}

fn params_from_flags(args: &KernelArgs, mut p: Params) -> Params {
    p.delta = args.delta.or(p.delta);
    p.k = args.k.or(p.k);
    if let Some(c) = &args.c {
        p.c = Some(match c.parse::<f64>() {
            Ok(v) => Intercept::Value(v),
            Err(_) => Intercept::Auto(c.clone()),
        });
    }
    p.tau = args.tau.or(p.tau);
    p.n = args.n.or(p.n);
    p.lambda = args.lambda.or(p.lambda);
    if args.values.is_some() {
        p.values = args.values.clone();
    }
    p
}

/// Kernel on support `w`. A kernel file or config definition is built on its
/// own `W` and then re-supported; flags override its parameters.
pub fn build_kernel(args: &KernelArgs, cfg: &Config, w: f64) -> CliResult<KernelSpec> {
    let def: Option<KernelDef> = match (&args.kernel_json, args.kernel) {
        (Some(path), _) => Some(
            serde_json::from_str(&io::read_text(path)?)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        ),
        (None, None) => cfg.kernel.clone(),
        (None, Some(_)) => None,
    };
    let kernel = match def {
        Some(def) => {
            let params = params_from_flags(args, def.params.clone());
            make_kernel(def.family, &params, def.w)?.with_support(w)?
        }
        None => {
            let family = args.kernel.unwrap_or(FamilyName::Gaussian);
            let mut params = params_from_flags(args, Params::default());
            if family == FamilyName::Table && params.values.is_none() {
                params.values = Some(default_table());
            }
            make_kernel(family, &params, w)?
        }
    };
    Ok(kernel)
}

fn unit_axis(axis: usize, dims: usize) -> Vec<f64> {
    (0..dims).map(|c| if c == axis { 1.0 } else { 0.0 }).collect()
}

/// Builds the operator described by `args`. `field_dims` is the
/// dimensionality of the data it will be applied to, if known.
pub fn build_op(args: &OpArgs, cfg: &Config, field_dims: Option<usize>, integer: bool) -> CliResult<(AnyOp, KernelSpec)> {
    let n = args.size.or(cfg.n).unwrap_or(DEFAULT_N);
    let dims = args.dims.or(field_dims).or(cfg.dims).unwrap_or(1);
    let order = args.order.or(cfg.order).unwrap_or(Order::First);
    let w = n as f64 + 0.5;
    let kernel = build_kernel(&args.kernel, cfg, w)?;
    // every construction is gated on the kernel constraints
    build_continuous(&kernel, order)?;
    if args.sampled && (3..5).contains(&n) {
        eprintln!("tgd: warning: direct sampling at N={n} is coarse; interval integration is more accurate");
    }
    let op = match dims {
        1 => AnyOp::OneD(build_1d(&kernel, order, n, args.sampled)?),
        2 | 3 => AnyOp::Nd(build_nd(args, &kernel, order, dims, n)?),
        d => return Err(CliError::Validation(format!("dims must be 1, 2 or 3, got {d}"))),
    };
    let op = if integer { op.to_integer_scale()? } else { op };
    Ok((op, kernel))
}

fn build_1d(kernel: &KernelSpec, order: Order, n: usize, sampled: bool) -> CliResult<DiscreteOperator1D> {
    Ok(match (order, sampled) {
        (Order::Smooth, _) => DiscreteOperator1D {
            order,
            n,
            mode: Mode::FloatNormalized,
            scale: 1.0,
            provenance: if sampled { Provenance::DirectSample } else { Provenance::IntervalIntegral },
            weights: if sampled { smooth_samples(kernel, n)? } else { smooth_weights(kernel, n)? },
        },
        (_, true) => discretize_by_sampling(kernel, n, order)?,
        (_, false) => discretize(&build_continuous(kernel, order)?, n)?,
    })
}

fn build_nd(args: &OpArgs, kernel: &KernelSpec, order: Order, dims: usize, n: usize) -> CliResult<DiscreteOperatorND> {
    let construction = args.construction.unwrap_or(if args.axis.is_some() {
        ConstructionArg::Orthogonal
    } else {
        ConstructionArg::Rotational
    });
    if order == Order::Smooth {
        return Err(CliError::Validation("N-D operators are first or second order".into()));
    }
    if args.angle.is_some() && dims != 2 {
        return Err(CliError::Validation("--angle applies to 2D operators; use --direction".into()));
    }
    let rw = match args.rotation.unwrap_or(RotationArg::Cosine) {
        RotationArg::Cosine => RotationWeight::cosine(),
        RotationArg::Constant => RotationWeight::constant(),
    };
    Ok(match construction {
        ConstructionArg::Lot => lot_operator(kernel, dims, n)?,
        ConstructionArg::Rotational => match (args.angle, &args.direction) {
            (Some(theta), _) => rotate_operator(kernel, &RotateSpec::Rotational(rw), theta, order, n)?,
            (None, Some(v)) => rotational_operator(kernel, &rw, v, order, dims, n)?,
            (None, None) => rotational_operator(kernel, &rw, &unit_axis(0, dims), order, dims, n)?,
        },
        ConstructionArg::Orthogonal => match args.angle {
            Some(theta) => rotate_operator(kernel, &RotateSpec::Orthogonal, theta, order, n)?,
            None if args.sampled => orthogonal_operator_sampled(kernel, args.axis.unwrap_or(0), order, dims, n)?,
            None => orthogonal_operator(kernel, args.axis.unwrap_or(0), order, dims, n)?,
        },
    })
}

/// Reads operator JSON; N-D operators carry a `dims` field.
pub fn load_op(path: &Path) -> CliResult<AnyOp> {
    let text = io::read_text(path)?;
    let bad = |e: serde_json::Error| CliError::Io(format!("{}: {e}", path.display()));
    let value: Value = serde_json::from_str(&text).map_err(bad)?;
    let op = if value.get("dims").is_some() {
        let op: DiscreteOperatorND = serde_json::from_str(&text).map_err(bad)?;
        let side = 2 * op.n + 1;
        if !(2..=3).contains(&op.dims) || op.weights.len() != side.pow(op.dims as u32) {
            return Err(CliError::Validation(format!("{}: weights do not match dims and N", path.display())));
        }
        AnyOp::Nd(op)
    } else {
        let op: DiscreteOperator1D = serde_json::from_str(&text).map_err(bad)?;
        if op.weights.len() != 2 * op.n + 1 {
            return Err(CliError::Validation(format!("{}: weights do not match N", path.display())));
        }
        AnyOp::OneD(op)
    };
    Ok(op)
}
