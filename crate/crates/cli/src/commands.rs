//! The subcommands, as functions from requests to report documents.

use std::path::PathBuf;

use beew::fit::{
    classify, em_fit, embed_exponential, free_parameter_count, free_parameters,
    from_free_parameters, initial_guess, loglik, parameter_names, ClassifiedSample, FitOptions,
    FitReport,
};
use beew::gof::{criteria, ks_triplet, lrt, nests};
use beew::{Beew, FamilyId, Margin, Region};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::data::{self, Dataset, ReadError};
use crate::report::{
    em_summary, ks_entries, lrt_entry, parameter_values, parameters, CompareDocument, Criteria,
    EvalDocument, ReportDocument, SimulationDocument,
};

/// Name of the generator behind `simulate`, recorded in its report.
pub const RNG_NAME: &str = "ChaCha20 (rand_chacha 0.9, seed_from_u64)";

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Read(#[from] ReadError),
    #[error(transparent)]
    Model(#[from] beew::Error),
    #[error("{0}")]
    Domain(String),
}

impl CommandError {
    /// 2 usage, 3 data or domain, 4 numerical failure of a fit.
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Usage(_) => 2,
            CommandError::Model(e) if is_numerical(e) => 4,
            _ => 3,
        }
    }
}

fn is_numerical(e: &beew::Error) -> bool {
    use beew::Error::*;
    matches!(
        e,
        NoConvergence(_) | Bracket(_) | Underflow(_) | DegenerateMStep(_) | AtIteration { .. }
    )
}

pub type Result<T> = std::result::Result<T, CommandError>;

/// Data-related options shared by the fitting commands.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSpec {
    pub path: PathBuf,
    pub tie_eps: f64,
    pub rescale: f64,
}

impl DataSpec {
    fn load(&self) -> Result<(Dataset, ClassifiedSample)> {
        let data = data::read(&self.path, self.rescale)?;
        let sample = classify(&data.pairs, self.tie_eps)?;
        Ok((data, sample))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitRequest {
    pub data: DataSpec,
    pub model: FamilyId,
    pub options: FitOptions,
    /// `(name, value)` overrides of the automatic starting point.
    pub init: Vec<(String, f64)>,
}

/// Parses `name=value,name=value`.
pub fn parse_assignments(text: &str) -> Result<Vec<(String, f64)>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (name, value) = item.split_once('=').ok_or_else(|| {
                CommandError::Usage(format!("`{item}` is not of the form name=value"))
            })?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| CommandError::Usage(format!("`{value}` is not a number")))?;
            Ok((name.trim().to_string(), value))
        })
        .collect()
}

/// Parses a comma-separated list of free parameters, in the order
/// `alpha1, alpha2, alpha3, lambda (unless fixed), generator parameters`.
pub fn parse_theta(model: FamilyId, text: &str) -> Result<Beew> {
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CommandError::Usage(format!("`{s}` in --theta is not a number")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let expected = free_parameter_count(model);
    if values.len() != expected {
        return Err(CommandError::Domain(format!(
            "model `{model}` takes {expected} parameters ({}), got {}",
            parameter_names(model).join(", "),
            values.len()
        )));
    }
    Ok(from_free_parameters(model, &values)?)
}

fn apply_init(start: &Beew, init: &[(String, f64)]) -> Result<Beew> {
    if init.is_empty() {
        return Ok(*start);
    }
    let id = start.family().id();
    let names = parameter_names(id);
    let mut values = free_parameters(start);
    for (name, value) in init {
        let i = names.iter().position(|n| n == name).ok_or_else(|| {
            CommandError::Usage(format!(
                "model `{id}` has no parameter `{name}` (expected one of {})",
                names.join(", ")
            ))
        })?;
        values[i] = *value;
    }
    Ok(from_free_parameters(id, &values)?)
}

fn source_name(data: &Dataset) -> Option<String> {
    data.source.as_ref().map(|p| p.display().to_string())
}

fn document(
    command: &str,
    data: &Dataset,
    sample: &ClassifiedSample,
    spec: &DataSpec,
    model: &Beew,
    se: Option<&[f64]>,
    ll: f64,
) -> Result<ReportDocument> {
    let id = model.family().id();
    let k = free_parameter_count(id);
    let ks = ks_triplet(model, sample.pairs())?;
    Ok(ReportDocument {
        command: command.into(),
        model: id.as_str().into(),
        model_name: id.model_name().into(),
        data: source_name(data),
        n: sample.n(),
        ties: sample.n0(),
        tie_eps: spec.tie_eps,
        rescale: spec.rescale,
        parameters: parameters(&parameter_names(id), &free_parameters(model), se),
        loglik: ll,
        criteria: criteria(k, sample.n(), ll).ok().map(|c| Criteria {
            k,
            aic: c.aic,
            aicc: c.aicc,
            bic: c.bic,
        }),
        ks: ks_entries(&ks),
        lrt: None,
        em: None,
        notes: Vec::new(),
    })
}

fn fit_document(
    data: &Dataset,
    sample: &ClassifiedSample,
    spec: &DataSpec,
    r: &FitReport,
    options: &FitOptions,
) -> Result<ReportDocument> {
    let mut doc = document(
        "fit",
        data,
        sample,
        spec,
        &r.theta_hat,
        r.se.as_deref(),
        r.loglik,
    )?;
    doc.em = Some(em_summary(r, options.max_iter, options.rel_tol));
    doc.notes = r.notes.iter().map(|n| n.as_str().to_string()).collect();
    if !r.converged {
        doc.notes.push(format!(
            "EM stopped after {} iterations without converging",
            r.iterations
        ));
    }
    Ok(doc)
}

/// Fits one model. The report is returned even when EM did not converge;
/// `converged` in its EM summary says so.
pub fn cmd_fit(req: &FitRequest) -> Result<ReportDocument> {
    let (data, sample) = req.data.load()?;
    let start = apply_init(&initial_guess(&sample, req.model)?, &req.init)?;
    let r = em_fit(&sample, &start, &req.options)?;
    fit_document(&data, &sample, &req.data, &r, &req.options)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateRequest {
    pub theta: Beew,
    pub n: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

/// Draws `n` pairs; bit-reproducible for a given seed and parameter set.
pub fn cmd_simulate(req: &SimulateRequest) -> (Vec<(f64, f64)>, SimulationDocument) {
    let mut rng = ChaCha20Rng::seed_from_u64(req.seed);
    let pairs = req.theta.sample(&mut rng, req.n);
    let id = req.theta.family().id();
    let doc = SimulationDocument {
        command: "simulate".into(),
        model: id.as_str().into(),
        model_name: id.model_name().into(),
        parameters: parameter_values(&parameter_names(id), &free_parameters(&req.theta)),
        n: req.n,
        seed: req.seed,
        rng: RNG_NAME.into(),
        ties: pairs.iter().filter(|p| p.0 == p.1).count(),
        out: req.out.as_ref().map(|p| p.display().to_string()),
    };
    (pairs, doc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Pdf,
    Cdf,
    Survival,
    Hazard,
    Conditional,
}

impl Quantity {
    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::Pdf => "pdf",
            Quantity::Cdf => "cdf",
            Quantity::Survival => "survival",
            Quantity::Hazard => "hazard",
            Quantity::Conditional => "conditional",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRequest {
    pub theta: Beew,
    pub x1: f64,
    pub x2: f64,
    pub what: Quantity,
    /// Margin conditioned on, for [`Quantity::Conditional`].
    pub given: Margin,
    pub tie_eps: f64,
}

fn region_name(r: Region) -> &'static str {
    match r {
        Region::X1Less => "x1<x2",
        Region::X2Less => "x1>x2",
        Region::Diagonal => "diagonal",
    }
}

pub fn cmd_eval(req: &EvalRequest) -> Result<EvalDocument> {
    let m = &req.theta;
    let (x1, x2) = (req.x1, req.x2);
    if !(x1 >= 0.0 && x2 >= 0.0) {
        return Err(CommandError::Domain(format!(
            "evaluation point ({x1}, {x2}) must be nonnegative"
        )));
    }
    let region = Region::classify(x1, x2, req.tie_eps);
    let on_line = region == Region::Diagonal;
    let (value, kind) = match req.what {
        Quantity::Cdf => (m.joint_cdf(x1, x2), "probability"),
        Quantity::Survival => (m.joint_survival(x1, x2), "probability"),
        Quantity::Pdf => {
            require_positive(x1, x2)?;
            let e = m.joint_pdf(x1, x2, req.tie_eps);
            (
                e.value,
                if e.is_line_density() {
                    "line-density"
                } else {
                    "density"
                },
            )
        }
        Quantity::Hazard => {
            require_positive(x1, x2)?;
            let e = m.hazard(x1, x2, req.tie_eps)?;
            (e.value, if on_line { "line-hazard" } else { "hazard" })
        }
        Quantity::Conditional => {
            require_positive(x1, x2)?;
            let (target, xi, xj) = match req.given {
                Margin::Second => (Margin::First, x1, x2),
                Margin::First => (Margin::Second, x2, x1),
            };
            match m.conditional(target, xi, xj, req.tie_eps)? {
                beew::beew::Conditional::Density(v) => (v, "density"),
                beew::beew::Conditional::Atom(v) => (v, "atom"),
            }
        }
    };
    let id = m.family().id();
    Ok(EvalDocument {
        command: "eval".into(),
        model: id.as_str().into(),
        model_name: id.model_name().into(),
        parameters: parameter_values(&parameter_names(id), &free_parameters(m)),
        x1,
        x2,
        what: req.what.as_str().into(),
        given: (req.what == Quantity::Conditional).then(|| margin_name(req.given).into()),
        value,
        region: region_name(region).into(),
        kind: kind.into(),
    })
}

fn require_positive(x1: f64, x2: f64) -> Result<()> {
    if x1 > 0.0 && x2 > 0.0 {
        Ok(())
    } else {
        Err(CommandError::Domain(format!(
            "density needs a point with x1, x2 > 0, got ({x1}, {x2})"
        )))
    }
}

pub fn margin_name(m: Margin) -> &'static str {
    match m {
        Margin::First => "x1",
        Margin::Second => "x2",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GofRequest {
    pub data: DataSpec,
    pub theta: Beew,
}

/// Log-likelihood, criteria and K-S tests of given parameters, without
/// fitting.
pub fn cmd_gof(req: &GofRequest) -> Result<ReportDocument> {
    let (data, sample) = req.data.load()?;
    let ll = loglik(&req.theta, &sample);
    if !ll.is_finite() {
        return Err(CommandError::Domain(
            "the data have zero likelihood under these parameters".into(),
        ));
    }
    document("gof", &data, &sample, &req.data, &req.theta, None, ll)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRequest {
    pub data: DataSpec,
    pub base: FamilyId,
    pub full: FamilyId,
    pub options: FitOptions,
}

/// Fits both models and tests the base against the full one.
///
/// The full model is fitted twice, from its own starting point and from the
/// base fit embedded in the full family, and the better fit is kept. EM
/// never decreases the likelihood, so the full fit is at least as good as
/// the base fit up to the embedding error.
pub fn cmd_compare(req: &CompareRequest) -> Result<CompareDocument> {
    if req.base == req.full {
        return Err(CommandError::Model(beew::Error::NotNested("equal k")));
    }
    if !nests(req.base, req.full) {
        return Err(CommandError::Model(beew::Error::NotNested(
            "the base model must use the exp generator",
        )));
    }
    let (data, sample) = req.data.load()?;
    let opts = &req.options;
    let (base, own) = std::thread::scope(|s| {
        let base = s.spawn(|| em_fit(&sample, &initial_guess(&sample, req.base)?, opts));
        let own = s.spawn(|| em_fit(&sample, &initial_guess(&sample, req.full)?, opts));
        (
            base.join().expect("fit thread"),
            own.join().expect("fit thread"),
        )
    });
    let base = base?;
    let x_max = sample
        .pairs()
        .iter()
        .fold(0.0f64, |m, p| m.max(p.0).max(p.1));
    let nested =
        embed_exponential(&base.theta_hat, req.full, x_max).and_then(|t| em_fit(&sample, &t, opts));
    let full = match (own, nested) {
        (Ok(a), Ok(b)) => {
            if b.loglik > a.loglik {
                b
            } else {
                a
            }
        }
        (Ok(a), Err(_)) => a,
        (Err(_), Ok(b)) => b,
        (Err(e), Err(_)) => return Err(e.into()),
    };
    if full.loglik < base.loglik - 1e-6 {
        return Err(CommandError::Domain(format!(
            "full fit ({}) ended below the base fit ({}); refusing to report",
            full.loglik, base.loglik
        )));
    }
    let test = lrt(&base, &full)?;
    let entry = lrt_entry(req.base, req.full, &test);
    let base_doc = fit_document(&data, &sample, &req.data, &base, opts)?;
    let mut full_doc = fit_document(&data, &sample, &req.data, &full, opts)?;
    full_doc.lrt = Some(entry.clone());
    Ok(CompareDocument {
        command: "compare".into(),
        base: base_doc,
        full: full_doc,
        lrt: entry,
    })
}
