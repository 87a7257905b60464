//! The end-to-end run: one graph, several edge labelings, and per labeling
//! a directory of diagrams, kernels, bounds and random-feature tables.
//!
//! Variants run on scoped threads and share only read-only inputs; every
//! random quantity is addressed by `(seed, stream, index)`, so outputs do not
//! depend on scheduling.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use vpdk::kernel::{
    default_norming_family, entropy_bound, CertificateInstance, CertificateReport, KernelConfig,
};
use vpdk::metric::{BirthDeath, BirthDeathSpace, MetricPair};
use vpdk::rff::{hoeffding_epsilon, rff_entropy_transfer, rff_mass_bound, FeatureSample, RffMassBound};
use vpdk::rng::CounterRng;
use vpdk::topology::{
    build_filtration, essential_births, extract_vpd, label_edges, persistence, watts_strogatz, EdgeLabeling, Graph,
    LabelingKind, PersistenceOptions, PersistencePair, SpectralData,
};
use vpdk::vpd::{
    covering_number_with, diagram_dendrogram, grothendieck_rho, CoverMode, SignedDiagram, EXACT_COVER_LIMIT,
};

use crate::config::{RunConfig, SchemeConfig};
use crate::error::{CliError, Result};
use crate::output::{atomic_write, json_bytes, label_cell, sha256_hex, Csv};

const PERTURB_STREAM: u64 = 0x5045_5254;

/// Per-variant summary row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantSummary {
    pub variant: String,
    pub status: String,
    pub h1_pairs: Option<usize>,
    pub essential_classes: Option<usize>,
    pub support_size: Option<usize>,
    pub mass: Option<f64>,
    pub mean_lifetime: Option<f64>,
    pub lipschitz_bound: Option<f64>,
    pub hoeffding_epsilon: Option<f64>,
    pub robustness_bound: Option<f64>,
    pub top_certificate_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub kind: String,
    pub message: String,
}

impl From<&CliError> for Diagnostic {
    fn from(e: &CliError) -> Self {
        Self {
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub out: PathBuf,
    pub variants: Vec<VariantSummary>,
}

impl PipelineReport {
    pub fn all_ok(&self) -> bool {
        self.variants.iter().all(|v| v.status == "ok")
    }
}

/// Files of one variant, in write order.
struct Artifacts {
    files: Vec<(&'static str, Vec<u8>)>,
    summary: VariantSummary,
}

pub fn run_pipeline(config: &RunConfig, out: &Path) -> Result<PipelineReport> {
    config.validate()?;
    let g = &config.graph;
    let graph = watts_strogatz(g.n, g.k, g.p, g.seed)?;
    let spectral = SpectralData::new(&graph);
    let summaries: Vec<VariantSummary> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .variants
            .iter()
            .map(|&kind| {
                let (graph, spectral) = (&graph, &spectral);
                scope.spawn(move || {
                    let dir = out.join(kind.name());
                    let written = run_variant(config, graph, spectral, kind)
                        .and_then(|a| write_all(&dir, &a.files).map(|_| a.summary));
                    written.unwrap_or_else(|e| {
                        let diag = Diagnostic::from(&e);
                        // best effort: the summary still records the failure
                        let _ = json_bytes(&diag).and_then(|b| atomic_write(&dir.join("error.json"), &b));
                        failed_summary(kind, diag)
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .zip(&config.variants)
            .map(|(h, &kind)| {
                h.join().unwrap_or_else(|_| {
                    failed_summary(
                        kind,
                        Diagnostic {
                            kind: "internal".into(),
                            message: "variant worker panicked".into(),
                        },
                    )
                })
            })
            .collect()
    });
    atomic_write(&out.join("config.json"), &json_bytes(config)?)?;
    atomic_write(
        &out.join("summary.json"),
        &json_bytes(&json!({ "graph": graph_json(&graph), "variants": summaries }))?,
    )?;
    atomic_write(&out.join("summary.csv"), &summary_csv(&summaries))?;
    Ok(PipelineReport {
        out: out.to_path_buf(),
        variants: summaries,
    })
}

fn write_all(dir: &Path, files: &[(&'static str, Vec<u8>)]) -> Result<()> {
    for (name, bytes) in files {
        atomic_write(&dir.join(name), bytes)?;
    }
    Ok(())
}

fn failed_summary(kind: LabelingKind, diag: Diagnostic) -> VariantSummary {
    VariantSummary {
        variant: kind.name().into(),
        status: "failed".into(),
        h1_pairs: None,
        essential_classes: None,
        support_size: None,
        mass: None,
        mean_lifetime: None,
        lipschitz_bound: None,
        hoeffding_epsilon: None,
        robustness_bound: None,
        top_certificate_bound: None,
        error: Some(diag),
    }
}

fn graph_json(graph: &Graph) -> Value {
    serde_json::to_value(graph).expect("graph serializes")
}

fn opt_cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn summary_csv(rows: &[VariantSummary]) -> Vec<u8> {
    let mut csv = Csv::new(&[
        "variant",
        "status",
        "h1_pairs",
        "essential_classes",
        "support_size",
        "mass",
        "mean_lifetime",
        "lipschitz_bound",
        "hoeffding_epsilon",
        "robustness_bound",
        "top_certificate_bound",
    ]);
    for r in rows {
        let count = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        csv.row(&[
            r.variant.clone(),
            r.status.clone(),
            count(r.h1_pairs),
            count(r.essential_classes),
            count(r.support_size),
            opt_cell(r.mass),
            opt_cell(r.mean_lifetime),
            opt_cell(r.lipschitz_bound),
            opt_cell(r.hoeffding_epsilon),
            opt_cell(r.robustness_bound),
            opt_cell(r.top_certificate_bound),
        ]);
    }
    csv.into_bytes()
}

fn persistence_options(config: &RunConfig) -> PersistenceOptions {
    PersistenceOptions {
        keep_zero_persistence: config.persistence.keep_zero_persistence,
        include_h0: false,
    }
}

fn diagram_of(graph: &Graph, labeling: &EdgeLabeling, opts: PersistenceOptions) -> Result<(Vec<PersistencePair>, SignedDiagram)> {
    let complex = build_filtration(graph, labeling)?;
    let pairs = persistence(&complex, opts)?;
    let vpd = extract_vpd(&pairs, BirthDeathSpace::new(labeling.space))?;
    Ok((pairs, vpd))
}

/// The kernel configuration of a dataset under the run's parameters.
pub fn kernel_for(config: &RunConfig, space: BirthDeathSpace, dataset: &[SignedDiagram]) -> Result<KernelConfig> {
    let k = &config.kernel;
    let family = default_norming_family(&space, dataset, k.dimension, k.family_seed);
    Ok(match &k.scheme {
        SchemeConfig::Geometric => KernelConfig::geometric(space, k.t, family)?,
        SchemeConfig::Explicit { weights, spectrum } => {
            KernelConfig::explicit(space, k.t, family, weights.clone(), spectrum.clone())?
        }
    })
}

fn kind_index(kind: LabelingKind) -> u64 {
    LabelingKind::ALL.iter().position(|&k| k == kind).expect("kind is listed") as u64
}

fn run_variant(config: &RunConfig, graph: &Graph, spectral: &SpectralData, kind: LabelingKind) -> Result<Artifacts> {
    let opts = persistence_options(config);
    let labeling = label_edges(graph, spectral, kind, config.grid)?;
    let space = BirthDeathSpace::new(labeling.space);
    let (pairs, vpd) = diagram_of(graph, &labeling, opts)?;
    let essentials = essential_births(&pairs);
    let dendrogram = diagram_dendrogram(&vpd, &essentials, None);

    // perturbed replicates at the robustness level
    let eta = config.perturbation.factor * vpd.mean_lifetime();
    let streams = CounterRng::new(config.perturbation.seed, PERTURB_STREAM).substream(kind_index(kind));
    let mut dataset = vec![vpd.clone()];
    for rep in 0..config.perturbation.replicates {
        let mut cur = streams.substream(rep as u64).cursor();
        let labels = labeling
            .labels
            .iter()
            .map(|l| labeling.space.perturb(l, eta, || cur.uniform()))
            .collect();
        let moved = EdgeLabeling::new(kind, labeling.space, labels, labeling.time_scales.clone())?;
        dataset.push(diagram_of(graph, &moved, opts)?.1);
    }

    let mut max_rho: f64 = 0.0;
    for g in &dataset[1..] {
        max_rho = max_rho.max(grothendieck_rho(&dataset[0], g)?);
    }
    let envelope = eta * graph.edges().len() as f64;

    let kc = kernel_for(config, space, &dataset)?;
    let gram = kc.gram_matrix(&dataset)?;
    let lipschitz = kc.lipschitz_bound(1.0)?;
    let (draws, delta) = (config.rff.draws, config.rff.failure_prob);
    let eps_single = hoeffding_epsilon(draws, delta, 1)?;
    let eps_family = hoeffding_epsilon(draws, delta, dataset.len() + 1)?;
    let robustness = lipschitz * eta;

    let sample = FeatureSample::draw(&kc, draws, config.rff.seed)?;
    let certificates = certificates(config, &vpd)?;
    let top_certificate_bound = certificates.iter().find_map(|c| c.report.as_ref().map(|r| r.bound));

    // entropy
    let n = dataset.len();
    let mode = if n <= EXACT_COVER_LIMIT { CoverMode::Exact } else { CoverMode::Greedy };
    let delta_metric: Vec<f64> = (0..n * n)
        .map(|k| kc.feature_metric(&dataset[k / n], &dataset[k % n]))
        .collect::<vpdk::Result<_>>()?;
    let features: Vec<Vec<Complex64>> = dataset.iter().map(|g| sample.feature_map(g)).collect::<vpdk::Result<_>>()?;
    let feature_dist = |i: usize, j: usize| -> f64 {
        features[i].iter().zip(&features[j]).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    };
    let mut entropy = Vec::new();
    for &eps in &config.entropy_epsilons {
        entropy.push(json!({
            "epsilon": eps,
            "feature_cover": covering_number_with(n, eps, mode, 0, |i, j| delta_metric[i * n + j])?,
            "entropy_bound": entropy_bound(&kc, &dataset, eps, mode)?,
            "rff_cover": covering_number_with(n, eps, mode, 0, feature_dist)?,
            "rff_entropy_bound": rff_entropy_transfer(&sample, &dataset, eps, mode)?,
        }));
    }

    // random-feature tables
    let mut feature_csv = Csv::new(&["diagram", "feature", "re", "im"]);
    for (i, row) in features.iter().enumerate() {
        for (r, z) in row.iter().enumerate() {
            feature_csv.row(&[i.to_string(), r.to_string(), z.re.to_string(), z.im.to_string()]);
        }
    }
    let mut error_csv = Csv::new(&["i", "j", "closed_form", "empirical_re", "empirical_im", "abs_error"]);
    let mut max_error: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let exact = gram[(i, j)];
            let emp = sample.empirical_kernel(&dataset[i], &dataset[j])?;
            let err = (emp - Complex64::new(exact, 0.0)).norm();
            max_error = max_error.max(err);
            error_csv.row(&[
                i.to_string(),
                j.to_string(),
                exact.to_string(),
                emp.re.to_string(),
                emp.im.to_string(),
                err.to_string(),
            ]);
        }
    }
    let kernel_json = serde_json::to_vec(&kc).map_err(|e| CliError::Internal(e.to_string()))?;
    let rff_meta = json!({
        "draws": draws,
        "seed": config.rff.seed,
        "stream": vpdk::rff::FEATURE_STREAM,
        "failure_prob": delta,
        "config_hash": sha256_hex(&kernel_json),
        "dimension": kc.dimension(),
        "t": kc.t(),
        "spectrum_trace": kc.spectrum_trace(),
        "mean_norm_sq": sample.mean_norm_sq(),
        "empirical_lipschitz_bound": sample.empirical_lipschitz_bound(),
        "hoeffding_epsilon": eps_family,
        "max_abs_error": max_error,
        "within_hoeffding": max_error <= eps_family,
    });

    let bounds = json!({
        "variant": kind.name(),
        "space": space,
        "mean_lifetime": vpd.mean_lifetime(),
        "perturbation_level": eta,
        "dataset_size": n,
        "lipschitz_bound": lipschitz,
        "lipschitz_factor": kc.lipschitz_factor(),
        "trace_weight": kc.trace_weight(),
        "hoeffding_epsilon": { "draws": draws, "failure_prob": delta, "single_pair": eps_single, "dataset": eps_family, "dataset_set_size": n + 1 },
        "robustness_bound": robustness,
        "stability": {
            "max_rho_to_replicates": max_rho,
            "eta_times_edges": envelope,
            "ratio": if envelope > 0.0 { max_rho / envelope } else { 0.0 },
        },
        "mass_certificates": certificates.iter().map(CertificateEntry::to_json).collect::<Vec<_>>(),
        "entropy": { "mode": if mode == CoverMode::Exact { "exact" } else { "greedy" }, "rows": entropy },
        "uniform_discreteness": {
            "ambient": space.labels().is_ambient_uniformly_discrete(),
            "note": "the label space has accumulating lifetimes, so K(X, A) is neither discrete nor locally compact",
        },
    });

    let summary = VariantSummary {
        variant: kind.name().into(),
        status: "ok".into(),
        h1_pairs: Some(pairs.len()),
        essential_classes: Some(essentials.len()),
        support_size: Some(vpd.support_len()),
        mass: Some(vpd.mass()),
        mean_lifetime: Some(vpd.mean_lifetime()),
        lipschitz_bound: Some(lipschitz),
        hoeffding_epsilon: Some(eps_single),
        robustness_bound: Some(robustness),
        top_certificate_bound,
        error: None,
    };

    let mut newick = dendrogram.to_newick();
    newick.push('\n');
    Ok(Artifacts {
        files: vec![
            ("graph.json", json_bytes(graph)?),
            ("labels.json", json_bytes(&labeling)?),
            ("pairs.csv", pairs_csv(&pairs)),
            ("vpd.json", json_bytes(&vpd)?),
            ("dataset.json", json_bytes(&dataset)?),
            ("dendrogram.nwk", newick.into_bytes()),
            ("dendrogram.json", json_bytes(&dendrogram.to_json())?),
            ("kernel.json", json_bytes(&kc)?),
            ("gram.csv", gram_csv(&gram)),
            ("bounds.json", json_bytes(&bounds)?),
            ("rff_features.csv", feature_csv.into_bytes()),
            ("rff_meta.json", json_bytes(&rff_meta)?),
            ("rff_kernel_error.csv", error_csv.into_bytes()),
        ],
        summary,
    })
}

pub fn pairs_csv(pairs: &[PersistencePair]) -> Vec<u8> {
    let mut csv = Csv::new(&["birth_scalar", "death_scalar", "birth_label", "death_label", "dim"]);
    for p in pairs {
        csv.row(&[
            p.birth_scalar.to_string(),
            p.death_scalar.map_or_else(|| "inf".into(), |d| d.to_string()),
            label_cell(&p.birth_label),
            p.death_label.as_ref().map(label_cell).unwrap_or_default(),
            p.dim.to_string(),
        ]);
    }
    csv.into_bytes()
}

fn gram_csv(gram: &nalgebra::DMatrix<f64>) -> Vec<u8> {
    let n = gram.nrows();
    let names: Vec<String> = (0..n).map(|j| format!("d{j}")).collect();
    let mut header = vec!["diagram"];
    header.extend(names.iter().map(String::as_str));
    let mut csv = Csv::new(&header);
    for i in 0..n {
        let mut row = vec![format!("d{i}")];
        row.extend((0..n).map(|j| gram[(i, j)].to_string()));
        csv.row(&row);
    }
    csv.into_bytes()
}

struct CertificateEntry {
    label: String,
    target: SignedDiagram,
    report: Option<CertificateReport>,
    rff: Option<RffMassBound>,
    rff_epsilon: Option<f64>,
    skipped: Option<Diagnostic>,
}

impl CertificateEntry {
    fn to_json(&self) -> Value {
        json!({
            "target": self.label,
            "diagram": self.target,
            "status": if self.report.is_some() { "ok" } else { "skipped" },
            "report": self.report,
            "rff_bound": self.rff,
            "rff_epsilon": self.rff_epsilon,
            "reason": self.skipped,
        })
    }
}

/// Certificates on the longest-lived singletons and the sum of the top two.
fn certificates(config: &RunConfig, vpd: &SignedDiagram) -> Result<Vec<CertificateEntry>> {
    let space = vpd.space();
    let mut points: Vec<&BirthDeath> = vpd.support().collect();
    // longest first; the stable sort keeps the canonical order among ties
    points.sort_by(|a, b| space.distance_to_diagonal(b).total_cmp(&space.distance_to_diagonal(a)));
    let mut targets: Vec<(String, SignedDiagram)> = points
        .iter()
        .take(config.certificate.singletons)
        .enumerate()
        .map(|(i, p)| Ok((format!("singleton-{i}"), SignedDiagram::singleton(space, (*p).clone())?)))
        .collect::<vpdk::Result<_>>()?;
    if config.certificate.include_pair && points.len() >= 2 {
        targets.push((
            "pair-0-1".into(),
            SignedDiagram::from_points(space, [points[0].clone(), points[1].clone()])?,
        ));
    }
    let params = config.certificate_params();
    let eps_hat = hoeffding_epsilon(config.rff.draws, config.rff.failure_prob, 2)?;
    let mut out = Vec::new();
    for (label, target) in targets {
        let evaluated = CertificateInstance::new(target.clone(), params).and_then(|inst| {
            let report = inst.evaluate()?;
            let sample = FeatureSample::draw(&inst.kernel_config()?, config.rff.draws, config.rff.seed)?;
            let rff = rff_mass_bound(&sample, &inst, eps_hat)?;
            Ok((report, rff))
        });
        out.push(match evaluated {
            Ok((report, rff)) => CertificateEntry {
                label,
                target,
                report: Some(report),
                rff: Some(rff),
                rff_epsilon: Some(eps_hat),
                skipped: None,
            },
            Err(e) => CertificateEntry {
                label,
                target,
                report: None,
                rff: None,
                rff_epsilon: None,
                skipped: Some(Diagnostic::from(&CliError::from(e))),
            },
        });
    }
    Ok(out)
}
