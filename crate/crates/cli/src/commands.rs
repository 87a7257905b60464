use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::json;
use vpdk::kernel::CertificateInstance;
use vpdk::metric::{is_uniformly_discrete, BirthDeath, BirthDeathSpace, Label, QuotientPoint};
use vpdk::rff::{hoeffding_epsilon, FeatureSample};
use vpdk::vpd::{diagram_dendrogram, grothendieck_rho, SignedDiagram};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::pipeline::{kernel_for, run_pipeline};

fn write_out(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.write_all(b"\n"))
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    write_out(out, &serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?)
}

fn read_text(path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if text.trim().is_empty() {
        return Err(CliError::Input(format!("{}: file is empty", path.display())));
    }
    Ok(text)
}

pub fn read_diagram(path: &Path) -> Result<SignedDiagram> {
    serde_json::from_str(&read_text(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn read_diagrams(paths: &[PathBuf]) -> Result<(BirthDeathSpace, Vec<SignedDiagram>)> {
    let diagrams = paths.iter().map(|p| read_diagram(p)).collect::<Result<Vec<_>>>()?;
    let space = diagrams
        .first()
        .ok_or_else(|| CliError::Input("at least one diagram file is required".into()))?
        .space();
    for g in &diagrams {
        space.ensure_same(&g.space())?;
    }
    Ok((space, diagrams))
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, exponent) = s.split_once('e').expect("scientific format");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{exponent}")
    }
}

pub fn distance(a: &Path, b: &Path, as_json: bool, out: &mut dyn Write) -> Result<()> {
    let (g, h) = (read_diagram(a)?, read_diagram(b)?);
    let rho = grothendieck_rho(&g, &h)?;
    if as_json {
        print_json(out, &json!({ "rho": rho }))
    } else {
        write_out(out, &format_sig12(rho))
    }
}

#[derive(Deserialize)]
struct PointSample {
    space: BirthDeathSpace,
    points: Vec<SamplePoint>,
}

#[derive(Deserialize)]
struct SamplePoint {
    birth: Label,
    death: Label,
}

pub fn classify(points: &Path, epsilon: f64, as_json: bool, out: &mut dyn Write) -> Result<()> {
    let sample: PointSample = serde_json::from_str(&read_text(points)?).map_err(|source| CliError::Parse {
        path: points.to_path_buf(),
        source,
    })?;
    if sample.points.is_empty() {
        return Err(CliError::Input(format!("{}: no points to classify", points.display())));
    }
    let space = sample.space;
    let pts = sample
        .points
        .into_iter()
        .map(|p| {
            let x = BirthDeath::new(p.birth, p.death);
            space.validate(&x)?;
            Ok(QuotientPoint::Point(x))
        })
        .collect::<Result<Vec<_>>>()?;
    let discrete = is_uniformly_discrete(&space, &pts, epsilon)?;
    let verdict = if discrete {
        format!("sample-uniformly-discrete at ε={epsilon}; if ambient-uniform, K(X,A) discrete and locally compact")
    } else {
        format!("not uniformly discrete at ε={epsilon}")
    };
    let ambient = space.labels().is_ambient_uniformly_discrete();
    let status = if ambient {
        format!("label space {} is uniformly discrete", space.labels())
    } else {
        format!(
            "label space {} is not uniformly discrete: K(X,A) is neither discrete nor locally compact",
            space.labels()
        )
    };
    if as_json {
        print_json(
            out,
            &json!({
                "epsilon": epsilon,
                "points": pts.len(),
                "space": space,
                "sample_uniformly_discrete": discrete,
                "verdict": verdict,
                "ambient_uniformly_discrete": ambient,
                "ambient_status": status,
            }),
        )
    } else {
        write_out(out, &format!("{verdict}\n{status}"))
    }
}

pub fn kernel(config: &RunConfig, files: &[PathBuf], as_json: bool, out: &mut dyn Write) -> Result<()> {
    let (space, diagrams) = read_diagrams(files)?;
    let kc = kernel_for(config, space, &diagrams)?;
    let gram = kc.gram_matrix(&diagrams)?;
    let n = diagrams.len();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| gram[(i, j)]).collect()).collect();
    let lipschitz = kc.lipschitz_bound(1.0)?;
    if as_json {
        let metric: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| r.iter().map(|k| (2.0 - 2.0 * k).max(0.0).sqrt()).collect())
            .collect();
        print_json(
            out,
            &json!({ "gram": rows, "feature_metric": metric, "lipschitz_bound": lipschitz, "t": kc.t(), "dimension": kc.dimension() }),
        )
    } else {
        let mut text = String::new();
        for r in &rows {
            text.push_str(&r.iter().map(|k| format_sig12(*k)).collect::<Vec<_>>().join(" "));
            text.push('\n');
        }
        text.push_str(&format!("lipschitz_bound {}", format_sig12(lipschitz)));
        write_out(out, &text)
    }
}

pub fn rff(config: &RunConfig, files: &[PathBuf], as_json: bool, out: &mut dyn Write) -> Result<()> {
    let (space, diagrams) = read_diagrams(files)?;
    let kc = kernel_for(config, space, &diagrams)?;
    let sample = FeatureSample::draw(&kc, config.rff.draws, config.rff.seed)?;
    let eps = hoeffding_epsilon(config.rff.draws, config.rff.failure_prob, diagrams.len())?;
    let mut rows = Vec::new();
    for i in 0..diagrams.len() {
        for j in i..diagrams.len() {
            let exact = kc.kernel(&diagrams[i], &diagrams[j])?;
            let emp = sample.empirical_kernel(&diagrams[i], &diagrams[j])?;
            rows.push((i, j, exact, emp, (emp - num_complex::Complex64::new(exact, 0.0)).norm()));
        }
    }
    if as_json {
        let table: Vec<_> = rows
            .iter()
            .map(|(i, j, k, e, err)| json!({"i": i, "j": j, "closed_form": k, "empirical_re": e.re, "empirical_im": e.im, "abs_error": err}))
            .collect();
        print_json(
            out,
            &json!({ "draws": config.rff.draws, "seed": config.rff.seed, "hoeffding_epsilon": eps,
                     "empirical_lipschitz_bound": sample.empirical_lipschitz_bound(), "pairs": table }),
        )
    } else {
        let mut text = String::from("i j closed_form empirical abs_error\n");
        for (i, j, k, e, err) in &rows {
            text.push_str(&format!("{i} {j} {} {} {}\n", format_sig12(*k), format_sig12(e.re), format_sig12(*err)));
        }
        text.push_str(&format!("hoeffding_epsilon {}", format_sig12(eps)));
        write_out(out, &text)
    }
}

pub fn certificate(config: &RunConfig, file: &Path, as_json: bool, out: &mut dyn Write) -> Result<()> {
    let g = read_diagram(file)?;
    let report = CertificateInstance::new(g, config.certificate_params())?.evaluate()?;
    if as_json {
        print_json(out, &serde_json::to_value(&report).map_err(|e| CliError::Internal(e.to_string()))?)
    } else {
        write_out(
            out,
            &format!(
                "mass {}\nbound {}\ngrid {}\nlattice_size {}\nkraft_sum {}\nkernel_value {}",
                format_sig12(report.mass),
                format_sig12(report.bound),
                format_sig12(report.grid),
                report.lattice_size,
                format_sig12(report.kraft_sum),
                format_sig12(report.kernel_value),
            ),
        )
    }
}

pub fn dendrogram(file: &Path, newick: bool, out: &mut dyn Write) -> Result<()> {
    let g = read_diagram(file)?;
    let d = diagram_dendrogram(&g, &[], None);
    if newick {
        write_out(out, &d.to_newick())
    } else {
        print_json(out, &d.to_json())
    }
}

pub fn pipeline(config: &RunConfig, dir: &Path, as_json: bool, out: &mut dyn Write) -> Result<bool> {
    let report = run_pipeline(config, dir)?;
    if as_json {
        print_json(out, &json!({ "out": dir, "variants": report.variants }))?;
    } else {
        let mut text = String::from("variant            status  pairs  lipschitz  hoeffding  robustness\n");
        let cell = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
        for v in &report.variants {
            text.push_str(&format!(
                "{:<18} {:<7} {:>5}  {:>9}  {:>9}  {:>10}\n",
                v.variant,
                v.status,
                v.h1_pairs.map_or_else(|| "-".into(), |p| p.to_string()),
                cell(v.lipschitz_bound),
                cell(v.hoeffding_epsilon),
                cell(v.robustness_bound),
            ));
            if let Some(e) = &v.error {
                text.push_str(&format!("  {}: {}\n", e.kind, e.message));
            }
        }
        text.push_str(&format!("artifacts in {}", dir.display()));
        write_out(out, &text)?;
    }
    Ok(report.all_ok())
}
