use std::collections::HashMap;
use std::path::PathBuf;

use kdescan::simulation::evaluate;
use kdescan::{Clustering, Error};

use super::write_csv;
use crate::config::Resolver;
use crate::error::CliError;
use crate::input::read_labels;
use crate::EvalArgs;

pub fn run(a: EvalArgs) -> Result<(), CliError> {
    let mut r = Resolver::new("eval", a.common.config.as_deref())?;
    let pred_path = PathBuf::from(r.required::<String>("pred", a.pred)?);
    let truth_path = PathBuf::from(r.required::<String>("truth", a.truth)?);
    let output = PathBuf::from(r.required::<String>("output", a.output)?);
    r.finish()?;
    r.manifest.digest("pred", &pred_path)?;
    r.manifest.digest("truth", &truth_path)?;

    let pred = read_labels(&pred_path, "cluster")?;
    let truth: HashMap<String, u32> = read_labels(&truth_path, "truth")?.into_iter().collect();
    if truth.len() != pred.len() {
        return Err(CliError::Core(Error::DimensionMismatch {
            what: "truth rows vs predicted rows",
            expected: pred.len(),
            got: truth.len(),
        }));
    }
    let aligned = pred
        .iter()
        .map(|(id, _)| {
            truth.get(id).copied().ok_or_else(|| {
                CliError::Core(Error::Parse {
                    path: truth_path.clone(),
                    row: 0,
                    column: "id".into(),
                    reason: format!("no truth label for id {id:?}"),
                })
            })
        })
        .collect::<Result<Vec<u32>, _>>()?;
    let clustering = Clustering::from_labels(pred.into_iter().map(|(_, c)| c).collect());
    let report = evaluate(&clustering, &aligned)?;

    let row = [
        clustering.len().to_string(),
        clustering.cluster_count().to_string(),
        report.outliers.to_string(),
        report.correct.to_string(),
        report.incorrect.to_string(),
        format!("{:.6}", report.ari),
    ];
    let header = ["n", "clusters", "outliers", "correct", "incorrect", "ari"];
    write_csv(&output, &header, [row.clone()])?;
    r.manifest.write_beside(&output)?;
    println!(
        "{}",
        header.iter().zip(&row).map(|(h, v)| format!("{h}={v}")).collect::<Vec<_>>().join(" ")
    );
    Ok(())
}
