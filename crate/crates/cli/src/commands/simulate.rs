use std::path::PathBuf;

use kdescan::simulation::generate;

use super::{mixture_spec, write_csv, MixtureFlags};
use crate::config::Resolver;
use crate::error::CliError;
use crate::SimulateArgs;

pub fn run(a: SimulateArgs) -> Result<(), CliError> {
    let mut r = Resolver::new("simulate", a.common.config.as_deref())?;
    let output = PathBuf::from(r.required::<String>("output", a.output)?);
    let truth_output = r.optional::<String>("truth-output", a.truth_output)?.map(PathBuf::from);
    let seed = r.value("seed", a.seed, 0u64)?;
    let flags = MixtureFlags {
        per_component: a.per_component,
        sigma_wide: a.sigma_wide,
        sigma_tight: a.sigma_tight,
        side: a.side,
    };
    let spec = mixture_spec(&mut r, flags, seed)?;
    r.finish()?;

    let data = generate(&spec)?;
    write_csv(
        &output,
        &["id", "x", "y", "truth"],
        data.points.iter().zip(&data.truth).enumerate().map(|(i, (p, t))| {
            [i.to_string(), p.x.to_string(), p.y.to_string(), t.to_string()]
        }),
    )?;
    if let Some(path) = &truth_output {
        write_csv(
            path,
            &["id", "truth"],
            data.truth.iter().enumerate().map(|(i, t)| [i.to_string(), t.to_string()]),
        )?;
    }
    r.manifest.write_beside(&output)?;
    println!("points={} components={} seed={seed}", data.len(), spec.centers.len());
    Ok(())
}
