use std::path::PathBuf;

use kdescan::ingestion::{
    join_locations, load_prescriptions, write_table_csv, LookupColumns, MonthRange,
    PrescriptionColumns, YearMonth,
};

use super::write_csv;
use crate::config::Resolver;
use crate::error::CliError;
use crate::IngestArgs;

pub fn run(a: IngestArgs) -> Result<(), CliError> {
    let mut r = Resolver::new("ingest", a.common.config.as_deref())?;
    let prescriptions = PathBuf::from(r.required::<String>("prescriptions", a.prescriptions)?);
    let lookup = PathBuf::from(r.required::<String>("lookup", a.lookup)?);
    let drug: String = r.required("drug", a.drug)?;
    let from: YearMonth = r.required("from", a.from.as_deref().map(str::parse).transpose()?)?;
    let to: YearMonth = r.required("to", a.to.as_deref().map(str::parse).transpose()?)?;
    let output = PathBuf::from(r.required::<String>("output", a.output)?);
    let dropped_output = r.optional::<String>("dropped-output", a.dropped_output)?.map(PathBuf::from);
    let pd = PrescriptionColumns::default();
    let pcols = PrescriptionColumns {
        practice: r.value("practice-column", a.practice_column, pd.practice)?,
        month: r.value("month-column", a.month_column, pd.month)?,
        drug: r.value("drug-column", a.drug_column, pd.drug)?,
        items: r.value("items-column", a.items_column, pd.items)?,
    };
    let ld = LookupColumns::default();
    let lcols = LookupColumns {
        practice: r.value("lookup-practice-column", a.lookup_practice_column, ld.practice)?,
        postcode: r.value("postcode-column", a.postcode_column, ld.postcode)?,
        lat: r.value("latitude-column", a.latitude_column, ld.lat)?,
        lon: r.value("longitude-column", a.longitude_column, ld.lon)?,
    };
    r.finish()?;
    r.manifest.digest("prescriptions", &prescriptions)?;
    r.manifest.digest("lookup", &lookup)?;

    let range = MonthRange::new(from, to)?;
    let aggregated = load_prescriptions(&prescriptions, &pcols, &drug, range)?;
    let (table, dropped) = join_locations(&aggregated, &lookup, &lcols)?;
    write_table_csv(&table, &output)?;
    if let Some(path) = &dropped_output {
        write_csv(
            path,
            &["practice", "reason"],
            dropped.iter().map(|d| [d.code.clone(), d.reason.to_string()]),
        )?;
    }
    r.manifest.write_beside(&output)?;
    println!(
        "practices={} retained={} dropped={} months={}",
        table.len() + dropped.len(),
        table.len(),
        dropped.len(),
        table.months.len()
    );
    for d in &dropped {
        println!("dropped {}: {}", d.code, d.reason);
    }
    Ok(())
}
