//! Prescription data ingestion and export.
//!
//! Reads a prescription CSV, keeps rows whose drug name contains a filter
//! string, sums paid items per practice and month, attaches coordinates from
//! a lookup CSV and emits one fixed-length monthly series per practice.
//! Months with no rows count as zero items.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde_json::json;

use crate::clustering::Clustering;
use crate::dtw::Series;
use crate::error::{Error, Result};
use crate::geometry::GeoPoint;

/// A calendar month written as `YYYYMM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth(u32);

impl YearMonth {
    pub fn new(yyyymm: u32) -> Result<Self> {
        let (year, month) = (yyyymm / 100, yyyymm % 100);
        if !(1..=12).contains(&month) || !(1000..=9999).contains(&year) {
            return Err(Error::invalid("month", format!("{yyyymm} is not a YYYYMM month")));
        }
        Ok(Self(yyyymm))
    }

    pub fn get(&self) -> u32 {
        self.0
    }

    pub fn next(&self) -> Self {
        let (year, month) = (self.0 / 100, self.0 % 100);
        if month == 12 {
            Self((year + 1) * 100 + 1)
        } else {
            Self(self.0 + 1)
        }
    }
}

impl std::str::FromStr for YearMonth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() != 6 || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::invalid("month", format!("{s:?} is not a YYYYMM month")));
        }
        Self::new(s.parse().expect("six ascii digits"))
    }
}

impl std::fmt::Display for YearMonth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Inclusive range of months.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonthRange {
    pub start: YearMonth,
    pub end: YearMonth,
}

impl MonthRange {
    pub fn new(start: YearMonth, end: YearMonth) -> Result<Self> {
        if start > end {
            return Err(Error::invalid("month range", format!("{start} is after {end}")));
        }
        Ok(Self { start, end })
    }

    pub fn months(&self) -> Vec<YearMonth> {
        let mut out = vec![self.start];
        while *out.last().unwrap() < self.end {
            let next = out.last().unwrap().next();
            out.push(next);
        }
        out
    }

    pub fn contains(&self, m: YearMonth) -> bool {
        self.start <= m && m <= self.end
    }
}

/// Header names in the prescription file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrescriptionColumns {
    pub practice: String,
    pub month: String,
    pub drug: String,
    pub items: String,
}

impl Default for PrescriptionColumns {
    fn default() -> Self {
        Self {
            practice: "GPPractice".into(),
            month: "PaidDateMonth".into(),
            drug: "BNFItemDescription".into(),
            items: "NumberOfPaidItems".into(),
        }
    }
}

/// Header names in the location lookup file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LookupColumns {
    pub practice: String,
    pub postcode: String,
    pub lat: String,
    pub lon: String,
}

impl Default for LookupColumns {
    fn default() -> Self {
        Self {
            practice: "PracticeCode".into(),
            postcode: "Postcode".into(),
            lat: "Latitude".into(),
            lon: "Longitude".into(),
        }
    }
}

/// Paid items summed per practice and month, restricted to a month range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aggregated {
    pub range: MonthRange,
    pub items: BTreeMap<String, BTreeMap<YearMonth, u64>>,
}

fn open_csv(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file))
}

fn column_index(headers: &csv::StringRecord, name: &str, path: &Path) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::MissingColumn {
            path: path.to_path_buf(),
            column: name.to_string(),
        })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_items(raw: &str) -> Option<u64> {
    raw.parse::<u64>().ok().or_else(|| {
        let v: f64 = raw.parse().ok()?;
        (v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(53)).then_some(v as u64)
    })
}

/// Reads prescriptions whose drug name contains `drug_filter` (case-insensitive).
pub fn load_prescriptions(
    path: &Path,
    columns: &PrescriptionColumns,
    drug_filter: &str,
    range: MonthRange,
) -> Result<Aggregated> {
    let mut reader = open_csv(path)?;
    let headers = reader.headers().map_err(csv_err(path))?.clone();
    let practice = column_index(&headers, &columns.practice, path)?;
    let month = column_index(&headers, &columns.month, path)?;
    let drug = column_index(&headers, &columns.drug, path)?;
    let items = column_index(&headers, &columns.items, path)?;
    let needle = drug_filter.to_lowercase();

    let mut out: BTreeMap<String, BTreeMap<YearMonth, u64>> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(csv_err(path))?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let field = |idx: usize| record.get(idx).unwrap_or("");
        if !field(drug).to_lowercase().contains(&needle) {
            continue;
        }
        let parse_error = |column: &str, reason: String| Error::Parse {
            path: path.to_path_buf(),
            row,
            column: column.to_string(),
            reason,
        };
        let m: YearMonth = field(month)
            .parse()
            .map_err(|e: Error| parse_error(&columns.month, e.to_string()))?;
        let n = parse_items(field(items)).ok_or_else(|| {
            parse_error(&columns.items, format!("{:?} is not a nonnegative count", field(items)))
        })?;
        let code = field(practice);
        if code.is_empty() {
            return Err(parse_error(&columns.practice, "empty practice code".into()));
        }
        if !range.contains(m) {
            continue;
        }
        *out.entry(code.to_string()).or_default().entry(m).or_insert(0) += n;
    }
    Ok(Aggregated { range, items: out })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PracticeRow {
    pub code: String,
    pub postcode: String,
    pub location: GeoPoint,
    pub series: Series,
}

/// One row per practice with coordinates and a full-length monthly series,
/// sorted by practice code.
#[derive(Debug, Clone, PartialEq)]
pub struct PracticeTable {
    pub months: Vec<YearMonth>,
    pub rows: Vec<PracticeRow>,
}

impl PracticeTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn locations(&self) -> Vec<GeoPoint> {
        self.rows.iter().map(|r| r.location).collect()
    }

    pub fn series(&self) -> Vec<Series> {
        self.rows.iter().map(|r| r.series.clone()).collect()
    }

    pub fn codes(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.code.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DropReason {
    NoLookupEntry,
    MissingCoordinates,
    InvalidCoordinates(String),
}

impl std::fmt::Display for DropReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DropReason::NoLookupEntry => f.write_str("no lookup entry"),
            DropReason::MissingCoordinates => f.write_str("missing coordinates"),
            DropReason::InvalidCoordinates(why) => write!(f, "invalid coordinates: {why}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DroppedPractice {
    pub code: String,
    pub reason: DropReason,
}

struct LookupEntry {
    postcode: String,
    lat: String,
    lon: String,
}

/// Attaches coordinates to aggregated practices; practices without usable
/// coordinates are dropped and reported.
pub fn join_locations(
    aggregated: &Aggregated,
    lookup_path: &Path,
    columns: &LookupColumns,
) -> Result<(PracticeTable, Vec<DroppedPractice>)> {
    let mut reader = open_csv(lookup_path)?;
    let headers = reader.headers().map_err(csv_err(lookup_path))?.clone();
    let practice = column_index(&headers, &columns.practice, lookup_path)?;
    let postcode = column_index(&headers, &columns.postcode, lookup_path)?;
    let lat = column_index(&headers, &columns.lat, lookup_path)?;
    let lon = column_index(&headers, &columns.lon, lookup_path)?;

    let mut lookup: BTreeMap<String, LookupEntry> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(csv_err(lookup_path))?;
        let field = |idx: usize| record.get(idx).unwrap_or("").to_string();
        lookup.entry(field(practice)).or_insert_with(|| LookupEntry {
            postcode: field(postcode),
            lat: field(lat),
            lon: field(lon),
        });
    }

    let months = aggregated.range.months();
    let mut rows = Vec::new();
    let mut dropped = Vec::new();
    for (code, counts) in &aggregated.items {
        let location = match lookup.get(code) {
            None => Err(DropReason::NoLookupEntry),
            Some(e) if e.lat.is_empty() || e.lon.is_empty() => Err(DropReason::MissingCoordinates),
            Some(e) => match (e.lat.parse::<f64>(), e.lon.parse::<f64>()) {
                (Ok(la), Ok(lo)) => GeoPoint::new(la, lo)
                    .map_err(|err| DropReason::InvalidCoordinates(err.to_string())),
                _ => Err(DropReason::InvalidCoordinates(format!("{:?}, {:?}", e.lat, e.lon))),
            },
        };
        match location {
            Ok(location) => {
                let values = months
                    .iter()
                    .map(|m| counts.get(m).copied().unwrap_or(0) as f64)
                    .collect();
                rows.push(PracticeRow {
                    code: code.clone(),
                    postcode: lookup[code].postcode.clone(),
                    location,
                    series: Series::new(values)?,
                });
            }
            Err(reason) => dropped.push(DroppedPractice {
                code: code.clone(),
                reason,
            }),
        }
    }
    if rows.is_empty() {
        return Err(Error::Empty("practice table: no practice has usable coordinates"));
    }
    Ok((PracticeTable { months, rows }, dropped))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `practice, postcode, <one column per month>, latitude, longitude`.
pub fn write_table_csv(table: &PracticeTable, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let mut header = vec!["practice".to_string(), "postcode".to_string()];
    header.extend(table.months.iter().map(|m| m.to_string()));
    header.extend(["latitude".to_string(), "longitude".to_string()]);
    w.write_record(&header).map_err(csv_err(path))?;
    for row in &table.rows {
        let mut rec = vec![row.code.clone(), row.postcode.clone()];
        rec.extend(row.series.values().iter().map(|v| v.to_string()));
        rec.extend([row.location.lat().to_string(), row.location.lon().to_string()]);
        w.write_record(&rec).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// GeoJSON FeatureCollection with one point per site (`[lon, lat]` order).
pub fn feature_collection(
    codes: &[String],
    locations: &[GeoPoint],
    clustering: &Clustering,
) -> Result<serde_json::Value> {
    if clustering.is_empty() {
        return Err(Error::Empty("clustering"));
    }
    for (what, len) in [("site codes", codes.len()), ("site locations", locations.len())] {
        if len != clustering.len() {
            return Err(Error::DimensionMismatch {
                what,
                expected: clustering.len(),
                got: len,
            });
        }
    }
    let features: Vec<_> = (0..clustering.len())
        .map(|i| {
            json!({
                "type": "Feature",
                "geometry": {
                    "type": "Point",
                    "coordinates": [locations[i].lon(), locations[i].lat()],
                },
                "properties": {
                    "practiceCode": codes[i],
                    "cluster": clustering.labels()[i],
                    "role": clustering.roles()[i].as_str(),
                },
            })
        })
        .collect();
    Ok(json!({ "type": "FeatureCollection", "features": features }))
}

pub fn write_geojson(
    codes: &[String],
    locations: &[GeoPoint],
    clustering: &Clustering,
    path: &Path,
) -> Result<()> {
    let value = feature_collection(codes, locations, clustering)?;
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, &value)?;
    w.write_all(b"\n").map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

pub fn export_geojson(table: &PracticeTable, clustering: &Clustering, path: &Path) -> Result<()> {
    write_geojson(&table.codes(), &table.locations(), clustering, path)
}

/// Distinct practices with at least one matching row in range, for drop accounting.
pub fn practice_codes(aggregated: &Aggregated) -> BTreeSet<&str> {
    aggregated.items.keys().map(String::as_str).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
        let p = dir.path().join(name);
        let mut f = File::create(&p).unwrap();
        f.write_all(body.as_bytes()).unwrap();
        p
    }

    fn range(a: u32, b: u32) -> MonthRange {
        MonthRange::new(YearMonth::new(a).unwrap(), YearMonth::new(b).unwrap()).unwrap()
    }

    #[test]
    fn month_range_spans_years() {
        let r = range(201510, 201709);
        let months = r.months();
        assert_eq!(months.len(), 24);
        assert_eq!(months[2].get(), 201512);
        assert_eq!(months[3].get(), 201601);
        assert!("201513".parse::<YearMonth>().is_err());
        assert!("2015-10".parse::<YearMonth>().is_err());
        assert!(MonthRange::new(YearMonth::new(201602).unwrap(), YearMonth::new(201601).unwrap()).is_err());
    }

    #[test]
    fn sums_and_filters() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "rx.csv",
            "GPPractice,PaidDateMonth,BNFItemDescription,NumberOfPaidItems\n\
             A,201510,Amoxicillin 250mg Capsules,3\n\
             A,201510,AMOXICILLIN 500mg capsules,4\n\
             A,201510,Paracetamol 500mg,100\n\
             A,201509,Amoxicillin 250mg Capsules,9\n\
             B,201511,amoxicillin oral suspension,2\n",
        );
        let agg = load_prescriptions(&p, &PrescriptionColumns::default(), "AMOXICILLIN", range(201510, 201511)).unwrap();
        assert_eq!(agg.items["A"][&YearMonth::new(201510).unwrap()], 7);
        assert_eq!(agg.items["A"].len(), 1);
        assert_eq!(agg.items["B"][&YearMonth::new(201511).unwrap()], 2);
    }

    #[test]
    fn reports_bad_month_with_row_and_column() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "rx.csv",
            "GPPractice,PaidDateMonth,BNFItemDescription,NumberOfPaidItems\n\
             A,201510,Amoxicillin,3\n\
             A,2015x0,Amoxicillin,4\n",
        );
        let err = load_prescriptions(&p, &PrescriptionColumns::default(), "amox", range(201510, 201511)).unwrap_err();
        match err {
            Error::Parse { row, column, .. } => {
                assert_eq!(row, 3);
                assert_eq!(column, "PaidDateMonth");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_column_and_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "rx.csv", "GPPractice,Month,BNFItemDescription,NumberOfPaidItems\n");
        assert!(matches!(
            load_prescriptions(&p, &PrescriptionColumns::default(), "x", range(201510, 201510)),
            Err(Error::MissingColumn { .. })
        ));
        let missing = dir.path().join("nope.csv");
        assert!(matches!(
            load_prescriptions(&missing, &PrescriptionColumns::default(), "x", range(201510, 201510)),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn join_drops_and_zero_fills() {
        let dir = tempfile::tempdir().unwrap();
        let rx = write(
            &dir,
            "rx.csv",
            "GPPractice,PaidDateMonth,BNFItemDescription,NumberOfPaidItems\n\
             A,201510,Amoxicillin,3\n\
             A,201512,Amoxicillin,5\n\
             B,201511,Amoxicillin,2\n\
             C,201511,Amoxicillin,2\n",
        );
        let lookup = write(
            &dir,
            "lookup.csv",
            "PracticeCode,Postcode,Latitude,Longitude\n\
             A,EH1 1AA,55.95,-3.19\n\
             B,G1 1AA,,\n",
        );
        let agg = load_prescriptions(&rx, &PrescriptionColumns::default(), "amox", range(201510, 201512)).unwrap();
        let (table, dropped) = join_locations(&agg, &lookup, &LookupColumns::default()).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.rows[0].series.values(), &[3.0, 0.0, 5.0]);
        assert_eq!(
            dropped,
            vec![
                DroppedPractice { code: "B".into(), reason: DropReason::MissingCoordinates },
                DroppedPractice { code: "C".into(), reason: DropReason::NoLookupEntry },
            ]
        );
        assert_eq!(table.len() + dropped.len(), practice_codes(&agg).len());

        let empty = write(&dir, "empty.csv", "PracticeCode,Postcode,Latitude,Longitude\n");
        assert!(join_locations(&agg, &empty, &LookupColumns::default()).is_err());
    }

    #[test]
    fn geojson_features() {
        let codes: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let locs = vec![
            GeoPoint::new(55.953252, -3.188267).unwrap(),
            GeoPoint::new(55.864237, -4.251806).unwrap(),
            GeoPoint::new(57.149717, -2.094278).unwrap(),
        ];
        let c = Clustering::from_labels(vec![1, 2, 0]);
        let v = feature_collection(&codes, &locs, &c).unwrap();
        let feats = v["features"].as_array().unwrap();
        assert_eq!(feats.len(), 3);
        let clusters: Vec<u64> = feats.iter().map(|f| f["properties"]["cluster"].as_u64().unwrap()).collect();
        assert_eq!(clusters, vec![1, 2, 0]);
        assert_eq!(feats[2]["properties"]["role"], "noise");

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.geojson");
        write_geojson(&codes, &locs, &c, &path).unwrap();
        let back: serde_json::Value = serde_json::from_reader(File::open(&path).unwrap()).unwrap();
        for (f, p) in back["features"].as_array().unwrap().iter().zip(&locs) {
            let xy = f["geometry"]["coordinates"].as_array().unwrap();
            assert_eq!(xy[0].as_f64().unwrap(), p.lon());
            assert_eq!(xy[1].as_f64().unwrap(), p.lat());
        }

        let empty = Clustering::from_labels(vec![]);
        assert!(feature_collection(&[], &[], &empty).is_err());
    }
}
