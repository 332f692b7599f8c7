//! CSV ingestion and emission.
//!
//! Schema: header `t,p1,..,pL,q1,..,qL`, one row per observation. Fields are
//! plain decimals or `a/b` fractions. The `t` column is informational; row
//! order is the observation order.

use std::io::{Read, Write};

use crate::dataset::{Bundle, Observation, PriceVector, PurchaseDataset};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational};

fn header_goods(header: &csv::StringRecord) -> Result<usize> {
    let bad = |msg: String| Error::Parse { row: 1, message: msg };
    let n = header.len();
    if n < 3 || (n - 1) % 2 != 0 {
        return Err(bad(format!("header must be t,p1..pL,q1..qL; got {n} columns")));
    }
    let goods = (n - 1) / 2;
    let expected = std::iter::once("t".to_string())
        .chain((1..=goods).map(|i| format!("p{i}")))
        .chain((1..=goods).map(|i| format!("q{i}")));
    for (col, (got, want)) in header.iter().zip(expected).enumerate() {
        if !got.trim().eq_ignore_ascii_case(&want) {
            return Err(bad(format!("column {}: expected {want:?}, found {got:?}", col + 1)));
        }
    }
    Ok(goods)
}

/// Parses a dataset from CSV text.
pub fn parse_csv<R: Read>(input: R) -> Result<PurchaseDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader
        .headers()
        .map_err(|e| Error::Parse { row: 1, message: e.to_string() })?
        .clone();
    let goods = header_goods(&header)?;

    let mut observations = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::Parse { row, message: e.to_string() })?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if record.len() != 1 + 2 * goods {
            return Err(Error::Parse {
                row,
                message: format!("expected {} columns, found {}", 1 + 2 * goods, record.len()),
            });
        }
        let field = |col: usize| {
            parse_rational(&record[col]).map_err(|message| Error::Parse { row, message })
        };
        let prices = (1..=goods).map(field).collect::<Result<Vec<_>>>()?;
        let quantities = (goods + 1..=2 * goods).map(field).collect::<Result<Vec<_>>>()?;
        let located = |e: Error| Error::Parse { row, message: e.to_string() };
        let price = PriceVector::new(prices).map_err(located)?;
        let quantity = Bundle::new(quantities).map_err(located)?;
        observations.push(Observation::new(price, quantity).map_err(located)?);
    }
    if observations.is_empty() {
        return Err(Error::EmptyDataset);
    }
    PurchaseDataset::new(observations)
}

pub fn parse_csv_str(text: &str) -> Result<PurchaseDataset> {
    parse_csv(text.as_bytes())
}

/// Writes `dataset` in the canonical CSV form.
pub fn serialize_csv<W: Write>(dataset: &PurchaseDataset, out: W) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let goods = dataset.goods();
    let header: Vec<String> = std::iter::once("t".to_string())
        .chain((1..=goods).map(|i| format!("p{i}")))
        .chain((1..=goods).map(|i| format!("q{i}")))
        .collect();
    writer.write_record(&header)?;
    for (t, obs) in dataset.observations().iter().enumerate() {
        let row: Vec<String> = std::iter::once((t + 1).to_string())
            .chain(obs.price().as_slice().iter().map(format_rational))
            .chain(obs.quantity().as_slice().iter().map(format_rational))
            .collect();
        writer.write_record(&row)?;
    }
    writer.flush()
}

pub fn serialize_csv_string(dataset: &PurchaseDataset) -> String {
    let mut buf = Vec::new();
    serialize_csv(dataset, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}
