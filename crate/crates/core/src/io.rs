//! CSV input and output.
//!
//! Input files have a header row and one row per point. A column named by
//! `lens_column` (default `lens`) holds the lens and is not a coordinate.
//! Without such a column the last column is used as the lens and also stays a
//! coordinate.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{LensMap, PointCloud};

pub const DEFAULT_LENS_COLUMN: &str = "lens";

fn parse_records<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::InvalidData("CSV input needs a header row".into()));
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field.parse::<f64>().map_err(|_| {
                    Error::InvalidData(format!("row {}, column `{}`: `{field}` is not a number", line + 2, header[col]))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::InvalidData("CSV input has no data rows".into()));
    }
    Ok((header, rows))
}

/// Reads points and lens values. With `lens_column = Some(name)` the column
/// must exist; with `None` a column named `lens` is used if present, else the
/// last column.
pub fn read_csv<R: Read>(input: R, lens_column: Option<&str>) -> Result<(PointCloud, LensMap)> {
    let (header, rows) = parse_records(input)?;
    let wanted = lens_column.unwrap_or(DEFAULT_LENS_COLUMN);
    let named = header.iter().position(|h| h == wanted);
    let (coords_of, lens_col): (Vec<usize>, usize) = match (named, lens_column) {
        (Some(c), _) => ((0..header.len()).filter(|&i| i != c).collect(), c),
        (None, Some(name)) => {
            return Err(Error::InvalidData(format!(
                "lens column `{name}` not found; the input needs a header row with a `{name}` column \
                 (or, without --lens-column, the last column is taken as the lens); found columns {header:?}"
            )))
        }
        (None, None) => ((0..header.len()).collect(), header.len() - 1),
    };
    if coords_of.is_empty() {
        return Err(Error::InvalidData("CSV input has a lens column but no coordinate columns".into()));
    }
    let lens = rows.iter().map(|r| r[lens_col]).collect();
    let points = rows.iter().map(|r| coords_of.iter().map(|&c| r[c]).collect()).collect();
    Ok((PointCloud::new(points)?, LensMap::new(lens)?))
}

pub fn read_csv_path(path: &Path, lens_column: Option<&str>) -> Result<(PointCloud, LensMap)> {
    read_csv(std::fs::File::open(path)?, lens_column)
}

/// Writes coordinates as `x0, x1, ...` followed by a `lens` column.
pub fn write_csv<W: Write>(out: W, cloud: &PointCloud, lens: &LensMap) -> Result<()> {
    lens.check_matches(cloud)?;
    let mut writer = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (0..cloud.dim()).map(|d| format!("x{d}")).collect();
    header.push(DEFAULT_LENS_COLUMN.to_string());
    writer.write_record(&header)?;
    for (i, p) in cloud.iter().enumerate() {
        let mut row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        row.push(lens.get(i).to_string());
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes one named value per point with an `index` column.
pub fn write_values_csv<W: Write>(out: W, columns: &[(&str, &[f64])]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header = vec!["index".to_string()];
    header.extend(columns.iter().map(|(name, _)| name.to_string()));
    writer.write_record(&header)?;
    let n = columns.first().map_or(0, |(_, v)| v.len());
    for i in 0..n {
        let mut row = vec![i.to_string()];
        row.extend(columns.iter().map(|(_, v)| v[i].to_string()));
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_lens_column_is_not_a_coordinate() {
        let data = "x,y,lens\n0,1,5\n2,3,6\n";
        let (cloud, lens) = read_csv(data.as_bytes(), None).unwrap();
        assert_eq!(cloud.dim(), 2);
        assert_eq!(lens.values(), &[5.0, 6.0]);
    }

    #[test]
    fn last_column_is_default_lens() {
        let data = "x,t\n0,1\n2,3\n";
        let (cloud, lens) = read_csv(data.as_bytes(), None).unwrap();
        assert_eq!(cloud.dim(), 2);
        assert_eq!(lens.values(), &[1.0, 3.0]);
    }

    #[test]
    fn missing_named_column_is_an_error() {
        let err = read_csv("x,y\n0,1\n".as_bytes(), Some("height")).unwrap_err();
        assert!(err.to_string().contains("lens column `height` not found"));
    }

    #[test]
    fn round_trip() {
        let cloud = PointCloud::new(vec![vec![0.5, 1.0], vec![-2.0, 3.25]]).unwrap();
        let lens = LensMap::new(vec![1.0, 3.25]).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &cloud, &lens).unwrap();
        let (c2, l2) = read_csv(&buf[..], None).unwrap();
        assert_eq!(c2.as_flat(), cloud.as_flat());
        assert_eq!(l2.values(), lens.values());
    }
}
