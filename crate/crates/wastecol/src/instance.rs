//! Readers for the published instance files.
//!
//! `time.txt` holds the `(n+1) x (n+1)` travel-time matrix in minutes, row
//! and column 0 being the depot. Tokens may be separated by any mix of
//! whitespace, commas or semicolons; `#` starts a comment.
//!
//! `waste.txt` holds one record per collection point: latitude, longitude and
//! daily waste in m3. A leading header line of column names is accepted, as
//! is a `# columns: lon lat waste` directive (names: `id`, `lat`, `lon`,
//! `waste`, `skip`). A record whose first token is `depot`, or an extra first
//! record when the file has `n+1` records, gives the depot coordinates.

use std::path::{Path, PathBuf};

use wastecol_core::model::{BinCatalog, FleetParams, Horizon, Instance, Problem};

use crate::error::{read_to_string, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Id,
    Lat,
    Lon,
    Waste,
    Skip,
}

impl Column {
    fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "id" | "point" | "index" | "i" => Some(Column::Id),
            "lat" | "latitude" => Some(Column::Lat),
            "lon" | "lng" | "long" | "longitude" => Some(Column::Lon),
            "waste" | "w" | "daily_waste" | "m3" => Some(Column::Waste),
            "skip" | "_" => Some(Column::Skip),
            _ => None,
        }
    }
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || c == ',' || c == ';').filter(|t| !t.is_empty())
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn parse_number(tok: &str, path: &Path, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse { path: path.to_path_buf(), line, message: format!("not a number: {tok:?}") })
}

/// Parses a travel-time matrix.
pub fn parse_time(text: &str, path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let row = tokens(line).map(|t| parse_number(t, path, k + 1)).collect::<Result<Vec<f64>>>()?;
        if row.is_empty() {
            continue;
        }
        if let Some(v) = row.iter().find(|v| **v < 0.0) {
            return Err(Error::Parse { path: path.into(), line: k + 1, message: format!("negative travel time {v}") });
        }
        rows.push(row);
    }
    let dim = rows.len();
    if dim == 0 {
        return Err(Error::Parse { path: path.into(), line: 0, message: "empty matrix".into() });
    }
    if rows.iter().all(|r| r.len() == dim) {
        return Ok(rows);
    }
    // one long stream of k*k values
    let flat: Vec<f64> = rows.concat();
    let k = (flat.len() as f64).sqrt().round() as usize;
    if k * k == flat.len() {
        return Ok(flat.chunks(k).map(<[f64]>::to_vec).collect());
    }
    Err(Error::DimensionMismatch(format!(
        "{}: travel matrix is not square ({dim} rows, row lengths {:?})",
        path.display(),
        rows.iter().map(Vec::len).collect::<std::collections::BTreeSet<_>>()
    )))
}

/// One parsed `waste.txt`.
#[derive(Debug, Clone, PartialEq)]
pub struct WasteTable {
    /// `(lat, lon)` per point.
    pub coords: Vec<(f64, f64)>,
    pub daily_waste: Vec<f64>,
    pub depot: Option<(f64, f64)>,
}

/// Parses point records. `expected_points`, when known from the travel
/// matrix, lets an extra first record be read as the depot.
pub fn parse_waste(text: &str, path: &Path, expected_points: Option<usize>) -> Result<WasteTable> {
    let mut columns: Option<Vec<Column>> = None;
    let mut records: Vec<(usize, bool, Vec<f64>)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(spec) = rest.strip_prefix("columns:") {
                columns = Some(parse_columns(tokens(spec), path, line_no)?);
            }
            continue;
        }
        let line = strip_comment(raw);
        let toks: Vec<&str> = tokens(line).collect();
        if toks.is_empty() {
            continue;
        }
        let is_depot = toks[0].eq_ignore_ascii_case("depot");
        let body = if is_depot { &toks[1..] } else { &toks[..] };
        if records.is_empty() && !is_depot && body.iter().all(|t| t.parse::<f64>().is_err()) {
            // header line
            if columns.is_none() {
                columns = Some(parse_columns(body.iter().copied(), path, line_no)?);
            }
            continue;
        }
        let values = body.iter().map(|t| parse_number(t, path, line_no)).collect::<Result<Vec<f64>>>()?;
        records.push((line_no, is_depot, values));
    }
    if records.is_empty() {
        return Err(Error::Parse { path: path.into(), line: 0, message: "no point records".into() });
    }
    let width = records[0].2.len();
    if let Some((line, _, _)) = records.iter().find(|r| r.2.len() != width) {
        return Err(Error::Parse { path: path.into(), line: *line, message: format!("expected {width} columns") });
    }
    let columns = match columns {
        Some(c) if c.len() == width => c,
        Some(c) => {
            return Err(Error::Parse {
                path: path.into(),
                line: records[0].0,
                message: format!("{width} values per record but {} column names", c.len()),
            })
        }
        None => match width {
            3 => vec![Column::Lat, Column::Lon, Column::Waste],
            4 => vec![Column::Id, Column::Lat, Column::Lon, Column::Waste],
            _ => {
                return Err(Error::Parse {
                    path: path.into(),
                    line: records[0].0,
                    message: format!("cannot infer the layout of {width} columns; add a '# columns:' line"),
                })
            }
        },
    };
    let col = |c: Column| columns.iter().position(|&x| x == c);
    let (lat, lon) = (col(Column::Lat), col(Column::Lon));
    let waste = col(Column::Waste).ok_or_else(|| Error::Parse {
        path: path.into(),
        line: records[0].0,
        message: "no waste column".into(),
    })?;

    let mut depot = None;
    let flagged = records.iter().filter(|r| r.1).count();
    if flagged > 1 || records.iter().skip(1).any(|r| r.1) {
        return Err(Error::Parse { path: path.into(), line: 0, message: "only the first record may be the depot".into() });
    }
    let implicit_depot = flagged == 0 && expected_points.is_some_and(|n| records.len() == n + 1);
    let point_records = if flagged == 1 || implicit_depot {
        let first = &records[0].2;
        depot = lat.zip(lon).map(|(a, o)| (first[a], first[o]));
        &records[1..]
    } else {
        &records[..]
    };

    let mut out = WasteTable { coords: Vec::new(), daily_waste: Vec::new(), depot };
    for (line, _, v) in point_records {
        let w = v[waste];
        if w <= 0.0 {
            return Err(Error::Parse { path: path.into(), line: *line, message: format!("daily waste must be positive, got {w}") });
        }
        if let (Some(a), Some(o)) = (lat, lon) {
            check_coords(v[a], v[o], path, *line)?;
            out.coords.push((v[a], v[o]));
        }
        out.daily_waste.push(w);
    }
    if let Some((a, o)) = out.depot {
        check_coords(a, o, path, records[0].0)?;
    }
    Ok(out)
}

fn parse_columns<'a>(names: impl Iterator<Item = &'a str>, path: &Path, line: usize) -> Result<Vec<Column>> {
    names
        .map(|n| {
            Column::parse(n)
                .ok_or_else(|| Error::Parse { path: path.into(), line, message: format!("unknown column name {n:?}") })
        })
        .collect()
}

fn check_coords(lat: f64, lon: f64, path: &Path, line: usize) -> Result<()> {
    if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
        return Err(Error::Parse {
            path: path.into(),
            line,
            message: format!("coordinates ({lat}, {lon}) out of range; use '# columns:' to fix the column order"),
        });
    }
    Ok(())
}

/// Reads `time.txt` and `waste.txt` into an instance named `name`.
pub fn parse_instance(time_path: &Path, waste_path: &Path, name: &str) -> Result<Instance> {
    let travel = parse_time(&read_to_string(time_path)?, time_path)?;
    let n = travel.len() - 1;
    let table = parse_waste(&read_to_string(waste_path)?, waste_path, Some(n))?;
    if table.daily_waste.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} is {}x{} ({n} points) but {} lists {} points",
            time_path.display(),
            n + 1,
            n + 1,
            waste_path.display(),
            table.daily_waste.len()
        )));
    }
    let inst = Instance::new(name, travel, table.daily_waste)?;
    Ok(if table.coords.is_empty() { inst } else { inst.with_coords(table.coords, table.depot)? })
}

/// The two files of an instance directory plus its name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstancePaths {
    pub name: String,
    pub time: PathBuf,
    pub waste: PathBuf,
}

impl InstancePaths {
    /// `dir/time.txt` and `dir/waste.txt`, named after the directory.
    pub fn from_dir(dir: &Path) -> Self {
        let name = dir.file_name().map_or_else(|| "instance".to_string(), |s| s.to_string_lossy().into_owned());
        Self { name, time: dir.join("time.txt"), waste: dir.join("waste.txt") }
    }

    pub fn load(&self) -> Result<Instance> {
        parse_instance(&self.time, &self.waste, &self.name)
    }
}

/// Instance with the published weekly horizon (Sunday off), bin catalog and
/// fleet rules.
pub fn published_problem(instance: Instance) -> Result<Problem> {
    let horizon = Horizon::week();
    let fleet = FleetParams::published(&instance, &horizon)?;
    Ok(Problem::new(instance, horizon, BinCatalog::standard(), fleet)?)
}
