use std::io::Write;

use wastecol_core::ga::GenerationStats;

use crate::error::Result;

pub const HISTORY_HEADER: [&str; 4] = ["generation", "best", "mean", "feasible_fraction"];

pub fn write_history<W: Write>(out: W, history: &[GenerationStats]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HISTORY_HEADER)?;
    for g in history {
        w.write_record([
            g.generation.to_string(),
            g.best.to_string(),
            g.mean.to_string(),
            g.feasible_fraction.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_history<R: std::io::Read>(input: R) -> Result<Vec<GenerationStats>> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for rec in r.deserialize::<(usize, f64, f64, f64)>() {
        let (generation, best, mean, feasible_fraction) = rec?;
        out.push(GenerationStats { generation, best, mean, feasible_fraction });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let h = vec![
            GenerationStats { generation: 0, best: 210.5, mean: 400.25, feasible_fraction: 0.5 },
            GenerationStats { generation: 1, best: 200.0, mean: 300.0, feasible_fraction: 1.0 },
        ];
        let mut buf = Vec::new();
        write_history(&mut buf, &h).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("generation,best,mean,feasible_fraction\n0,210.5,400.25,0.5\n"));
        assert_eq!(read_history(&buf[..]).unwrap(), h);
    }
}
