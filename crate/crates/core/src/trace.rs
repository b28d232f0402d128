//! Trace CSV with the fixed column order of [`EnergyRow`].

use std::io::{Read, Write};

use crate::diagnostics::{EnergyRow, TRACE_COLUMNS};
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::sim::RadialState;

pub fn write_trace<W: Write>(out: W, rows: &[EnergyRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    // Written explicitly so an empty trace still carries the header.
    w.write_record(TRACE_COLUMNS)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace<R: Read>(input: R) -> Result<Vec<EnergyRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != TRACE_COLUMNS {
        return Err(Error::Config(format!("trace header mismatch: {}", header.join(","))));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Field snapshot with columns `t, r, u, v`.
pub fn write_checkpoint<W: Write>(out: W, state: &RadialState, grid: &RadialGrid) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(["t", "r", "u", "v"])?;
    for ((r, u), v) in grid.centers.iter().zip(&state.u).zip(&state.potential.v) {
        w.serialize((state.t, r, u, v))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_for_empty_trace() {
        let mut buf = Vec::new();
        write_trace(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim(), TRACE_COLUMNS.join(","));
    }

    #[test]
    fn single_header_with_rows() {
        let row: EnergyRow = serde_json::from_str(
            r#"{"t":0.5,"dt":0.1,"linf":2.0,"lp0":1.0,"phi":3.0,"grad_term":0.0,"pw1":1.0,"pw2":1.0,"pw3":1.0,"mass":1.0,"vmean":0.0,"crossdiff_q1":0.0,"clamped_mass_cum":0.0}"#,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trace(&mut buf, &[row, row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert_eq!(read_trace(text.as_bytes()).unwrap(), vec![row, row]);
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(read_trace("t,dt\n0,0\n".as_bytes()).is_err());
    }
}
