//! CSV writers. Reals are printed with 9 significant digits in the style of
//! C's `%.9g`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::run::{HeatmapRow, SweepRow};
use crate::channel::{ChannelResponse, FrequencyGrid};
use crate::error::{Result, SimError};

pub const SWEEP_HEADER: &str = "density,rep,avg_cell_throughput_bps,aggregate_throughput_bps,gos,avg_acg_db";
pub const HEATMAP_HEADER: &str = "cell_id,x_m,y_m,sector,acg_db,capacity_bps,demand_bps,effective_bps";
pub const CHANNEL_HEADER: &str = "f_hz,re_h,im_h";

/// `%.9g`: fixed notation for decimal exponents in [-5, 9), scientific
/// otherwise, trailing zeros dropped.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let fixed = format!("{x:.*}", (8 - exp) as usize);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn heatmap_file_name(density: f64, rep: usize) -> String {
    format!("heatmap_{}_{rep}.csv", format_sig9(density))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| SimError::io(path, e))
}

fn write_lines(path: &Path, header: &str, lines: impl Iterator<Item = String>) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| SimError::io(path, e);
    writeln!(w, "{header}").map_err(io)?;
    for line in lines {
        writeln!(w, "{line}").map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    write_lines(
        path,
        SWEEP_HEADER,
        rows.iter().map(|r| {
            format!(
                "{},{},{},{},{},{}",
                format_sig9(r.density),
                r.rep,
                format_sig9(r.avg_cell_throughput_bps),
                format_sig9(r.aggregate_throughput_bps),
                format_sig9(r.gos),
                format_sig9(r.avg_acg_db)
            )
        }),
    )
}

pub fn write_heatmap_csv(path: &Path, rows: &[HeatmapRow]) -> Result<()> {
    write_lines(
        path,
        HEATMAP_HEADER,
        rows.iter().map(|r| {
            format!(
                "{},{},{},{},{},{},{},{}",
                r.cell_id,
                format_sig9(r.x_m),
                format_sig9(r.y_m),
                r.sector,
                format_sig9(r.acg_db),
                format_sig9(r.capacity_bps),
                format_sig9(r.demand_bps),
                format_sig9(r.effective_bps)
            )
        }),
    )
}

pub fn write_channel_csv(path: &Path, fgrid: &FrequencyGrid, response: &ChannelResponse) -> Result<()> {
    write_lines(
        path,
        CHANNEL_HEADER,
        fgrid
            .frequencies()
            .zip(&response.h)
            .map(|(f, h)| format!("{},{},{}", format_sig9(f), format_sig9(h.re), format_sig9(h.im))),
    )
}

/// A heatmap belonging to one (density, replication) pair.
#[derive(Debug, Clone)]
pub struct Heatmap {
    pub density: f64,
    pub rep: usize,
    pub rows: Vec<HeatmapRow>,
}

/// Writes `sweep.csv` and one `heatmap_<density>_<rep>.csv` per heatmap into
/// `out_dir`, creating it if needed. Returns the written paths.
pub fn write_outputs(rows: &[SweepRow], heatmaps: &[Heatmap], out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| SimError::io(out_dir, e))?;
    let sweep = out_dir.join("sweep.csv");
    write_sweep_csv(&sweep, rows)?;
    let mut written = vec![sweep];
    for h in heatmaps {
        let path = out_dir.join(heatmap_file_name(h.density, h.rep));
        write_heatmap_csv(&path, &h.rows)?;
        written.push(path);
    }
    Ok(written)
}
