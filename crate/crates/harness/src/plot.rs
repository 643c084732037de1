//! Gnuplot script emitted next to each CSV. The script reads only that CSV
//! and writes one PNG per metric when run.

use std::fmt::Write;
use std::path::Path;

/// Script plotting every metric against the trial index, or against `d`
/// when `by_dimension` is set.
pub fn gnuplot_script(csv: &Path, metrics: &[&str], by_dimension: bool) -> String {
    let name = csv.file_name().map_or_else(|| "results.csv".into(), |n| n.to_string_lossy().into_owned());
    let stem = csv.file_stem().map_or_else(|| "results".into(), |n| n.to_string_lossy().into_owned());
    let (xcol, xlabel) = if by_dimension { (2, "d") } else { (5, "trial") };
    let mut s = String::new();
    writeln!(s, "# Plots for {name}; run with: gnuplot {stem}.gp").unwrap();
    writeln!(s, "set datafile separator ','").unwrap();
    writeln!(s, "set terminal pngcairo size 900,600").unwrap();
    writeln!(s, "set key off").unwrap();
    writeln!(s, "set grid").unwrap();
    writeln!(s, "set xlabel '{xlabel}'").unwrap();
    for m in metrics {
        writeln!(s).unwrap();
        writeln!(s, "set output '{stem}_{m}.png'").unwrap();
        writeln!(s, "set title '{m}' noenhanced").unwrap();
        writeln!(s, "set ylabel '{m}' noenhanced").unwrap();
        writeln!(
            s,
            "plot '{name}' skip 1 using {xcol}:(strcol(7) eq '{m}' ? $8 : NaN) with points pt 7 ps 0.6"
        )
        .unwrap();
    }
    s
}
