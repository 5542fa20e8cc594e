//! Companion gnuplot scripts for the CSV outputs.

use std::fmt::Write as _;

#[derive(Debug, Clone)]
pub struct Series {
    column: usize,
    title: String,
    style: &'static str,
}

impl Series {
    pub fn new(column: usize, title: &str) -> Self {
        Self {
            column,
            title: title.into(),
            style: "lines",
        }
    }

    pub fn dashed(mut self) -> Self {
        self.style = "lines dashtype 2";
        self
    }

    pub fn points(mut self) -> Self {
        self.style = "points pointtype 7";
        self
    }
}

#[derive(Debug, Clone)]
pub struct Plot {
    name: String,
    file: String,
    x_column: usize,
    x_label: String,
    log_y: bool,
    series: Vec<Series>,
}

impl Plot {
    pub fn new(name: &str, file: &str, x_column: usize, x_label: &str) -> Self {
        Self {
            name: name.into(),
            file: file.into(),
            x_column,
            x_label: x_label.into(),
            log_y: false,
            series: Vec::new(),
        }
    }

    pub fn logscale_y(mut self) -> Self {
        self.log_y = true;
        self
    }

    pub fn series(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }
}

/// One PNG per plot, reading the CSVs from the script's directory.
pub fn script(plots: &[Plot]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "set datafile separator ','");
    let _ = writeln!(out, "set datafile commentschars '#'");
    let _ = writeln!(out, "set key autotitle columnhead");
    let _ = writeln!(out, "set terminal pngcairo size 900,600");
    for plot in plots {
        let _ = writeln!(out);
        let _ = writeln!(out, "set output '{}.png'", plot.name);
        let _ = writeln!(out, "set xlabel '{}'", plot.x_label);
        let _ = writeln!(out, "{}set logscale y", if plot.log_y { "" } else { "un" });
        let parts: Vec<String> = plot
            .series
            .iter()
            .map(|s| {
                format!(
                    "'{}' using {}:{} with {} title '{}'",
                    plot.file, plot.x_column, s.column, s.style, s.title
                )
            })
            .collect();
        let _ = writeln!(out, "plot {}", parts.join(", \\\n     "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn references_csv_columns() {
        let p = Plot::new("survival", "survival.csv", 1, "t")
            .series(Series::new(4, "exact"))
            .series(Series::new(7, "asymptotic").dashed());
        let s = script(&[p]);
        assert!(s.contains("set output 'survival.png'"));
        assert!(s.contains("'survival.csv' using 1:4 with lines title 'exact'"));
        assert!(s.contains("using 1:7 with lines dashtype 2"));
    }
}
