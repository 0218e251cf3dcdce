mod args;
mod commands;
mod parse;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::{Outcome, PlotRow};

fn write_reports(outcome: &Outcome, sink: &mut dyn Write) -> io::Result<()> {
    for r in &outcome.reports {
        writeln!(sink, "{}", r.to_json_line())?;
    }
    sink.flush()
}

fn write_plot(rows: &[PlotRow], path: &Path) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "parameter,lhs,rhs")?;
    for (p, l, r) in rows {
        writeln!(w, "{p:e},{l:e},{r:e}")?;
    }
    w.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli.command);
    let written = match &cli.out {
        Some(path) => File::create(path).and_then(|f| write_reports(&outcome, &mut BufWriter::new(f))),
        None => write_reports(&outcome, &mut io::stdout().lock()),
    };
    let plotted = cli.plot_data.as_deref().map_or(Ok(()), |p| write_plot(&outcome.plot, p));
    if let Err(e) = written.and(plotted) {
        eprintln!("sdl: {e}");
        return ExitCode::from(1);
    }
    if outcome.reports.iter().all(|r| r.passed()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
