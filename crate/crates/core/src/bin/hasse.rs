use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use hasse_core::report::{parse_config, render_json, render_text, run, Command, Format};

#[derive(Clone, Copy, ValueEnum)]
enum Cmd {
    Hasse,
    Orbits,
    Positivity,
    Picard,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

/// Hasse numbers, orbit census and positivity data for a zip datum.
#[derive(Parser)]
#[command(name = "hasse", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// Config file, or `-` for stdin.
    #[arg(long)]
    input: String,
    /// Output format; falls back to the config's `options.format`, then json.
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    /// Largest Weyl group to enumerate.
    #[arg(long)]
    weyl_cap: Option<u64>,
}

fn read_input(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match read_input(&cli.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.input);
            return ExitCode::from(2);
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let command = match cli.command {
        Cmd::Hasse => Command::Hasse,
        Cmd::Orbits => Command::Orbits,
        Cmd::Positivity => Command::Positivity,
        Cmd::Picard => Command::Picard,
        Cmd::All => Command::All,
    };
    let outcome = match run(command, &cfg, cli.weyl_cap) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let from_config = cfg.options.as_ref().and_then(|o| o.format);
    let text_output = match (cli.format, from_config) {
        (Some(f), _) => matches!(f, OutFormat::Text),
        (None, Some(f)) => f == Format::Text,
        (None, None) => false,
    };
    let rendered = if text_output { render_text(&outcome.report) } else { render_json(&outcome.report) };
    print!("{rendered}");
    if let Some(ws) = outcome.report["warnings"].as_array() {
        for w in ws {
            eprintln!("warning: {}", w.as_str().unwrap_or_default());
        }
    }
    ExitCode::from(outcome.exit_code() as u8)
}
