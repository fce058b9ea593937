use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use clap::{Parser, ValueEnum};
use limclose_cli::render::{render_json_document, render_table};
use limclose_cli::{evaluate, parse_session_with, render, CommandResult, Config, Format, OrderChoice, COMMANDS};
use limclose_core::local::LocalOptions;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    Grevlex,
    Lex,
}

/// Evaluate a limit-closure session file.
#[derive(Parser, Debug)]
#[command(name = "limclose", version)]
struct Cli {
    /// Session file, or `-` for standard input.
    file: Option<PathBuf>,
    /// Monomial order for declared rings.
    #[arg(long, value_enum, default_value = "grevlex")]
    order: Order,
    /// Largest chain index tried when waiting for a colon chain to stabilize.
    #[arg(long, default_value_t = 12)]
    n_max: u32,
    /// Largest truncation order for explicit m^N computations.
    #[arg(long, default_value_t = 64)]
    trunc_max: u32,
    /// Consecutive equal chain terms that count as stable.
    #[arg(long, default_value_t = 2)]
    stab_window: usize,
    /// Emit a JSON document instead of text.
    #[arg(long)]
    json: bool,
    /// Seed for randomized searches (good systems of parameters, matrix perturbation).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Abort with exit code 3 after this many seconds.
    #[arg(long)]
    timeout_secs: Option<u64>,
    /// Print the wall time of each command (text mode only).
    #[arg(long)]
    timing: bool,
    /// List the available commands and exit.
    #[arg(long)]
    list_commands: bool,
}

enum Event {
    Result(Box<CommandResult>),
    Failed(String),
    Done,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_commands {
        let mut t = limclose_cli::render::Table::new(&["command", "description"]);
        for c in COMMANDS {
            t.push(vec![c.name.into(), c.summary.into()]);
        }
        emit(&render_table(&t));
        return ExitCode::SUCCESS;
    }
    let Some(file) = cli.file.clone() else {
        eprintln!("error: no session file given (use `-` for standard input)");
        return ExitCode::from(2);
    };
    let text = match read_input(&file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(1);
        }
    };
    let config = Config {
        order: match cli.order {
            Order::Grevlex => OrderChoice::Grevlex,
            Order::Lex => OrderChoice::Lex,
        },
        local: LocalOptions {
            trunc_max: cli.trunc_max,
            stab_window: cli.stab_window.max(1),
            n_max: cli.n_max,
        },
        seed: cli.seed,
    };
    let mut session = match parse_session_with(&text, &config.order.order()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("parse error at {e}");
            return ExitCode::from(2);
        }
    };

    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let sent = evaluate(&mut session, &config, |r| {
            let _ = tx.send(Event::Result(Box::new(r.clone())));
        });
        let _ = tx.send(match sent {
            Ok(()) => Event::Done,
            Err(e) => Event::Failed(format!("error at {e}")),
        });
    });

    let deadline = cli.timeout_secs.map(|s| Instant::now() + Duration::from_secs(s));
    let mut results = Vec::new();
    let code = loop {
        let event = match deadline {
            Some(d) => match rx.recv_timeout(d.saturating_duration_since(Instant::now())) {
                Ok(e) => e,
                Err(mpsc::RecvTimeoutError::Timeout) => {
                    eprintln!("error: timed out after {} s", cli.timeout_secs.unwrap_or(0));
                    break 3;
                }
                Err(mpsc::RecvTimeoutError::Disconnected) => Event::Failed("error: evaluation aborted".into()),
            },
            None => rx.recv().unwrap_or(Event::Failed("error: evaluation aborted".into())),
        };
        match event {
            Event::Result(mut r) => {
                if !cli.json {
                    if !cli.timing {
                        r.elapsed = None;
                    }
                    let line = r.line.unwrap_or(0);
                    emit(&format!(">> {} [line {line}]\n", r.command.as_deref().unwrap_or("")));
                    emit(&render(&r, Format::Text));
                }
                results.push(*r);
            }
            Event::Failed(msg) => {
                eprintln!("{msg}");
                break 1;
            }
            Event::Done => break 0,
        }
    };
    if cli.json {
        emit(&format!("{}\n", render_json_document(&results)));
    }
    if code == 3 {
        // The worker may be deep inside a computation; do not wait for it.
        std::process::exit(3);
    }
    ExitCode::from(code)
}

fn read_input(file: &PathBuf) -> std::io::Result<String> {
    if file.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(file)
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}
