//! Session language and front end for `limclose-core`.
//!
//! A session file declares rings, sequences, ideals and ring maps, then asks
//! for results with `show` statements:
//!
//! ```
//! use limclose_cli::{run_session, Config};
//!
//! let text = "ring R = QQ[x,y] / (0); seq s = [x, y]; show limclose(R, s);";
//! let session = run_session(text, &Config::default()).unwrap();
//! assert_eq!(session.log[0].generators, vec!["y", "x"]);
//! ```

pub mod commands;
pub mod render;
pub mod session;

use std::fmt;

pub use commands::{Config, EvalError, Evaluator, OrderChoice, COMMANDS};
pub use render::{render, render_json_document, CommandResult, Format};
pub use session::{parse_session, parse_session_with, ParseError, Session};

#[derive(Debug)]
pub enum Error {
    Parse(ParseError),
    Eval(EvalError),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(e) => write!(f, "parse error at {e}"),
            Error::Eval(e) => write!(f, "error at {e}"),
        }
    }
}

impl std::error::Error for Error {}

/// Runs every command in order, appending results to the session log and
/// reporting each one to `on_result`. Stops at the first failing command.
pub fn evaluate(session: &mut Session, config: &Config, mut on_result: impl FnMut(&CommandResult)) -> Result<(), EvalError> {
    let mut ev = Evaluator::new(*config);
    let commands: Vec<_> = session.commands().cloned().collect();
    for cmd in &commands {
        let r = ev.run_command(session, cmd)?;
        on_result(&r);
        session.log.push(r);
    }
    Ok(())
}

/// Parses and evaluates a whole session.
pub fn run_session(text: &str, config: &Config) -> Result<Session, Error> {
    let mut session = parse_session_with(text, &config.order.order()).map_err(Error::Parse)?;
    evaluate(&mut session, config, |_| {}).map_err(Error::Eval)?;
    Ok(session)
}
