use std::io::Write;
use std::process::ExitCode;

use fracpoly_cli::{config_from_args, run, ArgsError, EXIT_INVALID, SCHEMA};

fn main() -> ExitCode {
    let config = match config_from_args(std::env::args_os()) {
        Ok(c) => c,
        Err(ArgsError::Info(text)) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        Err(ArgsError::Invalid(msg)) => {
            eprintln!("{}", msg.trim());
            let doc = serde_json::json!({
                "schema": SCHEMA,
                "error": {"code": "validation", "message": msg.trim()},
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serialisable"));
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    let out = run(&config);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.exit_code as u8)
}
