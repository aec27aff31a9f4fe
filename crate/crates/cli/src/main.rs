use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args.iter().any(|a| a == "--help" || a == "help") {
        print!("{}", projcoh::USAGE);
        return if args.is_empty() {
            ExitCode::from(1)
        } else {
            ExitCode::SUCCESS
        };
    }
    match projcoh::run(&args) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            if let Some(v) = outcome.violation {
                let _ = writeln!(std::io::stderr(), "property violation: {v}");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(usage) => {
            let _ = writeln!(std::io::stderr(), "error: {usage}");
            let _ = writeln!(std::io::stderr(), "run `projcoh --help` for usage");
            ExitCode::from(1)
        }
    }
}
