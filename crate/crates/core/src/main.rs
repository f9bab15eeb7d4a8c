use std::io::Write;
use std::process::ExitCode;

use vknot::cli;

fn main() -> ExitCode {
    let threads = std::env::var("VKNOT_THREADS").ok();
    if let Err(msg) = cli::configure_threads(threads.as_deref()) {
        eprintln!("error: {msg}");
        return ExitCode::from(cli::EXIT_USAGE as u8);
    }
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (result, format) = cli::run(&args);
    let out = cli::render(&result, format);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
