use std::io::{self, BufWriter};
use std::process::ExitCode;

use sumsq_core::cli::{self, BUFFER_ENV, DEFAULT_BUFFER, THREADS_ENV};

fn env_number(name: &str) -> Option<usize> {
    let raw = std::env::var(name).ok()?;
    match raw.trim().parse() {
        Ok(v) => Some(v),
        Err(_) => {
            eprintln!("warning: ignoring {name}={raw:?}, expected a positive integer");
            None
        }
    }
}

fn main() -> ExitCode {
    if let Some(threads) = env_number(THREADS_ENV).filter(|&t| t > 0) {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("warning: could not size thread pool: {e}");
        }
    }
    let capacity = env_number(BUFFER_ENV).unwrap_or(DEFAULT_BUFFER).max(1);
    let stdout = io::stdout();
    let mut out = BufWriter::with_capacity(capacity, stdout.lock());
    let code = cli::run(std::env::args_os(), &mut out, &mut io::stderr());
    ExitCode::from(code as u8)
}
