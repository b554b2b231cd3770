use std::process::ExitCode;

use clap::Parser;
use dl_cli::{run, Cli, Failure};

fn threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("DL_THREADS") {
        let n: usize = v.parse().map_err(|_| anyhow::anyhow!("DL_THREADS must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(out) => {
            println!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            let (Failure::Usage(m) | Failure::Domain(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
