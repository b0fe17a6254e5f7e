use std::process::ExitCode;

use clap::Parser;

use qpinn::{run_experiment, Cli};

fn main() -> ExitCode {
    let config = match Cli::parse().resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            eprintln!("run with --help for usage");
            return ExitCode::from(2);
        }
    };
    match run_experiment(&config) {
        Ok(s) => {
            println!("final loss      {:.6e}", s.final_loss());
            println!("max abs error   {:.6e}", s.errors.max_abs_error);
            println!("mean abs error  {:.6e}", s.errors.mean_abs_error);
            println!("l2 error        {:.6e}", s.errors.l2_error);
            println!("training time   {:.2} s", s.wall_time.as_secs_f64());
            println!("artifacts in    {}", s.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
