use clap::Parser;
use ici_core::cli::{experiment::error_record, run, Args};

fn main() {
    let args = Args::parse();
    match run(&args) {
        Ok(report) => {
            for row in &report.summary {
                println!("{:<40} {:<10} {:.6}", row.param, row.scheme, row.value);
            }
            println!("wrote {} files to {}", report.files.len() + 2, args.out.display());
        }
        Err(e) => {
            eprintln!("{}", error_record(&e));
            std::process::exit(1);
        }
    }
}
