use clap::Parser;
use nlsearch_cli::args::{to_config, Cli};

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("nlsearch: {e}");
        }
    }
    let result = to_config(&cli.command).and_then(|config| nlsearch_cli::run(&config));
    if let Err(e) = result {
        eprintln!("nlsearch: {e}");
        std::process::exit(e.exit_code());
    }
}
