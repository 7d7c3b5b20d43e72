//! Runs the bundled corpus and prints one line per acceptance criterion.
//! Failing criteria are reported, not fatal; setup errors are.

use confinv_cli::config::RunConfig;
use confinv_cli::corpus::{corpus_regression, default_corpus_dir, Corpus};
use confinv_cli::criteria_table;

fn main() {
    let corpus = match Corpus::load(&default_corpus_dir()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cannot load corpus: {e}");
            std::process::exit(1);
        }
    };
    let summary = match corpus_regression(&corpus, &RunConfig::default()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("corpus run failed: {e}");
            std::process::exit(1);
        }
    };
    print!("{}", criteria_table(&summary));
    let passed = summary.criteria.iter().filter(|c| c.passed).count();
    println!("{passed}/{} criteria passed", summary.criteria.len());
}
