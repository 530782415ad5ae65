//! Runs the acceptance suite and prints one line per criterion.
//!
//! Numeric arguments restrict the run to those criteria, e.g.
//! `cargo test --test acceptance -- 3 11`.

use mu_corona::acceptance::{criterion, run_criterion, CRITERIA};

fn main() {
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let selected: Vec<_> = if wanted.is_empty() {
        CRITERIA.iter().collect()
    } else {
        wanted.iter().filter_map(|&id| criterion(id)).collect()
    };
    let mut failed = 0;
    for c in selected {
        let r = run_criterion(c);
        println!("{r}");
        if !r.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
