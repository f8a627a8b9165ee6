//! Runs every acceptance criterion and prints one line per criterion.

use timelike::verify::{criterion, CRITERIA};

const SEED: u64 = 20240617;

fn main() {
    let filter: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = vec![];
    for id in 1..=CRITERIA {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let check = criterion(id, SEED).expect("criterion id in range");
        println!("{}", check.line());
        if !check.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
