//! One line per acceptance criterion; exits nonzero if any fails.

use pressurelab::verify::{run, summarize, Depth};

fn main() {
    let results = run(Depth::Full);
    for criterion in &results {
        println!("{criterion}");
    }
    match summarize(&results) {
        Ok(()) => println!("acceptance: {} of {} criteria passed", results.len(), results.len()),
        Err(failed) => {
            println!("acceptance: failed criteria {failed:?}");
            std::process::exit(1);
        }
    }
}
