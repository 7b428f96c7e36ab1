//! Drift against dimension gap across a one-parameter sweep of contractions.

use pressurelab::spectrum::drift_and_gap;
use pressurelab::symbolic::BranchModel;

fn main() -> pressurelab::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "c1", "drift", "delta", "delta0", "gap");
    for i in 1..10 {
        let c1 = 0.1 * i as f64;
        let r = drift_and_gap(&BranchModel::random_walk(c1, 1.0 - c1)?)?;
        println!("{c1:>6.2} {:>10.6} {:>10.6} {:>10.6} {:>10.2e}", r.drift, r.delta, r.delta0, r.gap);
    }
    Ok(())
}
