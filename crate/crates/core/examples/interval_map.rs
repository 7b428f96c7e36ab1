//! Iterating the lifted map on the real line and checking it against the
//! symbolic coding.

use pressurelab::sim::{conjugacy_check, iterate_interval_map};
use pressurelab::symbolic::{BranchModel, Word};

fn main() -> pressurelab::Result<()> {
    let model = BranchModel::random_walk(0.4, 0.6)?;
    for x in iterate_interval_map(&model, 0.3, 12)? {
        println!("cell {:>3}  frac {:.12}  x = {:.12}", x.cell, x.frac, x.value());
    }
    let word = Word::new((0..60).map(|i| (i * 7 / 3) % 2).collect());
    for shift in [0, 3, -5] {
        println!("shift {shift:>2}: conjugacy defect {:.2e}", conjugacy_check(&model, &word, shift, 12)?);
    }
    Ok(())
}
