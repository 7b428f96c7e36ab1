//! Classical pressure of `sφ` for a random-walk model and the Bowen root.

use pressurelab::pressure::{bowen_delta, classical_pressure, gibbs_measure, SubAlphabet};
use pressurelab::symbolic::BranchModel;

fn main() -> pressurelab::Result<()> {
    let model = BranchModel::random_walk(0.3, 0.7)?;
    let phi = model.geometric_potential();
    let full = SubAlphabet::full(model.alphabet_size());
    for s in [0.0, 0.5, 1.0, 1.5] {
        let p = classical_pressure(&phi.scaled(s), &full)?;
        println!("P({s}·φ) = {:+.12} via {:?}", p.value, p.method);
    }
    let delta = bowen_delta(&model)?;
    let mu = gibbs_measure(&phi.scaled(delta), &full)?;
    println!("δ = {delta:.12}, entropy of μ_δφ = {:.12}", mu.entropy());
    Ok(())
}
