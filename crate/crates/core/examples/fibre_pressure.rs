//! Fibre pressure in each regime, and its finite-horizon estimate from
//! corridor sums.

use pressurelab::fibre::{fibre_pressure, fibre_pressure_estimate, minimizer_t};
use pressurelab::symbolic::{BranchModel, CylinderPotential};

fn main() -> pressurelab::Result<()> {
    let model = BranchModel::random_walk(0.4, 0.6)?;
    let f = model.geometric_potential();
    let psi = model.step_potential();

    let r = fibre_pressure(&f, &psi)?;
    let t = minimizer_t(&f, &psi)?;
    println!("interior: 𝒫 = {:.12}, t = {:.6}, variance = {:.6}", r.value, t.t, t.variance);
    println!("closed form: {:.12}", 2f64.ln() + (0.4f64 * 0.6).ln() / 2.0);

    for (j, est) in fibre_pressure_estimate(&f, &psi, 2.0, 4000)?.into_iter().filter(|(j, _)| [10, 100, 1000, 4000].contains(j)) {
        println!("  n = {j:>5}: (1/n) log ζ_n = {est:.8}");
    }

    for steps in [[0.0, 1.0], [-1.0, 0.0], [1.0, 2.0]] {
        let psi = CylinderPotential::symbolwise(&steps);
        let r = fibre_pressure(&f, &psi)?;
        println!("steps {steps:?}: {:?}, 𝒫 = {}", r.regime, r.value);
    }
    Ok(())
}
