//! Symmetry on average: cumulative level weights at `+m` and `-m` stay
//! comparable for every `m` exactly when the Gibbs mean of the steps
//! vanishes.

use pressurelab::fibre::symmetry_on_average_ratio;
use pressurelab::symbolic::BranchModel;

fn main() -> pressurelab::Result<()> {
    for (c1, c2) in [(0.5, 0.5), (0.4, 0.6), (0.2, 0.7)] {
        let model = BranchModel::random_walk(c1, c2)?;
        let f = model.geometric_potential();
        let psi = model.step_potential();
        let ratios: Vec<String> = [1, 4, 16]
            .iter()
            .map(|&m| symmetry_on_average_ratio(&f, &psi, 400, m).map(|r| format!("{r:.4e}")))
            .collect::<pressurelab::Result<_>>()?;
        println!("({c1}, {c2}): sup ratio over |m| <= 1, 4, 16: {}", ratios.join(" "));
    }
    Ok(())
}
