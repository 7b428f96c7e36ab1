//! Cover sums `Σ |I_ω|^s` over corridor words and the recurrence series
//! growth diagnostic.

use pressurelab::fibre::recurrence_series;
use pressurelab::sim::log_cover_sum;
use pressurelab::spectrum::delta_alpha_root;
use pressurelab::symbolic::{BranchModel, CylinderPotential};

fn main() -> pressurelab::Result<()> {
    let model = BranchModel::random_walk(0.3, 0.7)?;
    let delta0 = delta_alpha_root(&model, 0.0)?;
    for s in [delta0 - 0.05, delta0, delta0 + 0.05] {
        let sums: Vec<String> = [50, 200, 800]
            .iter()
            .map(|&n| log_cover_sum(&model, 0.0, 2.0, n, s).map(|v| format!("{v:+.4}")))
            .collect::<pressurelab::Result<_>>()?;
        println!("s = {s:.6}: log cover sums at n = 50, 200, 800: {}", sums.join(" "));
    }

    // normalised by its own fibre pressure, the series diverges like √N in
    // the interior regime and collapses in the empty one
    for (label, steps) in [("interior", [-1.0, 1.0]), ("empty", [1.0, 2.0])] {
        let psi = CylinderPotential::symbolwise(&steps);
        let series = recurrence_series(&model.geometric_potential(), &psi, 2.0, 4000)?;
        let last = series.partial_sums.last().copied().unwrap_or(0.0);
        println!("{label}: growth {:?}, S(4000) = {last:.4}", series.growth);
    }
    Ok(())
}
