//! The level-set spectrum `α ↦ δ_α` by three methods, against the closed form.

use pressurelab::spectrum::{
    closed_form_oracle, default_grid, drift, fit_orientation, spectrum_sweep, Family,
};
use pressurelab::pressure::bowen_delta;
use pressurelab::symbolic::BranchModel;

fn main() -> pressurelab::Result<()> {
    let (c1, c2) = (0.3, 0.7);
    let model = BranchModel::random_walk(c1, c2)?;
    let family = Family::A { c1, c2 };
    let orientation = fit_orientation(&family, drift(&model)?, bowen_delta(&model)?)?;
    println!("closed form orientation: {orientation:?}");

    let curve = spectrum_sweep(&model, &default_grid(&model, 11))?;
    println!("{:>8} {:>14} {:>14} {:>10}", "alpha", "delta", "closed form", "spread");
    for p in &curve.points {
        let oracle = closed_form_oracle(&family, p.alpha, orientation)?;
        println!("{:>8.3} {:>14.10} {:>14.10} {:>10.1e}", p.alpha, p.delta, oracle, p.discrepancy.unwrap_or(0.0));
    }
    println!("unimodal: {}, peak near {:?}", curve.is_unimodal(1e-10), curve.local_maxima(1e-10));
    Ok(())
}
