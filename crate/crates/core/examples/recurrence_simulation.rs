//! Monte Carlo recurrence fractions of sampled orbits next to the exact
//! killed-walk probabilities.

use pressurelab::pressure::GibbsMeasure;
use pressurelab::sim::{
    exact_recurrence, recurrence_statistics, return_fraction, sample_orbits, summarize, RecurrenceConfig,
    SampleMode,
};
use pressurelab::symbolic::CylinderPotential;

fn main() -> pressurelab::Result<()> {
    let psi = CylinderPotential::symbolwise(&[-1.0, 1.0]);
    let (n, count, seed, k) = (2000, 2000, 7, 3.0);
    for p in [0.5, 0.4] {
        let mu = GibbsMeasure::bernoulli(&[p, 1.0 - p])?;
        let batch = sample_orbits(&mu, &psi, n, count, seed, SampleMode::Summary)?;
        let stats = recurrence_statistics(&batch, 0.0, k);
        let exact = exact_recurrence(&mu, &psi, 0.0, k, n, RecurrenceConfig::default())?;
        let (ret, ret_se) = return_fraction(&batch, 0.0, 1.0, n);
        println!("{}", serde_json::to_string(&summarize(&batch, 0.0, k)).expect("plain record"));
        println!(
            "  recurrent {:.4} ± {:.4} (exact {:.4}), uniform {:.4} (exact {:.4}), returned {:.4} ± {:.4}",
            stats.recurrent_fraction, stats.recurrent_se, exact.recurrent, stats.uniform_fraction, exact.uniform, ret, ret_se
        );
    }
    Ok(())
}
