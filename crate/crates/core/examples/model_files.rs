//! Loading models from JSON, including a deeper potential, and resolving
//! builtin family names.

use pressurelab::model_file::{resolve_model, ModelFile};
use pressurelab::pressure::{classical_pressure, SubAlphabet};

fn main() -> pressurelab::Result<()> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("models");
    for name in ["rw_0.4_0.6.json", "cantor_gapped.json"] {
        let file = ModelFile::load(&dir.join(name))?;
        let model = file.build()?;
        let full = SubAlphabet::full(model.branches().alphabet_size());
        let p = classical_pressure(&model.phi(), &full)?;
        println!("{name}: depth {}, P(φ) = {:.10} via {:?}", model.depth(), p.value, p.method);
    }
    for spec in ["rw_0.3_0.7", "asym_0.25_-1_3", "multi_1/4_2_1"] {
        let model = resolve_model(spec)?;
        println!("{spec}: steps {:?}", model.branches().steps());
        println!("{}", ModelFile::from(model.branches()).to_json());
    }
    Ok(())
}
