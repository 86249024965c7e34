//! Regenerates the frozen catalog files under `schemes/` from their derivations.
//!
//! Usage: `cargo run -p projcoh --example derive_catalog [output-dir]`

use std::path::PathBuf;

use projcoh::scheme::{catalog::derive_builtin, scheme_to_json, CATALOG};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemes"));
    std::fs::create_dir_all(&dir)?;
    for name in CATALOG {
        let scheme = derive_builtin(name)?;
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, scheme_to_json(&scheme))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
