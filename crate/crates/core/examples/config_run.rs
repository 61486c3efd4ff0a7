//! Load a JSON scenario and print the final row of its table.
//!
//!     cargo run --example config_run -- crates/core/examples/configs/near_bell.json

use qme::config::ScenarioConfig;
use qme::runner::simulate;

fn main() -> qme::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/ground_decay.json").into());
    let cfg = ScenarioConfig::from_json(&std::fs::read_to_string(&path)?)?;
    let out = simulate(&cfg)?;
    if let Some(last) = out.table.rows.last() {
        for (name, value) in out.table.header.iter().zip(last) {
            println!("{name:>20} {value:.10}");
        }
    }
    if let Some(ss) = out.steady {
        println!("steady state: dimension {}, gap {:.4e}", ss.dimension, ss.gap);
    }
    Ok(())
}
