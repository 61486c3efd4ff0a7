//! Steady states for Bell and near-Bell baths, one line per case.

use qme::experiments::table1;

fn main() -> qme::Result<()> {
    for r in table1()?.rows {
        let spec: Vec<String> = r.spectrum.iter().map(|v| format!("{v:+.6}")).collect();
        println!(
            "{:>2} {:<36} dim {} state err {:.1e}  PT [{}]  LN {:.6}",
            r.case.row,
            r.case.label,
            r.dimension,
            r.state_error,
            spec.join(", "),
            r.log_negativity
        );
    }
    Ok(())
}
