//! Antidiagonal coherences of an X-state bath drop out of the generator once
//! there are three or more qubits.

use qme::experiments::xstate;

fn main() -> qme::Result<()> {
    for r in xstate(&[2, 3, 4, 5])? {
        println!("n = {}  {:<28} max |ΔL| = {:.3e}", r.n, r.label, r.difference);
    }
    Ok(())
}
