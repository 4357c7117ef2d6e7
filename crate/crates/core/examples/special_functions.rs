//! Incomplete gamma and Tricomi U, checked against the quadrature oracle.

use relay_secrecy::special::{tricomi_u, tricomi_u_oracle, upper_incomplete_gamma, EvalPolicy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (a, x) in [(0, 1.0), (1, 2.0), (3, 0.5)] {
        println!("Gamma({a}, {x}) = {:.10}", upper_incomplete_gamma(a, x)?);
    }
    let policy = EvalPolicy::default();
    for (a, b, x) in [(1, 1, 1.0), (1, 0, 2.0), (3, -2, 0.7), (5, 4, 40.0)] {
        let u = tricomi_u(a, b, x)?;
        let o = tricomi_u_oracle(a, b, x, &policy)?;
        println!("U({a}, {b}, {x}) = {u:.12e}  oracle {o:.12e}  rel diff {:.1e}", ((u - o) / o).abs());
    }
    Ok(())
}
