//! Communicating classes and the block lower triangular form of a matrix.

use stochprod::{communication_classes, gantmacher_form, StochasticMatrix, ZeroPattern};

fn main() -> stochprod::Result<()> {
    let a = StochasticMatrix::from_rows(vec![
        vec![0.5, 0.0, 0.5, 0.0, 0.0],
        vec![0.2, 0.6, 0.0, 0.2, 0.0],
        vec![0.4, 0.0, 0.6, 0.0, 0.0],
        vec![0.0, 0.3, 0.0, 0.7, 0.0],
        vec![0.0, 0.0, 0.0, 0.0, 1.0],
    ])?;
    let part = communication_classes(&ZeroPattern::of(&a))?;
    println!("essential:   {:?}", part.essential_classes());
    println!("inessential: {:?}", part.inessential_classes());

    let form = gantmacher_form(&a)?;
    println!("permutation: {:?}", form.permutation());
    for row in form.permuted_matrix(&a)?.rows() {
        println!("  {row:.2?}");
    }
    println!("violations: {:?}", form.violations());
    Ok(())
}
