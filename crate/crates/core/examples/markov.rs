//! Inhomogeneous Markov chain: distributions under forward products, and
//! weak ergodicity of a closed class.

use stochprod::{
    run_markov, weak_ergodicity_estimate, GeneratorSpec, MatrixSequence, RunOptions, ZeroPattern,
};

fn main() -> stochprod::Result<()> {
    // two closed classes {0,1} and {2,3}; entries redrawn every step
    let support = ZeroPattern::from_fn(4, |i, j| (i < 2) == (j < 2));
    let spec = GeneratorSpec::random_positive_diagonal(4, 11, 0.05, 1.0).with_support(support);
    let seq = MatrixSequence::from_generator(spec, 300)?;

    let run = run_markov(
        &seq,
        &[0.25, 0.25, 0.5, 0.0],
        &RunOptions::with_horizon(300),
    )?;
    let last = run.trace.last().expect("non-empty trace");
    println!("p({}) = {:.6?}", last.t, last.p);
    println!(
        "mass per class: {:.6} {:.6}",
        last.p[0] + last.p[1],
        last.p[2] + last.p[3]
    );

    let taus = weak_ergodicity_estimate(&seq, &[0, 1], 300)?;
    for (i, tau) in taus.iter().enumerate().take(8) {
        println!("window {i}: tau = {tau:.3e}");
    }
    Ok(())
}
