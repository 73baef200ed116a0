//! DeGroot opinion dynamics on a fixed influence matrix.
//!
//! Agent 0 is stubborn, so every other opinion is pulled to its value.

use stochprod::{run_consensus, MatrixSequence, RunOptions, StochasticMatrix};

fn main() -> stochprod::Result<()> {
    let w = StochasticMatrix::from_rows(vec![
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.3, 0.5, 0.2, 0.0],
        vec![0.0, 0.2, 0.6, 0.2],
        vec![0.1, 0.0, 0.4, 0.5],
    ])?;
    let seq = MatrixSequence::constant(w, 500)?;
    let run = run_consensus(&seq, &[0.9, 0.1, -0.4, 0.3], &RunOptions::with_horizon(500))?;

    for state in run.trace.iter().step_by(10).take(6) {
        println!("t={:3} x={:.4?}", state.t, state.x);
    }
    let last = run.final_state();
    println!("stopped at t={} x={:.6?}", last.t, last.x);
    println!(
        "clusters {:?} values {:.6?}",
        run.report.clusters, run.report.values
    );
    Ok(())
}
