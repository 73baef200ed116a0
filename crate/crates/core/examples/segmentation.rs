//! Cutting a backward accumulation into windows with a common saturated
//! pattern.

use stochprod::{segment, segment_gantmacher, Direction, MatrixSequence, StochasticMatrix};

fn main() -> stochprod::Result<()> {
    // two slow links that alternate; each window needs both of them
    let a = StochasticMatrix::from_rows(vec![
        vec![1.0, 0.0, 0.0],
        vec![0.5, 0.5, 0.0],
        vec![0.0, 0.0, 1.0],
    ])?;
    let b = StochasticMatrix::from_rows(vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.5, 0.5],
    ])?;
    let matrices = (0..60)
        .map(|t| if t % 2 == 0 { a.clone() } else { b.clone() })
        .collect();
    let seq = MatrixSequence::from_matrices(matrices)?;

    let seg = segment(&seq, Direction::Backward, 60)?;
    println!("cuts:       {:?}", seg.cut_points);
    println!("gaps:       {:?}", seg.gaps());
    println!(
        "warm-up:    {:?}  tail: {:?}",
        seg.warmup_cuts, seg.tail_cuts
    );
    println!("stabilized: {}", seg.stabilized);
    for row in seg.segment_pattern.to_grid() {
        println!("  {row:?}");
    }
    let form = segment_gantmacher(&seg)?;
    println!(
        "classes {:?}, violations {:?}",
        form.form.partition().classes(),
        form.violations
    );
    Ok(())
}
