//! Checking the convergence hypotheses and residuals on a generated
//! sequence whose positive links arrive in sparse bursts.

use stochprod::{check_theorem, GapSchedule, GeneratorSpec, MatrixSequence, TheoremOptions};

fn main() -> stochprod::Result<()> {
    let schedule = GapSchedule::constant(0.3, 5);
    let spec = GeneratorSpec::adversarial_gap(3, 7, 0.3, schedule.clone());
    let seq = MatrixSequence::from_generator(spec, 500)?;

    let mut opts = TheoremOptions::new(500);
    opts.schedule = Some(schedule);
    let report = check_theorem(&seq, &opts)?;

    println!(
        "first cut {} windows {}",
        report.segmentation.first_cut(),
        report.delta_series.len()
    );
    println!(
        "delta_i (first 5): {:.4?}",
        &report.delta_series[..5.min(report.delta_series.len())]
    );
    println!("classes: {:?}", report.classes.classes());
    println!("hypotheses: {:?}", report.hypothesis);
    println!(
        "residuals: tau {:.2e} rows {:.2e} [J,J] {:.2e}",
        report.residuals.max_tau(),
        report.residuals.max_row_distance(),
        report.residuals.inessential_norm
    );
    println!("conclusion verified: {}", report.conclusion_verified);
    Ok(())
}
