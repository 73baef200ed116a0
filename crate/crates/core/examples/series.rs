//! Partial sums of sum_n delta^gap(n) for the three gap schedules.

use stochprod::analysis::{log_threshold, partial_sums};
use stochprod::{classify_schedule, GapSchedule};

fn main() -> stochprod::Result<()> {
    let schedules = [
        GapSchedule::constant(0.5, 3),
        GapSchedule::log(1.0, 0.25),
        GapSchedule::log(1.0, 0.5),
        GapSchedule::loglog(1.0, 0.9),
    ];
    let checkpoints = [10, 100, 1_000, 10_000, 100_000, 1_000_000];
    for s in &schedules {
        println!(
            "{:?} a={} delta={}: {:?}",
            s.kind,
            s.a,
            s.delta,
            classify_schedule(s)
        );
        for (n, sum) in partial_sums(s, &checkpoints)? {
            println!("  S({n:>7}) = {sum:.6}");
        }
    }
    println!(
        "log schedule diverges iff delta >= {:.6} (a = 1)",
        log_threshold(1.0)
    );
    Ok(())
}
