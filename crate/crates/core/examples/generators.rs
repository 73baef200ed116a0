//! Seeded, replayable sequence generators and their JSON specs.

use stochprod::{generate, GapSchedule, GeneratorSpec, ZeroPattern};

fn main() -> stochprod::Result<()> {
    let specs = [
        GeneratorSpec::random_positive_diagonal(4, 1, 0.05, 0.4),
        GeneratorSpec::type_symmetric(4, 2, 0.05, 0.4),
        GeneratorSpec::pattern_scheduled(
            vec![ZeroPattern::identity(3), ZeroPattern::full(3)],
            3,
            0.1,
        ),
        GeneratorSpec::adversarial_gap(3, 4, 0.2, GapSchedule::log(1.0, 0.5)),
    ];
    for spec in &specs {
        println!("{}", serde_json::to_string(spec)?);
        let a = generate(spec, 5)?;
        // same spec and index always give the same matrix
        assert_eq!(a, generate(spec, 5)?);
        println!("A(5) min+ = {:.4}", a.min_plus());
        for row in a.rows() {
            println!("  {row:.3?}");
        }
    }
    Ok(())
}
