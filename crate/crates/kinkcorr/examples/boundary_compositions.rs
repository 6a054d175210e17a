use kinkcorr::corrections::{
    assemble_total_with, BoundaryCondition, CompositionRule, DomainConfig, SeriesOptions,
};

fn main() -> kinkcorr::Result<()> {
    use BoundaryCondition::*;
    let cfg = DomainConfig::dimensionless(1.5, 2.0)?;
    let pairs = [
        (Dirichlet, Dirichlet),
        (Neumann, Neumann),
        (Periodic, Periodic),
        (MixedDN, MixedDN),
        (Dirichlet, Neumann),
        (Dirichlet, Periodic),
        (Neumann, Periodic),
    ];
    println!("{:<22} {:>22} {:>22}", "pair", "published", "trace product");
    for (a, b) in pairs {
        let show = |rule| {
            let opts = SeriesOptions {
                rule,
                ..SeriesOptions::default()
            };
            match assemble_total_with(a, b, &cfg, &opts) {
                Ok(r) => format!("{:+.14e}", r.dimensionless_total),
                Err(e) => format!("({})", e.to_string().split(':').next().unwrap_or("error")),
            }
        };
        println!(
            "{:<22} {:>22} {:>22}",
            format!("({a}, {b})"),
            show(CompositionRule::Published),
            show(CompositionRule::TraceProduct)
        );
    }
    Ok(())
}
