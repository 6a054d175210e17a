use kinkcorr::heat_traces::{
    dirichlet_product_terms, trace_accelerated, trace_direct, BoundaryCondition, EuclideanTime,
    TransverseSpectrumSpec,
};

fn main() -> kinkcorr::Result<()> {
    let lambda = 1.0;
    println!(
        "{:<10} {:>8} {:>24} {:>24}",
        "bc", "u", "direct sum", "accelerated"
    );
    for bc in BoundaryCondition::ALL {
        let spec = TransverseSpectrumSpec::new(bc, lambda)?;
        for u in [0.01, 1.0, 100.0] {
            let t = EuclideanTime::new(u)?;
            println!(
                "{:<10} {:>8} {:>24.16e} {:>24.16e}",
                bc.name(),
                u,
                trace_direct(spec, t, 10_000)?,
                trace_accelerated(spec, t)
            );
        }
    }

    let terms = dirichlet_product_terms(2.0, 3.0, EuclideanTime::new(0.5)?)?;
    println!("\nDirichlet x Dirichlet product at u = 0.5, lambda = (2, 3):");
    println!("  gamma_a = {:.16e}", terms.a);
    println!("  gamma_b = {:.16e}", terms.b);
    println!("  gamma_c = {:.16e}", terms.c);
    println!("  gamma_d = {:.16e}", terms.d);
    println!("  sum     = {:.16e}", terms.sum());
    Ok(())
}
