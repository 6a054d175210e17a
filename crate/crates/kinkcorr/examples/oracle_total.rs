use kinkcorr::corrections::{assemble_total, BoundaryCondition, DomainConfig};
use kinkcorr::zeta_oracle::{oracle_total, ShellCutoff};

fn main() -> kinkcorr::Result<()> {
    let dd = (BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet);
    for (l1, l2) in [(1.0, 1.0), (2.0, 3.0)] {
        let cfg = DomainConfig::dimensionless(l1, l2)?;
        let t = std::time::Instant::now();
        let closed = assemble_total(dd.0, dd.1, &cfg)?;
        let t_closed = t.elapsed();
        let t = std::time::Instant::now();
        let oracle = oracle_total(dd.0, dd.1, &cfg, ShellCutoff::Auto)?;
        println!(
            "({l1}, {l2}): closed {:+.14e} ({:.1?}), oracle {:+.14e} ({:.1?}, {} shells), difference {:.2e}",
            closed.dimensionless_total,
            t_closed,
            oracle.value,
            t.elapsed(),
            oracle.shells,
            (closed.dimensionless_total - oracle.value).abs()
        );
    }
    Ok(())
}
