use kinkcorr::cli::{parse_config, run_sweep};

fn main() -> kinkcorr::Result<()> {
    let spec = parse_config(
        "# small-size approach to the constant term\n\
         axis = both\n\
         range = 0.01, 1, 5\n\
         spacing = log\n\
         bc = dirichlet, dirichlet\n",
    )?;
    let table = run_sweep(&spec)?;
    print!("{}", table.to_csv()?);
    let s = table.summary();
    eprintln!("{} rows, {} with errors", s.rows, s.errors);
    Ok(())
}
