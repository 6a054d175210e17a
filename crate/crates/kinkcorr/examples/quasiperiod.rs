use kinkcorr::cli::de_b_maxima;
use std::f64::consts::PI;

fn main() -> kinkcorr::Result<()> {
    let maxima = de_b_maxima()?;
    println!("local maxima of de_b_single on [2, 30]:");
    for w in maxima.windows(2) {
        println!(
            "  {:8.4} -> {:8.4}   spacing / pi = {:.4}",
            w[0],
            w[1],
            (w[1] - w[0]) / PI
        );
    }
    Ok(())
}
