use kinkcorr::corrections::{de_a, de_b_single_with, de_c_with, de_d_with, SeriesOptions};

fn main() -> kinkcorr::Result<()> {
    let opts = SeriesOptions::default();
    println!(
        "{:>6} {:>6} {:>20} {:>20} {:>20} {:>20}",
        "l1", "l2", "a", "b", "c", "d"
    );
    for (l1, l2) in [(0.5, 0.5), (1.0, 1.0), (2.0, 3.0), (5.0, 5.0)] {
        let b = de_b_single_with(l1, &opts)?.value + de_b_single_with(l2, &opts)?.value;
        let c = de_c_with(l1, l2, &opts)?.value;
        let d = de_d_with(l1, l2, &opts)?.value;
        println!(
            "{l1:>6} {l2:>6} {:>20.12e} {b:>20.12e} {c:>20.12e} {d:>20.12e}",
            de_a(l1, l2)
        );
    }
    Ok(())
}
