use kinkcorr::cli::{check_bulk_coefficient, verify, VerifyLevel};
use kinkcorr::corrections::bulk_term;

fn main() {
    let report = verify(VerifyLevel::Fast);
    println!("{report}");

    // a 1 % error in the bulk coefficient is caught
    let mutated = check_bulk_coefficient(|a, b| 1.01 * bulk_term(a, b));
    println!("\nmutated bulk coefficient: {mutated}");
}
