//! First sparse component of the Pit Props correlations, both thresholding
//! algorithms against the exhaustive optimum.
//!
//! cargo run --example pitprops

use spca::cli::pitprops_comparison;
use spca::oracle::DEFAULT_MAX_ENUMERATION;
use spca::AdmmConfig;

fn main() -> spca::Result<()> {
    let cmp = pitprops_comparison(&AdmmConfig::default(), DEFAULT_MAX_ENUMERATION)?;
    print!("{:<10}", "");
    for v in &cmp.variables {
        print!("{v:>8}");
    }
    println!("{:>8}{:>8}", "PVE%", "obj");
    for row in &cmp.rows {
        print!("{:<10}", row.method);
        for x in &row.abs_loadings {
            print!("{x:>8.3}");
        }
        println!("{:>8.2}{:>8.3}", 100.0 * row.pve, row.objective);
    }
    Ok(())
}
