//! Exhaustive search over supports, with the enumeration budget.
//!
//! cargo run --example exact_oracle

use spca::data::pit_props;
use spca::oracle::binomial;
use spca::{exact_spca, SpcaError};

fn main() -> spca::Result<()> {
    let a = pit_props();
    for k in 1..=13 {
        let out = exact_spca(&a, k, 1 << 20)?;
        println!("k={k:>2}  Z*={:.4}  supports={:>5}  best={:?}", out.optimal_value, out.instances_enumerated, out.support);
    }
    match exact_spca(&a, 6, 100) {
        Err(SpcaError::EnumerationBudgetExceeded { required, budget }) => {
            println!("k=6 with budget {budget}: refused, needs {required} = C(13, 6) = {}", binomial(13, 6));
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
