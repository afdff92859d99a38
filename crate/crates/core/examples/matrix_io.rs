//! MatrixMarket and CSV round trips with a JSON metadata sidecar.
//!
//! cargo run --example matrix_io

use spca::data::io::{load_metadata, save_dense_csv, save_with_metadata, sidecar_path};
use spca::data::{load_matrix, pit_props, MatrixFormat, MatrixKind, MatrixMetadata};

fn main() -> spca::Result<()> {
    let dir = std::env::temp_dir().join("spca-matrix-io");
    std::fs::create_dir_all(&dir)?;
    let a = pit_props().scaled(1.0 / 3.0);

    let mtx = dir.join("pitprops.mtx");
    let meta = MatrixMetadata {
        name: "pitprops".into(),
        n: a.n(),
        source: "builtin".into(),
        preprocessing: vec!["scaled by 1/3".into()],
    };
    save_with_metadata(&mtx, &a, &meta)?;
    let back = load_matrix(&mtx, MatrixFormat::from_path(&mtx), MatrixKind::Symmetric)?.into_symmetric()?;
    println!("{} -> bit-exact: {}", mtx.display(), back == a);
    println!("{} -> {:?}", sidecar_path(&mtx).display(), load_metadata(&mtx)?);

    let csv = dir.join("pitprops.csv");
    save_dense_csv(&csv, a.as_matrix())?;
    let back = load_matrix(&csv, MatrixFormat::DenseCsv, MatrixKind::Symmetric)?.into_symmetric()?;
    println!("{} -> bit-exact: {}", csv.display(), back == a);
    Ok(())
}
