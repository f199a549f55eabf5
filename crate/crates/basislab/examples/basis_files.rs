//! Round-tripping bases through the on-disk format and running the full
//! analysis pipeline programmatically. Rational entries are "p/q" strings,
//! canonicalized to lowest terms with positive denominators, so files
//! round-trip bit-exactly.
//!
//!     cargo run --example basis_files

use basislab::bases::{standard, twist};
use basislab::io::{load_basis, save_basis, BasisFile};
use basislab::spaces::NormSpec;

fn main() {
    let dir = std::env::temp_dir().join("basislab_example_files");
    std::fs::create_dir_all(&dir).unwrap();

    // build a twisted l1 basis and write it out
    let basis = twist(&standard::canonical_basis(NormSpec::l1(), 6)).unwrap();
    let path = dir.join("twisted_l1_6.json");
    save_basis(&basis, &path).unwrap();
    println!("wrote {}", path.display());
    println!("{}", std::fs::read_to_string(&path).unwrap());

    // read it back: the matrix is identical entry for entry
    let back = load_basis(&path).unwrap();
    assert_eq!(back.vectors(), basis.vectors());
    println!("round-trip matches bit for bit");

    // files with defective rationals are rejected with cell coordinates
    let bad = BasisFile {
        format_version: 1,
        dim: 2,
        space: NormSpec::Sup,
        vectors: vec!["1/1".into(), "0/1".into(), "1/0".into(), "1/1".into()],
    };
    match bad.into_basis() {
        Err(e) => println!("defective file rejected: {e}"),
        Ok(_) => unreachable!(),
    }
}
