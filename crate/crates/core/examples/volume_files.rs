//! Writing and reading `.hdr`/`.dat` volumes and masks.

use dynlr::io::{file_pair, read_cplx, read_mask, write_cplx, write_mask};
use dynlr::prelude::*;

fn main() -> dynlr::Result<()> {
    let dir = std::env::temp_dir().join(format!("dynlr-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|source| dynlr::Error::Io { path: dir.clone(), source })?;
    let base = dir.join("phantom");

    let x = make_phantom(32, 24, 8, PhantomKind::BeatingRings, 1)?;
    write_cplx(&base, &x)?;
    let (hdr, dat) = file_pair(&base);
    print!("{}", std::fs::read_to_string(&hdr).unwrap_or_default());
    println!("{} bytes of data", std::fs::metadata(&dat).map(|m| m.len()).unwrap_or(0));

    let back = read_cplx(&base)?;
    println!("max round-trip error {:.2e} (float32 storage)", back.sub(&x)?.max_abs());

    let mask = make_vd_mask(24, 8, 4.0, 0.15, 2)?;
    write_mask(&dir.join("mask"), &mask)?;
    println!("mask round trip equal: {}", read_mask(&dir.join("mask"))? == mask);

    std::fs::write(&hdr, "DYNLR1\ndims 32 24 9\ndtype c64le\n").ok();
    match read_cplx(&base) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("corrupt header -> exit code {}: {e}", e.exit_code()),
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}
