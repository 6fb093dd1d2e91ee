//! Centered 2D FFT, undersampled encoding, its adjoint and data consistency.

use dynlr::prelude::*;

fn main() -> dynlr::Result<()> {
    let truth = make_phantom(64, 64, 8, PhantomKind::BeatingRings, 3)?;
    let mask = make_vd_mask(64, 8, 4.0, 0.15, 1)?;

    let k = fft2c(&truth);
    println!("energy image {:.6}  k-space {:.6}", truth.norm_sqr(), k.norm_sqr());
    println!("fft round trip error {:.2e}", ifft2c(&k).sub(&truth)?.norm());

    let y = encode(&truth, &mask)?;
    let zero_filled = encode_adjoint(&y);
    println!("sampled fraction {:.3}", y.data().norm_sqr() / k.norm_sqr());
    println!("zero-filled PSNR {:.2} dB", psnr(&truth, &zero_filled)?);

    // <A x, y> = <x, A^H y>
    let lhs = y.data().inner(y.data())?;
    let rhs = truth.inner(&zero_filled)?;
    println!("adjoint check |<Ax,y> - <x,A^H y>| = {:.2e}", (lhs - rhs).norm());

    // a guess that disagrees with the measured lines
    let mut guess = zero_filled.clone();
    guess.scale(0.5);
    for mode in [DcMode::Replace, DcMode::Weighted(0.5), DcMode::Off] {
        let out = data_consistency(&guess, &y, mode)?;
        let resid = encode(&out, &mask)?.data().sub(y.data())?.norm();
        println!("dc {mode:<14} sampled residual {resid:.2e}");
    }
    Ok(())
}
