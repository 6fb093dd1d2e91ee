//! Gaussian variable-density masks: per-frame patterns, acceleration and
//! the empirical line-sampling profile.

use dynlr::sim::line_budget;
use dynlr::prelude::*;

fn main() -> dynlr::Result<()> {
    let (ny, nt) = (64, 12);
    for accel in [4.0, 8.0, 10.0, 12.0] {
        let m = make_vd_mask(ny, nt, accel, 0.15, 7)?;
        println!(
            "R={accel:<4} lines/frame {}  achieved {:.2}",
            line_budget(ny, accel)?,
            m.achieved_acceleration()
        );
    }

    let m = VdMaskOptions::new(ny, nt, 8.0).seed(7).generate()?;
    println!("\nk-t pattern (rows = phase encode, cols = frames)");
    for y in 0..ny {
        let row: String = (0..nt).map(|t| if m.is_sampled(y, t) { '#' } else { '.' }).collect();
        println!("{y:>3} {row}");
    }

    let trials = 2000;
    let mut freq = vec![0usize; ny];
    for seed in 0..trials {
        let m = make_vd_mask(ny, 1, 8.0, 0.15, seed)?;
        for (y, f) in freq.iter_mut().enumerate() {
            *f += usize::from(m.is_sampled(y, 0));
        }
    }
    println!("\nsampling frequency over {trials} masks");
    for (y, f) in freq.iter().enumerate().step_by(4) {
        let p = *f as f64 / trials as f64;
        println!("{y:>3} {p:.3} {}", "*".repeat((p * 40.0).round() as usize));
    }
    Ok(())
}
