//! Sampled measures: the smallest piece fraction on a finite sample next to
//! the continuous bound. A demonstration, not a certificate.

use projtverberg::centerpoint::SearchConfig;
use projtverberg::cli::{demo_measure, Density, MeasureSpec};

fn main() -> projtverberg::Result<()> {
    let square = MeasureSpec { densities: vec![Density::unit_box(2)], samples: 60 };
    for seed in 0..3 {
        let out = demo_measure(&square, 2, 1, seed, &SearchConfig { seed, ..SearchConfig::default() })?;
        let s = &out.summary;
        println!("seed {seed}: fractions {:?}, bound {:.3}, gap {:+.3}", s.fractions, s.bound, s.gap);
    }

    let pair = MeasureSpec {
        densities: vec![
            Density::Gaussian { mean: vec![0.0, 0.0], std: vec![1.0, 0.5] },
            Density::Uniform { low: vec![2.0, -1.0], high: vec![4.0, 1.0] },
        ],
        samples: 30,
    };
    let out = demo_measure(&pair, 2, 1, 1, &SearchConfig::default())?;
    println!("two measures, V the line at infinity: fractions {:?}, bound {:.3}", out.summary.fractions, out.summary.bound);
    println!("{}", out.summary.label);
    Ok(())
}
