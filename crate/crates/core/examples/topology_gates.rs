//! The closed-form and cohomological conditions behind the existence
//! results, evaluated on a few parameter sets.

use projtverberg::topology::{
    flag_condition, kummer_nonzero_mod_p, partition_count_lower_bound, q_binomial_minus1, thm4_condition,
    thm6_condition, tverberg_r,
};
use projtverberg::tverberg::both_free_gate;

fn main() -> projtverberg::Result<()> {
    for (d, v) in [(2, 0), (2, 1), (1, 0), (3, 1), (5, 2)] {
        let g = thm6_condition(d, v, 2)?;
        println!("both free d={d} v={v}: {} ({})", g.holds, g.explanation);
    }
    for (d, v, w, m, p) in [(2, 1, 1, 2, 2), (3, 2, 1, 2, 3), (4, 3, 1, 2, 3)] {
        match thm4_condition(d, v, w, m, p) {
            Ok(g) => println!("transversal d={d} v={v} w={w} m={m} p={p}: {} {:?}", g.holds, g.method),
            Err(e) => println!("transversal d={d} v={v} w={w} m={m} p={p}: {e}"),
        }
    }
    for (d, v, w, m) in [(2, 1, 1, 2), (1, 0, 0, 2), (4, 2, 3, 2)] {
        let f = flag_condition(d, v, w, m)?;
        println!("flag d={d} v={v} w={w} m={m}: {} (degree {}, reduced {})", f.holds, f.degree, f.reduced);
    }
    println!("gate for m=3 in R^5: {}", both_free_gate(5, 3, 2, 3, 2)?.explanation);

    println!("[6 choose 2] at q = -1: {}", q_binomial_minus1(6, 2)?);
    println!("C(10, 3) nonzero mod 3: {}", kummer_nonzero_mod_p(10, 3, 3)?);
    println!("r for 11 points, d=3, v=1: {}", tverberg_r(11, 3, 1)?);
    println!("partition count bound p=2 l=2 d=1: {}", partition_count_lower_bound(2, 2, 1)?);
    Ok(())
}
