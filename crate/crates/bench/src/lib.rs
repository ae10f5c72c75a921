//! Fixed inputs shared by the stage benchmarks.

use rusforge::circuit::{Circuit1, Gate1Q};
use rusforge::ring::{CyclotomicInt, RingUnitary, Root2Int};

/// The worked-example design matrix (T-count 50, L = 26).
pub fn example_design() -> RingUnitary {
    let z = CyclotomicInt::new(-603, 1694, -1510, -7501);
    let y = CyclotomicInt::new(1973, -860, 358, 755);
    RingUnitary::from_zy(&z, &y, 26)
}

/// Right-hand side of the worked norm-equation example.
pub fn example_xi() -> Root2Int {
    Root2Int::new(1_270_080, 211_680)
}

/// A deterministic Clifford+T word with `t` T gates.
pub fn word(t: usize) -> Circuit1 {
    let mut g = Vec::new();
    for i in 0..t {
        g.push(if i % 3 == 0 { Gate1Q::Tdg } else { Gate1Q::T });
        g.push(Gate1Q::H);
        if i % 4 == 1 {
            g.push(Gate1Q::S);
        }
    }
    Circuit1::new(g)
}
