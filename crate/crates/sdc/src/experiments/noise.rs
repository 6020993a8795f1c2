//! Independent per-qubit faults on 30-qubit blocks, sampled by geometric
//! skipping so that low error rates cost few random draws.

use rand::Rng;
use sdc_core::circuit::two_qubit_paulis;

/// Calls `f(i)` for each of `n` sites that fails independently with
/// probability `p`, in increasing order.
#[inline]
pub fn for_each_failure<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R, mut f: impl FnMut(usize)) {
    if p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        (0..n).for_each(f);
        return;
    }
    let log_q = (-p).ln_1p();
    let mut i = 0usize;
    loop {
        let u: f64 = rng.random();
        let skip = ((-u).ln_1p() / log_q).floor();
        if skip >= (n - i) as f64 {
            return;
        }
        i += skip as usize;
        f(i);
        i += 1;
        if i >= n {
            return;
        }
    }
}

/// Mask of `n <= 64` independent Bernoulli(p) bits.
#[inline]
pub fn bernoulli_mask<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> u64 {
    let mut m = 0;
    for_each_failure(n, p, rng, |i| m |= 1 << i);
    m
}

/// The 15 two-qubit Paulis as `(x_a, z_a, x_b, z_b)` bits, in
/// [`two_qubit_paulis`] order.
pub fn pair_pauli_bits() -> [(bool, bool, bool, bool); 15] {
    let mut out = [(false, false, false, false); 15];
    for (slot, (a, b)) in out.iter_mut().zip(two_qubit_paulis()) {
        *slot = (a.has_x(), a.has_z(), b.has_x(), b.has_z());
    }
    out
}
