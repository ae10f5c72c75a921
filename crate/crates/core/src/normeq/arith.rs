//! Rational-integer helpers: primality, modular square roots.

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

const SMALL_PRIMES: [u32; 25] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

/// Miller–Rabin with `rounds` random bases; exact for n < 10^4 by trial division.
pub fn is_probable_prime<R: Rng + ?Sized>(n: &BigInt, rounds: u32, rng: &mut R) -> bool {
    let n = n.abs();
    if n < BigInt::from(2) {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = BigInt::from(p);
        if n == p {
            return true;
        }
        if n.is_multiple_of(&p) {
            return false;
        }
    }
    if n < BigInt::from(97 * 97) {
        return true;
    }
    let one = BigInt::one();
    let nm1 = &n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let two = BigInt::from(2);
    'witness: for _ in 0..rounds {
        let a = rng.gen_bigint_range(&two, &nm1);
        let mut x = a.modpow(&d, &n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, &n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Deterministic trial-division primality for small values.
pub fn is_prime_small(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Square root of `a` modulo an odd prime `p` (Tonelli–Shanks), if one exists.
pub fn sqrt_mod(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    let one = BigInt::one();
    let pm1 = p - &one;
    let half = &pm1 >> 1;
    if a.modpow(&half, p) != one {
        return None;
    }
    let s = pm1.trailing_zeros().unwrap_or(0);
    let q = &pm1 >> s;
    if s == 1 {
        let e = (p + &one) >> 2;
        return Some(a.modpow(&e, p));
    }
    // a quadratic non-residue, searched deterministically
    let mut zn = BigInt::from(2);
    while zn.modpow(&half, p) == one {
        zn += 1;
    }
    let mut m = s;
    let mut c = zn.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while t != one {
        let mut i = 0;
        let mut t2 = t.clone();
        while t2 != one {
            t2 = (&t2 * &t2).mod_floor(p);
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b).mod_floor(p);
        t = (&t * &c).mod_floor(p);
        r = (&r * &b).mod_floor(p);
    }
    Some(r)
}

/// Exact integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

pub fn mod8(n: &BigInt) -> u32 {
    n.mod_floor(&BigInt::from(8)).to_u32().expect("small")
}

/// Sum of four squares equal to `n` (Rabin–Shallit style randomized search with
/// a brute-force fallback). Returned sorted in decreasing order.
pub fn four_squares<R: Rng + ?Sized>(n: &BigInt, rng: &mut R) -> [BigInt; 4] {
    assert!(!n.is_negative(), "four squares of a negative number");
    if n.is_zero() {
        return [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
    }
    // strip factors of 4: n = 4^k m
    let mut m = n.clone();
    let mut scale = BigInt::one();
    while (&m % 4u32).is_zero() {
        m >>= 2;
        scale <<= 1;
    }
    let mut out = four_squares_core(&m, rng).map(|x| x * &scale);
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn four_squares_core<R: Rng + ?Sized>(n: &BigInt, rng: &mut R) -> [BigInt; 4] {
    if let Some(r) = exact_sqrt(n) {
        return [r, BigInt::zero(), BigInt::zero(), BigInt::zero()];
    }
    if let Some((a, b)) = two_squares_prime_like(n, rng) {
        return [a, b, BigInt::zero(), BigInt::zero()];
    }
    // pick x, y randomly so that n − x² − y² is a prime ≡ 1 (mod 4) or twice one
    let root = n.sqrt();
    if root >= BigInt::from(2) {
        for _ in 0..10_000 {
            let x = rng.gen_bigint_range(&BigInt::zero(), &(&root + 1));
            let rest = n - &x * &x;
            if rest.is_negative() {
                continue;
            }
            let r2 = rest.sqrt();
            let y = rng.gen_bigint_range(&BigInt::zero(), &(&r2 + 1));
            let p = &rest - &y * &y;
            if let Some((a, b)) = two_squares_prime_like(&p, rng) {
                return [x, y, a, b];
            }
        }
    }
    brute_force_four(n).expect("every non-negative integer is a sum of four squares")
}

/// Write n = a² + b² when n is a prime ≡ 1 (mod 4), 2·such a prime, 1 or 2.
fn two_squares_prime_like<R: Rng + ?Sized>(n: &BigInt, rng: &mut R) -> Option<(BigInt, BigInt)> {
    if n.is_zero() {
        return Some((BigInt::zero(), BigInt::zero()));
    }
    if n.is_one() {
        return Some((BigInt::one(), BigInt::zero()));
    }
    if *n == BigInt::from(2) {
        return Some((BigInt::one(), BigInt::one()));
    }
    let (p, twice) = if n.is_even() { (n >> 1, true) } else { (n.clone(), false) };
    if mod8(&p) % 4 != 1 || !is_probable_prime(&p, 20, rng) {
        return None;
    }
    let h = sqrt_mod(&(&p - 1), &p)?;
    let (a, b) = cornacchia(&p, &h);
    if twice {
        // (a² + b²)·2 = (a + b)² + (a − b)²
        Some(((&a + &b).abs(), (&a - &b).abs()))
    } else {
        Some((a, b))
    }
}

/// Euclid on (p, h) with h² ≡ −1 stops at the first remainder below √p.
fn cornacchia(p: &BigInt, h: &BigInt) -> (BigInt, BigInt) {
    let mut a = p.clone();
    let mut b = h.clone();
    let lim = p.sqrt();
    while b > lim {
        let r = a.mod_floor(&b);
        a = b;
        b = r;
    }
    let c2 = p - &b * &b;
    let c = c2.sqrt();
    (b, c)
}

fn brute_force_four(n: &BigInt) -> Option<[BigInt; 4]> {
    let n = n.to_u64()?;
    let r = (n as f64).sqrt() as u64 + 1;
    for a in (0..=r).rev() {
        if a * a > n {
            continue;
        }
        let n1 = n - a * a;
        for b in (0..=a).rev() {
            if b * b > n1 {
                continue;
            }
            let n2 = n1 - b * b;
            for c in (0..=b).rev() {
                if c * c > n2 {
                    continue;
                }
                let n3 = n2 - c * c;
                let d = (n3 as f64).sqrt() as u64;
                for dd in [d.saturating_sub(1), d, d + 1] {
                    if dd * dd == n3 && dd <= c {
                        return Some([a.into(), b.into(), c.into(), dd.into()]);
                    }
                }
            }
        }
    }
    None
}
