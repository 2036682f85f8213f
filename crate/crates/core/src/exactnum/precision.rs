// High-precision constants as fixed-point integers (value * 2^bits).

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

const GUARD: u64 = 64;

fn cache() -> &'static Mutex<HashMap<(u8, u64), BigInt>> {
    static C: OnceLock<Mutex<HashMap<(u8, u64), BigInt>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

// atan(1/x) * 2^bits by the alternating Taylor series
fn atan_inv(x: u64, bits: u64) -> BigInt {
    let one = BigInt::one() << bits;
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = &one / &x;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// `pi * 2^bits`, accurate to a few units in the last place.
pub fn pi_fixed(bits: u64) -> BigInt {
    if let Some(v) = cache().lock().unwrap().get(&(0, bits)) {
        return v.clone();
    }
    let b = bits + GUARD;
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let v: BigInt = (atan_inv(5, b) * 16 - atan_inv(239, b) * 4) >> GUARD;
    cache().lock().unwrap().insert((0, bits), v.clone());
    v
}

/// `sqrt(3) * 2^bits`, rounded down.
pub fn sqrt3_fixed(bits: u64) -> BigInt {
    if let Some(v) = cache().lock().unwrap().get(&(1, bits)) {
        return v.clone();
    }
    let v: BigInt = (BigInt::from(3) << (2 * bits)).sqrt();
    cache().lock().unwrap().insert((1, bits), v.clone());
    v
}
