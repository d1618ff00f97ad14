//! Fixed-width 256-bit signed integers for exact geometric predicates.
//!
//! The lifted points fed to the extreme-point index have coordinates up to
//! ~2^96 in magnitude, so a 3D orientation determinant needs ~2^206 of headroom
//! — past i128 but comfortably inside 256 bits. Everything here is two's
//! complement over `(hi: i128, lo: u128)` and branch-light; no allocation.

use std::cmp::Ordering;

/// 256-bit signed integer, two's complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct I256 {
    pub hi: i128,
    pub lo: u128,
}

impl I256 {
    pub const ZERO: I256 = I256 { hi: 0, lo: 0 };

    pub fn from_i128(v: i128) -> I256 {
        I256 {
            hi: if v < 0 { -1 } else { 0 },
            lo: v as u128,
        }
    }

    /// Full 128×128→256 signed multiply; never overflows.
    pub fn mul_i128(a: i128, b: i128) -> I256 {
        let neg = (a < 0) ^ (b < 0);
        let ua = a.unsigned_abs();
        let ub = b.unsigned_abs();
        let (hi, lo) = umul_128(ua, ub);
        let m = I256 {
            hi: hi as i128,
            lo,
        };
        if neg {
            m.neg()
        } else {
            m
        }
    }

    pub fn neg(self) -> I256 {
        let lo = (!self.lo).wrapping_add(1);
        let hi = (!self.hi).wrapping_add(if lo == 0 { 1 } else { 0 });
        I256 { hi, lo }
    }

    pub fn add(self, rhs: I256) -> I256 {
        let (lo, carry) = self.lo.overflowing_add(rhs.lo);
        let hi = self
            .hi
            .wrapping_add(rhs.hi)
            .wrapping_add(if carry { 1 } else { 0 });
        I256 { hi, lo }
    }

    pub fn sub(self, rhs: I256) -> I256 {
        self.add(rhs.neg())
    }

    /// Multiply by a small factor. Debug-asserts that the true product still
    /// fits in 256 bits (callers bound |self| < 2^206 and |c| < 2^25).
    pub fn mul_small(self, c: i128) -> I256 {
        debug_assert!(c.unsigned_abs() < (1u128 << 63), "factor too wide");
        let neg = (self.sign() < 0) ^ (c < 0);
        let mag = if self.sign() < 0 { self.neg() } else { self };
        let uc = c.unsigned_abs();
        // magnitude as four u64 limbs, little-endian
        let limbs = [
            mag.lo as u64,
            (mag.lo >> 64) as u64,
            mag.hi as u64,
            (mag.hi as u128 >> 64) as u64,
        ];
        let mut out = [0u64; 5];
        let mut carry: u128 = 0;
        for (i, &l) in limbs.iter().enumerate() {
            let t = (l as u128) * uc + carry;
            out[i] = t as u64;
            carry = t >> 64;
        }
        out[4] = carry as u64;
        debug_assert!(out[4] == 0 && out[3] < (1 << 63), "mul_small overflow");
        let r = I256 {
            hi: ((out[3] as u128) << 64 | out[2] as u128) as i128,
            lo: (out[1] as u128) << 64 | out[0] as u128,
        };
        if neg {
            r.neg()
        } else {
            r
        }
    }

    /// Sign of the value: -1, 0, or 1.
    pub fn sign(self) -> i32 {
        if self.hi < 0 {
            -1
        } else if self.hi == 0 && self.lo == 0 {
            0
        } else {
            1
        }
    }
}

impl Ord for I256 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.hi
            .cmp(&other.hi)
            .then_with(|| self.lo.cmp(&other.lo))
    }
}

impl PartialOrd for I256 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Unsigned 128×128→256 multiply via 64-bit limbs.
fn umul_128(a: u128, b: u128) -> (u128, u128) {
    let (a0, a1) = (a as u64 as u128, a >> 64);
    let (b0, b1) = (b as u64 as u128, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & ((1u128 << 64) - 1)) + (p10 & ((1u128 << 64) - 1));
    let lo = (p00 & ((1u128 << 64) - 1)) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// Sign of `a*b + c*d` with full precision.
pub fn sign_mul_add(a: i128, b: i128, c: i128, d: i128) -> i32 {
    I256::mul_i128(a, b).add(I256::mul_i128(c, d)).sign()
}

/// Compare `a/b` with `c/d` as exact rationals, `b > 0`, `d > 0`.
pub fn cmp_ratio(a: i128, b: i128, c: i128, d: i128) -> Ordering {
    debug_assert!(b > 0 && d > 0);
    I256::mul_i128(a, d).cmp(&I256::mul_i128(c, b))
}
