//! Exact integer sequences governing cell sizes and time budgets.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `L_k = prod_{j=0..=k} (2j+1)^2`; a k-cell has side `N * L_k`.
pub fn level_product(k: u32) -> BigUint {
    (0..=k as u64).fold(BigUint::one(), |acc, j| acc * BigUint::from((2 * j + 1) * (2 * j + 1)))
}

/// `T_0 = 1`, `T_k = ((2k+1)^2 + C) T_{k-1}`: the round budget of one
/// level-k traversal.
pub fn time_budget(k: u32, c: u64) -> BigUint {
    (1..=k as u64).fold(BigUint::one(), |acc, j| acc * BigUint::from((2 * j + 1) * (2 * j + 1) + c))
}

/// A rational `num / den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: BigUint,
    pub den: BigUint,
}

impl Ratio {
    pub fn pow(&self, e: u64) -> Ratio {
        Ratio { num: num_traits::pow(self.num.clone(), e as usize), den: num_traits::pow(self.den.clone(), e as usize) }
    }
}

/// `2.718281828`, strictly below e.
pub fn e_decimal_lower() -> Ratio {
    Ratio { num: BigUint::from(2_718_281_828u64), den: BigUint::from(1_000_000_000u64) }
}

/// Tight rational bounds `lo < e < hi` from the factorial series cut at 40
/// terms; the tail after term `J` is below `1 / (J! J)`.
pub fn e_bounds() -> (Ratio, Ratio) {
    const TERMS: u64 = 40;
    let mut fact = BigUint::one();
    for j in 1..=TERMS {
        fact *= BigUint::from(j);
    }
    // sum_{j=0}^{TERMS} TERMS!/j!
    let mut num = BigUint::zero();
    let mut term = BigUint::one();
    for j in (0..=TERMS).rev() {
        num += &term;
        term *= BigUint::from(j.max(1));
    }
    let lo = Ratio { num: num.clone(), den: fact.clone() };
    // add 1/(TERMS! * TERMS), over the common denominator TERMS! * TERMS
    let hi = Ratio { num: num * BigUint::from(TERMS) + BigUint::one(), den: fact * BigUint::from(TERMS) };
    (lo, hi)
}

/// Whether `T_k < lower^C * L_k` for the decimal lower bound of e, decided
/// exactly. Since the bound is below `e^C`, a `true` answer certifies
/// `T_k < e^C L_k`.
pub fn time_budget_below_exp(k: u32, c: u64) -> bool {
    let bound = e_decimal_lower().pow(c);
    time_budget(k, c) * &bound.den < bound.num * level_product(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_product_values() {
        assert_eq!(level_product(0), BigUint::from(1u32));
        assert_eq!(level_product(1), BigUint::from(9u32));
        assert_eq!(level_product(2), BigUint::from(225u32));
    }

    #[test]
    fn time_budget_values() {
        assert_eq!(time_budget(0, 40), BigUint::from(1u32));
        assert_eq!(time_budget(1, 40), BigUint::from(49u32));
        assert_eq!(time_budget(2, 40), BigUint::from(3185u32));
        // 2 T_1 + 1 = 19 + 2C
        assert_eq!(time_budget(1, 40) * 2u32 + 1u32, BigUint::from(19u32 + 80));
    }

    #[test]
    fn e_bounds_bracket_decimal() {
        let (lo, hi) = e_bounds();
        let dec = e_decimal_lower();
        // dec < lo < hi
        assert!(&dec.num * &lo.den < &lo.num * &dec.den);
        assert!(&lo.num * &hi.den < &hi.num * &lo.den);
        // hi < 2.7182818285
        let cap = Ratio { num: BigUint::from(27_182_818_285u64), den: BigUint::from(10_000_000_000u64) };
        assert!(&hi.num * &cap.den < &cap.num * &hi.den);
    }
}
