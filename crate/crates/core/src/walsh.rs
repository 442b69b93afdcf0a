//! Walsh spectrum and nonlinearity.
//!
//! `W_f(a) = Σ_x (-1)^(f(x) ⊕ a·x)` and `NL(f) = 2^(n-1) - max_a |W_f(a)| / 2`.

use crate::error::Result;
use crate::truth_table::{check_vars, TruthTable};

/// Size cap of the literal-enumeration oracle.
pub const BRUTEFORCE_MAX_VARS: usize = 16;

/// The `2^n` Walsh coefficients of a function. Coefficient `a` pairs with
/// the linear function whose mask bit `j` is `a_{j+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: usize,
    coefficients: Vec<i32>,
}

impl WalshSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[i32] {
        &self.coefficients
    }

    pub fn get(&self, a: usize) -> i32 {
        self.coefficients[a]
    }

    pub fn max_abs(&self) -> u32 {
        self.coefficients
            .iter()
            .map(|w| w.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// `Σ_a W(a)^2`, which is `4^n` for every Boolean function.
    pub fn parseval_sum(&self) -> u128 {
        self.coefficients
            .iter()
            .map(|&w| (w as i128 * w as i128) as u128)
            .sum()
    }

    /// Applies the transform again; `inverse()[x] = 2^n · (-1)^f(x)`.
    pub fn inverse(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.coefficients.iter().map(|&w| i64::from(w)).collect();
        butterfly(&mut v);
        v
    }
}

fn butterfly<T>(v: &mut [T])
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let len = v.len();
    let mut h = 1;
    while h < len {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Fast Walsh–Hadamard transform in `O(n 2^n)` integer operations.
pub fn fwt(tt: &TruthTable) -> WalshSpectrum {
    let mut v: Vec<i32> = (0..tt.len())
        .map(|i| if tt.get(i) { -1 } else { 1 })
        .collect();
    butterfly(&mut v);
    WalshSpectrum {
        n: tt.n(),
        coefficients: v,
    }
}

pub fn nonlinearity(tt: &TruthTable) -> u64 {
    let spectrum = fwt(tt);
    ((1u64 << tt.n()) - u64::from(spectrum.max_abs())) / 2
}

/// The affine function `a·x ⊕ c` closest to some `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct AffineApproximation {
    pub n: usize,
    /// Bit `j` is the coefficient of `x_{j+1}`.
    pub mask: usize,
    pub c: bool,
    pub agreements: u64,
}

impl AffineApproximation {
    pub fn coefficients(&self) -> Vec<bool> {
        (0..self.n).map(|j| (self.mask >> j) & 1 == 1).collect()
    }

    /// Coefficients as a string, `a_1` first.
    pub fn coefficient_string(&self) -> String {
        self.coefficients()
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    pub fn table(&self) -> TruthTable {
        TruthTable::affine_mask(self.n, self.mask, self.c).expect("n within cap")
    }
}

/// Best affine approximation; ties go to the smallest mask, then `c = 0`.
pub fn best_affine_approximation(tt: &TruthTable) -> AffineApproximation {
    let spectrum = fwt(tt);
    let size = 1i64 << tt.n();
    let mut best = AffineApproximation {
        n: tt.n(),
        mask: 0,
        c: false,
        agreements: 0,
    };
    let mut first = true;
    for (a, &w) in spectrum.coefficients().iter().enumerate() {
        for c in [false, true] {
            let signed = if c { -i64::from(w) } else { i64::from(w) };
            let agreements = ((size + signed) / 2) as u64;
            if first || agreements > best.agreements {
                best = AffineApproximation {
                    n: tt.n(),
                    mask: a,
                    c,
                    agreements,
                };
                first = false;
            }
        }
    }
    best
}

/// Nonlinearity by literal enumeration of all `2^(n+1)` affine functions.
///
/// Independent of the transform; the affine tables are generated in Gray
/// code order so each step XORs in one variable table.
pub fn nonlinearity_bruteforce(tt: &TruthTable) -> Result<u64> {
    check_vars("walsh (brute force)", tt.n(), BRUTEFORCE_MAX_VARS)?;
    let n = tt.n();
    let size = 1u64 << n;
    let vars: Vec<TruthTable> = (0..n)
        .map(|j| TruthTable::variable(n, j))
        .collect::<Result<_>>()?;
    let mut current = TruthTable::constant(n, false)?;
    let mut best = u64::MAX;
    for step in 0..(1usize << n) {
        if step > 0 {
            let flip = step.trailing_zeros() as usize;
            current = current.xor(&vars[flip])?;
        }
        let d = tt.hamming_distance(&current)?;
        // distance to the complement is 2^n - d
        best = best.min(d).min(size - d);
    }
    Ok(best)
}

/// True iff `tt` is an affine function.
pub fn is_affine_table(tt: &TruthTable) -> bool {
    nonlinearity(tt) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn tt(s: &str, n: usize) -> TruthTable {
        TruthTable::from_text(s, n).unwrap()
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(fwt(&tt("0000", 2)).coefficients(), &[4, 0, 0, 0]);
        // f = x1 ⊕ x2 coincides with the character at a = 11
        assert_eq!(fwt(&tt("0110", 2)).coefficients(), &[0, 0, 0, 4]);
        // a = 00, 10, 01, 11 is index order 0, 1, 2, 3
        assert_eq!(fwt(&tt("0001", 2)).coefficients(), &[2, 2, 2, -2]);
    }

    #[test]
    fn nonlinearity_examples() {
        assert_eq!(nonlinearity(&tt("0001", 2)), 1);
        assert_eq!(nonlinearity(&tt("0110", 2)), 0);
        assert_eq!(nonlinearity(&tt("1", 0)), 0);
        let bent = TruthTable::from_fn(4, |i| {
            let b = |j: usize| (i >> j) & 1;
            (b(0) & b(1)) ^ (b(2) & b(3)) == 1
        })
        .unwrap();
        assert_eq!(nonlinearity(&bent), 6);
        assert_eq!(nonlinearity_bruteforce(&bent).unwrap(), 6);
        assert!(fwt(&bent).coefficients().iter().all(|w| w.abs() == 4));
    }

    #[test]
    fn best_affine_examples() {
        let x = best_affine_approximation(&tt("0110", 2));
        assert_eq!((x.mask, x.c, x.agreements), (0b11, false, 4));
        let x = best_affine_approximation(&tt("0001", 2));
        assert_eq!((x.mask, x.c, x.agreements), (0, false, 3));
        assert_eq!(x.coefficient_string(), "00");
        let f = TruthTable::affine_mask(5, 0b10110, true).unwrap().complement();
        let x = best_affine_approximation(&f);
        assert_eq!((x.mask, x.c, x.agreements), (0b10110, false, 32));
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(nonlinearity_bruteforce(&tt("1111", 2)).unwrap(), 0);
        assert_eq!(nonlinearity_bruteforce(&tt("0001", 2)).unwrap(), 1);
        assert_eq!(nonlinearity_bruteforce(&tt("0", 0)).unwrap(), 0);
        let big = TruthTable::constant(17, false).unwrap();
        assert!(matches!(
            nonlinearity_bruteforce(&big),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn inverse_recovers_signs() {
        let f = TruthTable::random(7, 11).unwrap();
        let back = fwt(&f).inverse();
        for (i, v) in back.iter().enumerate() {
            assert_eq!(*v, if f.get(i) { -128 } else { 128 });
        }
    }
}
