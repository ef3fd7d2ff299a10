//! Scalar foundation: double-double real and complex arithmetic, Pochhammer
//! symbols, the gamma function, and compensated summation.

mod complex;
mod dd;
mod gamma;

pub use complex::ComplexEP;
pub use dd::DoubleDouble;
pub use gamma::gamma;

use crate::error::{Error, Result};

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)` by direct product.
pub fn pochhammer(a: ComplexEP, n: usize) -> Result<ComplexEP> {
    let mut acc = ComplexEP::ONE;
    for j in 0..n {
        acc *= a.add_f64(j as f64);
        if acc.is_zero() {
            return Ok(ComplexEP::ZERO);
        }
        if !acc.is_finite() {
            return Err(Error::OutOfRange(format!("pochhammer({a}, {n}) overflows")));
        }
    }
    Ok(acc)
}

/// Running complex sum with Neumaier compensation on top of double-double
/// addition.
#[derive(Copy, Clone, Debug, Default)]
pub struct CompensatedAccumulator {
    pub primary: ComplexEP,
    pub compensation: ComplexEP,
    pub count: usize,
}

fn neumaier(sum: DoubleDouble, comp: DoubleDouble, term: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let t = sum + term;
    let lost = if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
    (t, comp + lost)
}

impl CompensatedAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: ComplexEP) {
        let (re, cre) = neumaier(self.primary.re, self.compensation.re, term.re);
        let (im, cim) = neumaier(self.primary.im, self.compensation.im, term.im);
        self.primary = ComplexEP::new(re, im);
        self.compensation = ComplexEP::new(cre, cim);
        self.count += 1;
    }

    pub fn value(&self) -> ComplexEP {
        self.primary + self.compensation
    }
}

/// Functional form of [`CompensatedAccumulator::add`].
pub fn compensated_add(mut acc: CompensatedAccumulator, term: ComplexEP) -> CompensatedAccumulator {
    acc.add(term);
    acc
}
