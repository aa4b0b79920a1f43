//! Exact linear algebra over F2 and Z, with 2-local reporting.

pub mod f2;
pub mod int;
pub mod lattice;
pub mod padic;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use f2::{f2_homology_basis, f2_kernel_basis, f2_rank, F2Echelon, F2Matrix};
pub use int::{int_rank, smith_normal_form, IntMatrix, Snf};
pub use lattice::{integer_kernel, lattice_quotient, Lattice, QuotientSummand};
pub use padic::{two_adic_divisors, PadicError};

use crate::group::{GroupPresentation, Order, Summand};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("composite of consecutive differentials is nonzero")]
    NotAComplex,
    #[error("matrix shapes do not compose: {0}")]
    Shape(String),
}

/// The 2-primary part of a cyclic order; `None` when the summand dies after 2-localization.
pub fn two_local_order(order: &BigInt) -> Option<Order> {
    if order.is_zero() {
        return Some(Order::Z2Adic);
    }
    let v = order.abs().trailing_zeros().unwrap_or(0);
    (v > 0).then(|| Order::two_power(v as u32))
}

/// Formats an integer vector as a label.
pub fn vector_label(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// `ker(d_out) / im(d_in)` localized at 2, with generator vectors as labels.
///
/// `d_in: C_prev -> C` is `dim C x dim C_prev` and `d_out: C -> C_next` is `dim C_next x dim C`.
pub fn homology_group(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<GroupPresentation, LinalgError> {
    Ok(homology_summands(d_in, d_out)?
        .into_iter()
        .filter_map(|s| two_local_order(&s.order).map(|o| Summand::new(o, vector_label(&s.generator))))
        .fold(GroupPresentation::zero(), |mut g, s| {
            g.push(s);
            g
        }))
}

/// Integral homology as cyclic summands with lifted generators (odd torsion included).
pub fn homology_summands(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<Vec<QuotientSummand>, LinalgError> {
    if d_in.rows() != d_out.cols() {
        return Err(LinalgError::Shape(format!("{}x{} after {}x{}", d_out.rows(), d_out.cols(), d_in.rows(), d_in.cols())));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(LinalgError::NotAComplex);
    }
    let n = d_out.cols();
    let cycles = Lattice::span(&integer_kernel(d_out));
    let boundaries = if d_in.cols() == 0 { Lattice::zero(n) } else { Lattice::span(d_in) };
    Ok(lattice_quotient(&cycles, &boundaries))
}

/// Same as [`homology_group`] but from 2-adic valuations only, for large matrices.
pub fn homology_shape_2adic(
    dim: usize,
    d_in: (usize, usize, &[padic::Entry]),
    d_out: (usize, usize, &[padic::Entry]),
) -> Result<Vec<Order>, PadicError> {
    let vin = two_adic_divisors(d_in.0, d_in.1, d_in.2)?;
    let rank_out = two_adic_divisors(d_out.0, d_out.1, d_out.2)?.len();
    let free = dim - vin.len() - rank_out;
    let mut out = vec![Order::Z2Adic; free];
    out.extend(vin.into_iter().filter(|&v| v > 0).map(Order::two_power));
    out.sort();
    Ok(out)
}

pub fn bigint_is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homology_of_multiplication_by_four() {
        // Z --4--> Z --0--> 0
        let d_in = IntMatrix::from_i64(1, 1, &[4]);
        let d_out = IntMatrix::zeros(0, 1);
        let g = homology_group(&d_in, &d_out).unwrap();
        assert_eq!(g.shape(), vec![Order::Cyclic(4)]);
        // Odd torsion is discarded.
        let d_in = IntMatrix::from_i64(1, 1, &[12]);
        assert_eq!(homology_group(&d_in, &d_out).unwrap().shape(), vec![Order::Cyclic(4)]);
        let d_in = IntMatrix::from_i64(1, 1, &[3]);
        assert!(homology_group(&d_in, &d_out).unwrap().is_zero());
    }

    #[test]
    fn not_a_complex() {
        let d_in = IntMatrix::from_i64(1, 1, &[1]);
        let d_out = IntMatrix::from_i64(1, 1, &[1]);
        assert_eq!(homology_group(&d_in, &d_out), Err(LinalgError::NotAComplex));
    }

    #[test]
    fn free_summands_are_two_adic() {
        let d_in = IntMatrix::zeros(2, 0);
        let d_out = IntMatrix::from_i64(1, 2, &[1, -1]);
        assert_eq!(homology_group(&d_in, &d_out).unwrap().shape(), vec![Order::Z2Adic]);
    }
}
