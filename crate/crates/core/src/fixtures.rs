//! Ready-made filtrations used by the test suites and the command line.

use std::sync::Arc;

use crate::filtration::Filtration;
use crate::ring::{MonomialIdeal, RingContext};
use crate::valuation::{ExactScalar, MonomialValuation};

fn plane() -> Arc<RingContext> {
    RingContext::with_dimension(2).expect("two variables")
}

/// `I_n = (x)^{ceil(nπ)} ∩ (x, y)^{ceil(2nπ)}` in `k[x, y]`.
pub fn pi_intersection() -> Filtration {
    let ctx = plane();
    Filtration::discrete_valued(
        &ctx,
        vec![
            (MonomialValuation::new(vec![1, 0]).expect("weights"), ExactScalar::pi()),
            (MonomialValuation::new(vec![1, 1]).expect("weights"), ExactScalar::pi_times(crate::rational::from_u64(2))),
        ],
    )
    .expect("valid filtration")
}

/// Rational analogue `(x)^{3n} ∩ (x, y)^{6n}`.
pub fn rational_intersection() -> Filtration {
    let ctx = plane();
    Filtration::discrete_valued(
        &ctx,
        vec![
            (MonomialValuation::new(vec![1, 0]).expect("weights"), ExactScalar::integer(3)),
            (MonomialValuation::new(vec![1, 1]).expect("weights"), ExactScalar::integer(6)),
        ],
    )
    .expect("valid filtration")
}

/// `I_n = (x^{ceil(nπ)})` in `k[x]`.
pub fn ceil_pi_line() -> Filtration {
    let ctx = RingContext::with_dimension(1).expect("one variable");
    Filtration::discrete_valued(&ctx, vec![(MonomialValuation::new(vec![1]).expect("weights"), ExactScalar::pi())])
        .expect("valid filtration")
}

/// `I_n = (x^2, x y^{τ(n)})` for a coordinate expression `τ`.
pub fn tau_family(tau: &str) -> Filtration {
    Filtration::template(&plane(), &[&["2", "0"], &["1", tau]]).expect("valid template")
}

/// `I_n = (x^n)`.
pub fn principal_powers() -> Filtration {
    Filtration::template(&plane(), &[&["n", "0"]]).expect("valid template")
}

/// `J_n = (x^{n+1}, x^n y)`.
pub fn shifted_powers() -> Filtration {
    Filtration::template(&plane(), &[&["n+1", "0"], &["n", "1"]]).expect("valid template")
}

/// `J_n = x^n (x, y)^{2n}`.
pub fn x_times_square_powers() -> Filtration {
    let ctx = plane();
    Filtration::power(MonomialIdeal::from_coords(&ctx, &[&[3, 0], &[2, 1], &[1, 2]]).expect("generators"))
}

/// `I_n = (x^{3n})`.
pub fn x_cubed_powers() -> Filtration {
    Filtration::template(&plane(), &[&["3*n", "0"]]).expect("valid template")
}

/// Powers of the principal ideal `(x)`.
pub fn x_powers() -> Filtration {
    Filtration::power(MonomialIdeal::from_coords(&plane(), &[&[1, 0]]).expect("generators"))
}

/// Powers of the maximal ideal of `k[x, y]`.
pub fn maximal_powers() -> Filtration {
    Filtration::power(MonomialIdeal::maximal(&plane()))
}
