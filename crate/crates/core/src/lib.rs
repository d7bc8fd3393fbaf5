//! Exact counting and brute-force verification for localized divisor
//! problems: localized divisor counts, the multiplication table count
//! `A_{k+1}(N)`, Farey sum sets, divisor-box measures, the set-tuple model
//! `M_B(Y; I)` and volumes of ordered-uniform regions.
//!
//! Every fast routine has a slow counterpart in [`oracle`]; the test suites
//! compare the two.
//!
//! ```
//! use loctab::arith::SieveTable;
//! use loctab::localized::{ratio, tau_localized, Window};
//!
//! let sieve = SieveTable::new(1000).unwrap();
//! // d_1 in (1, 3], d_2 in (1, 4] with d_1 d_2 | 12: (2,2), (2,3), (3,2), (3,4)
//! let w = Window::new(vec![ratio(1, 1), ratio(1, 1)], vec![ratio(3, 1), ratio(4, 1)]).unwrap();
//! assert_eq!(tau_localized(12, &w, &sieve).unwrap(), 4);
//! ```

pub mod arith;
pub mod boxes;
pub mod error;
pub mod farey;
pub mod localized;
pub mod oracle;
pub mod order_stats;
pub mod table;
pub mod tuples;

pub use error::{Error, Result};

/// Exact window bounds.
pub type Rational = num_rational::Ratio<i128>;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    mod arithmetic {}
    #[doc = include_str!("../../../book/src/localized.md")]
    mod localized {}
    #[doc = include_str!("../../../book/src/table-farey.md")]
    mod table_farey {}
    #[doc = include_str!("../../../book/src/boxes.md")]
    mod boxes {}
    #[doc = include_str!("../../../book/src/tuples.md")]
    mod tuples {}
    #[doc = include_str!("../../../book/src/order-stats.md")]
    mod order_stats {}
}
