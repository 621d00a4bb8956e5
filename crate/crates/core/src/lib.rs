//! Exact arithmetic for brackets and bi-brackets: q-analogues of multiple
//! zeta values with their quasi-shuffle and conjugate products, the
//! partition involution, regularized brackets and the derivative `q d/dq`.

pub mod error;
pub mod expr;
pub mod involution;
pub mod linalg;
pub mod poly;
pub mod products;
pub mod qseries;
pub mod rational;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use involution::{boxdot, involution, involution_p};
pub use products::{boxast, ds, harmonic, shuffle};
pub use qseries::{
    derivative, derivative_q, derivative_word, eval_g, eval_gsh, eval_h, eval_map_g, eval_map_gsh,
    gsh_in_g, GshIndex, QSeries, SeriesCache,
};
pub use rational::{bernoulli, lambda_coeff, Rational};
pub use word::{word_weight, Letter, LinComb, Word};
