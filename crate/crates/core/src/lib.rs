//! n-best Blaschke-form approximation of Hardy-space functions.
//!
//! Functions on the unit disc are projected onto Takenaka-Malmquist systems
//! through a reduced-remainder recursion ([`tm`]); pole tuples are chosen by
//! interchangeable search strategies ([`search`]); forms with a pole at the
//! origin convert to admissible rational pairs ([`rational`]); and the kernel
//! identities and inequalities the construction rests on are checked by the
//! property suites in [`verify`].

pub mod corpus;
pub mod error;
pub mod hardy;
pub mod rational;
pub mod search;
pub mod tm;
pub mod verify;

pub use error::{Error, Result};
pub use hardy::{dft, idft, BoundaryGrid, Cpx, DiscPoint, HardyFunction};
pub use tm::{decompose, remainder_step, BlaschkeForm, PoleTuple, ReducedRemainder};
