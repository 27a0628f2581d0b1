pub mod crosscheck;
pub mod eval;
pub mod hp;
pub mod quad;

pub use crosscheck::{crosscheck, crosscheck_cert, CrosscheckReport};
pub use eval::{eval_hp, eval_pi_scaled, HpEval};
pub use hp::{HPValue, HpContext};
pub use quad::{integral_numeric, quad_moment, MomentReport};
