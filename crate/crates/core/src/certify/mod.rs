//! Exact sign certificates and their replay.

pub mod cert;
pub mod claims;
pub mod lemma;
pub mod ray;
pub mod sqrtsum;
pub mod window;

pub use cert::{Claim, ClaimKind, Domain, Expr, Method, Minorant, NRange, RayWitness, Sign, SignCert, Witness};
pub use claims::replay;
pub use lemma::{certify_intersection, certify_lemma_poly, IntersectionBundle, LemmaPolyBundle};
pub use ray::{poly_sign_on_ray, ratfunc_sign_on_ray};
pub use sqrtsum::sqrtsum_sign_at;
pub use window::{roots, window, witness_verify, AlgEndpoint, CWindow, OmegaData, WindowStatus};
