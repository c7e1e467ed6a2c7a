//! Quasi-cyclic Stern: a five-round zero-knowledge proof of knowledge for
//! syndrome decoding over index-2 quasi-cyclic codes, the signature scheme
//! obtained from it by Fiat–Shamir, and the calculator that sizes its
//! parameters.
//!
//! ```
//! use qcstern::{fiatshamir, protocol, ParameterSet, Seed};
//!
//! let params = ParameterSet::by_name("TOY").unwrap();
//! let (sk, pk) = protocol::keygen(&params, &Seed::new(vec![7; 16])).unwrap();
//! let sig = fiatshamir::sign(&sk, &pk, &params, b"msg", &Seed::new(vec![1; 16])).unwrap();
//! assert!(fiatshamir::verify_signature(&pk, &params, b"msg", &sig));
//! ```

pub mod algebra;
pub mod codec;
pub mod commit;
pub mod error;
pub mod fiatshamir;
pub mod files;
pub mod params;
pub mod protocol;
pub mod seedexp;
pub mod session;
pub mod wire;

pub use algebra::{BitVector, Permutation, QCParityCheck};
pub use error::{Error, Result};
pub use fiatshamir::Signature;
pub use params::{Optimizations, ParameterSet};
pub use seedexp::Seed;
