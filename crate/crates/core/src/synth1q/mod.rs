//! Single-qubit exact synthesis and T-code machinery.

pub mod clifford;
pub mod exact;
pub mod tcode;

pub use clifford::Clifford;
pub use exact::{exact_synthesize, normal_form, tcount_of, NormalForm};
pub use tcode::{decorate, reduce_paulis, rewrite_identities, to_tcode_form, to_tcode_form_matrix, DecSyllable, Decoration, DecoratedTCode, Signature, TCode, TCodeForm};
