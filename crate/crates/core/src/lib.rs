//! Symplectic groups over `Z/m`, form nets of ideals and the subgroups they
//! define, with executable checks for the structure theory around them.

pub mod error;
pub mod extraction;
pub mod formats;
pub mod index;
pub mod localization;
pub mod net;
pub mod subgroups;
pub mod symplectic;
pub mod transporter;
pub mod zmod;

pub use error::{Error, Result};
pub use index::{eps, EquivRel, HeightPair, IndexSet, TupleKind};
pub use net::{closure_from_levels, FormNet, LevelSeed, NetReport, Violation};
pub use symplectic::{
    is_symplectic, root_element, steinberg_check, symp_inverse, transvection, word_product, Matrix,
    Relation, SympMatrix, TransvectionKind, TransvectionSpec,
};
pub use subgroups::{
    ep_generators, membership_defect, row_length, sample_word, sp_membership, GeneratorSet, GeneratorWord,
    LengthVector, MembershipDefect,
};
pub use zmod::{CrtFactor, CrtSplit, Ideal, ModRing, RingElem};
