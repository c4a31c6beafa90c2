//! Graded modules, dgmodules, graded maps, tensor products, suspension and
//! the Hom complex.

mod graded;
mod map;
mod multimap;

pub use graded::{DgModule, GradedModule};
pub use map::{
    desuspension_map, dg_from_full_matrix, hom_complex, koszul_tensor_of_maps, suspend,
    suspension_map, tensor, tensor_power, GradedMap, HomComplex, TensorProduct,
};
pub use multimap::{
    basis_index, differential_multimap, endo_basis, graded_from_multimap, hom_differential,
    multimap_from_graded, tuples_of_degree, MultiMap, OperatorMatrix, TermKey,
};
