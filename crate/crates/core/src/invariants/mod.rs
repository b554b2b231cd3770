//! The polynomial side: the Borel invariants `B[n] = F_p[h_1, ..., h_n]`,
//! the Dickson generators inside it, and a realization in `F_p[y_1, ..., y_n]`.

pub mod dickson;
pub mod identities;
pub mod poly;
pub mod realize;

pub use dickson::{
    chi_max, chi_min, chi_min_inverse, coeff_by_partitions, coeff_in_expansion, dickson_from_matrices,
    dickson_to_borel, dickson_to_borel_recursive, enumerate_a, expand_dickson_monomial, generator_degree, h_degree,
    matrix_to_monomial, psi_map, psi_t, BPoly, DicksonMono, HMonomial, RowMatrixA,
};
pub use identities::{identity_check, Counterexample, Identity};
pub use poly::Poly;
pub use realize::{check_invariance, realize_dickson, realize_in_y, Group, YPoly};
