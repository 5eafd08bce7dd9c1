//! Maximal-rank theory: the lightlike hypersurface `U^n` swept by the
//! tangent hyperspheres of a hypersurface `V^{n-1}` of conformal space, its
//! fundamental tensors, foci and their classification, and the invariant
//! normalization built from third-order data.

mod foci;
mod immersion;
mod normalization;
mod second_order;

pub use foci::{
    classify_foci, focal_manifold_sample, foci, FocalSample, Focus, FocusLabel, FocusSet, ROOT_CURVATURE_SIGN,
    TAU_CONIC, TAU_FOLD,
};
pub use immersion::{
    generator_line, hyperplane, hypersphere, lift_euclidean, lift_point, ConformalImmersion, EuclideanLift,
    LightlikePoint,
};
pub use normalization::{cross_ratio, invariants, normalization, screen_shift, Invariants, NormalizationData, TAU_DET};
pub use second_order::{
    first_order, fundamental_forms, lambda_at, lambda_form, second_order, FirstOrder, FundamentalForms, LambdaForm,
    SecondOrderData, TAU_APOLAR,
};
