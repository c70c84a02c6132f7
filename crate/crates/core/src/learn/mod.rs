//! Learning from one ground state: orbit datasets, random Fourier
//! features, LASSO models per orbit class and equivariant prediction.

pub mod dataset;
pub mod features;
pub mod lasso;
pub mod model;
pub mod patch;

pub use dataset::{build_dataset, term_classes, OrbitDataset, TargetSource, TermClass};
pub use features::{rff_features, FeatureMap};
pub use lasso::{lasso_fit, soft_threshold, LassoFit, LassoOptions};
pub use model::{
    build_datasets, log_grid, predict_observable, predict_observable_counted, predict_term,
    train_models, train_orbit_model, LearnerConfig, ModelBundle, OrbitModel,
};
pub use patch::{build_patch_layout, PatchLayout};

/// SplitMix64 step, used to derive independent sub-seeds from a master
/// seed.
pub fn derive_seed(master: u64, salt: u64) -> u64 {
    let mut z = master ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a over bytes; stable across runs and platforms.
pub fn stable_hash(bytes: impl AsRef<[u8]>) -> u64 {
    bytes.as_ref().iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}
