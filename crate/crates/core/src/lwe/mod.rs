//! LWE sample batches, secrets and the distributions built from them.

mod batch;
mod extlwe;
mod format;
mod gen;
mod params;

pub use batch::{LweSample, SampleBatch, Transparent};
pub use extlwe::{gen_extlwe_challenge, gen_hybrid_extlwe, ExtLweChallenge, ExtLweParams, ExtLweTransparent, HintSet};
pub use format::{read_batch, read_challenge, write_batch, write_challenge};
pub use gen::{
    gen_first_errorless_batch, gen_first_errorless_uniform, gen_lwe_batch, gen_lwe_batch_beta, gen_secret,
    gen_uniform_batch, inner_mod_q, sample_noise,
};
pub use params::{LweParams, NoiseSpec, Secret, SecretSpec};
