use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Clause, CnfFormula, Literal};
use crate::error::{Error, Result};

/// Identifier of the generator behind every seeded draw in this crate.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64)";

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random k-SAT: `m` independent clauses, each over `k` distinct
/// variables drawn uniformly without replacement, each polarity a fair coin.
/// Duplicate clauses across the formula are allowed.
pub fn generate_random_ksat(n: usize, m: usize, k: usize, seed: u64) -> Result<CnfFormula> {
    if k < 1 || k > n {
        return Err(Error::InvalidEnsemble(format!(
            "clause width k = {k} must satisfy 1 <= k <= n = {n}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut clauses = Vec::with_capacity(m);
    let mut vars = Vec::with_capacity(k);
    for _ in 0..m {
        vars.clear();
        while vars.len() < k {
            let v = rng.gen_range(0..n);
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let literals = vars
            .iter()
            .map(|&variable| Literal {
                variable,
                negated: rng.gen::<bool>(),
            })
            .collect();
        clauses.push(Clause { literals });
    }
    CnfFormula::new(n, k, clauses)
}
