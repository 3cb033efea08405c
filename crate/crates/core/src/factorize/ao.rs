use super::Factorization;
use crate::bitcore::{bool_product, factor_error, observed_ones, BitVec, BoolMatrix};
use crate::boolls::{
    solve_exact_with_limit, solve_greedy_ls, Backend, BoolLsInstance, LocalSearchParams, SubsetCovers,
    DEFAULT_EXACT_RANK_LIMIT, FLAT_SWEEP_MAX_RANK,
};
use crate::error::{dim_err, param_err, BmfError, Result};
use crate::rng::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AoConfig {
    pub maxiter: usize,
    pub backend: Backend,
    /// Radius and round limits for the greedy backend; the seed is ignored
    /// and derived per subproblem from `seed`.
    pub local_search: LocalSearchParams,
    pub exact_rank_limit: usize,
    pub seed: u64,
}

impl Default for AoConfig {
    fn default() -> Self {
        AoConfig {
            maxiter: 100,
            backend: Backend::Exact,
            local_search: LocalSearchParams::default(),
            exact_rank_limit: DEFAULT_EXACT_RANK_LIMIT,
            seed: 0,
        }
    }
}

impl AoConfig {
    pub fn greedy() -> Self {
        AoConfig { backend: Backend::GreedyLs, ..Default::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Solves one BoolLS problem per row of `targets`, all sharing the atoms
/// given as rows of `atoms`. Returns the solutions as rows (`N x r`).
///
/// For the greedy backend, `incumbents[i]` lists fallback assignments for
/// row `i`; the solver result is kept unless one of them is strictly better.
pub(crate) fn solve_rows(
    atoms: &BoolMatrix,
    targets: &BoolMatrix,
    masks: &BoolMatrix,
    cfg: &AoConfig,
    stream: u64,
    incumbents: &[Vec<BitVec>],
) -> Result<BoolMatrix> {
    let r = atoms.rows();
    if cfg.backend == Backend::Exact && r > cfg.exact_rank_limit {
        return Err(BmfError::Capability(format!(
            "exact BoolLS with rank {r} exceeds the limit {}; use the greedy backend",
            cfg.exact_rank_limit
        )));
    }
    let mut out = BoolMatrix::zeros(targets.rows(), r);
    match cfg.backend {
        Backend::Exact if r <= FLAT_SWEEP_MAX_RANK => {
            let atom_words: Vec<&[u64]> = (0..r).map(|k| atoms.row_words(k)).collect();
            let table = SubsetCovers::new(&atom_words, atoms.words_per_row());
            for i in 0..targets.rows() {
                let (s, _) = table.solve(targets.row_words(i), masks.row_words(i));
                out.row_words_mut(i)[0] = s as u64;
            }
        }
        Backend::Exact => {
            for i in 0..targets.rows() {
                let (x, m) = (targets.row(i), masks.row(i));
                let inst = BoolLsInstance::from_atom_rows(atoms, &x, &m)?;
                out.set_row(i, &solve_exact_with_limit(&inst, cfg.exact_rank_limit)?.h);
            }
        }
        Backend::GreedyLs => {
            for i in 0..targets.rows() {
                let (x, m) = (targets.row(i), masks.row(i));
                let inst = BoolLsInstance::from_atom_rows(atoms, &x, &m)?;
                let params = LocalSearchParams { seed: derive_seed(derive_seed(cfg.seed, stream), i as u64), ..cfg.local_search };
                let mut best = solve_greedy_ls(&inst, &params);
                for cand in incumbents.get(i).into_iter().flatten() {
                    let e = inst.error_of(cand);
                    if e < best.error {
                        best = inst.evaluate(cand.clone());
                    }
                }
                out.set_row(i, &best.h);
            }
        }
    }
    Ok(out)
}

/// Replaces the all-zero rows of `h` with the rows of the residual
/// `R = M ⊙ X ⊙ ¬(W∘H)` that have the largest sums (ties to the smaller row
/// index). Returns the indices of the replaced rows.
pub fn reinit_zero_rows(x: &BoolMatrix, m: &BoolMatrix, w: &BoolMatrix, h: &mut BoolMatrix) -> Result<Vec<usize>> {
    let zero: Vec<usize> = (0..h.rows()).filter(|&k| h.row_count_ones(k) == 0).collect();
    if zero.is_empty() {
        return Ok(zero);
    }
    let cover = bool_product(w, h)?;
    let resid = x.and(m)?.and_not(&cover)?;
    let mut order: Vec<usize> = (0..resid.rows()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(resid.row_count_ones(i)), i));
    for (&k, &i) in zero.iter().zip(&order) {
        h.row_words_mut(k).copy_from_slice(resid.row_words(i));
    }
    Ok(zero)
}

fn check_shapes(x: &BoolMatrix, m: &BoolMatrix, w0: &BoolMatrix) -> Result<()> {
    if x.shape() != m.shape() {
        return dim_err(format!("X is {:?} but M is {:?}", x.shape(), m.shape()));
    }
    if w0.rows() != x.rows() {
        return dim_err(format!("W0 has {} rows, X has {}", w0.rows(), x.rows()));
    }
    if w0.cols() == 0 {
        return param_err("rank must be at least 1");
    }
    Ok(())
}

/// Alternating optimization from an initial `W0`.
///
/// Each sweep solves for `H` column by column, reseeds all-zero rows of `H`
/// from the residual, then solves for `W` row by row. The loop stops when a
/// sweep fails to strictly lower the error or after `maxiter` sweeps; the
/// last strictly improving iterate is returned.
pub fn ao_bmf(x: &BoolMatrix, m: &BoolMatrix, w0: &BoolMatrix, cfg: &AoConfig) -> Result<Factorization> {
    check_shapes(x, m, w0)?;
    if cfg.maxiter == 0 {
        return param_err("maxiter must be at least 1");
    }
    let (xt, mt) = (x.transpose(), m.transpose());
    let greedy = cfg.backend == Backend::GreedyLs;
    // e(0) = |M ⊙ X|, e(1) = e(0) - 1; signed so an empty X still runs a sweep.
    let mut prev = observed_ones(x, m)? as i64 - 1;
    let mut w = w0.clone();
    let mut h_prev: Option<BoolMatrix> = None;
    let mut trace = Vec::new();
    let mut best: Option<(BoolMatrix, BoolMatrix)> = None;

    for it in 0..cfg.maxiter {
        let h_inc: Vec<Vec<BitVec>> = match (&h_prev, greedy) {
            (Some(h), true) => (0..h.cols()).map(|j| vec![h.col(j)]).collect(),
            _ => Vec::new(),
        };
        let ht = solve_rows(&w.transpose(), &xt, &mt, cfg, 2 * it as u64, &h_inc)?;
        let mut h = ht.transpose();
        let reset = reinit_zero_rows(x, m, &w, &mut h)?;

        let w_inc: Vec<Vec<BitVec>> = if greedy {
            (0..w.rows())
                .map(|i| {
                    let row = w.row(i);
                    let mut cleared = row.clone();
                    reset.iter().for_each(|&k| cleared.set(k, false));
                    vec![row, cleared]
                })
                .collect()
        } else {
            Vec::new()
        };
        let w_new = solve_rows(&h, x, m, cfg, 2 * it as u64 + 1, &w_inc)?;
        let err = factor_error(x, m, &w_new, &h)?;
        trace.push(err);
        let improved = (err as i64) < prev;
        if improved || best.is_none() {
            best = Some((w_new.clone(), h.clone()));
        }
        w = w_new;
        h_prev = Some(h);
        if !improved {
            break;
        }
        prev = err as i64;
    }
    let (w, h) = best.expect("at least one sweep runs");
    let iterations = trace.len();
    Ok(Factorization { w, h, error_trace: trace, method: "ao".into(), seed: cfg.seed, iterations, runs: 1 })
}

/// The same loop started from an initial `H0` (solving for `W` first), run
/// as [`ao_bmf`] on the transposed problem.
pub fn ao_bmf_from_h(x: &BoolMatrix, m: &BoolMatrix, h0: &BoolMatrix, cfg: &AoConfig) -> Result<Factorization> {
    if h0.cols() != x.cols() {
        return dim_err(format!("H0 has {} columns, X has {}", h0.cols(), x.cols()));
    }
    let f = ao_bmf(&x.transpose(), &m.transpose(), &h0.transpose(), cfg)?;
    Ok(Factorization { w: f.h.transpose(), h: f.w.transpose(), ..f })
}
