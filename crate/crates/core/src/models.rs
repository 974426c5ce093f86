//! Correlated random matrix pairs with a planted vertex correspondence.
//!
//! Two generators are provided: the correlated Erdős–Rényi model (a parent
//! graph subsampled twice, expressed through the equivalent conditional
//! construction `A ~ G(n,p)`, `B′ | A`) and a correlated Gaussian Wigner
//! pair. In both, `a_ij` is paired with `b_{π(i)π(j)}`, i.e. vertex `i` of
//! `A` corresponds to vertex `π(i)` of `B`.
//!
//! Randomness is drawn from ChaCha streams keyed by `(seed, purpose, row)`,
//! so each row of each matrix is an independent stream and the output does
//! not depend on generation order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymMatrix};

/// A bijection on `{0, …, n−1}`; `targets[i] = π(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    targets: Vec<usize>,
}

impl Permutation {
    pub fn new(targets: Vec<usize>) -> Result<Self> {
        let n = targets.len();
        let mut seen = vec![false; n];
        for &t in &targets {
            if t >= n || seen[t] {
                return Err(Error::ParamError(format!(
                    "targets are not a bijection on 0..{n}"
                )));
            }
            seen[t] = true;
        }
        Ok(Self { targets })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            targets: (0..n).collect(),
        }
    }

    /// Uniformly random permutation drawn from `rng`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut targets: Vec<usize> = (0..n).collect();
        targets.shuffle(rng);
        Self { targets }
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.targets[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &t) in self.targets.iter().enumerate() {
            inv[t] = i;
        }
        Self { targets: inv }
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            targets: other.targets.iter().map(|&j| self.targets[j]).collect(),
        }
    }
}

/// How the planted permutation is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TruthMode {
    Identity,
    #[default]
    Random,
}

impl std::str::FromStr for TruthMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Self::Identity),
            "random" => Ok(Self::Random),
            other => Err(Error::ParamError(format!("unknown truth mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    ErdosRenyi,
    Gaussian,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ErdosRenyi => "erdos_renyi",
            Self::Gaussian => "gaussian",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "erdos_renyi" => Ok(Self::ErdosRenyi),
            "gaussian" => Ok(Self::Gaussian),
            other => Err(Error::ParamError(format!("unknown model `{other}`"))),
        }
    }
}

/// Noise level and sparsity of a correlated Erdős–Rényi pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    /// `√((1−s)/(1−p))`, the empirical correlation deficit.
    pub sigma_emp: f64,
    /// `√max(σ_emp², (ln n)⁷/d)`, the level the universality bound is stated at.
    pub sigma_thm: f64,
    /// `n·p·(1−p)`.
    pub d: f64,
}

/// A generated instance `(A, B, π*)` with its model metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatedPair {
    pub a: SymMatrix,
    pub b: SymMatrix,
    pub truth: Permutation,
    pub model: ModelKind,
    pub n: usize,
    pub p: Option<f64>,
    pub s: Option<f64>,
    pub sigma_emp: f64,
    pub sigma_thm: f64,
    pub d: f64,
    pub seed: u64,
}

impl CorrelatedPair {
    /// `B` relabeled onto the vertex set of `A`: entry `(i, j)` is
    /// `b_{π(i)π(j)}`.
    pub fn aligned_b(&self) -> SymMatrix {
        permute_conjugate(&self.b, &self.truth).expect("pair dimensions agree")
    }
}

pub fn noise_params(n: usize, p: f64, s: f64) -> NoiseParams {
    let n_f = n as f64;
    let d = n_f * p * (1.0 - p);
    let sigma_emp_sq = ((1.0 - s) / (1.0 - p)).max(0.0);
    let sparse_term = n_f.ln().powi(7) / d;
    NoiseParams {
        sigma_emp: sigma_emp_sq.sqrt(),
        sigma_thm: sigma_emp_sq.max(sparse_term).sqrt(),
        d,
    }
}

/// Centers and rescales a 0/1 adjacency matrix:
/// `a_ij = (raw_ij − p)/√(n·p·(1−p))` off the diagonal, zero on it.
pub fn center_scale(raw: &SymMatrix, p: f64) -> Result<SymMatrix> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ModelParamError(format!(
            "p = {p} must lie in (0, 1)"
        )));
    }
    let n = raw.n();
    for i in 0..n {
        if raw[(i, i)] != 0.0 {
            return Err(Error::InvalidMatrix(format!("nonzero diagonal at {i}")));
        }
        for j in (i + 1)..n {
            let x = raw[(i, j)];
            if x != 0.0 && x != 1.0 {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({i},{j}) = {x} is not 0 or 1"
                )));
            }
        }
    }
    let inv = 1.0 / (n as f64 * p * (1.0 - p)).sqrt();
    SymMatrix::from_upper(n, |i, j| if i == j { 0.0 } else { (raw[(i, j)] - p) * inv })
}

/// `result[i][j] = m[perm(i)][perm(j)]`.
pub fn permute_conjugate(m: &SymMatrix, perm: &Permutation) -> Result<SymMatrix> {
    let n = m.n();
    if perm.len() != n {
        return Err(Error::DimensionError {
            expected: n,
            found: perm.len(),
        });
    }
    SymMatrix::from_upper(n, |i, j| m[(perm.apply(i), perm.apply(j))])
}

const STREAM_A: u64 = 0;
const STREAM_B: u64 = 1;
const STREAM_TRUTH: u64 = 2;
const STREAM_NOISE: u64 = 3;

fn stream(seed: u64, purpose: u64, row: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((purpose << 40) | row as u64);
    rng
}

fn draw_truth(n: usize, seed: u64, mode: TruthMode) -> Permutation {
    match mode {
        TruthMode::Identity => Permutation::identity(n),
        TruthMode::Random => Permutation::random(n, &mut stream(seed, STREAM_TRUTH, 0)),
    }
}

/// Correlated Erdős–Rényi pair with marginal edge density `p` and retention
/// probability `s`.
pub fn gen_er_pair(
    n: usize,
    p: f64,
    s: f64,
    seed: u64,
    truth_mode: TruthMode,
) -> Result<CorrelatedPair> {
    if n < 2 {
        return Err(Error::ModelParamError(format!(
            "n = {n} must be at least 2"
        )));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ModelParamError(format!(
            "p = {p} must lie in (0, 1)"
        )));
    }
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::ModelParamError(format!(
            "s = {s} must lie in (0, 1]"
        )));
    }
    let q_fill = p * (1.0 - s) / (1.0 - p);
    if q_fill > 1.0 {
        return Err(Error::ModelParamError(format!(
            "p(1-s)/(1-p) = {q_fill} exceeds 1"
        )));
    }

    let mut raw_a = Matrix::zeros(n, n);
    let mut raw_b = Matrix::zeros(n, n);
    for i in 0..n {
        let mut rng_a = stream(seed, STREAM_A, i);
        let mut rng_b = stream(seed, STREAM_B, i);
        for j in (i + 1)..n {
            let edge_a = rng_a.random::<f64>() < p;
            let u: f64 = rng_b.random();
            let edge_b = if edge_a { u < s } else { u < q_fill };
            let (xa, xb) = (f64::from(edge_a as u8), f64::from(edge_b as u8));
            raw_a[(i, j)] = xa;
            raw_a[(j, i)] = xa;
            raw_b[(i, j)] = xb;
            raw_b[(j, i)] = xb;
        }
    }
    let truth = draw_truth(n, seed, truth_mode);
    let a = center_scale(&SymMatrix::new(raw_a)?, p)?;
    let b_aligned = center_scale(&SymMatrix::new(raw_b)?, p)?;
    let b = permute_conjugate(&b_aligned, &truth.inverse())?;
    let noise = noise_params(n, p, s);
    Ok(CorrelatedPair {
        a,
        b,
        truth,
        model: ModelKind::ErdosRenyi,
        n,
        p: Some(p),
        s: Some(s),
        sigma_emp: noise.sigma_emp,
        sigma_thm: noise.sigma_thm,
        d: noise.d,
        seed,
    })
}

/// Correlated Gaussian Wigner pair: `a_ij ~ N(0, 1/n)` for `i ≤ j` and
/// `b_{π(i)π(j)} = (a_ij + σ z_ij)/√(1+σ²)` with independent `z_ij ~ N(0, 1/n)`.
pub fn gen_gaussian_pair(
    n: usize,
    sigma: f64,
    seed: u64,
    truth_mode: TruthMode,
) -> Result<CorrelatedPair> {
    if n < 2 {
        return Err(Error::ModelParamError(format!(
            "n = {n} must be at least 2"
        )));
    }
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::ModelParamError(format!(
            "sigma = {sigma} must lie in [0, 1]"
        )));
    }
    let sd = 1.0 / (n as f64).sqrt();
    let norm = 1.0 / (1.0 + sigma * sigma).sqrt();
    let mut a = Matrix::zeros(n, n);
    let mut b_aligned = Matrix::zeros(n, n);
    for i in 0..n {
        let mut rng_a = stream(seed, STREAM_A, i);
        let mut rng_z = stream(seed, STREAM_NOISE, i);
        for j in i..n {
            let x: f64 = rng_a.sample::<f64, _>(StandardNormal) * sd;
            let z: f64 = rng_z.sample::<f64, _>(StandardNormal) * sd;
            let y = if sigma == 0.0 {
                x
            } else {
                (x + sigma * z) * norm
            };
            a[(i, j)] = x;
            a[(j, i)] = x;
            b_aligned[(i, j)] = y;
            b_aligned[(j, i)] = y;
        }
    }
    let truth = draw_truth(n, seed, truth_mode);
    let a = SymMatrix::new(a)?;
    let b = permute_conjugate(&SymMatrix::new(b_aligned)?, &truth.inverse())?;
    Ok(CorrelatedPair {
        a,
        b,
        truth,
        model: ModelKind::Gaussian,
        n,
        p: None,
        s: None,
        sigma_emp: sigma,
        sigma_thm: sigma,
        d: n as f64,
        seed,
    })
}
