//! Canonical test states and seeded random-state generators.
//!
//! The composite ket |ij> uses the pair index i * d2 + j throughout, so the
//! tiles kets and the swap operator are unambiguous. Random sampling is
//! backed by ChaCha8 (see [`RNG_ALGORITHM`]) and is deterministic per seed.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg::{
    kron, BipartiteState, ComplexMatrix, DensityMatrix, LinalgError, SeparableEnsemble,
};

/// Algorithm identifier of the seeded generator behind all sampling.
pub const RNG_ALGORITHM: &str = "chacha8";

#[derive(Debug, Error)]
pub enum StatesError {
    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("dimension must be at least 2, got {dim}")]
    DimensionTooSmall { dim: usize },
    #[error("separable mixture needs at least 1 term")]
    NoTerms,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The five unextendible-product-basis kets of the 3x3 tiles construction.
fn tiles_kets() -> [Vec<Complex64>; 5] {
    let s = 1.0 / 2f64.sqrt();
    let t = 1.0 / 3.0;
    let ket = |a: [f64; 3], b: [f64; 3]| -> Vec<Complex64> {
        let mut v = vec![Complex64::ZERO; 9];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                v[i * 3 + j] = c(ai * bj);
            }
        }
        v
    };
    [
        ket([1.0, 0.0, 0.0], [s, -s, 0.0]),
        ket([s, -s, 0.0], [0.0, 0.0, 1.0]),
        ket([0.0, 0.0, 1.0], [0.0, s, -s]),
        ket([0.0, s, -s], [1.0, 0.0, 0.0]),
        ket([t, t, t], [1.0, 1.0, 1.0]),
    ]
}

/// The 3x3 bound-entangled state rho = (I_9 - sum_i |eta_i><eta_i|) / 4
/// built on the tiles unextendible product basis. Rank 4, positive partial
/// transpose, yet entangled.
pub fn bennett_tiles() -> BipartiteState {
    let mut m = ComplexMatrix::identity(9);
    for ketv in tiles_kets() {
        m = &m - &ComplexMatrix::outer(&ketv);
    }
    let state = DensityMatrix::new(m.scaled_re(0.25)).expect("tiles state is a valid state");
    BipartiteState::new(3, 3, state).expect("tiles state is 3x3")
}

/// Mixes a state with white noise: (1 - p) I / (d1 d2) + p s.
pub fn with_white_noise(s: &BipartiteState, p: f64) -> Result<BipartiteState, StatesError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(StatesError::ParamOutOfRange {
            name: "p",
            value: p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let n = s.d1() * s.d2();
    let noise = ComplexMatrix::identity(n).scaled_re((1.0 - p) / n as f64);
    let mixed = &noise + &s.matrix().scaled_re(p);
    // Convex mixture of two states; valid by algebra.
    Ok(BipartiteState::new(
        s.d1(),
        s.d2(),
        DensityMatrix::new_unchecked(mixed),
    )?)
}

/// The flip (swap) operator sum_{ij} |ij><ji| on C^d (x) C^d.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m.set(i * d + j, j * d + i, Complex64::ONE);
        }
    }
    m
}

/// Werner state eta_r = ((d - r) I + (d r - 1) sigma) / (d^3 - d) with
/// sigma the swap operator; satisfies Tr(sigma eta_r) = r.
pub fn werner(d: usize, r: f64) -> Result<BipartiteState, StatesError> {
    if d < 2 {
        return Err(StatesError::DimensionTooSmall { dim: d });
    }
    if !(-1.0..=1.0).contains(&r) {
        return Err(StatesError::ParamOutOfRange {
            name: "r",
            value: r,
            lo: -1.0,
            hi: 1.0,
        });
    }
    let df = d as f64;
    let denom = df * df * df - df;
    let m = &ComplexMatrix::identity(d * d).scaled_re((df - r) / denom)
        + &swap_operator(d).scaled_re((df * r - 1.0) / denom);
    let state = DensityMatrix::new(m)?;
    Ok(BipartiteState::new(d, d, state)?)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect()
}

fn normalized(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

fn pure_from(rng: &mut ChaCha8Rng, d: usize) -> DensityMatrix {
    let v = normalized(random_complex_vector(d, rng));
    DensityMatrix::new_unchecked(ComplexMatrix::outer(&v))
}

/// Haar-like random pure state |psi><psi| on C^d.
pub fn sample_pure(d: usize, seed: u64) -> DensityMatrix {
    pure_from(&mut rng_for(seed), d)
}

/// Random full-rank density matrix A A^H / Tr(A A^H) with Gaussian A.
pub fn sample_density(d: usize, seed: u64) -> DensityMatrix {
    let mut rng = rng_for(seed);
    let a = ComplexMatrix::from_vec(d, d, random_complex_vector(d * d, &mut rng));
    let g = &a * &a.adjoint();
    let tr = g.trace().re;
    DensityMatrix::new_unchecked(g.scaled_re(1.0 / tr))
}

/// Random pure product state on C^{d1} (x) C^{d2}.
pub fn sample_product_pure(d1: usize, d2: usize, seed: u64) -> BipartiteState {
    let mut rng = rng_for(seed);
    let a = pure_from(&mut rng, d1);
    let b = pure_from(&mut rng, d2);
    let state = DensityMatrix::new_unchecked(kron(a.matrix(), b.matrix()));
    BipartiteState::new(d1, d2, state).expect("product dimensions consistent")
}

/// Random convex mixture of `terms` pure product states. Returns the mixed
/// state together with its explicit decomposition for identity tests.
pub fn sample_separable_mixture(
    d1: usize,
    d2: usize,
    terms: usize,
    seed: u64,
) -> Result<(BipartiteState, SeparableEnsemble), StatesError> {
    if terms == 0 {
        return Err(StatesError::NoTerms);
    }
    let mut rng = rng_for(seed);
    let raw: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let factors_a: Vec<DensityMatrix> = (0..terms).map(|_| pure_from(&mut rng, d1)).collect();
    let factors_b: Vec<DensityMatrix> = (0..terms).map(|_| pure_from(&mut rng, d2)).collect();
    let ensemble = SeparableEnsemble::new(weights, factors_a, factors_b)?;
    let state = ensemble.mix();
    Ok((state, ensemble))
}

/// One-parameter state family usable in threshold scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateFamily {
    /// Tiles state mixed with white noise, parameterized by p in [0, 1].
    NoisyTiles,
    /// Werner family on C^d (x) C^d, parameterized by r in [-1, 1].
    Werner { d: usize },
}

impl StateFamily {
    pub fn id(&self) -> &'static str {
        match self {
            StateFamily::NoisyTiles => "noisy_tiles",
            StateFamily::Werner { .. } => "werner",
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            StateFamily::NoisyTiles => (3, 3),
            StateFamily::Werner { d } => (*d, *d),
        }
    }

    /// Closed parameter domain of the family.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            StateFamily::NoisyTiles => (0.0, 1.0),
            StateFamily::Werner { .. } => (-1.0, 1.0),
        }
    }

    pub fn evaluate(&self, param: f64) -> Result<BipartiteState, StatesError> {
        match self {
            StateFamily::NoisyTiles => with_white_noise(&bennett_tiles(), param),
            StateFamily::Werner { d } => werner(*d, param),
        }
    }
}
