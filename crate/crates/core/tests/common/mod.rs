#![allow(dead_code)]

use foliated_tori::exact_linalg::{canonical_alternating, IntMatrix};
use foliated_tori::grassmannian::{period_from_plane, sample_chart};
use foliated_tori::numeric::{c, CMat, RMat};
use foliated_tori::torus::{AdaptedPeriodMatrix, EquivalenceWitness, PeriodMatrix, TorusMorphism, TorusShape};
use foliated_tori::Tolerances;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn shape(n: usize, k: usize) -> TorusShape {
    TorusShape::new(n, k).unwrap()
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Product of `steps` elementary column operations with multipliers ±1, plus
/// a random signed permutation.
pub fn random_unimodular(size: usize, steps: usize, rng: &mut impl Rng) -> IntMatrix {
    let mut q = IntMatrix::identity(size);
    if size == 1 {
        if rng.gen_bool(0.5) {
            q.negate_col(0);
        }
        return q;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..size);
        let mut j = rng.gen_range(0..size - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..4) {
            0 => q.swap_cols(i, j),
            1 => q.negate_col(i),
            _ => {
                let f = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
                q.add_col_multiple(i, j, &f);
            }
        }
    }
    q
}

/// Divisor chain `d₁ | d₂ | …` with small ratios.
pub fn random_divisors(n: usize, rng: &mut impl Rng) -> Vec<BigInt> {
    let mut d = Vec::with_capacity(n);
    let mut cur: i64 = rng.gen_range(1..=3);
    for _ in 0..n {
        d.push(BigInt::from(cur));
        cur *= rng.gen_range(1..=2);
    }
    d
}

/// `ᵗQ·E_c·Q` with planted divisors and entries bounded by `max_entry`.
pub fn planted_alternating(n: usize, k: usize, max_entry: i64, rng: &mut impl Rng) -> (IntMatrix, Vec<BigInt>) {
    let size = 2 * n + k;
    loop {
        let d = random_divisors(n, rng);
        let steps = rng.gen_range(1..=3 * size);
        let q = random_unimodular(size, steps, rng);
        let e = canonical_alternating(&d, k).congruence(&q);
        if e.max_abs() <= BigInt::from(max_entry) {
            return (e, d);
        }
    }
}

pub fn chart_period(shape: TorusShape, divisors: &[BigInt], seed: u64) -> AdaptedPeriodMatrix {
    let tol = Tolerances::default();
    let l = sample_chart(shape, divisors, seed, &tol).unwrap();
    period_from_plane(&l, &tol).unwrap()
}

/// `Ω′ = M·Ω·P` for a random `M = [[A, B], [0, C]]` and a random unimodular
/// `P`. Returns `Ω′` and the witness `(M, P⁻¹)` of `M·Ω = Ω′·P⁻¹`.
pub fn scramble(base: &PeriodMatrix, rng: &mut impl Rng) -> (PeriodMatrix, EquivalenceWitness) {
    let shape = base.shape();
    let (n, k) = (shape.n(), shape.k());
    let a = CMat::identity(n, n) + CMat::from_fn(n, n, |_, _| c(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)));
    let b = CMat::from_fn(n, k, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let cm = RMat::identity(k, k) * 2.0 + RMat::from_fn(k, k, |_, _| rng.gen_range(-0.5..0.5));
    let m = TorusMorphism::linear(a, b, cm).unwrap();
    let p = random_unimodular(shape.real_dim(), 2 * shape.real_dim(), rng);
    let omega2 = m.apply_to_period(base).mul_right_int(&p);
    let p_inv = p.inverse_unimodular().unwrap();
    (omega2, EquivalenceWitness { m, p: p_inv })
}

pub fn scrambled_period(base: &PeriodMatrix, rng: &mut impl Rng) -> PeriodMatrix {
    scramble(base, rng).0
}
