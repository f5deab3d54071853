//! Existence of an invertible member in an affine family `M0 + Σ t_i M_i`.
//!
//! A witness is always replayed through an exact determinant before it is returned.
//! Non-existence is only claimed after a deterministic route completes:
//!
//! * grid: over the rationals (or `F_p` with `p > n`) the determinant has degree at most
//!   `n` in each parameter, so vanishing on `{0,..,n}^k` forces the zero polynomial;
//! * exhaustive: every point of `F_p^k`;
//! * symbolic: fraction-free expansion of the determinant polynomial (reduced modulo
//!   `t^p - t` over `F_p`).
//!
//! When no route fits the budget the outcome is `Unknown`, carrying the Schwartz-Zippel
//! confidence of the random probes that were tried.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::Matrix;
use crate::par::{self, Strategy};
use crate::poly::symbolic_determinant;

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_SYMBOLIC_CAP: usize = 6;
/// Random probes over the rationals are drawn from `{0, .., PROBE_SAMPLE_SIZE - 1}`.
pub const PROBE_SAMPLE_SIZE: u64 = 1 << 16;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Maximum number of determinant evaluations.
    pub budget: u64,
    /// Largest parameter count handled by symbolic expansion.
    pub symbolic_cap: usize,
    pub seed: u64,
    /// Probes tried before any deterministic route: the all-ones point, then seeded
    /// random points. Zero skips probing entirely.
    pub probes: usize,
    pub strategy: Strategy,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            symbolic_cap: DEFAULT_SYMBOLIC_CAP,
            seed: 0,
            probes: 8,
            strategy: Strategy::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "route", rename_all = "kebab-case")]
pub enum FamilyRoute {
    /// No parameters: the single matrix was evaluated.
    Constant,
    Probe { index: usize },
    Grid { points: u64 },
    Exhaustive { points: u64 },
    Symbolic { terms: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum FamilyOutcome {
    Witness {
        #[serde(serialize_with = "crate::document::ser_scalars")]
        params: Vec<Scalar>,
        route: FamilyRoute,
        evaluations: u64,
    },
    NoneExists {
        route: FamilyRoute,
        evaluations: u64,
    },
    Unknown {
        confidence: f64,
        trials: usize,
        seed: u64,
        sample_size: u64,
    },
}

impl FamilyOutcome {
    pub fn witness(&self) -> Option<&[Scalar]> {
        match self {
            FamilyOutcome::Witness { params, .. } => Some(params),
            _ => None,
        }
    }
}

/// `base + Σ params[i] * family[i]`.
pub fn family_member(base: &Matrix, family: &[Matrix], params: &[Scalar]) -> Matrix {
    let mut m = base.clone();
    for (t, f) in params.iter().zip(family) {
        if !t.is_zero() {
            m = m.add(&f.scale(t));
        }
    }
    m
}

pub(crate) fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub(crate) fn mixed_radix_point(field: FieldSpec, mut index: u64, radix: u64, k: usize) -> Vec<Scalar> {
    let mut digits = vec![0u64; k];
    for d in digits.iter_mut().rev() {
        *d = index % radix;
        index /= radix;
    }
    digits.into_iter().map(|d| field.from_u64(d)).collect()
}

pub fn invertible_in_affine_family(
    base: &Matrix,
    family: &[Matrix],
    opts: &SearchOptions,
) -> Result<FamilyOutcome> {
    if !base.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "base matrix is {}x{}, expected square",
            base.rows(),
            base.cols()
        )));
    }
    let field = base.field();
    let n = base.rows();
    for (i, m) in family.iter().enumerate() {
        if m.shape() != base.shape() {
            return Err(Error::DimensionMismatch(format!(
                "family member {i} is {}x{}, expected {n}x{n}",
                m.rows(),
                m.cols()
            )));
        }
        if m.field() != field {
            return Err(Error::FieldMismatch(format!("family member {i}")));
        }
    }
    let k = family.len();
    let det_nonzero = |params: &[Scalar]| -> bool {
        !family_member(base, family, params)
            .determinant()
            .expect("square")
            .is_zero()
    };

    if k == 0 {
        return Ok(if det_nonzero(&[]) {
            FamilyOutcome::Witness { params: vec![], route: FamilyRoute::Constant, evaluations: 1 }
        } else {
            FamilyOutcome::NoneExists { route: FamilyRoute::Constant, evaluations: 1 }
        });
    }

    let sample_size = field.order().unwrap_or(PROBE_SAMPLE_SIZE);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut probes: Vec<Vec<Scalar>> = Vec::new();
    if opts.probes > 0 {
        probes.push(vec![field.one(); k]);
    }
    for _ in 1..opts.probes {
        probes.push((0..k).map(|_| field.sample(&mut rng, sample_size)).collect());
    }
    let probes_allowed = probes.len().min(opts.budget as usize);
    let probe_hit = par::find_first(opts.strategy, probes_allowed, |i| det_nonzero(&probes[i]));
    if let Some(index) = probe_hit {
        return Ok(FamilyOutcome::Witness {
            params: probes.swap_remove(index),
            route: FamilyRoute::Probe { index },
            evaluations: index as u64 + 1,
        });
    }
    let used = probes_allowed as u64;

    let grid = |radix: u64, points: u64, exhaustive: bool| -> FamilyOutcome {
        let route = if exhaustive {
            FamilyRoute::Exhaustive { points }
        } else {
            FamilyRoute::Grid { points }
        };
        match par::find_first(opts.strategy, points as usize, |i| {
            det_nonzero(&mixed_radix_point(field, i as u64, radix, k))
        }) {
            Some(i) => FamilyOutcome::Witness {
                params: mixed_radix_point(field, i as u64, radix, k),
                route,
                evaluations: used + i as u64 + 1,
            },
            None => FamilyOutcome::NoneExists { route, evaluations: used + points },
        }
    };

    let grid_points = checked_pow(n as u64 + 1, k).filter(|&p| p <= opts.budget);
    match field {
        FieldSpec::Prime(p) => {
            if let Some(points) = checked_pow(p, k).filter(|&q| q <= opts.budget) {
                return Ok(grid(p, points, true));
            }
            if p > n as u64 {
                if let Some(points) = grid_points {
                    return Ok(grid(n as u64 + 1, points, false));
                }
            }
        }
        FieldSpec::Rationals => {
            if let Some(points) = grid_points {
                return Ok(grid(n as u64 + 1, points, false));
            }
        }
    }

    if k <= opts.symbolic_cap {
        let det = symbolic_determinant(base, family).reduce_as_function();
        let terms = det.term_count();
        return Ok(match det.nonvanishing_point() {
            Some(params) => {
                if !det_nonzero(&params) {
                    return Err(Error::Inconsistent(
                        "symbolic witness failed exact replay".into(),
                    ));
                }
                FamilyOutcome::Witness {
                    params,
                    route: FamilyRoute::Symbolic { terms },
                    evaluations: used + 1,
                }
            }
            None => FamilyOutcome::NoneExists {
                route: FamilyRoute::Symbolic { terms: 0 },
                evaluations: used,
            },
        });
    }

    let random_trials = probes_allowed.saturating_sub(1);
    let miss = (n as f64 / sample_size as f64).min(1.0);
    Ok(FamilyOutcome::Unknown {
        confidence: 1.0 - miss.powi(random_trials as i32),
        trials: random_trials,
        seed: opts.seed,
        sample_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn scaled_identity_has_witness_at_one() {
        let out = invertible_in_affine_family(
            &Matrix::zeros(q(), 3, 3),
            &[Matrix::identity(q(), 3)],
            &SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(out.witness().unwrap(), &[q().one()]);
    }

    #[test]
    fn nilpotent_family_has_none() {
        let upper = Matrix::from_i64(q(), &[&[0, 1], &[0, 0]]);
        let out = invertible_in_affine_family(
            &Matrix::zeros(q(), 2, 2),
            &[upper],
            &SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(
            out,
            FamilyOutcome::NoneExists { route: FamilyRoute::Grid { points: 3 }, evaluations: 11 }
        );
    }

    #[test]
    fn grid_finds_t_equal_one() {
        // det([[t,0],[0,1]]) = t; the grid {0,1,2} first hits t = 1.
        let base = Matrix::from_i64(q(), &[&[0, 0], &[0, 1]]);
        let m1 = Matrix::from_i64(q(), &[&[1, 0], &[0, 0]]);
        let opts = SearchOptions { probes: 0, ..SearchOptions::default() };
        let out = invertible_in_affine_family(&base, &[m1], &opts).unwrap();
        assert_eq!(
            out,
            FamilyOutcome::Witness {
                params: vec![q().one()],
                route: FamilyRoute::Grid { points: 3 },
                evaluations: 2
            }
        );
    }

    #[test]
    fn grid_route_when_probe_misses() {
        // det([[t-1, 0],[0, 1]]) = t - 1: zero at the all-ones probe, grid hits t = 0.
        let base = Matrix::from_i64(q(), &[&[-1, 0], &[0, 1]]);
        let m1 = Matrix::from_i64(q(), &[&[1, 0], &[0, 0]]);
        let opts = SearchOptions { probes: 1, ..SearchOptions::default() };
        let out = invertible_in_affine_family(&base, &[m1], &opts).unwrap();
        match out {
            FamilyOutcome::Witness { params, route: FamilyRoute::Grid { points: 3 }, .. } => {
                assert_eq!(params, vec![q().zero()])
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn f2_polynomial_vanishing_as_function() {
        // det(diag(t, t+1)) = t(t+1) is nonzero but vanishes on all of F_2.
        let f2 = FieldSpec::prime(2).unwrap();
        let base = Matrix::from_i64(f2, &[&[0, 0], &[0, 1]]);
        let m1 = Matrix::from_i64(f2, &[&[1, 0], &[0, 1]]);
        let out = invertible_in_affine_family(&base, std::slice::from_ref(&m1), &SearchOptions::default())
            .unwrap();
        assert!(matches!(
            out,
            FamilyOutcome::NoneExists { route: FamilyRoute::Exhaustive { points: 2 }, .. }
        ));
        let opts = SearchOptions { budget: 1, probes: 0, ..SearchOptions::default() };
        let out = invertible_in_affine_family(&base, &[m1], &opts).unwrap();
        assert!(matches!(
            out,
            FamilyOutcome::NoneExists { route: FamilyRoute::Symbolic { .. }, .. }
        ));
    }

    #[test]
    fn symbolic_route_over_budget() {
        let upper = Matrix::from_i64(q(), &[&[0, 1], &[0, 0]]);
        let lower = Matrix::from_i64(q(), &[&[0, 0], &[1, 0]]);
        // det = -t1 t2, probes disabled and grid over budget
        let opts = SearchOptions { budget: 1, probes: 0, ..SearchOptions::default() };
        let out = invertible_in_affine_family(
            &Matrix::zeros(q(), 2, 2),
            &[upper.clone(), lower],
            &opts,
        )
        .unwrap();
        assert!(matches!(out, FamilyOutcome::Witness { route: FamilyRoute::Symbolic { .. }, .. }));
        let opts = SearchOptions { budget: 1, probes: 0, ..SearchOptions::default() };
        let out = invertible_in_affine_family(&Matrix::zeros(q(), 2, 2), &[upper], &opts).unwrap();
        assert!(matches!(
            out,
            FamilyOutcome::NoneExists { route: FamilyRoute::Symbolic { .. }, .. }
        ));
    }

    #[test]
    fn unknown_when_nothing_fits() {
        let upper = Matrix::from_i64(q(), &[&[0, 1], &[0, 0]]);
        let opts = SearchOptions { budget: 2, symbolic_cap: 0, probes: 4, ..SearchOptions::default() };
        let out = invertible_in_affine_family(&Matrix::zeros(q(), 2, 2), &[upper], &opts).unwrap();
        match out {
            FamilyOutcome::Unknown { confidence, trials, .. } => {
                // budget 2 allows the all-ones probe plus one random probe
                assert_eq!(trials, 1);
                let expected = 1.0 - 2.0 / PROBE_SAMPLE_SIZE as f64;
                assert!((confidence - expected).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shape_errors() {
        let opts = SearchOptions::default();
        assert!(invertible_in_affine_family(&Matrix::zeros(q(), 2, 3), &[], &opts).is_err());
        assert!(invertible_in_affine_family(
            &Matrix::zeros(q(), 2, 2),
            &[Matrix::zeros(q(), 3, 3)],
            &opts
        )
        .is_err());
    }
}
