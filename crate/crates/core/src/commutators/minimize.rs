//! Restricted commutators: the smallest ‖[M', N']‖_F over a declared family
//! of admissible implementations (M', N') of a pair of observables.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmat::ComplexMatrix;

use super::{locc_implementation, Which};

/// A parametrized set of implementation pairs. `implement` returns `None`
/// for parameters outside the admissible set (e.g. degenerate spectra).
pub trait ImplementationFamily {
    fn name(&self) -> &str;
    /// Closed box of the parameters; empty for a single fixed pair.
    fn bounds(&self) -> Vec<(f64, f64)>;
    /// Parameters range over the integers inside the box.
    fn discrete(&self) -> bool {
        false
    }
    fn implement(&self, params: &[f64]) -> Option<(ComplexMatrix, ComplexMatrix)>;
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Minimum {
    pub family: String,
    pub min_norm: f64,
    pub argmin: Vec<f64>,
    pub evaluations: usize,
    pub admissible: usize,
}

/// Exactly one implementation pair.
pub struct SingletonFamily {
    pub m: ComplexMatrix,
    pub n: ComplexMatrix,
}

impl ImplementationFamily for SingletonFamily {
    fn name(&self) -> &str {
        "singleton"
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        Vec::new()
    }

    fn implement(&self, _: &[f64]) -> Option<(ComplexMatrix, ComplexMatrix)> {
        Some((self.m.clone(), self.n.clone()))
    }
}

/// An explicit list of pairs, indexed by one discrete parameter.
pub struct FiniteFamily {
    pub name: String,
    pub pairs: Vec<(ComplexMatrix, ComplexMatrix)>,
}

impl ImplementationFamily for FiniteFamily {
    fn name(&self) -> &str {
        &self.name
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        vec![(0.0, self.pairs.len() as f64 - 1.0)]
    }

    fn discrete(&self) -> bool {
        true
    }

    fn implement(&self, params: &[f64]) -> Option<(ComplexMatrix, ComplexMatrix)> {
        let i = params[0].round();
        if i < 0.0 {
            return None;
        }
        self.pairs.get(i as usize).cloned()
    }
}

/// (σ_x⊗I + α_x I⊗σ_x, σ_z⊗I + α_z I⊗σ_z) with α_x, α_z ∈ [lo, hi];
/// pairs with a degenerate spectrum are inadmissible.
pub struct ParityPhaseFamily {
    pub lo: f64,
    pub hi: f64,
}

impl ImplementationFamily for ParityPhaseFamily {
    fn name(&self) -> &str {
        "parity-phase"
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        vec![(self.lo, self.hi), (self.lo, self.hi)]
    }

    fn implement(&self, params: &[f64]) -> Option<(ComplexMatrix, ComplexMatrix)> {
        let x = locc_implementation(Which::Phase, params[0]);
        let z = locc_implementation(Which::Parity, params[1]);
        (x.nondegenerate && z.nondegenerate).then_some((x.matrix, z.matrix))
    }
}

const GRID: usize = 41;
const DISCRETE_LIMIT: usize = 100_000;

fn norm_at(family: &dyn ImplementationFamily, p: &[f64]) -> Option<f64> {
    let (m, n) = family.implement(p)?;
    Some(m.commutator(&n).ok()?.frobenius_norm())
}

/// Grid search followed by compass refinement (or exhaustive enumeration for
/// discrete families).
pub fn restricted_commutator_min(family: &dyn ImplementationFamily) -> Result<Minimum> {
    let bounds = family.bounds();
    for &(lo, hi) in &bounds {
        if !(lo <= hi) {
            return Err(Error::InvalidArgument(format!("empty parameter range [{lo}, {hi}]")));
        }
    }
    let axes: Vec<Vec<f64>> = bounds
        .iter()
        .map(|&(lo, hi)| {
            if family.discrete() {
                (lo.ceil() as i64..=hi.floor() as i64).map(|v| v as f64).collect()
            } else if hi == lo {
                vec![lo]
            } else {
                (0..GRID).map(|i| lo + (hi - lo) * i as f64 / (GRID - 1) as f64).collect()
            }
        })
        .collect();
    let total: usize = axes.iter().map(Vec::len).product();
    if family.discrete() && total > DISCRETE_LIMIT {
        return Err(Error::InvalidArgument(format!("{total} discrete members is too many to enumerate")));
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut evaluations = 0;
    let mut admissible = 0;
    let mut point = vec![0.0; axes.len()];
    for flat in 0..total {
        let mut rest = flat;
        for (k, axis) in axes.iter().enumerate().rev() {
            point[k] = axis[rest % axis.len()];
            rest /= axis.len();
        }
        evaluations += 1;
        if let Some(v) = norm_at(family, &point) {
            admissible += 1;
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, point.clone()));
            }
        }
    }
    let (mut value, mut arg) = best.ok_or(Error::EmptyFamily)?;

    if !family.discrete() && !bounds.is_empty() {
        let mut steps: Vec<f64> = bounds.iter().map(|&(lo, hi)| (hi - lo) / (GRID - 1) as f64).collect();
        while steps.iter().any(|&s| s > 1e-12) {
            let mut improved = false;
            for k in 0..arg.len() {
                for dir in [-1.0, 1.0] {
                    let mut trial = arg.clone();
                    trial[k] = (trial[k] + dir * steps[k]).clamp(bounds[k].0, bounds[k].1);
                    evaluations += 1;
                    if let Some(v) = norm_at(family, &trial) {
                        admissible += 1;
                        if v < value {
                            value = v;
                            arg = trial;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                steps.iter_mut().for_each(|s| *s *= 0.5);
            }
        }
    }

    Ok(Minimum { family: family.name().to_string(), min_norm: value, argmin: arg, evaluations, admissible })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrendPoint {
    /// Lower end of the box for both α's.
    pub lower: f64,
    pub min_norm: f64,
}

/// Restricted parity/phase commutator over [lower, hi]² for each lower
/// bound; it decreases towards 4 as the box reaches 0, which is excluded.
pub fn parity_phase_infimum_trend(lowers: &[f64], hi: f64) -> Result<Vec<TrendPoint>> {
    lowers
        .iter()
        .map(|&lower| {
            let m = restricted_commutator_min(&ParityPhaseFamily { lo: lower, hi })?;
            Ok(TrendPoint { lower, min_norm: m.min_norm })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commutators::parity_phase_pair;
    use approx::assert_abs_diff_eq;

    #[test]
    fn singleton_global_pair_is_zero() {
        let (z, x) = parity_phase_pair();
        let m = restricted_commutator_min(&SingletonFamily { m: x, n: z }).unwrap();
        assert_eq!(m.min_norm, 0.0);
        assert_eq!(m.evaluations, 1);
    }

    #[test]
    fn parity_phase_box_minimum() {
        let m = restricted_commutator_min(&ParityPhaseFamily { lo: 0.1, hi: 10.0 }).unwrap();
        assert_abs_diff_eq!(m.min_norm, 4.0 * (1.0f64 + 1e-4).sqrt(), epsilon = 1e-9);
        assert!(m.min_norm >= 4.0);
    }

    #[test]
    fn fully_degenerate_box_is_empty() {
        let r = restricted_commutator_min(&ParityPhaseFamily { lo: 1.0, hi: 1.0 });
        assert_eq!(r, Err(Error::EmptyFamily));
    }

    #[test]
    fn trend_decreases() {
        let t = parity_phase_infimum_trend(&[0.5, 0.1, 0.01], 2.0).unwrap();
        assert!(t.windows(2).all(|w| w[1].min_norm < w[0].min_norm));
        assert!(t.iter().all(|p| p.min_norm > 4.0));
    }
}
