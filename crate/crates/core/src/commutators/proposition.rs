//! Canonical form of commuting pairs of product qubit observables.
//!
//! If [A⊗B, C⊗D] = 0 with a⃗×c⃗ ≠ 0 and b⃗×d⃗ ≠ 0, all four observables are
//! traceless, a⃗ ⊥ c⃗, b⃗ ⊥ d⃗, and local unitaries bring the quadruple to
//! (σ_z, σ_z, σ_x, σ_x) up to scalar factors. The certifier checks each of
//! these facts numerically and exhibits the unitaries.

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ops::{sigma_x, sigma_z};
use crate::qmat::{ComplexMatrix, C64};
use crate::random::{haar_unitary, seeded};

use super::bloch::{cross, dot, norm, BlochObservable, ProductObservable};

pub const COMMUTE_TOL: f64 = 1e-10;
pub const CERTIFY_TOL: f64 = 1e-8;
/// Commutator norm at or below which a sampled quadruple counts as commuting.
pub const FALSE_COMMUTER_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub commutator_norm: f64,
    /// Scalar parts after normalizing each Bloch vector to unit length (A, B, C, D).
    pub normalized_scalars: [f64; 4],
    pub dot_ac: f64,
    pub dot_bd: f64,
    /// Maps a⃗ → ẑ and c⃗ → x̂.
    pub u1: ComplexMatrix,
    /// Maps b⃗ → ẑ and d⃗ → x̂.
    pub u2: ComplexMatrix,
    /// λ with U A U† = λ_A σ_z etc., ordered (A, B, C, D).
    pub scales: [f64; 4],
    /// max ‖U X U† − λ_X σ‖_F over the four observables.
    pub canonical_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Proposition1Outcome {
    Certified(Certificate),
    /// a⃗ ∥ c⃗ or b⃗ ∥ d⃗: the trivial branch, outside the statement.
    Degenerate { cross_ac: f64, cross_bd: f64 },
    /// Commuting, nontrivial, yet a canonical-form condition failed.
    Refuted { reason: String },
}

impl Proposition1Outcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Proposition1Outcome::Certified(c) => Some(c),
            _ => None,
        }
    }
}

pub fn product_commutator_norm(p: &ProductObservable, q: &ProductObservable) -> f64 {
    p.matrix().commutator(&q.matrix()).expect("4x4").frobenius_norm()
}

fn unit(v: &[f64; 3]) -> [f64; 3] {
    let n = norm(v);
    v.map(|x| x / n)
}

/// SU(2) element whose adjoint action rotates `z_dir` onto ẑ and `x_dir`
/// onto x̂. Both inputs must be unit length and orthogonal.
fn aligning_unitary(z_dir: &[f64; 3], x_dir: &[f64; 3]) -> DMatrix<C64> {
    // Gram-Schmidt against roundoff.
    let c = dot(x_dir, z_dir);
    let x = unit(&[x_dir[0] - c * z_dir[0], x_dir[1] - c * z_dir[1], x_dir[2] - c * z_dir[2]]);
    let y = cross(z_dir, &x);
    // Rows of R are the images' preimages: R v = (x·v, y·v, z·v).
    let r = [x, y, *z_dir];
    let (w, qx, qy, qz) = quaternion(&r);
    let [sx, sy, sz] = [sigma_x(), crate::ops::sigma_y(), sigma_z()];
    let i = C64::new(0.0, 1.0);
    let mut u = DMatrix::<C64>::identity(2, 2) * C64::new(w, 0.0);
    u -= (sx.data() * C64::new(qx, 0.0) + sy.data() * C64::new(qy, 0.0) + sz.data() * C64::new(qz, 0.0)) * i;
    u
}

/// Unit quaternion (w, x, y, z) of a proper rotation matrix given by rows.
fn quaternion(r: &[[f64; 3]; 3]) -> (f64, f64, f64, f64) {
    let tr = r[0][0] + r[1][1] + r[2][2];
    let (w, x, y, z) = if tr > 0.0 {
        let s = 2.0 * (tr + 1.0).sqrt();
        (0.25 * s, (r[2][1] - r[1][2]) / s, (r[0][2] - r[2][0]) / s, (r[1][0] - r[0][1]) / s)
    } else if r[0][0] > r[1][1] && r[0][0] > r[2][2] {
        let s = 2.0 * (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt();
        ((r[2][1] - r[1][2]) / s, 0.25 * s, (r[0][1] + r[1][0]) / s, (r[0][2] + r[2][0]) / s)
    } else if r[1][1] > r[2][2] {
        let s = 2.0 * (1.0 + r[1][1] - r[0][0] - r[2][2]).sqrt();
        ((r[0][2] - r[2][0]) / s, (r[0][1] + r[1][0]) / s, 0.25 * s, (r[1][2] + r[2][1]) / s)
    } else {
        let s = 2.0 * (1.0 + r[2][2] - r[0][0] - r[1][1]).sqrt();
        ((r[1][0] - r[0][1]) / s, (r[0][2] + r[2][0]) / s, (r[1][2] + r[2][1]) / s, 0.25 * s)
    };
    let n = (w * w + x * x + y * y + z * z).sqrt();
    (w / n, x / n, y / n, z / n)
}

/// Conjugates `obs` by `u` and measures it against `target`: returns the
/// best scale λ and ‖U·obs·U† − λ·target‖_F.
fn canonical_fit(obs: &BlochObservable, u: &DMatrix<C64>, target: &ComplexMatrix) -> (f64, f64) {
    let m = ComplexMatrix::plain(u * obs.matrix().data() * u.adjoint());
    let lambda = 0.5 * (&m * target).trace().re;
    let residual = (&m - &target.scale(C64::new(lambda, 0.0))).frobenius_norm();
    (lambda, residual)
}

/// Certifies the canonical form of a commuting pair `p = A⊗B`, `q = C⊗D`.
pub fn proposition1_certify(p: &ProductObservable, q: &ProductObservable) -> Result<Proposition1Outcome> {
    let comm = product_commutator_norm(p, q);
    let scale = (p.matrix().frobenius_norm() * q.matrix().frobenius_norm()).max(1.0);
    if comm > COMMUTE_TOL * scale {
        return Err(Error::Precondition(format!("observables do not commute (norm {comm:e})")));
    }
    let (a, b, c, d) = (p.left, p.right, q.left, q.right);
    let na = a.vec_norm().max(f64::MIN_POSITIVE);
    let nb = b.vec_norm().max(f64::MIN_POSITIVE);
    let nc = c.vec_norm().max(f64::MIN_POSITIVE);
    let nd = d.vec_norm().max(f64::MIN_POSITIVE);
    let cross_ac = norm(&cross(&a.vec, &c.vec)) / (na * nc);
    let cross_bd = norm(&cross(&b.vec, &d.vec)) / (nb * nd);
    if cross_ac <= CERTIFY_TOL || cross_bd <= CERTIFY_TOL {
        return Ok(Proposition1Outcome::Degenerate { cross_ac, cross_bd });
    }

    let normalized_scalars = [a.scalar / na, b.scalar / nb, c.scalar / nc, d.scalar / nd];
    let (ua, ub, uc, ud) = (unit(&a.vec), unit(&b.vec), unit(&c.vec), unit(&d.vec));
    let dot_ac = dot(&ua, &uc);
    let dot_bd = dot(&ub, &ud);
    if let Some(s) = normalized_scalars.iter().find(|s| s.abs() > CERTIFY_TOL) {
        return Ok(Proposition1Outcome::Refuted { reason: format!("scalar part {s:e} does not vanish") });
    }
    if dot_ac.abs() > CERTIFY_TOL || dot_bd.abs() > CERTIFY_TOL {
        return Ok(Proposition1Outcome::Refuted {
            reason: format!("Bloch vectors not orthogonal (a·c = {dot_ac:e}, b·d = {dot_bd:e})"),
        });
    }

    let u1 = aligning_unitary(&ua, &uc);
    let u2 = aligning_unitary(&ub, &ud);
    let (sz, sx) = (sigma_z(), sigma_x());
    let fits = [
        canonical_fit(&a, &u1, &sz),
        canonical_fit(&b, &u2, &sz),
        canonical_fit(&c, &u1, &sx),
        canonical_fit(&d, &u2, &sx),
    ];
    let canonical_residual = fits.iter().map(|f| f.1).fold(0.0, f64::max);
    let rel = canonical_residual / [na, nb, nc, nd].iter().copied().fold(1.0, f64::max);
    if rel > CERTIFY_TOL {
        return Ok(Proposition1Outcome::Refuted {
            reason: format!("local unitaries leave residual {canonical_residual:e}"),
        });
    }
    Ok(Proposition1Outcome::Certified(Certificate {
        commutator_norm: comm,
        normalized_scalars,
        dot_ac,
        dot_bd,
        u1: ComplexMatrix::new(u1, vec![2])?,
        u2: ComplexMatrix::new(u2, vec![2])?,
        scales: fits.map(|f| f.0),
        canonical_residual,
    }))
}

/// A canonical quadruple hidden behind random local unitaries and scalars.
#[derive(Clone, Debug)]
pub struct Dressing {
    pub v1: DMatrix<C64>,
    pub v2: DMatrix<C64>,
    /// Scalars on (A, B, C, D).
    pub scalars: [f64; 4],
}

impl Dressing {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut scalar = || {
            let mag: f64 = rng.random_range(0.5..2.0);
            if rng.random_bool(0.5) { mag } else { -mag }
        };
        let scalars = [scalar(), scalar(), scalar(), scalar()];
        Self { v1: haar_unitary(2, rng), v2: haar_unitary(2, rng), scalars }
    }

    /// (A⊗B, C⊗D) with A = s_A V₁†σ_zV₁, B = s_B V₂†σ_zV₂, C = s_C V₁†σ_xV₁,
    /// D = s_D V₂†σ_xV₂.
    pub fn quadruple(&self) -> (ProductObservable, ProductObservable) {
        let dress = |u: &DMatrix<C64>, obs: BlochObservable, s: f64| obs.conjugated(&u.adjoint()).scaled(s);
        let [sa, sb, sc, sd] = self.scalars;
        (
            ProductObservable::new(dress(&self.v1, BlochObservable::z(), sa), dress(&self.v2, BlochObservable::z(), sb)),
            ProductObservable::new(dress(&self.v1, BlochObservable::x(), sc), dress(&self.v2, BlochObservable::x(), sd)),
        )
    }

    /// Largest mismatch between a certificate and this dressing: recovered
    /// |λ| against |s|, and whether U·V† preserves σ_z and σ_x up to sign.
    pub fn mismatch(&self, cert: &Certificate) -> f64 {
        let mut worst = 0.0f64;
        for (l, s) in cert.scales.iter().zip(&self.scalars) {
            worst = worst.max((l.abs() - s.abs()).abs());
        }
        for (u, v) in [(&cert.u1, &self.v1), (&cert.u2, &self.v2)] {
            let w = u.data() * v.adjoint();
            for p in [sigma_z(), sigma_x()] {
                let image = ComplexMatrix::plain(&w * p.data() * w.adjoint());
                let plus = image.max_abs_diff(&p);
                let minus = image.max_abs_diff(&p.scale(C64::new(-1.0, 0.0)));
                worst = worst.max(plus.min(minus));
            }
        }
        worst
    }
}

fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> BlochObservable {
    let mut g = || -> f64 { rng.sample(rand_distr::StandardNormal) };
    BlochObservable::new(g(), [g(), g(), g()])
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GenericStats {
    pub tested: usize,
    /// Quadruples with commutator norm ≤ 1e-8.
    pub false_commuters: usize,
    /// Quadruples the certifier rejected as non-commuting.
    pub rejected: usize,
    pub min_norm: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DressedStats {
    pub tested: usize,
    pub certified: usize,
    pub max_canonical_residual: f64,
    pub max_dressing_mismatch: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub seed: u64,
    pub generic: GenericStats,
    pub dressed: DressedStats,
    /// Commuting quadruples on the a⃗ ∥ c⃗ branch, excluded from certification.
    pub degenerate_excluded: usize,
}

/// Seeded corroboration run: `generic` random quadruples must never
/// commute, and `dressed` canonical quadruples must all certify.
pub fn proposition1_search(generic: usize, dressed: usize, seed: u64) -> Result<SearchReport> {
    if generic + dressed == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let mut rng = seeded(seed);

    let mut g = GenericStats { min_norm: f64::INFINITY, ..Default::default() };
    for _ in 0..generic {
        let p = ProductObservable::new(random_bloch(&mut rng), random_bloch(&mut rng));
        let q = ProductObservable::new(random_bloch(&mut rng), random_bloch(&mut rng));
        let n = product_commutator_norm(&p, &q);
        g.tested += 1;
        g.min_norm = g.min_norm.min(n);
        if n <= FALSE_COMMUTER_TOL {
            g.false_commuters += 1;
        }
        if matches!(proposition1_certify(&p, &q), Err(Error::Precondition(_))) {
            g.rejected += 1;
        }
    }

    let mut d = DressedStats::default();
    for _ in 0..dressed {
        let dressing = Dressing::sample(&mut rng);
        let (p, q) = dressing.quadruple();
        d.tested += 1;
        if let Ok(Proposition1Outcome::Certified(cert)) = proposition1_certify(&p, &q) {
            d.certified += 1;
            d.max_canonical_residual = d.max_canonical_residual.max(cert.canonical_residual);
            d.max_dressing_mismatch = d.max_dressing_mismatch.max(dressing.mismatch(&cert));
        }
    }

    // Parallel Bloch vectors on both sides commute trivially.
    let mut degenerate = 0;
    for _ in 0..(dressed / 100).max(1) {
        let a = random_bloch(&mut rng);
        let b = random_bloch(&mut rng);
        let s: f64 = rng.random_range(0.5..2.0);
        let t: f64 = rng.random_range(0.5..2.0);
        let p = ProductObservable::new(BlochObservable::new(0.0, a.vec), BlochObservable::new(0.0, b.vec));
        let q = ProductObservable::new(
            BlochObservable::new(0.0, a.vec.map(|x| s * x)),
            BlochObservable::new(0.0, b.vec.map(|x| t * x)),
        );
        if matches!(proposition1_certify(&p, &q), Ok(Proposition1Outcome::Degenerate { .. })) {
            degenerate += 1;
        }
    }

    Ok(SearchReport { seed, generic: g, dressed: d, degenerate_excluded: degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_quadruple_certifies_with_identity() {
        let p = ProductObservable::new(BlochObservable::z(), BlochObservable::z());
        let q = ProductObservable::new(BlochObservable::x(), BlochObservable::x());
        let out = proposition1_certify(&p, &q).unwrap();
        let cert = out.certificate().expect("certified");
        let id = ComplexMatrix::identity(&[2]);
        assert!(cert.u1.max_abs_diff(&id) < 1e-12);
        assert!(cert.u2.max_abs_diff(&id) < 1e-12);
        assert_eq!(cert.scales, [1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn shifted_observable_violates_precondition() {
        let p = ProductObservable::new(BlochObservable::new(0.3, [0.0, 0.0, 1.0]), BlochObservable::z());
        let q = ProductObservable::new(BlochObservable::x(), BlochObservable::x());
        assert!(product_commutator_norm(&p, &q) > 0.1);
        assert!(matches!(proposition1_certify(&p, &q), Err(Error::Precondition(_))));
    }

    #[test]
    fn parallel_vectors_are_degenerate() {
        let p = ProductObservable::new(BlochObservable::z(), BlochObservable::x());
        let q = ProductObservable::new(BlochObservable::z().scaled(2.0), BlochObservable::x());
        assert!(matches!(proposition1_certify(&p, &q), Ok(Proposition1Outcome::Degenerate { .. })));
    }

    #[test]
    fn dressed_quadruples_round_trip() {
        let mut rng = seeded(5);
        for _ in 0..50 {
            let dressing = Dressing::sample(&mut rng);
            let (p, q) = dressing.quadruple();
            let out = proposition1_certify(&p, &q).unwrap();
            let cert = out.certificate().expect("certified");
            assert!(dressing.mismatch(cert) < 1e-8, "{}", dressing.mismatch(cert));
        }
    }

    #[test]
    fn quaternion_handles_half_turns() {
        // a = -z, c = x: a π rotation about x̂.
        let u = aligning_unitary(&[0.0, 0.0, -1.0], &[1.0, 0.0, 0.0]);
        let image = ComplexMatrix::plain(&u * sigma_z().data() * u.adjoint());
        assert!(image.max_abs_diff(&sigma_z().scale(C64::new(-1.0, 0.0))) < 1e-12);
    }
}
