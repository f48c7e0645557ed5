//! Riemannian data on a single global chart: metric, Levi-Civita
//! connection, gradients and geodesics.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linalg::{self, Matrix, Vector};

/// Region of removed points: those where `distance(p) < radius`.
#[derive(Debug, Clone)]
pub struct ExclusionTube {
    pub distance: Expr,
    pub radius: f64,
}

#[derive(Debug, Clone)]
pub struct SamplingDomain {
    pub bounds: Vec<(f64, f64)>,
    pub exclusions: Vec<ExclusionTube>,
}

impl SamplingDomain {
    pub fn unbounded(dim: usize) -> Self {
        SamplingDomain {
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); dim],
            exclusions: Vec::new(),
        }
    }

    pub fn boxed(bounds: Vec<(f64, f64)>) -> Self {
        SamplingDomain {
            bounds,
            exclusions: Vec::new(),
        }
    }

    pub fn with_exclusion(mut self, distance: Expr, radius: f64) -> Self {
        self.exclusions.push(ExclusionTube { distance, radius });
        self
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        if p.len() != self.bounds.len() {
            return false;
        }
        let inside = p
            .iter()
            .zip(&self.bounds)
            .all(|(x, (lo, hi))| *x >= *lo && *x <= *hi);
        inside
            && self.exclusions.iter().all(|t| match t.distance.eval(p) {
                Ok(d) => d >= t.radius,
                Err(_) => false,
            })
    }

    pub fn require(&self, p: &[f64]) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutsideDomain { point: p.to_vec() })
        }
    }

    /// `count` seeded uniform points from the box, with excluded tubes rejected.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<Vector>> {
        if self.bounds.iter().any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo <= hi)) {
            return Err(Error::InvalidArgument(
                "sampling requires finite coordinate bounds".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0usize;
        while out.len() < count {
            attempts += 1;
            if attempts > 1000 * count.max(1) {
                return Err(Error::SamplingExhausted { requested: count });
            }
            let p: Vec<f64> = self
                .bounds
                .iter()
                .map(|(lo, hi)| if lo == hi { *lo } else { rng.gen_range(*lo..*hi) })
                .collect();
            if self.contains(&p) {
                out.push(Vector::from_vec(p));
            }
        }
        Ok(out)
    }
}

/// Manifold given by a metric on one chart.
#[derive(Debug, Clone)]
pub struct ManifoldSpec {
    dim: usize,
    metric: Vec<Expr>,
    /// `metric_partials[(i * dim + j) * dim + k] = d g_ij / d x_k`
    metric_partials: Vec<Expr>,
    pub domain: SamplingDomain,
}

/// Metric, inverse metric and Christoffel symbols evaluated at one point.
#[derive(Debug, Clone)]
pub struct LocalGeometry {
    pub point: Vector,
    pub g: Matrix,
    pub g_inv: Matrix,
    pub christoffel: Christoffel,
}

/// Christoffel symbols of the second kind, `get(k, i, j) = Γ^k_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.dim + i) * self.dim + j]
    }

    /// `Γ(u, v)^k = Γ^k_ij u^i v^j`.
    pub fn contract(&self, u: &Vector, v: &Vector) -> Vector {
        let m = self.dim;
        Vector::from_fn(m, |k, _| {
            let mut acc = 0.0;
            for i in 0..m {
                if u[i] == 0.0 {
                    continue;
                }
                for j in 0..m {
                    acc += self.get(k, i, j) * u[i] * v[j];
                }
            }
            acc
        })
    }

    pub fn max_asymmetry(&self) -> f64 {
        let m = self.dim;
        let mut worst = 0.0f64;
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    worst = worst.max((self.get(k, i, j) - self.get(k, j, i)).abs());
                }
            }
        }
        worst
    }
}

impl LocalGeometry {
    pub fn inner(&self, u: &Vector, v: &Vector) -> f64 {
        linalg::inner(&self.g, u, v)
    }

    pub fn norm(&self, v: &Vector) -> f64 {
        linalg::norm(&self.g, v)
    }

    /// Covariant derivative `∇_u Y` given the ordinary directional derivative
    /// `du_y = D_u Y` and the value `y = Y(p)`.
    pub fn covariant(&self, u: &Vector, du_y: &Vector, y: &Vector) -> Vector {
        du_y + self.christoffel.contract(u, y)
    }
}

fn to_vec(p: &Vector) -> Vec<f64> {
    p.iter().copied().collect()
}

impl ManifoldSpec {
    pub fn new(metric: Vec<Vec<Expr>>, domain: SamplingDomain) -> Result<Self> {
        let dim = metric.len();
        if dim == 0 {
            return Err(Error::Dimension("metric must be at least 1x1".into()));
        }
        if metric.iter().any(|row| row.len() != dim) {
            return Err(Error::Dimension(format!("metric must be {dim}x{dim}")));
        }
        if domain.bounds.len() != dim {
            return Err(Error::Dimension(format!(
                "domain has {} intervals for a {dim}-dimensional manifold",
                domain.bounds.len()
            )));
        }
        let metric: Vec<Expr> = metric.into_iter().flatten().collect();
        if let Some(bad) = metric.iter().find(|e| e.min_dim() > dim) {
            return Err(Error::Dimension(format!(
                "metric entry {bad} uses a coordinate beyond x{dim}"
            )));
        }
        let metric_partials = metric
            .iter()
            .flat_map(|e| (0..dim).map(move |k| e.diff(k)))
            .collect();
        Ok(ManifoldSpec {
            dim,
            metric,
            metric_partials,
            domain,
        })
    }

    /// Flat metric `δ_ij` on an unbounded domain.
    pub fn euclidean(dim: usize) -> Self {
        let metric = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| Expr::Const(if i == j { 1.0 } else { 0.0 }))
                    .collect()
            })
            .collect();
        ManifoldSpec::new(metric, SamplingDomain::unbounded(dim)).expect("well-formed")
    }

    pub fn with_domain(mut self, domain: SamplingDomain) -> Result<Self> {
        if domain.bounds.len() != self.dim {
            return Err(Error::Dimension("domain dimension mismatch".into()));
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric_entry(&self, i: usize, j: usize) -> &Expr {
        &self.metric[i * self.dim + j]
    }

    fn check_point(&self, p: &Vector) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, manifold has {}",
                p.len(),
                self.dim
            )));
        }
        Ok(())
    }

    pub fn metric_at(&self, p: &Vector) -> Result<Matrix> {
        self.check_point(p)?;
        let x = p.as_slice();
        let m = self.dim;
        let mut g = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                g[(i, j)] = self.metric[i * m + j].eval(x)?;
            }
        }
        Ok(g)
    }

    pub fn inverse_metric_at(&self, p: &Vector) -> Result<Matrix> {
        let g = self.metric_at(p)?;
        linalg::invert_metric(&g).ok_or_else(|| Error::SingularMetric { point: to_vec(p) })
    }

    /// Symmetry and positive definiteness of the metric at `p`.
    pub fn validate_at(&self, p: &Vector) -> Result<()> {
        let g = self.metric_at(p)?;
        let m = self.dim;
        let scale = g.amax().max(1.0);
        for i in 0..m {
            for j in 0..i {
                let defect = (g[(i, j)] - g[(j, i)]).abs();
                if defect > 1e-12 * scale {
                    return Err(Error::AsymmetricMetric {
                        point: to_vec(p),
                        i: i + 1,
                        j: j + 1,
                        defect,
                    });
                }
            }
        }
        let min_eigenvalue = g.symmetric_eigenvalues().min();
        let diag_scale = g.diagonal().iter().fold(0.0f64, |a, d| a.max(d.abs()));
        if min_eigenvalue <= linalg::RANK_TOL * diag_scale || diag_scale == 0.0 {
            return Err(Error::NotPositiveDefinite {
                point: to_vec(p),
                min_eigenvalue,
            });
        }
        Ok(())
    }

    /// `Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij)`.
    pub fn christoffel(&self, p: &Vector) -> Result<Christoffel> {
        let g_inv = self.inverse_metric_at(p)?;
        self.christoffel_with(p, &g_inv)
    }

    fn christoffel_with(&self, p: &Vector, g_inv: &Matrix) -> Result<Christoffel> {
        let m = self.dim;
        let x = p.as_slice();
        // dg[(i*m + j)*m + k] = ∂_k g_ij
        let mut dg = vec![0.0; m * m * m];
        for (slot, e) in dg.iter_mut().zip(&self.metric_partials) {
            if !e.is_zero() {
                *slot = e.eval(x)?;
            }
        }
        let d = |i: usize, j: usize, k: usize| dg[(i * m + j) * m + k];
        // first kind: Γ_lij = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
        let mut first = vec![0.0; m * m * m];
        for l in 0..m {
            for i in 0..m {
                for j in 0..m {
                    first[(l * m + i) * m + j] = 0.5 * (d(j, l, i) + d(i, l, j) - d(i, j, l));
                }
            }
        }
        let mut data = vec![0.0; m * m * m];
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let mut acc = 0.0;
                    for l in 0..m {
                        acc += g_inv[(k, l)] * first[(l * m + i) * m + j];
                    }
                    data[(k * m + i) * m + j] = acc;
                }
            }
        }
        Ok(Christoffel { dim: m, data })
    }

    pub fn local(&self, p: &Vector) -> Result<LocalGeometry> {
        self.check_point(p)?;
        let g = self.metric_at(p)?;
        let g_inv =
            linalg::invert_metric(&g).ok_or_else(|| Error::SingularMetric { point: to_vec(p) })?;
        let christoffel = self.christoffel_with(p, &g_inv)?;
        Ok(LocalGeometry {
            point: p.clone(),
            g,
            g_inv,
            christoffel,
        })
    }

    /// Symbolic `g(Y, Z)` as a scalar expression.
    fn metric_pairing(&self, y: &VectorField, z: &VectorField) -> Expr {
        let m = self.dim;
        Expr::sum((0..m).flat_map(|a| {
            (0..m).map(move |b| {
                Expr::mul(
                    self.metric[a * m + b].clone(),
                    Expr::mul(y.components[a].clone(), z.components[b].clone()),
                )
            })
        }))
    }

    /// `2 g(∇_X Y, Z)` via the Koszul formula, with Lie brackets and
    /// directional derivatives formed symbolically from the components.
    pub fn koszul(
        &self,
        x: &VectorField,
        y: &VectorField,
        z: &VectorField,
        p: &Vector,
    ) -> Result<f64> {
        for f in [x, y, z] {
            self.check_field(f)?;
        }
        let pt = p.as_slice();
        let g = self.metric_at(p)?;
        let along = |a: &VectorField, scalar: Expr| -> Result<f64> {
            let mut acc = 0.0;
            for (i, c) in a.components.iter().enumerate() {
                let d = scalar.diff(i);
                if d.is_zero() || c.is_zero() {
                    continue;
                }
                acc += c.eval(pt)? * d.eval(pt)?;
            }
            Ok(acc)
        };
        let pair = |u: &Vector, v: &Vector| linalg::inner(&g, u, v);
        let xv = x.eval(p)?;
        let yv = y.eval(p)?;
        let zv = z.eval(p)?;
        let yz = lie_bracket(y, z).eval(p)?;
        let xz = lie_bracket(x, z).eval(p)?;
        let xy = lie_bracket(x, y).eval(p)?;
        Ok(along(x, self.metric_pairing(y, z))? + along(y, self.metric_pairing(z, x))?
            - along(z, self.metric_pairing(x, y))?
            - pair(&yz, &xv)
            - pair(&xz, &yv)
            + pair(&xy, &zv))
    }

    /// `(∇_X Y)^k = X(Y^k) + Γ^k_ij X^i Y^j`.
    pub fn covariant_derivative(
        &self,
        x: &VectorField,
        y: &VectorField,
        p: &Vector,
    ) -> Result<Vector> {
        self.check_field(x)?;
        self.check_field(y)?;
        let local = self.local(p)?;
        let xv = x.eval(p)?;
        let dy = y.directional_derivative(p, &xv)?;
        Ok(local.covariant(&xv, &dy, &y.eval(p)?))
    }

    /// `grad f` with components `g^{kj} ∂_j f`.
    pub fn gradient(&self, f: &Expr, p: &Vector) -> Result<Vector> {
        let g_inv = self.inverse_metric_at(p)?;
        let df = Vector::from_iterator(
            self.dim,
            (0..self.dim).map(|i| f.diff(i).eval(p.as_slice())).collect::<Result<Vec<_>, _>>()?,
        );
        Ok(g_inv * df)
    }

    fn check_field(&self, f: &VectorField) -> Result<()> {
        if f.dim() != self.dim {
            return Err(Error::Dimension(format!(
                "vector field has {} components, manifold has dimension {}",
                f.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    fn acceleration(&self, x: &Vector, v: &Vector) -> Result<Vector> {
        Ok(-self.christoffel(x)?.contract(v, v))
    }

    /// Classical RK4 for `ẍ^k + Γ^k_ij ẋ^i ẋ^j = 0` over `[0, length]`.
    /// Fails with [`Error::DomainExit`] as soon as a step leaves the domain.
    pub fn geodesic_integrate(
        &self,
        p0: &Vector,
        v0: &Vector,
        length: f64,
        step: f64,
    ) -> Result<GeodesicTrajectory> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
        }
        if !(length >= 0.0) || !length.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "length must be non-negative, got {length}"
            )));
        }
        self.check_point(p0)?;
        if v0.len() != self.dim {
            return Err(Error::Dimension("velocity dimension mismatch".into()));
        }
        self.domain.require(p0.as_slice())?;

        let steps = (length / step - 1e-9).ceil().max(0.0) as usize;
        let mut samples = Vec::with_capacity(steps + 1);
        let (mut x, mut v) = (p0.clone(), v0.clone());
        samples.push(TrajectorySample {
            s: 0.0,
            point: x.clone(),
            velocity: v.clone(),
        });
        for n in 1..=steps {
            let h = step;
            let a1 = self.acceleration(&x, &v)?;
            let (x2, v2) = (&x + &v * (h / 2.0), &v + &a1 * (h / 2.0));
            let a2 = self.acceleration(&x2, &v2)?;
            let (x3, v3) = (&x + &v2 * (h / 2.0), &v + &a2 * (h / 2.0));
            let a3 = self.acceleration(&x3, &v3)?;
            let (x4, v4) = (&x + &v3 * h, &v + &a3 * h);
            let a4 = self.acceleration(&x4, &v4)?;
            x += (&v + &v2 * 2.0 + &v3 * 2.0 + &v4) * (h / 6.0);
            v += (&a1 + &a2 * 2.0 + &a3 * 2.0 + &a4) * (h / 6.0);
            let s = n as f64 * step;
            if !self.domain.contains(x.as_slice()) {
                return Err(Error::DomainExit {
                    s,
                    point: to_vec(&x),
                });
            }
            samples.push(TrajectorySample {
                s,
                point: x.clone(),
                velocity: v.clone(),
            });
        }
        GeodesicTrajectory::from_samples(self, samples, step)
    }
}

/// `[X, Y]^k = X(Y^k) − Y(X^k)`, built symbolically.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    let m = x.dim();
    let comps = (0..m)
        .map(|k| {
            let xy = Expr::sum(
                (0..m).map(|i| Expr::mul(x.components[i].clone(), y.jacobian[k][i].clone())),
            );
            let yx = Expr::sum(
                (0..m).map(|i| Expr::mul(y.components[i].clone(), x.jacobian[k][i].clone())),
            );
            Expr::sub(xy, yx)
        })
        .collect();
    VectorField::new(comps)
}

/// Vector field in coordinate components.
#[derive(Debug, Clone)]
pub struct VectorField {
    pub components: Vec<Expr>,
    /// `jacobian[k][i] = ∂_i Y^k`
    jacobian: Vec<Vec<Expr>>,
}

impl VectorField {
    pub fn new(components: Vec<Expr>) -> Self {
        let m = components.len();
        let jacobian = components.iter().map(|c| c.gradient(m)).collect();
        VectorField {
            components,
            jacobian,
        }
    }

    pub fn parse(components: &[&str]) -> Result<Self> {
        let m = components.len();
        let comps = components
            .iter()
            .map(|c| crate::expr::parse(c, m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VectorField::new(comps))
    }

    pub fn constant(v: &Vector) -> Self {
        VectorField::new(v.iter().map(|c| Expr::Const(*c)).collect())
    }

    /// `∂/∂x_{i+1}`.
    pub fn coordinate(i: usize, dim: usize) -> Self {
        VectorField::constant(&Vector::from_fn(dim, |k, _| if k == i { 1.0 } else { 0.0 }))
    }

    pub fn scaled(&self, a: f64) -> Self {
        VectorField::new(
            self.components
                .iter()
                .map(|c| Expr::mul(Expr::Const(a), c.clone()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, p: &Vector) -> Result<Vector> {
        let x = p.as_slice();
        let vals = self
            .components
            .iter()
            .map(|c| c.eval(x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Vector::from_vec(vals))
    }

    /// Ordinary directional derivative `D_u Y` (no connection term).
    pub fn directional_derivative(&self, p: &Vector, u: &Vector) -> Result<Vector> {
        let x = p.as_slice();
        let m = self.dim();
        let mut out = Vector::zeros(m);
        for k in 0..m {
            let mut acc = 0.0;
            for i in 0..m {
                if u[i] == 0.0 || self.jacobian[k][i].is_zero() {
                    continue;
                }
                acc += u[i] * self.jacobian[k][i].eval(x)?;
            }
            out[k] = acc;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectorySample {
    pub s: f64,
    pub point: Vector,
    pub velocity: Vector,
}

/// Discretised curve with velocities at uniformly spaced parameters.
#[derive(Debug, Clone)]
pub struct GeodesicTrajectory {
    pub samples: Vec<TrajectorySample>,
    pub step: f64,
    /// `max |E(s) − E(0)| / E(0)` with `E = g(ḣ, ḣ)`; zero when `E(0) = 0`.
    pub energy_drift: f64,
}

impl GeodesicTrajectory {
    /// Wraps externally produced samples (e.g. a closed-form curve); `s` must
    /// advance by `step`.
    pub fn from_samples(
        manifold: &ManifoldSpec,
        samples: Vec<TrajectorySample>,
        step: f64,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        for w in samples.windows(2) {
            if ((w[1].s - w[0].s) - step).abs() > 1e-9 * step.max(1.0) {
                return Err(Error::InvalidArgument(format!(
                    "samples at s = {} and s = {} are not {step} apart",
                    w[0].s, w[1].s
                )));
            }
        }
        let energy = |t: &TrajectorySample| -> Result<f64> {
            let g = manifold.metric_at(&t.point)?;
            Ok(linalg::inner(&g, &t.velocity, &t.velocity))
        };
        let e0 = energy(&samples[0])?;
        let mut drift = 0.0f64;
        if e0 > 0.0 {
            for t in &samples {
                drift = drift.max((energy(t)? - e0).abs() / e0);
            }
        }
        Ok(GeodesicTrajectory {
            samples,
            step,
            energy_drift: drift,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn conformal() -> ManifoldSpec {
        let e = parse("exp(2*x1)", 2).unwrap();
        ManifoldSpec::new(
            vec![vec![e.clone(), Expr::zero()], vec![Expr::zero(), e]],
            SamplingDomain::boxed(vec![(-1.0, 1.0); 2]),
        )
        .unwrap()
    }

    #[test]
    fn flat_christoffel_vanishes() {
        let m = ManifoldSpec::euclidean(4);
        let g = m
            .christoffel(&Vector::from_vec(vec![0.3, -1.0, 2.0, 5.0]))
            .unwrap();
        assert!(g.data.iter().all(|x| *x == 0.0));
        assert_eq!(g.data.len(), 64);
    }

    #[test]
    fn conformal_christoffel_values() {
        let m = conformal();
        let g = m.christoffel(&Vector::from_vec(vec![0.4, -0.7])).unwrap();
        assert!((g.get(0, 0, 0) - 1.0).abs() < 1e-14);
        assert!((g.get(0, 1, 1) + 1.0).abs() < 1e-14);
        assert!((g.get(1, 0, 1) - 1.0).abs() < 1e-14);
        assert!((g.get(1, 1, 0) - 1.0).abs() < 1e-14);
        assert!(g.get(1, 0, 0).abs() < 1e-14);
        assert!(g.get(0, 0, 1).abs() < 1e-14);
    }

    #[test]
    fn zero_metric_is_singular() {
        let m = ManifoldSpec::new(
            vec![vec![Expr::zero(); 2]; 2],
            SamplingDomain::unbounded(2),
        )
        .unwrap();
        assert!(matches!(
            m.christoffel(&Vector::zeros(2)),
            Err(Error::SingularMetric { .. })
        ));
    }

    #[test]
    fn non_positive_step_rejected() {
        let m = ManifoldSpec::euclidean(2);
        let p = Vector::zeros(2);
        for step in [0.0, -1e-3, f64::NAN] {
            assert!(matches!(
                m.geodesic_integrate(&p, &p, 1.0, step),
                Err(Error::InvalidArgument(_))
            ));
        }
    }

    #[test]
    fn domain_exit_reports_point() {
        let m = ManifoldSpec::euclidean(2)
            .with_domain(SamplingDomain::boxed(vec![(-1.0, 1.0); 2]))
            .unwrap();
        let err = m
            .geodesic_integrate(
                &Vector::zeros(2),
                &Vector::from_vec(vec![1.0, 0.0]),
                2.0,
                1e-2,
            )
            .unwrap_err();
        match err {
            Error::DomainExit { s, point } => {
                assert!(s > 0.99 && s < 1.02, "{s}");
                assert!(point[0] > 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sampling_respects_exclusions_and_is_seeded() {
        let d = SamplingDomain::boxed(vec![(-1.0, 1.0); 2])
            .with_exclusion(parse("sqrt(x1^2+x2^2)", 2).unwrap(), 0.5);
        let a = d.sample(50, 7).unwrap();
        let b = d.sample(50, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.norm() >= 0.5));
        assert_ne!(a, d.sample(50, 8).unwrap());
    }

    #[test]
    fn gradient_of_coordinate_function() {
        let m = ManifoldSpec::euclidean(4);
        let f = parse("x3", 4).unwrap();
        let g = m.gradient(&f, &Vector::from_vec(vec![1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(g, Vector::from_vec(vec![0.0, 0.0, 1.0, 0.0]));
        let c = m.gradient(&Expr::Const(2.0), &Vector::zeros(4)).unwrap();
        assert_eq!(c, Vector::zeros(4));
    }
}
