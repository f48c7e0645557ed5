//! Submersion maps: differential, vertical/horizontal splitting, the O'Neill
//! tensors `T` and `A`, the second fundamental form of the map and the
//! extrinsic character of the fibres.
//!
//! Everything that differentiates a projected field goes through
//! [`SplitPoint`], which stores the vertical projector `P_V` at a point
//! together with its coordinate partials. The partials come from a
//! fourth-order central stencil of the projector at displaced points; the
//! projector itself is sign-free, so no frame orientation has to be
//! propagated between points.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::geometry::{LocalGeometry, ManifoldSpec, VectorField};
use crate::linalg::{self, Matrix, Vector};
use crate::report::CheckReport;

/// Displacement used to differentiate projected fields.
pub const FD_STEP: f64 = 1e-5;

/// Smooth map `R^m -> R^n` given by component expressions in source coordinates.
#[derive(Debug, Clone)]
pub struct SmoothMap {
    source_dim: usize,
    components: Vec<Expr>,
    /// `jacobian[a][i] = ∂_i π^a`
    jacobian: Vec<Vec<Expr>>,
    /// `hessian[a][i][j] = ∂_j ∂_i π^a`
    hessian: Vec<Vec<Vec<Expr>>>,
}

impl SmoothMap {
    pub fn new(components: Vec<Expr>, source_dim: usize) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Dimension("map needs at least one component".into()));
        }
        if let Some(c) = components.iter().find(|c| c.min_dim() > source_dim) {
            return Err(Error::Dimension(format!(
                "map component {c} uses a coordinate beyond x{source_dim}"
            )));
        }
        let jacobian: Vec<Vec<Expr>> = components.iter().map(|c| c.gradient(source_dim)).collect();
        let hessian = jacobian
            .iter()
            .map(|row| row.iter().map(|d| d.gradient(source_dim)).collect())
            .collect();
        Ok(SmoothMap {
            source_dim,
            components,
            jacobian,
            hessian,
        })
    }

    pub fn parse(components: &[&str], source_dim: usize) -> Result<Self> {
        let comps = components
            .iter()
            .map(|c| parse(c, source_dim))
            .collect::<Result<Vec<_>, _>>()?;
        SmoothMap::new(comps, source_dim)
    }

    pub fn identity(dim: usize) -> Self {
        SmoothMap::new((0..dim).map(Expr::var).collect(), dim).expect("well formed")
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, p: &Vector) -> Result<Vector> {
        let x = p.as_slice();
        Ok(Vector::from_vec(
            self.components
                .iter()
                .map(|c| c.eval(x))
                .collect::<Result<Vec<_>, _>>()?,
        ))
    }

    /// `n x m` Jacobian, entry `(a, i) = ∂_i π^a`.
    pub fn differential(&self, p: &Vector) -> Result<Matrix> {
        let x = p.as_slice();
        let (n, m) = (self.target_dim(), self.source_dim);
        let mut out = Matrix::zeros(n, m);
        for a in 0..n {
            for i in 0..m {
                let e = &self.jacobian[a][i];
                if !e.is_zero() {
                    out[(a, i)] = e.eval(x)?;
                }
            }
        }
        Ok(out)
    }

    fn hessian_at(&self, p: &Vector, a: usize) -> Result<Matrix> {
        let x = p.as_slice();
        let m = self.source_dim;
        let mut out = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let e = &self.hessian[a][i][j];
                if !e.is_zero() {
                    out[(i, j)] = e.eval(x)?;
                }
            }
        }
        Ok(out)
    }
}

/// Orthonormal vertical and horizontal bases at a point.
#[derive(Debug, Clone)]
pub struct Frame {
    pub point: Vector,
    pub vertical: Vec<Vector>,
    pub horizontal: Vec<Vector>,
    /// Source metric at `point`, used for projections.
    pub metric: Matrix,
}

impl Frame {
    /// g-orthogonal decomposition `v = vertical + horizontal`.
    pub fn project(&self, v: &Vector) -> (Vector, Vector) {
        let mut vert = Vector::zeros(v.len());
        for e in &self.vertical {
            vert.axpy(linalg::inner(&self.metric, e, v), e, 1.0);
        }
        let horiz = v - &vert;
        (vert, horiz)
    }

    pub fn all(&self) -> impl Iterator<Item = &Vector> {
        self.vertical.iter().chain(self.horizontal.iter())
    }
}

/// Source manifold, target manifold and the map between them.
#[derive(Debug, Clone)]
pub struct Submersion {
    pub total: ManifoldSpec,
    pub base: ManifoldSpec,
    pub map: SmoothMap,
}

/// Splitting data at one point: local geometry, frame, projectors and
/// the partial derivatives of the vertical projector.
#[derive(Debug, Clone)]
pub struct SplitPoint {
    pub geo: LocalGeometry,
    pub frame: Frame,
    pub pv: Matrix,
    pub ph: Matrix,
    /// `dpv[i] = ∂_i P_V`
    dpv: Vec<Matrix>,
}

fn pt(p: &Vector) -> Vec<f64> {
    p.iter().copied().collect()
}

impl SplitPoint {
    pub fn point(&self) -> &Vector {
        &self.geo.point
    }

    pub fn vertical(&self, v: &Vector) -> Vector {
        &self.pv * v
    }

    pub fn horizontal(&self, v: &Vector) -> Vector {
        &self.ph * v
    }

    pub fn inner(&self, u: &Vector, v: &Vector) -> f64 {
        self.geo.inner(u, v)
    }

    pub fn norm(&self, v: &Vector) -> f64 {
        self.geo.norm(v)
    }

    /// Directional derivative of the projector, `D_d P_V`.
    pub fn dpv_along(&self, d: &Vector) -> Matrix {
        let m = d.len();
        let mut out = Matrix::zeros(m, m);
        for (i, di) in self.dpv.iter().enumerate() {
            if d[i] != 0.0 {
                out += di * d[i];
            }
        }
        out
    }

    /// `∇_d (P_V F)` for a field with value `f` and ordinary derivative `df = D_d F`.
    pub fn nabla_of_vertical(&self, d: &Vector, f: &Vector, df: &Vector) -> Vector {
        let vf = &self.pv * f;
        self.dpv_along(d) * f + &self.pv * df + self.geo.christoffel.contract(d, &vf)
    }

    /// `∇_d (P_H F)`, same conventions as [`Self::nabla_of_vertical`].
    pub fn nabla_of_horizontal(&self, d: &Vector, f: &Vector, df: &Vector) -> Vector {
        self.geo.covariant(d, df, f) - self.nabla_of_vertical(d, f, df)
    }

    /// `H ∇_d V F + V ∇_d H F`: `T` when `d` is vertical, `A` when horizontal.
    fn oneill(&self, d: &Vector, f: &Vector, df: &Vector) -> Vector {
        &self.ph * self.nabla_of_vertical(d, f, df) + &self.pv * self.nabla_of_horizontal(d, f, df)
    }

    /// `T_e f` for tangent vectors at this point.
    pub fn t(&self, e: &Vector, f: &Vector) -> Vector {
        let zero = Vector::zeros(f.len());
        self.oneill(&self.vertical(e), f, &zero)
    }

    /// `A_e f` for tangent vectors at this point.
    pub fn a(&self, e: &Vector, f: &Vector) -> Vector {
        let zero = Vector::zeros(f.len());
        self.oneill(&self.horizontal(e), f, &zero)
    }

    /// `T_E F` with `F` a field known through its value and derivative along `V E`.
    pub fn t_with(&self, e: &Vector, f: &Vector, df_along_ve: &Vector) -> Vector {
        self.oneill(&self.vertical(e), f, df_along_ve)
    }

    pub fn a_with(&self, e: &Vector, f: &Vector, df_along_he: &Vector) -> Vector {
        self.oneill(&self.horizontal(e), f, df_along_he)
    }
}

/// Fourth-order central difference of a matrix- or vector-valued function
/// along coordinate axis `i`.
pub(crate) fn stencil<T, F>(p: &Vector, i: usize, h: f64, mut f: F) -> Result<T>
where
    F: FnMut(&Vector) -> Result<T>,
    T: std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let at = |k: f64| {
        let mut q = p.clone();
        q[i] += k * h;
        q
    };
    let (p2, p1, m1, m2) = (f(&at(2.0))?, f(&at(1.0))?, f(&at(-1.0))?, f(&at(-2.0))?);
    Ok(((p1 - m1) * 8.0 - (p2 - m2)) * (1.0 / (12.0 * h)))
}

/// Directional version of [`stencil`] along an arbitrary vector.
pub(crate) fn stencil_along<T, F>(p: &Vector, d: &Vector, h: f64, mut f: F) -> Result<T>
where
    F: FnMut(&Vector) -> Result<T>,
    T: std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let scale = d.norm();
    let u = if scale > 0.0 { d / scale } else { d.clone() };
    let at = |k: f64| p + &u * (k * h);
    let (p2, p1, m1, m2) = (f(&at(2.0))?, f(&at(1.0))?, f(&at(-1.0))?, f(&at(-2.0))?);
    Ok(((p1 - m1) * 8.0 - (p2 - m2)) * (scale / (12.0 * h)))
}

/// Per-sample fibre data from [`Submersion::fiber_character`].
#[derive(Debug, Clone)]
pub struct FiberSample {
    pub point: Vector,
    /// Mean curvature vector: average of `T_{V_k} V_k` over the vertical frame.
    pub mean_curvature: Vector,
    pub umbilic_residual: f64,
    pub geodesic_residual: f64,
}

#[derive(Debug, Clone)]
pub struct FiberCharacter {
    pub fibre_dim: usize,
    pub umbilical: CheckReport,
    pub totally_geodesic: CheckReport,
    pub samples: Vec<FiberSample>,
}

impl Submersion {
    pub fn new(total: ManifoldSpec, base: ManifoldSpec, map: SmoothMap) -> Result<Self> {
        if map.source_dim() != total.dim() {
            return Err(Error::Dimension(format!(
                "map is defined on R^{} but the total space has dimension {}",
                map.source_dim(),
                total.dim()
            )));
        }
        if map.target_dim() != base.dim() {
            return Err(Error::Dimension(format!(
                "map has {} components but the base has dimension {}",
                map.target_dim(),
                base.dim()
            )));
        }
        if base.dim() > total.dim() {
            return Err(Error::Dimension(
                "base dimension exceeds total dimension".into(),
            ));
        }
        Ok(Submersion { total, base, map })
    }

    pub fn fibre_dim(&self) -> usize {
        self.total.dim() - self.base.dim()
    }

    pub fn differential(&self, p: &Vector) -> Result<Matrix> {
        self.map.differential(p)
    }

    /// Vertical = g-orthonormalised null space of the Jacobian; horizontal =
    /// g-orthonormalised raised rows `g^{-1} ∇π^a`. Each vector is oriented so
    /// its first largest-magnitude component is positive.
    pub fn build_frame(&self, p: &Vector) -> Result<Frame> {
        let jac = self.map.differential(p)?;
        let n = self.base.dim();
        let (rank, null) = linalg::null_space(&jac);
        if rank != n {
            return Err(Error::RankDeficient {
                point: pt(p),
                rank,
                expected: n,
            });
        }
        let g = self.total.metric_at(p)?;
        let g_inv = linalg::invert_metric(&g).ok_or(Error::SingularMetric { point: pt(p) })?;
        let mut vertical = linalg::orthonormalize(&g, &null);
        let raised: Vec<Vector> = (0..n).map(|a| &g_inv * jac.row(a).transpose()).collect();
        let mut horizontal = linalg::orthonormalize(&g, &raised);
        if vertical.len() + horizontal.len() != self.total.dim() {
            return Err(Error::RankDeficient {
                point: pt(p),
                rank: horizontal.len(),
                expected: n,
            });
        }
        vertical.iter_mut().chain(horizontal.iter_mut()).for_each(linalg::fix_sign);
        Ok(Frame {
            point: p.clone(),
            vertical,
            horizontal,
            metric: g,
        })
    }

    /// `P_V = I − g^{-1} Jᵀ (J g^{-1} Jᵀ)^{-1} J`.
    pub fn vertical_projector(&self, p: &Vector) -> Result<Matrix> {
        let jac = self.map.differential(p)?;
        let g_inv = self.total.inverse_metric_at(p)?;
        let raised = &g_inv * jac.transpose();
        let gram = &jac * &raised;
        let gram_inv = linalg::invert_metric(&gram).ok_or_else(|| Error::RankDeficient {
            point: pt(p),
            rank: linalg::null_space(&jac).0,
            expected: self.base.dim(),
        })?;
        let m = self.total.dim();
        Ok(Matrix::identity(m, m) - raised * gram_inv * jac)
    }

    pub fn split(&self, p: &Vector) -> Result<SplitPoint> {
        let geo = self.total.local(p)?;
        let frame = self.build_frame(p)?;
        let pv = self.vertical_projector(p)?;
        let m = self.total.dim();
        let ph = Matrix::identity(m, m) - &pv;
        let dpv = (0..m)
            .map(|i| stencil(p, i, FD_STEP, |q| self.vertical_projector(q)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SplitPoint {
            geo,
            frame,
            pv,
            ph,
            dpv,
        })
    }

    /// Maximal rank and isometry of `π_*` on horizontal vectors.
    pub fn check_submersion(&self, samples: &[Vector], tolerance: f64) -> Result<CheckReport> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        let mut report = CheckReport::new("Riemannian submersion axioms", "submersion-axioms", tolerance);
        for p in samples {
            let frame = self.build_frame(p)?;
            let jac = self.map.differential(p)?;
            let gn = self.base.metric_at(&self.map.eval(p)?)?;
            let pushed: Vec<Vector> = frame.horizontal.iter().map(|x| &jac * x).collect();
            for (a, u) in pushed.iter().enumerate() {
                for (b, v) in pushed.iter().enumerate() {
                    let want = if a == b { 1.0 } else { 0.0 };
                    report.observe(linalg::inner(&gn, u, v) - want);
                }
            }
            report.sample();
        }
        report.note(format!("rank {} at every sample", self.base.dim()));
        Ok(report)
    }

    /// `T_E F = H ∇_{VE} VF + V ∇_{VE} HF` for vector fields.
    pub fn tensor_t(&self, e: &VectorField, f: &VectorField, p: &Vector) -> Result<Vector> {
        let sp = self.split(p)?;
        let ev = e.eval(p)?;
        let fv = f.eval(p)?;
        let df = f.directional_derivative(p, &sp.vertical(&ev))?;
        Ok(sp.t_with(&ev, &fv, &df))
    }

    /// `A_E F = H ∇_{HE} VF + V ∇_{HE} HF` for vector fields.
    pub fn tensor_a(&self, e: &VectorField, f: &VectorField, p: &Vector) -> Result<Vector> {
        let sp = self.split(p)?;
        let ev = e.eval(p)?;
        let fv = f.eval(p)?;
        let df = f.directional_derivative(p, &sp.horizontal(&ev))?;
        Ok(sp.a_with(&ev, &fv, &df))
    }

    /// Skew-symmetry of `T_U` (U vertical) and `A_X` (X horizontal) over
    /// every frame pair plus random unit pairs.
    pub fn check_skew(&self, samples: &[Vector], tolerance: f64, seed: u64) -> Result<CheckReport> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = CheckReport::new("O'Neill tensors skew-symmetric", "oneill-skew", tolerance);
        let (mut worst_t, mut worst_a) = (0.0f64, 0.0f64);
        for p in samples {
            let sp = self.split(p)?;
            let mut pairs: Vec<(Vector, Vector)> = Vec::new();
            for e in sp.frame.all() {
                for f in sp.frame.all() {
                    pairs.push((e.clone(), f.clone()));
                }
            }
            for _ in 0..2 {
                pairs.push((
                    crate::hermitian::random_unit(&mut rng, &sp.geo),
                    crate::hermitian::random_unit(&mut rng, &sp.geo),
                ));
            }
            let mut us = sp.frame.vertical.clone();
            let mut xs = sp.frame.horizontal.clone();
            let combo = |rng: &mut ChaCha8Rng, basis: &[Vector]| -> Option<Vector> {
                let first = basis.first()?;
                let mut v = Vector::zeros(first.len());
                for b in basis {
                    v.axpy(rng.gen_range(-1.0..1.0), b, 1.0);
                }
                let n = sp.norm(&v);
                (n > 1e-6).then(|| v / n)
            };
            us.extend(combo(&mut rng, &sp.frame.vertical));
            xs.extend(combo(&mut rng, &sp.frame.horizontal));
            for (e, f) in &pairs {
                for u in &us {
                    let r = sp.inner(&sp.t(u, e), f) + sp.inner(e, &sp.t(u, f));
                    worst_t = worst_t.max(r.abs());
                    report.observe(r);
                }
                for x in &xs {
                    let r = sp.inner(&sp.a(x, e), f) + sp.inner(e, &sp.a(x, f));
                    worst_a = worst_a.max(r.abs());
                    report.observe(r);
                }
            }
            report.sample();
        }
        report.note(format!("T residual {worst_t:.3e}, A residual {worst_a:.3e}"));
        Ok(report)
    }

    /// `(∇π_*)(E, F) = ∇^N_E π_*F − π_*(∇^M_E F)` in target coordinates at `π(p)`.
    pub fn second_fundamental_form(
        &self,
        e: &VectorField,
        f: &VectorField,
        p: &Vector,
    ) -> Result<Vector> {
        let n = self.base.dim();
        let jac = self.map.differential(p)?;
        let ev = e.eval(p)?;
        let fv = f.eval(p)?;
        let df = f.directional_derivative(p, &ev)?;
        // E((π_*F)^a) = Eʲ (∂_j∂_i π^a Fⁱ + ∂_i π^a ∂_j Fⁱ)
        let mut along = Vector::zeros(n);
        for a in 0..n {
            let hess = self.map.hessian_at(p, a)?;
            along[a] = (ev.transpose() * hess * &fv)[(0, 0)];
        }
        along += &jac * &df;
        let base_gamma = self.base.christoffel(&self.map.eval(p)?)?;
        let pulled = along + base_gamma.contract(&(&jac * &ev), &(&jac * &fv));
        let nabla_m = self.total.covariant_derivative(e, f, p)?;
        Ok(pulled - jac * nabla_m)
    }

    /// Mean curvature and umbilicity of the fibres at each sample.
    pub fn fiber_character(&self, samples: &[Vector], tolerance: f64) -> Result<FiberCharacter> {
        let k = self.fibre_dim();
        if k == 0 {
            return Err(Error::NoFibres);
        }
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        let mut umbilical = CheckReport::new("fibres totally umbilical", "fibre-umbilical", tolerance);
        let mut geodesic =
            CheckReport::new("fibres totally geodesic", "fibre-totally-geodesic", tolerance)
                .informational();
        let mut out = Vec::with_capacity(samples.len());
        for p in samples {
            let sp = self.split(p)?;
            let vs = &sp.frame.vertical;
            let mut h = Vector::zeros(p.len());
            for v in vs {
                h += sp.t(v, v);
            }
            h /= k as f64;
            let (mut umb, mut geo) = (0.0f64, 0.0f64);
            for a in vs {
                for b in vs {
                    let tab = sp.t(a, b);
                    umb = umb.max(sp.norm(&(&tab - &h * sp.inner(a, b))));
                    geo = geo.max(sp.norm(&tab));
                }
            }
            umbilical.observe(umb);
            umbilical.sample();
            geodesic.observe(geo);
            geodesic.sample();
            out.push(FiberSample {
                point: p.clone(),
                mean_curvature: h,
                umbilic_residual: umb,
                geodesic_residual: geo,
            });
        }
        umbilical.note(format!("fibre dimension {k}"));
        Ok(FiberCharacter {
            fibre_dim: k,
            umbilical,
            totally_geodesic: geodesic,
            samples: out,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn v(x: &[f64]) -> Vector {
        Vector::from_vec(x.to_vec())
    }

    fn example(map: SmoothMap) -> Submersion {
        Submersion::new(presets::euclidean_r4(), ManifoldSpec::euclidean(3), map).unwrap()
    }

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn differentials_of_examples() {
        let ex1 = presets::map_example_i();
        let j = ex1.differential(&v(&[0.3, 2.0, -1.0, 0.5])).unwrap();
        let want = Matrix::from_row_slice(3, 4, &[S, S, 0., 0., 0., 0., 1., 0., 0., 0., 0., 1.]);
        assert!((j - want).amax() < 1e-15);

        let ex2 = presets::map_example_ii();
        let j = ex2.differential(&v(&[1.0, 1.0, 0.0, 0.0])).unwrap();
        assert!((j[(0, 0)] - S).abs() < 1e-15 && (j[(0, 1)] - S).abs() < 1e-15);

        let id = SmoothMap::identity(3);
        assert_eq!(id.differential(&v(&[1., 2., 3.])).unwrap(), Matrix::identity(3, 3));
    }

    #[test]
    fn frames_of_examples() {
        let f = example(presets::map_example_i()).build_frame(&v(&[0.1, 0.2, 0.3, 0.4])).unwrap();
        assert_eq!(f.vertical.len(), 1);
        assert!((&f.vertical[0] - v(&[S, -S, 0., 0.])).amax() < 1e-12);

        let f = example(presets::map_example_ii()).build_frame(&v(&[1., 1., 0., 0.])).unwrap();
        assert!((&f.vertical[0] - v(&[S, -S, 0., 0.])).amax() < 1e-12);
        let (vert, hor) = f.project(&f.vertical[0]);
        assert!((vert - &f.vertical[0]).amax() < 1e-15 && hor.amax() < 1e-15);
    }

    #[test]
    fn collapsed_rank_is_rejected() {
        let map = SmoothMap::parse(&["x1", "x1", "x4"], 4).unwrap();
        let s = example(map);
        assert!(matches!(
            s.build_frame(&v(&[0.1, 0.2, 0.3, 0.4])),
            Err(Error::RankDeficient { rank: 2, expected: 3, .. })
        ));
    }

    #[test]
    fn stretched_map_fails_isometry() {
        let s = example(SmoothMap::parse(&["2*x1", "x3", "x4"], 4).unwrap());
        let r = s.check_submersion(&[v(&[0., 0., 0., 0.])], 1e-8).unwrap();
        assert!(!r.passed);
        assert!((r.max_residual - 3.0).abs() < 1e-12);
    }

    #[test]
    fn t_of_circle_fibre_field() {
        let s = example(presets::map_example_ii());
        let x1 = VectorField::parse(&["x2/sqrt(x1^2+x2^2)", "-x1/sqrt(x1^2+x2^2)", "0", "0"]).unwrap();
        let t = s.tensor_t(&x1, &x1, &v(&[1., 1., 0., 0.])).unwrap();
        assert!((t - v(&[-0.5, -0.5, 0., 0.])).amax() < 1e-9);
    }

    #[test]
    fn zero_field_has_zero_second_fundamental_form() {
        let s = example(presets::map_example_ii());
        let zero = VectorField::constant(&Vector::zeros(4));
        let r = s.second_fundamental_form(&zero, &zero, &v(&[0.5, 1.0, 2.0, 0.0])).unwrap();
        assert_eq!(r, Vector::zeros(3));
    }

    #[test]
    fn equal_dimensions_have_no_fibres() {
        let s = Submersion::new(
            ManifoldSpec::euclidean(2),
            ManifoldSpec::euclidean(2),
            SmoothMap::identity(2),
        )
        .unwrap();
        assert!(matches!(
            s.fiber_character(&[Vector::zeros(2)], 1e-8),
            Err(Error::NoFibres)
        ));
    }
}
