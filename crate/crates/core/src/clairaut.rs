//! Anti-invariant submersions and the Clairaut condition.
//!
//! A scenario couples a [`Submersion`] with an almost complex structure `φ`
//! and a Clairaut exponent `f` (so `r = e^f`). The checks here split
//! horizontal vectors as `φX = αX + βX`, decompose `∇φ` into its horizontal
//! part `P` and vertical part `Q`, test Bishop's umbilicity criterion and
//! evaluate the geodesic and Clairaut identities along trajectories.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::{GeodesicTrajectory, VectorField};
use crate::hermitian::{self, AlmostComplexField, LocalStructure};
use crate::linalg::{self, Matrix, Vector};
use crate::report::CheckReport;
use crate::submersion::{stencil_along, SplitPoint, Submersion, FD_STEP};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Identities that hold up to rounding.
    pub algebraic: f64,
    /// Checks limited by finite-difference error.
    pub fd: f64,
    /// Trajectory-based checks; drift tolerances are per unit length.
    pub geodesic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: 1e-8,
            fd: 1e-6,
            geodesic: 1e-5,
        }
    }
}

impl Tolerances {
    pub fn scaled(self, k: f64) -> Self {
        Tolerances {
            algebraic: self.algebraic * k,
            fd: self.fd * k,
            geodesic: self.geodesic * k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingConfig {
    pub count: usize,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { count: 200, seed: 42 }
    }
}

/// Everything needed to test a candidate Clairaut anti-invariant submersion.
#[derive(Debug, Clone)]
pub struct ClairautScenario {
    pub submersion: Submersion,
    pub structure: AlmostComplexField,
    /// Clairaut exponent: `r = e^f`.
    pub f: Expr,
    pub tolerances: Tolerances,
    pub sampling: SamplingConfig,
}

/// `φX = αX + βX` with `αX` vertical and `βX ∈ μ`.
#[derive(Debug, Clone)]
pub struct SplitResult {
    pub alpha: Vector,
    pub beta: Vector,
    pub mu_frame: Vec<Vector>,
    /// Largest `|g(β, V)|` or `|g(β, φV)|` over the vertical frame.
    pub mu_defect: f64,
}

#[derive(Debug, Clone)]
pub struct AntiInvariance {
    pub report: CheckReport,
    /// `n − (m − n)`; negative means `φ(ker π_*)` cannot fit in the horizontal space.
    pub mu_dim: isize,
    pub lagrangian: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSample {
    pub s: f64,
    pub sin_theta: f64,
    /// `e^{f} sin θ`
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct InvariantDrift {
    pub samples: Vec<InvariantSample>,
    pub initial: f64,
    pub max_abs_drift: f64,
    /// `max |c(s) − c(0)| / max(|c(0)|, INVARIANT_FLOOR)`
    pub relative_drift: f64,
}

/// Floor on `|c(0)|` when normalising invariant drift, so that horizontal
/// geodesics (`c ≡ 0`) measure absolute drift.
pub const INVARIANT_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct GeodesicResiduals {
    pub s: f64,
    /// Vertical combination (tensors, plus `V∇_ḣ αX`).
    pub vertical: Vector,
    /// Horizontal combination.
    pub horizontal: Vector,
    pub vertical_norm: f64,
    pub horizontal_norm: f64,
}

#[derive(Debug, Clone)]
pub struct PqReport {
    pub antisymmetry: CheckReport,
    pub conjugation: CheckReport,
    pub duality: CheckReport,
}

#[derive(Debug, Clone)]
pub struct BasicIdentityReport {
    /// `X` from an orthonormal basis of `μ`.
    pub mu_frame: CheckReport,
    /// `X` from the full horizontal frame.
    pub horizontal_frame: CheckReport,
    /// Whether `φW` is basic: vertical derivative of `π_*(φW)`.
    pub basic: CheckReport,
}

/// Per-point data: splitting, structure and gradient of `f`.
struct Local {
    sp: SplitPoint,
    st: LocalStructure,
    grad_f: Vector,
}

impl Local {
    fn phi(&self, v: &Vector) -> Vector {
        &self.st.phi * v
    }
}

impl ClairautScenario {
    pub fn new(
        submersion: Submersion,
        structure: AlmostComplexField,
        f: Expr,
        tolerances: Tolerances,
        sampling: SamplingConfig,
    ) -> Result<Self> {
        let m = submersion.total.dim();
        if structure.dim() != m {
            return Err(Error::Dimension(format!(
                "structure is {0}x{0} but the total space has dimension {m}",
                structure.dim()
            )));
        }
        if f.min_dim() > m {
            return Err(Error::Dimension(format!("f = {f} uses coordinates beyond x{m}")));
        }
        Ok(ClairautScenario {
            submersion,
            structure,
            f,
            tolerances,
            sampling,
        })
    }

    pub fn dim(&self) -> usize {
        self.submersion.total.dim()
    }

    pub fn samples(&self) -> Result<Vec<Vector>> {
        self.submersion
            .total
            .domain
            .sample(self.sampling.count, self.sampling.seed)
    }

    pub fn gradient_f(&self, p: &Vector) -> Result<Vector> {
        self.submersion.total.gradient(&self.f, p)
    }

    fn local(&self, p: &Vector) -> Result<Local> {
        Ok(Local {
            sp: self.submersion.split(p)?,
            st: self.structure.local(p)?,
            grad_f: self.gradient_f(p)?,
        })
    }

    fn mu_frame_at(&self, sp: &SplitPoint, phi: &Matrix) -> Vec<Vector> {
        let g = &sp.geo.g;
        let phi_v: Vec<Vector> = sp.frame.vertical.iter().map(|v| phi * v).collect();
        let mut basis = linalg::orthonormalize(g, &phi_v);
        let k = basis.len();
        let mut candidates = basis.clone();
        candidates.extend(sp.frame.horizontal.iter().map(|x| sp.horizontal(x)));
        basis = linalg::orthonormalize(g, &candidates);
        let mut mu = basis.split_off(k.min(basis.len()));
        mu.iter_mut().for_each(linalg::fix_sign);
        mu
    }

    /// Orthonormal basis of `μ`, the complement of `φ(ker π_*)` in the horizontal space.
    pub fn mu_frame(&self, p: &Vector) -> Result<Vec<Vector>> {
        let sp = self.submersion.split(p)?;
        Ok(self.mu_frame_at(&sp, &self.structure.at(p)?))
    }

    /// Vertical part of `φV` for every vertical frame vector `V`.
    pub fn check_anti_invariant(&self, samples: &[Vector]) -> Result<AntiInvariance> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        let mut report = CheckReport::new(
            "vertical distribution anti-invariant",
            "anti-invariant",
            self.tolerances.algebraic,
        );
        for p in samples {
            let frame = self.submersion.build_frame(p)?;
            let phi = self.structure.at(p)?;
            for v in &frame.vertical {
                let (vert, _) = frame.project(&(&phi * v));
                report.observe(linalg::norm(&frame.metric, &vert));
            }
            report.sample();
        }
        let n = self.submersion.base.dim() as isize;
        let k = self.submersion.fibre_dim() as isize;
        let mu_dim = n - k;
        let lagrangian = mu_dim == 0;
        if mu_dim < 0 {
            report.fail(format!(
                "fibre dimension {k} exceeds base dimension {n}; phi(ker) cannot be horizontal"
            ));
        }
        report.note(format!("dim mu = {mu_dim}"));
        if lagrangian {
            report.note("Lagrangian: phi(ker) fills the horizontal space");
        }
        Ok(AntiInvariance {
            report,
            mu_dim,
            lagrangian,
        })
    }

    /// `φX = αX + βX` for a horizontal `X` at `p`.
    pub fn alpha_beta_split(&self, p: &Vector, x: &Vector) -> Result<SplitResult> {
        let sp = self.submersion.split(p)?;
        let phi = self.structure.at(p)?;
        let vx = sp.norm(&sp.vertical(x));
        if vx > 1e-10 * sp.norm(x).max(1.0) {
            return Err(Error::NotHorizontal {
                what: "split argument",
                point: p.iter().copied().collect(),
                vertical_norm: vx,
            });
        }
        let phi_x = &phi * x;
        let alpha = sp.vertical(&phi_x);
        let beta = &phi_x - &alpha;
        let mut defect = 0.0f64;
        for v in &sp.frame.vertical {
            defect = defect
                .max(sp.inner(&beta, v).abs())
                .max(sp.inner(&beta, &(&phi * v)).abs());
        }
        Ok(SplitResult {
            alpha,
            beta,
            mu_frame: self.mu_frame_at(&sp, &phi),
            mu_defect: defect,
        })
    }

    /// `(P_U V, Q_U V)`: horizontal and vertical parts of `(∇_U φ)V`.
    pub fn pq_tensors(
        &self,
        u: &VectorField,
        v: &VectorField,
        p: &Vector,
    ) -> Result<(Vector, Vector)> {
        let nabla = hermitian::nabla_phi(&self.submersion.total, &self.structure, u, v, p)?;
        let pv = self.submersion.vertical_projector(p)?;
        let q = &pv * &nabla;
        Ok((nabla - &q, q))
    }

    /// Bishop's criterion: `T_V W = −g(V, W) grad f` on the vertical frame.
    pub fn check_bishop(&self, samples: &[Vector]) -> Result<CheckReport> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        let mut report = CheckReport::new(
            "Clairaut criterion T_V W = -g(V,W) grad f",
            "bishop-clairaut",
            self.tolerances.fd,
        );
        let mut grad_max = 0.0f64;
        for p in samples {
            let sp = self.submersion.split(p)?;
            let grad = self.gradient_f(p)?;
            grad_max = grad_max.max(sp.norm(&grad));
            for a in &sp.frame.vertical {
                for b in &sp.frame.vertical {
                    let r = sp.t(a, b) + &grad * sp.inner(a, b);
                    report.observe(sp.norm(&r));
                }
            }
            report.sample();
        }
        if grad_max <= self.tolerances.fd {
            report.note("f is constant: fibres must be totally geodesic; Clairaut with r = e^f constant");
        } else {
            report.note(format!("Clairaut with r = e^f, f = {}", self.f));
        }
        Ok(report)
    }

    /// `e^{f} sin θ` along a curve, `sin θ = ‖Vḣ‖ / ‖ḣ‖`.
    pub fn clairaut_invariant(&self, traj: &GeodesicTrajectory) -> Result<InvariantDrift> {
        let mut samples = Vec::with_capacity(traj.len());
        for t in &traj.samples {
            let g = self.submersion.total.metric_at(&t.point)?;
            let speed = linalg::norm(&g, &t.velocity);
            if speed == 0.0 {
                return Err(Error::NonRegularCurve { s: t.s });
            }
            let pv = self.submersion.vertical_projector(&t.point)?;
            let sin_theta = (linalg::norm(&g, &(&pv * &t.velocity)) / speed).min(1.0);
            let value = self.f.eval(t.point.as_slice())?.exp() * sin_theta;
            samples.push(InvariantSample {
                s: t.s,
                sin_theta,
                value,
            });
        }
        let initial = samples.first().map_or(0.0, |s| s.value);
        let max_abs_drift = samples
            .iter()
            .map(|s| (s.value - initial).abs())
            .fold(0.0, f64::max);
        Ok(InvariantDrift {
            samples,
            initial,
            max_abs_drift,
            relative_drift: max_abs_drift / initial.abs().max(INVARIANT_FLOOR),
        })
    }

    /// Pointwise pieces of the velocity at trajectory index `j`:
    /// `(U, X, φU, αX, βX)`.
    fn velocity_parts(&self, traj: &GeodesicTrajectory, j: usize) -> Result<[Vector; 5]> {
        let t = &traj.samples[j];
        let pv = self.submersion.vertical_projector(&t.point)?;
        let phi = self.structure.at(&t.point)?;
        let u = &pv * &t.velocity;
        let x = &t.velocity - &u;
        let phi_u = &phi * &u;
        let phi_x = &phi * &x;
        let alpha = &pv * &phi_x;
        let beta = &phi_x - &alpha;
        Ok([u, x, phi_u, alpha, beta])
    }

    /// Vertical and horizontal combinations whose vanishing characterises
    /// geodesics of an anti-invariant submersion from a nearly Kaehler manifold.
    ///
    /// `V∇_X αX + ∇̂_U αX` is evaluated jointly as `V∇_ḣ αX`; separately each
    /// term depends on how `αX` is extended off the curve. Derivatives along
    /// the curve use a five-point stencil on the trajectory samples, so
    /// `index` must have two neighbours on each side.
    pub fn geodesic_condition_residuals(
        &self,
        traj: &GeodesicTrajectory,
        index: usize,
    ) -> Result<GeodesicResiduals> {
        Ok(self.geodesic_terms(traj, index)?.0)
    }

    fn geodesic_terms(
        &self,
        traj: &GeodesicTrajectory,
        index: usize,
    ) -> Result<(GeodesicResiduals, Local, [Vector; 5], Vector)> {
        if index < 2 || index + 2 >= traj.len() {
            return Err(Error::InvalidArgument(format!(
                "index {index} is not interior to a trajectory of {} samples",
                traj.len()
            )));
        }
        let sample = &traj.samples[index];
        let w = &sample.velocity;
        let loc = self.local(&sample.point)?;
        if loc.sp.norm(w) == 0.0 {
            return Err(Error::NonRegularCurve { s: sample.s });
        }
        let parts: Vec<[Vector; 5]> = (index - 2..=index + 2)
            .map(|j| self.velocity_parts(traj, j))
            .collect::<Result<_>>()?;
        let h = traj.step;
        // d/ds of component `c` at the centre.
        let d_ds = |c: usize| -> Vector {
            ((&parts[3][c] - &parts[1][c]) * 8.0 - (&parts[4][c] - &parts[0][c])) / (12.0 * h)
        };
        let gamma = &loc.sp.geo.christoffel;
        let along = |c: usize| d_ds(c) + gamma.contract(w, &parts[2][c]);
        let [u, x, phi_u, alpha, beta] = parts[2].clone();
        let sp = &loc.sp;

        let nabla_alpha = along(3);
        let vertical = sp.a(&x, &phi_u)
            + sp.a(&x, &beta)
            + sp.t(&u, &beta)
            + sp.t(&u, &phi_u)
            + sp.vertical(&nabla_alpha);
        let nabla_beta = along(4);
        let horizontal = sp.horizontal(&(along(2) + &nabla_beta))
            + sp.a(&x, &alpha)
            + sp.t(&u, &alpha);
        let res = GeodesicResiduals {
            s: sample.s,
            vertical_norm: sp.norm(&vertical),
            horizontal_norm: sp.norm(&horizontal),
            vertical,
            horizontal,
        };
        Ok((res, loc, [u, x, phi_u, alpha, beta], nabla_beta))
    }

    /// Geodesic residuals at every interior sample.
    pub fn check_geodesic_conditions(&self, traj: &GeodesicTrajectory) -> Result<CheckReport> {
        let mut report = CheckReport::new(
            "geodesic conditions (vertical and horizontal)",
            "geodesic-characterisation",
            self.tolerances.geodesic,
        );
        let (mut v_max, mut h_max) = (0.0f64, 0.0f64);
        for i in 2..traj.len().saturating_sub(2) {
            let r = self.geodesic_condition_residuals(traj, i)?;
            v_max = v_max.max(r.vertical_norm);
            h_max = h_max.max(r.horizontal_norm);
            report.observe(r.vertical_norm);
            report.observe(r.horizontal_norm);
            report.sample();
        }
        report.note(format!("vertical {v_max:.3e}, horizontal {h_max:.3e}"));
        Ok(report)
    }

    /// `g(grad f, X) g(U, U) = g(H∇_ḣ βX + A_X αX + T_U αX + P_ḣ U, φU)` at every
    /// interior sample of a geodesic.
    pub fn check_clairaut_condition(&self, traj: &GeodesicTrajectory) -> Result<CheckReport> {
        let mut report = CheckReport::new(
            "Clairaut condition along geodesic",
            "clairaut-geodesic-condition",
            self.tolerances.geodesic,
        );
        for i in 2..traj.len().saturating_sub(2) {
            let (res, loc, [u, x, phi_u, alpha, _beta], nabla_beta) = self.geodesic_terms(traj, i)?;
            let geo_res = res.vertical_norm.max(res.horizontal_norm);
            if geo_res > self.tolerances.geodesic {
                return Err(Error::NotGeodesic {
                    s: res.s,
                    residual: geo_res,
                    tolerance: self.tolerances.geodesic,
                });
            }
            let sp = &loc.sp;
            let w = &traj.samples[i].velocity;
            let p_term = sp.horizontal(&loc.st.nabla(&sp.geo, w, &u));
            let lhs = sp.inner(&loc.grad_f, &x) * sp.inner(&u, &u);
            let rhs_vec = sp.horizontal(&nabla_beta) + sp.a(&x, &alpha) + sp.t(&u, &alpha) + p_term;
            let rhs = sp.inner(&rhs_vec, &phi_u);
            report.observe(lhs - rhs);
            report.sample();
        }
        Ok(report)
    }

    /// `A_{φW} φX + Q_W φX = X(f) W` for `W` in the vertical frame, with `X`
    /// drawn from `μ` and from the whole horizontal frame (reported apart).
    /// Samples where `φW` is not basic are skipped and counted.
    pub fn check_basic_identity(&self, samples: &[Vector]) -> Result<BasicIdentityReport> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        let tol = self.tolerances.fd;
        let mut mu_rep = CheckReport::new(
            "A_{phi W} phi X + Q_W phi X = X(f) W, X in mu",
            "basic-identity-mu",
            tol,
        );
        let mut hor_rep = CheckReport::new(
            "A_{phi W} phi X + Q_W phi X = X(f) W, X horizontal",
            "basic-identity-horizontal",
            tol,
        )
        .informational();
        let mut basic = CheckReport::new("phi W basic", "phi-w-basic", tol).informational();
        let mut skipped = 0usize;
        for p in samples {
            let loc = self.local(p)?;
            let sp = &loc.sp;
            let mu = self.mu_frame_at(sp, &loc.st.phi);
            let mut sample_basic = true;
            for w in &sp.frame.vertical {
                let b = self.basic_defect(sp, w)?;
                basic.observe(b);
                if b > tol {
                    sample_basic = false;
                    continue;
                }
                let phi_w = loc.phi(w);
                let residual = |x: &Vector| {
                    let phi_x = loc.phi(x);
                    let q = sp.vertical(&loc.st.nabla(&sp.geo, w, &phi_x));
                    let lhs = sp.a(&phi_w, &phi_x) + q;
                    sp.norm(&(lhs - w * sp.inner(&loc.grad_f, x)))
                };
                for x in &mu {
                    mu_rep.observe(residual(x));
                }
                for x in &sp.frame.horizontal {
                    hor_rep.observe(residual(x));
                }
            }
            basic.sample();
            if sample_basic {
                mu_rep.sample();
                hor_rep.sample();
            } else {
                skipped += 1;
            }
        }
        if skipped > 0 {
            let msg = format!("{skipped} samples skipped: phi W not basic");
            mu_rep.note(msg.clone());
            hor_rep.note(msg);
        }
        if mu_rep.samples > 0 && self.submersion.base.dim() <= self.submersion.fibre_dim() {
            mu_rep.note("mu = 0: identity is vacuous for X in mu");
        }
        Ok(BasicIdentityReport {
            mu_frame: mu_rep,
            horizontal_frame: hor_rep,
            basic,
        })
    }

    /// How far `φW` is from basic at the centre of `sp`, where `W` is extended
    /// as the unit vertical field `P_V(q) w / ‖P_V(q) w‖`: the horizontal
    /// defect of `φW` plus the largest vertical derivative of `π_*(φW)`.
    fn basic_defect(&self, sp: &SplitPoint, w: &Vector) -> Result<f64> {
        let p = sp.point();
        let phi_w = &self.structure.at(p)? * w;
        let horizontal_defect = sp.norm(&sp.vertical(&phi_w));
        let pushed = |q: &Vector| -> Result<Vector> {
            let pv = self.submersion.vertical_projector(q)?;
            let g = self.submersion.total.metric_at(q)?;
            let wq = &pv * w;
            let n = linalg::norm(&g, &wq);
            let phi = self.structure.at(q)?;
            Ok(self.submersion.map.differential(q)? * (phi * (wq / n)))
        };
        let gn = self
            .submersion
            .base
            .metric_at(&self.submersion.map.eval(p)?)?;
        let mut worst = horizontal_defect;
        for v in &sp.frame.vertical {
            let d = stencil_along(p, v, FD_STEP, pushed)?;
            worst = worst.max(linalg::norm(&gn, &d));
        }
        Ok(worst)
    }

    /// `∇φ` identities: antisymmetry of `P`, `Q` (nearly Kaehler),
    /// `φ(P_Y X + Q_Y X) + P_Y φX + Q_Y φX = 0` and
    /// `g(P_X Y + Q_X Y, Z) + g(Y, P_X Z + Q_X Z) = 0`.
    pub fn check_pq_identities(&self, samples: &[Vector]) -> Result<PqReport> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        let tol = self.tolerances.algebraic;
        let mut anti = CheckReport::new("P and Q antisymmetric", "pq-antisymmetry", tol);
        let mut conj = CheckReport::new("phi (nabla_Y phi) X = -(nabla_Y phi) phi X", "pq-phi-conjugation", tol);
        let mut dual = CheckReport::new("nabla_X phi skew-adjoint", "pq-duality", tol);
        for p in samples {
            let sp = self.submersion.split(p)?;
            let st = self.structure.local(p)?;
            let basis: Vec<Vector> = sp.frame.all().cloned().collect();
            for x in &basis {
                for y in &basis {
                    let xy = st.nabla(&sp.geo, x, y);
                    let yx = st.nabla(&sp.geo, y, x);
                    let (pxy, qxy) = (sp.horizontal(&xy), sp.vertical(&xy));
                    let (pyx, qyx) = (sp.horizontal(&yx), sp.vertical(&yx));
                    anti.observe(sp.norm(&(pxy + pyx)).max(sp.norm(&(qxy + qyx))));

                    let phi_x = &st.phi * x;
                    let lhs = &st.phi * st.nabla(&sp.geo, y, x) + st.nabla(&sp.geo, y, &phi_x);
                    conj.observe(sp.norm(&lhs));

                    for z in &basis {
                        let r = sp.inner(&xy, z) + sp.inner(y, &st.nabla(&sp.geo, x, z));
                        dual.observe(r);
                    }
                }
            }
            anti.sample();
            conj.sample();
            dual.sample();
        }
        Ok(PqReport {
            antisymmetry: anti,
            conjugation: conj,
            duality: dual,
        })
    }

    /// `‖φ(P_ḣ φḣ + Q_ḣ φḣ)‖` at one trajectory sample.
    pub fn holomorphic_planarity(&self, traj: &GeodesicTrajectory, index: usize) -> Result<f64> {
        let t = traj
            .samples
            .get(index)
            .ok_or_else(|| Error::InvalidArgument(format!("no sample {index}")))?;
        let geo = self.submersion.total.local(&t.point)?;
        let st = self.structure.local(&t.point)?;
        let phi_w = &st.phi * &t.velocity;
        Ok(geo.norm(&(&st.phi * st.nabla(&geo, &t.velocity, &phi_w))))
    }

    /// Consistency of the scenario with the either/or statements about
    /// Clairaut anti-invariant submersions (checked on this scenario only).
    pub fn check_dichotomies(&self, samples: &[Vector]) -> Result<CheckReport> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        let tol = self.tolerances.fd;
        let mut report = CheckReport::new("fibre dichotomies", "clairaut-dichotomies", tol);
        let k = self.submersion.fibre_dim();
        let mu_dim = self.submersion.base.dim() as isize - k as isize;
        let (mut const_defect, mut geodesic_defect, mut hyp_defect, mut cor1_lhs) =
            (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for p in samples {
            let loc = self.local(p)?;
            let sp = &loc.sp;
            let vs = &sp.frame.vertical;
            let mut in_phi_ker = loc.grad_f.clone();
            for v in vs {
                let pv = loc.phi(v);
                let c = sp.inner(&loc.grad_f, &pv);
                const_defect = const_defect.max(c.abs());
                in_phi_ker.axpy(-c, &pv, 1.0);
            }
            hyp_defect = hyp_defect.max(sp.norm(&in_phi_ker));
            for a in vs {
                for b in vs {
                    geodesic_defect = geodesic_defect.max(sp.norm(&sp.t(a, b)));
                }
            }
            let mu = self.mu_frame_at(sp, &loc.st.phi);
            for w in vs {
                let phi_w = loc.phi(w);
                for x in &mu {
                    let phi_x = loc.phi(x);
                    let q = sp.vertical(&loc.st.nabla(&sp.geo, w, &phi_x));
                    cor1_lhs = cor1_lhs.max(sp.norm(&(sp.a(&phi_w, &phi_x) + q)));
                }
            }
            report.sample();
        }
        let constant = const_defect <= tol;
        let geodesic = geodesic_defect <= tol;
        let one_dim = k == 1;
        let hypothesis = hyp_defect <= tol;
        report.note(format!("dim ker = {k}, dim mu = {mu_dim}"));
        report.note(format!(
            "f constant on phi(ker): {constant} ({const_defect:.3e}); fibres totally geodesic: {geodesic} ({geodesic_defect:.3e})"
        ));
        if hypothesis {
            report.note("grad f lies in phi(ker)");
            if !(constant || one_dim) {
                report.fail("grad f in phi(ker) but f varies on phi(ker) and fibres are not 1-dimensional");
            } else {
                report.note("either f constant on phi(ker) or 1-dimensional fibres: satisfied");
            }
            if k > 1 {
                let vanishes = cor1_lhs <= tol;
                if vanishes != geodesic {
                    report.fail(format!(
                        "totally geodesic = {geodesic} but A_(phi W) phi X + Q_W phi X vanishes = {vanishes}"
                    ));
                } else {
                    report.note("totally geodesic iff A_(phi W) phi X + Q_W phi X = 0: consistent");
                }
            }
        } else {
            report.note(format!(
                "grad f not in phi(ker) ({hyp_defect:.3e}); constancy/dimension dichotomy not applicable"
            ));
        }
        if mu_dim == 0 {
            if one_dim || geodesic {
                report.note("Lagrangian: fibres 1-dimensional or totally geodesic: satisfied");
            } else {
                report.fail("Lagrangian but fibres neither 1-dimensional nor totally geodesic");
            }
        }
        Ok(report)
    }
}
