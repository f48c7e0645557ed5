//! Almost complex structures and the almost Hermitian, nearly Kaehler and
//! Kaehler conditions.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::{LocalGeometry, ManifoldSpec, VectorField};
use crate::linalg::{Matrix, Vector};
use crate::report::CheckReport;

/// `(1,1)`-tensor in the coordinate frame: `(φv)^i = φ^i_j v^j`.
#[derive(Debug, Clone)]
pub struct AlmostComplexField {
    dim: usize,
    entries: Vec<Expr>,
    /// `partials[k][i * dim + j] = ∂_k φ^i_j`
    partials: Vec<Vec<Expr>>,
}

impl AlmostComplexField {
    pub fn new(entries: Vec<Vec<Expr>>) -> Result<Self> {
        let dim = entries.len();
        if dim == 0 || entries.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension("almost complex structure must be square".into()));
        }
        let entries: Vec<Expr> = entries.into_iter().flatten().collect();
        if entries.iter().any(|e| e.min_dim() > dim) {
            return Err(Error::Dimension(format!(
                "structure entries use coordinates beyond x{dim}"
            )));
        }
        let partials = (0..dim)
            .map(|k| entries.iter().map(|e| e.diff(k)).collect())
            .collect();
        Ok(AlmostComplexField {
            dim,
            entries,
            partials,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        &self.entries[i * self.dim + j]
    }

    fn eval_matrix(&self, exprs: &[Expr], p: &Vector) -> Result<Matrix> {
        let m = self.dim;
        let x = p.as_slice();
        let mut out = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let e = &exprs[i * m + j];
                if !e.is_zero() {
                    out[(i, j)] = e.eval(x)?;
                }
            }
        }
        Ok(out)
    }

    pub fn at(&self, p: &Vector) -> Result<Matrix> {
        self.eval_matrix(&self.entries, p)
    }

    /// `∂_k φ` at `p`.
    pub fn partial_at(&self, p: &Vector, k: usize) -> Result<Matrix> {
        self.eval_matrix(&self.partials[k], p)
    }

    pub fn apply(&self, p: &Vector, v: &Vector) -> Result<Vector> {
        Ok(self.at(p)? * v)
    }

    /// The field `φY` built symbolically.
    pub fn apply_field(&self, y: &VectorField) -> VectorField {
        let m = self.dim;
        VectorField::new(
            (0..m)
                .map(|i| {
                    Expr::sum((0..m).map(|j| {
                        Expr::mul(self.entries[i * m + j].clone(), y.components[j].clone())
                    }))
                })
                .collect(),
        )
    }

    /// Pointwise data for repeated `(∇_X φ)Y` evaluations at one point.
    pub fn local(&self, p: &Vector) -> Result<LocalStructure> {
        Ok(LocalStructure {
            phi: self.at(p)?,
            partials: (0..self.dim)
                .map(|k| self.partial_at(p, k))
                .collect::<Result<_>>()?,
        })
    }
}

/// `φ` and its coordinate partials at one point.
#[derive(Debug, Clone)]
pub struct LocalStructure {
    pub phi: Matrix,
    partials: Vec<Matrix>,
}

impl LocalStructure {
    /// Tensorial form `(∇_x φ)y = x^k (∂_k φ) y + Γ(x, φy) − φ Γ(x, y)`.
    pub fn nabla(&self, geo: &LocalGeometry, x: &Vector, y: &Vector) -> Vector {
        let mut d = Vector::zeros(y.len());
        for (k, dk) in self.partials.iter().enumerate() {
            if x[k] != 0.0 {
                d += dk * y * x[k];
            }
        }
        let gamma = &geo.christoffel;
        d + gamma.contract(x, &(&self.phi * y)) - &self.phi * gamma.contract(x, y)
    }
}

fn check_dims(m: &ManifoldSpec, j: &AlmostComplexField) -> Result<()> {
    if m.dim() != j.dim() {
        return Err(Error::Dimension(format!(
            "structure is {}x{} on a {}-manifold",
            j.dim(),
            j.dim(),
            m.dim()
        )));
    }
    Ok(())
}

/// `((∇_X φ)Y)(p) = ∇_X(φY) − φ(∇_X Y)`, from covariant derivatives of fields.
pub fn nabla_phi(
    m: &ManifoldSpec,
    j: &AlmostComplexField,
    x: &VectorField,
    y: &VectorField,
    p: &Vector,
) -> Result<Vector> {
    check_dims(m, j)?;
    let phi_y = j.apply_field(y);
    let a = m.covariant_derivative(x, &phi_y, p)?;
    let b = m.covariant_derivative(x, y, p)?;
    Ok(a - j.apply(p, &b)?)
}

pub(crate) fn random_unit(rng: &mut ChaCha8Rng, geo: &LocalGeometry) -> Vector {
    loop {
        let v = Vector::from_fn(geo.point.len(), |_, _| rng.gen_range(-1.0..1.0));
        let n = geo.norm(&v);
        if n > 1e-3 {
            return v / n;
        }
    }
}

const RANDOM_PAIRS: usize = 4;

/// Residuals of `φ² = −I` and `g(φX, φY) = g(X, Y)` over the samples.
pub fn check_structure(
    m: &ManifoldSpec,
    j: &AlmostComplexField,
    samples: &[Vector],
    tolerance: f64,
    seed: u64,
) -> Result<CheckReport> {
    check_dims(m, j)?;
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new("almost Hermitian structure", "almost-hermitian", tolerance);
    let (mut square, mut compat) = (0.0f64, 0.0f64);
    let dim = m.dim();
    for p in samples {
        let geo = m.local(p)?;
        let phi = j.at(p)?;
        let sq = (&phi * &phi + Matrix::identity(dim, dim)).amax();
        square = square.max(sq);
        report.observe(sq);
        for _ in 0..RANDOM_PAIRS {
            let x = random_unit(&mut rng, &geo);
            let y = random_unit(&mut rng, &geo);
            let r = (geo.inner(&(&phi * &x), &(&phi * &y)) - geo.inner(&x, &y)).abs();
            compat = compat.max(r);
            report.observe(r);
        }
        report.sample();
    }
    report.note(format!("max |phi^2 + I| = {square:.3e}"));
    report.note(format!("max |g(phi X, phi Y) - g(X, Y)| = {compat:.3e}"));
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct NearlyKaehlerReport {
    /// `‖(∇_Xφ)Y + (∇_Yφ)X‖`
    pub nearly_kaehler: CheckReport,
    /// `‖(∇_Xφ)Y‖`
    pub kaehler: CheckReport,
    /// Worst symmetrised residual at each sample, in sample order.
    pub per_sample: Vec<f64>,
}

impl NearlyKaehlerReport {
    /// Fraction of samples whose symmetrised residual exceeds `threshold`.
    pub fn fraction_above(&self, threshold: f64) -> f64 {
        if self.per_sample.is_empty() {
            return 0.0;
        }
        self.per_sample.iter().filter(|r| **r > threshold).count() as f64
            / self.per_sample.len() as f64
    }
}

/// Field pairs: every pair of unit coordinate directions plus random unit pairs.
fn test_pairs(rng: &mut ChaCha8Rng, geo: &LocalGeometry) -> Vec<(Vector, Vector)> {
    let m = geo.point.len();
    let unit = |i: usize| {
        let e = Vector::from_fn(m, |k, _| if k == i { 1.0 } else { 0.0 });
        let n = geo.norm(&e);
        e / n
    };
    let mut pairs = Vec::new();
    for a in 0..m {
        for b in a..m {
            pairs.push((unit(a), unit(b)));
        }
    }
    for _ in 0..RANDOM_PAIRS {
        pairs.push((random_unit(rng, geo), random_unit(rng, geo)));
    }
    pairs
}

/// Nearly Kaehler residual with a Kaehler sub-verdict. Assumes the
/// structure already passed [`check_structure`].
pub fn check_nearly_kaehler(
    m: &ManifoldSpec,
    j: &AlmostComplexField,
    samples: &[Vector],
    tolerance: f64,
    seed: u64,
) -> Result<NearlyKaehlerReport> {
    check_dims(m, j)?;
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nk = CheckReport::new("nearly Kaehler", "nearly-kaehler", tolerance);
    let mut k = CheckReport::new("Kaehler", "kaehler", tolerance).informational();
    let mut per_sample = Vec::with_capacity(samples.len());
    for p in samples {
        let geo = m.local(p)?;
        let st = j.local(p)?;
        let mut worst = 0.0f64;
        for (x, y) in test_pairs(&mut rng, &geo) {
            let xy = st.nabla(&geo, &x, &y);
            let yx = st.nabla(&geo, &y, &x);
            let sym = geo.norm(&(&xy + &yx));
            worst = worst.max(sym);
            nk.observe(sym);
            k.observe(geo.norm(&xy).max(geo.norm(&yx)));
        }
        per_sample.push(worst);
        nk.sample();
        k.sample();
    }
    Ok(NearlyKaehlerReport {
        nearly_kaehler: nk,
        kaehler: k,
        per_sample,
    })
}
