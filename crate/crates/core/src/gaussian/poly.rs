use crate::error::{Error, Result};
use crate::grids::{Grid, SampledFunction};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// P(x) = −x·Ax + b·x + c with A real symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticPolynomial {
    a: DMatrix<f64>,
    b: Vec<Complex64>,
    c: Complex64,
}

impl QuadraticPolynomial {
    pub fn new(a: DMatrix<f64>, b: Vec<Complex64>, c: Complex64) -> Result<Self> {
        let d = a.nrows();
        if a.ncols() != d || b.len() != d || d == 0 {
            return Err(Error::InvalidParameter("inconsistent quadratic polynomial shapes".into()));
        }
        if a.iter().any(|x| !x.is_finite()) || b.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        let scale = a.amax().max(1.0);
        if (&a - a.transpose()).amax() > 1e-14 * scale {
            return Err(Error::InvalidParameter("quadratic part not symmetric".into()));
        }
        let sym = (&a + a.transpose()) * 0.5;
        if sym.clone().cholesky().is_none() {
            return Err(Error::InvalidParameter("quadratic part not positive definite".into()));
        }
        Ok(Self { a: sym, b, c })
    }

    /// The standard Gaussian's exponent −π|x|².
    pub fn standard(d: usize) -> Self {
        Self { a: DMatrix::identity(d, d) * PI, b: vec![Complex64::new(0.0, 0.0); d], c: Complex64::new(0.0, 0.0) }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &[Complex64] {
        &self.b
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let d = self.dim();
        let mut quad = 0.0;
        for m in 0..d {
            for n in 0..d {
                quad += self.a[(m, n)] * x[m] * x[n];
            }
        }
        let lin: Complex64 = self.b.iter().zip(x).map(|(b, &x)| b * x).sum();
        Complex64::new(-quad, 0.0) + lin + self.c
    }

    /// Coordinates in the fixed real basis of tangent directions; see
    /// [`basis_monomials`]. Off-diagonal quadratic coordinates are 2A_mn.
    pub fn to_coords(&self) -> Vec<f64> {
        let d = self.dim();
        let mut v = Vec::with_capacity(basis_len(d));
        for m in 0..d {
            for n in m..d {
                v.push(if m == n { self.a[(m, m)] } else { 2.0 * self.a[(m, n)] });
            }
        }
        for b in &self.b {
            v.push(b.re);
            v.push(b.im);
        }
        v.push(self.c.re);
        v.push(self.c.im);
        v
    }

    /// Inverse of [`Self::to_coords`]; fails if the quadratic part is not
    /// positive definite.
    pub fn from_coords(d: usize, v: &[f64]) -> Result<Self> {
        if v.len() != basis_len(d) {
            return Err(Error::InvalidParameter("coordinate vector length".into()));
        }
        let mut a = DMatrix::zeros(d, d);
        let mut i = 0;
        for m in 0..d {
            for n in m..d {
                if m == n {
                    a[(m, m)] = v[i];
                } else {
                    a[(m, n)] = v[i] / 2.0;
                    a[(n, m)] = v[i] / 2.0;
                }
                i += 1;
            }
        }
        let b = (0..d).map(|k| Complex64::new(v[i + 2 * k], v[i + 2 * k + 1])).collect();
        let c = Complex64::new(v[i + 2 * d], v[i + 2 * d + 1]);
        Self::new(a, b, c)
    }

    /// The polynomial of x ↦ P(x − t).
    pub fn translate(&self, t: &[f64]) -> Self {
        let d = self.dim();
        let mut b = self.b.clone();
        let mut c = self.c;
        for m in 0..d {
            let at: f64 = (0..d).map(|n| self.a[(m, n)] * t[n]).sum();
            b[m] += 2.0 * at;
            c -= Complex64::new(at * t[m], 0.0);
            c -= self.b[m] * t[m];
        }
        Self { a: self.a.clone(), b, c }
    }
}

/// The Gaussian exp(P).
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    pub params: QuadraticPolynomial,
}

impl Gaussian {
    pub fn new(params: QuadraticPolynomial) -> Self {
        Self { params }
    }

    pub fn standard(d: usize) -> Self {
        Self::new(QuadraticPolynomial::standard(d))
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.params.eval(x).exp()
    }

    /// ‖exp(P)‖_p^p = e^{p(Re c + ¼ Re b·A⁻¹Re b)} (π/p)^{d/2} det(A)^{−1/2}.
    pub fn lp_norm_pow(&self, p: f64) -> f64 {
        let a = &self.params.a;
        let d = self.params.dim();
        let br = nalgebra::DVector::from_iterator(d, self.params.b.iter().map(|z| z.re));
        let chol = a.clone().cholesky().expect("positive definite");
        let ainv_b = chol.solve(&br);
        let shift = 0.25 * br.dot(&ainv_b);
        (p * (self.params.c.re + shift)).exp() * (PI / p).powf(d as f64 / 2.0) / a.determinant().sqrt()
    }
}

/// Serialised form {A, b_re, b_im, c_re, c_im}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianJson {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b_re: Vec<f64>,
    pub b_im: Vec<f64>,
    pub c_re: f64,
    pub c_im: f64,
}

impl From<&Gaussian> for GaussianJson {
    fn from(g: &Gaussian) -> Self {
        let p = &g.params;
        let d = p.dim();
        Self {
            a: (0..d).map(|m| (0..d).map(|n| p.a[(m, n)]).collect()).collect(),
            b_re: p.b.iter().map(|z| z.re).collect(),
            b_im: p.b.iter().map(|z| z.im).collect(),
            c_re: p.c.re,
            c_im: p.c.im,
        }
    }
}

impl TryFrom<&GaussianJson> for Gaussian {
    type Error = Error;

    fn try_from(j: &GaussianJson) -> Result<Self> {
        let d = j.a.len();
        if j.a.iter().any(|r| r.len() != d) || j.b_re.len() != d || j.b_im.len() != d {
            return Err(Error::Format("inconsistent Gaussian JSON shapes".into()));
        }
        let a = DMatrix::from_fn(d, d, |m, n| j.a[m][n]);
        let b = j.b_re.iter().zip(&j.b_im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        Ok(Gaussian::new(QuadraticPolynomial::new(a, b, Complex64::new(j.c_re, j.c_im))?))
    }
}

/// Pointwise evaluation of exp(P) on a grid.
pub fn sample(g: &Gaussian, grid: &Grid) -> Result<SampledFunction> {
    if g.params.dim() != grid.dim() {
        return Err(Error::InvalidParameter("Gaussian and grid dimensions differ".into()));
    }
    let d = grid.dim();
    let f = SampledFunction::from_fn(*grid, |x| g.eval(&x[..d]));
    if f.validate().is_err() {
        return Err(Error::Overflow("exp(P) overflows on the grid".into()));
    }
    Ok(f)
}

/// Closed-form transform: Â = π²A⁻¹, b̂ = −πiA⁻¹b,
/// ĉ = c + ¼bᵀA⁻¹b + ln(π^{d/2}/√det A).
pub fn gaussian_fourier(g: &Gaussian) -> Gaussian {
    let p = &g.params;
    let d = p.dim();
    let ainv = p.a.clone().cholesky().expect("positive definite").inverse();
    let ainv_b: Vec<Complex64> = (0..d).map(|m| (0..d).map(|n| p.b[n] * ainv[(m, n)]).sum()).collect();
    let bab: Complex64 = p.b.iter().zip(&ainv_b).map(|(x, y)| x * y).sum();
    let a_hat = &ainv * (PI * PI);
    let b_hat = ainv_b.iter().map(|z| Complex64::new(0.0, -PI) * z).collect();
    let c_hat = p.c + bab * 0.25 + Complex64::new((d as f64 / 2.0) * PI.ln() - 0.5 * p.a.determinant().ln(), 0.0);
    let a_sym = (&a_hat + a_hat.transpose()) * 0.5;
    Gaussian::new(QuadraticPolynomial { a: a_sym, b: b_hat, c: c_hat })
}

/// Number of real tangent directions, d(d+1)/2 + 2d + 2.
pub fn basis_len(d: usize) -> usize {
    d * (d + 1) / 2 + 2 * d + 2
}

/// Values at x of the fixed real basis of 𝒫: −x_m x_n (m ≤ n), then x_k and
/// i·x_k for each k, then 1 and i.
pub fn basis_monomials(x: &[f64], out: &mut Vec<Complex64>) {
    let d = x.len();
    out.clear();
    for m in 0..d {
        for n in m..d {
            out.push(Complex64::new(-x[m] * x[n], 0.0));
        }
    }
    for &xk in x {
        out.push(Complex64::new(xk, 0.0));
        out.push(Complex64::new(0.0, xk));
    }
    out.push(Complex64::new(1.0, 0.0));
    out.push(Complex64::new(0.0, 1.0));
}

/// The functions {P_i·g} over the basis of [`basis_monomials`].
pub fn tangent_basis(g: &Gaussian, grid: &Grid) -> Result<Vec<SampledFunction>> {
    let gs = sample(g, grid)?;
    let d = grid.dim();
    let k = basis_len(d);
    let mut out: Vec<Vec<Complex64>> = vec![Vec::with_capacity(grid.len()); k];
    let mut buf = Vec::with_capacity(k);
    for (i, &gv) in gs.values().iter().enumerate() {
        let x = grid.point(i);
        basis_monomials(&x[..d], &mut buf);
        for (slot, &b) in out.iter_mut().zip(&buf) {
            slot.push(b * gv);
        }
    }
    out.into_iter().map(|v| SampledFunction::new(*grid, v)).collect()
}
