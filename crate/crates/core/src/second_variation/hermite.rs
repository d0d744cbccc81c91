use crate::error::{Error, Result};
use crate::grids::{Grid, SampledFunction};
use num_complex::Complex64;
use std::f64::consts::PI;

/// A polynomial with real coefficients in ascending powers, tagged with the
/// multi-index of the eigenfunction it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitePolynomial {
    pub alpha: Vec<usize>,
    pub coeffs: Vec<f64>,
}

impl HermitePolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// Variance 1/(2πp) of the weight G^p normalised to a probability density.
pub fn weight_variance(p: f64) -> f64 {
    1.0 / (2.0 * PI * p)
}

/// Monic orthogonal polynomials Q_0..Q_{n_max} for the weight G^p on ℝ.
/// Gram–Schmidt on {x^n} against a centred Gaussian weight of variance v
/// produces the three-term recurrence Q_{n+1} = xQ_n − n·v·Q_{n−1}; the
/// products Q_n G^{p/2} are the eigenfunctions of the second-variation
/// operator.
pub fn hermite_polynomials(n_max: usize, p: f64) -> Result<Vec<HermitePolynomial>> {
    if n_max > 20 {
        return Err(Error::InvalidParameter(format!("n_max = {n_max} exceeds 20")));
    }
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::InvalidExponent(format!("p = {p} outside (1, 2)")));
    }
    let v = weight_variance(p);
    let mut out: Vec<Vec<f64>> = vec![vec![1.0]];
    if n_max >= 1 {
        out.push(vec![0.0, 1.0]);
    }
    for n in 1..n_max {
        let mut next = vec![0.0; n + 2];
        for (k, &c) in out[n].iter().enumerate() {
            next[k + 1] += c;
        }
        for (k, &c) in out[n - 1].iter().enumerate() {
            next[k] -= n as f64 * v * c;
        }
        out.push(next);
    }
    Ok(out.into_iter().enumerate().map(|(n, coeffs)| HermitePolynomial { alpha: vec![n], coeffs }).collect())
}

/// ∫ Q_n² G^p = n! vⁿ p^{−1/2} in one dimension.
pub fn hermite_norm_sq(n: usize, p: f64) -> f64 {
    let v = weight_variance(p);
    (1..=n).fold(1.0, |acc, k| acc * k as f64 * v) / p.sqrt()
}

/// (p−1)^{|α|}(2−p)^{d/2}.
pub fn predicted_eigenvalue(order: usize, p: f64, d: usize) -> f64 {
    (p - 1.0).powi(order as i32) * (2.0 - p).powf(d as f64 / 2.0)
}

fn product_values(alpha: &[usize], p: f64, grid: &Grid, extra_power: f64) -> Result<SampledFunction> {
    let d = grid.dim();
    if alpha.len() != d {
        return Err(Error::InvalidParameter("multi-index length differs from grid dimension".into()));
    }
    let order: usize = alpha.iter().sum();
    if order > 12 {
        return Err(Error::InvalidParameter(format!("|α| = {order} exceeds 12")));
    }
    let top = *alpha.iter().max().unwrap_or(&0);
    let polys = hermite_polynomials(top, p)?;
    let s = p / 2.0 + extra_power;
    Ok(SampledFunction::from_real_fn(*grid, |x| {
        let mut v = 1.0;
        let mut r2 = 0.0;
        for k in 0..d {
            v *= polys[alpha[k]].eval(x[k]);
            r2 += x[k] * x[k];
        }
        v * (-PI * s * r2).exp()
    }))
}

/// ψ_α = Q_α G^{p/2}, normalised in L² on the grid.
pub fn eigenfunction(alpha: &[usize], p: f64, grid: &Grid) -> Result<SampledFunction> {
    let f = product_values(alpha, p, grid, 0.0)?;
    let n = f.inner(&f)?.re.sqrt();
    Ok(f.scale(Complex64::new(1.0 / n, 0.0)))
}

/// e_α = ψ_α G^{(2−p)/2} = Q_α G up to normalisation, scaled so that
/// ∫|e_α|² G^{p−2} = 1. Unlike ψ_α these directions lie in the normal space
/// at G once |α| ≥ 3.
pub fn normal_direction(alpha: &[usize], p: f64, grid: &Grid) -> Result<SampledFunction> {
    let f = product_values(alpha, p, grid, 1.0 - p / 2.0)?;
    let w: f64 = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let x = grid.point(i);
            z.norm_sqr() * (PI * (2.0 - p) * (x[0] * x[0] + x[1] * x[1])).exp()
        })
        .sum::<f64>()
        * grid.cell_volume();
    Ok(f.scale(Complex64::new(1.0 / w.sqrt(), 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::second_variation::operator::operator_apply;

    #[derive(Clone, Copy, Debug, PartialEq)]
    struct Q(i128, i128);

    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    impl Q {
        fn new(n: i128, d: i128) -> Self {
            let g = gcd(n, d).max(1);
            let s = if d < 0 { -1 } else { 1 };
            Q(s * n / g, s * d / g)
        }
        fn add(self, o: Q) -> Q {
            Q::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
        }
        fn mul(self, o: Q) -> Q {
            Q::new(self.0 * o.0, self.1 * o.1)
        }
        fn div(self, o: Q) -> Q {
            Q::new(self.0 * o.1, self.1 * o.0)
        }
        fn neg(self) -> Q {
            Q(-self.0, self.1)
        }
    }

    /// Exact Gram–Schmidt for the standard normal weight in rationals; the
    /// result in y = x/√v rescales to the weight G^p.
    fn exact_gram_schmidt(n_max: usize) -> Vec<Vec<Q>> {
        let moment = |k: usize| -> Q {
            if k % 2 == 1 {
                Q(0, 1)
            } else {
                Q((1..k).step_by(2).map(|j| j as i128).product::<i128>().max(1), 1)
            }
        };
        let inner = |a: &[Q], b: &[Q]| -> Q {
            let mut s = Q(0, 1);
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    s = s.add(x.mul(y).mul(moment(i + j)));
                }
            }
            s
        };
        let mut basis: Vec<Vec<Q>> = Vec::new();
        for n in 0..=n_max {
            let mut v = vec![Q(0, 1); n + 1];
            v[n] = Q(1, 1);
            for b in &basis {
                let c = inner(&v, b).div(inner(b, b));
                for (k, &bk) in b.iter().enumerate() {
                    v[k] = v[k].add(c.mul(bk).neg());
                }
            }
            basis.push(v);
        }
        basis
    }

    #[test]
    fn low_order_closed_forms() {
        let p = 1.5;
        let h = hermite_polynomials(3, p).unwrap();
        assert_eq!(h[0].coeffs, vec![1.0]);
        assert_eq!(h[1].coeffs, vec![0.0, 1.0]);
        assert!((h[2].coeffs[0] + 1.0 / (2.0 * PI * p)).abs() < 1e-16);
        assert_eq!(h[3].degree(), 3);
        assert!(hermite_polynomials(21, p).is_err());
    }

    #[test]
    fn matches_exact_gram_schmidt() {
        let exact = exact_gram_schmidt(12);
        for p in [1.2, 1.5, 1.8] {
            let v = weight_variance(p);
            let h = hermite_polynomials(12, p).unwrap();
            for n in 0..=12 {
                for (k, q) in exact[n].iter().enumerate() {
                    let expect = q.0 as f64 / q.1 as f64 * v.powf((n - k) as f64 / 2.0);
                    let got = h[n].coeffs[k];
                    assert!((got - expect).abs() <= 1e-12 * expect.abs().max(1e-3), "n={n} k={k}: {got} vs {expect}");
                }
            }
        }
    }

    /// Images of monomials under the operator satisfy
    /// R_{xP} = (p−1)xR_P − (2π)^{−1}R_P' + (2π)^{−1}R_{P'} with R_1 = 1,
    /// where 𝒯(P G^{p/2}) = (2−p)^{1/2} R_P G^{p/2}. The eigenvectors of the
    /// resulting triangular map are the monic eigen-polynomials.
    #[test]
    fn recursion_oracle_agrees() {
        let p = 1.5;
        let n_max = 8;
        let poly_mul_x = |a: &[f64]| {
            let mut r = vec![0.0; a.len() + 1];
            r[1..].copy_from_slice(a);
            r
        };
        let deriv = |a: &[f64]| a.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect::<Vec<_>>();
        let add = |a: &[f64], b: &[f64], sb: f64| {
            let mut r = vec![0.0; a.len().max(b.len())];
            for (i, v) in a.iter().enumerate() {
                r[i] += v;
            }
            for (i, v) in b.iter().enumerate() {
                r[i] += sb * v;
            }
            r
        };
        // images[n] = R_{x^n}
        let mut images: Vec<Vec<f64>> = vec![vec![1.0]];
        for n in 0..n_max {
            let rp = &images[n];
            // R_{P'} for P = x^n is n R_{x^{n−1}}.
            let rdp: Vec<f64> = if n == 0 { vec![0.0] } else { images[n - 1].iter().map(|c| c * n as f64).collect() };
            let a = poly_mul_x(rp).iter().map(|c| c * (p - 1.0)).collect::<Vec<_>>();
            let b = add(&a, &deriv(rp), -1.0 / (2.0 * PI));
            images.push(add(&b, &rdp, 1.0 / (2.0 * PI)));
        }
        let h = hermite_polynomials(n_max, p).unwrap();
        for n in 0..=n_max {
            // Apply the map to Q_n = Σ c_k x^k and compare with (p−1)^n Q_n.
            let mut image = vec![0.0; n + 1];
            for (k, &c) in h[n].coeffs.iter().enumerate() {
                for (j, v) in images[k].iter().enumerate() {
                    image[j] += c * v;
                }
            }
            let lam = (p - 1.0).powi(n as i32);
            for (j, v) in image.iter().enumerate() {
                assert!((v - lam * h[n].coeffs[j]).abs() < 1e-12, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn eigenfunctions_orthonormal_and_exact() {
        let grid = Grid::default_for(1);
        let p = 1.5;
        let psi: Vec<_> = (0..=6).map(|n| eigenfunction(&[n], p, &grid).unwrap()).collect();
        for m in 0..=6 {
            for n in 0..=6 {
                let ip = psi[m].inner(&psi[n]).unwrap().re;
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-10);
            }
            let tpsi = operator_apply(&psi[m], p).unwrap();
            let lam = predicted_eigenvalue(m, p, 1);
            let r = tpsi.sub(&psi[m].scale(Complex64::new(lam, 0.0))).unwrap();
            assert!(r.inner(&r).unwrap().re.sqrt() < 1e-6);
        }
    }

    #[test]
    fn closed_form_norms() {
        let grid = Grid::default_for(1);
        for n in 0..6 {
            let f = product_values(&[n], 1.5, &grid, 0.0).unwrap();
            let got = f.inner(&f).unwrap().re;
            assert!((got / hermite_norm_sq(n, 1.5) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn normal_direction_weighting() {
        let grid = Grid::default_for(1);
        let p = 1.5;
        let e = normal_direction(&[3], p, &grid).unwrap();
        let psi = eigenfunction(&[3], p, &grid).unwrap();
        // e = ψ G^{(2−p)/2}.
        let back = psi.map_with_point(|x, z| z * (-PI * (2.0 - p) / 2.0 * x[0] * x[0]).exp());
        let diff = e.sub(&back).unwrap().sup_norm();
        assert!(diff < 1e-12);
    }
}
