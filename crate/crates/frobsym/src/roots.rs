//! Root extraction for monic univariate polynomials, with multiplicities.
//!
//! Two regimes behind one entry point, [`roots_with_multiplicity`]:
//!
//! * **Exact scalars.** Zero roots are stripped, the polynomial is split
//!   square-free (Yun), and each factor's roots are found by
//!   guess-and-verify: approximate numerically, reconstruct a candidate
//!   Gaussian rational by continued fractions, check `p(r) = 0` *exactly*,
//!   deflate exactly, repeat — first from `f64` approximations, then from a
//!   high-precision pass. Every returned root is proven; if a factor
//!   resists (irrational roots), the error [`RootError::Irrational`] tells
//!   the caller to switch to the float pipeline.
//! * **Float scalars.** Simultaneous Aberth–Ehrlich iteration at the
//!   precision carried by the coefficients, followed by clustering: nearby
//!   approximations merge into one root with an integer multiplicity.
//!   Clusters too close to separate raise
//!   [`RootError::AmbiguousClusters`], a retry signal.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::RootError;
use crate::scalar::{bigfloat_to_rational, BigComplex, GaussianRational, Scalar};
use crate::univariate::UniPoly;

/// Scalar types that can extract the full root multiset of a monic
/// polynomial over themselves.
pub trait RootScalar: Scalar {
    fn extract_roots(poly: &UniPoly<Self>, tol: f64) -> Result<Vec<(Self, u64)>, RootError>;
}

/// All roots of a monic polynomial with their multiplicities, summing to
/// the degree, sorted canonically. `tol` only matters for float scalars,
/// where it floors the cluster radius.
pub fn roots_with_multiplicity<S: RootScalar>(
    poly: &UniPoly<S>,
    tol: f64,
) -> Result<Vec<(S, u64)>, RootError> {
    if !poly.is_monic() {
        return Err(RootError::NotMonic);
    }
    let mut roots = S::extract_roots(poly, tol)?;
    roots.sort_by(|(a, _), (b, _)| a.total_cmp(b));
    debug_assert_eq!(
        roots.iter().map(|(_, m)| *m as usize).sum::<usize>(),
        poly.degree().unwrap_or(0)
    );
    Ok(roots)
}

// ---------------------------------------------------------------------------
// Exact route
// ---------------------------------------------------------------------------

impl RootScalar for GaussianRational {
    fn extract_roots(poly: &UniPoly<Self>, _tol: f64) -> Result<Vec<(Self, u64)>, RootError> {
        let degree = poly.degree().unwrap_or(0);
        if degree == 0 {
            return Ok(Vec::new());
        }
        let mut out: Vec<(Self, u64)> = Vec::new();

        // strip zero roots: the valuation in t
        let valuation = poly.coeffs().iter().take_while(|c| c.is_zero()).count();
        let mut work = poly.clone();
        if valuation > 0 {
            out.push((Self::zero(), valuation as u64));
            work = UniPoly::from_coeffs(poly.coeffs()[valuation..].to_vec());
        }

        let mut unresolved = 0usize;
        for (factor, mult) in work.square_free_decomposition() {
            let mut g = factor;
            // two passes: f64 guesses, then a high-precision pass for
            // candidates the double guess missed
            for pass in 0..2 {
                if g.degree().unwrap_or(0) == 0 {
                    break;
                }
                let candidates = if pass == 0 {
                    f64_candidates(&g)
                } else {
                    highprec_candidates(&g)?
                };
                for cand in candidates {
                    // verification is exact, so a wrong guess is harmless
                    while g.degree().unwrap_or(0) > 0 && g.eval(&cand).is_zero() {
                        let linear = UniPoly::from_coeffs(vec![-cand.clone(), Self::one()]);
                        g = g.exact_div(&linear).expect("verified root divides");
                        out.push((cand.clone(), mult as u64));
                    }
                }
            }
            unresolved += g.degree().unwrap_or(0) * mult;
        }
        if unresolved > 0 {
            return Err(RootError::Irrational {
                degree,
                remaining: unresolved,
            });
        }
        Ok(out)
    }
}

// Candidate rationals reconstructed from f64 Aberth approximations.
fn f64_candidates(g: &UniPoly<GaussianRational>) -> Vec<GaussianRational> {
    let coeffs: Vec<Complex64> = g
        .coeffs()
        .iter()
        .map(|c| Complex64::new(c.re_f64(), c.im_f64()))
        .collect();
    if coeffs
        .iter()
        .any(|c| !c.re.is_finite() || !c.im.is_finite())
    {
        return Vec::new();
    }
    let max_den = BigInt::from(100_000_000i64);
    aberth_f64(&coeffs)
        .into_iter()
        .filter_map(|z| {
            let re = BigRational::from_float(z.re)?;
            let im = BigRational::from_float(z.im)?;
            Some(GaussianRational::new(
                best_rational(&re, &max_den),
                best_rational(&im, &max_den),
            ))
        })
        .collect()
}

// Candidates from a 192-bit Aberth pass; reaches denominators the f64 pass
// cannot resolve.
fn highprec_candidates(g: &UniPoly<GaussianRational>) -> Result<Vec<GaussianRational>, RootError> {
    const PREC: u32 = 192;
    let lifted = UniPoly::from_coeffs(
        g.coeffs()
            .iter()
            .map(|c| BigComplex::from_exact(c, PREC))
            .collect(),
    );
    let approx = aberth_big(&lifted, PREC)?;
    let max_den = BigInt::one() << 64;
    Ok(approx
        .into_iter()
        .filter_map(|z| {
            let re = bigfloat_to_rational(z.re())?;
            let im = bigfloat_to_rational(z.im())?;
            Some(GaussianRational::new(
                best_rational(&re, &max_den),
                best_rational(&im, &max_den),
            ))
        })
        .collect())
}

/// The last continued-fraction convergent of `x` with denominator at most
/// `max_den`. Callers verify candidates exactly, so this only needs to be
/// a good guess, not a certified best approximation.
fn best_rational(x: &BigRational, max_den: &BigInt) -> BigRational {
    let mut a = x.floor().to_integer();
    let mut frac = x - BigRational::from_integer(a.clone());
    // convergent recurrences p_k = a_k p_{k-1} + p_{k-2}
    let (mut p_prev, mut p) = (BigInt::one(), a.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    while !frac.is_zero() {
        let inv = frac.recip();
        a = inv.floor().to_integer();
        frac = inv - BigRational::from_integer(a.clone());
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        if &q_next > max_den {
            break;
        }
        (p_prev, p) = (p, p_next);
        (q_prev, q) = (q, q_next);
    }
    let _ = (p_prev, q_prev);
    BigRational::new(p, q)
}

// ---------------------------------------------------------------------------
// Float route
// ---------------------------------------------------------------------------

impl RootScalar for BigComplex {
    fn extract_roots(poly: &UniPoly<Self>, tol: f64) -> Result<Vec<(Self, u64)>, RootError> {
        let n = poly.degree().unwrap_or(0);
        if n == 0 {
            return Ok(Vec::new());
        }
        let prec = poly
            .coeffs()
            .iter()
            .map(BigComplex::precision_bits)
            .max()
            .unwrap_or(crate::scalar::float_precision());
        let approx = aberth_big(poly, prec)?;

        // Cluster radius: a multiplicity-m root computed at p bits smears
        // over ~2^(-p/m); 2^(-3p/4n) dominates that for every m <= n while
        // staying far below the separation of genuinely distinct values.
        let spread = (2f64).powf(-0.75 * prec as f64 / n as f64);
        let radius = tol.max(spread);

        // single-linkage clustering at the relative radius
        let mut cluster_of: Vec<usize> = (0..approx.len()).collect();
        for i in 0..approx.len() {
            for j in i + 1..approx.len() {
                let scale = 1.0 + approx[i].magnitude().max(approx[j].magnitude());
                let dist = (approx[i].clone() - approx[j].clone()).magnitude();
                if dist <= radius * scale {
                    let (a, b) = (cluster_root(&cluster_of, i), cluster_root(&cluster_of, j));
                    if a != b {
                        cluster_of[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut clusters: Vec<Vec<&BigComplex>> = Vec::new();
        let mut index_of = vec![usize::MAX; approx.len()];
        for (i, z) in approx.iter().enumerate() {
            let root = cluster_root(&cluster_of, i);
            if index_of[root] == usize::MAX {
                index_of[root] = clusters.len();
                clusters.push(Vec::new());
            }
            clusters[index_of[root]].push(z);
        }

        // centers and multiplicities
        let mut out: Vec<(BigComplex, u64)> = Vec::new();
        for members in &clusters {
            let mut sum = BigComplex::from_f64_parts_prec(0.0, 0.0, prec);
            for z in members {
                sum = sum + (*z).clone();
            }
            let count = members.len();
            let center = sum / BigComplex::from_f64_parts_prec(count as f64, 0.0, prec);
            out.push((center, count as u64));
        }

        // ambiguity guard: distinct clusters must be clearly separated
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                let scale = 1.0 + out[i].0.magnitude().max(out[j].0.magnitude());
                let dist = (out[i].0.clone() - out[j].0.clone()).magnitude();
                if dist < 3.0 * radius * scale {
                    return Err(RootError::AmbiguousClusters {
                        separation: dist,
                        tol: radius * scale,
                    });
                }
            }
        }
        Ok(out)
    }
}

fn cluster_root(parent: &[usize], mut i: usize) -> usize {
    while parent[i] != i {
        i = parent[i];
    }
    i
}

// ---------------------------------------------------------------------------
// Aberth–Ehrlich iteration
// ---------------------------------------------------------------------------

// Initial guesses on a circle of the Cauchy root bound's radius, with an
// irrational angle offset to dodge symmetric configurations.
fn initial_circle(n: usize, bound: f64) -> Vec<(f64, f64)> {
    (0..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / (n as f64) + 0.43;
            (bound * theta.cos(), bound * theta.sin())
        })
        .collect()
}

fn aberth_f64(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 1 {
        return vec![-coeffs[0] / coeffs[1]];
    }
    let deriv: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect();
    let bound = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = initial_circle(n, bound)
        .into_iter()
        .map(|(re, im)| Complex64::new(re, im))
        .collect();
    for _ in 0..200 {
        let mut max_step = 0.0f64;
        for j in 0..n {
            let (p, scale) = horner_with_scale(coeffs, z[j]);
            if p.norm() <= 1e-14 * scale {
                continue;
            }
            let dp = horner(&deriv, z[j]);
            if dp.norm() == 0.0 {
                let nudge = 1e-4 * (1.0 + z[j].norm());
                z[j] += Complex64::new(nudge, 0.0);
                max_step = f64::MAX;
                continue;
            }
            let w = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..n {
                if i != j {
                    let d = z[j] - z[i];
                    if d.norm() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let step = if denom.norm() == 0.0 { w } else { w / denom };
            z[j] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[j].norm()));
        }
        if max_step <= 1e-14 {
            break;
        }
    }
    z
}

fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

// Horner value together with `sum |c_k| |x|^k`, the backward-error scale.
fn horner_with_scale(coeffs: &[Complex64], x: Complex64) -> (Complex64, f64) {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    let xn = x.norm();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
        scale = scale * xn + c.norm();
    }
    (acc, scale)
}

fn aberth_big(poly: &UniPoly<BigComplex>, prec: u32) -> Result<Vec<BigComplex>, RootError> {
    let n = poly.degree().unwrap_or(0);
    let coeffs = poly.coeffs();
    if n == 1 {
        return Ok(vec![-coeffs[0].clone() / coeffs[1].clone()]);
    }
    let deriv = poly.derivative();
    let bound = 1.0
        + coeffs[..n]
            .iter()
            .map(Scalar::magnitude)
            .fold(0.0, f64::max);
    let mut z: Vec<BigComplex> = initial_circle(n, bound)
        .into_iter()
        .map(|(re, im)| BigComplex::from_f64_parts_prec(re, im, prec))
        .collect();
    // the backward-error stop: |p(z)| small relative to sum |c_k||z|^k
    let eps_value = (2f64).powi(-(prec.saturating_sub(10) as i32));
    let eps_step = (2f64).powi(-(prec.saturating_sub(8) as i32));
    let max_iter = 500;
    let mut last_correction = f64::MAX;
    for _ in 0..max_iter {
        let mut max_step = 0.0f64;
        let mut all_converged = true;
        for j in 0..n {
            let p = poly.eval(&z[j]);
            let scale = value_scale(coeffs, &z[j]);
            if p.magnitude() <= eps_value * scale {
                continue;
            }
            all_converged = false;
            let dp = deriv.eval(&z[j]);
            let Some(w) = dp.invert().map(|inv| p.clone() * inv) else {
                z[j] = z[j].clone()
                    + BigComplex::from_f64_parts_prec(1e-4 * (1.0 + z[j].magnitude()), 0.0, prec);
                max_step = f64::MAX;
                continue;
            };
            let mut s = BigComplex::from_f64_parts_prec(0.0, 0.0, prec);
            for i in 0..n {
                if i != j {
                    if let Some(inv) = (z[j].clone() - z[i].clone()).invert() {
                        s = s + inv;
                    }
                }
            }
            let denom = BigComplex::from_f64_parts_prec(1.0, 0.0, prec) - w.clone() * s;
            let step = match denom.invert() {
                Some(inv) => w * inv,
                None => w,
            };
            z[j] = z[j].clone() - step.clone();
            max_step = max_step.max(step.magnitude() / (1.0 + z[j].magnitude()));
        }
        last_correction = max_step;
        if all_converged || max_step <= eps_step {
            return Ok(z);
        }
    }
    Err(RootError::NoConvergence {
        iterations: max_iter,
        last_correction,
    })
}

fn value_scale(coeffs: &[BigComplex], x: &BigComplex) -> f64 {
    let xn = x.magnitude();
    let mut scale = 0.0f64;
    for c in coeffs.iter().rev() {
        scale = scale * xn + c.magnitude();
    }
    scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DEFAULT_FLOAT_PRECISION;

    type Q = GaussianRational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn qr(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    const TOL: f64 = 1e-20;

    #[test]
    fn quadratic_with_distinct_roots() {
        // t^2 - 3t + 2 -> {1:1, 2:1}
        let p = UniPoly::from_coeffs(vec![q(2), q(-3), q(1)]);
        let roots = roots_with_multiplicity(&p, TOL).unwrap();
        assert_eq!(roots, vec![(q(1), 1), (q(2), 1)]);
    }

    #[test]
    fn perfect_square() {
        // t^2 - 6t + 9 -> {3:2}
        let p = UniPoly::from_coeffs(vec![q(9), q(-6), q(1)]);
        let roots = roots_with_multiplicity(&p, TOL).unwrap();
        assert_eq!(roots, vec![(q(3), 2)]);
    }

    #[test]
    fn zero_and_negative_roots() {
        // t^3 - t -> {-1:1, 0:1, 1:1}
        let p = UniPoly::from_coeffs(vec![q(0), q(-1), q(0), q(1)]);
        let roots = roots_with_multiplicity(&p, TOL).unwrap();
        assert_eq!(roots, vec![(q(-1), 1), (q(0), 1), (q(1), 1)]);
    }

    #[test]
    fn rational_and_gaussian_roots() {
        let expected = vec![(qr(-7, 3), 1), (qr(1, 2), 2), (Q::i(), 1)];
        let mut factors = UniPoly::one();
        for (r, m) in &expected {
            for _ in 0..*m {
                factors = factors.mul(&UniPoly::from_coeffs(vec![-r.clone(), q(1)]));
            }
        }
        let mut roots = roots_with_multiplicity(&factors, TOL).unwrap();
        roots.sort_by(|(a, _), (b, _)| a.total_cmp(b));
        let mut want = expected;
        want.sort_by(|(a, _), (b, _)| a.total_cmp(b));
        assert_eq!(roots, want);
    }

    #[test]
    fn larger_denominators_resolve_via_high_precision() {
        let rs = [qr(355, 113), qr(-1, 97), qr(22, 7)];
        let p = UniPoly::from_roots(rs.as_ref());
        let roots = roots_with_multiplicity(&p, TOL).unwrap();
        assert_eq!(roots.iter().map(|(_, m)| m).sum::<u64>(), 3);
        for (r, m) in &roots {
            assert_eq!(*m, 1);
            assert!(rs.contains(r), "unexpected root {r}");
        }
    }

    #[test]
    fn irrational_roots_are_reported() {
        // t^2 - 2
        let p = UniPoly::from_coeffs(vec![q(-2), q(0), q(1)]);
        assert!(matches!(
            roots_with_multiplicity(&p, TOL),
            Err(RootError::Irrational {
                degree: 2,
                remaining: 2
            })
        ));
        // mixed: (t - 1)(t^2 - 2) resolves one of three
        let mixed = p.mul(&UniPoly::from_coeffs(vec![q(-1), q(1)]));
        assert!(matches!(
            roots_with_multiplicity(&mixed, TOL),
            Err(RootError::Irrational {
                degree: 3,
                remaining: 2
            })
        ));
    }

    #[test]
    fn non_monic_is_rejected() {
        let p = UniPoly::from_coeffs(vec![q(1), q(2)]);
        assert!(matches!(
            roots_with_multiplicity(&p, TOL),
            Err(RootError::NotMonic)
        ));
    }

    fn big(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64_parts_prec(re, im, DEFAULT_FLOAT_PRECISION)
    }

    #[test]
    fn float_route_recovers_simple_roots() {
        // (t - 1)(t - 2)(t + 1/2)
        let p = UniPoly::from_roots(&[big(1.0, 0.0), big(2.0, 0.0), big(-0.5, 0.0)]);
        let roots = roots_with_multiplicity(&p, 1e-20).unwrap();
        assert_eq!(roots.len(), 3);
        let expected = [-0.5, 1.0, 2.0];
        for ((r, m), want) in roots.iter().zip(expected) {
            assert_eq!(*m, 1);
            assert!((r.re_f64() - want).abs() < 1e-25, "{want}: {}", r.re_f64());
            assert!(r.im_f64().abs() < 1e-25);
        }
    }

    #[test]
    fn float_route_clusters_multiple_roots() {
        // (t - 3)^2 (t + 1)
        let p = UniPoly::from_roots(&[big(3.0, 0.0), big(3.0, 0.0), big(-1.0, 0.0)]);
        let roots = roots_with_multiplicity(&p, 1e-20).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].1, 1);
        assert!((roots[0].0.re_f64() + 1.0).abs() < 1e-20);
        assert_eq!(roots[1].1, 2);
        assert!((roots[1].0.re_f64() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn float_route_handles_complex_pairs() {
        // (t^2 + 1)(t - 5): roots i, -i, 5
        let p = UniPoly::from_roots(&[big(0.0, 1.0), big(0.0, -1.0), big(5.0, 0.0)]);
        let roots = roots_with_multiplicity(&p, 1e-20).unwrap();
        assert_eq!(roots.len(), 3);
        let mut seen: Vec<(f64, f64)> = roots
            .iter()
            .map(|(r, _)| (r.re_f64(), r.im_f64()))
            .collect();
        seen.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((seen[0].0).abs() < 1e-20 && (seen[0].1 + 1.0).abs() < 1e-20);
        assert!((seen[1].0).abs() < 1e-20 && (seen[1].1 - 1.0).abs() < 1e-20);
        assert!((seen[2].0 - 5.0).abs() < 1e-20);
    }

    #[test]
    fn best_rational_reconstructs_small_fractions() {
        let x = BigRational::from_float(2.0 / 3.0).unwrap();
        let r = best_rational(&x, &BigInt::from(1000));
        assert_eq!(r, BigRational::new(2.into(), 3.into()));
        let y = BigRational::from_float(-355.0 / 113.0).unwrap();
        let r = best_rational(&y, &BigInt::from(10_000));
        assert_eq!(r, BigRational::new((-355).into(), 113.into()));
        let z = BigRational::from_integer(7.into());
        assert_eq!(best_rational(&z, &BigInt::from(10)), z);
    }
}
