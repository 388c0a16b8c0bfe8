//! Dense univariate polynomials over a scalar field.
//!
//! Support code for the moment pipeline: monic polynomials built from
//! elementary symmetric functions, square-free (Yun) splitting over exact
//! scalars, Lagrange interpolation bases, and the usual Euclidean toolkit.
//!
//! Coefficients are little-endian (`coeffs[k]` multiplies `t^k`) with no
//! trailing zeros, so the zero polynomial is the empty vector.

use crate::scalar::Scalar;

/// A dense univariate polynomial; see the module docs for the invariants.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly<S: Scalar> {
    coeffs: Vec<S>,
}

impl<S: Scalar> UniPoly<S> {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    /// Builds from little-endian coefficients, trimming trailing zeros.
    pub fn from_coeffs(coeffs: Vec<S>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        matches!(self.leading(), Some(c) if c.clone().sub_is_zero(&S::one()))
    }

    /// `t^n - e1 t^(n-1) + e2 t^(n-2) - ... + (-1)^n en`: the monic
    /// polynomial whose roots have elementary symmetric functions `e`.
    pub fn monic_from_elementary(e: &[S]) -> Self {
        let n = e.len();
        let mut coeffs = vec![S::zero(); n + 1];
        coeffs[n] = S::one();
        for (k, ek) in e.iter().enumerate() {
            // coefficient of t^(n-1-k) is (-1)^(k+1) e_{k+1}
            let c = if k % 2 == 0 { -ek.clone() } else { ek.clone() };
            coeffs[n - 1 - k] = c;
        }
        Self::from_coeffs(coeffs)
    }

    /// `prod (t - r)` over the given roots.
    pub fn from_roots(roots: &[S]) -> Self {
        let mut p = Self::one();
        for r in roots {
            p = p.mul(&Self::from_coeffs(vec![-r.clone(), S::one()]));
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - other.coeff(k));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * S::from_i64(k as i64))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Pairs the coefficients with precomputed values `powers[k] ~ f(psi^k)`:
    /// the linear extension `sum c_k powers[k]`. Panics if `powers` is
    /// shorter than the coefficient list.
    pub fn apply_moments(&self, powers: &[S]) -> S {
        assert!(powers.len() >= self.coeffs.len(), "not enough power values");
        let mut acc = S::zero();
        for (c, p) in self.coeffs.iter().zip(powers) {
            acc = acc + c.clone() * p.clone();
        }
        acc
    }

    /// Rescales to leading coefficient 1; `None` for the zero polynomial or
    /// a non-invertible leading coefficient.
    pub fn monic(&self) -> Option<Self> {
        let inv = self.leading()?.invert()?;
        Some(self.scale(&inv))
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    /// `None` when `d` is zero or its leading coefficient is not invertible.
    pub fn divrem(&self, d: &Self) -> Option<(Self, Self)> {
        let dlead = d.leading()?.invert()?;
        let ddeg = d.degree()?;
        let mut rem = self.clone();
        let mut quot = vec![S::zero(); self.coeffs.len().saturating_sub(ddeg)];
        while let Some(rdeg) = rem.degree() {
            if rdeg < ddeg {
                break;
            }
            let factor = rem.leading().unwrap().clone() * dlead.clone();
            let shift = rdeg - ddeg;
            quot[shift] = factor.clone();
            // rem -= factor * t^shift * d, with exact cancellation of the top
            let mut coeffs = rem.coeffs;
            for (j, dc) in d.coeffs.iter().enumerate() {
                coeffs[shift + j] = coeffs[shift + j].clone() - factor.clone() * dc.clone();
            }
            coeffs.truncate(rdeg); // leading term cancels by construction
            rem = Self::from_coeffs(coeffs);
        }
        Some((Self::from_coeffs(quot), rem))
    }

    /// Exact quotient; `None` if the division leaves a remainder (only
    /// meaningful over exact scalars).
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d)?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd by the Euclidean algorithm; intended for exact scalars.
    pub fn gcd_monic(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor over a field");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().expect("nonzero polynomial over a field")
        }
    }

    /// Yun square-free decomposition over an exact field of characteristic
    /// zero: returns `(g_i, i)` with `self = lead * prod g_i^i`, each `g_i`
    /// monic and square-free, pairwise coprime, and no `g_i` constant.
    pub fn square_free_decomposition(&self) -> Vec<(Self, usize)> {
        debug_assert!(S::EXACT, "square-free splitting needs exact arithmetic");
        let p = match self.monic() {
            Some(p) if p.degree().unwrap_or(0) > 0 => p,
            _ => return Vec::new(),
        };
        let dp = p.derivative();
        let g = p.gcd_monic(&dp);
        let mut c = p.exact_div(&g).expect("gcd divides");
        let mut d = dp.exact_div(&g).expect("gcd divides").sub(&c.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while c.degree().unwrap_or(0) > 0 {
            let a = c.gcd_monic(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            c = c.exact_div(&a).expect("gcd divides");
            d = d.exact_div(&a).expect("gcd divides").sub(&c.derivative());
            i += 1;
        }
        out
    }

    /// The Lagrange basis for pairwise-distinct nodes: `out[j]` has degree
    /// `nodes.len() - 1` and satisfies `out[j](nodes[i]) = delta_ij`.
    pub fn lagrange_basis(nodes: &[S]) -> Vec<Self> {
        let mut out = Vec::with_capacity(nodes.len());
        for (j, vj) in nodes.iter().enumerate() {
            let mut num = Self::one();
            let mut denom = S::one();
            for (i, vi) in nodes.iter().enumerate() {
                if i != j {
                    num = num.mul(&Self::from_coeffs(vec![-vi.clone(), S::one()]));
                    denom = denom * (vj.clone() - vi.clone());
                }
            }
            let inv = denom.invert().expect("nodes must be pairwise distinct");
            out.push(num.scale(&inv));
        }
        out
    }
}

// Small helper so `is_monic` can test equality through subtraction, which
// works for both scalar modes without a PartialEq bound on references.
trait SubIsZero {
    fn sub_is_zero(&self, other: &Self) -> bool;
}

impl<S: Scalar> SubIsZero for S {
    fn sub_is_zero(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    type Q = GaussianRational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn poly(cs: &[i64]) -> UniPoly<Q> {
        UniPoly::from_coeffs(cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn construction_and_degree() {
        assert!(UniPoly::<Q>::zero().is_zero());
        assert_eq!(poly(&[1, 0, 0]).degree(), Some(0));
        assert_eq!(poly(&[2, -3, 1]).degree(), Some(2));
        assert_eq!(UniPoly::<Q>::zero().degree(), None);
    }

    #[test]
    fn monic_from_elementary_matches_roots() {
        // e = (3, 2) -> t^2 - 3t + 2 = (t-1)(t-2)
        let p = UniPoly::monic_from_elementary(&[q(3), q(2)]);
        assert_eq!(p, poly(&[2, -3, 1]));
        assert_eq!(p, UniPoly::from_roots(&[q(1), q(2)]));
        assert_eq!(p.eval(&q(1)), q(0));
        assert_eq!(p.eval(&q(2)), q(0));
        assert_eq!(p.eval(&q(0)), q(2));
    }

    #[test]
    fn divrem_and_gcd() {
        let p = poly(&[2, -3, 1]); // (t-1)(t-2)
        let d = poly(&[-1, 1]); // t - 1
        let (quot, rem) = p.divrem(&d).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot, poly(&[-2, 1]));

        let (_, rem) = p.divrem(&poly(&[-3, 1])).unwrap();
        assert_eq!(rem, UniPoly::constant(q(2))); // p(3) = 2

        let a = poly(&[-1, 0, 1]); // t^2 - 1
        let b = poly(&[1, 2, 1]); // (t+1)^2
        assert_eq!(a.gcd_monic(&b), poly(&[1, 1]));
    }

    #[test]
    fn derivative_and_eval() {
        let p = poly(&[5, 0, -2, 1]); // t^3 - 2t^2 + 5
        assert_eq!(p.derivative(), poly(&[0, -4, 3]));
        assert_eq!(p.eval(&q(2)), q(5));
        assert_eq!(p.apply_moments(&[q(1), q(2), q(4), q(8)]), q(5 - 8 + 8));
    }

    #[test]
    fn square_free_splits_multiplicities() {
        // (t-1)^2 (t-3): factors {(t-1):2, (t-3):1}
        let p = UniPoly::from_roots(&[q(1), q(1), q(3)]);
        let parts = p.square_free_decomposition();
        assert_eq!(parts.len(), 2);
        let by_mult: std::collections::BTreeMap<usize, UniPoly<Q>> =
            parts.into_iter().map(|(g, i)| (i, g)).collect();
        assert_eq!(by_mult[&1], poly(&[-3, 1]));
        assert_eq!(by_mult[&2], poly(&[-1, 1]));

        // square-free input comes back whole
        let sf = UniPoly::from_roots(&[q(0), q(2), q(-1)]);
        let parts = sf.square_free_decomposition();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].1, 1);
        assert_eq!(parts[0].0, sf);

        // t^3 - t from a scaled non-monic input
        let scaled = sf.scale(&q(7));
        let parts = scaled.square_free_decomposition();
        assert_eq!(parts[0].0, sf);
    }

    #[test]
    fn lagrange_basis_is_dual_to_nodes() {
        let nodes = [q(1), q(2), q(-3)];
        let basis = UniPoly::lagrange_basis(&nodes);
        for (j, lj) in basis.iter().enumerate() {
            assert_eq!(lj.degree(), Some(2));
            for (i, vi) in nodes.iter().enumerate() {
                let expect = if i == j { q(1) } else { q(0) };
                assert_eq!(lj.eval(vi), expect, "l_{j}({i})");
            }
        }
    }

    #[test]
    fn monic_detection() {
        assert!(poly(&[2, -3, 1]).is_monic());
        assert!(!poly(&[2, -3, 2]).is_monic());
        assert!(poly(&[4, 2]).monic().unwrap().is_monic());
    }
}
