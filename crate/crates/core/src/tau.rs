//! Soliton tau functions on chamber labels.
//!
//! For wire weights `alpha` and components `(A_i, b_i, c_i)`,
//!
//! ```text
//! B_ij = (b_i - alpha_j) / (c_i - alpha_j)
//! Z_ij = (b_i - b_j)(c_i - c_j) / ((b_i - c_j)(c_i - b_j))
//! f_i  = A_i prod_j B_ij^{s_j}
//! tau  = sum_{T} prod_{i<j in T} Z_ij prod_{i in T} f_i
//! ```
//!
//! The datum is cylindric when `f(b_i) = f(c_i)` for `f(t) = prod_j (t - alpha_j)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::ChamberLabel;
use crate::scalar::{serde_scalar, Rational, Scalar};

/// Default bound on `|s_j|` for evaluation.
pub const LABEL_BOUND: i64 = 60;

/// Relative defect `|f(b) - f(c)| / (1 + |f(b)|)` accepted as cylindric in float mode.
pub const CYLINDRIC_TOL: f64 = 1e-10;

/// One soliton component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "")]
pub struct Component<S: Scalar> {
    #[serde(rename = "A", with = "serde_scalar")]
    pub a: S,
    #[serde(with = "serde_scalar")]
    pub b: S,
    #[serde(with = "serde_scalar")]
    pub c: S,
}

impl<S: Scalar> Component<S> {
    pub fn new(a: S, b: S, c: S) -> Self {
        Component { a, b, c }
    }
}

/// Wire weights plus soliton components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", try_from = "RawSpec<S>", into = "RawSpec<S>")]
pub struct SolitonSpec<S: Scalar> {
    alpha: Vec<S>,
    components: Vec<Component<S>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "")]
struct RawSpec<S: Scalar> {
    #[serde(with = "serde_scalar::vec")]
    alpha: Vec<S>,
    components: Vec<Component<S>>,
}

impl<S: Scalar> TryFrom<RawSpec<S>> for SolitonSpec<S> {
    type Error = Error;

    fn try_from(raw: RawSpec<S>) -> Result<Self> {
        SolitonSpec::new(raw.alpha, raw.components)
    }
}

impl<S: Scalar> From<SolitonSpec<S>> for RawSpec<S> {
    fn from(spec: SolitonSpec<S>) -> Self {
        RawSpec { alpha: spec.alpha, components: spec.components }
    }
}

impl<S: Scalar> SolitonSpec<S> {
    /// Checks `b_i, c_i` avoid the wire weights, `b_i != c_i`, `A_i != 0`,
    /// `b_i != c_j` and regularity `B_ij > 0`. Cylindricity is a separate check.
    pub fn new(alpha: Vec<S>, components: Vec<Component<S>>) -> Result<Self> {
        if alpha.len() < 3 {
            return Err(Error::RankTooSmall(alpha.len()));
        }
        for (i, comp) in components.iter().enumerate() {
            if comp.a.is_zero() {
                return Err(Error::InvalidSpec(format!("component {i} has A = 0")));
            }
            if comp.b == comp.c {
                return Err(Error::Degenerate(format!("component {i} has b = c")));
            }
            for x in [&comp.b, &comp.c] {
                if alpha.contains(x) {
                    return Err(Error::InvalidSpec(format!(
                        "component {i} has a parameter equal to a wire weight"
                    )));
                }
            }
            for (j, other) in components.iter().enumerate() {
                if comp.b == other.c {
                    return Err(Error::InvalidSpec(format!("b_{i} equals c_{j}")));
                }
            }
            for al in &alpha {
                let ratio = (comp.b.clone() - al.clone()) / (comp.c.clone() - al.clone());
                if !ratio.is_positive_strict() {
                    return Err(Error::InvalidSpec(format!(
                        "component {i} is not regular: b and c lie in different components"
                    )));
                }
            }
        }
        Ok(SolitonSpec { alpha, components })
    }

    pub fn vacuum(alpha: Vec<S>) -> Result<Self> {
        Self::new(alpha, Vec::new())
    }

    pub fn alpha(&self) -> &[S] {
        &self.alpha
    }

    pub fn components(&self) -> &[Component<S>] {
        &self.components
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn b_ratio(&self, i: usize, j: usize) -> S {
        let c = &self.components[i];
        (c.b.clone() - self.alpha[j].clone()) / (c.c.clone() - self.alpha[j].clone())
    }

    pub fn z_factor(&self, i: usize, j: usize) -> S {
        let (p, q) = (&self.components[i], &self.components[j]);
        (p.b.clone() - q.b.clone()) * (p.c.clone() - q.c.clone())
            / ((p.b.clone() - q.c.clone()) * (p.c.clone() - q.b.clone()))
    }

    /// Largest relative defect of `f(b_i) = f(c_i)`.
    pub fn cylindric_defect(&self) -> f64 {
        self.components
            .iter()
            .map(|c| {
                let fb = f_poly(&self.alpha, &c.b);
                let fc = f_poly(&self.alpha, &c.c);
                (fb.clone() - fc).to_f64().abs() / (1.0 + fb.to_f64().abs())
            })
            .fold(0.0, f64::max)
    }

    pub fn is_cylindric(&self) -> bool {
        if S::is_exact() {
            self.components
                .iter()
                .all(|c| f_poly(&self.alpha, &c.b) == f_poly(&self.alpha, &c.c))
        } else {
            self.cylindric_defect() <= CYLINDRIC_TOL
        }
    }

    fn with_components(&self, components: Vec<Component<S>>) -> Self {
        SolitonSpec { alpha: self.alpha.clone(), components }
    }
}

impl SolitonSpec<Rational> {
    pub fn to_f64(&self) -> SolitonSpec<f64> {
        SolitonSpec {
            alpha: self.alpha.iter().map(Scalar::to_f64).collect(),
            components: self
                .components
                .iter()
                .map(|c| Component::new(c.a.to_f64(), c.b.to_f64(), c.c.to_f64()))
                .collect(),
        }
    }
}

/// `(t - alpha_1) ... (t - alpha_n)`.
pub fn f_poly<S: Scalar>(alpha: &[S], t: &S) -> S {
    alpha.iter().fold(S::one(), |acc, a| acc * (t.clone() - a.clone()))
}

/// A tau function with its `B` and `Z` tables precomputed.
#[derive(Clone, Debug)]
pub struct TauFunction<S: Scalar> {
    spec: SolitonSpec<S>,
    b: Vec<Vec<S>>,
    z: Vec<Vec<S>>,
    cylindric: bool,
    label_bound: i64,
}

impl<S: Scalar> TauFunction<S> {
    pub fn new(spec: SolitonSpec<S>) -> Self {
        let (big_n, n) = (spec.len(), spec.n());
        let b = (0..big_n).map(|i| (0..n).map(|j| spec.b_ratio(i, j)).collect()).collect();
        let z = (0..big_n)
            .map(|i| {
                (0..big_n)
                    .map(|j| if i == j { S::one() } else { spec.z_factor(i, j) })
                    .collect()
            })
            .collect();
        let cylindric = spec.is_cylindric();
        TauFunction { spec, b, z, cylindric, label_bound: LABEL_BOUND }
    }

    pub fn with_label_bound(mut self, bound: i64) -> Self {
        self.label_bound = bound;
        self
    }

    pub fn spec(&self) -> &SolitonSpec<S> {
        &self.spec
    }

    pub fn alpha(&self) -> &[S] {
        &self.spec.alpha
    }

    pub fn is_cylindric(&self) -> bool {
        self.cylindric
    }

    pub fn label_bound(&self) -> i64 {
        self.label_bound
    }

    /// Reduces a label modulo `(1, ..., 1)` when cylindric and checks the bound.
    fn prepare(&self, s: &ChamberLabel) -> Result<ChamberLabel> {
        if s.n() != self.spec.n() {
            return Err(Error::LengthMismatch { expected: self.spec.n(), found: s.n() });
        }
        let s = if self.cylindric && !s.0.is_empty() {
            let (lo, hi) = (*s.0.iter().min().unwrap(), *s.0.iter().max().unwrap());
            s.shift_ones(-(lo + hi).div_euclid(2))
        } else {
            s.clone()
        };
        if let Some(&value) = s.0.iter().find(|v| v.abs() > self.label_bound) {
            return Err(Error::LabelRange { value, bound: self.label_bound });
        }
        Ok(s)
    }

    /// `f_i` at a prepared label.
    fn exponentials(&self, s: &ChamberLabel) -> Vec<S> {
        self.spec
            .components
            .iter()
            .zip(&self.b)
            .map(|(comp, row)| {
                row.iter()
                    .zip(&s.0)
                    .fold(comp.a.clone(), |acc, (bij, &sj)| acc * bij.powi(sj))
            })
            .collect()
    }

    pub fn exponential(&self, i: usize, s: &ChamberLabel) -> Result<S> {
        let s = self.prepare(s)?;
        Ok(self.exponentials(&s).swap_remove(i))
    }

    fn subset_sum(&self, f: &[S]) -> S {
        let big_n = f.len();
        let mut terms: Vec<S> = Vec::with_capacity(1 << big_n);
        terms.push(S::one());
        let mut total = S::one();
        for mask in 1usize..(1 << big_n) {
            let i = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let mut t = terms[rest].clone() * f[i].clone();
            let mut r = rest;
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                t = t * self.z[i][j].clone();
                r &= r - 1;
            }
            total = total + t.clone();
            terms.push(t);
        }
        total
    }

    fn determinant_form(&self, f: &[S]) -> Result<S> {
        let comps = &self.spec.components;
        let big_n = comps.len();
        let mut m = vec![vec![S::zero(); big_n]; big_n];
        for i in 0..big_n {
            for j in 0..big_n {
                let den = comps[i].b.clone() - comps[j].c.clone();
                if den.is_zero() {
                    return Err(Error::ZeroDenominator("determinant entry"));
                }
                let mut v = f[i].clone() * (comps[j].b.clone() - comps[j].c.clone()) / den;
                if i == j {
                    v = v + S::one();
                }
                m[i][j] = v;
            }
        }
        Ok(determinant(m))
    }
}

/// Determinant by Gaussian elimination with largest-magnitude pivots.
pub fn determinant<S: Scalar>(mut m: Vec<Vec<S>>) -> S {
    let n = m.len();
    let mut det = S::one();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .max_by(|&a, &b| m[a][col].to_f64().abs().total_cmp(&m[b][col].to_f64().abs()));
        let Some(p) = pivot else {
            return S::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det = det * pv.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / pv.clone();
            let (top, bottom) = m.split_at_mut(r);
            for (x, p) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = x.clone() - factor.clone() * p.clone();
            }
        }
    }
    det
}

/// Subset-sum evaluation up to twelve components, determinant beyond.
pub fn tau_eval<S: Scalar>(tf: &TauFunction<S>, s: &ChamberLabel) -> Result<S> {
    let s = tf.prepare(s)?;
    let f = tf.exponentials(&s);
    if f.len() <= 12 {
        Ok(tf.subset_sum(&f))
    } else {
        tf.determinant_form(&f)
    }
}

/// `det[delta_ij + f_i (b_j - c_j) / (b_i - c_j)]`.
pub fn tau_eval_det<S: Scalar>(tf: &TauFunction<S>, s: &ChamberLabel) -> Result<S> {
    let s = tf.prepare(s)?;
    let f = tf.exponentials(&s);
    tf.determinant_form(&f)
}

/// The bilinear residual at `[S]` for distinct wires `i, j, k` in `1..=n`,
/// with the largest term magnitude as a scale.
pub fn bhz_residual<S: Scalar>(
    tf: &TauFunction<S>,
    s: &ChamberLabel,
    i: usize,
    j: usize,
    k: usize,
) -> Result<(S, f64)> {
    if i == j || j == k || i == k {
        return Err(Error::InvalidSpec(format!("indices {i}, {j}, {k} are not distinct")));
    }
    let a = tf.alpha();
    let t = |l: &ChamberLabel| tau_eval(tf, l);
    let terms = [
        (a[i - 1].clone() - a[j - 1].clone()) * t(&s.plus_unit(k))? * t(&s.plus_unit(i).plus_unit(j))?,
        (a[j - 1].clone() - a[k - 1].clone()) * t(&s.plus_unit(i))? * t(&s.plus_unit(j).plus_unit(k))?,
        (a[k - 1].clone() - a[i - 1].clone()) * t(&s.plus_unit(j))? * t(&s.plus_unit(i).plus_unit(k))?,
    ];
    let scale = terms.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
    let sum = terms.into_iter().fold(S::zero(), |acc, x| acc + x);
    Ok((sum, scale))
}

/// Crossing weight `(alpha_i - alpha_j) tau_S tau_{S+e_i+e_j} / (tau_{S+e_i} tau_{S+e_j})`
/// for upper wire `i` and lower wire `j` over the chamber `[S]`.
pub fn vertex_weight<S: Scalar>(
    tf: &TauFunction<S>,
    s: &ChamberLabel,
    upper: usize,
    lower: usize,
) -> Result<S> {
    if upper == lower {
        return Err(Error::InvalidSpec("a crossing needs two distinct wires".into()));
    }
    let a = tf.alpha();
    let t0 = tau_eval(tf, s)?;
    let ti = tau_eval(tf, &s.plus_unit(upper))?;
    let tj = tau_eval(tf, &s.plus_unit(lower))?;
    let tij = tau_eval(tf, &s.plus_unit(upper).plus_unit(lower))?;
    let den = ti * tj;
    if den.is_zero() {
        return Err(Error::ZeroDenominator("vertex weight"));
    }
    Ok((a[upper - 1].clone() - a[lower - 1].clone()) * t0 * tij / den)
}

/// The enriched Yang-Baxter update of the middle chamber:
/// `(gamma - alpha) X X' = (beta - alpha) B E + (gamma - beta) A D`.
#[allow(clippy::too_many_arguments)]
pub fn enriched_mutation<S: Scalar>(
    alpha: &S,
    beta: &S,
    gamma: &S,
    x: &S,
    a: &S,
    b: &S,
    d: &S,
    e: &S,
) -> Result<S> {
    let den = (gamma.clone() - alpha.clone()) * x.clone();
    if den.is_zero() {
        return Err(Error::ZeroDenominator("enriched mutation"));
    }
    let num = (beta.clone() - alpha.clone()) * b.clone() * e.clone()
        + (gamma.clone() - beta.clone()) * a.clone() * d.clone();
    Ok(num / den)
}

/// Bounded components of the complement of the wire weights.
pub fn topological_modes(alpha: &[f64]) -> Vec<(f64, f64)> {
    let mut v = alpha.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Index of the mode containing `x`, if any.
pub fn mode_of(alpha: &[f64], x: f64) -> Option<usize> {
    topological_modes(alpha).iter().position(|&(lo, hi)| lo < x && x < hi)
}

fn poly_coeffs(alpha: &[f64]) -> Vec<f64> {
    // Highest degree first.
    let mut c = vec![1.0];
    for &a in alpha {
        let mut next = vec![0.0; c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k] += ck;
            next[k + 1] -= a * ck;
        }
        c = next;
    }
    c
}

/// The partner `c != b` in the mode of `b` with `f(c) = f(b)`.
pub fn solve_partner(alpha: &[f64], b: f64) -> Result<f64> {
    let modes = topological_modes(alpha);
    let Some(&(lo, hi)) = modes.iter().find(|&&(lo, hi)| lo < b && b < hi) else {
        return Err(Error::OutOfRange(b));
    };
    let fb = f_poly(alpha, &b);
    // Synthetic division of f(t) - f(b) by (t - b).
    let mut coeffs = poly_coeffs(alpha);
    *coeffs.last_mut().unwrap() -= fb;
    let mut q = Vec::with_capacity(coeffs.len() - 1);
    let mut acc = 0.0;
    for &ck in &coeffs[..coeffs.len() - 1] {
        acc = acc * b + ck;
        q.push(acc);
    }
    let g = |t: f64| q.iter().fold(0.0, |acc, &ck| acc * t + ck);
    let (mut a, mut z) = (lo, hi);
    let (mut ga, gz) = (g(a), g(z));
    if ga.signum() == gz.signum() {
        return Err(Error::NoPartner(b));
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + z);
        if mid <= a || mid >= z {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            a = mid;
            z = mid;
            break;
        }
        if gm.signum() == ga.signum() {
            a = mid;
            ga = gm;
        } else {
            z = mid;
        }
    }
    let c = polish_partner(alpha, fb, 0.5 * (a + z), lo, hi);
    if (c - b).abs() <= 1e-9 * (hi - lo) {
        return Err(Error::NoPartner(b));
    }
    let tol = 1e-12 * (1.0 + fb.abs());
    if (f_poly(alpha, &c) - fb).abs() > tol {
        return Err(Error::NoPartner(b));
    }
    Ok(c)
}

/// A few bisection steps on `f(t) - f(b)` itself near the located root.
fn polish_partner(alpha: &[f64], fb: f64, c: f64, lo: f64, hi: f64) -> f64 {
    let h = |t: f64| f_poly(alpha, &t) - fb;
    let mut width = 1e-9 * (hi - lo);
    for _ in 0..20 {
        let (a, z) = ((c - width).max(lo), (c + width).min(hi));
        let (ha, hz) = (h(a), h(z));
        if ha.signum() != hz.signum() {
            let (mut a, mut z, mut ha) = (a, z, ha);
            for _ in 0..200 {
                let mid = 0.5 * (a + z);
                if mid <= a || mid >= z {
                    break;
                }
                let hm = h(mid);
                if hm.signum() == ha.signum() {
                    a = mid;
                    ha = hm;
                } else {
                    z = mid;
                }
            }
            return if h(a).abs() <= h(z).abs() { a } else { z };
        }
        width *= 4.0;
    }
    c
}

/// Exact partner for wire weights symmetric about a centre with an even
/// count, where `c = 2 mu - b`.
pub fn solve_partner_exact(alpha: &[Rational], b: &Rational) -> Result<Rational> {
    let mut sorted = alpha.to_vec();
    sorted.sort();
    let n = sorted.len();
    let (lo, hi) = (&sorted[0], &sorted[n - 1]);
    if b <= lo || b >= hi {
        return Err(Error::OutOfRange(b.to_f64()));
    }
    if sorted.contains(b) {
        return Err(Error::InvalidSpec("b equals a wire weight".into()));
    }
    let two_mu = lo.clone() + hi.clone();
    let symmetric = (0..n).all(|i| sorted[i].clone() + sorted[n - 1 - i].clone() == two_mu);
    if !symmetric || n % 2 == 1 {
        return Err(Error::NoRationalPartner(b.render()));
    }
    let c = two_mu - b.clone();
    if &c == b {
        return Err(Error::NoPartner(b.to_f64()));
    }
    debug_assert_eq!(f_poly(alpha, &c), f_poly(alpha, b));
    Ok(c)
}

/// `(log B_1, ..., log B_n)` of a component.
pub fn slope<S: Scalar>(spec: &SolitonSpec<S>, k: usize) -> Vec<f64> {
    (0..spec.n()).map(|j| spec.b_ratio(k, j).to_f64().ln()).collect()
}

pub fn dot(t: &ChamberLabel, x: &[f64]) -> f64 {
    t.0.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum()
}

/// `p = (t' . log B) / (t . log B)` for state trajectory `tu` and carrier
/// trajectory `tv` (of `rho^{-k2}(v)`).
pub fn speed<S: Scalar>(
    spec: &SolitonSpec<S>,
    k: usize,
    tu: &ChamberLabel,
    tv: &ChamberLabel,
) -> Result<f64> {
    let logs = slope(spec, k);
    let den = dot(tu, &logs);
    if den == 0.0 {
        return Err(Error::Degenerate("t(u) is orthogonal to the slope".into()));
    }
    Ok(dot(tv, &logs) / den)
}

/// The spec with `b_k` and `c_k` interchanged.
pub fn swap_bc<S: Scalar>(spec: &SolitonSpec<S>, k: usize) -> SolitonSpec<S> {
    let mut comps = spec.components.clone();
    let c = &mut comps[k];
    std::mem::swap(&mut c.b, &mut c.c);
    spec.with_components(comps)
}

/// The spec with `A_j <- A_j / Z_kj` for `j != k` and `A_k <- 1 / A_k`.
pub fn rescaled_for_swap<S: Scalar>(spec: &SolitonSpec<S>, k: usize) -> SolitonSpec<S> {
    let comps = spec
        .components
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let a = if j == k {
                S::one() / c.a.clone()
            } else {
                c.a.clone() / spec.z_factor(k, j)
            };
            Component::new(a, c.b.clone(), c.c.clone())
        })
        .collect();
    spec.with_components(comps)
}

/// `A_k / prod_j B_kj^{s_j}`, relating the swapped and rescaled tau functions.
pub fn swap_prefactor<S: Scalar>(spec: &SolitonSpec<S>, k: usize, s: &ChamberLabel) -> S {
    (0..spec.n()).fold(spec.components[k].a.clone(), |acc, j| {
        acc / spec.b_ratio(k, j).powi(s.0[j])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn label(v: &[i64]) -> ChamberLabel {
        ChamberLabel(v.to_vec())
    }

    fn example_alpha() -> Vec<f64> {
        vec![1.0, 3.0, 4.0]
    }

    fn one_soliton(b: f64) -> SolitonSpec<f64> {
        let alpha = example_alpha();
        let c = solve_partner(&alpha, b).unwrap();
        SolitonSpec::new(alpha, vec![Component::new(1.5, b, c)]).unwrap()
    }

    #[test]
    fn polynomial_values() {
        let a = example_alpha();
        assert_eq!(f_poly(&a, &1.0), 0.0);
        assert_eq!(f_poly(&a, &2.0), 2.0);
        assert_eq!(f_poly(&a, &0.0), -12.0);
    }

    #[test]
    fn partners() {
        let a = example_alpha();
        let c = solve_partner(&a, 3.7).unwrap();
        assert!(3.0 < c && c < 4.0 && (c - 3.7).abs() > 1e-3);
        assert!((f_poly(&a, &c) - f_poly(&a, &3.7)).abs() <= 1e-12 * (1.0 + f_poly(&a, &3.7).abs()));
        let c = solve_partner(&a, 1.0001).unwrap();
        assert!(1.0 < c && c < 3.0);
        assert!((f_poly(&a, &c) - f_poly(&a, &1.0001)).abs() <= 1e-12 * (1.0 + f_poly(&a, &1.0001).abs()));
        assert_eq!(solve_partner(&a, 0.5), Err(Error::OutOfRange(0.5)));
        assert_eq!(solve_partner(&a, 4.5), Err(Error::OutOfRange(4.5)));
        // The critical point of f on (1, 3) is (8 - sqrt 7) / 3.
        let crit = (8.0 - 7f64.sqrt()) / 3.0;
        assert!(matches!(solve_partner(&a, crit), Err(Error::NoPartner(_))));
    }

    #[test]
    fn exact_partner_for_symmetric_weights() {
        let a = vec![rat(-2, 1), rat(-1, 1), rat(1, 1), rat(2, 1)];
        assert_eq!(solve_partner_exact(&a, &rat(1, 2)).unwrap(), rat(-1, 2));
        assert!(matches!(solve_partner_exact(&a, &rat(0, 1)), Err(Error::NoPartner(_))));
        let odd = vec![rat(1, 1), rat(3, 1), rat(4, 1)];
        assert!(matches!(solve_partner_exact(&odd, &rat(2, 1)), Err(Error::NoRationalPartner(_))));
    }

    #[test]
    fn modes() {
        assert_eq!(topological_modes(&[1.0, 3.0, 4.0]), vec![(1.0, 3.0), (3.0, 4.0)]);
        assert_eq!(topological_modes(&[1.0, 1.0, 2.0]), vec![(1.0, 2.0)]);
        assert_eq!(topological_modes(&[0.0, 5.0]), vec![(0.0, 5.0)]);
        assert!(topological_modes(&[2.0, 2.0, 2.0]).is_empty());
    }

    #[test]
    fn small_tau_functions() {
        let vac = TauFunction::new(SolitonSpec::vacuum(example_alpha()).unwrap());
        assert_eq!(tau_eval(&vac, &label(&[3, -2, 7])).unwrap(), 1.0);

        let spec = one_soliton(3.7);
        let tf = TauFunction::new(spec.clone());
        let s = label(&[2, -1, 0]);
        let f = 1.5 * spec.b_ratio(0, 0).powi(2) * spec.b_ratio(0, 1).powi(-1);
        assert!((tau_eval(&tf, &s).unwrap() - (1.0 + f)).abs() < 1e-12 * (1.0 + f));

        let c1 = Component::new(rat(2, 1), rat(1, 2), rat(-1, 2));
        let c2 = Component::new(rat(3, 1), rat(1, 4), rat(-1, 4));
        let alpha = vec![rat(-2, 1), rat(-1, 1), rat(1, 1), rat(2, 1)];
        let spec = SolitonSpec::new(alpha, vec![c1, c2]).unwrap();
        let tf = TauFunction::new(spec.clone());
        let s = label(&[1, 0, -2, 3]);
        let f1 = tf.exponential(0, &s).unwrap();
        let f2 = tf.exponential(1, &s).unwrap();
        let z = spec.z_factor(0, 1);
        let expected = rat(1, 1) + f1.clone() + f2.clone() + z * f1 * f2;
        assert_eq!(tau_eval(&tf, &s).unwrap(), expected);
        assert_eq!(tau_eval_det(&tf, &s).unwrap(), expected);
    }

    #[test]
    fn displayed_bilinear_instance() {
        let alpha = vec![rat(-2, 1), rat(-1, 1), rat(1, 1), rat(2, 1)];
        let spec = SolitonSpec::new(alpha, vec![Component::new(rat(2, 1), rat(1, 2), rat(-1, 2))]).unwrap();
        let tf = TauFunction::new(spec);
        let (r, _) = bhz_residual(&tf, &label(&[0, 0, 0, -1]), 1, 2, 4).unwrap();
        assert_eq!(r, rat(0, 1));
        let vac = TauFunction::new(SolitonSpec::vacuum(vec![1.0, 3.0, 4.0]).unwrap());
        assert_eq!(bhz_residual(&vac, &label(&[0, 0, 0]), 1, 2, 3).unwrap().0, 0.0);
    }

    #[test]
    fn vertex_weights_and_mutation() {
        let vac = TauFunction::new(SolitonSpec::vacuum(example_alpha()).unwrap());
        assert_eq!(vertex_weight(&vac, &label(&[0, 0, 0]), 3, 1).unwrap(), 3.0);
        let tf = TauFunction::new(one_soliton(3.7));
        let s = label(&[1, 0, -1]);
        let t = |l: &ChamberLabel| tau_eval(&tf, l).unwrap();
        let (e1, e2, e3) = (1, 2, 3);
        let x = t(&s.plus_unit(e2));
        let x_new = t(&s.plus_unit(e1).plus_unit(e3));
        let al = example_alpha();
        let got = enriched_mutation(
            &al[0], &al[1], &al[2], &x,
            &t(&s.plus_unit(e1)), &t(&s.plus_unit(e3)),
            &t(&s.plus_unit(e2).plus_unit(e3)), &t(&s.plus_unit(e1).plus_unit(e2)),
        )
        .unwrap();
        let scale = x_new.abs() + got.abs();
        assert!((got - x_new).abs() <= 1e-12 * scale, "{got} vs {x_new}");
    }

    #[test]
    fn slopes_and_speed() {
        let spec = one_soliton(3.7);
        let logs = slope(&spec, 0);
        assert!(logs.iter().sum::<f64>().abs() < 1e-10);
        let b = spec.components()[0].b;
        let c = spec.components()[0].c;
        let tu = label(&[-1, 0, 1]);
        let tv = label(&[0, 0, 1]);
        let p = speed(&spec, 0, &tu, &tv).unwrap();
        assert!((p - logs[2] / (-logs[0] + logs[2])).abs() < 1e-12);
        let swapped = swap_bc(&spec, 0);
        assert!((speed(&swapped, 0, &tu, &tv).unwrap() - p).abs() < 1e-12);
        assert_eq!(swap_bc(&swapped, 0), spec);
        assert!(p > 0.0 && b != c);
    }

    #[test]
    fn swap_identity_one_component() {
        let spec = one_soliton(2.2);
        let sw = TauFunction::new(swap_bc(&spec, 0));
        let re = TauFunction::new(rescaled_for_swap(&spec, 0));
        for s in [label(&[0, 0, 0]), label(&[2, -3, 1]), label(&[-5, 4, 0])] {
            let lhs = tau_eval(&sw, &s).unwrap();
            let rhs = swap_prefactor(&spec, 0, &s) * tau_eval(&re, &s).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs(), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn label_bound_is_enforced() {
        let tf = TauFunction::new(one_soliton(3.7));
        assert!(tau_eval(&tf, &label(&[100, 100, 100])).is_ok());
        assert!(matches!(tau_eval(&tf, &label(&[-61, 0, 61])), Err(Error::LabelRange { .. })));
    }

    #[test]
    fn spec_validation_and_json() {
        let alpha = example_alpha();
        assert!(matches!(
            SolitonSpec::new(alpha.clone(), vec![Component::new(1.0, 2.0, 3.5)]),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            SolitonSpec::new(alpha.clone(), vec![Component::new(1.0, 2.0, 2.0)]),
            Err(Error::Degenerate(_))
        ));
        let json = r#"{"alpha":["-2","-1","1","2"],"components":[{"A":"2","b":"1/2","c":"-1/2"}]}"#;
        let spec: SolitonSpec<Rational> = serde_json::from_str(json).unwrap();
        assert!(spec.is_cylindric());
        assert_eq!(serde_json::to_string(&spec).unwrap(), json);
        let f: SolitonSpec<f64> =
            serde_json::from_str(r#"{"alpha":[1,3,4],"components":[{"A":1,"b":3.5,"c":"3.25"}]}"#).unwrap();
        assert!(!f.is_cylindric());
    }
}
