//! Exact univariate polynomials over the Gaussian rationals: Euclidean
//! arithmetic, square-free parts, Sturm-sequence real-root isolation, and a
//! Durand-Kerner complex root solver for witness construction.

use crate::scalar::{rat_to_f64, GaussRat, Rat};
use num::complex::Complex64;
use num::traits::{Signed, Zero};

/// Coefficients in ascending order; no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    pub coeffs: Vec<GaussRat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let m = GaussRat::from_int(i as i64 + 1);
                    &m * c
                })
                .collect(),
        )
    }

    /// Divide out the highest power of `u` dividing the polynomial; returns
    /// (valuation, reduced polynomial).
    pub fn strip_zero_root(&self) -> (usize, UniPoly) {
        if self.is_zero() {
            return (0, UniPoly::zero());
        }
        let val = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        (val, UniPoly::new(self.coeffs[val..].to_vec()))
    }

    fn inv(c: &GaussRat) -> GaussRat {
        // 1 / (a + bi) = (a - bi) / (a^2 + b^2)
        let norm = &c.re * &c.re + &c.im * &c.im;
        GaussRat::new(&c.re / &norm, -(&c.im / &norm))
    }

    /// Remainder of Euclidean division.
    pub fn rem(&self, div: &UniPoly) -> UniPoly {
        assert!(!div.is_zero());
        let mut r = self.coeffs.clone();
        let d = div.degree();
        let lead_inv = Self::inv(div.coeffs.last().unwrap());
        while r.len() > d {
            let c = r.last().unwrap().clone();
            if !c.is_zero() {
                let q = &c * &lead_inv;
                let shift = r.len() - 1 - d;
                for (i, dc) in div.coeffs.iter().enumerate() {
                    let t = &q * dc;
                    r[shift + i] = &r[shift + i] - &t;
                }
            }
            r.pop();
        }
        UniPoly::new(r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let li = Self::inv(a.coeffs.last().unwrap());
        UniPoly::new(a.coeffs.iter().map(|c| c * &li).collect())
    }

    /// Square-free part: self / gcd(self, self').
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.is_constant() {
            return self.clone();
        }
        self.div_exact(&g)
    }

    /// Exact quotient (remainder must be zero).
    pub fn div_exact(&self, div: &UniPoly) -> UniPoly {
        assert!(!div.is_zero());
        let mut r = self.coeffs.clone();
        let d = div.degree();
        let lead_inv = Self::inv(div.coeffs.last().unwrap());
        let mut q = vec![GaussRat::zero(); r.len().saturating_sub(d)];
        while r.len() > d {
            let c = r.last().unwrap().clone();
            let shift = r.len() - 1 - d;
            if !c.is_zero() {
                let qc = &c * &lead_inv;
                for (i, dc) in div.coeffs.iter().enumerate() {
                    let t = &qc * dc;
                    r[shift + i] = &r[shift + i] - &t;
                }
                q[shift] = qc;
            }
            r.pop();
        }
        debug_assert!(UniPoly::new(r).is_zero(), "division was not exact");
        UniPoly::new(q)
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        debug_assert!(self.is_real());
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + &c.re;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_complex();
        }
        acc
    }

    fn real_coeffs(&self) -> Vec<Rat> {
        debug_assert!(self.is_real());
        self.coeffs.iter().map(|c| c.re.clone()).collect()
    }

    /// Number of distinct real roots (real-coefficient polynomials only).
    pub fn count_real_roots(&self) -> usize {
        if self.is_constant() {
            return 0;
        }
        let chain = sturm_chain(self);
        variations_at_minus_inf(&chain) - variations_at_plus_inf(&chain)
    }

    /// Distinct real roots to roughly machine precision, ascending
    /// (real-coefficient polynomials only).
    pub fn real_roots(&self) -> Vec<f64> {
        if self.is_constant() {
            return Vec::new();
        }
        let sf = self.squarefree_part();
        let chain = sturm_chain(&sf);
        let total = variations_at_minus_inf(&chain) - variations_at_plus_inf(&chain);
        if total == 0 {
            return Vec::new();
        }
        // Cauchy bound on root magnitude.
        let cs = sf.real_coeffs();
        let lead = cs.last().unwrap().abs();
        let maxc = cs[..cs.len() - 1]
            .iter()
            .map(|c| c.abs())
            .fold(Rat::zero(), |a, b| if b > a { b } else { a });
        let bound = Rat::from_integer(1.into()) + maxc / lead;
        let mut out = Vec::new();
        let lo = -bound.clone();
        isolate(&sf, &chain, lo, bound, total, &mut out);
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    /// All complex roots (with multiplicity collapsed to the square-free
    /// part) via Durand-Kerner iteration.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let sf = self.squarefree_part();
        let d = sf.degree();
        if d == 0 {
            return Vec::new();
        }
        let lead = sf.coeffs.last().unwrap().to_complex();
        let monic: Vec<Complex64> =
            sf.coeffs.iter().map(|c| c.to_complex() / lead).collect();
        let eval = |z: Complex64| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in monic.iter().rev() {
                acc = acc * z + c;
            }
            acc
        };
        // Standard non-real starting spiral.
        let mut roots: Vec<Complex64> = (0..d)
            .map(|i| Complex64::new(0.4, 0.9).powu(i as u32 + 1))
            .collect();
        for _ in 0..200 {
            let mut delta_max: f64 = 0.0;
            for i in 0..d {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..d {
                    if j != i {
                        denom *= roots[i] - roots[j];
                    }
                }
                if denom.norm() < 1e-300 {
                    continue;
                }
                let step = eval(roots[i]) / denom;
                roots[i] -= step;
                delta_max = delta_max.max(step.norm());
            }
            if delta_max < 1e-14 {
                break;
            }
        }
        roots
    }
}

fn sturm_chain(p: &UniPoly) -> Vec<Vec<Rat>> {
    let mut chain = vec![p.real_coeffs()];
    let d = p.derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(d.real_coeffs());
    loop {
        let a = UniPoly::new(
            chain[chain.len() - 2].iter().map(|c| GaussRat::from_rat(c.clone())).collect(),
        );
        let b = UniPoly::new(
            chain[chain.len() - 1].iter().map(|c| GaussRat::from_rat(c.clone())).collect(),
        );
        let r = a.rem(&b);
        if r.is_zero() {
            break;
        }
        chain.push(r.coeffs.iter().map(|c| -c.re.clone()).collect());
    }
    chain
}

fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0i32;
    let mut v = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn eval_coeffs(cs: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in cs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn variations_at(chain: &[Vec<Rat>], x: &Rat) -> usize {
    variations(chain.iter().map(|cs| sign(&eval_coeffs(cs, x))))
}

fn variations_at_plus_inf(chain: &[Vec<Rat>]) -> usize {
    variations(chain.iter().map(|cs| cs.last().map_or(0, sign)))
}

fn variations_at_minus_inf(chain: &[Vec<Rat>]) -> usize {
    variations(chain.iter().map(|cs| {
        let s = cs.last().map_or(0, sign);
        if (cs.len() - 1) % 2 == 1 {
            -s
        } else {
            s
        }
    }))
}

/// Recursively split `(lo, hi]` until each piece holds one root, then
/// bisect on the (square-free) sign change.
fn isolate(sf: &UniPoly, chain: &[Vec<Rat>], lo: Rat, hi: Rat, count: usize, out: &mut Vec<f64>) {
    if count == 0 {
        return;
    }
    if count == 1 {
        out.push(refine(sf, lo, hi));
        return;
    }
    let mid = (&lo + &hi) / Rat::from_integer(2.into());
    let left = variations_at(chain, &lo) - variations_at(chain, &mid);
    isolate(sf, chain, lo, mid.clone(), left, out);
    isolate(sf, chain, mid, hi, count - left, out);
}

/// Bisection on `(lo, hi]` known to contain exactly one root of the
/// square-free polynomial.
fn refine(sf: &UniPoly, mut lo: Rat, mut hi: Rat) -> f64 {
    let fhi = sf.eval_rat(&hi);
    if fhi.is_zero() {
        return rat_to_f64(&hi);
    }
    let shi = sign(&fhi);
    // The root is interior; the sign at lo must differ once we step inside.
    let mut slo = sign(&sf.eval_rat(&lo));
    if slo == 0 || slo == shi {
        // lo itself may be a root of sf (belonging to the neighbour
        // interval); nudge inward until the sign is informative.
        let mut step = (&hi - &lo) / Rat::from_integer(4.into());
        loop {
            let probe = &lo + &step;
            let sp = sign(&sf.eval_rat(&probe));
            if sp == 0 {
                return rat_to_f64(&probe);
            }
            if sp != shi {
                lo = probe;
                slo = sp;
                break;
            }
            hi = probe;
            step = step / Rat::from_integer(2.into());
        }
    }
    for _ in 0..80 {
        let mid = (&lo + &hi) / Rat::from_integer(2.into());
        let sm = sign(&sf.eval_rat(&mid));
        if sm == 0 {
            return rat_to_f64(&mid);
        }
        if sm == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    rat_to_f64(&((&lo + &hi) / Rat::from_integer(2.into())))
}
