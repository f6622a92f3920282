//! Exact sparse polynomials and polynomial mappings.
//!
//! Coefficients are Gaussian rationals; real polynomials keep the imaginary
//! part zero. Mixed polynomials carry separate exponents for `z` and `conj(z)`.

use crate::error::{Error, Result};
use crate::scalar::{rat_to_f64, GaussRat, Rat};
use num::complex::Complex64;
use num::traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Guard for the exact polyhedral engine.
pub const MAX_DIM: usize = 8;
pub const MAX_SUPPORT: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    Real,
    Complex,
    Mixed,
}

impl Setting {
    pub fn is_real(self) -> bool {
        matches!(self, Setting::Real)
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Setting::Real => write!(f, "real"),
            Setting::Complex => write!(f, "complex"),
            Setting::Mixed => write!(f, "mixed"),
        }
    }
}

/// One monomial `coeff * z^nu * conj(z)^mu`. `mu` is all-zero outside the
/// mixed setting.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term {
    pub coeff: GaussRat,
    pub nu: Vec<u32>,
    pub mu: Vec<u32>,
}

impl Term {
    /// Combined exponent `nu + mu`, the lattice point the term contributes
    /// to the support.
    pub fn combined(&self) -> Vec<u32> {
        self.nu.iter().zip(&self.mu).map(|(a, b)| a + b).collect()
    }
}

pub type TermKey = (Vec<u32>, Vec<u32>);

/// A sparse polynomial over `n` variables, terms in lexicographic `(nu, mu)`
/// order. Mapping components additionally satisfy `f(0) = 0`; intermediate
/// results of symbolic arithmetic (e.g. Jacobian determinants) may carry a
/// constant term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    pub setting: Setting,
    pub n: usize,
    pub terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(setting: Setting, n: usize) -> Self {
        Polynomial { setting, n, terms: Vec::new() }
    }

    pub fn constant(setting: Setting, n: usize, c: GaussRat) -> Self {
        Self::from_map(setting, n, BTreeMap::from([((vec![0; n], vec![0; n]), c)]))
    }

    /// Builds a polynomial from an exponent-to-coefficient map, dropping
    /// zero coefficients.
    pub fn from_map(setting: Setting, n: usize, map: BTreeMap<TermKey, GaussRat>) -> Self {
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((nu, mu), coeff)| {
                debug_assert_eq!(nu.len(), n);
                debug_assert_eq!(mu.len(), n);
                debug_assert!(setting == Setting::Mixed || mu.iter().all(|&m| m == 0));
                Term { coeff, nu, mu }
            })
            .collect();
        Polynomial { setting, n, terms }
    }

    pub fn to_map(&self) -> BTreeMap<TermKey, GaussRat> {
        self.terms
            .iter()
            .map(|t| ((t.nu.clone(), t.mu.clone()), t.coeff.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> GaussRat {
        self.terms
            .iter()
            .find(|t| t.nu.iter().all(|&e| e == 0) && t.mu.iter().all(|&e| e == 0))
            .map(|t| t.coeff.clone())
            .unwrap_or_else(GaussRat::zero)
    }

    /// The support: combined exponents of the nonzero terms, the origin
    /// excluded.
    pub fn support(&self) -> BTreeSet<Vec<u32>> {
        self.terms
            .iter()
            .map(|t| t.combined())
            .filter(|v| v.iter().any(|&e| e > 0))
            .collect()
    }

    /// `true` iff the support meets every coordinate axis.
    pub fn is_convenient(&self) -> Result<bool> {
        if self.terms.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        let supp = self.support();
        Ok((0..self.n).all(|i| {
            supp.iter().any(|v| v[i] > 0 && v.iter().enumerate().all(|(j, &e)| j == i || e == 0))
        }))
    }

    /// Keeps exactly the terms whose combined exponent lies in `face_points`.
    pub fn face_restriction(&self, face_points: &BTreeSet<Vec<u32>>) -> Result<Polynomial> {
        let supp = self.support();
        for p in face_points {
            // The origin generator of the Newton polyhedron carries no term.
            if p.iter().all(|&e| e == 0) {
                continue;
            }
            if !supp.contains(p) {
                return Err(Error::PointOutsideSupport { point: p.clone() });
            }
        }
        let terms = self
            .terms
            .iter()
            .filter(|t| face_points.contains(&t.combined()))
            .cloned()
            .collect();
        Ok(Polynomial { setting: self.setting, n: self.n, terms })
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.n, other.n);
        let mut map = self.to_map();
        for t in &other.terms {
            let e = map
                .entry((t.nu.clone(), t.mu.clone()))
                .or_insert_with(GaussRat::zero);
            *e = &*e + &t.coeff;
        }
        Polynomial::from_map(self.setting, self.n, map)
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { coeff: -&t.coeff, nu: t.nu.clone(), mu: t.mu.clone() })
            .collect();
        Polynomial { setting: self.setting, n: self.n, terms }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.n, other.n);
        let mut map: BTreeMap<TermKey, GaussRat> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let nu: Vec<u32> = a.nu.iter().zip(&b.nu).map(|(x, y)| x + y).collect();
                let mu: Vec<u32> = a.mu.iter().zip(&b.mu).map(|(x, y)| x + y).collect();
                let c = &a.coeff * &b.coeff;
                let e = map.entry((nu, mu)).or_insert_with(GaussRat::zero);
                *e = &*e + &c;
            }
        }
        Polynomial::from_map(self.setting, self.n, map)
    }

    pub fn scale(&self, c: &GaussRat) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|_| !c.is_zero())
            .map(|t| Term { coeff: c * &t.coeff, nu: t.nu.clone(), mu: t.mu.clone() })
            .collect();
        Polynomial { setting: self.setting, n: self.n, terms }
    }

    /// Partial derivative with respect to variable `i`. Only valid outside
    /// the mixed setting (mixed maps are realified first).
    pub fn partial(&self, i: usize) -> Polynomial {
        debug_assert!(self.setting != Setting::Mixed);
        let mut map: BTreeMap<TermKey, GaussRat> = BTreeMap::new();
        for t in &self.terms {
            if t.nu[i] == 0 {
                continue;
            }
            let mut nu = t.nu.clone();
            let e = nu[i];
            nu[i] -= 1;
            let c = &t.coeff * &GaussRat::from_int(e as i64);
            let entry = map.entry((nu, t.mu.clone())).or_insert_with(GaussRat::zero);
            *entry = &*entry + &c;
        }
        Polynomial::from_map(self.setting, self.n, map)
    }

    /// Evaluation over the complex numbers; `conj(z)` factors use the
    /// conjugated coordinates.
    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.n);
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let mut v = t.coeff.to_complex();
            for (i, &e) in t.nu.iter().enumerate() {
                v *= z[i].powu(e);
            }
            for (i, &e) in t.mu.iter().enumerate() {
                v *= z[i].conj().powu(e);
            }
            acc += v;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(self.setting, Setting::Real);
        let mut acc = 0.0;
        for t in &self.terms {
            let mut v = rat_to_f64(&t.coeff.re);
            for (i, &e) in t.nu.iter().enumerate() {
                v *= x[i].powi(e as i32);
            }
            acc += v;
        }
        acc
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn eval_exact(&self, z: &[GaussRat]) -> GaussRat {
        debug_assert_eq!(z.len(), self.n);
        let mut acc = GaussRat::zero();
        for t in &self.terms {
            let mut v = t.coeff.clone();
            for (i, &e) in t.nu.iter().enumerate() {
                v = &v * &z[i].pow(e);
            }
            for (i, &e) in t.mu.iter().enumerate() {
                v = &v * &z[i].conj().pow(e);
            }
            acc = &acc + &v;
        }
        acc
    }

    /// Splits a complex/mixed polynomial in `z` into real polynomials
    /// `(g, h)` with `f = g + i h` over variables `(x_1..x_n, y_1..y_n)`.
    pub fn realify(&self) -> (Polynomial, Polynomial) {
        let n2 = 2 * self.n;
        // Accumulate in a Gaussian-coefficient polynomial over 2n real vars,
        // then split by real/imaginary coefficient part.
        let mut acc = Polynomial::zero(Setting::Real, n2);
        for t in &self.terms {
            let mut prod = Polynomial::constant(Setting::Real, n2, t.coeff.clone());
            for (i, &e) in t.nu.iter().enumerate() {
                // z_i = x_i + i y_i
                let zi = zvar(n2, i, self.n, false);
                for _ in 0..e {
                    prod = prod.mul(&zi);
                }
            }
            for (i, &e) in t.mu.iter().enumerate() {
                let zbi = zvar(n2, i, self.n, true);
                for _ in 0..e {
                    prod = prod.mul(&zbi);
                }
            }
            acc = acc.add(&prod);
        }
        let mut g = BTreeMap::new();
        let mut h = BTreeMap::new();
        for t in &acc.terms {
            if !t.coeff.re.is_zero() {
                g.insert((t.nu.clone(), t.mu.clone()), GaussRat::from_rat(t.coeff.re.clone()));
            }
            if !t.coeff.im.is_zero() {
                h.insert((t.nu.clone(), t.mu.clone()), GaussRat::from_rat(t.coeff.im.clone()));
            }
        }
        (
            Polynomial::from_map(Setting::Real, n2, g),
            Polynomial::from_map(Setting::Real, n2, h),
        )
    }

    /// Total degree (max over terms of |nu| + |mu|).
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.nu.iter().sum::<u32>() + t.mu.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }
}

/// The polynomial `x_i + i*y_i` (or its conjugate) over 2n real variables.
fn zvar(n2: usize, i: usize, n: usize, conj: bool) -> Polynomial {
    let mut xs = vec![0u32; n2];
    xs[i] = 1;
    let mut ys = vec![0u32; n2];
    ys[n + i] = 1;
    let im = if conj { GaussRat::from_int(-1) } else { GaussRat::from_int(1) };
    let im = &im * &GaussRat::i();
    Polynomial::from_map(
        Setting::Real,
        n2,
        BTreeMap::from([
            ((xs, vec![0; n2]), GaussRat::one()),
            ((ys, vec![0; n2]), im),
        ]),
    )
}

/// A point of the source space, real or complex depending on the setting.
#[derive(Clone, Debug, PartialEq)]
pub enum NumericPoint {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl NumericPoint {
    /// Coordinates of the corresponding real point `(x_1..x_n, y_1..y_n)`;
    /// the identity for real points.
    pub fn realified(&self) -> Vec<f64> {
        match self {
            NumericPoint::Real(v) => v.clone(),
            NumericPoint::Complex(v) => {
                let mut out: Vec<f64> = v.iter().map(|z| z.re).collect();
                out.extend(v.iter().map(|z| z.im));
                out
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            NumericPoint::Real(v) => v.iter().all(|x| x.is_finite()),
            NumericPoint::Complex(v) => v.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
        }
    }
}

/// A polynomial mapping `F = (f_1, ..., f_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap {
    pub setting: Setting,
    pub n: usize,
    pub var_names: Vec<String>,
    pub component_names: Vec<String>,
    pub components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(
        setting: Setting,
        var_names: Vec<String>,
        component_names: Vec<String>,
        components: Vec<Polynomial>,
    ) -> Result<Self> {
        let n = var_names.len();
        let k = components.len();
        if k > n {
            return Err(Error::TooManyComponents { k, n });
        }
        for (name, f) in component_names.iter().zip(&components) {
            if f.n != n {
                return Err(Error::DimensionMismatch { expected: n, got: f.n });
            }
            let c0 = f.constant_term();
            if !c0.is_zero() {
                return Err(Error::NonzeroConstantTerm {
                    component: name.clone(),
                    value: c0.to_string(),
                });
            }
            if f.support().len() > MAX_SUPPORT {
                return Err(Error::DimensionTooLarge {
                    what: "support size",
                    value: f.support().len(),
                    limit: MAX_SUPPORT,
                });
            }
        }
        Ok(PolyMap { setting, n, var_names, component_names, components })
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    /// Entry `i` is true iff some component's support meets `{v_i > 0}`.
    pub fn effective_variables(&self) -> Vec<bool> {
        (0..self.n)
            .map(|i| {
                self.components
                    .iter()
                    .any(|f| f.support().iter().any(|v| v[i] > 0))
            })
            .collect()
    }

    /// The real mapping underlying a complex or mixed one: 2n variables
    /// `(x_1..x_n, y_1..y_n)` and 2k components `(g_1, h_1, ..., g_k, h_k)`.
    pub fn realify(&self) -> Result<PolyMap> {
        if self.setting == Setting::Real {
            return Err(Error::AlreadyReal);
        }
        let mut var_names: Vec<String> =
            self.var_names.iter().map(|v| format!("re_{v}")).collect();
        var_names.extend(self.var_names.iter().map(|v| format!("im_{v}")));
        // Components are grouped (re_1..re_k, im_1..im_k) to mirror the
        // variable grouping; for square maps this keeps the real Jacobian
        // determinant equal to the one computed in interleaved coordinates.
        let mut names = Vec::new();
        let mut comps = Vec::new();
        let mut im_names = Vec::new();
        let mut im_comps = Vec::new();
        for (name, f) in self.component_names.iter().zip(&self.components) {
            let (g, h) = f.realify();
            names.push(format!("re_{name}"));
            im_names.push(format!("im_{name}"));
            comps.push(g);
            im_comps.push(h);
        }
        names.extend(im_names);
        comps.extend(im_comps);
        PolyMap::new(Setting::Real, var_names, names, comps)
    }

    /// The map as a real mapping: itself when already real.
    pub fn as_real(&self) -> Result<PolyMap> {
        match self.setting {
            Setting::Real => Ok(self.clone()),
            _ => self.realify(),
        }
    }

    /// Real Jacobian matrix of the (realified) map at the (realified) point.
    pub fn jacobian(&self, x: &NumericPoint) -> Result<nalgebra::DMatrix<f64>> {
        let real = self.as_real().expect("as_real is infallible for valid maps");
        let coords = x.realified();
        if coords.len() != real.n {
            return Err(Error::DimensionMismatch { expected: real.n, got: coords.len() });
        }
        Ok(real.jacobian_real(&coords))
    }

    /// Jacobian of a real map at real coordinates. Panics if not real.
    pub fn jacobian_real(&self, x: &[f64]) -> nalgebra::DMatrix<f64> {
        assert_eq!(self.setting, Setting::Real);
        let k = self.k();
        let mut m = nalgebra::DMatrix::zeros(k, self.n);
        for (r, f) in self.components.iter().enumerate() {
            for c in 0..self.n {
                m[(r, c)] = f.partial(c).eval_f64(x);
            }
        }
        m
    }

    /// Symbolic Jacobian determinant of a square real map.
    pub fn jacobian_determinant(&self) -> Result<Polynomial> {
        if self.setting != Setting::Real {
            return Err(Error::SettingNotReal);
        }
        let k = self.k();
        if k != self.n {
            return Err(Error::NotApplicable("Jacobian determinant needs n = k"));
        }
        let rows: Vec<Vec<Polynomial>> = self
            .components
            .iter()
            .map(|f| (0..self.n).map(|i| f.partial(i)).collect())
            .collect();
        Ok(det_poly(&rows, self.setting, self.n))
    }

    pub fn eval_complex(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.components.iter().map(|f| f.eval_complex(z)).collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|f| f.eval_f64(x)).collect()
    }

    /// Canonical text form, re-parseable by the input grammar.
    pub fn print(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("setting: {}\n", self.setting));
        out.push_str(&format!("vars: {}\n", self.var_names.join(" ")));
        out.push_str("map:\n");
        for (name, f) in self.component_names.iter().zip(&self.components) {
            out.push_str(&format!("{} = {}\n", name, print_poly(f, &self.var_names)));
        }
        out
    }
}

/// Determinant of a square matrix of polynomials by Laplace expansion with
/// memoization over column subsets.
pub fn det_poly(rows: &[Vec<Polynomial>], setting: Setting, n: usize) -> Polynomial {
    let k = rows.len();
    let mut memo: std::collections::HashMap<u32, Polynomial> = std::collections::HashMap::new();
    memo.insert(0, Polynomial::constant(setting, n, GaussRat::one()));
    fn go(
        rows: &[Vec<Polynomial>],
        setting: Setting,
        n: usize,
        cols: u32,
        memo: &mut std::collections::HashMap<u32, Polynomial>,
    ) -> Polynomial {
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let r = cols.count_ones() as usize - 1; // expand along row r
        let row = rows.len() - cols.count_ones() as usize;
        let _ = r;
        let mut acc = Polynomial::zero(setting, n);
        let mut sign = 1i64;
        for c in 0..rows.len() {
            if cols & (1 << c) == 0 {
                continue;
            }
            let sub = go(rows, setting, n, cols & !(1 << c), memo);
            let term = rows[row][c].mul(&sub);
            acc = if sign > 0 { acc.add(&term) } else { acc.sub(&term) };
            sign = -sign;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    let full = (1u32 << k) - 1;
    go(rows, setting, n, full, &mut memo)
}

/// Prints a polynomial in the canonical grammar-compatible form.
pub fn print_poly(f: &Polynomial, vars: &[String]) -> String {
    use num::traits::{One, Signed};
    if f.terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, t) in f.terms.iter().enumerate() {
        let mut factors: Vec<String> = Vec::new();
        for (i, &e) in t.nu.iter().enumerate() {
            if e == 1 {
                factors.push(vars[i].clone());
            } else if e > 1 {
                factors.push(format!("{}^{}", vars[i], e));
            }
        }
        for (i, &e) in t.mu.iter().enumerate() {
            if e == 1 {
                factors.push(format!("conj({})", vars[i]));
            } else if e > 1 {
                factors.push(format!("conj({})^{}", vars[i], e));
            }
        }
        // Decide sign and magnitude for printing.
        let (neg, mag) = if t.coeff.im.is_zero() && t.coeff.re.is_negative() {
            (true, GaussRat::from_rat(t.coeff.re.abs()))
        } else if t.coeff.re.is_zero() && t.coeff.im.is_negative() {
            (true, GaussRat::new(Rat::zero(), t.coeff.im.abs()))
        } else {
            (false, t.coeff.clone())
        };
        if idx == 0 {
            if neg {
                out.push_str("-");
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let coeff_str = mag.to_string();
        let is_one = mag.im.is_zero() && mag.re.is_one();
        if factors.is_empty() {
            out.push_str(&coeff_str);
        } else if is_one {
            out.push_str(&factors.join("*"));
        } else {
            out.push_str(&format!("{}*{}", coeff_str, factors.join("*")));
        }
    }
    out
}
