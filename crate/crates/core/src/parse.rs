//! Parser for the mapping input format.
//!
//! ```text
//! setting: real|complex|mixed
//! vars: x y z
//! map:
//! f1 = x^2 - y^2
//! f2 = 1/2*x*y + conj(z)
//! ```
//!
//! Expressions use `+ - * ^`, integer or rational literals `p/q`, `conj(v)`
//! in the mixed setting and `i` as the imaginary unit in complex/mixed
//! coefficients. Whitespace-insensitive inside expressions.

use crate::error::{Error, Result};
use crate::poly::{Polynomial, PolyMap, Setting};
use crate::scalar::{GaussRat, Rat};
use num::bigint::BigInt;
use std::collections::BTreeMap;
use std::str::FromStr;

/// Options controlling parse-time normalization.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Replace `f_i` by `f_i - f_i(0)` instead of rejecting a nonzero
    /// constant term. The shift is recorded on the result.
    pub translate_constant_terms: bool,
}

/// A parsed map plus any normalization applied.
#[derive(Clone, Debug)]
pub struct ParsedMap {
    pub map: PolyMap,
    /// Component names whose constant term was shifted away, with the shift.
    pub shifts: Vec<(String, String)>,
}

pub fn parse_polynomial_map(text: &str) -> Result<PolyMap> {
    Ok(parse_with_options(text, ParseOptions::default())?.map)
}

pub fn parse_with_options(text: &str, opts: ParseOptions) -> Result<ParsedMap> {
    let mut setting: Option<Setting> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut in_map = false;
    let mut names = Vec::new();
    let mut comps = Vec::new();
    let mut shifts = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !in_map {
            if let Some(rest) = line.strip_prefix("setting:") {
                setting = Some(match rest.trim() {
                    "real" => Setting::Real,
                    "complex" => Setting::Complex,
                    "mixed" => Setting::Mixed,
                    other => {
                        return Err(Error::Syntax {
                            line: lineno,
                            col: 1,
                            msg: format!("unknown setting `{other}`"),
                        })
                    }
                });
                continue;
            }
            if let Some(rest) = line.strip_prefix("vars:") {
                let vs: Vec<String> = rest.split_whitespace().map(|s| s.to_string()).collect();
                if vs.is_empty() {
                    return Err(Error::Syntax {
                        line: lineno,
                        col: 1,
                        msg: "empty variable list".into(),
                    });
                }
                for v in &vs {
                    if !is_ident(v) {
                        return Err(Error::Syntax {
                            line: lineno,
                            col: 1,
                            msg: format!("invalid variable name `{v}`"),
                        });
                    }
                }
                vars = Some(vs);
                continue;
            }
            if line == "map:" {
                if setting.is_none() || vars.is_none() {
                    return Err(Error::Syntax {
                        line: lineno,
                        col: 1,
                        msg: "`map:` before `setting:`/`vars:` headers".into(),
                    });
                }
                in_map = true;
                continue;
            }
            return Err(Error::Syntax {
                line: lineno,
                col: 1,
                msg: format!("expected header line, got `{line}`"),
            });
        }
        // component line: name = expr
        let eq = line.find('=').ok_or(Error::Syntax {
            line: lineno,
            col: 1,
            msg: "expected `<name> = <expr>`".into(),
        })?;
        let name = line[..eq].trim().to_string();
        if !is_ident(&name) {
            return Err(Error::Syntax {
                line: lineno,
                col: 1,
                msg: format!("invalid component name `{name}`"),
            });
        }
        let expr = &line[eq + 1..];
        let setting = setting.unwrap();
        let vars_ref = vars.as_ref().unwrap();
        let mut p = ExprParser::new(expr, lineno, eq + 2, setting, vars_ref);
        let mut poly = p.parse_expr()?;
        p.expect_end()?;
        let c0 = poly.constant_term();
        if !c0.is_zero() {
            if opts.translate_constant_terms {
                poly = poly.sub(&Polynomial::constant(setting, vars_ref.len(), c0.clone()));
                shifts.push((name.clone(), c0.to_string()));
            } else {
                return Err(Error::NonzeroConstantTerm {
                    component: name,
                    value: c0.to_string(),
                });
            }
        }
        names.push(name);
        comps.push(poly);
    }
    if !in_map || comps.is_empty() {
        return Err(Error::Syntax { line: 1, col: 1, msg: "no `map:` section with components".into() });
    }
    let map = PolyMap::new(setting.unwrap(), vars.unwrap(), names, comps)?;
    Ok(ParsedMap { map, shifts })
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars().next().unwrap().is_ascii_alphabetic()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "conj"
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col0: usize,
    setting: Setting,
    vars: &'a [String],
}

impl<'a> ExprParser<'a> {
    fn new(src: &'a str, line: usize, col0: usize, setting: Setting, vars: &'a [String]) -> Self {
        ExprParser { src: src.as_bytes(), pos: 0, line, col0, setting, vars }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { line: self.line, col: self.col0 + self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect_end(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return Err(self.err("trailing input after expression"));
        }
        Ok(())
    }

    fn parse_expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.parse_term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.parse_term()?
            }
            _ => self.parse_term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.parse_term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.parse_term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Polynomial> {
        let mut acc = self.parse_power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.parse_power()?);
        }
        Ok(acc)
    }

    fn parse_power(&mut self) -> Result<Polynomial> {
        let base = self.parse_atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.parse_uint()?;
            let mut acc = Polynomial::constant(self.setting, self.vars.len(), GaussRat::one());
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn parse_uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a nonnegative integer exponent"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("exponent out of range"))
    }

    fn parse_atom(&mut self) -> Result<Polynomial> {
        let n = self.vars.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.parse_atom()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.parse_bigint()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.parse_bigint()?;
                    if den == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(Polynomial::constant(
                        self.setting,
                        n,
                        GaussRat::from_rat(Rat::new(num, den)),
                    ))
                } else {
                    Ok(Polynomial::constant(
                        self.setting,
                        n,
                        GaussRat::from_rat(Rat::from_integer(num)),
                    ))
                }
            }
            Some(c) if (c as char).is_ascii_alphabetic() => self.parse_name(),
            _ => Err(self.err("expected a factor")),
        }
    }

    fn parse_bigint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        BigInt::from_str(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
            .map_err(|_| self.err("bad integer literal"))
    }

    fn parse_name(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && ((self.src[self.pos] as char).is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        let n = self.vars.len();
        if name == "conj" {
            if self.setting != Setting::Mixed {
                return Err(Error::ConjInNonMixed { line: self.line, col: self.col0 + start });
            }
            if self.peek() != Some(b'(') {
                return Err(self.err("expected `(` after conj"));
            }
            self.pos += 1;
            let var = self.parse_var_name()?;
            if self.peek() != Some(b')') {
                return Err(self.err("expected `)`"));
            }
            self.pos += 1;
            let i = self.var_index(&var, start)?;
            let mut mu = vec![0u32; n];
            mu[i] = 1;
            return Ok(Polynomial::from_map(
                self.setting,
                n,
                BTreeMap::from([((vec![0; n], mu), GaussRat::one())]),
            ));
        }
        if name == "i" && self.setting != Setting::Real && !self.vars.iter().any(|v| v == "i") {
            return Ok(Polynomial::constant(self.setting, n, GaussRat::i()));
        }
        let i = self.var_index(&name, start)?;
        let mut nu = vec![0u32; n];
        nu[i] = 1;
        Ok(Polynomial::from_map(
            self.setting,
            n,
            BTreeMap::from([((nu, vec![0; n]), GaussRat::one())]),
        ))
    }

    fn parse_var_name(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && ((self.src[self.pos] as char).is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a variable name"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }

    fn var_index(&self, name: &str, at: usize) -> Result<usize> {
        self.vars.iter().position(|v| v == name).ok_or(Error::Syntax {
            line: self.line,
            col: self.col0 + at,
            msg: format!("unknown variable `{name}`"),
        })
    }
}
