//! Sparse multivariate polynomials and Laurent polynomials with exact rational
//! coefficients, the parser/printer for the element file grammar, and the two
//! divisibility tests carrying equivariant Euler classes: division by a linear
//! form and division by a binomial 1 − t^a.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{content_and_primitive, snf, Int, IntMatrix, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative exponent at position {pos} outside Laurent mode")]
    NegativeExponent { pos: usize },
    #[error("variable count mismatch: {0} vs {1}")]
    VarCountMismatch(usize, usize),
}

/// Sparse (Laurent) polynomial: exponent vector → nonzero rational coefficient.
/// Ordinary polynomials are the sub-ring with nonnegative exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    num_vars: usize,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl Poly {
    pub fn zero(num_vars: usize) -> Poly {
        Poly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Rat) -> Poly {
        let mut p = Poly::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; num_vars], c);
        }
        p
    }

    pub fn one(num_vars: usize) -> Poly {
        Poly::constant(num_vars, Rat::one())
    }

    pub fn var(num_vars: usize, i: usize) -> Poly {
        assert!(i < num_vars);
        let mut e = vec![0i64; num_vars];
        e[i] = 1;
        Poly::monomial(num_vars, e, Rat::one())
    }

    pub fn monomial(num_vars: usize, exps: Vec<i64>, coeff: Rat) -> Poly {
        assert_eq!(exps.len(), num_vars);
        let mut p = Poly::zero(num_vars);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_laurent_only(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x < 0))
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    fn insert(&mut self, exps: Vec<i64>, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scalar_mul(&self, s: &Rat) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.num_vars);
        }
        Poly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_vars(other)?;
        let mut out = Poly::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one(self.num_vars);
        for _ in 0..n {
            out = out.mul(self).unwrap();
        }
        out
    }

    fn check_vars(&self, other: &Poly) -> Result<(), PolyError> {
        if self.num_vars != other.num_vars {
            return Err(PolyError::VarCountMismatch(self.num_vars, other.num_vars));
        }
        Ok(())
    }

    /// Substitute variable `i` by an arbitrary polynomial (the remaining
    /// variables are kept). Requires nonnegative exponents of variable `i`.
    pub fn substitute(&self, i: usize, repl: &Poly) -> Poly {
        let mut out = Poly::zero(self.num_vars);
        for (e, c) in &self.terms {
            let d = e[i];
            assert!(d >= 0, "substitution needs a nonnegative exponent");
            let mut base = e.clone();
            base[i] = 0;
            let term = Poly::monomial(self.num_vars, base, c.clone())
                .mul(&repl.pow(d as u32))
                .unwrap();
            out = out.add(&term).unwrap();
        }
        out
    }

    /// Monomial change of coordinates along a unimodular matrix: exponent row
    /// vector e becomes e·V. An exact ring isomorphism of the Laurent ring.
    pub fn exponent_change(&self, v: &IntMatrix) -> Poly {
        assert_eq!(v.rows, self.num_vars);
        assert_eq!(v.cols, self.num_vars);
        let mut out = Poly::zero(self.num_vars);
        for (e, c) in &self.terms {
            let new_e: Vec<i64> = (0..self.num_vars)
                .map(|j| {
                    let mut s = Int::zero();
                    for (k, &ek) in e.iter().enumerate() {
                        s += Int::from(ek) * &v[(k, j)];
                    }
                    i64::try_from(&s).expect("exponent fits in i64")
                })
                .collect();
            out.insert(new_e, c.clone());
        }
        out
    }

    /// Total degree of the highest term; None for the zero polynomial.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Exponent range of a single variable: (min, max); None when zero.
    fn var_range(&self, i: usize) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|e| e[i]);
        let first = it.next()?;
        let mut lo = first;
        let mut hi = first;
        for x in it {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        Some((lo, hi))
    }
}

/// The linear form ⟨coeffs, u⟩ as a polynomial.
pub fn linear_form(coeffs: &[Int]) -> Poly {
    let n = coeffs.len();
    let mut p = Poly::zero(n);
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let mut e = vec![0i64; n];
            e[i] = 1;
            p.insert(e, Rat::from(c.clone()));
        }
    }
    p
}

/// Coefficient ring for divisibility verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffRing {
    Q,
    Z,
}

/// Decide whether the linear form ⟨lambda, u⟩ divides g, returning the quotient
/// when it does. In Z-mode the quotient must have integer coefficients and
/// lambda is used exactly as given.
pub fn divides_linear(lambda: &[Int], g: &Poly, ring: CoeffRing) -> Option<Poly> {
    assert_eq!(lambda.len(), g.num_vars());
    let pivot = lambda
        .iter()
        .position(|c| !c.is_zero())
        .expect("linear form must be nonzero");
    let n = g.num_vars();
    let lambda_poly = {
        let mut p = Poly::zero(n);
        for (i, c) in lambda.iter().enumerate() {
            if !c.is_zero() {
                p = p.add(&Poly::var(n, i).scalar_mul(&Rat::from(c.clone()))).unwrap();
            }
        }
        p
    };
    let inv = Rat::new(Int::one(), lambda[pivot].clone());
    let mut rem = g.clone();
    let mut quot = Poly::zero(n);
    while let Some((lo, hi)) = rem.var_range(pivot) {
        assert!(lo >= 0, "divides_linear expects an ordinary polynomial");
        if hi < 1 {
            break;
        }
        // peel the top slice in the pivot variable
        let top: Vec<(Vec<i64>, Rat)> = rem
            .terms()
            .filter(|(e, _)| e[pivot] == hi)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        let mut t = Poly::zero(n);
        for (mut e, c) in top {
            e[pivot] -= 1;
            t.insert(e, c * &inv);
        }
        quot = quot.add(&t).unwrap();
        rem = rem.sub(&t.mul(&lambda_poly).unwrap()).unwrap();
    }
    if !rem.is_zero() {
        return None;
    }
    if ring == CoeffRing::Z && !quot.has_integer_coefficients() {
        return None;
    }
    Some(quot)
}

/// Decide whether 1 − t^a divides the Laurent polynomial g (over Q).
///
/// Write a = c·a' with a' primitive, change exponent coordinates so a' becomes
/// the first basis vector, and divide by 1 − x₁ᶜ univariately.
pub fn divides_binomial(a: &[i64], g: &Poly) -> bool {
    assert_eq!(a.len(), g.num_vars());
    let a_int: Vec<Int> = a.iter().map(|&x| Int::from(x)).collect();
    let (c, prim) = content_and_primitive(&a_int).expect("exponent vector must be nonzero");
    let c = i64::try_from(&c).expect("content fits in i64");
    if g.is_zero() {
        return true;
    }
    // V from U·[a']·V = [1 0 … 0]; exponents transform as e ↦ e·V
    let row = IntMatrix::from_rows(vec![prim.clone()]);
    let dec = snf(&row);
    debug_assert_eq!(dec.d[(0, 0)], Int::one());
    let mut v = dec.v;
    if dec.u[(0, 0)] == -Int::one() {
        // fold the sign of U into V so that a'·V = e₁ exactly
        for r in 0..v.rows {
            let x = -v[(r, 0)].clone();
            v[(r, 0)] = x;
        }
    }
    let mut h = g.exponent_change(&v);
    // univariate division by 1 − x₁ᶜ with Laurent coefficients in the rest
    loop {
        let Some((_, hi)) = h.var_range(0) else {
            return true;
        };
        let lo = h.var_range(0).unwrap().0;
        if hi - lo < c {
            return h.is_zero();
        }
        let top: Vec<(Vec<i64>, Rat)> = h
            .terms()
            .filter(|(e, _)| e[0] == hi)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        // g ≡ g − T·x₁^hi + T·x₁^(hi−c)  (mod 1 − x₁ᶜ)
        for (e, coeff) in top {
            let mut down = e.clone();
            down[0] -= c;
            h.insert(e, -coeff.clone());
            h.insert(down, coeff);
        }
    }
}

/// Parse mode for the element grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseMode {
    Ordinary,
    Laurent,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
    mode: ParseMode,
}

/// Parse the element grammar:
/// expr := term (('+'|'-') term)*; term := coeff ('*' factor)* | factor ('*' factor)*;
/// factor := var ('^' int)? | '(' expr ')'; coeff := int | int '/' posint.
pub fn parse(text: &str, vars: &[String], mode: ParseMode) -> Result<Poly, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
        mode,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(PolyError::Syntax {
            pos: p.pos,
            msg: "trailing input".into(),
        });
    }
    Ok(poly)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let n = self.vars.len();
        let mut negate = false;
        if let Some(c) = self.peek() {
            if c == b'+' || c == b'-' {
                // a leading sign folds into the first term
                negate = c == b'-';
                self.pos += 1;
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                b'-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => break,
            }
        }
        if acc.num_vars() != n {
            return Err(PolyError::VarCountMismatch(acc.num_vars(), n));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = match self.peek() {
            Some(c) if c.is_ascii_digit() => self.coeff()?,
            _ => self.factor()?,
        };
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn coeff(&mut self) -> Result<Poly, PolyError> {
        let num = self.int()?;
        let den = if let Some(b'/') = self.peek() {
            self.pos += 1;
            let p = self.pos;
            let d = self.int()?;
            if !d.is_positive() {
                return Err(PolyError::Syntax {
                    pos: p,
                    msg: "denominator must be positive".into(),
                });
            }
            d
        } else {
            Int::one()
        };
        Ok(Poly::constant(self.vars.len(), Rat::new(num, den)))
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(PolyError::Syntax {
                        pos: self.pos,
                        msg: "expected ')'".into(),
                    }),
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let Some(idx) = self.vars.iter().position(|v| v == name) else {
                    return Err(PolyError::Syntax {
                        pos: start,
                        msg: format!("unknown variable '{name}'"),
                    });
                };
                let mut exp = 1i64;
                if let Some(b'^') = self.peek() {
                    self.pos += 1;
                    let p = self.pos;
                    let e = self.int()?;
                    exp = i64::try_from(&e).map_err(|_| PolyError::Syntax {
                        pos: p,
                        msg: "exponent out of range".into(),
                    })?;
                    if exp < 0 && self.mode == ParseMode::Ordinary {
                        return Err(PolyError::NegativeExponent { pos: p });
                    }
                }
                let mut exps = vec![0i64; self.vars.len()];
                exps[idx] = exp;
                Ok(Poly::monomial(self.vars.len(), exps, Rat::one()))
            }
            _ => Err(PolyError::Syntax {
                pos: self.pos,
                msg: "expected factor".into(),
            }),
        }
    }

    fn int(&mut self) -> Result<Int, PolyError> {
        self.skip_ws();
        let start = self.pos;
        if let Some(&c) = self.src.get(self.pos) {
            if c == b'-' || c == b'+' {
                self.pos += 1;
            }
        }
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(PolyError::Syntax {
                pos: start,
                msg: "expected integer".into(),
            });
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }
}

/// Canonical printing: terms in graded-lexicographic order (highest first),
/// coefficients as p/q, exponents as e.g. `u1^2*u3`.
pub fn print(poly: &Poly, vars: &[String]) -> String {
    assert_eq!(vars.len(), poly.num_vars());
    if poly.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&Vec<i64>, &Rat)> = poly.terms().collect();
    terms.sort_by(|(ea, _), (eb, _)| {
        let da: i64 = ea.iter().sum();
        let db: i64 = eb.iter().sum();
        db.cmp(&da).then_with(|| eb.cmp(ea))
    });
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let factors: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(j, &x)| {
                if x == 1 {
                    vars[j].clone()
                } else {
                    format!("{}^{}", vars[j], x)
                }
            })
            .collect();
        if factors.is_empty() {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}
