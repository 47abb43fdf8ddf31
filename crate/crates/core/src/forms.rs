//! Homogeneous polynomials over exact rationals and the monomial index
//! order used for every matrix row and column in the crate.
//!
//! The global monomial order is graded lexicographic with the power of the
//! first variable descending, so the degree-3 binary basis reads
//! x^3, x^2 y, x y^2, y^3.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact scalar type used everywhere: arbitrary precision, always reduced,
/// positive denominator.
pub type Rational = BigRational;

/// Exponent vector of a monomial. The degree is the sum of the exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exps: Vec<u32>,
}

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex { exps }
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.exps[var]
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.n(), other.n());
        MultiIndex::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// All degree-`d` multi-indices in `n` variables, in the global order.
    pub fn basis(n: usize, d: usize) -> Vec<MultiIndex> {
        assert!(n >= 1, "need at least one variable");
        let mut out = Vec::with_capacity(basis_size(n, d));
        let mut current = vec![0u32; n];
        fill_basis(&mut out, &mut current, 0, d);
        out
    }

    /// Multinomial coefficient degree! / prod(exps_i!).
    pub fn multinomial(&self) -> BigInt {
        let mut result = factorial(self.degree());
        for &e in &self.exps {
            result /= factorial(e as usize);
        }
        result
    }
}

fn fill_basis(out: &mut Vec<MultiIndex>, current: &mut Vec<u32>, pos: usize, remaining: usize) {
    if pos + 1 == current.len() {
        current[pos] = remaining as u32;
        out.push(MultiIndex::new(current.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e as u32;
        fill_basis(out, current, pos + 1, remaining - e);
    }
}

/// binomial(n + d - 1, d): the number of degree-d monomials in n variables.
pub fn basis_size(n: usize, d: usize) -> usize {
    assert!(n >= 1, "need at least one variable");
    num_integer::binomial(BigInt::from(n + d - 1), BigInt::from(d))
        .try_into()
        .expect("basis size fits in usize")
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n()
            .cmp(&other.n())
            .then_with(|| self.degree().cmp(&other.degree()))
            // within a degree: x1-power descending, i.e. reversed lex
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.exps
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Homogeneous polynomial with exact rational coefficients, stored sparsely.
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality. The zero form keeps its nominal degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    n: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, Rational>,
}

impl Form {
    pub fn zero(n: usize, degree: usize) -> Self {
        assert!(n >= 1);
        Form {
            n,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, value: Rational) -> Self {
        let mut f = Form::zero(n, 0);
        f.insert(MultiIndex::new(vec![0; n]), value);
        f
    }

    /// Build from (index, coefficient) terms; duplicate indices accumulate.
    pub fn from_terms(
        n: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self> {
        let mut f = Form::zero(n, degree);
        for (idx, c) in terms {
            if idx.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: idx.n(),
                });
            }
            if idx.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: idx.degree(),
                });
            }
            f.accumulate(idx, c);
        }
        Ok(f)
    }

    /// Single-term convenience constructor.
    pub fn monomial(n: usize, exps: &[u32], coeff: Rational) -> Self {
        assert_eq!(exps.len(), n);
        let idx = MultiIndex::new(exps.to_vec());
        let degree = idx.degree();
        let mut f = Form::zero(n, degree);
        f.insert(idx, coeff);
        f
    }

    /// The linear form `c[0]*x1 + ... + c[n-1]*xn`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut f = Form::zero(n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut exps = vec![0u32; n];
            exps[i] = 1;
            f.insert(MultiIndex::new(exps), c.clone());
        }
        f
    }

    /// x1^2 + ... + xn^2.
    pub fn norm_squared(n: usize) -> Self {
        let mut f = Form::zero(n, 2);
        for i in 0..n {
            let mut exps = vec![0u32; n];
            exps[i] = 2;
            f.insert(MultiIndex::new(exps), Rational::one());
        }
        f
    }

    fn insert(&mut self, idx: MultiIndex, c: Rational) {
        if !c.is_zero() {
            self.coeffs.insert(idx, c);
        }
    }

    fn accumulate(&mut self, idx: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(idx);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Rational {
        self.coeffs.get(idx).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.accumulate(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> Form {
        if s.is_zero() {
            return Form::zero(self.n, self.degree);
        }
        Form {
            n: self.n,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(idx, c)| (idx.clone(), c * s))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Form) -> Result<Form> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut out = Form::zero(self.n, self.degree + other.degree);
        for (ia, ca) in &self.coeffs {
            for (ib, cb) in &other.coeffs {
                out.accumulate(ia.add(ib), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Form {
        let mut out = Form::constant(self.n, Rational::one());
        for _ in 0..k {
            out = out.mul(self).expect("same variable count");
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.n {
            return Err(Error::PointLength {
                expected: self.n,
                got: point.len(),
            });
        }
        let mut total = Rational::zero();
        for (idx, c) in &self.coeffs {
            let mut term = c.clone();
            for (v, &e) in point.iter().zip(idx.exps()) {
                for _ in 0..e {
                    term *= v;
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Iterated exact partial derivative d^order / d x_var^order.
    pub fn partial_derivative(&self, var: usize, order: usize) -> Result<Form> {
        if var >= self.n {
            return Err(Error::VariableOutOfRange { var, n: self.n });
        }
        let mut cur = self.clone();
        for _ in 0..order {
            let next_degree = cur.degree.saturating_sub(1);
            let mut next = Form::zero(cur.n, next_degree);
            for (idx, c) in &cur.coeffs {
                let e = idx.exp(var);
                if e == 0 {
                    continue;
                }
                let mut exps = idx.exps().to_vec();
                exps[var] = e - 1;
                next.accumulate(MultiIndex::new(exps), c * Rational::from(BigInt::from(e)));
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Sum of second partials over all variables; the zero form of degree
    /// max(degree - 2, 0) when the input has degree < 2.
    pub fn laplacian(&self) -> Form {
        let out_degree = self.degree.saturating_sub(2);
        let mut out = Form::zero(self.n, out_degree);
        if self.degree < 2 {
            return out;
        }
        for var in 0..self.n {
            let second = self.partial_derivative(var, 2).expect("var in range");
            for (idx, c) in &second.coeffs {
                out.accumulate(idx.clone(), c.clone());
            }
        }
        out
    }

    /// Coefficients in the global basis order for this form's (n, degree).
    pub fn coeff_vector(&self) -> Vec<Rational> {
        MultiIndex::basis(self.n, self.degree)
            .into_iter()
            .map(|idx| self.coeff(&idx))
            .collect()
    }

    pub fn from_coeff_vector(n: usize, degree: usize, v: &[Rational]) -> Result<Form> {
        let basis = MultiIndex::basis(n, degree);
        if basis.len() != v.len() {
            return Err(Error::SideMismatch {
                expected: basis.len(),
                got: v.len(),
            });
        }
        Form::from_terms(n, degree, basis.into_iter().zip(v.iter().cloned()))
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in &self.coeffs {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let mono: Vec<String> = idx
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}
