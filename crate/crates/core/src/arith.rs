//! Exact rational scalars and small dense vectors/matrices.
//!
//! `Rational` keeps a machine-word representation while numerator and
//! denominator fit in an `i64` and transparently promotes to a bignum
//! fraction otherwise. Values are always stored in lowest terms with a
//! positive denominator, so derived equality and hashing are structural.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Index, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithError {
    DivisionByZero,
    DimensionMismatch { expected: usize, found: usize },
    Parse,
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithError::DivisionByZero => f.write_str("division by zero"),
            ArithError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            ArithError::Parse => f.write_str("malformed rational literal"),
        }
    }
}

impl core::error::Error for ArithError {}

#[derive(Clone)]
enum Repr {
    // Invariant: d > 0, gcd(|n|, d) == 1, n != i64::MIN.
    Small(i64, i64),
    // Invariant: does not fit `Small`.
    Big(BigRational),
}

/// Arbitrary-precision rational number in canonical form.
#[derive(Clone)]
pub struct Rational(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_i128(n as i128, 1)
    }

    /// Builds `numer / denom`, reducing to lowest terms.
    pub fn new(numer: i64, denom: i64) -> Result<Self, ArithError> {
        if denom == 0 {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::from_i128(numer as i128, denom as i128))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self, ArithError> {
        if denom.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::from_big(BigRational::new(numer, denom)))
    }

    // d != 0
    fn from_i128(n: i128, d: i128) -> Self {
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        if n > i64::MIN as i128 && n <= i64::MAX as i128 && d <= i64::MAX as i128 {
            Rational(Repr::Small(n as i64, d as i64))
        } else {
            Rational(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))
        }
    }

    // `r` must already be reduced (BigRational arithmetic guarantees this).
    fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Rational(Repr::Small(n, d));
            }
        }
        Rational(Repr::Big(r))
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self, ArithError> {
        Rational::one().checked_div(self)
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                Self::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => Self::from_big(self.to_big() / rhs.to_big()),
        })
    }

    /// Lossy conversion, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Least common multiple of the denominators of `values` (1 for an empty slice).
    pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
        values
            .into_iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(&v.denom()))
    }

    /// Greatest common divisor of the numerators of `values` (0 if all are zero).
    pub fn numerator_gcd<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
        values
            .into_iter()
            .fold(BigInt::zero(), |acc, v| acc.gcd(&v.numer()))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n as i64)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_big(BigRational::from_integer(n))
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            if b == d {
                Rational::from_i128(*a as i128 + *c as i128, *b as i128)
            } else {
                Rational::from_i128(
                    *a as i128 * *d as i128 + *c as i128 * *b as i128,
                    *b as i128 * *d as i128,
                )
            }
        }
        _ => Rational::from_big(x.to_big() + y.to_big()),
    }
}

fn mul_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(0, _), _) | (_, Repr::Small(0, _)) => Rational::zero(),
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
        }
        _ => Rational::from_big(x.to_big() * y.to_big()),
    }
}

fn neg_ref(x: &Rational) -> Rational {
    match &x.0 {
        Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
        Repr::Big(r) => Rational::from_big(-r.clone()),
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_ref(&self)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_ref(self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $body(self, rhs)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $body(self, &rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $body(&self, rhs)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $body(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, |x: &Rational, y: &Rational| add_ref(x, &neg_ref(y)));
forward_binop!(Mul, mul, mul_ref);
// Panics on a zero divisor, like integer division; use `checked_div` to get an error.
forward_binop!(Div, div, |x: &Rational, y: &Rational| x
    .checked_div(y)
    .expect("rational division by zero"));

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = add_ref(self, rhs);
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = add_ref(self, &rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = add_ref(self, &neg_ref(rhs));
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = mul_ref(self, rhs);
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str) -> Result<BigInt, ArithError> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ArithError::Parse);
    }
    BigInt::from_str(s).map_err(|_| ArithError::Parse)
}

impl FromStr for Rational {
    type Err = ArithError;

    /// Accepts `p` or `p/q` with optional sign on `p`; decimals are rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.split_once('/') {
            None => Ok(Rational::from(parse_int(s)?)),
            Some((p, q)) => {
                let q = q.trim();
                if q.starts_with(['-', '+']) {
                    return Err(ArithError::Parse);
                }
                Rational::from_bigints(parse_int(p.trim())?, parse_int(q)?)
            }
        }
    }
}

/// Dense vector of rationals with a fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVector(entries)
    }

    pub fn zeros(len: usize) -> Self {
        QVector(alloc::vec![Rational::zero(); len])
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        QVector(entries.iter().map(|&v| Rational::from_integer(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Result<Rational, ArithError> {
        check_dim(self.len(), other.len())?;
        Ok(dot(&self.0, &other.0))
    }

    pub fn scale(&self, k: &Rational) -> QVector {
        QVector(self.0.iter().map(|v| v * k).collect())
    }

    pub fn add(&self, other: &QVector) -> Result<QVector, ArithError> {
        check_dim(self.len(), other.len())?;
        Ok(QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &QVector) -> Result<QVector, ArithError> {
        check_dim(self.len(), other.len())?;
        Ok(QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &QVector) -> QVector {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        QVector(v)
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl From<Vec<Rational>> for QVector {
    fn from(v: Vec<Rational>) -> Self {
        QVector(v)
    }
}

impl FromIterator<Rational> for QVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        QVector(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a QVector {
    type Item = &'a Rational;
    type IntoIter = core::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("⟩")
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), ArithError> {
    if expected == found {
        Ok(())
    } else {
        Err(ArithError::DimensionMismatch { expected, found })
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: alloc::vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a `rows.len() × cols` matrix; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self, ArithError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for row in rows {
            check_dim(cols, row.len())?;
            data.extend(row);
        }
        Ok(QMatrix { rows: n, cols, data })
    }

    pub fn from_int_rows(cols: usize, rows: &[&[i64]]) -> Result<Self, ArithError> {
        QMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// `M v`.
    pub fn mat_vec(&self, v: &QVector) -> Result<QVector, ArithError> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows).map(|i| dot(self.row(i), v.as_slice())).collect())
    }

    /// `vᵀ M`, returned as a column vector.
    pub fn vec_mat(&self, v: &QVector) -> Result<QVector, ArithError> {
        check_dim(self.rows, v.len())?;
        let mut out = alloc::vec![Rational::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += vi * a;
                }
            }
        }
        Ok(QVector(out))
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix, ArithError> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Rows reordered so that row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<QMatrix, ArithError> {
        check_dim(self.rows, perm.len())?;
        let rows = perm.iter().map(|&p| self.row(p).to_vec()).collect();
        QMatrix::from_rows(self.cols, rows)
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn fraction_addition() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
    }

    #[test]
    fn canonical_on_construction() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(3, -6).to_string(), "-1/2");
        assert_eq!(q(0, -5), Rational::zero());
    }

    #[test]
    fn self_division_is_one() {
        assert_eq!(q(3, 7) / q(3, 7), Rational::one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(q(1, 2).checked_div(&Rational::zero()), Err(ArithError::DivisionByZero));
        assert_eq!(Rational::new(1, 0), Err(ArithError::DivisionByZero));
        assert_eq!(Rational::zero().recip(), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn promotes_and_demotes_across_word_size() {
        let big = Rational::from_integer(i64::MAX) * Rational::from_integer(4);
        assert_eq!(big.to_string(), "36893488147419103228");
        let back = big / Rational::from_integer(4);
        assert_eq!(back, Rational::from_integer(i64::MAX));
        assert!(matches!(back.0, Repr::Small(..)));
        let tiny = q(1, i64::MAX) * q(1, 3);
        assert_eq!(tiny * Rational::from_integer(3), q(1, i64::MAX));
    }

    #[test]
    fn render_and_parse() {
        for s in ["0", "7", "-3/4", "123456789012345678901234567891/7"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("6/4".parse::<Rational>().unwrap(), q(3, 2));
        assert!("1.5".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn identity_mat_vec() {
        let v = QVector::from_ints(&[3, -5]);
        assert_eq!(QMatrix::identity(2).mat_vec(&v).unwrap(), v);
    }

    #[test]
    fn mat_vec_dimension_mismatch() {
        let m = QMatrix::identity(2);
        assert_eq!(
            m.mat_vec(&QVector::zeros(3)),
            Err(ArithError::DimensionMismatch { expected: 2, found: 3 })
        );
        assert!(m.vec_mat(&QVector::zeros(1)).is_err());
        assert!(QMatrix::from_int_rows(2, &[&[1, 2], &[3]]).is_err());
    }

    #[test]
    fn lambda2_times_primed_matrix_of_log2_loop() {
        // Hand product: rows 1 and 2 of A' are ⟨0,0⟩ and ⟨2,0⟩.
        let a_primed = QMatrix::from_int_rows(
            2,
            &[&[0, 0], &[2, 0], &[-2, 0], &[0, -1], &[0, 1], &[0, -1]],
        )
        .unwrap();
        let lambda2 = QVector::from_ints(&[1, 1, 0, 0, 0, 0]);
        assert_eq!(a_primed.vec_mat(&lambda2).unwrap(), QVector::from_ints(&[2, 0]));
        assert_eq!(
            a_primed.transpose().mat_vec(&lambda2).unwrap(),
            QVector::from_ints(&[2, 0])
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rational() -> impl Strategy<Value = Rational> {
            prop_oneof![
                (-50i64..50, 1i64..30).prop_map(|(n, d)| q(n, d)),
                (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| q(n, d)),
            ]
        }

        fn matrix() -> impl Strategy<Value = QMatrix> {
            (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
                proptest::collection::vec(proptest::collection::vec(rational(), c), r)
                    .prop_map(move |rows| QMatrix::from_rows(c, rows).unwrap())
            })
        }

        proptest! {
            #[test]
            fn field_axioms(a in rational(), b in rational(), c in rational()) {
                prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
                prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
                prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
                prop_assert_eq!(&a - &a, Rational::zero());
                if !b.is_zero() {
                    prop_assert_eq!((&a / &b) * &b, a.clone());
                }
            }

            #[test]
            fn canonical_form_is_preserved(a in rational(), b in rational()) {
                for r in [&a + &b, &a * &b, &a - &b] {
                    let (n, d) = (r.numer(), r.denom());
                    prop_assert!(d > BigInt::zero());
                    prop_assert!(n.gcd(&d) == BigInt::one() || n.is_zero());
                    // Equal values built through different routes are structurally equal.
                    prop_assert_eq!(Rational::from_bigints(n, d).unwrap(), r);
                }
            }

            #[test]
            fn display_parse_round_trip(a in rational()) {
                prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
            }

            #[test]
            fn transpose_is_an_involution(m in matrix()) {
                prop_assert_eq!(m.transpose().transpose(), m);
            }

            #[test]
            fn ordering_agrees_with_subtraction(a in rational(), b in rational()) {
                prop_assert_eq!(a.cmp(&b), (&a - &b).signum().cmp(&0));
            }
        }
    }
}
