//! Arithmetic in `GF(2^n)`, `1 <= n <= 16`, as polynomial residues over `GF(2)`.
//!
//! Elements are bit vectors: bit `i` is the coefficient of `x^i`. Addition is
//! XOR and needs no field context; multiplication goes through log/exp tables
//! built once per field from a primitive element.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign};
use core::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 16;

/// A residue class modulo the field modulus, stored as its `n` low bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps raw bits without range checking; see [`Gf2nField::element`].
    pub const fn from_bits(bits: u32) -> Self {
        FieldElement(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for FieldElement {
    type Output = FieldElement;

    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElement {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

impl core::iter::Sum for FieldElement {
    fn sum<I: Iterator<Item = FieldElement>>(iter: I) -> Self {
        iter.fold(FieldElement::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

struct Tables {
    // exp has length 2(q-1) so that log a + log b never needs a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The field `GF(2^n)` defined by an irreducible modulus.
///
/// Cloning is cheap: the multiplication tables are shared.
#[derive(Clone)]
pub struct Gf2nField {
    degree: u32,
    modulus: u32,
    tables: Arc<Tables>,
}

impl PartialEq for Gf2nField {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.modulus == other.modulus
    }
}

impl Eq for Gf2nField {}

impl fmt::Debug for Gf2nField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2nField({self})")
    }
}

/// Canonical spec string: `gf2` for the prime field, `gf2^n/0xMM` otherwise.
impl fmt::Display for Gf2nField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 1 {
            write!(f, "gf2")
        } else {
            write!(f, "gf2^{}/{:#x}", self.degree, self.modulus)
        }
    }
}

impl FromStr for Gf2nField {
    type Err = Error;

    /// Accepts `gf2`, `gf2^n` (default modulus) and `gf2^n/0xMM`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "gf2" {
            return Gf2nField::with_degree(1);
        }
        let rest = s
            .strip_prefix("gf2^")
            .ok_or_else(|| Error::field(format!("field spec {s:?} must start with \"gf2\"")))?;
        let (deg, modulus) = match rest.split_once('/') {
            Some((d, m)) => (d, Some(m)),
            None => (rest, None),
        };
        let degree: u32 = deg
            .parse()
            .map_err(|_| Error::field(format!("bad degree in field spec {s:?}")))?;
        match modulus {
            None => Gf2nField::with_degree(degree),
            Some(m) => {
                let hex = m.strip_prefix("0x").or_else(|| m.strip_prefix("0X")).unwrap_or(m);
                let bits = u32::from_str_radix(hex, 16)
                    .map_err(|_| Error::field(format!("bad modulus in field spec {s:?}")))?;
                Gf2nField::new(degree, bits)
            }
        }
    }
}

/// Degree of a nonzero GF(2) polynomial given as bits.
fn poly_degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let deg = poly_degree(p);
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for divisor in (1u32 << d)..(1u32 << (d + 1)) {
            if poly_rem(p, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// The numerically least irreducible polynomial of the given degree with a
/// nonzero constant term (`x+1`, `x^2+x+1`, `x^3+x+1`, `x^4+x+1`, ...).
pub fn default_modulus(degree: u32) -> Result<u32> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::field(format!(
            "degree {degree} outside 1..={MAX_DEGREE}"
        )));
    }
    ((1u32 << degree) | 1..(1u32 << (degree + 1)))
        .step_by(2)
        .find(|&p| is_irreducible(p))
        .ok_or_else(|| Error::field("no irreducible polynomial found"))
}

fn mul_slow(degree: u32, modulus: u32, a: u32, b: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> degree & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

fn pow_slow(degree: u32, modulus: u32, base: u32, mut e: u64) -> u32 {
    let mut acc = 1u32;
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_slow(degree, modulus, acc, b);
        }
        b = mul_slow(degree, modulus, b, b);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Gf2nField {
    /// Builds `GF(2)[x]/(modulus)`, verifying that `modulus` has degree
    /// `degree` and is irreducible.
    pub fn new(degree: u32, modulus: u32) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::field(format!(
                "degree {degree} outside 1..={MAX_DEGREE}"
            )));
        }
        if modulus == 0 || poly_degree(modulus) != degree {
            return Err(Error::field(format!(
                "modulus {modulus:#x} does not have degree {degree}"
            )));
        }
        if !is_irreducible(modulus) {
            return Err(Error::field(format!("modulus {modulus:#x} is reducible")));
        }
        let q = 1u32 << degree;
        let group_order = u64::from(q - 1);
        let factors = prime_factors(group_order);
        let generator = (1..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&p| pow_slow(degree, modulus, g, group_order / p) != 1)
            })
            .ok_or_else(|| Error::field("no primitive element found"))?;

        let n = (q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * n);
        let mut log = alloc::vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp.push(x);
            log[x as usize] = i as u32;
            x = mul_slow(degree, modulus, x, generator);
        }
        for i in 0..n {
            exp.push(exp[i]);
        }
        Ok(Gf2nField {
            degree,
            modulus,
            tables: Arc::new(Tables { exp, log }),
        })
    }

    pub fn with_degree(degree: u32) -> Result<Self> {
        Gf2nField::new(degree, default_modulus(degree)?)
    }

    pub fn prime() -> Self {
        Gf2nField::with_degree(1).expect("GF(2) always exists")
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// `q = 2^n`.
    pub fn order(&self) -> u32 {
        1 << self.degree
    }

    pub fn spec_string(&self) -> String {
        format!("{self}")
    }

    pub fn element(&self, bits: u32) -> Result<FieldElement> {
        if bits < self.order() {
            Ok(FieldElement(bits))
        } else {
            Err(Error::element(format!(
                "{bits:#x} is not an element of {self}"
            )))
        }
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.0 < self.order()
    }

    /// All elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.order()).map(FieldElement)
    }

    /// The primitive element the tables were built from.
    pub fn primitive_element(&self) -> FieldElement {
        FieldElement(self.tables.exp[1 % self.tables.exp.len()])
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let t = &self.tables;
        FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::precondition("inverse of zero"));
        }
        let t = &self.tables;
        let n = self.order() - 1;
        Ok(FieldElement(t.exp[((n - t.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let t = &self.tables;
        let n = u64::from(self.order() - 1);
        let l = (u64::from(t.log[a.0 as usize]) * (e % n)) % n;
        FieldElement(t.exp[l as usize])
    }

    /// The unique square root; squaring is a bijection in characteristic 2.
    pub fn sqrt(&self, a: FieldElement) -> FieldElement {
        let mut y = a;
        for _ in 1..self.degree {
            y = self.square(y);
        }
        y
    }

    /// A uniformly random element.
    pub fn random<R: rand_core::RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.next_u32() & (self.order() - 1))
    }

    /// `x + x^2 + x^4 + ... + x^(2^(n-1))`, which lies in `GF(2)`.
    pub fn absolute_trace(&self, a: FieldElement) -> u8 {
        let mut acc = a;
        let mut y = a;
        for _ in 1..self.degree {
            y = self.square(y);
            acc += y;
        }
        debug_assert!(acc.0 <= 1, "absolute trace left GF(2)");
        acc.0 as u8
    }

    /// Class of `a` in `k / ℘(k)` with `℘(x) = x^2 + x`: 0 iff `a = x^2 + x`
    /// for some `x` in `k`.
    pub fn artin_schreier_class(&self, a: FieldElement) -> u8 {
        self.absolute_trace(a)
    }

    /// The canonical representative `ρ` of the nonzero class of `k / ℘(k)`:
    /// the least element of absolute trace 1.
    pub fn nonsplit_representative(&self) -> FieldElement {
        self.elements()
            .find(|&x| self.absolute_trace(x) == 1)
            .expect("the trace map is onto GF(2)")
    }

    /// Canonical representative of the class of `a`: `0` or `ρ`.
    pub fn class_representative(&self, a: FieldElement) -> FieldElement {
        if self.artin_schreier_class(a) == 0 {
            FieldElement::ZERO
        } else {
            self.nonsplit_representative()
        }
    }

    /// Least `x` with `x^2 + x = z`, by exhaustive scan. The other root is
    /// `x + 1`.
    pub fn solve_wp(&self, z: FieldElement) -> Option<FieldElement> {
        self.elements().find(|&x| self.square(x) + x == z)
    }

    /// Arf invariant of the binary quadratic form `a x^2 + b xy + c y^2`.
    pub fn arf_invariant(&self, a: FieldElement, b: FieldElement, c: FieldElement) -> Result<u8> {
        if b.is_zero() {
            return Err(Error::precondition("Arf invariant needs b != 0"));
        }
        let ac = self.mul(a, c);
        let b2 = self.square(b);
        Ok(self.artin_schreier_class(self.div(ac, b2)?))
    }
}

/// A field homomorphism `k -> K` for `deg k | deg K`.
#[derive(Clone, Debug)]
pub struct SubfieldEmbedding {
    small: Gf2nField,
    large: Gf2nField,
    root: FieldElement,
    images: Vec<FieldElement>,
    // (image bits, preimage bits), sorted by image.
    preimages: Vec<(u32, u32)>,
}

impl SubfieldEmbedding {
    /// Sends the class of `x` in `small` to the least root of `small`'s modulus
    /// in `large`.
    pub fn new(small: &Gf2nField, large: &Gf2nField) -> Result<Self> {
        if !large.degree().is_multiple_of(small.degree()) {
            return Err(Error::field(format!(
                "{small} is not a subfield of {large}: degrees do not divide"
            )));
        }
        let modulus = small.modulus();
        let eval = |y: FieldElement| {
            // Horner from the top coefficient.
            let mut acc = FieldElement::ZERO;
            for i in (0..=small.degree()).rev() {
                acc = large.mul(acc, y);
                if modulus >> i & 1 == 1 {
                    acc += FieldElement::ONE;
                }
            }
            acc
        };
        let root = large
            .elements()
            .find(|&y| eval(y).is_zero())
            .ok_or_else(|| Error::violation("modulus of subfield has no root in the extension"))?;

        let mut powers = Vec::with_capacity(small.degree() as usize);
        let mut p = FieldElement::ONE;
        for _ in 0..small.degree() {
            powers.push(p);
            p = large.mul(p, root);
        }
        let images: Vec<FieldElement> = small
            .elements()
            .map(|x| {
                powers
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| x.bits() >> i & 1 == 1)
                    .map(|(_, &p)| p)
                    .sum()
            })
            .collect();
        let mut preimages: Vec<(u32, u32)> = images
            .iter()
            .enumerate()
            .map(|(i, y)| (y.bits(), i as u32))
            .collect();
        preimages.sort_unstable();
        Ok(SubfieldEmbedding {
            small: small.clone(),
            large: large.clone(),
            root,
            images,
            preimages,
        })
    }

    pub fn small(&self) -> &Gf2nField {
        &self.small
    }

    pub fn large(&self) -> &Gf2nField {
        &self.large
    }

    /// Image of the generator `x` of the small field.
    pub fn root(&self) -> FieldElement {
        self.root
    }

    /// `[K : k]`.
    pub fn relative_degree(&self) -> u32 {
        self.large.degree() / self.small.degree()
    }

    pub fn embed(&self, x: FieldElement) -> FieldElement {
        self.images[x.bits() as usize]
    }

    pub fn pullback(&self, y: FieldElement) -> Option<FieldElement> {
        self.preimages
            .binary_search_by_key(&y.bits(), |&(img, _)| img)
            .ok()
            .map(|i| FieldElement(self.preimages[i].1))
    }

    /// The `k`-linear Frobenius `y -> y^q` of `K`, `q = |k|`.
    pub fn frobenius(&self, y: FieldElement) -> FieldElement {
        let mut y = y;
        for _ in 0..self.small.degree() {
            y = self.large.square(y);
        }
        y
    }

    /// `Tr_{K/k}(y) = sum_{i < m} y^(q^i)`, pulled back to `k`.
    pub fn relative_trace(&self, y: FieldElement) -> Result<FieldElement> {
        let mut acc = FieldElement::ZERO;
        let mut z = y;
        for _ in 0..self.relative_degree() {
            acc += z;
            z = self.frobenius(z);
        }
        self.pullback(acc)
            .ok_or_else(|| Error::violation("relative trace left the subfield"))
    }
}
