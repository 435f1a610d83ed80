//! The Grassmann superalgebra `G_n`: signed monomial arithmetic on bitmask
//! index sets, odd superderivations, and the Poisson superbracket.
//!
//! A basis word `e_I` is a subset of `{1..n}` stored as a bitmask with bit
//! `i-1` standing for the generator `e_i`. Canonical order is strictly
//! ascending; reordering signs are computed by popcount-based inversion
//! counting rather than explicit permutation shuffling.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{FieldContext, Scalar};
use crate::superalg::StructureTable;
use crate::Error;

/// A Grassmann basis word as a subset of `{1..n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub u32);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Parity of the word: degree mod 2.
    pub fn parity(self) -> u8 {
        (self.0.count_ones() & 1) as u8
    }

    pub fn contains(self, generator: usize) -> bool {
        self.0 >> (generator - 1) & 1 == 1
    }

    /// 1-based generator indices in ascending order.
    pub fn indices(self) -> Vec<usize> {
        (0..32)
            .filter(|i| self.0 >> i & 1 == 1)
            .map(|i| i + 1)
            .collect()
    }

    /// Textual form: `e[1,3,4]`, or `1` for the empty word.
    pub fn label(self) -> String {
        if self.0 == 0 {
            "1".to_string()
        } else {
            let parts: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
            format!("e[{}]", parts.join(","))
        }
    }
}

/// Sign `(-1)^{#{(i,j) : i in a, j in b, i > j}}` of merging the ascending
/// word `a` in front of the ascending word `b`. Assumes disjoint masks.
pub fn merge_sign(a: u32, b: u32) -> i64 {
    let mut swaps = 0u32;
    let mut x = a;
    while x != 0 {
        let i = x.trailing_zeros();
        swaps += (b & ((1u32 << i) - 1)).count_ones();
        x &= x - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of sorting an explicit index sequence into ascending order, or `None`
/// if an index repeats (the word is zero).
pub fn sort_sign(indices: &[usize]) -> Option<(i64, u32)> {
    let mut mask = 0u32;
    let mut sign = 1i64;
    for &i in indices {
        let bit = 1u32 << (i - 1);
        if mask & bit != 0 {
            return None;
        }
        // appending i after the already-placed indices: it must jump over
        // every placed index greater than i
        let above = mask & !((bit << 1).wrapping_sub(1));
        if above.count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= bit;
    }
    Some((sign, mask))
}

/// A sparse element of `G_n`: zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannElement {
    n: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl GrassmannElement {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Scalar)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, m: Monomial) -> Option<&Scalar> {
        self.terms.get(&m)
    }

    /// Parity if all terms agree, `None` otherwise (or for zero).
    pub fn homogeneous_parity(&self) -> Option<u8> {
        let mut it = self.terms.keys();
        let first = it.next()?.parity();
        it.all(|m| m.parity() == first).then_some(first)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let sum = &old + &c;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &GrassmannElement) -> Result<GrassmannElement, Error> {
        if self.n != other.n {
            return Err(Error::GeneratorMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> GrassmannElement {
        GrassmannElement {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Scalar) -> GrassmannElement {
        let mut out = GrassmannElement {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            out.add_term(*m, c * k);
        }
        out
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.0 == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", m.label())?;
            } else {
                write!(f, "{c}*{}", m.label())?;
            }
        }
        Ok(())
    }
}

/// The Grassmann superalgebra on `n >= 2` odd generators over a fixed field.
#[derive(Clone, Copy, Debug)]
pub struct Grassmann {
    pub n: usize,
    pub field: FieldContext,
}

impl Grassmann {
    pub fn new(n: usize, field: FieldContext) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::Precondition(format!(
                "Grassmann algebra needs n >= 2 generators, got {n}"
            )));
        }
        if n > 16 {
            return Err(Error::Precondition(format!(
                "generator count {n} too large for exhaustive work"
            )));
        }
        Ok(Grassmann { n, field })
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn zero(&self) -> GrassmannElement {
        GrassmannElement {
            n: self.n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> GrassmannElement {
        self.basis(Monomial::ONE)
    }

    pub fn basis(&self, m: Monomial) -> GrassmannElement {
        assert!(m.0 < (1u32 << self.n), "monomial outside G_{}", self.n);
        let mut terms = BTreeMap::new();
        terms.insert(m, self.field.one());
        GrassmannElement { n: self.n, terms }
    }

    /// `sign * e_I` from an arbitrarily ordered index sequence, or zero when
    /// an index repeats.
    pub fn word(&self, indices: &[usize]) -> Result<GrassmannElement, Error> {
        for &i in indices {
            if i < 1 || i > self.n {
                return Err(Error::GeneratorOutOfRange(i, self.n));
            }
        }
        match sort_sign(indices) {
            None => Ok(self.zero()),
            Some((sign, mask)) => Ok(self.basis(Monomial(mask)).scale(&self.field.from_i64(sign))),
        }
    }

    fn check_n(&self, f: &GrassmannElement) -> Result<(), Error> {
        if f.n != self.n {
            return Err(Error::GeneratorMismatch(f.n, self.n));
        }
        Ok(())
    }

    /// Exterior product, extended bilinearly from
    /// `e_I e_J = sign * e_{I u J}` (zero on overlapping index sets).
    pub fn wedge(
        &self,
        f: &GrassmannElement,
        g: &GrassmannElement,
    ) -> Result<GrassmannElement, Error> {
        self.check_n(f)?;
        self.check_n(g)?;
        let mut out = self.zero();
        for (mi, ci) in &f.terms {
            for (mj, cj) in &g.terms {
                if mi.0 & mj.0 != 0 {
                    continue;
                }
                let sign = merge_sign(mi.0, mj.0);
                out.add_term(Monomial(mi.0 | mj.0), (ci * cj).negate_if(sign < 0));
            }
        }
        Ok(out)
    }

    /// The odd superderivation `d/d e_k`: on `e_{i_1..i_m}` with `i_p = k` it
    /// gives `(-1)^{p-1} e_{I \ {k}}`, and zero when `k` is absent.
    pub fn partial(&self, k: usize, f: &GrassmannElement) -> Result<GrassmannElement, Error> {
        if k < 1 || k > self.n {
            return Err(Error::GeneratorOutOfRange(k, self.n));
        }
        self.check_n(f)?;
        let bit = 1u32 << (k - 1);
        let mut out = self.zero();
        for (m, c) in &f.terms {
            if m.0 & bit == 0 {
                continue;
            }
            let below = (m.0 & (bit - 1)).count_ones();
            out.add_term(Monomial(m.0 & !bit), c.clone().negate_if(below % 2 == 1));
        }
        Ok(out)
    }

    /// The Poisson superbracket
    /// `{f, g} = (-1)^{|f|} sum_k (df/de_k)(dg/de_k)`,
    /// applied per homogeneous term and extended bilinearly.
    pub fn poisson_bracket(
        &self,
        f: &GrassmannElement,
        g: &GrassmannElement,
    ) -> Result<GrassmannElement, Error> {
        self.check_n(f)?;
        self.check_n(g)?;
        let mut out = self.zero();
        for (mi, ci) in &f.terms {
            for (mj, cj) in &g.terms {
                let common = mi.0 & mj.0;
                if common == 0 {
                    continue;
                }
                let mut ks = common;
                while ks != 0 {
                    let kbit = ks & ks.wrapping_neg();
                    ks &= ks - 1;
                    let ri = mi.0 & !kbit;
                    let rj = mj.0 & !kbit;
                    if ri & rj != 0 {
                        continue;
                    }
                    let mut sign = 1i64;
                    if mi.degree() % 2 == 1 {
                        sign = -sign; // (-1)^{|f|}
                    }
                    if (mi.0 & (kbit - 1)).count_ones() % 2 == 1 {
                        sign = -sign; // position sign inside e_I
                    }
                    if (mj.0 & (kbit - 1)).count_ones() % 2 == 1 {
                        sign = -sign; // position sign inside e_J
                    }
                    sign *= merge_sign(ri, rj);
                    out.add_term(Monomial(ri | rj), (ci * cj).negate_if(sign < 0));
                }
            }
        }
        Ok(out)
    }

    /// Structure-constant table of `(G_n, wedge)` as a unital supercommutative
    /// superalgebra; basis index = monomial bitmask, the unit is index 0.
    pub fn dot_table(&self) -> StructureTable {
        let dim = self.dim();
        let parity: Vec<u8> = (0..dim).map(|m| Monomial(m as u32).parity()).collect();
        let labels: Vec<String> = (0..dim).map(|m| Monomial(m as u32).label()).collect();
        let mut table = StructureTable::empty(dim, parity, Some(0), labels, self.field);
        for i in 0..dim as u32 {
            for j in 0..dim as u32 {
                if i & j != 0 {
                    continue;
                }
                let sign = merge_sign(i, j);
                table.set_product(
                    i as usize,
                    j as usize,
                    vec![((i | j) as usize, self.field.from_i64(sign))],
                );
            }
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> Grassmann {
        Grassmann::new(n, FieldContext::rational()).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let gr = g(3);
        let e1 = gr.word(&[1]).unwrap();
        let e2 = gr.word(&[2]).unwrap();
        let e12 = gr.word(&[1, 2]).unwrap();
        assert_eq!(gr.wedge(&e1, &e2).unwrap(), e12);
        assert!(gr.wedge(&e1, &e1).unwrap().is_zero());
        assert_eq!(gr.wedge(&e2, &e1).unwrap(), e12.neg());
    }

    #[test]
    fn mismatched_generator_counts_rejected() {
        let g2 = g(2);
        let g3 = g(3);
        let f = g3.word(&[1]).unwrap();
        assert!(matches!(
            g2.wedge(&f, &f),
            Err(Error::GeneratorMismatch(_, _))
        ));
    }

    #[test]
    fn partial_examples() {
        let gr = g(3);
        let e1 = gr.word(&[1]).unwrap();
        let e12 = gr.word(&[1, 2]).unwrap();
        // d/de_2 (e_1 e_2) = -e_1
        assert_eq!(gr.partial(2, &e12).unwrap(), e1.neg());
        // absent generator
        assert!(gr.partial(3, &e12).unwrap().is_zero());
        // d e_1 / d e_1 = 1
        assert_eq!(gr.partial(1, &e1).unwrap(), gr.one());
        assert!(matches!(
            gr.partial(4, &e1),
            Err(Error::GeneratorOutOfRange(4, 3))
        ));
    }

    /// Independent oracle: expand the superderivation law
    /// `d(uv) = (du)v + (-1)^{|u|} u (dv)` by splitting off the first
    /// generator, instead of the closed-form position sign.
    fn partial_oracle(gr: &Grassmann, k: usize, m: Monomial) -> GrassmannElement {
        if m.0 == 0 {
            return gr.zero();
        }
        let first = m.0.trailing_zeros() as usize + 1;
        let rest = Monomial(m.0 & (m.0 - 1));
        if first == k {
            // d e_k / d e_k = 1, and e_k has no k-dependence left
            return gr.basis(rest);
        }
        // (-1)^{|e_first|} e_first * d(rest)
        let inner = partial_oracle(gr, k, rest);
        gr.wedge(&gr.basis(Monomial(1 << (first - 1))), &inner)
            .unwrap()
            .neg()
    }

    #[test]
    fn partial_matches_recursive_oracle() {
        for n in 2..=4 {
            let gr = g(n);
            for mask in 0..(1u32 << n) {
                for k in 1..=n {
                    let direct = gr.partial(k, &gr.basis(Monomial(mask))).unwrap();
                    let oracle = partial_oracle(&gr, k, Monomial(mask));
                    assert_eq!(direct, oracle, "n={n} k={k} mask={mask:b}");
                }
            }
        }
    }

    #[test]
    fn bracket_examples() {
        let gr = g(3);
        let e1 = gr.word(&[1]).unwrap();
        // {e_1, e_1} = -1
        assert_eq!(gr.poisson_bracket(&e1, &e1).unwrap(), gr.one().neg());
        // {e_12, e_23} = -e_13
        let e12 = gr.word(&[1, 2]).unwrap();
        let e23 = gr.word(&[2, 3]).unwrap();
        let e13 = gr.word(&[1, 3]).unwrap();
        assert_eq!(gr.poisson_bracket(&e12, &e23).unwrap(), e13.neg());
        // {1, e_I} = 0
        for mask in 0..8u32 {
            assert!(gr
                .poisson_bracket(&gr.one(), &gr.basis(Monomial(mask)))
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn wedge_supercommutative_exhaustive() {
        for n in 2..=4 {
            let gr = g(n);
            for a in 0..(1u32 << n) {
                for b in 0..(1u32 << n) {
                    let (fa, fb) = (gr.basis(Monomial(a)), gr.basis(Monomial(b)));
                    let ab = gr.wedge(&fa, &fb).unwrap();
                    let ba = gr.wedge(&fb, &fa).unwrap();
                    let flip = Monomial(a).parity() & Monomial(b).parity() == 1;
                    assert_eq!(ab, if flip { ba.neg() } else { ba });
                }
            }
        }
    }

    #[test]
    fn bracket_super_skew_exhaustive() {
        for n in 2..=4 {
            let gr = g(n);
            for a in 0..(1u32 << n) {
                for b in 0..(1u32 << n) {
                    let (fa, fb) = (gr.basis(Monomial(a)), gr.basis(Monomial(b)));
                    let ab = gr.poisson_bracket(&fa, &fb).unwrap();
                    let ba = gr.poisson_bracket(&fb, &fa).unwrap();
                    // {f,g} = -(-1)^{|f||g|} {g,f}
                    let flip = Monomial(a).parity() & Monomial(b).parity() == 1;
                    assert_eq!(ab, if flip { ba } else { ba.neg() });
                }
            }
        }
    }

    #[test]
    fn bracket_lowers_degree_by_two() {
        // {G_i, G_j} lands in G_{i+j-2} under the monomial-degree grading
        for n in 2..=4 {
            let gr = g(n);
            for a in 0..(1u32 << n) {
                for b in 0..(1u32 << n) {
                    let br = gr
                        .poisson_bracket(&gr.basis(Monomial(a)), &gr.basis(Monomial(b)))
                        .unwrap();
                    let expect = Monomial(a).degree() + Monomial(b).degree();
                    for (m, _) in br.terms() {
                        assert_eq!(m.degree() + 2, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn word_normalization() {
        let gr = g(4);
        // e_3 e_1 = -e_{13}
        assert_eq!(gr.word(&[3, 1]).unwrap(), gr.word(&[1, 3]).unwrap().neg());
        // repeated index collapses to zero
        assert!(gr.word(&[2, 2]).unwrap().is_zero());
        // three-element reversal: (3,2,1) -> (1,2,3) is odd
        assert_eq!(
            gr.word(&[3, 2, 1]).unwrap(),
            gr.word(&[1, 2, 3]).unwrap().neg()
        );
    }
}
