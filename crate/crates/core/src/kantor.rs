//! Dot-bracket superalgebras, the Kantor doubling construction, the doubling
//! conditions that characterize Jordan brackets, and the concrete double of
//! the Grassmann Poisson superalgebra.
//!
//! The double `J(A) = A + bar(A)` multiplies by the four rules
//! `f*g = fg`, `f*bar(g) = bar(fg)`, `bar(f)*g = (-1)^{|g|} bar(fg)`,
//! `bar(f)*bar(g) = (-1)^{|g|} {f,g}`, graded by `J_0 = A_0 + bar(A_1)`,
//! `J_1 = A_1 + bar(A_0)`.

use std::time::Instant;

use crate::grassmann::{merge_sign, Grassmann, Monomial};
use crate::report::{CheckReport, Violation};
use crate::scalar::{FieldContext, Scalar};
use crate::superalg::{SparseVec, StructureTable};
use crate::Error;

/// A supercommutative associative unital algebra together with a
/// super-skew-symmetric bracket. `D(f) = {f, 1}` is always computed from the
/// bracket, never supplied.
#[derive(Clone, Debug, PartialEq)]
pub struct DotBracketAlgebra {
    dot: StructureTable,
    bracket: Vec<SparseVec>,
}

impl DotBracketAlgebra {
    /// Validates the dot table (supercommutative, associative, unital) and
    /// the structural bracket invariants (parity compatibility and
    /// super-skew-symmetry on basis pairs).
    pub fn new(
        dot: StructureTable,
        bracket_entries: Vec<(usize, usize, SparseVec)>,
    ) -> Result<Self, Error> {
        dot.validate()?;
        if dot.unit().is_none() {
            return Err(Error::NonUnital);
        }
        if !dot.check_supercommutative(1).passed() {
            return Err(Error::Precondition(
                "dot product is not supercommutative".into(),
            ));
        }
        let dim = dot.dim();
        // associativity on basis triples
        for i in 0..dim {
            for j in 0..dim {
                let ij = dot.basis_product(i, j).clone();
                for k in 0..dim {
                    let jk = dot.basis_product(j, k).clone();
                    let lhs = dot.mul_sparse(&ij, &[(k, dot.field().one())]);
                    let rhs = dot.mul_sparse(&[(i, dot.field().one())], &jk);
                    if lhs != rhs {
                        return Err(Error::Precondition(format!(
                            "dot product not associative at ({}, {}, {})",
                            dot.label(i),
                            dot.label(j),
                            dot.label(k)
                        )));
                    }
                }
            }
        }
        let mut alg = DotBracketAlgebra {
            bracket: vec![Vec::new(); dim * dim],
            dot,
        };
        for (i, j, entries) in bracket_entries {
            alg.set_bracket_entry(i, j, entries);
        }
        alg.validate_bracket()?;
        Ok(alg)
    }

    fn validate_bracket(&self) -> Result<(), Error> {
        let dim = self.dot.dim();
        for i in 0..dim {
            for j in 0..dim {
                let want = (self.dot.parity(i) + self.dot.parity(j)) % 2;
                for (k, c) in self.bracket(i, j) {
                    if !c.is_zero() && self.dot.parity(*k) != want {
                        return Err(Error::ParityViolation(format!(
                            "bracket {{{}, {}}} has a wrong-parity component on {}",
                            self.dot.label(i),
                            self.dot.label(j),
                            self.dot.label(*k)
                        )));
                    }
                }
                // {f,g} = -(-1)^{|f||g|}{g,f}
                let flip = self.dot.parity(i) & self.dot.parity(j) == 1;
                let mut mirrored: SparseVec = self
                    .bracket(j, i)
                    .iter()
                    .map(|(k, c)| (*k, c.clone().negate_if(!flip)))
                    .collect();
                mirrored.sort_by_key(|(k, _)| *k);
                if &mirrored != self.bracket(i, j) {
                    return Err(Error::Inconsistent(format!(
                        "bracket is not super-skew-symmetric at ({}, {})",
                        self.dot.label(i),
                        self.dot.label(j)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dot(&self) -> &StructureTable {
        &self.dot
    }

    pub fn dim(&self) -> usize {
        self.dot.dim()
    }

    pub fn field(&self) -> &FieldContext {
        self.dot.field()
    }

    pub fn bracket(&self, i: usize, j: usize) -> &SparseVec {
        &self.bracket[i * self.dot.dim() + j]
    }

    /// Raw entry write, used by builders and by fault-injection tests; no
    /// revalidation happens here.
    pub fn set_bracket_entry(&mut self, i: usize, j: usize, mut entries: SparseVec) {
        entries.retain(|(_, c)| !c.is_zero());
        entries.sort_by_key(|(k, _)| *k);
        self.bracket[i * self.dot.dim() + j] = entries;
    }

    /// Bilinear extension of the bracket to sparse elements.
    pub fn bracket_sparse(&self, a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> SparseVec {
        let mut out: Vec<SparseVec> = Vec::new();
        for (i, ci) in a {
            for (j, cj) in b {
                let entry = self.bracket(*i, *j);
                if entry.is_empty() {
                    continue;
                }
                let c = ci * cj;
                out.push(entry.iter().map(|(k, v)| (*k, v * &c)).collect());
            }
        }
        self.sum_sparse(out)
    }

    fn sum_sparse(&self, parts: Vec<SparseVec>) -> SparseVec {
        let mut acc: std::collections::BTreeMap<usize, Scalar> = std::collections::BTreeMap::new();
        for part in parts {
            for (k, c) in part {
                match acc.remove(&k) {
                    None => {
                        if !c.is_zero() {
                            acc.insert(k, c);
                        }
                    }
                    Some(old) => {
                        let sum = &old + &c;
                        if !sum.is_zero() {
                            acc.insert(k, sum);
                        }
                    }
                }
            }
        }
        acc.into_iter().collect()
    }

    /// `D(f) = {f, 1}` for a basis element.
    pub fn d_of(&self, i: usize) -> &SparseVec {
        self.bracket(i, self.dot.unit().expect("validated unital"))
    }

    /// Exhaustively verifies the doubling conditions: super-skew-symmetry,
    /// the generalized Leibniz rule, the generalized Jacobi rule, and (in
    /// characteristic 3, where it is an independent condition) the quadratic
    /// rule on odd basis elements.
    pub fn check_kantor_conditions(&self, limit: usize) -> CheckReport {
        let start = Instant::now();
        let dim = self.dot.dim();
        let one = self.field().one();
        let mut violations = Vec::new();

        // structural: super-skew-symmetry (a corrupted entry may break it)
        'skew: for i in 0..dim {
            for j in 0..dim {
                let flip = self.dot.parity(i) & self.dot.parity(j) == 1;
                let mirrored: SparseVec = self
                    .bracket(j, i)
                    .iter()
                    .map(|(k, c)| (*k, c.clone().negate_if(!flip)))
                    .collect();
                let diff = self.sum_sparse(vec![
                    self.bracket(i, j).clone(),
                    mirrored.into_iter().map(|(k, c)| (k, -c)).collect(),
                ]);
                if !diff.is_empty() {
                    violations.push(Violation {
                        inputs: vec![
                            "skew".into(),
                            self.dot.label(i).to_string(),
                            self.dot.label(j).to_string(),
                        ],
                        residual: self.dot.format_sparse(&diff),
                    });
                    if violations.len() >= limit {
                        break 'skew;
                    }
                }
            }
        }

        // generalized Leibniz:
        // {f, gh} - {f,g}h - (-1)^{|f||g|} g{f,h} + D(f) g h = 0
        'leibniz: for f in 0..dim {
            let pf = self.dot.parity(f);
            let df = self.d_of(f).clone();
            for g in 0..dim {
                let pg = self.dot.parity(g);
                let fg = self.bracket(f, g).clone();
                for h in 0..dim {
                    let gh = self.dot.basis_product(g, h).clone();
                    let fh = self.bracket(f, h).clone();
                    let t1 = self.bracket_sparse(&[(f, one.clone())], &gh);
                    let t2 = self.dot.mul_sparse(&fg, &[(h, one.clone())]);
                    let t3 = self.dot.mul_sparse(&[(g, one.clone())], &fh);
                    let t3 = scale_sign(t3, pf & pg == 1);
                    let dfg = self.dot.mul_sparse(&df, &[(g, one.clone())]);
                    let t4 = self.dot.mul_sparse(&dfg, &[(h, one.clone())]);
                    let residual = self.sum_sparse(vec![t1, negate(t2), negate(t3), t4]);
                    if !residual.is_empty() {
                        violations.push(Violation {
                            inputs: vec![
                                "leibniz".into(),
                                self.dot.label(f).to_string(),
                                self.dot.label(g).to_string(),
                                self.dot.label(h).to_string(),
                            ],
                            residual: self.dot.format_sparse(&residual),
                        });
                        if violations.len() >= limit {
                            break 'leibniz;
                        }
                    }
                }
            }
        }

        // generalized Jacobi:
        // {f,{g,h}} - {{f,g},h} - (-1)^{|f||g|}{g,{f,h}}
        //   - D(f){g,h} - (-1)^{|f|(|g|+|h|)} D(g){h,f}
        //   - (-1)^{|h|(|f|+|g|)} D(h){f,g} = 0
        //
        // The D(g) exponent follows the super-cyclic pattern (f moved past g
        // and h), matching the ungraded cyclic identity through the sign
        // bookkeeping of the grading; with it, the double of a bracket
        // passes the Jordan checker exactly when these conditions hold,
        // which the mutation tests exercise in both directions.
        'jacobi: for f in 0..dim {
            let pf = self.dot.parity(f);
            let df = self.d_of(f).clone();
            for g in 0..dim {
                let pg = self.dot.parity(g);
                let dg = self.d_of(g).clone();
                let fg = self.bracket(f, g).clone();
                for h in 0..dim {
                    let ph = self.dot.parity(h);
                    let dh = self.d_of(h).clone();
                    let gh = self.bracket(g, h).clone();
                    let fh = self.bracket(f, h).clone();
                    let hf = self.bracket(h, f).clone();
                    let t1 = self.bracket_sparse(&[(f, one.clone())], &gh);
                    let t2 = self.bracket_sparse(&fg, &[(h, one.clone())]);
                    let t3 =
                        scale_sign(self.bracket_sparse(&[(g, one.clone())], &fh), pf & pg == 1);
                    let t4 = self.dot.mul_sparse(&df, &gh);
                    let t5 = scale_sign(self.dot.mul_sparse(&dg, &hf), pf * (pg + ph) % 2 == 1);
                    let t6 = scale_sign(self.dot.mul_sparse(&dh, &fg), ph * (pf + pg) % 2 == 1);
                    let residual = self.sum_sparse(vec![
                        t1,
                        negate(t2),
                        negate(t3),
                        negate(t4),
                        negate(t5),
                        negate(t6),
                    ]);
                    if !residual.is_empty() {
                        violations.push(Violation {
                            inputs: vec![
                                "jacobi".into(),
                                self.dot.label(f).to_string(),
                                self.dot.label(g).to_string(),
                                self.dot.label(h).to_string(),
                            ],
                            residual: self.dot.format_sparse(&residual),
                        });
                        if violations.len() >= limit {
                            break 'jacobi;
                        }
                    }
                }
            }
        }

        // quadratic condition {{x,x},x} = -{x,x} D(x) on odd x; its partial
        // linearizations follow from the Jacobi rule, so basis elements
        // suffice. Independent only in characteristic 3.
        if self.field().characteristic() == 3 {
            for x in 0..dim {
                if self.dot.parity(x) != 1 {
                    continue;
                }
                let xx = self.bracket(x, x).clone();
                let t1 = self.bracket_sparse(&xx, &[(x, one.clone())]);
                let dx = self.d_of(x).clone();
                let t2 = self.dot.mul_sparse(&xx, &dx);
                let residual = self.sum_sparse(vec![t1, t2]);
                if !residual.is_empty() && violations.len() < limit {
                    violations.push(Violation {
                        inputs: vec!["quadratic".into(), self.dot.label(x).to_string()],
                        residual: self.dot.format_sparse(&residual),
                    });
                }
            }
        }

        CheckReport::new(
            format!("kantor doubling conditions dim={dim}"),
            violations,
            limit,
            start.elapsed().as_millis(),
        )
    }

    /// The Kantor double `J(A)`: a table of dimension `2 dim(A)` with bar
    /// elements stored at indices `[dim, 2 dim)` and labels prefixed `b`.
    pub fn kantor_double(&self) -> Result<StructureTable, Error> {
        let Some(unit) = self.dot.unit() else {
            return Err(Error::NonUnital);
        };
        let d = self.dot.dim();
        let mut parity = Vec::with_capacity(2 * d);
        let mut labels = Vec::with_capacity(2 * d);
        for i in 0..d {
            parity.push(self.dot.parity(i));
            labels.push(self.dot.label(i).to_string());
        }
        for i in 0..d {
            parity.push((self.dot.parity(i) + 1) % 2);
            labels.push(format!("b{}", self.dot.label(i)));
        }
        let mut table = StructureTable::empty(2 * d, parity, Some(unit), labels, *self.field());
        for i in 0..d {
            for j in 0..d {
                let prod = self.dot.basis_product(i, j);
                // f * g
                table.set_product(i, j, prod.clone());
                // f * bar(g) = bar(fg)
                table.set_product(i, d + j, shift(prod.clone(), d));
                // bar(f) * g = (-1)^{|g|} bar(fg)
                let sign = self.dot.parity(j) == 1;
                table.set_product(d + i, j, shift(scale_sign(prod.clone(), sign), d));
                // bar(f) * bar(g) = (-1)^{|g|} {f, g}
                table.set_product(d + i, d + j, scale_sign(self.bracket(i, j).clone(), sign));
            }
        }
        table.validate()?;
        Ok(table)
    }
}

fn negate(v: SparseVec) -> SparseVec {
    v.into_iter().map(|(k, c)| (k, -c)).collect()
}

fn scale_sign(v: SparseVec, negate: bool) -> SparseVec {
    if negate {
        v.into_iter().map(|(k, c)| (k, -c)).collect()
    } else {
        v
    }
}

fn shift(v: SparseVec, offset: usize) -> SparseVec {
    v.into_iter().map(|(k, c)| (k + offset, c)).collect()
}

/// `G_n` with its Poisson bracket as a dot-bracket superalgebra. The bracket
/// comes from the superderivation definition; the closed-form table lives in
/// [`kan_closed_form`] as an independent cross-check.
pub fn grassmann_poisson(gr: &Grassmann) -> Result<DotBracketAlgebra, Error> {
    let dim = gr.dim();
    let mut entries = Vec::new();
    for i in 0..dim as u32 {
        for j in 0..dim as u32 {
            let br = gr.poisson_bracket(&gr.basis(Monomial(i)), &gr.basis(Monomial(j)))?;
            let sv: SparseVec = br.terms().map(|(m, c)| (m.0 as usize, c.clone())).collect();
            if !sv.is_empty() {
                entries.push((i as usize, j as usize, sv));
            }
        }
    }
    DotBracketAlgebra::new(gr.dot_table(), entries)
}

/// Index bookkeeping for the double of `G_n`: plain monomials occupy
/// `[0, 2^n)` by bitmask, barred ones `[2^n, 2^{n+1})`.
#[derive(Clone, Copy, Debug)]
pub struct KanBasis {
    pub n: usize,
}

impl KanBasis {
    pub fn dim(&self) -> usize {
        1 << (self.n + 1)
    }

    pub fn half(&self) -> usize {
        1 << self.n
    }

    pub fn top_mask(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn e(&self, mask: u32) -> usize {
        mask as usize
    }

    pub fn bar(&self, mask: u32) -> usize {
        self.half() + mask as usize
    }

    pub fn is_bar(&self, idx: usize) -> bool {
        idx >= self.half()
    }

    pub fn mask(&self, idx: usize) -> u32 {
        (idx % self.half()) as u32
    }

    /// Recovers the generator count from a double-of-`G_n` table.
    pub fn from_table(table: &StructureTable) -> Result<KanBasis, Error> {
        let dim = table.dim();
        if dim < 8 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "dimension {dim} is not 2^(n+1) for n >= 2"
            )));
        }
        let n = dim.trailing_zeros() as usize - 1;
        if table.unit() != Some(0) {
            return Err(Error::Precondition(
                "expected the empty monomial at index 0 to be the unit".into(),
            ));
        }
        Ok(KanBasis { n })
    }
}

/// The closed-form multiplication table of `Kan(n)`: the four monomial rules
/// with the `(-1)^{s+k+p+q}` sign on the barred-barred case.
pub fn kan_closed_form(n: usize, field: FieldContext) -> Result<StructureTable, Error> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "Kan(n) requires n >= 2, got {n}"
        )));
    }
    let kb = KanBasis { n };
    let half = kb.half();
    let mut parity = Vec::with_capacity(2 * half);
    let mut labels = Vec::with_capacity(2 * half);
    for m in 0..half as u32 {
        parity.push(Monomial(m).parity());
        labels.push(Monomial(m).label());
    }
    for m in 0..half as u32 {
        parity.push((Monomial(m).parity() + 1) % 2);
        labels.push(format!("b{}", Monomial(m).label()));
    }
    let mut table = StructureTable::empty(2 * half, parity, Some(0), labels, field);
    for i in 0..half as u32 {
        for j in 0..half as u32 {
            let s = Monomial(j).degree();
            if i & j == 0 {
                let sign = merge_sign(i, j);
                let c = field.from_i64(sign);
                // e_I e_J
                table.set_product(kb.e(i), kb.e(j), vec![(kb.e(i | j), c.clone())]);
                // e_I bar(e_J)
                table.set_product(kb.e(i), kb.bar(j), vec![(kb.bar(i | j), c.clone())]);
                // bar(e_I) e_J = (-1)^{|J|} bar(e_I e_J)
                table.set_product(
                    kb.bar(i),
                    kb.e(j),
                    vec![(kb.bar(i | j), c.negate_if(s % 2 == 1))],
                );
            }
            // bar(e_I) bar(e_J) = (-1)^{s+k+p+q} e_{I' u J'} when I n J = {c}
            let common = i & j;
            if common.count_ones() == 1 {
                let k = Monomial(i).degree();
                let cbit = common;
                let p = (i & (cbit - 1)).count_ones() as usize + 1;
                let q = (j & (cbit - 1)).count_ones() as usize + 1;
                let i2 = i & !cbit;
                let j2 = j & !cbit;
                let mut sign = if (s + k + p + q) % 2 == 0 { 1 } else { -1 };
                sign *= merge_sign(i2, j2);
                table.set_product(
                    kb.bar(i),
                    kb.bar(j),
                    vec![(kb.e(i2 | j2), field.from_i64(sign))],
                );
            }
        }
    }
    Ok(table)
}

/// Builds `Kan(n)` twice, as the Kantor double of the Grassmann Poisson
/// superalgebra and from the closed-form table, and insists they agree
/// entry-for-entry before returning.
pub fn build_kan(n: usize, field: FieldContext) -> Result<StructureTable, Error> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "Kan(n) requires n >= 2, got {n}"
        )));
    }
    let gr = Grassmann::new(n, field)?;
    let poisson = grassmann_poisson(&gr)?;
    // Poisson means D == 0; verified, not assumed
    for i in 0..gr.dim() {
        if !poisson.d_of(i).is_empty() {
            return Err(Error::Inconsistent(format!(
                "Grassmann bracket has D({}) != 0",
                poisson.dot().label(i)
            )));
        }
    }
    let doubled = poisson.kantor_double()?;
    let closed = kan_closed_form(n, field)?;
    if doubled != closed {
        return Err(Error::Inconsistent(
            "Kantor double of the Grassmann bracket disagrees with the closed-form table".into(),
        ));
    }
    Ok(doubled)
}

/// Searches for a basis triple with `{{e_I, e_J}, e_K} != 0`, witnessing that
/// the Grassmann bracket is not special (hence the double is exceptional).
pub fn find_nonspecial_witness(gr: &Grassmann) -> Option<(Monomial, Monomial, Monomial)> {
    let dim = gr.dim() as u32;
    for i in 0..dim {
        for j in 0..dim {
            let inner = gr
                .poisson_bracket(&gr.basis(Monomial(i)), &gr.basis(Monomial(j)))
                .ok()?;
            if inner.is_zero() {
                continue;
            }
            for k in 0..dim {
                let outer = gr.poisson_bracket(&inner, &gr.basis(Monomial(k))).ok()?;
                if !outer.is_zero() {
                    return Some((Monomial(i), Monomial(j), Monomial(k)));
                }
            }
        }
    }
    None
}
