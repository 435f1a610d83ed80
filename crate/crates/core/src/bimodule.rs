//! Graded right-action bimodules over a structure-constant superalgebra: the
//! split null extension, Jordan-bimodule verification, regular and opposite
//! bimodules, the unit-eigenspace (Peirce) decomposition, and the explicit
//! one-parameter module family `V(al)` over the double of `G_n`.
//!
//! Everything uses the right-action convention `R_a(v) = v.a`; the left
//! action is induced by supercommutativity, `a.v = (-1)^{|a||v|} v.a`.

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::grassmann::{merge_sign, Monomial};
use crate::kantor::KanBasis;
use crate::linalg::{Matrix, RowSpan};
use crate::report::{CheckReport, Violation, DEFAULT_VIOLATION_LIMIT};
use crate::scalar::Scalar;
use crate::superalg::{Accum, SparseVec, StructureTable};
use crate::Error;

/// A right action of a superalgebra on a graded space: one sparse matrix per
/// algebra basis element, stored row-wise (`row(a, i)` is the image of the
/// `i`-th basis vector under `R_a`).
#[derive(Clone, Debug)]
pub struct BimoduleAction {
    algebra: Arc<StructureTable>,
    dim_v: usize,
    vparity: Vec<u8>,
    vlabels: Vec<String>,
    rows: Vec<SparseVec>,
}

impl PartialEq for BimoduleAction {
    fn eq(&self, other: &Self) -> bool {
        *self.algebra == *other.algebra
            && self.dim_v == other.dim_v
            && self.vparity == other.vparity
            && self.rows == other.rows
    }
}

impl BimoduleAction {
    pub fn empty(
        algebra: Arc<StructureTable>,
        dim_v: usize,
        vparity: Vec<u8>,
        vlabels: Vec<String>,
    ) -> Self {
        assert_eq!(vparity.len(), dim_v);
        assert_eq!(vlabels.len(), dim_v);
        let rows = vec![Vec::new(); algebra.dim() * dim_v];
        BimoduleAction {
            algebra,
            dim_v,
            vparity,
            vlabels,
            rows,
        }
    }

    pub fn algebra(&self) -> &Arc<StructureTable> {
        &self.algebra
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn vparity(&self, i: usize) -> u8 {
        self.vparity[i]
    }

    pub fn vparities(&self) -> &[u8] {
        &self.vparity
    }

    pub fn vlabel(&self, i: usize) -> &str {
        &self.vlabels[i]
    }

    pub fn row(&self, a: usize, i: usize) -> &SparseVec {
        &self.rows[a * self.dim_v + i]
    }

    /// Raw entry write; used by builders and fault-injection tests.
    pub fn set_row(&mut self, a: usize, i: usize, mut entries: SparseVec) {
        entries.retain(|(_, c)| !c.is_zero());
        entries.sort_by_key(|(k, _)| *k);
        self.rows[a * self.dim_v + i] = entries;
    }

    /// Parity compatibility of every action entry.
    pub fn validate(&self) -> Result<(), Error> {
        for a in 0..self.algebra.dim() {
            for i in 0..self.dim_v {
                let want = (self.vparity[i] + self.algebra.parity(a)) % 2;
                for (j, c) in self.row(a, i) {
                    if *j >= self.dim_v {
                        return Err(Error::DimensionMismatch(format!(
                            "action of {} on {} hits index {j} >= {}",
                            self.algebra.label(a),
                            self.vlabels[i],
                            self.dim_v
                        )));
                    }
                    if !c.is_zero() && self.vparity[*j] != want {
                        return Err(Error::ParityViolation(format!(
                            "action of {} on {} has a wrong-parity component on {}",
                            self.algebra.label(a),
                            self.vlabels[i],
                            self.vlabels[*j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_basis(&self, v: &[(usize, Scalar)], a: usize) -> SparseVec {
        let mut acc = Accum::new(self.dim_v, self.algebra.field());
        for (i, c) in v {
            acc.add_scaled(self.row(a, *i), c, false);
        }
        acc.drain()
    }

    pub fn apply_basis_chain(&self, v: &[(usize, Scalar)], chain: &[usize]) -> SparseVec {
        let mut cur = v.to_vec();
        for &a in chain {
            if cur.is_empty() {
                break;
            }
            cur = self.apply_basis(&cur, a);
        }
        cur
    }

    /// Action of a sparse algebra element: `v . (sum c_a e_a)`.
    pub fn apply_element(&self, v: &[(usize, Scalar)], elem: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new(self.dim_v, self.algebra.field());
        for (a, ca) in elem {
            for (i, c) in v {
                acc.add_scaled(self.row(*a, *i), &(c * ca), false);
            }
        }
        acc.drain()
    }

    /// Adds `(-1)^{negate} [R_u, R_w]_s` applied to `v` into the accumulator,
    /// for a homogeneous sparse element `u` of parity `pu` and a basis
    /// element `w` of parity `pw`.
    pub(crate) fn supercommutator_into(
        &self,
        acc: &mut Accum,
        v: &[(usize, Scalar)],
        u: &[(usize, Scalar)],
        pu: u8,
        w: usize,
        pw: u8,
        negate: bool,
    ) {
        let one = self.algebra.field().one();
        let vu = self.apply_element(v, u);
        acc.add_scaled(&self.apply_basis(&vu, w), &one, negate);
        // (v w) u with sign -(-1)^{pu pw}, further flipped by `negate`
        let vw = self.apply_basis(v, w);
        let neg2 = true ^ (pu & pw == 1) ^ negate;
        acc.add_scaled(&self.apply_element(&vw, u), &one, neg2);
    }

    pub fn format_vector(&self, v: &[(usize, Scalar)]) -> String {
        if v.is_empty() {
            return "0".to_string();
        }
        v.iter()
            .map(|(k, c)| format!("({c})*{}", self.vlabels[*k]))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Dense matrix of `R_a` (rows = input basis vectors).
    pub fn matrix_of(&self, a: usize) -> Matrix {
        let ctx = self.algebra.field();
        let mut m = Matrix::zeros(self.dim_v, self.dim_v, ctx);
        for i in 0..self.dim_v {
            for (j, c) in self.row(a, i) {
                m.set(i, *j, c.clone());
            }
        }
        m
    }

    pub fn dense_row(&self, v: &[(usize, Scalar)]) -> Vec<Scalar> {
        let ctx = self.algebra.field();
        let mut out = vec![ctx.zero(); self.dim_v];
        for (i, c) in v {
            out[*i] = c.clone();
        }
        out
    }

    pub fn sparse_from_dense(&self, v: &[Scalar]) -> SparseVec {
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect()
    }

    /// Same action data with all module parities flipped.
    pub fn opposite(&self) -> BimoduleAction {
        BimoduleAction {
            algebra: Arc::clone(&self.algebra),
            dim_v: self.dim_v,
            vparity: self.vparity.iter().map(|p| (p + 1) % 2).collect(),
            vlabels: self.vlabels.clone(),
            rows: self.rows.clone(),
        }
    }

    /// Block direct sum of two actions over the same algebra.
    pub fn direct_sum(&self, other: &BimoduleAction) -> Result<BimoduleAction, Error> {
        if *self.algebra != *other.algebra {
            return Err(Error::TableMismatch);
        }
        let dim = self.dim_v + other.dim_v;
        let mut parity = self.vparity.clone();
        parity.extend_from_slice(&other.vparity);
        let mut labels: Vec<String> = self.vlabels.iter().map(|l| format!("L.{l}")).collect();
        labels.extend(other.vlabels.iter().map(|l| format!("R.{l}")));
        let mut out = BimoduleAction::empty(Arc::clone(&self.algebra), dim, parity, labels);
        for a in 0..self.algebra.dim() {
            for i in 0..self.dim_v {
                out.set_row(a, i, self.row(a, i).clone());
            }
            for i in 0..other.dim_v {
                let shifted: SparseVec = other
                    .row(a, i)
                    .iter()
                    .map(|(j, c)| (j + self.dim_v, c.clone()))
                    .collect();
                out.set_row(a, self.dim_v + i, shifted);
            }
        }
        Ok(out)
    }

    /// The trivial module of a given shape: every `R_a` is zero.
    pub fn zero_module(algebra: Arc<StructureTable>, dim_v: usize, vparity: Vec<u8>) -> Self {
        let labels = (0..dim_v).map(|i| format!("z{i}")).collect();
        BimoduleAction::empty(algebra, dim_v, vparity, labels)
    }

    /// Relabels the basis through a permutation: new vector `i` is old vector
    /// `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> BimoduleAction {
        assert_eq!(perm.len(), self.dim_v);
        let mut inv = vec![0usize; self.dim_v];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut out = BimoduleAction::empty(
            Arc::clone(&self.algebra),
            self.dim_v,
            perm.iter().map(|&o| self.vparity[o]).collect(),
            perm.iter().map(|&o| self.vlabels[o].clone()).collect(),
        );
        for a in 0..self.algebra.dim() {
            for i in 0..self.dim_v {
                let mapped: SparseVec = self
                    .row(a, perm[i])
                    .iter()
                    .map(|(j, c)| (inv[*j], c.clone()))
                    .collect();
                out.set_row(a, i, mapped);
            }
        }
        out
    }
}

/// `V = J` with `R_a` = right multiplication.
pub fn regular_bimodule(algebra: &Arc<StructureTable>) -> BimoduleAction {
    let dim = algebra.dim();
    let labels = algebra.labels().to_vec();
    let mut v = BimoduleAction::empty(
        Arc::clone(algebra),
        dim,
        algebra.parities().to_vec(),
        labels,
    );
    for a in 0..dim {
        for i in 0..dim {
            v.set_row(a, i, algebra.basis_product(i, a).clone());
        }
    }
    v
}

/// The split null extension `E(J, V) = J + V` with `V.V = 0`; the left
/// action is filled in by supercommutativity.
pub fn split_null_extension(v: &BimoduleAction) -> Result<StructureTable, Error> {
    let j = v.algebra();
    let d = j.dim();
    let m = v.dim_v();
    let mut parity = j.parities().to_vec();
    parity.extend_from_slice(v.vparities());
    let mut labels: Vec<String> = j.labels().to_vec();
    labels.extend((0..m).map(|i| format!("V.{}", v.vlabel(i))));
    // the flagged unit survives only if it acts as the identity on V
    let unit = j
        .unit()
        .filter(|&u| (0..m).all(|i| v.row(u, i) == &vec![(i, j.field().one())]));
    let mut table = StructureTable::empty(d + m, parity, unit, labels, *j.field());
    for a in 0..d {
        for b in 0..d {
            table.set_product(a, b, j.basis_product(a, b).clone());
        }
        for i in 0..m {
            let right: SparseVec = v
                .row(a, i)
                .iter()
                .map(|(k, c)| (k + d, c.clone()))
                .collect();
            // v_i . a
            table.set_product(d + i, a, right.clone());
            // a . v_i = (-1)^{|a||v_i|} v_i . a
            let flip = j.parity(a) & v.vparity(i) == 1;
            table.set_product(
                a,
                d + i,
                right
                    .into_iter()
                    .map(|(k, c)| (k, c.negate_if(flip)))
                    .collect(),
            );
        }
    }
    table.validate()?;
    Ok(table)
}

/// Verifies that the split null extension satisfies the Jordan superidentity,
/// which is the definition of `V` being a Jordan bimodule. The algebra itself
/// is expected to pass on its own; quadruples entirely inside `J` are part of
/// the enumeration either way.
pub fn check_jordan_bimodule(v: &BimoduleAction, limit: usize) -> Result<CheckReport, Error> {
    let ext = split_null_extension(v)?;
    let mut report = ext.check_jordan_superidentity(limit);
    report.subject = format!(
        "jordan bimodule via split null extension dimJ={} dimV={}",
        v.algebra().dim(),
        v.dim_v()
    );
    Ok(report)
}

/// Unit-eigenspace decomposition of a bimodule over a unital algebra into
/// the eigenvalue 0, 1, and 1/2 components of `R_1`.
pub fn peirce_decompose(
    v: &BimoduleAction,
) -> Result<(BimoduleAction, BimoduleAction, BimoduleAction), Error> {
    let j = v.algebra();
    let Some(u) = j.unit() else {
        return Err(Error::NonUnital);
    };
    let ctx = j.field();
    let r1 = v.matrix_of(u);
    let m = v.dim_v();
    let lambdas = [
        ("p0", ctx.zero()),
        ("p1", ctx.one()),
        ("ph", ctx.from_ratio(1, 2)?),
    ];
    let mut sub_actions = Vec::new();
    let mut total = 0usize;
    for (tag, lambda) in &lambdas {
        // graded eigenvectors: solve within each parity block so the
        // component basis stays homogeneous
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut parity: Vec<u8> = Vec::new();
        for par in 0..2u8 {
            let idxs: Vec<usize> = (0..m).filter(|&i| v.vparity(i) == par).collect();
            if idxs.is_empty() {
                continue;
            }
            // x (R_1 - lambda) = 0 with x supported on `idxs`
            let mut sub = Matrix::zeros(idxs.len(), m, ctx);
            for (r, &i) in idxs.iter().enumerate() {
                for c in 0..m {
                    let entry = if i == c {
                        r1.at(i, c) - lambda
                    } else {
                        r1.at(i, c).clone()
                    };
                    sub.set(r, c, entry);
                }
            }
            // left null space of `sub` = right null space of its transpose
            for coords in sub.transpose(ctx).null_space(ctx)? {
                let mut full = vec![ctx.zero(); m];
                for (r, &i) in idxs.iter().enumerate() {
                    full[i] = coords[r].clone();
                }
                rows.push(full);
                parity.push(par);
            }
        }
        total += rows.len();
        let mut span = RowSpan::new(m, ctx);
        for row in &rows {
            if !span.insert(row.clone())? {
                return Err(Error::BadUnitSpectrum);
            }
        }
        let dim = rows.len();
        let labels: Vec<String> = (0..dim).map(|i| format!("{tag}_{i}")).collect();
        let mut sub = BimoduleAction::empty(Arc::clone(j), dim, parity, labels);
        for a in 0..j.dim() {
            for (i, row) in rows.iter().enumerate() {
                let image = v.apply_basis(&v.sparse_from_dense(row), a);
                let dense = v.dense_row(&image);
                if !span.contains(&dense) {
                    return Err(Error::Inconsistent(format!(
                        "unit-eigenspace {tag} is not invariant under {}",
                        j.label(a)
                    )));
                }
                let coords = crate::linalg::express_in_rows(&rows, &dense, ctx)?;
                let entries: SparseVec = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                sub.set_row(a, i, entries);
            }
        }
        sub_actions.push(sub);
    }
    if total != m {
        return Err(Error::BadUnitSpectrum);
    }
    let vhalf = sub_actions.pop().unwrap();
    let v1 = sub_actions.pop().unwrap();
    let v0 = sub_actions.pop().unwrap();
    Ok((v0, v1, vhalf))
}

/// Parameters of the `V(al)` construction over the double of `G_n`.
#[derive(Clone, Debug)]
pub struct VAlphaSpec {
    pub n: usize,
    pub alpha: Scalar,
    pub v_parity: u8,
}

fn v_label(mask: u32, barred: bool) -> String {
    let core = if mask == 0 {
        "v".to_string()
    } else {
        let parts: Vec<String> = Monomial(mask)
            .indices()
            .iter()
            .map(|i| i.to_string())
            .collect();
        format!("v[{}]", parts.join(","))
    };
    if barred {
        format!("b{core}")
    } else {
        core
    }
}

/// Sign of rewriting the ascending word on `set` into the block order
/// "ascending rest, then shared part descending".
fn interlock_sign_left(set: u32, shared: u32) -> i64 {
    let rest = set & !shared;
    let s1 = shared.count_ones() as usize;
    let mut sign = merge_sign(rest, shared);
    if (s1 * s1.saturating_sub(1) / 2) % 2 == 1 {
        sign = -sign;
    }
    sign
}

/// Sign of rewriting the ascending word on `set` into the block order
/// "shared part ascending, then the rest ascending".
fn interlock_sign_right(set: u32, shared: u32) -> i64 {
    merge_sign(shared, set & !shared)
}

/// Builds the action table of `V(al)`: basis `{v(I), bar(v(I))}` indexed like
/// the algebra monomials, with the four-case action rules normalized to
/// ascending index sets. Signs for non-ascending listings are tracked through
/// the interlocking permutations rather than ever stored.
pub fn build_v_alpha(
    kan: &Arc<StructureTable>,
    spec: &VAlphaSpec,
) -> Result<BimoduleAction, Error> {
    let kb = KanBasis::from_table(kan)?;
    if kb.n != spec.n {
        return Err(Error::DimensionMismatch(format!(
            "algebra is the double of G_{}, spec says n={}",
            kb.n, spec.n
        )));
    }
    if !kan.field().admits(&spec.alpha) {
        return Err(Error::Parse(
            "alpha does not belong to the algebra's field".into(),
        ));
    }
    let half = kb.half();
    let dim_v = kb.dim();
    let mut vparity = Vec::with_capacity(dim_v);
    let mut vlabels = Vec::with_capacity(dim_v);
    for mask in 0..half as u32 {
        vparity.push((spec.v_parity + Monomial(mask).parity()) % 2);
        vlabels.push(v_label(mask, false));
    }
    for mask in 0..half as u32 {
        vparity.push((spec.v_parity + Monomial(mask).parity() + 1) % 2);
        vlabels.push(v_label(mask, true));
    }
    let ctx = *kan.field();
    let mut action = BimoduleAction::empty(Arc::clone(kan), dim_v, vparity, vlabels);

    for i_mask in 0..half as u32 {
        for j_mask in 0..half as u32 {
            let shared = i_mask & j_mask;
            let extra = j_mask & !i_mask; // J \ I
            let s1 = shared.count_ones() as usize;
            let s2 = extra.count_ones() as usize;
            let s = s1 + s2;
            let rest = i_mask & !j_mask; // I \ J
            let sign_ij =
                interlock_sign_left(i_mask, shared) * interlock_sign_right(j_mask, shared);

            // v(I) . e_J and v(I) . bar(e_J): nonzero only when J <= I
            if s2 == 0 {
                let c = ctx.from_i64(sign_ij);
                action.set_row(kb.e(j_mask), kb.e(i_mask), vec![(kb.e(rest), c.clone())]);
                action.set_row(
                    kb.bar(j_mask),
                    kb.e(i_mask),
                    vec![(kb.bar(rest), c.clone())],
                );
                // bar(v(I)) . e_J = (-1)^{|J|} (...) bar(v(I\J))
                action.set_row(
                    kb.e(j_mask),
                    kb.bar(i_mask),
                    vec![(kb.bar(rest), c.clone().negate_if(s % 2 == 1))],
                );
                // bar(v(I)) . bar(e_J) = (-1)^{s-1} al (s-1) (...) v(I\J)
                let sgn = if s % 2 == 1 { 1i64 } else { -1i64 };
                let coeff = spec.alpha.scale_i64(sgn * (s as i64 - 1));
                let coeff = coeff.negate_if(sign_ij < 0);
                action.set_row(kb.bar(j_mask), kb.bar(i_mask), vec![(kb.e(rest), coeff)]);
            } else if s2 == 1 {
                // bar(v(I)) . bar(e_J) = (-1)^{s1} (...) v((I\J) u {extra})
                let append_sign = merge_sign(rest, extra);
                let mut sign = sign_ij * append_sign;
                if s1 % 2 == 1 {
                    sign = -sign;
                }
                action.set_row(
                    kb.bar(j_mask),
                    kb.bar(i_mask),
                    vec![(kb.e(rest | extra), ctx.from_i64(sign))],
                );
            }
            // s2 >= 2: every case is zero; rows stay empty
        }
    }
    action.validate()?;
    Ok(action)
}

/// Relation suite over a bimodule for the double of `G_n`: supercommutators
/// of right multiplications that must vanish.
///
/// Checked on every index pair: `[R_{e_I}, R_{e_J}]_s = 0` always;
/// `[R_{e_I}, R_{bar(e_J)}]_s = 0` when `|I n J| >= 2`;
/// `[R_{e_I}, R_{bar(1)}]_s = 0` for `I != {1..n}`; and
/// `[R_{bar(e_I)}, R_{bar(e_J)}]_s = 0` when `I n J != 0`.
pub fn check_commutator_relations(v: &BimoduleAction) -> Result<CheckReport, Error> {
    let kan = v.algebra();
    let kb = KanBasis::from_table(kan)?;
    let start = Instant::now();
    let one = kan.field().one();
    let mut violations = Vec::new();
    let half = kb.half() as u32;
    let check = |a: usize, b: usize, tag: &str, violations: &mut Vec<Violation>| {
        for w in 0..v.dim_v() {
            let start_vec = vec![(w, one.clone())];
            let mut acc = Accum::new(v.dim_v(), kan.field());
            v.supercommutator_into(
                &mut acc,
                &start_vec,
                &[(a, one.clone())],
                kan.parity(a),
                b,
                kan.parity(b),
                false,
            );
            let residual = acc.drain();
            if !residual.is_empty() {
                violations.push(Violation {
                    inputs: vec![
                        tag.to_string(),
                        kan.label(a).to_string(),
                        kan.label(b).to_string(),
                        v.vlabel(w).to_string(),
                    ],
                    residual: v.format_vector(&residual),
                });
            }
        }
    };
    for i in 0..half {
        for j in 0..half {
            check(kb.e(i), kb.e(j), "plain-plain", &mut violations);
            if (i & j).count_ones() >= 2 {
                check(kb.e(i), kb.bar(j), "plain-bar-overlap2", &mut violations);
            }
            if i & j != 0 {
                check(kb.bar(i), kb.bar(j), "bar-bar-overlap", &mut violations);
            }
        }
        if i != kb.top_mask() {
            check(kb.e(i), kb.bar(0), "plain-bartop", &mut violations);
        }
    }
    Ok(CheckReport::new(
        format!("commutator relations n={} dimV={}", kb.n, v.dim_v()),
        violations,
        DEFAULT_VIOLATION_LIMIT,
        start.elapsed().as_millis(),
    ))
}

/// Power relations of right multiplications on a bimodule for the double of
/// `G_n`: `R_a^2 = 0` for odd basis `a != bar(1)`, `R_a^3 = 0` for even
/// `a` outside `{1, bar(e_i)}`, `R_{bar(e_i)}^3 = R_{bar(e_i)}`, and, when an
/// expected parameter is supplied, `R_{bar(1)}^2 = al Id`.
pub fn check_power_relations(
    v: &BimoduleAction,
    expected_alpha: Option<&Scalar>,
) -> Result<CheckReport, Error> {
    let kan = v.algebra();
    let kb = KanBasis::from_table(kan)?;
    let start = Instant::now();
    let one = kan.field().one();
    let mut violations = Vec::new();
    let push =
        |tag: &str, a: usize, w: usize, residual: &SparseVec, violations: &mut Vec<Violation>| {
            violations.push(Violation {
                inputs: vec![
                    tag.to_string(),
                    kan.label(a).to_string(),
                    v.vlabel(w).to_string(),
                ],
                residual: v.format_vector(residual),
            });
        };
    for a in 0..kan.dim() {
        let mask = kb.mask(a);
        let barred = kb.is_bar(a);
        let single = mask.count_ones() == 1;
        for w in 0..v.dim_v() {
            let start_vec = vec![(w, one.clone())];
            if kan.parity(a) == 1 {
                if barred && mask == 0 {
                    // bar(1): R^2 = al on the family modules
                    if let Some(alpha) = expected_alpha {
                        let sq = v.apply_basis_chain(&start_vec, &[a, a]);
                        let mut acc = Accum::new(v.dim_v(), kan.field());
                        acc.add_scaled(&sq, &one, false);
                        acc.add(w, &(-alpha.clone()));
                        let residual = acc.drain();
                        if !residual.is_empty() {
                            push("bar1-square-alpha", a, w, &residual, &mut violations);
                        }
                    }
                } else {
                    let sq = v.apply_basis_chain(&start_vec, &[a, a]);
                    if !sq.is_empty() {
                        push("odd-square", a, w, &sq, &mut violations);
                    }
                }
            } else {
                // even part
                if barred && single {
                    // R^3 = R
                    let cube = v.apply_basis_chain(&start_vec, &[a, a, a]);
                    let lin = v.apply_basis(&start_vec, a);
                    let mut acc = Accum::new(v.dim_v(), kan.field());
                    acc.add_scaled(&cube, &one, false);
                    acc.add_scaled(&lin, &one, true);
                    let residual = acc.drain();
                    if !residual.is_empty() {
                        push("bar-single-cube", a, w, &residual, &mut violations);
                    }
                } else if !(!barred && mask == 0) {
                    // excluded: the unit itself
                    let cube = v.apply_basis_chain(&start_vec, &[a, a, a]);
                    if !cube.is_empty() {
                        push("even-cube", a, w, &cube, &mut violations);
                    }
                }
            }
        }
    }
    Ok(CheckReport::new(
        format!("power relations n={} dimV={}", kb.n, v.dim_v()),
        violations,
        DEFAULT_VIOLATION_LIMIT,
        start.elapsed().as_millis(),
    ))
}

/// The sandwich relations `R_{bar(e_i)} R_{bar(1)} R_{bar(e_i)} = 0` and
/// `R_{bar(e_i)} R_{bar(1)} R_{bar(e_j)} = -R_{bar(e_j)} R_{bar(1)} R_{bar(e_i)}`.
pub fn check_sandwich_relations(v: &BimoduleAction) -> Result<CheckReport, Error> {
    let kan = v.algebra();
    let kb = KanBasis::from_table(kan)?;
    let start = Instant::now();
    let one = kan.field().one();
    let bar1 = kb.bar(0);
    let mut violations = Vec::new();
    for i in 0..kb.n {
        let bi = kb.bar(1 << i);
        for j in 0..kb.n {
            let bj = kb.bar(1 << j);
            for w in 0..v.dim_v() {
                let start_vec = vec![(w, one.clone())];
                let ij = v.apply_basis_chain(&start_vec, &[bi, bar1, bj]);
                let ji = v.apply_basis_chain(&start_vec, &[bj, bar1, bi]);
                let mut acc = Accum::new(v.dim_v(), kan.field());
                acc.add_scaled(&ij, &one, false);
                acc.add_scaled(&ji, &one, false);
                let residual = acc.drain();
                if !residual.is_empty() {
                    violations.push(Violation {
                        inputs: vec![
                            format!("sandwich i={} j={}", i + 1, j + 1),
                            v.vlabel(w).to_string(),
                        ],
                        residual: v.format_vector(&residual),
                    });
                }
            }
        }
    }
    Ok(CheckReport::new(
        format!("sandwich relations n={} dimV={}", kb.n, v.dim_v()),
        violations,
        DEFAULT_VIOLATION_LIMIT,
        start.elapsed().as_millis(),
    ))
}

/// Given a special vector `w` (annihilated by every `e_I`, `bar(e_I)` with
/// `I` nonempty), generates the family vectors `w(I) = w R_{bar(1)}
/// R_{bar(e_{i_1})} ...` and checks that the action on them follows the full
/// `V(al)` table with ascending-order sign normalization, including every
/// vanishing case. On the constructed `V(al)` this validates the builder; on
/// an independently obtained module it validates the table itself.
pub fn check_action_table(
    v: &BimoduleAction,
    special: &[Scalar],
    alpha: &Scalar,
) -> Result<CheckReport, Error> {
    let kan = v.algebra();
    let kb = KanBasis::from_table(kan)?;
    let start = Instant::now();
    let ctx = kan.field();
    let one = ctx.one();
    let half = kb.half() as u32;
    let bar1 = kb.bar(0);

    // family vectors from the definition words
    let base = v.sparse_from_dense(special);
    let mut plain: Vec<SparseVec> = Vec::with_capacity(half as usize);
    for mask in 0..half {
        let mut chain = Vec::new();
        for i in 0..kb.n {
            if mask >> i & 1 == 1 {
                chain.push(bar1);
                chain.push(kb.bar(1 << i));
            }
        }
        plain.push(v.apply_basis_chain(&base, &chain));
    }
    let barred: Vec<SparseVec> = plain.iter().map(|p| v.apply_basis(p, bar1)).collect();

    let mut violations = Vec::new();
    let expect = |got: SparseVec, want: SparseVec, tag: String, violations: &mut Vec<Violation>| {
        let mut acc = Accum::new(v.dim_v(), ctx);
        acc.add_scaled(&got, &one, false);
        acc.add_scaled(&want, &one, true);
        let residual = acc.drain();
        if !residual.is_empty() {
            violations.push(Violation {
                inputs: vec![tag],
                residual: v.format_vector(&residual),
            });
        }
    };
    let scale = |vec: &SparseVec, c: &Scalar| -> SparseVec {
        vec.iter()
            .map(|(k, x)| (*k, x * c))
            .filter(|(_, x)| !x.is_zero())
            .collect()
    };

    for i_mask in 0..half {
        for j_mask in 0..half {
            let shared = i_mask & j_mask;
            let extra = j_mask & !i_mask;
            let rest = i_mask & !j_mask;
            let s1 = shared.count_ones() as usize;
            let s2 = extra.count_ones() as usize;
            let s = s1 + s2;
            let sign_ij =
                interlock_sign_left(i_mask, shared) * interlock_sign_right(j_mask, shared);
            let iu = i_mask as usize;

            let ve = v.apply_basis(&plain[iu], kb.e(j_mask));
            let vb = v.apply_basis(&plain[iu], kb.bar(j_mask));
            let bve = v.apply_basis(&barred[iu], kb.e(j_mask));
            let bvb = v.apply_basis(&barred[iu], kb.bar(j_mask));

            if s2 == 0 {
                let c = ctx.from_i64(sign_ij);
                expect(
                    ve,
                    scale(&plain[rest as usize], &c),
                    format!("v({i_mask:b}).e({j_mask:b})"),
                    &mut violations,
                );
                expect(
                    vb,
                    scale(&barred[rest as usize], &c),
                    format!("v({i_mask:b}).be({j_mask:b})"),
                    &mut violations,
                );
                expect(
                    bve,
                    scale(&barred[rest as usize], &c.clone().negate_if(s % 2 == 1)),
                    format!("bv({i_mask:b}).e({j_mask:b})"),
                    &mut violations,
                );
                let sgn = if s % 2 == 1 { 1i64 } else { -1i64 };
                let coeff = alpha.scale_i64(sgn * (s as i64 - 1)).negate_if(sign_ij < 0);
                expect(
                    bvb,
                    scale(&plain[rest as usize], &coeff),
                    format!("bv({i_mask:b}).be({j_mask:b})"),
                    &mut violations,
                );
            } else {
                expect(
                    ve,
                    Vec::new(),
                    format!("v({i_mask:b}).e({j_mask:b})=0"),
                    &mut violations,
                );
                expect(
                    vb,
                    Vec::new(),
                    format!("v({i_mask:b}).be({j_mask:b})=0"),
                    &mut violations,
                );
                expect(
                    bve,
                    Vec::new(),
                    format!("bv({i_mask:b}).e({j_mask:b})=0"),
                    &mut violations,
                );
                if s2 == 1 {
                    let append_sign = merge_sign(rest, extra);
                    let mut sign = sign_ij * append_sign;
                    if s1 % 2 == 1 {
                        sign = -sign;
                    }
                    expect(
                        bvb,
                        scale(&plain[(rest | extra) as usize], &ctx.from_i64(sign)),
                        format!("bv({i_mask:b}).be({j_mask:b})"),
                        &mut violations,
                    );
                } else {
                    expect(
                        bvb,
                        Vec::new(),
                        format!("bv({i_mask:b}).be({j_mask:b})=0"),
                        &mut violations,
                    );
                }
            }
        }
    }
    Ok(CheckReport::new(
        format!("family action table n={} dimV={}", kb.n, v.dim_v()),
        violations,
        DEFAULT_VIOLATION_LIMIT,
        start.elapsed().as_millis(),
    ))
}

#[derive(Serialize, Deserialize)]
struct ActionWire {
    algebra_ref: serde_json::Value,
    #[serde(rename = "dimV")]
    dim_v: usize,
    vparities: Vec<u8>,
    #[serde(rename = "R")]
    r: Vec<(usize, Vec<(usize, usize, String)>)>,
    vlabels: Vec<String>,
}

impl BimoduleAction {
    pub fn to_json(&self) -> String {
        let algebra_ref: serde_json::Value =
            serde_json::from_str(&self.algebra.to_json()).expect("table json is valid");
        let mut r = Vec::new();
        for a in 0..self.algebra.dim() {
            let mut entries = Vec::new();
            for i in 0..self.dim_v {
                for (j, c) in self.row(a, i) {
                    entries.push((i, *j, c.to_string()));
                }
            }
            if !entries.is_empty() {
                r.push((a, entries));
            }
        }
        let wire = ActionWire {
            algebra_ref,
            dim_v: self.dim_v,
            vparities: self.vparity.clone(),
            r,
            vlabels: self.vlabels.clone(),
        };
        serde_json::to_string_pretty(&wire).expect("action serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<BimoduleAction, Error> {
        let wire: ActionWire =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let table = StructureTable::from_json(
            &serde_json::to_string(&wire.algebra_ref).expect("value to string"),
        )?;
        if wire.vparities.len() != wire.dim_v || wire.vlabels.len() != wire.dim_v {
            return Err(Error::DimensionMismatch(
                "vparities/vlabels length differs from dimV".into(),
            ));
        }
        let ctx = *table.field();
        let mut action =
            BimoduleAction::empty(Arc::new(table), wire.dim_v, wire.vparities, wire.vlabels);
        for (a, entries) in wire.r {
            if a >= action.algebra.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "action references algebra index {a}"
                )));
            }
            let mut per_row: Vec<SparseVec> = vec![Vec::new(); action.dim_v];
            for (i, j, c) in entries {
                if i >= action.dim_v || j >= action.dim_v {
                    return Err(Error::DimensionMismatch(format!(
                        "action entry ({i},{j}) out of range"
                    )));
                }
                per_row[i].push((j, ctx.parse_scalar(&c)?));
            }
            for (i, row) in per_row.into_iter().enumerate() {
                if !row.is_empty() {
                    action.set_row(a, i, row);
                }
            }
        }
        action.validate()?;
        Ok(action)
    }
}
