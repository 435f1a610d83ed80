//! Finite-dimensional superalgebras given by sparse structure constants, with
//! exhaustive checkers for supercommutativity, the graded Jordan identity,
//! and the right-multiplication operator relations it implies on bimodules.
//!
//! All identities checked here are multilinear, so enumerating homogeneous
//! basis tuples is complete. Quadruple enumeration is partitioned across
//! threads; collected violations are sorted canonically before reporting so
//! results do not depend on the partitioning.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bimodule::BimoduleAction;
use crate::report::{CheckReport, Violation, DEFAULT_VIOLATION_LIMIT};
use crate::scalar::{FieldContext, Scalar};
use crate::Error;

/// Sparse vector over a basis: ascending indices, no zero coefficients.
pub type SparseVec = Vec<(usize, Scalar)>;

/// A superalgebra on `dim` homogeneous basis elements with sparse structure
/// constants `product[i][j] = sum_k c_k e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTable {
    dim: usize,
    parity: Vec<u8>,
    unit: Option<usize>,
    product: Vec<SparseVec>,
    labels: Vec<String>,
    field: FieldContext,
}

/// Reusable dense accumulator for sparse sums.
pub(crate) struct Accum {
    slots: Vec<Scalar>,
    touched: Vec<usize>,
    zero: Scalar,
}

impl Accum {
    pub(crate) fn new(dim: usize, ctx: &FieldContext) -> Self {
        Accum {
            slots: vec![ctx.zero(); dim],
            touched: Vec::new(),
            zero: ctx.zero(),
        }
    }

    pub(crate) fn add(&mut self, k: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        if self.slots[k].is_zero() && !self.touched.contains(&k) {
            self.touched.push(k);
        }
        self.slots[k] = &self.slots[k] + c;
    }

    pub(crate) fn add_scaled(&mut self, entries: &[(usize, Scalar)], c: &Scalar, negate: bool) {
        for (k, v) in entries {
            let cv = (v * c).negate_if(negate);
            self.add(*k, &cv);
        }
    }

    /// Collects the nonzero entries in ascending index order and resets.
    pub(crate) fn drain(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::new();
        for &k in &self.touched {
            if !self.slots[k].is_zero() {
                out.push((k, std::mem::replace(&mut self.slots[k], self.zero.clone())));
            } else {
                self.slots[k] = self.zero.clone();
            }
        }
        self.touched.clear();
        out
    }
}

impl StructureTable {
    /// A table with all products zero; builders fill entries afterwards.
    pub fn empty(
        dim: usize,
        parity: Vec<u8>,
        unit: Option<usize>,
        labels: Vec<String>,
        field: FieldContext,
    ) -> Self {
        assert_eq!(parity.len(), dim);
        assert_eq!(labels.len(), dim);
        StructureTable {
            dim,
            parity,
            unit,
            product: vec![Vec::new(); dim * dim],
            labels,
            field,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &FieldContext {
        &self.field
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.parity[i]
    }

    pub fn parities(&self) -> &[u8] {
        &self.parity
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn set_product(&mut self, i: usize, j: usize, mut entries: SparseVec) {
        entries.retain(|(_, c)| !c.is_zero());
        entries.sort_by_key(|(k, _)| *k);
        self.product[i * self.dim + j] = entries;
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.product[i * self.dim + j]
    }

    /// Structural validation: parity compatibility of every product entry and
    /// the unit axiom when a unit is flagged.
    pub fn validate(&self) -> Result<(), Error> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let want = (self.parity[i] + self.parity[j]) % 2;
                for (k, c) in self.basis_product(i, j) {
                    if *k >= self.dim {
                        return Err(Error::DimensionMismatch(format!(
                            "product ({i},{j}) points at basis index {k} >= {}",
                            self.dim
                        )));
                    }
                    if !c.is_zero() && self.parity[*k] != want {
                        return Err(Error::ParityViolation(format!(
                            "product {} * {} has a component on {} of wrong parity",
                            self.labels[i], self.labels[j], self.labels[*k]
                        )));
                    }
                    if !self.field.admits(c) {
                        return Err(Error::Parse(format!(
                            "coefficient in product ({i},{j}) not in the declared field"
                        )));
                    }
                }
            }
        }
        if let Some(u) = self.unit {
            for i in 0..self.dim {
                let want = vec![(i, self.field.one())];
                if *self.basis_product(u, i) != want || *self.basis_product(i, u) != want {
                    return Err(Error::Inconsistent(format!(
                        "flagged unit {} does not act as identity on {}",
                        self.labels[u], self.labels[i]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Bilinear product of sparse elements.
    pub fn mul_sparse(&self, a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new(self.dim, &self.field);
        self.mul_sparse_into(&mut acc, a, b, &self.field.one(), false);
        acc.drain()
    }

    fn mul_sparse_into(
        &self,
        acc: &mut Accum,
        a: &[(usize, Scalar)],
        b: &[(usize, Scalar)],
        scale: &Scalar,
        negate: bool,
    ) {
        for (i, ci) in a {
            for (j, cj) in b {
                let prod = self.basis_product(*i, *j);
                if prod.is_empty() {
                    continue;
                }
                let c = (&(ci * cj) * scale).negate_if(negate);
                acc.add_scaled(prod, &c, false);
            }
        }
    }

    fn mul_sv_basis(&self, a: &[(usize, Scalar)], j: usize) -> SparseVec {
        let mut acc = Accum::new(self.dim, &self.field);
        for (i, ci) in a {
            acc.add_scaled(self.basis_product(*i, j), ci, false);
        }
        acc.drain()
    }

    pub fn format_sparse(&self, v: &[(usize, Scalar)]) -> String {
        if v.is_empty() {
            return "0".to_string();
        }
        v.iter()
            .map(|(k, c)| format!("({c})*{}", self.labels[*k]))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn basis_element(self: &Arc<Self>, i: usize) -> Element {
        Element {
            table: Arc::clone(self),
            coeffs: vec![(i, self.field.one())],
        }
    }

    pub fn element(self: &Arc<Self>, coeffs: SparseVec) -> Element {
        let mut coeffs = coeffs;
        coeffs.retain(|(_, c)| !c.is_zero());
        coeffs.sort_by_key(|(k, _)| *k);
        Element {
            table: Arc::clone(self),
            coeffs,
        }
    }

    /// Restriction of the table to a subset of basis indices, which must be
    /// multiplicatively closed; used to compare embedded subalgebras.
    pub fn subtable(
        &self,
        indices: &[usize],
        unit: Option<usize>,
    ) -> Result<StructureTable, Error> {
        let mut pos = vec![usize::MAX; self.dim];
        for (new, &old) in indices.iter().enumerate() {
            pos[old] = new;
        }
        let mut t = StructureTable::empty(
            indices.len(),
            indices.iter().map(|&i| self.parity[i]).collect(),
            unit,
            indices.iter().map(|&i| self.labels[i].clone()).collect(),
            self.field,
        );
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                let mut entries = Vec::new();
                for (k, c) in self.basis_product(i, j) {
                    if pos[*k] == usize::MAX {
                        return Err(Error::Inconsistent(format!(
                            "subset not closed: {} * {} hits {}",
                            self.labels[i], self.labels[j], self.labels[*k]
                        )));
                    }
                    entries.push((pos[*k], c.clone()));
                }
                t.set_product(a, b, entries);
            }
        }
        Ok(t)
    }
}

/// An element of a structure-constant superalgebra.
#[derive(Clone, Debug)]
pub struct Element {
    pub table: Arc<StructureTable>,
    pub coeffs: SparseVec,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Product of two elements of the same table.
pub fn multiply(x: &Element, y: &Element) -> Result<Element, Error> {
    if !Arc::ptr_eq(&x.table, &y.table) && *x.table != *y.table {
        return Err(Error::TableMismatch);
    }
    Ok(Element {
        table: Arc::clone(&x.table),
        coeffs: x.table.mul_sparse(&x.coeffs, &y.coeffs),
    })
}

fn parity_sign(e: u8) -> bool {
    e % 2 == 1
}

impl StructureTable {
    /// Checks `xy = (-1)^{|x||y|} yx` on all basis pairs.
    pub fn check_supercommutative(&self, limit: usize) -> CheckReport {
        let start = Instant::now();
        let violations: Vec<Violation> = (0..self.dim * self.dim)
            .into_par_iter()
            .filter_map(|idx| {
                let (i, j) = (idx / self.dim, idx % self.dim);
                if j < i {
                    return None;
                }
                let mut acc = Accum::new(self.dim, &self.field);
                acc.add_scaled(self.basis_product(i, j), &self.field.one(), false);
                let flip = parity_sign(self.parity[i] & self.parity[j]);
                acc.add_scaled(self.basis_product(j, i), &self.field.one(), !flip);
                let residual = acc.drain();
                if residual.is_empty() {
                    None
                } else {
                    Some(Violation {
                        inputs: vec![self.labels[i].clone(), self.labels[j].clone()],
                        residual: self.format_sparse(&residual),
                    })
                }
            })
            .collect();
        CheckReport::new(
            format!("supercommutativity dim={}", self.dim),
            violations,
            limit,
            start.elapsed().as_millis(),
        )
    }

    /// Residual of the graded Jordan superidentity on a basis quadruple.
    fn jordan_residual(&self, x: usize, y: usize, z: usize, t: usize) -> SparseVec {
        let (px, py, pz, pt) = (
            self.parity[x],
            self.parity[y],
            self.parity[z],
            self.parity[t],
        );
        let one = self.field.one();
        let mut acc = Accum::new(self.dim, &self.field);

        // ((xy)z)t
        let xy_z = self.mul_sv_basis(self.basis_product(x, y), z);
        for (k, c) in &self.mul_sv_basis(&xy_z, t) {
            acc.add(*k, c);
        }
        // +(-1)^{|y||z|+|y||t|+|z||t|} ((xt)z)y
        let s1 = parity_sign(py * pz + py * pt + pz * pt);
        let xt_z = self.mul_sv_basis(self.basis_product(x, t), z);
        acc.add_scaled(&self.mul_sv_basis(&xt_z, y), &one, s1);
        // +(-1)^{|x||y|+|x||z|+|x||t|+|z||t|} ((yt)z)x
        let s2 = parity_sign(px * py + px * pz + px * pt + pz * pt);
        let yt_z = self.mul_sv_basis(self.basis_product(y, t), z);
        acc.add_scaled(&self.mul_sv_basis(&yt_z, x), &one, s2);

        // -(xy)(zt)
        self.mul_sparse_into(
            &mut acc,
            self.basis_product(x, y),
            self.basis_product(z, t),
            &one,
            true,
        );
        // -(-1)^{|y||z|} (xz)(yt)
        self.mul_sparse_into(
            &mut acc,
            self.basis_product(x, z),
            self.basis_product(y, t),
            &one,
            !parity_sign(py * pz),
        );
        // -(-1)^{|t|(|y|+|z|)} (xt)(yz)
        self.mul_sparse_into(
            &mut acc,
            self.basis_product(x, t),
            self.basis_product(y, z),
            &one,
            !parity_sign(pt * (py + pz)),
        );
        acc.drain()
    }

    /// Evaluates the graded Jordan superidentity on every homogeneous basis
    /// quadruple. Complete by multilinearity. The table must already be
    /// supercommutative.
    pub fn check_jordan_superidentity(&self, limit: usize) -> CheckReport {
        let start = Instant::now();
        let violations: Vec<Violation> = (0..self.dim * self.dim)
            .into_par_iter()
            .flat_map_iter(|idx| {
                let (x, y) = (idx / self.dim, idx % self.dim);
                let mut out = Vec::new();
                for z in 0..self.dim {
                    for t in 0..self.dim {
                        let residual = self.jordan_residual(x, y, z, t);
                        if !residual.is_empty() {
                            out.push(Violation {
                                inputs: vec![
                                    self.labels[x].clone(),
                                    self.labels[y].clone(),
                                    self.labels[z].clone(),
                                    self.labels[t].clone(),
                                ],
                                residual: self.format_sparse(&residual),
                            });
                            if out.len() >= limit {
                                return out;
                            }
                        }
                    }
                }
                out
            })
            .collect();
        CheckReport::new(
            format!("jordan superidentity dim={}", self.dim),
            violations,
            limit,
            start.elapsed().as_millis(),
        )
    }

    /// The super-associator identity
    /// `(a,d,b)c - (-1)^{|b||c|}(a,dc,b) + (-1)^{|a||d|+|b||c|} d(a,c,b) = 0`
    /// on all basis quadruples, where `(x,y,z) = (xy)z - x(yz)`. This is the
    /// graded form of the rule that `y -> (a,y,b)` is a derivation,
    /// `(a, dc, b) = (a,d,b)c + d(a,c,b)`, with the grading signs coming
    /// from moving `c` past `b` and `d` past `a`.
    pub fn check_super_associator(&self, limit: usize) -> CheckReport {
        let start = Instant::now();
        let one = self.field.one();
        let associator = |u: &SparseVec, acc: &mut Accum, a: usize, b: usize, negate: bool| {
            // (a, u, b) = (a u) b - a (u b), u sparse
            let au = self.mul_sparse(&[(a, one.clone())], u);
            acc.add_scaled(&self.mul_sv_basis(&au, b), &one, negate);
            let ub = self.mul_sv_basis(u, b);
            self.mul_sparse_into(acc, &[(a, one.clone())], &ub, &one, !negate);
        };
        let violations: Vec<Violation> = (0..self.dim * self.dim)
            .into_par_iter()
            .flat_map_iter(|idx| {
                let (a, d) = (idx / self.dim, idx % self.dim);
                let mut out = Vec::new();
                for b in 0..self.dim {
                    for c in 0..self.dim {
                        let mut acc = Accum::new(self.dim, &self.field);
                        // (a,d,b)c
                        let mut adb = Accum::new(self.dim, &self.field);
                        associator(&vec![(d, one.clone())], &mut adb, a, b, false);
                        let adb = adb.drain();
                        acc.add_scaled(&self.mul_sv_basis(&adb, c), &one, false);
                        // -(-1)^{|b||c|}(a, dc, b)
                        let dc = self.basis_product(d, c).clone();
                        associator(
                            &dc,
                            &mut acc,
                            a,
                            b,
                            !parity_sign(self.parity[b] * self.parity[c]),
                        );
                        // +(-1)^{|a||d|+|b||c|} d(a,c,b)
                        let mut acb = Accum::new(self.dim, &self.field);
                        associator(&vec![(c, one.clone())], &mut acb, a, b, false);
                        let acb = acb.drain();
                        self.mul_sparse_into(
                            &mut acc,
                            &[(d, one.clone())],
                            &acb,
                            &one,
                            parity_sign(
                                self.parity[a] * self.parity[d] + self.parity[b] * self.parity[c],
                            ),
                        );
                        let residual = acc.drain();
                        if !residual.is_empty() {
                            out.push(Violation {
                                inputs: vec![
                                    self.labels[a].clone(),
                                    self.labels[d].clone(),
                                    self.labels[b].clone(),
                                    self.labels[c].clone(),
                                ],
                                residual: self.format_sparse(&residual),
                            });
                            if out.len() >= limit {
                                return out;
                            }
                        }
                    }
                }
                out
            })
            .collect();
        CheckReport::new(
            format!("super-associator identity dim={}", self.dim),
            violations,
            limit,
            start.elapsed().as_millis(),
        )
    }

    /// Verifies the two operator relations that the Jordan superidentity
    /// induces on right multiplications, applied to every basis vector of the
    /// bimodule: the degree-3 relation from linearizing in one module
    /// argument, and the supercommutator relation.
    pub fn check_operator_relations(&self, action: &BimoduleAction) -> Result<CheckReport, Error> {
        if **action.algebra() != *self {
            return Err(Error::TableMismatch);
        }
        let start = Instant::now();
        let one = self.field.one();
        let dim = self.dim;
        // degree-3 relation on triples (y,z,t), applied to every basis vector
        let mut violations: Vec<Violation> = (0..dim * dim)
            .into_par_iter()
            .flat_map_iter(|idx| {
                let (y, z) = (idx / dim, idx % dim);
                let (py, pz) = (self.parity[y], self.parity[z]);
                let mut out = Vec::new();
                for t in 0..dim {
                    let pt = self.parity[t];
                    let yt_z = self.mul_sv_basis(self.basis_product(y, t), z);
                    let zt = self.basis_product(z, t);
                    let yt = self.basis_product(y, t);
                    let yz = self.basis_product(y, z);
                    for v in 0..action.dim_v() {
                        let mut acc = Accum::new(action.dim_v(), &self.field);
                        let start_vec = vec![(v, one.clone())];
                        // v R_y R_z R_t
                        let a1 = action.apply_basis_chain(&start_vec, &[y, z, t]);
                        acc.add_scaled(&a1, &one, false);
                        // +(-1)^{|y||z|+|y||t|+|z||t|} v R_t R_z R_y
                        let s1 = parity_sign(py * pz + py * pt + pz * pt);
                        let a2 = action.apply_basis_chain(&start_vec, &[t, z, y]);
                        acc.add_scaled(&a2, &one, s1);
                        // +(-1)^{|z||t|} v R_{(yt)z}
                        let a3 = action.apply_element(&start_vec, &yt_z);
                        acc.add_scaled(&a3, &one, parity_sign(pz * pt));
                        // -v R_y R_{zt}
                        let vy = action.apply_basis(&start_vec, y);
                        acc.add_scaled(&action.apply_element(&vy, zt), &one, true);
                        // -(-1)^{|y||z|} v R_z R_{yt}
                        let vz = action.apply_basis(&start_vec, z);
                        acc.add_scaled(&action.apply_element(&vz, yt), &one, !parity_sign(py * pz));
                        // -(-1)^{|t|(|y|+|z|)} v R_t R_{yz}
                        let vt = action.apply_basis(&start_vec, t);
                        acc.add_scaled(
                            &action.apply_element(&vt, yz),
                            &one,
                            !parity_sign(pt * (py + pz)),
                        );
                        let residual = acc.drain();
                        if !residual.is_empty() {
                            out.push(Violation {
                                inputs: vec![
                                    "deg3".into(),
                                    self.labels[y].clone(),
                                    self.labels[z].clone(),
                                    self.labels[t].clone(),
                                    action.vlabel(v).to_string(),
                                ],
                                residual: action.format_vector(&residual),
                            });
                        }
                    }
                }
                out
            })
            .collect();
        // supercommutator relation on triples (x,y,z)
        let comm: Vec<Violation> = (0..dim * dim)
            .into_par_iter()
            .flat_map_iter(|idx| {
                let (x, y) = (idx / dim, idx % dim);
                let (px, py) = (self.parity[x], self.parity[y]);
                let mut out = Vec::new();
                for z in 0..dim {
                    let pz = self.parity[z];
                    let xy = self.basis_product(x, y);
                    let xz = self.basis_product(x, z);
                    let yz = self.basis_product(y, z);
                    for v in 0..action.dim_v() {
                        let start_vec = vec![(v, one.clone())];
                        let mut acc = Accum::new(action.dim_v(), &self.field);
                        action.supercommutator_into(
                            &mut acc,
                            &start_vec,
                            xy,
                            (px + py) % 2,
                            z,
                            pz,
                            false,
                        );
                        action.supercommutator_into(
                            &mut acc,
                            &start_vec,
                            xz,
                            (px + pz) % 2,
                            y,
                            py,
                            parity_sign(py * pz),
                        );
                        action.supercommutator_into(
                            &mut acc,
                            &start_vec,
                            yz,
                            (py + pz) % 2,
                            x,
                            px,
                            parity_sign(px * (py + pz)),
                        );
                        let residual = acc.drain();
                        if !residual.is_empty() {
                            out.push(Violation {
                                inputs: vec![
                                    "comm".into(),
                                    self.labels[x].clone(),
                                    self.labels[y].clone(),
                                    self.labels[z].clone(),
                                    action.vlabel(v).to_string(),
                                ],
                                residual: action.format_vector(&residual),
                            });
                        }
                    }
                }
                out
            })
            .collect();
        violations.extend(comm);
        Ok(CheckReport::new(
            format!("operator relations dim={} dimV={}", dim, action.dim_v()),
            violations,
            DEFAULT_VIOLATION_LIMIT,
            start.elapsed().as_millis(),
        ))
    }
}

#[derive(Serialize, Deserialize)]
struct TableWire {
    dim: usize,
    parities: Vec<u8>,
    unit: Option<usize>,
    products: Vec<(usize, usize, Vec<(usize, String)>)>,
    labels: Vec<String>,
    field: FieldContext,
}

impl StructureTable {
    pub fn to_json(&self) -> String {
        let mut products = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let entries = self.basis_product(i, j);
                if !entries.is_empty() {
                    products.push((
                        i,
                        j,
                        entries
                            .iter()
                            .map(|(k, c)| (*k, c.to_string()))
                            .collect::<Vec<_>>(),
                    ));
                }
            }
        }
        let wire = TableWire {
            dim: self.dim,
            parities: self.parity.clone(),
            unit: self.unit,
            products,
            labels: self.labels.clone(),
            field: self.field,
        };
        serde_json::to_string_pretty(&wire).expect("table serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<StructureTable, Error> {
        let wire: TableWire =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if wire.parities.len() != wire.dim || wire.labels.len() != wire.dim {
            return Err(Error::DimensionMismatch(
                "parities/labels length differs from dim".into(),
            ));
        }
        if wire.field.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        let mut table =
            StructureTable::empty(wire.dim, wire.parities, wire.unit, wire.labels, wire.field);
        for (i, j, entries) in wire.products {
            if i >= wire.dim || j >= wire.dim {
                return Err(Error::DimensionMismatch(format!(
                    "product index ({i},{j}) out of range"
                )));
            }
            let mut parsed = Vec::new();
            for (k, text) in entries {
                parsed.push((k, wire.field.parse_scalar(&text)?));
            }
            table.set_product(i, j, parsed);
        }
        table.validate()?;
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Group algebra of Z/3 over Q: commutative and associative, hence Jordan
    /// as a purely even superalgebra.
    fn z3_group_algebra() -> StructureTable {
        let ctx = FieldContext::rational();
        let mut t = StructureTable::empty(
            3,
            vec![0, 0, 0],
            Some(0),
            vec!["g0".into(), "g1".into(), "g2".into()],
            ctx,
        );
        for i in 0..3 {
            for j in 0..3 {
                t.set_product(i, j, vec![((i + j) % 3, ctx.one())]);
            }
        }
        t
    }

    #[test]
    fn unit_multiplication() {
        let t = Arc::new(z3_group_algebra());
        t.validate().unwrap();
        let g1 = t.basis_element(1);
        let unit = t.basis_element(0);
        assert_eq!(multiply(&unit, &g1).unwrap(), g1);
        assert_eq!(multiply(&g1, &unit).unwrap(), g1);
    }

    #[test]
    fn commutative_associative_is_jordan() {
        let t = z3_group_algebra();
        assert!(t.check_supercommutative(10).passed());
        assert!(t.check_jordan_superidentity(10).passed());
        assert!(t.check_super_associator(10).passed());
    }

    #[test]
    fn trivial_one_dimensional_algebra() {
        let ctx = FieldContext::rational();
        let t = StructureTable::empty(1, vec![0], None, vec!["x".into()], ctx);
        assert!(t.check_supercommutative(10).passed());
        assert!(t.check_jordan_superidentity(10).passed());
    }

    #[test]
    fn flipped_sign_is_reported_at_the_tampered_pair() {
        let ctx = FieldContext::rational();
        // two odd generators with xy = -yx = u (u even): supercommutative
        let mut t = StructureTable::empty(
            3,
            vec![1, 1, 0],
            None,
            vec!["x".into(), "y".into(), "u".into()],
            ctx,
        );
        t.set_product(0, 1, vec![(2, ctx.one())]);
        t.set_product(1, 0, vec![(2, ctx.one())]); // should be -1 for odd*odd
        let report = t.check_supercommutative(10);
        assert!(!report.passed());
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].inputs, vec!["x", "y"]);
    }

    #[test]
    fn table_mismatch_rejected() {
        let a = Arc::new(z3_group_algebra());
        let ctx = FieldContext::rational();
        let b = Arc::new(StructureTable::empty(
            1,
            vec![0],
            None,
            vec!["x".into()],
            ctx,
        ));
        let ea = a.basis_element(0);
        let eb = b.basis_element(0);
        assert!(matches!(multiply(&ea, &eb), Err(Error::TableMismatch)));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let t = z3_group_algebra();
        let text = t.to_json();
        let back = StructureTable::from_json(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn wrong_parity_entry_rejected_on_load() {
        let ctx = FieldContext::rational();
        let mut t = StructureTable::empty(2, vec![0, 1], None, vec!["a".into(), "b".into()], ctx);
        t.set_product(0, 0, vec![(1, ctx.one())]); // even*even landing on odd
        let text = t.to_json();
        assert!(matches!(
            StructureTable::from_json(&text),
            Err(Error::ParityViolation(_))
        ));
    }
}
