//! Finite-dimensional connected graded-commutative algebras over Q or F_p,
//! given by per-degree bases and structure constants: construction and
//! validation, tensor products with Koszul signs, augmentation-ideal powers,
//! nilpotency, and product-length sequences.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{Field, FieldError, Scalar};
use crate::linalg::RowSpace;
use crate::seq::Sequence;

pub type BasisRef = (u64, usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("generator degree {0} must be at least 2")]
    BadDegree(u64),
    #[error("even-degree exterior generator (degree {0}) needs characteristic 2")]
    SignClash(u64),
    #[error("odd-degree polynomial generator (degree {0}) needs characteristic 2")]
    BadParity(u64),
    #[error("truncation exponent {0} must be at least 2")]
    BadTruncation(u64),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("not connected: {0}")]
    NotConnected(String),
    #[error("unit law fails on {element}")]
    BadUnit { element: String },
    #[error("graded commutativity fails on ({x}, {y})")]
    NotCommutative { x: String, y: String },
    #[error("associativity fails on ({x}, {y}, {z})")]
    NotAssociative { x: String, y: String, z: String },
    #[error("bad multiplication table: {0}")]
    InvalidTable(String),
    #[error("algebra is truncated at degree {0}; the answer may change above it")]
    CapAmbiguous(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A connected graded-commutative algebra with basis and structure constants
/// recorded up to `top_degree`. When `truncated` is set, vanishing above the
/// top degree means "not recorded", not "zero", and the sequences computed
/// from the algebra carry a cap note instead of claiming infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    field: Field,
    top_degree: u64,
    basis: Vec<Vec<String>>,
    products: BTreeMap<(BasisRef, BasisRef), Vec<(usize, Scalar)>>,
    truncated: bool,
}

impl GradedAlgebra {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn top_degree(&self) -> u64 {
        self.top_degree
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn mark_truncated(mut self) -> GradedAlgebra {
        self.truncated = true;
        self
    }

    /// Forget everything above degree `d`. The caller decides whether the
    /// result should carry the truncation flag.
    pub fn truncate_to(mut self, d: u64) -> GradedAlgebra {
        if d >= self.top_degree {
            return self;
        }
        self.basis.truncate(d as usize + 1);
        self.products.retain(|((da, _), (db, _)), _| da + db <= d);
        self.top_degree = d;
        self
    }

    pub fn dim(&self, degree: u64) -> usize {
        self.basis.get(degree as usize).map_or(0, Vec::len)
    }

    pub fn basis_names(&self, degree: u64) -> &[String] {
        self.basis.get(degree as usize).map_or(&[], Vec::as_slice)
    }

    pub fn name(&self, r: BasisRef) -> &str {
        &self.basis[r.0 as usize][r.1]
    }

    pub fn positive_dim(&self) -> usize {
        (1..=self.top_degree).map(|d| self.dim(d)).sum()
    }

    /// Structure constants of a basis product, already truncated: pairs with
    /// degree sum above the top degree are zero.
    pub fn basis_product(&self, a: BasisRef, b: BasisRef) -> &[(usize, Scalar)] {
        self.products.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    /// Multiply a basis element into a dense vector of degree `deg_v`,
    /// producing a dense vector of degree `a.0 + deg_v` (empty above top).
    fn mul_basis_vec(&self, a: BasisRef, deg_v: u64, v: &[Scalar]) -> Vec<Scalar> {
        let target = a.0 + deg_v;
        if target > self.top_degree {
            return Vec::new();
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim(target)];
        for (j, c) in v.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            for (idx, s) in self.basis_product(a, (deg_v, j)) {
                let t = f.mul(c, s);
                out[*idx] = f.add(&out[*idx], &t);
            }
        }
        out
    }

    /// Multiply two dense homogeneous vectors.
    pub fn mul_vec(&self, deg_a: u64, a: &[Scalar], deg_b: u64, b: &[Scalar]) -> Vec<Scalar> {
        let target = deg_a + deg_b;
        if target > self.top_degree {
            return Vec::new();
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim(target)];
        for (i, ca) in a.iter().enumerate() {
            if f.is_zero(ca) {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if f.is_zero(cb) {
                    continue;
                }
                for (idx, s) in self.basis_product((deg_a, i), (deg_b, j)) {
                    let t = f.mul(&f.mul(ca, cb), s);
                    out[*idx] = f.add(&out[*idx], &t);
                }
            }
        }
        out
    }

    /// Check every structural invariant: connectedness, the unit law, graded
    /// commutativity and associativity below the truncation degree.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        if self.dim(0) != 1 {
            return Err(AlgebraError::NotConnected(format!(
                "degree 0 must be one-dimensional, found {} elements",
                self.dim(0)
            )));
        }
        if self.dim(1) != 0 {
            return Err(AlgebraError::NotConnected(
                "degree 1 must be empty (simply-connected convention)".into(),
            ));
        }
        let f = &self.field;
        let unit: BasisRef = (0, 0);
        let refs: Vec<BasisRef> = (0..=self.top_degree)
            .flat_map(|d| (0..self.dim(d)).map(move |i| (d, i)))
            .collect();
        // unit law
        for &r in &refs {
            for prod in [self.basis_product(unit, r), self.basis_product(r, unit)] {
                let ok = prod.len() == 1 && prod[0].0 == r.1 && prod[0].1 == f.one();
                if !ok {
                    return Err(AlgebraError::BadUnit { element: self.name(r).to_string() });
                }
            }
        }
        // graded commutativity: y*x = (-1)^{|x||y|} x*y
        for &x in &refs {
            for &y in &refs {
                if x.0 + y.0 > self.top_degree {
                    continue;
                }
                let xy = self.dense(x.0 + y.0, self.basis_product(x, y));
                let yx = self.dense(x.0 + y.0, self.basis_product(y, x));
                let expect: Vec<Scalar> = if x.0 % 2 == 1 && y.0 % 2 == 1 {
                    xy.iter().map(|c| f.neg(c)).collect()
                } else {
                    xy
                };
                if yx != expect {
                    return Err(AlgebraError::NotCommutative {
                        x: self.name(x).to_string(),
                        y: self.name(y).to_string(),
                    });
                }
            }
        }
        // associativity on triples landing below the truncation degree
        for &x in &refs {
            for &y in &refs {
                for &z in &refs {
                    let total = x.0 + y.0 + z.0;
                    if total > self.top_degree {
                        continue;
                    }
                    let xy = self.dense(x.0 + y.0, self.basis_product(x, y));
                    let yz = self.dense(y.0 + z.0, self.basis_product(y, z));
                    let lhs = {
                        let mut acc = vec![f.zero(); self.dim(total)];
                        for (j, c) in xy.iter().enumerate() {
                            if f.is_zero(c) {
                                continue;
                            }
                            for (idx, s) in self.basis_product((x.0 + y.0, j), z) {
                                let t = f.mul(c, s);
                                acc[*idx] = f.add(&acc[*idx], &t);
                            }
                        }
                        acc
                    };
                    let rhs = {
                        let mut acc = vec![f.zero(); self.dim(total)];
                        for (j, c) in yz.iter().enumerate() {
                            if f.is_zero(c) {
                                continue;
                            }
                            for (idx, s) in self.basis_product(x, (y.0 + z.0, j)) {
                                let t = f.mul(c, s);
                                acc[*idx] = f.add(&acc[*idx], &t);
                            }
                        }
                        acc
                    };
                    if lhs != rhs {
                        return Err(AlgebraError::NotAssociative {
                            x: self.name(x).to_string(),
                            y: self.name(y).to_string(),
                            z: self.name(z).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn dense(&self, degree: u64, sparse: &[(usize, Scalar)]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim(degree)];
        for (i, c) in sparse {
            out[*i] = self.field.add(&out[*i], c);
        }
        out
    }

    /// Row-reduced bases of the graded pieces of every augmentation-ideal
    /// power up to `max_k`.
    pub fn ideal_powers(&self, max_k: u64) -> IdealPowerTable {
        let f = self.field;
        let d = self.top_degree as usize;
        let mut powers: Vec<Vec<RowSpace>> = Vec::new();
        for k in 1..=max_k {
            let mut layer: Vec<RowSpace> = Vec::with_capacity(d + 1);
            for n in 0..=d as u64 {
                let mut space = RowSpace::new(f, self.dim(n));
                if k == 1 {
                    if n >= 1 {
                        for i in 0..self.dim(n) {
                            let mut row = vec![f.zero(); self.dim(n)];
                            row[i] = f.one();
                            space.insert(row);
                        }
                    }
                } else {
                    let prev = &powers[k as usize - 2];
                    for a in 2..n {
                        for i in 0..self.dim(a) {
                            for w in prev[(n - a) as usize].rows() {
                                let prod = self.mul_basis_vec((a, i), n - a, w);
                                if !prod.is_empty() {
                                    space.insert(prod);
                                }
                            }
                        }
                    }
                }
                layer.push(space);
            }
            let empty = layer.iter().all(RowSpace::is_zero);
            powers.push(layer);
            if empty {
                break;
            }
        }
        IdealPowerTable { powers }
    }

    /// sigma_A(k): least degree holding a nontrivial k-fold product of
    /// augmentation-ideal elements. A truncated algebra yields a cap note
    /// where a witness would have to live above the recorded range.
    pub fn product_length_sequence(&self, index_cap: u64) -> Sequence {
        let table = self.ideal_powers(index_cap);
        let mut finite = vec![0u64];
        for k in 1..=index_cap {
            match table.first_nonzero_degree(k) {
                Some(n) => finite.push(n),
                None => {
                    let seq = Sequence::from_finite(finite).expect("sigma_A is strictly increasing");
                    return if self.truncated { seq.with_cap_note(self.top_degree) } else { seq };
                }
            }
        }
        // the index cap cut the computation short: later values exceed the
        // last one we saw, and nothing stronger is known
        let last = *finite.last().unwrap();
        let seq = Sequence::from_finite(finite).expect("sigma_A is strictly increasing");
        seq.with_cap_note(last)
    }

    /// Greatest k with a nonzero k-th augmentation-ideal power. Undecidable
    /// for truncated algebras, which may have products above the cap.
    pub fn nilpotency(&self) -> Result<u64, AlgebraError> {
        if self.truncated {
            return Err(AlgebraError::CapAmbiguous(self.top_degree));
        }
        // nil is bounded by top_degree / 2 since generators sit in degree >= 2
        let table = self.ideal_powers(self.top_degree / 2 + 1);
        Ok(table.nonzero_count())
    }
}

/// Graded pieces of augmentation-ideal powers: `space(k, n)` is a row-reduced
/// basis of the degree-n part of the k-th power.
#[derive(Debug, Clone)]
pub struct IdealPowerTable {
    powers: Vec<Vec<RowSpace>>,
}

impl IdealPowerTable {
    pub fn max_k(&self) -> u64 {
        self.powers.len() as u64
    }

    pub fn space(&self, k: u64, n: u64) -> Option<&RowSpace> {
        self.powers.get(k as usize - 1)?.get(n as usize)
    }

    pub fn first_nonzero_degree(&self, k: u64) -> Option<u64> {
        let layer = self.powers.get(k as usize - 1)?;
        layer.iter().position(|s| !s.is_zero()).map(|n| n as u64)
    }

    fn nonzero_count(&self) -> u64 {
        self.powers
            .iter()
            .take_while(|layer| layer.iter().any(|s| !s.is_zero()))
            .count() as u64
    }
}

fn generator_letter(i: usize) -> String {
    const LETTERS: [char; 9] = ['x', 'y', 'z', 'u', 'v', 'w', 'a', 'b', 'c'];
    if i < LETTERS.len() {
        LETTERS[i].to_string()
    } else {
        format!("g{i}")
    }
}

/// Shared monomial-algebra builder: generators with a degree and an exponent
/// cap (2 for exterior generators), Koszul signs from degree parity.
fn monomial_algebra(field: Field, gens: &[(String, u64, u64)]) -> GradedAlgebra {
    let top_degree: u64 = gens.iter().map(|(_, d, c)| (c - 1) * d).sum();
    // enumerate exponent vectors in lexicographic order
    let mut monomials: Vec<Vec<u64>> = vec![vec![]];
    for (_, _, cap) in gens {
        monomials = monomials
            .iter()
            .flat_map(|m| {
                (0..*cap).map(move |e| {
                    let mut m = m.clone();
                    m.push(e);
                    m
                })
            })
            .collect();
    }
    let degree_of = |m: &[u64]| -> u64 { m.iter().zip(gens).map(|(e, (_, d, _))| e * d).sum() };
    let name_of = |m: &[u64]| -> String {
        let mut s = String::new();
        for (e, (name, _, _)) in m.iter().zip(gens) {
            match e {
                0 => {}
                1 => s.push_str(name),
                _ => s.push_str(&format!("{name}^{e}")),
            }
        }
        if s.is_empty() {
            "1".into()
        } else {
            s
        }
    };

    let mut basis: Vec<Vec<String>> = vec![Vec::new(); top_degree as usize + 1];
    let mut index: BTreeMap<Vec<u64>, BasisRef> = BTreeMap::new();
    for m in &monomials {
        let d = degree_of(m);
        let slot = &mut basis[d as usize];
        index.insert(m.clone(), (d, slot.len()));
        slot.push(name_of(m));
    }

    let char2 = field.characteristic() == 2;
    let mut products = BTreeMap::new();
    for ma in &monomials {
        for mb in &monomials {
            let (da, db) = (degree_of(ma), degree_of(mb));
            if da + db > top_degree {
                continue;
            }
            let sum: Vec<u64> = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
            if sum.iter().zip(gens).any(|(e, (_, _, cap))| e >= cap) {
                continue; // exponent hit its cap: the product is zero
            }
            // Koszul sign: each odd generator of mb crossing an odd generator
            // of ma with a larger index flips the sign
            let mut flips = 0u64;
            if !char2 {
                for (i, (ea, (_, di, _))) in ma.iter().zip(gens).enumerate() {
                    if di % 2 == 0 || *ea == 0 {
                        continue;
                    }
                    for (j, (eb, (_, dj, _))) in mb.iter().zip(gens).enumerate() {
                        if j < i && dj % 2 == 1 && *eb == 1 {
                            flips += ea * eb;
                        }
                    }
                }
            }
            let coeff = if flips % 2 == 1 { field.from_i64(-1) } else { field.one() };
            let target = index[&sum];
            products.insert(
                ((index[ma.as_slice()]), (index[mb.as_slice()])),
                vec![(target.1, coeff)],
            );
        }
    }

    GradedAlgebra { field, top_degree, basis, products, truncated: false }
}

/// Exterior algebra on generators of the given degrees. Over characteristic
/// 2 any degrees are allowed and squares vanish by construction; otherwise
/// the degrees must be odd.
pub fn exterior_algebra(field: Field, degrees: &[u64]) -> Result<GradedAlgebra, AlgebraError> {
    for &d in degrees {
        if d < 2 {
            return Err(AlgebraError::BadDegree(d));
        }
        if d % 2 == 0 && field.characteristic() != 2 {
            return Err(AlgebraError::SignClash(d));
        }
    }
    let gens: Vec<(String, u64, u64)> = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| (format!("{}{}", generator_letter(i), d), d, 2))
        .collect();
    Ok(monomial_algebra(field, &gens))
}

/// Truncated polynomial algebra: each generator `(degree, t)` satisfies
/// x^t = 0. Odd-degree generators require characteristic 2.
pub fn truncated_polynomial_algebra(
    field: Field,
    gens: &[(u64, u64)],
) -> Result<GradedAlgebra, AlgebraError> {
    for &(d, t) in gens {
        if d < 2 {
            return Err(AlgebraError::BadDegree(d));
        }
        if t < 2 {
            return Err(AlgebraError::BadTruncation(t));
        }
        if d % 2 == 1 && field.characteristic() != 2 {
            return Err(AlgebraError::BadParity(d));
        }
    }
    let named: Vec<(String, u64, u64)> = gens
        .iter()
        .enumerate()
        .map(|(i, &(d, t))| (format!("{}{}", generator_letter(i), d), d, t))
        .collect();
    Ok(monomial_algebra(field, &named))
}

/// Tensor product with the Koszul sign (a(x)b)(a'(x)b') = (-1)^{|b||a'|} aa' (x) bb'.
pub fn tensor(a: &GradedAlgebra, b: &GradedAlgebra) -> Result<GradedAlgebra, AlgebraError> {
    if a.field != b.field {
        return Err(AlgebraError::FieldMismatch);
    }
    let field = a.field;
    let top_degree = a.top_degree + b.top_degree;
    let truncated = a.truncated || b.truncated;

    // basis of degree n: pairs (x in degree i of a, y in degree n - i of b),
    // ordered by i then by the factor indices
    let mut basis: Vec<Vec<String>> = vec![Vec::new(); top_degree as usize + 1];
    let mut index: BTreeMap<(BasisRef, BasisRef), BasisRef> = BTreeMap::new();
    for da in 0..=a.top_degree {
        for ia in 0..a.dim(da) {
            for db in 0..=b.top_degree {
                for ib in 0..b.dim(db) {
                    let d = da + db;
                    let slot = &mut basis[d as usize];
                    index.insert(((da, ia), (db, ib)), (d, slot.len()));
                    slot.push(format!("{}(x){}", a.name((da, ia)), b.name((db, ib))));
                }
            }
        }
    }

    let pairs: Vec<(BasisRef, BasisRef)> = index.keys().cloned().collect();
    let mut products = BTreeMap::new();
    for &(xa, xb) in &pairs {
        for &(ya, yb) in &pairs {
            let total = xa.0 + xb.0 + ya.0 + yb.0;
            if total > top_degree {
                continue;
            }
            let aa = a.basis_product(xa, ya);
            let bb = b.basis_product(xb, yb);
            if aa.is_empty() || bb.is_empty() {
                continue;
            }
            let sign_flip = field.characteristic() != 2 && xb.0 % 2 == 1 && ya.0 % 2 == 1;
            let mut entry: Vec<(usize, Scalar)> = Vec::new();
            for (i, ca) in aa {
                for (j, cb) in bb {
                    let mut c = field.mul(ca, cb);
                    if sign_flip {
                        c = field.neg(&c);
                    }
                    let target = index[&((xa.0 + ya.0, *i), (xb.0 + yb.0, *j))];
                    entry.push((target.1, c));
                }
            }
            entry.retain(|(_, c)| !field.is_zero(c));
            if !entry.is_empty() {
                products.insert(((index[&(xa, xb)]), (index[&(ya, yb)])), entry);
            }
        }
    }

    Ok(GradedAlgebra { field, top_degree, basis, products, truncated })
}

/// Identify the units of several algebras, with all cross-summand positive
/// products zero: the cohomology of a wedge.
pub fn wedge_sum(parts: &[GradedAlgebra]) -> Result<GradedAlgebra, AlgebraError> {
    let Some(first) = parts.first() else {
        return Err(AlgebraError::InvalidTable("wedge of no summands".into()));
    };
    let field = first.field;
    if parts.iter().any(|p| p.field != field) {
        return Err(AlgebraError::FieldMismatch);
    }
    let top_degree = parts.iter().map(|p| p.top_degree).max().unwrap();
    let truncated = parts.iter().any(|p| p.truncated);

    let mut basis: Vec<Vec<String>> = vec![Vec::new(); top_degree as usize + 1];
    basis[0].push("1".into());
    // relocation[s] maps a summand basis ref to its ref in the sum
    let mut relocation: Vec<BTreeMap<BasisRef, BasisRef>> = Vec::new();
    for (s, part) in parts.iter().enumerate() {
        let mut map = BTreeMap::new();
        map.insert((0, 0), (0, 0));
        for d in 1..=part.top_degree {
            for i in 0..part.dim(d) {
                let slot = &mut basis[d as usize];
                map.insert((d, i), (d, slot.len()));
                slot.push(format!("s{}:{}", s, part.name((d, i))));
            }
        }
        relocation.push(map);
    }

    let mut products: BTreeMap<(BasisRef, BasisRef), Vec<(usize, Scalar)>> = BTreeMap::new();
    products.insert(((0, 0), (0, 0)), vec![(0, field.one())]);
    for (s, part) in parts.iter().enumerate() {
        let map = &relocation[s];
        for d in 1..=part.top_degree {
            for i in 0..part.dim(d) {
                let r = map[&(d, i)];
                products.insert(((0, 0), r), vec![(r.1, field.one())]);
                products.insert((r, (0, 0)), vec![(r.1, field.one())]);
                for e in 1..=part.top_degree {
                    for j in 0..part.dim(e) {
                        if d + e > top_degree {
                            continue;
                        }
                        let prod = part.basis_product((d, i), (e, j));
                        if prod.is_empty() {
                            continue;
                        }
                        let entry: Vec<(usize, Scalar)> = prod
                            .iter()
                            .map(|(idx, c)| (map[&(d + e, *idx)].1, c.clone()))
                            .collect();
                        products.insert((r, map[&(e, j)]), entry);
                    }
                }
            }
        }
    }

    Ok(GradedAlgebra { field, top_degree, basis, products, truncated })
}

/// Build an algebra from an explicit multiplication table and validate it.
/// Listing one order of a product is enough: the reverse is filled in with
/// the Koszul sign. Unit rows must be listed.
pub fn algebra_from_table(
    field: Field,
    top_degree: u64,
    basis_by_degree: &[(u64, Vec<String>)],
    table: &[(String, String, Vec<(String, Scalar)>)],
    truncated: bool,
) -> Result<GradedAlgebra, AlgebraError> {
    let mut basis: Vec<Vec<String>> = vec![Vec::new(); top_degree as usize + 1];
    let mut lookup: BTreeMap<String, BasisRef> = BTreeMap::new();
    for (degree, names) in basis_by_degree {
        if *degree > top_degree {
            return Err(AlgebraError::InvalidTable(format!(
                "basis degree {degree} exceeds top degree {top_degree}"
            )));
        }
        for name in names {
            if lookup.contains_key(name) {
                return Err(AlgebraError::InvalidTable(format!("duplicate basis name {name:?}")));
            }
            let slot = &mut basis[*degree as usize];
            lookup.insert(name.clone(), (*degree, slot.len()));
            slot.push(name.clone());
        }
    }
    let mut products: BTreeMap<(BasisRef, BasisRef), Vec<(usize, Scalar)>> = BTreeMap::new();
    for (xn, yn, value) in table {
        let x = *lookup
            .get(xn)
            .ok_or_else(|| AlgebraError::InvalidTable(format!("unknown element {xn:?}")))?;
        let y = *lookup
            .get(yn)
            .ok_or_else(|| AlgebraError::InvalidTable(format!("unknown element {yn:?}")))?;
        let target_degree = x.0 + y.0;
        if target_degree > top_degree && !value.is_empty() {
            return Err(AlgebraError::InvalidTable(format!(
                "product {xn}*{yn} lands above the top degree"
            )));
        }
        let mut entry = Vec::new();
        for (name, coeff) in value {
            let r = *lookup
                .get(name)
                .ok_or_else(|| AlgebraError::InvalidTable(format!("unknown element {name:?}")))?;
            if r.0 != target_degree {
                return Err(AlgebraError::InvalidTable(format!(
                    "product {xn}*{yn} has degree {target_degree} but {name} has degree {}",
                    r.0
                )));
            }
            if !field.is_zero(coeff) {
                entry.push((r.1, coeff.clone()));
            }
        }
        if products.insert((x, y), entry).is_some() {
            return Err(AlgebraError::InvalidTable(format!("product {xn}*{yn} listed twice")));
        }
    }
    // complete unlisted reverses by graded commutativity
    let listed: Vec<(BasisRef, BasisRef)> = products.keys().cloned().collect();
    for (x, y) in listed {
        if x != y && !products.contains_key(&(y, x)) {
            let flip = field.characteristic() != 2 && x.0 % 2 == 1 && y.0 % 2 == 1;
            let entry: Vec<(usize, Scalar)> = products[&(x, y)]
                .iter()
                .map(|(i, c)| (*i, if flip { field.neg(c) } else { c.clone() }))
                .collect();
            products.insert((y, x), entry);
        }
    }
    products.retain(|_, v| !v.is_empty());
    let algebra = GradedAlgebra { field, top_degree, basis, products, truncated };
    algebra.validate()?;
    Ok(algebra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{SeqValue, Sequence};

    fn q() -> Field {
        Field::Rational
    }

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn seq(vals: &[u64]) -> Sequence {
        Sequence::from_finite(vals.to_vec()).unwrap()
    }

    #[test]
    fn exterior_basics() {
        let a = exterior_algebra(q(), &[3, 7]).unwrap();
        assert_eq!(a.top_degree(), 10);
        assert_eq!((0..=10).map(|d| a.dim(d)).sum::<usize>(), 4);
        assert_eq!(a.basis_names(10), ["x3y7"]);
        a.validate().unwrap();

        let b = exterior_algebra(q(), &[3, 7, 11]).unwrap();
        assert_eq!(b.top_degree(), 21);
        assert_eq!((0..=21).map(|d| b.dim(d)).sum::<usize>(), 8);
        b.validate().unwrap();

        let c = exterior_algebra(q(), &[5]).unwrap();
        assert_eq!((c.dim(0), c.dim(5)), (1, 1));

        assert_eq!(exterior_algebra(q(), &[1]), Err(AlgebraError::BadDegree(1)));
        assert_eq!(exterior_algebra(q(), &[4]), Err(AlgebraError::SignClash(4)));
        assert!(exterior_algebra(f2(), &[4]).is_ok());
    }

    #[test]
    fn truncated_poly_basics() {
        // H^*(CP^3)-shaped: one degree-2 generator truncated at power 4
        let a = truncated_polynomial_algebra(q(), &[(2, 4)]).unwrap();
        assert_eq!(a.top_degree(), 6);
        assert_eq!((0..=6).map(|d| a.dim(d)).sum::<usize>(), 4);
        a.validate().unwrap();

        let b = truncated_polynomial_algebra(f2(), &[(3, 4)]).unwrap();
        assert_eq!(b.top_degree(), 9);
        assert_eq!(b.basis_names(9), ["x3^3"]);
        b.validate().unwrap();

        let c = truncated_polynomial_algebra(q(), &[(4, 2)]).unwrap();
        assert_eq!((0..=4).map(|d| c.dim(d)).sum::<usize>(), 2);

        assert_eq!(
            truncated_polynomial_algebra(q(), &[(3, 3)]),
            Err(AlgebraError::BadParity(3))
        );
        assert_eq!(
            truncated_polynomial_algebra(q(), &[(2, 1)]),
            Err(AlgebraError::BadTruncation(1))
        );
    }

    #[test]
    fn koszul_sign_in_tensor() {
        let a = exterior_algebra(q(), &[3]).unwrap();
        let t = tensor(&a, &a).unwrap();
        t.validate().unwrap();
        assert_eq!(t.dim(6), 1);
        // (x(x)1)(1(x)x) = x(x)x while (1(x)x)(x(x)1) = -x(x)x
        let names = t.basis_names(3);
        let x_1 = (3, names.iter().position(|n| n == "x3(x)1").unwrap());
        let one_x = (3, names.iter().position(|n| n == "1(x)x3").unwrap());
        assert_eq!(t.basis_product(x_1, one_x), [(0, q().one())]);
        assert_eq!(t.basis_product(one_x, x_1), [(0, q().from_i64(-1))]);
        // squares of odd classes vanish
        assert!(t.basis_product(x_1, x_1).is_empty());
    }

    #[test]
    fn tensor_with_unit_is_identity_like() {
        let a = exterior_algebra(q(), &[3, 5]).unwrap();
        let unit = exterior_algebra(q(), &[]).unwrap();
        let t = tensor(&a, &unit).unwrap();
        assert_eq!(t.top_degree(), a.top_degree());
        for d in 0..=t.top_degree() {
            assert_eq!(t.dim(d), a.dim(d));
        }
        assert_eq!(
            t.product_length_sequence(8),
            a.product_length_sequence(8)
        );
    }

    #[test]
    fn g2_mod2_cohomology() {
        let a = truncated_polynomial_algebra(f2(), &[(3, 4)]).unwrap();
        let b = exterior_algebra(f2(), &[5]).unwrap();
        let g2 = tensor(&a, &b).unwrap();
        g2.validate().unwrap();
        assert_eq!(g2.top_degree(), 14);
        assert_eq!(g2.product_length_sequence(8), seq(&[0, 3, 6, 9, 14]));
        assert_eq!(g2.nilpotency().unwrap(), 4);
        // fourth power survives in degree 14, fifth vanishes
        let table = g2.ideal_powers(6);
        assert_eq!(table.space(4, 14).unwrap().rank(), 1);
        assert!(table.first_nonzero_degree(5).is_none());
    }

    #[test]
    fn product_length_golden_values() {
        let m = exterior_algebra(q(), &[3, 3, 5]).unwrap();
        assert_eq!(m.product_length_sequence(8), seq(&[0, 3, 6, 11]));

        let sp3 = exterior_algebra(q(), &[3, 7, 11]).unwrap();
        assert_eq!(sp3.product_length_sequence(8), seq(&[0, 3, 10, 21]));

        let sp2 = exterior_algebra(q(), &[3, 7]).unwrap();
        assert_eq!(sp2.product_length_sequence(8), seq(&[0, 3, 10]));
        assert_eq!(sp2.nilpotency().unwrap(), 2);

        let point = exterior_algebra(q(), &[]).unwrap();
        assert_eq!(point.product_length_sequence(8), seq(&[0]));
        assert_eq!(point.nilpotency().unwrap(), 0);
    }

    #[test]
    fn ideal_powers_nest_and_first_power_is_everything() {
        let g2 = tensor(
            &truncated_polynomial_algebra(f2(), &[(3, 4)]).unwrap(),
            &exterior_algebra(f2(), &[5]).unwrap(),
        )
        .unwrap();
        let table = g2.ideal_powers(5);
        for n in 1..=g2.top_degree() {
            let full = table.space(1, n).unwrap();
            assert_eq!(full.rank(), g2.dim(n));
            for k in 2..=table.max_k() {
                let smaller = table.space(k, n).unwrap();
                let bigger = table.space(k - 1, n).unwrap();
                assert!(bigger.contains_space(smaller));
            }
        }
    }

    fn ex1b_table() -> GradedAlgebra {
        let one = Field::Rational.one();
        algebra_from_table(
            q(),
            11,
            &[
                (0, vec!["1".into()]),
                (3, vec!["x".into(), "y".into()]),
                (8, vec!["u".into(), "v".into()]),
                (11, vec!["w".into()]),
            ],
            &[
                ("1".into(), "1".into(), vec![("1".into(), one.clone())]),
                ("1".into(), "x".into(), vec![("x".into(), one.clone())]),
                ("1".into(), "y".into(), vec![("y".into(), one.clone())]),
                ("1".into(), "u".into(), vec![("u".into(), one.clone())]),
                ("1".into(), "v".into(), vec![("v".into(), one.clone())]),
                ("1".into(), "w".into(), vec![("w".into(), one.clone())]),
                ("x".into(), "v".into(), vec![("w".into(), one.clone())]),
                ("y".into(), "u".into(), vec![("w".into(), Field::Rational.from_i64(-1))]),
            ],
            false,
        )
        .unwrap()
    }

    #[test]
    fn table_algebra_ex1b() {
        let a = ex1b_table();
        assert_eq!(a.product_length_sequence(8), seq(&[0, 3, 11]));
        assert_eq!(a.nilpotency().unwrap(), 2);
    }

    #[test]
    fn table_algebra_rejects_sign_violation() {
        let one = Field::Rational.one();
        // x and y have odd degrees 3 and 5, so y*x must be -x*y
        let err = algebra_from_table(
            q(),
            8,
            &[
                (0, vec!["1".into()]),
                (3, vec!["x".into()]),
                (5, vec!["y".into()]),
                (8, vec!["w".into()]),
            ],
            &[
                ("1".into(), "1".into(), vec![("1".into(), one.clone())]),
                ("1".into(), "x".into(), vec![("x".into(), one.clone())]),
                ("1".into(), "y".into(), vec![("y".into(), one.clone())]),
                ("1".into(), "w".into(), vec![("w".into(), one.clone())]),
                ("x".into(), "y".into(), vec![("w".into(), one.clone())]),
                ("y".into(), "x".into(), vec![("w".into(), one.clone())]),
            ],
            false,
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::NotCommutative { .. }));
    }

    #[test]
    fn table_algebra_rejects_missing_unit_row() {
        let one = Field::Rational.one();
        let err = algebra_from_table(
            q(),
            3,
            &[(0, vec!["1".into()]), (3, vec!["x".into()])],
            &[("1".into(), "1".into(), vec![("1".into(), one)])],
            false,
        )
        .unwrap_err();
        assert_eq!(err, AlgebraError::BadUnit { element: "x".into() });
    }

    #[test]
    fn truncated_algebra_reports_unknown_not_infinity() {
        // CP^inf recorded up to degree 8: x, x^2, x^3, x^4
        let a = truncated_polynomial_algebra(q(), &[(2, 5)]).unwrap().mark_truncated();
        let s = a.product_length_sequence(8);
        assert_eq!(s.finite_values(), &[0, 2, 4, 6, 8]);
        assert_eq!(s.cap_note(), Some(8));
        assert_eq!(s.at(5), SeqValue::UnknownAbove(8));
        assert_eq!(a.nilpotency(), Err(AlgebraError::CapAmbiguous(8)));
    }

    #[test]
    fn sigma_is_superadditive() {
        for alg in [
            exterior_algebra(q(), &[3, 7, 11]).unwrap(),
            exterior_algebra(q(), &[3, 3, 5]).unwrap(),
            tensor(
                &truncated_polynomial_algebra(f2(), &[(3, 4)]).unwrap(),
                &exterior_algebra(f2(), &[5]).unwrap(),
            )
            .unwrap(),
        ] {
            let s = alg.product_length_sequence(10);
            let v = s.finite_values();
            for k in 1..v.len() {
                for l in 1..v.len() {
                    if k + l < v.len() {
                        assert!(v[k + l] >= v[k] + v[l]);
                    }
                }
            }
        }
    }
}
