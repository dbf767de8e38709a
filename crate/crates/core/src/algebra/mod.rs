//! Finite O-free algebras by structure constants, symmetrising forms and the
//! standard constructions.

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::arith::{kernel_lattice, unit_vec, Mat, Q};
use crate::Error;

/// How a basis element is reached from the algebra generators, so that module
/// actions can be expanded from generator matrices alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Word {
    /// The basis element is the unit.
    Unit,
    /// The basis element is the generator at this position of `gens`.
    Gen(usize),
    /// x_k = g·x_j (left words) or x_k = x_j·g (right words), g = gens[.0].
    Mul(usize, usize),
}

/// Algebra with basis x_0..x_{n-1} and products stored sparsely.
#[derive(Debug)]
pub struct Algebra {
    pub p: u64,
    pub n: usize,
    pub name: String,
    prod: Vec<Vec<(usize, Q)>>,
    pub unit: Vec<Q>,
    /// Basis indices of the O-algebra generators used for module actions.
    pub gens: Vec<usize>,
    left_words: Vec<Word>,
    right_words: Vec<Word>,
    fingerprint: u64,
    left_reg: Vec<OnceLock<Mat>>,
    right_reg: Vec<OnceLock<Mat>>,
}

fn single_term(v: &[(usize, Q)]) -> Option<usize> {
    match v {
        [(k, c)] if c.is_one() => Some(*k),
        _ => None,
    }
}

impl Algebra {
    /// Build from sparse products; `gens` seeds the generator set, which is
    /// completed so that every basis element has a left and right word.
    pub fn from_sparse(
        p: u64,
        n: usize,
        name: impl Into<String>,
        prod: Vec<Vec<(usize, Q)>>,
        unit: Vec<Q>,
        gens: Vec<usize>,
    ) -> Algebra {
        assert_eq!(prod.len(), n * n);
        let prod: Vec<Vec<(usize, Q)>> = prod
            .into_iter()
            .map(|v| {
                let mut acc = vec![Q::zero(); 0];
                let mut idx: Vec<usize> = Vec::new();
                for (k, c) in v {
                    if let Some(pos) = idx.iter().position(|&i| i == k) {
                        acc[pos] += &c;
                    } else {
                        idx.push(k);
                        acc.push(c);
                    }
                }
                let mut out: Vec<(usize, Q)> =
                    idx.into_iter().zip(acc).filter(|(_, c)| !c.is_zero()).collect();
                out.sort_by_key(|x| x.0);
                out
            })
            .collect();
        let mut h = DefaultHasher::new();
        p.hash(&mut h);
        n.hash(&mut h);
        prod.hash(&mut h);
        unit.hash(&mut h);
        let fingerprint = h.finish();
        let mut a = Algebra {
            p,
            n,
            name: name.into(),
            prod,
            unit,
            gens,
            left_words: vec![],
            right_words: vec![],
            fingerprint,
            left_reg: (0..n).map(|_| OnceLock::new()).collect(),
            right_reg: (0..n).map(|_| OnceLock::new()).collect(),
        };
        a.build_words();
        a
    }

    pub fn from_dense(p: u64, c: &[Vec<Vec<Q>>], unit: Vec<Q>, name: &str) -> Algebra {
        let n = c.len();
        let mut prod = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                prod.push(
                    c[i][j].iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect(),
                );
            }
        }
        Algebra::from_sparse(p, n, name, prod, unit, vec![])
    }

    fn unit_index(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.n).filter(|&i| !self.unit[i].is_zero()).collect();
        match nz.as_slice() {
            [k] if self.unit[*k].is_one() => Some(*k),
            _ => None,
        }
    }

    fn bfs(&self, left: bool) -> Vec<Option<Word>> {
        let n = self.n;
        let mut words: Vec<Option<Word>> = vec![None; n];
        let mut queue = VecDeque::new();
        if let Some(u) = self.unit_index() {
            words[u] = Some(Word::Unit);
            queue.push_back(u);
        }
        for (pos, &g) in self.gens.iter().enumerate() {
            if words[g].is_none() {
                words[g] = Some(Word::Gen(pos));
                queue.push_back(g);
            }
        }
        while let Some(j) = queue.pop_front() {
            for (pos, &g) in self.gens.iter().enumerate() {
                let pr = if left { self.product_of(g, j) } else { self.product_of(j, g) };
                if let Some(k) = single_term(pr) {
                    if words[k].is_none() {
                        words[k] = Some(Word::Mul(pos, j));
                        queue.push_back(k);
                    }
                }
            }
        }
        words
    }

    fn build_words(&mut self) {
        loop {
            let l = self.bfs(true);
            let r = self.bfs(false);
            let missing = (0..self.n).find(|&i| l[i].is_none() || r[i].is_none());
            match missing {
                Some(i) => self.gens.push(i),
                None => {
                    // keep at least one generator so module actions determine the rank
                    if self.gens.is_empty() {
                        self.gens.push(0);
                    }
                    self.left_words = l.into_iter().map(Option::unwrap).collect();
                    self.right_words = r.into_iter().map(Option::unwrap).collect();
                    return;
                }
            }
        }
    }

    pub fn left_words(&self) -> &[Word] {
        &self.left_words
    }
    pub fn right_words(&self) -> &[Word] {
        &self.right_words
    }
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }
    pub fn same_structure(&self, o: &Algebra) -> bool {
        self.fingerprint == o.fingerprint && self.n == o.n && self.prod == o.prod
    }

    /// Sparse product x_i·x_j.
    pub fn product_of(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.prod[i * self.n + j]
    }
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Q {
        self.product_of(i, j).iter().find(|x| x.0 == k).map_or(Q::zero(), |x| x.1.clone())
    }
    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.product_of(i, j) {
                    out[*k] += &(&xy * c);
                }
            }
        }
        out
    }
    pub fn basis(&self, i: usize) -> Vec<Q> {
        unit_vec(self.n, i)
    }

    /// Matrix of left multiplication by x_i: column j holds x_i·x_j.
    pub fn left_regular(&self, i: usize) -> &Mat {
        self.left_reg[i].get_or_init(|| {
            let mut m = Mat::zeros(self.n, self.n);
            for j in 0..self.n {
                for (k, c) in self.product_of(i, j) {
                    m[(*k, j)] = c.clone();
                }
            }
            m
        })
    }
    /// Matrix of right multiplication by x_i: column j holds x_j·x_i.
    pub fn right_regular(&self, i: usize) -> &Mat {
        self.right_reg[i].get_or_init(|| {
            let mut m = Mat::zeros(self.n, self.n);
            for j in 0..self.n {
                for (k, c) in self.product_of(j, i) {
                    m[(*k, j)] = c.clone();
                }
            }
            m
        })
    }
    pub fn left_mult(&self, a: &[Q]) -> Mat {
        let mut m = Mat::zeros(self.n, self.n);
        for (i, c) in a.iter().enumerate() {
            m.axpy(c, self.left_regular(i));
        }
        m
    }
    pub fn right_mult(&self, a: &[Q]) -> Mat {
        let mut m = Mat::zeros(self.n, self.n);
        for (i, c) in a.iter().enumerate() {
            m.axpy(c, self.right_regular(i));
        }
        m
    }

    /// Opposite algebra on the same basis.
    pub fn opposite(&self) -> Algebra {
        let n = self.n;
        let mut prod = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                prod.push(self.product_of(j, i).to_vec());
            }
        }
        Algebra::from_sparse(self.p, n, format!("{}^op", self.name), prod, self.unit.clone(), self.gens.clone())
    }

    /// Center as a saturated sublattice (columns).
    pub fn center(&self) -> Mat {
        let blocks: Vec<Mat> = (0..self.n).map(|i| self.left_regular(i).sub(self.right_regular(i))).collect();
        let refs: Vec<&Mat> = blocks.iter().collect();
        kernel_lattice(&Mat::vstack(&refs), self.p)
    }

    pub fn is_central(&self, z: &[Q]) -> bool {
        (0..self.n).all(|i| {
            let x = self.basis(i);
            self.mul(&x, z) == self.mul(z, &x)
        })
    }
}

/// Outcome of a diagnostic check.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub ok: bool,
    pub violations: Vec<String>,
}

impl Report {
    fn from(violations: Vec<String>) -> Report {
        Report { ok: violations.is_empty(), violations }
    }
}

pub fn validate_algebra(a: &Algebra) -> Report {
    let n = a.n;
    let mut v = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for (_, c) in a.product_of(i, j) {
                if !c.is_integral(a.p) {
                    v.push(format!("structure constant c[{i}][{j}] not in O"));
                }
            }
        }
    }
    if a.unit.len() != n {
        v.push("unit has wrong length".into());
        return Report::from(v);
    }
    for i in 0..n {
        let x = a.basis(i);
        if a.mul(&a.unit, &x) != x || a.mul(&x, &a.unit) != x {
            v.push(format!("unit fails on x_{i}"));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let xy = a.product_of(i, j);
            for k in 0..n {
                let mut lhs = vec![Q::zero(); n];
                for (m, c) in xy {
                    for (t, d) in a.product_of(*m, k) {
                        lhs[*t] += &(c * d);
                    }
                }
                let mut rhs = vec![Q::zero(); n];
                for (m, c) in a.product_of(j, k) {
                    for (t, d) in a.product_of(i, *m) {
                        rhs[*t] += &(c * d);
                    }
                }
                if lhs != rhs {
                    v.push(format!("associativity fails at ({i},{j},{k})"));
                }
            }
        }
    }
    Report::from(v)
}

/// Linear form s: A -> O given on the basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetrisingForm {
    pub coeffs: Vec<Q>,
}

impl SymmetrisingForm {
    pub fn eval(&self, a: &[Q]) -> Q {
        crate::arith::dot(&self.coeffs, a)
    }
    pub fn scaled(&self, lambda: &Q) -> SymmetrisingForm {
        SymmetrisingForm { coeffs: self.coeffs.iter().map(|c| c * lambda).collect() }
    }
}

pub fn gram_matrix(a: &Algebra, s: &SymmetrisingForm) -> Mat {
    let n = a.n;
    let mut g = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut t = Q::zero();
            for (k, c) in a.product_of(i, j) {
                t += &(c * &s.coeffs[*k]);
            }
            g[(i, j)] = t;
        }
    }
    g
}

pub fn validate_form(a: &Algebra, s: &SymmetrisingForm) -> Report {
    let mut v = Vec::new();
    if s.coeffs.len() != a.n {
        return Report::from(vec!["form has wrong length".into()]);
    }
    if s.coeffs.iter().any(|c| !c.is_integral(a.p)) {
        v.push("form values not in O".into());
    }
    let g = gram_matrix(a, s);
    for i in 0..a.n {
        for j in 0..i {
            if g[(i, j)] != g[(j, i)] {
                v.push(format!("s(x_{i} x_{j}) != s(x_{j} x_{i})"));
            }
        }
    }
    let d = g.det();
    if !d.is_unit(a.p) {
        v.push(format!("Gram determinant {d} is not a unit of O"));
    }
    Report::from(v)
}

/// Algebra with a fixed symmetrising form and the data derived from it.
#[derive(Debug)]
pub struct SymmetricAlgebra {
    pub alg: Algebra,
    pub form: SymmetrisingForm,
    pub gram: Mat,
    pub gram_inv: Mat,
    /// x_i^∨ in coordinates.
    pub dual: Vec<Vec<Q>>,
    /// z_A = Σ x_i x_i^∨.
    pub z: Vec<Q>,
    z_inv: OnceLock<Vec<Q>>,
    opp: OnceLock<Arc<SymmetricAlgebra>>,
    env: OnceLock<Arc<SymmetricAlgebra>>,
}

pub type Sym = Arc<SymmetricAlgebra>;

impl SymmetricAlgebra {
    pub fn new(alg: Algebra, form: SymmetrisingForm) -> Result<Sym, Error> {
        let r = validate_algebra(&alg);
        if !r.ok {
            return Err(Error::InvalidAlgebra(r.violations.join("; ")));
        }
        Self::new_trusted(alg, form)
    }

    /// Skips the associativity scan; for algebras built by trusted constructions.
    pub fn new_trusted(alg: Algebra, form: SymmetrisingForm) -> Result<Sym, Error> {
        let r = validate_form(&alg, &form);
        if !r.ok {
            return Err(Error::InvalidForm(r.violations.join("; ")));
        }
        let gram = gram_matrix(&alg, &form);
        let gram_inv = gram.inverse().map_err(|_| Error::InvalidForm("singular Gram matrix".into()))?;
        let n = alg.n;
        let dual: Vec<Vec<Q>> = (0..n).map(|i| gram_inv.col(i)).collect();
        let mut z = vec![Q::zero(); n];
        for (i, d) in dual.iter().enumerate() {
            let t = alg.mul(&alg.basis(i), d);
            for (a, b) in z.iter_mut().zip(&t) {
                *a += b;
            }
        }
        Ok(Arc::new(SymmetricAlgebra {
            alg,
            form,
            gram,
            gram_inv,
            dual,
            z,
            z_inv: OnceLock::new(),
            opp: OnceLock::new(),
            env: OnceLock::new(),
        }))
    }

    pub fn p(&self) -> u64 {
        self.alg.p
    }
    pub fn n(&self) -> usize {
        self.alg.n
    }
    pub fn name(&self) -> &str {
        &self.alg.name
    }
    pub fn s(&self, a: &[Q]) -> Q {
        self.form.eval(a)
    }
    pub fn one(&self) -> Vec<Q> {
        self.alg.unit.clone()
    }

    /// z_A^{-1} in K ⊗ A; errors when z_A is not invertible in K ⊗ A.
    pub fn z_inverse(&self) -> Result<&Vec<Q>, Error> {
        if let Some(z) = self.z_inv.get() {
            return Ok(z);
        }
        let l = self.alg.left_mult(&self.z);
        let y = l
            .solve_k(&Mat::col_vector(&self.alg.unit))
            .ok_or_else(|| Error::NotSemisimple(format!("z of {} is not invertible over K", self.name())))?;
        let y = y.col(0);
        if self.alg.mul(&self.z, &y) != self.alg.unit {
            return Err(Error::NotSemisimple(format!("z of {} is not invertible over K", self.name())));
        }
        Ok(self.z_inv.get_or_init(|| y))
    }

    /// Opposite algebra with the same form (cached).
    pub fn opposite(self: &Arc<Self>) -> Sym {
        self.opp
            .get_or_init(|| SymmetricAlgebra::new_trusted(self.alg.opposite(), self.form.clone()).expect("opposite form"))
            .clone()
    }

    /// A^e = A ⊗_O A^op with form s ⊗ s (cached).
    pub fn enveloping(self: &Arc<Self>) -> Sym {
        self.env.get_or_init(|| tensor_product(self, &self.opposite()).expect("same prime")).clone()
    }

    /// Same algebra with form λ·s.
    pub fn rescaled(&self, lambda: &Q) -> Result<Sym, Error> {
        let alg = Algebra::from_sparse(
            self.p(),
            self.n(),
            self.alg.name.clone(),
            self.alg.prod.clone(),
            self.alg.unit.clone(),
            self.alg.gens.clone(),
        );
        SymmetricAlgebra::new_trusted(alg, self.form.scaled(lambda))
    }

    pub fn same_structure(&self, o: &SymmetricAlgebra) -> bool {
        self.alg.same_structure(&o.alg)
    }
    pub fn same(&self, o: &SymmetricAlgebra) -> bool {
        self.same_structure(o) && self.form == o.form
    }
}

pub fn dual_basis(a: &Algebra, s: &SymmetrisingForm) -> Result<Vec<Vec<Q>>, Error> {
    let g = gram_matrix(a, s);
    if !g.det().is_unit(a.p) {
        return Err(Error::InvalidForm("Gram matrix not invertible over O".into()));
    }
    let gi = g.inverse().map_err(|_| Error::InvalidForm("singular Gram".into()))?;
    Ok((0..a.n).map(|i| gi.col(i)).collect())
}

pub fn relative_projective_element(a: &Algebra, s: &SymmetrisingForm) -> Result<Vec<Q>, Error> {
    let d = dual_basis(a, s)?;
    let mut z = vec![Q::zero(); a.n];
    for (i, di) in d.iter().enumerate() {
        let t = a.mul(&a.basis(i), di);
        for (x, y) in z.iter_mut().zip(&t) {
            *x += y;
        }
    }
    Ok(z)
}

/// Regular trace form nondegenerate over K (valid in characteristic 0).
pub fn check_k_semisimple(a: &Algebra) -> bool {
    let n = a.n;
    let tr: Vec<Q> = (0..n).map(|k| a.left_regular(k).trace()).collect();
    let mut t = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut v = Q::zero();
            for (k, c) in a.product_of(i, j) {
                v += &(c * &tr[*k]);
            }
            t[(i, j)] = v;
        }
    }
    !t.det().is_zero()
}

/// Group algebra O[G] from a Cayley table with the canonical form.
pub fn group_algebra(p: u64, table: &[Vec<usize>], gens: Option<&[usize]>, name: &str) -> Result<Sym, Error> {
    let n = table.len();
    if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
        return Err(Error::InvalidAlgebra("Cayley table is not square".into()));
    }
    let e = (0..n)
        .find(|&i| (0..n).all(|j| table[i][j] == j && table[j][i] == j))
        .ok_or_else(|| Error::InvalidAlgebra("table has no identity".into()))?;
    for i in 0..n {
        let mut row: Vec<usize> = table[i].clone();
        row.sort_unstable();
        let mut col: Vec<usize> = (0..n).map(|j| table[j][i]).collect();
        col.sort_unstable();
        if row != (0..n).collect::<Vec<_>>() || col != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidAlgebra("table is not a Latin square".into()));
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if table[table[i][j]][k] != table[i][table[j][k]] {
                    return Err(Error::InvalidAlgebra(format!("table not associative at ({i},{j},{k})")));
                }
            }
        }
    }
    let gens = match gens {
        Some(g) => g.to_vec(),
        None => minimal_group_generators(table, e),
    };
    let prod = (0..n * n).map(|ij| vec![(table[ij / n][ij % n], Q::one())]).collect();
    let alg = Algebra::from_sparse(p, n, name, prod, unit_vec(n, e), gens);
    let mut s = vec![Q::zero(); n];
    s[e] = Q::one();
    SymmetricAlgebra::new_trusted(alg, SymmetrisingForm { coeffs: s })
}

fn minimal_group_generators(table: &[Vec<usize>], e: usize) -> Vec<usize> {
    let n = table.len();
    let mut gens: Vec<usize> = Vec::new();
    let closure = |gens: &[usize]| {
        let mut seen = vec![false; n];
        seen[e] = true;
        let mut q = vec![e];
        while let Some(x) = q.pop() {
            for &g in gens {
                let y = table[g][x];
                if !seen[y] {
                    seen[y] = true;
                    q.push(y);
                }
            }
        }
        seen
    };
    loop {
        let seen = closure(&gens);
        match (0..n).find(|&i| !seen[i]) {
            None => return gens,
            Some(i) => gens.push(i),
        }
    }
}

/// Cyclic group C_m as a Cayley table, element i = g^i.
pub fn cyclic_table(m: usize) -> Vec<Vec<usize>> {
    (0..m).map(|i| (0..m).map(|j| (i + j) % m).collect()).collect()
}

/// Symmetric group S_3: elements are permutations of {0,1,2}, index 0 the identity.
/// Indices 0..3 form the rotation subgroup C_3.
pub fn s3_table() -> (Vec<Vec<usize>>, Vec<[usize; 3]>) {
    let perms: Vec<[usize; 3]> =
        vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
    let idx = |q: [usize; 3]| perms.iter().position(|&x| x == q).unwrap();
    // (στ)(i) = σ(τ(i))
    let table = (0..6)
        .map(|a| (0..6).map(|b| idx([perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]])).collect())
        .collect();
    (table, perms)
}

/// M_d(O) on the basis E_{ij} (index i·d + j) with the trace form.
pub fn matrix_algebra(p: u64, d: usize) -> Result<Sym, Error> {
    if d == 0 {
        return Err(Error::InvalidAlgebra("matrix algebra of size 0".into()));
    }
    let n = d * d;
    let mut prod = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let (i, j) = (a / d, a % d);
            let (k, l) = (b / d, b % d);
            prod.push(if j == k { vec![(i * d + l, Q::one())] } else { vec![] });
        }
    }
    let mut unit = vec![Q::zero(); n];
    let mut s = vec![Q::zero(); n];
    for i in 0..d {
        unit[i * d + i] = Q::one();
        s[i * d + i] = Q::one();
    }
    let alg = Algebra::from_sparse(p, n, format!("M_{d}"), prod, unit, vec![]);
    SymmetricAlgebra::new_trusted(alg, SymmetrisingForm { coeffs: s })
}

fn check_primes(a: &SymmetricAlgebra, b: &SymmetricAlgebra) -> Result<(), Error> {
    if a.p() != b.p() {
        return Err(Error::Mismatch(format!("primes {} and {}", a.p(), b.p())));
    }
    Ok(())
}

/// A ⊗_O B on the basis x_i ⊗ y_j (index i·n_B + j) with form s ⊗ t.
pub fn tensor_product(a: &SymmetricAlgebra, b: &SymmetricAlgebra) -> Result<Sym, Error> {
    check_primes(a, b)?;
    let (na, nb) = (a.n(), b.n());
    let n = na * nb;
    let mut prod = Vec::with_capacity(n * n);
    for x in 0..n {
        let (i, j) = (x / nb, x % nb);
        for y in 0..n {
            let (k, l) = (y / nb, y % nb);
            let mut v = Vec::new();
            for (m, c) in a.alg.product_of(i, k) {
                for (o, d) in b.alg.product_of(j, l) {
                    v.push((m * nb + o, c * d));
                }
            }
            prod.push(v);
        }
    }
    let mut unit = vec![Q::zero(); n];
    let mut s = vec![Q::zero(); n];
    for i in 0..na {
        for j in 0..nb {
            unit[i * nb + j] = &a.alg.unit[i] * &b.alg.unit[j];
            s[i * nb + j] = &a.form.coeffs[i] * &b.form.coeffs[j];
        }
    }
    let mut gens = Vec::new();
    if let (Some(ua), Some(ub)) = (a.alg.unit_index(), b.alg.unit_index()) {
        gens.extend(a.alg.gens.iter().map(|&g| g * nb + ub));
        gens.extend(b.alg.gens.iter().map(|&h| ua * nb + h));
    }
    let alg = Algebra::from_sparse(a.p(), n, format!("{}⊗{}", a.name(), b.name()), prod, unit, gens);
    SymmetricAlgebra::new_trusted(alg, SymmetrisingForm { coeffs: s })
}

/// A × B on the concatenated basis with form s + t.
pub fn direct_product(a: &SymmetricAlgebra, b: &SymmetricAlgebra) -> Result<Sym, Error> {
    check_primes(a, b)?;
    let (na, nb) = (a.n(), b.n());
    let n = na + nb;
    let mut prod = vec![vec![]; n * n];
    for i in 0..na {
        for k in 0..na {
            prod[i * n + k] = a.alg.product_of(i, k).to_vec();
        }
    }
    for j in 0..nb {
        for l in 0..nb {
            prod[(na + j) * n + na + l] = b.alg.product_of(j, l).iter().map(|(m, c)| (na + m, c.clone())).collect();
        }
    }
    let mut unit = a.alg.unit.clone();
    unit.extend(b.alg.unit.iter().cloned());
    let mut s = a.form.coeffs.clone();
    s.extend(b.form.coeffs.iter().cloned());
    let alg = Algebra::from_sparse(a.p(), n, format!("{}×{}", a.name(), b.name()), prod, unit, vec![]);
    SymmetricAlgebra::new_trusted(alg, SymmetrisingForm { coeffs: s })
}

/// A^e = A ⊗_O A^op with form s ⊗ s.
pub fn enveloping_algebra(a: &Sym) -> Result<Sym, Error> {
    Ok(a.enveloping())
}

/// O itself, with the identity as form.
pub fn trivial_algebra(p: u64) -> Sym {
    group_algebra(p, &cyclic_table(1), None, "O").expect("trivial group")
}

/// x ⊗ y in the tensor-product basis.
pub fn tensor_elem(x: &[Q], y: &[Q]) -> Vec<Q> {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for a in x {
        for b in y {
            out.push(a * b);
        }
    }
    out
}
