use std::collections::HashMap;
use std::sync::OnceLock;

use crate::algebra::SymmetricAlgebra;
use crate::arith::{kernel_with_left_inverse, smith, solve_over_o, unit_vec, Mat, SubLattice, Track, Q};
use crate::Error;

use super::lattice::Lattice;

/// Generator surjection π: A^r -> U with an O-linear section and the kernel.
/// Column k·n + i of π is x_i·u_k.
#[derive(Debug)]
pub struct Presentation {
    pub gens: Vec<Vec<Q>>,
    pub pi: Mat,
    pub section: Mat,
    pub kernel: Mat,
    pub kernel_inv: Mat,
    relations: OnceLock<Vec<Vec<Q>>>,
}

/// ρ(x_i)·κ for κ in the free module A^r, for every basis element x_i.
pub fn free_orbit(alg: &SymmetricAlgebra, r: usize, kappa: &[Q]) -> Vec<Vec<Q>> {
    let n = alg.n();
    (0..n)
        .map(|i| {
            let x = alg.alg.basis(i);
            let mut out = Vec::with_capacity(r * n);
            for k in 0..r {
                let blk = &kappa[k * n..(k + 1) * n];
                if blk.iter().all(Q::is_zero) {
                    out.extend(std::iter::repeat(Q::zero()).take(n));
                } else {
                    out.extend(alg.alg.mul(&x, blk));
                }
            }
            out
        })
        .collect()
}

impl Presentation {
    pub fn compute(u: &Lattice) -> Presentation {
        let m = u.rank;
        let n = u.n();
        let p = u.p();
        let mut gens: Vec<Vec<Q>> = Vec::new();
        let mut cols: Vec<Vec<Q>> = Vec::new();
        let mut span: Option<SubLattice> = None;
        for j in 0..m {
            if let Some(s) = &span {
                if s.rank() == m && s.is_saturated() {
                    break;
                }
            }
            let e = unit_vec(m, j);
            if span.as_ref().is_some_and(|s| s.contains(&e)) {
                continue;
            }
            cols.extend(u.orbit(&e));
            gens.push(e);
            span = Some(SubLattice::span(&Mat::from_cols(m, &cols), p));
        }
        let r = gens.len();
        let pi = Mat::from_cols(m, &cols);
        let s = smith(&pi, p, Track { p: true, p_inv: false, q: true, q_inv: true });
        debug_assert!(s.rank() == m && s.all_units(), "generators must span over O");
        let q = s.q.unwrap();
        let qi = s.q_inv.unwrap();
        let head: Vec<usize> = (0..m).collect();
        let tail: Vec<usize> = (m..r * n).collect();
        let section = q.select_cols(&head).mul(s.p.as_ref().unwrap());
        let kernel = q.select_cols(&tail);
        let kernel_inv = qi.select_rows(&tail);
        Presentation { gens, pi, section, kernel, kernel_inv, relations: OnceLock::new() }
    }

    pub fn r(&self) -> usize {
        self.gens.len()
    }

    /// Generators of the kernel as an A-module, preferring sparse relations
    /// (zero or proportional columns of π) before dense kernel vectors.
    pub fn relations(&self, u: &Lattice) -> &Vec<Vec<Q>> {
        self.relations.get_or_init(|| self.compute_relations(u))
    }

    fn compute_relations(&self, u: &Lattice) -> Vec<Vec<Q>> {
        let p = u.p();
        let n = u.n();
        let r = self.r();
        let total = r * n;
        let kdim = self.kernel.cols();
        if kdim == 0 {
            return vec![];
        }
        let mut cands: Vec<Vec<Q>> = Vec::new();
        let mut seen: HashMap<Vec<Q>, (usize, Q)> = HashMap::new();
        for t in 0..total {
            let c = self.pi.col(t);
            match c.iter().position(|x| !x.is_zero()) {
                None => cands.push(unit_vec(total, t)),
                Some(f) => {
                    let lead = c[f].clone();
                    let key: Vec<Q> = c.iter().map(|x| x / &lead).collect();
                    if let Some((t0, lead0)) = seen.get(&key) {
                        let mut k = unit_vec(total, t);
                        k[*t0] = -(&lead / lead0);
                        cands.push(k);
                    } else {
                        seen.insert(key, (t, lead));
                    }
                }
            }
        }
        cands.extend((0..kdim).map(|j| self.kernel.col(j)));
        let mut rels = Vec::new();
        let mut span_cols: Vec<Vec<Q>> = Vec::new();
        let mut span: Option<SubLattice> = None;
        for c in cands {
            if let Some(s) = &span {
                if s.rank() == kdim && s.is_saturated() {
                    break;
                }
                if s.contains(&self.kernel_inv.mul_vec(&c)) {
                    continue;
                }
            }
            for w in free_orbit(&u.alg, r, &c) {
                span_cols.push(self.kernel_inv.mul_vec(&w));
            }
            rels.push(c);
            span = Some(SubLattice::span(&Mat::from_cols(kdim, &span_cols), p));
        }
        rels
    }
}

/// Saturated O-basis of Hom_A(U, V) with a coordinate map.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub src_rank: usize,
    pub dst_rank: usize,
    pub basis: Vec<Mat>,
    src_gens: Vec<Vec<Q>>,
    coord_map: Mat,
}

impl HomSpace {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
    /// Coordinates of an intertwiner in `basis`; None if f is not in the span.
    pub fn coords(&self, f: &Mat) -> Option<Vec<Q>> {
        let mut stacked = Vec::with_capacity(self.src_gens.len() * self.dst_rank);
        for g in &self.src_gens {
            stacked.extend(f.mul_vec(g));
        }
        let c = self.coord_map.mul_vec(&stacked);
        if &self.element(&c) != f {
            return None;
        }
        Some(c)
    }
    pub fn element(&self, c: &[Q]) -> Mat {
        let mut m = Mat::zeros(self.dst_rank, self.src_rank);
        for (x, b) in c.iter().zip(&self.basis) {
            m.axpy(x, b);
        }
        m
    }
}

pub fn hom_space(u: &Lattice, v: &Lattice) -> Result<HomSpace, Error> {
    u.check_same_algebra(v)?;
    let pres = u.presentation();
    let rels = pres.relations(u);
    let r = pres.r();
    let n = u.n();
    let mv = v.rank;
    let (k, kinv) = if rels.is_empty() {
        (Mat::identity(r * mv), Mat::identity(r * mv))
    } else {
        let mut c = Mat::zeros(rels.len() * mv, r * mv);
        for (t, kap) in rels.iter().enumerate() {
            for kk in 0..r {
                let blk = &kap[kk * n..(kk + 1) * n];
                if blk.iter().all(Q::is_zero) {
                    continue;
                }
                let m = v.act_elem(blk);
                c.set_block(t * mv, kk * mv, &m);
            }
        }
        kernel_with_left_inverse(&c, u.p())
    };
    let mut basis = Vec::with_capacity(k.cols());
    for j in 0..k.cols() {
        let col = k.col(j);
        let mut orb_cols: Vec<Vec<Q>> = Vec::with_capacity(r * n);
        for kk in 0..r {
            orb_cols.extend(v.orbit(&col[kk * mv..(kk + 1) * mv]));
        }
        let f = Mat::from_cols(mv, &orb_cols).mul(&pres.section);
        debug_assert!(u.is_hom_to(v, &f));
        basis.push(f);
    }
    Ok(HomSpace { src_rank: u.rank, dst_rank: mv, basis, src_gens: pres.gens.clone(), coord_map: kinv })
}

/// Hom^pr_A(U, V) as the image of the relative trace, in HomSpace coordinates.
pub fn projective_factoring_subspace(u: &Lattice, v: &Lattice, h: &HomSpace) -> Result<SubLattice, Error> {
    let gens = relative_trace_generators(u, v);
    let mut cols = Vec::with_capacity(gens.len());
    for g in &gens {
        let c = h
            .coords(g)
            .ok_or_else(|| Error::Verification("relative trace left the hom space".into()))?;
        cols.push(c);
    }
    Ok(SubLattice::span(&Mat::from_cols(h.rank(), &cols), u.p()))
}

/// Tr(v ξ) = Σ_i ρ_V(x_i) (v ξ) ρ_U(x_i^∨) for v over A-generators of V and
/// ξ over the O-basis of U^∨; these span the image of the relative trace.
pub fn relative_trace_generators(u: &Lattice, v: &Lattice) -> Vec<Mat> {
    let alg = &u.alg;
    let n = alg.n();
    let gi = &alg.gram_inv;
    // rows[j] is the n × m_U matrix whose row i is e_j^T ρ_U(x_i^∨)
    let rows: Vec<Mat> = (0..u.rank)
        .map(|j| {
            let co = u.corbit(&unit_vec(u.rank, j));
            let mut m = Mat::zeros(n, u.rank);
            for i in 0..n {
                for l in 0..n {
                    let c = &gi[(l, i)];
                    if c.is_zero() {
                        continue;
                    }
                    for t in 0..u.rank {
                        if !co[l][t].is_zero() {
                            let add = c * &co[l][t];
                            m[(i, t)] += &add;
                        }
                    }
                }
            }
            m
        })
        .collect();
    let vgens = &v.presentation().gens;
    let mut out = Vec::with_capacity(vgens.len() * u.rank);
    for g in vgens {
        let orb = Mat::from_cols(v.rank, &v.orbit(g));
        for r in &rows {
            out.push(orb.mul(r));
        }
    }
    out
}

/// Relative trace of an arbitrary O-linear map f: U -> V.
pub fn relative_trace(u: &Lattice, v: &Lattice, f: &Mat) -> Mat {
    let alg = &u.alg;
    let mut out = Mat::zeros(v.rank, u.rank);
    for i in 0..alg.n() {
        let t = v.act(i).mul(f).mul(&u.act_elem(&alg.dual[i]));
        out.add_assign(&t);
    }
    out
}

/// Hom^pr by definition: image of Hom_A(U, A ⊗_O V) under multiplication A ⊗ V -> V.
pub fn projective_factoring_by_definition(u: &Lattice, v: &Lattice, h: &HomSpace) -> Result<SubLattice, Error> {
    let cover = Lattice::free(&v.alg, v.rank);
    let mu = multiplication_map(v);
    let hc = hom_space(u, &cover)?;
    let mut cols = Vec::with_capacity(hc.rank());
    for b in &hc.basis {
        let f = mu.mul(b);
        cols.push(h.coords(&f).ok_or_else(|| Error::Verification("composite not in hom space".into()))?);
    }
    Ok(SubLattice::span(&Mat::from_cols(h.rank(), &cols), u.p()))
}

/// A ⊗_O V -> V, column j·n + i is x_i·e_j.
pub fn multiplication_map(v: &Lattice) -> Mat {
    let mut cols = Vec::with_capacity(v.rank * v.n());
    for j in 0..v.rank {
        cols.extend(v.orbit(&unit_vec(v.rank, j)));
    }
    Mat::from_cols(v.rank, &cols)
}

/// Pairs (u_k, φ_k) with Σ φ_k(u)·u_k = u; φ_k is an n × m matrix (U -> A).
#[derive(Clone, Debug)]
pub struct ProjBasis {
    pub elems: Vec<Vec<Q>>,
    pub funcs: Vec<Mat>,
}

impl ProjBasis {
    /// Standard basis of the free module A^r.
    pub fn free(alg: &SymmetricAlgebra, r: usize) -> ProjBasis {
        let n = alg.n();
        let mut elems = Vec::with_capacity(r);
        let mut funcs = Vec::with_capacity(r);
        for k in 0..r {
            let mut e = vec![Q::zero(); r * n];
            for (i, c) in alg.alg.unit.iter().enumerate() {
                e[k * n + i] = c.clone();
            }
            elems.push(e);
            let mut f = Mat::zeros(n, r * n);
            for i in 0..n {
                f[(i, k * n + i)] = Q::one();
            }
            funcs.push(f);
        }
        ProjBasis { elems, funcs }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Σ_k φ_k(u)·u_k = u on every basis vector.
    pub fn verify(&self, u: &Lattice) -> bool {
        let mut total = Mat::zeros(u.rank, u.rank);
        for (e, f) in self.elems.iter().zip(&self.funcs) {
            let orb = Mat::from_cols(u.rank, &u.orbit(e));
            total.add_assign(&orb.mul(f));
        }
        total == Mat::identity(u.rank)
    }
}

pub fn projective_basis(u: &Lattice) -> Result<ProjBasis, Error> {
    let pres = u.presentation();
    let r = pres.r();
    let n = u.n();
    let m = u.rank;
    let split = if r * n == m {
        pres.pi.inverse()?
    } else {
        let free = Lattice::free(&u.alg, r);
        let h = hom_space(u, &free)?;
        let mut cols = Vec::with_capacity(h.rank());
        for b in &h.basis {
            cols.push(pres.pi.mul(b).vec());
        }
        let a = Mat::from_cols(m * m, &cols);
        let target = Mat::col_vector(&Mat::identity(m).vec());
        match solve_over_o(&a, &target, u.p())? {
            None => return Err(Error::NotProjective(u.name.clone())),
            Some(c) => h.element(&c.col(0)),
        }
    };
    let funcs = (0..r).map(|k| split.select_rows(&(k * n..(k + 1) * n).collect::<Vec<_>>())).collect();
    let pb = ProjBasis { elems: pres.gens.clone(), funcs };
    debug_assert!(pb.verify(u));
    Ok(pb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic_table, group_algebra, matrix_algebra, s3_table};

    fn c2() -> crate::algebra::Sym {
        group_algebra(2, &cyclic_table(2), None, "C2").unwrap()
    }

    #[test]
    fn hom_examples() {
        let a = c2();
        let reg = Lattice::regular(&a);
        assert_eq!(hom_space(&reg, &reg).unwrap().rank(), 2);
        let triv = Lattice::one_dim(&a, &[Q::one()], "triv");
        let sign = Lattice::one_dim(&a, &[Q::int(-1)], "sign");
        assert_eq!(hom_space(&triv, &sign).unwrap().rank(), 0);
        let h = hom_space(&triv, &triv).unwrap();
        assert!(h.coords(&Mat::identity(1)).is_some());
    }

    #[test]
    fn projective_examples() {
        let a = c2();
        let reg = Lattice::regular(&a);
        let pb = projective_basis(&reg).unwrap();
        assert_eq!(pb.len(), 1);
        let triv = Lattice::one_dim(&a, &[Q::one()], "triv");
        assert!(matches!(projective_basis(&triv), Err(Error::NotProjective(_))));
        let two = Lattice::direct_sum(&[&reg, &reg]);
        assert_eq!(projective_basis(&two).unwrap().len(), 2);
        // O[C_2] at p = 3: the trivial module is projective
        let a3 = group_algebra(3, &cyclic_table(2), None, "C2").unwrap();
        let t3 = Lattice::one_dim(&a3, &[Q::one()], "triv");
        assert!(projective_basis(&t3).unwrap().verify(&t3));
    }

    #[test]
    fn hom_pr_examples() {
        let a = c2();
        let triv = Lattice::one_dim(&a, &[Q::one()], "triv");
        let h = hom_space(&triv, &triv).unwrap();
        let pr = projective_factoring_subspace(&triv, &triv, &h).unwrap();
        assert_eq!(pr.exps(), &[1]);
        let reg = Lattice::regular(&a);
        let h = hom_space(&reg, &reg).unwrap();
        let pr = projective_factoring_subspace(&reg, &reg, &h).unwrap();
        assert!(pr.is_saturated() && pr.rank() == 2);
        // M_2 at p = 2 acting on O^2
        let m2 = matrix_algebra(2, 2).unwrap();
        let nat = Lattice::from_basis_actions(
            m2.clone(),
            (0..4)
                .map(|k| {
                    let mut e = Mat::zeros(2, 2);
                    e[(k / 2, k % 2)] = Q::one();
                    e
                })
                .collect(),
            "O^2",
        )
        .unwrap();
        let h = hom_space(&nat, &nat).unwrap();
        assert_eq!(h.rank(), 1);
        let pr = projective_factoring_subspace(&nat, &nat, &h).unwrap();
        // O^2 is projective over M_2(O)
        assert!(pr.is_saturated());
    }

    #[test]
    fn trace_matches_definition_on_s3() {
        let (t, perms) = s3_table();
        let a = group_algebra(3, &t, None, "S3").unwrap();
        let sgn: Vec<Q> = a
            .alg
            .gens
            .iter()
            .map(|&g| {
                let q = perms[g];
                let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| q[i] > q[j]).count();
                Q::int(if inv % 2 == 0 { 1 } else { -1 })
            })
            .collect();
        let triv = Lattice::one_dim(&a, &vec![Q::one(); a.alg.gens.len()], "triv");
        let sign = Lattice::one_dim(&a, &sgn, "sign");
        for (u, v) in [(&triv, &triv), (&triv, &sign), (&sign, &sign)] {
            let h = hom_space(u, v).unwrap();
            let x = projective_factoring_subspace(u, v, &h).unwrap();
            let y = projective_factoring_by_definition(u, v, &h).unwrap();
            assert!(x.equals(&y));
        }
        // one explicit relative trace on triv is multiplication by |G|
        assert_eq!(relative_trace(&triv, &triv, &Mat::identity(1)), Mat::scalar(1, &Q::int(6)));
    }
}
