use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::arith::{vec_axpy, Mat, Q};
use crate::lattices::{Lattice, ShiftTower, TateElement};
use crate::{Error, Result};

use super::adjunction::Adjunction;
use super::functor::TensorFunctor;

/// tr(β) = (η ⊗ Id) ∘ (Id ⊗ β) ∘ (ε ⊗ Id) for a pair of tensor functors
/// F: A-lattices -> B-lattices and H: B-lattices -> A-lattices, given
/// ε(1_A) = Σ_j x_j ⊗ y_j (x_j in the bimodule of H, y_j in that of F) and
/// the table Θ_{lk} = η(h_l ⊗ f_k) ∈ A on the right projective bases.
pub struct Transfer {
    pub f: Arc<TensorFunctor>,
    pub h: Arc<TensorFunctor>,
    pub eps: Vec<(Vec<Q>, Vec<Q>)>,
    pub theta: Vec<Vec<Vec<Q>>>,
    towers: Mutex<HashMap<u64, Arc<ShiftTower>>>,
}

impl Transfer {
    pub fn new(
        f: Arc<TensorFunctor>,
        h: Arc<TensorFunctor>,
        eps: Vec<(Vec<Q>, Vec<Q>)>,
        eta: impl Fn(&[Q], &[Q]) -> Vec<Q>,
    ) -> Transfer {
        let theta = h.elems().iter().map(|hl| f.elems().iter().map(|fk| eta(hl, fk)).collect()).collect();
        Transfer { f, h, eps, theta, towers: Mutex::new(HashMap::new()) }
    }

    /// The transfer along M: F = M^∨ ⊗_A −, H = M ⊗_B −.
    pub fn from_adjunction(adj: &Adjunction) -> Result<Transfer> {
        let eps = adj.eps_dual_terms()?;
        Ok(Transfer::new(adj.f.clone(), adj.h.clone(), eps, |m, mu| adj.eta(m, mu)))
    }

    /// W -> H(F(W)), w ↦ Σ_j x_j ⊗ y_j ⊗ w.
    pub fn eps_map(&self, w: &Arc<Lattice>) -> Result<Mat> {
        let fw = self.f.lattice(w)?;
        let hfw = self.h.lattice(&fw)?;
        let mut out = Mat::zeros(hfw.rank, w.rank);
        for (x, y) in &self.eps {
            out.add_assign(&self.h.tensor_with(&fw, x)?.mul(&self.f.tensor_with(w, y)?));
        }
        Ok(out)
    }

    /// H(F(W)) -> W, h_l ⊗ f_k ⊗ w ↦ Θ_{lk}·w.
    pub fn eta_map(&self, w: &Arc<Lattice>) -> Result<Mat> {
        let fw = self.f.lattice(w)?;
        let hfw = self.h.lattice(&fw)?;
        let mut out = Mat::zeros(w.rank, hfw.rank);
        let fcomp: Vec<Mat> = (0..self.f.k()).map(|k| self.f.component(w, k)).collect::<Result<_>>()?;
        for (l, row) in self.theta.iter().enumerate() {
            let hc = self.h.component(&fw, l)?;
            for (k, th) in row.iter().enumerate() {
                if th.iter().all(Q::is_zero) {
                    continue;
                }
                out.add_assign(&w.act_elem(th).mul(&fcomp[k].mul(&hc)));
            }
        }
        Ok(out)
    }

    /// π = η(ε(1)) as an element of A.
    pub fn pi(&self, eta: impl Fn(&[Q], &[Q]) -> Vec<Q>, n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for (x, y) in &self.eps {
            vec_axpy(&mut out, &Q::one(), &eta(x, y));
        }
        out
    }

    /// tr(β) for β: F(U) -> F(V).
    pub fn transfer_hom(&self, u: &Arc<Lattice>, v: &Arc<Lattice>, beta: &Mat) -> Result<Mat> {
        let fu = self.f.lattice(u)?;
        let fv = self.f.lattice(v)?;
        if beta.shape() != (fv.rank, fu.rank) {
            return Err(Error::Mismatch(format!("β has shape {:?}, expected {:?}", beta.shape(), (fv.rank, fu.rank))));
        }
        if !fu.is_hom_to(&fv, beta) {
            return Err(Error::Verification("β does not intertwine the actions".into()));
        }
        let hb = self.h.map(&fu, &fv, beta)?;
        Ok(self.eta_map(v)?.mul(&hb.mul(&self.eps_map(u)?)))
    }

    /// The tower F(T), built once per base tower.
    pub fn induce(&self, t: &Arc<ShiftTower>) -> Result<Arc<ShiftTower>> {
        if let Some(x) = self.towers.lock().unwrap().get(&t.id()) {
            return Ok(x.clone());
        }
        let it = ShiftTower::induced(self.f.clone(), t.clone())?;
        Ok(self.towers.lock().unwrap().entry(t.id()).or_insert(it).clone())
    }

    /// Graded transfer: β lives between levels of F(T_U) and F(T_V), the result
    /// between the same levels of T_U and T_V.
    pub fn transfer_graded(&self, tu: &Arc<ShiftTower>, tv: &Arc<ShiftTower>, beta: &TateElement) -> Result<TateElement> {
        let (fu, fv) = (self.induce(tu)?, self.induce(tv)?);
        if beta.src.id() != fu.id() || beta.dst.id() != fv.id() {
            return Err(Error::Mismatch("β is not in the induced towers".into()));
        }
        let u = tu.level(beta.src_level)?;
        let v = tv.level(beta.dst_level())?;
        let map = self.transfer_hom(&u, &v, &beta.map)?;
        Ok(TateElement { degree: beta.degree, src: tu.clone(), src_level: beta.src_level, dst: tv.clone(), map })
    }

    /// Id ⊗ α as a class between the induced towers.
    pub fn apply(&self, alpha: &TateElement) -> Result<TateElement> {
        let (fs, fd) = (self.induce(&alpha.src)?, self.induce(&alpha.dst)?);
        let u = alpha.src.level(alpha.src_level)?;
        let v = alpha.dst.level(alpha.dst_level())?;
        let map = self.f.map(&u, &v, &alpha.map)?;
        Ok(TateElement { degree: alpha.degree, src: fs, src_level: alpha.src_level, dst: fd, map })
    }
}

/// F_{M⊕N}(W) -> F_M(W) ⊕ F_N(W) for F_X = X ⊗ −, where the bimodule of
/// `sum` is the direct sum of those of `fm` and `fn_`.
pub fn split_sum(sum: &TensorFunctor, fm: &TensorFunctor, fn_: &TensorFunctor, w: &Arc<Lattice>) -> Result<Mat> {
    let rm = fm.x.rank;
    let out_s = sum.lattice(w)?;
    let (om, on) = (fm.lattice(w)?, fn_.lattice(w)?);
    let mut j = Mat::zeros(om.rank + on.rank, out_s.rank);
    for (k, xk) in sum.elems().iter().enumerate() {
        let comp = sum.component(w, k)?;
        let a = fm.tensor_with(w, &xk[..rm])?;
        let b = fn_.tensor_with(w, &xk[rm..])?;
        j.add_assign(&Mat::vstack(&[&a, &b]).mul(&comp));
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic_table, group_algebra, s3_table, trivial_algebra};
    use crate::bimodules::bimodule::{algebra_over_ground, induction_bimodule, Bimodule};
    use crate::lattices::{ExtGroup, StableHom};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn transfer_from_trivial_subgroup_is_index() {
        let a = group_algebra(2, &cyclic_table(2), None, "C2").unwrap();
        let o = trivial_algebra(2);
        let adj = Adjunction::new(Arc::new(algebra_over_ground(&a, &o))).unwrap();
        let tr = Transfer::from_adjunction(&adj).unwrap();
        let triv = Arc::new(Lattice::one_dim(&a, &[Q::one()], "triv"));
        let f = tr.transfer_hom(&triv, &triv, &Mat::identity(1)).unwrap();
        assert_eq!(f, Mat::scalar(1, &Q::int(2)));
        assert!(tr.transfer_hom(&triv, &triv, &Mat::zeros(1, 1)).unwrap().is_zero());
    }

    #[test]
    fn regular_bimodule_transfer_is_identity() {
        let a = group_algebra(3, &cyclic_table(3), None, "C3").unwrap();
        let adj = Adjunction::new(Arc::new(Bimodule::regular(&a))).unwrap();
        let tr = Transfer::from_adjunction(&adj).unwrap();
        let reg = Arc::new(Lattice::regular(&a));
        let g = a.alg.right_regular(1).clone();
        let fg = tr.f.map(&reg, &reg, &g).unwrap();
        assert_eq!(tr.transfer_hom(&reg, &reg, &fg).unwrap(), g);
    }

    #[test]
    fn transfer_preserves_projective_factoring() {
        let (t, _) = s3_table();
        let g = group_algebra(3, &t, None, "S3").unwrap();
        let h = group_algebra(3, &cyclic_table(3), None, "C3").unwrap();
        let adj = Adjunction::new(Arc::new(induction_bimodule(&g, &h, &[0, 1, 2]))).unwrap();
        let tr = Transfer::from_adjunction(&adj).unwrap();
        let u = Arc::new(Lattice::one_dim(&g, &[Q::one(), Q::int(-1)], "sgn"));
        let v = Arc::new(Lattice::one_dim(&g, &[Q::one(), Q::int(-1)], "sgn"));
        let (fu, fv) = (tr.f.lattice(&u).unwrap(), tr.f.lattice(&v).unwrap());
        let sb = StableHom::new(&fu, &fv).unwrap();
        let sa = StableHom::new(&u, &v).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let b = sb.random_pr(&mut rng);
            assert!(sa.in_pr(&tr.transfer_hom(&u, &v, &b).unwrap()));
        }
    }

    #[test]
    fn graded_transfer_commutes_with_shift() {
        let a = group_algebra(2, &cyclic_table(2), None, "C2").unwrap();
        let o = trivial_algebra(2);
        let adj = Adjunction::new(Arc::new(algebra_over_ground(&a, &o))).unwrap();
        let tr = Transfer::from_adjunction(&adj).unwrap();
        let tu = ShiftTower::canonical(Lattice::one_dim(&a, &[Q::one()], "triv"));
        let fu = tr.induce(&tu).unwrap();
        let e = ExtGroup::new(&fu, &fu, -1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = e.random(&mut rng);
        let lhs = tr.transfer_graded(&tu, &tu, &b).unwrap().shifted(1).unwrap();
        let rhs = tr.transfer_graded(&tu, &tu, &b.shifted(1).unwrap()).unwrap();
        let st = StableHom::new(&tu.level(1).unwrap(), &tu.level(0).unwrap()).unwrap();
        assert!(st.in_pr(&lhs.map.sub(&rhs.map)));
    }
}
