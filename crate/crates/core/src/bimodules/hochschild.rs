use std::sync::Arc;

use crate::algebra::{tensor_elem, tensor_product, Sym};
use crate::arith::{Mat, Q};
use crate::lattices::{shift_hom, CoverKind, ExtGroup, ShiftTower, StableHom, TateElement, TorsionModule};
use crate::{Error, Result};

use super::adjunction::Adjunction;
use super::bimodule::{algebra_as_bimodule_lattice, Bimodule};
use super::functor::TensorFunctor;
use super::transfer::Transfer;

/// A as an A^e-lattice with its shift tower (generator covers keep A^e-ranks small).
pub fn hochschild_tower(a: &Sym) -> Arc<ShiftTower> {
    ShiftTower::new(Arc::new(algebra_as_bimodule_lattice(a)), CoverKind::Generators)
}

/// HH-hat^n(A) = Ext-hat^n_{A^e}(A, A).
pub fn hochschild_tate(a: &Sym, n: i32) -> Result<TorsionModule> {
    let t = hochschild_tower(a);
    Ok(ExtGroup::new(&t, &t, n)?.stable.group)
}

/// tr_N: HH-hat^*(B) -> HH-hat^*(A) for a perfect A-B-bimodule N, evaluated as
/// Σ^d(η_N) ∘ (Id_N ⊗ τ ⊗ Id_{N^∨}) ∘ ε_{N^∨}, with Σ^d(N ⊗_B B ⊗_B N^∨)
/// realized by the tower N ⊗_B T_B ⊗_B N^∨.
pub struct HochschildTransfer {
    pub adj: Adjunction,
    pub ta: Arc<ShiftTower>,
    pub tb: Arc<ShiftTower>,
    /// N ⊗_B − ⊗_B N^∨ from B^e-lattices to A^e-lattices.
    pub g: Arc<TensorFunctor>,
    pub gtb: Arc<ShiftTower>,
    eps: Mat,
    eta: Mat,
}

impl HochschildTransfer {
    pub fn new(n: Arc<Bimodule>, ta: Arc<ShiftTower>, tb: Arc<ShiftTower>) -> Result<HochschildTransfer> {
        let adj = Adjunction::new(n.clone())?;
        let (a, b) = (n.left.clone(), n.right.clone());
        if !ta.alg.same(&a.enveloping()) || !tb.alg.same(&b.enveloping()) {
            return Err(Error::Mismatch("Hochschild towers over the wrong enveloping algebras".into()));
        }
        let xg = Bimodule::outer(&n, &adj.md.transpose_op(), &a.enveloping(), &b.enveloping(), format!("{}⊠{}", n.name, adj.md.name))?;
        let g = TensorFunctor::new(Arc::new(xg), format!("{}⊗−⊗{}", n.name, adj.md.name))?;
        let gtb = ShiftTower::induced(g.clone(), tb.clone())?;
        let a_lat = ta.level(0)?;
        let b_lat = tb.level(0)?;
        let gb = g.lattice(&b_lat)?;
        // ε_{N^∨}(1_A) = Σ_j m_j ⊗ 1_B ⊗ ν_j
        let one_b = b.one();
        let mut e1 = vec![Q::zero(); gb.rank];
        for (m, nu) in adj.eps_dual_terms()? {
            crate::arith::vec_axpy(&mut e1, &Q::one(), &g.tensor(&b_lat, &tensor_elem(&m, &nu), &one_b)?);
        }
        let one_a = a.one();
        let cols: Vec<Vec<Q>> = (0..a.n())
            .map(|i| gb.act_elem(&tensor_elem(&a.alg.basis(i), &one_a)).mul_vec(&e1))
            .collect();
        let eps = Mat::from_cols(gb.rank, &cols);
        // η_N(m ⊗ b ⊗ μ) = η_N(m b ⊗ μ)
        let r = n.rank;
        let mut eta = Mat::zeros(a.n(), gb.rank);
        for (k, wk) in g.elems().iter().enumerate() {
            let comp = g.component(&b_lat, k)?;
            for c in 0..gb.rank {
                let bk = comp.col(c);
                if bk.iter().all(Q::is_zero) {
                    continue;
                }
                let rb = n.rmod.act_elem(&bk);
                let mut v = vec![Q::zero(); a.n()];
                for p in 0..r {
                    let mp = rb.col(p);
                    for q in 0..r {
                        let w = &wk[p * r + q];
                        if w.is_zero() {
                            continue;
                        }
                        let e = crate::arith::unit_vec(r, q);
                        crate::arith::vec_axpy(&mut v, w, &adj.eta(&mp, &e));
                    }
                }
                for (i, x) in v.into_iter().enumerate() {
                    eta[(i, c)] += &x;
                }
            }
        }
        if !a_lat.is_hom_to(&gb, &eps) || !gb.is_hom_to(&a_lat, &eta) {
            return Err(Error::Verification("Hochschild adjunction maps are not A^e-linear".into()));
        }
        Ok(HochschildTransfer { adj, ta, tb, g, gtb, eps, eta })
    }

    pub fn eps(&self) -> &Mat {
        &self.eps
    }
    pub fn eta(&self) -> &Mat {
        &self.eta
    }

    /// tr_N(τ) for τ: B -> Σ^d(B) in the B^e tower.
    pub fn transfer(&self, tau: &TateElement) -> Result<TateElement> {
        if tau.src.id() != self.tb.id() || tau.dst.id() != self.tb.id() || tau.src_level != 0 {
            return Err(Error::Mismatch("τ is not a class in the B^e tower".into()));
        }
        let d = tau.degree;
        let b0 = self.tb.level(0)?;
        let bd = self.tb.level(d)?;
        let gt = self.g.map(&b0, &bd, &tau.map)?;
        let seta = shift_hom(&self.gtb, 0, &self.ta, 0, &self.eta, d)?;
        let map = seta.mul(&gt.mul(&self.eps));
        Ok(TateElement { degree: d, src: self.ta.clone(), src_level: 0, dst: self.ta.clone(), map })
    }

    /// Certificate that level d of N ⊗ T_B ⊗ N^∨ is stably the d-th shift of
    /// N ⊗_B N^∨: the comparison maps in both directions compose to the identity
    /// modulo projective-factoring maps.
    pub fn comparison_certificate(&self, d: i32) -> Result<bool> {
        let gb = self.gtb.level(0)?;
        let canon = ShiftTower::new(gb.clone(), CoverKind::Generators);
        let id = Mat::identity(gb.rank);
        let to = shift_hom(&self.gtb, 0, &canon, 0, &id, d)?;
        let from = shift_hom(&canon, 0, &self.gtb, 0, &id, d)?;
        let x = self.gtb.level(d)?;
        let y = canon.level(d)?;
        let sx = StableHom::new(&x, &x)?;
        let sy = StableHom::new(&y, &y)?;
        let ix = Mat::identity(x.rank);
        let iy = Mat::identity(y.rank);
        Ok(sx.in_pr(&from.mul(&to).sub(&ix)) && sy.in_pr(&to.mul(&from).sub(&iy)))
    }
}

/// The second construction of tr_N on HH: apply − ⊗_B N^∨ to τ, then use the
/// module transfer along X = N ⊠ A^op between A^e and B ⊗ A^op.
pub struct HochschildTransferAlt {
    pub ta: Arc<ShiftTower>,
    pub tb: Arc<ShiftTower>,
    pub xadj: Adjunction,
    pub tr: Transfer,
    /// − ⊗_B N^∨ from B^e-lattices to B ⊗ A^op-lattices.
    pub l: Arc<TensorFunctor>,
    pub ltb: Arc<ShiftTower>,
    pub fta: Arc<ShiftTower>,
    /// L(B) -> F(A), both identified with N^∨.
    kappa: Mat,
    kappa_inv: Mat,
}

impl HochschildTransferAlt {
    pub fn new(n: Arc<Bimodule>, ta: Arc<ShiftTower>, tb: Arc<ShiftTower>) -> Result<HochschildTransferAlt> {
        let (a, b) = (n.left.clone(), n.right.clone());
        let aop = a.opposite();
        let bae = tensor_product(&b, &aop)?;
        let nd = n.dual();
        let reg_aop = Bimodule::regular(&aop);
        let x = Bimodule::outer(&n, &reg_aop, &a.enveloping(), &bae, format!("{}⊠{}", n.name, aop.name()))?;
        let xadj = Adjunction::new(Arc::new(x))?;
        let tr = Transfer::from_adjunction(&xadj)?;
        let xl = Bimodule::outer(&Bimodule::regular(&b), &nd.transpose_op(), &bae, &b.enveloping(), format!("−⊗{}", nd.name))?;
        let l = TensorFunctor::new(Arc::new(xl), format!("−⊗{}", nd.name))?;
        let ltb = ShiftTower::induced(l.clone(), tb.clone())?;
        let fta = tr.induce(&ta)?;
        let a_lat = ta.level(0)?;
        let b_lat = tb.level(0)?;
        let lb = l.lattice(&b_lat)?;
        let fa = tr.f.lattice(&a_lat)?;
        // μ ∈ N^∨ ↦ 1_B ⊗ μ in L(B), and μ ↦ (μ ⊠ 1) ∈ X^∨ ⊗ A, where the
        // pairing of μ ⊠ c with m ⊠ c' is μ(m)·s(c c').
        let r = n.rank;
        let one_b = b.one();
        let one_a = a.one();
        let gram = &a.gram;
        let mut lcols = Vec::with_capacity(r);
        let mut fcols = Vec::with_capacity(r);
        for q in 0..r {
            let mu = crate::arith::unit_vec(r, q);
            lcols.push(l.tensor(&b_lat, &tensor_elem(&one_b, &mu), &one_b)?);
            let xd = tensor_elem(&mu, &gram.vec_mul(&one_a));
            fcols.push(tr.f.tensor(&a_lat, &xd, &one_a)?);
        }
        let lmap = Mat::from_cols(lb.rank, &lcols);
        let fmap = Mat::from_cols(fa.rank, &fcols);
        let lmap_inv = lmap.inverse().map_err(|_| Error::Verification("− ⊗_B N^∨ applied to B is not N^∨".into()))?;
        let kappa = fmap.mul(&lmap_inv);
        let kappa_inv = kappa.inverse().map_err(|_| Error::Verification("identification of N^∨ is not invertible".into()))?;
        if !lb.is_hom_to(&fa, &kappa) || !kappa_inv.is_integral(a.p()) {
            return Err(Error::Verification("identification L(B) ≅ F(A) is not an isomorphism of lattices".into()));
        }
        Ok(HochschildTransferAlt { ta, tb, xadj, tr, l, ltb, fta, kappa, kappa_inv })
    }

    pub fn transfer(&self, tau: &TateElement) -> Result<TateElement> {
        if tau.src.id() != self.tb.id() || tau.dst.id() != self.tb.id() || tau.src_level != 0 {
            return Err(Error::Mismatch("τ is not a class in the B^e tower".into()));
        }
        let d = tau.degree;
        let b0 = self.tb.level(0)?;
        let bd = self.tb.level(d)?;
        let lt = self.l.map(&b0, &bd, &tau.map)?;
        let c = shift_hom(&self.ltb, 0, &self.fta, 0, &self.kappa, d)?;
        let beta = TateElement { degree: d, src: self.fta.clone(), src_level: 0, dst: self.fta.clone(), map: c.mul(&lt.mul(&self.kappa_inv)) };
        self.tr.transfer_graded(&self.ta, &self.ta, &beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic_table, group_algebra, trivial_algebra};
    use crate::bimodules::bimodule::algebra_over_ground;
    use num_bigint::BigInt;

    #[test]
    fn hochschild_degree_zero_cyclic() {
        let a = group_algebra(2, &cyclic_table(2), None, "C2").unwrap();
        assert_eq!(hochschild_tate(&a, 0).unwrap().exps, vec![1, 1]);
        let o = trivial_algebra(3);
        assert!(hochschild_tate(&o, 0).unwrap().is_zero());
    }

    #[test]
    fn degree_zero_transfer_from_ground_ring_is_z() {
        let a = group_algebra(2, &cyclic_table(2), None, "C2").unwrap();
        let o = trivial_algebra(2);
        let n = Arc::new(algebra_over_ground(&a, &o));
        let (ta, tb) = (hochschild_tower(&a), hochschild_tower(&o));
        let h = HochschildTransfer::new(n.clone(), ta.clone(), tb.clone()).unwrap();
        let one = TateElement::identity(&tb).unwrap();
        let t = h.transfer(&one).unwrap();
        // multiplication by z_A = 2
        assert_eq!(t.map, Mat::scalar(2, &Q::int(2)));
        let alt = HochschildTransferAlt::new(n, ta.clone(), tb).unwrap();
        let t2 = alt.transfer(&one).unwrap();
        let e = ExtGroup::new(&ta, &ta, 0).unwrap();
        assert!(e.stable.in_pr(&t.map.sub(&t2.map)));
        assert_eq!(e.class(&t).unwrap(), vec![BigInt::from(0), BigInt::from(0)]);
    }

    #[test]
    fn regular_bimodule_transfer_is_identity_on_hh() {
        let a = group_algebra(3, &cyclic_table(3), None, "C3").unwrap();
        let n = Arc::new(Bimodule::regular(&a));
        let ta = hochschild_tower(&a);
        let h = HochschildTransfer::new(n.clone(), ta.clone(), ta.clone()).unwrap();
        let alt = HochschildTransferAlt::new(n, ta.clone(), ta.clone()).unwrap();
        for d in [-1, 0, 1] {
            let e = ExtGroup::new(&ta, &ta, d).unwrap();
            for g in e.generators() {
                let t = h.transfer(&g).unwrap();
                assert!(e.stable.in_pr(&t.map.sub(&g.map)), "route 1, degree {d}");
                let t2 = alt.transfer(&g).unwrap();
                assert!(e.stable.in_pr(&t2.map.sub(&g.map)), "route 2, degree {d}");
            }
            assert!(h.comparison_certificate(d).unwrap());
        }
    }
}
