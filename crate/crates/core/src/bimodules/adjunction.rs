use std::sync::Arc;

use crate::arith::{dot, unit_vec, Mat, Q};
use crate::lattices::{hom_space, Lattice};
use crate::{Error, Result};

use super::bimodule::Bimodule;
use super::functor::TensorFunctor;

/// The two adjunctions between M ⊗_B − and M^∨ ⊗_A − for a perfect A-B-bimodule M.
pub struct Adjunction {
    pub m: Arc<Bimodule>,
    pub md: Arc<Bimodule>,
    /// M^∨ ⊗_A −
    pub f: Arc<TensorFunctor>,
    /// M ⊗_B −
    pub h: Arc<TensorFunctor>,
}

/// The four adjunction maps as matrices over O:
/// ε_M: B -> M^∨ ⊗_A M, η_M: M ⊗_B M^∨ -> A, ε_{M^∨}: A -> M ⊗_B M^∨,
/// η_{M^∨}: M^∨ ⊗_A M -> B, with the tensor products as computed by the functors.
#[derive(Clone, Debug)]
pub struct AdjunctionData {
    pub eps_m: Mat,
    pub eta_m: Mat,
    pub eps_md: Mat,
    pub eta_md: Mat,
    /// M^∨ ⊗_A M as a B-lattice.
    pub mdm: Arc<Lattice>,
    /// M ⊗_B M^∨ as an A-lattice.
    pub mmd: Arc<Lattice>,
}

impl Adjunction {
    pub fn new(m: Arc<Bimodule>) -> Result<Adjunction> {
        m.check_perfect()?;
        let md = Arc::new(m.dual());
        md.check_perfect()?;
        let f = TensorFunctor::new(md.clone(), format!("{}⊗−", md.name))?;
        let h = TensorFunctor::new(m.clone(), format!("{}⊗−", m.name))?;
        Ok(Adjunction { m, md, f, h })
    }

    pub fn a(&self) -> &crate::algebra::Sym {
        &self.m.left
    }
    pub fn b(&self) -> &crate::algebra::Sym {
        &self.m.right
    }

    /// η_M(m ⊗ μ) = Σ_i μ(x_i^∨ m) x_i ∈ A.
    pub fn eta(&self, m: &[Q], mu: &[Q]) -> Vec<Q> {
        let a = self.a();
        a.dual.iter().map(|d| dot(mu, &self.m.lmod.act_elem(d).mul_vec(m))).collect()
    }

    /// η_{M^∨}(μ ⊗ m) = Σ_k μ(m y_k^∨) y_k ∈ B.
    pub fn eta_dual(&self, mu: &[Q], m: &[Q]) -> Vec<Q> {
        let b = self.b();
        b.dual.iter().map(|d| dot(mu, &self.m.rmod.act_elem(d).mul_vec(m))).collect()
    }

    /// Terms (m_j, t∘β_j) of ε_{M^∨}(1_A) = Σ_j m_j ⊗ (t∘β_j).
    pub fn eps_dual_terms(&self) -> Result<Vec<(Vec<Q>, Vec<Q>)>> {
        let rb = self.m.right_basis()?;
        let t = &self.b().form.coeffs;
        Ok(rb.elems.iter().zip(&rb.funcs).map(|(mj, bj)| (mj.clone(), bj.vec_mul(t))).collect())
    }

    /// Terms (s∘α_i, m_i) of ε_M(1_B) = Σ_i (s∘α_i) ⊗ m_i.
    pub fn eps_terms(&self) -> Result<Vec<(Vec<Q>, Vec<Q>)>> {
        let lb = self.m.left_basis()?;
        let s = &self.a().form.coeffs;
        Ok(lb.elems.iter().zip(&lb.funcs).map(|(mi, ai)| (ai.vec_mul(s), mi.clone())).collect())
    }

    /// π_M = η_M(ε_{M^∨}(1_A)) ∈ Z(A).
    pub fn pi_m(&self) -> Result<Vec<Q>> {
        let mut out = vec![Q::zero(); self.a().n()];
        for (m, mu) in self.eps_dual_terms()? {
            crate::arith::vec_axpy(&mut out, &Q::one(), &self.eta(&m, &mu));
        }
        Ok(out)
    }

    /// π_{M^∨} = η_{M^∨}(ε_M(1_B)) ∈ Z(B).
    pub fn pi_md(&self) -> Result<Vec<Q>> {
        let mut out = vec![Q::zero(); self.b().n()];
        for (mu, m) in self.eps_terms()? {
            crate::arith::vec_axpy(&mut out, &Q::one(), &self.eta_dual(&mu, &m));
        }
        Ok(out)
    }

    pub fn data(&self) -> Result<AdjunctionData> {
        let a = self.a().clone();
        let b = self.b().clone();
        let mdm = self.f.lattice(&self.m.lmod)?;
        let mmd = self.h.lattice(&self.md.lmod)?;
        // ε_M
        let mut e1 = vec![Q::zero(); mdm.rank];
        for (mu, m) in self.eps_terms()? {
            crate::arith::vec_axpy(&mut e1, &Q::one(), &self.f.tensor(&self.m.lmod, &mu, &m)?);
        }
        let eps_m = Mat::from_cols(mdm.rank, &mdm.orbit(&e1));
        // ε_{M^∨}
        let mut e2 = vec![Q::zero(); mmd.rank];
        for (m, mu) in self.eps_dual_terms()? {
            crate::arith::vec_axpy(&mut e2, &Q::one(), &self.h.tensor(&self.md.lmod, &m, &mu)?);
        }
        let eps_md = Mat::from_cols(mmd.rank, &mmd.orbit(&e2));
        // η_M: Σ_l m_l ⊗ w_l ↦ Σ_l η(m_l, w_l)
        let mut eta_m = Mat::zeros(a.n(), mmd.rank);
        for (l, ml) in self.h.elems().iter().enumerate() {
            let comp = self.h.component(&self.md.lmod, l)?;
            for c in 0..mmd.rank {
                let w = comp.col(c);
                let v = self.eta(ml, &w);
                for (i, x) in v.into_iter().enumerate() {
                    eta_m[(i, c)] += &x;
                }
            }
        }
        let mut eta_md = Mat::zeros(b.n(), mdm.rank);
        for (k, nk) in self.f.elems().iter().enumerate() {
            let comp = self.f.component(&self.m.lmod, k)?;
            for c in 0..mdm.rank {
                let w = comp.col(c);
                let v = self.eta_dual(nk, &w);
                for (i, x) in v.into_iter().enumerate() {
                    eta_md[(i, c)] += &x;
                }
            }
        }
        Ok(AdjunctionData { eps_m, eta_m, eps_md, eta_md, mdm, mmd })
    }

    /// The four triangle identities, evaluated on every basis vector.
    /// Returns the names of the identities that fail.
    pub fn triangle_failures(&self) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        let r = self.m.rank;
        let eps = self.eps_terms()?;
        let epsd = self.eps_dual_terms()?;
        for t in 0..r {
            let e = unit_vec(r, t);
            // (η_M ⊗ Id_M)(Id_M ⊗ ε_M): m ↦ Σ_i η(m, s∘α_i)·m_i
            let mut v = vec![Q::zero(); r];
            for (mu, mi) in &eps {
                let a = self.eta(&e, mu);
                crate::arith::vec_axpy(&mut v, &Q::one(), &self.m.lmod.act_elem(&a).mul_vec(mi));
            }
            if v != e {
                bad.push(format!("(η_M⊗Id)(Id⊗ε_M) at basis vector {t}"));
            }
            // (Id_{M^∨} ⊗ η_M)(ε_M ⊗ Id_{M^∨}): μ ↦ Σ_i (s∘α_i)·η(m_i, μ)
            let mut v = vec![Q::zero(); r];
            for (mu, mi) in &eps {
                let a = self.eta(mi, &e);
                crate::arith::vec_axpy(&mut v, &Q::one(), &self.md.ract_elem(&a).mul_vec(mu));
            }
            if v != e {
                bad.push(format!("(Id⊗η_M)(ε_M⊗Id) at basis vector {t}"));
            }
            // (η_{M^∨} ⊗ Id_{M^∨})(Id_{M^∨} ⊗ ε_{M^∨}): μ ↦ Σ_j η'(μ, m_j)·ν_j
            let mut v = vec![Q::zero(); r];
            for (mj, nu) in &epsd {
                let b = self.eta_dual(&e, mj);
                crate::arith::vec_axpy(&mut v, &Q::one(), &self.md.lmod.act_elem(&b).mul_vec(nu));
            }
            if v != e {
                bad.push(format!("(η_M∨⊗Id)(Id⊗ε_M∨) at basis vector {t}"));
            }
            // (Id_M ⊗ η_{M^∨})(ε_{M^∨} ⊗ Id_M): m ↦ Σ_j m_j·η'(ν_j, m)
            let mut v = vec![Q::zero(); r];
            for (mj, nu) in &epsd {
                let b = self.eta_dual(nu, &e);
                crate::arith::vec_axpy(&mut v, &Q::one(), &self.m.rmod.act_elem(&b).mul_vec(mj));
            }
            if v != e {
                bad.push(format!("(Id⊗η_M∨)(ε_M∨⊗Id) at basis vector {t}"));
            }
        }
        Ok(bad)
    }

    /// The isomorphism M^∨ ⊗_A U -> Hom_A(M, U), in the coordinates of the
    /// functor and of `hom_space(M, U)`.
    pub fn dual_tensor_iso(&self, u: &Arc<Lattice>) -> Result<Mat> {
        let fu = self.f.lattice(u)?;
        let hs = hom_space(&self.m.lmod, u)?;
        let a = self.a();
        let duals: Vec<Mat> = a.dual.iter().map(|d| self.m.lmod.act_elem(d)).collect();
        let mut cols = Vec::with_capacity(fu.rank);
        let comps: Vec<Mat> = (0..self.f.k()).map(|k| self.f.component(u, k)).collect::<Result<_>>()?;
        for c in 0..fu.rank {
            // Σ_k ν_k ⊗ u_k ↦ (m ↦ Σ_k Σ_i ν_k(x_i^∨ m) x_i u_k)
            let mut f = Mat::zeros(u.rank, self.m.rank);
            for (k, nk) in self.f.elems().iter().enumerate() {
                let uk = comps[k].col(c);
                let orb = u.orbit(&uk);
                for (i, d) in duals.iter().enumerate() {
                    let row = d.vec_mul(nk);
                    f.add_assign(&Mat::col_vector(&orb[i]).mul(&Mat::from_rows(vec![row])));
                }
            }
            cols.push(hs.coords(&f).ok_or_else(|| Error::Verification("image is not an A-homomorphism".into()))?);
        }
        Ok(Mat::from_cols(hs.rank(), &cols))
    }
}

impl Bimodule {
    /// Right action of an element of the right algebra.
    pub fn ract_elem(&self, b: &[Q]) -> Mat {
        self.rmod.act_elem(b)
    }
}
