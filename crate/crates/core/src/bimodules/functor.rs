use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::algebra::Sym;
use crate::arith::{smith, Mat, Track, Q};
use crate::lattices::{Lattice, ProjBasis, Ses, SesFunctor, SesKind};
use crate::{Error, Result};

use super::bimodule::Bimodule;

/// X ⊗_Λ W for a Λ-lattice W, realized as the image of the idempotent
/// E_W = [ρ_W(φ_k(x_l))] on W^K, where (x_k, φ_k) is a right projective basis of X.
#[derive(Debug)]
pub struct Applied {
    pub src: Arc<Lattice>,
    pub out: Arc<Lattice>,
    /// Coordinates -> W^K.
    pub embed: Mat,
    /// W^K -> coordinates, equal to coords ∘ E_W.
    pub coords: Mat,
    pub idem: Mat,
}

/// The functor X ⊗_Λ − from Λ-lattices to Γ-lattices for a Γ-Λ-bimodule X
/// that is projective on the right.
pub struct TensorFunctor {
    pub x: Arc<Bimodule>,
    pub name: String,
    cache: Mutex<HashMap<u64, Arc<Applied>>>,
}

impl std::fmt::Debug for TensorFunctor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TensorFunctor({})", self.name)
    }
}

impl TensorFunctor {
    pub fn new(x: Arc<Bimodule>, name: impl Into<String>) -> Result<Arc<TensorFunctor>> {
        x.right_basis()?;
        Ok(Arc::new(TensorFunctor { x, name: name.into(), cache: Mutex::new(HashMap::new()) }))
    }

    pub fn source_alg(&self) -> &Sym {
        &self.x.right
    }
    pub fn target_alg(&self) -> &Sym {
        &self.x.left
    }

    fn rb(&self) -> &ProjBasis {
        self.x.right_basis().expect("checked at construction")
    }

    pub fn k(&self) -> usize {
        self.rb().len()
    }

    /// Basis elements x_k of the right projective basis.
    pub fn elems(&self) -> &[Vec<Q>] {
        &self.rb().elems
    }

    /// φ_k(x) ∈ Λ.
    fn phi(&self, k: usize, x: &[Q]) -> Vec<Q> {
        self.rb().funcs[k].mul_vec(x)
    }

    pub fn apply(&self, w: &Arc<Lattice>) -> Result<Arc<Applied>> {
        if let Some(a) = self.cache.lock().unwrap().get(&w.id()) {
            return Ok(a.clone());
        }
        if !w.alg.same_structure(self.source_alg()) {
            return Err(Error::Mismatch(format!("{} applied to a lattice over {}", self.name, w.alg.name())));
        }
        let kk = self.k();
        let m = w.rank;
        let elems = self.elems().to_vec();
        let mut idem = Mat::zeros(kk * m, kk * m);
        for k in 0..kk {
            for (l, xl) in elems.iter().enumerate() {
                let lam = self.phi(k, xl);
                idem.set_block(k * m, l * m, &w.act_elem(&lam));
            }
        }
        let s = smith(&idem, w.p(), Track { p: true, p_inv: true, q: false, q_inv: false });
        let rk = s.rank();
        debug_assert!(s.all_units());
        let embed = s.p_inv.as_ref().unwrap().select_cols(&(0..rk).collect::<Vec<_>>());
        let coords = s.p.as_ref().unwrap().select_rows(&(0..rk).collect::<Vec<_>>()).mul(&idem);
        let gamma = self.target_alg();
        let mut acts = Vec::with_capacity(gamma.alg.gens.len());
        for &g in &gamma.alg.gens {
            let lg = self.x.lact(g);
            let mut big = Mat::zeros(kk * m, kk * m);
            for k in 0..kk {
                for (l, xl) in elems.iter().enumerate() {
                    let lam = self.phi(k, &lg.mul_vec(xl));
                    if lam.iter().any(|c| !c.is_zero()) {
                        big.set_block(k * m, l * m, &w.act_elem(&lam));
                    }
                }
            }
            acts.push(coords.mul(&big.mul(&embed)));
        }
        let out = Arc::new(Lattice::from_generators(gamma.clone(), acts, format!("{}⊗{}", self.x.name, w.name)));
        let a = Arc::new(Applied { src: w.clone(), out, embed, coords, idem });
        Ok(self.cache.lock().unwrap().entry(w.id()).or_insert(a).clone())
    }

    pub fn lattice(&self, w: &Arc<Lattice>) -> Result<Arc<Lattice>> {
        Ok(self.apply(w)?.out.clone())
    }

    /// X ⊗ f for f: W -> W'.
    pub fn map(&self, w: &Arc<Lattice>, w2: &Arc<Lattice>, f: &Mat) -> Result<Mat> {
        let a = self.apply(w)?;
        let b = self.apply(w2)?;
        let big = Mat::identity(self.k()).kron(f);
        Ok(b.coords.mul(&big.mul(&a.embed)))
    }

    /// Coordinates of x ⊗ v in X ⊗ W.
    pub fn tensor(&self, w: &Arc<Lattice>, x: &[Q], v: &[Q]) -> Result<Vec<Q>> {
        let a = self.apply(w)?;
        let mut big = Vec::with_capacity(self.k() * w.rank);
        for k in 0..self.k() {
            let lam = self.phi(k, x);
            big.extend(w.act_elem(&lam).mul_vec(v));
        }
        Ok(a.coords.mul_vec(&big))
    }

    /// Matrix of v ↦ x ⊗ v, W -> X ⊗ W (O-linear).
    pub fn tensor_with(&self, w: &Arc<Lattice>, x: &[Q]) -> Result<Mat> {
        let a = self.apply(w)?;
        let mut big = Mat::zeros(self.k() * w.rank, w.rank);
        for k in 0..self.k() {
            big.set_block(k * w.rank, 0, &w.act_elem(&self.phi(k, x)));
        }
        Ok(a.coords.mul(&big))
    }

    /// Block k of the embedding: coordinates c ↦ w_k with c = Σ_k x_k ⊗ w_k.
    pub fn component(&self, w: &Arc<Lattice>, k: usize) -> Result<Mat> {
        let a = self.apply(w)?;
        let m = w.rank;
        Ok(a.embed.select_rows(&(k * m..(k + 1) * m).collect::<Vec<_>>()))
    }

    /// Projective basis of X ⊗ P from left bases of X and P:
    /// elements ξ_i ⊗ p_j, functions x ⊗ p ↦ χ_i(x·ψ_j(p)).
    pub fn projective_image(&self, p: &Arc<Lattice>, pb: &ProjBasis) -> Result<ProjBasis> {
        let lb = self.x.left_basis()?;
        let kk = self.k();
        let blocks: Vec<Mat> = (0..kk).map(|k| self.component(p, k)).collect::<Result<_>>()?;
        let orbs: Vec<Mat> = self.elems().iter().map(|xk| Mat::from_cols(self.x.rank, &self.x.rmod.orbit(xk))).collect();
        let mut elems = Vec::new();
        let mut funcs = Vec::new();
        for (xi, chi) in lb.elems.iter().zip(&lb.funcs) {
            for (pj, psi) in pb.elems.iter().zip(&pb.funcs) {
                elems.push(self.tensor(p, xi, pj)?);
                let mut f = Mat::zeros(chi.rows(), self.apply(p)?.out.rank);
                for k in 0..kk {
                    f.add_assign(&chi.mul(&orbs[k]).mul(psi).mul(&blocks[k]));
                }
                funcs.push(f);
            }
        }
        Ok(ProjBasis { elems, funcs })
    }
}

impl SesFunctor for TensorFunctor {
    fn target(&self) -> Sym {
        self.target_alg().clone()
    }
    fn apply_lattice(&self, w: &Arc<Lattice>) -> Result<Arc<Lattice>> {
        self.lattice(w)
    }
    fn apply_ses(&self, s: &Ses) -> Result<Ses> {
        let a = self.apply(&s.sub)?;
        let b = self.apply(&s.mid)?;
        let c = self.apply(&s.quo)?;
        let k = self.k();
        let d = |f: &Mat| Mat::identity(k).kron(f);
        let iota = b.coords.mul(&d(&s.iota).mul(&a.embed));
        let pi = c.coords.mul(&d(&s.pi).mul(&b.embed));
        let retract = a.coords.mul(&d(&s.retract).mul(&b.embed));
        let section = b.coords.mul(&d(&s.section).mul(&c.embed));
        let proj = self.projective_image(&s.mid, &s.proj)?;
        Ok(Ses { sub: a.out.clone(), mid: b.out.clone(), quo: c.out.clone(), iota, pi, retract, section, proj, kind: SesKind::Generic })
    }
    fn name(&self) -> String {
        self.name.clone()
    }
}
