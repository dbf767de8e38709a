use std::sync::{Arc, OnceLock};

use crate::algebra::Sym;
use crate::arith::{Mat, Q};
use crate::lattices::{projective_basis, Lattice, ProjBasis};
use crate::{Error, Result};

/// A-B-bimodule, O-free of finite rank. The left structure is a lattice over A,
/// the right structure a lattice over B^op (m·b = rmod.act(b)·m).
pub struct Bimodule {
    pub left: Sym,
    pub right: Sym,
    pub rank: usize,
    pub name: String,
    pub lmod: Arc<Lattice>,
    pub rmod: Arc<Lattice>,
    lpb: OnceLock<Result<ProjBasis>>,
    rpb: OnceLock<Result<ProjBasis>>,
}

impl std::fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Bimodule({}: {}-{}, rank {})", self.name, self.left.name(), self.right.name(), self.rank)
    }
}

pub type BimoduleRef = Arc<Bimodule>;

impl Bimodule {
    /// Trusted constructor from generator actions of A (left) and B (right).
    pub fn from_generators(left: &Sym, right: &Sym, lact: Vec<Mat>, ract: Vec<Mat>, name: impl Into<String>) -> Bimodule {
        let name = name.into();
        let lmod = Lattice::from_generators(left.clone(), lact, name.clone());
        let rmod = Lattice::from_generators(right.opposite(), ract, format!("{name} (right)"));
        Bimodule::from_lattices(left, right, lmod, rmod, name)
    }

    fn from_lattices(left: &Sym, right: &Sym, lmod: Lattice, rmod: Lattice, name: String) -> Bimodule {
        assert_eq!(lmod.rank, rmod.rank);
        Bimodule {
            left: left.clone(),
            right: right.clone(),
            rank: lmod.rank,
            name,
            lmod: Arc::new(lmod),
            rmod: Arc::new(rmod),
            lpb: OnceLock::new(),
            rpb: OnceLock::new(),
        }
    }

    /// Validated constructor from the action of every basis element on each side.
    pub fn from_basis_actions(left: &Sym, right: &Sym, lmats: Vec<Mat>, rmats: Vec<Mat>, name: &str) -> Result<Bimodule> {
        let lmod = Lattice::from_basis_actions(left.clone(), lmats, name)?;
        let rmod = Lattice::from_basis_actions(right.opposite(), rmats, format!("{name} (right)"))
            .map_err(|e| Error::InvalidModule(format!("right action: {e}")))?;
        if lmod.rank != rmod.rank {
            return Err(Error::InvalidModule(format!("{name}: left rank {} but right rank {}", lmod.rank, rmod.rank)));
        }
        let b = Bimodule::from_lattices(left, right, lmod, rmod, name.to_string());
        if let Some((i, j)) = b.non_commuting() {
            return Err(Error::InvalidModule(format!("{name}: left x_{i} and right y_{j} do not commute")));
        }
        Ok(b)
    }

    /// First pair of basis elements whose actions do not commute.
    pub fn non_commuting(&self) -> Option<(usize, usize)> {
        for i in 0..self.left.n() {
            for j in 0..self.right.n() {
                let (l, r) = (self.lmod.act(i), self.rmod.act(j));
                if l.mul(r) != r.mul(l) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn p(&self) -> u64 {
        self.left.p()
    }
    pub fn lact(&self, i: usize) -> &Mat {
        self.lmod.act(i)
    }
    pub fn ract(&self, j: usize) -> &Mat {
        self.rmod.act(j)
    }

    /// Left projective basis (m_i, α_i), α_i ∈ Hom_A(M, A).
    pub fn left_basis(&self) -> Result<&ProjBasis> {
        self.lpb
            .get_or_init(|| projective_basis(&self.lmod).map_err(|_| Error::NotPerfect(format!("{} is not projective over {}", self.name, self.left.name()))))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Right projective basis (m_j, β_j), β_j ∈ Hom_{B^op}(M, B), Σ m_j β_j(m) = m.
    pub fn right_basis(&self) -> Result<&ProjBasis> {
        self.rpb
            .get_or_init(|| projective_basis(&self.rmod).map_err(|_| Error::NotPerfect(format!("{} is not projective over {}", self.name, self.right.name()))))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn check_perfect(&self) -> Result<()> {
        self.left_basis()?;
        self.right_basis()?;
        Ok(())
    }

    /// A as an A-A-bimodule.
    pub fn regular(a: &Sym) -> Bimodule {
        let lmod = Lattice::regular(a);
        let rmod = Lattice::regular(&a.opposite());
        Bimodule::from_lattices(a, a, lmod, rmod, a.name().to_string())
    }

    /// Restriction of the right action along an algebra map B -> (right algebra),
    /// given as a matrix n_right × n_B.
    pub fn restrict_right(&self, b: &Sym, map: &Mat, name: impl Into<String>) -> Bimodule {
        let name = name.into();
        let rmod = self.rmod.restrict(&b.opposite(), map, format!("{name} (right)"));
        let lmod = Lattice::from_generators(self.left.clone(), self.lmod.gen_actions().to_vec(), name.clone());
        Bimodule::from_lattices(&self.left, b, lmod, rmod, name)
    }

    /// Restriction of the left action along A -> (left algebra).
    pub fn restrict_left(&self, a: &Sym, map: &Mat, name: impl Into<String>) -> Bimodule {
        let name = name.into();
        let lmod = self.lmod.restrict(a, map, name.clone());
        let rmod = Lattice::from_generators(self.rmod.alg.clone(), self.rmod.gen_actions().to_vec(), format!("{name} (right)"));
        Bimodule::from_lattices(a, &self.right, lmod, rmod, name)
    }

    /// M^∨ = Hom_O(M, O) as a B-A-bimodule: (bμa)(m) = μ(a m b).
    pub fn dual(&self) -> Bimodule {
        let b = &self.right;
        let a = &self.left;
        let lact = b.alg.gens.iter().map(|&g| self.ract(g).transpose()).collect();
        let ract = a.alg.gens.iter().map(|&g| self.lact(g).transpose()).collect();
        Bimodule::from_generators(b, a, lact, ract, format!("{}^∨", self.name))
    }

    /// The same O-module as a B^op-A^op-bimodule: b·m·a := a m b.
    pub fn transpose_op(&self) -> Bimodule {
        let bop = self.right.opposite();
        let aop = self.left.opposite();
        let lact = bop.alg.gens.iter().map(|&g| self.ract(g).clone()).collect();
        let ract = aop.alg.gens.iter().map(|&g| self.lact(g).clone()).collect();
        Bimodule::from_generators(&bop, &aop, lact, ract, format!("{}^t", self.name))
    }

    /// X ⊠ Y over (A1 ⊗ A2, B1 ⊗ B2), basis x_i ⊗ y_j at index i·rank(Y) + j.
    /// The target algebras must be structurally the tensor products.
    pub fn outer(x: &Bimodule, y: &Bimodule, left: &Sym, right: &Sym, name: impl Into<String>) -> Result<Bimodule> {
        let (nl1, nl2) = (x.left.n(), y.left.n());
        let (nr1, nr2) = (x.right.n(), y.right.n());
        if left.n() != nl1 * nl2 || right.n() != nr1 * nr2 {
            return Err(Error::Mismatch("outer tensor: algebra sizes".into()));
        }
        let lact = left
            .alg
            .gens
            .iter()
            .map(|&g| x.lact(g / nl2).kron(y.lact(g % nl2)))
            .collect();
        let ract = right
            .alg
            .gens
            .iter()
            .map(|&g| x.ract(g / nr2).kron(y.ract(g % nr2)))
            .collect();
        Ok(Bimodule::from_generators(left, right, lact, ract, name))
    }

    pub fn direct_sum(x: &Bimodule, y: &Bimodule) -> Result<Bimodule> {
        if !x.left.same(&y.left) || !x.right.same(&y.right) {
            return Err(Error::Mismatch("direct sum of bimodules over different algebras".into()));
        }
        let lact = (0..x.left.alg.gens.len())
            .map(|g| Mat::block_diag(&[&x.lmod.gen_actions()[g], &y.lmod.gen_actions()[g]]))
            .collect();
        let ract = (0..x.rmod.gen_actions().len())
            .map(|g| Mat::block_diag(&[&x.rmod.gen_actions()[g], &y.rmod.gen_actions()[g]]))
            .collect();
        Ok(Bimodule::from_generators(&x.left, &x.right, lact, ract, format!("{}⊕{}", x.name, y.name)))
    }

    /// Same matrices over algebras with the same structure (e.g. rescaled forms).
    pub fn rebind(&self, left: &Sym, right: &Sym) -> Result<Bimodule> {
        if !left.same_structure(&self.left) || !right.same_structure(&self.right) {
            return Err(Error::Mismatch("rebind to different algebras".into()));
        }
        let lact = left.alg.gens.iter().map(|&g| self.lact(g).clone()).collect();
        let ract = right.alg.gens.iter().map(|&g| self.ract(g).clone()).collect();
        Ok(Bimodule::from_generators(left, right, lact, ract, self.name.clone()))
    }

    /// Conjugate by an O-basis change t (new coordinates = t · old).
    pub fn transport(&self, t: &Mat, t_inv: &Mat) -> Bimodule {
        let lact = self.lmod.gen_actions().iter().map(|a| t.mul(&a.mul(t_inv))).collect();
        let ract = self.rmod.gen_actions().iter().map(|a| t.mul(&a.mul(t_inv))).collect();
        Bimodule::from_generators(&self.left, &self.right, lact, ract, self.name.clone())
    }

    /// M as a left module over A ⊗ B^op (the algebra must have that structure).
    pub fn as_left_module(&self, env: &Sym) -> Lattice {
        let nb = self.right.n();
        let acts = env.alg.gens.iter().map(|&g| self.lact(g / nb).mul(self.ract(g % nb))).collect();
        Lattice::from_generators(env.clone(), acts, self.name.clone())
    }

    /// Functional μ: M -> O as a row vector, applied to m.
    pub fn pair(mu: &[Q], m: &[Q]) -> Q {
        crate::arith::dot(mu, m)
    }
}

/// A as a left A^e-module: (a ⊗ b)·x = a x b.
pub fn algebra_as_bimodule_lattice(a: &Sym) -> Lattice {
    let env = a.enveloping();
    let n = a.n();
    let acts = env
        .alg
        .gens
        .iter()
        .map(|&g| a.alg.left_regular(g / n).mul(a.alg.right_regular(g % n)))
        .collect();
    Lattice::from_generators(env, acts, a.name().to_string())
}

/// O[G] as an (O[G], O[H])-bimodule for a subgroup H, with `incl` mapping the
/// basis of O[H] to basis indices of O[G].
pub fn induction_bimodule(g: &Sym, h: &Sym, incl: &[usize]) -> Bimodule {
    let mut map = Mat::zeros(g.n(), h.n());
    for (j, &i) in incl.iter().enumerate() {
        map[(i, j)] = Q::one();
    }
    Bimodule::regular(g).restrict_right(h, &map, format!("{}↓{}", g.name(), h.name()))
}

/// A as an A-O-bimodule.
pub fn algebra_over_ground(a: &Sym, o: &Sym) -> Bimodule {
    let mut map = Mat::zeros(a.n(), 1);
    for (i, c) in a.alg.unit.iter().enumerate() {
        map[(i, 0)] = c.clone();
    }
    Bimodule::regular(a).restrict_right(o, &map, format!("{}", a.name()))
}

/// O^{d×e} as an (M_d, M_e)-bimodule, basis E_{pq} at index p·e + q.
pub fn matrix_bimodule(a: &Sym, b: &Sym, d: usize, e: usize) -> Result<Bimodule> {
    if a.n() != d * d || b.n() != e * e {
        return Err(Error::Mismatch("matrix bimodule sizes".into()));
    }
    let r = d * e;
    let lmats = (0..d * d)
        .map(|x| {
            let (i, j) = (x / d, x % d);
            let mut m = Mat::zeros(r, r);
            for q in 0..e {
                m[(i * e + q, j * e + q)] = Q::one();
            }
            m
        })
        .collect();
    let rmats = (0..e * e)
        .map(|x| {
            let (k, l) = (x / e, x % e);
            let mut m = Mat::zeros(r, r);
            for p in 0..d {
                m[(p * e + l, p * e + k)] = Q::one();
            }
            m
        })
        .collect();
    Bimodule::from_basis_actions(a, b, lmats, rmats, &format!("O^{d}x{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic_table, group_algebra, s3_table, trivial_algebra};

    #[test]
    fn duals_and_restriction() {
        let (t, _) = s3_table();
        let g = group_algebra(3, &t, None, "S3").unwrap();
        let h = group_algebra(3, &cyclic_table(3), None, "C3").unwrap();
        let m = induction_bimodule(&g, &h, &[0, 1, 2]);
        assert!(m.non_commuting().is_none());
        m.check_perfect().unwrap();
        assert_eq!(m.right_basis().unwrap().len(), 2);
        let d = m.dual();
        assert!(d.non_commuting().is_none());
        let dd = d.dual();
        for i in 0..6 {
            assert_eq!(dd.lact(i), m.lact(i));
        }
        for j in 0..3 {
            assert_eq!(dd.ract(j), m.ract(j));
        }
        let tp = m.transpose_op();
        assert!(tp.non_commuting().is_none());
    }

    #[test]
    fn ground_ring_bimodule_is_perfect() {
        let a = group_algebra(2, &cyclic_table(2), None, "C2").unwrap();
        let o = trivial_algebra(2);
        let m = algebra_over_ground(&a, &o);
        m.check_perfect().unwrap();
        assert_eq!(m.right_basis().unwrap().len(), 2);
        let lat = algebra_as_bimodule_lattice(&a);
        assert_eq!(lat.rank, 2);
    }

    #[test]
    fn outer_tensor_commutes() {
        let a = group_algebra(3, &cyclic_table(3), None, "C3").unwrap();
        let m = Bimodule::regular(&a);
        let x = Bimodule::outer(&m, &m.dual().transpose_op(), &a.enveloping(), &a.enveloping(), "X").unwrap();
        assert!(x.non_commuting().is_none());
        assert_eq!(x.rank, 9);
    }
}
