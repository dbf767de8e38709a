use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::algebra::{Sym, Word};
use crate::arith::{unit_vec, Mat, Q};
use crate::Error;

use super::hom::Presentation;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// O-free left module over a symmetric algebra, given by the action of the
/// algebra generators; actions of the remaining basis elements are expanded
/// on demand through the algebra's words.
pub struct Lattice {
    pub alg: Sym,
    pub rank: usize,
    pub name: String,
    id: u64,
    gen_act: Vec<Mat>,
    full: Vec<OnceLock<Mat>>,
    pres: OnceLock<Presentation>,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lattice({} over {}, rank {})", self.name, self.alg.name(), self.rank)
    }
}

impl Lattice {
    /// Trusted constructor from generator actions.
    pub fn from_generators(alg: Sym, gen_act: Vec<Mat>, name: impl Into<String>) -> Lattice {
        assert_eq!(gen_act.len(), alg.alg.gens.len());
        let rank = gen_act.first().map_or(0, |m| m.rows());
        let n = alg.n();
        Lattice {
            alg,
            rank,
            name: name.into(),
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            gen_act,
            full: (0..n).map(|_| OnceLock::new()).collect(),
            pres: OnceLock::new(),
        }
    }

    /// Constructor from the action of every basis element, validated against
    /// the structure constants.
    pub fn from_basis_actions(alg: Sym, mats: Vec<Mat>, name: impl Into<String>) -> Result<Lattice, Error> {
        let name = name.into();
        let n = alg.n();
        if mats.len() != n {
            return Err(Error::InvalidModule(format!("{name}: expected {n} action matrices, got {}", mats.len())));
        }
        let m = mats[0].rows();
        let p = alg.p();
        for (i, a) in mats.iter().enumerate() {
            if a.shape() != (m, m) {
                return Err(Error::InvalidModule(format!("{name}: action {i} is not {m}x{m}")));
            }
            if !a.is_integral(p) {
                return Err(Error::InvalidModule(format!("{name}: action {i} not over O")));
            }
        }
        let mut unit = Mat::zeros(m, m);
        for (i, c) in alg.alg.unit.iter().enumerate() {
            unit.axpy(c, &mats[i]);
        }
        if unit != Mat::identity(m) {
            return Err(Error::InvalidModule(format!("{name}: unit does not act as identity")));
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = mats[i].mul(&mats[j]);
                let mut rhs = Mat::zeros(m, m);
                for (k, c) in alg.alg.product_of(i, j) {
                    rhs.axpy(c, &mats[*k]);
                }
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!("{name}: action violates x_{i}·x_{j}")));
                }
            }
        }
        let gen_act = alg.alg.gens.iter().map(|&g| mats[g].clone()).collect();
        let l = Lattice::from_generators(alg, gen_act, name);
        for (i, mat) in mats.into_iter().enumerate() {
            let _ = l.full[i].set(mat);
        }
        Ok(l)
    }

    pub fn id(&self) -> u64 {
        self.id
    }
    pub fn p(&self) -> u64 {
        self.alg.p()
    }
    pub fn n(&self) -> usize {
        self.alg.n()
    }
    pub fn gen_actions(&self) -> &[Mat] {
        &self.gen_act
    }

    /// Action matrix of the basis element x_i.
    pub fn act(&self, i: usize) -> &Mat {
        if let Some(m) = self.full[i].get() {
            return m;
        }
        let m = match self.alg.alg.left_words()[i] {
            Word::Unit => Mat::identity(self.rank),
            Word::Gen(g) => self.gen_act[g].clone(),
            Word::Mul(g, j) => self.gen_act[g].mul(self.act(j)),
        };
        self.full[i].get_or_init(|| m)
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn act_elem(&self, a: &[Q]) -> Mat {
        let mut m = Mat::zeros(self.rank, self.rank);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                m.axpy(c, self.act(i));
            }
        }
        m
    }

    /// ρ(x_i)·v for every basis element, one matrix-vector product each.
    pub fn orbit(&self, v: &[Q]) -> Vec<Vec<Q>> {
        let words = self.alg.alg.left_words();
        let n = words.len();
        let mut out: Vec<Option<Vec<Q>>> = vec![None; n];
        // words refer to earlier BFS entries, so resolve recursively
        fn get(
            k: usize,
            words: &[Word],
            out: &mut Vec<Option<Vec<Q>>>,
            v: &[Q],
            gens: &[Mat],
            full: &[OnceLock<Mat>],
        ) -> Vec<Q> {
            if let Some(x) = &out[k] {
                return x.clone();
            }
            let r = if let Some(m) = full[k].get() {
                m.mul_vec(v)
            } else {
                match words[k] {
                    Word::Unit => v.to_vec(),
                    Word::Gen(g) => gens[g].mul_vec(v),
                    Word::Mul(g, j) => {
                        let w = get(j, words, out, v, gens, full);
                        gens[g].mul_vec(&w)
                    }
                }
            };
            out[k] = Some(r.clone());
            r
        }
        for k in 0..n {
            get(k, words, &mut out, v, &self.gen_act, &self.full);
        }
        out.into_iter().map(Option::unwrap).collect()
    }

    /// Row vector ξ·ρ(x_i) for every basis element, via right words.
    pub fn corbit(&self, xi: &[Q]) -> Vec<Vec<Q>> {
        let words = self.alg.alg.right_words();
        let n = words.len();
        let mut out: Vec<Option<Vec<Q>>> = vec![None; n];
        fn get(k: usize, words: &[Word], out: &mut Vec<Option<Vec<Q>>>, xi: &[Q], gens: &[Mat]) -> Vec<Q> {
            if let Some(x) = &out[k] {
                return x.clone();
            }
            let r = match words[k] {
                Word::Unit => xi.to_vec(),
                Word::Gen(g) => gens[g].vec_mul(xi),
                Word::Mul(g, j) => {
                    let w = get(j, words, out, xi, gens);
                    gens[g].vec_mul(&w)
                }
            };
            out[k] = Some(r.clone());
            r
        }
        for k in 0..n {
            get(k, words, &mut out, xi, &self.gen_act);
        }
        out.into_iter().map(Option::unwrap).collect()
    }

    /// Checks that f: self -> other commutes with the generator actions.
    pub fn is_hom_to(&self, other: &Lattice, f: &Mat) -> bool {
        f.shape() == (other.rank, self.rank)
            && self.gen_act.iter().zip(&other.gen_act).all(|(a, b)| f.mul(a) == b.mul(f))
    }

    pub fn presentation(&self) -> &Presentation {
        self.pres.get_or_init(|| Presentation::compute(self))
    }

    pub fn check_same_algebra(&self, o: &Lattice) -> Result<(), Error> {
        if !self.alg.same_structure(&o.alg) {
            return Err(Error::Mismatch(format!(
                "{} is over {} but {} is over {}",
                self.name,
                self.alg.name(),
                o.name,
                o.alg.name()
            )));
        }
        Ok(())
    }

    // ----- constructions -----

    /// Left regular module A.
    pub fn regular(alg: &Sym) -> Lattice {
        let acts = alg.alg.gens.iter().map(|&g| alg.alg.left_regular(g).clone()).collect();
        Lattice::from_generators(alg.clone(), acts, format!("{}", alg.name()))
    }

    /// Free module A^r, block k being the k-th copy of A.
    pub fn free(alg: &Sym, r: usize) -> Lattice {
        let acts = alg
            .alg
            .gens
            .iter()
            .map(|&g| Mat::identity(r).kron(alg.alg.left_regular(g)))
            .collect();
        Lattice::from_generators(alg.clone(), acts, format!("{}^{r}", alg.name()))
    }

    /// O with every generator acting by the given scalar (e.g. trivial or sign module).
    pub fn one_dim(alg: &Sym, gen_scalars: &[Q], name: &str) -> Lattice {
        let acts = gen_scalars.iter().map(|c| Mat::scalar(1, c)).collect();
        Lattice::from_generators(alg.clone(), acts, name)
    }

    pub fn direct_sum(parts: &[&Lattice]) -> Lattice {
        let alg = parts[0].alg.clone();
        let ng = alg.alg.gens.len();
        let acts = (0..ng)
            .map(|g| {
                let blocks: Vec<&Mat> = parts.iter().map(|l| &l.gen_act[g]).collect();
                Mat::block_diag(&blocks)
            })
            .collect();
        let name = parts.iter().map(|l| l.name.as_str()).collect::<Vec<_>>().join("⊕");
        Lattice::from_generators(alg, acts, name)
    }

    /// Submodule with inclusion `iota` and integral left inverse `left_inv`.
    pub fn submodule(&self, iota: &Mat, left_inv: &Mat, name: impl Into<String>) -> Lattice {
        let acts = self.gen_act.iter().map(|a| left_inv.mul(&a.mul(iota))).collect();
        Lattice::from_generators(self.alg.clone(), acts, name)
    }

    /// O-dual U^∨ = Hom_O(U, O) as a left module over the opposite algebra.
    pub fn dual(&self) -> Lattice {
        let op = self.alg.opposite();
        let acts = op.alg.gens.iter().map(|&g| self.act(g).transpose()).collect();
        Lattice::from_generators(op, acts, format!("{}^∨", self.name))
    }

    /// Same matrices, viewed over `alg` (which must have the same structure,
    /// e.g. the same algebra with a rescaled form).
    pub fn rebind(&self, alg: &Sym) -> Result<Lattice, Error> {
        if !alg.same_structure(&self.alg) {
            return Err(Error::Mismatch("rebind to a different algebra".into()));
        }
        let acts = alg.alg.gens.iter().map(|&g| self.act(g).clone()).collect();
        Ok(Lattice::from_generators(alg.clone(), acts, self.name.clone()))
    }

    /// Restriction along an algebra map B -> A given as an n_A × n_B matrix.
    pub fn restrict(&self, b: &Sym, map: &Mat, name: impl Into<String>) -> Lattice {
        let acts = b.alg.gens.iter().map(|&h| self.act_elem(&map.col(h))).collect();
        Lattice::from_generators(b.clone(), acts, name)
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Q> {
        unit_vec(self.rank, i)
    }
}

pub type LatticeRef = Arc<Lattice>;
