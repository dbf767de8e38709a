use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::algebra::Sym;
use crate::arith::{kernel_with_left_inverse, Mat, Q};
use crate::{Error, Result};

use super::hom::ProjBasis;
use super::lattice::Lattice;

/// Which projective cover the syzygy step uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverKind {
    /// A ⊗_O W -> W, the bar-type cover.
    Tensor,
    /// A^r -> W on greedily chosen A-generators of W.
    Generators,
}

/// Shape of a registered sequence, used to pick exact shift formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SesKind {
    /// mid = A ⊗_O quo with π the multiplication map.
    Syzygy,
    /// mid = dual of A^op ⊗_O sub^∨, identified with A ⊗_O sub via the form.
    Cosyzygy,
    Generic,
}

/// O-split short exact sequence 0 -> sub -> mid -> quo -> 0 with mid projective,
/// ι·r + σ·π = id.
#[derive(Debug)]
pub struct Ses {
    pub sub: Arc<Lattice>,
    pub mid: Arc<Lattice>,
    pub quo: Arc<Lattice>,
    pub iota: Mat,
    pub pi: Mat,
    pub retract: Mat,
    pub section: Mat,
    pub proj: ProjBasis,
    pub kind: SesKind,
}

impl Ses {
    pub fn verify(&self) -> bool {
        let (a, b, c) = (&self.sub, &self.mid, &self.quo);
        let m = b.rank;
        a.is_hom_to(b, &self.iota)
            && b.is_hom_to(c, &self.pi)
            && self.pi.mul(&self.iota).is_zero()
            && self.retract.mul(&self.iota) == Mat::identity(a.rank)
            && self.pi.mul(&self.section) == Mat::identity(c.rank)
            && self.iota.mul(&self.retract).add(&self.section.mul(&self.pi)) == Mat::identity(m)
            && self.proj.verify(b)
    }
}

/// Syzygy sequence 0 -> Ω(W) -> P -> W -> 0 for the given cover.
pub fn syzygy_ses(w: &Arc<Lattice>, cover: CoverKind, sub_name: String) -> Ses {
    let alg = &w.alg;
    let n = alg.n();
    let m = w.rank;
    let (pi, section, r) = match cover {
        CoverKind::Tensor => {
            let pi = super::hom::multiplication_map(w);
            let mut sec = Mat::zeros(m * n, m);
            for j in 0..m {
                for (i, c) in alg.alg.unit.iter().enumerate() {
                    if !c.is_zero() {
                        sec[(j * n + i, j)] = c.clone();
                    }
                }
            }
            (pi, sec, m)
        }
        CoverKind::Generators => {
            let pres = w.presentation();
            (pres.pi.clone(), pres.section.clone(), pres.r())
        }
    };
    let mid = Arc::new(Lattice::free(alg, r));
    let (iota, kinv) = kernel_with_left_inverse(&pi, w.p());
    let retract = kinv.mul(&Mat::identity(r * n).sub(&section.mul(&pi)));
    let sub = Arc::new(mid.submodule(&iota, &kinv, sub_name));
    let kind = if cover == CoverKind::Tensor { SesKind::Syzygy } else { SesKind::Generic };
    Ses { sub, mid, quo: w.clone(), iota, pi, retract, section, proj: ProjBasis::free(alg, r), kind }
}

/// Cosyzygy sequence 0 -> W -> P -> Σ(W) -> 0, the O-dual of the syzygy
/// sequence of W^∨ over A^op, transported to A^r by the form.
pub fn cosyzygy_ses(w: &Arc<Lattice>, cover: CoverKind, quo_name: String) -> Ses {
    let alg = &w.alg;
    let n = alg.n();
    let wd = Arc::new(w.dual());
    let s = syzygy_ses(&wd, cover, format!("Ω({})", wd.name));
    let r = s.mid.rank / n;
    let phi = Mat::identity(r).kron(&alg.gram_inv);
    let phi_inv = Mat::identity(r).kron(&alg.gram);
    let iota = phi.mul(&s.pi.transpose());
    let pi = s.iota.transpose().mul(&phi_inv);
    let section = phi.mul(&s.retract.transpose());
    let retract = s.section.transpose().mul(&phi_inv);
    let mid = Arc::new(Lattice::free(alg, r));
    let kdual = s.sub.dual();
    // kdual lives over (A^op)^op; rebind to A, whose generators agree.
    let acts: Vec<Mat> = alg.alg.gens.iter().map(|&g| kdual.act(g).clone()).collect();
    let quo = Arc::new(Lattice::from_generators(alg.clone(), acts, quo_name));
    let kind = if cover == CoverKind::Tensor { SesKind::Cosyzygy } else { SesKind::Generic };
    Ses { sub: w.clone(), mid, quo, iota, pi, retract, section, proj: ProjBasis::free(alg, r), kind }
}

/// Functor applied level-wise to an existing tower.
pub trait SesFunctor: Send + Sync {
    fn target(&self) -> Sym;
    fn apply_lattice(&self, w: &Arc<Lattice>) -> Result<Arc<Lattice>>;
    fn apply_ses(&self, s: &Ses) -> Result<Ses>;
    fn name(&self) -> String;
}

enum Source {
    Canonical(CoverKind),
    Induced(Arc<dyn SesFunctor>, Arc<ShiftTower>),
}

static NEXT_TOWER: AtomicU64 = AtomicU64::new(1);

/// A module with its registered shift sequences. Level k is Σ^k of the base;
/// sequence k connects level k (sub) to level k+1 (quo). Levels are built on
/// first use and cached.
pub struct ShiftTower {
    pub name: String,
    pub alg: Sym,
    id: u64,
    source: Source,
    levels: Mutex<BTreeMap<i32, Arc<Lattice>>>,
    seqs: Mutex<BTreeMap<i32, Arc<Ses>>>,
    cap: i32,
}

impl std::fmt::Debug for ShiftTower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ShiftTower({})", self.name)
    }
}

pub fn depth_cap() -> i32 {
    std::env::var("TATE_MAX_DEPTH").ok().and_then(|s| s.parse().ok()).unwrap_or(4)
}

impl ShiftTower {
    pub fn new(base: Arc<Lattice>, cover: CoverKind) -> Arc<ShiftTower> {
        let mut levels = BTreeMap::new();
        let name = base.name.clone();
        let alg = base.alg.clone();
        levels.insert(0, base);
        Arc::new(ShiftTower {
            name,
            alg,
            id: NEXT_TOWER.fetch_add(1, Ordering::Relaxed),
            source: Source::Canonical(cover),
            levels: Mutex::new(levels),
            seqs: Mutex::new(BTreeMap::new()),
            cap: depth_cap(),
        })
    }

    pub fn canonical(base: Lattice) -> Arc<ShiftTower> {
        ShiftTower::new(Arc::new(base), CoverKind::Tensor)
    }

    pub fn induced(f: Arc<dyn SesFunctor>, base: Arc<ShiftTower>) -> Result<Arc<ShiftTower>> {
        let b0 = base.level(0)?;
        let l0 = f.apply_lattice(&b0)?;
        let mut levels = BTreeMap::new();
        levels.insert(0, l0);
        Ok(Arc::new(ShiftTower {
            name: format!("{}({})", f.name(), base.name),
            alg: f.target(),
            id: NEXT_TOWER.fetch_add(1, Ordering::Relaxed),
            cap: base.cap,
            source: Source::Induced(f, base),
            levels: Mutex::new(levels),
            seqs: Mutex::new(BTreeMap::new()),
        }))
    }

    pub fn id(&self) -> u64 {
        self.id
    }
    pub fn cap(&self) -> i32 {
        self.cap
    }

    pub fn base(&self) -> Arc<Lattice> {
        self.levels.lock().unwrap()[&0].clone()
    }

    pub fn level(&self, k: i32) -> Result<Arc<Lattice>> {
        if let Some(l) = self.levels.lock().unwrap().get(&k) {
            return Ok(l.clone());
        }
        if k.abs() > self.cap {
            return Err(Error::DepthExceeded { requested: k, cap: self.cap });
        }
        let l = match &self.source {
            Source::Induced(f, base) => f.apply_lattice(&base.level(k)?)?,
            Source::Canonical(_) => {
                if k < 0 {
                    self.ses(k)?.sub.clone()
                } else {
                    self.ses(k - 1)?.quo.clone()
                }
            }
        };
        Ok(self.levels.lock().unwrap().entry(k).or_insert(l).clone())
    }

    /// Sequence k: 0 -> level k -> P_k -> level k+1 -> 0.
    pub fn ses(&self, k: i32) -> Result<Arc<Ses>> {
        if let Some(s) = self.seqs.lock().unwrap().get(&k) {
            return Ok(s.clone());
        }
        if k.abs() > self.cap || (k + 1).abs() > self.cap {
            return Err(Error::DepthExceeded { requested: k, cap: self.cap });
        }
        let s = match &self.source {
            Source::Canonical(cover) => {
                if k < 0 {
                    let w = self.level(k + 1)?;
                    syzygy_ses(&w, *cover, format!("Σ^{k}({})", self.name))
                } else {
                    let w = self.level(k)?;
                    cosyzygy_ses(&w, *cover, format!("Σ^{}({})", k + 1, self.name))
                }
            }
            Source::Induced(f, base) => {
                let bs = base.ses(k)?;
                let mut s = f.apply_ses(&bs)?;
                // keep level objects shared with the cache
                s.sub = self.level(k)?;
                s.quo = self.level(k + 1)?;
                s
            }
        };
        let s = Arc::new(s);
        if let Source::Canonical(_) = self.source {
            let mut lv = self.levels.lock().unwrap();
            if k < 0 {
                lv.entry(k).or_insert_with(|| s.sub.clone());
            } else {
                lv.entry(k + 1).or_insert_with(|| s.quo.clone());
            }
        }
        Ok(self.seqs.lock().unwrap().entry(k).or_insert(s).clone())
    }
}

fn is_scalar(f: &Mat) -> Option<Q> {
    if f.rows() != f.cols() {
        return None;
    }
    let c = if f.rows() == 0 { Q::zero() } else { f[(0, 0)].clone() };
    (*f == Mat::scalar(f.rows(), &c)).then_some(c)
}

/// Σ^{-1} of f: X_a -> Y_b, giving X_{a-1} -> Y_{b-1}.
pub fn sigma_minus(tx: &ShiftTower, a: i32, ty: &ShiftTower, b: i32, f: &Mat) -> Result<Mat> {
    let sx = tx.ses(a - 1)?;
    let sy = ty.ses(b - 1)?;
    if Arc::ptr_eq(&sx, &sy) {
        if let Some(c) = is_scalar(f) {
            return Ok(Mat::scalar(sx.sub.rank, &c));
        }
    }
    let n = tx.alg.n();
    if sx.kind == SesKind::Syzygy && sy.kind == SesKind::Syzygy {
        let g = f.kron(&Mat::identity(n));
        return Ok(sy.retract.mul(&g.mul(&sx.iota)));
    }
    // g(p) = Σ_k φ_k(p)·σ_Y f π_X(p_k) lifts f along the covers.
    let mut g_iota = Mat::zeros(sy.mid.rank, sx.sub.rank);
    for (pk, phik) in sx.proj.elems.iter().zip(&sx.proj.funcs) {
        let yk = sy.section.mul_vec(&f.mul_vec(&sx.pi.mul_vec(pk)));
        let orb = Mat::from_cols(sy.mid.rank, &sy.mid.orbit(&yk));
        g_iota.add_assign(&orb.mul(&phik.mul(&sx.iota)));
    }
    Ok(sy.retract.mul(&g_iota))
}

/// Σ of f: X_a -> Y_b, giving X_{a+1} -> Y_{b+1}.
pub fn sigma_plus(tx: &ShiftTower, a: i32, ty: &ShiftTower, b: i32, f: &Mat) -> Result<Mat> {
    let sx = tx.ses(a)?;
    let sy = ty.ses(b)?;
    if Arc::ptr_eq(&sx, &sy) {
        if let Some(c) = is_scalar(f) {
            return Ok(Mat::scalar(sx.quo.rank, &c));
        }
    }
    let n = tx.alg.n();
    if sx.kind == SesKind::Cosyzygy && sy.kind == SesKind::Cosyzygy {
        let g = f.kron(&Mat::identity(n));
        return Ok(sy.pi.mul(&g.mul(&sx.section)));
    }
    // Extension of ι_Y f along ι_X: g = Σ_i ρ(x_i) θ h ρ(x_i^∨) with
    // h = ι_Y f r_X and θ(q) = Σ_k s(ψ_k(q)) q_k.
    let alg = &tx.alg;
    let h = sy.iota.mul(&f.mul(&sx.retract));
    let s_row = &alg.form.coeffs;
    let gi = &alg.gram_inv;
    let mut g_sigma = Mat::zeros(sy.mid.rank, sx.quo.rank);
    for (qk, psik) in sy.proj.elems.iter().zip(&sy.proj.funcs) {
        let chi = psik.vec_mul(s_row);
        let chi = h.vec_mul(&chi);
        let co = sx.mid.corbit(&chi);
        // Φ_k: row i is χ ρ(x_i^∨)
        let mut phik = Mat::zeros(n, sx.mid.rank);
        for i in 0..n {
            for l in 0..n {
                let c = &gi[(l, i)];
                if c.is_zero() {
                    continue;
                }
                for t in 0..sx.mid.rank {
                    if !co[l][t].is_zero() {
                        let add = c * &co[l][t];
                        phik[(i, t)] += &add;
                    }
                }
            }
        }
        let orb = Mat::from_cols(sy.mid.rank, &sy.mid.orbit(qk));
        g_sigma.add_assign(&orb.mul(&phik.mul(&sx.section)));
    }
    Ok(sy.pi.mul(&g_sigma))
}

/// Σ^n of f: X_a -> Y_b, one registered sequence at a time.
pub fn shift_hom(tx: &ShiftTower, a: i32, ty: &ShiftTower, b: i32, f: &Mat, n: i32) -> Result<Mat> {
    let mut g = f.clone();
    let (mut a, mut b) = (a, b);
    for _ in 0..n.abs() {
        if n > 0 {
            g = sigma_plus(tx, a, ty, b, &g)?;
            a += 1;
            b += 1;
        } else {
            g = sigma_minus(tx, a, ty, b, &g)?;
            a -= 1;
            b -= 1;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic_table, group_algebra, s3_table};

    #[test]
    fn c2_syzygy_of_trivial_is_sign() {
        let a = group_algebra(2, &cyclic_table(2), None, "C2").unwrap();
        let t = ShiftTower::canonical(Lattice::one_dim(&a, &[Q::one()], "triv"));
        let l = t.level(-1).unwrap();
        assert_eq!(l.rank, 1);
        assert_eq!(l.gen_actions()[0], Mat::scalar(1, &Q::int(-1)));
        let l1 = t.level(1).unwrap();
        assert_eq!(l1.rank, 1);
        for k in -2..2 {
            assert!(t.ses(k).unwrap().verify(), "sequence {k}");
        }
    }

    #[test]
    fn ranks_follow_bar_formula() {
        let a = group_algebra(3, &cyclic_table(3), None, "C3").unwrap();
        let t = ShiftTower::canonical(Lattice::one_dim(&a, &[Q::one()], "triv"));
        assert_eq!(t.level(-1).unwrap().rank, 2);
        assert_eq!(t.level(-2).unwrap().rank, 4);
        assert_eq!(t.level(2).unwrap().rank, 4);
    }

    #[test]
    fn shifts_of_identity_scalars_and_zero() {
        let (tb, _) = s3_table();
        let a = group_algebra(3, &tb, None, "S3").unwrap();
        let t = ShiftTower::canonical(Lattice::one_dim(&a, &vec![Q::one(); a.alg.gens.len()], "triv"));
        for n in [-2, -1, 1, 2] {
            let r = t.level(n).unwrap().rank;
            assert_eq!(shift_hom(&t, 0, &t, 0, &Mat::identity(1), n).unwrap(), Mat::identity(r));
            let two = Mat::scalar(1, &Q::int(2));
            assert_eq!(shift_hom(&t, 0, &t, 0, &two, n).unwrap(), Mat::scalar(r, &Q::int(2)));
            assert!(shift_hom(&t, 0, &t, 0, &Mat::zeros(1, 1), n).unwrap().is_zero());
        }
        // Σ Σ^{-1} returns the original sequence on the nose
        let s = t.ses(-1).unwrap();
        assert!(Arc::ptr_eq(&s.quo, &t.level(0).unwrap()));
    }

    #[test]
    fn generator_cover_towers_are_exact() {
        let a = group_algebra(3, &cyclic_table(3), None, "C3").unwrap();
        let reg = Lattice::regular(&a);
        let u = Lattice::direct_sum(&[&Lattice::one_dim(&a, &[Q::one()], "triv"), &reg]);
        let t = ShiftTower::new(Arc::new(u), CoverKind::Generators);
        for k in -2..2 {
            assert!(t.ses(k).unwrap().verify());
        }
    }
}
