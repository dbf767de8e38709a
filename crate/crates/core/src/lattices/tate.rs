use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::arith::{kernel_with_left_inverse, residue, smith, Mat, MatlisValue, SubLattice, Track, Q};
use crate::{Error, Result};

use super::hom::{hom_space, projective_factoring_subspace, HomSpace, ProjBasis};
use super::lattice::Lattice;
use super::tower::{shift_hom, ShiftTower};

/// Finite O-module Z/p^{e_1} x ... x Z/p^{e_r}, 1 <= e_1 <= ... <= e_r.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionModule {
    pub p: u64,
    pub exps: Vec<u32>,
}

impl TorsionModule {
    pub fn zero(p: u64) -> TorsionModule {
        TorsionModule { p, exps: vec![] }
    }
    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }
    /// log_p of the order.
    pub fn length(&self) -> u32 {
        self.exps.iter().sum()
    }
}

impl fmt::Display for TorsionModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|&e| if e == 1 { format!("Z/{}", self.p) } else { format!("Z/{}^{}", self.p, e) })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Hom_A(U, V) / Hom^pr_A(U, V) with generator lifts.
#[derive(Clone, Debug)]
pub struct StableHom {
    pub src: Arc<Lattice>,
    pub dst: Arc<Lattice>,
    pub hom: HomSpace,
    pub pr: SubLattice,
    pub group: TorsionModule,
    /// Hom matrices lifting the generators of `group`, in order.
    pub gens: Vec<Mat>,
    comps: Vec<usize>,
}

impl StableHom {
    pub fn new(u: &Arc<Lattice>, v: &Arc<Lattice>) -> Result<StableHom> {
        let hom = hom_space(u, v)?;
        let pr = projective_factoring_subspace(u, v, &hom)?;
        if pr.rank() != hom.rank() {
            return Err(Error::NotSemisimple(format!(
                "Hom({}, {}) / Hom^pr has free rank {}",
                u.name,
                v.name,
                hom.rank() - pr.rank()
            )));
        }
        let p = u.p();
        let mut comps = Vec::new();
        let mut exps = Vec::new();
        let pinv = pr.transform_inv();
        let mut gens = Vec::new();
        for (i, &e) in pr.exps().iter().enumerate() {
            if e >= 1 {
                comps.push(i);
                exps.push(e);
                gens.push(hom.element(&pinv.col(i)));
            }
        }
        // smith orders exponents increasingly already; keep it explicit
        let mut order: Vec<usize> = (0..exps.len()).collect();
        order.sort_by_key(|&k| exps[k]);
        let comps = order.iter().map(|&k| comps[k]).collect();
        let gens = order.iter().map(|&k| gens[k].clone()).collect();
        let exps = order.iter().map(|&k| exps[k]).collect();
        Ok(StableHom { src: u.clone(), dst: v.clone(), hom, pr, group: TorsionModule { p, exps }, gens, comps })
    }

    pub fn p(&self) -> u64 {
        self.group.p
    }

    /// Coordinates of the class of f, one residue per cyclic factor.
    pub fn class(&self, f: &Mat) -> Result<Vec<BigInt>> {
        let c = self
            .hom
            .coords(f)
            .ok_or_else(|| Error::Verification(format!("map is not in Hom({}, {})", self.src.name, self.dst.name)))?;
        let w = self.pr.transform().mul_vec(&c);
        Ok(self
            .comps
            .iter()
            .zip(&self.group.exps)
            .map(|(&i, &e)| residue(&w[i], self.p(), e))
            .collect())
    }

    pub fn is_zero(&self, f: &Mat) -> Result<bool> {
        Ok(self.class(f)?.iter().all(Zero::is_zero))
    }

    pub fn in_pr(&self, f: &Mat) -> bool {
        self.hom.coords(f).is_some_and(|c| self.pr.contains(&c))
    }

    pub fn element(&self, coeffs: &[BigInt]) -> Mat {
        let mut m = Mat::zeros(self.dst.rank, self.src.rank);
        for (c, g) in coeffs.iter().zip(&self.gens) {
            if !c.is_zero() {
                m.axpy(&Q::from_bigint(c.clone()), g);
            }
        }
        m
    }

    /// Integer coordinates in [-p^3, p^3] over the generator lifts.
    pub fn random<R: Rng>(&self, rng: &mut R) -> Mat {
        let b = (self.p() as i64).pow(3);
        let c: Vec<BigInt> = self.gens.iter().map(|_| BigInt::from(rng.gen_range(-b..=b))).collect();
        self.element(&c)
    }

    /// Random element of Hom^pr.
    pub fn random_pr<R: Rng>(&self, rng: &mut R) -> Mat {
        let b = (self.p() as i64).pow(3);
        let mut m = Mat::zeros(self.dst.rank, self.src.rank);
        for j in 0..self.pr.basis.cols() {
            let c = Q::int(rng.gen_range(-b..=b));
            if !c.is_zero() {
                m.axpy(&c, &self.hom.element(&self.pr.basis.col(j)));
            }
        }
        m
    }
}

/// A stable class of degree `degree`: a map from level `src_level` of `src`
/// to level `src_level + degree` of `dst`.
#[derive(Clone, Debug)]
pub struct TateElement {
    pub degree: i32,
    pub src: Arc<ShiftTower>,
    pub src_level: i32,
    pub dst: Arc<ShiftTower>,
    pub map: Mat,
}

impl TateElement {
    pub fn dst_level(&self) -> i32 {
        self.src_level + self.degree
    }

    pub fn zero(src: &Arc<ShiftTower>, dst: &Arc<ShiftTower>, degree: i32) -> Result<TateElement> {
        let a = src.level(0)?;
        let b = dst.level(degree)?;
        Ok(TateElement { degree, src: src.clone(), src_level: 0, dst: dst.clone(), map: Mat::zeros(b.rank, a.rank) })
    }

    pub fn identity(t: &Arc<ShiftTower>) -> Result<TateElement> {
        let r = t.level(0)?.rank;
        Ok(TateElement { degree: 0, src: t.clone(), src_level: 0, dst: t.clone(), map: Mat::identity(r) })
    }

    pub fn scaled(&self, c: &Q) -> TateElement {
        TateElement { map: self.map.scale(c), ..self.clone() }
    }

    pub fn add(&self, o: &TateElement) -> Result<TateElement> {
        if self.src.id() != o.src.id() || self.dst.id() != o.dst.id() || self.degree != o.degree || self.src_level != o.src_level {
            return Err(Error::Mismatch("adding classes in different groups".into()));
        }
        Ok(TateElement { map: self.map.add(&o.map), ..self.clone() })
    }

    /// Σ^k of the representative.
    pub fn shifted(&self, k: i32) -> Result<TateElement> {
        let map = shift_hom(&self.src, self.src_level, &self.dst, self.dst_level(), &self.map, k)?;
        Ok(TateElement { src_level: self.src_level + k, map, ..self.clone() })
    }
}

/// Ext-hat^n_A(U, V) = stable Hom(U, Σ^n V), realized inside the given towers.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    pub src: Arc<ShiftTower>,
    pub dst: Arc<ShiftTower>,
    pub degree: i32,
    pub stable: StableHom,
}

impl ExtGroup {
    pub fn new(src: &Arc<ShiftTower>, dst: &Arc<ShiftTower>, degree: i32) -> Result<ExtGroup> {
        let u = src.level(0)?;
        let v = dst.level(degree)?;
        Ok(ExtGroup { src: src.clone(), dst: dst.clone(), degree, stable: StableHom::new(&u, &v)? })
    }

    pub fn group(&self) -> &TorsionModule {
        &self.stable.group
    }

    pub fn wrap(&self, map: Mat) -> TateElement {
        TateElement { degree: self.degree, src: self.src.clone(), src_level: 0, dst: self.dst.clone(), map }
    }

    pub fn generators(&self) -> Vec<TateElement> {
        self.stable.gens.iter().map(|g| self.wrap(g.clone())).collect()
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> TateElement {
        self.wrap(self.stable.random(rng))
    }

    pub fn random_pr<R: Rng>(&self, rng: &mut R) -> TateElement {
        self.wrap(self.stable.random_pr(rng))
    }

    pub fn check(&self, e: &TateElement) -> Result<()> {
        if e.src.id() != self.src.id() || e.dst.id() != self.dst.id() || e.degree != self.degree || e.src_level != 0 {
            return Err(Error::Mismatch("class is not in this group".into()));
        }
        Ok(())
    }

    pub fn class(&self, e: &TateElement) -> Result<Vec<BigInt>> {
        self.check(e)?;
        self.stable.class(&e.map)
    }

    pub fn is_zero(&self, e: &TateElement) -> Result<bool> {
        self.check(e)?;
        self.stable.is_zero(&e.map)
    }
}

/// Ext-hat^n_A(U, V) as a torsion module, built on fresh canonical towers.
pub fn tate_ext(u: &Lattice, v: &Lattice, n: i32) -> Result<TorsionModule> {
    u.check_same_algebra(v)?;
    let tu = ShiftTower::canonical(u.rebind(&u.alg)?);
    let tv = ShiftTower::canonical(v.rebind(&v.alg)?);
    Ok(ExtGroup::new(&tu, &tv, n)?.stable.group)
}

/// Degree-zero stable homs between level a of U and level a + n of V.
pub fn tate_ext_shifted(tu: &ShiftTower, tv: &ShiftTower, a: i32, n: i32) -> Result<TorsionModule> {
    Ok(StableHom::new(&tu.level(a)?, &tv.level(a + n)?)?.group)
}

/// Classical Ext^n_A(U, V), n >= 1, from the resolution formed by the
/// negative levels of U's tower. Fails if the cohomology has a free part.
pub fn classical_ext(tu: &ShiftTower, v: &Lattice, n: i32) -> Result<TorsionModule> {
    assert!(n >= 1);
    let p = v.p();
    let alg = &v.alg;
    let nn = alg.n();
    let mv = v.rank;
    // P_k = mid of sequence -k-1, k = 0..=n+1; d_k: P_k -> P_{k-1}.
    let seqs: Vec<_> = (0..=n + 1).map(|k| tu.ses(-k - 1)).collect::<Result<_>>()?;
    let ranks: Vec<usize> = seqs.iter().map(|s| s.mid.rank / nn).collect();
    // δ_k: Hom(P_k, V) = V^{r_k} -> Hom(P_{k+1}, V), f ↦ f∘ι_k∘π_{k+1}.
    let delta = |k: usize| -> Mat {
        let d = seqs[k].iota.mul(&seqs[k + 1].pi);
        let gens_next = ProjBasis::free(alg, ranks[k + 1]).elems;
        let mut out = Mat::zeros(mv * ranks[k + 1], mv * ranks[k]);
        for j in 0..ranks[k] {
            for t in 0..mv {
                // f sends generator j to e_t and the others to 0
                let mut f = Mat::zeros(mv, ranks[k] * nn);
                let orb = v.orbit(&v.basis_vec(t));
                for (i, o) in orb.iter().enumerate() {
                    for (row, x) in o.iter().enumerate() {
                        f[(row, j * nn + i)] = x.clone();
                    }
                }
                let fd = f.mul(&d);
                for (l, g) in gens_next.iter().enumerate() {
                    let img = fd.mul_vec(g);
                    for (row, x) in img.into_iter().enumerate() {
                        out[(l * mv + row, j * mv + t)] = x;
                    }
                }
            }
        }
        out
    };
    let nu = n as usize;
    let d_in = delta(nu - 1);
    let d_out = delta(nu);
    let (z, zinv) = kernel_with_left_inverse(&d_out, p);
    let b = zinv.mul(&d_in);
    let s = smith(&b, p, Track::NONE);
    if s.rank() != z.cols() {
        return Err(Error::NotSemisimple(format!("classical Ext^{n} has a free part")));
    }
    let mut exps: Vec<u32> = s.exps.iter().copied().filter(|&e| e >= 1).collect();
    exps.sort_unstable();
    Ok(TorsionModule { p, exps })
}

/// trace(z^{-1}·f) for an endomorphism f of U, as an exact rational.
pub fn z_trace(u: &Lattice, f: &Mat, z_inv: &[Q]) -> Q {
    u.act_elem(z_inv).mul(f).trace()
}

/// Nondegeneracy of a pairing X x Y -> K/O given on generator pairs:
/// values[i][j] = <x_i, y_j>. True iff X -> Hom(Y, K/O) is an isomorphism.
pub fn check_nondegenerate(x: &TorsionModule, y: &TorsionModule, values: &[Vec<MatlisValue>]) -> bool {
    if x.length() != y.length() {
        return false;
    }
    if x.is_zero() {
        return true;
    }
    let p = x.p;
    let pb = |e: u32| Q::pow_i(p, e as i64);
    // Hom(Y, K/O) = ⊕ Z/p^{b_j}; x_i ↦ (p^{b_j}·<x_i, y_j>)_j. The map is onto
    // iff the matrix N together with diag(p^{b_j}) spans O^s.
    let s = y.exps.len();
    let mut m = Mat::zeros(s, x.exps.len() + s);
    for (i, row) in values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[(j, i)] = &v.to_q() * &pb(y.exps[j]);
        }
    }
    for (j, &b) in y.exps.iter().enumerate() {
        m[(j, x.exps.len() + j)] = pb(b);
    }
    let sm = smith(&m, p, Track::NONE);
    sm.rank() == s && sm.exps.iter().all(|&e| e == 0)
}

/// Order of an element of Z/p^e given as a residue, as a power of p.
pub fn residue_order(r: &BigInt, p: u64, e: u32) -> u32 {
    let mut r = r.clone();
    let pp = BigInt::from(p);
    let mut k = e;
    while k > 0 && !r.is_zero() && (&r % &pp).is_zero() {
        r /= &pp;
        k -= 1;
    }
    if r.is_zero() {
        0
    } else {
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::matlis_reduce;
    use num_traits::One;
    use crate::algebra::{cyclic_table, group_algebra, s3_table};

    fn triv_c(p: u64) -> Lattice {
        let a = group_algebra(p, &cyclic_table(p as usize), None, &format!("C{p}")).unwrap();
        Lattice::one_dim(&a, &[Q::one()], "triv")
    }

    #[test]
    fn cyclic_tate_small() {
        let t2 = triv_c(2);
        assert_eq!(tate_ext(&t2, &t2, 0).unwrap().to_string(), "Z/2");
        assert_eq!(tate_ext(&t2, &t2, 1).unwrap().to_string(), "0");
        let t3 = triv_c(3);
        assert_eq!(tate_ext(&t3, &t3, 0).unwrap().to_string(), "Z/3");
        assert_eq!(tate_ext(&t3, &t3, -1).unwrap().to_string(), "0");
        assert_eq!(tate_ext(&t3, &t3, 2).unwrap().to_string(), "Z/3");
    }

    #[test]
    fn free_summand_does_not_change_ext() {
        let (tb, _) = s3_table();
        let a = group_algebra(3, &tb, None, "S3").unwrap();
        let ng = a.alg.gens.len();
        let triv = Lattice::one_dim(&a, &vec![Q::one(); ng], "triv");
        let u2 = Lattice::direct_sum(&[&triv, &Lattice::regular(&a)]);
        for n in -1..=1 {
            assert_eq!(tate_ext(&triv, &triv, n).unwrap(), tate_ext(&u2, &triv, n).unwrap(), "degree {n}");
        }
    }

    #[test]
    fn classical_agrees_in_positive_degrees() {
        let t = triv_c(3);
        let tw = ShiftTower::canonical(t.rebind(&t.alg).unwrap());
        for n in 1..=2 {
            assert_eq!(classical_ext(&tw, &t, n).unwrap(), tate_ext(&t, &t, n).unwrap());
        }
    }

    #[test]
    fn classes_and_pr() {
        let t = triv_c(2);
        let tw = ShiftTower::canonical(t);
        let g = ExtGroup::new(&tw, &tw, 0).unwrap();
        let id = TateElement::identity(&tw).unwrap();
        assert_eq!(g.class(&id).unwrap(), vec![BigInt::one()]);
        assert!(g.is_zero(&id.scaled(&Q::int(2))).unwrap());
        assert!(g.stable.in_pr(&Mat::scalar(1, &Q::int(4))));
    }

    #[test]
    fn nondegeneracy_checker() {
        let x = TorsionModule { p: 2, exps: vec![1] };
        let half = matlis_reduce(&Q::frac(1, 2), 2);
        assert!(check_nondegenerate(&x, &x, &[vec![half]]));
        assert!(!check_nondegenerate(&x, &x, &[vec![MatlisValue::zero(2)]]));
        let z = TorsionModule::zero(3);
        assert!(check_nondegenerate(&z, &z, &[]));
        let y = TorsionModule { p: 3, exps: vec![2] };
        let ninth = matlis_reduce(&Q::frac(1, 9), 3);
        let third = matlis_reduce(&Q::frac(1, 3), 3);
        assert!(check_nondegenerate(&y, &y, &[vec![ninth]]));
        assert!(!check_nondegenerate(&y, &y, &[vec![third]]));
    }
}
