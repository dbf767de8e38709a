//! Tate duality pairings, Yoneda products and the transfer identities.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::Sym;
use crate::arith::{matlis_reduce, MatlisValue, Q};
use crate::bimodules::{hochschild_tower, Adjunction, Bimodule, HochschildTransfer, Transfer};
use crate::lattices::{check_nondegenerate, shift_hom, z_trace, ExtGroup, Lattice, ShiftTower, TateElement};
use crate::{Error, Result};

/// trace on U of z^{-1}·Σ^k(γ)∘α for α: U_a -> V_{a+n} and γ: V_b -> U_{b-n},
/// with k chosen so that Σ^k(γ) starts at V_{a+n}.
pub fn phi_form(alpha: &TateElement, gamma: &TateElement) -> Result<Q> {
    if alpha.src.id() != gamma.dst.id() || alpha.dst.id() != gamma.src.id() {
        return Err(Error::Mismatch("pairing of classes in incompatible towers".into()));
    }
    if alpha.degree + gamma.degree != 0 {
        return Err(Error::Mismatch(format!("degrees {} and {} do not add to 0", alpha.degree, gamma.degree)));
    }
    let k = alpha.dst_level() - gamma.src_level;
    let sg = shift_hom(&gamma.src, gamma.src_level, &gamma.dst, gamma.dst_level(), &gamma.map, k)?;
    let u = alpha.src.level(alpha.src_level)?;
    let z_inv = alpha.src.alg.z_inverse()?;
    Ok(z_trace(&u, &sg.mul(&alpha.map), z_inv))
}

/// ⟨α, γ⟩ in K/O.
pub fn tate_pairing(alpha: &TateElement, gamma: &TateElement) -> Result<MatlisValue> {
    Ok(matlis_reduce(&phi_form(alpha, gamma)?, alpha.src.alg.p()))
}

/// ⟨ζ, τ⟩_{A^e} for classes in the Hochschild tower of A; z_{A^e} acts on A as z_A².
pub fn hh_pairing(zeta: &TateElement, tau: &TateElement) -> Result<MatlisValue> {
    tate_pairing(zeta, tau)
}

/// βα = Σ^m(β)∘α for α: U -> Σ^m V and β: V -> Σ^n W.
pub fn yoneda_product(beta: &TateElement, alpha: &TateElement) -> Result<TateElement> {
    if alpha.dst.id() != beta.src.id() {
        return Err(Error::Mismatch("Yoneda product of classes in incompatible towers".into()));
    }
    let k = alpha.dst_level() - beta.src_level;
    let sb = shift_hom(&beta.src, beta.src_level, &beta.dst, beta.dst_level(), &beta.map, k)?;
    Ok(TateElement {
        degree: alpha.degree + beta.degree,
        src: alpha.src.clone(),
        src_level: alpha.src_level,
        dst: beta.dst.clone(),
        map: sb.mul(&alpha.map),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub instance: String,
    pub relation: String,
    pub degree: i32,
    pub left: String,
    pub right: String,
    pub lhs: MatlisValue,
    pub rhs: MatlisValue,
    pub pass: bool,
}

impl PairingReport {
    pub fn new(instance: &str, relation: &str, degree: i32, left: String, right: String, lhs: MatlisValue, rhs: MatlisValue) -> Self {
        let pass = lhs == rhs;
        PairingReport { instance: instance.into(), relation: relation.into(), degree, left, right, lhs, rhs, pass }
    }
}

fn describe(g: &ExtGroup, e: &TateElement) -> String {
    match g.class(e) {
        Ok(c) => format!("[{}]", c.iter().map(BigInt::to_string).collect::<Vec<_>>().join(",")),
        Err(_) => "?".into(),
    }
}

/// ⟨βα, γ⟩ = ⟨α, γβ⟩ and, when W = U, ⟨βα, Id⟩ = ⟨α, β⟩ in the degree -m case.
pub fn check_adjointness_associativity(alpha: &TateElement, beta: &TateElement, gamma: &TateElement) -> Result<Vec<PairingReport>> {
    let inst = alpha.src.alg.name().to_string();
    let m = alpha.degree;
    let ba = yoneda_product(beta, alpha)?;
    let gb = yoneda_product(gamma, beta)?;
    let mut out = vec![PairingReport::new(
        &inst,
        "<βα,γ> = <α,γβ>",
        m,
        format!("deg {}", ba.degree),
        format!("deg {}", gamma.degree),
        tate_pairing(&ba, gamma)?,
        tate_pairing(alpha, &gb)?,
    )];
    if beta.dst.id() == alpha.src.id() && m + beta.degree == 0 && alpha.src_level == 0 {
        let id = TateElement::identity(&alpha.src)?;
        out.push(PairingReport::new(
            &inst,
            "<βα,Id> = <α,β>",
            m,
            format!("deg {}", ba.degree),
            "Id".into(),
            tate_pairing(&ba, &id)?,
            tate_pairing(alpha, beta)?,
        ));
    }
    Ok(out)
}

/// Pairing values on generator pairs of X = Ext^n(U,V) and Y = Ext^{-n}(V,U).
pub fn pairing_matrix(x: &ExtGroup, y: &ExtGroup) -> Result<Vec<Vec<MatlisValue>>> {
    let ys = y.generators();
    x.generators().iter().map(|a| ys.iter().map(|b| tate_pairing(a, b)).collect()).collect()
}

/// Nondegeneracy of the pairing between Ext^n(U,V) and Ext^{-n}(V,U).
pub fn certify_nondegenerate(x: &ExtGroup, y: &ExtGroup) -> Result<bool> {
    let vals = pairing_matrix(x, y)?;
    Ok(check_nondegenerate(x.group(), y.group(), &vals))
}

/// An η in `dual` = Ext^{-n}(V,U) with ⟨ζ,η⟩ ≠ 0, certified by ⟨ηζ, Id⟩ ≠ 0
/// and ηζ ≠ 0 in the stable endomorphisms of U.
pub fn witness_nonzero_product(zeta: &TateElement, dual: &ExtGroup) -> Result<TateElement> {
    let gens = dual.generators();
    let end = ExtGroup::new(&zeta.src, &zeta.src, 0)?;
    let id = TateElement::identity(&zeta.src)?;
    for eta in gens {
        let v = tate_pairing(zeta, &eta)?;
        if v.is_zero() {
            continue;
        }
        let prod = yoneda_product(&eta, zeta)?;
        let w = tate_pairing(&prod, &id)?;
        if w != v || end.is_zero(&prod)? {
            return Err(Error::Verification("⟨ηζ, Id⟩ disagrees with ⟨ζ, η⟩".into()));
        }
        return Ok(eta);
    }
    Err(Error::Verification("no η pairs nontrivially with ζ: the pairing is degenerate".into()))
}

/// Unit rescalings of the forms on A and B.
#[derive(Clone, Debug)]
pub struct Scaling {
    pub lambda: Q,
    pub mu: Q,
}

impl Scaling {
    pub fn identity() -> Scaling {
        Scaling { lambda: Q::one(), mu: Q::one() }
    }
    fn label(&self) -> String {
        format!("λ={}, μ={}", self.lambda, self.mu)
    }
}

/// M, U, V rebound to the rescaled algebras.
fn rescale(m: &Bimodule, lats: &[&Lattice], sc: &Scaling) -> Result<(Arc<Bimodule>, Vec<Lattice>)> {
    for c in [&sc.lambda, &sc.mu] {
        if !c.is_unit(m.p()) {
            return Err(Error::InvalidForm(format!("rescaling by {c}, which is not a unit")));
        }
    }
    let a: Sym = m.left.rescaled(&sc.lambda)?;
    let b: Sym = m.right.rescaled(&sc.mu)?;
    let m2 = Arc::new(m.rebind(&a, &b)?);
    let ls = lats.iter().map(|l| l.rebind(&a)).collect::<Result<_>>()?;
    Ok((m2, ls))
}

/// Both equalities relating ⟨α, tr_M(β)⟩_A and ⟨Id ⊗ α, β⟩_B on seeded random
/// α ∈ Ext^n_A(U,V), β ∈ Ext^{-n}_B(M^∨⊗V, M^∨⊗U).
pub fn check_theorem1(m: &Bimodule, u: &Lattice, v: &Lattice, n: i32, trials: usize, seed: u64, sc: &Scaling) -> Result<Vec<PairingReport>> {
    let (m, ls) = rescale(m, &[u, v], sc)?;
    m.left.z_inverse()?;
    m.right.z_inverse()?;
    let adj = Adjunction::new(m.clone())?;
    let tr = Transfer::from_adjunction(&adj)?;
    let [u, v]: [Lattice; 2] = ls.try_into().expect("two lattices");
    let tu = ShiftTower::canonical(u);
    let tv = ShiftTower::canonical(v);
    let (ftu, ftv) = (tr.induce(&tu)?, tr.induce(&tv)?);
    let ga = ExtGroup::new(&tu, &tv, n)?;
    let gb = ExtGroup::new(&ftv, &ftu, -n)?;
    let inst = format!("{} ({})", m.name, sc.label());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * trials);
    for _ in 0..trials {
        let alpha = ga.random(&mut rng);
        let beta = gb.random(&mut rng);
        let tb = tr.transfer_graded(&tv, &tu, &beta)?;
        let fa = tr.apply(&alpha)?;
        let (da, db) = (describe(&ga, &alpha), describe(&gb, &beta));
        out.push(PairingReport::new(
            &inst,
            "<α,tr(β)>_A = <Id⊗α,β>_B",
            n,
            da.clone(),
            db.clone(),
            tate_pairing(&alpha, &tb)?,
            tate_pairing(&fa, &beta)?,
        ));
        out.push(PairingReport::new(
            &inst,
            "<tr(β),α>_A = <β,Id⊗α>_B",
            n,
            db,
            da,
            tate_pairing(&tb, &alpha)?,
            tate_pairing(&beta, &fa)?,
        ));
    }
    Ok(out)
}

/// Both equalities relating ⟨ζ, tr_M(τ)⟩_{A^e} and ⟨tr_{M^∨}(ζ), τ⟩_{B^e} on
/// seeded random ζ ∈ HH^n(A), τ ∈ HH^{-n}(B).
pub fn check_theorem2(m: &Bimodule, n: i32, trials: usize, seed: u64, sc: &Scaling) -> Result<Vec<PairingReport>> {
    let (m, _) = rescale(m, &[], sc)?;
    let (a, b) = (m.left.clone(), m.right.clone());
    a.enveloping().z_inverse()?;
    b.enveloping().z_inverse()?;
    let ta = hochschild_tower(&a);
    let tb = hochschild_tower(&b);
    let tr_m = HochschildTransfer::new(m.clone(), ta.clone(), tb.clone())?;
    let tr_md = HochschildTransfer::new(Arc::new(m.dual()), tb.clone(), ta.clone())?;
    let ga = ExtGroup::new(&ta, &ta, n)?;
    let gb = ExtGroup::new(&tb, &tb, -n)?;
    let inst = format!("{} ({})", m.name, sc.label());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * trials);
    for _ in 0..trials {
        let zeta = ga.random(&mut rng);
        let tau = gb.random(&mut rng);
        let t_tau = tr_m.transfer(&tau)?;
        let t_zeta = tr_md.transfer(&zeta)?;
        let (dz, dt) = (describe(&ga, &zeta), describe(&gb, &tau));
        out.push(PairingReport::new(
            &inst,
            "<ζ,tr_M(τ)>_Ae = <tr_M∨(ζ),τ>_Be",
            n,
            dz.clone(),
            dt.clone(),
            hh_pairing(&zeta, &t_tau)?,
            hh_pairing(&t_zeta, &tau)?,
        ));
        out.push(PairingReport::new(
            &inst,
            "<tr_M(τ),ζ>_Ae = <τ,tr_M∨(ζ)>_Be",
            n,
            dt,
            dz,
            hh_pairing(&t_tau, &zeta)?,
            hh_pairing(&tau, &t_zeta)?,
        ));
    }
    Ok(out)
}
