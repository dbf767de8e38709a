//! Closed forms for A = End(U), B = End(V), M = U ⊗ V^∨ over Q with forms
//! λ·trace_U and μ·trace_V. Independent of the generic bimodule machinery,
//! except for `compare_with_generic`, which checks the two against each other.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::matrix_algebra;
use crate::arith::{unit_vec, Mat, Q};
use crate::bimodules::{matrix_bimodule, Adjunction, Bimodule};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct MatrixInstance {
    pub d: usize,
    pub e: usize,
    pub lambda: Q,
    pub mu: Q,
}

/// The four adjunction maps in the standard bases:
/// B = End(V) on E_{bc} (index b·e + c), V ⊗ V^∨ on v_b ⊗ v_c^∨ (same index),
/// and likewise for A and U ⊗ U^∨.
#[derive(Clone, Debug)]
pub struct ClosedAdjunction {
    /// B -> M^∨ ⊗_A M = V ⊗ V^∨
    pub eps_m: Mat,
    /// U ⊗ U^∨ = M ⊗_B M^∨ -> A
    pub eta_m: Mat,
    /// A -> U ⊗ U^∨
    pub eps_md: Mat,
    /// V ⊗ V^∨ -> B
    pub eta_md: Mat,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub lhs: Q,
    pub rhs: Q,
    pub pass: bool,
    /// A matrix identity checked as a whole; lhs/rhs are 1 or 0.
    pub flag: bool,
}

impl OracleCheck {
    fn new(name: impl Into<String>, lhs: Q, rhs: Q) -> OracleCheck {
        let pass = lhs == rhs;
        OracleCheck { name: name.into(), lhs, rhs, pass, flag: false }
    }
    fn flag(name: impl Into<String>, ok: bool) -> OracleCheck {
        let v = if ok { Q::one() } else { Q::zero() };
        OracleCheck { name: name.into(), lhs: v, rhs: Q::one(), pass: ok, flag: true }
    }
}

impl MatrixInstance {
    pub fn new(d: usize, e: usize, lambda: Q, mu: Q) -> Result<MatrixInstance> {
        if d == 0 || e == 0 {
            return Err(Error::Instance("matrix dimensions must be at least 1".into()));
        }
        if lambda.is_zero() || mu.is_zero() {
            return Err(Error::Instance("form scalings must be nonzero".into()));
        }
        Ok(MatrixInstance { d, e, lambda, mu })
    }

    /// Σ_x x·x^∨ in End(K^n) for the form c·trace, computed on the basis.
    pub fn z(n: usize, c: &Q) -> Mat {
        let mut z = Mat::zeros(n, n);
        // basis E_ij, dual basis E_ji / c
        for i in 0..n {
            // Σ_j E_ij E_ji = n·E_ii
            for _j in 0..n {
                z[(i, i)] += &c.recip();
            }
        }
        z
    }

    pub fn z_a(&self) -> Q {
        MatrixInstance::z(self.d, &self.lambda)[(0, 0)].clone()
    }
    pub fn z_b(&self) -> Q {
        MatrixInstance::z(self.e, &self.mu)[(0, 0)].clone()
    }

    /// 1 ↦ Σ_v v ⊗ v^∨ extended bilinearly, times the scaling of the relevant form.
    pub fn closed_form_adjunction(&self) -> ClosedAdjunction {
        let (d, e) = (self.d, self.e);
        // E_{bc}·(Σ_v v ⊗ v^∨) = v_b ⊗ v_c^∨
        let unit_sum = |n: usize| -> Mat {
            let mut m = Mat::zeros(n * n, n * n);
            for b in 0..n {
                for c in 0..n {
                    for v in 0..n {
                        // E_{bc} v_v = δ_{cv} v_b, and v^∨ stays
                        if c == v {
                            m[(b * n + v, b * n + c)] += &Q::one();
                        }
                    }
                }
            }
            m
        };
        // u ⊗ μ ↦ (y ↦ μ(y) u) = E_{uμ}
        let evaluation = |n: usize| -> Mat {
            let mut m = Mat::zeros(n * n, n * n);
            for u in 0..n {
                for c in 0..n {
                    m[(u * n + c, u * n + c)] = Q::one();
                }
            }
            m
        };
        ClosedAdjunction {
            eps_m: unit_sum(e).scale(&self.lambda),
            eta_m: evaluation(d).scale(&self.lambda.recip()),
            eps_md: unit_sum(d).scale(&self.mu),
            eta_md: evaluation(e).scale(&self.mu.recip()),
        }
    }

    /// tr_M(β) for β = Y ⊗ Id_V: V^{b} -> V^{a}, i.e. M^∨⊗U^b -> M^∨⊗U^a, giving U^b -> U^a.
    /// Evaluated as (η_M ⊗ Id)(Id_M ⊗ β)(ε_{M^∨} ⊗ Id) one basis vector at a time.
    pub fn transfer(&self, y: &Mat) -> Mat {
        let d = self.d;
        let (na, nb) = (y.rows(), y.cols());
        let adj = self.closed_form_adjunction();
        // ε_{M^∨}(1) = Σ_i ε_{M^∨}(E_ii), coefficients on u_t ⊗ u_t^∨
        let one: Vec<Q> = (0..d).flat_map(|i| (0..d).map(move |j| if i == j { Q::one() } else { Q::zero() })).collect();
        let eps_one = adj.eps_md.mul_vec(&one);
        let mut out = Mat::zeros(na * d, nb * d);
        for k in 0..nb {
            for t in 0..d {
                // u_t in copy k: Σ_i c_i (u_i ⊗ v_0^∨) ⊗ ((v_0 ⊗ u_i^∨) ⊗ u_t) = c_t (u_t ⊗ v_0^∨) ⊗ v_0
                for (s, c) in eps_one.iter().enumerate() {
                    let (i, j) = (s / d, s % d);
                    if c.is_zero() || j != t {
                        continue;
                    }
                    for l in 0..na {
                        // β moves v_0 to copy l with Y_{lk}; then η_M(u_i ⊗ u_t^∨) applied to u_t
                        let ev = adj.eta_m.mul_vec(&unit_vec(d * d, i * d + j));
                        let coeff = &(c * &y[(l, k)]) * &ev[i * d + t];
                        out[(l * d + i, k * d + t)] += &coeff;
                    }
                }
            }
        }
        out
    }

    /// φ_A(α, γ) = z_A^{-1} trace(γ∘α) on U^{cols(α)}, α = X ⊗ Id_U.
    pub fn phi_a(&self, x: &Mat, gamma: &Mat) -> Q {
        let alpha = x.kron(&Mat::identity(self.d));
        &gamma.mul(&alpha).trace() * &self.z_a().recip()
    }

    /// φ_B(Id ⊗ α, β) with M^∨ ⊗ U^k = V^k.
    pub fn phi_b(&self, x: &Mat, y: &Mat) -> Q {
        let fa = x.kron(&Mat::identity(self.e));
        let beta = y.kron(&Mat::identity(self.e));
        &beta.mul(&fa).trace() * &self.z_b().recip()
    }

    /// φ_A(α, tr_M(β)) against φ_B(Id ⊗ α, β) for α = X ⊗ Id: U^a -> U^b and
    /// β = Y ⊗ Id: V^b -> V^a.
    pub fn check_prop_matrix_1(&self, x: &Mat, y: &Mat) -> OracleCheck {
        let tr = self.transfer(y);
        OracleCheck::new(
            format!("φ_A(α,tr(β)) = φ_B(Id⊗α,β), d={}, e={}", self.d, self.e),
            self.phi_a(x, &tr),
            self.phi_b(x, y),
        )
    }

    /// Both traces for ζ: A -> A^x (scalars), ξ: M^x -> M^y (matrix y × x),
    /// σ: B^y -> B (row of scalars). Returns (trace on A, trace on B).
    pub fn prop_matrix_2_traces(&self, zeta: &[Q], xi: &Mat, sigma: &[Q]) -> (Q, Q) {
        let (d, e) = (self.d, self.e);
        let adj = self.closed_form_adjunction();
        let col = |v: &[Q]| Mat::col_vector(v);
        let row = |v: &[Q]| Mat::from_rows(vec![v.to_vec()]);
        // A side: A -ζ-> A^x -(Id⊗ε_{M^∨})-> (U⊗U^∨)^x -(ξ⊗Id)-> (U⊗U^∨)^y -(Id⊗σ⊗Id)-> U⊗U^∨ -η_M-> A
        let ia = Mat::identity(d * d);
        let left = adj
            .eta_m
            .mul(&row(sigma).kron(&ia))
            .mul(&xi.kron(&ia))
            .mul(&Mat::identity(zeta.len()).kron(&adj.eps_md))
            .mul(&col(zeta).kron(&ia));
        let za = self.z_a();
        let ta = &left.trace() * &(&za * &za).recip();
        // B side: B -ε_M-> V⊗V^∨ -(Id⊗ζ⊗Id)-> (V⊗V^∨)^x -(Id⊗ξ)-> (V⊗V^∨)^y -η_{M^∨}-> B^y -σ-> B
        let ib = Mat::identity(e * e);
        let right = row(sigma)
            .kron(&ib)
            .mul(&Mat::identity(sigma.len()).kron(&adj.eta_md))
            .mul(&xi.kron(&ib))
            .mul(&col(zeta).kron(&ib))
            .mul(&adj.eps_m);
        let zb = self.z_b();
        let tb = &right.trace() * &(&zb * &zb).recip();
        (ta, tb)
    }

    pub fn check_prop_matrix_2(&self, zeta: &[Q], xi: &Mat, sigma: &[Q]) -> Vec<OracleCheck> {
        let (ta, tb) = self.prop_matrix_2_traces(zeta, xi, sigma);
        let expect = &(&self.lambda * &self.mu) * &row_mat_col(sigma, xi, zeta);
        vec![
            OracleCheck::new(format!("trace_A = trace_B, d={}, e={}", self.d, self.e), ta.clone(), tb),
            OracleCheck::new(format!("trace_A = λμσξζ, d={}, e={}", self.d, self.e), ta, expect),
        ]
    }

    /// η_M∘ε_{M^∨} = λ^{-1}μ·Id and η_{M^∨}∘ε_M = λμ^{-1}·Id; for λ = μ = 1 the
    /// maps are mutually inverse.
    pub fn check_adj_inverse(&self) -> Vec<OracleCheck> {
        let adj = self.closed_form_adjunction();
        let (d, e) = (self.d, self.e);
        let r1 = &self.lambda.recip() * &self.mu;
        let r2 = &self.lambda * &self.mu.recip();
        vec![
            OracleCheck::flag("η_M∘ε_M∨ = λ^{-1}μ", adj.eta_m.mul(&adj.eps_md) == Mat::scalar(d * d, &r1)),
            OracleCheck::flag("η_M∨∘ε_M = λμ^{-1}", adj.eta_md.mul(&adj.eps_m) == Mat::scalar(e * e, &r2)),
        ]
    }

    /// tr' = λ^{-1}μ·tr against the unscaled forms, and z'_A = λ^{-1}d, z'_B = μ^{-1}e.
    pub fn check_scaled_transfer(&self, y: &Mat) -> Vec<OracleCheck> {
        let base = MatrixInstance { lambda: Q::one(), mu: Q::one(), ..self.clone() };
        let t1 = self.transfer(y);
        let t0 = base.transfer(y).scale(&(&self.lambda.recip() * &self.mu));
        vec![
            OracleCheck::flag("tr' = λ^{-1}μ tr", t1 == t0),
            OracleCheck::new("z'_A = λ^{-1}d", self.z_a(), &self.lambda.recip() * &Q::int(self.d as i64)),
            OracleCheck::new("z'_B = μ^{-1}e", self.z_b(), &self.mu.recip() * &Q::int(self.e as i64)),
        ]
    }

    /// The triangle of maps out of U ⊗ Hom_A(U, A) and U ⊗ U^∨ commutes.
    pub fn check_trace_diagram(&self) -> Vec<OracleCheck> {
        let d = self.d;
        // Hom_A(U, A) ∋ λ_c: u ↦ u·u_c^T, basis index c.
        // U ⊗ Hom_A(U, A) and U ⊗ U^∨ on index a·d + c, A on E_{ij}.
        let mut sigma = Mat::zeros(d * d, d * d);
        let mut rho = Mat::zeros(d * d, d * d);
        let mut alpha = Mat::zeros(d * d, d * d);
        let mut tau = Mat::zeros(1, d * d);
        let mut tr = Mat::zeros(1, d * d);
        for a in 0..d {
            for c in 0..d {
                // trace ∘ λ_c = u_c^∨
                sigma[(a * d + c, a * d + c)] = Q::one();
                // λ_c(u_a) = u_a u_c^T = E_{ac}
                rho[(a * d + c, a * d + c)] = Q::one();
                // u_a ⊗ u_c^∨ ↦ (y ↦ u_c^∨(y) u_a) = E_{ac}
                alpha[(a * d + c, a * d + c)] = Q::one();
                if a == c {
                    tau[(0, a * d + c)] = Q::one();
                    tr[(0, a * d + c)] = Q::one();
                }
            }
        }
        vec![
            OracleCheck::flag("α∘σ = ρ", alpha.mul(&sigma) == rho),
            OracleCheck::flag("trace∘α = τ", tr.mul(&alpha) == tau),
            OracleCheck::flag("trace∘ρ = τ∘σ", tr.mul(&rho) == tau.mul(&sigma)),
        ]
    }

    /// The full oracle run used by the CLI: seeded random X, Y, ζ, ξ, σ.
    pub fn run(&self, seed: u64, trials: usize) -> Vec<OracleCheck> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = self.check_adj_inverse();
        out.extend(self.check_trace_diagram());
        let id = Mat::identity(1);
        out.push(self.check_prop_matrix_1(&id, &id));
        out.extend(self.check_prop_matrix_2(&[Q::one()], &id, &[Q::one()]));
        for _ in 0..trials {
            let (a, b) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let x = random_mat(&mut rng, b, a);
            let y = random_mat(&mut rng, a, b);
            out.push(self.check_prop_matrix_1(&x, &y));
            out.extend(self.check_scaled_transfer(&y));
            let (nx, ny) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let zeta: Vec<Q> = (0..nx).map(|_| random_q(&mut rng)).collect();
            let xi = random_mat(&mut rng, ny, nx);
            let sigma: Vec<Q> = (0..ny).map(|_| random_q(&mut rng)).collect();
            out.extend(self.check_prop_matrix_2(&zeta, &xi, &sigma));
        }
        out
    }
}

fn row_mat_col(r: &[Q], m: &Mat, c: &[Q]) -> Q {
    let mc = m.mul_vec(c);
    crate::arith::dot(r, &mc)
}

fn random_q<R: Rng>(rng: &mut R) -> Q {
    Q::int(rng.gen_range(-9..=9))
}

fn random_mat<R: Rng>(rng: &mut R, r: usize, c: usize) -> Mat {
    Mat::from_rows((0..r).map(|_| (0..c).map(|_| random_q(rng)).collect()).collect())
}

/// Builds the instance through the generic machinery over Z_(p) and compares
/// the four adjunction maps with the closed forms, after identifying
/// M^∨ ⊗_A M with V ⊗ V^∨ and M ⊗_B M^∨ with U ⊗ U^∨.
pub fn compare_with_generic(inst: &MatrixInstance, p: u64) -> Result<Vec<OracleCheck>> {
    let (d, e) = (inst.d, inst.e);
    if (d * e) as u64 % p == 0 {
        return Err(Error::Instance(format!("p = {p} divides d·e")));
    }
    let a = matrix_algebra(p, d)?.rescaled(&inst.lambda)?;
    let b = matrix_algebra(p, e)?.rescaled(&inst.mu)?;
    let m: Bimodule = matrix_bimodule(&a, &b, d, e)?;
    let adj = Adjunction::new(Arc::new(m))?;
    let data = adj.data()?;
    // v_b ⊗ v_c^∨ = (v_b ⊗ u_0^∨) ⊗ (u_0 ⊗ v_c^∨); the dual coordinate of v ⊗ u_a^∨ sits at a·e + b.
    let r = d * e;
    let mut i_f = Vec::with_capacity(e * e);
    for bb in 0..e {
        for c in 0..e {
            i_f.push(adj.f.tensor(&adj.m.lmod, &unit_vec(r, bb), &unit_vec(r, c))?);
        }
    }
    let i_f = Mat::from_cols(data.mdm.rank, &i_f);
    let mut i_h = Vec::with_capacity(d * d);
    for aa in 0..d {
        for c in 0..d {
            i_h.push(adj.h.tensor(&adj.md.lmod, &unit_vec(r, aa * e), &unit_vec(r, c * e))?);
        }
    }
    let i_h = Mat::from_cols(data.mmd.rank, &i_h);
    let closed = inst.closed_form_adjunction();
    Ok(vec![
        OracleCheck::flag("ε_M generic = closed", data.eps_m == i_f.mul(&closed.eps_m)),
        OracleCheck::flag("η_M generic = closed", data.eta_m.mul(&i_h) == closed.eta_m),
        OracleCheck::flag("ε_M∨ generic = closed", data.eps_md == i_h.mul(&closed.eps_md)),
        OracleCheck::flag("η_M∨ generic = closed", data.eta_md.mul(&i_f) == closed.eta_md),
    ])
}
