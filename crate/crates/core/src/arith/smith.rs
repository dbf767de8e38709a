use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::matrix::Mat;
use super::scalar::Q;
use super::ArithError;

/// Which transforms to track during reduction. P·A·Q = D.
#[derive(Clone, Copy, Debug, Default)]
pub struct Track {
    pub p: bool,
    pub p_inv: bool,
    pub q: bool,
    pub q_inv: bool,
}

impl Track {
    pub const ALL: Track = Track { p: true, p_inv: true, q: true, q_inv: true };
    pub const NONE: Track = Track { p: false, p_inv: false, q: false, q_inv: false };
}

/// Result of reducing a matrix over O = Z_(p): P·A·Q = D with D = diag(p^{e_1}, ..., p^{e_r}, 0, ...).
#[derive(Clone, Debug)]
pub struct Smith {
    pub prime: u64,
    pub rows: usize,
    pub cols: usize,
    pub exps: Vec<u32>,
    pub p: Option<Mat>,
    pub p_inv: Option<Mat>,
    pub q: Option<Mat>,
    pub q_inv: Option<Mat>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.exps.len()
    }
    pub fn diag(&self) -> Mat {
        let mut d = Mat::zeros(self.rows, self.cols);
        for (i, &e) in self.exps.iter().enumerate() {
            d[(i, i)] = Q::pow_i(self.prime, e as i64);
        }
        d
    }
    /// All invariant factors are units and the rank is full in the given sense.
    pub fn all_units(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

/// left·diag·right = input, with left and right unimodular over O.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub left: Mat,
    pub diag: Mat,
    pub right: Mat,
    pub exps: Vec<u32>,
}

fn first_nonzero_min_val(a: &Mat, t: usize, p: u64) -> Option<(usize, usize, i64)> {
    let (r, c) = a.shape();
    let mut best: Option<(usize, usize, i64)> = None;
    // Scan column-wise; a unit pivot cannot be beaten.
    for j in t..c {
        for i in t..r {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let v = x.valuation(p).unwrap();
            if v == 0 {
                return Some((i, j, 0));
            }
            if best.map_or(true, |b| v < b.2) {
                best = Some((i, j, v));
            }
        }
    }
    best
}

/// Smith normal form over Z_(p). The input must have entries in Z_(p).
pub fn smith(a: &Mat, prime: u64, track: Track) -> Smith {
    debug_assert!(a.is_integral(prime), "smith: matrix not over O");
    let (r, c) = a.shape();
    let mut a = a.clone();
    let mut pm = track.p.then(|| Mat::identity(r));
    let mut pi = track.p_inv.then(|| Mat::identity(r));
    let mut qm = track.q.then(|| Mat::identity(c));
    let mut qi = track.q_inv.then(|| Mat::identity(c));
    let mut exps = Vec::new();
    for t in 0..r.min(c) {
        let Some((i, j, v)) = first_nonzero_min_val(&a, t, prime) else {
            break;
        };
        if i != t {
            a.swap_rows(t, i);
            if let Some(m) = pm.as_mut() {
                m.swap_rows(t, i);
            }
            if let Some(m) = pi.as_mut() {
                m.swap_cols(t, i);
            }
        }
        if j != t {
            a.swap_cols(t, j);
            if let Some(m) = qm.as_mut() {
                m.swap_cols(t, j);
            }
            if let Some(m) = qi.as_mut() {
                m.swap_rows(t, j);
            }
        }
        let pv = Q::pow_i(prime, v);
        let unit = &a[(t, t)] / &pv;
        if !unit.is_one() {
            let uinv = unit.recip();
            a.scale_row(t, &uinv);
            if let Some(m) = pm.as_mut() {
                m.scale_row(t, &uinv);
            }
            if let Some(m) = pi.as_mut() {
                m.scale_col(t, &unit);
            }
        }
        let pinv = pv.recip();
        for i in t + 1..r {
            if a[(i, t)].is_zero() {
                continue;
            }
            let f = &a[(i, t)] * &pinv;
            let nf = -&f;
            a.add_row_multiple(i, t, &nf);
            if let Some(m) = pm.as_mut() {
                m.add_row_multiple(i, t, &nf);
            }
            if let Some(m) = pi.as_mut() {
                m.add_col_multiple(t, i, &f);
            }
        }
        for j in t + 1..c {
            if a[(t, j)].is_zero() {
                continue;
            }
            let g = &a[(t, j)] * &pinv;
            a[(t, j)] = Q::zero();
            if let Some(m) = qm.as_mut() {
                m.add_col_multiple(j, t, &(-&g));
            }
            if let Some(m) = qi.as_mut() {
                m.add_row_multiple(t, j, &g);
            }
        }
        exps.push(v as u32);
    }
    Smith { prime, rows: r, cols: c, exps, p: pm, p_inv: pi, q: qm, q_inv: qi }
}

pub fn smith_normal_form(a: &Mat, prime: u64) -> Result<SmithDecomposition, ArithError> {
    if !a.is_integral(prime) {
        return Err(ArithError::NotIntegralMatrix(prime));
    }
    let s = smith(a, prime, Track { p: false, p_inv: true, q: false, q_inv: true });
    let diag = s.diag();
    Ok(SmithDecomposition { left: s.p_inv.unwrap(), diag, right: s.q_inv.unwrap(), exps: s.exps })
}

/// Multiply each row by an integer so that the matrix becomes integral; the
/// row space over K is unchanged.
pub fn clear_row_denominators(a: &Mat) -> Mat {
    let mut out = a.clone();
    for i in 0..a.rows() {
        let mut l = BigInt::one();
        for x in a.row(i) {
            if !x.is_integer() {
                l = l.lcm(&x.denom());
            }
        }
        if !l.is_one() {
            out.scale_row(i, &Q::from_bigint(l));
        }
    }
    out
}

pub fn clear_col_denominators(a: &Mat) -> Mat {
    clear_row_denominators(&a.transpose()).transpose()
}

/// Saturated O-basis of {x in O^n : a·x = 0}, together with a left inverse
/// (rows) that is integral.
pub fn kernel_with_left_inverse(a: &Mat, prime: u64) -> (Mat, Mat) {
    let n = a.cols();
    let a = clear_row_denominators(a);
    let s = smith(&a, prime, Track { p: false, p_inv: false, q: true, q_inv: true });
    let rk = s.rank();
    let idx: Vec<usize> = (rk..n).collect();
    let k = s.q.as_ref().unwrap().select_cols(&idx);
    let kinv = s.q_inv.as_ref().unwrap().select_rows(&idx);
    (k, kinv)
}

pub fn kernel_lattice(a: &Mat, prime: u64) -> Mat {
    kernel_with_left_inverse(a, prime).0
}

/// Some x over O with a·x = b, or None when no such x exists.
pub fn solve_over_o(a: &Mat, b: &Mat, prime: u64) -> Result<Option<Mat>, ArithError> {
    if a.rows() != b.rows() {
        return Err(ArithError::Shape(format!("solve: {:?} vs {:?}", a.shape(), b.shape())));
    }
    if !a.is_integral(prime) {
        return Err(ArithError::NotIntegralMatrix(prime));
    }
    let s = smith(a, prime, Track { p: true, p_inv: false, q: true, q_inv: false });
    let pb = s.p.as_ref().unwrap().mul(b);
    let rk = s.rank();
    let mut y = Mat::zeros(a.cols(), b.cols());
    for j in 0..b.cols() {
        for i in 0..a.rows() {
            let w = &pb[(i, j)];
            if i < rk {
                let yi = w / &Q::pow_i(prime, s.exps[i] as i64);
                if !yi.is_integral(prime) {
                    return Ok(None);
                }
                y[(i, j)] = yi;
            } else if !w.is_zero() {
                return Ok(None);
            }
        }
    }
    Ok(Some(s.q.as_ref().unwrap().mul(&y)))
}

/// Finitely generated O-submodule of O^n (or of K^n when the generators are
/// not integral), kept as a basis plus the transform used for membership tests.
#[derive(Clone, Debug)]
pub struct SubLattice {
    pub prime: u64,
    pub ambient: usize,
    /// Basis as columns.
    pub basis: Mat,
    /// P from P·G·Q = D with G the (rescaled) generator matrix.
    p: Mat,
    p_inv: Mat,
    exps: Vec<u32>,
    scale: Q,
}

impl SubLattice {
    pub fn span(gens: &Mat, prime: u64) -> SubLattice {
        let n = gens.rows();
        // Work with an integral multiple so that the reduction runs over O.
        let mut scale = Q::one();
        if !gens.is_integral(prime) {
            let mut minv = 0i64;
            for x in gens.data() {
                if let Some(v) = x.valuation(prime) {
                    minv = minv.min(v);
                }
            }
            scale = Q::pow_i(prime, -minv);
        }
        let g = if scale.is_one() { gens.clone() } else { gens.scale(&scale) };
        let s = smith(&g, prime, Track { p: true, p_inv: true, q: false, q_inv: false });
        let rk = s.rank();
        let p_inv = s.p_inv.unwrap();
        let mut basis = p_inv.select_cols(&(0..rk).collect::<Vec<_>>());
        let sinv = scale.recip();
        for (j, &e) in s.exps.iter().enumerate() {
            basis.scale_col(j, &(&Q::pow_i(prime, e as i64) * &sinv));
        }
        SubLattice { prime, ambient: n, basis, p: s.p.unwrap(), p_inv, exps: s.exps, scale }
    }
    pub fn rank(&self) -> usize {
        self.exps.len()
    }
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }
    /// Coordinates of v in `basis`, or None if v is not in the lattice.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        let w = self.p.mul_vec(v);
        let rk = self.rank();
        if w[rk..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut y = Vec::with_capacity(rk);
        for i in 0..rk {
            let yi = &(&w[i] * &self.scale) / &Q::pow_i(self.prime, self.exps[i] as i64);
            if !yi.is_integral(self.prime) {
                return None;
            }
            y.push(yi);
        }
        Some(y)
    }
    pub fn contains(&self, v: &[Q]) -> bool {
        self.coords(v).is_some()
    }
    pub fn contains_lattice(&self, o: &SubLattice) -> bool {
        (0..o.basis.cols()).all(|j| self.contains(&o.basis.col(j)))
    }
    pub fn equals(&self, o: &SubLattice) -> bool {
        self.rank() == o.rank() && self.contains_lattice(o) && o.contains_lattice(self)
    }
    /// O-saturation of the span: (K·span) ∩ O^n.
    pub fn saturation(&self) -> Mat {
        self.p_inv.select_cols(&(0..self.rank()).collect::<Vec<_>>())
    }
    /// Transform P with P·(generators)·Q diagonal; rows give quotient coordinates.
    pub fn transform(&self) -> &Mat {
        &self.p
    }
    pub fn transform_inv(&self) -> &Mat {
        &self.p_inv
    }
    /// Saturated in O^n: the quotient is torsion free.
    pub fn is_saturated(&self) -> bool {
        self.scale.is_one() && self.exps.iter().all(|&e| e == 0)
    }
}

/// Saturated basis of the column space of `a`: (K·colspace) ∩ O^n.
pub fn saturate(a: &Mat, prime: u64) -> Mat {
    SubLattice::span(a, prime).saturation()
}

/// Integer gcd helper for tests and oracles.
pub fn int_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.abs().gcd(&b.abs())
}
