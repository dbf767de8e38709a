//! Instance files, task dispatch and run reports for the `tate` binary.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{cyclic_table, group_algebra, matrix_algebra, s3_table, Algebra, SymmetricAlgebra, SymmetrisingForm, Sym};
use crate::arith::{Mat, Q};
use crate::bimodules::{hochschild_tate, induction_bimodule, Bimodule};
use crate::duality::{
    certify_nondegenerate, check_adjointness_associativity, check_theorem1, check_theorem2, pairing_matrix, tate_pairing,
    witness_nonzero_product, PairingReport, Scaling,
};
use crate::lattices::{tate_ext, CoverKind, ExtGroup, Lattice, ShiftTower};
use crate::oracle_matrix::{compare_with_generic, MatrixInstance, OracleCheck};
use crate::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub prime: u64,
    pub algebras: BTreeMap<String, AlgebraSpec>,
    #[serde(default)]
    pub forms: BTreeMap<String, FormSpec>,
    #[serde(default)]
    pub lattices: BTreeMap<String, LatticeSpec>,
    #[serde(default)]
    pub bimodules: BTreeMap<String, BimoduleSpec>,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSpec {
    /// c[i][j] is the coordinate vector of x_i·x_j.
    StructureConstants { constants: Vec<Vec<Vec<Q>>>, unit: Vec<Q> },
    /// Exactly one of `table`, `cyclic`, `named` ("S3").
    Group {
        #[serde(default)]
        table: Option<Vec<Vec<usize>>>,
        #[serde(default)]
        cyclic: Option<usize>,
        #[serde(default)]
        named: Option<String>,
    },
    Matrix { d: usize },
}

/// Either explicit values on the basis or a unit rescaling of the default form.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    #[serde(default)]
    pub coeffs: Option<Vec<Q>>,
    #[serde(default)]
    pub scale: Option<Q>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LatticeSpec {
    Regular { algebra: String },
    Free { algebra: String, rank: usize },
    /// Every basis element acts as 1 (group algebras: the trivial module).
    Trivial { algebra: String },
    /// Rank one, basis element i acting by values[i].
    Character { algebra: String, values: Vec<Q> },
    /// Row-major matrix of every basis element.
    Explicit { algebra: String, actions: Vec<Vec<Vec<Q>>> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BimoduleSpec {
    Explicit { left: String, right: String, left_actions: Vec<Vec<Vec<Q>>>, right_actions: Vec<Vec<Vec<Q>>> },
    /// O[G] over (O[G], O[H]); inclusion[j] is the basis index in G of basis element j of H.
    Induction { left: String, right: String, inclusion: Vec<usize> },
    Regular { algebra: String },
}

#[derive(Clone, Debug, Deserialize)]
pub struct TaskSpec {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(flatten)]
    pub task: Task,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Task {
    TateExt {
        u: String,
        v: String,
        degrees: Vec<i32>,
        #[serde(default)]
        expect: Option<Vec<String>>,
    },
    Hh {
        algebra: String,
        degrees: Vec<i32>,
        #[serde(default)]
        expect: Option<Vec<String>>,
    },
    PairingTable { u: String, v: String, degree: i32 },
    VerifyThm1 {
        bimodule: String,
        u: String,
        v: String,
        degrees: Vec<i32>,
        #[serde(default = "default_trials")]
        trials: usize,
        #[serde(default)]
        scalings: Vec<(Q, Q)>,
    },
    VerifyThm2 {
        bimodule: String,
        degrees: Vec<i32>,
        #[serde(default = "default_trials")]
        trials: usize,
        #[serde(default)]
        scalings: Vec<(Q, Q)>,
    },
    VerifyIdentities {
        u: String,
        degrees: Vec<i32>,
        #[serde(default = "default_trials")]
        trials: usize,
    },
    VerifyMatrixOracle {
        d: usize,
        e: usize,
        #[serde(default = "one")]
        lambda: Q,
        #[serde(default = "one")]
        mu: Q,
        #[serde(default = "default_trials")]
        trials: usize,
    },
}

fn default_trials() -> usize {
    20
}
fn one() -> Q {
    Q::one()
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::TateExt { .. } => "tate-ext",
            Task::Hh { .. } => "hh",
            Task::PairingTable { .. } => "pairing-table",
            Task::VerifyThm1 { .. } => "verify-thm1",
            Task::VerifyThm2 { .. } => "verify-thm2",
            Task::VerifyIdentities { .. } => "verify-identities",
            Task::VerifyMatrixOracle { .. } => "verify-matrix-oracle",
        }
    }
}

/// A validated instance: every name resolved, every object checked.
pub struct Instance {
    pub prime: u64,
    pub algebras: BTreeMap<String, Sym>,
    pub lattices: BTreeMap<String, Arc<Lattice>>,
    pub bimodules: BTreeMap<String, Arc<Bimodule>>,
    pub tasks: Vec<(String, Task)>,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn named(mut l: Lattice, name: &str) -> Lattice {
    l.name = name.to_string();
    l
}

fn to_mat(rows: &[Vec<Q>]) -> Mat {
    Mat::from_rows(rows.to_vec())
}

fn at(path: String) -> impl Fn(Error) -> Error {
    move |e| Error::Instance(format!("{path}: {e}"))
}

pub fn parse_instance(text: &str) -> Result<InstanceSpec> {
    serde_json::from_str(text).map_err(|e| Error::Instance(format!("parse error: {e}")))
}

pub fn parse_and_validate(path: &std::path::Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Instance(format!("{}: {e}", path.display())))?;
    validate(parse_instance(&text)?)
}

fn build_algebra(p: u64, name: &str, spec: &AlgebraSpec, form: Option<&FormSpec>) -> Result<Sym> {
    let scale = form.and_then(|f| f.scale.clone());
    let coeffs = form.and_then(|f| f.coeffs.clone());
    let a = match spec {
        AlgebraSpec::StructureConstants { constants, unit } => {
            let n = constants.len();
            for (i, row) in constants.iter().enumerate() {
                if row.len() != n || row.iter().any(|c| c.len() != n) {
                    return Err(Error::InvalidAlgebra(format!("constants[{i}] is not {n}x{n}")));
                }
            }
            let alg = Algebra::from_dense(p, constants, unit.clone(), name);
            let coeffs = coeffs.ok_or_else(|| Error::InvalidForm("structure_constants algebras need an explicit form".into()))?;
            SymmetricAlgebra::new(alg, SymmetrisingForm { coeffs })?
        }
        AlgebraSpec::Group { table, cyclic, named } => {
            if coeffs.is_some() {
                return Err(Error::InvalidForm("group algebras take the canonical form; use `scale`".into()));
            }
            let t = match (table, cyclic, named.as_deref()) {
                (Some(t), None, None) => t.clone(),
                (None, Some(m), None) => cyclic_table(*m),
                (None, None, Some("S3")) => s3_table().0,
                (None, None, Some(other)) => return Err(Error::InvalidAlgebra(format!("unknown group {other}"))),
                _ => return Err(Error::InvalidAlgebra("give exactly one of table, cyclic, named".into())),
            };
            group_algebra(p, &t, None, name)?
        }
        AlgebraSpec::Matrix { d } => {
            if coeffs.is_some() {
                return Err(Error::InvalidForm("matrix algebras take the trace form; use `scale`".into()));
            }
            if *d == 0 {
                return Err(Error::InvalidAlgebra("d must be at least 1".into()));
            }
            matrix_algebra(p, *d)?
        }
    };
    match scale {
        Some(l) if !l.is_unit(p) => Err(Error::InvalidForm(format!("scale {l} is not a unit of Z_({p})"))),
        Some(l) => a.rescaled(&l),
        None => Ok(a),
    }
}

/// Resolve names and run every validation before any task.
pub fn validate(spec: InstanceSpec) -> Result<Instance> {
    let p = spec.prime;
    if !is_prime(p) {
        return Err(Error::Instance(format!("prime required, got {p}")));
    }
    for name in spec.forms.keys() {
        if !spec.algebras.contains_key(name) {
            return Err(Error::Instance(format!("forms.{name}: no such algebra")));
        }
    }
    let mut algebras = BTreeMap::new();
    for (name, a) in &spec.algebras {
        let alg = build_algebra(p, name, a, spec.forms.get(name)).map_err(at(format!("algebras.{name}")))?;
        algebras.insert(name.clone(), alg);
    }
    let alg = |ctx: &str, n: &str| -> Result<Sym> {
        algebras.get(n).cloned().ok_or_else(|| Error::Instance(format!("{ctx}: no such algebra {n}")))
    };
    let mut lattices = BTreeMap::new();
    for (name, l) in &spec.lattices {
        let ctx = format!("lattices.{name}");
        let lat = match l {
            LatticeSpec::Regular { algebra } => named(Lattice::regular(&alg(&ctx, algebra)?), name),
            LatticeSpec::Free { algebra, rank } => named(Lattice::free(&alg(&ctx, algebra)?, *rank), name),
            LatticeSpec::Trivial { algebra } => {
                let a = alg(&ctx, algebra)?;
                let mats = (0..a.n()).map(|_| Mat::identity(1)).collect();
                Lattice::from_basis_actions(a, mats, name.as_str()).map_err(at(ctx.clone()))?
            }
            LatticeSpec::Character { algebra, values } => {
                let a = alg(&ctx, algebra)?;
                let mats = values.iter().map(|v| Mat::scalar(1, v)).collect();
                Lattice::from_basis_actions(a, mats, name.as_str()).map_err(at(ctx.clone()))?
            }
            LatticeSpec::Explicit { algebra, actions } => {
                let a = alg(&ctx, algebra)?;
                let mats = actions.iter().map(|m| to_mat(m)).collect();
                Lattice::from_basis_actions(a, mats, name.as_str()).map_err(at(ctx.clone()))?
            }
        };
        lattices.insert(name.clone(), Arc::new(lat));
    }
    let mut bimodules = BTreeMap::new();
    for (name, b) in &spec.bimodules {
        let ctx = format!("bimodules.{name}");
        let m = match b {
            BimoduleSpec::Explicit { left, right, left_actions, right_actions } => Bimodule::from_basis_actions(
                &alg(&ctx, left)?,
                &alg(&ctx, right)?,
                left_actions.iter().map(|m| to_mat(m)).collect(),
                right_actions.iter().map(|m| to_mat(m)).collect(),
                name,
            )
            .map_err(at(ctx.clone()))?,
            BimoduleSpec::Induction { left, right, inclusion } => {
                let (g, h) = (alg(&ctx, left)?, alg(&ctx, right)?);
                check_inclusion(&g, &h, inclusion).map_err(at(ctx.clone()))?;
                induction_bimodule(&g, &h, inclusion)
            }
            BimoduleSpec::Regular { algebra } => Bimodule::regular(&alg(&ctx, algebra)?),
        };
        m.check_perfect().map_err(at(ctx.clone()))?;
        bimodules.insert(name.clone(), Arc::new(m));
    }
    let mut tasks = Vec::with_capacity(spec.tasks.len());
    for (i, t) in spec.tasks.into_iter().enumerate() {
        let id = t.id.unwrap_or_else(|| format!("task{i:03}"));
        if tasks.iter().any(|(x, _): &(String, Task)| *x == id) {
            return Err(Error::Instance(format!("tasks[{i}]: duplicate id {id}")));
        }
        check_task_refs(&t.task, &algebras, &lattices, &bimodules).map_err(at(format!("tasks[{i}] ({id})")))?;
        tasks.push((id, t.task));
    }
    Ok(Instance { prime: p, algebras, lattices, bimodules, tasks })
}

/// `inclusion` must send the basis of H injectively onto basis elements of G,
/// preserving unit and products.
fn check_inclusion(g: &Sym, h: &Sym, inclusion: &[usize]) -> Result<()> {
    if inclusion.len() != h.n() || inclusion.iter().any(|&i| i >= g.n()) {
        return Err(Error::Mismatch("inclusion has the wrong length or indices".into()));
    }
    let mut seen = inclusion.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != inclusion.len() {
        return Err(Error::Mismatch("inclusion is not injective".into()));
    }
    let lift = |v: &[Q]| {
        let mut out = vec![Q::zero(); g.n()];
        for (j, c) in v.iter().enumerate() {
            out[inclusion[j]] += c;
        }
        out
    };
    if lift(&h.one()) != g.one() {
        return Err(Error::Mismatch("inclusion does not preserve the unit".into()));
    }
    for i in 0..h.n() {
        for j in 0..h.n() {
            let lhs = lift(&h.alg.mul(&h.alg.basis(i), &h.alg.basis(j)));
            let rhs = g.alg.mul(&g.alg.basis(inclusion[i]), &g.alg.basis(inclusion[j]));
            if lhs != rhs {
                return Err(Error::Mismatch(format!("inclusion does not preserve the product of h_{i}, h_{j}")));
            }
        }
    }
    Ok(())
}

fn check_task_refs(
    t: &Task,
    algebras: &BTreeMap<String, Sym>,
    lattices: &BTreeMap<String, Arc<Lattice>>,
    bimodules: &BTreeMap<String, Arc<Bimodule>>,
) -> Result<()> {
    let lat = |n: &String| lattices.get(n).ok_or_else(|| Error::Instance(format!("no such lattice {n}")));
    let bim = |n: &String| bimodules.get(n).ok_or_else(|| Error::Instance(format!("no such bimodule {n}")));
    let same = |x: &Lattice, y: &Lattice| x.check_same_algebra(y);
    match t {
        Task::TateExt { u, v, degrees, expect } => {
            same(lat(u)?, lat(v)?)?;
            if expect.as_ref().is_some_and(|e| e.len() != degrees.len()) {
                return Err(Error::Instance("expect must match degrees".into()));
            }
        }
        Task::Hh { algebra, degrees, expect } => {
            algebras.get(algebra).ok_or_else(|| Error::Instance(format!("no such algebra {algebra}")))?;
            if expect.as_ref().is_some_and(|e| e.len() != degrees.len()) {
                return Err(Error::Instance("expect must match degrees".into()));
            }
        }
        Task::PairingTable { u, v, .. } => same(lat(u)?, lat(v)?)?,
        Task::VerifyThm1 { bimodule, u, v, .. } => {
            let m = bim(bimodule)?;
            let (u, v) = (lat(u)?, lat(v)?);
            same(u, v)?;
            if !u.alg.same(&m.left) {
                return Err(Error::Mismatch(format!("{} is not a module over {}", u.name, m.left.name())));
            }
        }
        Task::VerifyThm2 { bimodule, .. } => {
            bim(bimodule)?;
        }
        Task::VerifyIdentities { u, .. } => {
            lat(u)?;
        }
        Task::VerifyMatrixOracle { d, e, lambda, mu, .. } => {
            MatrixInstance::new(*d, *e, lambda.clone(), mu.clone())?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One reported value; `expected` is present when the value is checked.
#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub label: String,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    pub pass: bool,
}

impl Entry {
    fn value(label: impl Into<String>, value: impl ToString) -> Entry {
        Entry { label: label.into(), value: value.to_string(), expected: None, pass: true }
    }
    fn checked(label: impl Into<String>, value: impl ToString, expected: impl ToString) -> Entry {
        let (value, expected) = (value.to_string(), expected.to_string());
        Entry { label: label.into(), pass: value == expected, value, expected: Some(expected) }
    }
}

impl From<PairingReport> for Entry {
    fn from(r: PairingReport) -> Entry {
        Entry {
            label: format!("{} | n={} | {} | {} ; {}", r.instance, r.degree, r.relation, r.left, r.right),
            value: r.lhs.to_string(),
            expected: Some(r.rhs.to_string()),
            pass: r.pass,
        }
    }
}

impl From<OracleCheck> for Entry {
    fn from(c: OracleCheck) -> Entry {
        if c.flag {
            return Entry { label: c.name, value: c.pass.to_string(), expected: Some("true".into()), pass: c.pass };
        }
        Entry { label: c.name, value: c.lhs.to_string(), expected: Some(c.rhs.to_string()), pass: c.pass }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub id: String,
    pub kind: String,
    pub status: Status,
    pub entries: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub prime: u64,
    pub tasks: Vec<TaskReport>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.tasks.iter().any(|t| t.status == Status::Error) {
            2
        } else if self.tasks.iter().any(|t| t.status == Status::Fail) {
            1
        } else {
            0
        }
    }
}

/// Canonical towers per lattice name, so classes in the same lattice share a tower.
struct Towers<'a> {
    inst: &'a Instance,
    cache: HashMap<String, Arc<ShiftTower>>,
}

impl Towers<'_> {
    fn get(&mut self, name: &str) -> Result<Arc<ShiftTower>> {
        if let Some(t) = self.cache.get(name) {
            return Ok(t.clone());
        }
        let l = self.inst.lattices.get(name).ok_or_else(|| Error::Instance(format!("no such lattice {name}")))?;
        let t = ShiftTower::new(l.clone(), CoverKind::Tensor);
        self.cache.insert(name.to_string(), t.clone());
        Ok(t)
    }
}

fn scalings(list: &[(Q, Q)]) -> Vec<Scaling> {
    if list.is_empty() {
        return vec![Scaling::identity()];
    }
    list.iter().map(|(l, m)| Scaling { lambda: l.clone(), mu: m.clone() }).collect()
}

fn run_one(inst: &Instance, towers: &mut Towers, task: &Task, seed: u64) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    match task {
        Task::TateExt { u, v, degrees, expect } => {
            let (lu, lv) = (&inst.lattices[u], &inst.lattices[v]);
            for (i, &n) in degrees.iter().enumerate() {
                let g = tate_ext(lu, lv, n)?;
                let label = format!("Ext^{n}({u},{v})");
                out.push(match expect {
                    Some(e) => Entry::checked(label, g, &e[i]),
                    None => Entry::value(label, g),
                });
            }
        }
        Task::Hh { algebra, degrees, expect } => {
            let a = &inst.algebras[algebra];
            for (i, &n) in degrees.iter().enumerate() {
                let g = hochschild_tate(a, n)?;
                let label = format!("HH^{n}({algebra})");
                out.push(match expect {
                    Some(e) => Entry::checked(label, g, &e[i]),
                    None => Entry::value(label, g),
                });
            }
        }
        Task::PairingTable { u, v, degree } => {
            let (tu, tv) = (towers.get(u)?, towers.get(v)?);
            let x = ExtGroup::new(&tu, &tv, *degree)?;
            let y = ExtGroup::new(&tv, &tu, -degree)?;
            out.push(Entry::value(format!("Ext^{degree}({u},{v})"), x.group()));
            out.push(Entry::value(format!("Ext^{}({v},{u})", -degree), y.group()));
            for (i, row) in pairing_matrix(&x, &y)?.iter().enumerate() {
                for (j, val) in row.iter().enumerate() {
                    out.push(Entry::value(format!("<g{i},h{j}>"), val));
                }
            }
            out.push(Entry::checked("nondegenerate", certify_nondegenerate(&x, &y)?, true));
        }
        Task::VerifyThm1 { bimodule, u, v, degrees, trials, scalings: sc } => {
            let m = &inst.bimodules[bimodule];
            for s in scalings(sc) {
                for &n in degrees {
                    let r = check_theorem1(m, &inst.lattices[u], &inst.lattices[v], n, *trials, seed, &s)?;
                    out.extend(r.into_iter().map(Entry::from));
                }
            }
        }
        Task::VerifyThm2 { bimodule, degrees, trials, scalings: sc } => {
            let m = &inst.bimodules[bimodule];
            for s in scalings(sc) {
                for &n in degrees {
                    out.extend(check_theorem2(m, n, *trials, seed, &s)?.into_iter().map(Entry::from));
                }
            }
        }
        Task::VerifyIdentities { u, degrees, trials } => {
            let t = towers.get(u)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e0 = ExtGroup::new(&t, &t, 0)?;
            for _ in 0..*trials {
                let (a, b) = (e0.random(&mut rng), e0.random(&mut rng));
                out.push(Entry::checked("<α,β> = <β,α> (degree 0)", tate_pairing(&a, &b)?, tate_pairing(&b, &a)?));
            }
            for &m in degrees {
                let x = ExtGroup::new(&t, &t, m)?;
                let y = ExtGroup::new(&t, &t, -m)?;
                for _ in 0..*trials {
                    let (a, b, g) = (x.random(&mut rng), y.random(&mut rng), e0.random(&mut rng));
                    out.extend(check_adjointness_associativity(&a, &b, &g)?.into_iter().map(Entry::from));
                }
                out.push(Entry::checked(format!("nondegenerate n={m}"), certify_nondegenerate(&x, &y)?, true));
                for (i, z) in x.generators().iter().enumerate() {
                    if x.is_zero(z)? {
                        continue;
                    }
                    let ok = witness_nonzero_product(z, &y).is_ok();
                    out.push(Entry::checked(format!("witness ηζ ≠ 0 for generator {i}, n={m}"), ok, true));
                }
            }
        }
        Task::VerifyMatrixOracle { d, e, lambda, mu, trials } => {
            let m = MatrixInstance::new(*d, *e, lambda.clone(), mu.clone())?;
            out.extend(matrix_oracle_entries(&m, Some(inst.prime), seed, *trials)?);
        }
    }
    Ok(out)
}

/// Smallest prime not dividing d·e at which λ and μ are units.
fn comparison_prime(m: &MatrixInstance) -> u64 {
    (2..)
        .filter(|&p| is_prime(p))
        .find(|&p| (m.d * m.e) as u64 % p != 0 && m.lambda.is_unit(p) && m.mu.is_unit(p))
        .expect("primes are unbounded")
}

/// Oracle checks, plus the generic comparison when `prime` is usable (or a chosen prime when `None`).
pub fn matrix_oracle_entries(m: &MatrixInstance, prime: Option<u64>, seed: u64, trials: usize) -> Result<Vec<Entry>> {
    let mut out: Vec<Entry> = m.run(seed, trials).into_iter().map(Entry::from).collect();
    let p = match prime {
        Some(p) if (m.d * m.e) as u64 % p != 0 && m.lambda.is_unit(p) && m.mu.is_unit(p) => Some(p),
        Some(_) => None,
        None => Some(comparison_prime(m)),
    };
    match p {
        Some(p) => out.extend(compare_with_generic(m, p)?.into_iter().map(|c| {
            let mut e = Entry::from(c);
            e.label = format!("{} (p={p})", e.label);
            e
        })),
        None => out.push(Entry::value("generic comparison", "skipped: p divides d·e or λ, μ not units")),
    }
    Ok(out)
}

pub fn run_tasks(inst: &Instance, seed: u64) -> RunReport {
    let mut towers = Towers { inst, cache: HashMap::new() };
    let mut tasks = Vec::with_capacity(inst.tasks.len());
    for (id, task) in &inst.tasks {
        let start = Instant::now();
        let res = run_one(inst, &mut towers, task, seed);
        let elapsed_ms = start.elapsed().as_millis() as u64;
        let (status, entries, diagnostic) = match res {
            Ok(e) if e.iter().all(|x| x.pass) => (Status::Pass, e, None),
            Ok(e) => (Status::Fail, e, None),
            Err(err) => (Status::Error, vec![], Some(err.to_string())),
        };
        tasks.push(TaskReport { id: id.clone(), kind: task.kind().into(), status, entries, diagnostic, elapsed_ms });
    }
    tasks.sort_by(|a, b| a.id.cmp(&b.id));
    RunReport { tool: "tate".into(), version: VERSION.into(), seed, prime: inst.prime, tasks }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn emit_report(r: &RunReport, fmt: Format) -> String {
    match fmt {
        Format::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
        Format::Text => {
            let mut s = format!("tate {} seed={} p={}\n", r.version, r.seed, r.prime);
            for t in &r.tasks {
                let st = match t.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Error => "ERROR",
                };
                s += &format!("[{st}] {} ({}) {} ms\n", t.id, t.kind, t.elapsed_ms);
                if let Some(d) = &t.diagnostic {
                    s += &format!("  error: {d}\n");
                }
                for e in &t.entries {
                    let mark = if e.pass { "ok" } else { "FAIL" };
                    match &e.expected {
                        Some(x) => s += &format!("  {mark:4} {} = {} (expected {x})\n", e.label, e.value),
                        None => s += &format!("  {mark:4} {} = {}\n", e.label, e.value),
                    }
                }
            }
            s
        }
    }
}
