//! Finite-dimensional algebras, convolution duals of coalgebras, module representations,
//! tensor products over a subalgebra, and the Frobenius test for ring extensions.
//!
//! Multiplication is stored as the `dim x dim²` matrix whose column `i * dim + j` holds
//! `e_i · e_j`, so the dual of a coalgebra has multiplication matrix `Δᵀ`.

use std::sync::Arc;

use serde::Serialize;

use crate::coalgebra::{Coalgebra, CoalgebraMorphism, SparseTensor};
use crate::comodule::{bicomodule_hom, Bicomodule, HomSpace};
use crate::cotensor::cotensor_square;
use crate::error::{Error, Result};
use crate::family::{invertible_in_affine_family, FamilyOutcome, FamilyRoute, SearchOptions};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{Echelon, Matrix, Subspace};
use crate::report::{Law, Report};

/// Unvalidated structure constants: `e_i · e_j = Σ m_ijk e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraData {
    pub field: FieldSpec,
    pub dim: usize,
    pub mult: SparseTensor,
    pub unit: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    data: AlgebraData,
    mult: Matrix,
    /// `left[a]` is the matrix of `x ↦ e_a · x`.
    left: Vec<Matrix>,
    /// `right[a]` is the matrix of `x ↦ x · e_a`.
    right: Vec<Matrix>,
}

fn dense_mult(data: &AlgebraData) -> Result<Matrix> {
    let n = data.dim;
    if data.unit.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "unit has {} entries, dimension is {n}",
            data.unit.len()
        )));
    }
    let mut m = Matrix::zeros(data.field, n, n * n);
    for ((i, j, k), s) in data.mult.iter() {
        if *i >= n || *j >= n || *k >= n {
            return Err(Error::DimensionMismatch(format!("product index ({i}, {j}, {k}) out of range")));
        }
        if !data.field.contains(s) {
            return Err(Error::FieldMismatch(format!("product entry {s} not in {}", data.field)));
        }
        m.set(*k, i * n + j, s.clone());
    }
    if let Some(s) = data.unit.iter().find(|s| !data.field.contains(s)) {
        return Err(Error::FieldMismatch(format!("unit entry {s} not in {}", data.field)));
    }
    Ok(m)
}

fn multiplication_operators(field: FieldSpec, n: usize, mult: &Matrix) -> (Vec<Matrix>, Vec<Matrix>) {
    let mut left = vec![Matrix::zeros(field, n, n); n];
    let mut right = vec![Matrix::zeros(field, n, n); n];
    for a in 0..n {
        for x in 0..n {
            for k in 0..n {
                let s = mult.get(k, a * n + x);
                if !s.is_zero() {
                    left[a].set(k, x, s.clone());
                }
                let s = mult.get(k, x * n + a);
                if !s.is_zero() {
                    right[a].set(k, x, s.clone());
                }
            }
        }
    }
    (left, right)
}

/// `Σ v_x ops[x]`.
fn combine(field: FieldSpec, size: usize, ops: &[Matrix], v: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(field, size, size);
    for (s, op) in v.iter().zip(ops) {
        if !s.is_zero() {
            m = m.add(&op.scale(s));
        }
    }
    m
}

/// Checks associativity on every basis pair and both unit laws; violations are reported
/// at the first factor.
pub fn validate_algebra(data: &AlgebraData) -> Result<Report> {
    let mult = dense_mult(data)?;
    let n = data.dim;
    let field = data.field;
    let (left, _) = multiplication_operators(field, n, &mult);
    let mut report = Report::pass();
    for i in 0..n {
        for j in 0..n {
            let lhs = combine(field, n, &left, &mult.column(i * n + j));
            if lhs != &left[i] * &left[j] {
                report.push(Law::Associativity, i);
                break;
            }
        }
    }
    let unit_left = combine(field, n, &left, &data.unit);
    let id = Matrix::identity(field, n);
    for j in 0..n {
        if unit_left.column(j) != id.column(j) {
            report.push(Law::LeftUnit, j);
        }
        let mut right_unit = vec![field.zero(); n];
        for (x, u) in data.unit.iter().enumerate() {
            if u.is_zero() {
                continue;
            }
            for (k, s) in mult.column(j * n + x).iter().enumerate() {
                right_unit[k] = &right_unit[k] + &(u * s);
            }
        }
        if right_unit != id.column(j) {
            report.push(Law::RightUnit, j);
        }
    }
    Ok(report)
}

impl Algebra {
    pub fn new(data: AlgebraData) -> Result<Self> {
        let report = validate_algebra(&data)?;
        if !report.is_pass() {
            return Err(Error::Invalid(report));
        }
        let mult = dense_mult(&data)?;
        let (left, right) = multiplication_operators(data.field, data.dim, &mult);
        Ok(Algebra { data, mult, left, right })
    }

    /// The ground field as a one-dimensional algebra.
    pub fn trivial(field: FieldSpec) -> Self {
        let mut mult = SparseTensor::new();
        mult.set(0, 0, 0, field.one());
        Algebra::new(AlgebraData { field, dim: 1, mult, unit: vec![field.one()] })
            .expect("the ground field is an algebra")
    }

    pub fn field(&self) -> FieldSpec {
        self.data.field
    }

    pub fn dim(&self) -> usize {
        self.data.dim
    }

    pub fn data(&self) -> &AlgebraData {
        &self.data
    }

    pub fn multiplication(&self) -> &Matrix {
        &self.mult
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.data.unit
    }

    pub fn left_mult(&self, a: usize) -> &Matrix {
        &self.left[a]
    }

    pub fn right_mult(&self, a: usize) -> &Matrix {
        &self.right[a]
    }

    /// Matrix of `x ↦ v · x`.
    pub fn left_mult_by(&self, v: &[Scalar]) -> Matrix {
        combine(self.field(), self.dim(), &self.left, v)
    }

    /// Matrix of `x ↦ x · v`.
    pub fn right_mult_by(&self, v: &[Scalar]) -> Matrix {
        combine(self.field(), self.dim(), &self.right, v)
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let col = Matrix::column_vector(self.field(), b.to_vec());
        (&self.left_mult_by(a) * &col).column(0)
    }
}

/// The convolution algebra `C*`: `(f · g)(c) = f(c_1) g(c_2)`, unit `ε_C`.
pub fn dualize_coalgebra(c: &Coalgebra) -> Algebra {
    let mut mult = SparseTensor::new();
    for ((i, j, k), s) in c.delta().iter() {
        mult.set(*j, *k, *i, s.clone());
    }
    Algebra::new(AlgebraData {
        field: c.field(),
        dim: c.dim(),
        mult,
        unit: c.counit_values().to_vec(),
    })
    .expect("the dual of a coalgebra is an algebra")
}

#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    matrix: Matrix,
}

pub fn validate_algebra_morphism(source: &Algebra, target: &Algebra, matrix: &Matrix) -> Result<Report> {
    if matrix.shape() != (target.dim(), source.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "algebra morphism matrix is {}x{}, expected {}x{}",
            matrix.rows(),
            matrix.cols(),
            target.dim(),
            source.dim()
        )));
    }
    if source.field() != target.field() || matrix.field() != source.field() {
        return Err(Error::FieldMismatch("algebra morphism over different fields".into()));
    }
    let n = source.dim();
    let mut report = Report::pass();
    for i in 0..n {
        let phi_i = matrix.column(i);
        for j in 0..n {
            let lhs = (matrix * &source.multiplication().column_as_matrix(i * n + j, n, 1)).column(0);
            if lhs != target.mul(&phi_i, &matrix.column(j)) {
                report.push(Law::Multiplicativity, i);
                break;
            }
        }
    }
    let unit = Matrix::column_vector(source.field(), source.unit().to_vec());
    if (matrix * &unit).column(0) != target.unit() {
        report.push(Law::UnitPreservation, 0);
    }
    Ok(report)
}

impl AlgebraMorphism {
    pub fn new(source: Arc<Algebra>, target: Arc<Algebra>, matrix: Matrix) -> Result<Self> {
        let report = validate_algebra_morphism(&source, &target, &matrix)?;
        if !report.is_pass() {
            return Err(Error::Invalid(report));
        }
        Ok(AlgebraMorphism { source, target, matrix })
    }

    /// `K → B`, `1 ↦ 1_B`.
    pub fn unit_map(b: Arc<Algebra>) -> Self {
        let field = b.field();
        let matrix = Matrix::column_vector(field, b.unit().to_vec());
        AlgebraMorphism::new(Arc::new(Algebra::trivial(field)), b, matrix).expect("unit map")
    }

    pub fn identity(b: Arc<Algebra>) -> Self {
        let matrix = Matrix::identity(b.field(), b.dim());
        AlgebraMorphism { source: b.clone(), target: b, matrix }
    }

    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if *self.target != *next.source {
            return Err(Error::InvalidParameter("algebra morphisms are not composable".into()));
        }
        AlgebraMorphism::new(self.source.clone(), next.target.clone(), &next.matrix * &self.matrix)
    }
}

/// `φ = λ*: D* → C*`, the transpose of `λ`.
pub fn dualize_extension(lambda: &CoalgebraMorphism) -> AlgebraMorphism {
    let a = Arc::new(dualize_coalgebra(lambda.target()));
    let b = Arc::new(dualize_coalgebra(lambda.source()));
    AlgebraMorphism::new(a, b, lambda.matrix().transpose()).expect("the dual of a coalgebra morphism")
}

/// An action of an algebra by matrices, one per basis element.
#[derive(Clone, Debug)]
pub struct Action {
    pub algebra: Arc<Algebra>,
    pub matrices: Vec<Matrix>,
}

/// A left module, right module or bimodule (left and right actions that commute).
#[derive(Clone, Debug)]
pub struct ModuleRep {
    dim: usize,
    left: Option<Action>,
    right: Option<Action>,
}

fn validate_action(dim: usize, action: &Action, right: bool, report: &mut Report) -> Result<()> {
    let a = &action.algebra;
    let n = a.dim();
    let field = a.field();
    if action.matrices.len() != n || action.matrices.iter().any(|m| m.shape() != (dim, dim)) {
        return Err(Error::DimensionMismatch("one square action matrix per basis element expected".into()));
    }
    for i in 0..n {
        for j in 0..n {
            let prod = combine(field, dim, &action.matrices, &a.multiplication().column(i * n + j));
            let composed = if right {
                &action.matrices[j] * &action.matrices[i]
            } else {
                &action.matrices[i] * &action.matrices[j]
            };
            if prod != composed {
                report.push(Law::ActionAssociativity, i);
                break;
            }
        }
    }
    if combine(field, dim, &action.matrices, a.unit()) != Matrix::identity(field, dim) {
        report.push(Law::ActionUnit, 0);
    }
    Ok(())
}

impl ModuleRep {
    pub fn new(dim: usize, left: Option<Action>, right: Option<Action>) -> Result<Self> {
        let mut report = Report::pass();
        if let Some(l) = &left {
            validate_action(dim, l, false, &mut report)?;
        }
        if let Some(r) = &right {
            validate_action(dim, r, true, &mut report)?;
        }
        if let (Some(l), Some(r)) = (&left, &right) {
            for (i, lm) in l.matrices.iter().enumerate() {
                if r.matrices.iter().any(|rm| lm * rm != rm * lm) {
                    report.push(Law::BimoduleCompatibility, i);
                }
            }
        }
        if !report.is_pass() {
            return Err(Error::Invalid(report));
        }
        Ok(ModuleRep { dim, left, right })
    }

    /// `A` over itself on the chosen sides.
    pub fn regular(a: Arc<Algebra>, left: bool, right: bool) -> Self {
        let l = left.then(|| Action { algebra: a.clone(), matrices: a.left.clone() });
        let r = right.then(|| Action { algebra: a.clone(), matrices: a.right.clone() });
        ModuleRep { dim: a.dim(), left: l, right: r }
    }

    /// Restriction of scalars along `φ: A → B` for a module over `B`.
    pub fn restrict(&self, phi: &AlgebraMorphism) -> Result<ModuleRep> {
        let pull = |action: &Option<Action>| -> Result<Option<Action>> {
            let Some(action) = action else { return Ok(None) };
            if *action.algebra != **phi.target() {
                return Err(Error::InvalidParameter("module is not over the target of φ".into()));
            }
            let field = phi.source().field();
            let matrices = (0..phi.source().dim())
                .map(|a| combine(field, self.dim, &action.matrices, &phi.matrix().column(a)))
                .collect();
            Ok(Some(Action { algebra: phi.source().clone(), matrices }))
        };
        ModuleRep::new(self.dim, pull(&self.left)?, pull(&self.right)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self) -> Option<&Action> {
        self.left.as_ref()
    }

    pub fn right(&self) -> Option<&Action> {
        self.right.as_ref()
    }

    pub fn without_right(&self) -> ModuleRep {
        ModuleRep { dim: self.dim, left: self.left.clone(), right: None }
    }
}

fn same_action_kind(a: &Option<Action>, b: &Option<Action>) -> Result<bool> {
    match (a, b) {
        (None, None) => Ok(false),
        (Some(x), Some(y)) if *x.algebra == *y.algebra => Ok(true),
        _ => Err(Error::InvalidParameter("modules carry different structures".into())),
    }
}

fn intertwiner_rows(ms: &[Matrix], ns: &[Matrix], m: usize, n: usize, e: &mut Echelon) {
    for (am, an) in ms.iter().zip(ns) {
        for i in 0..n {
            for j in 0..m {
                let mut row = Vec::new();
                for b in 0..m {
                    let s = am.get(b, j);
                    if !s.is_zero() {
                        row.push((i * m + b, s.clone()));
                    }
                }
                for b in 0..n {
                    let s = an.get(i, b);
                    if !s.is_zero() {
                        row.push((b * m + j, -s));
                    }
                }
                e.insert_sparse(&row);
            }
        }
    }
}

/// Linear maps `f: M → N` with `f(a·m) = a·f(m)` and `f(m·a) = f(m)·a` for whichever
/// actions the two modules carry.
pub fn module_hom_space(source: &ModuleRep, target: &ModuleRep) -> Result<HomSpace> {
    let has_left = same_action_kind(&source.left, &target.left)?;
    let has_right = same_action_kind(&source.right, &target.right)?;
    let field = source
        .left
        .as_ref()
        .or(source.right.as_ref())
        .map(|a| a.algebra.field())
        .ok_or_else(|| Error::InvalidParameter("modules carry no action".into()))?;
    let (m, n) = (source.dim, target.dim);
    let mut e = Echelon::new(field, m * n);
    if has_left {
        intertwiner_rows(&source.left.as_ref().unwrap().matrices, &target.left.as_ref().unwrap().matrices, m, n, &mut e);
    }
    if has_right {
        intertwiner_rows(
            &source.right.as_ref().unwrap().matrices,
            &target.right.as_ref().unwrap().matrices,
            m,
            n,
            &mut e,
        );
    }
    Ok(HomSpace::from_kernel(field, m, n, &e.kernel()))
}

/// Bimodule maps between two bimodules.
pub fn bimodule_hom_space(source: &ModuleRep, target: &ModuleRep) -> Result<HomSpace> {
    if source.left.is_none() || source.right.is_none() {
        return Err(Error::InvalidParameter("bimodules expected".into()));
    }
    module_hom_space(source, target)
}

pub fn is_module_morphism(f: &Matrix, source: &ModuleRep, target: &ModuleRep) -> bool {
    let check = |a: &Option<Action>, b: &Option<Action>| match (a, b) {
        (Some(x), Some(y)) => x.matrices.iter().zip(&y.matrices).all(|(ax, ay)| f * ax == ay * f),
        (None, None) => true,
        _ => false,
    };
    f.shape() == (target.dim, source.dim) && check(&source.left, &target.left) && check(&source.right, &target.right)
}

/// `B ⊗_A B` for `φ: A → B`: the quotient of `B ⊗ B` by `b·φ(a) ⊗ b' − b ⊗ φ(a)·b'`.
/// Coset representatives are supported on the non-pivot coordinates of the reduced
/// relation matrix.
#[derive(Clone, Debug)]
pub struct RingTensor {
    phi: AlgebraMorphism,
    relations: Echelon,
    free: Vec<usize>,
    /// `q x n²`.
    projection: Matrix,
    /// `n² x q`.
    section: Matrix,
}

impl RingTensor {
    pub fn new(phi: &AlgebraMorphism) -> Self {
        let b = phi.target();
        let n = b.dim();
        let field = b.field();
        let mut relations = Echelon::new(field, n * n);
        for k in 0..phi.source().dim() {
            let pa = phi.matrix().column(k);
            let l = b.left_mult_by(&pa);
            let r = b.right_mult_by(&pa);
            for i in 0..n {
                for j in 0..n {
                    let mut row = Vec::new();
                    for x in 0..n {
                        let s = r.get(x, i);
                        if !s.is_zero() {
                            row.push((x * n + j, s.clone()));
                        }
                        let s = l.get(x, j);
                        if !s.is_zero() {
                            row.push((i * n + x, -s));
                        }
                    }
                    relations.insert_sparse(&row);
                }
            }
        }
        let free = relations.free_columns();
        let q = free.len();
        let mut projection = Matrix::zeros(field, q, n * n);
        for x in 0..n * n {
            let mut v = vec![field.zero(); n * n];
            v[x] = field.one();
            relations.reduce(&mut v);
            for (idx, &f) in free.iter().enumerate() {
                if !v[f].is_zero() {
                    projection.set(idx, x, v[f].clone());
                }
            }
        }
        let mut section = Matrix::zeros(field, n * n, q);
        for (idx, &f) in free.iter().enumerate() {
            section.set(f, idx, field.one());
        }
        RingTensor { phi: phi.clone(), relations, free, projection, section }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    pub fn section(&self) -> &Matrix {
        &self.section
    }

    pub fn is_relation(&self, v: &[Scalar]) -> bool {
        self.relations.contains(v)
    }

    /// Class of a vector of `B ⊗ B`.
    pub fn class_of(&self, v: &[Scalar]) -> Vec<Scalar> {
        (&self.projection * &Matrix::column_vector(self.phi.target().field(), v.to_vec())).column(0)
    }

    /// The multiplication `B ⊗_A B → B`.
    pub fn multiplication(&self) -> Matrix {
        self.phi.target().multiplication() * &self.section
    }

    /// `B ⊗_A B` as a `B`-bimodule.
    pub fn bimodule(&self) -> Result<ModuleRep> {
        let b = self.phi.target();
        let n = b.dim();
        let field = b.field();
        let id = Matrix::identity(field, n);
        let induced = |op: Matrix| &(&self.projection * &op) * &self.section;
        let left = (0..n).map(|t| induced(b.left_mult(t).kron(&id))).collect();
        let right = (0..n).map(|t| induced(id.kron(b.right_mult(t)))).collect();
        ModuleRep::new(
            self.dim(),
            Some(Action { algebra: b.clone(), matrices: left }),
            Some(Action { algebra: b.clone(), matrices: right }),
        )
    }
}

/// Why an extension is not Frobenius.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum NoEvidence {
    /// `Hom_A(B, A)` and `B` have different dimensions, so they cannot be isomorphic.
    DimensionMismatch { hom_dim: usize, dim: usize },
    /// `B` is not projective as a left `A`-module: the dual-basis system is infeasible.
    NotProjective { hom_dim: usize },
    /// `E ↦ det Θ_E` vanishes identically on the space of bimodule maps `E`.
    DeterminantFamilyVanishes { parameters: usize, size: usize, route: FamilyRoute, evaluations: u64 },
    /// Coalgebra-side search: no `α` of a complete grid or enumeration admits a `β`.
    NoCompatibleBeta { alpha_parameters: usize, route: FamilyRoute, alphas: u64 },
}

/// Frobenius homomorphism `E: B → A` (a `k x n` matrix) and dual-bases element `h`,
/// given in `B ⊗ B` coordinates (index `x * n + y`).
#[derive(Clone, Debug)]
pub struct RingWitness {
    pub e: Matrix,
    pub h: Vec<Scalar>,
    pub search: FamilyOutcome,
}

#[derive(Clone, Debug)]
pub enum RingVerdict {
    Yes(RingWitness),
    No(NoEvidence),
    Unknown { confidence: f64, trials: usize, seed: u64 },
}

impl RingVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, RingVerdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, RingVerdict::No(_))
    }
}

fn left_restricted(phi: &AlgebraMorphism) -> Result<ModuleRep> {
    ModuleRep::regular(phi.target().clone(), true, false).restrict(phi)
}

fn bimodule_restricted(phi: &AlgebraMorphism) -> Result<ModuleRep> {
    ModuleRep::regular(phi.target().clone(), true, true).restrict(phi)
}

/// Whether `B` is projective as a left `A`-module: there are `f_i ∈ Hom_A(B, A)` with
/// `Σ_i φ(f_i(b)) e_i = b` for all `b`.
fn is_projective(phi: &AlgebraMorphism, w: &HomSpace) -> bool {
    let b = phi.target();
    let n = b.dim();
    let field = b.field();
    let r = w.dim();
    let unknowns = n * r;
    let mut e = Echelon::new(field, unknowns + 1);
    // v[(rr, col)] = φ(W_rr(e_col)) ∈ B
    let images: Vec<Vec<Matrix>> = w
        .basis()
        .iter()
        .map(|f| {
            let pf = phi.matrix() * f;
            (0..n).map(|col| pf.column_as_matrix(col, n, 1)).collect()
        })
        .collect();
    for col in 0..n {
        for y in 0..n {
            let mut row = Vec::new();
            for i in 0..n {
                for (rr, per_col) in images.iter().enumerate() {
                    let s = (b.right_mult(i) * &per_col[col]).get(y, 0).clone();
                    if !s.is_zero() {
                        row.push((i * r + rr, s));
                    }
                }
            }
            if y == col {
                row.push((unknowns, field.one()));
            }
            e.insert_sparse(&row);
        }
    }
    e.solution().is_some()
}

/// Decides whether `φ: A → B` is a Frobenius extension.
///
/// Over a field, `B` is Frobenius over `A` iff `B` is left `A`-projective and, for some
/// `A`-bimodule map `E: B → A`, the left `A`-linear map `Θ_E: B → Hom_A(B, A)`,
/// `b ↦ E(− · b)`, is bijective. After the dimension test this becomes the existence of
/// an invertible member of the linear family `Σ t_i Θ_{E_i}`.
pub fn check_frobenius_ring_extension(phi: &AlgebraMorphism, opts: &SearchOptions) -> Result<RingVerdict> {
    let a = phi.source();
    let b = phi.target();
    let (k, n) = (a.dim(), b.dim());
    let field = b.field();

    let w = module_hom_space(&left_restricted(phi)?, &ModuleRep::regular(a.clone(), true, false))?;
    if w.dim() != n {
        return Ok(RingVerdict::No(NoEvidence::DimensionMismatch { hom_dim: w.dim(), dim: n }));
    }
    if !is_projective(phi, &w) {
        return Ok(RingVerdict::No(NoEvidence::NotProjective { hom_dim: w.dim() }));
    }
    let w_space = Subspace::new(Matrix::from_columns(
        field,
        k * n,
        &w.basis().iter().map(|f| f.entries().to_vec()).collect::<Vec<_>>(),
    ))?;

    let e_space = bimodule_hom_space(&bimodule_restricted(phi)?, &ModuleRep::regular(a.clone(), true, true))?;
    let mut family = Vec::with_capacity(e_space.dim());
    for ei in e_space.basis() {
        let cols: Vec<Vec<Scalar>> = (0..n).map(|bb| (ei * b.right_mult(bb)).entries().to_vec()).collect();
        let theta = w_space
            .coordinates(&Matrix::from_columns(field, k * n, &cols))
            .ok_or_else(|| Error::Inconsistent("Θ_E(b) is not left A-linear".into()))?;
        family.push(theta);
    }
    let outcome = invertible_in_affine_family(&Matrix::zeros(field, n, n), &family, opts)?;
    let params = match &outcome {
        FamilyOutcome::Witness { params, .. } => params.clone(),
        FamilyOutcome::NoneExists { route, evaluations } => {
            return Ok(RingVerdict::No(NoEvidence::DeterminantFamilyVanishes {
                parameters: family.len(),
                size: n,
                route: route.clone(),
                evaluations: *evaluations,
            }))
        }
        FamilyOutcome::Unknown { confidence, trials, seed, .. } => {
            return Ok(RingVerdict::Unknown { confidence: *confidence, trials: *trials, seed: *seed })
        }
    };
    let e = e_space.combination(&params);
    let h = dual_bases(phi, &e)?;
    Ok(RingVerdict::Yes(RingWitness { e, h, search: outcome }))
}

/// Solves `Σ E(b h_i) g_i = b = Σ h_i E(g_i b)` for `h = Σ h_xy e_x ⊗ e_y ∈ B ⊗ B`.
pub fn dual_bases(phi: &AlgebraMorphism, e: &Matrix) -> Result<Vec<Scalar>> {
    let b = phi.target();
    let n = b.dim();
    let field = b.field();
    let unknowns = n * n;
    let mut ech = Echelon::new(field, unknowns + 1);
    // first identity: coefficient of h_xy in coordinate z of b = e_bb is (φE(e_bb e_x) · e_y)_z
    for bb in 0..n {
        let images: Vec<Matrix> = (0..n)
            .map(|x| phi.matrix() * &(e * &b.left_mult(bb).column_as_matrix(x, n, 1)))
            .collect();
        for z in 0..n {
            let mut row = Vec::new();
            for (x, img) in images.iter().enumerate() {
                for y in 0..n {
                    let s = (b.right_mult(y) * img).get(z, 0).clone();
                    if !s.is_zero() {
                        row.push((x * n + y, s));
                    }
                }
            }
            if z == bb {
                row.push((unknowns, field.one()));
            }
            ech.insert_sparse(&row);
        }
    }
    // second identity: coefficient of h_xy is (e_x · φE(e_y e_bb))_z
    for bb in 0..n {
        let images: Vec<Matrix> = (0..n)
            .map(|y| phi.matrix() * &(e * &b.right_mult(bb).column_as_matrix(y, n, 1)))
            .collect();
        for z in 0..n {
            let mut row = Vec::new();
            for x in 0..n {
                for (y, img) in images.iter().enumerate() {
                    let s = (b.left_mult(x) * img).get(z, 0).clone();
                    if !s.is_zero() {
                        row.push((x * n + y, s));
                    }
                }
            }
            if z == bb {
                row.push((unknowns, field.one()));
            }
            ech.insert_sparse(&row);
        }
    }
    ech.solution()
        .map(|s| s.particular)
        .ok_or_else(|| Error::Inconsistent("no dual-bases element for an invertible Θ_E".into()))
}

/// Exact replay of a ring-extension witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingReplay {
    pub e_is_bimodule_map: bool,
    pub left_identity: bool,
    pub right_identity: bool,
    pub h_is_central: bool,
}

impl RingReplay {
    pub fn holds(&self) -> bool {
        self.e_is_bimodule_map && self.left_identity && self.right_identity && self.h_is_central
    }
}

pub fn replay_ring_witness(phi: &AlgebraMorphism, e: &Matrix, h: &[Scalar]) -> Result<RingReplay> {
    let a = phi.source();
    let b = phi.target();
    let n = b.dim();
    let field = b.field();
    if e.shape() != (a.dim(), n) || h.len() != n * n {
        return Err(Error::DimensionMismatch("witness shapes do not match the extension".into()));
    }
    let e_is_bimodule_map =
        is_module_morphism(e, &bimodule_restricted(phi)?, &ModuleRep::regular(a.clone(), true, true));
    let id = Matrix::identity(field, n);
    let mut left = Matrix::zeros(field, n, n);
    let mut right = Matrix::zeros(field, n, n);
    for x in 0..n {
        for y in 0..n {
            let s = &h[x * n + y];
            if s.is_zero() {
                continue;
            }
            // b ↦ φ(E(b e_x)) e_y and b ↦ e_x φ(E(e_y b))
            let l = &(b.right_mult(y) * &(phi.matrix() * &(e * b.right_mult(x))));
            let r = &(b.left_mult(x) * &(phi.matrix() * &(e * b.left_mult(y))));
            left = left.add(&l.scale(s));
            right = right.add(&r.scale(s));
        }
    }
    let tensor = RingTensor::new(phi);
    let hv = Matrix::column_vector(field, h.to_vec());
    let h_is_central = (0..n).all(|t| {
        let lt = &b.left_mult(t).kron(&id) * &hv;
        let rt = &id.kron(b.right_mult(t)) * &hv;
        tensor.is_relation(&lt.sub(&rt).column(0))
    });
    Ok(RingReplay { e_is_bimodule_map, left_identity: left == id, right_identity: right == id, h_is_central })
}

/// The comparison map `π: C* ⊗_{D*} C* → (C □_D C)*`, restriction of functionals.
#[derive(Clone, Debug)]
pub struct DualCotensorIso {
    /// `dim(C □_D C) x dim(C* ⊗_{D*} C*)`, in the cotensor basis and the coset
    /// representatives of [`RingTensor`].
    pub pi: Matrix,
    pub tensor_dim: usize,
    pub cotensor_dim: usize,
    pub rank: usize,
    pub is_bimodule_map: bool,
}

impl DualCotensorIso {
    pub fn is_iso(&self) -> bool {
        self.tensor_dim == self.cotensor_dim && self.rank == self.tensor_dim && self.is_bimodule_map
    }
}

pub fn dual_cotensor_iso(lambda: &CoalgebraMorphism) -> Result<DualCotensorIso> {
    let phi = dualize_extension(lambda);
    let tensor = RingTensor::new(&phi);
    let square = cotensor_square(lambda)?;
    let pi = &square.basis().transpose() * tensor.section();
    let rank = pi.rank();

    let n = lambda.source().dim();
    let s = square.dim();
    let field = phi.target().field();
    let (Some(rho_l), Some(rho_r)) = (square.left_coaction(), square.right_coaction()) else {
        return Err(Error::Inconsistent("cotensor square lacks its coactions".into()));
    };
    // C* acts on (C □ C)* through the transposed contractions of the two coactions.
    let dual_action = |rows: &dyn Fn(usize, usize) -> usize, coaction: &Matrix, k: usize| {
        let mut m = Matrix::zeros(field, s, s);
        for r in 0..s {
            for r2 in 0..s {
                m.set(r, r2, coaction.get(rows(k, r2), r).clone());
            }
        }
        m
    };
    let bimodule = tensor.bimodule()?;
    let (ql, qr) = (bimodule.left().unwrap(), bimodule.right().unwrap());
    let mut is_bimodule_map = true;
    for k in 0..n {
        let al = dual_action(&|k, r2| k * s + r2, rho_l.coaction(), k);
        let ar = dual_action(&|k, r2| r2 * n + k, rho_r.coaction(), k);
        if &pi * &ql.matrices[k] != &al * &pi || &pi * &qr.matrices[k] != &ar * &pi {
            is_bimodule_map = false;
            break;
        }
    }
    Ok(DualCotensorIso { pi, tensor_dim: tensor.dim(), cotensor_dim: s, rank, is_bimodule_map })
}

/// `Φ(α) = α*` from `D`-bicomodule maps `D → C` to `D*`-bimodule maps `C* → D*`.
#[derive(Clone, Debug)]
pub struct DualHomIso {
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub lands_in_target: bool,
}

impl DualHomIso {
    pub fn is_iso(&self) -> bool {
        self.lands_in_target && self.source_dim == self.target_dim && self.rank == self.source_dim
    }
}

pub fn dual_hom_iso(lambda: &CoalgebraMorphism) -> Result<DualHomIso> {
    let alphas = bicomodule_hom(&Bicomodule::regular(lambda.target().clone()), &Bicomodule::via(lambda)?)?;
    let phi = dualize_extension(lambda);
    let targets = bimodule_hom_space(&bimodule_restricted(&phi)?, &ModuleRep::regular(phi.source().clone(), true, true))?;
    let transposes: Vec<Matrix> = alphas.basis().iter().map(Matrix::transpose).collect();
    let lands_in_target = transposes.iter().all(|t| targets.contains(t));
    let field = phi.source().field();
    let len = phi.source().dim() * phi.target().dim();
    let stacked = Matrix::from_columns(field, len, &transposes.iter().map(|t| t.entries().to_vec()).collect::<Vec<_>>());
    Ok(DualHomIso {
        source_dim: alphas.dim(),
        target_dim: targets.dim(),
        rank: stacked.rank(),
        lands_in_target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn duals_of_zoo_coalgebras() {
        let a = dualize_coalgebra(&zoo::grouplike(q(), 3).unwrap());
        for i in 0..3 {
            for j in 0..3 {
                let mut e = vec![q().zero(); 3];
                if i == j {
                    e[i] = q().one();
                }
                let mut ei = vec![q().zero(); 3];
                ei[i] = q().one();
                let mut ej = vec![q().zero(); 3];
                ej[j] = q().one();
                assert_eq!(a.mul(&ei, &ej), e);
            }
        }
        let d = dualize_coalgebra(&zoo::dual_numbers(q()));
        let x = vec![q().zero(), q().one()];
        assert_eq!(d.mul(&x, &x), vec![q().zero(), q().zero()]);
        assert_eq!(d.unit(), &[q().one(), q().zero()]);

        // e*_ij e*_kl = δ_jk e*_il with basis index i * 2 + j
        let m = dualize_coalgebra(&zoo::matrix_coalgebra(q(), 2).unwrap());
        let unit = |i: usize| {
            let mut v = vec![q().zero(); 4];
            v[i] = q().one();
            v
        };
        assert_eq!(m.mul(&unit(1), &unit(2)), unit(0));
        assert_eq!(m.mul(&unit(2), &unit(1)), unit(3));
        assert_eq!(m.mul(&unit(0), &unit(2)), vec![q().zero(); 4]);
    }

    #[test]
    fn dualized_extensions() {
        let fold = zoo::set_map_extension(q(), &[0, 0], 1).unwrap();
        let phi = dualize_extension(&fold);
        assert_eq!(phi.matrix(), &Matrix::from_i64(q(), &[&[1], &[1]]));
        let c = Arc::new(zoo::dual_numbers(q()));
        let eps = dualize_extension(&CoalgebraMorphism::counit_of(c.clone()));
        assert_eq!(eps.matrix().column(0), c.counit_values());
    }

    #[test]
    fn bimodule_endomorphisms() {
        for (c, expected) in [(zoo::grouplike(q(), 2).unwrap(), 2), (zoo::matrix_coalgebra(q(), 2).unwrap(), 1)] {
            let a = Arc::new(dualize_coalgebra(&c));
            let reg = ModuleRep::regular(a, true, true);
            assert_eq!(bimodule_hom_space(&reg, &reg).unwrap().dim(), expected);
        }
        let k = ModuleRep::regular(Arc::new(Algebra::trivial(q())), true, true);
        assert_eq!(bimodule_hom_space(&k, &k).unwrap().dim(), 1);
    }

    #[test]
    fn ring_tensor_dimensions() {
        let b = Arc::new(dualize_coalgebra(&zoo::grouplike(q(), 2).unwrap()));
        assert_eq!(RingTensor::new(&AlgebraMorphism::identity(b.clone())).dim(), 2);
        let t = RingTensor::new(&AlgebraMorphism::unit_map(b.clone()));
        assert_eq!(t.dim(), 4);
        assert!(t.bimodule().is_ok());
        let m = Arc::new(dualize_coalgebra(&zoo::matrix_coalgebra(q(), 2).unwrap()));
        let t = RingTensor::new(&AlgebraMorphism::identity(m));
        assert_eq!(t.dim(), 4);
        assert_eq!(t.projection() * t.section(), Matrix::identity(q(), 4));
    }

    #[test]
    fn ring_extension_examples() {
        let opts = SearchOptions::default();
        let b = Arc::new(dualize_coalgebra(&zoo::matrix_coalgebra(q(), 2).unwrap()));
        let id = AlgebraMorphism::identity(b);
        let RingVerdict::Yes(w) = check_frobenius_ring_extension(&id, &opts).unwrap() else {
            panic!("identity extension is Frobenius")
        };
        assert!(replay_ring_witness(&id, &w.e, &w.h).unwrap().holds());

        let dn = Arc::new(dualize_coalgebra(&zoo::dual_numbers(q())));
        let unit = AlgebraMorphism::unit_map(dn);
        let RingVerdict::Yes(w) = check_frobenius_ring_extension(&unit, &opts).unwrap() else {
            panic!("K[x]/x² is Frobenius")
        };
        assert!(!w.e.get(0, 1).is_zero());
        assert!(replay_ring_witness(&unit, &w.e, &w.h).unwrap().holds());

        let local = Arc::new(dualize_coalgebra(&zoo::square_zero_local(q(), 2).unwrap()));
        let verdict = check_frobenius_ring_extension(&AlgebraMorphism::unit_map(local), &opts).unwrap();
        assert!(matches!(verdict, RingVerdict::No(NoEvidence::DeterminantFamilyVanishes { .. })));
    }

    #[test]
    fn projectivity_is_required() {
        // K[x]/x² → K, x ↦ 0: Θ_E is bijective but K is not projective over K[x]/x².
        let lambda = zoo::grouplike_into_dual_numbers(q());
        let phi = dualize_extension(&lambda);
        let verdict = check_frobenius_ring_extension(&phi, &SearchOptions::default()).unwrap();
        assert!(matches!(verdict, RingVerdict::No(NoEvidence::NotProjective { .. })));
    }

    #[test]
    fn duality_isomorphisms_on_small_extensions() {
        let c = Arc::new(zoo::dual_numbers(q()));
        for lambda in [
            CoalgebraMorphism::identity(c.clone()),
            CoalgebraMorphism::counit_of(c),
            zoo::set_map_extension(q(), &[0, 0], 1).unwrap(),
        ] {
            assert!(dual_cotensor_iso(&lambda).unwrap().is_iso());
            assert!(dual_hom_iso(&lambda).unwrap().is_iso());
        }
    }
}
