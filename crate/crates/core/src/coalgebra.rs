//! Finite-dimensional coalgebras and coalgebra morphisms.
//!
//! Tensor products use the lexicographic product basis: `e_j ⊗ e_k` has index
//! `j * dim + k`. A comultiplication is stored both as sparse structure constants
//! (`Δ(e_i) = Σ c_ijk e_j ⊗ e_k`) and as the dense `dim² x dim` matrix whose column `i`
//! holds `Δ(e_i)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::Matrix;
use crate::report::{Law, Report};

/// Default cap on the dimension of any single object.
pub const DEFAULT_MAX_DIM: usize = 64;

/// Sparse 3-index structure constants; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseTensor {
    entries: BTreeMap<(usize, usize, usize), Scalar>,
}

impl SparseTensor {
    pub fn new() -> Self {
        SparseTensor::default()
    }

    /// Adds `value` to entry `(i, j, k)`.
    pub fn add(&mut self, i: usize, j: usize, k: usize, value: Scalar) {
        if value.is_zero() {
            return;
        }
        let key = (i, j, k);
        match self.entries.get_mut(&key) {
            Some(v) => {
                *v = &*v + &value;
                if v.is_zero() {
                    self.entries.remove(&key);
                }
            }
            None => {
                self.entries.insert(key, value);
            }
        }
    }

    /// Overwrites entry `(i, j, k)`.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Scalar) {
        if value.is_zero() {
            self.entries.remove(&(i, j, k));
        } else {
            self.entries.insert((i, j, k), value);
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Option<&Scalar> {
        self.entries.get(&(i, j, k))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Scalar)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Unvalidated coalgebra data, as parsed from a document or built by hand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalgebraData {
    pub field: FieldSpec,
    pub dim: usize,
    pub delta: SparseTensor,
    pub counit: Vec<Scalar>,
    pub labels: Option<Vec<String>>,
}

/// A coalgebra whose axioms have been checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalgebra {
    data: CoalgebraData,
    comult: Matrix,
    counit_row: Matrix,
}

fn structural_check(data: &CoalgebraData) -> Result<()> {
    if data.counit.len() != data.dim {
        return Err(Error::DimensionMismatch(format!(
            "counit has {} entries, dimension is {}",
            data.counit.len(),
            data.dim
        )));
    }
    for ((i, j, k), s) in data.delta.iter() {
        if *i >= data.dim || *j >= data.dim || *k >= data.dim {
            return Err(Error::DimensionMismatch(format!(
                "delta index ({i}, {j}, {k}) out of range for dimension {}",
                data.dim
            )));
        }
        if !data.field.contains(s) {
            return Err(Error::FieldMismatch(format!("delta entry {s} not in {}", data.field)));
        }
    }
    if let Some(s) = data.counit.iter().find(|s| !data.field.contains(s)) {
        return Err(Error::FieldMismatch(format!("counit entry {s} not in {}", data.field)));
    }
    if let Some(labels) = &data.labels {
        if labels.len() != data.dim {
            return Err(Error::DimensionMismatch("label count differs from dimension".into()));
        }
    }
    Ok(())
}

fn dense_parts(data: &CoalgebraData) -> (Matrix, Matrix) {
    let n = data.dim;
    let mut comult = Matrix::zeros(data.field, n * n, n);
    for ((i, j, k), s) in data.delta.iter() {
        comult.set(j * n + k, *i, s.clone());
    }
    let counit_row = Matrix::row_vector(data.field, data.counit.clone());
    (comult, counit_row)
}

/// Checks coassociativity and both counit laws on every basis element.
pub fn validate_coalgebra(data: &CoalgebraData) -> Result<Report> {
    structural_check(data)?;
    let n = data.dim;
    let (delta, eps) = dense_parts(data);
    let mut report = Report::pass();
    let left = delta.kron_identity_apply(n, &delta);
    let right = delta.identity_kron_apply(n, &delta);
    let eps_left = eps.kron_identity_apply(n, &delta);
    let eps_right = eps.identity_kron_apply(n, &delta);
    let id = Matrix::identity(data.field, n);
    for i in 0..n {
        if left.column(i) != right.column(i) {
            report.push(Law::Coassociativity, i);
        }
        if eps_left.column(i) != id.column(i) {
            report.push(Law::LeftCounit, i);
        }
        if eps_right.column(i) != id.column(i) {
            report.push(Law::RightCounit, i);
        }
    }
    Ok(report)
}

impl Coalgebra {
    pub fn new(data: CoalgebraData) -> Result<Self> {
        Coalgebra::with_cap(data, DEFAULT_MAX_DIM)
    }

    pub fn with_cap(data: CoalgebraData, cap: usize) -> Result<Self> {
        if data.dim > cap {
            return Err(Error::DimensionCap { dim: data.dim, cap });
        }
        let report = validate_coalgebra(&data)?;
        if !report.is_pass() {
            return Err(Error::Invalid(report));
        }
        let (comult, counit_row) = dense_parts(&data);
        Ok(Coalgebra { data, comult, counit_row })
    }

    /// The one-dimensional coalgebra `K` with `Δ(1) = 1 ⊗ 1`.
    pub fn trivial(field: FieldSpec) -> Self {
        let mut delta = SparseTensor::new();
        delta.set(0, 0, 0, field.one());
        Coalgebra::new(CoalgebraData {
            field,
            dim: 1,
            delta,
            counit: vec![field.one()],
            labels: Some(vec!["1".into()]),
        })
        .expect("trivial coalgebra is valid")
    }

    pub fn field(&self) -> FieldSpec {
        self.data.field
    }

    pub fn dim(&self) -> usize {
        self.data.dim
    }

    pub fn data(&self) -> &CoalgebraData {
        &self.data
    }

    pub fn delta(&self) -> &SparseTensor {
        &self.data.delta
    }

    /// Dense `dim² x dim` comultiplication matrix.
    pub fn comultiplication(&self) -> &Matrix {
        &self.comult
    }

    /// Counit as a `1 x dim` row.
    pub fn counit(&self) -> &Matrix {
        &self.counit_row
    }

    pub fn counit_values(&self) -> &[Scalar] {
        &self.data.counit
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.data.labels.as_deref()
    }

    /// Whether basis element `i` is grouplike: `Δ(e_i) = e_i ⊗ e_i`, `ε(e_i) = 1`.
    pub fn is_grouplike_basis(&self, i: usize) -> bool {
        let n = self.dim();
        self.data.counit[i].is_one()
            && (0..n * n).all(|r| {
                let expected = r == i * n + i;
                let v = self.comult.get(r, i);
                if expected {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
    }

    /// Same space with the flipped comultiplication `τ ∘ Δ`.
    pub fn coopposite(&self) -> Coalgebra {
        let mut delta = SparseTensor::new();
        for ((i, j, k), s) in self.data.delta.iter() {
            delta.set(*i, *k, *j, s.clone());
        }
        Coalgebra::new(CoalgebraData { delta, ..self.data.clone() })
            .expect("co-opposite of a coalgebra is a coalgebra")
    }
}

/// Checks `Δ_D ∘ λ = (λ ⊗ λ) ∘ Δ_C` and `ε_D ∘ λ = ε_C` on every basis element.
pub fn validate_morphism(source: &Coalgebra, target: &Coalgebra, matrix: &Matrix) -> Result<Report> {
    if matrix.shape() != (target.dim(), source.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "morphism matrix is {}x{}, expected {}x{}",
            matrix.rows(),
            matrix.cols(),
            target.dim(),
            source.dim()
        )));
    }
    if source.field() != target.field() || matrix.field() != source.field() {
        return Err(Error::FieldMismatch("morphism fields differ".into()));
    }
    let d = target.dim();
    let lhs = target.comultiplication() * matrix;
    let half = matrix.identity_kron_apply(source.dim(), source.comultiplication());
    let rhs = matrix.kron_identity_apply(d, &half);
    let eps = target.counit() * matrix;
    let mut report = Report::pass();
    for i in 0..source.dim() {
        if lhs.column(i) != rhs.column(i) {
            report.push(Law::Comultiplicativity, i);
        }
        if eps.get(0, i) != source.counit().get(0, i) {
            report.push(Law::CounitPreservation, i);
        }
    }
    Ok(report)
}

/// A validated coalgebra morphism `λ: C → D`.
#[derive(Clone, Debug)]
pub struct CoalgebraMorphism {
    source: Arc<Coalgebra>,
    target: Arc<Coalgebra>,
    matrix: Matrix,
}

impl CoalgebraMorphism {
    pub fn new(source: Arc<Coalgebra>, target: Arc<Coalgebra>, matrix: Matrix) -> Result<Self> {
        let report = validate_morphism(&source, &target, &matrix)?;
        if !report.is_pass() {
            return Err(Error::Invalid(report));
        }
        Ok(CoalgebraMorphism { source, target, matrix })
    }

    pub fn identity(c: Arc<Coalgebra>) -> Self {
        let matrix = Matrix::identity(c.field(), c.dim());
        CoalgebraMorphism { source: c.clone(), target: c, matrix }
    }

    /// The counit `ε_C: C → K` as a coalgebra morphism.
    pub fn counit_of(c: Arc<Coalgebra>) -> Self {
        let k = Arc::new(Coalgebra::trivial(c.field()));
        let matrix = c.counit().clone();
        CoalgebraMorphism { source: c, target: k, matrix }
    }

    pub fn source(&self) -> &Arc<Coalgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Coalgebra> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn field(&self) -> FieldSpec {
        self.source.field()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &CoalgebraMorphism) -> Result<CoalgebraMorphism> {
        if *self.target != *next.source {
            return Err(Error::CoalgebraMismatch("morphisms are not composable".into()));
        }
        CoalgebraMorphism::new(self.source.clone(), next.target.clone(), &next.matrix * &self.matrix)
    }

    /// The same linear map between the co-opposite coalgebras.
    pub fn coopposite(&self) -> CoalgebraMorphism {
        CoalgebraMorphism::new(
            Arc::new(self.source.coopposite()),
            Arc::new(self.target.coopposite()),
            self.matrix.clone(),
        )
        .expect("co-opposite of a morphism is a morphism")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn zoo_coalgebras_validate() {
        for c in [
            zoo::grouplike(q(), 3).unwrap(),
            zoo::matrix_coalgebra(q(), 2).unwrap(),
            zoo::dual_numbers(q()),
        ] {
            assert!(validate_coalgebra(c.data()).unwrap().is_pass());
        }
    }

    #[test]
    fn perturbed_grouplike_fails_left_counit_at_index_1() {
        let g = zoo::grouplike(q(), 3).unwrap();
        let mut data = g.data().clone();
        // Δ(g1) = g1 ⊗ g2 instead of g1 ⊗ g1
        data.delta.set(1, 1, 1, q().zero());
        data.delta.set(1, 1, 2, q().one());
        let report = validate_coalgebra(&data).unwrap();
        assert!(report.has(Law::LeftCounit, 1));
        assert!(!report.has(Law::Coassociativity, 1));
        assert!(report.violations.iter().all(|v| v.basis_index == 1));
        assert!(matches!(Coalgebra::new(data), Err(Error::Invalid(_))));
    }

    #[test]
    fn structural_errors() {
        let mut data = zoo::dual_numbers(q()).data().clone();
        data.counit.pop();
        assert!(validate_coalgebra(&data).is_err());
        let mut data = zoo::dual_numbers(q()).data().clone();
        data.delta.set(0, 5, 0, q().one());
        assert!(validate_coalgebra(&data).is_err());
    }

    #[test]
    fn dimension_cap() {
        let g = zoo::grouplike(q(), 5).unwrap();
        assert!(matches!(
            Coalgebra::with_cap(g.data().clone(), 4),
            Err(Error::DimensionCap { dim: 5, cap: 4 })
        ));
    }

    #[test]
    fn morphism_examples() {
        let c = Arc::new(zoo::matrix_coalgebra(q(), 2).unwrap());
        assert!(validate_morphism(&c, &c, &Matrix::identity(q(), 4)).unwrap().is_pass());

        let s2 = Arc::new(zoo::grouplike(q(), 2).unwrap());
        let s1 = Arc::new(zoo::grouplike(q(), 1).unwrap());
        let fold = Matrix::from_i64(q(), &[&[1, 1]]);
        assert!(validate_morphism(&s2, &s1, &fold).unwrap().is_pass());

        let zero = Matrix::zeros(q(), 1, 2);
        let report = validate_morphism(&s2, &s1, &zero).unwrap();
        assert!(report.has(Law::CounitPreservation, 0));
        assert!(report.has(Law::CounitPreservation, 1));

        assert!(validate_morphism(&s2, &s1, &Matrix::zeros(q(), 2, 2)).is_err());
    }

    #[test]
    fn coopposite_is_involutive() {
        let c = zoo::matrix_coalgebra(q(), 2).unwrap();
        assert_eq!(c.coopposite().coopposite(), c);
    }
}
