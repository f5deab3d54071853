//! Cotensor products `M □_D N = ker(ρ_M ⊗ id − id ⊗ ρ_N)` and the structures they carry.
//!
//! The ambient space `M ⊗ N` uses the lexicographic basis `m_i ⊗ n_l ↦ i * dim N + l`
//! and `M ⊗ D ⊗ N` the basis `(i * dim D + k) * dim N + l`. Over a field the
//! identification of `X ⊗ (M □ N)` with a subspace of `X ⊗ M ⊗ N` is the plain basis
//! inclusion, so no separate data is stored for it.

use std::sync::Arc;

use crate::coalgebra::{Coalgebra, CoalgebraData, CoalgebraMorphism, SparseTensor};
use crate::comodule::{is_comodule_morphism, Bicomodule, Comodule, Side};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};

/// `ω_{M,N} = ρ_M ⊗ id_N − id_M ⊗ ρ_N` for a right `D`-comodule `M` and a left `N`.
pub fn omega(m: &Comodule, n: &Comodule) -> Result<Matrix> {
    check_factors(m, n)?;
    let field = m.field();
    let lhs = m.coaction().kron(&Matrix::identity(field, n.dim()));
    let rhs = Matrix::identity(field, m.dim()).kron(n.coaction());
    Ok(lhs.sub(&rhs))
}

fn check_factors(m: &Comodule, n: &Comodule) -> Result<()> {
    if m.side() != Side::Right || n.side() != Side::Left {
        return Err(Error::InvalidParameter(
            "cotensor needs a right comodule on the left and a left comodule on the right".into(),
        ));
    }
    if **m.over() != **n.over() {
        return Err(Error::CoalgebraMismatch("factors are comodules over different coalgebras".into()));
    }
    Ok(())
}

/// Coordinates of `v ∈ ambient ⊗ C` (rows `p * c + k`) in the basis `space ⊗ C`.
pub(crate) fn coordinates_tensor_right(space: &Subspace, v: &Matrix, c: usize) -> Option<Matrix> {
    let a = space.ambient_dim();
    let cols = v.cols();
    let mut x = Matrix::zeros(v.field(), a, cols * c);
    for col in 0..cols {
        for p in 0..a {
            for k in 0..c {
                let s = v.get(p * c + k, col);
                if !s.is_zero() {
                    x.set(p, col * c + k, s.clone());
                }
            }
        }
    }
    let coords = space.coordinates(&x)?;
    let s = space.dim();
    let mut out = Matrix::zeros(v.field(), s * c, cols);
    for col in 0..cols {
        for r in 0..s {
            for k in 0..c {
                out.set(r * c + k, col, coords.get(r, col * c + k).clone());
            }
        }
    }
    Some(out)
}

/// Coordinates of `v ∈ C ⊗ ambient` (rows `k * a + p`) in the basis `C ⊗ space`.
pub(crate) fn coordinates_tensor_left(space: &Subspace, v: &Matrix, c: usize) -> Option<Matrix> {
    let a = space.ambient_dim();
    let cols = v.cols();
    let mut x = Matrix::zeros(v.field(), a, cols * c);
    for col in 0..cols {
        for k in 0..c {
            for p in 0..a {
                let s = v.get(k * a + p, col);
                if !s.is_zero() {
                    x.set(p, col * c + k, s.clone());
                }
            }
        }
    }
    let coords = space.coordinates(&x)?;
    let s = space.dim();
    let mut out = Matrix::zeros(v.field(), s * c, cols);
    for col in 0..cols {
        for k in 0..c {
            for r in 0..s {
                out.set(k * s + r, col, coords.get(r, col * c + k).clone());
            }
        }
    }
    Some(out)
}

/// `M □_D N` together with any coactions inherited from extra structure on the factors.
#[derive(Clone, Debug)]
pub struct CotensorSpace {
    m: Comodule,
    n: Comodule,
    space: Subspace,
    right: Option<Comodule>,
    left: Option<Comodule>,
}

pub fn cotensor(m: &Comodule, n: &Comodule) -> Result<CotensorSpace> {
    let w = omega(m, n)?;
    Ok(CotensorSpace {
        m: m.clone(),
        n: n.clone(),
        space: Subspace::kernel_of(&w),
        right: None,
        left: None,
    })
}

/// Cotensor product of an `(E, D)`-bicomodule with a `(D, F)`-bicomodule, carrying the
/// induced left `E`- and right `F`-coactions.
pub fn cotensor_bicomodules(m: &Bicomodule, n: &Bicomodule) -> Result<CotensorSpace> {
    cotensor(m.right(), n.left())?.with_left_coaction(m.left())?.with_right_coaction(n.right())
}

/// `C □_D C` for `λ: C → D`, with its two induced `C`-coactions.
pub fn cotensor_square(lambda: &CoalgebraMorphism) -> Result<CotensorSpace> {
    let (left_factor, right_factor) = square_factors(lambda)?;
    cotensor_bicomodules(&left_factor, &right_factor)
}

/// `C` as a `(C, D)`- and as a `(D, C)`-bicomodule.
pub(crate) fn square_factors(lambda: &CoalgebraMorphism) -> Result<(Bicomodule, Bicomodule)> {
    let c = lambda.source().clone();
    let left_factor = Bicomodule::new(
        Comodule::regular(Side::Left, c.clone()),
        Comodule::regular(Side::Right, c.clone()).corestrict(lambda)?,
    )?;
    let right_factor = Bicomodule::new(
        Comodule::regular(Side::Left, c.clone()).corestrict(lambda)?,
        Comodule::regular(Side::Right, c),
    )?;
    Ok((left_factor, right_factor))
}

impl CotensorSpace {
    /// Uses the columns of `basis` instead of the canonical kernel basis; they must be
    /// independent and span `ker ω`.
    pub fn with_basis(m: &Comodule, n: &Comodule, basis: Matrix) -> Result<CotensorSpace> {
        let w = omega(m, n)?;
        if basis.rows() != w.cols() {
            return Err(Error::DimensionMismatch(format!(
                "basis vectors have length {}, expected {}",
                basis.rows(),
                w.cols()
            )));
        }
        let canonical = Subspace::kernel_of(&w);
        let space = Subspace::new(basis)?;
        if !canonical.same_span(&space) {
            return Err(Error::Inconsistent("basis does not span the cotensor product".into()));
        }
        Ok(CotensorSpace { m: m.clone(), n: n.clone(), space, right: None, left: None })
    }

    /// Attaches the coaction `m ⊗ n ↦ m ⊗ n_0 ⊗ n_1` from a right coaction on `N`.
    pub fn with_right_coaction(mut self, n_right: &Comodule) -> Result<CotensorSpace> {
        if n_right.side() != Side::Right || n_right.dim() != self.n.dim() {
            return Err(Error::InvalidParameter("expected a right coaction on the second factor".into()));
        }
        let c = n_right.over().dim();
        let ambient = n_right.coaction().identity_kron_apply(self.m.dim(), self.space.basis());
        let coaction = coordinates_tensor_right(&self.space, &ambient, c).ok_or_else(|| {
            Error::Inconsistent("right coaction does not commute with the cotensor relation".into())
        })?;
        self.right = Some(Comodule::new(Side::Right, n_right.over().clone(), self.dim(), coaction)?);
        Ok(self)
    }

    /// Attaches the coaction `m ⊗ n ↦ m_{-1} ⊗ m_0 ⊗ n` from a left coaction on `M`.
    pub fn with_left_coaction(mut self, m_left: &Comodule) -> Result<CotensorSpace> {
        if m_left.side() != Side::Left || m_left.dim() != self.m.dim() {
            return Err(Error::InvalidParameter("expected a left coaction on the first factor".into()));
        }
        let c = m_left.over().dim();
        let ambient = m_left.coaction().kron_identity_apply(self.n.dim(), self.space.basis());
        let coaction = coordinates_tensor_left(&self.space, &ambient, c).ok_or_else(|| {
            Error::Inconsistent("left coaction does not commute with the cotensor relation".into())
        })?;
        self.left = Some(Comodule::new(Side::Left, m_left.over().clone(), self.dim(), coaction)?);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.ambient_dim()
    }

    /// Columns span the cotensor product inside `M ⊗ N`.
    pub fn basis(&self) -> &Matrix {
        self.space.basis()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.space
    }

    pub fn left_factor(&self) -> &Comodule {
        &self.m
    }

    pub fn right_factor(&self) -> &Comodule {
        &self.n
    }

    pub fn right_coaction(&self) -> Option<&Comodule> {
        self.right.as_ref()
    }

    pub fn left_coaction(&self) -> Option<&Comodule> {
        self.left.as_ref()
    }

    /// Coordinates of ambient vectors (columns of `v`), if they all lie in the space.
    pub fn coordinates(&self, v: &Matrix) -> Option<Matrix> {
        self.space.coordinates(v)
    }

    /// Both inherited coactions as a bicomodule, when both are attached.
    pub fn bicomodule(&self) -> Option<Bicomodule> {
        match (&self.left, &self.right) {
            (Some(l), Some(r)) => Bicomodule::new(l.clone(), r.clone()).ok(),
            _ => None,
        }
    }
}

/// `ι: D □_D C → C`, `d ⊗ c ↦ ε_D(d) c`, and its inverse `c ↦ λ(c_1) ⊗ c_2`.
#[derive(Clone, Debug)]
pub struct Iota {
    pub space: CotensorSpace,
    /// `dim C x dim(D □_D C)`.
    pub forward: Matrix,
    /// `dim(D □_D C) x dim C`.
    pub inverse: Matrix,
}

impl Iota {
    pub fn is_bijective(&self) -> bool {
        let field = self.forward.field();
        let n = self.forward.rows();
        let s = self.forward.cols();
        &self.forward * &self.inverse == Matrix::identity(field, n)
            && &self.inverse * &self.forward == Matrix::identity(field, s)
    }
}

pub fn iota(lambda: &CoalgebraMorphism) -> Result<Iota> {
    let c = lambda.source().clone();
    let d = lambda.target().clone();
    let field = c.field();
    let (cn, dn) = (c.dim(), d.dim());
    let (_, c_dc) = square_factors(lambda)?;
    let d_regular = Bicomodule::regular(d.clone());
    let space = cotensor_bicomodules(&d_regular, &c_dc)?;

    let mut contraction = Matrix::zeros(field, cn, dn * cn);
    for (i, e) in d.counit_values().iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        for x in 0..cn {
            contraction.set(x, i * cn + x, e.clone());
        }
    }
    let forward = &contraction * space.basis();
    let ambient_inverse = lambda.matrix().kron_identity_apply(cn, c.comultiplication());
    let inverse = space
        .coordinates(&ambient_inverse)
        .ok_or_else(|| Error::Inconsistent("λ(c_1) ⊗ c_2 left the cotensor product".into()))?;
    Ok(Iota { space, forward, inverse })
}

impl Iota {
    /// `ι` is a right `C`-comodule map and a left `D`-comodule map.
    pub fn is_bicomodule_morphism(&self, lambda: &CoalgebraMorphism) -> bool {
        let c = lambda.source().clone();
        let (Some(right), Some(left)) = (self.space.right_coaction(), self.space.left_coaction()) else {
            return false;
        };
        let Ok(c_left) = Comodule::regular(Side::Left, c.clone()).corestrict(lambda) else {
            return false;
        };
        is_comodule_morphism(&self.forward, right, &Comodule::regular(Side::Right, c))
            && is_comodule_morphism(&self.forward, left, &c_left)
    }
}

/// The image coalgebra `E = λ(C) ⊆ D` and the comparison of `C □_D C` with `C □_E C`.
#[derive(Clone, Debug)]
pub struct ImageInvariance {
    pub image: Arc<Coalgebra>,
    /// `j: E → D`.
    pub inclusion: CoalgebraMorphism,
    /// `i: C → E` with `j ∘ i = λ`.
    pub corestriction: CoalgebraMorphism,
    pub surjective: bool,
    pub over_target: Subspace,
    pub over_image: Subspace,
    pub kernels_equal: bool,
}

pub fn image_invariance(lambda: &CoalgebraMorphism) -> Result<ImageInvariance> {
    let d = lambda.target().clone();
    let field = d.field();
    let dn = d.dim();
    let surjective = lambda.matrix().rank() == dn;
    let image_basis = if surjective {
        Matrix::identity(field, dn)
    } else {
        Subspace::column_space(lambda.matrix())?.basis().clone()
    };
    let e_dim = image_basis.cols();
    let image_space = Subspace::new(image_basis.clone())?;
    let pair_space = Subspace::new(image_basis.kron(&image_basis))?;

    let restricted = pair_space
        .coordinates(&(d.comultiplication() * &image_basis))
        .ok_or_else(|| Error::Inconsistent("image of λ is not a subcoalgebra".into()))?;
    let mut delta = SparseTensor::new();
    for i in 0..e_dim {
        for j in 0..e_dim {
            for k in 0..e_dim {
                delta.set(i, j, k, restricted.get(j * e_dim + k, i).clone());
            }
        }
    }
    let counit = (d.counit() * &image_basis).row(0).to_vec();
    let image = Arc::new(Coalgebra::new(CoalgebraData { field, dim: e_dim, delta, counit, labels: None })?);
    let inclusion = CoalgebraMorphism::new(image.clone(), d.clone(), image_basis)?;
    let i_matrix = image_space
        .coordinates(lambda.matrix())
        .ok_or_else(|| Error::Inconsistent("λ does not land in its image".into()))?;
    let corestriction = CoalgebraMorphism::new(lambda.source().clone(), image.clone(), i_matrix)?;

    let kernel_over = |mu: &CoalgebraMorphism| -> Result<Subspace> {
        let c = mu.source().clone();
        let m = Comodule::regular(Side::Right, c.clone()).corestrict(mu)?;
        let n = Comodule::regular(Side::Left, c).corestrict(mu)?;
        Ok(Subspace::kernel_of(&omega(&m, &n)?))
    };
    let over_target = kernel_over(lambda)?;
    let over_image = kernel_over(&corestriction)?;
    let kernels_equal = over_target.same_span(&over_image);
    Ok(ImageInvariance {
        image,
        inclusion,
        corestriction,
        surjective,
        over_target,
        over_image,
        kernels_equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::zoo;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn omega_over_trivial_coalgebra_vanishes() {
        let k = Arc::new(Coalgebra::trivial(q()));
        let m = Comodule::cofree(Side::Right, 2, k.clone());
        let n = Comodule::cofree(Side::Left, 3, k);
        assert!(omega(&m, &n).unwrap().is_zero());
        assert_eq!(cotensor(&m, &n).unwrap().dim(), 6);
    }

    #[test]
    fn omega_on_grouplike_pair() {
        let s2 = Arc::new(zoo::grouplike(q(), 2).unwrap());
        let m = Comodule::regular(Side::Right, s2.clone());
        let n = Comodule::regular(Side::Left, s2);
        let w = omega(&m, &n).unwrap();
        assert_eq!(w.rank(), 2);
        assert_eq!(cotensor(&m, &n).unwrap().dim(), 2);
    }

    #[test]
    fn dual_numbers_cotensor_with_itself() {
        let d = Arc::new(zoo::dual_numbers(q()));
        let t = cotensor(&Comodule::regular(Side::Right, d.clone()), &Comodule::regular(Side::Left, d))
            .unwrap();
        assert_eq!(t.dim(), 2);
    }

    #[test]
    fn induced_coactions_restrict_ambient_ones() {
        let c = Arc::new(zoo::matrix_coalgebra(q(), 2).unwrap());
        let sq = cotensor_square(&CoalgebraMorphism::identity(c.clone())).unwrap();
        assert_eq!(sq.dim(), 4);
        let right = sq.right_coaction().unwrap();
        // embedding then coacting equals coacting then embedding
        let ambient = c.comultiplication().identity_kron_apply(4, sq.basis());
        let via_space = sq.basis().kron(&Matrix::identity(q(), 4)).checked_mul(right.coaction()).unwrap();
        assert_eq!(ambient, via_space);
        assert!(sq.bicomodule().is_some());
    }

    #[test]
    fn set_map_cotensor_dimension() {
        let f = zoo::set_map_extension(q(), &[0, 1, 1, 2], 3).unwrap();
        assert_eq!(cotensor_square(&f).unwrap().dim(), 1 + 4 + 1);
    }

    #[test]
    fn iota_examples() {
        let c = Arc::new(zoo::dual_numbers(q()));
        for lambda in [
            CoalgebraMorphism::identity(c.clone()),
            CoalgebraMorphism::counit_of(c),
            zoo::set_map_extension(q(), &[0, 0], 1).unwrap(),
        ] {
            let i = iota(&lambda).unwrap();
            assert!(i.is_bijective());
            assert!(i.is_bicomodule_morphism(&lambda));
        }
    }

    #[test]
    fn image_of_inclusion() {
        let incl = zoo::set_map_extension(q(), &[1], 2).unwrap();
        let r = image_invariance(&incl).unwrap();
        assert!(!r.surjective);
        assert_eq!(r.image.dim(), 1);
        assert!(r.kernels_equal);
        assert_eq!(r.over_target.dim(), 1);

        let eps = CoalgebraMorphism::counit_of(Arc::new(zoo::dual_numbers(q())));
        let r = image_invariance(&eps).unwrap();
        assert!(r.surjective && r.kernels_equal);
    }
}
