use std::sync::Arc;

use proptest::prelude::*;

use cofrob::algebra::{
    check_frobenius_ring_extension, dualize_coalgebra, dualize_extension, replay_ring_witness, validate_algebra,
    RingVerdict,
};
use cofrob::coalgebra::{Coalgebra, CoalgebraMorphism};
use cofrob::comodule::{hom_space, is_comodule_morphism, is_injective_comodule, validate_comodule, Comodule, Side};
use cofrob::cotensor::{cotensor, cotensor_square, iota, omega};
use cofrob::document::{from_json, to_json, ComoduleDoc, MorphismDoc};
use cofrob::family::{family_member, invertible_in_affine_family, FamilyOutcome, FamilyRoute, SearchOptions};
use cofrob::frobenius::{check_frobenius_extension, gamma_form, reconstruct_beta, CheckOptions, Verdict};
use cofrob::par::Strategy as Execution;
use cofrob::zoo::{self, direct_sum_coring};
use cofrob::{FieldSpec, Matrix, Scalar};

fn fields() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        Just(FieldSpec::prime(2).unwrap()),
        Just(FieldSpec::prime(3).unwrap()),
        Just(FieldSpec::prime(5).unwrap()),
    ]
}

fn matrix(field: FieldSpec, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |v| Matrix::from_vec(field, rows, cols, v.into_iter().map(|x| field.from_i64(x)).collect()))
}

fn sized_matrix() -> impl Strategy<Value = Matrix> {
    (fields(), 1usize..=5, 1usize..=5).prop_flat_map(|(f, r, c)| matrix(f, r, c))
}

fn extension() -> impl Strategy<Value = (String, CoalgebraMorphism)> {
    (prop_oneof![Just(FieldSpec::Rationals), Just(FieldSpec::prime(3).unwrap())], any::<prop::sample::Index>())
        .prop_map(|(field, idx)| {
            let all = zoo::extensions(field);
            all[idx.index(all.len())].clone()
        })
}

fn set_map() -> impl Strategy<Value = (FieldSpec, Vec<usize>, usize)> {
    (fields(), 1usize..=3, 1usize..=4)
        .prop_flat_map(|(f, t, n)| (Just(f), proptest::collection::vec(0..t, n), Just(t)))
}

fn comodules(c: &Arc<Coalgebra>, side: Side) -> Vec<Comodule> {
    zoo::standard_comodules(c.clone(), side, 4)
}

fn col(field: FieldSpec, v: Vec<Scalar>) -> Matrix {
    Matrix::column_vector(field, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_is_annihilated_and_rank_nullity_holds(a in sized_matrix()) {
        let k = a.kernel();
        prop_assert_eq!(k.rows(), a.cols());
        if k.cols() > 0 {
            prop_assert!((&a * &k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }
        prop_assert_eq!(a.rank() + k.cols(), a.cols());
    }

    #[test]
    fn solve_substitutes_exactly_or_raises_rank(
        (a, b) in sized_matrix().prop_flat_map(|a| {
            let f = a.field();
            let r = a.rows();
            (Just(a), proptest::collection::vec(-3i64..=3, r).prop_map(move |v| v.into_iter().map(|x| f.from_i64(x)).collect::<Vec<_>>()))
        })
    ) {
        let field = a.field();
        match a.solve(&b).unwrap() {
            Some(sol) => {
                prop_assert_eq!(&a * &col(field, sol.particular.clone()), col(field, b.clone()));
                if sol.null_basis.cols() > 0 {
                    prop_assert!((&a * &sol.null_basis).is_zero());
                }
            }
            None => {
                let augmented = a.hstack(&col(field, b.clone())).unwrap();
                prop_assert!(augmented.rank() > a.rank());
            }
        }
    }

    #[test]
    fn affine_family_outcomes_are_replayed_and_deterministic(
        (base, family) in (fields(), 1usize..=3, 0usize..=3).prop_flat_map(|(f, n, k)| {
            (matrix(f, n, n), proptest::collection::vec(matrix(f, n, n), k))
        }),
        seed in 0u64..1000,
    ) {
        let opts = SearchOptions { seed, budget: 10_000, ..SearchOptions::default() };
        let out = invertible_in_affine_family(&base, &family, &opts).unwrap();
        match &out {
            FamilyOutcome::Witness { params, .. } => {
                prop_assert!(!family_member(&base, &family, params).determinant().unwrap().is_zero());
            }
            FamilyOutcome::NoneExists { route, .. } => {
                let deterministic = matches!(
                    route,
                    FamilyRoute::Constant | FamilyRoute::Grid { .. } | FamilyRoute::Exhaustive { .. } | FamilyRoute::Symbolic { .. }
                );
                prop_assert!(deterministic);
                // spot-check a few points off the grid
                let field = base.field();
                for t in [2i64, -1, 7] {
                    let params = vec![field.from_i64(t); family.len()];
                    prop_assert!(family_member(&base, &family, &params).determinant().unwrap().is_zero());
                }
            }
            FamilyOutcome::Unknown { .. } => {}
        }
        prop_assert_eq!(&invertible_in_affine_family(&base, &family, &opts).unwrap(), &out);
        let sequential = SearchOptions { strategy: Execution::Sequential, ..opts };
        prop_assert_eq!(&invertible_in_affine_family(&base, &family, &sequential).unwrap(), &out);
    }

    #[test]
    fn corestriction_validates_and_is_functorial((_, lambda) in extension(), side_right in any::<bool>()) {
        let side = if side_right { Side::Right } else { Side::Left };
        let c = lambda.source().clone();
        let to_k = CoalgebraMorphism::counit_of(lambda.target().clone());
        let composite = lambda.then(&to_k).unwrap();
        for m in comodules(&c, side) {
            let down = m.corestrict(&lambda).unwrap();
            prop_assert!(validate_comodule(side, lambda.target(), down.dim(), down.coaction()).unwrap().is_pass());
            let same = m.corestrict(&CoalgebraMorphism::identity(c.clone())).unwrap();
            prop_assert_eq!(same.coaction_tensor(), m.coaction_tensor());
            let twice = down.corestrict(&to_k).unwrap();
            prop_assert_eq!(twice.coaction_tensor(), m.corestrict(&composite).unwrap().coaction_tensor());
        }
    }

    #[test]
    fn set_map_corestriction_composes((field, f, t) in set_map(), g in proptest::collection::vec(0usize..2, 3)) {
        let lambda = zoo::set_map_extension(field, &f, t).unwrap();
        let g: Vec<usize> = g[..t].to_vec();
        let mu = zoo::set_map_extension(field, &g, 2).unwrap();
        let mu = CoalgebraMorphism::new(lambda.target().clone(), mu.target().clone(), mu.matrix().clone()).unwrap();
        let composite = lambda.then(&mu).unwrap();
        for m in comodules(lambda.source(), Side::Right) {
            let stepwise = m.corestrict(&lambda).unwrap().corestrict(&mu).unwrap();
            prop_assert_eq!(stepwise.coaction_tensor(), m.corestrict(&composite).unwrap().coaction_tensor());
        }
    }

    #[test]
    fn hom_space_elements_intertwine(
        (_, lambda) in extension(),
        picks in (any::<prop::sample::Index>(), any::<prop::sample::Index>()),
        coeffs in proptest::collection::vec(-3i64..=3, 16),
    ) {
        let c = lambda.source().clone();
        let ms = comodules(&c, Side::Right);
        let (m, n) = (&ms[picks.0.index(ms.len())], &ms[picks.1.index(ms.len())]);
        let h = hom_space(&[(m, n)]).unwrap();
        for f in h.basis() {
            prop_assert!(is_comodule_morphism(f, m, n));
        }
        let field = c.field();
        let xs: Vec<Scalar> = coeffs.iter().cycle().take(h.dim()).map(|&x| field.from_i64(x)).collect();
        let combo = h.combination(&xs);
        prop_assert!(is_comodule_morphism(&combo, m, n));
        prop_assert!(h.contains(&combo));
    }

    #[test]
    fn cofree_comodules_are_injective((_, lambda) in extension(), rank in 1usize..=2, side_right in any::<bool>()) {
        let side = if side_right { Side::Right } else { Side::Left };
        let d = lambda.target().clone();
        prop_assert!(is_injective_comodule(&Comodule::cofree(side, rank, d)));
    }

    #[test]
    fn cotensor_basis_spans_kernel_of_omega(
        (_, lambda) in extension(),
        picks in (any::<prop::sample::Index>(), any::<prop::sample::Index>()),
    ) {
        let c = lambda.source().clone();
        let rights = comodules(&c, Side::Right);
        let lefts = comodules(&c, Side::Left);
        let (m, n) = (&rights[picks.0.index(rights.len())], &lefts[picks.1.index(lefts.len())]);
        let w = omega(m, n).unwrap();
        let space = cotensor(m, n).unwrap();
        if space.dim() > 0 {
            prop_assert!((&w * space.basis()).is_zero());
        }
        prop_assert_eq!(space.dim(), m.dim() * n.dim() - w.rank());
    }

    #[test]
    fn cotensor_over_trivial_coalgebra_is_the_tensor_product(field in fields(), r in 1usize..=3, s in 1usize..=3) {
        let k = Arc::new(Coalgebra::trivial(field));
        let m = Comodule::cofree(Side::Right, r, k.clone());
        let n = Comodule::cofree(Side::Left, s, k);
        prop_assert_eq!(cotensor(&m, &n).unwrap().dim(), r * s);
    }

    #[test]
    fn induced_coaction_restricts_the_ambient_one((_, lambda) in extension()) {
        let c = lambda.source().clone();
        let n = c.dim();
        let square = cotensor_square(&lambda).unwrap();
        let b = square.basis();
        let right = square.right_coaction().unwrap().coaction();
        prop_assert_eq!(b.kron_identity_apply(n, right), c.comultiplication().identity_kron_apply(n, b));
        let left = square.left_coaction().unwrap().coaction();
        prop_assert_eq!(b.identity_kron_apply(n, left), c.comultiplication().kron_identity_apply(n, b));
    }

    #[test]
    fn iota_is_a_bijective_bicomodule_map((_, lambda) in extension()) {
        let i = iota(&lambda).unwrap();
        prop_assert!(i.is_bijective());
        prop_assert!(i.is_bicomodule_morphism(&lambda));
    }

    #[test]
    fn dual_algebra_is_the_transposed_coalgebra((_, lambda) in extension()) {
        let c = lambda.source();
        let a = dualize_coalgebra(c);
        prop_assert!(validate_algebra(a.data()).unwrap().is_pass());
        prop_assert_eq!(a.multiplication(), &c.comultiplication().transpose());
        prop_assert_eq!(a.unit(), c.counit_values());
    }

    #[test]
    fn dualization_is_contravariant((_, lambda) in extension()) {
        let mu = CoalgebraMorphism::counit_of(lambda.target().clone());
        let composite = dualize_extension(&lambda.then(&mu).unwrap());
        let stepwise = dualize_extension(&mu).then(&dualize_extension(&lambda)).unwrap();
        prop_assert_eq!(composite.matrix(), stepwise.matrix());
    }

    #[test]
    fn ring_witnesses_replay_and_h_is_central((_, lambda) in extension(), seed in 0u64..100) {
        let phi = dualize_extension(&lambda);
        let opts = SearchOptions { seed, ..SearchOptions::default() };
        if let RingVerdict::Yes(w) = check_frobenius_ring_extension(&phi, &opts).unwrap() {
            prop_assert!(replay_ring_witness(&phi, &w.e, &w.h).unwrap().holds());
            let b = phi.target();
            let n = b.dim();
            let h = col(b.field(), w.h.clone());
            for x in 0..n {
                // b·h = h·b in B ⊗_A B, compared on the chosen representative after reduction
                let left = b.left_mult(x).kron_identity_apply(n, &h);
                let right = b.right_mult(x).identity_kron_apply(n, &h);
                let t = cofrob::algebra::RingTensor::new(&phi);
                prop_assert_eq!(t.class_of(&left.column(0)), t.class_of(&right.column(0)));
            }
        }
    }

    #[test]
    fn gamma_form_round_trips((_, lambda) in extension()) {
        if let Verdict::Yes(cert) = check_frobenius_extension(&lambda, &CheckOptions::default()).unwrap() {
            let g = gamma_form(&lambda, &cert).unwrap();
            prop_assert!(g.identities_hold);
            prop_assert_eq!(reconstruct_beta(&lambda, &g.gamma, &cert.cotensor_basis).unwrap(), cert.beta);
        }
    }

    #[test]
    fn verdict_is_left_right_symmetric((_, lambda) in extension()) {
        let v = check_frobenius_extension(&lambda, &CheckOptions::default()).unwrap();
        let w = check_frobenius_extension(&lambda.coopposite(), &CheckOptions::default()).unwrap();
        prop_assert_eq!(v.is_yes(), w.is_yes());
        prop_assert_eq!(v.is_no(), w.is_no());
    }

    #[test]
    fn documents_round_trip((_, lambda) in extension()) {
        let text = to_json(&MorphismDoc::from_morphism(&lambda));
        let doc: MorphismDoc = from_json(&text).unwrap();
        let back = doc.build().unwrap();
        prop_assert_eq!(back.matrix(), lambda.matrix());
        prop_assert_eq!(to_json(&MorphismDoc::from_morphism(&back)), text);
        for m in comodules(lambda.source(), Side::Left) {
            let text = to_json(&ComoduleDoc::from_comodule(&m));
            let back = from_json::<ComoduleDoc>(&text).unwrap().build().unwrap();
            prop_assert_eq!(back.coaction(), m.coaction());
            prop_assert_eq!(to_json(&ComoduleDoc::from_comodule(&back)), text);
        }
    }
}

#[test]
fn direct_sum_corings_are_frobenius() {
    for field in [FieldSpec::Rationals, FieldSpec::prime(3).unwrap()] {
        for (name, d) in zoo::coalgebras(field) {
            for n in 1..=3 {
                let coring = direct_sum_coring(d.clone(), n).unwrap();
                let v = check_frobenius_extension(&coring.lambda, &CheckOptions::default()).unwrap();
                assert!(v.is_yes(), "direct_sum_coring({name},{n}) over {field}");
            }
        }
    }
}

#[test]
fn direct_sum_coring_components_corestrict_to_direct_sums() {
    let field = FieldSpec::Rationals;
    for (_, d) in zoo::coalgebras(field) {
        let coring = direct_sum_coring(d.clone(), 2).unwrap();
        let parts = zoo::standard_comodules(d.clone(), Side::Right, 3);
        for a in &parts {
            for b in &parts {
                let pair = [a.clone(), b.clone()];
                let down = coring.component_comodule(&pair).unwrap().corestrict(&coring.lambda).unwrap();
                assert_eq!(down.coaction_tensor(), a.direct_sum(b).unwrap().coaction_tensor());
            }
        }
    }
}
