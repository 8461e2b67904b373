use proptest::prelude::*;

use symspec_core::algebra::{graded_dim, ratio, Form, Rational, Subspace};
use symspec_core::cohomology::DeRham;
use symspec_core::model::BUILTIN_NAMES;
use symspec_core::ops::OperatorSet;
use symspec_core::{builtin, Model};

fn model(index: usize) -> Model {
    builtin(BUILTIN_NAMES[index % BUILTIN_NAMES.len()]).unwrap()
}

fn coords(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-5i64..=5, 1i64..=3, any::<bool>()), dim).prop_map(|v| {
        v.into_iter()
            .map(|(n, d, keep)| if keep { ratio(n, d) } else { ratio(0, 1) })
            .collect()
    })
}

fn form(m: usize, k: usize) -> impl Strategy<Value = Form> {
    coords(graded_dim(m, k as isize)).prop_map(move |c| Form::from_vector(m, k, &c))
}

/// `(model index, a, b)` with `deg a + deg b ≤ m`.
fn form_pair() -> impl Strategy<Value = (usize, Form, Form)> {
    (0..BUILTIN_NAMES.len())
        .prop_flat_map(|i| {
            let m = model(i).dim();
            (Just(i), 0..=m).prop_flat_map(move |(i, ka)| (Just(i), Just(ka), 0..=m - ka))
        })
        .prop_flat_map(|(i, ka, kb)| {
            let m = model(i).dim();
            (Just(i), form(m, ka), form(m, kb))
        })
}

fn vectors(ambient: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(coords(ambient), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_graded_commutative((_, a, b) in form_pair()) {
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        if (a.degree() * b.degree()) % 2 == 0 {
            prop_assert_eq!(ab, ba);
        } else {
            prop_assert_eq!(ab, -&ba);
        }
    }

    #[test]
    fn interior_is_a_derivation((i, a, b) in form_pair(), gen in 1usize..=8) {
        let m = model(i).dim();
        prop_assume!(a.degree() >= 1 && b.degree() >= 1);
        let g = (gen - 1) % m + 1;
        let lhs = a.wedge(&b).unwrap().interior(g);
        let first = a.interior(g).wedge(&b).unwrap();
        let second = a.wedge(&b.interior(g)).unwrap();
        let rhs = if a.degree() % 2 == 0 { &first + &second } else { &first - &second };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn differential_is_a_derivation((i, a, b) in form_pair()) {
        let model = model(i);
        prop_assume!(a.degree() + b.degree() < model.dim());
        let lhs = model.differential(&a.wedge(&b).unwrap());
        let first = model.differential(&a).wedge(&b).unwrap();
        let second = a.wedge(&model.differential(&b)).unwrap();
        let rhs = if a.degree() % 2 == 0 { &first + &second } else { &first - &second };
        prop_assert_eq!(lhs, rhs);
        if a.degree() + 2 <= model.dim() {
            prop_assert!(model.differential(&model.differential(&a)).is_zero());
        }
    }

    #[test]
    fn subspace_dimension_formula(a in vectors(6), b in vectors(6)) {
        let a = Subspace::span(2, 6, a);
        let b = Subspace::span(2, 6, b);
        let sum = a.sum(&b).unwrap();
        let meet = a.intersect(&b).unwrap();
        prop_assert_eq!(a.dim() + b.dim(), sum.dim() + meet.dim());
        prop_assert!(meet.is_subspace_of(&a) && meet.is_subspace_of(&b));
        prop_assert!(a.is_subspace_of(&sum) && b.is_subspace_of(&sum));
        let doubled = Subspace::span(2, 6, a.basis().iter().chain(a.basis()).cloned());
        prop_assert_eq!(doubled, a);
    }

    #[test]
    fn hodge_lepage_reconstructs(i in 0..BUILTIN_NAMES.len(), k in 0usize..=6, seed in coords(20)) {
        let model = model(i);
        let m = model.dim();
        prop_assume!(k <= m);
        let dim = graded_dim(m, k as isize);
        let omega = Form::from_vector(m, k, &seed[..dim]);
        let ops = OperatorSet::new(&model).unwrap();
        let hl = ops.hodge_lepage(&omega).unwrap();
        let mut sum = Form::zero(m, k);
        for (j, c) in hl.components.iter().enumerate() {
            prop_assert!(ops.bot(c).is_zero());
            sum = &sum + &ops.top_power(j).apply(c);
        }
        prop_assert_eq!(sum, omega);
    }

    #[test]
    fn cohomology_class_ignores_exact_perturbations(
        i in 0..BUILTIN_NAMES.len(), k in 1usize..=5, alpha in coords(20), t in 0usize..=2
    ) {
        let model = model(i);
        let m = model.dim();
        prop_assume!(k < m);
        let ops = OperatorSet::new(&model).unwrap();
        let h = DeRham::new(&model).unwrap();
        let alpha = Form::from_vector(m, k - 1, &alpha[..graded_dim(m, k as isize - 1)]);
        let exact = model.differential(&alpha);
        for class in h.basis(k) {
            let moved = &class.representative + &exact;
            prop_assert_eq!(&h.class_of(&moved).unwrap().coords, &class.coords);
            if k + 2 * t <= m {
                let a = symspec_core::cohomology::lefschetz(&h, &ops, &class, t).unwrap();
                let shifted = h.class_of(&moved).unwrap();
                let b = symspec_core::cohomology::lefschetz(&h, &ops, &shifted, t).unwrap();
                prop_assert_eq!(a.coords, b.coords);
            }
        }
    }
}

#[test]
fn rank_nullity_on_every_operator() {
    for name in BUILTIN_NAMES {
        let model = builtin(name).unwrap();
        let ops = OperatorSet::new(&model).unwrap();
        for map in [ops.d(), ops.top_map(), ops.bot_map(), ops.delta_map()] {
            for k in 0..=model.dim() {
                let (ker, im) = map.kernel_image(k).unwrap();
                assert_eq!(
                    ker.dim() + im.dim(),
                    graded_dim(model.dim(), k as isize),
                    "{name} k={k}"
                );
            }
        }
    }
}

#[test]
fn kunneth_on_products() {
    for (a, b) in [
        ("t2", "t2"),
        ("t2", "kt4"),
        ("solv2", "t2"),
        ("solv2", "solv2"),
        ("kt4", "t2"),
    ] {
        let (ma, mb) = (builtin(a).unwrap(), builtin(b).unwrap());
        let product = ma.product(&mb).unwrap();
        let (ha, hb) = (
            DeRham::new(&ma).unwrap().betti(),
            DeRham::new(&mb).unwrap().betti(),
        );
        let mut expected = vec![0; ha.len() + hb.len() - 1];
        for (i, x) in ha.iter().enumerate() {
            for (j, y) in hb.iter().enumerate() {
                expected[i + j] += x * y;
            }
        }
        assert_eq!(
            DeRham::new(&product).unwrap().betti(),
            expected,
            "{a} x {b}"
        );
    }
}
