//! Invariants checked on random inputs.

use proptest::prelude::*;
use shc::coend::{build_coend, check_coend, Diagram};
use shc::comod::{braiding, check_comodule, dual, intertwines, tensor_v, Comodule, Side};
use shc::exactla::{cokernel, kernel_basis, permute_factors, Field, Matrix, Scalar};
use shc::hopf::builtin;
use shc::io::{matrix_from_raw, matrix_to_raw, RawMatrix};
use shc::placement::{parse, realize, Bindings, PlacementExpr};
use shc::squared::{canonical, check_squared};

const FIELDS: [Field; 2] = [Field::Rational, Field::Prime(7)];

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(FIELDS.to_vec())
}

fn scalar(f: Field) -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(move |(n, d)| f.from_ratio(n, d))
}

fn matrix(f: Field, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(scalar(f), rows * cols).prop_map(move |v| {
        let mut it = v.into_iter();
        Matrix::from_fn(f, rows, cols, |_, _| it.next().unwrap())
    })
}

fn field_and_matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (field(), 1..=max, 1..=max).prop_flat_map(|(f, r, c)| matrix(f, r, c))
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms((a, b, c) in field().prop_flat_map(|f| (scalar(f), scalar(f), scalar(f)))) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn scalar_text_round_trips(s in field().prop_flat_map(scalar)) {
        prop_assert_eq!(s.field().parse_scalar(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn transpose_reverses_products((a, b) in (field(), 1..4usize, 1..4usize, 1..4usize)
        .prop_flat_map(|(f, n, k, m)| (matrix(f, n, k), matrix(f, k, m)))) {
        prop_assert_eq!((&a * &b).transpose(), &b.transpose() * &a.transpose());
    }

    #[test]
    fn kron_mixed_product((a, b, c, d) in (field(), 1..3usize, 1..3usize, 1..3usize, 1..3usize)
        .prop_flat_map(|(f, n, m, k, l)| (matrix(f, n, m), matrix(f, k, l), matrix(f, m, 2), matrix(f, l, 2)))) {
        prop_assert_eq!(&a.kron(&b) * &c.kron(&d), (&a * &c).kron(&(&b * &d)));
    }

    #[test]
    fn rank_nullity(m in field_and_matrix(5)) {
        let k = kernel_basis(&m);
        prop_assert_eq!(m.rank() + k.cols(), m.cols());
        prop_assert!((&m * &k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn cokernel_splits(m in field_and_matrix(5)) {
        let (p, s) = cokernel(&m);
        prop_assert!((&p * &m).is_zero());
        prop_assert!((&p * &s).is_identity());
        prop_assert_eq!(p.rows() + m.rank(), m.rows());
    }

    #[test]
    fn inverse_is_two_sided(m in (field(), 1..5usize).prop_flat_map(|(f, n)| matrix(f, n, n))) {
        if let Ok(inv) = m.inverse() {
            prop_assert!((&m * &inv).is_identity());
            prop_assert!((&inv * &m).is_identity());
        } else {
            prop_assert!(m.rank() < m.rows());
        }
    }

    #[test]
    fn factor_permutations_compose(
        (dims, s, t) in (1..5usize).prop_flat_map(|n| (prop::collection::vec(1..4usize, n), permutation(n), permutation(n)))
    ) {
        let f = Field::Rational;
        let ps = permute_factors(f, &dims, &s).unwrap();
        let sdims: Vec<usize> = {
            let mut v = vec![0; dims.len()];
            for (i, &k) in s.iter().enumerate() {
                v[k] = dims[i];
            }
            v
        };
        let pt = permute_factors(f, &sdims, &t).unwrap();
        let ts: Vec<usize> = s.iter().map(|&k| t[k]).collect();
        prop_assert_eq!(&pt * &ps, permute_factors(f, &dims, &ts).unwrap());
        let mut inv = vec![0; s.len()];
        for (i, &k) in s.iter().enumerate() {
            inv[k] = i;
        }
        prop_assert!((&permute_factors(f, &sdims, &inv).unwrap() * &ps).is_identity());
    }

    #[test]
    fn matrix_json_round_trips(m in field_and_matrix(4)) {
        let raw: RawMatrix = serde_json::from_str(&serde_json::to_string(&matrix_to_raw(&m)).unwrap()).unwrap();
        prop_assert_eq!(matrix_from_raw(m.field(), &raw, "m").unwrap(), m);
    }
}

/// Random valid expression: each target gets either one order-0 slot or
/// orders `1..=k`; slots are dealt to operands named by arity.
fn expression() -> impl Strategy<Value = String> {
    let targets = prop::collection::vec(prop_oneof![Just(0usize), 1..4usize], 1..4);
    targets
        .prop_flat_map(|ks| {
            let slots: Vec<(usize, usize)> = ks
                .iter()
                .enumerate()
                .flat_map(|(t, &k)| if k == 0 { vec![(t + 1, 0)] } else { (1..=k).map(|o| (t + 1, o)).collect() })
                .collect();
            let n = slots.len();
            (Just(slots).prop_shuffle(), prop::collection::vec(prop::bool::ANY, n), any::<bool>())
        })
        .prop_map(|(slots, cuts, ascii)| {
            let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
            for (k, s) in slots.into_iter().enumerate() {
                if k > 0 && cuts[k] && groups.last().unwrap().len() < 2 {
                    groups.push(Vec::new());
                } else if groups.last().unwrap().len() == 2 {
                    groups.push(Vec::new());
                }
                groups.last_mut().unwrap().push(s);
            }
            let mark = |o: usize| match (o, ascii) {
                (0, _) => String::new(),
                (o, true) => "'".repeat(o),
                (1, false) => "′".into(),
                (2, false) => "″".into(),
                (o, false) => format!("^{o}"),
            };
            let ops: Vec<String> = groups
                .iter()
                .map(|g| {
                    let name = if g.len() == 1 { "X" } else { "C" };
                    let idx: String = g.iter().map(|&(t, o)| format!("{t}{}", mark(o))).collect();
                    format!("{name}_{{{idx}}}")
                })
                .collect();
            ops.join(if ascii { " (x) " } else { " ⊗ " })
        })
}

fn bindings() -> (std::sync::Arc<shc::hopf::HopfAlgebra>, Bindings) {
    let h = builtin("kZ2", Field::Rational).unwrap();
    let mut c = Matrix::zeros(Field::Rational, 4, 2);
    c.set(0, 0, Field::Rational.one());
    c.set(3, 1, Field::Rational.one());
    let x = Comodule::new(h.clone(), 1, c).unwrap();
    let mut b = Bindings::new();
    b.insert("C".into(), canonical(&x).unwrap().c);
    b.insert("X".into(), x);
    (h, b)
}

fn reversed(e: &PlacementExpr) -> String {
    let ops: Vec<String> = e
        .operands
        .iter()
        .rev()
        .map(|o| format!("{}_{{{}}}", o.name, o.indices.iter().map(|i| i.to_string()).collect::<String>()))
        .collect();
    ops.join(" ⊗ ")
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_is_normalization(text in expression()) {
        let e = parse(&text).unwrap();
        let printed = e.to_string();
        let again = parse(&printed).unwrap();
        prop_assert_eq!(&again, &e);
        prop_assert_eq!(again.to_string(), printed);
    }

    #[test]
    fn realization_ignores_operand_order(text in expression()) {
        let (h, b) = bindings();
        let e = parse(&text).unwrap();
        let r1 = realize(&e, &h, &b).unwrap();
        let r2 = realize(&parse(&reversed(&e)).unwrap(), &h, &b).unwrap();
        prop_assert_eq!(&r1.comodule, &r2.comodule);
        prop_assert_eq!(r1.comodule.level, e.arity());
        prop_assert!(check_comodule(&r1.comodule).passed());
    }
}

/// Comodule over `kZ_n` given by degrees, in the basis `p`.
fn graded(n: usize, degrees: &[usize], p: &Matrix) -> Comodule {
    let f = Field::Rational;
    let h = builtin(&format!("kZ{n}"), f).unwrap();
    let d = degrees.len();
    let mut c = Matrix::zeros(f, n * d, d);
    for (k, &g) in degrees.iter().enumerate() {
        c.set(g * d + k, k, f.one());
    }
    let c = &(&Matrix::identity(f, n).kron(&p.inverse().unwrap()) * &c) * p;
    Comodule::new(h, 1, c).unwrap()
}

fn kz2_comodule() -> impl Strategy<Value = Comodule> {
    (1..=3usize)
        .prop_flat_map(|d| (prop::collection::vec(0..2usize, d), matrix(Field::Rational, d, d)))
        .prop_filter("invertible basis", |(_, p)| p.inverse().is_ok())
        .prop_map(|(g, p)| graded(2, &g, &p))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn tensor_and_duals_are_comodules(x in kz2_comodule(), y in kz2_comodule()) {
        prop_assert!(check_comodule(&x).passed());
        let xy = tensor_v(&x, &y).unwrap();
        prop_assert!(check_comodule(&xy).passed());
        for side in [Side::Right, Side::Left] {
            prop_assert!(check_comodule(&dual(&x, side).unwrap()).passed());
        }
        let c = braiding(&x, &y).unwrap();
        prop_assert!(intertwines(&xy, &tensor_v(&y, &x).unwrap(), &c).unwrap().is_none());
    }

    #[test]
    fn canonical_coalgebras_satisfy_the_axioms(x in kz2_comodule()) {
        let c = canonical(&x).unwrap();
        prop_assert_eq!(c.dim(), x.dim * x.dim);
        prop_assert!(check_squared(&c, false).unwrap().passed());
    }

    #[test]
    fn coend_dimension_is_the_relation_corank(
        gens in prop::collection::vec(matrix(Field::Rational, 2, 2), 0..3)
    ) {
        let f = Field::Rational;
        let h = builtin("trivial", f).unwrap();
        let mut d = Diagram::new(&h);
        d.add_object("M", Comodule::trivial(&h, 1, 2)).unwrap();
        for (k, g) in gens.iter().enumerate() {
            d.add_morphism(&format!("f{k}"), "M", "M", g.clone()).unwrap();
        }
        let e = build_coend(&d).unwrap();
        // relations f(e_a) ⊗ e^b - e_a ⊗ e^b f, written out entrywise
        let mut rows = Vec::new();
        for g in &gens {
            for a in 0..2 {
                for b in 0..2 {
                    let mut v = vec![f.zero(); 4];
                    for i in 0..2 {
                        v[2 * i + b] = &v[2 * i + b] + g.get(i, a);
                    }
                    for j in 0..2 {
                        v[2 * a + j] = &v[2 * a + j] - g.get(b, j);
                    }
                    rows.push(v);
                }
            }
        }
        let rank = if rows.is_empty() { 0 } else { Matrix::from_rows(f, rows).unwrap().rank() };
        prop_assert_eq!(e.dim(), 4 - rank);
        prop_assert!(check_coend(&e, false).unwrap().passed());
    }
}
