//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as part of `cargo test`; `cargo test --test acceptance -- 5 7` runs
//! only criteria 5 and 7.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shc::coend::{
    build_coend, check_coend, check_opposite, generators, h_morphism, hom_space, induce_ribbon, reconstruct_comodule,
    theta_to_form, CoendCoalgebra,
};
use shc::comod::{braiding, check_comodule, check_zeta, intertwines, tensor_v, Comodule, ZetaSource};
use shc::exactla::{Field, Matrix};
use shc::fixtures::{self, EndGenerators};
use shc::hopf::{builtin, HopfAlgebra};
use shc::pipeline::{self, Options};
use shc::placement::{parse, realize, Bindings};
use shc::squared::{
    bar, bicomodule_tensor, braiding_r, canonical, canonical_comodule, cbar_comodule, check_antipode,
    check_braided_bialgebra, check_cbar_comodule, check_coalgebra_hom, check_comparison, check_ordinary_antipode,
    check_qt, check_ribbon, check_squared, left_from_right, quasiclassical_antipode, twist, SquaredComodule,
};
use shc::{Error, VerificationReport};

const Q: Field = Field::Rational;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(r: &VerificationReport, what: &str) -> Outcome {
    match r.failures().next() {
        None => Ok(()),
        Some(e) => Err(format!("{what}: `{}` failed {:?} {:?}", e.name, e.witness, e.note)),
    }
}

fn ok<T>(r: shc::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn has(r: &VerificationReport, suffix: &str) -> Outcome {
    let found = r.entries.iter().any(|e| e.name == suffix || e.name.ends_with(&format!(".{suffix}")));
    ensure(found, || format!("no report entry `{suffix}`"))
}

fn m(rows: &[&[i64]]) -> Matrix {
    Matrix::from_i64(Q, rows)
}

/// Comodule over a group algebra with basis vector `k` of degree `degrees[k]`.
fn graded(h: &Arc<HopfAlgebra>, degrees: &[usize]) -> Comodule {
    let d = degrees.len();
    let mut c = Matrix::zeros(h.field, h.dim * d, d);
    for (k, &g) in degrees.iter().enumerate() {
        c.set(g * d + k, k, h.field.one());
    }
    Comodule::new(h.clone(), 1, c).unwrap()
}

/// Same comodule in the basis given by the columns of `p`.
fn rebase(x: &Comodule, p: &Matrix) -> Comodule {
    let ih = Matrix::identity(x.field(), x.h());
    let c = &(&ih.kron(&p.inverse().unwrap()) * &x.coaction) * p;
    Comodule::new(x.hopf.clone(), x.level, c).unwrap()
}

// 1

fn classical_collapse() -> Outcome {
    let h = builtin("trivial", Q).unwrap();
    let c = ok(canonical(&Comodule::trivial(&h, 1, 2)), "canonical")?;
    ensure(c.dim() == 4, || format!("comatrix has dim {}", c.dim()))?;
    // Δ(e_ij) = Σ_k e_ik ⊗ e_kj, ε(e_ij) = δ_ij with e_ij at index 2i + j
    let mut delta = Matrix::zeros(Q, 16, 4);
    let mut eps = Matrix::zeros(Q, 1, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                delta.set((2 * i + k) * 4 + 2 * k + j, 2 * i + j, Q.one());
            }
            if i == j {
                eps.set(0, 2 * i + j, Q.one());
            }
        }
    }
    ensure(c.delta == delta, || "comultiplication differs from the comatrix formula".into())?;
    ensure(c.eps == eps, || "counit differs from the trace".into())?;
    all_pass(&ok(check_squared(&c, true), "check_squared")?, "comatrix")?;
    let opts = Options { monoidal: true, antipode: true, paranoid: true, ..Options::default() };
    let (e, r) = ok(pipeline::run(&fixtures::trivial_rigid(Q).unwrap(), opts, None), "pipeline")?;
    ensure(e.hopf.is_some(), || "no antipode induced".into())?;
    for name in ["d23a", "e23b", "e23c", "f112i", "f112ii", "f113iii", "f113iv"] {
        has(&r, name)?;
    }
    all_pass(&r, "trivial rigid pipeline")
}

// 2

/// Rank over `F_p`, `p = 1_000_003`, by plain elimination.
fn rank_mod_p(mut rows: Vec<Vec<i64>>) -> usize {
    const P: i64 = 1_000_003;
    let pow = |mut b: i64, mut e: i64| {
        let mut r = 1;
        b = b.rem_euclid(P);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % P;
            }
            b = b * b % P;
            e >>= 1;
        }
        r
    };
    for r in rows.iter_mut() {
        for v in r.iter_mut() {
            *v = v.rem_euclid(P);
        }
    }
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = pow(rows[rank][c], P - 2);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c] * inv % P;
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] - f * rows[rank][k]).rem_euclid(P);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `4 - rank` of the span of `f(x) ⊗ ξ - x ⊗ ξ∘f` over generators `f`.
fn brute_force_dim(gens: &[[[i64; 2]; 2]]) -> usize {
    let mut rows = Vec::new();
    for f in gens {
        for a in 0..2 {
            for b in 0..2 {
                let mut v = vec![0i64; 4];
                for i in 0..2 {
                    v[2 * i + b] += f[i][a];
                }
                for j in 0..2 {
                    v[2 * a + j] -= f[b][j];
                }
                rows.push(v);
            }
        }
    }
    4 - rank_mod_p(rows)
}

fn coend_dimensions() -> Outcome {
    let id = [[1, 0], [0, 1]];
    let e = |i: usize, j: usize| {
        let mut u = [[0; 2]; 2];
        u[i][j] = 1;
        u
    };
    let cases = [
        (EndGenerators::Identity, vec![id]),
        (EndGenerators::IdentityAndE11, vec![id, e(0, 0)]),
        (EndGenerators::All, vec![e(0, 0), e(0, 1), e(1, 0), e(1, 1)]),
    ];
    let mut dims = Vec::new();
    for (gens, oracle) in cases {
        let d = fixtures::trivial_k2(Q, gens).unwrap();
        let c = ok(build_coend(&d), "build_coend")?;
        let expect = brute_force_dim(&oracle);
        ensure(c.dim() == expect, || format!("{gens:?}: dim {} but brute force gives {expect}", c.dim()))?;
        all_pass(&ok(check_coend(&c, false), "check_coend")?, "coend")?;
        dims.push(c.dim());
    }
    ensure(dims == [4, 2, 1], || format!("dims {dims:?}"))
}

// 3

fn round_trip(m: &Comodule) -> Outcome {
    let c = ok(canonical(m), "canonical")?;
    let family = vec![("M".to_string(), ok(canonical_comodule(m), "canonical_comodule")?)];
    let (cp, h) = ok(h_morphism(&c, &family, &[]), "h_morphism")?;
    ensure(h.shape() == (c.dim(), cp.dim()), || "h has the wrong shape".into())?;
    ensure(h.inverse().is_ok(), || "h is not invertible".into())?;
    all_pass(&ok(check_coalgebra_hom(&h, &cp.c, &c), "check_coalgebra_hom")?, "h")
}

fn reconstruction() -> Outcome {
    let t = builtin("trivial", Q).unwrap();
    round_trip(&Comodule::trivial(&t, 1, 2))?;
    let k = builtin("kZ2", Q).unwrap();
    round_trip(&graded(&k, &[0, 1]))?;
    round_trip(&rebase(&graded(&k, &[1, 0, 1]), &m(&[&[1, 2, 0], &[0, 1, 0], &[1, 0, 1]])))
}

// 4

fn bump(a: &Matrix, r: usize, c: usize) -> Matrix {
    let mut a = a.clone();
    let v = a.get(r, c) + &a.field().one();
    a.set(r, c, v);
    a
}

/// Every single-entry corruption of `a` makes `fails` true.
fn every_corruption_detected(what: &str, a: &Matrix, mut fails: impl FnMut(Matrix) -> bool) -> Outcome {
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            ensure(fails(bump(a, r, c)), || format!("{what}: corruption at ({r}, {c}) went unnoticed"))?;
        }
    }
    Ok(())
}

fn fails(r: shc::Result<VerificationReport>) -> bool {
    r.map(|r| !r.passed()).unwrap_or(true)
}

fn squared_suite() -> Outcome {
    let required = [
        "d23a",
        "e23b",
        "e23c",
        "bicoalgebra.delta_m",
        "bicoalgebra.eps_m",
        "bicoalgebra.delta_eta",
        "bicoalgebra.eps_eta",
        "f112i",
        "f112ii",
        "f113iii",
        "f113iv",
        "e160a",
        "e160b",
        "e160c",
        "e160d",
        "e160e",
        "e160f",
        "e171a",
        "e171b",
        "e171c",
        "e171d",
    ];
    let (kz, r) = ok(pipeline::run(&fixtures::kz2(Q).unwrap(), Options::all(), None), "kZ2")?;
    for name in required {
        has(&r, name)?;
    }
    all_pass(&r, "kZ2")?;
    let qt_opts = Options { rmatrix: true, ..Options::default() };
    let (_, r) = ok(pipeline::run(&fixtures::trivial_rigid(Q).unwrap(), qt_opts, None), "trivial rigid")?;
    all_pass(&r, "trivial rigid")?;
    let (_, r) = ok(pipeline::run(&fixtures::sweedler(Q).unwrap(), qt_opts, None), "sweedler4")?;
    all_pass(&r, "sweedler4")?;

    // mutations on the kZ2 structures
    let c = kz.c.clone();
    let bi = kz.bi.clone().unwrap();
    let hc = kz.hopf.clone().unwrap();
    let qt = kz.qt.clone().unwrap();
    let rb = kz.ribbon.clone().unwrap();
    use shc::squared::{check_bicoalgebra, check_squared_comodule, Bicoalgebra, SquaredCoalgebra};
    every_corruption_detected("Δ", &c.delta, |a| {
        fails(SquaredCoalgebra::new(c.c.clone(), a, c.eps.clone()).and_then(|x| check_squared(&x, false)))
    })?;
    every_corruption_detected("ε", &c.eps, |a| {
        fails(SquaredCoalgebra::new(c.c.clone(), c.delta.clone(), a).and_then(|x| check_squared(&x, false)))
    })?;
    every_corruption_detected("m", &bi.m, |a| {
        fails(Bicoalgebra::new(c.clone(), a, bi.eta.clone()).and_then(|x| check_bicoalgebra(&x, false)))
    })?;
    every_corruption_detected("η", &bi.eta, |a| {
        fails(Bicoalgebra::new(c.clone(), bi.m.clone(), a).and_then(|x| check_bicoalgebra(&x, false)))
    })?;
    every_corruption_detected("γ′", &hc.gamma_r, |a| {
        let mut x = hc.clone();
        x.gamma_r = a;
        fails(check_antipode(&x, &[]))
    })?;
    every_corruption_detected("′γ", &hc.gamma_l, |a| {
        let mut x = hc.clone();
        x.gamma_l = a;
        fails(check_antipode(&x, &[]))
    })?;
    every_corruption_detected("R₊", &qt.r_plus, |a| {
        let mut x = qt.clone();
        x.r_plus = a;
        fails(check_qt(&x, false))
    })?;
    every_corruption_detected("R₋", &qt.r_minus, |a| {
        let mut x = qt.clone();
        x.r_minus = a;
        fails(check_qt(&x, false))
    })?;
    every_corruption_detected("Θ", &rb.theta, |a| {
        let mut x = rb.clone();
        x.theta = a;
        fails(check_ribbon(&x))
    })?;
    let v = ok(reconstruct_comodule(&kz, "V"), "reconstruct")?;
    every_corruption_detected("δ̄_V", &v.delta, |a| {
        fails(SquaredComodule::new(c.clone(), v.x.clone(), a).and_then(|x| check_squared_comodule(&x)))
    })
}

// 5

fn kz2_coend() -> Result<CoendCoalgebra, String> {
    Ok(ok(pipeline::run(&fixtures::kz2(Q).unwrap(), Options::all(), None), "kZ2")?.0)
}

fn braided_consistency() -> Outcome {
    let h = builtin("kZ2", Q).unwrap();
    let one = graded(&h, &[0]);
    let v = graded(&h, &[1]);
    let vv = ok(tensor_v(&v, &v), "V ⊗ V")?;
    let mixed = rebase(&graded(&h, &[0, 1]), &m(&[&[1, 1], &[0, 1]]));
    let objects = [one.clone(), v.clone(), vv.clone(), mixed];
    // the sign on the odd line, computed by hand from ρ(g, g) = -1
    ensure(ok(braiding(&v, &v), "c")? == m(&[&[-1]]), || "c_{V,V} is not -1".into())?;
    let mut zeta_morphisms = Vec::new();
    for (i, x) in objects.iter().enumerate() {
        for (j, y) in objects.iter().enumerate() {
            let c = ok(braiding(x, y), "c")?;
            let xy = ok(tensor_v(x, y), "⊗")?;
            let yx = ok(tensor_v(y, x), "⊗")?;
            ensure(ok(intertwines(&xy, &yx, &c), "intertwines")?.is_none(), || format!("c[{i},{j}] is not a comodule map"))?;
            ensure(c.inverse().is_ok(), || format!("c[{i},{j}] is singular"))?;
            for f in ok(hom_space(x, y), "hom")? {
                zeta_morphisms.push((i, j, f.clone()));
                for (k, z) in objects.iter().enumerate() {
                    let lhs = &ok(braiding(y, z), "c")? * &f.kron(&z.id());
                    let rhs = &z.id().kron(&f) * &ok(braiding(x, z), "c")?;
                    ensure(lhs == rhs, || format!("c not natural in the first slot along {i}->{j} against {k}"))?;
                    let lhs = &ok(braiding(z, y), "c")? * &z.id().kron(&f);
                    let rhs = &f.kron(&z.id()) * &ok(braiding(z, x), "c")?;
                    ensure(lhs == rhs, || format!("c not natural in the second slot along {i}->{j} against {k}"))?;
                }
            }
            for (k, z) in objects.iter().enumerate() {
                let cxz = ok(braiding(x, z), "c")?;
                let cyz = ok(braiding(y, z), "c")?;
                let lhs = ok(braiding(x, &ok(tensor_v(y, z), "⊗")?), "c")?;
                let rhs = &y.id().kron(&cxz) * &c.kron(&z.id());
                ensure(lhs == rhs, || format!("left hexagon fails on ({i},{j},{k})"))?;
                let lhs = ok(braiding(&xy, z), "c")?;
                let rhs = &cxz.kron(&y.id()) * &x.id().kron(&cyz);
                ensure(lhs == rhs, || format!("right hexagon fails on ({i},{j},{k})"))?;
            }
        }
    }
    let refs: Vec<&Comodule> = objects.iter().collect();
    all_pass(&ok(check_zeta(&refs, &zeta_morphisms, &ZetaSource::RForm), "check_zeta")?, "u₁²")?;

    let e = kz2_coend()?;
    let q = e.qt.clone().ok_or("no R-matrices induced")?;
    all_pass(&ok(check_qt(&q, true), "check_qt")?, "R±")?;
    for (nx, x) in &e.diagram.objects {
        for (ny, y) in &e.diagram.objects {
            let rx = ok(reconstruct_comodule(&e, nx), "reconstruct")?;
            let ry = ok(reconstruct_comodule(&e, ny), "reconstruct")?;
            let lhs = ok(braiding_r(&q, &rx, &ry), "braiding_r")?;
            let rhs = ok(braiding(x, y), "c")?;
            ensure(lhs == rhs, || format!("braiding from R differs from c on ({nx}, {ny})"))?;
        }
    }
    let rv = ok(reconstruct_comodule(&e, "V"), "reconstruct")?;
    ensure(ok(braiding_r(&q, &rv, &rv), "braiding_r")? == m(&[&[-1]]), || "R-braiding on V ⊗ V is not -1".into())
}

// 6

fn opposite_antipode() -> Outcome {
    let opts = Options { antipode: true, ..Options::default() };
    for (name, d) in [
        ("trivial-rigid", fixtures::trivial_rigid(Q).unwrap()),
        ("kZ2", fixtures::kz2(Q).unwrap()),
        ("sweedler4", fixtures::sweedler(Q).unwrap()),
    ] {
        let (e, _) = ok(pipeline::run(&d, opts, None), name)?;
        let source = ok(pipeline::zeta_source(&d), name)?;
        let r = ok(check_opposite(&e, &source), "check_opposite")?;
        for (n, _) in &d.objects {
            ensure(r.entry(&format!("d107[{n}]")).is_some_and(|x| x.pass), || format!("{name}: d107[{n}] fails"))?;
        }
        all_pass(&r, name)?;
        let hc = e.hopf.clone().unwrap();
        let r = ok(check_antipode(&hc, &generators(&e)), "check_antipode")?;
        for part in ["gamma_r", "gamma_l"] {
            for check in ["hom.delta", "hom.eps", "invertible"] {
                let key = format!("{part}.{check}");
                ensure(r.entry(&key).is_some_and(|x| x.pass), || format!("{name}: {key} fails"))?;
            }
        }
        all_pass(&r, name)?;
        let rebuilt = ok(
            left_from_right(&hc.bi, &hc.gamma_r, hc.zeta.clone(), hc.op_r.clone(), hc.op_l.clone()),
            "left_from_right",
        )?;
        ensure(rebuilt.gamma_l == hc.gamma_l, || format!("{name}: γ′⁻¹ differs from the induced left antipode"))?;
        all_pass(&ok(check_antipode(&rebuilt, &generators(&e)), "check_antipode")?, name)?;
    }
    Ok(())
}

// 7

fn quasiclassical() -> Outcome {
    let e = kz2_coend()?;
    let bi = e.bi.clone().unwrap();
    let hc = e.hopf.clone().unwrap();
    let bb = ok(bar(&bi), "bar")?;
    all_pass(&ok(check_braided_bialgebra(&bb), "check_braided_bialgebra")?, "bar")?;
    all_pass(&check_ordinary_antipode(&bb, &ok(quasiclassical_antipode(&hc), "antipode")?), "quasiclassical antipode")?;
    all_pass(&ok(check_comparison(&hc), "check_comparison")?, "comparison")?;
    let h = e.c.hopf().clone();
    let mut squared: Vec<SquaredComodule> =
        e.diagram.objects.iter().map(|(n, _)| reconstruct_comodule(&e, n).unwrap()).collect();
    squared.push(ok(bicomodule_tensor(&bi, &squared[1], &squared[1]), "⊗̄")?);
    let mut rng = ChaCha8Rng::seed_from_u64(58);
    for trial in 0..5 {
        let x = &squared[rng.gen_range(0..squared.len())];
        let n = rng.gen_range(1..=3);
        let degrees: Vec<usize> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let p = loop {
            let p = Matrix::from_fn(Q, n, n, |_, _| Q.from_i64(rng.gen_range(-2..=2)));
            if p.inverse().is_ok() {
                break p;
            }
        };
        let y = rebase(&graded(&h, &degrees), &p);
        all_pass(&check_comodule(&y), "random comodule")?;
        let (obj, delta) = ok(cbar_comodule(x, &y), "cbar_comodule")?;
        all_pass(&ok(check_cbar_comodule(&e.c, &obj, &delta), "check_cbar_comodule")?, &format!("pair {trial}"))?;
    }
    Ok(())
}

// 8

fn ribbon() -> Outcome {
    let e = kz2_coend()?;
    let rb = e.ribbon.clone().ok_or("no ribbon form induced")?;
    let r = ok(check_ribbon(&rb), "check_ribbon")?;
    for name in ["e171a", "e171b", "e171c", "e171d"] {
        ensure(r.entry(name).is_some_and(|x| x.pass), || format!("{name} fails"))?;
    }
    let bi = e.bi.clone().unwrap();
    let v = ok(reconstruct_comodule(&e, "V"), "reconstruct")?;
    let vv = ok(bicomodule_tensor(&bi, &v, &v), "⊗̄")?;
    let tv = twist(&rb, &v);
    let tvv = twist(&rb, &vv);
    // by hand: θ_V = ν(g) = -1 and θ_{V⊗V} = θ_V² c² = 1
    ensure(tv == m(&[&[-1]]), || format!("θ_V = {tv}"))?;
    ensure(tvv == m(&[&[1]]), || format!("θ_(V⊗V) = {tvv}"))?;
    let c = ok(braiding_r(&rb.qt, &v, &v), "braiding_r")?;
    ensure(tvv == &(&tv.kron(&tv) * &c) * &c, || "twist is not multiplicative against the double braiding".into())?;
    let thetas: BTreeMap<String, Matrix> = e
        .diagram
        .objects
        .iter()
        .map(|(n, _)| (n.clone(), twist(&rb, &reconstruct_comodule(&e, n).unwrap())))
        .collect();
    ensure(ok(theta_to_form(&e, &thetas), "theta_to_form")? == rb.theta, || "Θ ↦ θ ↦ Θ is not the identity".into())?;
    // a twist that is natural but not multiplicative must fail e171c
    let bad = ok(induce_ribbon(&e, &rb.qt, &fixtures::kz2_twists(Q, 2)), "induce_ribbon")?;
    let r = ok(check_ribbon(&bad), "check_ribbon")?;
    ensure(r.entry("e171c").is_some_and(|x| !x.pass), || "θ_V = 2 passed e171c".into())
}

// 9

const CORPUS: [&str; 30] = [
    "C_{13} ⊙ I_2",
    "C_{12′} ⊗ C_{2″3}",
    "B_{1′3″} ⊗ B_{1″3′} ⊙ I_2",
    "H_{1′2″} ⊗ H_{1″2′}",
    "C_{12'} (x) X_{2''}",
    "C_{12'} (x) I_{2''}",
    "M_{1'} (x) N_{1''} (.) I_2",
    "I_{1'} (x) H_{1''2}",
    "H_{1'2'} (x) H_{1''2''}",
    "C_{14} (.) I_2 (.) I_3",
    "C_{12} (.) X_3",
    "C_{12'} (x) C_{2''4} (.) I_3",
    "C_{12'} (x) C_{2''2'''}",
    "B_{12'} (x) B_{2''3}",
    "A_{1'2''} (x) B_{1''2'}",
    "X_{1'} ⊗ C_{1''2}",
    "M_{1'} ⊗ B_{1''2'} ⊗ N_{2''}",
    "M_{1'} ⊗ B_{1''2'} ⊗ I_{2''} ⊗ N_{2'''}",
    "H_{2''1'} ⊗ H_{1''2'}",
    "H_{12'} ⊗ H_{2''2'''}",
    "H_{1'2'} ⊗ H_{1''2''} ⊗ I_{1'''}",
    "H_{1'2''} ⊗ I_{2'} ⊗ H_{1''2'''}",
    "H_{1'2''} ⊗ H_{1''2'} ⊗ H_{2'''2^4} ⊗ H_{2^52^6}",
    "H_{1'1''} ⊗ H_{1'''1^4} ⊗ H_{1^52''} ⊗ H_{1^62'}",
    "H_{1'1''} ⊙ I_2",
    "C_{13'} ⊗ C_{3''4} ⊙ I_2",
    "C_{12} ⊙ C_{34}",
    "C_{12'} ⊗ C_{2''3'} ⊗ C_{3''4}",
    "C_{1'1''} ⊗ C_{1'''2}",
    "C_{1'1''}",
];

/// Malformed expressions with the position each error must report.
const MALFORMED: [(&str, usize); 10] = [
    ("C_{11'}", 0),
    ("C_{13}", 0),
    ("C_{12} ⊗ D_{2}", 9),
    ("C_{12", 5),
    ("C_{}", 3),
    ("C_{12} ⊗ ", 9),
    ("C12", 3),
    ("C_{12} + D_3", 7),
    ("C_{1'''2} (x) D_{1'3}", 0),
    ("C_{1^}", 5),
];

fn position(e: &Error) -> Option<usize> {
    match e {
        Error::ParseError { position, .. }
        | Error::DuplicateIndex { position, .. }
        | Error::NonContiguousTargets { position, .. }
        | Error::BadOrderSet { position, .. } => Some(*position),
        _ => None,
    }
}

fn parser() -> Outcome {
    let h = builtin("kZ2", Q).unwrap();
    let line = graded(&h, &[0, 1]);
    let odd = graded(&h, &[1]);
    let lvl2 = ok(shc::comod::exterior(&odd, &line), "⊙")?;
    let mut bind = Bindings::new();
    for n in ["X", "Y", "M", "N"] {
        bind.insert(n.to_string(), line.clone());
    }
    bind.insert("C".into(), ok(canonical(&line), "canonical")?.c);
    for n in ["A", "B", "D", "H"] {
        bind.insert(n.to_string(), lvl2.clone());
    }
    for text in CORPUS {
        let e = ok(parse(text), text)?;
        let printed = e.to_string();
        let again = ok(parse(&printed), &printed)?;
        ensure(again == e, || format!("`{text}` does not round-trip through `{printed}`"))?;
        ensure(again.to_string() == printed, || format!("printing `{printed}` is not idempotent"))?;
        let r = ok(realize(&e, &h, &bind), text)?;
        let dim: usize = e.operands.iter().map(|o| if o.name == "I" { 1 } else { bind[&o.name].dim }).product();
        ensure(r.comodule.level == e.arity() && r.comodule.dim == dim, || format!("`{text}` realizes with the wrong shape"))?;
        all_pass(&check_comodule(&r.comodule), text)?;
    }
    for (text, at) in MALFORMED {
        match parse(text) {
            Ok(_) => return Err(format!("`{text}` parsed")),
            Err(e) => ensure(position(&e) == Some(at), || format!("`{text}`: {e:?}, expected position {at}"))?,
        }
    }
    Ok(())
}

type Criterion = (usize, &'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 9] = [
    (1, "classical collapse", classical_collapse),
    (2, "coend dimensions", coend_dimensions),
    (3, "reconstruction round-trip", reconstruction),
    (4, "squared-axiom suite and mutations", squared_suite),
    (5, "braided consistency", braided_consistency),
    (6, "opposite and antipode coherence", opposite_antipode),
    (7, "quasiclassical bridge", quasiclassical),
    (8, "ribbon", ribbon),
    (9, "parser corpus", parser),
];

fn main() {
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let start = Instant::now();
    let mut failed = 0;
    for (n, title, run) in CRITERIA {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("criterion {n} ({title}): PASS [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} ({title}): FAIL [{secs:.1}s] {why}");
            }
        }
    }
    println!("acceptance: {failed} failed, total {:.1}s", start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
