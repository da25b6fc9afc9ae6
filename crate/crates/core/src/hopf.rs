//! Finite-dimensional Hopf algebras given by structure constants, with
//! optional universal r-form and ribbon form.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactla::{kron, kron_all, permute_col_factors, permute_factors, solve, Field, Matrix, Scalar};
use crate::report::VerificationReport;

/// Structure constants of a Hopf algebra `H` of dimension `dim`.
///
/// `mult` is `h x h²`, `unit` is `h x 1`, `comult` is `h² x h`, `counit` is
/// `1 x h`, `antipode` is `h x h`. The r-form is a bilinear form `1 x h²`
/// and the ribbon form a functional `1 x h`.
#[derive(Clone, Debug)]
pub struct HopfAlgebra {
    pub name: String,
    pub field: Field,
    pub dim: usize,
    pub mult: Matrix,
    pub unit: Matrix,
    pub comult: Matrix,
    pub counit: Matrix,
    pub antipode: Matrix,
    pub rform: Option<Matrix>,
    pub ribbon: Option<Matrix>,
}

impl PartialEq for HopfAlgebra {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field
            && self.dim == o.dim
            && self.mult == o.mult
            && self.unit == o.unit
            && self.comult == o.comult
            && self.counit == o.counit
            && self.antipode == o.antipode
            && self.rform == o.rform
    }
}

impl Eq for HopfAlgebra {}

impl fmt::Display for HopfAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {} over {})", self.name, self.dim, self.field)
    }
}

fn expect_shape(m: &Matrix, rows: usize, cols: usize, what: &str, field: Field) -> Result<()> {
    if m.field() != field {
        return Err(Error::FieldMismatch(format!("{what} over {}, expected {field}", m.field())));
    }
    if m.shape() != (rows, cols) {
        return Err(Error::ShapeMismatch(format!(
            "{what} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl HopfAlgebra {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        field: Field,
        dim: usize,
        mult: Matrix,
        unit: Matrix,
        comult: Matrix,
        counit: Matrix,
        antipode: Matrix,
        rform: Option<Matrix>,
        ribbon: Option<Matrix>,
    ) -> Result<HopfAlgebra> {
        let h = dim;
        expect_shape(&mult, h, h * h, "mult", field)?;
        expect_shape(&unit, h, 1, "unit", field)?;
        expect_shape(&comult, h * h, h, "comult", field)?;
        expect_shape(&counit, 1, h, "counit", field)?;
        expect_shape(&antipode, h, h, "antipode", field)?;
        if let Some(r) = &rform {
            expect_shape(r, 1, h * h, "rform", field)?;
        }
        if let Some(v) = &ribbon {
            expect_shape(v, 1, h, "ribbon", field)?;
        }
        Ok(HopfAlgebra { name: name.into(), field, dim, mult, unit, comult, counit, antipode, rform, ribbon })
    }

    pub fn id(&self) -> Matrix {
        Matrix::identity(self.field, self.dim)
    }

    pub fn rform(&self) -> Result<&Matrix> {
        self.rform.as_ref().ok_or(Error::NoRForm)
    }

    /// The flip `H ⊗ H -> H ⊗ H`.
    pub fn flip(&self) -> Matrix {
        permute_factors(self.field, &[self.dim, self.dim], &[1, 0]).unwrap()
    }

    pub fn antipode_inverse(&self) -> Result<Matrix> {
        self.antipode.inverse().map_err(|_| Error::Singular(format!("antipode of {}", self.name)))
    }

    /// Convolution product of two bilinear forms on `H`:
    /// `(a * b)(x ⊗ y) = a(x₁ ⊗ y₁) b(x₂ ⊗ y₂)`.
    pub fn convolve_forms(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let h = self.dim;
        let dd = self.comult.kron(&self.comult);
        // (x₁, x₂, y₁, y₂) -> (x₁, y₁, x₂, y₂)
        let shuffle = permute_factors(self.field, &[h, h, h, h], &[0, 2, 1, 3]).unwrap();
        &(&kron(a, b) * &shuffle) * &dd
    }

    /// Two-sided convolution inverse of a bilinear form.
    pub fn convolution_inverse(&self, form: &Matrix) -> Result<Matrix> {
        let h = self.dim;
        let eps2 = self.counit.kron(&self.counit);
        let dd = self.comult.kron(&self.comult);
        let shuffle = permute_factors(self.field, &[h, h, h, h], &[0, 2, 1, 3]).unwrap();
        let d = &shuffle * &dd;
        // (form * β)(j) = Σ_l β_l M[l, j] with M = (form ⊗ I) d
        let m = &kron(form, &Matrix::identity(self.field, h * h)) * &d;
        let beta = solve(&m.transpose(), &eps2.transpose())
            .map_err(|_| Error::Singular("form is not convolution invertible".into()))?
            .transpose();
        if self.convolve_forms(&beta, form) != eps2 || self.convolve_forms(form, &beta) != eps2 {
            return Err(Error::Singular("form has only a one-sided convolution inverse".into()));
        }
        Ok(beta)
    }

    /// Convolution inverse of the r-form.
    pub fn rform_inverse(&self) -> Result<Matrix> {
        self.convolution_inverse(self.rform()?)
    }

    /// `H^{⊗n}` with the tensor product algebra and coalgebra structure.
    pub fn tensor_power(&self, n: usize) -> HopfAlgebra {
        let f = self.field;
        let h = self.dim;
        if n == 0 {
            return trivial(f);
        }
        let rep = |m: &Matrix| kron_all(f, &vec![m; n]);
        let dims = vec![h; 2 * n];
        // inputs (a_1..a_n, b_1..b_n) regrouped as (a_1, b_1, ..., a_n, b_n)
        let to_pairs: Vec<usize> = (0..2 * n).map(|i| if i < n { 2 * i } else { 2 * (i - n) + 1 }).collect();
        let mult = &rep(&self.mult) * &permute_factors(f, &dims, &to_pairs).unwrap();
        // outputs (x_1', x_1'', ..., x_n', x_n'') regrouped as (x', x'')
        let from_pairs: Vec<usize> = (0..2 * n).map(|i| if i % 2 == 0 { i / 2 } else { n + i / 2 }).collect();
        let comult = &permute_factors(f, &dims, &from_pairs).unwrap() * &rep(&self.comult);
        HopfAlgebra {
            name: format!("{}^{n}", self.name),
            field: f,
            dim: h.pow(n as u32),
            mult,
            unit: rep(&self.unit),
            comult,
            counit: rep(&self.counit),
            antipode: rep(&self.antipode),
            rform: None,
            ribbon: None,
        }
    }

    /// Checks that `phi: H -> k` is an algebra map.
    pub fn is_character(&self, phi: &Matrix) -> bool {
        phi.shape() == (1, self.dim)
            && &(phi * &self.mult) == &phi.kron(phi)
            && (phi * &self.unit).get(0, 0).is_one()
    }
}

/// Hopf algebra axioms: associativity, unit, coassociativity, counit,
/// compatibility of the coalgebra and algebra structure, antipode.
pub fn check_hopf(hp: &HopfAlgebra) -> VerificationReport {
    let mut r = VerificationReport::new();
    let f = hp.field;
    let i = hp.id();
    let (mu, eta, de, ep, s) = (&hp.mult, &hp.unit, &hp.comult, &hp.counit, &hp.antipode);
    r.check("assoc", &(mu * &mu.kron(&i)), &(mu * &i.kron(mu)));
    r.check("unit.left", &(mu * &eta.kron(&i)), &i);
    r.check("unit.right", &(mu * &i.kron(eta)), &i);
    r.check("coassoc", &(&de.kron(&i) * de), &(&i.kron(de) * de));
    r.check("counit.left", &(&ep.kron(&i) * de), &i);
    r.check("counit.right", &(&i.kron(ep) * de), &i);
    let h = hp.dim;
    let dd = crate::exactla::permute_row_factors(&de.kron(de), &[h, h, h, h], &[0, 2, 1, 3]).unwrap();
    r.check("bialgebra.comult_mult", &(de * mu), &(&mu.kron(mu) * &dd));
    r.check("bialgebra.comult_unit", &(de * eta), &eta.kron(eta));
    r.check("bialgebra.counit_mult", &(ep * mu), &ep.kron(ep));
    r.check("bialgebra.counit_unit", &(ep * eta), &Matrix::identity(f, 1));
    let ee = eta * ep;
    r.check("antipode.left", &(&(mu * &s.kron(&i)) * de), &ee);
    r.check("antipode.right", &(&(mu * &i.kron(s)) * de), &ee);
    r
}

/// Universal r-form axioms in the convention used by
/// [`crate::comod::braiding`], `c(x ⊗ y) = r(x₋₁, y₋₁) y₀ ⊗ x₀`:
///
/// * `r(ab, c) = r(b, c₁) r(a, c₂)`
/// * `r(a, bc) = r(a₁, b) r(a₂, c)`
/// * `r(a₁, b₁) b₂ a₂ = a₁ b₁ r(a₂, b₂)`
///
/// plus convolution invertibility.
pub fn check_cqt(hp: &HopfAlgebra) -> Result<VerificationReport> {
    let rho = hp.rform()?;
    let mut r = VerificationReport::new();
    let f = hp.field;
    let h = hp.dim;
    let i = hp.id();
    match hp.rform_inverse() {
        Ok(_) => r.flag("rform.invertible", true, None),
        Err(e) => r.flag("rform.invertible", false, Some(e.to_string())),
    };
    let rr = rho.kron(rho);
    let d4 = [h, h, h, h];
    // r(ab, c) vs r(b, c₁) r(a, c₂): (a, b, c₁, c₂) -> (b, c₁, a, c₂)
    let lhs = rho * &hp.mult.kron(&i);
    let p = permute_factors(f, &d4, &[2, 0, 1, 3]).unwrap();
    let rhs = &(&rr * &p) * &kron_all(f, &[&i, &i, &hp.comult]);
    r.check("rform.mult_left", &lhs, &rhs);
    // r(a, bc) vs r(a₁, b) r(a₂, c): (a₁, a₂, b, c) -> (a₁, b, a₂, c)
    let lhs = rho * &i.kron(&hp.mult);
    let p = permute_factors(f, &d4, &[0, 2, 1, 3]).unwrap();
    let rhs = &(&rr * &p) * &kron_all(f, &[&hp.comult, &i, &i]);
    r.check("rform.mult_right", &lhs, &rhs);
    // r(a₁, b₁) b₂ a₂ vs a₁ b₁ r(a₂, b₂), inputs (a₁, a₂, b₁, b₂)
    let dd = hp.comult.kron(&hp.comult);
    let lhs = &permute_col_factors(&rho.kron(&hp.mult), &d4, &[0, 3, 1, 2]).unwrap() * &dd;
    let rhs = &permute_col_factors(&hp.mult.kron(rho), &d4, &[0, 2, 1, 3]).unwrap() * &dd;
    r.check("rform.commutation", &lhs, &rhs);
    Ok(r)
}

fn trivial(f: Field) -> HopfAlgebra {
    let one = Matrix::identity(f, 1);
    HopfAlgebra {
        name: "trivial".into(),
        field: f,
        dim: 1,
        mult: one.clone(),
        unit: one.clone(),
        comult: one.clone(),
        counit: one.clone(),
        antipode: one.clone(),
        rform: Some(one),
        ribbon: None,
    }
}

/// Group algebra of the cyclic group of order `n`; basis `g^a`, `a < n`.
fn cyclic_group_algebra(f: Field, n: usize, name: String, rform: Option<Matrix>, ribbon: Option<Matrix>) -> HopfAlgebra {
    let mut mult = Matrix::zeros(f, n, n * n);
    let mut comult = Matrix::zeros(f, n * n, n);
    let mut antipode = Matrix::zeros(f, n, n);
    for a in 0..n {
        for b in 0..n {
            mult.set((a + b) % n, a * n + b, f.one());
        }
        comult.set(a * n + a, a, f.one());
        antipode.set((n - a) % n, a, f.one());
    }
    let counit = Matrix::from_fn(f, 1, n, |_, _| f.one());
    HopfAlgebra {
        name,
        field: f,
        dim: n,
        mult,
        unit: Matrix::unit_vector(f, n, 0),
        comult,
        counit,
        antipode,
        rform,
        ribbon,
    }
}

/// Bicharacter `r(g^a, g^b) = ω^{ab}`.
fn bicharacter(f: Field, n: usize, omega: &Scalar) -> Matrix {
    Matrix::from_fn(f, 1, n * n, |_, k| omega.pow(((k / n) * (k % n)) as u64))
}

fn primitive_root(n: u64, p: u64) -> Result<Scalar> {
    let f = Field::Prime(p);
    if n == 0 || (p - 1) % n != 0 {
        return Err(Error::MissingRoot { n, p });
    }
    for g in 1..p {
        let w = f.from_i64(g as i64).pow((p - 1) / n);
        let order_n = (1..n).all(|k| !w.pow(k).is_one());
        if order_n {
            return Ok(w);
        }
    }
    Err(Error::MissingRoot { n, p })
}

/// Sweedler's four-dimensional Hopf algebra with basis `1, g, x, gx`
/// (index `a + 2b` for `g^a x^b`), `g² = 1`, `x² = 0`, `gx = -xg`,
/// `Δg = g ⊗ g`, `Δx = x ⊗ 1 + g ⊗ x`, `S(x) = -gx`.
pub fn sweedler4(f: Field) -> HopfAlgebra {
    let idx = |a: usize, b: usize| a + 2 * b;
    // normal form of (g^a x^b)(g^c x^d) = (-1)^{bc} g^{a+c} x^{b+d}
    let mul_basis = |i: usize, j: usize| -> Option<(usize, i64)> {
        let (a, b, c, d) = (i % 2, i / 2, j % 2, j / 2);
        if b + d >= 2 {
            return None;
        }
        Some((idx((a + c) % 2, b + d), if b * c == 1 { -1 } else { 1 }))
    };
    let mut mult = Matrix::zeros(f, 4, 16);
    for i in 0..4 {
        for j in 0..4 {
            if let Some((k, s)) = mul_basis(i, j) {
                mult.set(k, i * 4 + j, f.from_i64(s));
            }
        }
    }
    let mul = |u: &Matrix, v: &Matrix| &mult * &u.kron(v);
    let h = f.one();
    let e = |k: usize| Matrix::unit_vector(f, 4, k);
    let (one, g, x) = (e(0), e(1), e(2));
    // products in H ⊗ H use the tensor product algebra
    let mult2 = {
        let p = permute_factors(f, &[4, 4, 4, 4], &[0, 2, 1, 3]).unwrap();
        &mult.kron(&mult) * &p
    };
    let mul2 = |u: &Matrix, v: &Matrix| &mult2 * &u.kron(v);
    let dg = g.kron(&g);
    let dx = &x.kron(&one) + &g.kron(&x);
    let mut comult = Matrix::zeros(f, 16, 4);
    let mut antipode = Matrix::zeros(f, 4, 4);
    let sg = g.clone();
    let sx = -&mul(&g, &x);
    for a in 0..2 {
        for b in 0..2 {
            let mut d = one.kron(&one);
            let mut s = one.clone();
            if a == 1 {
                d = mul2(&d, &dg);
            }
            if b == 1 {
                d = mul2(&d, &dx);
            }
            // S is an anti-homomorphism: S(g^a x^b) = S(x)^b S(g)^a
            if b == 1 {
                s = mul(&s, &sx);
            }
            if a == 1 {
                s = mul(&s, &sg);
            }
            let k = idx(a, b);
            for r in 0..16 {
                comult.set(r, k, d.get(r, 0).clone());
            }
            for r in 0..4 {
                antipode.set(r, k, s.get(r, 0).clone());
            }
        }
    }
    let counit = Matrix::from_fn(f, 1, 4, |_, k| if k < 2 { h.clone() } else { f.zero() });
    // r-form, t = 1 member of the one-parameter family
    let mut rform = Matrix::zeros(f, 1, 16);
    let (bg, bx, bgx) = (1, 2, 3);
    let entries = [
        (0, 0, 1),
        (0, bg, 1),
        (bg, 0, 1),
        (bg, bg, -1),
        (bx, bx, -1),
        (bx, bgx, 1),
        (bgx, bx, -1),
        (bgx, bgx, -1),
    ];
    for (i, j, v) in entries {
        rform.set(0, i * 4 + j, f.from_i64(v));
    }
    HopfAlgebra {
        name: "sweedler4".into(),
        field: f,
        dim: 4,
        mult: mult.clone(),
        unit: one,
        comult,
        counit,
        antipode,
        rform: Some(rform),
        ribbon: None,
    }
}

/// Functions on the cyclic group of order `n`; basis `δ_a`.
fn functions_cyclic(f: Field, n: usize) -> HopfAlgebra {
    let mut mult = Matrix::zeros(f, n, n * n);
    let mut comult = Matrix::zeros(f, n * n, n);
    let mut antipode = Matrix::zeros(f, n, n);
    for a in 0..n {
        mult.set(a, a * n + a, f.one());
        for b in 0..n {
            comult.set(b * n + (a + n - b) % n, a, f.one());
        }
        antipode.set((n - a) % n, a, f.one());
    }
    HopfAlgebra {
        name: format!("functionsZ{n}"),
        field: f,
        dim: n,
        mult,
        unit: Matrix::from_fn(f, n, 1, |_, _| f.one()),
        comult,
        counit: Matrix::from_fn(f, 1, n, |_, k| if k == 0 { f.one() } else { f.zero() }),
        antipode,
        rform: None,
        ribbon: None,
    }
}

/// Built-in fixtures: `trivial`, `kZ2`, `kZn` (over `Q`, r-form only for
/// `n <= 2`), `kZn:p` (over `F_p` with bicharacter `ω^{ab}`), `sweedler4`,
/// `functionsZn`. `field` applies where the name does not fix one.
pub fn builtin(name: &str, field: Field) -> Result<Arc<HopfAlgebra>> {
    let unknown = || Error::UnknownBuiltin(name.to_string());
    let hp = match name {
        "trivial" => trivial(field),
        "sweedler4" => sweedler4(field),
        "kZ2" => {
            let f = field;
            let rho = bicharacter(f, 2, &f.from_i64(-1));
            let nu = Matrix::from_i64(f, &[&[1, -1]]);
            cyclic_group_algebra(f, 2, "kZ2".into(), Some(rho), Some(nu))
        }
        _ => {
            if let Some(rest) = name.strip_prefix("functionsZ") {
                let n: usize = rest.parse().map_err(|_| unknown())?;
                if n == 0 {
                    return Err(unknown());
                }
                functions_cyclic(field, n)
            } else if let Some(rest) = name.strip_prefix("kZ") {
                let (n, p) = match rest.split_once(':') {
                    Some((n, p)) => (n, Some(p)),
                    None => (rest, None),
                };
                let n: usize = n.parse().map_err(|_| unknown())?;
                if n == 0 {
                    return Err(unknown());
                }
                match p {
                    Some(p) => {
                        let p: u64 = p.parse().map_err(|_| unknown())?;
                        let f = Field::prime(p)?;
                        let w = primitive_root(n as u64, p)?;
                        let rho = bicharacter(f, n, &w);
                        cyclic_group_algebra(f, n, name.into(), Some(rho), None)
                    }
                    None => {
                        let rho = match n {
                            1 => Some(bicharacter(field, 1, &field.one())),
                            2 => Some(bicharacter(field, 2, &field.from_i64(-1))),
                            _ => None,
                        };
                        cyclic_group_algebra(field, n, name.into(), rho, None)
                    }
                }
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(Arc::new(hp))
}
