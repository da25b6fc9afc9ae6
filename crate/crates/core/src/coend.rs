//! Coend reconstruction.
//!
//! A [`Diagram`] is a finite family of comodules with chosen morphisms. Its
//! coend is the quotient of `⊕_X X ⊙ X^∨` by the relations
//! `(1 ⊗ fᵗ)u ~ (f ⊗ 1)u` for each listed `f`. Relations of composites are
//! not needed: `r_{g∘f}(u) = r_f((1 ⊗ gᵗ)u) + r_g((f ⊗ 1)u)`, so the listed
//! morphisms generate every relation coming from the category they span.
//! Likewise only a spanning set of each Hom space is required.
//!
//! Every induced map is computed on representatives as `G · section` and
//! then checked to satisfy `m · proj = G`, so data that does not descend to
//! the quotient is reported instead of repaired.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::comod::{
    braiding, braiding_inverse, coev_matrix, dual, ev_matrix, exterior, intertwines, same_hopf, tensor_v, Comodule,
    Side, ZetaSource, zeta,
};
use crate::error::{Error, Result};
use crate::exactla::{cokernel, kernel_basis, kron_all, permute_factors, solve, Field, Matrix};
use crate::hopf::HopfAlgebra;
use crate::report::VerificationReport;
use crate::squared::{
    check_coalgebra_hom, iota, Bicoalgebra, HopfCoalgebra, QTHopfCoalgebra, RibbonHopfCoalgebra, SquaredCoalgebra,
    SquaredComodule, canonical, comodule_from_hom,
};

fn ident(f: Field, n: usize) -> Matrix {
    Matrix::identity(f, n)
}

fn swap(f: Field, a: usize, b: usize) -> Matrix {
    permute_factors(f, &[a, b], &[1, 0]).unwrap()
}

/// Basis of `Hom(X, Y)` in the category of comodules.
pub fn hom_space(x: &Comodule, y: &Comodule) -> Result<Vec<Matrix>> {
    if x.level != y.level {
        return Err(Error::ShapeMismatch(format!("Hom between levels {} and {}", x.level, y.level)));
    }
    if !same_hopf(&x.hopf, &y.hopf) {
        return Err(Error::HopfMismatch);
    }
    let f = x.field();
    let (dx, dy) = (x.dim, y.dim);
    let hn = x.coaction.rows() / dx.max(1);
    // unknown f[a, b] at column a·dx + b; equation rows (leg, row of Y, col of X)
    let mut sys = Matrix::zeros(f, hn * dy * dx, dy * dx);
    for a in 0..dy {
        for b in 0..dx {
            let col = a * dx + b;
            for l in 0..hn {
                for r in 0..dy {
                    // δ_Y E_ab: column b gets δ_Y[:, a]
                    let v = y.coaction.get(l * dy + r, a);
                    if !v.is_zero() {
                        let row = (l * dy + r) * dx + b;
                        let cur = sys.get(row, col).clone();
                        sys.set(row, col, &cur + v);
                    }
                }
                for c in 0..dx {
                    // (1 ⊗ E_ab) δ_X: row (l, a) gets δ_X[(l, b), :]
                    let v = x.coaction.get(l * dx + b, c);
                    if !v.is_zero() {
                        let row = (l * dy + a) * dx + c;
                        let cur = sys.get(row, col).clone();
                        sys.set(row, col, &cur - v);
                    }
                }
            }
        }
    }
    let k = kernel_basis(&sys);
    Ok((0..k.cols()).map(|j| Matrix::from_fn(f, dy, dx, |a, b| k.get(a * dx + b, j).clone())).collect())
}

/// Deterministic small integer combination of a basis; `seed` varies it.
fn combination(f: Field, basis: &[Matrix], seed: usize) -> Matrix {
    let mut out = Matrix::zeros(f, basis[0].rows(), basis[0].cols());
    for (k, b) in basis.iter().enumerate() {
        let mut c = ((seed * 31 + k * 17 + seed * k * 5 + 7) % 13) as i64 - 6;
        if c == 0 {
            c = 1;
        }
        out = &out + &b.scale(&f.from_i64(c));
    }
    out
}

/// A summand `Z` of a tensor product `A`: `incl: Z -> A`, `proj: A -> Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct Summand {
    pub object: String,
    pub incl: Matrix,
    pub proj: Matrix,
}

/// The right dual of an object: `object ≅ X^∨` witnessed by a pairing
/// `X ⊗ object -> I` (`1 x dX·dY`).
#[derive(Clone, Debug, PartialEq)]
pub struct DualEntry {
    pub object: String,
    pub pairing: Matrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagramMorphism {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub matrix: Matrix,
}

/// Finite presentation of a fibre functor: comodules, morphisms between them
/// and optional monoidal and rigid data.
///
/// `tensor_table[(X, Y)]` splits `X ⊗ Y` into listed objects. A single
/// summand with identity maps is the strictly monoidal case.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub hopf: Arc<HopfAlgebra>,
    pub objects: Vec<(String, Comodule)>,
    pub morphisms: Vec<DiagramMorphism>,
    pub unit_object: Option<String>,
    pub tensor_table: BTreeMap<(String, String), Vec<Summand>>,
    pub dual_table: BTreeMap<String, DualEntry>,
    pub zeta_source: Option<ZetaSource>,
}

impl Diagram {
    pub fn new(hopf: &Arc<HopfAlgebra>) -> Diagram {
        Diagram {
            hopf: hopf.clone(),
            objects: Vec::new(),
            morphisms: Vec::new(),
            unit_object: None,
            tensor_table: BTreeMap::new(),
            dual_table: BTreeMap::new(),
            zeta_source: None,
        }
    }

    pub fn field(&self) -> Field {
        self.hopf.field
    }

    pub fn add_object(&mut self, name: &str, x: Comodule) -> Result<()> {
        if x.level != 1 {
            return Err(Error::ShapeMismatch(format!("diagram object `{name}` has level {}", x.level)));
        }
        if !same_hopf(&x.hopf, &self.hopf) {
            return Err(Error::HopfMismatch);
        }
        if self.index(name).is_some() {
            return Err(Error::Invalid(format!("object `{name}` listed twice")));
        }
        self.objects.push((name.to_string(), x));
        Ok(())
    }

    /// Adds the trivial comodule as the unit object.
    pub fn add_unit(&mut self, name: &str) -> Result<()> {
        self.add_object(name, Comodule::unit(&self.hopf, 1))?;
        self.unit_object = Some(name.to_string());
        Ok(())
    }

    pub fn add_morphism(&mut self, name: &str, src: &str, dst: &str, matrix: Matrix) -> Result<()> {
        let (x, y) = (self.object(src)?, self.object(dst)?);
        if let Some(w) = intertwines(x, y, &matrix)? {
            return Err(Error::NotAMorphism { context: format!("diagram morphism `{name}`"), witness: w });
        }
        self.morphisms.push(DiagramMorphism { name: name.into(), src: src.into(), dst: dst.into(), matrix });
        Ok(())
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|(n, _)| n == name)
    }

    pub fn object(&self, name: &str) -> Result<&Comodule> {
        self.index(name).map(|i| &self.objects[i].1).ok_or_else(|| Error::UnknownObject(name.into()))
    }

    /// Lists a basis of every Hom space between listed objects, skipping
    /// identities.
    pub fn add_full_homs(&mut self) -> Result<()> {
        let objs = self.objects.clone();
        for (nx, x) in &objs {
            for (ny, y) in &objs {
                for (k, f) in hom_space(x, y)?.into_iter().enumerate() {
                    if nx == ny && f.is_identity() {
                        continue;
                    }
                    self.morphisms.push(DiagramMorphism {
                        name: format!("{nx}->{ny}#{k}"),
                        src: nx.clone(),
                        dst: ny.clone(),
                        matrix: f,
                    });
                }
            }
        }
        Ok(())
    }

    /// Splits `X ⊗ Y` into listed objects for every pair.
    pub fn fill_tensor_table(&mut self) -> Result<()> {
        for (nx, x) in self.objects.clone() {
            for (ny, y) in self.objects.clone() {
                let key = (nx.clone(), ny.clone());
                if self.tensor_table.contains_key(&key) {
                    continue;
                }
                let a = tensor_v(&x, &y)?;
                let parts = decompose(&a, &self.objects)
                    .map_err(|e| Error::NotMonoidalDiagram(format!("{nx} ⊗ {ny}: {e}")))?;
                self.tensor_table.insert(key, parts);
            }
        }
        Ok(())
    }

    /// Finds a listed object isomorphic to each right dual.
    pub fn fill_dual_table(&mut self) -> Result<()> {
        let f = self.field();
        for (nx, x) in self.objects.clone() {
            if self.dual_table.contains_key(&nx) {
                continue;
            }
            let xd = dual(&x, Side::Right)?;
            let mut found = None;
            // unused targets first, so that every object is also a left dual
            let used: Vec<&String> = self.dual_table.values().map(|e| &e.object).collect();
            let mut order: Vec<&(String, Comodule)> = self.objects.iter().filter(|(n, _)| !used.contains(&n)).collect();
            order.extend(self.objects.iter().filter(|(n, _)| used.contains(&n)));
            'search: for (ny, y) in order {
                if y.dim != x.dim {
                    continue;
                }
                let homs = hom_space(y, &xd)?;
                if homs.is_empty() {
                    continue;
                }
                for seed in 0..8 {
                    let k = combination(f, &homs, seed);
                    if k.inverse().is_ok() {
                        found = Some(DualEntry { object: ny.clone(), pairing: pairing_from_kappa(&k) });
                        break 'search;
                    }
                }
            }
            let e = found.ok_or_else(|| Error::NotDualClosed(format!("no listed object is dual to `{nx}`")))?;
            self.dual_table.insert(nx, e);
        }
        Ok(())
    }

    /// Checks listed morphisms, the unit, the tensor and dual tables.
    pub fn validate(&self) -> Result<()> {
        for m in &self.morphisms {
            let (x, y) = (self.object(&m.src)?, self.object(&m.dst)?);
            if let Some(w) = intertwines(x, y, &m.matrix)? {
                return Err(Error::NotAMorphism { context: format!("diagram morphism `{}`", m.name), witness: w });
            }
        }
        if let Some(u) = &self.unit_object {
            if *self.object(u)? != Comodule::unit(&self.hopf, 1) {
                return Err(Error::NotMonoidalDiagram(format!("unit object `{u}` is not the trivial comodule")));
            }
        }
        let f = self.field();
        for ((nx, ny), parts) in &self.tensor_table {
            let a = tensor_v(self.object(nx)?, self.object(ny)?)?;
            let mut sum = Matrix::zeros(f, a.dim, a.dim);
            for (i, p) in parts.iter().enumerate() {
                let z = self.object(&p.object)?;
                let bad = |what: &str| Error::NotMonoidalDiagram(format!("{nx} ⊗ {ny}: summand {i} {what}"));
                if p.incl.shape() != (a.dim, z.dim) || p.proj.shape() != (z.dim, a.dim) {
                    return Err(bad("has the wrong shape"));
                }
                if intertwines(z, &a, &p.incl)?.is_some() || intertwines(&a, z, &p.proj)?.is_some() {
                    return Err(bad("is not split by comodule maps"));
                }
                for (j, o) in parts.iter().enumerate() {
                    let pi = &p.proj * &o.incl;
                    if (i == j && !pi.is_identity()) || (i != j && !pi.is_zero()) {
                        return Err(bad("is not orthogonal to the others"));
                    }
                }
                sum = &sum + &(&p.incl * &p.proj);
            }
            if !sum.is_identity() {
                return Err(Error::NotMonoidalDiagram(format!("{nx} ⊗ {ny}: summands do not add up to the identity")));
            }
        }
        for (nx, e) in &self.dual_table {
            let x = self.object(nx)?;
            let y = self.object(&e.object)?;
            if e.pairing.shape() != (1, x.dim * y.dim) {
                return Err(Error::NotDualClosed(format!("pairing for `{nx}` has the wrong shape")));
            }
            let k = kappa(&e.pairing, x.dim, y.dim);
            let xd = dual(x, Side::Right)?;
            if k.inverse().is_err() || intertwines(y, &xd, &k)?.is_some() {
                return Err(Error::NotDualClosed(format!("`{}` is not a right dual of `{nx}`", e.object)));
            }
        }
        Ok(())
    }

    /// Objects `X^∨`, morphisms `fᵗ: Y^∨ -> X^∨`.
    pub fn dual_diagram(&self) -> Result<Diagram> {
        let mut d = Diagram::new(&self.hopf);
        for (n, x) in &self.objects {
            d.objects.push((dual_name(n), dual(x, Side::Right)?));
        }
        for m in &self.morphisms {
            d.morphisms.push(DiagramMorphism {
                name: format!("{}^t", m.name),
                src: dual_name(&m.dst),
                dst: dual_name(&m.src),
                matrix: m.matrix.transpose(),
            });
        }
        Ok(d)
    }
}

pub fn dual_name(n: &str) -> String {
    format!("{n}^∨")
}

/// `κ: Y -> X^∨` from a pairing `X ⊗ Y -> I`.
fn kappa(pairing: &Matrix, dx: usize, dy: usize) -> Matrix {
    Matrix::from_fn(pairing.field(), dx, dy, |a, b| pairing.get(0, a * dy + b).clone())
}

fn pairing_from_kappa(k: &Matrix) -> Matrix {
    let (dx, dy) = k.shape();
    Matrix::from_fn(k.field(), 1, dx * dy, |_, c| k.get(c / dy, c % dy).clone())
}

/// Splits `a` into a direct sum of `candidates`, trying larger ones first.
pub fn decompose(a: &Comodule, candidates: &[(String, Comodule)]) -> Result<Vec<Summand>> {
    let f = a.field();
    let mut order: Vec<&(String, Comodule)> = candidates.iter().collect();
    order.sort_by_key(|(_, z)| std::cmp::Reverse(z.dim));
    let mut e = a.id();
    let mut left = a.dim;
    let mut out = Vec::new();
    while left > 0 {
        let mut progress = false;
        for (name, z) in &order {
            if z.dim > left {
                continue;
            }
            let ins = hom_space(z, a)?;
            let outs = hom_space(a, z)?;
            if ins.is_empty() || outs.is_empty() {
                continue;
            }
            for seed in 0..8 {
                let i = &e * &combination(f, &ins, seed);
                let p = &combination(f, &outs, seed + 3) * &e;
                if let Ok(g) = (&p * &i).inverse() {
                    let p = &g * &p;
                    e = &e - &(&i * &p);
                    left -= z.dim;
                    out.push(Summand { object: name.clone(), incl: i, proj: p });
                    progress = true;
                    break;
                }
            }
            if progress {
                break;
            }
        }
        if !progress {
            return Err(Error::Inconsistent(format!("{left} dimensions left that split into no listed object")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub name: String,
    pub offset: usize,
    pub dim: usize,
}

/// The coend of a diagram with its projections `q_X: X ⊙ X^∨ -> C` and any
/// structures induced on it.
#[derive(Clone, Debug)]
pub struct CoendCoalgebra {
    pub c: SquaredCoalgebra,
    pub q: BTreeMap<String, Matrix>,
    pub diagram: Diagram,
    /// `c x T` onto the quotient of `T = ⊕ X ⊙ X^∨`.
    pub proj: Matrix,
    /// `T x c`, `proj · section = 1`.
    pub section: Matrix,
    pub blocks: Vec<Block>,
    pub bi: Option<Bicoalgebra>,
    pub hopf: Option<HopfCoalgebra>,
    pub qt: Option<QTHopfCoalgebra>,
    pub ribbon: Option<RibbonHopfCoalgebra>,
}

impl CoendCoalgebra {
    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    fn total(&self) -> usize {
        self.proj.cols()
    }

    pub fn q(&self, name: &str) -> Result<&Matrix> {
        self.q.get(name).ok_or_else(|| Error::UnknownObject(name.into()))
    }

    /// The matrix on `T` whose block for `X` is `f(X)` (`rows x dX²`).
    fn on_blocks(&self, rows: usize, mut f: impl FnMut(&Block) -> Result<Matrix>) -> Result<Matrix> {
        let mut g = Matrix::zeros(self.c.field(), rows, self.total());
        for b in &self.blocks {
            let m = f(b)?;
            for r in 0..rows {
                for k in 0..b.dim * b.dim {
                    let v = m.get(r, k);
                    if !v.is_zero() {
                        g.set(r, b.offset + k, v.clone());
                    }
                }
            }
        }
        Ok(g)
    }
}

/// `G · section`, after checking that `G` vanishes on the relations.
fn induce(proj: &Matrix, section: &Matrix, g: &Matrix, what: &str) -> Result<Matrix> {
    let m = g * section;
    if let Some(w) = (&m * proj).first_difference(g) {
        return Err(Error::WellDefinednessFailure(format!("{what} does not descend to the coend {w}")));
    }
    Ok(m)
}

pub fn build_coend(d: &Diagram) -> Result<CoendCoalgebra> {
    d.validate()?;
    let f = d.field();
    let h = d.hopf.dim;
    let mut blocks = Vec::new();
    let mut t = 0;
    for (n, x) in &d.objects {
        blocks.push(Block { name: n.clone(), offset: t, dim: x.dim });
        t += x.dim * x.dim;
    }
    let block = |n: &str| blocks.iter().find(|b| b.name == n).unwrap();
    let mut rels: Vec<Matrix> = Vec::new();
    for m in &d.morphisms {
        if m.src == m.dst && m.matrix.is_identity() {
            continue;
        }
        let (bx, by) = (block(&m.src), block(&m.dst));
        let (dx, dy) = (bx.dim, by.dim);
        let mut r = Matrix::zeros(f, t, dx * dy);
        let a = ident(f, dx).kron(&m.matrix.transpose());
        let b = m.matrix.kron(&ident(f, dy));
        for col in 0..dx * dy {
            for k in 0..dx * dx {
                let v = a.get(k, col);
                if !v.is_zero() {
                    let cur = r.get(bx.offset + k, col).clone();
                    r.set(bx.offset + k, col, &cur + v);
                }
            }
            for k in 0..dy * dy {
                let v = b.get(k, col);
                if !v.is_zero() {
                    let cur = r.get(by.offset + k, col).clone();
                    r.set(by.offset + k, col, &cur - v);
                }
            }
        }
        rels.push(r);
    }
    let (proj, section) = if rels.is_empty() {
        (ident(f, t), ident(f, t))
    } else {
        cokernel(&Matrix::hstack(&rels.iter().collect::<Vec<_>>())?)
    };
    let c = proj.rows();
    let mut q = BTreeMap::new();
    for b in &blocks {
        q.insert(b.name.clone(), proj.columns(b.offset, b.dim * b.dim));
    }
    // level-2 coaction: (1 ⊗ proj) δ_T, then descend
    let mut g = Matrix::zeros(f, h * h * c, t);
    for (b, (_, x)) in blocks.iter().zip(&d.objects) {
        let e = exterior(x, &dual(x, Side::Right)?)?;
        let n = b.dim * b.dim;
        for l in 0..h * h {
            let piece = e.coaction.row_block(l * n, n);
            let pushed = &q[&b.name] * &piece;
            for r in 0..c {
                for k in 0..n {
                    let v = pushed.get(r, k);
                    if !v.is_zero() {
                        g.set(l * c + r, b.offset + k, v.clone());
                    }
                }
            }
        }
    }
    let coaction = induce(&proj, &section, &g, "the coaction")?;
    let cc = Comodule::new(d.hopf.clone(), 2, coaction)?;
    let mut e = CoendCoalgebra {
        c: SquaredCoalgebra::new(cc.clone(), Matrix::zeros(f, c * c, c), Matrix::zeros(f, 1, c))?,
        q,
        diagram: d.clone(),
        proj,
        section,
        blocks,
        bi: None,
        hopf: None,
        qt: None,
        ribbon: None,
    };
    let gd = e.on_blocks(c * c, |b| {
        let qx = &e.q[&b.name];
        let n = b.dim;
        Ok(&qx.kron(qx) * &kron_all(f, &[&ident(f, n), &coev_matrix(f, n), &ident(f, n)]))
    })?;
    let delta = induce(&e.proj, &e.section, &gd, "the comultiplication")?;
    let ge = e.on_blocks(1, |b| Ok(ev_matrix(f, b.dim)))?;
    let eps = induce(&e.proj, &e.section, &ge, "the counit")?;
    e.c = SquaredCoalgebra::new(cc, delta, eps)?;
    Ok(e)
}

/// Dinaturality, coalgebra-map property of each `q_X`, joint surjectivity,
/// and the squared coalgebra axioms.
pub fn check_coend(e: &CoendCoalgebra, paranoid: bool) -> Result<VerificationReport> {
    let mut r = crate::squared::check_squared(&e.c, paranoid)?;
    let f = e.c.field();
    for m in &e.diagram.morphisms {
        let (qx, qy) = (e.q(&m.src)?, e.q(&m.dst)?);
        let (dx, dy) = (m.matrix.cols(), m.matrix.rows());
        let lhs = qx * &ident(f, dx).kron(&m.matrix.transpose());
        let rhs = qy * &m.matrix.kron(&ident(f, dy));
        r.check(format!("dinatural[{}]", m.name), &lhs, &rhs);
    }
    for (n, x) in &e.diagram.objects {
        let hom = check_coalgebra_hom(e.q(n)?, &canonical(x)?, &e.c)?;
        r.extend(&format!("q[{n}]"), hom);
    }
    let all: Vec<&Matrix> = e.q.values().collect();
    let rank = if all.is_empty() { 0 } else { Matrix::hstack(&all)?.rank() };
    r.flag("q.surjective", rank == e.dim(), Some(format!("rank {rank} of {}", e.dim())));
    Ok(r)
}

/// `X` as a comodule over the coend: `δ_X = (q_X ⊗ 1)(1 ⊙ coev)`.
pub fn reconstruct_comodule(e: &CoendCoalgebra, name: &str) -> Result<SquaredComodule> {
    let x = e.diagram.object(name)?;
    comodule_from_hom(&e.c, x, e.q(name)?)
}

/// Coend `C′` of the comodules underlying `family` (with the given morphisms)
/// and the coalgebra map `h: C′ -> C` with `h ∘ q_X = ï_X`.
pub fn h_morphism(
    c: &SquaredCoalgebra,
    family: &[(String, SquaredComodule)],
    morphisms: &[DiagramMorphism],
) -> Result<(CoendCoalgebra, Matrix)> {
    let mut d = Diagram::new(c.hopf());
    for (n, m) in family {
        if m.over != *c {
            return Err(Error::Invalid(format!("comodule `{n}` lives over a different coalgebra")));
        }
        d.add_object(n, m.x.clone())?;
    }
    for m in morphisms {
        let src = &family[d.index(&m.src).ok_or_else(|| Error::UnknownObject(m.src.clone()))?].1;
        let dst = &family[d.index(&m.dst).ok_or_else(|| Error::UnknownObject(m.dst.clone()))?].1;
        let rep = crate::squared::check_comodule_hom(&m.matrix, src, dst)?;
        if let Some(bad) = rep.failures().next() {
            return Err(Error::Invalid(format!("`{}` is not a map of comodules: {}", m.name, bad.name)));
        }
        d.morphisms.push(m.clone());
    }
    let e = build_coend(&d)?;
    let iotas: BTreeMap<&str, Matrix> = family.iter().map(|(n, m)| (n.as_str(), iota(m))).collect();
    let g = e.on_blocks(c.dim(), |b| Ok(iotas[b.name.as_str()].clone()))?;
    let h = induce(&e.proj, &e.section, &g, "h")?;
    Ok((e, h))
}

/// Rank of the joint image of the `ï_X` against `dim C`.
pub fn generated_rank(c: &SquaredCoalgebra, family: &[(String, SquaredComodule)]) -> Result<(usize, usize)> {
    let iotas: Vec<Matrix> = family.iter().map(|(_, m)| iota(m)).collect();
    let rank = if iotas.is_empty() { 0 } else { Matrix::hstack(&iotas.iter().collect::<Vec<_>>())?.rank() };
    Ok((rank, c.dim()))
}

/// Fails with `NotGenerating` unless the `ï_X` are jointly surjective.
pub fn require_generating(c: &SquaredCoalgebra, family: &[(String, SquaredComodule)]) -> Result<()> {
    let (rank, dim) = generated_rank(c, family)?;
    if rank < dim {
        return Err(Error::NotGenerating { rank, dim });
    }
    Ok(())
}

/// `q_{X⊗Y}` through the tensor table: `Σ_i q_{Z_i}(π_i ⊗ ι_iᵗ)`.
fn q_tensor(e: &CoendCoalgebra, x: &str, y: &str) -> Result<Matrix> {
    let parts = e
        .diagram
        .tensor_table
        .get(&(x.to_string(), y.to_string()))
        .ok_or_else(|| Error::NotMonoidalDiagram(format!("no tensor table entry for ({x}, {y})")))?;
    let f = e.c.field();
    let da = e.diagram.object(x)?.dim * e.diagram.object(y)?.dim;
    let mut out = Matrix::zeros(f, e.dim(), da * da);
    for p in parts {
        out = &out + &(e.q(&p.object)? * &p.proj.kron(&p.incl.transpose()));
    }
    Ok(out)
}

/// `m(q_X(x ⊗ ξ) ⊗ q_Y(y ⊗ η)) = q_{X⊗Y}((x ⊗ y) ⊗ (ξ ⊗ η))` and `η = q_I`.
pub fn induce_multiplication(e: &CoendCoalgebra) -> Result<Bicoalgebra> {
    let d = &e.diagram;
    let unit = d.unit_object.as_ref().ok_or_else(|| Error::NotMonoidalDiagram("no unit object".into()))?;
    let f = e.c.field();
    let c = e.dim();
    let t = e.total();
    let mut g = Matrix::zeros(f, c, t * t);
    for bx in &e.blocks {
        for by in &e.blocks {
            let (dx, dy) = (bx.dim, by.dim);
            let m = &q_tensor(e, &bx.name, &by.name)? * &permute_factors(f, &[dx, dx, dy, dy], &[0, 2, 1, 3])?;
            for r1 in 0..dx * dx {
                for r2 in 0..dy * dy {
                    let col = (bx.offset + r1) * t + by.offset + r2;
                    for row in 0..c {
                        let v = m.get(row, r1 * dy * dy + r2);
                        if !v.is_zero() {
                            g.set(row, col, v.clone());
                        }
                    }
                }
            }
        }
    }
    let mult = induce(&e.proj.kron(&e.proj), &e.section.kron(&e.section), &g, "the multiplication")?;
    let eta = e.q(unit)?.clone();
    Bicoalgebra::new(e.c.clone(), mult, eta)
}

/// `z: PC -> C′` on generators, `z(q_X(x ⊗ ξ)) = q′_{X^∨}(ξ ⊗ ζ_X x)`, where
/// `C′` is the coend of the dual diagram.
pub fn opposite_coend(e: &CoendCoalgebra, source: &ZetaSource) -> Result<(CoendCoalgebra, Matrix)> {
    let f = e.c.field();
    let dd = e.diagram.dual_diagram()?;
    let cp = build_coend(&dd)?;
    let mut zetas = BTreeMap::new();
    for (n, x) in &e.diagram.objects {
        zetas.insert(n.clone(), zeta(x, source)?);
    }
    let g = e.on_blocks(cp.dim(), |b| {
        let n = b.dim;
        Ok(&(cp.q(&dual_name(&b.name))? * &ident(f, n).kron(&zetas[&b.name])) * &swap(f, n, n))
    })?;
    let z = induce(&e.proj, &e.section, &g, "z")?;
    if z.rows() != z.cols() || z.inverse().is_err() {
        return Err(Error::Singular("z is not invertible".into()));
    }
    Ok((cp, z))
}

/// The opposite coalgebra on `PC` transported along `z`.
pub fn opposite(e: &CoendCoalgebra, source: &ZetaSource) -> Result<(SquaredCoalgebra, Matrix)> {
    let (cp, z) = opposite_coend(e, source)?;
    let zi = z.inverse()?;
    let delta = &(&zi.kron(&zi) * &cp.c.delta) * &z;
    let eps = &cp.c.eps * &z;
    Ok((SquaredCoalgebra::new(e.c.c.flip()?, delta, eps)?, z))
}

/// The square defining `z` for every object, and `z` as a comodule map.
pub fn check_opposite(e: &CoendCoalgebra, source: &ZetaSource) -> Result<VerificationReport> {
    let f = e.c.field();
    let (cp, z) = opposite_coend(e, source)?;
    let mut r = VerificationReport::new();
    for (n, x) in &e.diagram.objects {
        let d = x.dim;
        let rhs = &(cp.q(&dual_name(n))? * &ident(f, d).kron(&zeta(x, source)?)) * &swap(f, d, d);
        r.check(format!("d107[{n}]"), &(&z * e.q(n)?), &rhs);
    }
    match intertwines(&e.c.c.flip()?, &cp.c.c, &z)? {
        None => r.flag("z.morphism", true, None),
        Some(w) => {
            r.push_failure("z.morphism", Some(w), "not a comodule map");
            false
        }
    };
    r.flag("z.invertible", z.inverse().is_ok(), None);
    let (op, _) = opposite(e, source)?;
    r.extend("op", crate::squared::check_squared(&op, false)?);
    Ok(r)
}

fn dual_entry<'a>(d: &'a Diagram, n: &str) -> Result<&'a DualEntry> {
    d.dual_table.get(n).ok_or_else(|| Error::NotDualClosed(format!("no dual listed for `{n}`")))
}

/// Right antipode `γ′(q_X(x ⊗ ξ)) = q_Y(κ^{-1}ξ ⊗ κᵗ ζ_X x)` for the listed
/// dual `Y` with `κ: Y ≅ X^∨`; left antipode
/// `′γ(q_X(x ⊗ ξ)) = q_W(ζ_W^{-1} κ_W^{-t} ξ ⊗ κ_W x)` for the listed `W`
/// with `κ_W: X ≅ W^∨`.
pub fn induce_antipode(e: &CoendCoalgebra, bi: &Bicoalgebra, source: &ZetaSource) -> Result<HopfCoalgebra> {
    let d = &e.diagram;
    let f = e.c.field();
    let c = e.dim();
    let mut zetas = BTreeMap::new();
    for (n, x) in &d.objects {
        zetas.insert(n.clone(), zeta(x, source)?);
    }
    let gr = e.on_blocks(c, |b| {
        let de = dual_entry(d, &b.name)?;
        let dy = d.object(&de.object)?.dim;
        let k = kappa(&de.pairing, b.dim, dy);
        let m = &k.inverse()?.kron(&(&k.transpose() * &zetas[&b.name])) * &swap(f, b.dim, b.dim);
        Ok(e.q(&de.object)? * &m)
    })?;
    let gamma_r = induce(&e.proj, &e.section, &gr, "the right antipode")?;
    let gl = e.on_blocks(c, |b| {
        let (w, de) = d
            .dual_table
            .iter()
            .find(|(_, de)| de.object == b.name)
            .ok_or_else(|| Error::NotDualClosed(format!("`{}` is no listed right dual", b.name)))?;
        let dw = d.object(w)?.dim;
        let k = kappa(&de.pairing, dw, b.dim);
        let left = &zetas[w].inverse()? * &k.inverse()?.transpose();
        let m = &left.kron(&k) * &swap(f, b.dim, b.dim);
        Ok(e.q(w)? * &m)
    })?;
    let gamma_l = induce(&e.proj, &e.section, &gl, "the left antipode")?;
    let (op_r, _) = opposite(e, source)?;
    let left_source = ZetaSource::LeftTransposeInverse(Box::new(source.clone()));
    let (op_l, _) = opposite(e, &left_source)?;
    Ok(HopfCoalgebra { bi: bi.clone(), gamma_r, gamma_l, op_r, op_l, zeta: source.clone() })
}

/// Generators `q_X` of the coend, named by object.
pub fn generators(e: &CoendCoalgebra) -> Vec<(String, Matrix)> {
    e.q.iter().map(|(n, m)| (n.clone(), m.clone())).collect()
}

/// The forms `R±` whose induced braiding on every pair of reconstructed
/// comodules is the braiding of `V`.
pub fn induce_rmatrix(e: &CoendCoalgebra, hc: &HopfCoalgebra) -> Result<QTHopfCoalgebra> {
    let f = e.c.field();
    let c = e.dim();
    let cb = e.c.cbar();
    let comods: Vec<SquaredComodule> =
        e.diagram.objects.iter().map(|(n, _)| reconstruct_comodule(e, n)).collect::<Result<_>>()?;
    let solve_form = |plus: bool| -> Result<Matrix> {
        let mut rows: Vec<Matrix> = Vec::new();
        let mut rhs: Vec<Matrix> = Vec::new();
        for x in &comods {
            for y in &comods {
                let cy = tensor_v(&cb, &y.x)?;
                let cross = if plus { braiding(&x.x, &cy)? } else { braiding_inverse(&cy, &x.x)? };
                let b = &ident(f, c).kron(&cross) * &x.delta.kron(&y.delta);
                let target = braiding(&x.x, &y.x)?;
                let n = x.dim() * y.dim();
                // Σ_u R[u] B[u·n + r, col] = target[r, col]
                let eqs = Matrix::from_fn(f, n * n, c * c, |k, u| b.get(u * n + k / n, k % n).clone());
                let t = Matrix::from_fn(f, n * n, 1, |k, _| target.get(k / n, k % n).clone());
                rows.push(eqs);
                rhs.push(t);
            }
        }
        let a = Matrix::vstack(&rows.iter().collect::<Vec<_>>())?;
        let t = Matrix::vstack(&rhs.iter().collect::<Vec<_>>())?;
        let sol = solve(&a, &t).map_err(|_| {
            Error::WellDefinednessFailure(format!("no form R{} induces the braiding", if plus { "₊" } else { "₋" }))
        })?;
        Ok(sol.transpose())
    };
    let r_plus = solve_form(true)?;
    let r_minus = solve_form(false)?;
    Ok(QTHopfCoalgebra { hopf: hc.clone(), r_plus, r_minus })
}

/// `Θ` with `Θ ∘ q_X = ev ∘ (θ_X ⊗ 1)` for every object.
pub fn theta_to_form(e: &CoendCoalgebra, thetas: &BTreeMap<String, Matrix>) -> Result<Matrix> {
    let d = &e.diagram;
    for (n, x) in &d.objects {
        let t = thetas.get(n).ok_or_else(|| Error::Inconsistent(format!("no twist given for `{n}`")))?;
        if t.shape() != (x.dim, x.dim) || intertwines(x, x, t)?.is_some() {
            return Err(Error::Inconsistent(format!("twist on `{n}` is not a comodule endomorphism")));
        }
    }
    for m in &d.morphisms {
        if &thetas[&m.dst] * &m.matrix != &m.matrix * &thetas[&m.src] {
            return Err(Error::Inconsistent(format!("twist is not natural along `{}`", m.name)));
        }
    }
    let f = e.c.field();
    let g = e.on_blocks(1, |b| Ok(&ev_matrix(f, b.dim) * &thetas[&b.name].kron(&ident(f, b.dim))))?;
    induce(&e.proj, &e.section, &g, "Θ").map_err(|e| match e {
        Error::WellDefinednessFailure(s) => Error::Inconsistent(s),
        other => other,
    })
}

pub fn induce_ribbon(e: &CoendCoalgebra, qt: &QTHopfCoalgebra, thetas: &BTreeMap<String, Matrix>) -> Result<RibbonHopfCoalgebra> {
    Ok(RibbonHopfCoalgebra { qt: qt.clone(), theta: theta_to_form(e, thetas)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::builtin;
    use crate::squared::{check_antipode, check_bicoalgebra, check_squared};

    const Q: Field = Field::Rational;

    fn trivial_k2(gens: usize) -> Diagram {
        let h = builtin("trivial", Q).unwrap();
        let mut d = Diagram::new(&h);
        d.add_object("M", Comodule::trivial(&h, 1, 2)).unwrap();
        let homs = hom_space(d.object("M").unwrap(), d.object("M").unwrap()).unwrap();
        assert_eq!(homs.len(), 4);
        for (k, m) in homs.into_iter().take(gens).enumerate() {
            d.add_morphism(&format!("e{k}"), "M", "M", m).unwrap();
        }
        d
    }

    #[test]
    fn single_comatrix_is_canonical() {
        let h = builtin("trivial", Q).unwrap();
        let mut d = Diagram::new(&h);
        d.add_object("M", Comodule::trivial(&h, 1, 2)).unwrap();
        d.add_morphism("id", "M", "M", ident(Q, 2)).unwrap();
        let e = build_coend(&d).unwrap();
        assert_eq!(e.dim(), 4);
        assert!(e.q("M").unwrap().is_identity());
        assert_eq!(e.c, canonical(d.object("M").unwrap()).unwrap());
        assert!(check_coend(&e, true).unwrap().passed());
    }

    #[test]
    fn full_end_collapses_to_one() {
        let e = build_coend(&trivial_k2(4)).unwrap();
        assert_eq!(e.dim(), 1);
        assert!(check_coend(&e, false).unwrap().passed());
    }

    #[test]
    fn kz2_odd_line() {
        let h = builtin("kZ2", Q).unwrap();
        let mut d = Diagram::new(&h);
        d.add_unit("I").unwrap();
        d.add_object("V", Comodule::grouplike(&h, 1).unwrap()).unwrap();
        d.add_full_homs().unwrap();
        d.fill_tensor_table().unwrap();
        d.fill_dual_table().unwrap();
        let e = build_coend(&d).unwrap();
        assert_eq!(e.dim(), 2);
        assert!(check_coend(&e, true).unwrap().passed());
        let bi = induce_multiplication(&e).unwrap();
        let rep = check_bicoalgebra(&bi, false).unwrap();
        assert!(rep.passed(), "{rep}");
        let hc = induce_antipode(&e, &bi, &ZetaSource::RForm).unwrap();
        let rep = check_antipode(&hc, &generators(&e)).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(hc.gamma_l, hc.gamma_r.inverse().unwrap());
    }

    #[test]
    fn reconstruction_of_canonical_is_iso() {
        let h = builtin("sweedler4", Q).unwrap();
        let x = crate::comod::tests::sweedler_two(&h);
        let cx = crate::squared::canonical_comodule(&x).unwrap();
        let (cp, hm) = h_morphism(&cx.over, &[("X".into(), cx.clone())], &[]).unwrap();
        assert_eq!(cp.dim(), 4);
        assert!(hm.inverse().is_ok());
        assert!(check_coalgebra_hom(&hm, &cp.c, &cx.over).unwrap().passed());
        assert!(check_squared(&cp.c, false).unwrap().passed());
    }
}
