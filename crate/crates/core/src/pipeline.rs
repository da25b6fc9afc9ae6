//! Coend construction with the requested structures induced and every
//! checker suite run on the result.

use std::collections::BTreeMap;

use crate::coend::{
    build_coend, check_coend, check_opposite, generators, induce_antipode, induce_multiplication, induce_rmatrix,
    induce_ribbon, reconstruct_comodule, CoendCoalgebra, Diagram,
};
use crate::comod::ZetaSource;
use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::report::VerificationReport;
use crate::squared::{
    bar, check_antipode, check_bicoalgebra, check_braided_bialgebra, check_braiding_r, check_comparison,
    check_ordinary_antipode, check_qt, check_ribbon, quasiclassical_antipode, SquaredComodule,
};

/// Which structures to induce. Each level implies the ones below it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub monoidal: bool,
    pub antipode: bool,
    pub rmatrix: bool,
    pub ribbon: bool,
    pub check_c58: bool,
    pub paranoid: bool,
}

impl Options {
    pub fn all() -> Options {
        Options { monoidal: true, antipode: true, rmatrix: true, ribbon: true, check_c58: true, paranoid: false }
    }

    fn normalized(mut self) -> Options {
        self.rmatrix |= self.ribbon;
        self.antipode |= self.rmatrix;
        self.monoidal |= self.antipode;
        self
    }
}

/// `θ_X = (ν ⊗ 1) δ_X` from the ribbon element of `H`.
pub fn default_twists(d: &Diagram) -> Result<BTreeMap<String, Matrix>> {
    let nu = d.hopf.ribbon.as_ref().ok_or_else(|| {
        Error::NoRibbonData(format!("`{}` has no ribbon element and the diagram lists no twists", d.hopf.name))
    })?;
    Ok(d.objects.iter().map(|(n, x)| (n.clone(), &nu.kron(&x.id()) * &x.coaction)).collect())
}

/// Rank of the matrix coefficients of the diagram's objects inside `H`.
/// The objects generate `V` exactly when this equals `dim H`.
pub fn coefficient_rank(d: &Diagram) -> Result<(usize, usize)> {
    let h = d.hopf.dim;
    let coefs: Vec<Matrix> = d
        .objects
        .iter()
        .map(|(_, x)| {
            let n = x.dim;
            Matrix::from_fn(d.field(), h, n * n, |l, k| x.coaction.get(l * n + k % n, k / n).clone())
        })
        .collect();
    let rank = if coefs.is_empty() { 0 } else { Matrix::hstack(&coefs.iter().collect::<Vec<_>>())?.rank() };
    Ok((rank, h))
}

pub fn zeta_source(d: &Diagram) -> Result<ZetaSource> {
    match &d.zeta_source {
        Some(z) => Ok(z.clone()),
        None if d.hopf.rform.is_some() => Ok(ZetaSource::RForm),
        None => Err(Error::MissingZeta),
    }
}

/// Builds the coend and every requested structure. Construction errors
/// (missing tables, ill-defined maps) are returned as `Err`; axiom failures
/// land in the report.
pub fn run(
    d: &Diagram,
    opts: Options,
    twists: Option<&BTreeMap<String, Matrix>>,
) -> Result<(CoendCoalgebra, VerificationReport)> {
    let opts = opts.normalized();
    let mut e = build_coend(d)?;
    let mut r = VerificationReport::new();
    r.extend("coend", check_coend(&e, opts.paranoid)?);
    if opts.check_c58 {
        let (rank, h) = coefficient_rank(d)?;
        r.flag("c58", rank == h, Some(format!("coefficient rank {rank} of dim H = {h}")));
    }
    if !opts.monoidal {
        return Ok((e, r));
    }
    let bi = induce_multiplication(&e)?;
    r.extend("bicoalgebra", check_bicoalgebra(&bi, opts.paranoid)?);
    e.bi = Some(bi.clone());
    if !opts.antipode {
        return Ok((e, r));
    }
    let source = zeta_source(d)?;
    let hc = induce_antipode(&e, &bi, &source)?;
    r.extend("opposite", check_opposite(&e, &source)?);
    r.extend("hopf_coalgebra", check_antipode(&hc, &generators(&e))?);
    e.hopf = Some(hc.clone());
    if !opts.rmatrix {
        return Ok((e, r));
    }
    let qt = induce_rmatrix(&e, &hc)?;
    r.extend("quasitriangular", check_qt(&qt, opts.paranoid)?);
    let comods: Vec<(String, SquaredComodule)> =
        e.diagram.objects.iter().map(|(n, _)| Ok((n.clone(), reconstruct_comodule(&e, n)?))).collect::<Result<_>>()?;
    r.extend("braiding", check_braiding_r(&qt, &comods)?);
    let bb = bar(&bi)?;
    r.extend("bar", check_braided_bialgebra(&bb)?);
    r.extend("bar", check_ordinary_antipode(&bb, &quasiclassical_antipode(&hc)?));
    if hc.zeta == ZetaSource::RForm {
        r.extend("comparison", check_comparison(&hc)?);
    }
    e.qt = Some(qt.clone());
    if !opts.ribbon {
        return Ok((e, r));
    }
    let owned;
    let thetas = match twists {
        Some(t) => t,
        None => {
            owned = default_twists(d)?;
            &owned
        }
    };
    let rb = induce_ribbon(&e, &qt, thetas)?;
    r.extend("ribbon", check_ribbon(&rb)?);
    e.ribbon = Some(rb);
    Ok((e, r))
}
