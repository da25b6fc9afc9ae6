//! Named diagrams used by the demos, the acceptance suite and the tests.

use std::collections::BTreeMap;

use crate::coend::{hom_space, Diagram};
use crate::comod::{dual, tensor_v, Comodule, Side, ZetaSource};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};
use crate::hopf::builtin;

/// Which endomorphisms of `k²` to list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndGenerators {
    Identity,
    IdentityAndE11,
    All,
}

/// `k²` over the trivial Hopf algebra with chosen endomorphisms.
pub fn trivial_k2(field: Field, gens: EndGenerators) -> Result<Diagram> {
    let h = builtin("trivial", field)?;
    let mut d = Diagram::new(&h);
    d.add_object("M", Comodule::trivial(&h, 1, 2))?;
    let unit = |i: usize, j: usize| Matrix::from_fn(field, 2, 2, |r, c| if r == i && c == j { field.one() } else { field.zero() });
    match gens {
        EndGenerators::Identity => d.add_morphism("id", "M", "M", Matrix::identity(field, 2))?,
        EndGenerators::IdentityAndE11 => {
            d.add_morphism("id", "M", "M", Matrix::identity(field, 2))?;
            d.add_morphism("E11", "M", "M", unit(0, 0))?;
        }
        EndGenerators::All => {
            for i in 0..2 {
                for j in 0..2 {
                    d.add_morphism(&format!("E{}{}", i + 1, j + 1), "M", "M", unit(i, j))?;
                }
            }
        }
    }
    Ok(d)
}

/// Lists all Homs and fills the tensor and dual tables.
pub fn close(d: &mut Diagram, zeta: ZetaSource) -> Result<()> {
    d.add_full_homs()?;
    d.fill_tensor_table()?;
    d.fill_dual_table()?;
    d.zeta_source = Some(zeta);
    Ok(())
}

/// `{I, k², (k²)^∨}` over the trivial Hopf algebra, rigid and monoidal.
pub fn trivial_rigid(field: Field) -> Result<Diagram> {
    let h = builtin("trivial", field)?;
    let mut d = Diagram::new(&h);
    d.add_unit("I")?;
    let m = Comodule::trivial(&h, 1, 2);
    d.add_object("M^∨", dual(&m, Side::Right)?)?;
    d.add_object("M", m)?;
    close(&mut d, ZetaSource::RForm)?;
    Ok(d)
}

/// `{I, V_odd}` over `kZ2` with the sign r-form.
pub fn kz2(field: Field) -> Result<Diagram> {
    let h = builtin("kZ2", field)?;
    let mut d = Diagram::new(&h);
    d.add_unit("I")?;
    d.add_object("V", Comodule::grouplike(&h, 1)?)?;
    close(&mut d, ZetaSource::RForm)?;
    Ok(d)
}

/// Twists on the `kZ2` fixture: `θ_I = 1`, `θ_V = v`.
pub fn kz2_twists(field: Field, v: i64) -> BTreeMap<String, Matrix> {
    BTreeMap::from([
        ("I".to_string(), Matrix::identity(field, 1)),
        ("V".to_string(), Matrix::from_i64(field, &[&[v]])),
    ])
}

/// The 2-dimensional indecomposable Sweedler comodule `a ↦ 1 ⊗ a`,
/// `b ↦ x ⊗ a + g ⊗ b`.
pub fn sweedler_two(field: Field) -> Result<Comodule> {
    let h = builtin("sweedler4", field)?;
    let mut c = Matrix::zeros(field, 8, 2);
    c.set(0, 0, field.one());
    c.set(4, 1, field.one());
    c.set(3, 1, field.one());
    Comodule::new(h, 1, c)
}

/// `{I, G, X, G ⊗ X}` over Sweedler's algebra: the simple and projective
/// comodules, closed under tensor products and duals up to isomorphism.
pub fn sweedler(field: Field) -> Result<Diagram> {
    let h = builtin("sweedler4", field)?;
    let mut d = Diagram::new(&h);
    d.add_unit("I")?;
    let g = Comodule::grouplike(&h, 1)?;
    let x = sweedler_two(field)?;
    d.add_object("G", g.clone())?;
    d.add_object("X", x.clone())?;
    d.add_object("GX", tensor_v(&g, &x)?)?;
    close(&mut d, ZetaSource::RForm)?;
    Ok(d)
}

/// Fixture lookup by name.
pub fn by_name(name: &str, field: Field) -> Result<Diagram> {
    match name {
        "trivial-comatrix" => trivial_k2(field, EndGenerators::Identity),
        "trivial-k2-e11" => trivial_k2(field, EndGenerators::IdentityAndE11),
        "trivial-k2-end" => trivial_k2(field, EndGenerators::All),
        "trivial-rigid" => trivial_rigid(field),
        "kZ2" => kz2(field),
        "sweedler4" => sweedler(field),
        _ => Err(Error::Invalid(format!("unknown fixture `{name}`"))),
    }
}

/// Number of listed Hom generators, by object pair; used in tests.
pub fn hom_dims(d: &Diagram) -> Result<Vec<(String, String, usize)>> {
    let mut out = Vec::new();
    for (nx, x) in &d.objects {
        for (ny, y) in &d.objects {
            out.push((nx.clone(), ny.clone(), hom_space(x, y)?.len()));
        }
    }
    Ok(out)
}
