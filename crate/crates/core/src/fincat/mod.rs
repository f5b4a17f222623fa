//! Finite posets and finite categories, the shape constructions built from
//! them, and decidable structural predicates.

mod category;
mod poset;
pub mod shapes;
pub mod squares;

pub use category::{
    comma, mapping_cylinder, pullback, slice, slice_objects, CategoryProps, CellDirection, CommaData, Cylinder,
    CylinderData, FibrationStatus, FinCategory, FunctorData, FunctorProps, Morphism, NatTransData,
    SquareData,
};
pub use poset::{AdjointSide, FinPoset, MonotoneMap, Side, SieveStatus};
pub use shapes::{named_shape, NamedShape};

use crate::error::{Error, Result};

/// Mapping cylinder of an order embedding, as posets.
#[derive(Clone, Debug)]
pub struct PosetCylinder {
    pub poset: FinPoset,
    pub i: MonotoneMap,
    pub s: MonotoneMap,
    pub q: MonotoneMap,
}

/// Poset form of [`mapping_cylinder`]: the full subposet of `K × [1]` on
/// `(u(j), 1)` and `(k, 0)` for `Cyl`, with the ends swapped for `CylPrime`.
pub fn poset_cylinder(u: &MonotoneMap, which: Cylinder) -> Result<PosetCylinder> {
    if !(u.is_injective() && u.is_fully_faithful()) {
        return Err(Error::InvalidCategory("mapping cylinder needs an order embedding".into()));
    }
    let k = u.target();
    let prod = k.product(&FinPoset::chain(1));
    let (end_j, end_k) = match which {
        Cylinder::Cyl => (1, 0),
        Cylinder::CylPrime => (0, 1),
    };
    let nj = u.source().len();
    let mut elems: Vec<usize> = u.as_slice().iter().map(|&a| a * 2 + end_j).collect();
    elems.extend((0..k.len()).map(|a| a * 2 + end_k));
    let (poset, incl) = prod.subposet(&elems);
    let i = MonotoneMap::new(u.source().clone(), poset.clone(), (0..nj).collect())?;
    let s = MonotoneMap::new(k.clone(), poset.clone(), (nj..nj + k.len()).collect())?;
    let q = MonotoneMap::new(poset.clone(), k.clone(), (0..poset.len()).map(|x| incl.apply(x) / 2).collect())?;
    Ok(PosetCylinder { poset, i, s, q })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_cylinder_relations() {
        let zero = MonotoneMap::point(&FinPoset::chain(1), 0);
        let c = poset_cylinder(&zero, Cylinder::Cyl).unwrap();
        assert_eq!(c.poset.len(), 3);
        assert_eq!(c.i.then(&c.q).unwrap(), zero);
        assert_eq!(c.s.then(&c.q).unwrap(), MonotoneMap::identity(&FinPoset::chain(1)));
        assert!(c.s.sieve_status().is_sieve());
        let c = poset_cylinder(&zero, Cylinder::CylPrime).unwrap();
        assert!(c.s.sieve_status().is_cosieve());
    }
}
