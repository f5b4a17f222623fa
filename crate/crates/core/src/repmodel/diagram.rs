use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::fincat::{FinCategory, FunctorData, NatTransData};

/// A functor from a finite category to finite-dimensional vector spaces.
///
/// `maps[f]` is the matrix of the morphism `f`, of shape
/// `dims[target(f)] × dims[source(f)]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VecDiagram<F: Field> {
    shape: Arc<FinCategory>,
    dims: Vec<usize>,
    maps: Vec<Matrix<F>>,
}

impl<F: Field> VecDiagram<F> {
    /// Checks matrix shapes, identities and functoriality.
    pub fn new(shape: Arc<FinCategory>, dims: Vec<usize>, maps: Vec<Matrix<F>>) -> Result<Self> {
        if dims.len() != shape.object_count() || maps.len() != shape.morphism_count() {
            return Err(Error::ShapeMismatch("diagram data does not match its shape".into()));
        }
        for (f, m) in maps.iter().enumerate() {
            if m.shape() != (dims[shape.tgt(f)], dims[shape.src(f)]) {
                return Err(Error::ShapeMismatch(format!("matrix of {} has wrong shape", shape.morphism(f).name)));
            }
        }
        for a in 0..shape.object_count() {
            if maps[shape.identity(a)] != Matrix::identity(dims[a]) {
                return Err(Error::Invariant(format!("identity of {} is not sent to an identity", shape.object(a))));
            }
        }
        for f in 0..shape.morphism_count() {
            for g in shape.hom_from(shape.tgt(f)) {
                if maps[shape.comp(g, f)] != maps[g].mul(&maps[f]) {
                    return Err(Error::Invariant(format!(
                        "functoriality fails for {} after {}",
                        shape.morphism(g).name,
                        shape.morphism(f).name
                    )));
                }
            }
        }
        Ok(VecDiagram { shape, dims, maps })
    }

    /// Fills in every morphism from matrices on a generating set by composing,
    /// and checks that all ways of composing agree.
    pub fn from_generators(
        shape: Arc<FinCategory>,
        dims: Vec<usize>,
        generators: &[(usize, Matrix<F>)],
    ) -> Result<Self> {
        if dims.len() != shape.object_count() {
            return Err(Error::ShapeMismatch("one dimension per object is required".into()));
        }
        let m = shape.morphism_count();
        let mut known: Vec<Option<Matrix<F>>> = vec![None; m];
        for a in 0..shape.object_count() {
            known[shape.identity(a)] = Some(Matrix::identity(dims[a]));
        }
        for f in 0..m {
            let (a, b) = (shape.src(f), shape.tgt(f));
            if dims[a] == 0 || dims[b] == 0 {
                known[f] = Some(Matrix::zeros(dims[b], dims[a]));
            }
        }
        for (f, mat) in generators {
            if mat.shape() != (dims[shape.tgt(*f)], dims[shape.src(*f)]) {
                return Err(Error::ShapeMismatch(format!("matrix of {} has wrong shape", shape.morphism(*f).name)));
            }
            if let Some(prev) = &known[*f] {
                if prev != mat {
                    return Err(Error::Invariant(format!("{} given inconsistently", shape.morphism(*f).name)));
                }
            }
            known[*f] = Some(mat.clone());
        }
        loop {
            let mut changed = false;
            for f in 0..m {
                let Some(mf) = known[f].clone() else { continue };
                for g in shape.hom_from(shape.tgt(f)) {
                    let Some(mg) = &known[g] else { continue };
                    let h = shape.comp(g, f);
                    if known[h].is_none() {
                        known[h] = Some(mg.mul(&mf));
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut maps = Vec::with_capacity(m);
        for (f, k) in known.into_iter().enumerate() {
            maps.push(k.ok_or_else(|| {
                Error::ShapeMismatch(format!("{} is not generated by the given maps", shape.morphism(f).name))
            })?);
        }
        Self::new(shape, dims, maps)
    }

    /// The same space on every object, identities on every morphism.
    pub fn constant(shape: Arc<FinCategory>, dim: usize) -> Self {
        let dims = vec![dim; shape.object_count()];
        let maps = vec![Matrix::identity(dim); shape.morphism_count()];
        VecDiagram { shape, dims, maps }
    }

    pub fn zero(shape: Arc<FinCategory>) -> Self {
        Self::constant(shape, 0)
    }

    pub fn shape(&self) -> &Arc<FinCategory> {
        &self.shape
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, a: usize) -> usize {
        self.dims[a]
    }

    pub fn map(&self, f: usize) -> &Matrix<F> {
        &self.maps[f]
    }

    pub fn maps(&self) -> &[Matrix<F>] {
        &self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Restriction `u* X`.
    pub fn restrict(&self, u: &FunctorData) -> Result<VecDiagram<F>> {
        if **u.target() != *self.shape {
            return Err(Error::ShapeMismatch("restriction along a functor into another shape".into()));
        }
        let j = u.source();
        Ok(VecDiagram {
            shape: j.clone(),
            dims: (0..j.object_count()).map(|a| self.dims[u.obj(a)]).collect(),
            maps: (0..j.morphism_count()).map(|f| self.maps[u.mor(f)].clone()).collect(),
        })
    }

    /// The morphism `X(α): u* X → v* X` for `α: u ⇒ v`.
    pub fn whisker(&self, alpha: &NatTransData) -> Result<DiagramMorphism<F>> {
        let src = self.restrict(alpha.source())?;
        let tgt = self.restrict(alpha.target())?;
        let comps = alpha.components().iter().map(|&c| self.maps[c].clone()).collect();
        DiagramMorphism::new(src, tgt, comps)
    }
}

/// Natural transformation between diagrams on one shape.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagramMorphism<F: Field> {
    source: VecDiagram<F>,
    target: VecDiagram<F>,
    components: Vec<Matrix<F>>,
}

impl<F: Field> DiagramMorphism<F> {
    pub fn new(source: VecDiagram<F>, target: VecDiagram<F>, components: Vec<Matrix<F>>) -> Result<Self> {
        if source.shape != target.shape {
            return Err(Error::ShapeMismatch("morphism between diagrams on different shapes".into()));
        }
        let shape = &source.shape;
        if components.len() != shape.object_count() {
            return Err(Error::ShapeMismatch("one component per object is required".into()));
        }
        for (a, c) in components.iter().enumerate() {
            if c.shape() != (target.dims[a], source.dims[a]) {
                return Err(Error::ShapeMismatch(format!("component at {} has wrong shape", shape.object(a))));
            }
        }
        for f in 0..shape.morphism_count() {
            let (a, b) = (shape.src(f), shape.tgt(f));
            if target.maps[f].mul(&components[a]) != components[b].mul(&source.maps[f]) {
                return Err(Error::Invariant(format!("naturality fails at {}", shape.morphism(f).name)));
            }
        }
        Ok(DiagramMorphism { source, target, components })
    }

    pub fn identity(x: &VecDiagram<F>) -> Self {
        let components = x.dims.iter().map(|&d| Matrix::identity(d)).collect();
        DiagramMorphism { source: x.clone(), target: x.clone(), components }
    }

    pub fn source(&self) -> &VecDiagram<F> {
        &self.source
    }

    pub fn target(&self) -> &VecDiagram<F> {
        &self.target
    }

    pub fn component(&self, a: usize) -> &Matrix<F> {
        &self.components[a]
    }

    pub fn components(&self) -> &[Matrix<F>] {
        &self.components
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &DiagramMorphism<F>) -> Result<DiagramMorphism<F>> {
        if self.target != other.source {
            return Err(Error::ShapeMismatch("composition of non-composable diagram morphisms".into()));
        }
        let components = self.components.iter().zip(&other.components).map(|(a, b)| b.mul(a)).collect();
        Ok(DiagramMorphism { source: self.source.clone(), target: other.target.clone(), components })
    }

    pub fn restrict(&self, u: &FunctorData) -> Result<DiagramMorphism<F>> {
        let source = self.source.restrict(u)?;
        let target = self.target.restrict(u)?;
        let components = (0..u.source().object_count()).map(|a| self.components[u.obj(a)].clone()).collect();
        Ok(DiagramMorphism { source, target, components })
    }

    /// (Der2): an isomorphism exactly when every component is invertible.
    pub fn is_iso(&self) -> bool {
        self.components.iter().all(Matrix::is_iso)
    }

    /// First component that is not invertible.
    pub fn non_iso_component(&self) -> Option<usize> {
        self.components.iter().position(|c| !c.is_iso())
    }
}

/// `J1 ⊔ J2` with its two inclusions.
pub fn coproduct_inclusions(
    j1: &Arc<FinCategory>,
    j2: &Arc<FinCategory>,
) -> Result<(Arc<FinCategory>, FunctorData, FunctorData)> {
    let sum = Arc::new(j1.coproduct(j2)?);
    let (n1, m1) = (j1.object_count(), j1.morphism_count());
    let i1 = FunctorData::new(j1.clone(), sum.clone(), (0..n1).collect(), (0..m1).collect())?;
    let i2 = FunctorData::new(
        j2.clone(),
        sum.clone(),
        (0..j2.object_count()).map(|a| a + n1).collect(),
        (0..j2.morphism_count()).map(|f| f + m1).collect(),
    )?;
    Ok((sum, i1, i2))
}

impl<F: Field> VecDiagram<F> {
    /// The diagram on `J1 ⊔ J2` restricting to `a` and `b`; inverse to the
    /// pair of restrictions along the two inclusions.
    pub fn coproduct(a: &VecDiagram<F>, b: &VecDiagram<F>) -> Result<VecDiagram<F>> {
        let (sum, _, _) = coproduct_inclusions(&a.shape, &b.shape)?;
        let dims = a.dims.iter().chain(&b.dims).copied().collect();
        let maps = a.maps.iter().chain(&b.maps).cloned().collect();
        VecDiagram::new(sum, dims, maps)
    }
}
