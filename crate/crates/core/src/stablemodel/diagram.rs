//! Strict diagrams of chain complexes over finite posets.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::fincat::{FinPoset, MonotoneMap};

use super::complex::{ChainMap, Complex, ZigStep, Zigzag};

/// A strict functor from a finite poset to chain complexes.
///
/// Maps are stored for every relation `a <= b` (identities included), and
/// composition along any path agrees exactly.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainDiagram<F: Field> {
    shape: FinPoset,
    values: Vec<Complex<F>>,
    /// Indexed `a * n + b`; present iff `a <= b`.
    maps: Vec<Option<ChainMap<F>>>,
}

impl<F: Field> fmt::Debug for ChainDiagram<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChainDiagram").field("shape", &self.shape).field("values", &self.values).finish()
    }
}

impl<F: Field> ChainDiagram<F> {
    /// Closes maps given on the cover relations under composition and
    /// verifies that every square of covers commutes.
    pub fn from_covers(
        shape: FinPoset,
        values: Vec<Complex<F>>,
        covers: impl IntoIterator<Item = ((usize, usize), ChainMap<F>)>,
    ) -> Result<Self> {
        let n = shape.len();
        check_values(&shape, &values)?;
        let mut given: Vec<Option<ChainMap<F>>> = vec![None; n * n];
        for ((a, b), f) in covers {
            if a >= n || b >= n || !shape.lt(a, b) {
                return Err(Error::Invariant(format!("{a}->{b} is not a relation of the shape")));
            }
            check_ends(&shape, &values, a, b, &f)?;
            given[a * n + b] = Some(f);
        }
        let covers = shape.covers();
        for &(a, b) in &covers {
            if given[a * n + b].is_none() {
                return Err(Error::Invariant(format!(
                    "missing map {}->{}",
                    shape.label(a),
                    shape.label(b)
                )));
            }
        }
        let mut maps: Vec<Option<ChainMap<F>>> = vec![None; n * n];
        for a in 0..n {
            maps[a * n + a] = Some(ChainMap::identity(&values[a]));
        }
        for &b in &shape.linear_extension() {
            for a in 0..n {
                if !shape.lt(a, b) {
                    continue;
                }
                let &(c, _) = covers.iter().find(|&&(c, d)| d == b && shape.leq(a, c)).expect("a cover below b");
                let first = maps[a * n + c].as_ref().expect("earlier in the linear extension");
                maps[a * n + b] = Some(first.then(given[c * n + b].as_ref().unwrap())?);
            }
        }
        let d = ChainDiagram { shape, values, maps };
        d.check_functorial()?;
        Ok(d)
    }

    /// Builds the diagram from a map for every strict relation and verifies
    /// functoriality.
    pub fn from_relations(
        shape: FinPoset,
        values: Vec<Complex<F>>,
        mut map: impl FnMut(usize, usize) -> Result<ChainMap<F>>,
    ) -> Result<Self> {
        check_values(&shape, &values)?;
        let n = shape.len();
        let mut maps: Vec<Option<ChainMap<F>>> = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    maps[a * n + a] = Some(ChainMap::identity(&values[a]));
                } else if shape.lt(a, b) {
                    let f = map(a, b)?;
                    check_ends(&shape, &values, a, b, &f)?;
                    maps[a * n + b] = Some(f);
                }
            }
        }
        let d = ChainDiagram { shape, values, maps };
        d.check_functorial()?;
        Ok(d)
    }

    /// Composition through covers suffices: if `M(a,c) = M(b,c) M(a,b)` for
    /// every cover `b ⋖ c` and `a <= b`, it holds for all `a <= b <= c` by
    /// induction on `c`.
    fn check_functorial(&self) -> Result<()> {
        let n = self.shape.len();
        for (b, c) in self.shape.covers() {
            for a in 0..n {
                if a == b || !self.shape.leq(a, b) {
                    continue;
                }
                let path = self.map(a, b).then(self.map(b, c))?;
                if path != *self.map(a, c) {
                    let s = &self.shape;
                    return Err(Error::NonCommuting([s.label(a).into(), s.label(b).into(), s.label(c).into()]));
                }
            }
        }
        Ok(())
    }

    /// The constant diagram, all maps identities.
    pub fn constant(shape: FinPoset, x: &Complex<F>) -> Self {
        let n = shape.len();
        let values = vec![x.clone(); n];
        let id = ChainMap::identity(x);
        let maps = (0..n * n).map(|i| shape.leq(i / n, i % n).then(|| id.clone())).collect();
        ChainDiagram { shape, values, maps }
    }

    /// The diagram on the one-point poset.
    pub fn point(x: &Complex<F>) -> Self {
        Self::constant(FinPoset::terminal(), x)
    }

    /// `f` as a diagram on `[1]`.
    pub fn arrow(f: &ChainMap<F>) -> Self {
        let shape = FinPoset::chain(1);
        let values = vec![f.source().clone(), f.target().clone()];
        let maps = vec![
            Some(ChainMap::identity(f.source())),
            Some(f.clone()),
            None,
            Some(ChainMap::identity(f.target())),
        ];
        ChainDiagram { shape, values, maps }
    }

    pub fn shape(&self) -> &FinPoset {
        &self.shape
    }

    pub fn value(&self, a: usize) -> &Complex<F> {
        &self.values[a]
    }

    pub fn values(&self) -> &[Complex<F>] {
        &self.values
    }

    /// The map for `a <= b`; panics otherwise.
    pub fn map(&self, a: usize, b: usize) -> &ChainMap<F> {
        let n = self.shape.len();
        self.maps[a * n + b]
            .as_ref()
            .unwrap_or_else(|| panic!("{} is not below {}", self.shape.label(a), self.shape.label(b)))
    }

    /// Maps on the cover relations, which determine the diagram.
    pub fn cover_maps(&self) -> Vec<((usize, usize), &ChainMap<F>)> {
        self.shape.covers().into_iter().map(|(a, b)| ((a, b), self.map(a, b))).collect()
    }

    /// `u* X`, the restriction along `u: J → shape`.
    pub fn restrict(&self, u: &MonotoneMap) -> Result<ChainDiagram<F>> {
        if *u.target() != self.shape {
            return Err(Error::ShapeMismatch("restriction along a map into another shape".into()));
        }
        let j = u.source();
        let n = j.len();
        let values = (0..n).map(|a| self.values[u.apply(a)].clone()).collect();
        let maps = (0..n * n)
            .map(|i| j.leq(i / n, i % n).then(|| self.map(u.apply(i / n), u.apply(i % n)).clone()))
            .collect();
        Ok(ChainDiagram { shape: j.clone(), values, maps })
    }

    /// True iff every value is the zero complex.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|c| c.is_zero())
    }
}

fn check_values<F: Field>(shape: &FinPoset, values: &[Complex<F>]) -> Result<()> {
    if values.len() != shape.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} complexes for a shape with {} elements",
            values.len(),
            shape.len()
        )));
    }
    Ok(())
}

fn check_ends<F: Field>(shape: &FinPoset, values: &[Complex<F>], a: usize, b: usize, f: &ChainMap<F>) -> Result<()> {
    if *f.source() != values[a] || *f.target() != values[b] {
        return Err(Error::ShapeMismatch(format!(
            "map {}->{} has the wrong source or target",
            shape.label(a),
            shape.label(b)
        )));
    }
    Ok(())
}

/// A natural transformation of chain diagrams on one shape.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainDiagramMorphism<F: Field> {
    source: ChainDiagram<F>,
    target: ChainDiagram<F>,
    components: Vec<ChainMap<F>>,
}

impl<F: Field> ChainDiagramMorphism<F> {
    /// Checks endpoints and naturality on every cover relation.
    pub fn new(source: ChainDiagram<F>, target: ChainDiagram<F>, components: Vec<ChainMap<F>>) -> Result<Self> {
        if source.shape != target.shape || components.len() != source.shape.len() {
            return Err(Error::ShapeMismatch("morphism between diagrams of different shapes".into()));
        }
        for (a, c) in components.iter().enumerate() {
            if c.source() != source.value(a) || c.target() != target.value(a) {
                return Err(Error::ShapeMismatch(format!("component at {} has wrong ends", source.shape.label(a))));
            }
        }
        for (a, b) in source.shape.covers() {
            let left = source.map(a, b).then(&components[b])?;
            let right = components[a].then(target.map(a, b))?;
            if left != right {
                return Err(Error::Invariant(format!(
                    "not natural at {}->{}",
                    source.shape.label(a),
                    source.shape.label(b)
                )));
            }
        }
        Ok(ChainDiagramMorphism { source, target, components })
    }

    pub fn identity(x: &ChainDiagram<F>) -> Self {
        let components = x.values.iter().map(ChainMap::identity).collect();
        ChainDiagramMorphism { source: x.clone(), target: x.clone(), components }
    }

    /// `f` as a morphism of one-point diagrams.
    pub fn point(f: &ChainMap<F>) -> Self {
        ChainDiagramMorphism {
            source: ChainDiagram::point(f.source()),
            target: ChainDiagram::point(f.target()),
            components: vec![f.clone()],
        }
    }

    pub fn source(&self) -> &ChainDiagram<F> {
        &self.source
    }

    pub fn target(&self) -> &ChainDiagram<F> {
        &self.target
    }

    pub fn component(&self, a: usize) -> &ChainMap<F> {
        &self.components[a]
    }

    pub fn components(&self) -> &[ChainMap<F>] {
        &self.components
    }

    pub fn restrict(&self, u: &MonotoneMap) -> Result<Self> {
        let components = (0..u.source().len()).map(|a| self.components[u.apply(a)].clone()).collect();
        Ok(ChainDiagramMorphism {
            source: self.source.restrict(u)?,
            target: self.target.restrict(u)?,
            components,
        })
    }

    /// First element whose component is not a quasi-isomorphism.
    pub fn non_quasi_iso_component(&self) -> Option<usize> {
        self.components.iter().position(|c| !c.is_quasi_iso())
    }
}

/// A zigzag of strict morphisms of diagrams on one shape, representing a
/// morphism of the homotopy category when its backward legs are levelwise
/// quasi-isomorphisms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagramZigzag<F: Field> {
    steps: Vec<ZigStep<ChainDiagramMorphism<F>>>,
}

impl<F: Field> DiagramZigzag<F> {
    /// Consecutive legs must share their ends.
    pub fn new(steps: Vec<ZigStep<ChainDiagramMorphism<F>>>) -> Self {
        assert!(!steps.is_empty(), "a zigzag has at least one leg");
        let ends = |s: &ZigStep<ChainDiagramMorphism<F>>| match s {
            ZigStep::Forward(m) => (m.source().clone(), m.target().clone()),
            ZigStep::Backward(m) => (m.target().clone(), m.source().clone()),
        };
        for w in steps.windows(2) {
            assert!(ends(&w[0]).1 == ends(&w[1]).0, "legs of a zigzag must compose");
        }
        DiagramZigzag { steps }
    }

    pub fn steps(&self) -> &[ZigStep<ChainDiagramMorphism<F>>] {
        &self.steps
    }

    pub fn shape(&self) -> &FinPoset {
        match &self.steps[0] {
            ZigStep::Forward(m) | ZigStep::Backward(m) => m.source().shape(),
        }
    }

    /// The zigzag of components at `a`.
    pub fn component(&self, a: usize) -> Zigzag<F> {
        let steps = self
            .steps
            .iter()
            .map(|s| match s {
                ZigStep::Forward(m) => ZigStep::Forward(m.component(a).clone()),
                ZigStep::Backward(m) => ZigStep::Backward(m.component(a).clone()),
            })
            .collect();
        Zigzag::from_steps(steps)
    }

    /// First element at which some leg is not a quasi-isomorphism.
    pub fn non_quasi_iso_component(&self) -> Option<usize> {
        (0..self.shape().len()).find(|&a| !self.component(a).is_quasi_iso())
    }
}
