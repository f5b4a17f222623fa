use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::poset::{FinPoset, MonotoneMap, SieveStatus, Side};

/// A morphism of a finite category, identified by its index in the table.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Morphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// Finite category given by its full multiplication table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    /// `compose[g * m + f] = g ∘ f` for composable `f`, `g`.
    compose: Vec<Option<usize>>,
    /// Morphisms `a → b` at `a * objects + b`.
    hom: Vec<Vec<usize>>,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinCategory{{objects: {:?}, morphisms: {}}}", self.objects, self.morphisms.len())
    }
}

impl FinCategory {
    /// Validates identities, the table's domain, and associativity.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: Vec<Option<usize>>,
    ) -> Result<Self> {
        let bad = |s: String| Err(Error::InvalidCategory(s));
        let (n, m) = (objects.len(), morphisms.len());
        let mut seen = HashMap::new();
        for o in &objects {
            if seen.insert(o.clone(), ()).is_some() {
                return Err(Error::DuplicateLabel(o.clone()));
            }
        }
        if identities.len() != n || compose.len() != m * m {
            return bad("table sizes do not match".into());
        }
        if morphisms.iter().any(|f| f.source >= n || f.target >= n) {
            return bad("morphism endpoint out of range".into());
        }
        for (a, &i) in identities.iter().enumerate() {
            if i >= m || morphisms[i].source != a || morphisms[i].target != a {
                return bad(format!("identity of {} is not an endomorphism of it", objects[a]));
            }
        }
        for g in 0..m {
            for f in 0..m {
                let composable = morphisms[f].target == morphisms[g].source;
                match (composable, compose[g * m + f]) {
                    (true, None) => return bad(format!("missing composite {}∘{}", morphisms[g].name, morphisms[f].name)),
                    (false, Some(_)) => return bad(format!("composite of non-composable {}, {}", morphisms[g].name, morphisms[f].name)),
                    (true, Some(h)) => {
                        if h >= m || morphisms[h].source != morphisms[f].source || morphisms[h].target != morphisms[g].target {
                            return bad(format!("composite {}∘{} has wrong endpoints", morphisms[g].name, morphisms[f].name));
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        let mut hom = vec![Vec::new(); n * n];
        for (i, f) in morphisms.iter().enumerate() {
            hom[f.source * n + f.target].push(i);
        }
        let c = FinCategory { objects, morphisms, identities, compose, hom };
        for f in 0..m {
            let (s, t) = (c.morphisms[f].source, c.morphisms[f].target);
            if c.comp(f, c.identities[s]) != f || c.comp(c.identities[t], f) != f {
                return bad(format!("identities are not neutral for {}", c.morphisms[f].name));
            }
        }
        for f in 0..m {
            for g in c.hom_from(c.morphisms[f].target) {
                for h in c.hom_from(c.morphisms[g].target) {
                    if c.comp(h, c.comp(g, f)) != c.comp(c.comp(h, g), f) {
                        return bad("composition is not associative".into());
                    }
                }
            }
        }
        Ok(c)
    }

    /// The poset viewed as a category: one morphism `a->b` per relation.
    pub fn from_poset(p: &FinPoset) -> Self {
        let n = p.len();
        let mut morphisms = Vec::new();
        let mut idx = vec![usize::MAX; n * n];
        for a in 0..n {
            for b in 0..n {
                if p.leq(a, b) {
                    idx[a * n + b] = morphisms.len();
                    morphisms.push(Morphism { name: format!("{}->{}", p.label(a), p.label(b)), source: a, target: b });
                }
            }
        }
        let m = morphisms.len();
        let mut compose = vec![None; m * m];
        for (f, mf) in morphisms.iter().enumerate() {
            for (g, mg) in morphisms.iter().enumerate() {
                if mf.target == mg.source {
                    compose[g * m + f] = Some(idx[mf.source * n + mg.target]);
                }
            }
        }
        let identities = (0..n).map(|a| idx[a * n + a]).collect();
        FinCategory::new(p.labels().to_vec(), morphisms, identities, compose).expect("poset category")
    }

    pub fn terminal() -> Self {
        Self::from_poset(&FinPoset::terminal())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object(&self, a: usize) -> &str {
        &self.objects[a]
    }

    pub fn object_index(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == label)
    }

    pub fn morphism(&self, f: usize) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|f| f.name == name)
    }

    pub fn src(&self, f: usize) -> usize {
        self.morphisms[f].source
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.morphisms[f].target
    }

    pub fn identity(&self, a: usize) -> usize {
        self.identities[a]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.morphisms[f].source] == f
    }

    /// `g ∘ f`; panics if not composable.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.compose[g * self.morphisms.len() + f].expect("composable morphisms")
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.hom[a * self.objects.len() + b]
    }

    pub fn hom_from(&self, a: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&f| self.morphisms[f].source == a).collect()
    }

    /// Non-identity morphisms, the generators used by serialized diagrams.
    pub fn non_identities(&self) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&f| !self.is_identity(f)).collect()
    }

    /// Whether this category is thin with antisymmetric hom relation.
    pub fn as_poset(&self) -> Option<FinPoset> {
        let n = self.objects.len();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                match self.hom(a, b).len() {
                    0 => {}
                    1 => leq[a * n + b] = true,
                    _ => return None,
                }
            }
        }
        FinPoset::from_relation(self.objects.clone(), leq).ok()
    }

    pub fn product(&self, other: &FinCategory) -> FinCategory {
        let (n2, m2) = (other.objects.len(), other.morphisms.len());
        let mut objects = Vec::new();
        for a in &self.objects {
            for b in &other.objects {
                objects.push(format!("{a},{b}"));
            }
        }
        let mut morphisms = Vec::new();
        for f in &self.morphisms {
            for g in &other.morphisms {
                morphisms.push(Morphism {
                    name: format!("{},{}", f.name, g.name),
                    source: f.source * n2 + g.source,
                    target: f.target * n2 + g.target,
                });
            }
        }
        let m = morphisms.len();
        let mut compose = vec![None; m * m];
        for x in 0..m {
            for y in 0..m {
                let (f1, g1) = (x / m2, x % m2);
                let (f2, g2) = (y / m2, y % m2);
                if morphisms[x].target == morphisms[y].source {
                    compose[y * m + x] = Some(self.comp(f2, f1) * m2 + other.comp(g2, g1));
                }
            }
        }
        let identities = (0..objects.len())
            .map(|o| self.identities[o / n2] * m2 + other.identities[o % n2])
            .collect();
        FinCategory::new(objects, morphisms, identities, compose).expect("product category")
    }

    pub fn coproduct(&self, other: &FinCategory) -> Result<FinCategory> {
        let (n1, m1) = (self.objects.len(), self.morphisms.len());
        let objects: Vec<String> = self.objects.iter().chain(&other.objects).cloned().collect();
        let mut morphisms = self.morphisms.clone();
        morphisms.extend(other.morphisms.iter().map(|f| Morphism {
            name: f.name.clone(),
            source: f.source + n1,
            target: f.target + n1,
        }));
        let m = morphisms.len();
        let mut compose = vec![None; m * m];
        for f in 0..m {
            for g in 0..m {
                if morphisms[f].target != morphisms[g].source {
                    continue;
                }
                compose[g * m + f] = Some(if f < m1 {
                    self.comp(g, f)
                } else {
                    other.comp(g - m1, f - m1) + m1
                });
            }
        }
        let identities = self
            .identities
            .iter()
            .copied()
            .chain(other.identities.iter().map(|&i| i + m1))
            .collect();
        FinCategory::new(objects, morphisms, identities, compose)
    }

    pub fn opposite(&self) -> FinCategory {
        let m = self.morphisms.len();
        let morphisms = self
            .morphisms
            .iter()
            .map(|f| Morphism { name: f.name.clone(), source: f.target, target: f.source })
            .collect();
        let mut compose = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                // g ∘op f = f ∘ g
                if let Some(h) = self.compose[f * m + g] {
                    compose[g * m + f] = Some(h);
                }
            }
        }
        FinCategory::new(self.objects.clone(), morphisms, self.identities.clone(), compose)
            .expect("opposite category")
    }

    /// Full subcategory on `objs`, in the given order, with its inclusion.
    pub fn full_subcategory(self: &Arc<Self>, objs: &[usize]) -> (Arc<FinCategory>, FunctorData) {
        let n = self.objects.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &o) in objs.iter().enumerate() {
            pos[o] = i;
        }
        let kept: Vec<usize> = (0..self.morphisms.len())
            .filter(|&f| pos[self.src(f)] != usize::MAX && pos[self.tgt(f)] != usize::MAX)
            .collect();
        let mut mpos = vec![usize::MAX; self.morphisms.len()];
        for (i, &f) in kept.iter().enumerate() {
            mpos[f] = i;
        }
        let morphisms = kept
            .iter()
            .map(|&f| Morphism {
                name: self.morphisms[f].name.clone(),
                source: pos[self.src(f)],
                target: pos[self.tgt(f)],
            })
            .collect();
        let k = kept.len();
        let mut compose = vec![None; k * k];
        for (i, &f) in kept.iter().enumerate() {
            for (j, &g) in kept.iter().enumerate() {
                if self.tgt(f) == self.src(g) {
                    compose[j * k + i] = Some(mpos[self.comp(g, f)]);
                }
            }
        }
        let identities = objs.iter().map(|&o| mpos[self.identities[o]]).collect();
        let sub = Arc::new(
            FinCategory::new(objs.iter().map(|&o| self.objects[o].clone()).collect(), morphisms, identities, compose)
                .expect("full subcategory"),
        );
        let incl = FunctorData::new(sub.clone(), self.clone(), objs.to_vec(), kept).expect("inclusion functor");
        (sub, incl)
    }

    /// Initial and terminal objects, if any (first by index).
    pub fn props(&self) -> CategoryProps {
        let n = self.objects.len();
        let initial = (0..n).find(|&a| (0..n).all(|b| self.hom(a, b).len() == 1));
        let terminal = (0..n).find(|&t| (0..n).all(|b| self.hom(b, t).len() == 1));
        CategoryProps { initial, terminal }
    }
}

/// Initial/terminal witnesses of a finite category.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CategoryProps {
    pub initial: Option<usize>,
    pub terminal: Option<usize>,
}

/// Functor between finite categories.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FunctorData {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    object_map: Vec<usize>,
    morphism_map: Vec<usize>,
}

impl fmt::Debug for FunctorData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = (0..self.source.object_count())
            .map(|j| format!("{}↦{}", self.source.object(j), self.target.object(self.object_map[j])))
            .collect();
        write!(f, "FunctorData[{}]", m.join(", "))
    }
}

impl FunctorData {
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        object_map: Vec<usize>,
        morphism_map: Vec<usize>,
    ) -> Result<Self> {
        let bad = |s: String| Err(Error::InvalidCategory(s));
        if object_map.len() != source.object_count() || morphism_map.len() != source.morphism_count() {
            return bad("functor map sizes do not match the source".into());
        }
        if object_map.iter().any(|&o| o >= target.object_count())
            || morphism_map.iter().any(|&f| f >= target.morphism_count())
        {
            return bad("functor image out of range".into());
        }
        for f in 0..source.morphism_count() {
            let g = morphism_map[f];
            if target.src(g) != object_map[source.src(f)] || target.tgt(g) != object_map[source.tgt(f)] {
                return bad(format!("functor does not preserve endpoints of {}", source.morphism(f).name));
            }
        }
        for a in 0..source.object_count() {
            if morphism_map[source.identity(a)] != target.identity(object_map[a]) {
                return bad(format!("functor does not preserve the identity of {}", source.object(a)));
            }
        }
        for f in 0..source.morphism_count() {
            for g in source.hom_from(source.tgt(f)) {
                if morphism_map[source.comp(g, f)] != target.comp(morphism_map[g], morphism_map[f]) {
                    return bad("functor does not preserve composition".into());
                }
            }
        }
        Ok(FunctorData { source, target, object_map, morphism_map })
    }

    /// The functor of posets-as-categories induced by a monotone map.
    pub fn from_monotone(u: &MonotoneMap) -> Self {
        let source = Arc::new(FinCategory::from_poset(u.source()));
        let target = Arc::new(FinCategory::from_poset(u.target()));
        Self::from_monotone_on(u, source, target)
    }

    /// As `from_monotone` with the poset categories supplied.
    pub fn from_monotone_on(u: &MonotoneMap, source: Arc<FinCategory>, target: Arc<FinCategory>) -> Self {
        let morphism_map = (0..source.morphism_count())
            .map(|f| {
                let (a, b) = (u.apply(source.src(f)), u.apply(source.tgt(f)));
                target.hom(a, b)[0]
            })
            .collect();
        FunctorData::new(source, target, u.as_slice().to_vec(), morphism_map).expect("monotone map functor")
    }

    pub fn identity(c: &Arc<FinCategory>) -> Self {
        FunctorData {
            source: c.clone(),
            target: c.clone(),
            object_map: (0..c.object_count()).collect(),
            morphism_map: (0..c.morphism_count()).collect(),
        }
    }

    /// The unique functor to the terminal category.
    pub fn to_terminal(c: &Arc<FinCategory>) -> Self {
        FunctorData {
            source: c.clone(),
            target: Arc::new(FinCategory::terminal()),
            object_map: vec![0; c.object_count()],
            morphism_map: vec![0; c.morphism_count()],
        }
    }

    /// The object `k` as a functor from the terminal category.
    pub fn point(c: &Arc<FinCategory>, k: usize) -> Self {
        FunctorData {
            source: Arc::new(FinCategory::terminal()),
            target: c.clone(),
            object_map: vec![k],
            morphism_map: vec![c.identity(k)],
        }
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn obj(&self, j: usize) -> usize {
        self.object_map[j]
    }

    pub fn mor(&self, f: usize) -> usize {
        self.morphism_map[f]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn morphism_map(&self) -> &[usize] {
        &self.morphism_map
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FunctorData) -> Result<FunctorData> {
        if *self.target != *other.source {
            return Err(Error::ShapeMismatch("composition of functors with unequal middle category".into()));
        }
        Ok(FunctorData {
            source: self.source.clone(),
            target: other.target.clone(),
            object_map: self.object_map.iter().map(|&o| other.object_map[o]).collect(),
            morphism_map: self.morphism_map.iter().map(|&f| other.morphism_map[f]).collect(),
        })
    }

    /// `self × other`.
    pub fn product(&self, other: &FunctorData) -> FunctorData {
        let source = Arc::new(self.source.product(&other.source));
        let target = Arc::new(self.target.product(&other.target));
        let (on, om) = (other.source.object_count(), other.source.morphism_count());
        let (tn, tm) = (other.target.object_count(), other.target.morphism_count());
        let object_map = (0..source.object_count())
            .map(|x| self.object_map[x / on] * tn + other.object_map[x % on])
            .collect();
        let morphism_map = (0..source.morphism_count())
            .map(|x| self.morphism_map[x / om] * tm + other.morphism_map[x % om])
            .collect();
        FunctorData { source, target, object_map, morphism_map }
    }

    /// Exhaustive fullness and faithfulness and object injectivity.
    pub fn props(&self) -> FunctorProps {
        let (s, t) = (&self.source, &self.target);
        let n = s.object_count();
        let mut fully_faithful = true;
        for a in 0..n {
            for b in 0..n {
                let mut imgs: Vec<usize> = s.hom(a, b).iter().map(|&f| self.morphism_map[f]).collect();
                imgs.sort_unstable();
                imgs.dedup();
                let faithful = imgs.len() == s.hom(a, b).len();
                let full = imgs.len() == t.hom(self.object_map[a], self.object_map[b]).len();
                fully_faithful &= faithful && full;
            }
        }
        let mut seen = vec![false; t.object_count()];
        let injective_on_objects = self.object_map.iter().all(|&o| !std::mem::replace(&mut seen[o], true));
        FunctorProps { fully_faithful, injective_on_objects }
    }

    pub fn in_image(&self, k: usize) -> bool {
        self.object_map.contains(&k)
    }

    pub fn sieve_status(&self) -> SieveStatus {
        let p = self.props();
        if !(p.fully_faithful && p.injective_on_objects) {
            return SieveStatus::Neither;
        }
        let t = &self.target;
        let mut sieve = true;
        let mut cosieve = true;
        for k in 0..t.object_count() {
            if self.in_image(k) {
                continue;
            }
            for &img in &self.object_map {
                sieve &= t.hom(k, img).is_empty();
                cosieve &= t.hom(img, k).is_empty();
            }
        }
        SieveStatus::from_flags(sieve, cosieve)
    }

    /// Exhaustive search for (co)cartesian lifts.
    pub fn fibration_status(&self) -> FibrationStatus {
        let (s, t) = (&self.source, &self.target);
        let fibration = (0..s.object_count()).all(|j| {
            (0..t.morphism_count())
                .filter(|&f| t.tgt(f) == self.object_map[j])
                .all(|f| self.cartesian_lift(f, j).is_some())
        });
        let opfibration = (0..s.object_count()).all(|j| {
            (0..t.morphism_count())
                .filter(|&f| t.src(f) == self.object_map[j])
                .all(|f| self.cocartesian_lift(f, j).is_some())
        });
        let discrete_fibers = (0..s.morphism_count())
            .all(|g| s.is_identity(g) || !t.is_identity(self.morphism_map[g]));
        FibrationStatus { fibration, opfibration, discrete_fibers }
    }

    /// A cartesian `g: j' → j` over `f: k → u(j)`.
    pub fn cartesian_lift(&self, f: usize, j: usize) -> Option<usize> {
        let (s, t) = (&self.source, &self.target);
        (0..s.morphism_count())
            .filter(|&g| s.tgt(g) == j && self.morphism_map[g] == f)
            .find(|&g| {
                let jp = s.src(g);
                // Every h: j'' → j with u(h) = f ∘ m factors uniquely as g ∘ h' with u(h') = m.
                (0..s.morphism_count()).filter(|&h| s.tgt(h) == j).all(|h| {
                    let jpp = s.src(h);
                    t.hom(self.object_map[jpp], t.src(f))
                        .iter()
                        .filter(|&&m| t.comp(f, m) == self.morphism_map[h])
                        .all(|&m| {
                            s.hom(jpp, jp)
                                .iter()
                                .filter(|&&hp| self.morphism_map[hp] == m && s.comp(g, hp) == h)
                                .count()
                                == 1
                        })
                })
            })
    }

    /// A cocartesian `g: j → j'` over `f: u(j) → k`.
    pub fn cocartesian_lift(&self, f: usize, j: usize) -> Option<usize> {
        let (s, t) = (&self.source, &self.target);
        (0..s.morphism_count())
            .filter(|&g| s.src(g) == j && self.morphism_map[g] == f)
            .find(|&g| {
                let jp = s.tgt(g);
                (0..s.morphism_count()).filter(|&h| s.src(h) == j).all(|h| {
                    let jpp = s.tgt(h);
                    t.hom(t.tgt(f), self.object_map[jpp])
                        .iter()
                        .filter(|&&m| t.comp(m, f) == self.morphism_map[h])
                        .all(|&m| {
                            s.hom(jp, jpp)
                                .iter()
                                .filter(|&&hp| self.morphism_map[hp] == m && s.comp(hp, g) == h)
                                .count()
                                == 1
                        })
                })
            })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FunctorProps {
    pub fully_faithful: bool,
    pub injective_on_objects: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FibrationStatus {
    pub fibration: bool,
    pub opfibration: bool,
    pub discrete_fibers: bool,
}

/// Natural transformation between parallel functors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NatTransData {
    source: FunctorData,
    target: FunctorData,
    components: Vec<usize>,
}

impl NatTransData {
    pub fn new(source: FunctorData, target: FunctorData, components: Vec<usize>) -> Result<Self> {
        if *source.source != *target.source || *source.target != *target.target {
            return Err(Error::ShapeMismatch("natural transformation between non-parallel functors".into()));
        }
        let (j, k) = (&source.source, &source.target);
        if components.len() != j.object_count() {
            return Err(Error::ShapeMismatch("wrong number of components".into()));
        }
        for a in 0..j.object_count() {
            let c = components[a];
            if c >= k.morphism_count() || k.src(c) != source.obj(a) || k.tgt(c) != target.obj(a) {
                return Err(Error::InvalidCategory(format!("component at {} has wrong endpoints", j.object(a))));
            }
        }
        for f in 0..j.morphism_count() {
            let (a, b) = (j.src(f), j.tgt(f));
            if k.comp(target.mor(f), components[a]) != k.comp(components[b], source.mor(f)) {
                return Err(Error::InvalidCategory(format!("naturality fails at {}", j.morphism(f).name)));
            }
        }
        Ok(NatTransData { source, target, components })
    }

    pub fn identity(u: &FunctorData) -> Self {
        let components = (0..u.source.object_count()).map(|a| u.target.identity(u.obj(a))).collect();
        NatTransData { source: u.clone(), target: u.clone(), components }
    }

    /// The unique transformation between monotone maps with `u <= v` pointwise.
    pub fn between_monotone(u: &FunctorData, v: &FunctorData) -> Result<Self> {
        let k = &u.target;
        let mut comps = Vec::with_capacity(u.source.object_count());
        for a in 0..u.source.object_count() {
            match k.hom(u.obj(a), v.obj(a)) {
                [c] => comps.push(*c),
                _ => return Err(Error::NotAPoset("no unique component".into())),
            }
        }
        Self::new(u.clone(), v.clone(), comps)
    }

    pub fn source(&self) -> &FunctorData {
        &self.source
    }

    pub fn target(&self) -> &FunctorData {
        &self.target
    }

    pub fn component(&self, a: usize) -> usize {
        self.components[a]
    }

    pub fn components(&self) -> &[usize] {
        &self.components
    }
}

/// Orientation of the 2-cell in a square.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CellDirection {
    /// `u2 ∘ v ⇒ w ∘ u1`; this orientation has a left mate.
    TowardWU1,
    /// `w ∘ u1 ⇒ u2 ∘ v`; this orientation has a right mate.
    TowardU2V,
}

/// A square of functors
///
/// ```text
/// J1 --v--> J2
/// |u1       |u2
/// K1 --w--> K2
/// ```
///
/// filled by a 2-cell whose orientation is recorded in `direction`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SquareData {
    pub u1: FunctorData,
    pub u2: FunctorData,
    pub v: FunctorData,
    pub w: FunctorData,
    pub cell: NatTransData,
    pub direction: CellDirection,
}

impl SquareData {
    pub fn new(
        u1: FunctorData,
        u2: FunctorData,
        v: FunctorData,
        w: FunctorData,
        cell: NatTransData,
        direction: CellDirection,
    ) -> Result<Self> {
        let top = v.then(&u2)?;
        let bottom = u1.then(&w)?;
        let (from, to) = match direction {
            CellDirection::TowardWU1 => (&top, &bottom),
            CellDirection::TowardU2V => (&bottom, &top),
        };
        if cell.source != *from || cell.target != *to {
            return Err(Error::ShapeMismatch("cell endpoints do not match the square".into()));
        }
        Ok(SquareData { u1, u2, v, w, cell, direction })
    }

    /// A square that commutes on the nose, filled by the identity.
    pub fn commutative(
        u1: FunctorData,
        u2: FunctorData,
        v: FunctorData,
        w: FunctorData,
        direction: CellDirection,
    ) -> Result<Self> {
        let top = v.then(&u2)?;
        if top != u1.then(&w)? {
            return Err(Error::ShapeMismatch("square does not commute".into()));
        }
        let cell = NatTransData::identity(&top);
        Self::new(u1, u2, v, w, cell, direction)
    }

    /// Reflection across the diagonal: `v ↔ u1`, `w ↔ u2`. The cell keeps its
    /// components, and its orientation flips relative to the new legs.
    pub fn transpose(&self) -> SquareData {
        let direction = match self.direction {
            CellDirection::TowardWU1 => CellDirection::TowardU2V,
            CellDirection::TowardU2V => CellDirection::TowardWU1,
        };
        SquareData {
            u1: self.v.clone(),
            u2: self.w.clone(),
            v: self.u1.clone(),
            w: self.u2.clone(),
            cell: self.cell.clone(),
            direction,
        }
    }
}

/// Objects `(j, f)` of the slice of `u` at `k`, in the order used by [`slice`].
pub fn slice_objects(u: &FunctorData, k: usize, side: Side) -> Vec<(usize, usize)> {
    let (j, t) = (u.source(), u.target());
    let mut objs = Vec::new();
    for a in 0..j.object_count() {
        let arrows = match side {
            Side::Over => t.hom(u.obj(a), k),
            Side::Under => t.hom(k, u.obj(a)),
        };
        objs.extend(arrows.iter().map(|&f| (a, f)));
    }
    objs
}

/// Slice of `u` at `k`: objects `(j, f)` with `f: u(j) → k` (over) or
/// `f: k → u(j)` (under), with the forgetful projection.
pub fn slice(u: &FunctorData, k: usize, side: Side) -> Result<(Arc<FinCategory>, FunctorData)> {
    let (j, t) = (u.source(), u.target());
    if k >= t.object_count() {
        return Err(Error::ObjectNotInTarget(k.to_string()));
    }
    let objs = slice_objects(u, k, side);
    let labels: Vec<String> = objs
        .iter()
        .map(|&(a, f)| format!("({},{})", j.object(a), t.morphism(f).name))
        .collect();
    let mut morphisms = Vec::new();
    let mut lifted = Vec::new();
    for (x, &(a1, f1)) in objs.iter().enumerate() {
        for (y, &(a2, f2)) in objs.iter().enumerate() {
            for &g in j.hom(a1, a2) {
                let ok = match side {
                    Side::Over => t.comp(f2, u.mor(g)) == f1,
                    Side::Under => t.comp(u.mor(g), f1) == f2,
                };
                if ok {
                    morphisms.push(Morphism { name: format!("{}:{}", j.morphism(g).name, x), source: x, target: y });
                    lifted.push(g);
                }
            }
        }
    }
    finish_lifted_category(labels, morphisms, lifted, j, |x| objs[x].0)
}

/// Objects `(j1, j2, α: u1 j1 → u2 j2)` with the two projections and the
/// canonical cell `u1 ∘ pr1 ⇒ u2 ∘ pr2`.
pub fn comma(u1: &FunctorData, u2: &FunctorData) -> Result<CommaData> {
    if *u1.target() != *u2.target() {
        return Err(Error::TargetMismatch);
    }
    let (j1, j2, k) = (u1.source(), u2.source(), u1.target());
    let mut objs = Vec::new();
    for a in 0..j1.object_count() {
        for b in 0..j2.object_count() {
            for &al in k.hom(u1.obj(a), u2.obj(b)) {
                objs.push((a, b, al));
            }
        }
    }
    let labels = objs
        .iter()
        .map(|&(a, b, al)| format!("({},{},{})", j1.object(a), j2.object(b), k.morphism(al).name))
        .collect();
    let mut morphisms = Vec::new();
    let mut pairs = Vec::new();
    for (x, &(a1, b1, al1)) in objs.iter().enumerate() {
        for (y, &(a2, b2, al2)) in objs.iter().enumerate() {
            for &g1 in j1.hom(a1, a2) {
                for &g2 in j2.hom(b1, b2) {
                    if k.comp(u2.mor(g2), al1) == k.comp(al2, u1.mor(g1)) {
                        morphisms.push(Morphism {
                            name: format!("({},{})", j1.morphism(g1).name, j2.morphism(g2).name),
                            source: x,
                            target: y,
                        });
                        pairs.push((g1, g2));
                    }
                }
            }
        }
    }
    let m = morphisms.len();
    let index: HashMap<(usize, usize, usize, usize), usize> = morphisms
        .iter()
        .enumerate()
        .map(|(i, f)| ((f.source, f.target, pairs[i].0, pairs[i].1), i))
        .collect();
    let mut compose = vec![None; m * m];
    for f in 0..m {
        for g in 0..m {
            if morphisms[f].target == morphisms[g].source {
                let key = (
                    morphisms[f].source,
                    morphisms[g].target,
                    j1.comp(pairs[g].0, pairs[f].0),
                    j2.comp(pairs[g].1, pairs[f].1),
                );
                compose[g * m + f] = Some(index[&key]);
            }
        }
    }
    let identities = (0..objs.len())
        .map(|x| index[&(x, x, j1.identity(objs[x].0), j2.identity(objs[x].1))])
        .collect();
    let c = Arc::new(FinCategory::new(labels, morphisms, identities, compose)?);
    let pr1 = FunctorData::new(
        c.clone(),
        j1.clone(),
        objs.iter().map(|o| o.0).collect(),
        pairs.iter().map(|p| p.0).collect(),
    )?;
    let pr2 = FunctorData::new(
        c.clone(),
        j2.clone(),
        objs.iter().map(|o| o.1).collect(),
        pairs.iter().map(|p| p.1).collect(),
    )?;
    let cell = NatTransData::new(pr1.then(u1)?, pr2.then(u2)?, objs.iter().map(|o| o.2).collect())?;
    Ok(CommaData { category: c, pr1, pr2, cell })
}

/// Output of [`comma`].
#[derive(Clone, Debug)]
pub struct CommaData {
    pub category: Arc<FinCategory>,
    pub pr1: FunctorData,
    pub pr2: FunctorData,
    pub cell: NatTransData,
}

/// Strict pullback `K1 ×_{K2} J2` of `w: K1 → K2` and `u2: J2 → K2`,
/// returned as `(J1, u1 = pr_K1, v = pr_J2)`.
pub fn pullback(w: &FunctorData, u2: &FunctorData) -> Result<(Arc<FinCategory>, FunctorData, FunctorData)> {
    if *w.target() != *u2.target() {
        return Err(Error::TargetMismatch);
    }
    let (k1, j2) = (w.source(), u2.source());
    let mut objs = Vec::new();
    for a in 0..k1.object_count() {
        for b in 0..j2.object_count() {
            if w.obj(a) == u2.obj(b) {
                objs.push((a, b));
            }
        }
    }
    let mut morphisms = Vec::new();
    let mut pairs = Vec::new();
    for (x, &(a1, b1)) in objs.iter().enumerate() {
        for (y, &(a2, b2)) in objs.iter().enumerate() {
            for &f in k1.hom(a1, a2) {
                for &g in j2.hom(b1, b2) {
                    if w.mor(f) == u2.mor(g) {
                        morphisms.push(Morphism {
                            name: format!("({},{})", k1.morphism(f).name, j2.morphism(g).name),
                            source: x,
                            target: y,
                        });
                        pairs.push((f, g));
                    }
                }
            }
        }
    }
    let m = morphisms.len();
    let index: HashMap<(usize, usize, usize, usize), usize> = morphisms
        .iter()
        .enumerate()
        .map(|(i, f)| ((f.source, f.target, pairs[i].0, pairs[i].1), i))
        .collect();
    let mut compose = vec![None; m * m];
    for f in 0..m {
        for g in 0..m {
            if morphisms[f].target == morphisms[g].source {
                let key = (
                    morphisms[f].source,
                    morphisms[g].target,
                    k1.comp(pairs[g].0, pairs[f].0),
                    j2.comp(pairs[g].1, pairs[f].1),
                );
                compose[g * m + f] = Some(index[&key]);
            }
        }
    }
    let identities = objs
        .iter()
        .enumerate()
        .map(|(x, &(a, b))| index[&(x, x, k1.identity(a), j2.identity(b))])
        .collect();
    let labels = objs.iter().map(|&(a, b)| format!("{},{}", k1.object(a), j2.object(b))).collect();
    let c = Arc::new(FinCategory::new(labels, morphisms, identities, compose)?);
    let u1 = FunctorData::new(c.clone(), k1.clone(), objs.iter().map(|o| o.0).collect(), pairs.iter().map(|p| p.0).collect())?;
    let v = FunctorData::new(c.clone(), j2.clone(), objs.iter().map(|o| o.1).collect(), pairs.iter().map(|p| p.1).collect())?;
    Ok((c, u1, v))
}

/// Builds a category whose morphisms lift morphisms of `base` along an object
/// projection, composing as in `base`. Used for slices.
fn finish_lifted_category(
    labels: Vec<String>,
    morphisms: Vec<Morphism>,
    lifted: Vec<usize>,
    base: &Arc<FinCategory>,
    proj: impl Fn(usize) -> usize,
) -> Result<(Arc<FinCategory>, FunctorData)> {
    let m = morphisms.len();
    let index: HashMap<(usize, usize, usize), usize> = morphisms
        .iter()
        .enumerate()
        .map(|(i, f)| ((f.source, f.target, lifted[i]), i))
        .collect();
    let mut compose = vec![None; m * m];
    for f in 0..m {
        for g in 0..m {
            if morphisms[f].target == morphisms[g].source {
                let key = (morphisms[f].source, morphisms[g].target, base.comp(lifted[g], lifted[f]));
                compose[g * m + f] = Some(index[&key]);
            }
        }
    }
    let n = labels.len();
    let identities = (0..n).map(|x| index[&(x, x, base.identity(proj(x)))]).collect();
    let c = Arc::new(FinCategory::new(labels, morphisms, identities, compose)?);
    let pr = FunctorData::new(c.clone(), base.clone(), (0..n).map(proj).collect(), lifted)?;
    Ok((c, pr))
}

/// Which mapping cylinder to build.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Cylinder {
    /// Full subcategory of `K × [1]` on `(u(j), 1)` and `(k, 0)`.
    Cyl,
    /// Full subcategory of `K × [1]` on `(u(j), 0)` and `(k, 1)`.
    CylPrime,
}

/// Mapping cylinder of `u: J → K` with `i: J → cyl`, `s: K → cyl`, `q: cyl → K`.
#[derive(Clone, Debug)]
pub struct CylinderData {
    pub category: Arc<FinCategory>,
    pub i: FunctorData,
    pub s: FunctorData,
    pub q: FunctorData,
}

/// Mapping cylinder; requires `u` injective on objects and fully faithful,
/// which covers every sieve and cosieve.
pub fn mapping_cylinder(u: &FunctorData, which: Cylinder) -> Result<CylinderData> {
    let p = u.props();
    if !(p.fully_faithful && p.injective_on_objects) {
        return Err(Error::InvalidCategory("mapping cylinder needs a fully faithful embedding".into()));
    }
    let k = u.target();
    let interval = Arc::new(FinCategory::from_poset(&FinPoset::chain(1)));
    let prod = Arc::new(k.product(&interval));
    let (end_j, end_k) = match which {
        Cylinder::Cyl => (1, 0),
        Cylinder::CylPrime => (0, 1),
    };
    // Object (a, e) of K × [1] has index a * 2 + e.
    let mut objs: Vec<usize> = u.object_map().iter().map(|&a| a * 2 + end_j).collect();
    objs.extend((0..k.object_count()).map(|a| a * 2 + end_k));
    let (cyl, incl) = prod.full_subcategory(&objs);
    let nj = u.source().object_count();
    let proj_k = {
        let q_obj = (0..cyl.object_count()).map(|x| incl.obj(x) / 2).collect();
        let q_mor = (0..cyl.morphism_count()).map(|f| incl.mor(f) / interval.morphism_count()).collect();
        FunctorData::new(cyl.clone(), k.clone(), q_obj, q_mor)?
    };
    let pos_of = |prod_obj: usize| objs.iter().position(|&o| o == prod_obj).expect("object in cylinder");
    let lift = |f_k: usize, e_src: usize, e_tgt: usize| -> usize {
        let e = interval.hom(e_src, e_tgt)[0];
        let pm = f_k * interval.morphism_count() + e;
        incl.morphism_map().iter().position(|&x| x == pm).expect("morphism in cylinder")
    };
    let j = u.source();
    let i = FunctorData::new(
        j.clone(),
        cyl.clone(),
        (0..nj).map(|a| pos_of(u.obj(a) * 2 + end_j)).collect(),
        (0..j.morphism_count()).map(|f| lift(u.mor(f), end_j, end_j)).collect(),
    )?;
    let s = FunctorData::new(
        k.clone(),
        cyl.clone(),
        (0..k.object_count()).map(|a| pos_of(a * 2 + end_k)).collect(),
        (0..k.morphism_count()).map(|f| lift(f, end_k, end_k)).collect(),
    )?;
    // The projection to K restricts to q on the cylinder: q∘i = u and q∘s = id.
    Ok(CylinderData { category: cyl, i, s, q: proj_k })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(p: &FinPoset) -> Arc<FinCategory> {
        Arc::new(FinCategory::from_poset(p))
    }

    #[test]
    fn comma_examples() {
        let e = cat(&FinPoset::terminal());
        let c = comma(&FunctorData::identity(&e), &FunctorData::identity(&e)).unwrap();
        assert_eq!(c.category.object_count(), 1);
        let i1 = cat(&FinPoset::chain(1));
        let zero = FunctorData::point(&i1, 0);
        let one = FunctorData::point(&i1, 1);
        assert_eq!(comma(&zero, &one).unwrap().category.object_count(), 1);
        assert_eq!(comma(&one, &zero).unwrap().category.object_count(), 0);
    }

    #[test]
    fn cylinder_examples() {
        let i1 = cat(&FinPoset::chain(1));
        let zero = FunctorData::point(&i1, 0);
        let cyl = mapping_cylinder(&zero, Cylinder::Cyl).unwrap();
        assert_eq!(cyl.category.object_count(), 3);
        let p = cyl.category.as_poset().unwrap();
        let bottom = p.index("0,0").unwrap();
        assert!(p.lt(bottom, p.index("1,0").unwrap()));
        assert!(p.lt(bottom, p.index("0,1").unwrap()));
        assert_eq!(cyl.s.then(&cyl.q).unwrap(), FunctorData::identity(&i1));
        assert_eq!(cyl.i.then(&cyl.q).unwrap(), zero);

        let e = cat(&FinPoset::terminal());
        let cyl = mapping_cylinder(&FunctorData::identity(&e), Cylinder::Cyl).unwrap();
        let p = cyl.category.as_poset().unwrap();
        assert!(p.lt(cyl.s.obj(0), cyl.i.obj(0)));
    }

    #[test]
    fn fibration_examples() {
        let i1 = cat(&FinPoset::chain(1));
        let m = cat(&FinPoset::chain(2));
        let prod = Arc::new(m.product(&i1));
        let pr = FunctorData::new(
            prod.clone(),
            i1.clone(),
            (0..prod.object_count()).map(|x| x % 2).collect(),
            (0..prod.morphism_count()).map(|f| f % i1.morphism_count()).collect(),
        )
        .unwrap();
        let st = pr.fibration_status();
        assert!(st.fibration && st.opfibration);
        let st = FunctorData::to_terminal(&i1).fibration_status();
        assert!(st.fibration && st.opfibration && !st.discrete_fibers);
        assert!(!FunctorData::point(&i1, 0).fibration_status().opfibration);
    }

    #[test]
    fn category_props_examples() {
        let p = FinPoset::chain(2).product(&FinPoset::chain(1));
        let c = FinCategory::from_poset(&p);
        let props = c.props();
        assert_eq!(c.object(props.terminal.unwrap()), "2,1");
        assert_eq!(c.object(props.initial.unwrap()), "0,0");
    }
}
