use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Finite partially ordered set on the indices `0..len()`.
///
/// Labels are opaque and unique; every constructor checks the partial-order
/// axioms, so a value of this type is always a valid poset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinPoset {
    labels: Vec<String>,
    leq: Vec<bool>,
}

impl fmt::Debug for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.labels[a], self.labels[b]))
            .collect();
        write!(f, "FinPoset{{{}; {}}}", self.labels.join(" "), covers.join(" "))
    }
}

impl FinPoset {
    /// Reflexive-transitive closure of `pairs` on `labels`.
    pub fn build<S: AsRef<str>>(labels: &[S], pairs: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let index = label_index(&labels)?;
        let look = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownLabel(s.to_string()));
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            idx_pairs.push((look(a.as_ref())?, look(b.as_ref())?));
        }
        Self::from_pairs(labels, &idx_pairs)
    }

    /// Closure of index pairs.
    pub fn from_pairs(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        label_index(&labels)?;
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            assert!(a < n && b < n, "pair index out of range");
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::CycleDetected(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        Ok(FinPoset { labels, leq })
    }

    /// Accepts a full relation matrix, which must already be a partial order.
    pub fn from_relation(labels: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        label_index(&labels)?;
        let n = labels.len();
        if leq.len() != n * n {
            return Err(Error::NotAPoset("relation matrix has wrong size".into()));
        }
        let p = FinPoset { labels, leq };
        for a in 0..n {
            if !p.leq(a, a) {
                return Err(Error::NotAPoset(format!("{} is not reflexive", p.labels[a])));
            }
            for b in 0..n {
                if a != b && p.leq(a, b) && p.leq(b, a) {
                    return Err(Error::CycleDetected(p.labels[a].clone(), p.labels[b].clone()));
                }
                for c in 0..n {
                    if p.leq(a, b) && p.leq(b, c) && !p.leq(a, c) {
                        return Err(Error::NotAPoset(format!(
                            "{} <= {} <= {} but not transitive",
                            p.labels[a], p.labels[b], p.labels[c]
                        )));
                    }
                }
            }
        }
        Ok(p)
    }

    /// The chain `0 < 1 < … < n`.
    pub fn chain(n: usize) -> Self {
        let labels: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, i + 1)).collect();
        Self::from_pairs(labels, &pairs).expect("chain is a poset")
    }

    /// One-element poset.
    pub fn terminal() -> Self {
        Self::chain(0)
    }

    pub fn empty() -> Self {
        FinPoset { labels: vec![], leq: vec![] }
    }

    /// Antichain on the given labels.
    pub fn discrete<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        Self::build(labels, &[])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Index of `label`, or `UnknownLabel`.
    pub fn index(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn relation(&self) -> &[bool] {
        &self.leq
    }

    /// All pairs `a < b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Pairs `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(a, b)| !(0..self.len()).any(|c| self.lt(a, c) && self.lt(c, b)))
            .collect()
    }

    /// Indices in an order compatible with `leq`.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| ((0..self.len()).filter(|&y| self.lt(y, x)).count(), x));
        order
    }

    pub fn downset(&self, k: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq(j, k)).collect()
    }

    pub fn upset(&self, k: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq(k, j)).collect()
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|j| self.leq(j, t)))
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|j| self.leq(t, j)))
    }

    /// Full subposet on `elems` (in the given order) with its inclusion.
    pub fn subposet(&self, elems: &[usize]) -> (FinPoset, MonotoneMap) {
        let labels = elems.iter().map(|&i| self.labels[i].clone()).collect();
        let m = elems.len();
        let mut leq = vec![false; m * m];
        for (a, &x) in elems.iter().enumerate() {
            for (b, &y) in elems.iter().enumerate() {
                leq[a * m + b] = self.leq(x, y);
            }
        }
        let sub = FinPoset::from_relation(labels, leq).expect("subposet of a poset");
        let incl = MonotoneMap { source: sub.clone(), target: self.clone(), map: elems.to_vec() };
        (sub, incl)
    }

    /// Product order; element `(a, b)` has index `a * other.len() + b`.
    pub fn product(&self, other: &FinPoset) -> FinPoset {
        let (n, m) = (self.len(), other.len());
        let mut labels = Vec::with_capacity(n * m);
        for a in 0..n {
            for b in 0..m {
                labels.push(format!("{},{}", self.labels[a], other.labels[b]));
            }
        }
        let nm = n * m;
        let mut leq = vec![false; nm * nm];
        for x in 0..nm {
            for y in 0..nm {
                leq[x * nm + y] = self.leq(x / m, y / m) && other.leq(x % m, y % m);
            }
        }
        FinPoset::from_relation(labels, leq).expect("product of posets")
    }

    /// Disjoint union; labels clash only if the inputs share labels.
    pub fn coproduct(&self, other: &FinPoset) -> Result<FinPoset> {
        let (n, m) = (self.len(), other.len());
        let labels: Vec<String> = self.labels.iter().chain(&other.labels).cloned().collect();
        let t = n + m;
        let mut leq = vec![false; t * t];
        for a in 0..n {
            for b in 0..n {
                leq[a * t + b] = self.leq(a, b);
            }
        }
        for a in 0..m {
            for b in 0..m {
                leq[(n + a) * t + n + b] = other.leq(a, b);
            }
        }
        FinPoset::from_relation(labels, leq)
    }

    pub fn opposite(&self) -> FinPoset {
        let n = self.len();
        let leq = (0..n * n).map(|x| self.leq(x % n, x / n)).collect();
        FinPoset { labels: self.labels.clone(), leq }
    }

    /// Strictly increasing chains with `n + 1` elements, lexicographic by index.
    pub fn chains(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n + 1);
        self.extend_chains(n + 1, &mut cur, &mut out);
        out
    }

    fn extend_chains(&self, want: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == want {
            out.push(cur.clone());
            return;
        }
        for x in 0..self.len() {
            if cur.last().is_none_or(|&last| self.lt(last, x)) {
                cur.push(x);
                self.extend_chains(want, cur, out);
                cur.pop();
            }
        }
    }

    /// All nonempty strict chains, grouped by length.
    pub fn all_chains(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        for n in 0.. {
            let c = self.chains(n);
            if c.is_empty() {
                break;
            }
            out.push(c);
        }
        out
    }

    /// Relabels every element with `f`.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<FinPoset> {
        let labels = self.labels.iter().map(|l| f(l)).collect();
        FinPoset::from_relation(labels, self.leq.clone())
    }

    /// Isomorphism as posets up to relabeling, by exhaustive search.
    pub fn is_isomorphic(&self, other: &FinPoset) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut used = vec![false; other.len()];
        let mut map = Vec::with_capacity(self.len());
        self.iso_search(other, &mut used, &mut map)
    }

    fn iso_search(&self, other: &FinPoset, used: &mut [bool], map: &mut Vec<usize>) -> bool {
        let i = map.len();
        if i == self.len() {
            return true;
        }
        for c in 0..other.len() {
            if used[c] {
                continue;
            }
            if (0..i).all(|a| self.leq(a, i) == other.leq(map[a], c) && self.leq(i, a) == other.leq(c, map[a])) {
                used[c] = true;
                map.push(c);
                if self.iso_search(other, used, map) {
                    return true;
                }
                map.pop();
                used[c] = false;
            }
        }
        false
    }
}

fn label_index(labels: &[String]) -> Result<HashMap<&str, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.as_str(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

/// Order-preserving map between finite posets.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonotoneMap {
    source: FinPoset,
    target: FinPoset,
    map: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: FinPoset, target: FinPoset, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::ShapeMismatch(format!(
                "map has {} entries for {} elements",
                map.len(),
                source.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= target.len()) {
            return Err(Error::ObjectNotInTarget(bad.to_string()));
        }
        for a in 0..source.len() {
            for b in 0..source.len() {
                if source.leq(a, b) && !target.leq(map[a], map[b]) {
                    return Err(Error::NotMonotone(source.label(a).into(), source.label(b).into()));
                }
            }
        }
        Ok(MonotoneMap { source, target, map })
    }

    /// Map given on labels.
    pub fn from_labels(source: FinPoset, target: FinPoset, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut map = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            let i = source.index(a)?;
            map[i] = target.index_of(b).ok_or_else(|| Error::ObjectNotInTarget(b.to_string()))?;
        }
        if let Some(i) = map.iter().position(|&t| t == usize::MAX) {
            return Err(Error::ShapeMismatch(format!("no image for {}", source.label(i))));
        }
        Self::new(source, target, map)
    }

    pub fn identity(p: &FinPoset) -> Self {
        MonotoneMap { source: p.clone(), target: p.clone(), map: (0..p.len()).collect() }
    }

    /// Constant map to the terminal poset.
    pub fn to_terminal(p: &FinPoset) -> Self {
        MonotoneMap { source: p.clone(), target: FinPoset::terminal(), map: vec![0; p.len()] }
    }

    /// The element `k` as a map from the terminal poset.
    pub fn point(p: &FinPoset, k: usize) -> Self {
        assert!(k < p.len(), "point out of range");
        MonotoneMap { source: FinPoset::terminal(), target: p.clone(), map: vec![k] }
    }

    pub fn source(&self) -> &FinPoset {
        &self.source
    }

    pub fn target(&self) -> &FinPoset {
        &self.target
    }

    pub fn apply(&self, j: usize) -> usize {
        self.map[j]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonotoneMap) -> Result<MonotoneMap> {
        if self.target != other.source {
            return Err(Error::ShapeMismatch("composition of maps with unequal middle poset".into()));
        }
        Ok(MonotoneMap {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&j| other.map[j]).collect(),
        })
    }

    /// `self × other` on product posets.
    pub fn product(&self, other: &MonotoneMap) -> MonotoneMap {
        let source = self.source.product(&other.source);
        let target = self.target.product(&other.target);
        let (sm, tm) = (other.source.len(), other.target.len());
        let map = (0..source.len())
            .map(|x| self.map[x / sm] * tm + other.map[x % sm])
            .collect();
        MonotoneMap { source, target, map }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
    }

    pub fn image(&self) -> Vec<usize> {
        let mut seen = vec![false; self.target.len()];
        for &t in &self.map {
            seen[t] = true;
        }
        (0..self.target.len()).filter(|&t| seen[t]).collect()
    }

    pub fn in_image(&self, k: usize) -> bool {
        self.map.contains(&k)
    }

    /// Order embedding: `a <= b` iff `u(a) <= u(b)`.
    pub fn is_fully_faithful(&self) -> bool {
        let n = self.source.len();
        (0..n).all(|a| (0..n).all(|b| self.source.leq(a, b) == self.target.leq(self.map[a], self.map[b])))
    }

    /// `{ j : u(j) <= k }` (`Side::Over`) or `{ j : k <= u(j) }` (`Side::Under`)
    /// as a full subposet of the source, with its projection.
    pub fn slice(&self, k: usize, side: Side) -> Result<(FinPoset, MonotoneMap)> {
        if k >= self.target.len() {
            return Err(Error::ObjectNotInTarget(k.to_string()));
        }
        let elems: Vec<usize> = (0..self.source.len())
            .filter(|&j| match side {
                Side::Over => self.target.leq(self.map[j], k),
                Side::Under => self.target.leq(k, self.map[j]),
            })
            .collect();
        Ok(self.source.subposet(&elems))
    }

    pub fn sieve_status(&self) -> SieveStatus {
        if !(self.is_injective() && self.is_fully_faithful()) {
            return SieveStatus::Neither;
        }
        let n = self.target.len();
        let down = (0..n).all(|k| self.in_image(k) || !self.map.iter().any(|&t| self.target.leq(k, t)));
        let up = (0..n).all(|k| self.in_image(k) || !self.map.iter().any(|&t| self.target.leq(t, k)));
        SieveStatus::from_flags(down, up)
    }

    /// Galois adjoint when it exists: right `r` with `u(x) <= y ⟺ x <= r(y)`,
    /// left `l` with `l(y) <= x ⟺ y <= u(x)`.
    pub fn find_adjoint(&self, side: AdjointSide) -> Option<MonotoneMap> {
        let (s, t) = (&self.source, &self.target);
        let mut map = Vec::with_capacity(t.len());
        for y in 0..t.len() {
            let cands: Vec<usize> = (0..s.len())
                .filter(|&x| match side {
                    AdjointSide::Right => t.leq(self.map[x], y),
                    AdjointSide::Left => t.leq(y, self.map[x]),
                })
                .collect();
            let best = cands.iter().copied().find(|&c| {
                cands.iter().all(|&d| match side {
                    AdjointSide::Right => s.leq(d, c),
                    AdjointSide::Left => s.leq(c, d),
                })
            })?;
            map.push(best);
        }
        let adj = MonotoneMap::new(t.clone(), s.clone(), map).ok()?;
        let galois = (0..s.len()).all(|x| {
            (0..t.len()).all(|y| match side {
                AdjointSide::Right => t.leq(self.map[x], y) == s.leq(x, adj.map[y]),
                AdjointSide::Left => s.leq(adj.map[y], x) == t.leq(y, self.map[x]),
            })
        });
        galois.then_some(adj)
    }

    /// Complement of the image as a full subposet of the target.
    pub fn complement(&self) -> (FinPoset, MonotoneMap) {
        let rest: Vec<usize> = (0..self.target.len()).filter(|&k| !self.in_image(k)).collect();
        self.target.subposet(&rest)
    }
}

/// Which slice of a functor over an object.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    /// Objects `(j, u(j) → k)`.
    Over,
    /// Objects `(j, k → u(j))`.
    Under,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum AdjointSide {
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SieveStatus {
    Sieve,
    Cosieve,
    Both,
    Neither,
}

impl SieveStatus {
    pub(crate) fn from_flags(sieve: bool, cosieve: bool) -> Self {
        match (sieve, cosieve) {
            (true, true) => SieveStatus::Both,
            (true, false) => SieveStatus::Sieve,
            (false, true) => SieveStatus::Cosieve,
            (false, false) => SieveStatus::Neither,
        }
    }

    pub fn is_sieve(self) -> bool {
        matches!(self, SieveStatus::Sieve | SieveStatus::Both)
    }

    pub fn is_cosieve(self) -> bool {
        matches!(self, SieveStatus::Cosieve | SieveStatus::Both)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> FinPoset {
        FinPoset::chain(1)
    }

    #[test]
    fn build_examples() {
        let p = FinPoset::build(&["0", "1"], &[("0", "1")]).unwrap();
        assert_eq!(p, p1());
        assert_eq!(FinPoset::build(&["a"], &[]).unwrap().len(), 1);
        assert!(matches!(
            FinPoset::build(&["x", "y"], &[("x", "y"), ("y", "x")]),
            Err(Error::CycleDetected(..))
        ));
        assert!(matches!(FinPoset::build(&["x", "x"], &[]), Err(Error::DuplicateLabel(_))));
    }

    #[test]
    fn chains_examples() {
        assert_eq!(p1().chains(1), vec![vec![0, 1]]);
        let square = p1().product(&p1());
        assert_eq!(square.chains(2).len(), 2);
        assert!(square.chains(2).iter().all(|c| c[0] == 0 && c[2] == 3));
        assert_eq!(square.chains(3), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn opposite_is_involution() {
        let p = FinPoset::chain(2);
        assert!(p.opposite().leq(2, 0));
        assert_eq!(p.opposite().opposite(), p);
    }

    #[test]
    fn slice_examples() {
        let d1 = MonotoneMap::new(p1(), FinPoset::chain(2), vec![0, 2]).unwrap();
        let (s, _) = d1.slice(1, Side::Over).unwrap();
        assert_eq!(s.labels(), &["0".to_string()]);
        let one = MonotoneMap::point(&p1(), 1);
        assert!(one.slice(0, Side::Over).unwrap().0.is_empty());
        let id = MonotoneMap::identity(&FinPoset::chain(2));
        assert_eq!(id.slice(1, Side::Over).unwrap().0.len(), 2);
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(MonotoneMap::point(&p1(), 0).sieve_status(), SieveStatus::Sieve);
        assert_eq!(MonotoneMap::point(&p1(), 1).sieve_status(), SieveStatus::Cosieve);
        assert_eq!(MonotoneMap::identity(&p1()).sieve_status(), SieveStatus::Both);
    }

    #[test]
    fn adjoint_examples() {
        let s0 = MonotoneMap::new(FinPoset::chain(2), p1(), vec![0, 0, 1]).unwrap();
        let r = s0.find_adjoint(AdjointSide::Right).unwrap();
        assert_eq!(r.as_slice(), &[1, 2]);
        let p = MonotoneMap::to_terminal(&p1());
        assert_eq!(p.find_adjoint(AdjointSide::Left).unwrap().as_slice(), &[0]);
        assert_eq!(p.find_adjoint(AdjointSide::Right).unwrap().as_slice(), &[1]);
        let empty = MonotoneMap::new(FinPoset::empty(), FinPoset::chain(0), vec![]).unwrap();
        assert!(empty.find_adjoint(AdjointSide::Right).is_none());
    }

    #[test]
    fn not_monotone_rejected() {
        assert!(matches!(
            MonotoneMap::new(p1(), p1(), vec![1, 0]),
            Err(Error::NotMonotone(..))
        ));
    }
}
