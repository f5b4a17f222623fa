//! The index posets used by the constructions, with their attached maps.
//!
//! Grid elements are labeled `"i,j"` for the position `(i, j)` in `[a] × [b]`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::poset::{FinPoset, MonotoneMap};

/// A poset together with named maps into or out of it.
#[derive(Clone, Debug)]
pub struct NamedShape {
    pub poset: FinPoset,
    pub maps: BTreeMap<String, MonotoneMap>,
}

impl NamedShape {
    fn bare(poset: FinPoset) -> Self {
        NamedShape { poset, maps: BTreeMap::new() }
    }

    fn with(mut self, name: &str, map: MonotoneMap) -> Self {
        self.maps.insert(name.to_string(), map);
        self
    }

    pub fn map(&self, name: &str) -> &MonotoneMap {
        &self.maps[name]
    }
}

/// Shape names accepted by [`named_shape`].
pub const SHAPE_NAMES: &[&str] = &[
    "chain",
    "box",
    "corner_push",
    "corner_pull",
    "pull",
    "T_shape",
    "rotation_J",
    "rotation_K",
    "octa_J",
    "octa_K",
    "biproduct_L2",
    "biproduct_L3",
    "biproduct_L",
];

/// `[a] × [b]`.
pub fn grid(a: usize, b: usize) -> FinPoset {
    FinPoset::chain(a).product(&FinPoset::chain(b))
}

/// Index of `(i, j)` in [`grid`]`(a, b)`.
pub fn grid_index(b: usize, (i, j): (usize, usize)) -> usize {
    i * (b + 1) + j
}

/// Full subposet of `[a] × [b]` on `elems`, in that order, with its inclusion.
pub fn grid_subposet(a: usize, b: usize, elems: &[(usize, usize)]) -> (FinPoset, MonotoneMap) {
    let g = grid(a, b);
    let idx: Vec<usize> = elems.iter().map(|&e| grid_index(b, e)).collect();
    g.subposet(&idx)
}

/// Looks up a grid label in `p`.
pub fn at(p: &FinPoset, (i, j): (usize, usize)) -> usize {
    p.index_of(&format!("{i},{j}")).unwrap_or_else(|| panic!("({i},{j}) not in shape"))
}

/// `⌐`: `(0,0) → (1,0)`, `(0,0) → (0,1)`.
pub fn corner_push() -> (FinPoset, MonotoneMap) {
    grid_subposet(1, 1, &[(0, 0), (1, 0), (0, 1)])
}

/// `⌟`: `(1,0) → (1,1)`, `(0,1) → (1,1)`.
pub fn corner_pull() -> (FinPoset, MonotoneMap) {
    grid_subposet(1, 1, &[(1, 0), (0, 1), (1, 1)])
}

/// `pull_n`: `e_0, …, e_n` below `t`, nothing else.
pub fn pull(n: usize) -> FinPoset {
    let mut labels: Vec<String> = (0..=n).map(|i| format!("e{i}")).collect();
    labels.push("t".into());
    let pairs: Vec<(usize, usize)> = (0..=n).map(|i| (i, n + 1)).collect();
    FinPoset::from_pairs(labels, &pairs).expect("pull shape")
}

/// `pull_f: pull_k → pull_n` for `f: {0..k} → {0..n}`.
pub fn pull_map(f: &[usize], n: usize) -> Result<MonotoneMap> {
    if f.is_empty() || f.iter().any(|&x| x > n) {
        return Err(Error::BadParams(format!("{f:?} is not a map into {{0..{n}}}")));
    }
    let k = f.len() - 1;
    let mut map = f.to_vec();
    map.push(n + 1);
    MonotoneMap::new(pull(k), pull(n), map)
}

fn map_into(source: &FinPoset, target: &FinPoset, pts: &[(usize, usize)]) -> MonotoneMap {
    let map = pts.iter().map(|&p| at(target, p)).collect();
    MonotoneMap::new(source.clone(), target.clone(), map).expect("shape map is monotone")
}

fn retarget(incl: &MonotoneMap, target: &FinPoset) -> MonotoneMap {
    let map = (0..incl.source().len())
        .map(|x| target.index(incl.source().label(x)).expect("label in target"))
        .collect();
    MonotoneMap::new(incl.source().clone(), target.clone(), map).expect("inclusion is monotone")
}

pub fn named_shape(name: &str, n: Option<usize>) -> Result<NamedShape> {
    let need_n = || n.ok_or_else(|| Error::BadParams(format!("{name} needs a parameter n")));
    let no_n = || match n {
        Some(_) => Err(Error::BadParams(format!("{name} takes no parameter"))),
        None => Ok(()),
    };
    let chain1 = FinPoset::chain(1);
    Ok(match name {
        "chain" => NamedShape::bare(FinPoset::chain(need_n()?)),
        "box" => {
            no_n()?;
            let sq = grid(1, 1);
            let (_, push) = corner_push();
            let (_, pull) = corner_pull();
            NamedShape::bare(sq).with("i_push", push).with("i_pull", pull)
        }
        "corner_push" => {
            no_n()?;
            let (p, incl) = corner_push();
            let horiz = map_into(&chain1, &p, &[(0, 0), (1, 0)]);
            NamedShape::bare(p).with("incl", incl).with("i", horiz)
        }
        "corner_pull" => {
            no_n()?;
            let (p, incl) = corner_pull();
            NamedShape::bare(p).with("incl", incl)
        }
        "pull" => {
            let n = need_n()?;
            if n < 1 {
                return Err(Error::BadParams("pull needs n >= 1".into()));
            }
            let p = pull(n);
            let t = MonotoneMap::point(&p, n + 1);
            NamedShape::bare(p).with("t", t)
        }
        "T_shape" => {
            no_n()?;
            let full = grid(2, 1);
            let (k, i1) = grid_subposet(2, 1, &[(0, 0), (1, 0), (2, 0), (0, 1)]);
            let i0 = map_into(&chain1, &k, &[(0, 0), (1, 0)]);
            let i = i0.then(&i1)?;
            NamedShape::bare(full).with("i0", i0).with("i1", i1).with("i", i)
        }
        "rotation_J" | "rotation_K" => {
            no_n()?;
            let (j, _) = grid_subposet(2, 2, &[(0, 0), (1, 0), (2, 0), (0, 1), (1, 2)]);
            let i = map_into(&chain1, &j, &[(0, 0), (1, 0)]);
            if name == "rotation_J" {
                NamedShape::bare(j).with("i", i)
            } else {
                let k = rotation_k();
                let jk = retarget(&j.subposet(&(0..j.len()).collect::<Vec<_>>()).1, &k);
                NamedShape::bare(k).with("i", i).with("j", jk)
            }
        }
        "octa_J" | "octa_K" => {
            no_n()?;
            let (j, _) = grid_subposet(
                4,
                2,
                &[(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (4, 1), (1, 2)],
            );
            let i = map_into(&FinPoset::chain(2), &j, &[(0, 0), (1, 0), (2, 0)]);
            if name == "octa_J" {
                NamedShape::bare(j).with("i", i)
            } else {
                let k = octa_k();
                let jk = retarget(&j.subposet(&(0..j.len()).collect::<Vec<_>>()).1, &k);
                NamedShape::bare(k).with("i", i).with("j", jk)
            }
        }
        "biproduct_L2" | "biproduct_L3" | "biproduct_L" => {
            no_n()?;
            let (l2, _) = grid_subposet(2, 2, &[(1, 0), (2, 0), (0, 1), (0, 2)]);
            let (l3, _) = grid_subposet(2, 2, &[(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)]);
            let l = grid(2, 2);
            let two = FinPoset::discrete(&["x", "y"])?;
            let j1 = map_into(&two, &l2, &[(1, 0), (0, 1)]);
            let j2 = retarget(&MonotoneMap::identity(&l2), &l3);
            let j3 = retarget(&MonotoneMap::identity(&l3), &l);
            let base = match name {
                "biproduct_L2" => l2,
                "biproduct_L3" => l3,
                _ => l,
            };
            NamedShape::bare(base).with("j1", j1).with("j2", j2).with("j3", j3)
        }
        _ => return Err(Error::UnknownShape(name.to_string())),
    })
}

/// `[2] × [2]` without `(0,2)`.
pub fn rotation_k() -> FinPoset {
    let elems: Vec<(usize, usize)> = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|&e| e != (0, 2))
        .collect();
    grid_subposet(2, 2, &elems).0
}

/// `[4] × [2]` without `(4,0)` and `(0,2)`.
pub fn octa_k() -> FinPoset {
    let elems: Vec<(usize, usize)> = (0..5)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|&e| e != (4, 0) && e != (0, 2))
        .collect();
    grid_subposet(4, 2, &elems).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pull_two_has_four_elements() {
        let p = named_shape("pull", Some(2)).unwrap().poset;
        assert_eq!(p.len(), 4);
        let t = p.index("t").unwrap();
        assert_eq!(p.strict_pairs().len(), 3);
        assert!(p.strict_pairs().iter().all(|&(_, b)| b == t));
    }

    #[test]
    fn octa_k_has_thirteen_elements() {
        assert_eq!(named_shape("octa_K", None).unwrap().poset.len(), 13);
    }

    #[test]
    fn box_is_product_of_chains() {
        let b = named_shape("box", None).unwrap().poset;
        assert_eq!(b, FinPoset::chain(1).product(&FinPoset::chain(1)));
    }

    #[test]
    fn t_shape_inclusions_are_sieve_then_embedding() {
        let t = named_shape("T_shape", None).unwrap();
        assert!(t.map("i0").sieve_status().is_sieve());
        assert!(t.map("i1").is_fully_faithful());
        assert_eq!(t.poset.len(), 6);
    }

    #[test]
    fn biproduct_maps() {
        let s = named_shape("biproduct_L", None).unwrap();
        assert!(s.map("j1").sieve_status().is_sieve());
        assert!(s.map("j2").sieve_status().is_cosieve());
    }

    #[test]
    fn errors() {
        assert!(matches!(named_shape("nope", None), Err(Error::UnknownShape(_))));
        assert!(matches!(named_shape("chain", None), Err(Error::BadParams(_))));
        assert!(matches!(named_shape("box", Some(1)), Err(Error::BadParams(_))));
    }
}
