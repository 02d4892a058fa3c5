//! Integer polymatroids on labelled ground sets, with the matroid
//! constructions used by the auxiliary-variable reduction.
//!
//! Ground elements are indexed `0..k` and carry a label in `ℤ^n`; labels may
//! repeat (the natural matroid has one copy per unit of rank). Subsets are
//! bit masks, so `k ≤ 63`.

use crate::error::{Error, Result};
use crate::polyhedra::LatticePolytope;
use crate::rat::{self, Point, Rat};
use crate::ratlin::{rank_of_sum, Subspace};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Mutex;

/// Largest ground set whose axioms are audited exhaustively.
pub const EXHAUSTIVE_AUDIT_LIMIT: usize = 12;
const MAX_GROUND: usize = 63;

enum RankOracle {
    Table(Vec<u32>),
    Subspaces { spaces: Vec<Subspace>, memo: Mutex<HashMap<u64, u32>> },
}

impl Clone for RankOracle {
    fn clone(&self) -> Self {
        match self {
            RankOracle::Table(t) => RankOracle::Table(t.clone()),
            RankOracle::Subspaces { spaces, memo } => RankOracle::Subspaces {
                spaces: spaces.clone(),
                memo: Mutex::new(memo.lock().expect("rank memo").clone()),
            },
        }
    }
}

/// Normalized, monotone, submodular integer rank function on labelled elements.
#[derive(Clone)]
pub struct Polymatroid {
    n: usize,
    labels: Vec<Vec<i64>>,
    oracle: RankOracle,
}

impl std::fmt::Debug for Polymatroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Polymatroid").field("n", &self.n).field("labels", &self.labels).finish()
    }
}

pub fn label_point(l: &[i64]) -> Point {
    rat::from_i64s(l)
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

impl Polymatroid {
    /// Polymatroid from a full rank table indexed by bit mask; audits the axioms
    /// exhaustively when the ground set is small enough.
    pub fn from_table(n: usize, labels: Vec<Vec<i64>>, table: Vec<u32>) -> Result<Self> {
        let k = labels.len();
        if k > 24 {
            return Err(Error::invalid("rank tables are limited to 24 elements"));
        }
        if table.len() != 1 << k {
            return Err(Error::invalid(format!("rank table has {} entries, expected {}", table.len(), 1u64 << k)));
        }
        check_labels(n, &labels)?;
        let p = Polymatroid { n, labels, oracle: RankOracle::Table(table) };
        if k <= EXHAUSTIVE_AUDIT_LIMIT {
            p.audit()?;
        }
        Ok(p)
    }

    /// Rank function `S ↦ dim Σ_{α ∈ S} E_α` of a subspace arrangement.
    pub fn from_arrangement(n: usize, labels: Vec<Vec<i64>>, spaces: Vec<Subspace>) -> Result<Self> {
        if labels.len() != spaces.len() {
            return Err(Error::invalid("one subspace per label is required"));
        }
        if labels.len() > MAX_GROUND {
            return Err(Error::invalid(format!("ground sets are limited to {MAX_GROUND} elements")));
        }
        check_labels(n, &labels)?;
        Ok(Polymatroid { n, labels, oracle: RankOracle::Subspaces { spaces, memo: Mutex::new(HashMap::new()) } })
    }

    /// Uniform matroid `U_{rank,k}` on the given labels.
    pub fn uniform(n: usize, labels: Vec<Vec<i64>>, rank: u32) -> Result<Self> {
        let k = labels.len();
        let table = (0..1u64 << k).map(|m| m.count_ones().min(rank)).collect();
        Polymatroid::from_table(n, labels, table)
    }

    /// Axiom audit: `r(∅) = 0`, monotone and submodular (local form).
    pub fn audit(&self) -> Result<()> {
        let k = self.len();
        if self.rank(0) != 0 {
            return Err(Error::invalid("rank of the empty set must be 0"));
        }
        for s in 0..1u64 << k {
            let rs = self.rank(s);
            for a in (0..k).filter(|&a| s >> a & 1 == 0) {
                let ra = self.rank(s | 1 << a);
                if ra < rs {
                    return Err(Error::invalid(format!("rank is not monotone at subset {:?} + {a}", bits(s).collect::<Vec<_>>())));
                }
                for b in (a + 1..k).filter(|&b| s >> b & 1 == 0) {
                    let rb = self.rank(s | 1 << b);
                    let rab = self.rank(s | 1 << a | 1 << b);
                    if ra + rb < rab + rs {
                        return Err(Error::invalid(format!(
                            "rank is not submodular at subset {:?} with {a}, {b}",
                            bits(s).collect::<Vec<_>>()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Vec<i64>] {
        &self.labels
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn rank(&self, mask: u64) -> u32 {
        match &self.oracle {
            RankOracle::Table(t) => t[mask as usize],
            RankOracle::Subspaces { spaces, memo } => {
                if let Some(&r) = memo.lock().expect("rank memo").get(&mask) {
                    return r;
                }
                let chosen: Vec<Subspace> = bits(mask).map(|i| spaces[i].clone()).collect();
                let r = rank_of_sum(&chosen) as u32;
                memo.lock().expect("rank memo").insert(mask, r);
                r
            }
        }
    }

    pub fn total_rank(&self) -> u32 {
        self.rank(self.full_mask())
    }

    pub fn element_dim(&self, e: usize) -> u32 {
        self.rank(1 << e)
    }

    pub fn is_matroid(&self) -> bool {
        (0..self.len()).all(|e| self.element_dim(e) <= 1)
    }

    pub fn element_of(&self, label: &[i64]) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l.as_slice() == label)
            .ok_or_else(|| Error::invalid(format!("label {label:?} is not in the ground set")))
    }

    /// Rado's condition for a multiset given by element counts.
    pub fn is_admissible_counts(&self, counts: &[u32]) -> bool {
        let support: Vec<usize> = (0..counts.len()).filter(|&e| counts[e] > 0).collect();
        let m = support.len();
        (1..1u64 << m).all(|sub| {
            let mut mask = 0u64;
            let mut total = 0u32;
            for (j, &e) in support.iter().enumerate() {
                if sub >> j & 1 == 1 {
                    mask |= 1 << e;
                    total += counts[e];
                }
            }
            total <= self.rank(mask)
        })
    }

    /// Admissibility of a tuple of labels.
    pub fn is_admissible(&self, tuple: &[Vec<i64>]) -> Result<bool> {
        let mut counts = vec![0u32; self.len()];
        for l in tuple {
            counts[self.element_of(l)?] += 1;
        }
        Ok(self.is_admissible_counts(&counts))
    }

    /// Whether adding one copy of `e` keeps an admissible multiset admissible;
    /// only subsets containing `e` need checking.
    fn can_add(&self, counts: &[u32], e: usize) -> bool {
        let support: Vec<usize> = (0..counts.len()).filter(|&x| counts[x] > 0 && x != e).collect();
        let m = support.len();
        (0..1u64 << m).all(|sub| {
            let mut mask = 1u64 << e;
            let mut total = counts[e] + 1;
            for (j, &x) in support.iter().enumerate() {
                if sub >> j & 1 == 1 {
                    mask |= 1 << x;
                    total += counts[x];
                }
            }
            total <= self.rank(mask)
        })
    }

    /// Greedy admissible sequence minimizing `⟨ξ, α⟩` at every step, ties
    /// broken by label then element index. Its partial sums are the values
    /// `h_{Δ_i}(ξ)`.
    pub fn greedy_min_sequence(&self, xi: &[Rat]) -> Result<Greedy> {
        if xi.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: xi.len() });
        }
        let vals: Vec<Rat> = self.labels.iter().map(|l| rat::dot(xi, &label_point(l))).collect();
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| vals[a].cmp(&vals[b]).then(self.labels[a].cmp(&self.labels[b])).then(a.cmp(&b)));
        let r = self.total_rank();
        let mut counts = vec![0u32; self.len()];
        let mut elements = Vec::with_capacity(r as usize);
        let mut partial_sums = Vec::with_capacity(r as usize);
        let mut acc = Rat::from_integer(0.into());
        for _ in 0..r {
            let e = order
                .iter()
                .copied()
                .find(|&e| self.can_add(&counts, e))
                .ok_or_else(|| Error::invalid("greedy stalled before reaching full rank"))?;
            counts[e] += 1;
            acc += &vals[e];
            elements.push(e);
            partial_sums.push(acc.clone());
        }
        Ok(Greedy { elements, partial_sums })
    }

    /// Natural matroid: `dim{α}` copies of each element, with rank
    /// `r(S̃) = min_{S ⊆ 𝒜} [dim S + #{elements of S̃ outside S}]`.
    /// Returns the matroid and, per copy, the element it came from.
    pub fn natural_matroid(&self) -> Result<(Polymatroid, Vec<usize>)> {
        let mut origin = Vec::new();
        for e in 0..self.len() {
            for _ in 0..self.element_dim(e) {
                origin.push(e);
            }
        }
        let kt = origin.len();
        if kt > 20 {
            return Err(Error::invalid("natural matroid limited to 20 copies"));
        }
        let k = self.len();
        let base_ranks: Vec<u32> = (0..1u64 << k).map(|s| self.rank(s)).collect();
        let mut table = Vec::with_capacity(1 << kt);
        for st in 0..1u64 << kt {
            let mut counts = vec![0u32; k];
            for i in bits(st) {
                counts[origin[i]] += 1;
            }
            let best = (0..1u64 << k)
                .map(|s| base_ranks[s as usize] + (0..k).filter(|&e| s >> e & 1 == 0).map(|e| counts[e]).sum::<u32>())
                .min()
                .unwrap();
            table.push(best);
        }
        let labels = origin.iter().map(|&e| self.labels[e].clone()).collect();
        Ok((Polymatroid::from_table(self.n, labels, table)?, origin))
    }

    /// Dual matroid `r*(S) = |S| + r(E∖S) − r(E)`.
    pub fn dual_matroid(&self) -> Result<Polymatroid> {
        if !self.is_matroid() {
            return Err(Error::precondition("dual requested for a polymatroid that is not a matroid"));
        }
        let full = self.full_mask();
        let r = self.total_rank();
        let table = (0..1u64 << self.len())
            .map(|s| s.count_ones() + self.rank(full & !s) - r)
            .collect();
        Polymatroid::from_table(self.n, self.labels.clone(), table)
    }

    /// `conv{Σ_{i ∈ I} e_i : I independent, |I| = i}` in `ℝ^k`.
    pub fn independence_polytope(&self, i: usize) -> Result<LatticePolytope> {
        if !self.is_matroid() {
            return Err(Error::precondition("independence polytope requested for a non-matroid"));
        }
        let k = self.len();
        let pts: Vec<Point> = (0..1u64 << k)
            .filter(|s| s.count_ones() as usize == i && self.rank(*s) as usize == i)
            .map(|s| (0..k).map(|e| rat::rat((s >> e & 1) as i64)).collect())
            .collect();
        if pts.is_empty() {
            return Err(Error::precondition(format!("no independent set of size {i}")));
        }
        LatticePolytope::convex_hull(pts)
    }

    /// All admissible multisets (as element counts) grouped by size `0..=r`.
    pub fn admissible_multisets(&self) -> Vec<Vec<Vec<u32>>> {
        let r = self.total_rank() as usize;
        let mut out: Vec<Vec<Vec<u32>>> = vec![Vec::new(); r + 1];
        let mut counts = vec![0u32; self.len()];
        self.dfs(0, 0, &mut counts, &mut out);
        out
    }

    fn dfs(&self, start: usize, size: usize, counts: &mut Vec<u32>, out: &mut Vec<Vec<Vec<u32>>>) {
        out[size].push(counts.clone());
        if size + 1 >= out.len() {
            return;
        }
        for e in start..self.len() {
            if counts[e] < self.element_dim(e) && self.can_add(counts, e) {
                counts[e] += 1;
                self.dfs(e, size + 1, counts, out);
                counts[e] -= 1;
            }
        }
    }

    /// The same rank function on relabelled elements.
    pub fn relabel(&self, n: usize, labels: Vec<Vec<i64>>) -> Result<Polymatroid> {
        if labels.len() != self.len() {
            return Err(Error::invalid("relabelling must keep the ground set size"));
        }
        check_labels(n, &labels)?;
        Ok(Polymatroid { n, labels, oracle: self.oracle.clone() })
    }

    pub fn rank_table(&self) -> Vec<u32> {
        (0..1u64 << self.len()).map(|s| self.rank(s)).collect()
    }
}

fn check_labels(n: usize, labels: &[Vec<i64>]) -> Result<()> {
    if let Some(bad) = labels.iter().find(|l| l.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
    }
    Ok(())
}

/// Output of the greedy algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Greedy {
    pub elements: Vec<usize>,
    /// `⟨ξ, α_1 + … + α_i⟩` for `i = 1..r`.
    pub partial_sums: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
struct RankEntry {
    subset: Vec<usize>,
    value: u32,
}

#[derive(Serialize, Deserialize)]
struct PolymatroidJson {
    ground: Vec<Vec<i64>>,
    rank: Vec<RankEntry>,
    closure: String,
}

impl Serialize for Polymatroid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rank = (0..1u64 << self.len())
            .map(|m| RankEntry { subset: bits(m).collect(), value: self.rank(m) })
            .collect();
        PolymatroidJson { ground: self.labels.clone(), rank, closure: "exhaustive".into() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polymatroid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PolymatroidJson::deserialize(d)?;
        if j.closure != "exhaustive" {
            return Err(D::Error::custom(format!("unsupported closure `{}`; only \"exhaustive\" is accepted", j.closure)));
        }
        let k = j.ground.len();
        if k > 24 {
            return Err(D::Error::custom("rank tables are limited to 24 elements"));
        }
        let n = j.ground.first().map_or(0, Vec::len);
        let mut table: Vec<Option<u32>> = vec![None; 1 << k];
        for e in j.rank {
            let mut mask = 0usize;
            for i in e.subset {
                if i >= k {
                    return Err(D::Error::custom(format!("subset index {i} out of range")));
                }
                mask |= 1 << i;
            }
            if table[mask].replace(e.value).is_some_and(|old| old != e.value) {
                return Err(D::Error::custom(format!("conflicting ranks for subset mask {mask}")));
            }
        }
        if table[0].is_none() {
            table[0] = Some(0);
        }
        let table: Vec<u32> = table
            .into_iter()
            .enumerate()
            .map(|(m, v)| v.ok_or_else(|| D::Error::custom(format!("exhaustive rank table misses subset {:?}", bits(m as u64).collect::<Vec<_>>()))))
            .collect::<std::result::Result<_, _>>()?;
        Polymatroid::from_table(n, j.ground, table).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{point, rat};

    fn sq2() -> Polymatroid {
        // ranks of E_(0,0) = ℚ², E_(1,0) = ⟨e1⟩, E_(0,1) = ⟨e2⟩
        let labels = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        let table = vec![0, 2, 1, 2, 1, 2, 2, 2];
        Polymatroid::from_table(2, labels, table).unwrap()
    }

    #[test]
    fn admissibility() {
        let p = sq2();
        assert!(p.is_admissible(&[vec![0, 0], vec![0, 0]]).unwrap());
        assert!(p.is_admissible(&[vec![1, 0], vec![0, 1]]).unwrap());
        assert!(!p.is_admissible(&[vec![1, 0], vec![1, 0]]).unwrap());
        assert!(p.is_admissible(&[vec![5, 5]]).is_err());
    }

    #[test]
    fn greedy_on_sq2() {
        let g = sq2().greedy_min_sequence(&point(&[1, 1])).unwrap();
        assert_eq!(g.partial_sums, vec![rat(0), rat(0)]);
        let g = sq2().greedy_min_sequence(&point(&[-1, -1])).unwrap();
        assert_eq!(g.partial_sums, vec![rat(-1), rat(-2)]);
    }

    #[test]
    fn natural_matroid_of_sq2() {
        let (m, origin) = sq2().natural_matroid().unwrap();
        assert_eq!(m.len(), 4);
        assert_eq!(origin, vec![0, 0, 1, 2]);
        assert_eq!(m.total_rank(), 2);
        assert!(m.is_matroid());
        // the two copies of (0,0) are independent
        assert_eq!(m.rank(0b0011), 2);
        // (1,0) twice is not available, (1,0),(0,1) is a basis
        assert_eq!(m.rank(0b1100), 2);
    }

    #[test]
    fn dual_of_uniform() {
        let labels: Vec<Vec<i64>> = (0..4).map(|i| vec![i]).collect();
        let u34 = Polymatroid::uniform(1, labels.clone(), 3).unwrap();
        let d = u34.dual_matroid().unwrap();
        assert_eq!(d.rank_table(), Polymatroid::uniform(1, labels, 1).unwrap().rank_table());
        assert!(sq2().dual_matroid().is_err());
    }

    #[test]
    fn audit_rejects_non_submodular() {
        let labels = vec![vec![0], vec![1]];
        assert!(Polymatroid::from_table(1, labels.clone(), vec![0, 1, 1, 3]).is_err());
        assert!(Polymatroid::from_table(1, labels, vec![0, 2, 1, 1]).is_err());
    }

    #[test]
    fn independence_polytope_of_u24() {
        let labels = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        let u24 = Polymatroid::uniform(2, labels, 2).unwrap();
        let bp2 = u24.independence_polytope(2).unwrap();
        assert_eq!(bp2.vertices().len(), 6);
        assert_eq!(u24.independence_polytope(1).unwrap().vertices().len(), 4);
        assert!(u24.independence_polytope(3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = sq2();
        let s = serde_json::to_string(&p).unwrap();
        let q: Polymatroid = serde_json::from_str(&s).unwrap();
        assert_eq!(q.rank_table(), p.rank_table());
        assert!(serde_json::from_str::<Polymatroid>(&s.replace("exhaustive", "partial")).is_err());
    }
}
