//! Canonical input objects shipped as JSON fixtures, plus a loader that
//! recognizes the three input shapes by their keys.

use crate::arrangements::{subspace_of, HyperplaneArrangement};
use crate::charseq::InvariantSubspace;
use crate::error::{Error, Result};
use crate::polyhedra::LatticePolytope;
use crate::polymat::Polymatroid;
use crate::rat::{self, point};
use serde::Serialize;

pub const NAMES: [&str; 8] = ["sq2", "u23", "hyp4", "hyp4-forms", "vamos6", "fano", "u24", "u23-matroid"];

/// Any input object accepted by the command line.
#[derive(Clone, Debug)]
pub enum Input {
    Subspace(InvariantSubspace),
    Polymatroid(Polymatroid),
    Arrangement(HyperplaneArrangement),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Subspace(_) => "invariant-subspace",
            Input::Polymatroid(_) => "polymatroid",
            Input::Arrangement(_) => "arrangement",
        }
    }

    /// Polymatroid of the input; arrangements go through `L_ℋ`.
    pub fn polymatroid(&self) -> Result<Polymatroid> {
        Ok(match self {
            Input::Subspace(l) => l.polymatroid().clone(),
            Input::Polymatroid(p) => p.clone(),
            Input::Arrangement(a) => subspace_of(a)?.polymatroid().clone(),
        })
    }

    /// The invariant subspace, when the input has one.
    pub fn subspace(&self) -> Result<InvariantSubspace> {
        match self {
            Input::Subspace(l) => Ok(l.clone()),
            Input::Arrangement(a) => subspace_of(a),
            Input::Polymatroid(_) => Err(Error::precondition("this command needs an invariant subspace, not a bare polymatroid")),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Input::Subspace(l) => serde_json::to_value(l),
            Input::Polymatroid(p) => serde_json::to_value(p),
            Input::Arrangement(a) => serde_json::to_value(a),
        }
        .expect("fixtures serialize")
    }
}

impl Serialize for Input {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Parses an input object: `characters` marks an invariant subspace,
/// `ground` a polymatroid and `forms` an arrangement.
pub fn parse_input(text: &str) -> Result<Input> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let obj = v.as_object().ok_or_else(|| Error::Parse("input must be a JSON object".into()))?;
    if obj.contains_key("characters") {
        Ok(Input::Subspace(serde_json::from_value(v)?))
    } else if obj.contains_key("ground") {
        Ok(Input::Polymatroid(serde_json::from_value(v)?))
    } else if obj.contains_key("forms") {
        let a: HyperplaneArrangement = serde_json::from_value(v)?;
        a.validate()?;
        Ok(Input::Arrangement(a))
    } else {
        Err(Error::Parse("unrecognized input: expected a `characters`, `ground` or `forms` key".into()))
    }
}

pub fn sq2() -> InvariantSubspace {
    InvariantSubspace::new(
        2,
        2,
        vec![vec![0, 0], vec![1, 0], vec![0, 1]],
        vec![vec![point(&[1, 0]), point(&[0, 1])], vec![point(&[1, 0])], vec![point(&[0, 1])]],
        false,
    )
    .expect("sq2 is valid")
}

pub fn u23() -> InvariantSubspace {
    InvariantSubspace::new(
        2,
        2,
        vec![vec![1, 0], vec![0, 1], vec![1, 1]],
        vec![vec![point(&[1, 0])], vec![point(&[0, 1])], vec![point(&[1, 1])]],
        false,
    )
    .expect("u23 is valid")
}

/// Four lines in general position in `ℙ²`.
pub fn hyp4_forms() -> HyperplaneArrangement {
    HyperplaneArrangement::new(2, vec![point(&[1, 0, 0]), point(&[0, 1, 0]), point(&[0, 0, 1]), point(&[1, 1, 1])])
        .expect("hyp4 forms are valid")
}

pub fn hyp4() -> InvariantSubspace {
    subspace_of(&hyp4_forms()).expect("hyp4 is valid")
}

/// `U_{2,4}` on `(0,0), (1,0), (0,1), (1,1)`.
pub fn u24() -> Polymatroid {
    Polymatroid::uniform(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]], 2).expect("u24 is valid")
}

/// `U_{2,3}` labelled like the `u23` subspace.
pub fn u23_matroid() -> Polymatroid {
    Polymatroid::uniform(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]], 2).expect("u23 is valid")
}

/// Fano plane: the seven nonzero vectors of `𝔽_2^3` as labels, rank over `𝔽_2`.
pub fn fano() -> Polymatroid {
    let labels: Vec<Vec<i64>> = (1..8i64).map(|v| vec![v & 1, v >> 1 & 1, v >> 2 & 1]).collect();
    let table = (0..1u64 << 7)
        .map(|mask| {
            // rank of the span over 𝔽_2: size of the generated subgroup is 2^rank
            let mut span: u32 = 1; // bitset over the 8 vectors, containing 0
            for i in 0..7 {
                if mask >> i & 1 == 1 {
                    let v = i + 1;
                    let mut next = span;
                    for w in 0..8 {
                        if span >> w & 1 == 1 {
                            next |= 1 << (w ^ v);
                        }
                    }
                    span = next;
                }
            }
            span.count_ones().trailing_zeros()
        })
        .collect();
    Polymatroid::from_table(3, labels, table).expect("fano is valid")
}

/// Vámos ground set `a a' b b' c c' d d'` in this order.
pub const VAMOS_LABELS: [[i64; 6]; 8] = [
    [0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1],
    [1, 1, 1, 1, 1, 1],
];

/// Vámos matroid: rank `min(|S|, 4)` except the five circuit-hyperplanes
/// `aa'bb'`, `aa'cc'`, `aa'dd'`, `bb'cc'`, `bb'dd'` of rank 3.
pub fn vamos6() -> Polymatroid {
    let pair = |i: u64| 0b11u64 << (2 * i);
    let planes = [pair(0) | pair(1), pair(0) | pair(2), pair(0) | pair(3), pair(1) | pair(2), pair(1) | pair(3)];
    let table = (0..1u64 << 8)
        .map(|m| if planes.contains(&m) { 3 } else { m.count_ones().min(4) })
        .collect();
    Polymatroid::from_table(6, VAMOS_LABELS.iter().map(|l| l.to_vec()).collect(), table).expect("vamos is valid")
}

/// Lattice segments used with the Vámos fixture.
pub fn vamos_segments() -> [LatticePolytope; 2] {
    let seg = |v: [i64; 6]| {
        LatticePolytope::convex_hull(vec![rat::from_i64s(&[0; 6]), rat::from_i64s(&v)]).expect("segment")
    };
    [seg([1, 1, 0, 0, 0, 0]), seg([0, 0, 1, 0, 1, 1])]
}

/// Fixture by name; unknown names are an error.
pub fn fixture(name: &str) -> Result<Input> {
    Ok(match name {
        "sq2" => Input::Subspace(sq2()),
        "u23" => Input::Subspace(u23()),
        "hyp4" => Input::Subspace(hyp4()),
        "hyp4-forms" => Input::Arrangement(hyp4_forms()),
        "vamos6" => Input::Polymatroid(vamos6()),
        "fano" => Input::Polymatroid(fano()),
        "u24" => Input::Polymatroid(u24()),
        "u23-matroid" => Input::Polymatroid(u23_matroid()),
        other => return Err(Error::invalid(format!("unknown fixture `{other}`; known: {}", NAMES.join(", ")))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_round_trips() {
        for name in NAMES {
            let f = fixture(name).unwrap();
            let text = serde_json::to_string(&f).unwrap();
            let back = parse_input(&text).unwrap();
            assert_eq!(back.kind(), f.kind());
            assert_eq!(back.polymatroid().unwrap().rank_table(), f.polymatroid().unwrap().rank_table(), "{name}");
        }
        assert!(fixture("nope").is_err());
    }

    #[test]
    fn matroid_shapes() {
        let v = vamos6();
        assert!(v.is_matroid());
        assert_eq!(v.total_rank(), 4);
        assert_eq!(v.rank(0b1111), 3);
        assert_eq!(v.rank(0b1111_0000), 4);
        let f = fano();
        assert_eq!(f.total_rank(), 3);
        assert_eq!((0..1u64 << 7).filter(|&m| m.count_ones() == 3 && f.rank(m) == 2).count(), 7);
    }
}
