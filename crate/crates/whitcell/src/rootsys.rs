//! Root-system data for the classical types A, B, C, D and for G2.
//!
//! Roots are stored as integer tuples: the standard orthogonal realization
//! (epsilon coordinates) for classical types, and simple-root-basis
//! coordinates for G2. Exponents are hardcoded from the classical tables and
//! validated against the structural invariants (sum of exponents = number of
//! positive roots, product of exponents+1 = group order).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    G2,
}

impl TypeLabel {
    pub fn parse(s: &str) -> Result<TypeLabel> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(TypeLabel::A),
            "B" => Ok(TypeLabel::B),
            "C" => Ok(TypeLabel::C),
            "D" => Ok(TypeLabel::D),
            "G2" | "G" => Ok(TypeLabel::G2),
            other => Err(Error::UnsupportedType(other.to_string())),
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeLabel::A => write!(f, "A"),
            TypeLabel::B => write!(f, "B"),
            TypeLabel::C => write!(f, "C"),
            TypeLabel::D => write!(f, "D"),
            TypeLabel::G2 => write!(f, "G2"),
        }
    }
}

/// Distinguishes the standard realization from the Langlands-dual one. Only
/// G2 needs the flag: its dual is again G2 but with the long/short roles of
/// the two simple roots exchanged. For classical types the dual is another
/// classical type and `Standard` is always used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Standard,
    Dual,
}

const FORMAT_VERSION: u32 = 1;

/// Immutable root-system datum; safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanDatum {
    pub version: u32,
    pub type_label: TypeLabel,
    pub rank: usize,
    pub orientation: Orientation,
    /// Simple roots in epsilon coordinates (classical) or root-basis
    /// coordinates (G2), Bourbaki labelling.
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    /// `cartan_matrix[i][j]` = pairing of the i-th simple coroot with the
    /// j-th simple root.
    pub cartan_matrix: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i64>>,
    /// Exponents m_1 <= ... <= m_r.
    pub exponents: Vec<u64>,
    pub weyl_order: u64,
}

fn unit(dim: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

fn e_diff(dim: usize, i: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v[j] = -1;
    v
}

fn e_sum(dim: usize, i: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v[j] += 1;
    v
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Builds the datum for the given type and rank (A: r >= 1, B/C: r >= 2,
/// D: r >= 3 with D_3 isomorphic to A_3, G2: r = 2).
pub fn build_cartan(type_label: TypeLabel, rank: usize) -> Result<CartanDatum> {
    let ok = match type_label {
        TypeLabel::A => rank >= 1,
        TypeLabel::B | TypeLabel::C => rank >= 2,
        TypeLabel::D => rank >= 3,
        TypeLabel::G2 => rank == 2,
    };
    if !ok {
        return Err(Error::InvalidRank {
            type_label: type_label.to_string(),
            rank,
        });
    }
    let datum = match type_label {
        TypeLabel::A => build_a(rank),
        TypeLabel::B => build_bc(rank, TypeLabel::B),
        TypeLabel::C => build_bc(rank, TypeLabel::C),
        TypeLabel::D => build_d(rank),
        TypeLabel::G2 => build_g2(Orientation::Standard),
    };
    datum.validate()?;
    Ok(datum)
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn classical_cartan(simple_roots: &[Vec<i64>], simple_coroots: &[Vec<i64>]) -> Vec<Vec<i64>> {
    simple_coroots
        .iter()
        .map(|cv| simple_roots.iter().map(|a| dot(cv, a)).collect())
        .collect()
}

fn build_a(r: usize) -> CartanDatum {
    let dim = r + 1;
    let simple_roots: Vec<_> = (0..r).map(|i| e_diff(dim, i, i + 1)).collect();
    let simple_coroots = simple_roots.clone();
    let mut positive_roots = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            positive_roots.push(e_diff(dim, i, j));
        }
    }
    CartanDatum {
        version: FORMAT_VERSION,
        type_label: TypeLabel::A,
        rank: r,
        orientation: Orientation::Standard,
        cartan_matrix: classical_cartan(&simple_roots, &simple_coroots),
        simple_roots,
        simple_coroots,
        positive_roots,
        exponents: (1..=r as u64).collect(),
        weyl_order: factorial(r + 1),
    }
}

fn build_bc(r: usize, which: TypeLabel) -> CartanDatum {
    let mut simple_roots: Vec<_> = (0..r - 1).map(|i| e_diff(r, i, i + 1)).collect();
    let mut simple_coroots = simple_roots.clone();
    match which {
        TypeLabel::B => {
            simple_roots.push(unit(r, r - 1));
            let mut two = unit(r, r - 1);
            two[r - 1] = 2;
            simple_coroots.push(two);
        }
        TypeLabel::C => {
            let mut two = unit(r, r - 1);
            two[r - 1] = 2;
            simple_roots.push(two);
            simple_coroots.push(unit(r, r - 1));
        }
        _ => unreachable!(),
    }
    let mut positive_roots = Vec::new();
    for i in 0..r {
        for j in (i + 1)..r {
            positive_roots.push(e_diff(r, i, j));
            positive_roots.push(e_sum(r, i, j));
        }
    }
    for i in 0..r {
        if which == TypeLabel::B {
            positive_roots.push(unit(r, i));
        } else {
            let mut two = unit(r, i);
            two[i] = 2;
            positive_roots.push(two);
        }
    }
    CartanDatum {
        version: FORMAT_VERSION,
        type_label: which,
        rank: r,
        orientation: Orientation::Standard,
        cartan_matrix: classical_cartan(&simple_roots, &simple_coroots),
        simple_roots,
        simple_coroots,
        positive_roots,
        exponents: (0..r as u64).map(|i| 2 * i + 1).collect(),
        weyl_order: (1u64 << r) * factorial(r),
    }
}

fn build_d(r: usize) -> CartanDatum {
    let mut simple_roots: Vec<_> = (0..r - 1).map(|i| e_diff(r, i, i + 1)).collect();
    simple_roots.push(e_sum(r, r - 2, r - 1));
    let simple_coroots = simple_roots.clone();
    let mut positive_roots = Vec::new();
    for i in 0..r {
        for j in (i + 1)..r {
            positive_roots.push(e_diff(r, i, j));
            positive_roots.push(e_sum(r, i, j));
        }
    }
    let mut exponents: Vec<u64> = (0..r as u64 - 1).map(|i| 2 * i + 1).collect();
    exponents.push(r as u64 - 1);
    exponents.sort();
    CartanDatum {
        version: FORMAT_VERSION,
        type_label: TypeLabel::D,
        rank: r,
        orientation: Orientation::Standard,
        cartan_matrix: classical_cartan(&simple_roots, &simple_coroots),
        simple_roots,
        simple_coroots,
        positive_roots,
        exponents,
        weyl_order: (1u64 << (r - 1)) * factorial(r),
    }
}

fn build_g2(orientation: Orientation) -> CartanDatum {
    // Bourbaki G2: alpha_1 short, alpha_2 long. Roots are stored in the
    // simple-root basis; the dual orientation swaps the roles.
    let (cartan, positives) = match orientation {
        Orientation::Standard => (
            vec![vec![2, -3], vec![-1, 2]],
            vec![
                vec![1, 0],
                vec![0, 1],
                vec![1, 1],
                vec![2, 1],
                vec![3, 1],
                vec![3, 2],
            ],
        ),
        Orientation::Dual => (
            vec![vec![2, -1], vec![-3, 2]],
            vec![
                vec![1, 0],
                vec![0, 1],
                vec![1, 1],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
            ],
        ),
    };
    CartanDatum {
        version: FORMAT_VERSION,
        type_label: TypeLabel::G2,
        rank: 2,
        orientation,
        simple_roots: vec![vec![1, 0], vec![0, 1]],
        simple_coroots: vec![vec![1, 0], vec![0, 1]],
        cartan_matrix: cartan,
        positive_roots: positives,
        exponents: vec![1, 5],
        weyl_order: 12,
    }
}

impl CartanDatum {
    fn validate(&self) -> Result<()> {
        let sum: u64 = self.exponents.iter().sum();
        if sum as usize != self.positive_roots.len() {
            return Err(Error::Inconsistency(format!(
                "exponent sum {} != positive root count {}",
                sum,
                self.positive_roots.len()
            )));
        }
        let prod: u64 = self.exponents.iter().map(|m| m + 1).product();
        if prod != self.weyl_order {
            return Err(Error::Inconsistency(format!(
                "product of (m_i+1) = {} != weyl order {}",
                prod, self.weyl_order
            )));
        }
        for (i, row) in self.cartan_matrix.iter().enumerate() {
            if row[i] != 2 {
                return Err(Error::Inconsistency("cartan diagonal != 2".into()));
            }
        }
        Ok(())
    }

    /// Langlands dual: swaps B and C, fixes A and D, and exchanges the
    /// long/short roles of the two G2 simple roots. Simple-root index i maps
    /// to simple-coroot index i.
    pub fn dual(&self) -> CartanDatum {
        match (self.type_label, self.orientation) {
            (TypeLabel::A, _) => build_a(self.rank),
            (TypeLabel::B, _) => build_bc(self.rank, TypeLabel::C),
            (TypeLabel::C, _) => build_bc(self.rank, TypeLabel::B),
            (TypeLabel::D, _) => build_d(self.rank),
            (TypeLabel::G2, Orientation::Standard) => build_g2(Orientation::Dual),
            (TypeLabel::G2, Orientation::Dual) => build_g2(Orientation::Standard),
        }
    }

    /// Table of degrees for which the covering-group formulas apply:
    /// type A: gcd(n, r+1) = 1; types B, C, D: n odd; G2: n coprime to 6.
    pub fn oasitic(&self, n: u64) -> bool {
        assert!(n >= 1);
        match self.type_label {
            TypeLabel::A => num::integer::gcd(n, self.rank as u64 + 1) == 1,
            TypeLabel::B | TypeLabel::C | TypeLabel::D => n % 2 == 1,
            TypeLabel::G2 => n % 2 != 0 && n % 3 != 0,
        }
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("datum serializes")
    }
}

/// Exponent lists (and group orders) for the exceptional types that only
/// participate in the closed-form extreme polynomials.
pub fn exceptional_exponents(label: &str) -> Result<(Vec<u64>, u64)> {
    let exps: Vec<u64> = match label.trim().to_ascii_uppercase().as_str() {
        "F4" => vec![1, 5, 7, 11],
        "E6" => vec![1, 4, 5, 7, 8, 11],
        "E7" => vec![1, 5, 7, 9, 11, 13, 17],
        "E8" => vec![1, 7, 11, 13, 17, 19, 23, 29],
        other => return Err(Error::UnsupportedType(other.to_string())),
    };
    let order = exps.iter().map(|m| m + 1).product();
    Ok((exps, order))
}
