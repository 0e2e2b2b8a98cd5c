//! Exact character theory for the supported Weyl groups.
//!
//! Conjugacy classes are labelled by cycle types (signed cycle types for the
//! hyperoctahedral family, with a split tag for the degenerate type-D
//! classes). Character tables come from the Murnaghan-Nakayama rule for type
//! A, its wreath-product extension for B/C, restriction-and-splitting for
//! type D and an explicit table for G2. All values are exact integers.

use crate::error::{Error, Result};
use crate::partition::{BiPartition, Partition};
use crate::rootsys::{build_cartan, CartanDatum, TypeLabel};
use crate::weyl::{
    self, enumerate_group, signed_cycles, simple_reflection, tau_twist, Family, SimpleSet,
    WeylElement,
};
use num::{BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

pub const TABLE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SplitTag {
    I,
    II,
}

impl fmt::Display for SplitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitTag::I => write!(f, "I"),
            SplitTag::II => write!(f, "II"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum G2Class {
    Id,
    Rot6,
    Rot3,
    MinusId,
    ReflOne,
    ReflTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum G2Irrep {
    Trivial,
    Sign,
    LinOne,
    LinTwo,
    Refl,
    Rot,
}

/// Conjugacy class label; bijective with the classes of the group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConjClassLabel {
    /// Cycle type, a partition of r+1.
    A(Partition),
    /// (positive-cycle type, negative-cycle type).
    BC { pos: Partition, neg: Partition },
    /// As BC (neg has an even number of parts), plus a tag on the degenerate
    /// all-even all-positive classes.
    D {
        pos: Partition,
        neg: Partition,
        split: Option<SplitTag>,
    },
    G2(G2Class),
}

impl fmt::Display for ConjClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjClassLabel::A(p) => write!(f, "{}", p),
            ConjClassLabel::BC { pos, neg } => write!(f, "({}|{})", pos, neg),
            ConjClassLabel::D { pos, neg, split } => {
                write!(f, "({}|{})", pos, neg)?;
                if let Some(t) = split {
                    write!(f, "^{}", t)?;
                }
                Ok(())
            }
            ConjClassLabel::G2(c) => write!(f, "{:?}", c),
        }
    }
}

/// Irreducible-character label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IrrLabel {
    /// Partition of r+1; trivial = (r+1), sign = (1^{r+1}).
    A(Partition),
    /// Bipartition (xi; eta) with |xi|+|eta| = r; trivial = ((r); empty),
    /// sign = (empty; (1^r)).
    BC(BiPartition),
    /// Unordered bipartition stored with first <= second; degenerate labels
    /// (xi = eta) carry a split tag.
    D {
        pair: BiPartition,
        split: Option<SplitTag>,
    },
    G2(G2Irrep),
}

impl fmt::Display for IrrLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrLabel::A(p) => write!(f, "{}", p),
            IrrLabel::BC(bp) => write!(f, "{}", bp),
            IrrLabel::D { pair, split } => {
                write!(f, "{{{};{}}}", pair.first, pair.second)?;
                if let Some(t) = split {
                    write!(f, "^{}", t)?;
                }
                Ok(())
            }
            IrrLabel::G2(x) => write!(f, "{:?}", x),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConjClass {
    pub label: ConjClassLabel,
    pub size: u64,
    pub rep: WeylElement,
    /// (-1)^{l(w)} on this class.
    pub sign: i64,
    /// d(w) on this class.
    pub fixed_dim: usize,
}

/// Conjugacy-class data for one group, shared behind an Arc.
#[derive(Debug)]
pub struct GroupClasses {
    pub family: Family,
    pub rank: usize,
    pub order: u64,
    pub classes: Vec<ConjClass>,
    label_index: HashMap<ConjClassLabel, usize>,
    /// Full element->class map, used for G2 where labels are not derived
    /// from cycle types.
    g2_index: HashMap<u64, usize>,
    pub identity_class: usize,
}

impl GroupClasses {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Class label of an arbitrary element.
    pub fn label_of(&self, w: &WeylElement) -> ConjClassLabel {
        debug_assert_eq!(w.family(), self.family);
        match self.family {
            Family::A => {
                let cycles = signed_cycles(w.window().unwrap());
                ConjClassLabel::A(Partition::from_unsorted(
                    cycles.iter().map(|(l, _)| *l as u32).collect(),
                ))
            }
            Family::BC => {
                let (pos, neg) = signed_cycle_type(w);
                ConjClassLabel::BC { pos, neg }
            }
            Family::D => {
                let (pos, neg) = signed_cycle_type(w);
                let split = if neg.is_empty() && pos.parts().iter().all(|p| p % 2 == 0) {
                    Some(if split_parity(w.window().unwrap()) {
                        SplitTag::II
                    } else {
                        SplitTag::I
                    })
                } else {
                    None
                };
                ConjClassLabel::D { pos, neg, split }
            }
            Family::G2 => self.classes[self.g2_index[&w.key()]].label.clone(),
        }
    }

    pub fn class_index(&self, w: &WeylElement) -> usize {
        match self.family {
            Family::G2 => self.g2_index[&w.key()],
            _ => self.label_index[&self.label_of(w)],
        }
    }

    pub fn index_of_label(&self, label: &ConjClassLabel) -> Option<usize> {
        self.label_index.get(label).copied()
    }
}

fn signed_cycle_type(w: &WeylElement) -> (Partition, Partition) {
    let cycles = signed_cycles(w.window().unwrap());
    let pos: Vec<u32> = cycles
        .iter()
        .filter(|(_, p)| *p)
        .map(|(l, _)| *l as u32)
        .collect();
    let neg: Vec<u32> = cycles
        .iter()
        .filter(|(_, p)| !*p)
        .map(|(l, _)| *l as u32)
        .collect();
    (Partition::from_unsorted(pos), Partition::from_unsorted(neg))
}

/// Parity invariant separating the two D-classes of an all-even all-positive
/// cycle type: the parity of the sum, over all cycles, of the 1-based edge
/// positions carrying a negative sign. Conjugation by an even number of sign
/// changes preserves it; a single sign change toggles it.
fn split_parity(win: &[i32]) -> bool {
    let n = win.len();
    let mut seen = vec![false; n];
    let mut parity = 0usize;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cur = start;
        let mut edge = 0usize;
        loop {
            seen[cur] = true;
            edge += 1;
            let v = win[cur];
            if v < 0 {
                parity += edge;
            }
            cur = (v.unsigned_abs() - 1) as usize;
            if cur == start {
                break;
            }
        }
    }
    parity % 2 == 1
}

/// Canonical representative with the given signed cycle type: consecutive
/// blocks, positive cycles first, all signs positive except the closing edge
/// of each negative block.
fn canonical_rep(family: Family, rank: usize, pos: &Partition, neg: &Partition) -> WeylElement {
    let n = match family {
        Family::A => rank + 1,
        _ => rank,
    };
    let mut win = vec![0i32; n];
    let mut c = 1usize;
    for &k in pos.parts() {
        let k = k as usize;
        for t in 0..k - 1 {
            win[c - 1 + t] = (c + t + 1) as i32;
        }
        win[c - 1 + k - 1] = c as i32;
        c += k;
    }
    for &k in neg.parts() {
        let k = k as usize;
        for t in 0..k - 1 {
            win[c - 1 + t] = (c + t + 1) as i32;
        }
        win[c - 1 + k - 1] = -(c as i32);
        c += k;
    }
    debug_assert_eq!(c, n + 1);
    WeylElement::from_window(family, win).expect("canonical window is valid")
}

fn centralizer_order_bc(pos: &Partition, neg: &Partition) -> u64 {
    let mut z = 1u64;
    for p in [pos, neg] {
        let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
        for &k in p.parts() {
            *mult.entry(k).or_insert(0) += 1;
        }
        for (k, m) in mult {
            z *= (2 * k as u64).pow(m) * (1..=m as u64).product::<u64>();
        }
    }
    z
}

fn centralizer_order_a(lambda: &Partition) -> u64 {
    let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
    for &k in lambda.parts() {
        *mult.entry(k).or_insert(0) += 1;
    }
    let mut z = 1u64;
    for (k, m) in mult {
        z *= (k as u64).pow(m) * (1..=m as u64).product::<u64>();
    }
    z
}

fn build_classes(family: Family, rank: usize) -> Result<GroupClasses> {
    let order: u64 = match family {
        Family::A => (1..=rank as u64 + 1).product(),
        Family::BC => (1u64 << rank) * (1..=rank as u64).product::<u64>(),
        Family::D => (1u64 << (rank - 1)) * (1..=rank as u64).product::<u64>(),
        Family::G2 => 12,
    };
    let mut classes: Vec<ConjClass> = Vec::new();
    let mut g2_index = HashMap::new();
    match family {
        Family::A => {
            for lambda in Partition::all(rank as u32 + 1) {
                let rep = canonical_rep(family, rank, &lambda, &Partition::empty());
                classes.push(ConjClass {
                    label: ConjClassLabel::A(lambda.clone()),
                    size: order / centralizer_order_a(&lambda),
                    sign: if weyl::length(&rep) % 2 == 0 { 1 } else { -1 },
                    fixed_dim: weyl::fixed_dim(&rep),
                    rep,
                });
            }
        }
        Family::BC => {
            for bp in BiPartition::all(rank as u32) {
                let (pos, neg) = (bp.first, bp.second);
                let rep = canonical_rep(family, rank, &pos, &neg);
                classes.push(ConjClass {
                    label: ConjClassLabel::BC {
                        pos: pos.clone(),
                        neg: neg.clone(),
                    },
                    size: order / centralizer_order_bc(&pos, &neg),
                    sign: if weyl::length(&rep) % 2 == 0 { 1 } else { -1 },
                    fixed_dim: weyl::fixed_dim(&rep),
                    rep,
                });
            }
        }
        Family::D => {
            for bp in BiPartition::all(rank as u32) {
                let (pos, neg) = (bp.first, bp.second);
                if neg.len() % 2 != 0 {
                    continue;
                }
                let b_size = (2 * order) / centralizer_order_bc(&pos, &neg);
                let splits = neg.is_empty() && pos.parts().iter().all(|p| p % 2 == 0);
                if splits {
                    let rep_one = canonical_rep(family, rank, &pos, &neg);
                    let rep_two = tau_twist(&rep_one)?;
                    debug_assert!(!split_parity(rep_one.window().unwrap()));
                    debug_assert!(split_parity(rep_two.window().unwrap()));
                    for (tag, rep) in [(SplitTag::I, rep_one), (SplitTag::II, rep_two)] {
                        classes.push(ConjClass {
                            label: ConjClassLabel::D {
                                pos: pos.clone(),
                                neg: neg.clone(),
                                split: Some(tag),
                            },
                            size: b_size / 2,
                            sign: if weyl::length(&rep) % 2 == 0 { 1 } else { -1 },
                            fixed_dim: weyl::fixed_dim(&rep),
                            rep,
                        });
                    }
                } else {
                    let rep = canonical_rep(family, rank, &pos, &neg);
                    classes.push(ConjClass {
                        label: ConjClassLabel::D {
                            pos: pos.clone(),
                            neg: neg.clone(),
                            split: None,
                        },
                        size: b_size,
                        sign: if weyl::length(&rep) % 2 == 0 { 1 } else { -1 },
                        fixed_dim: weyl::fixed_dim(&rep),
                        rep,
                    });
                }
            }
        }
        Family::G2 => {
            let datum = build_cartan(TypeLabel::G2, 2)?;
            let elements = enumerate_group(&datum)?;
            let s1 = simple_reflection(&datum, 1)?;
            // Partition the 12 elements by brute conjugation.
            let mut assigned: HashMap<u64, usize> = HashMap::new();
            let mut raw: Vec<Vec<WeylElement>> = Vec::new();
            for w in &elements {
                if assigned.contains_key(&w.key()) {
                    continue;
                }
                let idx = raw.len();
                let mut members = Vec::new();
                for g in &elements {
                    let conj =
                        weyl::multiply(&weyl::multiply(g, w)?, &weyl::inverse(g))?;
                    if assigned.insert(conj.key(), idx).is_none() {
                        members.push(conj);
                    }
                }
                raw.push(members);
            }
            // Name the six classes by order and reflection content.
            let mut named: Vec<(G2Class, Vec<WeylElement>)> = Vec::new();
            for members in raw {
                let rep = &members[0];
                let ord = element_order(rep);
                let kind = match ord {
                    1 => G2Class::Id,
                    6 => G2Class::Rot6,
                    3 => G2Class::Rot3,
                    2 => {
                        if weyl::fixed_dim(rep) == 0 {
                            G2Class::MinusId
                        } else if members.contains(&s1) {
                            G2Class::ReflOne
                        } else {
                            G2Class::ReflTwo
                        }
                    }
                    _ => unreachable!(),
                };
                named.push((kind, members));
            }
            named.sort_by_key(|(k, _)| *k);
            for (idx, (kind, members)) in named.iter().enumerate() {
                let mut sorted = members.clone();
                sorted.sort();
                let rep = sorted[0].clone();
                for m in members {
                    g2_index.insert(m.key(), idx);
                }
                classes.push(ConjClass {
                    label: ConjClassLabel::G2(*kind),
                    size: members.len() as u64,
                    sign: if weyl::length(&rep) % 2 == 0 { 1 } else { -1 },
                    fixed_dim: weyl::fixed_dim(&rep),
                    rep,
                });
            }
        }
    }
    let total: u64 = classes.iter().map(|c| c.size).sum();
    if total != order {
        return Err(Error::Inconsistency(format!(
            "class sizes sum to {} != |W| = {}",
            total, order
        )));
    }
    let label_index = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.label.clone(), i))
        .collect();
    let identity_class = classes
        .iter()
        .position(|c| c.rep.is_identity())
        .expect("identity class present");
    Ok(GroupClasses {
        family,
        rank,
        order,
        classes,
        label_index,
        g2_index,
        identity_class,
    })
}

fn element_order(w: &WeylElement) -> usize {
    let mut acc = w.clone();
    let mut n = 1;
    while !acc.is_identity() {
        acc = weyl::multiply(&acc, w).unwrap();
        n += 1;
    }
    n
}

fn classes_cache() -> &'static Mutex<HashMap<(Family, usize), Arc<GroupClasses>>> {
    static CACHE: OnceLock<Mutex<HashMap<(Family, usize), Arc<GroupClasses>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Conjugacy classes of the datum's Weyl group, cached process-wide.
pub fn conjugacy_classes(datum: &CartanDatum) -> Result<Arc<GroupClasses>> {
    group_classes(Family::of(datum), datum.rank)
}

pub fn group_classes(family: Family, rank: usize) -> Result<Arc<GroupClasses>> {
    if rank > family.max_enum_rank() {
        return Err(Error::RankTooLarge {
            rank,
            bound: family.max_enum_rank(),
        });
    }
    if let Some(hit) = classes_cache().lock().unwrap().get(&(family, rank)) {
        return Ok(hit.clone());
    }
    let built = Arc::new(build_classes(family, rank)?);
    classes_cache()
        .lock()
        .unwrap()
        .entry((family, rank))
        .or_insert_with(|| built.clone());
    Ok(built)
}

/// Exact class function on a group, aligned with its class order.
#[derive(Debug, Clone)]
pub struct ClassFunction {
    pub classes: Arc<GroupClasses>,
    pub values: Vec<BigRational>,
}

impl ClassFunction {
    pub fn zero(classes: Arc<GroupClasses>) -> ClassFunction {
        let n = classes.class_count();
        ClassFunction {
            classes,
            values: vec![BigRational::zero(); n],
        }
    }

    pub fn from_ints(classes: Arc<GroupClasses>, values: Vec<i64>) -> ClassFunction {
        ClassFunction {
            values: values
                .into_iter()
                .map(|v| BigRational::from_integer(v.into()))
                .collect(),
            classes,
        }
    }

    fn same_group(&self, other: &ClassFunction) -> Result<()> {
        if self.classes.family != other.classes.family || self.classes.rank != other.classes.rank {
            return Err(Error::DatumMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.same_group(other)?;
        Ok(ClassFunction {
            classes: self.classes.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.same_group(other)?;
        Ok(ClassFunction {
            classes: self.classes.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Value at the identity.
    pub fn degree(&self) -> BigRational {
        self.values[self.classes.identity_class].clone()
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    /// Pointwise product with the sign character; an involution.
    pub fn tensor_sign(&self) -> ClassFunction {
        ClassFunction {
            classes: self.classes.clone(),
            values: self
                .values
                .iter()
                .zip(&self.classes.classes)
                .map(|(v, c)| v * BigRational::from_integer(c.sign.into()))
                .collect(),
        }
    }
}

/// Class-size-weighted inner product (1/|W|) sum size * f * g.
pub fn inner_product(f: &ClassFunction, g: &ClassFunction) -> Result<BigRational> {
    f.same_group(g)?;
    let mut acc = BigRational::zero();
    for ((a, b), c) in f.values.iter().zip(&g.values).zip(&f.classes.classes) {
        acc += a * b * BigRational::from_integer(c.size.into());
    }
    Ok(acc / BigRational::from_integer(f.classes.order.into()))
}

// ---------------------------------------------------------------------------
// Murnaghan-Nakayama machinery
// ---------------------------------------------------------------------------

/// Removes all border strips of size k, returning (smaller partition, sign).
fn border_strips(lambda: &Partition, k: u32) -> Vec<(Partition, i64)> {
    let ell = lambda.len();
    if k == 0 || lambda.weight() < k {
        return Vec::new();
    }
    // Beta numbers: strictly decreasing.
    let beta: Vec<i64> = lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p as i64 + (ell - 1 - i) as i64)
        .collect();
    let mut out = Vec::new();
    for (pos, &b) in beta.iter().enumerate() {
        let nb = b - k as i64;
        if nb < 0 || beta.contains(&nb) {
            continue;
        }
        let height = beta.iter().filter(|&&c| nb < c && c < b).count();
        let mut nbeta = beta.clone();
        nbeta[pos] = nb;
        nbeta.sort_unstable_by(|a, b| b.cmp(a));
        let ell2 = nbeta.len();
        let parts: Vec<u32> = nbeta
            .iter()
            .enumerate()
            .map(|(i, &v)| (v - (ell2 - 1 - i) as i64) as u32)
            .collect();
        out.push((
            Partition::from_unsorted(parts),
            if height % 2 == 0 { 1 } else { -1 },
        ));
    }
    out
}

/// Symmetric-group character chi_lambda at cycle type mu.
pub fn symmetric_character(lambda: &Partition, mu: &Partition) -> i64 {
    fn rec(
        lambda: &Partition,
        cycles: &[u32],
        memo: &mut HashMap<(Partition, usize), i64>,
    ) -> i64 {
        if cycles.is_empty() {
            return 1;
        }
        let key = (lambda.clone(), cycles.len());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let k = cycles[0];
        let mut acc = 0i64;
        for (rest, sign) in border_strips(lambda, k) {
            acc += sign * rec(&rest, &cycles[1..], memo);
        }
        memo.insert(key, acc);
        acc
    }
    assert_eq!(lambda.weight(), mu.weight());
    rec(lambda, mu.parts(), &mut HashMap::new())
}

/// Hyperoctahedral character chi_{(xi;eta)} at the class with positive cycle
/// type lambda and negative cycle type mu. Peeling a cycle from eta
/// contributes the sign of the cycle.
pub fn hyperoctahedral_character(
    xi: &Partition,
    eta: &Partition,
    pos: &Partition,
    neg: &Partition,
) -> i64 {
    // Cycles in a fixed order: positive first.
    let cycles: Vec<(u32, bool)> = pos
        .parts()
        .iter()
        .map(|&k| (k, true))
        .chain(neg.parts().iter().map(|&k| (k, false)))
        .collect();
    fn rec(
        xi: &Partition,
        eta: &Partition,
        cycles: &[(u32, bool)],
        memo: &mut HashMap<(Partition, Partition, usize), i64>,
    ) -> i64 {
        if cycles.is_empty() {
            return 1;
        }
        let key = (xi.clone(), eta.clone(), cycles.len());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let (k, positive) = cycles[0];
        let mut acc = 0i64;
        for (rest, sign) in border_strips(xi, k) {
            acc += sign * rec(&rest, eta, &cycles[1..], memo);
        }
        let eta_factor = if positive { 1 } else { -1 };
        for (rest, sign) in border_strips(eta, k) {
            acc += eta_factor * sign * rec(xi, &rest, &cycles[1..], memo);
        }
        memo.insert(key, acc);
        acc
    }
    assert_eq!(xi.weight() + eta.weight(), pos.weight() + neg.weight());
    rec(xi, eta, &cycles, &mut HashMap::new())
}

// ---------------------------------------------------------------------------
// Character tables
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct CharacterTable {
    pub classes: Arc<GroupClasses>,
    pub labels: Vec<IrrLabel>,
    /// `values[row][class]`
    pub values: Vec<Vec<i64>>,
    label_index: HashMap<IrrLabel, usize>,
}

impl CharacterTable {
    pub fn row(&self, idx: usize) -> ClassFunction {
        ClassFunction::from_ints(self.classes.clone(), self.values[idx].clone())
    }

    pub fn row_of(&self, label: &IrrLabel) -> Option<ClassFunction> {
        self.label_index.get(label).map(|&i| self.row(i))
    }

    pub fn index_of(&self, label: &IrrLabel) -> Option<usize> {
        self.label_index.get(label).copied()
    }

    pub fn dim(&self, idx: usize) -> i64 {
        self.values[idx][self.classes.identity_class]
    }

    pub fn trivial_index(&self) -> usize {
        self.values
            .iter()
            .position(|row| row.iter().all(|&v| v == 1))
            .expect("trivial row")
    }

    pub fn sign_index(&self) -> usize {
        let signs: Vec<i64> = self.classes.classes.iter().map(|c| c.sign).collect();
        self.values
            .iter()
            .position(|row| row == &signs)
            .expect("sign row")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "version": TABLE_FORMAT_VERSION,
            "family": format!("{:?}", self.classes.family),
            "rank": self.classes.rank,
            "class_labels": self.classes.classes.iter().map(|c| c.label.clone()).collect::<Vec<_>>(),
            "class_sizes": self.classes.classes.iter().map(|c| c.size).collect::<Vec<_>>(),
            "labels": self.labels.clone(),
            "values": self.values.clone(),
        })
    }
}

/// Degenerate type-D split: row values on the two halves of a split class.
/// On the tag-matching class the difference character contributes
/// +2^{l(nu)} chi_xi(nu); on the other half the sign is reversed.
fn d_split_values(
    xi: &Partition,
    classes: &GroupClasses,
    row_tag: SplitTag,
) -> Result<Vec<i64>> {
    let mut values = Vec::with_capacity(classes.class_count());
    for class in &classes.classes {
        let ConjClassLabel::D { pos, neg, split } = &class.label else {
            unreachable!()
        };
        let base = hyperoctahedral_character(xi, xi, pos, neg);
        match split {
            None => {
                if base % 2 != 0 {
                    return Err(Error::Inconsistency(format!(
                        "odd restriction value {} for degenerate label {}",
                        base, xi
                    )));
                }
                values.push(base / 2);
            }
            Some(class_tag) => {
                let nu = Partition::from_unsorted(pos.parts().iter().map(|p| p / 2).collect());
                let delta = (1i64 << nu.len()) * symmetric_character(xi, &nu);
                let signed = if *class_tag == row_tag { delta } else { -delta };
                let v = base + signed;
                if v % 2 != 0 {
                    return Err(Error::Inconsistency(
                        "split character value is not integral".into(),
                    ));
                }
                values.push(v / 2);
            }
        }
    }
    Ok(values)
}

fn g2_table_values() -> Vec<(G2Irrep, [i64; 6])> {
    // Class order: Id, Rot6, Rot3, MinusId, ReflOne, ReflTwo.
    vec![
        (G2Irrep::Trivial, [1, 1, 1, 1, 1, 1]),
        (G2Irrep::Sign, [1, 1, 1, 1, -1, -1]),
        (G2Irrep::LinOne, [1, -1, 1, -1, -1, 1]),
        (G2Irrep::LinTwo, [1, -1, 1, -1, 1, -1]),
        (G2Irrep::Refl, [2, 1, -1, -2, 0, 0]),
        (G2Irrep::Rot, [2, -1, -1, 2, 0, 0]),
    ]
}

fn build_table(family: Family, rank: usize) -> Result<CharacterTable> {
    let classes = group_classes(family, rank)?;
    let mut labels = Vec::new();
    let mut values: Vec<Vec<i64>> = Vec::new();
    match family {
        Family::A => {
            for lambda in Partition::all(rank as u32 + 1) {
                let row = classes
                    .classes
                    .iter()
                    .map(|c| {
                        let ConjClassLabel::A(mu) = &c.label else {
                            unreachable!()
                        };
                        symmetric_character(&lambda, mu)
                    })
                    .collect();
                labels.push(IrrLabel::A(lambda));
                values.push(row);
            }
        }
        Family::BC => {
            for bp in BiPartition::all(rank as u32) {
                let row = classes
                    .classes
                    .iter()
                    .map(|c| {
                        let ConjClassLabel::BC { pos, neg } = &c.label else {
                            unreachable!()
                        };
                        hyperoctahedral_character(&bp.first, &bp.second, pos, neg)
                    })
                    .collect();
                labels.push(IrrLabel::BC(bp));
                values.push(row);
            }
        }
        Family::D => {
            for bp in BiPartition::all(rank as u32) {
                if bp.first > bp.second {
                    continue; // unordered pair: keep first <= second
                }
                if bp.first == bp.second {
                    for tag in [SplitTag::I, SplitTag::II] {
                        labels.push(IrrLabel::D {
                            pair: bp.clone(),
                            split: Some(tag),
                        });
                        values.push(d_split_values(&bp.first, &classes, tag)?);
                    }
                } else {
                    let row = classes
                        .classes
                        .iter()
                        .map(|c| {
                            let ConjClassLabel::D { pos, neg, .. } = &c.label else {
                                unreachable!()
                            };
                            hyperoctahedral_character(&bp.first, &bp.second, pos, neg)
                        })
                        .collect();
                    labels.push(IrrLabel::D {
                        pair: bp.clone(),
                        split: None,
                    });
                    values.push(row);
                }
            }
        }
        Family::G2 => {
            for (label, row) in g2_table_values() {
                labels.push(IrrLabel::G2(label));
                values.push(row.to_vec());
            }
        }
    }
    if labels.len() != classes.class_count() {
        return Err(Error::Inconsistency(format!(
            "{} irreducibles vs {} classes",
            labels.len(),
            classes.class_count()
        )));
    }
    let label_index = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i))
        .collect();
    Ok(CharacterTable {
        classes,
        labels,
        values,
        label_index,
    })
}

fn table_cache() -> &'static Mutex<HashMap<(Family, usize), Arc<CharacterTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<(Family, usize), Arc<CharacterTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Installs a table from its serialized JSON form after validating that the
/// format version and the class structure match a freshly built group.
/// Returns false (without installing) on any mismatch, in which case the
/// caller should fall back to a full rebuild.
pub fn install_table_from_json(
    family: Family,
    rank: usize,
    json: &serde_json::Value,
) -> Result<bool> {
    let Some(version) = json.get("version").and_then(|v| v.as_u64()) else {
        return Ok(false);
    };
    if version != TABLE_FORMAT_VERSION as u64 {
        return Ok(false);
    }
    if json.get("family").and_then(|v| v.as_str()) != Some(format!("{:?}", family).as_str())
        || json.get("rank").and_then(|v| v.as_u64()) != Some(rank as u64)
    {
        return Ok(false);
    }
    let classes = group_classes(family, rank)?;
    let stored_classes: Vec<ConjClassLabel> =
        match serde_json::from_value(json.get("class_labels").cloned().unwrap_or_default()) {
            Ok(v) => v,
            Err(_) => return Ok(false),
        };
    let live: Vec<ConjClassLabel> = classes.classes.iter().map(|c| c.label.clone()).collect();
    if stored_classes != live {
        return Ok(false);
    }
    let labels: Vec<IrrLabel> =
        match serde_json::from_value(json.get("labels").cloned().unwrap_or_default()) {
            Ok(v) => v,
            Err(_) => return Ok(false),
        };
    let values: Vec<Vec<i64>> =
        match serde_json::from_value(json.get("values").cloned().unwrap_or_default()) {
            Ok(v) => v,
            Err(_) => return Ok(false),
        };
    if labels.len() != classes.class_count()
        || values.len() != labels.len()
        || values.iter().any(|row| row.len() != classes.class_count())
    {
        return Ok(false);
    }
    let label_index = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i))
        .collect();
    let table = Arc::new(CharacterTable {
        classes,
        labels,
        values,
        label_index,
    });
    table_cache()
        .lock()
        .unwrap()
        .insert((family, rank), table);
    Ok(true)
}

/// Character table of the datum's Weyl group, cached process-wide. B_r and
/// C_r share one table because their Weyl groups are canonically identified.
pub fn char_table(datum: &CartanDatum) -> Result<Arc<CharacterTable>> {
    char_table_of(Family::of(datum), datum.rank)
}

pub fn char_table_of(family: Family, rank: usize) -> Result<Arc<CharacterTable>> {
    if let Some(hit) = table_cache().lock().unwrap().get(&(family, rank)) {
        return Ok(hit.clone());
    }
    let built = Arc::new(build_table(family, rank)?);
    table_cache()
        .lock()
        .unwrap()
        .entry((family, rank))
        .or_insert_with(|| built.clone());
    Ok(built)
}

// ---------------------------------------------------------------------------
// Parabolic induction via class fusion
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Induced {
    Trivial,
    Sign,
}

#[derive(Debug)]
struct FusionTable {
    subgroup_order: u64,
    /// Per W-class: (number of W(Z)-elements fusing in, their signed count).
    per_class: Vec<(u64, i64)>,
}

fn fusion_cache() -> &'static Mutex<HashMap<(Family, usize, Vec<usize>), Arc<FusionTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<(Family, usize, Vec<usize>), Arc<FusionTable>>>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn parabolic_fusion(datum: &CartanDatum, z: &SimpleSet) -> Result<Arc<FusionTable>> {
    let family = Family::of(datum);
    let key = (family, datum.rank, z.iter().cloned().collect::<Vec<_>>());
    if let Some(hit) = fusion_cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let classes = conjugacy_classes(datum)?;
    let mut per_class = vec![(0u64, 0i64); classes.class_count()];
    // Closure of the parabolic subgroup under its generators.
    let gens: Vec<WeylElement> = z
        .iter()
        .map(|&i| simple_reflection(datum, i))
        .collect::<Result<_>>()?;
    let mut seen: HashMap<u64, ()> = HashMap::new();
    let mut queue = vec![WeylElement::identity(datum)];
    seen.insert(queue[0].key(), ());
    let mut order = 0u64;
    while let Some(w) = queue.pop() {
        order += 1;
        let idx = classes.class_index(&w);
        per_class[idx].0 += 1;
        per_class[idx].1 += if weyl::length(&w) % 2 == 0 { 1 } else { -1 };
        for g in &gens {
            let next = weyl::multiply(&w, g)?;
            if seen.insert(next.key(), ()).is_none() {
                queue.push(next);
            }
        }
    }
    let table = Arc::new(FusionTable {
        subgroup_order: order,
        per_class,
    });
    fusion_cache()
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| table.clone());
    Ok(table)
}

/// Induction of the trivial or sign character of the parabolic subgroup
/// W(Z): for each W-class C the value is
/// |W| / (|W(Z)| |C|) * sum over fused W(Z)-classes D of |D| (+-1)^{l(d)}.
pub fn induce_parabolic(
    datum: &CartanDatum,
    z: &SimpleSet,
    which: Induced,
) -> Result<ClassFunction> {
    let classes = conjugacy_classes(datum)?;
    let fusion = parabolic_fusion(datum, z)?;
    let order = BigRational::from_integer(classes.order.into());
    let sub = BigRational::from_integer(fusion.subgroup_order.into());
    let mut values = Vec::with_capacity(classes.class_count());
    for (class, &(count, signed)) in classes.classes.iter().zip(&fusion.per_class) {
        let numer = match which {
            Induced::Trivial => BigRational::from_integer(count.into()),
            Induced::Sign => BigRational::from_integer(signed.into()),
        };
        let v = &order * numer / (&sub * BigRational::from_integer(class.size.into()));
        debug_assert!(v.is_integer(), "induced character value must be integral");
        values.push(v);
    }
    Ok(ClassFunction {
        classes,
        values,
    })
}

/// Multiplicity decomposition of a class function into irreducibles.
/// Fails with `NotACharacter` if any inner product is negative or fractional.
pub fn decompose(f: &ClassFunction) -> Result<Vec<(IrrLabel, u64)>> {
    let table = char_table_of(f.classes.family, f.classes.rank)?;
    let mut out = Vec::new();
    let mut recon = ClassFunction::zero(f.classes.clone());
    for (idx, label) in table.labels.iter().enumerate() {
        let row = table.row(idx);
        let m = inner_product(f, &row)?;
        if m.is_zero() {
            continue;
        }
        if !m.is_integer() || m.is_negative() {
            return Err(Error::NotACharacter(format!(
                "multiplicity of {} is {}",
                label, m
            )));
        }
        let mult: u64 = m.to_integer().to_string().parse().unwrap();
        for (acc, v) in recon.values.iter_mut().zip(&row.values) {
            *acc += v * &m;
        }
        out.push((label.clone(), mult));
    }
    if recon.values != f.values {
        return Err(Error::NotACharacter(
            "reconstruction from multiplicities failed".into(),
        ));
    }
    Ok(out)
}

/// Restriction of a class function to W(Z), evaluated by direct summation:
/// returns <triv_{W(Z)}, Res f> as an exact rational.
pub fn restricted_trivial_mult(
    datum: &CartanDatum,
    z: &SimpleSet,
    f: &ClassFunction,
) -> Result<BigRational> {
    let classes = conjugacy_classes(datum)?;
    let fusion = parabolic_fusion(datum, z)?;
    let mut acc = BigRational::zero();
    for (idx, &(count, _)) in fusion.per_class.iter().enumerate() {
        if count > 0 {
            acc += BigRational::from_integer(count.into()) * &f.values[idx];
        }
    }
    let _ = classes;
    Ok(acc / BigRational::from_integer(fusion.subgroup_order.into()))
}

pub fn trivial_character(datum: &CartanDatum) -> Result<ClassFunction> {
    let classes = conjugacy_classes(datum)?;
    let n = classes.class_count();
    Ok(ClassFunction::from_ints(classes, vec![1; n]))
}

pub fn sign_character(datum: &CartanDatum) -> Result<ClassFunction> {
    let classes = conjugacy_classes(datum)?;
    let signs: Vec<i64> = classes.classes.iter().map(|c| c.sign).collect();
    Ok(ClassFunction::from_ints(classes, signs))
}
