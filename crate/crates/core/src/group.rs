//! Finite groups given by Cayley tables, and the subgroup calculus used by
//! the hereditarity criteria: closures, conjugation, normalisers,
//! centralisers, transporters and families of subgroups.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("multiplication table is empty")]
    Empty,
    #[error("multiplication table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table entry ({a}, {b}) = {value} is out of range 0..{order}")]
    EntryOutOfRange { a: usize, b: usize, value: usize, order: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element {element} is out of range for a group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("unknown group preset `{0}`")]
    UnknownPreset(String),
    #[error("map is not a homomorphism: f({a}*{b}) != f({a})*f({b})")]
    NotHomomorphism { a: usize, b: usize },
    #[error("map has {len} images, expected {expected}")]
    MapLength { len: usize, expected: usize },
    #[error("map is not injective: f({a}) = f({b})")]
    NotInjective { a: usize, b: usize },
    #[error("{0} labels given for a group of order {1}")]
    LabelCount(usize, usize),
}

/// A finite group on the elements `0..order` with a validated multiplication
/// table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a Cayley table. Witnesses for failures are reported with
    /// the smallest offending indices.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let mut table = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotSquare { row: a, len: row.len(), expected: n });
            }
            for (b, &value) in row.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::EntryOutOfRange { a, b, value, order: n });
                }
                table.push(value);
            }
        }
        Self::from_flat(n, table)
    }

    fn from_flat(n: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] == x && table[x * n + e] == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a * n + b] == identity && table[b * n + a] == identity)
                .ok_or(GroupError::NoInverse { element: a })?;
            inverse[a] = inv;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                for c in 0..n {
                    if table[ab * n + c] != table[a * n + table[b * n + c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(FiniteGroup { order: n, table, identity, inverse, labels: None })
    }

    /// Builds the group generated by permutations of `0..degree`, elements
    /// enumerated in breadth-first order from the identity.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Self {
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut seen: HashSet<Vec<usize>> = HashSet::from([id]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p: Vec<usize> = (0..degree).map(|x| g[elements[i][x]]).collect();
                if seen.insert(p.clone()) {
                    elements.push(p);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        let n = elements.len();
        let index: std::collections::HashMap<&Vec<usize>, usize> =
            elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                // (a*b)(x) = a(b(x))
                let p: Vec<usize> = (0..degree).map(|x| elements[a][elements[b][x]]).collect();
                table[a * n + b] = index[&p];
            }
        }
        Self::from_flat(n, table).expect("permutation groups are groups")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GroupError> {
        if labels.len() != self.order {
            return Err(GroupError::LabelCount(labels.len(), self.order));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_flat(n, table).expect("cyclic group")
    }

    /// Dihedral group of the given (even) order, elements `r^i s^j` at index
    /// `i + m*j` where `m = order/2`.
    pub fn dihedral(order: usize) -> Self {
        assert!(order >= 2 && order.is_multiple_of(2));
        let m = order / 2;
        let mut table = vec![0; order * order];
        for x in 0..order {
            for y in 0..order {
                let (a, b) = (x % m, x / m);
                let (c, d) = (y % m, y / m);
                let rot = if b == 0 { (a + c) % m } else { (a + m - c) % m };
                table[x * order + y] = rot + m * ((b + d) % 2);
            }
        }
        let g = Self::from_flat(order, table).expect("dihedral group");
        let labels = (0..order)
            .map(|x| {
                let (a, b) = (x % m, x / m);
                let r = match a {
                    0 => String::new(),
                    1 => "s".to_string(),
                    _ => format!("s{a}"),
                };
                let s = if b == 1 { "t" } else { "" };
                let l = format!("{r}{s}");
                if l.is_empty() {
                    "1".to_string()
                } else {
                    l
                }
            })
            .collect();
        g.with_labels(labels).expect("labels")
    }

    pub fn symmetric3() -> Self {
        Self::dihedral(6)
    }

    /// Klein four group `{1, a, b, c}` with `ab = c`.
    pub fn klein_four() -> Self {
        let table = (0..16).map(|i| (i / 4) ^ (i % 4)).collect();
        Self::from_flat(4, table)
            .expect("klein four group")
            .with_labels(["1", "a", "b", "c"].map(String::from).to_vec())
            .expect("labels")
    }

    /// Quaternion group, elements `1,-1,i,-i,j,-j,k,-k`.
    pub fn quaternion() -> Self {
        // unit u in {1,i,j,k} encoded 0..4; element = 2*u + sign
        fn mul_units(u: usize, v: usize) -> (usize, bool) {
            // returns (unit, negative)
            match (u, v) {
                (0, x) | (x, 0) => (x, false),
                (a, b) if a == b => (0, true),
                (1, 2) => (3, false),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (2, 1) => (3, true),
                (3, 2) => (1, true),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        }
        let mut table = vec![0; 64];
        for x in 0..8 {
            for y in 0..8 {
                let (u, v) = (x / 2, y / 2);
                let (w, neg) = mul_units(u, v);
                let sign = (x % 2) ^ (y % 2) ^ usize::from(neg);
                table[x * 8 + y] = 2 * w + sign;
            }
        }
        Self::from_flat(8, table)
            .expect("quaternion group")
            .with_labels(["1", "-1", "i", "-i", "j", "-j", "k", "-k"].map(String::from).to_vec())
            .expect("labels")
    }

    pub fn alternating4() -> Self {
        Self::from_permutations(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
    }

    /// Dicyclic group of order 12, `<a, x | a^6, x^2 = a^3, x a x^-1 = a^-1>`,
    /// element `a^i x^j` at index `i + 6j`.
    pub fn dicyclic12() -> Self {
        let mut table = vec![0; 144];
        for p in 0..12 {
            for q in 0..12 {
                let (i, j) = (p % 6, p / 6);
                let (k, l) = (q % 6, q / 6);
                let mut e = if j == 0 { (i + k) % 6 } else { (i + 6 - k) % 6 };
                let mut x = j + l;
                if x == 2 {
                    e = (e + 3) % 6;
                    x = 0;
                }
                table[p * 12 + q] = e + 6 * x;
            }
        }
        Self::from_flat(12, table).expect("dicyclic group")
    }

    /// Named presets: `C{n}`, `D{n}` (dihedral of order n), `S3`, `V4`,
    /// `Q8`, `A4`, `Dic12`.
    pub fn preset(name: &str) -> Result<Self, GroupError> {
        let bad = || GroupError::UnknownPreset(name.to_string());
        match name {
            "S3" => Ok(Self::symmetric3()),
            "V4" => Ok(Self::klein_four()),
            "Q8" => Ok(Self::quaternion()),
            "A4" => Ok(Self::alternating4()),
            "Dic12" => Ok(Self::dicyclic12()),
            _ => {
                let (head, tail) = name.split_at(1.min(name.len()));
                let n: usize = tail.parse().map_err(|_| bad())?;
                match head {
                    "C" if (1..=4096).contains(&n) => Ok(Self::cyclic(n)),
                    "D" if n >= 4 && n.is_multiple_of(2) && n <= 4096 => Ok(Self::dihedral(n)),
                    _ => Err(bad()),
                }
            }
        }
    }

    /// Direct product `self x other`, pair `(a, b)` at index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order, other.order);
        let size = n * m;
        let mut table = vec![0; size * size];
        for x in 0..size {
            for y in 0..size {
                let a = self.mul(x / m, y / m);
                let b = other.mul(x % m, y % m);
                table[x * size + y] = a * m + b;
            }
        }
        let identity = self.identity * m + other.identity;
        let inverse = (0..size).map(|x| self.inv(x / m) * m + other.inv(x % m)).collect();
        FiniteGroup { order: size, table, identity, inverse, labels: None }
    }

    /// The opposite group, `a *op b = b * a`.
    pub fn opposite(&self) -> FiniteGroup {
        let n = self.order;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.mul(b, a);
            }
        }
        FiniteGroup {
            order: n,
            table,
            identity: self.identity,
            inverse: self.inverse.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `g h g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { members: self.elements().collect() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { members: vec![self.identity] }
    }

    fn check_element(&self, g: usize) -> Result<(), GroupError> {
        if g >= self.order {
            Err(GroupError::ElementOutOfRange { element: g, order: self.order })
        } else {
            Ok(())
        }
    }

    /// Smallest subgroup containing `gens`.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Result<Subgroup, GroupError> {
        for &g in gens {
            self.check_element(g)?;
        }
        Ok(self.closure_unchecked(gens))
    }

    fn closure_unchecked(&self, gens: &[usize]) -> Subgroup {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut members = vec![self.identity];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        Subgroup { members }
    }

    /// Wraps a set of elements as a subgroup, if it is one.
    pub fn subgroup_from_members(&self, members: &[usize]) -> Option<Subgroup> {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        if set.is_empty() || set.iter().any(|&g| g >= self.order) {
            return None;
        }
        let closed = set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))));
        closed.then(|| Subgroup { members: set.into_iter().collect() })
    }

    /// `g H g^-1`.
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        let mut members: Vec<usize> = h.members.iter().map(|&x| self.conj(g, x)).collect();
        members.sort_unstable();
        Subgroup { members }
    }

    /// `N_G(H) = { g : g H g^-1 = H }`.
    pub fn normaliser(&self, h: &Subgroup) -> Subgroup {
        let members = self.elements().filter(|&g| h.members.iter().all(|&x| h.contains(self.conj(g, x)))).collect();
        Subgroup { members }
    }

    /// `C_G(H) = { g : g h = h g for all h in H }`.
    pub fn centraliser(&self, h: &Subgroup) -> Subgroup {
        let members =
            self.elements().filter(|&g| h.members.iter().all(|&x| self.mul(g, x) == self.mul(x, g))).collect();
        Subgroup { members }
    }

    /// `Trans_G(H, K) = { g : g H g^-1 ⊆ K }`, sorted.
    pub fn transporter_set(&self, h: &Subgroup, k: &Subgroup) -> Vec<usize> {
        self.elements().filter(|&g| h.members.iter().all(|&x| k.contains(self.conj(g, x)))).collect()
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.normaliser(h).order() == self.order
    }

    pub fn is_subconjugate(&self, h: &Subgroup, k: &Subgroup) -> bool {
        !self.transporter_set(h, k).is_empty()
    }

    pub fn are_conjugate(&self, h: &Subgroup, k: &Subgroup) -> bool {
        h.order() == k.order() && self.is_subconjugate(h, k)
    }

    /// Decides whether `H` is cyclic of prime power order. The trivial
    /// subgroup is reported separately.
    pub fn is_cyclic_prime_power(&self, h: &Subgroup) -> CyclicPrimePower {
        let n = h.order();
        if n == 1 {
            return CyclicPrimePower::Trivial;
        }
        let Some((p, e)) = prime_power(n) else {
            return CyclicPrimePower::No(format!("order {n} is not a prime power"));
        };
        if h.members.iter().any(|&g| self.element_order(g) == n) {
            CyclicPrimePower::Yes { p, exponent: e }
        } else {
            CyclicPrimePower::No(format!("no element of order {n}"))
        }
    }

    /// All subgroups, sorted by order and then by member list.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut list: Vec<Subgroup> = Vec::new();
        let push = |s: Subgroup, found: &mut BTreeSet<Vec<usize>>, list: &mut Vec<Subgroup>| {
            if found.insert(s.members.clone()) {
                list.push(s);
            }
        };
        for g in self.elements() {
            push(self.closure_unchecked(&[g]), &mut found, &mut list);
        }
        let cyclic: Vec<Subgroup> = list.clone();
        let mut i = 0;
        while i < list.len() {
            for c in &cyclic {
                if !c.is_subset_of(&list[i]) {
                    let mut gens = list[i].members.clone();
                    gens.extend_from_slice(&c.members);
                    let s = self.closure_unchecked(&gens);
                    push(s, &mut found, &mut list);
                }
            }
            i += 1;
        }
        list.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
        list
    }

    /// Smallest family containing the seeds and the trivial subgroup that is
    /// closed under conjugation and passage to subgroups.
    pub fn family_closure(&self, seeds: &[Subgroup]) -> Family {
        let subgroups = self.all_subgroups();
        let mut conjugates: Vec<Subgroup> = Vec::new();
        for s in seeds {
            for g in self.elements() {
                conjugates.push(self.conjugate(s, g));
            }
        }
        let members =
            subgroups.into_iter().filter(|h| h.order() == 1 || conjugates.iter().any(|c| h.is_subset_of(c))).collect();
        Family { members }
    }

    /// Every closed family, enumerated as down-closed sets of conjugacy
    /// classes of subgroups.
    pub fn closed_families(&self) -> Vec<Family> {
        let subgroups = self.all_subgroups();
        let reps = self.conjugacy_representatives(&subgroups);
        let below: Vec<Vec<usize>> =
            reps.iter().map(|r| (0..reps.len()).filter(|&j| self.is_subconjugate(&reps[j], r)).collect()).collect();
        let mut families = Vec::new();
        for mask in 0u64..(1u64 << (reps.len() - 1)) {
            let chosen = |i: usize| i == 0 || mask >> (i - 1) & 1 == 1;
            if !(0..reps.len()).all(|i| !chosen(i) || below[i].iter().all(|&j| chosen(j))) {
                continue;
            }
            let members = subgroups
                .iter()
                .filter(|h| (0..reps.len()).any(|i| chosen(i) && self.are_conjugate(h, &reps[i])))
                .cloned()
                .collect();
            families.push(Family { members });
        }
        families
    }

    /// Conjugacy class representatives (least in the canonical order) of the
    /// given subgroups.
    pub fn conjugacy_representatives(&self, subgroups: &[Subgroup]) -> Vec<Subgroup> {
        let mut sorted = subgroups.to_vec();
        sorted.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
        let mut reps: Vec<Subgroup> = Vec::new();
        for s in sorted {
            if !reps.iter().any(|r| self.are_conjugate(r, &s)) {
                reps.push(s);
            }
        }
        reps
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {}", self.order)
    }
}

/// Subgroup of a [`FiniteGroup`], stored as its sorted member list. The
/// parent group is passed explicitly to every operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    /// Wraps a sorted, deduplicated member list known to be a subgroup.
    pub(crate) fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Subgroup { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup { members: self.members.iter().copied().filter(|&g| other.contains(g)).collect() }
    }

    /// Maps the subgroup under an (injective) homomorphism.
    pub fn image(&self, map: &GroupMap) -> Subgroup {
        let mut members: Vec<usize> = self.members.iter().map(|&g| map.apply(g)).collect();
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    /// Preimage of a subgroup of the target under a homomorphism.
    pub fn preimage(target_sub: &Subgroup, map: &GroupMap) -> Subgroup {
        let members = (0..map.images.len()).filter(|&g| target_sub.contains(map.apply(g))).collect();
        Subgroup { members }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CyclicPrimePower {
    Trivial,
    Yes { p: usize, exponent: u32 },
    No(String),
}

impl CyclicPrimePower {
    pub fn holds(&self) -> bool {
        !matches!(self, CyclicPrimePower::No(_))
    }
}

/// A family of subgroups in canonical order (by order, then members).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    members: Vec<Subgroup>,
}

impl Family {
    pub fn members(&self) -> &[Subgroup] {
        &self.members
    }

    pub fn contains(&self, h: &Subgroup) -> bool {
        self.members.contains(h)
    }

    /// Wraps explicit members, returning `None` unless they form a closed
    /// family in `group`.
    pub fn from_members(group: &FiniteGroup, mut members: Vec<Subgroup>) -> Option<Family> {
        members.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
        members.dedup();
        let family = Family { members };
        family.is_closed(group).then_some(family)
    }

    /// Checks closure under conjugation and subgroups in `group`.
    pub fn is_closed(&self, group: &FiniteGroup) -> bool {
        if !self.members.iter().any(|h| h.order() == 1) {
            return false;
        }
        let subs = group.all_subgroups();
        self.members.iter().all(|h| {
            group.elements().all(|g| self.contains(&group.conjugate(h, g)))
                && subs.iter().filter(|s| s.is_subset_of(h)).all(|s| self.contains(s))
        })
    }
}

/// Characteristic of a coefficient field: 0 or a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoefficientField {
    characteristic: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("characteristic {0} is neither 0 nor a prime")]
pub struct BadCharacteristic(pub u64);

impl CoefficientField {
    pub fn new(characteristic: u64) -> Result<Self, BadCharacteristic> {
        if characteristic == 0 || is_prime(characteristic) {
            Ok(CoefficientField { characteristic })
        } else {
            Err(BadCharacteristic(characteristic))
        }
    }

    pub fn rationals() -> Self {
        CoefficientField { characteristic: 0 }
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    /// Whether the integer `n` is invertible in the field.
    pub fn is_invertible(&self, n: usize) -> bool {
        self.characteristic == 0 || !(n as u64).is_multiple_of(self.characteristic)
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "char {}", self.characteristic)
    }
}

/// `true` iff `char(k)` does not divide `|H|`. For finite groups this
/// coincides with being locally k^×-finite.
pub fn is_kx_finite(h: &Subgroup, k: CoefficientField) -> bool {
    k.is_invertible(h.order())
}

/// A homomorphism between finite groups, given by element images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMap {
    images: Vec<usize>,
    target_order: usize,
}

impl GroupMap {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, images: Vec<usize>) -> Result<Self, GroupError> {
        if images.len() != source.order() {
            return Err(GroupError::MapLength { len: images.len(), expected: source.order() });
        }
        for &x in &images {
            target.check_element(x)?;
        }
        for a in source.elements() {
            for b in source.elements() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(GroupError::NotHomomorphism { a, b });
                }
            }
        }
        Ok(GroupMap { images, target_order: target.order() })
    }

    /// Like [`GroupMap::new`] and additionally checks injectivity.
    pub fn monomorphism(source: &FiniteGroup, target: &FiniteGroup, images: Vec<usize>) -> Result<Self, GroupError> {
        let map = Self::new(source, target, images)?;
        map.check_injective()?;
        Ok(map)
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        GroupMap { images: group.elements().collect(), target_order: group.order() }
    }

    pub fn check_injective(&self) -> Result<(), GroupError> {
        let mut seen = vec![usize::MAX; self.target_order];
        for (a, &x) in self.images.iter().enumerate() {
            if seen[x] != usize::MAX {
                return Err(GroupError::NotInjective { a: seen[x], b: a });
            }
            seen[x] = a;
        }
        Ok(())
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.images[g]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn source_order(&self) -> usize {
        self.images.len()
    }

    /// Preimage of a single element, if any.
    pub fn preimage_of(&self, x: usize) -> Option<usize> {
        self.images.iter().position(|&y| y == x)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, e))` if `n = p^e` with `p` prime and `e >= 1`.
pub fn prime_power(n: usize) -> Option<(usize, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

/// `H` as a group in its own right; element `i` is `H.members()[i]`. The
/// second component is the inclusion into the parent group.
pub fn subgroup_as_group(g: &FiniteGroup, h: &Subgroup) -> (FiniteGroup, GroupMap) {
    let m = h.members();
    let pos = |x: usize| m.binary_search(&x).expect("closed under multiplication");
    let rows: Vec<Vec<usize>> = m.iter().map(|&a| m.iter().map(|&b| pos(g.mul(a, b))).collect()).collect();
    let mut group = FiniteGroup::from_table(&rows).expect("subgroups are groups");
    if let Some(labels) = g.labels() {
        group.labels = Some(m.iter().map(|&x| labels[x].clone()).collect());
    }
    let inclusion = GroupMap { images: m.to_vec(), target_order: g.order() };
    (group, inclusion)
}

/// All injective homomorphisms `source → target`, in lexicographic order of
/// their image lists.
pub fn embeddings(source: &FiniteGroup, target: &FiniteGroup) -> Vec<GroupMap> {
    // a small generating set, greedily
    let mut gens = Vec::new();
    let mut span = source.trivial_subgroup();
    for g in source.elements() {
        if !span.contains(g) {
            gens.push(g);
            span = source.closure_unchecked(&gens);
        }
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    'outer: loop {
        if gens.iter().zip(&choice).all(|(&g, &x)| target.element_order(x) == source.element_order(g)) {
            if let Some(images) = extend_on_generators(source, target, &gens, &choice) {
                if let Ok(map) = GroupMap::monomorphism(source, target, images) {
                    out.push(map);
                }
            }
        }
        for slot in choice.iter_mut() {
            *slot += 1;
            if *slot < target.order() {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    out.sort_by(|a, b| a.images.cmp(&b.images));
    out.dedup();
    out
}

fn extend_on_generators(
    source: &FiniteGroup,
    target: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; source.order()];
    map[source.identity()] = target.identity();
    let mut queue = VecDeque::from([source.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&g, &y) in gens.iter().zip(images) {
            let xg = source.mul(x, g);
            let im = target.mul(map[x], y);
            if map[xg] == usize::MAX {
                map[xg] = im;
                queue.push_back(xg);
            } else if map[xg] != im {
                return None;
            }
        }
    }
    Some(map)
}
