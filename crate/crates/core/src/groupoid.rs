//! Finite groupoids given by explicit partial composition tables.
//!
//! Composition is written in path order: `compose(a, b)` is "first `a`, then
//! `b`" and is defined exactly when the target of `a` meets the source of
//! `b`. Sources and targets are never stored. They are recovered from the
//! table as the sets
//!
//! * `Target(a) = { b : ab is defined }`
//! * `Source(b) = { c : c⁻¹b is defined }`
//!
//! and the checks in [`FiniteGroupoid::verify_axioms`] confirm that
//! `ab` is defined iff `Target(a) = Source(b)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

pub type ElementId = usize;

/// Default element cap for the cubic-cost exhaustive checks.
pub const DEFAULT_VERIFY_CAP: usize = 512;

const MAX_RECORDED_VIOLATIONS: usize = 256;

/// A dense partial composition table over named elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionTable {
    names: Vec<String>,
    index: HashMap<String, ElementId>,
    entries: Vec<Option<ElementId>>,
}

impl CompositionTable {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate element `{name}`")));
            }
        }
        let n = names.len();
        Ok(Self {
            names,
            index,
            entries: vec![None; n * n],
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: ElementId) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Result<ElementId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    fn check(&self, id: ElementId) -> Result<()> {
        if id < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownElement(format!("#{id}")))
        }
    }

    /// Records `a b -> c`, rejecting a conflicting earlier entry.
    pub fn set(&mut self, a: ElementId, b: ElementId, c: ElementId) -> Result<()> {
        self.check(a)?;
        self.check(b)?;
        self.check(c)?;
        let n = self.len();
        match self.entries[a * n + b] {
            Some(old) if old != c => Err(Error::InvalidArgument(format!(
                "conflicting entries for `{} {}`: `{}` and `{}`",
                self.names[a], self.names[b], self.names[old], self.names[c]
            ))),
            _ => {
                self.entries[a * n + b] = Some(c);
                Ok(())
            }
        }
    }

    /// Overwrites an entry unconditionally (used to build corrupted fixtures).
    pub fn overwrite(&mut self, a: ElementId, b: ElementId, c: Option<ElementId>) {
        let n = self.len();
        self.entries[a * n + b] = c;
    }

    #[inline]
    pub fn get(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        self.entries[a * self.len() + b]
    }

    fn witness(&self, ids: &[ElementId]) -> Vec<String> {
        ids.iter().map(|&i| self.names[i].clone()).collect()
    }

    /// Bitset of `{ b : ab is defined }`.
    fn target_bits(&self, a: ElementId) -> Vec<u64> {
        let n = self.len();
        let mut bits = vec![0u64; n.div_ceil(64)];
        for b in 0..n {
            if self.get(a, b).is_some() {
                bits[b / 64] |= 1 << (b % 64);
            }
        }
        bits
    }

    fn check_associativity(&self, report: &mut ReportBuilder) {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                let ab = self.get(a, b);
                for c in 0..n {
                    let bc = self.get(b, c);
                    let left = ab.and_then(|ab| self.get(ab, c));
                    let right = bc.and_then(|bc| self.get(a, bc));
                    if left != right {
                        report.push(self, "1 (associativity)", &[a, b, c]);
                    }
                }
            }
        }
    }
}

/// One failed axiom instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<String>,
}

/// Outcome of an exhaustive axiom check. `passed` is true iff `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub passed: bool,
    pub elements: usize,
    pub violations: Vec<Violation>,
    /// Total number of failed instances; only the first few are recorded.
    pub violation_count: usize,
}

#[derive(Default)]
struct ReportBuilder {
    violations: Vec<Violation>,
    count: usize,
}

impl ReportBuilder {
    fn push(&mut self, table: &CompositionTable, axiom: &str, ids: &[ElementId]) {
        self.count += 1;
        if self.violations.len() < MAX_RECORDED_VIOLATIONS {
            self.violations.push(Violation {
                axiom: axiom.to_string(),
                witness: table.witness(ids),
            });
        }
    }

    fn finish(self, elements: usize) -> AxiomReport {
        AxiomReport {
            passed: self.count == 0,
            elements,
            violations: self.violations,
            violation_count: self.count,
        }
    }
}

/// A groupoid: composition table plus a two-sided inverse map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    table: CompositionTable,
    inverse: Vec<ElementId>,
}

impl FiniteGroupoid {
    pub fn new(table: CompositionTable, inverse: Vec<ElementId>) -> Result<Self> {
        if inverse.len() != table.len() {
            return Err(Error::InvalidArgument(format!(
                "inverse map has {} entries for {} elements",
                inverse.len(),
                table.len()
            )));
        }
        for &i in &inverse {
            table.check(i)?;
        }
        Ok(Self { table, inverse })
    }

    pub fn empty() -> Self {
        Self {
            table: CompositionTable::new(Vec::new()).expect("no names"),
            inverse: Vec::new(),
        }
    }

    /// The pair groupoid on `objects` objects: one arrow `i>j` for every ordered pair.
    pub fn pair(objects: usize) -> Self {
        let names = (0..objects)
            .flat_map(|i| (0..objects).map(move |j| format!("{i}>{j}")))
            .collect();
        let mut table = CompositionTable::new(names).expect("distinct names");
        let id = |i: usize, j: usize| i * objects + j;
        for i in 0..objects {
            for j in 0..objects {
                for k in 0..objects {
                    table.set(id(i, j), id(j, k), id(i, k)).expect("in range");
                }
            }
        }
        let inverse = (0..objects).flat_map(|i| (0..objects).map(move |j| id(j, i))).collect();
        Self { table, inverse }
    }

    /// A one-object groupoid from a group multiplication on `0..order`.
    pub fn group(prefix: &str, order: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let names = (0..order).map(|i| format!("{prefix}{i}")).collect();
        let mut table = CompositionTable::new(names)?;
        for a in 0..order {
            for b in 0..order {
                table.set(a, b, mul(a, b))?;
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or_else(|| Error::InvalidArgument("multiplication has no identity".into()))?;
        let inverse = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                    .ok_or_else(|| Error::InvalidArgument(format!("{prefix}{a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { table, inverse })
    }

    /// The cyclic group of the given order; element `gk` is the k-th power of the generator.
    pub fn cyclic(order: usize) -> Self {
        Self::group(&format!("z{order}^"), order, |a, b| (a + b) % order).expect("cyclic group")
    }

    /// The symmetric group on `k` letters (order `k!`), composing permutations left to right.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let lookup: HashMap<&[usize], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let mul = |a: usize, b: usize| {
            let composed: Vec<usize> = (0..k).map(|i| perms[b][perms[a][i]]).collect();
            lookup[composed.as_slice()]
        };
        Self::group(&format!("s{k}_"), perms.len(), mul).expect("symmetric group")
    }

    /// Disjoint union; names of `other` are suffixed if they clash.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let offset = self.len();
        let mut names = self.table.names.clone();
        for name in &other.table.names {
            let mut candidate = name.clone();
            while self.table.index.contains_key(&candidate) {
                candidate.push('\'');
            }
            names.push(candidate);
        }
        let mut table = CompositionTable::new(names).expect("distinct names");
        for a in 0..self.len() {
            for b in 0..self.len() {
                if let Some(c) = self.table.get(a, b) {
                    table.set(a, b, c).expect("in range");
                }
            }
        }
        for a in 0..other.len() {
            for b in 0..other.len() {
                if let Some(c) = other.table.get(a, b) {
                    table.set(a + offset, b + offset, c + offset).expect("in range");
                }
            }
        }
        let inverse = self
            .inverse
            .iter()
            .copied()
            .chain(other.inverse.iter().map(|&i| i + offset))
            .collect();
        Self { table, inverse }
    }

    /// Disjoint union of several groups: a groupoid whose objects each carry one group.
    pub fn bundle(parts: &[Self]) -> Self {
        parts.iter().fold(Self::empty(), |acc, part| acc.disjoint_union(part))
    }

    pub fn table(&self) -> &CompositionTable {
        &self.table
    }

    pub fn table_mut(&mut self) -> &mut CompositionTable {
        &mut self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn id(&self, name: &str) -> Result<ElementId> {
        self.table.id(name)
    }

    pub fn name(&self, id: ElementId) -> &str {
        self.table.name(id)
    }

    pub fn inverse(&self, a: ElementId) -> Result<ElementId> {
        self.table.check(a)?;
        Ok(self.inverse[a])
    }

    pub fn compose(&self, a: ElementId, b: ElementId) -> Result<ElementId> {
        self.table.check(a)?;
        self.table.check(b)?;
        self.table.get(a, b).ok_or_else(|| Error::UndefinedComposition {
            left: self.name(a).to_string(),
            right: self.name(b).to_string(),
        })
    }

    /// `{ b : ab is defined }`.
    pub fn target_set(&self, a: ElementId) -> Result<BTreeSet<ElementId>> {
        self.table.check(a)?;
        Ok((0..self.len()).filter(|&b| self.table.get(a, b).is_some()).collect())
    }

    /// `{ c : c⁻¹b is defined }`.
    pub fn source_set(&self, b: ElementId) -> Result<BTreeSet<ElementId>> {
        self.table.check(b)?;
        Ok((0..self.len())
            .filter(|&c| self.table.get(self.inverse[c], b).is_some())
            .collect())
    }

    pub fn verify_axioms(&self) -> Result<AxiomReport> {
        self.verify_axioms_capped(DEFAULT_VERIFY_CAP)
    }

    /// Exhaustively checks associativity, the inverse axioms (2a–2d) and the
    /// `ab defined ⇔ Target(a) = Source(b)` characterization.
    pub fn verify_axioms_capped(&self, cap: usize) -> Result<AxiomReport> {
        let n = self.len();
        if n > cap {
            return Err(Error::BudgetExceeded(format!(
                "{n} elements exceeds the verification cap of {cap}"
            )));
        }
        let t = &self.table;
        let mut report = ReportBuilder::default();
        t.check_associativity(&mut report);

        for a in 0..n {
            let inv = self.inverse[a];
            let left_unit = t.get(inv, a);
            let right_unit = t.get(a, inv);
            if left_unit.is_none() || right_unit.is_none() {
                report.push(t, "2 (inverse composable)", &[a, inv]);
                continue;
            }
            let (left_unit, right_unit) = (left_unit.unwrap(), right_unit.unwrap());
            for b in 0..n {
                // 2a: (a⁻¹a)b = b when ab is defined
                if t.get(a, b).is_some() && t.get(left_unit, b) != Some(b) {
                    report.push(t, "2a", &[a, b]);
                }
                // 2b: (aa⁻¹)b = b when a⁻¹b is defined
                if t.get(inv, b).is_some() && t.get(right_unit, b) != Some(b) {
                    report.push(t, "2b", &[a, b]);
                }
                // 2c: b(aa⁻¹) = b when ba is defined
                if t.get(b, a).is_some() && t.get(b, right_unit) != Some(b) {
                    report.push(t, "2c", &[a, b]);
                }
                // 2d: b(a⁻¹a) = b when ba⁻¹ is defined
                if t.get(b, inv).is_some() && t.get(b, left_unit) != Some(b) {
                    report.push(t, "2d", &[a, b]);
                }
            }
        }

        let targets: Vec<Vec<u64>> = (0..n).map(|a| t.target_bits(a)).collect();
        // Source(b) is computed directly from its definition and compared with Target(b⁻¹).
        let sources: Vec<Vec<u64>> = (0..n)
            .map(|b| {
                let mut bits = vec![0u64; n.div_ceil(64)];
                for c in 0..n {
                    if t.get(self.inverse[c], b).is_some() {
                        bits[c / 64] |= 1 << (c % 64);
                    }
                }
                bits
            })
            .collect();
        for b in 0..n {
            if sources[b] != targets[self.inverse[b]] {
                report.push(t, "Source(b) = Target(b⁻¹)", &[b]);
            }
        }
        for (a, ta) in targets.iter().enumerate() {
            for (b, sb) in sources.iter().enumerate() {
                let defined = t.get(a, b).is_some();
                if defined != (ta == sb) {
                    report.push(t, "Target(a) = Source(b) iff ab defined", &[a, b]);
                }
            }
        }
        Ok(report.finish(n))
    }

    /// Checks a user-supplied object labeling: `ab` must be defined iff
    /// `target_object(a) == source_object(b)`.
    pub fn check_labeling(&self, source_object: &[usize], target_object: &[usize]) -> Result<AxiomReport> {
        let n = self.len();
        if source_object.len() != n || target_object.len() != n {
            return Err(Error::InvalidArgument("labeling length mismatch".into()));
        }
        let mut report = ReportBuilder::default();
        for (a, ta) in target_object.iter().enumerate() {
            for (b, sb) in source_object.iter().enumerate() {
                if self.table.get(a, b).is_some() != (ta == sb) {
                    report.push(&self.table, "labeling", &[a, b]);
                }
            }
        }
        Ok(report.finish(n))
    }

    /// Serializes in the `a b -> c` / `inv a -> b` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                if let Some(c) = self.table.get(a, b) {
                    let _ = writeln!(out, "{} {} -> {}", self.name(a), self.name(b), self.name(c));
                }
            }
        }
        for a in 0..n {
            let _ = writeln!(out, "inv {} -> {}", self.name(a), self.name(self.inverse[a]));
        }
        out
    }

    /// Parses the text format; every element needs an `inv` line.
    pub fn from_text(text: &str) -> Result<Self> {
        let parsed = ParsedTable::parse(text)?;
        let inverse = parsed.strong_inverse()?;
        Self::new(parsed.table, inverse)
    }

    /// Forgets that the inverse is two-sided.
    pub fn to_weak(&self) -> WeakGroupoid {
        WeakGroupoid {
            table: self.table.clone(),
            left_inverse: self.inverse.clone(),
            right_inverse: self.inverse.clone(),
        }
    }
}

fn first_left_inverse(table: &CompositionTable, a: ElementId) -> Option<ElementId> {
    let n = table.len();
    (0..n).find(|&l| match table.get(l, a) {
        Some(u) => (0..n).all(|b| table.get(a, b).is_none() || table.get(u, b) == Some(b)),
        None => false,
    })
}

fn first_right_inverse(table: &CompositionTable, a: ElementId) -> Option<ElementId> {
    let n = table.len();
    (0..n).find(|&r| match table.get(a, r) {
        Some(u) => (0..n).all(|b| table.get(b, a).is_none() || table.get(b, u) == Some(b)),
        None => false,
    })
}

/// A table satisfying only associativity and one-sided unit laws for a
/// separately listed left and right inverse of each element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakGroupoid {
    pub table: CompositionTable,
    pub left_inverse: Vec<ElementId>,
    pub right_inverse: Vec<ElementId>,
}

impl WeakGroupoid {
    /// Parses a table whose `linv`/`rinv` (or `inv`) lines cover every element.
    pub fn from_text(text: &str) -> Result<Self> {
        Self::parse(text, false)
    }

    /// Like [`from_text`](Self::from_text), but searches the table for any
    /// inverse the text leaves out.
    pub fn from_text_searching(text: &str) -> Result<Self> {
        Self::parse(text, true)
    }

    fn parse(text: &str, search: bool) -> Result<Self> {
        let parsed = ParsedTable::parse(text)?;
        let table = parsed.table;
        let end = text.lines().count();
        let pick = |map: &BTreeMap<ElementId, ElementId>, left: bool| {
            (0..table.len())
                .map(|a| {
                    if let Some(&i) = map.get(&a) {
                        return Ok(i);
                    }
                    let kind = if left { "left" } else { "right" };
                    if !search {
                        return Err(Error::Parse {
                            line: end,
                            message: format!("no {kind} inverse for `{}`", table.name(a)),
                        });
                    }
                    let found = if left {
                        first_left_inverse(&table, a)
                    } else {
                        first_right_inverse(&table, a)
                    };
                    found.ok_or_else(|| Error::WeakAxiomViolation {
                        axiom: if left { "2'a" } else { "2'b" }.into(),
                        witness: vec![table.name(a).to_string()],
                    })
                })
                .collect::<Result<Vec<_>>>()
        };
        let left_inverse = pick(&parsed.left, true)?;
        let right_inverse = pick(&parsed.right, false)?;
        Ok(Self {
            table,
            left_inverse,
            right_inverse,
        })
    }

    /// Finds, independently for each element, the first left inverse
    /// satisfying 2′a and the first right inverse satisfying 2′b.
    pub fn search_inverses(table: CompositionTable) -> Result<Self> {
        let n = table.len();
        let mut left_inverse = Vec::with_capacity(n);
        let mut right_inverse = Vec::with_capacity(n);
        for a in 0..n {
            let l = first_left_inverse(&table, a).ok_or_else(|| Error::WeakAxiomViolation {
                axiom: "2'a".into(),
                witness: vec![table.name(a).to_string()],
            })?;
            let r = first_right_inverse(&table, a).ok_or_else(|| Error::WeakAxiomViolation {
                axiom: "2'b".into(),
                witness: vec![table.name(a).to_string()],
            })?;
            left_inverse.push(l);
            right_inverse.push(r);
        }
        Ok(Self {
            table,
            left_inverse,
            right_inverse,
        })
    }

    fn check_weak_axioms(&self) -> Result<()> {
        let t = &self.table;
        let n = t.len();
        if self.left_inverse.len() != n || self.right_inverse.len() != n {
            return Err(Error::InvalidArgument("inverse maps must cover every element".into()));
        }
        for &i in self.left_inverse.iter().chain(&self.right_inverse) {
            t.check(i)?;
        }
        let mut assoc = ReportBuilder::default();
        t.check_associativity(&mut assoc);
        if let Some(v) = assoc.violations.into_iter().next() {
            return Err(Error::WeakAxiomViolation {
                axiom: "1".into(),
                witness: v.witness,
            });
        }
        let violation = |axiom: &str, ids: &[ElementId]| Error::WeakAxiomViolation {
            axiom: axiom.into(),
            witness: t.witness(ids),
        };
        for a in 0..n {
            let (l, r) = (self.left_inverse[a], self.right_inverse[a]);
            let lu = t.get(l, a).ok_or_else(|| violation("2'", &[l, a]))?;
            let ru = t.get(a, r).ok_or_else(|| violation("2'", &[a, r]))?;
            for b in 0..n {
                if t.get(a, b).is_some() && t.get(lu, b) != Some(b) {
                    return Err(violation("2'a", &[a, b]));
                }
                if t.get(b, a).is_some() && t.get(b, ru) != Some(b) {
                    return Err(violation("2'b", &[a, b]));
                }
            }
        }
        Ok(())
    }

    /// Replays the derivation of two-sided inverses step by step on every
    /// element, then runs the full axiom check on the resulting groupoid.
    ///
    /// Fails with [`Error::WeakAxiomViolation`] when the input does not
    /// satisfy the weak axioms; a theorem failure would show up as a
    /// violation in the report instead.
    pub fn derive_strong_inverses(&self) -> Result<AxiomReport> {
        self.check_weak_axioms()?;
        let t = &self.table;
        let n = t.len();
        let mut report = ReportBuilder::default();
        let eq = |x: Option<ElementId>, y: ElementId| x == Some(y);

        for a in 0..n {
            let (l, r) = (self.left_inverse[a], self.right_inverse[a]);
            // a_L = a_L (a a_R) = (a_L a) a_R = a_R
            let a_ar = t.get(a, r);
            let step1 = a_ar.and_then(|u| t.get(l, u));
            let step2 = t.get(l, a).and_then(|u| t.get(u, r));
            if !eq(step1, l) {
                report.push(t, "a_L = a_L(a a_R)", &[a]);
            }
            if step1 != step2 {
                report.push(t, "a_L(a a_R) = (a_L a)a_R", &[a]);
            }
            if !eq(step2, r) {
                report.push(t, "(a_L a)a_R = a_R", &[a]);
            }
            if l != r {
                report.push(t, "a_L = a_R", &[a, l, r]);
            }
        }

        for a in 0..n {
            let inv = self.left_inverse[a];
            // (a⁻¹)⁻¹ may be taken from either side once they coincide.
            let inv_inv = self.right_inverse[inv];
            // a = a(a⁻¹(a⁻¹)⁻¹) = (a a⁻¹)(a⁻¹)⁻¹ = (a⁻¹)⁻¹
            let lhs = t.get(inv, inv_inv).and_then(|u| t.get(a, u));
            let rhs = t.get(a, inv).and_then(|u| t.get(u, inv_inv));
            if !eq(lhs, a) {
                report.push(t, "a = a(a⁻¹(a⁻¹)⁻¹)", &[a]);
            }
            if lhs != rhs {
                report.push(t, "a(a⁻¹(a⁻¹)⁻¹) = (a a⁻¹)(a⁻¹)⁻¹", &[a]);
            }
            if !eq(rhs, inv_inv) || inv_inv != a {
                report.push(t, "(a⁻¹)⁻¹ = a", &[a, inv_inv]);
            }
        }

        if report.count == 0 {
            let strong = FiniteGroupoid::new(t.clone(), self.left_inverse.clone())?;
            let full = strong.verify_axioms()?;
            report.count += full.violation_count;
            report.violations.extend(full.violations);
        }
        Ok(report.finish(n))
    }
}

struct ParsedTable {
    table: CompositionTable,
    strong: BTreeMap<ElementId, ElementId>,
    left: BTreeMap<ElementId, ElementId>,
    right: BTreeMap<ElementId, ElementId>,
}

enum Line<'a> {
    Compose(&'a str, &'a str, &'a str),
    Inverse(&'a str, &'a str, &'a str),
}

impl ParsedTable {
    fn parse(text: &str) -> Result<Self> {
        let mut lines = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let mut seen = BTreeSet::new();
        let mut note = |tok: &str| {
            if seen.insert(tok.to_string()) {
                names.push(tok.to_string());
            }
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |message: &str| Error::Parse {
                line: lineno + 1,
                message: format!("{message}: `{line}`"),
            };
            if let Some(bad) = toks.iter().find(|t| !t.is_ascii()) {
                return Err(err(&format!("non-ASCII token `{bad}`")));
            }
            let parsed = match toks.as_slice() {
                [kind @ ("inv" | "linv" | "rinv"), a, "->", b] => Line::Inverse(kind, a, b),
                [a, b, "->", c] => Line::Compose(a, b, c),
                _ => return Err(err("expected `a b -> c` or `inv a -> b`")),
            };
            match parsed {
                Line::Compose(a, b, c) => {
                    note(a);
                    note(b);
                    note(c);
                }
                Line::Inverse(_, a, b) => {
                    note(a);
                    note(b);
                }
            }
            lines.push((lineno + 1, parsed));
        }

        let mut table = CompositionTable::new(names)?;
        let mut strong = BTreeMap::new();
        let mut left = BTreeMap::new();
        let mut right = BTreeMap::new();
        for (line, parsed) in lines {
            let with_line = |e: Error| match e {
                Error::InvalidArgument(message) => Error::Parse { line, message },
                other => other,
            };
            match parsed {
                Line::Compose(a, b, c) => {
                    let (a, b, c) = (table.id(a)?, table.id(b)?, table.id(c)?);
                    table.set(a, b, c).map_err(with_line)?;
                }
                Line::Inverse(kind, a, b) => {
                    let (a, b) = (table.id(a)?, table.id(b)?);
                    let targets: &mut [&mut BTreeMap<_, _>] = match kind {
                        "inv" => &mut [&mut strong, &mut left, &mut right],
                        "linv" => &mut [&mut left],
                        _ => &mut [&mut right],
                    };
                    for map in targets.iter_mut() {
                        if let Some(old) = map.insert(a, b) {
                            if old != b {
                                return Err(Error::Parse {
                                    line,
                                    message: format!("conflicting {kind} for `{}`", table.name(a)),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(Self {
            table,
            strong,
            left,
            right,
        })
    }

    fn strong_inverse(&self) -> Result<Vec<ElementId>> {
        (0..self.table.len())
            .map(|a| {
                self.strong.get(&a).copied().ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("missing `inv {} -> ...` line", self.table.name(a)),
                })
            })
            .collect()
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}
