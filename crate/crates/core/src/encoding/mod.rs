//! Simplex census and digital encodings of truncations as fixed-width bit
//! strings, with face and degeneracy maps acting directly on the strings.
//!
//! Bit strings are big-endian: the first character is the most significant
//! bit, and multi-slot layouts put the first slot in the highest bits.

mod census;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::OperatorKind;
use crate::sset::{build_from_complex, build_nerve_group, FiniteGroupTable, OrderedComplexTable, SimplexRef, TruncatedSimplicialSet};

pub use census::{census, complex_counts, nerve_counts, recombine, register_width, CensusReport};

/// Widest register the tables support; codes are held in a `u64`.
pub const MAX_WIDTH: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum EncodingScheme {
    /// Simplices numbered degree by degree in table order.
    Enumerative,
    /// Another encoding's codes reassigned by a permutation.
    Permuted,
    /// `(x_1, …, x_N; y)`: one `slot_bits` slot per group element of the
    /// string, zero padded, then the degree in `degree_bits` bits.
    Nerve { slot_bits: u32, degree_bits: u32 },
    /// `(x_0, …, x_d)`: the multiplicity of each vertex, `slot_bits` each.
    Complex { slot_bits: u32 },
}

#[derive(Clone, Debug)]
enum Rule {
    Lookup,
    Nerve {
        group: FiniteGroupTable,
        /// Element to slot value, with the identity at 0.
        phi: Vec<u64>,
        phi_inv: BTreeMap<u64, usize>,
    },
    Complex {
        slots: usize,
    },
}

/// One row of the `(label, bit string)` listing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingEntry {
    pub degree: usize,
    pub label: String,
    pub bits: String,
}

/// Outcome of the exhaustive checks on an encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingCheck {
    pub simplices: usize,
    pub bijective: bool,
    /// Every code lies in the layout of its own degree and of no other.
    pub partition: bool,
    pub faces_checked: usize,
    pub faces_agreeing: usize,
    pub degeneracies_checked: usize,
    pub degeneracies_agreeing: usize,
    pub identities_checked: usize,
    pub identity_failures: usize,
    /// Multiplicities add up to `n + 1`; only for the complex scheme.
    pub sum_rule: Option<bool>,
}

impl EncodingCheck {
    pub fn passed(&self) -> bool {
        self.bijective
            && self.partition
            && self.faces_checked == self.faces_agreeing
            && self.degeneracies_checked == self.degeneracies_agreeing
            && self.identity_failures == 0
            && self.sum_rule != Some(false)
    }
}

/// A bijection between the simplices of a truncation and bit strings of a
/// fixed width.
#[derive(Clone, Debug)]
pub struct EncodingTable {
    scheme: EncodingScheme,
    width: u32,
    set: TruncatedSimplicialSet,
    codes: Vec<Vec<u64>>,
    lookup: BTreeMap<u64, SimplexRef>,
    rule: Rule,
}

impl EncodingTable {
    fn assemble(
        scheme: EncodingScheme,
        width: u32,
        set: TruncatedSimplicialSet,
        codes: Vec<Vec<u64>>,
        rule: Rule,
    ) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::invalid(format!("register width {width} exceeds {MAX_WIDTH} bits")));
        }
        let mut lookup = BTreeMap::new();
        for (n, row) in codes.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                if width < MAX_WIDTH && c >> width != 0 {
                    return Err(Error::invalid(format!("code {c} does not fit in {width} bits")));
                }
                if lookup.insert(c, SimplexRef::new(n, k)).is_some() {
                    return Err(Error::invalid(format!("code {c} assigned twice")));
                }
            }
        }
        Ok(EncodingTable {
            scheme,
            width,
            set,
            codes,
            lookup,
            rule,
        })
    }

    pub fn scheme(&self) -> &EncodingScheme {
        &self.scheme
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn simplicial_set(&self) -> &TruncatedSimplicialSet {
        &self.set
    }

    pub fn code(&self, s: SimplexRef) -> u64 {
        self.codes[s.degree][s.index]
    }

    pub fn bits(&self, s: SimplexRef) -> String {
        self.format(self.code(s))
    }

    pub fn format(&self, code: u64) -> String {
        if self.width == 0 {
            String::new()
        } else {
            format!("{code:0w$b}", w = self.width as usize)
        }
    }

    pub fn parse(&self, bits: &str) -> Result<u64> {
        if bits.len() != self.width as usize {
            return Err(Error::invalid(format!("expected {} bits, got {:?}", self.width, bits)));
        }
        if bits.is_empty() {
            return Ok(0);
        }
        u64::from_str_radix(bits, 2).map_err(|_| Error::invalid(format!("not a bit string: {bits:?}")))
    }

    pub fn decode(&self, code: u64) -> Option<SimplexRef> {
        self.lookup.get(&code).copied()
    }

    fn decode_in(&self, n: usize, code: u64) -> Result<SimplexRef> {
        match self.decode(code) {
            Some(s) if s.degree == n => Ok(s),
            _ => Err(Error::invalid(format!("{} does not encode a {n}-simplex", self.format(code)))),
        }
    }

    fn check_operator(&self, kind: OperatorKind, n: usize, i: usize) -> Result<()> {
        let ok = match kind {
            OperatorKind::Face => n >= 1 && n <= self.set.cutoff() && i <= n,
            OperatorKind::Degeneracy => n < self.set.cutoff() && i <= n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("no encoded {kind:?} map with n = {n}, i = {i}")))
        }
    }

    /// `χ ∘ d_{n,i} ∘ χ⁻¹` or `χ ∘ s_{n,i} ∘ χ⁻¹`, through the tables.
    pub fn conjugated(&self, kind: OperatorKind, n: usize, i: usize, code: u64) -> Result<u64> {
        self.check_operator(kind, n, i)?;
        let s = self.decode_in(n, code)?;
        Ok(match kind {
            OperatorKind::Face => self.codes[n - 1][self.set.face(n, i, s.index)],
            OperatorKind::Degeneracy => self.codes[n + 1][self.set.degeneracy(n, i, s.index)],
        })
    }

    /// The scheme's own face or degeneracy map on bit strings. Table-free
    /// for the nerve and complex layouts; a lookup otherwise.
    pub fn encoded(&self, kind: OperatorKind, n: usize, i: usize, code: u64) -> Result<u64> {
        self.check_operator(kind, n, i)?;
        if !self.in_layout(n, code) {
            return Err(Error::invalid(format!("{} is outside the degree-{n} layout", self.format(code))));
        }
        match (&self.rule, &self.scheme) {
            (Rule::Lookup, _) => self.conjugated(kind, n, i, code),
            (Rule::Nerve { group, phi, phi_inv }, EncodingScheme::Nerve { slot_bits, degree_bits }) => {
                let big_n = self.set.cutoff();
                let (mut x, _) = unpack_nerve(code, big_n, *slot_bits, *degree_bits);
                x.truncate(n);
                let y = match kind {
                    OperatorKind::Face => {
                        if i == 0 {
                            x.remove(0);
                        } else if i == n {
                            x.pop();
                        } else {
                            let g = group.mul(phi_inv[&x[i - 1]], phi_inv[&x[i]]);
                            x[i - 1] = phi[g];
                            x.remove(i);
                        }
                        n - 1
                    }
                    OperatorKind::Degeneracy => {
                        x.insert(i, 0);
                        n + 1
                    }
                };
                Ok(pack_nerve(&x, y as u64, big_n, *slot_bits, *degree_bits))
            }
            (Rule::Complex { slots }, EncodingScheme::Complex { slot_bits }) => {
                let mut x = unpack_slots(code, *slots, *slot_bits);
                let mut below = 0;
                for xa in x.iter_mut() {
                    let theta = below <= i as u64 && (i as u64) < below + *xa;
                    below += *xa;
                    if theta {
                        match kind {
                            OperatorKind::Face => *xa -= 1,
                            OperatorKind::Degeneracy => *xa += 1,
                        }
                    }
                }
                Ok(pack_slots(&x, *slot_bits))
            }
            _ => unreachable!("rule and scheme are built together"),
        }
    }

    /// Whether `code` has the shape of a degree-`n` string in this scheme,
    /// decided from the bits alone where the layout allows it.
    fn in_layout(&self, n: usize, code: u64) -> bool {
        match (&self.rule, &self.scheme) {
            (Rule::Nerve { phi_inv, .. }, EncodingScheme::Nerve { slot_bits, degree_bits }) => {
                let (x, y) = unpack_nerve(code, self.set.cutoff(), *slot_bits, *degree_bits);
                y == n as u64 && x[..n].iter().all(|v| phi_inv.contains_key(v)) && x[n..].iter().all(|&v| v == 0)
            }
            (Rule::Complex { slots }, EncodingScheme::Complex { slot_bits }) => {
                unpack_slots(code, *slots, *slot_bits).iter().sum::<u64>() == n as u64 + 1
            }
            _ => self.decode(code).is_some_and(|s| s.degree == n),
        }
    }

    /// Exhaustive check of bijectivity, the degree partition, agreement of
    /// the encoded maps with the conjugated tables, and the simplicial
    /// identities replayed on bit strings.
    pub fn verify(&self) -> Result<EncodingCheck> {
        let big_n = self.set.cutoff();
        let simplices: usize = self.codes.iter().map(Vec::len).sum();
        let bijective = self.lookup.len() == simplices
            && self.codes.iter().enumerate().all(|(n, row)| {
                row.iter()
                    .enumerate()
                    .all(|(k, &c)| self.decode(c) == Some(SimplexRef::new(n, k)))
            });
        let partition = self.codes.iter().enumerate().all(|(n, row)| {
            row.iter()
                .all(|&c| (0..=big_n).all(|m| self.in_layout(m, c) == (m == n)))
        });
        let mut check = EncodingCheck {
            simplices,
            bijective,
            partition,
            faces_checked: 0,
            faces_agreeing: 0,
            degeneracies_checked: 0,
            degeneracies_agreeing: 0,
            identities_checked: 0,
            identity_failures: 0,
            sum_rule: match self.rule {
                Rule::Complex { .. } => Some(true),
                _ => None,
            },
        };
        if let (Rule::Complex { slots }, EncodingScheme::Complex { slot_bits }) = (&self.rule, &self.scheme) {
            check.sum_rule = Some(self.codes.iter().enumerate().all(|(n, row)| {
                row.iter()
                    .all(|&c| unpack_slots(c, *slots, *slot_bits).iter().sum::<u64>() == n as u64 + 1)
            }));
        }
        for n in 0..=big_n {
            for &c in &self.codes[n] {
                for i in 0..=n {
                    if n >= 1 {
                        check.faces_checked += 1;
                        if self.encoded(OperatorKind::Face, n, i, c).ok() == Some(self.conjugated(OperatorKind::Face, n, i, c)?) {
                            check.faces_agreeing += 1;
                        }
                    }
                    if n < big_n {
                        check.degeneracies_checked += 1;
                        if self.encoded(OperatorKind::Degeneracy, n, i, c).ok()
                            == Some(self.conjugated(OperatorKind::Degeneracy, n, i, c)?)
                        {
                            check.degeneracies_agreeing += 1;
                        }
                    }
                }
            }
        }
        if check.faces_checked == check.faces_agreeing && check.degeneracies_checked == check.degeneracies_agreeing {
            let (checked, failures) = self.replay_identities()?;
            check.identities_checked = checked;
            check.identity_failures = failures;
        }
        Ok(check)
    }

    /// Replays the five families of simplicial identities with the encoded
    /// maps on every string of the range.
    fn replay_identities(&self) -> Result<(usize, usize)> {
        let big_n = self.set.cutoff();
        let d = |n: usize, i: usize, c: u64| self.encoded(OperatorKind::Face, n, i, c);
        let s = |n: usize, i: usize, c: u64| self.encoded(OperatorKind::Degeneracy, n, i, c);
        let (mut checked, mut failures) = (0, 0);
        let mut tally = |ok: bool| {
            checked += 1;
            if !ok {
                failures += 1;
            }
        };
        for n in 0..=big_n {
            for &c in &self.codes[n] {
                for j in 0..=n {
                    for i in 0..=n {
                        if n >= 2 && i < j {
                            tally(d(n - 1, i, d(n, j, c)?)? == d(n - 1, j - 1, d(n, i, c)?)?);
                        }
                    }
                    if n < big_n {
                        let up = s(n, j, c)?;
                        tally(d(n + 1, j, up)? == c && d(n + 1, j + 1, up)? == c);
                        for i in 0..=n + 1 {
                            if i < j && n >= 1 {
                                tally(d(n + 1, i, up)? == s(n - 1, j - 1, d(n, i, c)?)?);
                            }
                            if i > j + 1 {
                                tally(d(n + 1, i, up)? == s(n - 1, j, d(n, i - 1, c)?)?);
                            }
                        }
                    }
                    if n + 2 <= big_n {
                        for i in 0..=j {
                            tally(s(n + 1, i, s(n, j, c)?)? == s(n + 1, j + 1, s(n, i, c)?)?);
                        }
                    }
                }
            }
        }
        Ok((checked, failures))
    }

    /// Degree by degree, in table order.
    pub fn listing(&self) -> Vec<EncodingEntry> {
        self.codes
            .iter()
            .enumerate()
            .flat_map(|(n, row)| {
                row.iter().enumerate().map(move |(k, &c)| EncodingEntry {
                    degree: n,
                    label: self.set.labels(n)[k].clone(),
                    bits: self.format(c),
                })
            })
            .collect()
    }

    /// `(input, output)` bit strings of one encoded map over its whole domain.
    pub fn truth_table(&self, kind: OperatorKind, n: usize, i: usize) -> Result<Vec<(String, String)>> {
        self.check_operator(kind, n, i)?;
        self.codes[n]
            .iter()
            .map(|&c| Ok((self.format(c), self.format(self.encoded(kind, n, i, c)?))))
            .collect()
    }

    /// The encoding `π ∘ χ` for a permutation `π` of the range, given as
    /// positions in the degree-major listing: simplex `p` receives the code
    /// of simplex `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<EncodingTable> {
        let flat: Vec<u64> = self.codes.iter().flatten().copied().collect();
        if perm.len() != flat.len() {
            return Err(Error::invalid(format!("permutation has {} entries, expected {}", perm.len(), flat.len())));
        }
        let mut seen = vec![false; flat.len()];
        for &p in perm {
            if p >= flat.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::invalid("not a permutation of the range"));
            }
        }
        let mut next = perm.iter().map(|&p| flat[p]);
        let codes = self
            .codes
            .iter()
            .map(|row| row.iter().map(|_| next.next().expect("lengths match")).collect())
            .collect();
        Self::assemble(EncodingScheme::Permuted, self.width, self.set.clone(), codes, Rule::Lookup)
    }
}

/// Simplices numbered degree by degree and written with the minimal width
/// (at least one bit).
pub fn enumerative_encoding(x: &TruncatedSimplicialSet) -> Result<EncodingTable> {
    let total: u64 = x.counts().iter().map(|&c| c as u64).sum();
    let width = register_width(total).max(1);
    let mut next = 0u64;
    let codes = (0..=x.cutoff())
        .map(|n| {
            (0..x.count(n))
                .map(|_| {
                    next += 1;
                    next - 1
                })
                .collect()
        })
        .collect();
    EncodingTable::assemble(EncodingScheme::Enumerative, width, x.clone(), codes, Rule::Lookup)
}

fn bits_needed(values: u64) -> u32 {
    register_width(values)
}

fn pack_slots(x: &[u64], slot_bits: u32) -> u64 {
    x.iter().fold(0, |acc, &v| (acc << slot_bits) | v)
}

fn unpack_slots(code: u64, slots: usize, slot_bits: u32) -> Vec<u64> {
    let mask = (1u64 << slot_bits) - 1;
    (0..slots)
        .rev()
        .map(|k| (code >> (k as u32 * slot_bits)) & mask)
        .collect()
}

fn pack_nerve(x: &[u64], y: u64, cutoff: usize, slot_bits: u32, degree_bits: u32) -> u64 {
    let mut slots = x.to_vec();
    slots.resize(cutoff, 0);
    (pack_slots(&slots, slot_bits) << degree_bits) | y
}

fn unpack_nerve(code: u64, cutoff: usize, slot_bits: u32, degree_bits: u32) -> (Vec<u64>, u64) {
    let y = code & ((1u64 << degree_bits) - 1);
    (unpack_slots(code >> degree_bits, cutoff, slot_bits), y)
}

/// The nerve of `group` truncated at `cutoff`, laid out as
/// `(x_1, …, x_N; y)` over `N·slot_bits + degree_bits` bits. Elements are
/// numbered in table order with the identity moved to 0.
pub fn nerve_register_encoding(
    group: &FiniteGroupTable,
    cutoff: usize,
    slot_bits: u32,
    degree_bits: u32,
) -> Result<EncodingTable> {
    let q = group.order();
    if slot_bits < bits_needed(q as u64) {
        return Err(Error::invalid(format!("{slot_bits} slot bits cannot hold {q} elements")));
    }
    if degree_bits < bits_needed(cutoff as u64 + 1) {
        return Err(Error::invalid(format!("{degree_bits} degree bits cannot hold degrees up to {cutoff}")));
    }
    let width = cutoff as u32 * slot_bits + degree_bits;
    if width > MAX_WIDTH || slot_bits >= MAX_WIDTH || degree_bits >= MAX_WIDTH {
        return Err(Error::invalid(format!("register width {width} exceeds {MAX_WIDTH} bits")));
    }
    let e = group.identity();
    let phi: Vec<u64> = (0..q)
        .map(|g| match g.cmp(&e) {
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => g as u64 + 1,
            std::cmp::Ordering::Greater => g as u64,
        })
        .collect();
    let phi_inv = phi.iter().enumerate().map(|(g, &v)| (v, g)).collect();
    let x = build_nerve_group(group, cutoff)?;
    let codes = (0..=cutoff)
        .map(|n| {
            (0..x.count(n))
                .map(|k| {
                    // strings are base-|G| numerals, first element most significant
                    let mut elems = vec![0; n];
                    let mut rest = k;
                    for slot in elems.iter_mut().rev() {
                        *slot = phi[rest % q];
                        rest /= q;
                    }
                    pack_nerve(&elems, n as u64, cutoff, slot_bits, degree_bits)
                })
                .collect()
        })
        .collect();
    EncodingTable::assemble(
        EncodingScheme::Nerve { slot_bits, degree_bits },
        width,
        x,
        codes,
        Rule::Nerve {
            group: group.clone(),
            phi,
            phi_inv,
        },
    )
}

/// The simplicial set of `cx` truncated at `cutoff`, each simplex written
/// as its vertex multiplicities `(x_0, …, x_d)` with `slot_bits` bits per vertex.
pub fn complex_register_encoding(cx: &OrderedComplexTable, cutoff: usize, slot_bits: u32) -> Result<EncodingTable> {
    if slot_bits < bits_needed(cutoff as u64 + 2) {
        return Err(Error::invalid(format!(
            "{slot_bits} slot bits cannot hold multiplicities up to {}",
            cutoff + 1
        )));
    }
    let slots = cx.vertex_count();
    let width = slots as u32 * slot_bits;
    if width > MAX_WIDTH || slot_bits >= MAX_WIDTH {
        return Err(Error::invalid(format!("register width {width} exceeds {MAX_WIDTH} bits")));
    }
    let x = build_from_complex(cx, cutoff)?;
    let vertex_ids: Vec<usize> = x
        .labels(0)
        .iter()
        .map(|l| {
            l.trim_start_matches('(')
                .trim_end_matches(')')
                .parse()
                .map_err(|_| Error::invariant(format!("vertex label {l:?} is not a vertex number")))
        })
        .collect::<Result<_>>()?;
    let codes = (0..=cutoff)
        .map(|n| {
            (0..x.count(n))
                .map(|k| {
                    let mut mult = vec![0u64; slots];
                    for j in 0..=n {
                        mult[vertex_ids[vertex_of(&x, n, k, j)]] += 1;
                    }
                    pack_slots(&mult, slot_bits)
                })
                .collect()
        })
        .collect();
    EncodingTable::assemble(EncodingScheme::Complex { slot_bits }, width, x, codes, Rule::Complex { slots })
}

/// The `j`-th vertex of an `n`-simplex, found by deleting the later
/// vertices with last faces and the earlier ones with first faces.
fn vertex_of(x: &TruncatedSimplicialSet, n: usize, k: usize, j: usize) -> usize {
    let mut cur = k;
    for m in (j + 1..=n).rev() {
        cur = x.face(m, m, cur);
    }
    for m in (1..=j).rev() {
        cur = x.face(m, 0, cur);
    }
    cur
}

#[cfg(test)]
mod tests;
