//! Permutation circuits that commute with every face and degeneracy
//! operator, built from morphisms into simplicial groups, and their action
//! on harmonic chains.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{degeneracy_matrix, degeneracy_projector, face_matrix};
use crate::homology::{full_complex, normalized_complex};
use crate::linalg::{spectral::SymSpectrum, IntMatrix};
use crate::sset::{morphism_validate, product, FiniteGroupTable, SimplicialMorphismTable, TruncatedSimplicialSet};

/// Degreewise group law on a discrete group set or on the nerve of an
/// abelian group, where the product of strings is taken slot by slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialGroupStructure {
    group: FiniteGroupTable,
    nerve: bool,
    cutoff: usize,
}

impl SimplicialGroupStructure {
    pub fn group(&self) -> &FiniteGroupTable {
        &self.group
    }

    pub fn is_nerve(&self) -> bool {
        self.nerve
    }

    fn slots(&self, n: usize) -> usize {
        if self.nerve {
            n
        } else {
            1
        }
    }

    /// Group elements of a simplex, most significant slot first.
    fn digits(&self, n: usize, mut k: usize) -> Vec<usize> {
        let q = self.group.order();
        let mut out = vec![0; self.slots(n)];
        for slot in out.iter_mut().rev() {
            *slot = k % q;
            k /= q;
        }
        out
    }

    fn index(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &g| acc * self.group.order() + g)
    }

    pub fn mul(&self, n: usize, a: usize, b: usize) -> usize {
        let (da, db) = (self.digits(n, a), self.digits(n, b));
        let prod: Vec<usize> = da.iter().zip(&db).map(|(&g, &h)| self.group.mul(g, h)).collect();
        self.index(&prod)
    }

    pub fn inverse(&self, n: usize, a: usize) -> usize {
        let inv: Vec<usize> = self.digits(n, a).iter().map(|&g| self.group.inverse(g)).collect();
        self.index(&inv)
    }

    pub fn identity(&self, n: usize) -> usize {
        self.index(&vec![self.group.identity(); self.slots(n)])
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }
}

/// Attaches the degreewise group law and checks exhaustively that every
/// face and degeneracy map is a homomorphism.
///
/// Nerves of non-abelian groups fail the check at an interior face; the
/// error names the degree, face and pair of simplices.
pub fn attach_group_structure(x: &TruncatedSimplicialSet) -> Result<SimplicialGroupStructure> {
    let (group, nerve) = x
        .provenance()
        .group()
        .ok_or_else(|| Error::Unsupported("group structure needs a discrete group set or a group nerve".into()))?;
    let grp = SimplicialGroupStructure {
        group: group.clone(),
        nerve,
        cutoff: x.cutoff(),
    };
    for n in 0..=x.cutoff() {
        let count = x.count(n);
        for a in 0..count {
            for b in 0..count {
                let ab = grp.mul(n, a, b);
                for i in 0..=n {
                    if n >= 1 {
                        let (fa, fb) = (x.face(n, i, a), x.face(n, i, b));
                        if x.face(n, i, ab) != grp.mul(n - 1, fa, fb) {
                            return Err(Error::Unsupported(format!(
                                "face d_{n},{i} is not a homomorphism: fails on ({}, {})",
                                x.labels(n)[a],
                                x.labels(n)[b]
                            )));
                        }
                    }
                    if n < x.cutoff() {
                        let (sa, sb) = (x.degeneracy(n, i, a), x.degeneracy(n, i, b));
                        if x.degeneracy(n, i, ab) != grp.mul(n + 1, sa, sb) {
                            return Err(Error::Unsupported(format!(
                                "degeneracy s_{n},{i} is not a homomorphism: fails on ({}, {})",
                                x.labels(n)[a],
                                x.labels(n)[b]
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(grp)
}

/// One permutation of the simplices per degree, `perms[n][k]` being the
/// image of simplex `k`. Degrees above the cutoff act as the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleCircuit {
    perms: Vec<Vec<usize>>,
}

impl SimpleCircuit {
    /// Checks that every degree is a permutation of `0..|X_n|`.
    pub fn new(perms: Vec<Vec<usize>>, x: &TruncatedSimplicialSet) -> Result<Self> {
        if perms.len() != x.cutoff() + 1 {
            return Err(Error::invalid(format!("circuit needs {} degrees, got {}", x.cutoff() + 1, perms.len())));
        }
        for (n, p) in perms.iter().enumerate() {
            let mut seen = vec![false; x.count(n)];
            if p.len() != x.count(n) {
                return Err(Error::invalid(format!("degree-{n} permutation has {} entries, expected {}", p.len(), x.count(n))));
            }
            for &v in p {
                if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::invalid(format!("degree-{n} entry list is not a permutation")));
                }
            }
        }
        Ok(SimpleCircuit { perms })
    }

    pub fn identity(x: &TruncatedSimplicialSet) -> Self {
        SimpleCircuit {
            perms: (0..=x.cutoff()).map(|n| (0..x.count(n)).collect()).collect(),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.perms.len() - 1
    }

    pub fn permutation(&self, n: usize) -> &[usize] {
        &self.perms[n]
    }

    pub fn matrix(&self, n: usize) -> IntMatrix {
        IntMatrix::from_function(&self.perms[n], self.perms[n].len())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &SimpleCircuit) -> SimpleCircuit {
        SimpleCircuit {
            perms: self
                .perms
                .iter()
                .zip(&next.perms)
                .map(|(a, b)| a.iter().map(|&k| b[k]).collect())
                .collect(),
        }
    }

    pub fn inverse(&self) -> SimpleCircuit {
        SimpleCircuit {
            perms: self
                .perms
                .iter()
                .map(|p| {
                    let mut inv = vec![0; p.len()];
                    for (k, &v) in p.iter().enumerate() {
                        inv[v] = k;
                    }
                    inv
                })
                .collect(),
        }
    }
}

/// The reversible form of `φ : X → X'`: on `X × X'` it sends `(σ, σ')` to
/// `(σ, σ'·φ(σ))`. Returns the product set together with the circuit, which
/// is validated before returning.
pub fn circuit_from_morphism(
    phi: &SimplicialMorphismTable,
    x: &TruncatedSimplicialSet,
    target: &TruncatedSimplicialSet,
    grp: &SimplicialGroupStructure,
) -> Result<(TruncatedSimplicialSet, SimpleCircuit)> {
    morphism_validate(phi, x, target).into_result()?;
    if grp.cutoff() != target.cutoff() {
        return Err(Error::invalid("group structure belongs to a different truncation"));
    }
    let space = product(x, target)?;
    let perms = (0..=x.cutoff())
        .map(|n| {
            let m = target.count(n);
            (0..x.count(n))
                .flat_map(|a| (0..m).map(move |b| (a, b)))
                .map(|(a, b)| a * m + grp.mul(n, b, phi.map(n)[a]))
                .collect()
        })
        .collect();
    let circuit = SimpleCircuit::new(perms, &space)?;
    let report = validate_circuit(&space, &circuit)?;
    if !report.passed() {
        return Err(Error::invariant(format!(
            "circuit built from a morphism fails validation: {:?}",
            report.violations.first()
        )));
    }
    Ok((space, circuit))
}

/// Multiplication `μ : X × X → X` of a simplicial group, as a morphism.
pub fn multiplication_morphism(
    x: &TruncatedSimplicialSet,
    grp: &SimplicialGroupStructure,
) -> Result<(TruncatedSimplicialSet, SimplicialMorphismTable)> {
    let pairs = product(x, x)?;
    let maps = (0..=x.cutoff())
        .map(|n| {
            let m = x.count(n);
            (0..m * m).map(|k| grp.mul(n, k / m, k % m)).collect()
        })
        .collect();
    let mu = SimplicialMorphismTable::new(maps, &pairs, x)?;
    Ok((pairs, mu))
}

/// `φ` followed by inversion in the target group.
pub fn inverse_morphism(
    phi: &SimplicialMorphismTable,
    x: &TruncatedSimplicialSet,
    target: &TruncatedSimplicialSet,
    grp: &SimplicialGroupStructure,
) -> Result<SimplicialMorphismTable> {
    let maps = (0..=x.cutoff())
        .map(|n| phi.map(n).iter().map(|&k| grp.inverse(n, k)).collect())
        .collect();
    SimplicialMorphismTable::new(maps, x, target)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitViolation {
    /// `face` for `U D = D U`, `degeneracy` for `U S = S U`, `block` for a
    /// failed block identity.
    pub relation: &'static str,
    pub n: usize,
    pub i: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitReport {
    pub relations_checked: usize,
    pub violations: Vec<CircuitViolation>,
    /// Block identities checked for the direct sums over index sets of size `p`.
    pub block_checks: Vec<(usize, usize)>,
    pub block_failures: usize,
}

impl CircuitReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.block_failures == 0
    }
}

/// Largest index-set size used for the block identities.
pub const MAX_BLOCK_ARITY: usize = 3;

/// Checks `U_{n-1} D_{n,i} = D_{n,i} U_n` and `U_{n+1} S_{n,i} = S_{n,i} U_n`
/// everywhere, then assembles `U_A = ⊕_{n∈A} U_n` for every index set `A`
/// of size at most three and checks `X_A U_A = U_{A+α} X_A` for every sign
/// choice `α` (with `α_0 = +1`) and every index tuple, where `X` is a face
/// operator for `α_n = −1` and a degeneracy for `α_n = +1`.
pub fn validate_circuit(x: &TruncatedSimplicialSet, c: &SimpleCircuit) -> Result<CircuitReport> {
    if c.cutoff() != x.cutoff() || (0..=x.cutoff()).any(|n| c.permutation(n).len() != x.count(n)) {
        return Err(Error::invalid("circuit shape does not match the simplicial set"));
    }
    let big_n = x.cutoff();
    let u: Vec<IntMatrix> = (0..=big_n).map(|n| c.matrix(n)).collect();
    let mut report = CircuitReport {
        relations_checked: 0,
        violations: Vec::new(),
        block_checks: Vec::new(),
        block_failures: 0,
    };
    for n in 0..=big_n {
        for i in 0..=n {
            if n >= 1 {
                let d = face_matrix(x, n, i)?;
                report.relations_checked += 1;
                if u[n - 1].mul(&d) != d.mul(&u[n]) {
                    report.violations.push(CircuitViolation { relation: "face", n, i });
                }
            }
            if n < big_n {
                let s = degeneracy_matrix(x, n, i)?;
                report.relations_checked += 1;
                if u[n + 1].mul(&s) != s.mul(&u[n]) {
                    report.violations.push(CircuitViolation { relation: "degeneracy", n, i });
                }
            }
        }
    }
    for p in 1..=MAX_BLOCK_ARITY.min(big_n + 1) {
        let mut checked = 0;
        for set in subsets(big_n + 1, p) {
            for signs in 0..1usize << p {
                let alpha: Vec<i32> = (0..p).map(|k| if signs >> k & 1 == 1 { 1 } else { -1 }).collect();
                let shifted: Option<Vec<usize>> = set
                    .iter()
                    .zip(&alpha)
                    .map(|(&n, &a)| {
                        let m = n as i64 + a as i64;
                        (m >= 0 && m as usize <= big_n && (a == -1 || n < big_n)).then_some(m as usize)
                    })
                    .collect();
                let Some(shifted) = shifted else { continue };
                if set.contains(&0) && alpha[set.iter().position(|&n| n == 0).expect("present")] != 1 {
                    continue;
                }
                for tuple in index_tuples(&set) {
                    let blocks: Vec<IntMatrix> = set
                        .iter()
                        .zip(&alpha)
                        .zip(&tuple)
                        .map(|((&n, &a), &i)| if a == 1 { degeneracy_matrix(x, n, i) } else { face_matrix(x, n, i) })
                        .collect::<Result<_>>()?;
                    let x_block = IntMatrix::block_diagonal(&blocks.iter().collect::<Vec<_>>());
                    let u_a = IntMatrix::block_diagonal(&set.iter().map(|&n| &u[n]).collect::<Vec<_>>());
                    let u_shift = IntMatrix::block_diagonal(&shifted.iter().map(|&n| &u[n]).collect::<Vec<_>>());
                    checked += 1;
                    if x_block.mul(&u_a) != u_shift.mul(&x_block) {
                        report.block_failures += 1;
                    }
                }
            }
        }
        report.block_checks.push((p, checked));
    }
    Ok(report)
}

fn subsets(universe: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, universe: usize, p: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == p {
            out.push(current.clone());
            return;
        }
        for k in start..universe {
            current.push(k);
            rec(k + 1, universe, p, current, out);
            current.pop();
        }
    }
    rec(0, universe, p, &mut current, &mut out);
    out
}

/// Every `i` with `0 ≤ i_n ≤ n` for `n ∈ set`.
fn index_tuples(set: &[usize]) -> Vec<Vec<usize>> {
    set.iter().fold(vec![Vec::new()], |acc, &n| {
        acc.into_iter()
            .flat_map(|t| {
                (0..=n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect()
    })
}

/// The action of a circuit on degree-`n` homology, in orthonormal bases of
/// the harmonic chains of the full and the normalized complex.
#[derive(Clone, Debug, PartialEq)]
pub struct HomologyAction {
    pub degree: usize,
    pub on_kernel: DMatrix<f64>,
    pub on_normalized_kernel: DMatrix<f64>,
}

impl HomologyAction {
    /// `max |MᵀM − 1|` over both restrictions.
    pub fn unitarity_residual(&self) -> f64 {
        [&self.on_kernel, &self.on_normalized_kernel]
            .iter()
            .map(|m| {
                let k = m.ncols();
                (m.transpose() * *m - DMatrix::identity(k, k)).abs().max()
            })
            .fold(0.0, f64::max)
    }
}

/// Checks that `U` commutes with the boundary, the face Laplacian and the
/// degeneracy projector, then restricts it to the harmonic chains.
pub fn homology_action(x: &TruncatedSimplicialSet, c: &SimpleCircuit, n: usize) -> Result<HomologyAction> {
    if n + 1 > x.cutoff() {
        return Err(Error::out_of_range("homology action", n + 1, x.cutoff()));
    }
    let full = full_complex(x);
    let u = |m: usize| c.matrix(m);
    for m in n.max(1)..=n + 1 {
        let q = full.boundary(m);
        if u(m - 1).mul(q) != q.mul(&u(m)) {
            return Err(Error::invariant(format!("circuit does not commute with the boundary in degree {m}")));
        }
    }
    let h = full.laplacian(n);
    let un = u(n);
    if h.mul(&un) != un.mul(&h) {
        return Err(Error::invariant(format!("circuit does not commute with the face Laplacian in degree {n}")));
    }
    let pi = degeneracy_projector(x, n)?;
    if pi.mul(&un) != un.mul(&pi) {
        return Err(Error::invariant(format!("circuit does not commute with the degeneracy projector in degree {n}")));
    }
    let k = SymSpectrum::of_int(&h)?.kernel_basis();
    let normalized = normalized_complex(x)?;
    let nd = &normalized.simplices[n];
    let cu = un.select(nd, nd);
    let ck = SymSpectrum::of_int(&normalized.laplacian(n))?.kernel_basis();
    Ok(HomologyAction {
        degree: n,
        on_kernel: k.transpose() * un.to_f64() * &k,
        on_normalized_kernel: ck.transpose() * cu.to_f64() * &ck,
    })
}
