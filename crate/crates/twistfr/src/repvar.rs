//! Twisted representation varieties over finite groups: crossed-homomorphism
//! evaluation, twisted conjugation, orbit counting and groupoid cardinality.
//!
//! This is the desk-scale, fully enumerable model of the holonomy
//! description; all expected numbers are produced by independent counting
//! (Burnside sums, stabilizer enumeration), never assumed.

use crate::ring::Rational;
use serde::Deserialize;

const STATE_GUARD: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepvarError {
    #[error("multiplication table is not {0}x{0}")]
    BadTableShape(usize),
    #[error("table entry {0} out of range")]
    BadTableEntry(usize),
    #[error("no identity element found")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("map is not an automorphism")]
    NotAutomorphism,
    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(u64, u64),
    #[error("state space |G|^n = {0} exceeds the guard {STATE_GUARD}")]
    TooManyStates(u64),
    #[error("unknown group spec `{0}`")]
    UnknownGroup(String),
    #[error("unknown twist token `{0}`")]
    UnknownTwist(String),
    #[error("cannot read group file: {0}")]
    Io(String),
    #[error("invalid group file: {0}")]
    BadFile(String),
}

/// A finite group presented by its Cayley table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    pub id: usize,
    pub names: Vec<String>,
}

impl FiniteGroup {
    /// Validates a raw multiplication table and derives identity/inverses.
    pub fn from_table(mul: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self, RepvarError> {
        let order = mul.len();
        if mul.iter().any(|row| row.len() != order) {
            return Err(RepvarError::BadTableShape(order));
        }
        for row in &mul {
            for &v in row {
                if v >= order {
                    return Err(RepvarError::BadTableEntry(v));
                }
            }
        }
        let id = (0..order)
            .find(|&e| (0..order).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or(RepvarError::NoIdentity)?;
        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            let xi = (0..order)
                .find(|&y| mul[x][y] == id && mul[y][x] == id)
                .ok_or(RepvarError::NoInverse(x))?;
            inv[x] = xi;
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(RepvarError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let names =
            names.unwrap_or_else(|| (0..order).map(|i| i.to_string()).collect::<Vec<_>>());
        Ok(FiniteGroup {
            order,
            mul,
            inv,
            id,
            names,
        })
    }

    /// The cyclic group `Z/m`, additively.
    pub fn cyclic(m: usize) -> Self {
        let mul = (0..m)
            .map(|a| (0..m).map(|b| (a + b) % m).collect())
            .collect();
        let names = (0..m).map(|i| i.to_string()).collect();
        FiniteGroup::from_table(mul, Some(names)).expect("cyclic table is a group")
    }

    /// The symmetric group `S_m`, elements enumerated lexicographically by
    /// one-line notation, composition `(a*b)(x) = a(b(x))`.
    pub fn symmetric(m: usize) -> Self {
        let perms = all_permutations(m);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let mul = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let ab: Vec<usize> = (0..m).map(|x| a[b[x]]).collect();
                        index(&ab)
                    })
                    .collect()
            })
            .collect();
        let names = perms
            .iter()
            .map(|p| {
                let body = p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("");
                format!("[{body}]")
            })
            .collect();
        FiniteGroup::from_table(mul, Some(names)).expect("symmetric table is a group")
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }
}

fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..m).collect();
    fn rec(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(items, k + 1, out);
            items.swap(k, i);
        }
    }
    rec(&mut items, 0, &mut out);
    out.sort();
    out
}

/// A group automorphism stored as a permutation of elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAutomorphism {
    pub map: Vec<usize>,
}

impl GroupAutomorphism {
    pub fn identity(g: &FiniteGroup) -> Self {
        GroupAutomorphism {
            map: (0..g.order).collect(),
        }
    }

    /// Validates bijectivity and multiplicativity.
    pub fn new(g: &FiniteGroup, map: Vec<usize>) -> Result<Self, RepvarError> {
        if map.len() != g.order {
            return Err(RepvarError::NotAutomorphism);
        }
        let mut seen = vec![false; g.order];
        for &v in &map {
            if v >= g.order || seen[v] {
                return Err(RepvarError::NotAutomorphism);
            }
            seen[v] = true;
        }
        for a in 0..g.order {
            for b in 0..g.order {
                if map[g.mul[a][b]] != g.mul[map[a]][map[b]] {
                    return Err(RepvarError::NotAutomorphism);
                }
            }
        }
        Ok(GroupAutomorphism { map })
    }

    /// `x -> u*x` on `Z/m` for a unit `u`.
    pub fn cyclic_unit(g: &FiniteGroup, u: u64) -> Result<Self, RepvarError> {
        let m = g.order as u64;
        if num_integer::gcd(u, m) != 1 {
            return Err(RepvarError::NotAUnit(u, m));
        }
        let map = (0..g.order).map(|x| ((x as u64 * u) % m) as usize).collect();
        Self::new(g, map)
    }

    /// Conjugation `x -> t x t^{-1}`.
    pub fn inner(g: &FiniteGroup, t: usize) -> Result<Self, RepvarError> {
        if t >= g.order {
            return Err(RepvarError::BadTableEntry(t));
        }
        let map = (0..g.order)
            .map(|x| g.mul[g.mul[t][x]][g.inv[t]])
            .collect();
        Self::new(g, map)
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0usize; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        GroupAutomorphism { map: inv }
    }
}

/// The twisting data: one automorphism per free generator.
#[derive(Clone, Debug)]
pub struct TwistData {
    pub twists: Vec<GroupAutomorphism>,
}

impl TwistData {
    pub fn n(&self) -> usize {
        self.twists.len()
    }
}

/// A point of the twisted representation variety `G^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedHom {
    pub values: Vec<usize>,
}

/// Evaluates a word in the free generators under the crossed-homomorphism
/// rule `phi(ab) = phi(a) * rho(a).phi(b)`, with the crossed inverse
/// `phi(a^{-1}) = rho(a)^{-1}.(phi(a)^{-1})`.
pub fn evaluate_word(
    g: &FiniteGroup,
    phi: &TwistedHom,
    rho: &TwistData,
    word: &[(usize, i32)],
) -> usize {
    let mut value = g.id;
    // accumulated twist as an explicit permutation
    let mut acc = GroupAutomorphism::identity(g);
    for &(gen, exp) in word {
        debug_assert!(exp == 1 || exp == -1);
        let kappa = &rho.twists[gen];
        let (letter_value, letter_twist) = if exp == 1 {
            (phi.values[gen], kappa.clone())
        } else {
            let inv = kappa.inverse();
            (inv.apply(g.inv[phi.values[gen]]), inv)
        };
        value = g.mul[value][acc.apply(letter_value)];
        let map = (0..g.order).map(|x| acc.apply(letter_twist.apply(x))).collect();
        acc = GroupAutomorphism { map };
    }
    value
}

/// Twisted conjugation: `phi_i -> h phi_i kappa_i(h)^{-1}`.
pub fn twisted_conjugate(g: &FiniteGroup, h: usize, phi: &TwistedHom, rho: &TwistData) -> TwistedHom {
    let values = phi
        .values
        .iter()
        .zip(rho.twists.iter())
        .map(|(&v, kappa)| g.mul[g.mul[h][v]][g.inv[kappa.apply(h)]])
        .collect();
    TwistedHom { values }
}

fn state_count(g: &FiniteGroup, n: usize) -> Result<usize, RepvarError> {
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.saturating_mul(g.order as u64);
        if total > STATE_GUARD {
            return Err(RepvarError::TooManyStates(total));
        }
    }
    Ok(total as usize)
}

fn encode(g: &FiniteGroup, values: &[usize]) -> usize {
    values.iter().fold(0, |acc, &v| acc * g.order + v)
}

fn decode(g: &FiniteGroup, mut code: usize, n: usize) -> Vec<usize> {
    let mut values = vec![0usize; n];
    for k in (0..n).rev() {
        values[k] = code % g.order;
        code /= g.order;
    }
    values
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            self.parent[i] = self.find(self.parent[i]);
        }
        self.parent[i]
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.parent[rj] = ri;
        }
    }
}

/// Number of twisted-conjugation orbits on `G^n`, via union-find over the
/// generating action, cross-checked against the Burnside count.
pub fn orbit_count(g: &FiniteGroup, rho: &TwistData) -> Result<usize, RepvarError> {
    let n = rho.n();
    let total = state_count(g, n)?;
    let mut uf = UnionFind::new(total);
    for code in 0..total {
        let values = decode(g, code, n);
        let phi = TwistedHom { values };
        for h in 0..g.order {
            let moved = twisted_conjugate(g, h, &phi, rho);
            uf.union(code, encode(g, &moved.values));
        }
    }
    let mut roots = std::collections::HashSet::new();
    for code in 0..total {
        let r = uf.find(code);
        roots.insert(r);
    }
    let via_union_find = roots.len();

    // Burnside: |orbits| * |G| = sum_h |Fix(h)|
    let mut fixed_total: u64 = 0;
    for h in 0..g.order {
        for code in 0..total {
            let values = decode(g, code, n);
            let phi = TwistedHom { values };
            let moved = twisted_conjugate(g, h, &phi, rho);
            if moved.values == phi.values {
                fixed_total += 1;
            }
        }
    }
    debug_assert_eq!(fixed_total % g.order as u64, 0);
    let via_burnside = (fixed_total / g.order as u64) as usize;
    assert_eq!(
        via_union_find, via_burnside,
        "union-find and Burnside orbit counts disagree"
    );
    Ok(via_union_find)
}

/// Groupoid cardinality `sum_orbits 1/|Stab|` as an exact rational; equals
/// `|G|^{n-1}` for the twisted-conjugation action groupoid.
pub fn groupoid_cardinality(g: &FiniteGroup, rho: &TwistData) -> Result<Rational, RepvarError> {
    let n = rho.n();
    let total = state_count(g, n)?;
    let mut seen = vec![false; total];
    let mut sum = Rational::from_integer(0.into());
    for code in 0..total {
        if seen[code] {
            continue;
        }
        let phi = TwistedHom {
            values: decode(g, code, n),
        };
        let mut stab = 0u64;
        let mut orbit = Vec::new();
        for h in 0..g.order {
            let moved = twisted_conjugate(g, h, &phi, rho);
            if moved.values == phi.values {
                stab += 1;
            }
            orbit.push(encode(g, &moved.values));
        }
        for o in orbit {
            seen[o] = true;
        }
        sum += Rational::new(1.into(), stab.into());
    }
    Ok(sum)
}

#[derive(Deserialize)]
struct GroupFile {
    order: usize,
    mul: Vec<Vec<usize>>,
    #[serde(default)]
    names: Option<Vec<String>>,
}

/// Parses a group spec: `z<m>`, `s<m>`, or a path to a Cayley-table JSON
/// file `{"order": k, "mul": [[...]], "names": [...]}`.
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup, RepvarError> {
    let lower = spec.to_ascii_lowercase();
    if let Some(m) = lower.strip_prefix('z').and_then(|s| s.parse::<usize>().ok()) {
        if m >= 1 {
            return Ok(FiniteGroup::cyclic(m));
        }
    }
    if let Some(m) = lower.strip_prefix('s').and_then(|s| s.parse::<usize>().ok()) {
        if (1..=5).contains(&m) {
            return Ok(FiniteGroup::symmetric(m));
        }
    }
    if std::path::Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec).map_err(|e| RepvarError::Io(e.to_string()))?;
        let file: GroupFile =
            serde_json::from_str(&text).map_err(|e| RepvarError::BadFile(e.to_string()))?;
        if file.mul.len() != file.order {
            return Err(RepvarError::BadTableShape(file.order));
        }
        return FiniteGroup::from_table(file.mul, file.names);
    }
    Err(RepvarError::UnknownGroup(spec.to_string()))
}

/// Parses a twist token: `id`, `u<unit>` (cyclic groups) or
/// `inner:<element>` (element by name or index).
pub fn parse_twist(g: &FiniteGroup, token: &str) -> Result<GroupAutomorphism, RepvarError> {
    if token == "id" {
        return Ok(GroupAutomorphism::identity(g));
    }
    if let Some(u) = token.strip_prefix('u').and_then(|s| s.parse::<u64>().ok()) {
        return GroupAutomorphism::cyclic_unit(g, u);
    }
    if let Some(elt) = token.strip_prefix("inner:") {
        let idx = if let Ok(i) = elt.parse::<usize>() {
            i
        } else {
            g.names
                .iter()
                .position(|n| n == elt)
                .ok_or_else(|| RepvarError::UnknownTwist(token.to_string()))?
        };
        return GroupAutomorphism::inner(g, idx);
    }
    Err(RepvarError::UnknownTwist(token.to_string()))
}
