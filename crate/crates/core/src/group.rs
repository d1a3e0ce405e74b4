//! Finite groups given by Cayley tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated multiplication table: `table[a][b]` is the index of `a·b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    #[serde(skip)]
    inverses: Vec<usize>,
}

impl GroupTable {
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::GroupTable("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::GroupTable(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(Error::GroupTable(format!(
                    "closure fails: entry {v} in row {i} is out of range"
                )));
            }
        }
        if identity >= n {
            return Err(Error::GroupTable(format!("identity index {identity} out of range")));
        }
        for a in 0..n {
            if table[identity][a] != a || table[a][identity] != a {
                return Err(Error::GroupTable(format!("identity fails at {a}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::GroupTable(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inverses[a] = b,
                None => return Err(Error::GroupTable(format!("inverse fails at {a}"))),
            }
        }
        Ok(GroupTable {
            table,
            identity,
            inverses,
        })
    }

    /// `ℤ_n` with `a·b = a + b mod n`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupTable::new(table, 0).expect("cyclic group")
    }

    /// `S_n` on permutations listed in lexicographic order, `(σ·π)(k) = σ(π(k))`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|p| index(&p.iter().map(|&k| s[k]).collect()))
                    .collect()
            })
            .collect();
        GroupTable::new(table, 0).expect("symmetric group")
    }

    /// Direct product `G × H`, element `(g, h)` at index `g·|H| + h`.
    pub fn product(&self, other: &GroupTable) -> Self {
        let (n, m) = (self.order(), other.order());
        let table = (0..n * m)
            .map(|a| {
                (0..n * m)
                    .map(|b| self.mul(a / m, b / m) * m + other.mul(a % m, b % m))
                    .collect()
            })
            .collect();
        GroupTable::new(table, self.identity * m + other.identity).expect("product group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `generators`, as a sorted index list.
    pub fn generated_subgroup(&self, generators: &[usize]) -> Vec<usize> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut queue = vec![self.identity];
        seen[self.identity] = true;
        while let Some(a) = queue.pop() {
            for &g in generators.iter().chain(generators.iter().map(|g| &self.inverses[*g])) {
                let b = self.mul(a, g);
                if !seen[b] {
                    seen[b] = true;
                    queue.push(b);
                }
            }
        }
        (0..n).filter(|&a| seen[a]).collect()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
