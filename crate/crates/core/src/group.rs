//! Finite groups given by Cayley tables, with exact validation.

use crate::error::Error;

/// Finite group on elements `0..order`, multiplication by table lookup.
///
/// The table is validated exactly (integer arithmetic, no tolerances):
/// closure, two-sided identity, associativity over all triples, and
/// two-sided inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

/// Outcome of validating a raw multiplication table.
#[derive(Clone, Debug)]
pub struct GroupValidation {
    pub order: usize,
    /// Two-sided identity, if one exists.
    pub identity: Option<usize>,
    /// Human-readable axiom violations; empty for a valid table.
    pub violations: Vec<String>,
}

impl GroupValidation {
    pub fn is_valid(&self) -> bool {
        self.identity.is_some() && self.violations.is_empty()
    }
}

/// Checks the group axioms on a raw table; `table[g][h]` is the product
/// `g·h`. All checks are exact.
pub fn validate_group(table: &[Vec<usize>]) -> GroupValidation {
    let n = table.len();
    let mut violations = Vec::new();
    if n == 0 {
        violations.push("empty table".to_string());
        return GroupValidation {
            order: 0,
            identity: None,
            violations,
        };
    }
    for (g, row) in table.iter().enumerate() {
        if row.len() != n {
            violations.push(format!("row {g} has length {} (expected {n})", row.len()));
        }
    }
    if !violations.is_empty() {
        return GroupValidation {
            order: n,
            identity: None,
            violations,
        };
    }
    for (g, row) in table.iter().enumerate() {
        for (h, &p) in row.iter().enumerate() {
            if p >= n {
                violations.push(format!("closure: {g}·{h} = {p} is out of range"));
            }
        }
    }
    if !violations.is_empty() {
        return GroupValidation {
            order: n,
            identity: None,
            violations,
        };
    }

    let identity = (0..n).find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g));
    if identity.is_none() {
        violations.push("no two-sided identity".to_string());
    }

    for g in 0..n {
        for h in 0..n {
            for k in 0..n {
                if table[table[g][h]][k] != table[g][table[h][k]] {
                    violations.push(format!(
                        "associativity: ({g}·{h})·{k} = {} but {g}·({h}·{k}) = {}",
                        table[table[g][h]][k],
                        table[g][table[h][k]]
                    ));
                }
            }
        }
    }

    if let Some(e) = identity {
        for g in 0..n {
            let has_inverse = (0..n).any(|h| table[g][h] == e && table[h][g] == e);
            if !has_inverse {
                violations.push(format!("element {g} has no two-sided inverse"));
            }
        }
    }

    GroupValidation {
        order: n,
        identity,
        violations,
    }
}

impl FiniteGroup {
    /// Builds a group from a multiplication table, validating all axioms.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, Error> {
        let v = validate_group(&table);
        if !v.is_valid() {
            let detail = v
                .violations
                .first()
                .cloned()
                .unwrap_or_else(|| "no identity".to_string());
            let extra = v.violations.len().saturating_sub(1);
            let msg = if extra > 0 {
                format!("{detail} (and {extra} more violations)")
            } else {
                detail
            };
            return Err(Error::InvalidGroup(msg));
        }
        let n = v.order;
        let e = v.identity.expect("valid table has identity");
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            flat.extend_from_slice(row);
        }
        let inverses = (0..n)
            .map(|g| (0..n).find(|&h| flat[g * n + h] == e).expect("validated"))
            .collect();
        Ok(FiniteGroup {
            order: n,
            table: flat,
            identity: e,
            inverses,
        })
    }

    /// Cyclic group of order `n` with addition mod `n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
        Self::from_table(table).expect("cyclic table is a group")
    }

    /// Symmetric group on `n` letters; elements are the permutations of
    /// `0..n` in lexicographic order (identity first), composed as
    /// `(σ∘τ)(x) = σ(τ(x))`.
    pub fn symmetric(n: usize) -> Self {
        assert!((1..=5).contains(&n), "symmetric group limited to n ≤ 5");
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| {
                        let comp: Vec<usize> = (0..n).map(|x| s[t[x]]).collect();
                        index(&comp)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("composition table is a group")
    }

    /// Direct product with elements enumerated as `g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (ng, nh) = (g.order, h.order);
        let table = (0..ng * nh)
            .map(|a| {
                let (a1, a2) = (a / nh, a % nh);
                (0..ng * nh)
                    .map(|b| {
                        let (b1, b2) = (b / nh, b % nh);
                        g.mul(a1, b1) * nh + h.mul(a2, b2)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("product table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|g| self.elements().all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// Rows of the table, for serialization.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|g| self.table[g * self.order..(g + 1) * self.order].to_vec())
            .collect()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_are_valid() {
        for n in 1..=8 {
            let g = FiniteGroup::cyclic(n);
            assert_eq!(g.order(), n);
            assert_eq!(g.identity(), 0);
            assert!(g.is_abelian());
            for k in g.elements() {
                assert_eq!(g.mul(k, g.inv(k)), 0);
            }
        }
    }

    #[test]
    fn symmetric_three_from_composition() {
        // Build the table independently from permutation composition and
        // compare with the constructor.
        let perms: Vec<Vec<usize>> = vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ];
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let mut table = vec![vec![0usize; 6]; 6];
        for (i, s) in perms.iter().enumerate() {
            for (j, t) in perms.iter().enumerate() {
                let comp: Vec<usize> = (0..3).map(|x| s[t[x]]).collect();
                table[i][j] = index(&comp);
            }
        }
        let v = validate_group(&table);
        assert!(v.is_valid());
        assert_eq!(v.identity, Some(0));

        let g = FiniteGroup::symmetric(3);
        assert_eq!(g.table_rows(), table);
        assert!(!g.is_abelian());
    }

    #[test]
    fn klein_four_group() {
        let z2 = FiniteGroup::cyclic(2);
        let k4 = FiniteGroup::direct_product(&z2, &z2);
        assert_eq!(k4.order(), 4);
        assert!(k4.is_abelian());
        for g in k4.elements() {
            assert_eq!(k4.inv(g), g);
        }
    }

    #[test]
    fn broken_associativity_is_caught() {
        let mut table = FiniteGroup::cyclic(3).table_rows();
        table[1][2] = 1; // 1+2 should be 0
        let v = validate_group(&table);
        assert!(!v.is_valid());
        assert!(v.violations.iter().any(|s| s.contains("associativity") || s.contains("inverse")));
    }

    #[test]
    fn missing_identity_is_caught() {
        let table = vec![vec![0, 0], vec![0, 0]];
        let v = validate_group(&table);
        assert!(!v.is_valid());
        assert!(v.violations.iter().any(|s| s.contains("identity")));
        assert!(FiniteGroup::from_table(table).is_err());
    }

    #[test]
    fn missing_inverse_is_caught() {
        // Monoid on {0,1} with 1 absorbing: associative, identity 0, but 1
        // has no inverse.
        let table = vec![vec![0, 1], vec![1, 1]];
        let v = validate_group(&table);
        assert_eq!(v.identity, Some(0));
        assert!(v.violations.iter().any(|s| s.contains("inverse")));
    }

    #[test]
    fn out_of_range_entry_is_caught() {
        let table = vec![vec![0, 1], vec![1, 7]];
        let v = validate_group(&table);
        assert!(v.violations.iter().any(|s| s.contains("closure")));
    }
}
