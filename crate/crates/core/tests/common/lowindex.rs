//! Low-index coset enumeration for the triangle group
//! ⟨a, b, c | a², b², c², (ab)^k, (bc)^k, (ca)^k⟩, used to list every
//! regular permutation quotient of a given order.

use std::collections::HashSet;

const UNDEF: u8 = u8::MAX;

pub type Perm = Vec<u32>;

#[derive(Clone)]
struct Table {
    rows: Vec<[u8; 3]>,
    used: usize,
}

impl Table {
    fn set(&mut self, p: usize, g: usize, q: usize) -> bool {
        let (a, b) = (self.rows[p][g], self.rows[q][g]);
        if (a != UNDEF && a as usize != q) || (b != UNDEF && b as usize != p) {
            return false;
        }
        self.rows[p][g] = q as u8;
        self.rows[q][g] = p as u8;
        true
    }

    /// Scans every relator at every point, filling forced entries.
    /// Returns false on a contradiction.
    fn propagate(&mut self, rels: &[Vec<usize>]) -> bool {
        loop {
            let mut changed = false;
            for r in rels {
                for x in 0..self.used {
                    let (mut p, mut i) = (x, 0);
                    while i < r.len() && self.rows[p][r[i]] != UNDEF {
                        p = self.rows[p][r[i]] as usize;
                        i += 1;
                    }
                    if i == r.len() {
                        if p != x {
                            return false;
                        }
                        continue;
                    }
                    // generators are involutions, so the relator reads backwards with the same table
                    let (mut q, mut j) = (x, r.len());
                    while j > i && self.rows[q][r[j - 1]] != UNDEF {
                        q = self.rows[q][r[j - 1]] as usize;
                        j -= 1;
                    }
                    if j == i {
                        if p != q {
                            return false;
                        }
                    } else if j == i + 1 {
                        if !self.set(p, r[i], q) {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// In a regular action the map 0 ↦ p extends to an automorphism of the
    /// table. Follows it along defined edges, copying edges across where the
    /// image is undefined. Returns false on a contradiction.
    fn homogenize(&mut self) -> Option<bool> {
        let n = self.rows.len();
        let mut changed = false;
        for p in 1..self.used {
            let mut phi = vec![UNDEF as usize; n];
            let mut inv = vec![UNDEF as usize; n];
            phi[0] = p;
            inv[p] = 0;
            let mut queue = vec![0usize];
            while let Some(x) = queue.pop() {
                for g in 0..3 {
                    let (y, fy) = (self.rows[x][g], self.rows[phi[x]][g]);
                    match (y == UNDEF, fy == UNDEF) {
                        (false, false) => {
                            let (y, fy) = (y as usize, fy as usize);
                            if phi[y] == UNDEF as usize {
                                if inv[fy] != UNDEF as usize {
                                    return None;
                                }
                                phi[y] = fy;
                                inv[fy] = y;
                                queue.push(y);
                            } else if phi[y] != fy {
                                return None;
                            }
                        }
                        (false, true) => {
                            let y = y as usize;
                            if phi[y] != UNDEF as usize {
                                if !self.set(phi[x], g, phi[y]) {
                                    return None;
                                }
                                changed = true;
                            }
                        }
                        (true, false) => {
                            let fy = fy as usize;
                            if inv[fy] != UNDEF as usize {
                                if !self.set(x, g, inv[fy]) {
                                    return None;
                                }
                                changed = true;
                            }
                        }
                        (true, true) => {}
                    }
                }
            }
        }
        Some(changed)
    }

    fn settle(&mut self, rels: &[Vec<usize>]) -> bool {
        loop {
            if !self.propagate(rels) {
                return false;
            }
            match self.homogenize() {
                None => return false,
                Some(false) => return true,
                Some(true) => {}
            }
        }
    }

    fn first_gap(&self) -> Option<(usize, usize)> {
        (0..self.used).flat_map(|p| (0..3).map(move |g| (p, g))).find(|&(p, g)| self.rows[p][g] == UNDEF)
    }
}

fn relators(k: usize) -> Vec<Vec<usize>> {
    [(0, 1), (1, 2), (2, 0)]
        .iter()
        .map(|&(a, b)| (0..k).flat_map(|_| [a, b]).collect())
        .collect()
}

pub fn compose(p: &Perm, q: &Perm) -> Perm {
    p.iter().map(|&x| q[x as usize]).collect()
}

pub fn perm_order(p: &Perm) -> usize {
    let id: Perm = (0..p.len() as u32).collect();
    let mut cur = p.clone();
    let mut n = 1;
    while cur != id {
        cur = compose(&cur, p);
        n += 1;
    }
    n
}

/// All elements of the group generated by `gens`.
pub fn group_elements(gens: &[Perm]) -> Vec<Perm> {
    group_elements_capped(gens, usize::MAX)
}

/// As [`group_elements`], stopping once more than `cap` elements are found.
pub fn group_elements_capped(gens: &[Perm], cap: usize) -> Vec<Perm> {
    let id: Perm = (0..gens[0].len() as u32).collect();
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() && out.len() <= cap {
        for g in gens {
            let h = compose(&out[i], g);
            if seen.insert(h.clone()) {
                out.push(h);
            }
        }
        i += 1;
    }
    out
}

/// Regular quotients of order `n` in which `ab`, `bc`, `ca` have order exactly `k`,
/// as the triple of permutations `(a, b, c)`. Each normal subgroup of index `n`
/// is met once, so the list has no duplicates.
pub fn regular_triangle_quotients(k: usize, n: usize) -> Vec<[Perm; 3]> {
    assert!(n < UNDEF as usize);
    let rels = relators(k);
    let mut out = Vec::new();
    let mut stack = vec![Table { rows: vec![[UNDEF; 3]; n], used: 1 }];
    while let Some(mut t) = stack.pop() {
        if !t.settle(&rels) {
            continue;
        }
        let Some((p, g)) = t.first_gap() else {
            if t.used == n {
                let perms: Vec<Perm> =
                    (0..3).map(|g| t.rows.iter().map(|r| r[g] as u32).collect()).collect();
                let regular = group_elements_capped(&perms, n).len() == n;
                let exact = [(0, 1), (1, 2), (2, 0)]
                    .iter()
                    .all(|&(a, b)| perm_order(&compose(&perms[a], &perms[b])) == k);
                if regular && exact {
                    out.push([perms[0].clone(), perms[1].clone(), perms[2].clone()]);
                }
            }
            continue;
        };
        for q in 0..t.used {
            let mut c = t.clone();
            if c.set(p, g, q) {
                stack.push(c);
            }
        }
        if t.used < n {
            let mut c = t.clone();
            let q = c.used;
            c.used += 1;
            if c.set(p, g, q) {
                stack.push(c);
            }
        }
    }
    out
}

/// Blue triples `(σ2, σ4, σ6)` of involutions inside the group generated by a
/// red triple `(σ1, σ3, σ5)`, meeting the commuting and product-order relations.
pub fn blue_triples(k: usize, red: &[Perm; 3]) -> Vec<[Perm; 3]> {
    let elems = group_elements(red);
    let invol: Vec<&Perm> = elems.iter().filter(|g| perm_order(g) == 2).collect();
    let commutes = |x: &Perm, y: &Perm| compose(x, y) == compose(y, x);
    // σ2 commutes with σ1, σ3; σ4 with σ3, σ5; σ6 with σ5, σ1
    let pick = |a: usize, b: usize| -> Vec<&Perm> {
        invol.iter().copied().filter(|x| commutes(x, &red[a]) && commutes(x, &red[b])).collect()
    };
    let (c2, c4, c6) = (pick(0, 1), pick(1, 2), pick(2, 0));
    let mut out = Vec::new();
    for &x in &c2 {
        for &y in &c4 {
            if perm_order(&compose(x, y)) != k {
                continue;
            }
            for &z in &c6 {
                if perm_order(&compose(y, z)) == k && perm_order(&compose(z, x)) == k {
                    out.push([x.clone(), y.clone(), z.clone()]);
                }
            }
        }
    }
    out
}
