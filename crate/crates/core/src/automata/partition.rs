//! Small partitions of terminal ranks as restricted-growth label strings.

use smallvec::SmallVec;

pub type Labels = SmallVec<[u8; 8]>;

/// Relabels blocks in order of first occurrence.
pub fn normalize(labels: &mut [u8]) {
    let mut map = [u8::MAX; 64];
    let mut next = 0;
    for l in labels.iter_mut() {
        let m = &mut map[*l as usize];
        if *m == u8::MAX {
            *m = next;
            next += 1;
        }
        *l = *m;
    }
}

pub fn singletons(n: usize) -> Labels {
    (0..n as u8).collect()
}

/// Number of blocks of a normalized label string.
pub fn block_count(labels: &[u8]) -> usize {
    labels.iter().max().map_or(0, |&m| m as usize + 1)
}

pub fn without(labels: &[u8], r: usize) -> Labels {
    let mut out: Labels = labels.iter().copied().collect();
    out.remove(r);
    normalize(&mut out);
    out
}

pub fn with_inserted(labels: &[u8], r: usize, label: u8) -> Labels {
    let mut out: Labels = labels.iter().copied().collect();
    out.insert(r, label);
    normalize(&mut out);
    out
}

pub fn bits(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            b
        })
    })
}

/// Removes bit `r` and shifts the higher bits down.
pub fn drop_bit(mask: u32, r: usize) -> u32 {
    let low = mask & ((1u32 << r) - 1);
    let high = if r + 1 >= 32 { 0 } else { (mask >> (r + 1)) << r };
    low | high
}

/// Opens a slot at bit `r`, shifting the higher bits up.
pub fn insert_bit(mask: u32, r: usize, value: bool) -> u32 {
    let low = mask & ((1u32 << r) - 1);
    let high = (mask >> r).checked_shl(r as u32 + 1).unwrap_or(0);
    low | high | (u32::from(value) << r)
}

/// Moves bit `k` of `mask` to the position of the `k`-th set bit of `embed`.
pub fn spread(mask: u32, embed: u32) -> u32 {
    let mut out = 0;
    for (k, pos) in bits(embed).enumerate() {
        if mask & (1 << k) != 0 {
            out |= 1 << pos;
        }
    }
    out
}

#[derive(Clone)]
pub struct UnionFind {
    parent: [u8; 64],
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        let mut parent = [0u8; 64];
        for (i, p) in parent.iter_mut().enumerate().take(n) {
            *p = i as u8;
        }
        UnionFind { parent }
    }

    pub fn from_labels(labels: &[u8]) -> Self {
        let mut uf = Self::new(labels.len());
        let mut first = [u8::MAX; 64];
        for (i, &l) in labels.iter().enumerate() {
            if first[l as usize] == u8::MAX {
                first[l as usize] = i as u8;
            } else {
                uf.parent[i] = first[l as usize];
            }
        }
        uf
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    /// False if `a` and `b` were already in the same block.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo as u8;
        true
    }

    pub fn labels(&mut self, n: usize) -> Labels {
        let mut out: Labels = (0..n).map(|i| self.find(i) as u8).collect();
        normalize(&mut out);
        out
    }
}
