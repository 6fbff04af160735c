use std::fmt;

/// Fixed-universe bitset over node ids `0..capacity`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    words: Vec<u64>,
    capacity: usize,
    len: usize,
}

impl NodeSet {
    pub fn new(capacity: usize) -> Self {
        NodeSet {
            words: vec![0; capacity.div_ceil(64)],
            capacity,
            len: 0,
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        for v in 0..capacity {
            s.insert(v);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(capacity: usize, items: I) -> Self {
        let mut s = Self::new(capacity);
        for v in items {
            s.insert(v);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.capacity && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Returns true if `v` was newly inserted.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(
            v < self.capacity,
            "node {v} outside universe {}",
            self.capacity
        );
        let (w, b) = (v / 64, v % 64);
        let fresh = self.words[w] >> b & 1 == 0;
        if fresh {
            self.words[w] |= 1 << b;
            self.len += 1;
        }
        fresh
    }

    /// Returns true if `v` was present.
    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.capacity {
            return false;
        }
        let (w, b) = (v / 64, v % 64);
        let present = self.words[w] >> b & 1 == 1;
        if present {
            self.words[w] &= !(1 << b);
            self.len -= 1;
        }
        present
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> NodeSet {
        let mut out = NodeSet::new(self.capacity);
        for v in 0..self.capacity {
            if !self.contains(v) {
                out.insert(v);
            }
        }
        out
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
