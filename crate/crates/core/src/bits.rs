//! Fixed-length bit buffer backed by `u64` words.

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitBuf {
    len: usize,
    words: Vec<u64>,
}

impl BitBuf {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Self {
            len,
            words: vec![u64::MAX; len.div_ceil(64)],
        };
        b.clear_tail();
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i & 63);
        if v {
            self.words[i >> 6] |= m;
        } else {
            self.words[i >> 6] &= !m;
        }
    }

    /// Sets `count` consecutive bits starting at `start`.
    pub fn set_range(&mut self, start: usize, count: usize) {
        let end = start + count;
        debug_assert!(end <= self.len);
        let mut i = start;
        while i < end {
            let w = i >> 6;
            let off = i & 63;
            let n = (64 - off).min(end - i);
            let mask = if n == 64 { u64::MAX } else { ((1u64 << n) - 1) << off };
            self.words[w] |= mask;
            i += n;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn none(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn all(&self) -> bool {
        self.count_ones() == self.len
    }

    pub fn xor(&self, other: &BitBuf) -> BitBuf {
        assert_eq!(self.len, other.len, "bit length mismatch");
        BitBuf {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    pub fn or_assign(&mut self, other: &BitBuf) {
        assert_eq!(self.len, other.len, "bit length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and(&self, other: &BitBuf) -> BitBuf {
        assert_eq!(self.len, other.len, "bit length mismatch");
        BitBuf {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// True when every bit set in `self` is also set in `other`.
    pub fn is_subset(&self, other: &BitBuf) -> bool {
        self.len == other.len
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    /// Copies `count` bits starting at `src_start` of `src` into `self` at `dst_start`.
    pub fn copy_from(&mut self, dst_start: usize, src: &BitBuf, src_start: usize, count: usize) {
        for k in 0..count {
            if src.get(src_start + k) {
                self.set(dst_start + k, true);
            }
        }
    }

    /// Lengths of maximal runs, alternating starting with a run of zeros
    /// (which may be empty). Sums to `len`.
    pub fn runs(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut pos = 0usize;
        let mut want = false;
        while pos < self.len {
            let next = self.next_with(pos, !want);
            out.push((next - pos) as u32);
            pos = next;
            want = !want;
        }
        if out.is_empty() {
            out.push(0);
        }
        out
    }

    /// Number of runs `runs()` would return, without allocating.
    pub fn run_count(&self) -> usize {
        let mut n = 0usize;
        let mut pos = 0usize;
        let mut want = false;
        while pos < self.len {
            pos = self.next_with(pos, !want);
            n += 1;
            want = !want;
        }
        n.max(1)
    }

    // First index >= `from` whose bit equals `value`, or `len`.
    fn next_with(&self, from: usize, value: bool) -> usize {
        let mut wi = from >> 6;
        if wi >= self.words.len() {
            return self.len;
        }
        let flip = if value { 0 } else { u64::MAX };
        let mut w = (self.words[wi] ^ flip) & (u64::MAX << (from & 63));
        loop {
            if w != 0 {
                let idx = wi * 64 + w.trailing_zeros() as usize;
                return idx.min(self.len);
            }
            wi += 1;
            if wi >= self.words.len() {
                return self.len;
            }
            w = self.words[wi] ^ flip;
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.len & 63;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl std::fmt::Debug for BitBuf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitBuf[{}; ", self.len)?;
        for i in 0..self.len.min(256) {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        if self.len > 256 {
            f.write_str("...")?;
        }
        f.write_str("]")
    }
}
