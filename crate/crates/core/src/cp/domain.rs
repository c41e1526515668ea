use std::fmt;

/// Largest value a domain can hold.
pub const MAX_VALUE: u32 = 255;
const WORDS: usize = 4;

/// Finite set of integers in `0..=255`, stored as a bitset.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Domain {
    bits: [u64; WORDS],
}

impl Domain {
    pub const EMPTY: Domain = Domain { bits: [0; WORDS] };

    /// `[lo, hi]`, clipped to the representable range; empty when `lo > hi`.
    pub fn range(lo: u32, hi: u32) -> Domain {
        let mut d = Domain::EMPTY;
        if lo > hi || lo > MAX_VALUE {
            return d;
        }
        let hi = hi.min(MAX_VALUE);
        for w in 0..WORDS {
            let base = (w as u32) * 64;
            let top = base + 63;
            if hi < base || lo > top {
                continue;
            }
            let a = lo.max(base) - base;
            let b = hi.min(top) - base;
            let width = b - a + 1;
            let mask = if width == 64 {
                u64::MAX
            } else {
                ((1u64 << width) - 1) << a
            };
            d.bits[w] |= mask;
        }
        d
    }

    pub fn singleton(v: u32) -> Domain {
        Domain::range(v, v)
    }

    pub fn from_values(values: impl IntoIterator<Item = u32>) -> Domain {
        let mut d = Domain::EMPTY;
        for v in values {
            d.insert(v);
        }
        d
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn len(&self) -> u32 {
        self.bits.iter().map(|w| w.count_ones()).sum()
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        v <= MAX_VALUE && self.bits[(v / 64) as usize] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: u32) {
        assert!(v <= MAX_VALUE, "domain value {v} out of range");
        self.bits[(v / 64) as usize] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: u32) {
        if v <= MAX_VALUE {
            self.bits[(v / 64) as usize] &= !(1 << (v % 64));
        }
    }

    pub fn min(&self) -> Option<u32> {
        self.bits
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k as u32 * 64 + w.trailing_zeros())
    }

    pub fn max(&self) -> Option<u32> {
        self.bits
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k as u32 * 64 + 63 - w.leading_zeros())
    }

    /// The single value, if the domain is a singleton.
    #[inline]
    pub fn value(&self) -> Option<u32> {
        if self.len() == 1 {
            self.min()
        } else {
            None
        }
    }

    #[inline]
    pub fn is_fixed(&self) -> bool {
        self.len() == 1
    }

    #[inline]
    pub fn intersect(&self, o: &Domain) -> Domain {
        let mut d = *self;
        for w in 0..WORDS {
            d.bits[w] &= o.bits[w];
        }
        d
    }

    #[inline]
    pub fn union(&self, o: &Domain) -> Domain {
        let mut d = *self;
        for w in 0..WORDS {
            d.bits[w] |= o.bits[w];
        }
        d
    }

    #[inline]
    pub fn minus(&self, o: &Domain) -> Domain {
        let mut d = *self;
        for w in 0..WORDS {
            d.bits[w] &= !o.bits[w];
        }
        d
    }

    pub fn complement(&self) -> Domain {
        let mut d = *self;
        for w in d.bits.iter_mut() {
            *w = !*w;
        }
        d
    }

    /// `{x + k : x in self}`, dropping values above the range.
    pub fn shift_up(&self, k: u32) -> Domain {
        if k > MAX_VALUE {
            return Domain::EMPTY;
        }
        let (ws, bs) = ((k / 64) as usize, k % 64);
        let mut out = Domain::EMPTY;
        for w in (ws..WORDS).rev() {
            let src = w - ws;
            let mut v = self.bits[src] << bs;
            if bs > 0 && src > 0 {
                v |= self.bits[src - 1] >> (64 - bs);
            }
            out.bits[w] = v;
        }
        out
    }

    /// `{x - k : x in self, x >= k}`.
    pub fn shift_down(&self, k: u32) -> Domain {
        if k > MAX_VALUE {
            return Domain::EMPTY;
        }
        let (ws, bs) = ((k / 64) as usize, k % 64);
        let mut out = Domain::EMPTY;
        for w in 0..WORDS - ws {
            let src = w + ws;
            let mut v = self.bits[src] >> bs;
            if bs > 0 && src + 1 < WORDS {
                v |= self.bits[src + 1] << (64 - bs);
            }
            out.bits[w] = v;
        }
        out
    }

    /// `{c - x : x in self, x <= c}`.
    pub fn reflect(&self, c: u32) -> Domain {
        let mut out = Domain::EMPTY;
        for x in self.iter() {
            if x > c {
                break;
            }
            out.insert(c - x);
        }
        out
    }

    pub fn iter(&self) -> DomainIter {
        DomainIter {
            bits: self.bits,
            word: 0,
        }
    }
}

pub struct DomainIter {
    bits: [u64; WORDS],
    word: usize,
}

impl Iterator for DomainIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        while self.word < WORDS {
            let w = self.bits[self.word];
            if w != 0 {
                let t = w.trailing_zeros();
                self.bits[self.word] &= w - 1;
                return Some(self.word as u32 * 64 + t);
            }
            self.word += 1;
        }
        None
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
