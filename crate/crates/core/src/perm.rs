//! Permutations of {0,1,2,3}, used as vertex relabelings in face gluings.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A permutation of {0,1,2,3}, stored as the image array.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Builds a permutation from its image array; `None` if not a bijection.
    pub fn new(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4(images))
    }

    /// The transposition swapping `a` and `b`.
    pub fn transposition(a: u8, b: u8) -> Perm4 {
        let mut im = [0u8, 1, 2, 3];
        im.swap(a as usize, b as usize);
        Perm4(im)
    }

    #[inline]
    pub fn apply(&self, x: u8) -> u8 {
        self.0[x as usize]
    }

    #[inline]
    pub fn apply_usize(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn inverse(&self) -> Perm4 {
        let mut im = [0u8; 4];
        for i in 0..4 {
            im[self.0[i] as usize] = i as u8;
        }
        Perm4(im)
    }

    /// Composition: `(self.compose(inner)).apply(x) == self.apply(inner.apply(x))`.
    pub fn compose(&self, inner: Perm4) -> Perm4 {
        let mut im = [0u8; 4];
        for i in 0..4 {
            im[i] = self.apply(inner.0[i]);
        }
        Perm4(im)
    }

    /// +1 for even permutations, -1 for odd.
    pub fn sign(&self) -> i8 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Lexicographic rank in S4, in 0..24.
    pub fn rank(&self) -> u8 {
        let mut rank = 0u8;
        let mut used = [false; 4];
        for i in 0..4 {
            let mut smaller = 0u8;
            for x in 0..self.0[i] {
                if !used[x as usize] {
                    smaller += 1;
                }
            }
            used[self.0[i] as usize] = true;
            let factorial = [6, 2, 1, 1][i];
            rank += smaller * factorial;
        }
        rank
    }

    pub fn from_rank(mut rank: u8) -> Perm4 {
        let mut pool = vec![0u8, 1, 2, 3];
        let mut im = [0u8; 4];
        for (i, factorial) in [6u8, 2, 1, 1].into_iter().enumerate() {
            let k = (rank / factorial) as usize;
            rank %= factorial;
            im[i] = pool.remove(k);
        }
        Perm4(im)
    }

    /// All 24 permutations in lexicographic order.
    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..24).map(Perm4::from_rank)
    }

    /// Parses the 4-digit image form, e.g. "0123".
    pub fn parse(s: &str) -> Option<Perm4> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 {
            return None;
        }
        let mut im = [0u8; 4];
        for i in 0..4 {
            if !bytes[i].is_ascii_digit() {
                return None;
            }
            im[i] = bytes[i] - b'0';
        }
        Perm4::new(im)
    }

    pub fn digits(&self) -> String {
        self.0.iter().map(|d| (b'0' + d) as char).collect()
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({})", self.digits())
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digits())
    }
}
