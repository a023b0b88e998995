//! Lyndon words and their standard bracketings: a basis of the free Lie
//! algebra, used as a dimension oracle.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bracketing {
    Letter(usize),
    Bracket(Box<Bracketing>, Box<Bracketing>),
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracketing::Letter(i) => write!(f, "{}", letter_char(*i)),
            Bracketing::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LyndonWord {
    pub letters: Vec<usize>,
    pub bracketing: Bracketing,
}

impl LyndonWord {
    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    pub fn as_string(&self) -> String {
        self.letters.iter().map(|i| letter_char(*i)).collect()
    }
}

fn letter_char(i: usize) -> char {
    char::from_u32('a' as u32 + i as u32).unwrap_or('?')
}

/// Standard bracketing: split off the longest proper suffix that is itself
/// Lyndon (equivalently, the lexicographically least proper suffix).
fn standard_bracketing(w: &[usize]) -> Bracketing {
    if w.len() == 1 {
        return Bracketing::Letter(w[0]);
    }
    let split = (1..w.len()).min_by(|&a, &b| w[a..].cmp(&w[b..])).expect("len >= 2");
    Bracketing::Bracket(
        Box::new(standard_bracketing(&w[..split])),
        Box::new(standard_bracketing(&w[split..])),
    )
}

/// All Lyndon words over `alphabet_size` letters of length `1..=max_degree`,
/// grouped by degree (`result[d - 1]` holds degree `d`), each group in
/// lexicographic order. Generation follows Duval's algorithm.
pub fn lyndon_basis(alphabet_size: usize, max_degree: usize) -> Result<Vec<Vec<LyndonWord>>> {
    if alphabet_size == 0 || max_degree == 0 {
        return Err(Error::Input("alphabet size and degree must be positive".into()));
    }
    let mut groups: Vec<Vec<LyndonWord>> = vec![Vec::new(); max_degree];
    let mut w: Vec<usize> = Vec::new();
    let k = alphabet_size;
    // w starts as the word "just before" the first letter.
    let mut first = true;
    loop {
        if first {
            w.push(0);
            first = false;
        } else {
            *w.last_mut().unwrap() += 1;
        }
        groups[w.len() - 1].push(LyndonWord {
            letters: w.clone(),
            bracketing: standard_bracketing(&w),
        });
        let m = w.len();
        while w.len() < max_degree {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
        if w.is_empty() {
            break;
        }
    }
    for g in &mut groups {
        g.sort_by(|a, b| a.letters.cmp(&b.letters));
    }
    Ok(groups)
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1i64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Witt's necklace count `(1/n) Σ_{d | n} μ(d) k^{n/d}`: the dimension of
/// the degree-`n` part of the free Lie algebra on `k` generators.
pub fn witt_dimension(alphabet_size: u64, degree: u64) -> u64 {
    assert!(degree > 0);
    let mut total: i128 = 0;
    for d in 1..=degree {
        if degree.is_multiple_of(d) {
            total += mobius(d) as i128 * (alphabet_size as i128).pow((degree / d) as u32);
        }
    }
    (total / degree as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn two_letters_to_degree_three() {
        let g = lyndon_basis(2, 3).unwrap();
        let words: Vec<Vec<String>> = g
            .iter()
            .map(|d| d.iter().map(LyndonWord::as_string).collect())
            .collect();
        assert_eq!(words, vec![vec!["a", "b"], vec!["ab"], vec!["aab", "abb"]]);
        assert_eq!(g[2][0].bracketing.to_string(), "[a,[a,b]]");
        assert_eq!(g[2][1].bracketing.to_string(), "[[a,b],b]");
    }

    #[test]
    fn degree_five_count() {
        assert_eq!(lyndon_basis(2, 5).unwrap()[4].len(), 6);
        assert_eq!(witt_dimension(2, 5), 6);
    }

    #[test]
    fn one_letter() {
        let g = lyndon_basis(1, 6).unwrap();
        assert_eq!(g[0].len(), 1);
        assert!(g[1..].iter().all(Vec::is_empty));
    }

    #[test]
    fn rejects_empty_inputs() {
        assert!(lyndon_basis(0, 3).is_err());
        assert!(lyndon_basis(2, 0).is_err());
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i64> = (1..=10).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}
