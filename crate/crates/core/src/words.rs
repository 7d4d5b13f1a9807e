//! Finite and ultimately periodic words over an ordered alphabet.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// A terminal letter, identified by its rank in the declared alphabet order.
/// Comparing two letters compares their ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u8);

/// Finite word. `Vec`'s own ordering on letter ranks is exactly the
/// lexicographic order on finite words (a proper prefix is smaller).
pub type Word = Vec<Letter>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    /// `letters` in increasing order.
    pub fn new(letters: Vec<char>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Syntax {
                line: 0,
                message: "alphabet must not be empty".into(),
            });
        }
        if letters.len() > u8::MAX as usize {
            return Err(Error::Syntax {
                line: 0,
                message: "alphabet too large".into(),
            });
        }
        for (i, c) in letters.iter().enumerate() {
            if letters[..i].contains(c) {
                return Err(Error::Syntax {
                    line: 0,
                    message: format!("letter `{c}` declared twice"),
                });
            }
        }
        Ok(Alphabet { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, c: char) -> Option<Letter> {
        self.letters
            .iter()
            .position(|&d| d == c)
            .map(|i| Letter(i as u8))
    }

    pub fn char_of(&self, l: Letter) -> char {
        self.letters[l.0 as usize]
    }

    pub fn chars(&self) -> &[char] {
        &self.letters
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.letters.len()).map(|i| Letter(i as u8))
    }

    pub fn largest(&self) -> Letter {
        Letter((self.letters.len() - 1) as u8)
    }

    /// The least letter strictly above `l`.
    pub fn successor(&self, l: Letter) -> Option<Letter> {
        let next = l.0 as usize + 1;
        (next < self.letters.len()).then_some(Letter(next as u8))
    }

    pub fn word(&self, s: &str) -> Option<Word> {
        s.chars().map(|c| self.letter(c)).collect()
    }

    pub fn render(&self, w: &[Letter]) -> String {
        w.iter().map(|&l| self.char_of(l)).collect()
    }
}

/// `prefix · period^w`, or the finite word `prefix` when the period is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpWord {
    prefix: Word,
    period: Word,
}

impl UpWord {
    pub fn finite(w: Word) -> Self {
        UpWord {
            prefix: w,
            period: Vec::new(),
        }
    }

    /// Canonical form of `prefix · period^w`: the period is primitive and the
    /// prefix does not end with the period's last letter.
    pub fn periodic(mut prefix: Word, period: Word) -> Self {
        if period.is_empty() {
            return UpWord::finite(prefix);
        }
        let mut period = primitive_root(&period).expect("nonempty period");
        while let (Some(&p), Some(&q)) = (prefix.last(), period.last()) {
            if p != q {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        UpWord { prefix, period }
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn as_finite(&self) -> Option<&[Letter]> {
        self.is_finite().then_some(self.prefix.as_slice())
    }

    /// `w · self`.
    pub fn prepend(&self, w: &[Letter]) -> UpWord {
        let mut prefix = w.to_vec();
        prefix.extend_from_slice(&self.prefix);
        UpWord::periodic(prefix, self.period.clone())
    }

    pub fn letter_at(&self, i: usize) -> Option<Letter> {
        if i < self.prefix.len() {
            Some(self.prefix[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(i - self.prefix.len()) % self.period.len()])
        }
    }

    /// First `n` letters, or the whole word if it is finite and shorter.
    pub fn finite_prefix(&self, n: usize) -> Word {
        (0..n).map_while(|i| self.letter_at(i)).collect()
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        if self.is_finite() {
            alphabet.render(&self.prefix)
        } else {
            format!(
                "{}({})^w",
                alphabet.render(&self.prefix),
                alphabet.render(&self.period)
            )
        }
    }
}

/// Lexicographic order on finite and infinite words: a proper prefix is
/// smaller, otherwise the first differing letter decides.
pub fn lex_cmp(x: &UpWord, y: &UpWord) -> Ordering {
    let bound = x.prefix.len() + y.prefix.len() + x.period.len().max(1) * y.period.len().max(1);
    for i in 0..=bound {
        match (x.letter_at(i), y.letter_at(i)) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(a), Some(b)) if a != b => return a.cmp(&b),
            _ => {}
        }
    }
    // Both infinite and agreeing past both prefixes for a full common period.
    Ordering::Equal
}

impl Ord for UpWord {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_cmp(self, other)
    }
}

impl PartialOrd for UpWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest `p` with `w = p^k`, via the failure function.
pub fn primitive_root(w: &[Letter]) -> Result<Word> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = w.len();
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let period = n - fail[n - 1];
    Ok(if n.is_multiple_of(period) {
        w[..period].to_vec()
    } else {
        w.to_vec()
    })
}

/// `a <_s b`: neither is a prefix of the other and `a` is smaller at the first
/// difference.
pub fn strictly_below(a: &[Letter], b: &UpWord) -> bool {
    for (i, &l) in a.iter().enumerate() {
        match b.letter_at(i) {
            None => return false,
            Some(m) if l != m => return l < m,
            _ => {}
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(vec!['a', 'b', 'c']).unwrap()
    }

    fn w(s: &str) -> Word {
        ab().word(s).unwrap()
    }

    #[test]
    fn lex_cmp_examples() {
        let x = UpWord::finite(w("ab"));
        let y = UpWord::periodic(w("ab"), w("c"));
        assert_eq!(lex_cmp(&x, &y), Ordering::Less);
        assert_eq!(
            lex_cmp(&UpWord::finite(w("b")), &UpWord::periodic(vec![], w("a"))),
            Ordering::Greater
        );
        let p = UpWord::periodic(vec![], w("a"));
        let q = UpWord::periodic(w("aa"), w("a"));
        assert_eq!(lex_cmp(&p, &q), Ordering::Equal);
        assert_eq!(p, q);
    }

    #[test]
    fn equality_of_unaligned_periodic_words() {
        // ab(ab)^w and a(ba)^w denote the same word
        let x = UpWord::periodic(w("ab"), w("abab"));
        let y = UpWord::periodic(w("a"), w("ba"));
        assert_eq!(lex_cmp(&x, &y), Ordering::Equal);
        assert_eq!(x, y);
        assert_eq!(x.prefix(), &[] as &[Letter]);
        assert_eq!(x.period(), w("ab").as_slice());
    }

    #[test]
    fn roots() {
        assert_eq!(primitive_root(&w("abab")).unwrap(), w("ab"));
        assert_eq!(primitive_root(&w("aab")).unwrap(), w("aab"));
        assert_eq!(primitive_root(&w("aaaaaa")).unwrap(), w("a"));
        assert_eq!(primitive_root(&w("abaab")).unwrap(), w("abaab"));
        assert_eq!(primitive_root(&[]), Err(Error::EmptyWord));
    }

    #[test]
    fn prefixes() {
        assert_eq!(
            UpWord::periodic(w("ab"), w("c")).finite_prefix(4),
            w("abcc")
        );
        assert_eq!(UpWord::finite(w("ab")).finite_prefix(5), w("ab"));
        assert_eq!(UpWord::finite(vec![]).finite_prefix(3), w(""));
    }

    #[test]
    fn rendering() {
        let a = ab();
        assert_eq!(UpWord::periodic(w("ab"), w("c")).render(&a), "ab(c)^w");
        assert_eq!(UpWord::periodic(vec![], w("c")).render(&a), "(c)^w");
        assert_eq!(UpWord::finite(w("abc")).render(&a), "abc");
    }

    #[test]
    fn strict_order() {
        let aw = UpWord::periodic(vec![], w("a"));
        assert!(!strictly_below(&w("aa"), &aw));
        let bw = UpWord::periodic(vec![], w("b"));
        assert!(strictly_below(&w("bba"), &bw));
        assert!(!strictly_below(&w("bc"), &bw));
    }
}
