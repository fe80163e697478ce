use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::FreeGroupError;

/// A generator `a_gen` (1-based) raised to `exp = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u16,
    pub exp: i8,
}

impl Letter {
    pub fn new(gen: u16, exp: i8) -> Self {
        debug_assert!(gen >= 1 && (exp == 1 || exp == -1));
        Letter { gen, exp }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, exp: -self.exp }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.exp == -other.exp
    }
}

/// A freely reduced word in the free group on generators `1..=26` (or more).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    /// Builds a word, freely reducing the input.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last().is_some_and(|&p| p.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn generator(gen: u16) -> Self {
        Word { letters: vec![Letter::new(gen, 1)] }
    }

    /// `a_gen^k`.
    pub fn power_of(gen: u16, k: i64) -> Self {
        let exp = if k < 0 { -1 } else { 1 };
        Word { letters: vec![Letter::new(gen, exp); k.unsigned_abs() as usize] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Largest generator index used (0 for the empty word).
    pub fn max_gen(&self) -> u16 {
        self.letters.iter().map(|l| l.gen).max().unwrap_or(0)
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        let mut rest = other.letters.as_slice();
        while let (Some(&last), Some(&first)) = (out.last(), rest.first()) {
            if last.cancels(first) {
                out.pop();
                rest = &rest[1..];
            } else {
                break;
            }
        }
        out.extend_from_slice(rest);
        Word { letters: out }
    }

    /// Splits `self = g u g⁻¹` with `u` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut k = 0;
        while 2 * k + 1 < l.len() && l[k].cancels(l[l.len() - 1 - k]) {
            k += 1;
        }
        (
            Word { letters: l[..k].to_vec() },
            Word { letters: l[k..l.len() - k].to_vec() },
        )
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate(&self, g: &Word) -> Word {
        g.multiply(self).multiply(&g.inverse())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// `[x, y] = x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.multiply(y).multiply(&x.inverse()).multiply(&y.inverse())
    }

    /// The basic commutator `[a_i, a_j]`.
    pub fn basic_commutator(i: u16, j: u16) -> Word {
        Word::commutator(&Word::generator(i), &Word::generator(j))
    }

    /// Exponent sum of each generator `1..=n`.
    pub fn abelianize(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0i64; n.max(self.max_gen() as usize)];
        for l in &self.letters {
            v[l.gen as usize - 1] += l.exp as i64;
        }
        v
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word::new(v)
    }
}

fn gen_char(gen: u16) -> Option<char> {
    if (1..=26).contains(&gen) {
        Some((b'a' + (gen - 1) as u8) as char)
    } else {
        None
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let k = (j - i) as i64 * l.exp as i64;
            match gen_char(l.gen) {
                Some(c) => write!(f, "{c}")?,
                None => write!(f, "x{}", l.gen)?,
            }
            if k != 1 {
                write!(f, "^{k}")?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = FreeGroupError;

    /// Parses strings like `"ab^-2c"`: letters `a..z` are generators `1..26`,
    /// an optional `^k` gives an integer exponent. `"1"` and `""` are the
    /// empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        let chars: Vec<char> = s.chars().collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if !c.is_ascii_lowercase() {
                return Err(FreeGroupError::Parse(format!("unexpected '{c}' in \"{s}\"")));
            }
            let gen = (c as u8 - b'a' + 1) as u16;
            i += 1;
            let mut k: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && (chars[i] == '-' || chars[i] == '+' || chars[i] == '−') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: String = chars[start..i]
                    .iter()
                    .map(|&c| if c == '−' { '-' } else { c })
                    .collect();
                k = num
                    .parse()
                    .map_err(|_| FreeGroupError::Parse(format!("bad exponent in \"{s}\"")))?;
            }
            let exp = if k < 0 { -1 } else { 1 };
            letters.extend(std::iter::repeat_n(Letter::new(gen, exp), k.unsigned_abs() as usize));
        }
        Ok(Word::new(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn cyclic_reduction() {
        let w: super::Word = "ab^2a^-1".parse().unwrap();
        let (g, u) = w.cyclic_reduce();
        assert_eq!((g.to_string(), u.to_string()), ("a".into(), "b^2".into()));
        assert_eq!(u.conjugate(&g), w);
        let w: super::Word = "abAB".replace('A', "a^-1").replace('B', "b^-1").parse().unwrap();
        assert_eq!(w.cyclic_reduce().1, w);
    }

    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("ab^-2c").to_string(), "ab^-2c");
        assert_eq!(w("ab^-2c").len(), 4);
        assert_eq!(w("").to_string(), "1");
        assert_eq!(w("a^0b"), w("b"));
        assert!("aB".parse::<Word>().is_err());
        assert!("a^x".parse::<Word>().is_err());
    }

    #[test]
    fn reduction() {
        assert_eq!(w("ab").multiply(&w("b^-1a^-1")), Word::empty());
        assert_eq!(w("abb^-1a"), w("a^2"));
        let c = Word::basic_commutator(1, 2).conjugate(&w("c"));
        assert_eq!(c.len(), 6);
        assert_eq!(c.to_string(), "caba^-1b^-1c^-1");
    }

    #[test]
    fn abelianization() {
        assert_eq!(Word::basic_commutator(1, 2).abelianize(3), vec![0, 0, 0]);
        assert_eq!(w("a^2b^-1").abelianize(3), vec![2, -1, 0]);
    }

    #[test]
    fn serde_as_string() {
        let x = w("ca^-1b^-2");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "\"ca^-1b^-2\"");
        assert_eq!(serde_json::from_str::<Word>(&s).unwrap(), x);
    }
}
