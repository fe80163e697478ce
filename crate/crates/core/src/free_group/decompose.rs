use serde::Serialize;

use super::word::{Letter, Word};
use super::FreeGroupError;

/// `g · [a_i, a_j]^sign · g⁻¹` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConjugatedCommutator {
    pub conjugator: Word,
    pub pair: (u16, u16),
    pub sign: i8,
}

impl ConjugatedCommutator {
    pub fn to_word(&self) -> Word {
        let base = Word::basic_commutator(self.pair.0, self.pair.1);
        let base = if self.sign < 0 { base.inverse() } else { base };
        base.conjugate(&self.conjugator)
    }

    fn conjugated_by(mut self, g: &Word) -> Self {
        self.conjugator = g.multiply(&self.conjugator);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub factors: Vec<ConjugatedCommutator>,
}

impl Decomposition {
    /// The reduced product of all factors, in order.
    pub fn product(&self) -> Word {
        self.factors.iter().fold(Word::empty(), |acc, f| acc.multiply(&f.to_word()))
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Signed count of each basic commutator `(i, j)`.
    pub fn signed_count(&self, i: u16, j: u16) -> i64 {
        self.factors
            .iter()
            .filter(|f| f.pair == (i, j))
            .map(|f| f.sign as i64)
            .sum()
    }
}

/// `[x, y]` for single letters, as `c [a_i, a_j]^s c⁻¹` with `i < j`.
/// Returns `None` when the letters share a generator (the commutator is trivial).
pub fn letter_commutator(x: Letter, y: Letter) -> Option<ConjugatedCommutator> {
    if x.gen == y.gen {
        return None;
    }
    let (lo, hi, flip) = if x.gen < y.gen { (x, y, 1) } else { (y, x, -1) };
    // [a^e, b^f] = c [a, b]^{ef} c⁻¹ with c = (a⁻¹ if e < 0)(b⁻¹ if f < 0).
    let mut c = Vec::new();
    if lo.exp < 0 {
        c.push(lo);
    }
    if hi.exp < 0 {
        c.push(hi);
    }
    Some(ConjugatedCommutator {
        conjugator: Word::new(c),
        pair: (lo.gen, hi.gen),
        sign: lo.exp * hi.exp * flip,
    })
}

/// Rewrites a word with zero abelianization as a product of conjugated basic
/// commutators by collection: the leftmost adjacent pair `x y` that is out of
/// generator order is swapped using `P x y S = (P [x,y] P⁻¹)(P y x S)`, and
/// the process repeats on the reduced remainder until the word is empty.
pub fn decompose_commutator_word(w: &Word) -> Result<Decomposition, FreeGroupError> {
    let ab = w.abelianize(0);
    if ab.iter().any(|&x| x != 0) {
        return Err(FreeGroupError::NotInCommutatorSubgroup(ab));
    }
    let mut factors = Vec::new();
    let mut cur: Vec<Letter> = w.letters().to_vec();
    while let Some(k) = cur.windows(2).position(|p| p[0].gen > p[1].gen) {
        let prefix = Word::new(cur[..k].iter().copied());
        let f = letter_commutator(cur[k], cur[k + 1]).expect("distinct generators");
        factors.push(f.conjugated_by(&prefix));
        cur.swap(k, k + 1);
        cur = Word::new(cur).letters().to_vec();
    }
    debug_assert!(cur.is_empty());
    Ok(Decomposition { factors })
}

/// Expands `[u, v]` with
/// `[xU, V] = x[U, V]x⁻¹ · [x, V]` and `[x, yV] = [x, y] · y[x, V]y⁻¹`
/// down to letter commutators. The product of the factors is `[u, v]`.
pub fn expand_commutator(u: &Word, v: &Word) -> Decomposition {
    let mut factors = Vec::new();
    expand_into(u.letters(), v.letters(), &Word::empty(), &mut factors);
    Decomposition { factors }
}

fn expand_into(u: &[Letter], v: &[Letter], conj: &Word, out: &mut Vec<ConjugatedCommutator>) {
    if u.is_empty() || v.is_empty() {
        return;
    }
    if u.len() > 1 {
        let x = Word::new([u[0]]);
        expand_into(&u[1..], v, &conj.multiply(&x), out);
        expand_letter_word(u[0], v, conj, out);
    } else {
        expand_letter_word(u[0], v, conj, out);
    }
}

fn expand_letter_word(x: Letter, v: &[Letter], conj: &Word, out: &mut Vec<ConjugatedCommutator>) {
    let mut conj = conj.clone();
    for &y in v {
        if let Some(f) = letter_commutator(x, y) {
            out.push(f.conjugated_by(&conj));
        }
        conj = conj.multiply(&Word::new([y]));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn letter_identities() {
        for x in [Letter::new(1, 1), Letter::new(1, -1), Letter::new(3, 1), Letter::new(3, -1)] {
            for y in [Letter::new(2, 1), Letter::new(2, -1), Letter::new(1, 1)] {
                let lhs = Word::commutator(&Word::new([x]), &Word::new([y]));
                match letter_commutator(x, y) {
                    Some(f) => assert_eq!(f.to_word(), lhs),
                    None => assert!(lhs.is_empty()),
                }
            }
        }
    }

    #[test]
    fn collection() {
        assert!(decompose_commutator_word(&Word::empty()).unwrap().is_empty());
        let x = Word::basic_commutator(1, 2).multiply(&Word::basic_commutator(2, 3));
        let d = decompose_commutator_word(&x).unwrap();
        assert_eq!(d.product(), x);
        assert_eq!(d.signed_count(1, 2), 1);
        assert_eq!(d.signed_count(2, 3), 1);
        assert!(decompose_commutator_word(&w("ab")).is_err());
        let y = w("cabc^-1a^-1b^-1");
        assert_eq!(decompose_commutator_word(&y).unwrap().product(), y);
    }

    #[test]
    fn expansion() {
        let u = w("c");
        let v = w("ca^-1b^-2");
        let d = expand_commutator(&u, &v);
        assert_eq!(d.product(), Word::commutator(&u, &v));
        assert!(d.factors.iter().all(|f| f.sign == 1));
        assert_eq!(d.signed_count(2, 3), 2);
        assert_eq!(d.signed_count(1, 3), 1);
        let u = w("a^2cb^-1");
        let v = w("b^3a^-1c");
        assert_eq!(expand_commutator(&u, &v).product(), Word::commutator(&u, &v));
    }
}
