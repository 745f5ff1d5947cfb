//! Genus-2 theta characteristics and the orbit calculus on sets of even ones.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sympl::SpMatrix;

pub mod lemmas;

/// A characteristic `[m'; m'']` packed as `m'1 m'2 m''1 m''2` (high to low bit).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Char2(u8);

impl Char2 {
    pub const ZERO: Char2 = Char2(0);

    pub const fn new(mprime: [u8; 2], mdprime: [u8; 2]) -> Char2 {
        Char2(((mprime[0] & 1) << 3) | ((mprime[1] & 1) << 2) | ((mdprime[0] & 1) << 1) | (mdprime[1] & 1))
    }

    pub fn from_bits(bits: u8) -> Option<Char2> {
        (bits < 16).then_some(Char2(bits))
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub const fn mprime(self) -> [u8; 2] {
        [(self.0 >> 3) & 1, (self.0 >> 2) & 1]
    }

    pub const fn mdprime(self) -> [u8; 2] {
        [(self.0 >> 1) & 1, self.0 & 1]
    }

    /// `(-1)^(m'.m'')`.
    pub const fn parity(self) -> i8 {
        let p = self.mprime();
        let q = self.mdprime();
        if (p[0] * q[0] + p[1] * q[1]) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub const fn is_even(self) -> bool {
        self.parity() == 1
    }

    pub fn all() -> impl Iterator<Item = Char2> {
        (0..16u8).map(Char2)
    }

    /// Index into [`EVEN`], if even.
    pub fn even_index(self) -> Option<usize> {
        EVEN.iter().position(|&c| c == self)
    }

    /// Index into [`ODD`], if odd.
    pub fn odd_index(self) -> Option<usize> {
        ODD.iter().position(|&c| c == self)
    }
}

impl std::ops::Add for Char2 {
    type Output = Char2;
    fn add(self, rhs: Char2) -> Char2 {
        Char2(self.0 ^ rhs.0)
    }
}

impl fmt::Display for Char2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.mprime();
        let q = self.mdprime();
        write!(f, "{}{}|{}{}", p[0], p[1], q[0], q[1])
    }
}

impl FromStr for Char2 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Char2> {
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, '|' | ';' | ' ' | '[' | ']'))
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("bad characteristic {s:?}"))),
            })
            .collect::<Result<_>>()?;
        if digits.len() != 4 {
            return Err(Error::Parse(format!("bad characteristic {s:?}")));
        }
        Ok(Char2::new([digits[0], digits[1]], [digits[2], digits[3]]))
    }
}

impl Serialize for Char2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Char2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Char2, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

const fn ch(a: u8, b: u8, c: u8, d: u8) -> Char2 {
    Char2::new([a, b], [c, d])
}

/// The ten even characteristics, in the fixed enumeration used by every index-keyed table.
pub const EVEN: [Char2; 10] = [
    ch(0, 0, 0, 0),
    ch(0, 0, 0, 1),
    ch(0, 0, 1, 0),
    ch(0, 0, 1, 1),
    ch(0, 1, 0, 0),
    ch(1, 0, 0, 0),
    ch(1, 1, 0, 0),
    ch(0, 1, 1, 0),
    ch(1, 0, 0, 1),
    ch(1, 1, 1, 1),
];

/// The six odd characteristics.
pub const ODD: [Char2; 6] = [
    ch(0, 1, 0, 1),
    ch(1, 0, 1, 0),
    ch(0, 1, 1, 1),
    ch(1, 0, 1, 1),
    ch(1, 1, 0, 1),
    ch(1, 1, 1, 0),
];

/// Action of a symplectic matrix on characteristics, reduced mod 2.
pub fn char_action(gamma: &SpMatrix, m: Char2) -> Char2 {
    let lifted = lifted_action(gamma, m);
    Char2::new(
        [lifted[0].rem_euclid(2) as u8, lifted[1].rem_euclid(2) as u8],
        [lifted[2].rem_euclid(2) as u8, lifted[3].rem_euclid(2) as u8],
    )
}

/// Integer lift of the action: `(d m' - c m'' + diag(c dᵀ), -b m' + a m'' + diag(a bᵀ))`.
pub fn lifted_action(gamma: &SpMatrix, m: Char2) -> [i64; 4] {
    let (a, b, c, d) = gamma.blocks();
    let p = m.mprime().map(i64::from);
    let q = m.mdprime().map(i64::from);
    let mut out = [0i64; 4];
    for i in 0..2 {
        let cd = c[i][0] * d[i][0] + c[i][1] * d[i][1];
        let ab = a[i][0] * b[i][0] + a[i][1] * b[i][1];
        out[i] = d[i][0] * p[0] + d[i][1] * p[1] - c[i][0] * q[0] - c[i][1] * q[1] + cd;
        out[2 + i] = -b[i][0] * p[0] - b[i][1] * p[1] + a[i][0] * q[0] + a[i][1] * q[1] + ab;
    }
    out
}

/// Subset of the ten even characteristics, bit `i` standing for `EVEN[i]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CharSet(u16);

impl CharSet {
    pub const EMPTY: CharSet = CharSet(0);
    pub const FULL: CharSet = CharSet(0x3ff);

    pub fn from_mask(mask: u16) -> Option<CharSet> {
        (mask <= 0x3ff).then_some(CharSet(mask))
    }

    pub const fn mask(self) -> u16 {
        self.0
    }

    /// Build from zero-based even indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(idx: I) -> CharSet {
        let mut m = 0u16;
        for i in idx {
            assert!(i < 10, "even index out of range");
            m |= 1 << i;
        }
        CharSet(m)
    }

    /// Build from one-based labels `1..=10`.
    pub fn from_labels(labels: &[usize]) -> Result<CharSet> {
        let mut m = 0u16;
        for &l in labels {
            if !(1..=10).contains(&l) {
                return Err(Error::InvalidArgument(format!("even label {l} out of range 1..10")));
            }
            m |= 1 << (l - 1);
        }
        Ok(CharSet(m))
    }

    pub fn from_chars(chars: &[Char2]) -> Result<CharSet> {
        let mut m = 0u16;
        for &c in chars {
            let i = c.even_index().ok_or(Error::OddCharacteristic(c))?;
            if m & (1 << i) != 0 {
                return Err(Error::InvalidArgument(format!("repeated characteristic {c}")));
            }
            m |= 1 << i;
        }
        Ok(CharSet(m))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 10 && self.0 & (1 << i) != 0
    }

    pub fn insert(self, i: usize) -> CharSet {
        CharSet(self.0 | (1 << i))
    }

    pub fn remove(self, i: usize) -> CharSet {
        CharSet(self.0 & !(1 << i))
    }

    pub fn union(self, o: CharSet) -> CharSet {
        CharSet(self.0 | o.0)
    }

    pub fn intersection(self, o: CharSet) -> CharSet {
        CharSet(self.0 & o.0)
    }

    pub fn sym_diff(self, o: CharSet) -> CharSet {
        CharSet(self.0 ^ o.0)
    }

    pub fn complement(self) -> CharSet {
        CharSet(!self.0 & 0x3ff)
    }

    pub fn is_subset(self, o: CharSet) -> bool {
        self.0 & !o.0 == 0
    }

    /// Zero-based indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..10).filter(move |&i| self.0 & (1 << i) != 0)
    }

    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    pub fn chars(self) -> Vec<Char2> {
        self.iter().map(|i| EVEN[i]).collect()
    }

    /// Sum of the members in (Z/2)^4.
    pub fn sum(self) -> Char2 {
        self.iter().fold(Char2::ZERO, |acc, i| acc + EVEN[i])
    }

    /// All subsets of the ten evens with exactly `k` members, by increasing mask.
    pub fn all_of_size(k: usize) -> impl Iterator<Item = CharSet> {
        (0u16..1024).filter(move |m| m.count_ones() as usize == k).map(CharSet)
    }

    /// Subsets of `self` with exactly `k` members.
    pub fn subsets_of_size(self, k: usize) -> impl Iterator<Item = CharSet> {
        CharSet::all_of_size(k).filter(move |s| s.is_subset(self))
    }

    /// Image under the symplectic action on members.
    pub fn act(self, gamma: &SpMatrix) -> CharSet {
        let mut m = 0u16;
        for i in self.iter() {
            let j = char_action(gamma, EVEN[i]).even_index().expect("action preserves parity");
            m |= 1 << j;
        }
        CharSet(m)
    }
}

impl fmt::Debug for CharSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CharSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

impl Serialize for CharSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CharSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<CharSet, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        CharSet::from_labels(&v).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitKind {
    /// Sizes 2 and 8 form one orbit.
    Single,
    Minus,
    Plus,
    Star,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum OrbitClass {
    Classified { size: u8, kind: OrbitKind },
    Unclassified,
}

impl OrbitClass {
    pub const fn new(size: u8, kind: OrbitKind) -> OrbitClass {
        OrbitClass::Classified { size, kind }
    }
    pub const C2: OrbitClass = OrbitClass::new(2, OrbitKind::Single);
    pub const C3_MINUS: OrbitClass = OrbitClass::new(3, OrbitKind::Minus);
    pub const C3_PLUS: OrbitClass = OrbitClass::new(3, OrbitKind::Plus);
    pub const C4_MINUS: OrbitClass = OrbitClass::new(4, OrbitKind::Minus);
    pub const C4_PLUS: OrbitClass = OrbitClass::new(4, OrbitKind::Plus);
    pub const C4_STAR: OrbitClass = OrbitClass::new(4, OrbitKind::Star);
    pub const C5_MINUS: OrbitClass = OrbitClass::new(5, OrbitKind::Minus);
    pub const C5_PLUS: OrbitClass = OrbitClass::new(5, OrbitKind::Plus);
    pub const C5_STAR: OrbitClass = OrbitClass::new(5, OrbitKind::Star);
    pub const C6_MINUS: OrbitClass = OrbitClass::new(6, OrbitKind::Minus);
    pub const C6_PLUS: OrbitClass = OrbitClass::new(6, OrbitKind::Plus);
    pub const C6_STAR: OrbitClass = OrbitClass::new(6, OrbitKind::Star);

    pub fn label(self) -> String {
        match self {
            OrbitClass::Unclassified => "unclassified".into(),
            OrbitClass::Classified { size, kind } => {
                let suffix = match kind {
                    OrbitKind::Single => "",
                    OrbitKind::Minus => "minus",
                    OrbitKind::Plus => "plus",
                    OrbitKind::Star => "star",
                };
                format!("C{size}{suffix}")
            }
        }
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for OrbitClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

fn complement_kind(kind: OrbitKind) -> OrbitKind {
    match kind {
        OrbitKind::Minus => OrbitKind::Plus,
        OrbitKind::Plus => OrbitKind::Minus,
        k => k,
    }
}

/// Orbit label of a set of even characteristics, computed from the definitions.
pub fn classify_set(s: CharSet) -> OrbitClass {
    let n = s.len();
    match n {
        2 => OrbitClass::C2,
        3 => {
            if s.sum().is_even() {
                OrbitClass::C3_PLUS
            } else {
                OrbitClass::C3_MINUS
            }
        }
        4 => {
            let mut minus = 0;
            for t in s.subsets_of_size(3) {
                if !t.sum().is_even() {
                    minus += 1;
                }
            }
            match minus {
                4 => OrbitClass::C4_MINUS,
                0 => OrbitClass::C4_PLUS,
                _ => OrbitClass::C4_STAR,
            }
        }
        5 => {
            let (mut minus, mut plus) = (0, 0);
            for q in s.subsets_of_size(4) {
                match classify_set(q) {
                    OrbitClass::C4_MINUS => minus += 1,
                    OrbitClass::C4_PLUS => plus += 1,
                    _ => {}
                }
            }
            match (minus, plus) {
                (1, 0) => OrbitClass::C5_MINUS,
                (0, 1) => OrbitClass::C5_PLUS,
                (0, 0) => OrbitClass::C5_STAR,
                _ => OrbitClass::Unclassified,
            }
        }
        6..=8 => match classify_set(s.complement()) {
            OrbitClass::Classified { kind, .. } => {
                OrbitClass::new(n as u8, complement_kind(kind))
            }
            OrbitClass::Unclassified => OrbitClass::Unclassified,
        },
        _ => OrbitClass::Unclassified,
    }
}

/// Classify a list of characteristics; rejects odd or repeated members.
pub fn classify_chars(chars: &[Char2]) -> Result<OrbitClass> {
    Ok(classify_set(CharSet::from_chars(chars)?))
}

/// All members of one orbit class.
pub fn orbit_members(class: OrbitClass) -> Vec<CharSet> {
    match class {
        OrbitClass::Classified { size, .. } => CharSet::all_of_size(size as usize)
            .filter(|&s| classify_set(s) == class)
            .collect(),
        OrbitClass::Unclassified => Vec::new(),
    }
}

/// Orbit sizes as published, `C2` counted as all pairs.
pub const PUBLISHED_ORBIT_COUNTS: [(OrbitClass, usize); 9] = [
    (OrbitClass::C2, 45),
    (OrbitClass::C3_MINUS, 60),
    (OrbitClass::C3_PLUS, 60),
    (OrbitClass::C4_MINUS, 15),
    (OrbitClass::C4_PLUS, 15),
    (OrbitClass::C4_STAR, 180),
    (OrbitClass::C5_MINUS, 90),
    (OrbitClass::C5_PLUS, 90),
    (OrbitClass::C5_STAR, 72),
];

/// Counts per class over every subset of size 2 through 6.
pub fn orbit_census() -> std::collections::BTreeMap<OrbitClass, usize> {
    let mut out = std::collections::BTreeMap::new();
    for k in 2..=6 {
        for s in CharSet::all_of_size(k) {
            *out.entry(classify_set(s)).or_insert(0) += 1;
        }
    }
    out
}

/// The unique even `n` completing a classified triple to a quadruple of the same sign.
pub fn complete_to_c4(triple: CharSet) -> Result<usize> {
    let target = match classify_set(triple) {
        OrbitClass::C3_MINUS => OrbitClass::C4_MINUS,
        OrbitClass::C3_PLUS => OrbitClass::C4_PLUS,
        other => {
            return Err(Error::InvalidArgument(format!(
                "{triple} is {other}, not a classified triple"
            )))
        }
    };
    let found: Vec<usize> = triple
        .complement()
        .iter()
        .filter(|&n| classify_set(triple.insert(n)) == target)
        .collect();
    match found.as_slice() {
        [n] => Ok(*n),
        _ => Err(Error::Internal(format!(
            "{triple} has {} completions",
            found.len()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(labels: &[usize]) -> CharSet {
        CharSet::from_labels(labels).unwrap()
    }

    #[test]
    fn parity_examples() {
        assert_eq!(EVEN[0].parity(), 1);
        assert_eq!(ODD[0].parity(), -1);
        assert_eq!("11|11".parse::<Char2>().unwrap().parity(), 1);
    }

    #[test]
    fn enumerations_have_correct_parity_and_cover_everything() {
        assert!(EVEN.iter().all(|c| c.is_even()));
        assert!(ODD.iter().all(|c| !c.is_even()));
        let mut all: Vec<u8> = EVEN.iter().chain(ODD.iter()).map(|c| c.bits()).collect();
        all.sort();
        assert_eq!(all, (0..16).collect::<Vec<_>>());
        assert_eq!(Char2::all().filter(|c| c.is_even()).count(), 10);
    }

    #[test]
    fn char_text_roundtrip() {
        for c in Char2::all() {
            assert_eq!(c.to_string().parse::<Char2>().unwrap(), c);
        }
        assert_eq!(ODD[2].to_string(), "01|11");
        assert!("0120".parse::<Char2>().is_err());
    }

    #[test]
    fn action_of_j_sends_n3_to_n5() {
        assert_eq!(char_action(&SpMatrix::j(), ODD[2]), ODD[4]);
        for c in Char2::all() {
            assert_eq!(char_action(&SpMatrix::identity(), c), c);
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_set(set(&[1, 2, 3])), OrbitClass::C3_PLUS);
        assert_eq!(classify_set(set(&[2, 3, 5, 6])), OrbitClass::C4_MINUS);
        assert_eq!(classify_set(set(&[1, 2, 3, 4])), OrbitClass::C4_PLUS);
        assert_eq!(classify_set(CharSet::EMPTY), OrbitClass::Unclassified);
        assert_eq!(classify_set(CharSet::FULL), OrbitClass::Unclassified);
        assert_eq!(classify_set(set(&[1])), OrbitClass::Unclassified);
        assert!(classify_chars(&[ODD[0], EVEN[1]]).is_err());
    }

    #[test]
    fn census_matches_orbit_sizes() {
        let c = orbit_census();
        assert_eq!(c[&OrbitClass::C2], 45);
        assert_eq!(c[&OrbitClass::C3_MINUS], 60);
        assert_eq!(c[&OrbitClass::C3_PLUS], 60);
        assert_eq!(c[&OrbitClass::C4_MINUS], 15);
        assert_eq!(c[&OrbitClass::C4_PLUS], 15);
        assert_eq!(c[&OrbitClass::C4_STAR], 180);
        assert_eq!(c[&OrbitClass::C5_MINUS], 90);
        assert_eq!(c[&OrbitClass::C5_PLUS], 90);
        assert_eq!(c[&OrbitClass::C5_STAR], 72);
        assert!(!c.contains_key(&OrbitClass::Unclassified));
    }

    #[test]
    fn completion_examples() {
        assert_eq!(complete_to_c4(set(&[1, 2, 3])).unwrap(), 3);
        assert_eq!(complete_to_c4(set(&[2, 3, 5])).unwrap(), 5);
        assert!(complete_to_c4(set(&[1, 2])).is_err());
        for t in orbit_members(OrbitClass::C3_PLUS) {
            let n = complete_to_c4(t).unwrap();
            assert_eq!(EVEN[n], t.sum());
        }
    }

    #[test]
    fn charset_serializes_as_labels() {
        let s = set(&[2, 5, 10]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, "[2,5,10]");
        let back: CharSet = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(CharSet::from_labels(&[11]).is_err());
    }
}
