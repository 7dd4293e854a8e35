//! Free-group words: signed generator letters, free and cyclic reduction,
//! prefixes, inverses and the text syntax shared by every input format.
//!
//! Words are immutable values. Every operation returns a fresh value, so they
//! can be used freely from concurrent workers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single signed generator symbol: `x_g` (sign `+1`) or `x_g^-1` (sign `-1`).
///
/// Generator indices are 1-based. Words are rank-agnostic; indices are checked
/// against a presentation's rank at the presentation layer.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawLetter", into = "RawLetter")]
pub struct Letter {
    gen: u32,
    sign: i8,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
struct RawLetter {
    gen: u32,
    sign: i8,
}

impl TryFrom<RawLetter> for Letter {
    type Error = String;
    fn try_from(raw: RawLetter) -> std::result::Result<Self, String> {
        if raw.gen == 0 {
            return Err("generator index must be >= 1".into());
        }
        if raw.sign != 1 && raw.sign != -1 {
            return Err("letter sign must be +1 or -1".into());
        }
        Ok(Letter { gen: raw.gen, sign: raw.sign })
    }
}

impl From<Letter> for RawLetter {
    fn from(l: Letter) -> RawLetter {
        RawLetter { gen: l.gen, sign: l.sign }
    }
}

impl Letter {
    pub fn new(gen: u32, sign: i8) -> Letter {
        assert!(gen >= 1, "generator index must be >= 1");
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        Letter { gen, sign }
    }

    pub fn positive(gen: u32) -> Letter {
        Letter::new(gen, 1)
    }

    pub fn negative(gen: u32) -> Letter {
        Letter::new(gen, -1)
    }

    /// 1-based generator index.
    pub fn gen(&self) -> u32 {
        self.gen
    }

    /// 0-based generator index, for table lookups.
    pub fn gen_index(&self) -> usize {
        (self.gen - 1) as usize
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn inverse(&self) -> Letter {
        Letter { gen: self.gen, sign: -self.sign }
    }

    pub fn is_inverse_of(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.sign == -other.sign
    }
}

/// A freely reduced word: no adjacent pair `x x^-1` or `x^-1 x`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize)]
pub struct Word(Vec<Letter>);

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let letters = Vec::<Letter>::deserialize(d)?;
        Word::from_reduced(letters).map_err(serde::de::Error::custom)
    }
}

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Free reduction of an arbitrary letter sequence. Idempotent and
    /// length-non-increasing; the result is the unique freely reduced word
    /// representing the same free-group element.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            if stack.last().is_some_and(|t| t.is_inverse_of(&l)) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word(stack)
    }

    /// Accepts a sequence that is already freely reduced; rejects otherwise.
    pub fn from_reduced(letters: Vec<Letter>) -> Result<Word> {
        if letters.windows(2).any(|w| w[0].is_inverse_of(&w[1])) {
            return Err(Error::NotReduced);
        }
        Ok(Word(letters))
    }

    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>) -> Word {
        debug_assert!(!letters.windows(2).any(|w| w[0].is_inverse_of(&w[1])));
        Word(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_generator(&self) -> u32 {
        self.0.iter().map(|l| l.gen()).max().unwrap_or(0)
    }

    pub fn invert(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::inverse).collect())
    }

    /// Reduced product `self * other`.
    pub fn concat(&self, other: &Word) -> Word {
        Word::reduce(self.0.iter().copied().chain(other.0.iter().copied()))
    }

    /// First `k` letters. The prefix of a reduced word is reduced.
    pub fn prefix(&self, k: usize) -> Result<Word> {
        if k > self.len() {
            return Err(Error::PrefixOutOfRange { k, len: self.len() });
        }
        Ok(Word(self.0[..k].to_vec()))
    }

    /// Cyclic reduction: returns `(c, conjugator)` with
    /// `self = conjugator * c * conjugator^-1`, `c` cyclically reduced and of
    /// minimal length in the conjugacy class.
    pub fn cyclic_reduce(&self) -> (CyclicWord, Word) {
        let mut lo = 0usize;
        let mut hi = self.0.len();
        while hi - lo >= 2 && self.0[lo].is_inverse_of(&self.0[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        let core = CyclicWord(self.0[lo..hi].to_vec());
        let conj = Word(self.0[..lo].to_vec());
        (core, conj)
    }

    /// Minimal length of a cyclically reduced representative of the conjugacy
    /// class of `self`.
    pub fn conjugacy_length(&self) -> usize {
        self.cyclic_reduce().0.len()
    }

    pub fn display_with(&self, names: &NameTable) -> String {
        display_letters(&self.0, names)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", display_letters(&self.0, &NameTable::default()))
    }
}

/// A cyclically reduced word with a marked starting index 0.
///
/// Invariant: freely reduced and the first letter is not the inverse of the
/// last. The empty cyclic word is permitted, but presentations reject empty
/// relators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct CyclicWord(Vec<Letter>);

impl<'de> Deserialize<'de> for CyclicWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let letters = Vec::<Letter>::deserialize(d)?;
        CyclicWord::from_letters(letters).map_err(serde::de::Error::custom)
    }
}

impl CyclicWord {
    pub fn empty() -> CyclicWord {
        CyclicWord(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Result<CyclicWord> {
        if letters.windows(2).any(|w| w[0].is_inverse_of(&w[1])) {
            return Err(Error::NotReduced);
        }
        if letters.len() >= 2 && letters[0].is_inverse_of(letters.last().unwrap()) {
            return Err(Error::NotCyclicallyReduced);
        }
        Ok(CyclicWord(letters))
    }

    pub fn from_word(word: &Word) -> Result<CyclicWord> {
        CyclicWord::from_letters(word.letters().to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Letter at cyclic position `k` (k may exceed the length).
    pub fn letter(&self, k: usize) -> Letter {
        self.0[k % self.0.len()]
    }

    pub fn max_generator(&self) -> u32 {
        self.0.iter().map(|l| l.gen()).max().unwrap_or(0)
    }

    /// Reads the word linearly from its base point.
    pub fn as_word(&self) -> Word {
        Word::from_reduced_unchecked(self.0.clone())
    }

    /// Moves the base point `k` steps clockwise.
    pub fn rotate(&self, k: usize) -> CyclicWord {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut letters = Vec::with_capacity(self.0.len());
        letters.extend_from_slice(&self.0[k..]);
        letters.extend_from_slice(&self.0[..k]);
        CyclicWord(letters)
    }

    /// The inverse cyclic word, read from the same base point.
    pub fn inverse(&self) -> CyclicWord {
        CyclicWord(self.0.iter().rev().map(Letter::inverse).collect())
    }

    /// Signed count of occurrences of generator `gen`.
    pub fn exponent_sum(&self, gen: u32) -> i64 {
        self.0
            .iter()
            .filter(|l| l.gen() == gen)
            .map(|l| l.sign() as i64)
            .sum()
    }

    pub fn display_with(&self, names: &NameTable) -> String {
        display_letters(&self.0, names)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", display_letters(&self.0, &NameTable::default()))
    }
}

fn display_letters(letters: &[Letter], names: &NameTable) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    let mut out = String::new();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i + 1;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        let run = (j - i) as i64 * letters[i].sign() as i64;
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&names.name(letters[i].gen()));
        if run != 1 {
            out.push('^');
            out.push_str(&run.to_string());
        }
        i = j;
    }
    out
}

/// Maps generator names to indices. Index 0 holds the name of generator 1.
/// Tokens of the form `xK` always resolve to generator `K` unless shadowed by
/// a declared name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NameTable(Vec<String>);

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl NameTable {
    /// `x1 .. xm`.
    pub fn numbered(rank: usize) -> NameTable {
        NameTable((1..=rank).map(|i| format!("x{i}")).collect())
    }

    pub fn new(names: Vec<String>) -> Result<NameTable> {
        for (i, n) in names.iter().enumerate() {
            if !is_ident(n) {
                return Err(Error::InvalidGeneratorName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(Error::DuplicateGenerator(n.clone()));
            }
        }
        Ok(NameTable(names))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn resolve(&self, token: &str) -> Option<u32> {
        if let Some(pos) = self.0.iter().position(|n| n == token) {
            return Some(pos as u32 + 1);
        }
        let rest = token.strip_prefix('x')?;
        let k: u32 = rest.parse().ok().filter(|&k| k >= 1)?;
        Some(k)
    }

    pub fn name(&self, gen: u32) -> String {
        self.0
            .get((gen - 1) as usize)
            .cloned()
            .unwrap_or_else(|| format!("x{gen}"))
    }
}

/// Parses the word syntax into a raw (unreduced) letter sequence.
///
/// Grammar: whitespace-separated items `name`, `name^k`; commutator shorthand
/// `[u,v]` expanding to `u v u^-1 v^-1`, optionally with a power; `1` for the
/// empty word. Powers expand to letter runs, negative powers to inverse runs.
pub fn parse_letters(text: &str, names: &NameTable) -> Result<Vec<Letter>> {
    let mut cur = Cursor { chars: text.chars().collect(), pos: 0 };
    let letters = parse_sequence(&mut cur, names, 0)?;
    cur.skip_ws();
    if !cur.eof() {
        return Err(Error::Syntax(format!(
            "unexpected character `{}` at offset {}",
            cur.peek().unwrap(),
            cur.pos
        )));
    }
    Ok(letters)
}

/// Parses and freely reduces a word.
pub fn parse_word(text: &str, names: &NameTable) -> Result<Word> {
    Ok(Word::reduce(parse_letters(text, names)?))
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eof(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }
}

fn invert_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(Letter::inverse).collect()
}

fn parse_sequence(cur: &mut Cursor, names: &NameTable, depth: usize) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    loop {
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some(',') | Some(']') if depth > 0 => break,
            Some(_) => {
                let atom = parse_atom(cur, names, depth)?;
                let exp = parse_exponent(cur)?;
                append_power(&mut out, &atom, exp);
            }
        }
    }
    Ok(out)
}

fn parse_atom(cur: &mut Cursor, names: &NameTable, depth: usize) -> Result<Vec<Letter>> {
    cur.skip_ws();
    match cur.peek() {
        Some('[') => {
            cur.bump();
            let u = parse_sequence(cur, names, depth + 1)?;
            cur.skip_ws();
            if cur.bump() != Some(',') {
                return Err(Error::Syntax("expected `,` inside commutator".into()));
            }
            let v = parse_sequence(cur, names, depth + 1)?;
            cur.skip_ws();
            if cur.bump() != Some(']') {
                return Err(Error::Syntax("expected `]` closing commutator".into()));
            }
            // [u, v] = u v u^-1 v^-1
            let mut letters = u.clone();
            letters.extend_from_slice(&v);
            letters.extend(invert_letters(&u));
            letters.extend(invert_letters(&v));
            Ok(letters)
        }
        Some('1') => {
            cur.bump();
            Ok(Vec::new())
        }
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            let start = cur.pos;
            while cur
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                cur.bump();
            }
            let token: String = cur.chars[start..cur.pos].iter().collect();
            let gen = names
                .resolve(&token)
                .ok_or_else(|| Error::UndeclaredGenerator(token.clone()))?;
            Ok(vec![Letter::positive(gen)])
        }
        Some(c) => Err(Error::Syntax(format!(
            "unexpected character `{c}` at offset {}",
            cur.pos
        ))),
        None => Err(Error::Syntax("unexpected end of input".into())),
    }
}

fn parse_exponent(cur: &mut Cursor) -> Result<i64> {
    if cur.peek() != Some('^') {
        return Ok(1);
    }
    cur.bump();
    let mut s = String::new();
    if cur.peek() == Some('-') || cur.peek() == Some('+') {
        s.push(cur.bump().unwrap());
    }
    while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
        s.push(cur.bump().unwrap());
    }
    s.parse::<i64>()
        .map_err(|_| Error::Syntax(format!("invalid exponent `{s}`")))
}

fn append_power(out: &mut Vec<Letter>, atom: &[Letter], exp: i64) {
    if exp >= 0 {
        for _ in 0..exp {
            out.extend_from_slice(atom);
        }
    } else {
        let inv = invert_letters(atom);
        for _ in 0..(-exp) {
            out.extend_from_slice(&inv);
        }
    }
}
