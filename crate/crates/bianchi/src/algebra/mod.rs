//! Words, presentations, abelianization, and Tietze cleanup.
//!
//! A presentation's alphabet is its generator list; words are freely
//! reduced sequences of `(generator, exponent)` letters. Relator words
//! assembled from the raw relation search are always over the alphabet
//! `[T_1, T_omega, g_1, ..., g_k]`, with translation shifts `T_s` expanded
//! through `T_s = T_1^x T_omega^y` (well defined because the two
//! translations commute). The identity of `PSL2(O_d)` is `±I`, so word
//! verification tests matrix products up to global sign.

pub mod snf;

use crate::enumeration::{GenSet, GroupElement, RawRelation};
use crate::ring::{QuadInt, Rational, RingParams};
use num::BigInt;
use std::collections::{HashMap, HashSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("word references generator {0}, but only {1} are assigned")]
    UnassignedGenerator(usize, usize),
    #[error("shift exponent does not fit a machine word")]
    ShiftTooLarge,
}

/// Generator id of `T_1` in pipeline presentations.
pub const T1_ID: usize = 0;
/// Generator id of `T_omega` in pipeline presentations.
pub const TOMEGA_ID: usize = 1;
/// Generator id of the `i`-th cusp matrix in pipeline presentations.
pub fn pipeline_gen_id(i: usize) -> usize {
    2 + i
}

/// A freely reduced word: adjacent letters have distinct generator ids and
/// every exponent is nonzero. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Builds a word, merging adjacent letters and dropping zero exponents.
    pub fn from_letters(letters: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (id, exp) in letters {
            if exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.0 == id => {
                    last.1 = last.1.checked_add(exp).expect("exponent overflow");
                    if last.1 == 0 {
                        out.pop();
                    }
                }
                _ => out.push((id, exp)),
            }
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total length counting multiplicity: the sum of `|exponent|`.
    pub fn total_length(&self) -> usize {
        self.letters.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|(id, e)| (*id, -e)).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(
            self.letters
                .iter()
                .chain(other.letters.iter())
                .copied()
                .collect::<Vec<_>>(),
        )
    }

    /// Expansion into single `(id, ±1)` steps.
    pub fn atoms(&self) -> Vec<(usize, i8)> {
        let mut out = Vec::with_capacity(self.total_length());
        for (id, e) in &self.letters {
            let sign: i8 = if *e > 0 { 1 } else { -1 };
            for _ in 0..e.unsigned_abs() {
                out.push((*id, sign));
            }
        }
        out
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = (usize, i8)>) -> Word {
        Word::from_letters(atoms.into_iter().map(|(id, s)| (id, s as i64)))
    }

    /// Conjugacy representative with no cancelling ends: repeatedly merges
    /// a matching first/last letter pair.
    pub fn cyclically_reduced(&self) -> Word {
        let mut letters = self.letters.clone();
        loop {
            if letters.len() < 2 {
                break;
            }
            let first = letters[0];
            let last = *letters.last().unwrap();
            if first.0 != last.0 {
                break;
            }
            letters.pop();
            let merged = first.1 + last.1;
            if merged == 0 {
                letters.remove(0);
            } else {
                letters[0].1 = merged;
            }
        }
        Word { letters }
    }

    /// Canonical key identifying a relator up to cyclic rotation and
    /// inversion, used for duplicate removal. Linear time via Booth's
    /// least-rotation algorithm.
    pub fn canonical_cyclic_key(&self) -> Vec<(usize, i8)> {
        let atoms = self.cyclically_reduced().atoms();
        if atoms.is_empty() {
            return atoms;
        }
        let inv: Vec<(usize, i8)> = atoms.iter().rev().map(|(id, s)| (*id, -s)).collect();
        let rot_a = rotate_to(&atoms, least_rotation(&atoms));
        let rot_b = rotate_to(&inv, least_rotation(&inv));
        rot_a.min(rot_b)
    }
}

fn rotate_to(s: &[(usize, i8)], k: usize) -> Vec<(usize, i8)> {
    let mut out = s[k..].to_vec();
    out.extend_from_slice(&s[..k]);
    out
}

/// Booth's algorithm: the start index of the lexicographically least
/// rotation of `s`.
fn least_rotation(s: &[(usize, i8)]) -> usize {
    let n = s.len();
    if n <= 1 {
        return 0;
    }
    let at = |i: usize| &s[i % n];
    let mut failure: Vec<isize> = vec![-1; 2 * n];
    let mut k: usize = 0;
    for j in 1..2 * n {
        let mut i = failure[j - k - 1];
        while i != -1 && at(j) != at(k + i as usize + 1) {
            if at(j) < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = failure[i as usize];
        }
        if i == -1 && at(j) != at(k) {
            if at(j) < at(k) {
                k = j;
            }
            failure[j - k] = -1;
        } else {
            failure[j - k] = i + 1;
        }
    }
    k
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, (id, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "g{id}")?;
            } else {
                write!(f, "g{id}^{e}")?;
            }
        }
        Ok(())
    }
}

/// `T_s` written over the two parabolic generators:
/// `T_1^x T_omega^y` for `s = x + y*omega`.
pub fn word_from_shift(s: &QuadInt, t1: usize, tomega: usize) -> Result<Word, AlgebraError> {
    let x = i64::try_from(s.x()).map_err(|_| AlgebraError::ShiftTooLarge)?;
    let y = i64::try_from(s.y()).map_err(|_| AlgebraError::ShiftTooLarge)?;
    Ok(Word::from_letters([(t1, x), (tomega, y)]))
}

fn element_pow(g: &GroupElement, e: i64) -> GroupElement {
    if e < 0 {
        return element_pow(&g.inverse(), -e);
    }
    let mut result = GroupElement::identity(g.params());
    let mut base = g.clone();
    let mut e = e as u64;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    result
}

/// Exact product of the word under the given generator assignment.
pub fn evaluate_word(
    w: &Word,
    mats: &[GroupElement],
    params: RingParams,
) -> Result<GroupElement, AlgebraError> {
    let mut acc = GroupElement::identity(params);
    for (id, e) in w.letters() {
        let mat = mats
            .get(*id)
            .ok_or(AlgebraError::UnassignedGenerator(*id, mats.len()))?;
        acc = acc.mul(&element_pow(mat, *e));
    }
    Ok(acc)
}

/// Relator words for a raw relation list, over the alphabet
/// `[T_1, T_omega, g_1, ..., g_k]`. The commutation relator
/// `T_1 T_omega T_1^-1 T_omega^-1` always comes first; exact duplicate
/// words are removed, keeping first occurrences.
pub fn relator_words(raw: &[RawRelation], _gens: &GenSet) -> Vec<Word> {
    let mut words = Vec::with_capacity(raw.len() + 1);
    words.push(Word::from_letters([
        (T1_ID, 1),
        (TOMEGA_ID, 1),
        (T1_ID, -1),
        (TOMEGA_ID, -1),
    ]));
    for rel in raw {
        let word = match rel {
            RawRelation::Inversion { a, r, c, t } => {
                let mut letters = vec![(pipeline_gen_id(*a), 1i64)];
                letters.extend(shift_letters(r));
                letters.push((pipeline_gen_id(*c), 1));
                letters.extend(shift_letters(t));
                Word::from_letters(letters)
            }
            RawRelation::Triple { a, s, b, r, c, t } => {
                let mut letters = vec![(pipeline_gen_id(*b), -1i64)];
                letters.extend(shift_letters(&-s));
                letters.push((pipeline_gen_id(*a), 1));
                letters.extend(shift_letters(r));
                letters.push((pipeline_gen_id(*c), 1));
                letters.extend(shift_letters(t));
                Word::from_letters(letters)
            }
        };
        words.push(word);
    }
    let mut seen: HashSet<Word> = HashSet::new();
    words.retain(|w| seen.insert(w.clone()));
    words
}

fn shift_letters(s: &QuadInt) -> Vec<(usize, i64)> {
    let x = i64::try_from(s.x()).expect("shift exponent fits i64");
    let y = i64::try_from(s.y()).expect("shift exponent fits i64");
    vec![(T1_ID, x), (TOMEGA_ID, y)]
}

/// A named generator with its matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresGenerator {
    pub name: String,
    pub matrix: GroupElement,
}

/// A finite presentation together with the matrix assignment that
/// realizes it in `PSL2(O_d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub d: i64,
    pub height: Option<Rational>,
    pub generators: Vec<PresGenerator>,
    pub relators: Vec<Word>,
}

impl Presentation {
    /// The presentation produced by a pipeline run: alphabet
    /// `[T1, Tw, g1, ..., gk]` with the cusp matrices of the generating
    /// set, and the given relator words.
    pub fn from_run(gens: &GenSet, relators: Vec<Word>) -> Presentation {
        let mut generators = vec![
            PresGenerator {
                name: "T1".to_string(),
                matrix: gens.t1(),
            },
            PresGenerator {
                name: "Tw".to_string(),
                matrix: gens.t_omega(),
            },
        ];
        for i in 0..gens.len() {
            generators.push(PresGenerator {
                name: format!("g{}", i + 1),
                matrix: gens.mat(i).clone(),
            });
        }
        Presentation {
            d: gens.params().d(),
            height: Some(gens.height().clone()),
            generators,
            relators,
        }
    }

    pub fn params(&self) -> RingParams {
        RingParams::for_verification(self.d).expect("presentation stores a valid d")
    }

    pub fn matrices(&self) -> Vec<GroupElement> {
        self.generators.iter().map(|g| g.matrix.clone()).collect()
    }

    /// Evaluates every relator; `true` entries are relators that hold as
    /// matrix identities (up to sign).
    pub fn verify(&self) -> Result<Vec<bool>, AlgebraError> {
        let mats = self.matrices();
        let params = self.params();
        self.relators
            .iter()
            .map(|w| Ok(evaluate_word(w, &mats, params)?.is_identity()))
            .collect()
    }

    pub fn total_relator_length(&self) -> usize {
        self.relators.iter().map(Word::total_length).sum()
    }
}

/// The abelian invariants of a presentation's cokernel: torsion factors in
/// divisibility order (each > 1) plus the free rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianInvariants {
            torsion: Vec::new(),
            free_rank: rank,
        }
    }

    pub fn new(torsion: Vec<i64>, free_rank: usize) -> Self {
        AbelianInvariants {
            torsion: torsion.into_iter().map(BigInt::from).collect(),
            free_rank,
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("C{t}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Cinf".to_string()),
            r => parts.push(format!("Cinf^{r}")),
        }
        if parts.is_empty() {
            write!(f, "C1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Abelianization via the Smith normal form of the relator exponent
/// matrix (rows = relators, columns = generators).
pub fn abelianize(p: &Presentation) -> AbelianInvariants {
    let ncols = p.generators.len();
    let rows: Vec<snf::SparseRow> = p
        .relators
        .iter()
        .map(|w| {
            let mut sums: HashMap<usize, i64> = HashMap::new();
            for (id, e) in w.letters() {
                *sums.entry(*id).or_insert(0) += e;
            }
            let mut row: snf::SparseRow = sums
                .into_iter()
                .filter(|(_, v)| *v != 0)
                .map(|(j, v)| (j, BigInt::from(v)))
                .collect();
            row.sort_by_key(|(j, _)| *j);
            row
        })
        .collect();
    let (rank, torsion) = snf::invariant_factors(rows, ncols);
    AbelianInvariants {
        torsion,
        free_rank: ncols - rank,
    }
}

/// Presentation cleanup by moves that keep the presented group intact:
/// free and cyclic reduction, dropping trivial relators, dropping
/// duplicates up to rotation and inversion, and eliminating a generator
/// that occurs exactly once in some relator. The result is never worse
/// than the input on `(generator count, total relator length)`
/// lexicographically.
///
/// Each elimination substitutes the generator's defining word everywhere
/// it occurs, so relators can lengthen while the generator count drops.
/// Eliminations are picked greedily by estimated growth, and the run
/// stops once `budget` eliminations have happened, no candidate is left,
/// or every remaining candidate would push the total relator length past
/// a fixed multiple of the input length. Heavy simplification of the kind
/// a computer algebra system performs is out of scope; use the CAS export
/// for that.
pub fn tietze_cleanup(p: &Presentation, budget: usize) -> Presentation {
    let ngens = p.generators.len();
    let mut state = CleanupState::new(ngens);
    for w in &p.relators {
        state.insert(w.clone());
    }
    let initial_len = state.total_len.max(1);
    let length_cap = initial_len.saturating_mul(4).max(initial_len + 4096);

    let mut live = vec![true; ngens];
    for _ in 0..budget {
        let Some((growth, slot, gen)) = state.best_candidate(&live) else {
            break;
        };
        if growth > 0 && state.total_len + growth as usize > length_cap {
            break;
        }
        state.eliminate(slot, gen);
        live[gen] = false;
    }

    // reindex the surviving generators, keeping their original order
    let mut remap = vec![usize::MAX; ngens];
    let mut generators = Vec::new();
    for (old, keep) in live.iter().enumerate() {
        if *keep {
            remap[old] = generators.len();
            generators.push(p.generators[old].clone());
        }
    }
    let relators = state
        .words
        .into_iter()
        .flatten()
        .map(|w| Word::from_letters(w.letters().iter().map(|(id, e)| (remap[*id], *e))))
        .collect();

    Presentation {
        d: p.d,
        height: p.height.clone(),
        generators,
        relators,
    }
}

/// Incremental relator store for cleanup: words live in stable slots with
/// per-slot occurrence counts, a per-generator slot index, and duplicate
/// detection keyed on the cyclic canonical form.
struct CleanupState {
    words: Vec<Option<Word>>,
    keys: HashMap<Vec<(usize, i8)>, usize>,
    occ: Vec<HashMap<usize, usize>>,
    gen_slots: Vec<std::collections::BTreeSet<usize>>,
    gen_total: Vec<usize>,
    total_len: usize,
}

impl CleanupState {
    fn new(ngens: usize) -> Self {
        CleanupState {
            words: Vec::new(),
            keys: HashMap::new(),
            occ: Vec::new(),
            gen_slots: vec![std::collections::BTreeSet::new(); ngens],
            gen_total: vec![0; ngens],
            total_len: 0,
        }
    }

    /// Cyclically reduces and stores a word unless it is empty or a
    /// duplicate of a live word.
    fn insert(&mut self, w: Word) {
        let w = w.cyclically_reduced();
        if w.is_empty() {
            return;
        }
        let key = w.canonical_cyclic_key();
        if self.keys.contains_key(&key) {
            return;
        }
        let slot = self.words.len();
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for (id, e) in w.letters() {
            *counts.entry(*id).or_insert(0) += e.unsigned_abs() as usize;
        }
        for (gen, count) in &counts {
            self.gen_slots[*gen].insert(slot);
            self.gen_total[*gen] += count;
        }
        self.total_len += w.total_length();
        self.keys.insert(key, slot);
        self.occ.push(counts);
        self.words.push(Some(w));
    }

    fn remove(&mut self, slot: usize) -> Word {
        let w = self.words[slot].take().expect("slot is live");
        self.keys.remove(&w.canonical_cyclic_key());
        for (gen, count) in self.occ[slot].drain() {
            self.gen_slots[gen].remove(&slot);
            self.gen_total[gen] -= count;
        }
        self.total_len -= w.total_length();
        w
    }

    /// The elimination candidate minimizing estimated length growth:
    /// substituting a defining word of length `L` at the `k` occurrences
    /// outside the defining relator adds about `k (L - 2) - L` atoms.
    fn best_candidate(&self, live: &[bool]) -> Option<(i64, usize, usize)> {
        let mut best: Option<(i64, usize, usize, usize)> = None;
        for gen in 0..live.len() {
            if !live[gen] || self.gen_total[gen] == 0 {
                continue;
            }
            for &slot in &self.gen_slots[gen] {
                if self.occ[slot][&gen] != 1 {
                    continue;
                }
                let wlen = self.words[slot].as_ref().unwrap().total_length();
                let elsewhere = (self.gen_total[gen] - 1) as i64;
                let growth = elsewhere * (wlen as i64 - 2) - wlen as i64;
                let cand = (growth, wlen, slot, gen);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        best.map(|(growth, _, slot, gen)| (growth, slot, gen))
    }

    /// Removes the defining relator at `slot`, rewrites every other
    /// relator containing `gen`, and leaves `gen` unused.
    fn eliminate(&mut self, slot: usize, gen: usize) {
        let word = self.remove(slot);
        let atoms = word.atoms();
        let pos = atoms
            .iter()
            .position(|(id, _)| *id == gen)
            .expect("defining relator contains the generator");
        let eps = atoms[pos].1;
        // rotate to g^eps * z, then g = z^-1 (eps = 1) or z (eps = -1)
        let mut z: Vec<(usize, i8)> = atoms[pos + 1..].to_vec();
        z.extend_from_slice(&atoms[..pos]);
        let rep_atoms: Vec<(usize, i8)> = if eps == 1 {
            z.iter().rev().map(|(id, s)| (*id, -s)).collect()
        } else {
            z
        };
        let rep = Word::from_atoms(rep_atoms);
        debug_assert!(rep.letters().iter().all(|(id, _)| *id != gen));

        let affected: Vec<usize> = self.gen_slots[gen].iter().copied().collect();
        for s in affected {
            let old = self.remove(s);
            self.insert(substitute(&old, gen, &rep));
        }
        assert_eq!(self.gen_total[gen], 0, "eliminated generator still occurs");
    }
}

fn substitute(w: &Word, gen: usize, rep: &Word) -> Word {
    let mut letters: Vec<(usize, i64)> = Vec::new();
    for (id, e) in w.letters() {
        if *id != gen {
            letters.push((*id, *e));
            continue;
        }
        let block = if *e > 0 { rep.clone() } else { rep.inverse() };
        for _ in 0..e.unsigned_abs() {
            letters.extend_from_slice(block.letters());
        }
    }
    Word::from_letters(letters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{find_generators, find_relations};
    use crate::ring::rational;

    fn params(d: i64) -> RingParams {
        RingParams::new(d).unwrap()
    }

    #[test]
    fn word_reduction() {
        let w = Word::from_letters([(0, 2), (0, -2), (1, 1), (1, 2), (2, 0), (1, -3), (0, 1)]);
        assert_eq!(w.letters(), &[(0, 1)]);
        let w = Word::from_letters([(0, 1), (1, 1), (1, -1), (0, -1)]);
        assert!(w.is_empty());
        assert_eq!(Word::identity().total_length(), 0);
    }

    #[test]
    fn word_inverse_and_concat() {
        let w = Word::from_letters([(0, 2), (1, -1), (2, 3)]);
        assert!(w.concat(&w.inverse()).is_empty());
        assert_eq!(w.inverse().inverse(), w);
        assert_eq!(w.total_length(), 6);
    }

    #[test]
    fn cyclic_reduction_and_keys() {
        // a b a^-1 is conjugate to b
        let w = Word::from_letters([(0, 1), (1, 1), (0, -1)]);
        assert_eq!(w.cyclically_reduced().letters(), &[(1, 1)]);
        // rotations and inverses share a canonical key
        let u = Word::from_letters([(0, 1), (1, 1), (2, 1)]);
        let rotated = Word::from_letters([(1, 1), (2, 1), (0, 1)]);
        let inverted = u.inverse();
        assert_eq!(u.canonical_cyclic_key(), rotated.canonical_cyclic_key());
        assert_eq!(u.canonical_cyclic_key(), inverted.canonical_cyclic_key());
        let other = Word::from_letters([(0, 1), (2, 1), (1, 1)]);
        assert_ne!(u.canonical_cyclic_key(), other.canonical_cyclic_key());
    }

    #[test]
    fn shift_words() {
        let p = params(-7);
        let s = QuadInt::new(p, 2, 3);
        let w = word_from_shift(&s, T1_ID, TOMEGA_ID).unwrap();
        assert_eq!(w.letters(), &[(T1_ID, 2), (TOMEGA_ID, 3)]);
        assert!(word_from_shift(&p.zero(), T1_ID, TOMEGA_ID)
            .unwrap()
            .is_empty());
        let w = word_from_shift(&-&p.omega(), T1_ID, TOMEGA_ID).unwrap();
        assert_eq!(w.letters(), &[(TOMEGA_ID, -1)]);
    }

    #[test]
    fn evaluate_words() {
        let p = params(-2);
        let t1 = GroupElement::t_shift(&p.one());
        let b = crate::enumeration::mat_of_cusp(
            &crate::enumeration::Cusp::new(p.zero(), p.one()).unwrap(),
        );
        let mats = vec![t1, b];
        // B^2 = 1 in PSL2
        let w = Word::from_letters([(1, 2)]);
        assert!(evaluate_word(&w, &mats, p).unwrap().is_identity());
        // (T1 B)^3 = 1
        let w = Word::from_letters([(0, 1), (1, 1), (0, 1), (1, 1), (0, 1), (1, 1)]);
        assert!(evaluate_word(&w, &mats, p).unwrap().is_identity());
        // empty word is the identity
        assert!(evaluate_word(&Word::identity(), &mats, p)
            .unwrap()
            .is_identity());
        // out-of-range generator ids are reported
        let w = Word::from_letters([(5, 1)]);
        assert_eq!(
            evaluate_word(&w, &mats, p),
            Err(AlgebraError::UnassignedGenerator(5, 2))
        );
    }

    #[test]
    fn assembled_relators_evaluate_to_identity() {
        for (d, h) in [(-2i64, rational(1, 2)), (-11, rational(422, 1000))] {
            let p = params(d);
            let gens = find_generators(p, &h);
            let raw = find_relations(&gens);
            let words = relator_words(&raw, &gens);
            let pres = Presentation::from_run(&gens, words);
            let checks = pres.verify().unwrap();
            assert!(checks.iter().all(|ok| *ok), "d = {d}");
        }
    }

    #[test]
    fn raw_abelianizations_match_known_values() {
        for (d, h, expect) in [
            (-2i64, rational(1, 2), AbelianInvariants::new(vec![6], 1)),
            (-7, rational(1, 2), AbelianInvariants::new(vec![2], 1)),
            (-11, rational(422, 1000), AbelianInvariants::new(vec![3], 1)),
            (-19, rational(3218, 10000), AbelianInvariants::free(1)),
        ] {
            let p = params(d);
            let gens = find_generators(p, &h);
            let raw = find_relations(&gens);
            let words = relator_words(&raw, &gens);
            let pres = Presentation::from_run(&gens, words);
            assert_eq!(abelianize(&pres), expect, "d = {d}");
        }
    }

    #[test]
    fn abelianize_toy_presentation() {
        // <a, b | a^2>: C2 x Cinf
        let p = params(-2);
        let pres = Presentation {
            d: -2,
            height: None,
            generators: vec![
                PresGenerator {
                    name: "a".into(),
                    matrix: GroupElement::identity(p),
                },
                PresGenerator {
                    name: "b".into(),
                    matrix: GroupElement::identity(p),
                },
            ],
            relators: vec![Word::from_letters([(0, 2)])],
        };
        assert_eq!(abelianize(&pres), AbelianInvariants::new(vec![2], 1));
        assert_eq!(abelianize(&pres).to_string(), "C2 x Cinf");
    }

    #[test]
    fn tietze_single_occurrence_elimination() {
        // <a, b, c | c a b, b^3> -> c = (ab)^-1 eliminated, leaving <a, b | b^3>
        let p = params(-2);
        let id = GroupElement::identity(p);
        let gens = ["a", "b", "c"]
            .iter()
            .map(|n| PresGenerator {
                name: n.to_string(),
                matrix: id.clone(),
            })
            .collect();
        let pres = Presentation {
            d: -2,
            height: None,
            generators: gens,
            relators: vec![
                Word::from_letters([(2, 1), (0, 1), (1, 1)]),
                Word::from_letters([(1, 3)]),
                Word::from_letters([(1, 3)]).inverse(), // duplicate up to inversion
                Word::identity(),
            ],
        };
        let cleaned = tietze_cleanup(&pres, 100);
        assert_eq!(cleaned.generators.len(), 2);
        assert_eq!(cleaned.relators.len(), 1);
        assert_eq!(abelianize(&cleaned), abelianize(&pres));
        // never worse on (generators, total length)
        assert!(cleaned.generators.len() <= pres.generators.len());
    }

    #[test]
    fn tietze_preserves_abelianization_on_runs() {
        for (d, h) in [(-2i64, rational(1, 2)), (-7, rational(1, 2))] {
            let p = params(d);
            let gens = find_generators(p, &h);
            let raw = find_relations(&gens);
            let words = relator_words(&raw, &gens);
            let pres = Presentation::from_run(&gens, words);
            let cleaned = tietze_cleanup(&pres, 10_000);
            assert_eq!(abelianize(&cleaned), abelianize(&pres), "d = {d}");
            assert!(cleaned.generators.len() <= pres.generators.len());
            // cleaned relators still hold as matrix identities
            assert!(cleaned.verify().unwrap().iter().all(|ok| *ok));
        }
    }
}
