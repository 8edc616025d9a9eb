//! Alphabet construction for a family of independent Lévy processes.
//!
//! Letters are assigned inductively: one generator letter per process
//! (grade 1), the time letter `t` (grade 2, always a member of the
//! alphabet — adjoined as a generator when no process is continuous,
//! arising from `[W]^(2)` otherwise, and required for closure in the
//! mixed case), and one letter per power bracket `[X^i]^(n)` for
//! increasing `n` while the bracket stays outside the linear span of
//! `{t}` and the previously retained ones. Independence is decided by
//! coordinate reduction when the spec has coordinates and by Gram-norm
//! nondegeneracy (`h_n != 0`) for moment-sequence specs; the two routes
//! agree whenever both apply. Enumeration stops at the first reduction —
//! every later bracket then reduces too — or, for moment-sequence specs
//! only, at `max_grade` or at moment exhaustion, both recorded as
//! truncation notices.
//!
//! Bracket-table entries between letters of one process expand
//! `[X]^(n+m)` over the retained letters; cross-process entries and all
//! entries against `t` vanish. For a truncated moment-sequence process,
//! entries beyond the truncation grade are zero: the resulting algebra is
//! the graded quotient at the truncation order.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, BracketTable, Letter, LetterId, Poly, PolyDto, Word};
use crate::levy::{
    canonicalize, power_bracket_vector, reduce_against, spec_from_dto, spec_to_dto, vector_from_dto,
    vector_to_dto, Basis, JumpLaw, LevyError, LevySpec, LevySpecDto, ProcessVector, Reduction,
};
use crate::rational::Rational;
use crate::teugels::{gram_data, span_expansion, GramData, TeugelsError};

#[derive(Debug, Error)]
pub enum AlphabetError {
    #[error("family must contain at least one process")]
    EmptyFamily,
    #[error("max_grade must be at least 2, got {0}")]
    MaxGradeTooSmall(u32),
    #[error("duplicate process name `{0}`")]
    DuplicateName(String),
    #[error("invalid process name `{0}`: use [A-Za-z][A-Za-z0-9_]*, not `t`")]
    BadName(String),
    #[error(transparent)]
    Levy(#[from] LevyError),
    #[error(transparent)]
    Teugels(#[from] TeugelsError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("process `{name}`: moments beyond order {order} are needed to close the bracket table but are not supplied")]
    TruncationExceeded { name: String, order: usize },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("malformed alphabet data: {0}")]
    Malformed(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// What a letter denotes under the map to semimartingales.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// The generator `X^i` (1-based process index).
    Generator { process: usize },
    /// The deterministic time process.
    Time,
    /// The power bracket `[X^i]^(n)`.
    PowerBracket { process: usize, order: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationReason {
    /// Letter enumeration stopped at `max_grade`.
    MaxGrade,
    /// The supplied moment sequence ran out.
    MomentsExhausted,
}

/// Non-fatal notice that a moment-sequence process was truncated before
/// its power brackets reduced; the alphabet is the graded quotient at
/// `last_order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationNotice {
    pub process: usize,
    pub name: String,
    pub reason: TruncationReason,
    /// Highest power-bracket order whose independence was established.
    pub last_order: usize,
}

/// The alphabet of a family: letters, provenance, coordinate vectors
/// when available, and the bracket table of structure constants.
/// Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Alphabet {
    family: Vec<LevySpec>,
    max_grade: u32,
    table: BracketTable,
    provenance: Vec<Provenance>,
    vectors: Vec<Option<ProcessVector>>,
    truncations: Vec<TruncationNotice>,
}

fn time_vector() -> ProcessVector {
    ProcessVector::from_coords(vec![(Basis::Time, Rational::from_integer(1.into()))])
}

fn validate_name(name: &str) -> Result<(), AlphabetError> {
    let mut chars = name.chars();
    let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "t";
    if ok {
        Ok(())
    } else {
        Err(AlphabetError::BadName(name.to_string()))
    }
}

enum Stop {
    /// A reduction occurred; later brackets reduce too.
    Reduced,
    /// Enumeration was cut short while still independent.
    Truncated,
}

struct ProcState {
    /// Letter ids by power-bracket order; `order_ids[0]` is the generator.
    order_ids: Vec<LetterId>,
    stop: Stop,
    gram: Option<GramData>,
}

/// Builds the alphabet of a nonempty family of independent Lévy
/// processes. `max_grade` truncates only moment-sequence processes;
/// finite-atom and continuous alphabets terminate on their own.
pub fn build_alphabet(family: &[LevySpec], max_grade: u32) -> Result<Alphabet, AlphabetError> {
    if family.is_empty() {
        return Err(AlphabetError::EmptyFamily);
    }
    if max_grade < 2 {
        return Err(AlphabetError::MaxGradeTooSmall(max_grade));
    }
    for (i, spec) in family.iter().enumerate() {
        validate_name(&spec.name)?;
        spec.validate()?;
        if family[..i].iter().any(|s| s.name == spec.name) {
            return Err(AlphabetError::DuplicateName(spec.name.clone()));
        }
    }

    let d = family.len();
    let mut letters: Vec<Letter> = Vec::new();
    let mut provenance: Vec<Provenance> = Vec::new();
    let mut vectors: Vec<Option<ProcessVector>> = Vec::new();

    for (i0, spec) in family.iter().enumerate() {
        letters.push(Letter::new(i0 as u32, 1, spec.name.clone()));
        provenance.push(Provenance::Generator { process: i0 + 1 });
        vectors.push(canonicalize(spec, i0 + 1).ok());
    }
    letters.push(Letter::new(d as u32, 2, "t"));
    provenance.push(Provenance::Time);
    vectors.push(Some(time_vector()));
    let tau = LetterId(d as u32);

    let mut truncations: Vec<TruncationNotice> = Vec::new();
    let mut procs: Vec<ProcState> = Vec::with_capacity(d);
    let mut next_id = d as u32 + 1;

    for (i0, spec) in family.iter().enumerate() {
        let idx = i0 + 1;
        let mut order_ids = vec![LetterId(i0 as u32)];
        let mut gram: Option<GramData> = None;
        let stop;

        if spec.has_coordinates() {
            let k_atoms = match &spec.jumps {
                Some(JumpLaw::FiniteAtoms { atoms, .. }) => atoms.len(),
                _ => 0,
            };
            let mut basis = vec![time_vector(), canonicalize(spec, idx)?];
            let mut n = 2usize;
            loop {
                if n > k_atoms + 2 {
                    // a finite-atom law with k atoms must reduce by k + 2
                    return Err(AlphabetError::Internal(format!(
                        "process `{}` did not reduce by order {}",
                        spec.name, n
                    )));
                }
                let target = power_bracket_vector(spec, idx, n)?;
                match reduce_against(&target, &basis) {
                    Reduction::Independent => {
                        letters.push(Letter::new(next_id, n as u32, format!("{}^{}", spec.name, n)));
                        provenance.push(Provenance::PowerBracket { process: idx, order: n });
                        vectors.push(Some(target.clone()));
                        order_ids.push(LetterId(next_id));
                        next_id += 1;
                        basis.push(target);
                        n += 1;
                    }
                    Reduction::Coefficients(_) => {
                        stop = Stop::Reduced;
                        break;
                    }
                }
            }
        } else {
            let mut n = 2usize;
            loop {
                if n as u32 > max_grade {
                    stop = Stop::Truncated;
                    truncations.push(TruncationNotice {
                        process: idx,
                        name: spec.name.clone(),
                        reason: TruncationReason::MaxGrade,
                        last_order: n - 1,
                    });
                    break;
                }
                match gram_data(spec, n) {
                    Err(TeugelsError::Levy(LevyError::MomentUnavailable { .. })) => {
                        stop = Stop::Truncated;
                        truncations.push(TruncationNotice {
                            process: idx,
                            name: spec.name.clone(),
                            reason: TruncationReason::MomentsExhausted,
                            last_order: n - 1,
                        });
                        break;
                    }
                    Err(e) => return Err(e.into()),
                    Ok(gd) => {
                        let degenerate = gd.norm(n).is_zero();
                        gram = Some(gd);
                        if degenerate {
                            stop = Stop::Reduced;
                            break;
                        }
                        letters.push(Letter::new(next_id, n as u32, format!("{}^{}", spec.name, n)));
                        provenance.push(Provenance::PowerBracket { process: idx, order: n });
                        vectors.push(None);
                        order_ids.push(LetterId(next_id));
                        next_id += 1;
                        n += 1;
                    }
                }
            }
        }
        procs.push(ProcState { order_ids, stop, gram });
    }

    let mut table = BracketTable::new(letters)?;
    for (i0, spec) in family.iter().enumerate() {
        let st = &procs[i0];
        let k_bar = st.order_ids.len();
        for n in 1..=k_bar {
            for m in n..=k_bar {
                let total = n + m;
                let poly = if total <= k_bar {
                    Poly::from_letter(st.order_ids[total - 1])
                } else {
                    match st.stop {
                        Stop::Reduced => expansion_poly(spec, i0 + 1, total, st, tau)?,
                        // graded quotient beyond the truncation order
                        Stop::Truncated => Poly::zero(),
                    }
                };
                table.set_entry(st.order_ids[n - 1], st.order_ids[m - 1], poly)?;
            }
        }
    }

    table
        .validate()
        .map_err(|e| AlphabetError::Internal(format!("bracket table validation failed: {e}")))?;

    Ok(Alphabet { family: family.to_vec(), max_grade, table, provenance, vectors, truncations })
}

/// Expansion of `[X]^(total)` over `{t} ∪ {retained letters}` through
/// whichever route the process uses.
fn expansion_poly(
    spec: &LevySpec,
    idx: usize,
    total: usize,
    st: &ProcState,
    tau: LetterId,
) -> Result<Poly, AlphabetError> {
    let coeffs: Vec<Rational> = if spec.has_coordinates() {
        let target = power_bracket_vector(spec, idx, total)?;
        let mut basis = vec![time_vector()];
        for (ord0, _) in st.order_ids.iter().enumerate() {
            basis.push(power_bracket_vector(spec, idx, ord0 + 1)?);
        }
        match reduce_against(&target, &basis) {
            Reduction::Coefficients(c) => c,
            Reduction::Independent => {
                return Err(AlphabetError::Internal(format!(
                    "bracket [{}]^({total}) did not reduce over the retained letters",
                    spec.name
                )))
            }
        }
    } else {
        let gd = st.gram.as_ref().ok_or_else(|| {
            AlphabetError::Internal("moment-route process lacks Gram data".into())
        })?;
        match span_expansion(spec, total, gd) {
            Ok(c) => c,
            Err(TeugelsError::Levy(LevyError::MomentUnavailable { order, .. })) => {
                return Err(AlphabetError::TruncationExceeded { name: spec.name.clone(), order })
            }
            Err(e) => return Err(e.into()),
        }
    };
    let mut p = Poly::zero();
    p.add_term(Word::single(tau), &coeffs[0]);
    for (ord0, id) in st.order_ids.iter().enumerate() {
        p.add_term(Word::single(*id), &coeffs[ord0 + 1]);
    }
    Ok(p)
}

impl Alphabet {
    pub fn family(&self) -> &[LevySpec] {
        &self.family
    }

    pub fn max_grade(&self) -> u32 {
        self.max_grade
    }

    pub fn table(&self) -> &BracketTable {
        &self.table
    }

    pub fn letters(&self) -> impl Iterator<Item = &Letter> {
        self.table.letters()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn truncations(&self) -> &[TruncationNotice] {
        &self.truncations
    }

    pub fn provenance(&self, id: LetterId) -> Result<&Provenance, AlphabetError> {
        self.provenance
            .get(id.0 as usize)
            .ok_or_else(|| AlphabetError::UnknownLetter(format!("#{}", id.0)))
    }

    /// Coordinate vector of the letter's semimartingale, when the
    /// underlying process has coordinates.
    pub fn vector(&self, id: LetterId) -> Result<Option<&ProcessVector>, AlphabetError> {
        self.vectors
            .get(id.0 as usize)
            .map(Option::as_ref)
            .ok_or_else(|| AlphabetError::UnknownLetter(format!("#{}", id.0)))
    }

    /// `[a, b]` as a table lookup; zero when absent.
    pub fn bracket_letters(&self, a: LetterId, b: LetterId) -> Result<Poly, AlphabetError> {
        self.table.entry(a, b).map_err(|e| match e {
            AlgebraError::UnknownLetter(l) => AlphabetError::UnknownLetter(l),
            other => other.into(),
        })
    }

    /// True iff every nonzero bracket entry is grade-homogeneous of the
    /// pair's total grade; otherwise the first violating pair in
    /// canonical order is the witness.
    pub fn is_graded(&self) -> (bool, Option<(LetterId, LetterId)>) {
        let ids: Vec<LetterId> = self.table.letters().map(|l| l.id).collect();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i..] {
                let Some(entry) = self.table.entry_ref(a, b) else { continue };
                let target = self.table.grade(a).unwrap_or(0) + self.table.grade(b).unwrap_or(0);
                for (w, _) in entry.terms() {
                    if self.table.word_grade(w).unwrap_or(0) != target {
                        return (false, Some((a, b)));
                    }
                }
            }
        }
        (true, None)
    }

    pub fn word_from_labels(&self, s: &str) -> Result<Word, AlphabetError> {
        self.table.word_from_labels(s).map_err(|e| match e {
            AlgebraError::UnknownLetter(l) => AlphabetError::UnknownLetter(l),
            other => other.into(),
        })
    }

    pub fn to_dto(&self) -> AlphabetDto {
        let (graded, witness) = self.is_graded();
        AlphabetDto {
            schema_version: 1,
            max_grade: self.max_grade,
            family: self.family.iter().map(spec_to_dto).collect(),
            letters: self
                .table
                .letters()
                .map(|l| LetterDto {
                    label: l.label.clone(),
                    grade: l.grade,
                    provenance: self.provenance[l.id.0 as usize].clone(),
                    vector: self.vectors[l.id.0 as usize].as_ref().map(vector_to_dto),
                })
                .collect(),
            table: self
                .table
                .nonzero_entries()
                .map(|(a, b, p)| EntryDto {
                    left: self.table.label(a),
                    right: self.table.label(b),
                    value: self.table.poly_to_dto(p),
                })
                .collect(),
            graded,
            graded_witness: witness
                .map(|(a, b)| (self.table.label(a), self.table.label(b))),
            truncations: self.truncations.clone(),
        }
    }

    /// Reconstructs an alphabet from its JSON form; the table is
    /// revalidated so a parsed alphabet satisfies the same invariants as
    /// a built one.
    pub fn from_dto(dto: &AlphabetDto) -> Result<Alphabet, AlphabetError> {
        let family: Vec<LevySpec> =
            dto.family.iter().map(spec_from_dto).collect::<Result<_, _>>()?;
        let mut letters = Vec::with_capacity(dto.letters.len());
        let mut provenance = Vec::with_capacity(dto.letters.len());
        let mut vectors = Vec::with_capacity(dto.letters.len());
        for (i, l) in dto.letters.iter().enumerate() {
            letters.push(Letter::new(i as u32, l.grade, l.label.clone()));
            provenance.push(l.provenance.clone());
            vectors.push(match &l.vector {
                None => None,
                Some(v) => Some(vector_from_dto(v).map_err(AlphabetError::Malformed)?),
            });
        }
        let mut table = BracketTable::new(letters)?;
        for e in &dto.table {
            let a = table
                .by_label(&e.left)
                .ok_or_else(|| AlphabetError::UnknownLetter(e.left.clone()))?;
            let b = table
                .by_label(&e.right)
                .ok_or_else(|| AlphabetError::UnknownLetter(e.right.clone()))?;
            let p = table.poly_from_dto(&e.value)?;
            table.set_entry(a, b, p)?;
        }
        table.validate()?;
        Ok(Alphabet {
            family,
            max_grade: dto.max_grade,
            table,
            provenance,
            vectors,
            truncations: dto.truncations.clone(),
        })
    }

    /// Multi-line human-readable listing.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str("letters:\n");
        for l in self.table.letters() {
            let prov = match &self.provenance[l.id.0 as usize] {
                Provenance::Generator { process } => format!("generator X{process}"),
                Provenance::Time => "time".to_string(),
                Provenance::PowerBracket { process, order } => {
                    format!("[X{process}]^({order})")
                }
            };
            let coords = match &self.vectors[l.id.0 as usize] {
                Some(v) => format!("  coords {v}"),
                None => String::new(),
            };
            out.push_str(&format!(
                "  {:<8} grade {:<2} {}{}\n",
                l.label, l.grade, prov, coords
            ));
        }
        out.push_str("bracket table (nonzero entries):\n");
        let mut any = false;
        for (a, b, p) in self.table.nonzero_entries() {
            any = true;
            out.push_str(&format!(
                "  [{}, {}] = {}\n",
                self.table.label(a),
                self.table.label(b),
                self.table.render_poly(p)
            ));
        }
        if !any {
            out.push_str("  (all zero)\n");
        }
        let (graded, witness) = self.is_graded();
        match witness {
            None => out.push_str(&format!("graded: {graded}\n")),
            Some((a, b)) => out.push_str(&format!(
                "graded: {graded} (witness: [{}, {}])\n",
                self.table.label(a),
                self.table.label(b)
            )),
        }
        for t in &self.truncations {
            let reason = match t.reason {
                TruncationReason::MaxGrade => "max_grade reached".to_string(),
                TruncationReason::MomentsExhausted => "moment data exhausted".to_string(),
            };
            out.push_str(&format!(
                "truncated: process `{}` at order {} ({reason}); the alphabet is the graded quotient at that order\n",
                t.name, t.last_order
            ));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LetterDto {
    pub label: String,
    pub grade: u32,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<std::collections::BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryDto {
    pub left: String,
    pub right: String,
    pub value: PolyDto,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlphabetDto {
    pub schema_version: u32,
    pub max_grade: u32,
    pub family: Vec<LevySpecDto>,
    pub letters: Vec<LetterDto>,
    pub table: Vec<EntryDto>,
    pub graded: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graded_witness: Option<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub truncations: Vec<TruncationNotice>,
}
