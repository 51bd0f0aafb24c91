//! Bounded regularity verdicts, order admissibility, the four-in-a-row
//! elimination engine and the appendix status tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{pow, valuation};
use crate::forms::{enumerate_reduced_by_disc, RepresentedSet, TernaryForm};
use crate::localdata::{genus_symbol, GenusSymbol};
use crate::spinor::{partition_spinor_genera, r_p, spinor_genus_count, SpinorError};

/// Exhaustive search bound: every spinor regular form below it is known.
pub const JAGY_BOUND: i64 = 575_000;

/// Default representation bound for candidate verdicts.
pub const DEFAULT_BOUND: u64 = 5000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegularityError {
    #[error("no order bounds for p = {0}")]
    UnsupportedPrime(i64),
    #[error("window at t = {t} does not exceed the threshold {threshold} for p = {p}")]
    ThresholdViolation { p: i64, t: u32, threshold: u32 },
    #[error("d0 = {d0} is not coprime to p = {p}")]
    InvalidFamily { p: i64, d0: i64 },
    #[error(transparent)]
    Spinor(#[from] SpinorError),
}

/// All reduced classes in the genus of `f`.
pub fn genus_classes(f: &TernaryForm) -> Vec<TernaryForm> {
    let sym = genus_symbol(f);
    enumerate_reduced_by_disc(f.discriminant())
        .into_iter()
        .filter(|g| genus_symbol(g) == sym)
        .collect()
}

/// The classes of discriminant `disc`, grouped by genus.
pub fn genera_of_disc(disc: i64) -> BTreeMap<GenusSymbol, Vec<TernaryForm>> {
    let mut out: BTreeMap<GenusSymbol, Vec<TernaryForm>> = BTreeMap::new();
    for f in enumerate_reduced_by_disc(disc) {
        out.entry(genus_symbol(&f)).or_default().push(f);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateVerdict {
    pub form: TernaryForm,
    pub bound: u64,
    pub regular_candidate: bool,
    pub spinor_regular_candidate: bool,
    /// Least `n ≤ bound` represented by the spinor genus (or, if the form is
    /// a spinor regular candidate, by the genus) but not by the form.
    pub witness: Option<u64>,
}

fn union_of<'a>(sets: impl Iterator<Item = &'a RepresentedSet>, bound: u64) -> RepresentedSet {
    let mut u = RepresentedSet::empty(bound);
    for s in sets {
        u.union_with(s);
    }
    u
}

/// Verdicts for every class of one genus.
pub fn genus_verdicts(
    classes: &[TernaryForm],
    bound: u64,
) -> Result<Vec<CandidateVerdict>, RegularityError> {
    let sets: Vec<RepresentedSet> = classes.iter().map(|c| c.represented_set(bound)).collect();
    let whole = union_of(sets.iter(), bound);
    let regular_witness: Vec<Option<u64>> =
        sets.iter().map(|s| s.first_missing_from(&whole)).collect();
    let mut spinor_witness: Vec<Option<u64>> = vec![None; classes.len()];
    if regular_witness.iter().any(|w| w.is_some()) && spinor_genus_count(classes)? == 1 {
        spinor_witness = regular_witness.clone();
    } else if regular_witness.iter().any(|w| w.is_some()) {
        let part = partition_spinor_genera(classes)?;
        for group in &part.groups {
            let members: Vec<usize> = group
                .iter()
                .map(|&i| {
                    classes
                        .iter()
                        .position(|c| c.canonical() == part.classes[i])
                        .expect("same classes")
                })
                .collect();
            let u = union_of(members.iter().map(|&i| &sets[i]), bound);
            for &i in &members {
                spinor_witness[i] = sets[i].first_missing_from(&u);
            }
        }
    }
    Ok(classes
        .iter()
        .enumerate()
        .map(|(i, f)| CandidateVerdict {
            form: *f,
            bound,
            regular_candidate: regular_witness[i].is_none(),
            spinor_regular_candidate: spinor_witness[i].is_none(),
            witness: spinor_witness[i].or(regular_witness[i]),
        })
        .collect())
}

/// Verdict for `f` against its genus and spinor genus up to `bound`.
pub fn candidate_verdict(f: &TernaryForm, bound: u64) -> Result<CandidateVerdict, RegularityError> {
    let c = f.canonical();
    let classes = genus_classes(&c);
    let verdicts = genus_verdicts(&classes, bound)?;
    let mut v = verdicts
        .into_iter()
        .find(|v| v.form == c)
        .expect("f lies in its genus");
    v.form = *f;
    Ok(v)
}

fn verdicts_of_genera(
    genera: Vec<Vec<TernaryForm>>,
    bound: u64,
) -> Result<Vec<CandidateVerdict>, RegularityError> {
    let mut out = Vec::new();
    for classes in genera {
        if classes.len() == 1 {
            out.push(CandidateVerdict {
                form: classes[0],
                bound,
                regular_candidate: true,
                spinor_regular_candidate: true,
                witness: None,
            });
        } else {
            out.extend(genus_verdicts(&classes, bound)?);
        }
    }
    Ok(out)
}

/// Spinor regular candidates with discriminant in `lo..=hi`, sorted by
/// discriminant and form. `jobs > 1` spreads discriminants over a pool.
pub fn search_range(
    lo: i64,
    hi: i64,
    bound: u64,
    jobs: usize,
) -> Result<Vec<CandidateVerdict>, RegularityError> {
    search_range_with(lo, hi, bound, jobs, &|d| {
        genera_of_disc(d).into_values().collect()
    })
}

/// As [`search_range`], with the genera of each discriminant supplied by
/// `genera` (e.g. from a cache).
pub fn search_range_with(
    lo: i64,
    hi: i64,
    bound: u64,
    jobs: usize,
    genera: &(dyn Fn(i64) -> Vec<Vec<TernaryForm>> + Sync),
) -> Result<Vec<CandidateVerdict>, RegularityError> {
    let per_disc = |d: i64| -> Result<Vec<CandidateVerdict>, RegularityError> {
        Ok(verdicts_of_genera(genera(d), bound)?
            .into_iter()
            .filter(|v| v.spinor_regular_candidate)
            .collect())
    };
    let chunks: Vec<Vec<CandidateVerdict>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (lo..=hi)
                .into_par_iter()
                .map(per_disc)
                .collect::<Result<_, _>>()
        })?
    } else {
        (lo..=hi).map(per_disc).collect::<Result<_, _>>()?
    };
    let mut out: Vec<CandidateVerdict> = chunks.into_iter().flatten().collect();
    out.sort_by_key(|v| (v.form.discriminant(), v.form.coeffs()));
    Ok(out)
}

/// Regular candidates of discriminant `disc`, checked first at small
/// bounds so that most genera drop out cheaply.
pub fn regular_candidates(disc: i64, bound: u64) -> Vec<TernaryForm> {
    let mut out = Vec::new();
    for classes in genera_of_disc(disc).into_values() {
        if classes.len() == 1 {
            out.push(classes[0]);
            continue;
        }
        // A regular form attains the least value of its genus.
        let least = classes.iter().map(|c| c.minimum()).min().unwrap();
        let mut alive: Vec<usize> = (0..classes.len())
            .filter(|&i| classes[i].minimum() == least)
            .collect();
        let mut b = 64;
        while !alive.is_empty() {
            let b_now = b.min(bound);
            let sets: Vec<RepresentedSet> =
                classes.iter().map(|c| c.represented_set(b_now)).collect();
            let whole = union_of(sets.iter(), b_now);
            alive.retain(|&i| sets[i].is_superset_of(&whole));
            if b_now == bound {
                break;
            }
            b *= 4;
        }
        out.extend(alive.into_iter().map(|i| classes[i]));
    }
    out.sort();
    out
}

/// Admissible `(β, γ)` for `L_p ≅ ⟨a, p^β b, p^γ c⟩` with `p | dL` when `L`
/// is spinor regular.
pub fn admissible_ords(p: i64) -> Result<BTreeSet<(u32, u32)>, RegularityError> {
    let (g0, g1): (u32, u32) = match p {
        3 => (4, 4),
        5 => (2, 2),
        7 => (1, 2),
        11 => (1, 2),
        13 => (1, 1),
        _ => return Err(RegularityError::UnsupportedPrime(p)),
    };
    let mut out = BTreeSet::new();
    for gamma in 1..=g0 {
        out.insert((0, gamma));
    }
    for gamma in 1..=g1 {
        out.insert((1, gamma));
    }
    match p {
        7 => {
            out.insert((2, 3));
        }
        3 => {
            for beta in 2..=5 {
                for gamma in beta..=8 {
                    out.insert((beta, gamma));
                }
            }
        }
        _ => {}
    }
    Ok(out)
}

/// Whether `ord_p(dL) = ord` is possible for a spinor regular lattice.
pub fn ord_admissible(p: i64, ord: u32) -> Result<bool, RegularityError> {
    Ok(ord == 0 || admissible_ords(p)?.iter().any(|&(b, g)| b + g == ord))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DiscStatus {
    /// Discriminant of a regular form.
    R,
    /// Discriminant of a spinor regular form that is not regular.
    S,
    /// Excluded by the order bounds.
    X,
    /// Above the search bound.
    Star,
    /// Below the search bound and in neither set.
    Dash,
    /// Removed by the four-in-a-row elimination.
    Eliminated,
}

impl DiscStatus {
    pub fn symbol(&self) -> &'static str {
        match self {
            DiscStatus::R => "r",
            DiscStatus::S => "s",
            DiscStatus::X => "x",
            DiscStatus::Star => "*",
            DiscStatus::Dash => "-",
            DiscStatus::Eliminated => "e",
        }
    }
}

/// The statuses of one discriminant; `r` and `s` may appear together and
/// with `*`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StatusSet(pub BTreeSet<DiscStatus>);

impl StatusSet {
    pub fn of(statuses: &[DiscStatus]) -> Self {
        StatusSet(statuses.iter().copied().collect())
    }

    pub fn contains(&self, s: DiscStatus) -> bool {
        self.0.contains(&s)
    }

    /// Known to lie outside `𝒮 ∪ ℛ`.
    pub fn outside_s_and_r(&self) -> bool {
        !self.0.is_empty()
            && self
                .0
                .iter()
                .all(|s| matches!(s, DiscStatus::Dash | DiscStatus::X))
    }

    /// Parses the appendix notation: `r`, `r,s`, `r*`, `-`, ...
    pub fn parse(text: &str) -> Option<Self> {
        let mut out = BTreeSet::new();
        for ch in text.chars() {
            let s = match ch {
                'r' => DiscStatus::R,
                's' => DiscStatus::S,
                'x' => DiscStatus::X,
                '*' => DiscStatus::Star,
                '-' => DiscStatus::Dash,
                'e' => DiscStatus::Eliminated,
                ',' | ' ' => continue,
                _ => return None,
            };
            out.insert(s);
        }
        (!out.is_empty()).then_some(StatusSet(out))
    }
}

impl fmt::Display for StatusSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(|s| s.symbol()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Status of the discriminant `n` given the sets `ℛ`, `𝒮` and the search bound.
pub fn disc_status(
    n: i64,
    regular: &BTreeSet<i64>,
    spinor: &BTreeSet<i64>,
    search_bound: i64,
) -> StatusSet {
    for p in [3, 5, 7, 11, 13] {
        let ord = valuation(n as i128, p as i128);
        if !ord_admissible(p, ord).unwrap() {
            return StatusSet::of(&[DiscStatus::X]);
        }
    }
    let mut out = BTreeSet::new();
    if n > search_bound {
        out.insert(DiscStatus::Star);
    }
    if regular.contains(&n) {
        out.insert(DiscStatus::R);
    }
    if spinor.contains(&n) {
        out.insert(DiscStatus::S);
    }
    if out.is_empty() {
        out.insert(DiscStatus::Dash);
    }
    StatusSet(out)
}

fn elimination_threshold(p: i64) -> Result<u32, RegularityError> {
    if p == 2 {
        return Ok(2);
    }
    let r = r_p(p).map_err(|_| RegularityError::UnsupportedPrime(p))?;
    Ok(r.saturating_sub(3))
}

/// Applies the four-in-a-row rule to the family `p^t·d0`: if four
/// consecutive exponents above the threshold are known to lie outside
/// `𝒮 ∪ ℛ`, every exponent from the first of them on is marked
/// eliminated (cells carrying `r` or `s` are left as they are).
pub fn eliminate_family(
    p: i64,
    d0: i64,
    known: &BTreeMap<u32, StatusSet>,
) -> Result<BTreeMap<u32, StatusSet>, RegularityError> {
    if d0 <= 0 || d0 % p == 0 {
        return Err(RegularityError::InvalidFamily { p, d0 });
    }
    let threshold = elimination_threshold(p)?;
    let outside = |t: u32| {
        known
            .get(&t)
            .is_some_and(|s| s.outside_s_and_r() || s.contains(DiscStatus::Eliminated))
    };
    let windows: Vec<u32> = known
        .keys()
        .copied()
        .filter(|&t| (t..t + 4).all(outside))
        .collect();
    let mut out = known.clone();
    match windows.iter().find(|&&t| t > threshold) {
        Some(&t) => {
            for (_, s) in out.range_mut(t..) {
                if !s.contains(DiscStatus::R) && !s.contains(DiscStatus::S) {
                    s.0.insert(DiscStatus::Eliminated);
                }
            }
            Ok(out)
        }
        None => match windows.first() {
            Some(&t) => Err(RegularityError::ThresholdViolation { p, t, threshold }),
            None => Ok(out),
        },
    }
}

/// One block of an appendix table: rows `row_prime^k`, columns
/// `col_prime^m`, every cell multiplied by `multiplier`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSpec {
    pub table: u32,
    pub row_prime: i64,
    pub row_exps: Vec<u32>,
    pub col_prime: i64,
    pub col_exps: Vec<u32>,
    /// `(prime, exponent)` of the fixed factor, if any.
    pub multiplier: Option<(i64, u32)>,
}

impl TableSpec {
    pub fn title(&self) -> String {
        let r = letter(self.row_prime, true);
        let c = letter(self.col_prime, false);
        let mut t = format!("{}^{}·{}^{}", self.row_prime, r, self.col_prime, c);
        if let Some((q, e)) = self.multiplier {
            if e == 1 {
                t += &format!("·{q}");
            } else {
                t += &format!("·{q}^{e}");
            }
        }
        t
    }

    fn value(&self, k: u32, m: u32) -> i64 {
        let mult = self.multiplier.map_or(1, |(q, e)| pow(q as i128, e) as i64);
        (pow(self.row_prime as i128, k) * pow(self.col_prime as i128, m)) as i64 * mult
    }
}

fn letter(_p: i64, row: bool) -> char {
    if row {
        'k'
    } else {
        'm'
    }
}

fn power_label(p: i64, e: u32) -> String {
    if e == 1 {
        p.to_string()
    } else {
        format!("{p}^{e}")
    }
}

/// The blocks of appendix Tables 2–7, in order.
pub fn appendix_specs() -> Vec<TableSpec> {
    let spec = |table, rp, rows: u32, cp, cols: u32, mult| TableSpec {
        table,
        row_prime: rp,
        row_exps: (1..=rows).collect(),
        col_prime: cp,
        col_exps: (1..=cols).collect(),
        multiplier: mult,
    };
    let mut out = vec![
        spec(2, 3, 9, 5, 3, None),
        spec(3, 3, 7, 7, 5, None),
        spec(4, 2, 17, 3, 9, None),
    ];
    for (j, rows) in [(1, 14), (2, 14), (3, 12)] {
        out.push(spec(5, 2, rows, 3, 9, Some((5, j))));
    }
    for (j, rows) in [(1, 14), (2, 14), (3, 12), (5, 12)] {
        out.push(spec(6, 2, rows, 3, 9, Some((7, j))));
    }
    for j in [1, 2, 3, 5] {
        out.push(spec(7, 2, 12, 5, 3, Some((7, j))));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusTable {
    pub spec: TableSpec,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: Vec<Vec<i64>>,
    pub cells: Vec<Vec<StatusSet>>,
}

pub fn build_status_table(
    spec: &TableSpec,
    regular: &BTreeSet<i64>,
    spinor: &BTreeSet<i64>,
    search_bound: i64,
) -> StatusTable {
    let values: Vec<Vec<i64>> = spec
        .row_exps
        .iter()
        .map(|&k| spec.col_exps.iter().map(|&m| spec.value(k, m)).collect())
        .collect();
    let cells = values
        .iter()
        .map(|row| {
            row.iter()
                .map(|&n| disc_status(n, regular, spinor, search_bound))
                .collect()
        })
        .collect();
    StatusTable {
        spec: spec.clone(),
        row_labels: spec
            .row_exps
            .iter()
            .map(|&k| power_label(spec.row_prime, k))
            .collect(),
        col_labels: spec
            .col_exps
            .iter()
            .map(|&m| power_label(spec.col_prime, m))
            .collect(),
        values,
        cells,
    }
}

impl StatusTable {
    pub fn render_ascii(&self) -> String {
        let title = self.spec.title();
        let w0 = self
            .row_labels
            .iter()
            .map(|l| l.chars().count())
            .chain([title.chars().count()])
            .max()
            .unwrap();
        let widths: Vec<usize> = (0..self.col_labels.len())
            .map(|j| {
                self.cells
                    .iter()
                    .map(|r| r[j].to_string().len())
                    .chain([self.col_labels[j].chars().count()])
                    .max()
                    .unwrap()
            })
            .collect();
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - s.chars().count()));
        let mut out = String::new();
        let header: Vec<String> = self
            .col_labels
            .iter()
            .zip(&widths)
            .map(|(l, &w)| pad(l, w))
            .collect();
        let line = format!("{} | {}", pad(&title, w0), header.join(" "));
        let rule = "-".repeat(line.chars().count());
        out += &format!("{}\n{}\n", line.trim_end(), rule);
        for (label, row) in self.row_labels.iter().zip(&self.cells) {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, &w)| pad(&c.to_string(), w))
                .collect();
            out += &format!(
                "{}\n",
                format!("{} | {}", pad(label, w0), cells.join(" ")).trim_end()
            );
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("table,block,row,col,value,status\n");
        for (i, row) in self.cells.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out += &format!(
                    "{},{},{},{},{},\"{}\"\n",
                    self.spec.table,
                    self.spec.title(),
                    self.row_labels[i],
                    self.col_labels[j],
                    self.values[i][j],
                    c
                );
            }
        }
        out
    }
}
