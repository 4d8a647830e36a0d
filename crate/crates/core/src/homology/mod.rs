//! Khovanov and Lee homology of knot diagrams by scanning: crossings are
//! added one at a time to a complex over the dotted cobordism category,
//! closed circles are delooped and isomorphisms cancelled as soon as they
//! appear.

mod complex;
mod field;
mod frobenius;
mod jones;
mod scan;
mod tangle;

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

pub use complex::ScanComplex;
pub use field::{Field, FieldSpec, Fp, Rational};
pub use frobenius::FrobeniusParams;
pub use jones::{kauffman_bracket_jones, LaurentPoly};
pub use scan::scan_order;

use complex::Budget;

use crate::diagram::{Crossing, PlanarDiagram};
use crate::error::{Error, Result};

/// Tuning knobs shared by all homology computations.
#[derive(Clone, Debug)]
pub struct ScanOptions {
    /// Abort once the differential holds more nonzero entries than this.
    pub max_entries: usize,
    pub time_limit: Option<Duration>,
    /// Crossing order to scan in; the greedy order is used when `None`.
    pub order: Option<Vec<usize>>,
    /// Verify `d∘d = 0` and the gradings after every step (slow).
    pub check_invariants: bool,
    /// Log one line per scan step at info level.
    pub trace: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            max_entries: 5_000_000,
            time_limit: None,
            order: None,
            check_invariants: false,
            trace: false,
        }
    }
}

impl ScanOptions {
    fn budget(&self) -> Budget {
        Budget {
            max_entries: self.max_entries,
            deadline: self.time_limit.map(|t| Instant::now() + t),
        }
    }
}

/// Dimensions of a bigraded vector space, indexed by (homological, quantum)
/// degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KhTable {
    dims: BTreeMap<(i32, i32), usize>,
}

impl KhTable {
    pub fn from_gradings(gradings: impl IntoIterator<Item = (i32, i32)>) -> Self {
        let mut dims = BTreeMap::new();
        for g in gradings {
            *dims.entry(g).or_insert(0) += 1;
        }
        KhTable { dims }
    }

    pub fn get(&self, i: i32, j: i32) -> usize {
        self.dims.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), usize)> + '_ {
        self.dims.iter().map(|(&k, &v)| (k, v))
    }

    /// `Σ (-1)^i q^j dim`.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.iter()
                .map(|((i, j), d)| (j, if i % 2 == 0 { d as i64 } else { -(d as i64) })),
        )
    }

    /// The table under `(i, j) -> (-i, -j)`.
    pub fn mirrored(&self) -> Self {
        KhTable {
            dims: self
                .dims
                .iter()
                .map(|(&(i, j), &d)| ((-i, -j), d))
                .collect(),
        }
    }
}

impl fmt::Display for KhTable {
    /// One `i j dim` line per nonzero bigrading.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((i, j), d) in self.iter() {
            writeln!(f, "{i} {j} {d}")?;
        }
        Ok(())
    }
}

/// The s-invariant, normalised so that positive knots have negative `s`
/// (`s(T(2,3)) = -2`), together with the filtration levels of the two
/// surviving Lee generators in the same normalisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SInvariantResult {
    pub s: i32,
    pub s_min: i32,
    pub s_max: i32,
    pub field: FieldSpec,
}

impl SInvariantResult {
    /// `ν = -s/2`.
    pub fn nu(&self) -> i32 {
        -self.s / 2
    }
}

struct Outcome {
    kh: KhTable,
    survivors: Option<Vec<(i32, i32)>>,
}

fn validate_order(d: &PlanarDiagram, order: &[usize]) -> Result<()> {
    let mut seen = vec![false; d.crossing_count()];
    for &c in order {
        if c >= seen.len() || std::mem::replace(&mut seen[c], true) {
            return Err(Error::InvalidArgument(format!(
                "scan order {order:?} is not a permutation"
            )));
        }
    }
    if order.len() != seen.len() {
        return Err(Error::InvalidArgument(format!(
            "scan order {order:?} is not a permutation"
        )));
    }
    Ok(())
}

impl<F: Field> ScanComplex<F> {
    /// Adds one crossing, checking the budget and, if requested, the
    /// complex invariants afterwards.
    pub fn scan_step(&mut self, x: &Crossing, opts: &ScanOptions) -> Result<()> {
        self.add_crossing(x, &opts.budget())?;
        if opts.check_invariants {
            self.check_invariants()?;
        }
        Ok(())
    }
}

fn run<F: Field>(
    d: &PlanarDiagram,
    h: F,
    u: F,
    filtered: bool,
    opts: &ScanOptions,
) -> Result<Outcome> {
    if d.crossing_count() == 0 {
        let g = [(0, -1), (0, 1)];
        return Ok(Outcome {
            kh: KhTable::from_gradings(g),
            survivors: filtered.then(|| g.to_vec()),
        });
    }
    let order = match &opts.order {
        Some(o) => {
            validate_order(d, o)?;
            o.clone()
        }
        None => scan_order(d),
    };
    let budget = opts.budget();
    let mut c = ScanComplex::new(h, u);
    for (step, &i) in order.iter().enumerate() {
        c.add_crossing(&d.crossings()[i], &budget)?;
        if opts.check_invariants {
            c.check_invariants()?;
        }
        let line = format!(
            "scan step {step}: crossing {i}, boundary {}, objects {}, entries {}",
            c.boundary().len(),
            c.object_count(),
            c.entry_count()
        );
        if opts.trace {
            log::info!("{line}");
        } else {
            log::debug!("{line}");
        }
    }
    let kh = KhTable::from_gradings(c.gradings());
    let survivors = if filtered {
        Some(c.reduce_filtered(&budget)?)
    } else {
        None
    };
    Ok(Outcome { kh, survivors })
}

fn dispatch(
    d: &PlanarDiagram,
    params: &FrobeniusParams,
    filtered: bool,
    opts: &ScanOptions,
) -> Result<Outcome> {
    match params.field {
        FieldSpec::Rational => run(
            d,
            Rational::from_i64(params.h, ()),
            Rational::from_i64(params.u, ()),
            filtered,
            opts,
        ),
        FieldSpec::Prime(p) => run(
            d,
            Fp::new(params.h, p),
            Fp::new(params.u, p),
            filtered,
            opts,
        ),
    }
}

/// Khovanov homology over `field`.
pub fn kh_homology(d: &PlanarDiagram, field: FieldSpec) -> Result<KhTable> {
    kh_homology_with(d, field, &ScanOptions::default())
}

pub fn kh_homology_with(
    d: &PlanarDiagram,
    field: FieldSpec,
    opts: &ScanOptions,
) -> Result<KhTable> {
    Ok(dispatch(d, &FrobeniusParams::khovanov(field), false, opts)?.kh)
}

/// Rasmussen's s-invariant over `field`, from Lee theory (Bar-Natan theory
/// in characteristic 2).
pub fn s_invariant(d: &PlanarDiagram, field: FieldSpec) -> Result<SInvariantResult> {
    s_invariant_with(
        d,
        &FrobeniusParams::for_s_invariant(field),
        &ScanOptions::default(),
    )
}

pub fn s_invariant_with(
    d: &PlanarDiagram,
    params: &FrobeniusParams,
    opts: &ScanOptions,
) -> Result<SInvariantResult> {
    params.validate_for_s()?;
    let out = dispatch(d, params, true, opts)?;
    s_from_survivors(out.survivors.unwrap_or_default(), params.field)
}

/// Survivors sit at quantum levels `s' ± 1` where `s'` is the invariant in
/// the convention where positive knots are positive; `s = -s'`.
fn s_from_survivors(mut surv: Vec<(i32, i32)>, field: FieldSpec) -> Result<SInvariantResult> {
    surv.sort_unstable();
    match surv.as_slice() {
        [(0, q1), (0, q2)] if q2 - q1 == 2 => Ok(SInvariantResult {
            s: -(q1 + q2) / 2,
            s_min: -q2,
            s_max: -q1,
            field,
        }),
        _ => Err(Error::InternalInvariantViolation(format!(
            "deformed homology has generators at {surv:?}"
        ))),
    }
}

/// Khovanov homology and s from one run of Lee (or Bar-Natan) theory.
pub fn kh_and_s(
    d: &PlanarDiagram,
    field: FieldSpec,
    opts: &ScanOptions,
) -> Result<(KhTable, SInvariantResult)> {
    let params = FrobeniusParams::for_s_invariant(field);
    let out = dispatch(d, &params, true, opts)?;
    Ok((
        out.kh,
        s_from_survivors(out.survivors.unwrap_or_default(), field)?,
    ))
}
