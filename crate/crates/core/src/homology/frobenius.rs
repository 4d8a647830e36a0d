//! The rank-two Frobenius algebra `A = F[X]/(X^2 - hX - u)` with counit
//! `e(1) = 0, e(X) = 1`, and the reduction of connected dotted surfaces to
//! dotted disks.

use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::field::{Field, FieldSpec};
use crate::error::{Error, Result};

/// Deformation parameters: `(0,0)` is Khovanov theory, `(0,1)` Lee theory,
/// `(1,0)` Bar-Natan theory. Values are read in the coefficient field.
///
/// Internally both parameters carry a formal variable of q-degree -2 (`h`)
/// resp. -4 (`u`), so every differential entry is homogeneous and its
/// filtration jump is recovered from the gradings of its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FrobeniusParams {
    pub h: i64,
    pub u: i64,
    pub field: FieldSpec,
}

impl FrobeniusParams {
    pub fn khovanov(field: FieldSpec) -> Self {
        FrobeniusParams { h: 0, u: 0, field }
    }

    pub fn lee(field: FieldSpec) -> Self {
        FrobeniusParams { h: 0, u: 1, field }
    }

    pub fn bar_natan(field: FieldSpec) -> Self {
        FrobeniusParams { h: 1, u: 0, field }
    }

    /// Lee theory, or Bar-Natan theory in characteristic 2 where Lee's
    /// algebra degenerates.
    pub fn for_s_invariant(field: FieldSpec) -> Self {
        if field.characteristic() == 2 {
            Self::bar_natan(field)
        } else {
            Self::lee(field)
        }
    }

    fn reduce(&self, n: i64) -> i64 {
        match self.field {
            FieldSpec::Rational => n,
            FieldSpec::Prime(p) => n.rem_euclid(p as i64),
        }
    }

    pub fn is_khovanov(&self) -> bool {
        self.reduce(self.h) == 0 && self.reduce(self.u) == 0
    }

    /// `X^2 - hX - u` has distinct roots, so deformed homology has rank 2.
    pub fn is_separable(&self) -> bool {
        let disc = self.h as i128 * self.h as i128 + 4 * self.u as i128;
        match self.field {
            FieldSpec::Rational => disc != 0,
            FieldSpec::Prime(p) => disc.rem_euclid(p as i128) != 0,
        }
    }

    pub(crate) fn validate_for_s(&self) -> Result<()> {
        if !self.is_separable() {
            return Err(Error::InvalidArgument(format!(
                "X^2 = {}X + {} is not separable over {}; no s-invariant",
                self.h, self.u, self.field
            )));
        }
        Ok(())
    }
}

/// Element `c0 + c1 X` of the algebra.
type Elem<F> = (F, F);

pub(crate) struct Algebra<F: Field> {
    pub h: F,
    pub u: F,
    zero: F,
    one: F,
    cache: FxHashMap<(u32, u32, u32), Arc<[F]>>,
}

impl<F: Field> Algebra<F> {
    pub fn new(h: F, u: F) -> Self {
        let zero = h.zero_like();
        let one = F::from_i64(1, h.ctx());
        Algebra {
            h,
            u,
            zero,
            one,
            cache: FxHashMap::default(),
        }
    }

    pub fn one(&self) -> F {
        self.one.clone()
    }

    fn mul(&self, a: &Elem<F>, b: &Elem<F>) -> Elem<F> {
        let x2 = a.1.mul(&b.1);
        (
            a.0.mul(&b.0).add(&x2.mul(&self.u)),
            a.0.mul(&b.1).add(&a.1.mul(&b.0)).add(&x2.mul(&self.h)),
        )
    }

    /// A connected surface with `dots` dots, genus `genus` and `boundary`
    /// boundary circles, written in the basis of dotted disks: entry `m` is
    /// the coefficient of the disk family whose `i`-th disk is dotted iff
    /// bit `i` of `m` is set.
    pub fn surface(&mut self, dots: u32, genus: u32, boundary: u32) -> Arc<[F]> {
        if let Some(v) = self.cache.get(&(dots, genus, boundary)) {
            return v.clone();
        }
        let x = (self.zero.clone(), self.one.clone());
        let two = F::from_i64(2, self.h.ctx());
        let handle = (self.h.neg(), two);
        let mut e = (self.one.clone(), self.zero.clone());
        for _ in 0..dots {
            e = self.mul(&e, &x);
        }
        for _ in 0..genus {
            e = self.mul(&e, &handle);
        }
        let v: Arc<[F]> = if boundary == 0 {
            // Closed surface: apply the counit.
            vec![e.1].into()
        } else {
            self.comultiply(e, boundary).into()
        };
        self.cache.insert((dots, genus, boundary), v.clone());
        v
    }

    /// Iterated comultiplication of `e` into `b` tensor factors.
    fn comultiply(&self, e: Elem<F>, b: u32) -> Vec<F> {
        let mut cur = vec![e.0, e.1];
        for k in 1..b {
            let top = 1usize << (k - 1);
            let mut next = vec![self.zero.clone(); 1 << (k + 1)];
            for (m, c) in cur.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let rest = m & !top;
                let new_bit = 1usize << k;
                if m & top == 0 {
                    // D(1) = 1(x)X + X(x)1 - h 1(x)1
                    next[rest | new_bit] = next[rest | new_bit].add(c);
                    next[rest | top] = next[rest | top].add(c);
                    next[rest] = next[rest].sub(&c.mul(&self.h));
                } else {
                    // D(X) = X(x)X + u 1(x)1
                    next[rest | top | new_bit] = next[rest | top | new_bit].add(c);
                    next[rest] = next[rest].add(&c.mul(&self.u));
                }
            }
            cur = next;
        }
        cur
    }
}
