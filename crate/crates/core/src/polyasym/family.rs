use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::multiindex::{IndexSubset, MultiIndex, MAX_VARIABLES};
use super::point::Polar;

type Evaluator = dyn Fn(&[Polar]) -> Complex64 + Send + Sync;
type DerivativeEvaluator = dyn Fn(&MultiIndex, &[Polar]) -> Complex64 + Send + Sync;

/// A holomorphic function on a polysector, given by an evaluator and
/// optionally by an evaluator of its partial derivatives.
///
/// Evaluators must be callable from several threads at once.
#[derive(Clone)]
pub struct FunctionHandle {
    eval: Arc<Evaluator>,
    deriv: Option<Arc<DerivativeEvaluator>>,
    opening: Vec<f64>,
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("opening", &self.opening)
            .field("derivative", &self.deriv.is_some())
            .finish()
    }
}

impl FunctionHandle {
    pub fn new<F>(opening: Vec<f64>, f: F) -> Self
    where
        F: Fn(&[Polar]) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            deriv: None,
            opening,
        }
    }

    pub fn with_derivative<D>(mut self, d: D) -> Self
    where
        D: Fn(&MultiIndex, &[Polar]) -> Complex64 + Send + Sync + 'static,
    {
        self.deriv = Some(Arc::new(d));
        self
    }

    /// The zero function, with zero derivatives.
    pub fn zero(opening: Vec<f64>) -> Self {
        Self::new(opening, |_| Complex64::new(0.0, 0.0))
            .with_derivative(|_, _| Complex64::new(0.0, 0.0))
    }

    /// `a f + b g`; carries a derivative when both do.
    pub fn linear(a: Complex64, f: &Self, b: Complex64, g: &Self) -> Result<Self> {
        if f.opening != g.opening {
            return Err(Error::Invalid(
                "linear combination of functions on different polysectors".into(),
            ));
        }
        let (fe, ge) = (f.eval.clone(), g.eval.clone());
        let mut h = Self::new(f.opening.clone(), move |z| a * fe(z) + b * ge(z));
        if let (Some(fd), Some(gd)) = (f.deriv.clone(), g.deriv.clone()) {
            h = h.with_derivative(move |al, z| a * fd(al, z) + b * gd(al, z));
        }
        Ok(h)
    }

    pub fn arity(&self) -> usize {
        self.opening.len()
    }

    pub fn opening(&self) -> &[f64] {
        &self.opening
    }

    pub fn has_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    fn check_point(&self, z: &[Polar]) -> Result<()> {
        if z.len() != self.opening.len() {
            return Err(Error::Invalid(alloc::format!(
                "function of {} variables evaluated at a point with {} components",
                self.opening.len(),
                z.len()
            )));
        }
        match z
            .iter()
            .zip(&self.opening)
            .find(|(p, g)| !p.in_sector(**g, 1.0))
        {
            Some((p, _)) => Err(Error::Domain {
                what: "point argument outside the sector",
                value: p.arg,
            }),
            None => Ok(()),
        }
    }

    pub fn eval(&self, z: &[Polar]) -> Result<Complex64> {
        self.check_point(z)?;
        Ok((self.eval)(z))
    }

    pub fn derivative(&self, alpha: &MultiIndex, z: &[Polar]) -> Result<Complex64> {
        let d = self.deriv.as_ref().ok_or(Error::MissingDerivative)?;
        self.check_point(z)?;
        if alpha.len() != z.len() {
            return Err(Error::Invalid(
                "derivative order and point have different lengths".into(),
            ));
        }
        Ok(d(alpha, z))
    }

    pub(crate) fn eval_unchecked(&self, z: &[Polar]) -> Complex64 {
        (self.eval)(z)
    }

    pub(crate) fn derivative_unchecked(
        &self,
        alpha: &MultiIndex,
        z: &[Polar],
    ) -> Option<Complex64> {
        self.deriv.as_ref().map(|d| d(alpha, z))
    }
}

/// A family entry: a function of the complementary variables, or a number
/// when the subset is the full index set.
#[derive(Debug, Clone)]
pub enum FamilyEntry {
    Function(FunctionHandle),
    Scalar(Complex64),
}

/// Finite part of a total family `(f_{alpha_J})`, keyed by the subset `J`
/// and a multi-index over `J`, with `|alpha_J| <= depth`.
#[derive(Debug, Clone)]
pub struct TotalFamily {
    opening: Vec<f64>,
    depth: u32,
    entries: BTreeMap<(IndexSubset, MultiIndex), FamilyEntry>,
}

pub(crate) fn entry_label(j: &IndexSubset, alpha_j: &MultiIndex) -> String {
    alloc::format!("(J={j}, alpha={alpha_j})")
}

impl TotalFamily {
    pub fn new(opening: Vec<f64>, depth: u32) -> Result<Self> {
        if opening.is_empty() || opening.len() > MAX_VARIABLES {
            return Err(Error::Invalid(alloc::format!(
                "number of variables {} outside 1..={MAX_VARIABLES}",
                opening.len()
            )));
        }
        if let Some(g) = opening.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
            return Err(Error::Domain {
                what: "gamma",
                value: *g,
            });
        }
        Ok(Self {
            opening,
            depth,
            entries: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.opening.len()
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn opening(&self) -> &[f64] {
        &self.opening
    }

    /// Openings of the factors indexed by `idx`.
    pub fn sub_opening(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().map(|&j| self.opening[j]).collect()
    }

    /// Inserts or replaces an entry after checking its shape.
    pub fn insert(
        &mut self,
        j: IndexSubset,
        alpha_j: MultiIndex,
        entry: FamilyEntry,
    ) -> Result<()> {
        if j.n() != self.n() {
            return Err(Error::Invalid(alloc::format!(
                "subset {j} is not over {} variables",
                self.n()
            )));
        }
        if alpha_j.len() != j.len() {
            return Err(Error::Invalid(alloc::format!(
                "multi-index {alpha_j} does not match subset {j}"
            )));
        }
        let ok = match &entry {
            FamilyEntry::Scalar(_) => j.is_full(),
            FamilyEntry::Function(f) => {
                !j.is_full() && f.opening() == self.sub_opening(&j.complement_indices()).as_slice()
            }
        };
        if !ok {
            return Err(Error::EntryKind {
                entry: entry_label(&j, &alpha_j),
            });
        }
        self.entries.insert((j, alpha_j), entry);
        Ok(())
    }

    pub fn get(&self, j: &IndexSubset, alpha_j: &MultiIndex) -> Result<&FamilyEntry> {
        self.entries
            .get(&(*j, alpha_j.clone()))
            .ok_or_else(|| Error::IncompleteFamily {
                entry: entry_label(j, alpha_j),
            })
    }

    pub fn function(&self, j: &IndexSubset, alpha_j: &MultiIndex) -> Result<&FunctionHandle> {
        match self.get(j, alpha_j)? {
            FamilyEntry::Function(f) => Ok(f),
            FamilyEntry::Scalar(_) => Err(Error::EntryKind {
                entry: entry_label(j, alpha_j),
            }),
        }
    }

    pub fn scalar(&self, alpha: &MultiIndex) -> Result<Complex64> {
        let full = IndexSubset::full(self.n())?;
        match self.get(&full, alpha)? {
            FamilyEntry::Scalar(c) => Ok(*c),
            FamilyEntry::Function(_) => Err(Error::EntryKind {
                entry: entry_label(&full, alpha),
            }),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&IndexSubset, &MultiIndex, &FamilyEntry)> {
        self.entries.iter().map(|((j, a), e)| (j, a, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Fails on the first `(J, alpha_J)` with `|alpha_J| <= depth` that is absent.
    pub fn check_coverage(&self) -> Result<()> {
        for j in IndexSubset::all(self.n())? {
            for a in MultiIndex::up_to_modulus(j.len(), self.depth) {
                self.get(&j, &a)?;
            }
        }
        Ok(())
    }

    /// `a F + b G` entrywise; both families must share keys and polysector.
    pub fn linear(a: Complex64, f: &Self, b: Complex64, g: &Self) -> Result<Self> {
        if f.opening != g.opening {
            return Err(Error::Invalid("families on different polysectors".into()));
        }
        let mut out = Self::new(f.opening.clone(), f.depth.min(g.depth))?;
        for ((j, al), e) in &f.entries {
            let other = g.get(j, al)?;
            let entry = match (e, other) {
                (FamilyEntry::Scalar(x), FamilyEntry::Scalar(y)) => {
                    FamilyEntry::Scalar(a * x + b * y)
                }
                (FamilyEntry::Function(x), FamilyEntry::Function(y)) => {
                    FamilyEntry::Function(FunctionHandle::linear(a, x, b, y)?)
                }
                _ => {
                    return Err(Error::EntryKind {
                        entry: entry_label(j, al),
                    })
                }
            };
            out.entries.insert((*j, al.clone()), entry);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn insert_checks_shape() {
        let mut f = TotalFamily::new(vec![1.0, 2.0], 2).unwrap();
        let full = IndexSubset::full(2).unwrap();
        let j1 = IndexSubset::singleton(2, 0).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(f
            .insert(full, MultiIndex::new(vec![0, 0]), FamilyEntry::Scalar(one))
            .is_ok());
        assert!(matches!(
            f.insert(j1, MultiIndex::new(vec![0]), FamilyEntry::Scalar(one)),
            Err(Error::EntryKind { .. })
        ));
        // the function for J = {1} lives on the second factor
        let wrong = FunctionHandle::zero(vec![1.0]);
        assert!(f
            .insert(j1, MultiIndex::new(vec![0]), FamilyEntry::Function(wrong))
            .is_err());
        let right = FunctionHandle::zero(vec![2.0]);
        assert!(f
            .insert(j1, MultiIndex::new(vec![0]), FamilyEntry::Function(right))
            .is_ok());
        assert!(f
            .insert(j1, MultiIndex::new(vec![0, 1]), FamilyEntry::Scalar(one))
            .is_err());
        let err = f.check_coverage().unwrap_err();
        assert!(matches!(err, Error::IncompleteFamily { .. }));
    }

    #[test]
    fn handle_domain_and_derivative() {
        let h = FunctionHandle::new(vec![1.0], |z| z[0].to_complex());
        assert!(h.eval(&[Polar::new(1.0, 0.1)]).is_ok());
        assert!(h.eval(&[Polar::new(1.0, 2.0)]).is_err());
        assert!(h.eval(&[]).is_err());
        assert_eq!(
            h.derivative(&MultiIndex::new(vec![1]), &[Polar::real(1.0)]),
            Err(Error::MissingDerivative)
        );
    }
}
