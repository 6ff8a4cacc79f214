use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

/// A point of the Riemann surface of the logarithm: modulus and an
/// argument that is not reduced modulo `2 pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polar {
    pub modulus: f64,
    pub arg: f64,
}

impl Polar {
    pub fn new(modulus: f64, arg: f64) -> Self {
        Self { modulus, arg }
    }

    pub fn real(x: f64) -> Self {
        Self {
            modulus: x,
            arg: 0.0,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.arg)
    }

    /// `z^k` computed from the polar form.
    pub fn powi(self, k: i32) -> Complex64 {
        Complex64::from_polar(math::powi(self.modulus, k), k as f64 * self.arg)
    }

    /// Whether the point lies in the sector of opening `gamma * pi` bisected
    /// by the positive axis, shrunk by `margin` (1 for the open sector itself).
    pub fn in_sector(self, gamma: f64, margin: f64) -> bool {
        self.modulus > 0.0
            && self.modulus.is_finite()
            && self.arg.abs() < margin * gamma * math::PI / 2.0
    }
}

/// A point of a polysector, one component per factor.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorPoint(pub Vec<Polar>);

impl SectorPoint {
    pub fn new(components: Vec<Polar>) -> Self {
        Self(components)
    }

    pub fn components(&self) -> &[Polar] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn in_polysector(&self, opening: &[f64]) -> bool {
        self.in_subsector(opening, 1.0)
    }

    pub fn in_subsector(&self, opening: &[f64], margin: f64) -> bool {
        self.0.len() == opening.len()
            && self
                .0
                .iter()
                .zip(opening)
                .all(|(z, g)| z.in_sector(*g, margin))
    }

    pub fn min_modulus(&self) -> f64 {
        self.0
            .iter()
            .map(|z| z.modulus)
            .fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn require_in(&self, opening: &[f64]) -> Result<()> {
        if self.0.len() != opening.len() {
            return Err(Error::Invalid(alloc::format!(
                "point has {} components, polysector has {}",
                self.0.len(),
                opening.len()
            )));
        }
        match self
            .0
            .iter()
            .zip(opening)
            .find(|(z, g)| !z.in_sector(**g, 1.0))
        {
            Some((z, _)) => Err(Error::Domain {
                what: "point argument outside the sector",
                value: z.arg,
            }),
            None => Ok(()),
        }
    }
}

/// Smallest radius admitted in sampling grids.
pub const MIN_GRID_RADIUS: f64 = 1e-6;

/// Sampling grid for a bounded proper subpolysector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub radial: usize,
    /// Number of arguments per factor; 1 samples the positive axis only.
    pub angular: usize,
    pub r_min: f64,
    pub r_max: f64,
    /// Fraction of each half-opening covered by the arguments.
    pub margin: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            radial: 8,
            angular: 3,
            r_min: 1e-3,
            r_max: 1.0,
            margin: 0.9,
        }
    }
}

impl GridSpec {
    /// Cartesian grid over the factors of the polysector with the given openings.
    pub fn points(&self, opening: &[f64]) -> Result<Vec<SectorPoint>> {
        if !(self.r_min >= MIN_GRID_RADIUS)
            || !(self.r_max >= self.r_min)
            || !self.r_max.is_finite()
        {
            return Err(Error::Domain {
                what: "grid radius bounds",
                value: self.r_min,
            });
        }
        if !(self.margin > 0.0 && self.margin < 1.0) {
            return Err(Error::Domain {
                what: "grid margin",
                value: self.margin,
            });
        }
        if self.radial == 0 || self.angular == 0 {
            return Err(Error::Invalid(
                "grid needs at least one radius and one argument".into(),
            ));
        }
        let radii: Vec<f64> = if self.radial == 1 {
            alloc::vec![self.r_max]
        } else {
            let ratio = math::ln(self.r_max / self.r_min) / (self.radial - 1) as f64;
            let mut r: Vec<f64> = (0..self.radial)
                .map(|k| self.r_min * math::exp(ratio * k as f64))
                .collect();
            r[self.radial - 1] = self.r_max;
            r
        };
        let factor: Vec<Vec<Polar>> = opening
            .iter()
            .map(|g| {
                let half = self.margin * g * math::PI / 2.0;
                let mut args: Vec<f64> = if self.angular == 1 {
                    alloc::vec![0.0]
                } else {
                    (0..self.angular)
                        .map(|k| -half + 2.0 * half * k as f64 / (self.angular - 1) as f64)
                        .collect()
                };
                if !args.contains(&0.0) {
                    args.push(0.0);
                    args.sort_by(f64::total_cmp);
                }
                radii
                    .iter()
                    .flat_map(|&r| args.iter().map(move |&a| Polar::new(r, a)))
                    .collect()
            })
            .collect();
        let mut out = alloc::vec![Vec::new()];
        for choices in &factor {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Polar>| {
                    choices.iter().map(move |z| {
                        let mut p = prefix.clone();
                        p.push(*z);
                        p
                    })
                })
                .collect();
        }
        Ok(out.into_iter().map(SectorPoint).collect())
    }
}
