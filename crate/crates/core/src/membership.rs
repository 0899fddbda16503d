//! Gaussian membership terms and evenly spaced linguistic partitions.
//!
//! Every partition produced by [`build_partition`] places its term centers
//! uniformly over a symmetric universe `[-z_max, z_max]` and gives each term
//! the width at which adjacent terms cross at exactly one half.

use crate::error::{Error, Result};

/// A single Gaussian linguistic term, `exp(-(z - c)^2 / (2 sigma^2))`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianTerm {
    label: String,
    center: f64,
    sigma: f64,
}

impl GaussianTerm {
    pub fn new(label: impl Into<String>, center: f64, sigma: f64) -> Result<Self> {
        let label = label.into();
        if !center.is_finite() {
            return Err(Error::invalid(format!("term {label}: center must be finite")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::invalid(format!(
                "term {label}: sigma must be positive and finite, got {sigma}"
            )));
        }
        Ok(GaussianTerm {
            label,
            center,
            sigma,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Degree of membership of `z`. Full support: never zero for finite `z`
    /// within a few hundred sigmas of the center.
    #[inline]
    pub fn eval(&self, z: f64) -> f64 {
        let d = z - self.center;
        (-(d * d) / (2.0 * self.sigma * self.sigma)).exp()
    }
}

/// Free-function form of [`GaussianTerm::eval`].
#[inline]
pub fn eval_membership(term: &GaussianTerm, z: f64) -> f64 {
    term.eval(z)
}

/// Width for which two terms `spacing` apart both evaluate to 1/2 at their
/// midpoint: `spacing / sqrt(8 ln 2)`.
pub fn sigma_from_spacing(spacing: f64) -> Result<f64> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::invalid(format!(
            "term spacing must be positive and finite, got {spacing}"
        )));
    }
    Ok(spacing / (8.0 * std::f64::consts::LN_2).sqrt())
}

/// An ordered linguistic variable over a symmetric universe.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    name: String,
    z_min: f64,
    z_max: f64,
    terms: Vec<GaussianTerm>,
}

const SPACING_TOL: f64 = 1e-9;

impl Partition {
    /// Evenly spaced partition with uniform half-crossing widths.
    pub fn uniform<S: AsRef<str>>(name: impl Into<String>, z_max: f64, labels: &[S]) -> Result<Self> {
        let name = name.into();
        if !(z_max > 0.0 && z_max.is_finite()) {
            return Err(Error::invalid(format!(
                "partition {name}: z_max must be positive and finite, got {z_max}"
            )));
        }
        let n = labels.len();
        if n < 2 {
            return Err(Error::invalid(format!(
                "partition {name}: need at least 2 terms, got {n}"
            )));
        }
        let last = (n - 1) as f64;
        let sigma = sigma_from_spacing(2.0 * z_max / last)?;
        let terms = labels
            .iter()
            .enumerate()
            .map(|(k, label)| {
                // Built as an odd multiple around zero so the centers are exactly
                // mirror-symmetric and the endpoints land on +/- z_max.
                let center = if k == 0 {
                    -z_max
                } else if k == n - 1 {
                    z_max
                } else {
                    z_max * (2.0 * k as f64 - last) / last
                };
                GaussianTerm::new(label.as_ref(), center, sigma)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(name, z_max, terms)
    }

    /// Hand-built partition. Centers must still span the universe evenly;
    /// sigmas may differ per term.
    pub fn from_terms(name: impl Into<String>, z_max: f64, terms: Vec<GaussianTerm>) -> Result<Self> {
        let name = name.into();
        if !(z_max > 0.0 && z_max.is_finite()) {
            return Err(Error::invalid(format!(
                "partition {name}: z_max must be positive and finite"
            )));
        }
        if terms.len() < 2 {
            return Err(Error::invalid(format!(
                "partition {name}: need at least 2 terms"
            )));
        }
        let z_min = -z_max;
        let first = terms[0].center;
        let last = terms[terms.len() - 1].center;
        if first != z_min || last != z_max {
            return Err(Error::invalid(format!(
                "partition {name}: first/last centers must be {z_min}/{z_max}, got {first}/{last}"
            )));
        }
        let spacing = (z_max - z_min) / (terms.len() - 1) as f64;
        for (k, pair) in terms.windows(2).enumerate() {
            let step = pair[1].center - pair[0].center;
            if step <= 0.0 {
                return Err(Error::invalid(format!(
                    "partition {name}: centers must be strictly increasing at term {}",
                    k + 1
                )));
            }
            if (step - spacing).abs() > SPACING_TOL * z_max {
                return Err(Error::invalid(format!(
                    "partition {name}: centers must be evenly spaced (term {})",
                    k + 1
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for t in &terms {
            if !seen.insert(t.label.as_str()) {
                return Err(Error::invalid(format!(
                    "partition {name}: duplicate label {:?}",
                    t.label
                )));
            }
        }
        Ok(Partition {
            name,
            z_min,
            z_max,
            terms,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    pub fn terms(&self) -> &[GaussianTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|t| t.label.as_str())
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.label == label)
    }

    /// Membership degree of `z` in each term, in term order.
    pub fn fuzzify(&self, z: f64) -> Vec<f64> {
        self.terms.iter().map(|t| t.eval(z)).collect()
    }

    pub fn clamp(&self, z: f64) -> f64 {
        z.clamp(self.z_min, self.z_max)
    }
}

/// Builds an evenly spaced partition of `n_terms` labelled terms over
/// `[-z_max, z_max]`.
pub fn build_partition<S: AsRef<str>>(
    name: &str,
    z_max: f64,
    n_terms: usize,
    labels: &[S],
) -> Result<Partition> {
    if n_terms < 2 {
        return Err(Error::invalid(format!(
            "partition {name}: n_terms must be at least 2, got {n_terms}"
        )));
    }
    if labels.len() != n_terms {
        return Err(Error::invalid(format!(
            "partition {name}: {n_terms} terms but {} labels",
            labels.len()
        )));
    }
    Partition::uniform(name, z_max, labels)
}

/// `fuzzify` as a free function.
pub fn fuzzify(p: &Partition, z: f64) -> Vec<f64> {
    p.fuzzify(z)
}
