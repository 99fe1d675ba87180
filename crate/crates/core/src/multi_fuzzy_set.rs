//! Multi-fuzzy sets over the integers `0..q`.
//!
//! A multi-fuzzy set is a family of disjoint subsets of field elements, each
//! bound to a [`FamilyTemplate`]. Fuzzifying an element instantiates its
//! subset's template with the element's integer value as the location
//! parameter. The same structure describes the fuzzified field, the locking
//! set and the unlocking set; [`SetKind`] tells them apart.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fuzzy_number::{Family, FuzzyError, FuzzyNumber};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SetError {
    #[error("invalid template: {0}")]
    Template(String),
    #[error("subset sizes sum to {got}, field size is {q}")]
    SizeMismatch { q: u64, got: u64 },
    #[error("subset {0} is empty")]
    EmptySubset(usize),
    #[error("{sizes} subset sizes but {templates} templates")]
    TemplateCount { sizes: usize, templates: usize },
    #[error("at least one subset is required")]
    NoSubsets,
    #[error("element {element} outside field of size {q}")]
    OutOfRange { element: u64, q: u64 },
    #[error("element {0} appears in more than one subset")]
    Overlap(u64),
    #[error("element {0} is not covered by any subset")]
    Uncovered(u64),
    #[error("subset index {index} out of range ({count} subsets)")]
    BadIndex { index: usize, count: usize },
    #[error("field subsets do not cover every element of 0..{0}")]
    IncompleteField(u64),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

/// Shape of a membership family with the location left open.
///
/// Spread parameters per family:
///
/// | family      | spreads                                          |
/// |-------------|--------------------------------------------------|
/// | triangular  | `left_spread, right_spread`                      |
/// | trapezoidal | `plateau_halfwidth, sigma_left, beta_right`      |
/// | gaussian    | `sigma_left, sigma_right`                        |
/// | sigmoid     | `left_width, right_width, omega, halfwidth`      |
/// | crisp       | (none)                                           |
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TemplateRecord", into = "TemplateRecord")]
pub struct FamilyTemplate {
    family: Family,
    spreads: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TemplateRecord {
    pub family: Family,
    #[serde(default)]
    pub spreads: Vec<f64>,
}

impl TryFrom<TemplateRecord> for FamilyTemplate {
    type Error = SetError;

    fn try_from(rec: TemplateRecord) -> Result<Self, Self::Error> {
        FamilyTemplate::new(rec.family, rec.spreads)
    }
}

impl From<FamilyTemplate> for TemplateRecord {
    fn from(t: FamilyTemplate) -> Self {
        TemplateRecord {
            family: t.family,
            spreads: t.spreads,
        }
    }
}

impl FamilyTemplate {
    pub fn new(family: Family, spreads: Vec<f64>) -> Result<Self, SetError> {
        let expected = match family {
            Family::Triangular | Family::Gaussian => 2,
            Family::Trapezoidal => 3,
            Family::Sigmoid => 4,
            Family::Crisp => 0,
        };
        if spreads.len() != expected {
            return Err(SetError::Template(format!(
                "{family} template takes {expected} spreads, got {}",
                spreads.len()
            )));
        }
        if spreads.iter().any(|s| !s.is_finite() || *s <= 0.0) {
            return Err(SetError::Template(format!(
                "{family} spreads must be positive and finite"
            )));
        }
        if family == Family::Sigmoid && spreads[2] > 1.0 {
            return Err(SetError::Template("sigmoid height must lie in (0, 1]".into()));
        }
        Ok(FamilyTemplate { family, spreads })
    }

    pub fn triangular(left: f64, right: f64) -> Result<Self, SetError> {
        Self::new(Family::Triangular, vec![left, right])
    }

    pub fn trapezoidal(plateau_halfwidth: f64, sigma: f64, beta: f64) -> Result<Self, SetError> {
        Self::new(Family::Trapezoidal, vec![plateau_halfwidth, sigma, beta])
    }

    pub fn gaussian(sigma_left: f64, sigma_right: f64) -> Result<Self, SetError> {
        Self::new(Family::Gaussian, vec![sigma_left, sigma_right])
    }

    pub fn sigmoid(left: f64, right: f64, omega: f64, halfwidth: f64) -> Result<Self, SetError> {
        Self::new(Family::Sigmoid, vec![left, right, omega, halfwidth])
    }

    pub fn crisp() -> Self {
        FamilyTemplate {
            family: Family::Crisp,
            spreads: Vec::new(),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn spreads(&self) -> &[f64] {
        &self.spreads
    }

    /// Fuzzy number of this shape located at `core`; its defuzzified value
    /// is exactly `core`.
    pub fn instantiate(&self, core: f64) -> FuzzyNumber {
        let s = &self.spreads;
        let built = match self.family {
            Family::Triangular => FuzzyNumber::triangular(core - s[0], core, core + s[1]),
            Family::Trapezoidal => FuzzyNumber::trapezoidal(core - s[0], core + s[0], s[1], s[2]),
            Family::Gaussian => FuzzyNumber::gaussian(core, s[0], s[1]),
            Family::Sigmoid => FuzzyNumber::sigmoid(core - s[0], core, core + s[1], s[2], s[3]),
            Family::Crisp => FuzzyNumber::crisp(core),
        };
        built.expect("validated template always instantiates")
    }

    /// True when `f` has this template's family and spreads.
    pub fn matches(&self, f: &FuzzyNumber) -> bool {
        f.family() == self.family && self.instantiate(f.defuzzify()) == *f
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Members {
    Range(Range<u64>),
    Listed(Vec<u64>),
}

/// One subset of a multi-fuzzy set together with its template.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetDescriptor {
    index: usize,
    members: Members,
    template: FamilyTemplate,
}

impl SubsetDescriptor {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn template(&self) -> &FamilyTemplate {
        &self.template
    }

    pub fn len(&self) -> usize {
        match &self.members {
            Members::Range(r) => (r.end - r.start) as usize,
            Members::Listed(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Elements in ascending order.
    pub fn elements(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.members {
            Members::Range(r) => Box::new(r.clone()),
            Members::Listed(v) => Box::new(v.iter().copied()),
        }
    }

    pub fn contains(&self, a: u64) -> bool {
        match &self.members {
            Members::Range(r) => r.contains(&a),
            Members::Listed(v) => v.binary_search(&a).is_ok(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    Field,
    Locking,
    Unlocking,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiFuzzySet {
    q: u64,
    kind: SetKind,
    subsets: Vec<SubsetDescriptor>,
    // element -> subset, for listed subsets only
    lookup: BTreeMap<u64, usize>,
}

impl MultiFuzzySet {
    /// Splits `0..q` into contiguous ascending ranges of the given sizes.
    pub fn partition_field(
        q: u64,
        sizes: &[u64],
        templates: Vec<FamilyTemplate>,
    ) -> Result<Self, SetError> {
        if sizes.is_empty() {
            return Err(SetError::NoSubsets);
        }
        if sizes.len() != templates.len() {
            return Err(SetError::TemplateCount {
                sizes: sizes.len(),
                templates: templates.len(),
            });
        }
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(SetError::EmptySubset(i));
        }
        let total = sizes
            .iter()
            .try_fold(0u64, |acc, &s| acc.checked_add(s))
            .unwrap_or(u64::MAX);
        if total != q {
            return Err(SetError::SizeMismatch { q, got: total });
        }
        let mut start = 0;
        let subsets = sizes
            .iter()
            .zip(templates)
            .enumerate()
            .map(|(index, (&size, template))| {
                let members = Members::Range(start..start + size);
                start += size;
                SubsetDescriptor {
                    index,
                    members,
                    template,
                }
            })
            .collect();
        Ok(MultiFuzzySet {
            q,
            kind: SetKind::Field,
            subsets,
            lookup: BTreeMap::new(),
        })
    }

    /// Field partition with an arbitrary layout. The groups must cover
    /// `0..q` exactly once.
    pub fn field_from_groups(
        q: u64,
        groups: Vec<(Vec<u64>, FamilyTemplate)>,
    ) -> Result<Self, SetError> {
        let set = Self::from_groups(q, SetKind::Field, groups)?;
        if set.lookup.len() as u64 != q {
            return Err(SetError::IncompleteField(q));
        }
        Ok(set)
    }

    /// Locking set: disjoint groups of field elements, one template each.
    pub fn build_locking_set(
        field: &MultiFuzzySet,
        groups: Vec<(Vec<u64>, FamilyTemplate)>,
    ) -> Result<Self, SetError> {
        Self::from_groups(field.q, SetKind::Locking, groups)
    }

    /// Unlocking set with the unlocker's own family guesses.
    pub fn build_unlocking_set(
        q: u64,
        groups: Vec<(Vec<u64>, FamilyTemplate)>,
    ) -> Result<Self, SetError> {
        Self::from_groups(q, SetKind::Unlocking, groups)
    }

    pub fn from_groups(
        q: u64,
        kind: SetKind,
        groups: Vec<(Vec<u64>, FamilyTemplate)>,
    ) -> Result<Self, SetError> {
        if groups.is_empty() {
            return Err(SetError::NoSubsets);
        }
        let mut lookup = BTreeMap::new();
        let mut subsets = Vec::with_capacity(groups.len());
        for (index, (mut elements, template)) in groups.into_iter().enumerate() {
            if elements.is_empty() {
                return Err(SetError::EmptySubset(index));
            }
            elements.sort_unstable();
            for &e in &elements {
                if e >= q {
                    return Err(SetError::OutOfRange { element: e, q });
                }
                if lookup.insert(e, index).is_some() {
                    return Err(SetError::Overlap(e));
                }
            }
            subsets.push(SubsetDescriptor {
                index,
                members: Members::Listed(elements),
                template,
            });
        }
        Ok(MultiFuzzySet {
            q,
            kind,
            subsets,
            lookup,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn subsets(&self) -> &[SubsetDescriptor] {
        &self.subsets
    }

    /// Number of subsets (m_F, m_A or m_B depending on the kind).
    pub fn subset_count(&self) -> usize {
        self.subsets.len()
    }

    /// Total number of elements over all subsets.
    pub fn total_elements(&self) -> usize {
        self.subsets.iter().map(SubsetDescriptor::len).sum()
    }

    pub fn subset(&self, k: usize) -> Result<&SubsetDescriptor, SetError> {
        self.subsets.get(k).ok_or(SetError::BadIndex {
            index: k,
            count: self.subsets.len(),
        })
    }

    /// Index of the subset containing `a`.
    pub fn subset_of(&self, a: u64) -> Result<usize, SetError> {
        if a >= self.q {
            return Err(SetError::OutOfRange {
                element: a,
                q: self.q,
            });
        }
        if let Some(&i) = self.lookup.get(&a) {
            return Ok(i);
        }
        self.subsets
            .iter()
            .position(|s| matches!(&s.members, Members::Range(r) if r.contains(&a)))
            .ok_or(SetError::Uncovered(a))
    }

    /// Template of the subset containing `a`, instantiated at `a`.
    pub fn fuzzify_element(&self, a: u64) -> Result<FuzzyNumber, SetError> {
        let i = self.subset_of(a)?;
        Ok(self.subsets[i].template.instantiate(a as f64))
    }

    /// The fuzzified elements of subset `k`, ascending by core.
    pub fn select_subset(&self, k: usize) -> Result<Vec<FuzzyNumber>, SetError> {
        let s = self.subset(k)?;
        Ok(s.elements().map(|e| s.template.instantiate(e as f64)).collect())
    }

    /// Distinct templates in subset order.
    pub fn templates(&self) -> Vec<FamilyTemplate> {
        let mut out: Vec<FamilyTemplate> = Vec::new();
        for s in &self.subsets {
            if !out.contains(&s.template) {
                out.push(s.template.clone());
            }
        }
        out
    }
}

/// On-disk description of a locking or unlocking set:
/// `{"q": ..., "subsets": [{"elements": [...], "family": "...", "spreads": [...]}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetDescription {
    pub q: u64,
    pub subsets: Vec<GroupDescription>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupDescription {
    pub elements: Vec<u64>,
    pub family: Family,
    #[serde(default)]
    pub spreads: Vec<f64>,
}

impl SetDescription {
    pub fn from_set(set: &MultiFuzzySet) -> Self {
        SetDescription {
            q: set.q,
            subsets: set
                .subsets
                .iter()
                .map(|s| GroupDescription {
                    elements: s.elements().collect(),
                    family: s.template.family,
                    spreads: s.template.spreads.clone(),
                })
                .collect(),
        }
    }

    pub fn into_set(self, kind: SetKind) -> Result<MultiFuzzySet, SetError> {
        let groups = self
            .subsets
            .into_iter()
            .map(|g| Ok((g.elements, FamilyTemplate::new(g.family, g.spreads)?)))
            .collect::<Result<Vec<_>, SetError>>()?;
        match kind {
            SetKind::Field => MultiFuzzySet::field_from_groups(self.q, groups),
            _ => MultiFuzzySet::from_groups(self.q, kind, groups),
        }
    }
}

/// On-disk description of a contiguous field partition:
/// `{"q": ..., "subsets": [{"size": ..., "family": "...", "spreads": [...]}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionDescription {
    pub q: u64,
    pub subsets: Vec<PartDescription>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartDescription {
    pub size: u64,
    pub family: Family,
    #[serde(default)]
    pub spreads: Vec<f64>,
}

impl PartitionDescription {
    pub fn into_set(self) -> Result<MultiFuzzySet, SetError> {
        let sizes: Vec<u64> = self.subsets.iter().map(|p| p.size).collect();
        let templates = self
            .subsets
            .into_iter()
            .map(|p| FamilyTemplate::new(p.family, p.spreads))
            .collect::<Result<Vec<_>, _>>()?;
        MultiFuzzySet::partition_field(self.q, &sizes, templates)
    }
}
