use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Structural class of a link, from which of IS / cIS are significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkClass {
    /// Neither measure significant (B undefined).
    Isolated,
    /// Only IS significant (B = 1).
    CommonDriveOrCascade,
    /// Only cIS significant (B = -1).
    CommonTarget,
    /// Both significant: the link is kept in the reconstructed network.
    Connected,
}

impl std::fmt::Display for LinkClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LinkClass::Isolated => "isolated",
            LinkClass::CommonDriveOrCascade => "common-drive-or-cascade",
            LinkClass::CommonTarget => "common-target",
            LinkClass::Connected => "connected",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub b_index: f64,
    pub link_class: LinkClass,
}

/// `(is - cis) / max(is, cis)`; NaN when both are zero.
pub fn b_index(is_value: f64, cis_value: f64) -> f64 {
    let max = is_value.max(cis_value);
    if max > 0.0 {
        (is_value - cis_value) / max
    } else {
        f64::NAN
    }
}

/// Maps the significance pattern of IS and cIS to a B-index and link class.
///
/// When both are significant the B-index is computed from the raw values;
/// otherwise it takes the limit value of the corresponding class.
pub fn classify_link(
    is_value: f64,
    cis_value: f64,
    is_significant: bool,
    cis_significant: bool,
) -> Result<Classification> {
    if !(is_value >= 0.0 && cis_value >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "IS and cIS must be non-negative, got {is_value} and {cis_value}"
        )));
    }
    let (b_index, link_class) = match (is_significant, cis_significant) {
        (true, true) => {
            let b = b_index(is_value, cis_value);
            if b.is_nan() {
                return Err(Error::ContradictoryClassification);
            }
            (b, LinkClass::Connected)
        }
        (true, false) => (1.0, LinkClass::CommonDriveOrCascade),
        (false, true) => (-1.0, LinkClass::CommonTarget),
        (false, false) => (f64::NAN, LinkClass::Isolated),
    };
    Ok(Classification {
        b_index,
        link_class,
    })
}

/// All measures and the classification of one unordered node pair `i < j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkResult {
    pub i: usize,
    pub j: usize,
    pub is_value: f64,
    pub cis_value: f64,
    pub nis_value: f64,
    /// NaN for isolated links (serialized as null).
    pub b_index: Option<f64>,
    pub is_significant: bool,
    pub cis_significant: bool,
    pub link_class: LinkClass,
}

impl LinkResult {
    pub fn new(
        i: usize,
        j: usize,
        is_value: f64,
        cis_value: f64,
        is_significant: bool,
        cis_significant: bool,
    ) -> Result<Self> {
        let c = classify_link(is_value, cis_value, is_significant, cis_significant)?;
        Ok(Self {
            i: i.min(j),
            j: i.max(j),
            is_value,
            cis_value,
            nis_value: is_value - cis_value,
            b_index: (!c.b_index.is_nan()).then_some(c.b_index),
            is_significant,
            cis_significant,
            link_class: c.link_class,
        })
    }

    /// B-index with NaN for undefined.
    pub fn b(&self) -> f64 {
        self.b_index.unwrap_or(f64::NAN)
    }

    pub fn is_connected(&self) -> bool {
        self.link_class == LinkClass::Connected
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn connected_link_uses_raw_values() {
        let c = classify_link(0.5, 0.2, true, true).unwrap();
        assert_abs_diff_eq!(c.b_index, 0.6, epsilon = 1e-15);
        assert_eq!(c.link_class, LinkClass::Connected);
    }

    #[test]
    fn limit_values() {
        let c = classify_link(0.3, 0.01, true, false).unwrap();
        assert_eq!(
            (c.b_index, c.link_class),
            (1.0, LinkClass::CommonDriveOrCascade)
        );
        let c = classify_link(0.0, 0.2, false, true).unwrap();
        assert_eq!((c.b_index, c.link_class), (-1.0, LinkClass::CommonTarget));
        let c = classify_link(0.01, 0.01, false, false).unwrap();
        assert!(c.b_index.is_nan());
        assert_eq!(c.link_class, LinkClass::Isolated);
    }

    #[test]
    fn contradictory_and_invalid_inputs() {
        assert!(matches!(
            classify_link(0.0, 0.0, true, true),
            Err(Error::ContradictoryClassification)
        ));
        assert!(classify_link(-0.1, 0.0, false, false).is_err());
        assert!(classify_link(f64::NAN, 0.0, false, false).is_err());
    }

    #[test]
    fn balanced_link_has_zero_b() {
        let c = classify_link(0.25, 0.25, true, true).unwrap();
        assert_eq!(c.b_index, 0.0);
    }

    #[test]
    fn link_result_invariants() {
        let l = LinkResult::new(3, 1, 0.4, 0.1, true, false).unwrap();
        assert_eq!((l.i, l.j), (1, 3));
        assert_abs_diff_eq!(l.nis_value, 0.3, epsilon = 1e-15);
        assert_eq!(l.b_index, Some(1.0));
        let l = LinkResult::new(0, 1, 0.0, 0.0, false, false).unwrap();
        assert_eq!(l.b_index, None);
        assert!(l.b().is_nan());
    }
}
