//! Multiplier view of the correlated-failure parameters.
//!
//! Correlated failure intensities are expressed relative to the intensity of
//! the element they correlate:
//!
//! | parameter       | value                 |
//! |-----------------|-----------------------|
//! | `geo_fail_rate` | `α_GEO · λ_FHW / 10`  |
//! | `geo_rcv_rate`  | `μ_FHW / 3`           |
//! | `phy_fail_rate` | `α_PHY · λ_L / 10`    |
//! | `phy_rcv_rate`  | `μ_L`                 |
//! | `man_fail_rate` | `α_COM · λ_O` (routers sharing O&M) |
//! | `mis_fail_rate` | `α_MIS · λ_O / 10`    |
//! | `mis_rcv_rate`  | `μ_O`                 |
//! | `cis_fail_rate` | `α_CIS · λ_S / 10`    |
//! | `cis_rcv_rate`  | `μ_S / 3`             |
//! | `tmi_cvg`       | `0.95 + β_TMI`        |
//! | `heq_cvg`       | `0.99 + β_HEQ`        |
//!
//! For `ll` the geographic spread correlates links, so `λ_L`, `μ_L` replace
//! `λ_FHW`, `μ_FHW`. The built-in studies use raw rates; the two views agree
//! on some grid points and not on others.

use serde::{Deserialize, Serialize};

use super::{build, CatalogError, CatalogId};
use crate::san::ParamSet;

/// Sweep of every `α`.
pub const ALPHA_SWEEP: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];
pub const BETA_TMI_SWEEP: [f64; 5] = [-0.05, -0.02, 0.0, 0.02, 0.05];
pub const BETA_HEQ_SWEEP: [f64; 3] = [-0.01, 0.0, 0.01];

/// Single-element rates the correlated intensities are scaled from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseRates {
    pub fhw_fail: f64,
    pub fhw_rcv: f64,
    pub link_fail: f64,
    pub link_rcv: f64,
    /// O&M failure and recovery.
    pub om_fail: f64,
    pub om_rcv: f64,
    /// SDN controller software failure and recovery.
    pub ctrl_sw_fail: f64,
    pub ctrl_sw_rcv: f64,
}

impl Default for BaseRates {
    fn default() -> Self {
        BaseRates {
            fhw_fail: 9.0e-9,
            fhw_rcv: 2.0e-5,
            link_fail: 1.0e-6,
            link_rcv: 0.01,
            om_fail: 5.0e-7,
            om_rcv: 9.0e-5,
            ctrl_sw_fail: 2.0e-5,
            ctrl_sw_rcv: 0.006,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationFactors {
    pub alpha_geo: f64,
    pub alpha_phy: f64,
    pub alpha_com: f64,
    pub alpha_mis: f64,
    pub alpha_cis: f64,
    pub beta_tmi: f64,
    pub beta_heq: f64,
}

impl Default for CorrelationFactors {
    fn default() -> Self {
        CorrelationFactors {
            alpha_geo: 1.0,
            alpha_phy: 1.0,
            alpha_com: 1.0,
            alpha_mis: 1.0,
            alpha_cis: 1.0,
            beta_tmi: 0.0,
            beta_heq: 0.0,
        }
    }
}

impl CorrelationFactors {
    /// Every `α` set to `alpha`, both `β` zero.
    pub fn uniform(alpha: f64) -> Self {
        CorrelationFactors {
            alpha_geo: alpha,
            alpha_phy: alpha,
            alpha_com: alpha,
            alpha_mis: alpha,
            alpha_cis: alpha,
            ..Self::default()
        }
    }

    /// Raw values of every correlation parameter for model `id`.
    pub fn raw_params(&self, id: CatalogId, base: &BaseRates) -> ParamSet {
        let (geo_fail, geo_rcv) = if id == CatalogId::Ll {
            (base.link_fail, base.link_rcv)
        } else {
            (base.fhw_fail, base.fhw_rcv)
        };
        let mut p = ParamSet::new()
            .with("geo_fail_rate", self.alpha_geo * geo_fail / 10.0)
            .with("geo_rcv_rate", geo_rcv / 3.0)
            .with("phy_fail_rate", self.alpha_phy * base.link_fail / 10.0)
            .with("phy_rcv_rate", base.link_rcv)
            .with("mis_fail_rate", self.alpha_mis * base.om_fail / 10.0)
            .with("mis_rcv_rate", base.om_rcv)
            .with("cis_fail_rate", self.alpha_cis * base.ctrl_sw_fail / 10.0)
            .with("cis_rcv_rate", base.ctrl_sw_rcv / 3.0)
            .with("tmi_cvg", 0.95 + self.beta_tmi)
            .with("heq_cvg", 0.99 + self.beta_heq);
        if matches!(id, CatalogId::Rr | CatalogId::Rrl | CatalogId::Rrr | CatalogId::Rll) {
            p.set("man_fail_rate", self.alpha_com * base.om_fail);
            p.set("man_rcv_rate", base.om_rcv);
        }
        p
    }

    /// Study defaults for `id` with the correlation parameters the model
    /// declares replaced by their multiplier-view values.
    pub fn apply(&self, id: CatalogId, study: &str, base: &BaseRates) -> Result<ParamSet, CatalogError> {
        let mut params = super::default_params(id, study)?;
        let declared = build(id).params;
        for (k, &v) in self.raw_params(id, base).iter() {
            if declared.iter().any(|d| d.name == *k) {
                params.set(k, v);
            }
        }
        Ok(params)
    }
}
