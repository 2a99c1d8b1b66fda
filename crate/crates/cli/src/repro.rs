//! Bundled reproduction cases. Each case is a named list of configurations
//! shipped under `repro/`.

use crate::config::{parse_config, ConfigError, ExperimentConfig};

pub struct Case {
    pub id: &'static str,
    pub summary: &'static str,
    pub configs: &'static [(&'static str, &'static str)],
}

macro_rules! cfg {
    ($name:literal) => {
        ($name, include_str!(concat!("../repro/", $name, ".json")))
    };
}

pub const CASES: &[Case] = &[
    Case {
        id: "pertinency-powers-of-two",
        summary: "skew cyclic actions with n = 2, 4 reach h = 0 and have pertinency n",
        configs: &[cfg!("skew-cyclic-n2"), cfg!("skew-cyclic-n4")],
    },
    Case {
        id: "reflection-numbers",
        summary: "r(R,W) for the skew cyclic action, n = 2..8",
        configs: &[
            cfg!("reflection-n2"),
            cfg!("reflection-n3"),
            cfg!("reflection-n4"),
            cfg!("reflection-n5"),
            cfg!("reflection-n6"),
            cfg!("reflection-n7"),
            cfg!("reflection-n8"),
        ],
    },
    Case {
        id: "totient-floors",
        summary: "growth estimates against the totient lower bounds, n = 3, 5, 6",
        configs: &[cfg!("totient-n3"), cfg!("totient-n5"), cfg!("totient-n6")],
    },
    Case {
        id: "hdet-trivial",
        summary: "homological determinant of the skew cyclic action, n = 2..6",
        configs: &[cfg!("hdet-n2"), cfg!("hdet-n3"), cfg!("hdet-n4"), cfg!("hdet-n5"), cfg!("hdet-n6")],
    },
    Case {
        id: "fourier-identities",
        summary: "anticommutation and membership identities in the Fourier basis, n = 4",
        configs: &[cfg!("fourier-n4")],
    },
    Case {
        id: "commutative-contrast",
        summary: "k[x1,x2] with the swap: h stays nonzero, pertinency 1",
        configs: &[cfg!("commutative-n2")],
    },
    Case {
        id: "signed-pertinency",
        summary: "positive (commutative) against negative (skew) pertinency, n = 2..4",
        configs: &[
            cfg!("signed-plus-n2"),
            cfg!("signed-minus-n2"),
            cfg!("signed-plus-n3"),
            cfg!("signed-minus-n3"),
            cfg!("signed-plus-n4"),
            cfg!("signed-minus-n4"),
        ],
    },
];

pub fn find(id: &str) -> Option<&'static Case> {
    CASES.iter().find(|c| c.id == id)
}

impl Case {
    pub fn parsed(&self) -> Result<Vec<(&'static str, ExperimentConfig)>, ConfigError> {
        self.configs.iter().map(|(name, text)| Ok((*name, parse_config(text)?))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_config_is_valid() {
        for case in CASES {
            for (name, cfg) in case.parsed().unwrap() {
                assert!(crate::run::prepare_violations(&cfg).is_empty(), "{}/{name}", case.id);
            }
        }
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = CASES.iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), CASES.len());
    }
}
