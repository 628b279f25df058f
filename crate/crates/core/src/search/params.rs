//! The selective-search parameter record.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Every tunable knob of the selective search. Depths are in plies,
/// thresholds in centipawns, extensions in quarter-ply units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchParams {
    pub null_move_use: bool,
    /// R, 0..=7.
    pub null_move_reduction: u8,
    pub null_move_adaptive: bool,
    /// Remaining depth at or below which R is decremented, 0..=7.
    pub null_move_adaptivity_depth: u8,
    /// 0..=3; 0 disables futility pruning.
    pub futility_depth: u8,
    /// Margins for remaining depth 1, 2 and 3, each 0..=1023.
    pub futility_thresholds: [u16; 3],
    pub multicut_use: bool,
    pub multicut_reduction: u8,
    pub multicut_depth: u8,
    /// M, moves probed, 0..=31.
    pub multicut_move_num: u8,
    /// C, probe cutoffs required, 0..=7.
    pub multicut_cut_num: u8,
    pub ext_check: u8,
    pub ext_one_reply: u8,
    pub ext_recapture: u8,
    pub ext_passed_pawn: u8,
    pub ext_mate_threat: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("{name} = {value} is outside 0..={max}")]
    OutOfRange { name: &'static str, value: u32, max: u32 },
    #[error("unknown parameter {0:?}")]
    Unknown(String),
    #[error("invalid value {value:?} for {name}")]
    BadValue { name: String, value: String },
}

/// Parameter names, in chromosome order, with their inclusive maxima.
pub const PARAM_RANGES: [(&str, u32); 18] = [
    ("null_move_use", 1),
    ("null_move_reduction", 7),
    ("null_move_adaptive", 1),
    ("null_move_adaptivity_depth", 7),
    ("futility_depth", 3),
    ("futility_threshold_1", 1023),
    ("futility_threshold_2", 1023),
    ("futility_threshold_3", 1023),
    ("multicut_use", 1),
    ("multicut_reduction", 7),
    ("multicut_depth", 7),
    ("multicut_move_num", 31),
    ("multicut_cut_num", 7),
    ("ext_check", 4),
    ("ext_one_reply", 4),
    ("ext_recapture", 4),
    ("ext_passed_pawn", 4),
    ("ext_mate_threat", 4),
];

impl SearchParams {
    /// Plain alpha-beta: no forward pruning and no extensions.
    pub const fn disabled() -> SearchParams {
        SearchParams {
            null_move_use: false,
            null_move_reduction: 0,
            null_move_adaptive: false,
            null_move_adaptivity_depth: 0,
            futility_depth: 0,
            futility_thresholds: [0; 3],
            multicut_use: false,
            multicut_reduction: 0,
            multicut_depth: 0,
            multicut_move_num: 0,
            multicut_cut_num: 0,
            ext_check: 0,
            ext_one_reply: 0,
            ext_recapture: 0,
            ext_passed_pawn: 0,
            ext_mate_threat: 0,
        }
    }

    /// Values in the 18-slot order of [`PARAM_RANGES`].
    pub fn to_values(&self) -> [u32; 18] {
        [
            self.null_move_use as u32,
            self.null_move_reduction as u32,
            self.null_move_adaptive as u32,
            self.null_move_adaptivity_depth as u32,
            self.futility_depth as u32,
            self.futility_thresholds[0] as u32,
            self.futility_thresholds[1] as u32,
            self.futility_thresholds[2] as u32,
            self.multicut_use as u32,
            self.multicut_reduction as u32,
            self.multicut_depth as u32,
            self.multicut_move_num as u32,
            self.multicut_cut_num as u32,
            self.ext_check as u32,
            self.ext_one_reply as u32,
            self.ext_recapture as u32,
            self.ext_passed_pawn as u32,
            self.ext_mate_threat as u32,
        ]
    }

    /// Inverse of [`to_values`](Self::to_values); every value is range-checked.
    pub fn from_values(v: [u32; 18]) -> Result<SearchParams, ParamError> {
        for (i, &(name, max)) in PARAM_RANGES.iter().enumerate() {
            if v[i] > max {
                return Err(ParamError::OutOfRange { name, value: v[i], max });
            }
        }
        Ok(SearchParams {
            null_move_use: v[0] != 0,
            null_move_reduction: v[1] as u8,
            null_move_adaptive: v[2] != 0,
            null_move_adaptivity_depth: v[3] as u8,
            futility_depth: v[4] as u8,
            futility_thresholds: [v[5] as u16, v[6] as u16, v[7] as u16],
            multicut_use: v[8] != 0,
            multicut_reduction: v[9] as u8,
            multicut_depth: v[10] as u8,
            multicut_move_num: v[11] as u8,
            multicut_cut_num: v[12] as u8,
            ext_check: v[13] as u8,
            ext_one_reply: v[14] as u8,
            ext_recapture: v[15] as u8,
            ext_passed_pawn: v[16] as u8,
            ext_mate_threat: v[17] as u8,
        })
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        Self::from_values(self.to_values()).map(|_| ())
    }

    /// Sets one parameter by name (`name=value` CLI overrides). Flags accept
    /// `0/1/true/false`.
    pub fn set(&mut self, name: &str, value: &str) -> Result<(), ParamError> {
        let idx = PARAM_RANGES
            .iter()
            .position(|(n, _)| *n == name)
            .ok_or_else(|| ParamError::Unknown(name.to_string()))?;
        let parsed = match value {
            "true" => 1,
            "false" => 0,
            v => v.parse::<u32>().map_err(|_| ParamError::BadValue {
                name: name.to_string(),
                value: value.to_string(),
            })?,
        };
        let mut values = self.to_values();
        values[idx] = parsed;
        *self = Self::from_values(values)?;
        Ok(())
    }
}

impl Default for SearchParams {
    /// A hand-set configuration in the conventional range: adaptive R=3/2,
    /// frontier-only futility, multi-cut M=10/C=3, full-ply check extension.
    /// Node-wise futility one ply further back drops whole subtrees to
    /// quiescence, which costs tactics.
    fn default() -> SearchParams {
        SearchParams {
            null_move_use: true,
            null_move_reduction: 3,
            null_move_adaptive: true,
            null_move_adaptivity_depth: 6,
            futility_depth: 1,
            futility_thresholds: [320, 500, 900],
            multicut_use: true,
            multicut_reduction: 2,
            multicut_depth: 4,
            multicut_move_num: 10,
            multicut_cut_num: 3,
            ext_check: 4,
            ext_one_reply: 4,
            ext_recapture: 2,
            ext_passed_pawn: 2,
            ext_mate_threat: 4,
        }
    }
}

impl fmt::Display for SearchParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ((name, _), value)) in PARAM_RANGES.iter().zip(self.to_values()).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{name:<28}{value}")?;
        }
        Ok(())
    }
}
