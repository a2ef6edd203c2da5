//! Dimensions of spaces of modular and cusp forms on SL₂(ℤ) and Γ₀(2).

use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupTag {
    /// SL₂(ℤ)
    Full,
    /// Γ₀(2)
    Gamma02,
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Full => write!(f, "SL2(Z)"),
            GroupTag::Gamma02 => write!(f, "Gamma0(2)"),
        }
    }
}

fn check_weight(k: u32, g: GroupTag, min: u32) -> Result<()> {
    if !k.is_multiple_of(2) {
        return Err(invalid(format!("weight must be even, got {k}")));
    }
    if k < min {
        return Err(invalid(format!("weight {k} below {min} is not supported for {g}")));
    }
    Ok(())
}

/// `dim M_k(Γ)` from the closed forms.
pub fn dim_modular(k: u32, g: GroupTag) -> Result<u32> {
    match g {
        GroupTag::Full => {
            check_weight(k, g, 0)?;
            Ok(if k % 12 == 2 { k / 12 } else { k / 12 + 1 })
        }
        GroupTag::Gamma02 => {
            check_weight(k, g, 4)?;
            Ok(1 + k / 4)
        }
    }
}

/// `dim S_k(Γ)`: one Eisenstein series per cusp is removed.
pub fn dim_cusp(k: u32, g: GroupTag) -> Result<u32> {
    check_weight(k, g, 4)?;
    let cusps = match g {
        GroupTag::Full => 1,
        GroupTag::Gamma02 => 2,
    };
    Ok(dim_modular(k, g)?.saturating_sub(cusps))
}

/// `dim M_k(Γ)` by counting monomials in the free generators of the graded
/// ring: `E₄, E₆` for SL₂(ℤ), generators of weights 2 and 4 for Γ₀(2).
pub fn dim_oracle(k: u32, g: GroupTag) -> Result<u32> {
    check_weight(k, g, 4)?;
    let (wa, wb) = match g {
        GroupTag::Full => (4, 6),
        GroupTag::Gamma02 => (2, 4),
    };
    let count = (0..=k / wb).filter(|b| (k - wb * b).is_multiple_of(wa)).count();
    Ok(count as u32)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasterNotes {
    pub rootless: String,
    pub lp_sharp: String,
    pub cft: String,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasterRow {
    pub d: u32,
    pub k: u32,
    pub dim_s_full: u32,
    pub dim_s_g02: u32,
    pub delta: u32,
    pub notes: Option<MasterNotes>,
}

const NOTES_CSV: &str = include_str!("../data/master_notes.csv");
const SNAPSHOT_CSV: &str = include_str!("../data/master_snapshot.csv");

fn csv_rows(src: &str) -> impl Iterator<Item = Vec<&str>> {
    src.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').collect())
}

/// The qualitative annotations of the master table, keyed by `d`.
pub fn master_notes(d: u32) -> Option<MasterNotes> {
    csv_rows(NOTES_CSV)
        .find(|f| f[0].parse::<u32>().ok() == Some(d))
        .map(|f| MasterNotes {
            rootless: f[1].to_string(),
            lp_sharp: f[2].to_string(),
            cft: f[3].to_string(),
            status: f[4].to_string(),
        })
}

/// Reference values of the computed columns for `d = 8, …, 96`.
pub fn master_snapshot() -> Vec<MasterRow> {
    csv_rows(SNAPSHOT_CSV)
        .map(|f| {
            let n: Vec<u32> = f.iter().map(|x| x.parse().expect("snapshot is numeric")).collect();
            MasterRow {
                d: n[0],
                k: n[1],
                dim_s_full: n[2],
                dim_s_g02: n[3],
                delta: n[4],
                notes: master_notes(n[0]),
            }
        })
        .collect()
}

pub fn master_row(d: u32) -> Result<MasterRow> {
    if d == 0 || !d.is_multiple_of(8) {
        return Err(invalid(format!("d must be a positive multiple of 8, got {d}")));
    }
    let k = d / 2;
    let dim_s_full = dim_cusp(k, GroupTag::Full)?;
    let dim_s_g02 = dim_cusp(k, GroupTag::Gamma02)?;
    Ok(MasterRow {
        d,
        k,
        dim_s_full,
        dim_s_g02,
        delta: dim_s_g02 - dim_s_full,
        notes: master_notes(d),
    })
}

/// One row per `d ∈ {8, 16, …, d_max}`.
pub fn master_table(d_max: u32) -> Result<Vec<MasterRow>> {
    if d_max < 8 || !d_max.is_multiple_of(8) {
        return Err(invalid(format!(
            "d_max must be a positive multiple of 8, got {d_max}"
        )));
    }
    (8..=d_max).step_by(8).map(master_row).collect()
}

/// Rows whose computed columns differ from the snapshot, as `(computed, expected)`.
pub fn snapshot_mismatches(rows: &[MasterRow]) -> Vec<(MasterRow, MasterRow)> {
    let snapshot = master_snapshot();
    rows.iter()
        .filter_map(|r| {
            let s = snapshot.iter().find(|s| s.d == r.d)?;
            let same = (r.k, r.dim_s_full, r.dim_s_g02, r.delta)
                == (s.k, s.dim_s_full, s.dim_s_g02, s.delta);
            (!same).then(|| (r.clone(), s.clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(dim_modular(4, GroupTag::Full).unwrap(), 1);
        assert_eq!(dim_modular(16, GroupTag::Gamma02).unwrap(), 5);
        assert_eq!(dim_modular(14, GroupTag::Full).unwrap(), 1);
        assert_eq!(dim_modular(0, GroupTag::Full).unwrap(), 1);
        assert_eq!(dim_modular(2, GroupTag::Full).unwrap(), 0);
        assert!(dim_modular(3, GroupTag::Full).is_err());
        assert!(dim_modular(2, GroupTag::Gamma02).is_err());
    }

    #[test]
    fn cusp_dimensions() {
        assert_eq!(dim_cusp(12, GroupTag::Full).unwrap(), 1);
        assert_eq!(dim_cusp(8, GroupTag::Gamma02).unwrap(), 1);
        assert_eq!(dim_cusp(48, GroupTag::Full).unwrap(), 4);
        assert_eq!(dim_cusp(4, GroupTag::Full).unwrap(), 0);
        assert!(dim_cusp(2, GroupTag::Full).is_err());
        assert!(dim_cusp(7, GroupTag::Gamma02).is_err());
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(dim_oracle(12, GroupTag::Full).unwrap(), 2);
        assert_eq!(dim_oracle(4, GroupTag::Gamma02).unwrap(), 2);
        // E₄⁵E₆ and E₄²E₆³
        assert_eq!(dim_oracle(26, GroupTag::Full).unwrap(), 2);
    }

    #[test]
    fn oracle_matches_closed_form() {
        for k in (4..=400).step_by(2) {
            for g in [GroupTag::Full, GroupTag::Gamma02] {
                assert_eq!(dim_oracle(k, g).unwrap(), dim_modular(k, g).unwrap(), "k={k} {g}");
            }
            assert!(dim_cusp(k, GroupTag::Gamma02).unwrap() >= dim_cusp(k, GroupTag::Full).unwrap());
        }
    }

    #[test]
    fn table_rows() {
        let rows = master_table(96).unwrap();
        assert_eq!(rows.len(), 12);
        assert_eq!((rows[0].dim_s_full, rows[0].dim_s_g02, rows[0].delta), (0, 0, 0));
        assert_eq!((rows[3].dim_s_full, rows[3].dim_s_g02, rows[3].delta), (1, 3, 2));
        assert_eq!((rows[11].dim_s_full, rows[11].dim_s_g02, rows[11].delta), (4, 11, 7));
        assert!(rows.windows(2).all(|w| w[0].delta <= w[1].delta));
        assert!(snapshot_mismatches(&rows).is_empty());
        assert_eq!(rows[1].notes.as_ref().unwrap().status, "Cohn–Triantafillou 2021");
        assert!(rows[4..].iter().all(|r| r.notes.as_ref().unwrap().status == "Expected"));
    }

    #[test]
    fn table_bounds() {
        assert_eq!(master_table(8).unwrap().len(), 1);
        assert!(master_table(10).is_err());
        assert!(master_table(0).is_err());
        let big = master_table(104).unwrap();
        assert!(big.last().unwrap().notes.is_none());
    }
}
