use super::{enumerate_shells, root_count, Lattice};
use crate::error::{invalid, Error, Result};
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinLattice {
    /// `ℤᵈ`
    Z(usize),
    E8,
    D16plus,
    E8E8,
    Leech,
}

impl BuiltinLattice {
    pub fn name(self) -> String {
        match self {
            Self::Z(d) => format!("z{d}"),
            Self::E8 => "e8".into(),
            Self::D16plus => "d16plus".into(),
            Self::E8E8 => "e8e8".into(),
            Self::Leech => "leech".into(),
        }
    }
}

impl std::str::FromStr for BuiltinLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "e8" => Ok(Self::E8),
            "d16plus" | "d16+" => Ok(Self::D16plus),
            "e8e8" | "e8+e8" => Ok(Self::E8E8),
            "leech" => Ok(Self::Leech),
            _ => lower
                .strip_prefix('z')
                .and_then(|d| d.parse().ok())
                .filter(|&d| d >= 1)
                .map(Self::Z)
                .ok_or_else(|| Error::UnknownBuiltin(s.to_string())),
        }
    }
}

/// Expected invariants checked when a shipped Gram matrix is loaded.
struct Expect {
    rank: usize,
    roots: u64,
    /// `(norm, count)` pairs verified by enumeration.
    shells: &'static [(i64, u64)],
}

fn load(name: &str, text: &str, expect: Expect) -> Result<Lattice> {
    let l = Lattice::parse(text)?;
    let fail = |what: String| Err(Error::LatticeCheck(format!("shipped lattice {name}: {what}")));
    if l.rank() != expect.rank {
        return fail(format!("rank {} != {}", l.rank(), expect.rank));
    }
    if !l.is_unimodular() {
        return fail(format!("determinant {} != 1", l.det()));
    }
    if !l.is_even() {
        return fail("not even".into());
    }
    let roots = root_count(&l)?;
    if roots != expect.roots {
        return fail(format!("{roots} roots, expected {}", expect.roots));
    }
    if let Some(max) = expect.shells.iter().map(|s| s.0).max() {
        let shells = enumerate_shells(&l, max)?;
        for &(m, count) in expect.shells {
            if shells.counts[m as usize] != count {
                return fail(format!("N_{m} = {}, expected {count}", shells.counts[m as usize]));
            }
        }
    }
    Ok(l)
}

fn cached(cell: &'static OnceLock<Result<Lattice>>, init: impl FnOnce() -> Result<Lattice>) -> Result<Lattice> {
    cell.get_or_init(init).clone()
}

/// Shipped lattices. Gram matrices are verified on first load (determinant,
/// evenness, root count, and for Leech the norm-4 shell).
pub fn builtin_lattice(which: BuiltinLattice) -> Result<Lattice> {
    static E8: OnceLock<Result<Lattice>> = OnceLock::new();
    static D16: OnceLock<Result<Lattice>> = OnceLock::new();
    static LEECH: OnceLock<Result<Lattice>> = OnceLock::new();
    match which {
        BuiltinLattice::Z(d) => {
            if d == 0 {
                return Err(invalid("ℤ⁰ is not a lattice"));
            }
            Lattice::identity(d)
        }
        BuiltinLattice::E8 => cached(&E8, || {
            load(
                "e8",
                include_str!("../../data/lattices/e8.txt"),
                Expect { rank: 8, roots: 240, shells: &[(4, 2160)] },
            )
        }),
        BuiltinLattice::E8E8 => {
            let e8 = builtin_lattice(BuiltinLattice::E8)?;
            Ok(e8.direct_sum(&e8))
        }
        BuiltinLattice::D16plus => cached(&D16, || {
            load(
                "d16plus",
                include_str!("../../data/lattices/d16plus.txt"),
                Expect { rank: 16, roots: 480, shells: &[] },
            )
        }),
        BuiltinLattice::Leech => cached(&LEECH, || {
            load(
                "leech",
                include_str!("../../data/lattices/leech.txt"),
                Expect { rank: 24, roots: 0, shells: &[(4, 196560)] },
            )
        }),
    }
}
