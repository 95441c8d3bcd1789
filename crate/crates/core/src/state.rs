//! Sparse representation of the walker wavefunction and the primitive
//! unitaries acting on it: the sitewise coin action and the correlated
//! diagonal shift.
//!
//! Amplitudes are stored in an associative map keyed by lattice site; the
//! lattice is unbounded. After each shift, 4-vectors whose components are
//! all below `PRUNE_THRESHOLD` in modulus are dropped. No renormalization is
//! ever performed; norm drift is monitored by callers instead.

use std::collections::BTreeMap;
use std::io::{self, Write};

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::coin::CoinMatrix4;
use crate::error::{Result, WalkError};

/// Amplitude modulus below which a fully-negligible site is dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-16;

/// A 2-D lattice site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site {
    pub x1: i64,
    pub x2: i64,
}

impl Site {
    pub fn new(x1: i64, x2: i64) -> Self {
        Self { x1, x2 }
    }
}

/// Sparse 2-D walker wavefunction: site → 4-component coin amplitude vector
/// in the global basis order |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩.
#[derive(Debug, Clone)]
pub struct SparseState {
    amplitudes: FxHashMap<Site, [Complex64; 4]>,
    time: u32,
}

impl SparseState {
    /// A walker localized at `origin` with the given normalized coin state.
    pub fn init_localized(origin: Site, coin: [Complex64; 4]) -> Result<Self> {
        let norm_sq: f64 = coin.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq.sqrt() - 1.0).abs() > 1e-12 {
            return Err(WalkError::InvalidState(format!(
                "initial coin vector has norm {}, expected 1",
                norm_sq.sqrt()
            )));
        }
        let mut amplitudes = FxHashMap::default();
        amplitudes.insert(origin, coin);
        Ok(Self { amplitudes, time: 0 })
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    pub fn site_count(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, site: Site) -> [Complex64; 4] {
        self.amplitudes
            .get(&site)
            .copied()
            .unwrap_or([Complex64::ZERO; 4])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Site, &[Complex64; 4])> {
        self.amplitudes.iter()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes
            .values()
            .map(|v| v.iter().map(|a| a.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// Applies a 4×4 coin unitary at every occupied site. The site set and
    /// the step counter are unchanged.
    pub fn apply_coin(&mut self, coin: &CoinMatrix4) {
        for v in self.amplitudes.values_mut() {
            *v = coin.apply(v);
        }
    }

    /// Applies the diagonal shift with step sizes (d1, d2) ≥ 1: component
    /// |↑↑⟩ moves by (+d1, +d2), |↑↓⟩ by (+d1, −d2), |↓↑⟩ by (−d1, +d2) and
    /// |↓↓⟩ by (−d1, −d2). Amplitudes arriving at the same destination add.
    /// Increments the step counter.
    pub fn apply_shift(&mut self, d1: u32, d2: u32) {
        debug_assert!(d1 >= 1 && d2 >= 1);
        let d1 = i64::from(d1);
        let d2 = i64::from(d2);
        let moves = [(d1, d2), (d1, -d2), (-d1, d2), (-d1, -d2)];
        let mut next: FxHashMap<Site, [Complex64; 4]> =
            FxHashMap::with_capacity_and_hasher(self.amplitudes.len() * 2, Default::default());
        for (site, v) in &self.amplitudes {
            for (c, (m1, m2)) in moves.iter().enumerate() {
                if v[c] == Complex64::ZERO {
                    continue;
                }
                let dest = Site::new(site.x1 + m1, site.x2 + m2);
                next.entry(dest).or_insert([Complex64::ZERO; 4])[c] += v[c];
            }
        }
        next.retain(|_, v| v.iter().any(|a| a.norm() >= PRUNE_THRESHOLD));
        self.amplitudes = next;
        self.time += 1;
    }

    /// Joint position probability distribution; zero-probability sites are
    /// omitted. Keys are sorted so downstream reductions are deterministic.
    pub fn joint_distribution(&self) -> BTreeMap<Site, f64> {
        self.amplitudes
            .iter()
            .filter_map(|(site, v)| {
                let p: f64 = v.iter().map(|a| a.norm_sqr()).sum();
                (p > 0.0).then_some((*site, p))
            })
            .collect()
    }

    /// Writes one tab-separated record per occupied site, sorted by site:
    /// x1, x2, then (re, im) for each of the four coin components.
    pub fn write_snapshot<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(
            out,
            "x1\tx2\tre_uu\tim_uu\tre_ud\tim_ud\tre_du\tim_du\tre_dd\tim_dd"
        )?;
        let sorted: BTreeMap<&Site, &[Complex64; 4]> = self.amplitudes.iter().collect();
        for (site, v) in sorted {
            write!(out, "{}\t{}", site.x1, site.x2)?;
            for a in v {
                write!(out, "\t{:.16e}\t{:.16e}", a.re, a.im)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Sparse 1-D walker wavefunction: position → 2-component coin vector in the
/// basis |↑⟩, |↓⟩.
#[derive(Debug, Clone)]
pub struct SparseState1D {
    amplitudes: FxHashMap<i64, [Complex64; 2]>,
    time: u32,
}

impl SparseState1D {
    pub fn init_localized(origin: i64, coin: [Complex64; 2]) -> Result<Self> {
        let norm_sq: f64 = coin.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq.sqrt() - 1.0).abs() > 1e-12 {
            return Err(WalkError::InvalidState(format!(
                "initial coin vector has norm {}, expected 1",
                norm_sq.sqrt()
            )));
        }
        let mut amplitudes = FxHashMap::default();
        amplitudes.insert(origin, coin);
        Ok(Self { amplitudes, time: 0 })
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &[Complex64; 2])> {
        self.amplitudes.iter()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes
            .values()
            .map(|v| v[0].norm_sqr() + v[1].norm_sqr())
            .sum()
    }

    pub fn apply_coin(&mut self, coin: &crate::coin::CoinMatrix2) {
        let m = *coin.matrix();
        for v in self.amplitudes.values_mut() {
            *v = [
                m[(0, 0)] * v[0] + m[(0, 1)] * v[1],
                m[(1, 0)] * v[0] + m[(1, 1)] * v[1],
            ];
        }
    }

    /// Shift |↑⟩ by +d and |↓⟩ by −d; increments the step counter.
    pub fn apply_shift(&mut self, d: u32) {
        debug_assert!(d >= 1);
        let d = i64::from(d);
        let mut next: FxHashMap<i64, [Complex64; 2]> =
            FxHashMap::with_capacity_and_hasher(self.amplitudes.len() * 2, Default::default());
        for (x, v) in &self.amplitudes {
            if v[0] != Complex64::ZERO {
                next.entry(x + d).or_insert([Complex64::ZERO; 2])[0] += v[0];
            }
            if v[1] != Complex64::ZERO {
                next.entry(x - d).or_insert([Complex64::ZERO; 2])[1] += v[1];
            }
        }
        next.retain(|_, v| v.iter().any(|a| a.norm() >= PRUNE_THRESHOLD));
        self.amplitudes = next;
        self.time += 1;
    }

    pub fn distribution(&self) -> BTreeMap<i64, f64> {
        self.amplitudes
            .iter()
            .filter_map(|(x, v)| {
                let p = v[0].norm_sqr() + v[1].norm_sqr();
                (p > 0.0).then_some((*x, p))
            })
            .collect()
    }
}
