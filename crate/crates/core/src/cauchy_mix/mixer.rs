use std::f64::consts::PI;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::admissibility::generic_admissibility;
use super::density::{StdCauchy, UnimodalDensity};
use super::hfun::HFunction;
use super::kernel::{MixKernel, MuTComponents};
use super::tables::CouplingTables;
use super::tmeasure::{build_t_grid, TMeasure};
use crate::distributions::GenericDensity;
use crate::error::{Error, Result};
use crate::rng::{open01, substream, DEFAULT_SEED};

/// Rows generated per RNG substream.
pub const ROW_BLOCK: usize = 4096;

/// Parameters of the mixer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixerConfig {
    pub n: usize,
    pub c: f64,
    #[serde(default = "defaults::t_grid")]
    pub t_grid: usize,
    #[serde(default = "defaults::tail_eps")]
    pub tail_eps: f64,
    #[serde(default = "defaults::ra_grid_m")]
    pub ra_grid_m: usize,
    #[serde(default = "defaults::root_tol")]
    pub root_tol: f64,
    #[serde(default = "defaults::seed")]
    pub seed: u64,
}

mod defaults {
    pub fn t_grid() -> usize {
        2048
    }
    pub fn tail_eps() -> f64 {
        1e-4
    }
    pub fn ra_grid_m() -> usize {
        512
    }
    pub fn root_tol() -> f64 {
        1e-12
    }
    pub fn seed() -> u64 {
        crate::rng::DEFAULT_SEED
    }
}

impl MixerConfig {
    /// Defaults for everything but `n` and `c`.
    pub fn new(n: usize, c: f64) -> Self {
        MixerConfig {
            n,
            c,
            t_grid: defaults::t_grid(),
            tail_eps: defaults::tail_eps(),
            ra_grid_m: defaults::ra_grid_m(),
            root_tol: defaults::root_tol(),
            seed: DEFAULT_SEED,
        }
    }

    /// Checks every field; `c_limit` is the largest admissible `|c|`.
    pub fn validate(&self, c_limit: f64) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Domain(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        if !self.c.is_finite() || self.c.abs() > c_limit * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "|c| = {} exceeds the admissible bound {c_limit} for n = {}",
                self.c.abs(),
                self.n
            )));
        }
        if self.t_grid < 16 {
            return Err(Error::Domain(format!(
                "t_grid must be at least 16, got {}",
                self.t_grid
            )));
        }
        if !(self.tail_eps > 0.0 && self.tail_eps < 0.5) {
            return Err(Error::Domain(format!(
                "tail_eps must lie in (0, 0.5), got {}",
                self.tail_eps
            )));
        }
        if !(4..=1 << 16).contains(&self.ra_grid_m) {
            return Err(Error::Domain(format!(
                "ra_grid_m must lie in [4, 65536], got {}",
                self.ra_grid_m
            )));
        }
        if !(self.root_tol > 0.0) {
            return Err(Error::Domain(format!(
                "root_tol must be positive, got {}",
                self.root_tol
            )));
        }
        Ok(())
    }
}

/// Largest admissible `|c|` for the standard Cauchy: `ln(n-1)/π`.
pub fn cauchy_center_limit(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    ((n - 1) as f64).ln() / PI
}

/// Which part of `μ_t` produced a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `n-1` coordinates at `c - t`, one at `c + (n-1)t`.
    TwoPoint,
    /// Atom at `c - t` plus uniform on `[c - t, K3]`, from a coupling table.
    AtomUniform,
    /// Combination of rows from other samplers.
    Composite,
}

impl Branch {
    pub fn code(self) -> u8 {
        match self {
            Branch::TwoPoint => 1,
            Branch::AtomUniform => 2,
            Branch::Composite => 0,
        }
    }

    pub fn from_code(code: u8) -> Option<Branch> {
        match code {
            1 => Some(Branch::TwoPoint),
            2 => Some(Branch::AtomUniform),
            0 => Some(Branch::Composite),
            _ => None,
        }
    }
}

/// One emitted row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixRow {
    pub values: Vec<f64>,
    pub t: f64,
    pub branch: Branch,
    pub row_sum: f64,
    /// Bound on `|row_sum - n c|` guaranteed by construction.
    pub bound: f64,
}

/// `count` rows in row-major order with per-row metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixSamples {
    pub n: usize,
    pub center: f64,
    pub values: Vec<f64>,
    pub t: Vec<f64>,
    pub branch: Vec<Branch>,
    pub row_sum: Vec<f64>,
    pub bound: Vec<f64>,
}

impl MixSamples {
    pub fn with_capacity(n: usize, center: f64, count: usize) -> Self {
        MixSamples {
            n,
            center,
            values: Vec::with_capacity(count * n),
            t: Vec::with_capacity(count),
            branch: Vec::with_capacity(count),
            row_sum: Vec::with_capacity(count),
            bound: Vec::with_capacity(count),
        }
    }

    pub fn push(&mut self, row: MixRow) {
        self.values.extend_from_slice(&row.values);
        self.t.push(row.t);
        self.branch.push(row.branch);
        self.row_sum.push(row.row_sum);
        self.bound.push(row.bound);
    }

    fn append(&mut self, other: MixSamples) {
        self.values.extend(other.values);
        self.t.extend(other.t);
        self.branch.extend(other.branch);
        self.row_sum.extend(other.row_sum);
        self.bound.extend(other.bound);
    }

    pub fn count(&self) -> usize {
        self.t.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values
            .iter()
            .skip(j)
            .step_by(self.n)
            .copied()
            .collect()
    }

    /// `row_sum - n c` for row `i`.
    pub fn deviation(&self, i: usize) -> f64 {
        self.row_sum[i] - self.n as f64 * self.center
    }

    /// Rows whose deviation exceeds their recorded bound.
    pub fn bound_violations(&self) -> usize {
        (0..self.count())
            .filter(|&i| !(self.deviation(i).abs() <= self.bound[i]))
            .count()
    }

    pub fn mean_row_sum(&self) -> f64 {
        self.row_sum.iter().sum::<f64>() / self.count() as f64
    }
}

/// Anything that emits rows of `n` variates with a constant-sum target.
pub trait MixSampler: Sync {
    fn n(&self) -> usize;

    /// Target value of each row sum divided by `n`.
    fn center(&self) -> f64;

    fn sample_with_seed(&self, count: usize, seed: u64) -> Result<MixSamples>;
}

/// Run metadata for sample output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixMetadata {
    pub n: usize,
    pub c: f64,
    pub tail_eps: f64,
    pub ra_grid_m: usize,
    pub seed: u64,
    pub mass_deficit: f64,
    pub t_max: f64,
    pub t_knots: usize,
    pub normalization: f64,
    pub coupling_tables_built: usize,
    pub max_table_deviation: f64,
}

/// The constructed sampler.
///
/// Construction tabulates `h`, the components and `Q` on the `t`-grid; it is
/// immutable afterwards except for coupling tables, which are built on first
/// use and shared between threads.
#[derive(Debug)]
pub struct Mixer {
    cfg: MixerConfig,
    kernel: MixKernel,
    reflect: bool,
    hfun: HFunction,
    measure: TMeasure,
    knot_components: Vec<MuTComponents>,
    tables: CouplingTables,
}

impl Mixer {
    /// Mixer with standard Cauchy marginals.
    pub fn new(cfg: MixerConfig) -> Result<Self> {
        Mixer::with_density(cfg, Arc::new(StdCauchy), cauchy_center_limit(cfg.n))
    }

    /// Mixer with marginal density `f`; `c_limit` bounds `|c|`.
    pub fn with_density(
        cfg: MixerConfig,
        f: Arc<dyn UnimodalDensity>,
        c_limit: f64,
    ) -> Result<Self> {
        cfg.validate(c_limit)?;
        let reflect = cfg.c.is_sign_negative();
        let c = cfg.c.abs().min(c_limit);
        let kernel = MixKernel::new(f, cfg.n, c, cfg.root_tol)?;
        let grid = build_t_grid(&kernel, cfg.t_grid, cfg.tail_eps)?;
        let hfun = HFunction::from_components(&grid.components, c)?;
        let alpha_max = if c == 0.0 {
            0.0
        } else {
            1.0 - 2.0 / cfg.n as f64
        };
        let tables = CouplingTables::new(cfg.n, cfg.ra_grid_m, alpha_max, cfg.seed);
        Ok(Mixer {
            cfg,
            kernel,
            reflect,
            hfun,
            measure: grid.measure,
            knot_components: grid.components,
            tables,
        })
    }

    /// Mixer for a symmetric unimodal density that passes the admissibility
    /// check; `|c|` is bounded by the check's `q_max`.
    pub fn for_generic(cfg: MixerConfig, g: GenericDensity) -> Result<Self> {
        let adm = generic_admissibility(&g, cfg.n)?;
        if !adm.ok {
            return Err(Error::Domain(format!(
                "density {} fails the convexity check at x = {:?}",
                g.label(),
                adm.witness
            )));
        }
        Mixer::with_density(cfg, Arc::new(g), adm.q_max)
    }

    pub fn config(&self) -> &MixerConfig {
        &self.cfg
    }

    /// Kernel for `|c|`; rows of a negative-`c` mixer are negated.
    pub fn kernel(&self) -> &MixKernel {
        &self.kernel
    }

    pub fn is_reflected(&self) -> bool {
        self.reflect
    }

    pub fn hfun(&self) -> &HFunction {
        &self.hfun
    }

    pub fn t_measure(&self) -> &TMeasure {
        &self.measure
    }

    /// Components at the `t`-grid knots.
    pub fn knot_components(&self) -> &[MuTComponents] {
        &self.knot_components
    }

    pub fn tables(&self) -> &CouplingTables {
        &self.tables
    }

    pub fn metadata(&self) -> MixMetadata {
        MixMetadata {
            n: self.cfg.n,
            c: self.cfg.c,
            tail_eps: self.cfg.tail_eps,
            ra_grid_m: self.cfg.ra_grid_m,
            seed: self.cfg.seed,
            mass_deficit: self.measure.mass_deficit(),
            t_max: self.measure.t_max(),
            t_knots: self.measure.knots().len(),
            normalization: self.measure.normalization(),
            coupling_tables_built: self.tables.built(),
            max_table_deviation: self.tables.max_deviation(),
        }
    }

    /// One row of `μ_t`.
    pub fn sample_mu_t<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> Result<MixRow> {
        let comp = self.kernel.components(t)?;
        let mut row = self.row_from(&comp, rng)?;
        if self.reflect {
            for v in row.values.iter_mut() {
                *v = -*v;
            }
            row.row_sum = -row.row_sum;
        }
        Ok(row)
    }

    /// `count` rows with `t ~ Q`, using the configured seed.
    pub fn sample(&self, count: usize) -> Result<MixSamples> {
        self.sample_with_seed(count, self.cfg.seed)
    }

    fn row_from<R: Rng + ?Sized>(&self, comp: &MuTComponents, rng: &mut R) -> Result<MixRow> {
        let n = self.cfg.n;
        let nf = n as f64;
        let c = self.kernel.c();
        let t = comp.t;
        let l = c - t;
        let excess = comp.k1 - (nf - 1.0) * comp.k2;
        if comp.k4 == 0.0 && excess.abs() > 1e-12 * comp.k1 {
            return Err(Error::Invariant(format!(
                "K4 = 0 but K1 - (n-1) K2 = {excess:e} at t = {t}"
            )));
        }
        let w = comp.width(c);
        if nf * t < w * (1.0 - 1e-12) {
            return Err(Error::Invariant(format!(
                "mean inequality n t >= K3 - (c - t) fails at t = {t}"
            )));
        }
        let mut values = vec![0.0; n];
        let p1 = comp.branch_one_weight(n);
        let (branch, bound) = if open01(rng) < p1 {
            let r = c + (nf - 1.0) * t;
            values.fill(l);
            values[0] = r;
            // rounding of n-1 copies of c - t against c + (n-1)t
            (Branch::TwoPoint, self.bound_for(comp, Branch::TwoPoint))
        } else if n == 2 {
            let x = l + w * open01(rng);
            values[0] = x;
            values[1] = -x;
            (
                Branch::AtomUniform,
                self.bound_for(comp, Branch::AtomUniform),
            )
        } else {
            let alpha = comp.alpha(c).min(1.0 - 2.0 / nf);
            let table = self.tables.table(alpha);
            let i = rng.random_range(0..table.rows());
            table.balanced_row_values(i, alpha, &mut values);
            for v in values.iter_mut() {
                *v = l + w * *v;
            }
            (
                Branch::AtomUniform,
                self.bound_for(comp, Branch::AtomUniform),
            )
        };
        values.shuffle(rng);
        let row_sum = values.iter().sum();
        Ok(MixRow {
            values,
            t,
            branch,
            row_sum,
            bound,
        })
    }

    // guaranteed |row_sum - n c| for a row of `branch` at these components
    fn bound_for(&self, comp: &MuTComponents, branch: Branch) -> f64 {
        let n = self.cfg.n;
        let nf = n as f64;
        let c = self.kernel.c();
        let scale = c + nf * comp.t;
        match branch {
            Branch::TwoPoint => 2.0 * nf * f64::EPSILON * scale,
            Branch::AtomUniform if n == 2 => 0.0,
            Branch::AtomUniform => {
                nf * comp.width(c) / self.cfg.ra_grid_m as f64 + 4.0 * nf * f64::EPSILON * scale
            }
            Branch::Composite => f64::NAN,
        }
    }

    /// Per-row bound on `|row_sum - n c|` for a row of `branch` drawn at `t`.
    pub fn row_bound(&self, t: f64, branch: Branch) -> Result<f64> {
        if branch == Branch::Composite {
            return Err(Error::Domain("composite rows carry their own bound".into()));
        }
        Ok(self.bound_for(&self.kernel.components(t)?, branch))
    }

    fn sample_block(&self, rows: usize, seed: u64, block: u64) -> Result<MixSamples> {
        let mut rng = substream(seed, "mix-rows", block);
        let mut out = MixSamples::with_capacity(self.cfg.n, self.cfg.c, rows);
        for _ in 0..rows {
            let t = self.measure.inverse(open01(&mut rng));
            out.push(self.sample_mu_t(t, &mut rng)?);
        }
        Ok(out)
    }
}

impl MixSampler for Mixer {
    fn n(&self) -> usize {
        self.cfg.n
    }

    fn center(&self) -> f64 {
        self.cfg.c
    }

    fn sample_with_seed(&self, count: usize, seed: u64) -> Result<MixSamples> {
        let blocks = count.div_ceil(ROW_BLOCK);
        let parts: Vec<MixSamples> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let rows = ROW_BLOCK.min(count - b * ROW_BLOCK);
                self.sample_block(rows, seed, b as u64)
            })
            .collect::<Result<_>>()?;
        let mut out = MixSamples::with_capacity(self.cfg.n, self.cfg.c, count);
        for p in parts {
            out.append(p);
        }
        Ok(out)
    }
}

/// Rows `λ X + (1-λ) Y` from independent draws of two samplers.
///
/// For strictly stable marginals (standard Cauchy) the rows keep the
/// marginal law and have center `λ a + (1-λ) b`.
pub struct ConvexMix<'a> {
    a: &'a dyn MixSampler,
    b: &'a dyn MixSampler,
    weight: f64,
}

impl<'a> ConvexMix<'a> {
    pub fn new(a: &'a dyn MixSampler, b: &'a dyn MixSampler, weight: f64) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::Domain(format!(
                "row lengths differ: {} and {}",
                a.n(),
                b.n()
            )));
        }
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::Domain(format!(
                "weight must lie in [0, 1], got {weight}"
            )));
        }
        Ok(ConvexMix { a, b, weight })
    }
}

/// `convex_interpolate_mixes`: see [`ConvexMix`].
pub fn convex_interpolate_mixes<'a>(
    a: &'a dyn MixSampler,
    b: &'a dyn MixSampler,
    weight: f64,
) -> Result<ConvexMix<'a>> {
    ConvexMix::new(a, b, weight)
}

impl MixSampler for ConvexMix<'_> {
    fn n(&self) -> usize {
        self.a.n()
    }

    fn center(&self) -> f64 {
        self.weight * self.a.center() + (1.0 - self.weight) * self.b.center()
    }

    fn sample_with_seed(&self, count: usize, seed: u64) -> Result<MixSamples> {
        let lam = self.weight;
        let xa = self
            .a
            .sample_with_seed(count, substream(seed, "convex-a", 0).next_u64())?;
        if lam == 1.0 {
            return Ok(xa);
        }
        let xb = self
            .b
            .sample_with_seed(count, substream(seed, "convex-b", 0).next_u64())?;
        let n = self.n();
        let mut out = MixSamples::with_capacity(n, self.center(), count);
        for i in 0..count {
            let values: Vec<f64> = xa
                .row(i)
                .iter()
                .zip(xb.row(i))
                .map(|(x, y)| lam * x + (1.0 - lam) * y)
                .collect();
            let row_sum = values.iter().sum();
            let slack = 4.0 * n as f64 * f64::EPSILON * values.iter().map(|v| v.abs()).sum::<f64>();
            out.push(MixRow {
                values,
                t: f64::NAN,
                branch: Branch::Composite,
                row_sum,
                bound: lam * xa.bound[i] + (1.0 - lam) * xb.bound[i] + slack,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{ks_distance, ks_two_sample};

    fn cauchy_cdf(x: f64) -> f64 {
        0.5 + x.atan() / PI
    }

    #[test]
    fn config_rejects_centers_outside_the_interval() {
        assert!(matches!(
            Mixer::new(MixerConfig::new(3, 0.3)),
            Err(Error::Domain(_))
        ));
        assert!(Mixer::new(MixerConfig::new(3, -0.3)).is_err());
        assert!(Mixer::new(MixerConfig::new(2, 0.01)).is_err());
        assert!(Mixer::new(MixerConfig::new(1, 0.0)).is_err());
        let cfg = MixerConfig {
            ra_grid_m: 1 << 17,
            ..MixerConfig::new(3, 0.1)
        };
        assert!(cfg.validate(cauchy_center_limit(3)).is_err());
        assert!(MixerConfig::new(3, cauchy_center_limit(3))
            .validate(cauchy_center_limit(3))
            .is_ok());
    }

    #[test]
    fn config_reads_json_with_defaults() {
        let cfg: MixerConfig = serde_json::from_str(r#"{"n": 4, "c": 0.2}"#).unwrap();
        assert_eq!(cfg, MixerConfig::new(4, 0.2));
        assert!(serde_json::from_str::<MixerConfig>(r#"{"n": 4, "c": 0.2, "m": 3}"#).is_err());
    }

    #[test]
    fn rows_respect_their_bounds_and_branch_one_is_exact() {
        let m = Mixer::new(MixerConfig::new(3, 0.15)).unwrap();
        let s = m.sample(20_000).unwrap();
        assert_eq!(s.bound_violations(), 0);
        let mut ones = 0;
        for i in 0..s.count() {
            let row = s.row(i);
            assert_eq!(row.iter().sum::<f64>(), s.row_sum[i]);
            if s.branch[i] == Branch::TwoPoint {
                ones += 1;
                assert!(s.deviation(i).abs() <= 1e-12 * (1.0 + s.t[i]));
                let t = s.t[i];
                let hi = row
                    .iter()
                    .filter(|&&x| (x - (0.15 + 2.0 * t)).abs() <= 1e-12 * (1.0 + t))
                    .count();
                assert_eq!(hi, 1);
            }
        }
        assert!(ones > 0);
    }

    #[test]
    fn branch_two_alpha_and_mean_inequality_hold_on_the_grid() {
        let m = Mixer::new(MixerConfig::new(4, 0.3)).unwrap();
        let c = m.kernel().c();
        for k in m.knot_components() {
            let a = k.k1 - 3.0 * k.k2;
            assert!(4.0 * k.t >= k.width(c) * (1.0 - 1e-12));
            let alpha = k.alpha(c);
            if k.k4 > 0.0 {
                assert!((alpha - a / (a + k.k4)).abs() < 1e-9, "t={}", k.t);
            }
        }
    }

    #[test]
    fn sampling_is_reproducible_and_seed_dependent() {
        let m = Mixer::new(MixerConfig::new(3, 0.1)).unwrap();
        let a = m.sample_with_seed(5000, 7).unwrap();
        let b = m.sample_with_seed(5000, 7).unwrap();
        let c = m.sample_with_seed(5000, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn negative_center_mirrors_positive_center() {
        let p = Mixer::new(MixerConfig::new(3, 0.12)).unwrap();
        let q = Mixer::new(MixerConfig::new(3, -0.12)).unwrap();
        let a = p.sample(10_000).unwrap();
        let b = q.sample(10_000).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert_eq!(*x, -*y);
        }
        for (x, y) in a.row_sum.iter().zip(&b.row_sum) {
            assert_eq!(*x, -*y);
        }
    }

    #[test]
    fn coordinates_are_exchangeable() {
        let m = Mixer::new(MixerConfig::new(3, 0.15)).unwrap();
        let s = m.sample(100_000).unwrap();
        for i in 0..3 {
            for j in i + 1..3 {
                let d = ks_two_sample(&s.column(i), &s.column(j)).unwrap();
                assert!(d <= 0.01, "columns {i},{j}: {d}");
            }
        }
    }

    #[test]
    fn two_variates_at_zero_are_antithetic() {
        let m = Mixer::new(MixerConfig::new(2, 0.0)).unwrap();
        let s = m.sample(50_000).unwrap();
        for i in 0..s.count() {
            assert_eq!(s.row(i)[0], -s.row(i)[1]);
        }
        assert!(ks_distance(&s.column(0), cauchy_cdf).unwrap() < 0.01);
    }

    #[test]
    fn convex_combination_moves_the_center() {
        let lim = cauchy_center_limit(3);
        let a = Mixer::new(MixerConfig::new(3, lim)).unwrap();
        let b = Mixer::new(MixerConfig::new(3, -lim)).unwrap();
        let half = convex_interpolate_mixes(&a, &b, 0.5).unwrap();
        assert_eq!(half.center(), 0.0);
        let s = half.sample_with_seed(20_000, 3).unwrap();
        assert_eq!(s.bound_violations(), 0);
        assert!(s.mean_row_sum().abs() < 1e-3);
        assert!(ks_distance(&s.column(1), cauchy_cdf).unwrap() < 0.015);

        let z = Mixer::new(MixerConfig::new(3, 0.0)).unwrap();
        let p = Mixer::new(MixerConfig::new(3, 0.2)).unwrap();
        let quarter = ConvexMix::new(&z, &p, 0.25).unwrap();
        assert!((quarter.center() - 0.15).abs() < 1e-15);
        let s = quarter.sample_with_seed(20_000, 5).unwrap();
        assert!((s.mean_row_sum() - 0.45).abs() < 1e-3);

        let one = ConvexMix::new(&a, &b, 1.0).unwrap();
        let seed = 11;
        let direct = a
            .sample_with_seed(1000, substream(seed, "convex-a", 0).next_u64())
            .unwrap();
        assert_eq!(one.sample_with_seed(1000, seed).unwrap(), direct);
    }

    #[test]
    fn generic_cauchy_density_runs_the_same_pipeline() {
        let g = GenericDensity::power_law(2.0).unwrap();
        let m = Mixer::for_generic(MixerConfig::new(3, 0.1), g).unwrap();
        let s = m.sample(20_000).unwrap();
        assert_eq!(s.bound_violations(), 0);
        assert!(ks_distance(&s.column(0), cauchy_cdf).unwrap() < 0.015);
        let bad = GenericDensity::power_law(1.5).unwrap();
        assert!(Mixer::for_generic(MixerConfig::new(3, 0.0), bad).is_err());
    }
}
