//! Representation-number engine: exact counts of integer matrices X with
//! X'SX = N for the catalog lattices, an optional per-solution weight
//! callback, diagonal-class tables, q-expansions and the persistent cache.

mod cache;
mod dfs;
mod expansion;
mod sweep;

pub use cache::{CacheError, RepCache, CACHE_FILE_NAME};
pub use expansion::QExpansion;
pub use sweep::KeySpace;

use crate::exact::GaussianRational;
use crate::lattices::{Catalog, LatticeBasis, LatticeId};
use crate::qforms::FourierIndex;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("index is not positive semidefinite")]
    NotPositiveSemidefinite,
    #[error("genus {0} exceeds the supported bound 5")]
    GenusTooLarge(usize),
    #[error("coefficient at {0} is outside the computed support")]
    MissingCoefficient(String),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("harmonic coefficient at {0} has nonzero imaginary part {1}")]
    NonRealCoefficient(String, String),
}

pub const MAX_GENUS: usize = 5;

/// Fixed vector stride of the shell storage (maximum catalog rank).
pub const STRIDE: usize = dfs::STRIDE;

/// One norm shell with precomputed Gram products, padded to STRIDE.
pub struct ShellData {
    pub norm: i64,
    pub rank: usize,
    pub count: usize,
    /// vectors, STRIDE entries each, sorted lexicographically
    raw: Vec<i16>,
    /// S*v for each vector, STRIDE entries each
    svecs: Vec<i16>,
}

impl ShellData {
    #[inline(always)]
    pub fn raw(&self, i: usize) -> &[i16] {
        &self.raw[i * STRIDE..(i + 1) * STRIDE]
    }

    #[inline(always)]
    pub fn svec(&self, i: usize) -> &[i16] {
        &self.svecs[i * STRIDE..(i + 1) * STRIDE]
    }

    pub fn stride(&self) -> usize {
        STRIDE
    }

    fn build(lat: &LatticeBasis, shell: &crate::lattices::NormShell) -> Self {
        let rank = lat.rank;
        let count = shell.count() as usize;
        let mut raw = vec![0i16; count * STRIDE];
        let mut svecs = vec![0i16; count * STRIDE];
        for (i, v) in shell.iter().enumerate() {
            for k in 0..rank {
                raw[i * STRIDE + k] = i16::try_from(v[k]).expect("coordinate fits i16");
            }
            for r in 0..rank {
                let mut s = 0i64;
                for c in 0..rank {
                    s += lat.gram_at(r, c) * v[c] as i64;
                }
                svecs[i * STRIDE + r] = i16::try_from(s).expect("Gram product fits i16");
            }
        }
        ShellData { norm: shell.norm, rank, count, raw, svecs }
    }
}

struct ShellSet {
    max_norm: i64,
    shells: Vec<Arc<ShellData>>,
}

/// The engine owns the catalog, materialized shells and the cache.
pub struct Engine {
    catalog: Catalog,
    bases: Mutex<HashMap<LatticeId, Arc<LatticeBasis>>>,
    shells: Mutex<HashMap<LatticeId, ShellSet>>,
    cache: Mutex<RepCache>,
    cache_dir: Option<PathBuf>,
}

impl Engine {
    pub fn new() -> Self {
        Engine {
            catalog: Catalog::new(),
            bases: Mutex::new(HashMap::new()),
            shells: Mutex::new(HashMap::new()),
            cache: Mutex::new(RepCache::new()),
            cache_dir: None,
        }
    }

    /// Engine bound to a cache directory: loads `repcache.v1` now, saves on
    /// `persist_cache`.
    pub fn with_cache_dir(dir: PathBuf) -> Result<Self, EngineError> {
        let mut e = Engine::new();
        e.cache.get_mut().unwrap().load_dir(&dir)?;
        e.cache_dir = Some(dir);
        Ok(e)
    }

    pub fn basis(&self, id: LatticeId) -> Arc<LatticeBasis> {
        let mut bases = self.bases.lock().unwrap();
        bases.entry(id).or_insert_with(|| self.catalog.get(id)).clone()
    }

    pub fn cache(&self) -> &Mutex<RepCache> {
        &self.cache
    }

    pub fn persist_cache(&self) -> Result<(), EngineError> {
        if let Some(dir) = &self.cache_dir {
            let mut cache = self.cache.lock().unwrap();
            if cache.is_dirty() {
                cache.save_dir(dir)?;
            }
        }
        Ok(())
    }

    /// Shell of norm `n`, materializing shells up to `n` on first use.
    pub fn shell(&self, id: LatticeId, n: i64) -> Arc<ShellData> {
        assert!(n >= 0);
        let mut sets = self.shells.lock().unwrap();
        let lat = self.basis(id);
        let set = sets.entry(id).or_insert_with(|| ShellSet { max_norm: -1, shells: Vec::new() });
        if set.max_norm < n {
            let shells = crate::lattices::enumerate_shells(&lat.gram, lat.rank, n);
            set.shells = shells.iter().map(|s| Arc::new(ShellData::build(&lat, s))).collect();
            set.max_norm = n;
        }
        set.shells[n as usize].clone()
    }

    fn validated(&self, n: &FourierIndex) -> Result<(), EngineError> {
        if n.genus() > MAX_GENUS {
            return Err(EngineError::GenusTooLarge(n.genus()));
        }
        if !n.is_psd() {
            return Err(EngineError::NotPositiveSemidefinite);
        }
        Ok(())
    }

    /// Exact number of matrices X over Z with X'SX = N.
    pub fn rep_number(&self, id: LatticeId, n: &FourierIndex) -> Result<u64, EngineError> {
        self.validated(n)?;
        if let Some(c) = self.cache.lock().unwrap().get(id, n) {
            return Ok(c);
        }
        let count = self.rep_number_uncached(id, n)?;
        self.cache.lock().unwrap().insert(id, n.clone(), count);
        Ok(count)
    }

    fn rep_number_uncached(&self, id: LatticeId, n: &FourierIndex) -> Result<u64, EngineError> {
        let g = n.genus();
        if g == 0 {
            return Ok(1);
        }
        // zero diagonal entries force zero columns (psd already checked)
        if let Some(i) = (0..g).find(|&i| n.entry(i, i) == 0) {
            debug_assert!((0..g).all(|j| n.entry(i, j) == 0));
            return self.rep_number(id, &n.delete_row_col(i));
        }
        if g == 1 {
            let d = n.entry(0, 0);
            let lat = self.basis(id);
            return Ok(lat.shell_count(d));
        }
        // order columns by shell size, smallest first
        let mut shells: Vec<Arc<ShellData>> = Vec::with_capacity(g);
        for j in 0..g {
            shells.push(self.shell(id, n.entry(j, j)));
        }
        if shells.iter().any(|s| s.count == 0) {
            return Ok(0);
        }
        let mut perm: Vec<usize> = (0..g).collect();
        perm.sort_by_key(|&j| shells[j].count);
        let np = n.permuted(&perm);
        let shells_p: Vec<Arc<ShellData>> = perm.iter().map(|&j| shells[j].clone()).collect();
        Ok(dfs::count_solutions(&shells_p, &np))
    }

    /// Visits every solution X (column-major, rank entries per column) in the
    /// verbatim column order of `n`.  Sequential and deterministic.
    pub fn for_each_solution(
        &self,
        id: LatticeId,
        n: &FourierIndex,
        visit: &mut impl FnMut(&[i32]),
    ) -> Result<(), EngineError> {
        self.validated(n)?;
        let lat = self.basis(id);
        let g = n.genus();
        let shells: Vec<Arc<ShellData>> = (0..g).map(|j| self.shell(id, n.entry(j, j))).collect();
        dfs::visit_solutions(&shells, n, lat.rank, visit);
        Ok(())
    }

    /// Sum of `weight(X)` over all solutions; the enumeration visits every
    /// solution exactly once (no orbit shortcuts).
    pub fn weighted_rep(
        &self,
        id: LatticeId,
        n: &FourierIndex,
        mut weight: impl FnMut(&[i32]) -> GaussianRational,
    ) -> Result<GaussianRational, EngineError> {
        let mut acc = GaussianRational::zero();
        self.for_each_solution(id, n, &mut |x| {
            acc += weight(x);
        })?;
        Ok(acc)
    }

    /// Complete table of a diagonal class: every psd index with the given
    /// diagonal, including zero counts.  Served from the cache when all
    /// indices of the class are present.
    pub fn diag_class_table(
        &self,
        id: LatticeId,
        diag: &[i64],
    ) -> Result<BTreeMap<FourierIndex, u64>, EngineError> {
        assert!(diag.len() <= MAX_GENUS, "genus too large");
        assert!(diag.iter().all(|&d| d >= 0));
        let g = diag.len();
        if g == 0 {
            return Ok([(FourierIndex::zero(0), 1u64)].into());
        }
        // zero diagonal entries: compute the reduced class and re-embed
        if diag.iter().any(|&d| d == 0) {
            let nz: Vec<usize> = (0..g).filter(|&i| diag[i] > 0).collect();
            let inner_diag: Vec<i64> = nz.iter().map(|&i| diag[i]).collect();
            let inner = self.diag_class_table(id, &inner_diag)?;
            let mut out = BTreeMap::new();
            for (key, count) in inner {
                let mut full = vec![0i64; g * g];
                for (a, &ia) in nz.iter().enumerate() {
                    for (b, &ib) in nz.iter().enumerate() {
                        full[ia * g + ib] = key.entry(a, b);
                    }
                }
                for i in 0..g {
                    full[i * g + i] = diag[i];
                }
                out.insert(FourierIndex::new(g, full).unwrap(), count);
            }
            return Ok(out);
        }
        if g == 1 {
            let n = FourierIndex::diag(diag);
            let c = self.rep_number(id, &n)?;
            return Ok([(n, c)].into());
        }

        let ks = KeySpace::new(diag);
        let psd = ks.psd_indices();
        {
            let cache = self.cache.lock().unwrap();
            if psd.iter().all(|(_, n)| cache.contains(id, n)) {
                return Ok(psd
                    .into_iter()
                    .map(|(_, n)| {
                        let c = cache.get(id, &n).unwrap();
                        (n, c)
                    })
                    .collect());
            }
        }

        let shells: Vec<Arc<ShellData>> = diag.iter().map(|&d| self.shell(id, d)).collect();
        let mut out = BTreeMap::new();
        if shells.iter().any(|s| s.count == 0) {
            for (_, n) in psd {
                out.insert(n, 0);
            }
        } else {
            let buckets = sweep::sweep_diag_class(&shells, &ks);
            let mut seen = vec![false; ks.size];
            for (key, n) in psd {
                out.insert(n, buckets[key]);
                seen[key] = true;
            }
            for (key, &count) in buckets.iter().enumerate() {
                assert!(
                    seen[key] || count == 0,
                    "solution counted at a non-psd index (enumeration bug)"
                );
            }
        }
        let mut cache = self.cache.lock().unwrap();
        for (n, &c) in &out {
            cache.insert(id, n.clone(), c);
        }
        Ok(out)
    }

    /// Merged tables over a set of diagonal patterns.
    pub fn table_for_diags<I>(
        &self,
        id: LatticeId,
        patterns: I,
    ) -> Result<BTreeMap<FourierIndex, u64>, EngineError>
    where
        I: IntoIterator<Item = Vec<i64>>,
    {
        let mut out = BTreeMap::new();
        for p in patterns {
            out.extend(self.diag_class_table(id, &p)?);
        }
        Ok(out)
    }

    /// All diagonal tuples (d_1..d_g) with d_i >= 0 and trace <= max_trace.
    pub fn trace_bounded_patterns(g: usize, max_trace: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; g];
        fn rec(k: usize, g: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if k == g {
                out.push(cur.clone());
                return;
            }
            for d in 0..=left {
                cur[k] = d;
                rec(k + 1, g, left - d, cur, out);
            }
        }
        rec(0, g, max_trace, &mut cur, &mut out);
        out
    }

    /// All diagonal tuples with 0 <= d_i <= max_diag.
    pub fn diag_bounded_patterns(g: usize, max_diag: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; g];
        fn rec(k: usize, g: usize, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if k == g {
                out.push(cur.clone());
                return;
            }
            for d in 0..=max {
                cur[k] = d;
                rec(k + 1, g, max, cur, out);
            }
        }
        rec(0, g, max_diag, &mut cur, &mut out);
        out
    }

    /// Coefficients of the genus-g theta series at all psd N with
    /// trace(N) <= max_trace.
    pub fn q_expansion(
        &self,
        id: LatticeId,
        genus: usize,
        max_trace: i64,
    ) -> Result<QExpansion, EngineError> {
        if genus > MAX_GENUS {
            return Err(EngineError::GenusTooLarge(genus));
        }
        let counts = self.table_for_diags(id, Self::trace_bounded_patterns(genus, max_trace))?;
        Ok(QExpansion::from_counts(genus, counts))
    }

    /// Coefficients at all psd N with diagonal entries <= max_diag.
    pub fn expansion_diag_bounded(
        &self,
        id: LatticeId,
        genus: usize,
        max_diag: i64,
    ) -> Result<QExpansion, EngineError> {
        if genus > MAX_GENUS {
            return Err(EngineError::GenusTooLarge(genus));
        }
        let counts = self.table_for_diags(id, Self::diag_bounded_patterns(genus, max_diag))?;
        Ok(QExpansion::from_counts(genus, counts))
    }
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn d4_index() -> FourierIndex {
        FourierIndex::new(4, vec![2, -1, 0, 0, -1, 2, -1, -1, 0, -1, 2, 0, 0, -1, 0, 2]).unwrap()
    }

    #[test]
    fn genus_one_reps_match_shell_counts() {
        let e = Engine::new();
        assert_eq!(e.rep_number(LatticeId::L(5), &FourierIndex::scalar(1)).unwrap(), 32);
        assert_eq!(e.rep_number(LatticeId::L(0), &FourierIndex::scalar(1)).unwrap(), 0);
        assert_eq!(e.rep_number(LatticeId::L(6), &FourierIndex::scalar(2)).unwrap(), 480);
    }

    #[test]
    fn zero_index_has_one_representation() {
        let e = Engine::new();
        for g in 0..=3 {
            assert_eq!(e.rep_number(LatticeId::L(3), &FourierIndex::zero(g)).unwrap(), 1);
        }
    }

    #[test]
    fn odd_diagonal_in_even_lattice_is_zero() {
        let e = Engine::new();
        let n = FourierIndex::diag(&[1, 2]);
        assert_eq!(e.rep_number(LatticeId::L(6), &n).unwrap(), 0);
        assert_eq!(e.rep_number(LatticeId::L(7), &n).unwrap(), 0);
    }

    #[test]
    fn non_psd_is_rejected() {
        let e = Engine::new();
        let n = FourierIndex::new(2, vec![1, 2, 2, 1]).unwrap();
        assert!(matches!(
            e.rep_number(LatticeId::L(5), &n),
            Err(EngineError::NotPositiveSemidefinite)
        ));
    }

    #[test]
    fn genus_two_identity_counts_orthogonal_pairs() {
        let e = Engine::new();
        // ordered pairs of orthogonal norm-1 vectors in Z^16: 32 * 30
        assert_eq!(e.rep_number(LatticeId::L(5), &FourierIndex::diag(&[1, 1])).unwrap(), 960);
        // dependent pair: y = x forced by b = 1
        let n = FourierIndex::new(2, vec![1, 1, 1, 1]).unwrap();
        assert_eq!(e.rep_number(LatticeId::L(5), &n).unwrap(), 32);
    }

    #[test]
    fn diag_class_table_matches_per_index_dfs() {
        let e = Engine::new();
        for id in [LatticeId::L(1), LatticeId::L(6)] {
            let table = e.diag_class_table(id, &[2, 2]).unwrap();
            for (n, &count) in &table {
                let direct = e.rep_number_uncached(id, n).unwrap();
                assert_eq!(direct, count, "{id} {n:?}");
            }
            // sum over the class equals |shell|^2
            let total: u64 = table.values().sum();
            let s = e.shell(id, 2).count as u64;
            assert_eq!(total, s * s, "{id}");
        }
    }

    #[test]
    fn diag_class_with_zero_rows_embeds_lower_genus() {
        let e = Engine::new();
        let t = e.diag_class_table(LatticeId::L(5), &[1, 0, 2]).unwrap();
        for (n, &c) in &t {
            assert_eq!(n.entry(1, 1), 0);
            assert_eq!(n.entry(0, 1), 0);
            let reduced = n.delete_row_col(1);
            assert_eq!(e.rep_number(LatticeId::L(5), &reduced).unwrap(), c);
        }
    }

    #[test]
    fn weighted_with_unit_weight_reproduces_count() {
        let e = Engine::new();
        let n = FourierIndex::scalar(2);
        let w = e
            .weighted_rep(LatticeId::L(5), &n, |_| GaussianRational::one())
            .unwrap();
        assert_eq!(w.re, rat(480));
        assert!(w.im.is_zero());
    }

    #[test]
    fn odd_weight_sums_to_zero() {
        let e = Engine::new();
        let n = FourierIndex::diag(&[1, 1]);
        // weight odd under X -> -X: first coordinate of first column
        let w = e
            .weighted_rep(LatticeId::L(5), &n, |x| {
                GaussianRational::from_parts(x[0] as i64, 0)
            })
            .unwrap();
        assert!(w.is_zero());
    }

    #[test]
    fn weight_on_zero_index_sees_zero_matrix() {
        let e = Engine::new();
        let n = FourierIndex::zero(2);
        let mut calls = 0;
        e.for_each_solution(LatticeId::L(6), &n, &mut |x| {
            calls += 1;
            assert!(x.iter().all(|&v| v == 0));
        })
        .unwrap();
        assert_eq!(calls, 1);
    }

    #[test]
    fn column_permutation_preserves_counts() {
        let e = Engine::new();
        let n = FourierIndex::new(3, vec![1, 1, 0, 1, 2, -1, 0, -1, 2]).unwrap();
        let perm = [2usize, 0, 1];
        let np = n.permuted(&perm);
        assert_eq!(
            e.rep_number(LatticeId::L(4), &n).unwrap(),
            e.rep_number(LatticeId::L(4), &np).unwrap()
        );
    }

    #[test]
    fn d4_rep_for_z16_matches_binomial_formula() {
        // 1152 * C(16,4): embeddings of the D4 root configuration
        let e = Engine::new();
        let c = e.rep_number(LatticeId::L(5), &d4_index()).unwrap();
        assert_eq!(c, 1152 * 1820);
    }

    #[test]
    fn cache_round_trip_through_engine() {
        let dir = tempfile::tempdir().unwrap();
        {
            let e = Engine::with_cache_dir(dir.path().to_path_buf()).unwrap();
            e.rep_number(LatticeId::L(5), &FourierIndex::scalar(3)).unwrap();
            e.persist_cache().unwrap();
        }
        {
            let e = Engine::with_cache_dir(dir.path().to_path_buf()).unwrap();
            let c = e.cache.lock().unwrap().get(LatticeId::L(5), &FourierIndex::scalar(3));
            assert_eq!(c, Some(4480));
        }
    }
}
