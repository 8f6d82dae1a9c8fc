//! Cell geometry, path loss, and sparse angular-domain channel synthesis.
//!
//! Channels are generated directly in the angular (beamspace) domain: each
//! user-cell link gets a small support of angle bins, shared by all
//! subcarriers, and complex Gaussian coefficients whose total power equals
//! the link's large-scale gain. Physically close users share part of their
//! support through a per-subgroup common core.

use crate::error::SimError;
use crate::linalg::{CMat, C_ZERO};
use crate::Result;
use num_complex::Complex64;
use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// Unitary angular transform at the BS array (fixed to the DFT).
#[derive(Debug, Clone)]
pub struct AngularTransform {
    f: CMat,
}

/// M-point unitary DFT: entry `(a, b) = exp(-j 2π a b / M) / sqrt(M)`.
pub fn unitary_dft(m: usize) -> Result<AngularTransform> {
    if m == 0 {
        return Err(SimError::InvalidDimension(
            "angular transform size must be >= 1".into(),
        ));
    }
    let scale = 1.0 / (m as f64).sqrt();
    let f = CMat::from_fn(m, m, |a, b| {
        // a*b can overflow a naive product for huge M; reduce mod M first.
        let phase = -2.0 * PI * ((a * b) % m) as f64 / m as f64;
        Complex64::from_polar(scale, phase)
    });
    Ok(AngularTransform { f })
}

impl AngularTransform {
    pub fn size(&self) -> usize {
        self.f.rows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.f
    }

    /// Spatial-domain vector `h = F h_ang` from a sparse angular vector.
    pub fn to_spatial(&self, support: &SupportSet, coeffs: &[Complex64]) -> Vec<Complex64> {
        let m = self.size();
        let mut out = vec![C_ZERO; m];
        for (pos, &bin) in support.as_slice().iter().enumerate() {
            let col = self.f.col(bin);
            let c = coeffs[pos];
            for i in 0..m {
                out[i] += col[i] * c;
            }
        }
        out
    }

    /// Angular-domain vector `F^H h` from a dense spatial vector.
    pub fn to_angular(&self, spatial: &[Complex64]) -> Vec<Complex64> {
        let m = self.size();
        let mut out = vec![C_ZERO; m];
        for b in 0..m {
            out[b] = crate::linalg::dot_conj(self.f.col(b), spatial);
        }
        out
    }
}

/// Distance-based path loss `1 / max(d, d_min)^alpha`.
#[derive(Debug, Clone, Copy)]
pub struct PathLossModel {
    /// Path-loss exponent.
    pub alpha: f64,
    /// Near-field clamp in km.
    pub d_min: f64,
}

impl Default for PathLossModel {
    fn default() -> Self {
        PathLossModel {
            alpha: 3.8,
            d_min: 0.035,
        }
    }
}

/// Linear power gain at distance `d` km.
pub fn path_loss(d: f64, model: &PathLossModel) -> f64 {
    debug_assert!(d >= 0.0, "negative distance");
    model.d_min.max(d).powf(-model.alpha)
}

/// Base-station positions of the simulated cluster.
#[derive(Debug, Clone)]
pub struct CellLayout {
    pub bs_positions: Vec<[f64; 2]>,
    pub radius_km: f64,
}

impl CellLayout {
    pub fn cells(&self) -> usize {
        self.bs_positions.len()
    }

    pub fn distance(&self, cell: usize, pos: [f64; 2]) -> f64 {
        let b = self.bs_positions[cell];
        ((pos[0] - b[0]).powi(2) + (pos[1] - b[1]).powi(2)).sqrt()
    }
}

/// Central BS at the origin plus, for `l = 7`, a hexagonal ring of six
/// neighbors at distance `sqrt(3) * radius`.
pub fn hex_layout(l: usize, radius_km: f64) -> Result<CellLayout> {
    if radius_km <= 0.0 {
        return Err(SimError::config("radius_km", "must be positive"));
    }
    let mut bs_positions = vec![[0.0, 0.0]];
    match l {
        1 => {}
        7 => {
            let d = 3f64.sqrt() * radius_km;
            for i in 0..6 {
                let ang = PI / 3.0 * i as f64;
                bs_positions.push([d * ang.cos(), d * ang.sin()]);
            }
        }
        other => {
            return Err(SimError::config(
                "L",
                format!("unsupported cell count {other}; this simulator supports 1 or 7"),
            ))
        }
    }
    Ok(CellLayout {
        bs_positions,
        radius_km,
    })
}

/// One dropped user group: positions and the distance to every BS.
#[derive(Debug, Clone)]
pub struct UserDrop {
    pub positions: Vec<[f64; 2]>,
    /// `distances[k][l]` in km.
    pub distances: Vec<Vec<f64>>,
}

/// Place `k_users` on the central cell edge, angles i.i.d. uniform inside a
/// sector of `sector_deg` degrees whose center is itself drawn uniformly.
pub fn drop_edge_group(
    layout: &CellLayout,
    k_users: usize,
    sector_deg: f64,
    rng: &mut impl Rng,
) -> UserDrop {
    let center = rng.gen::<f64>() * 2.0 * PI;
    let half = sector_deg.to_radians() / 2.0;
    let mut positions = Vec::with_capacity(k_users);
    let mut distances = Vec::with_capacity(k_users);
    for _ in 0..k_users {
        let ang = center + (rng.gen::<f64>() * 2.0 - 1.0) * half;
        let pos = [
            layout.radius_km * ang.cos(),
            layout.radius_km * ang.sin(),
        ];
        distances.push((0..layout.cells()).map(|l| layout.distance(l, pos)).collect());
        positions.push(pos);
    }
    UserDrop {
        positions,
        distances,
    }
}

/// Sorted, duplicate-free set of angle-bin indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    indices: Vec<usize>,
}

impl SupportSet {
    pub fn new(mut indices: Vec<usize>, m: usize) -> Result<Self> {
        indices.sort_unstable();
        for w in indices.windows(2) {
            if w[0] == w[1] {
                return Err(SimError::InvalidArgument(format!(
                    "duplicate support index {}",
                    w[0]
                )));
            }
        }
        if let Some(&last) = indices.last() {
            if last >= m {
                return Err(SimError::InvalidArgument(format!(
                    "support index {last} out of range for M={m}"
                )));
            }
        }
        Ok(SupportSet { indices })
    }

    pub fn empty() -> Self {
        SupportSet {
            indices: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }

    pub fn intersection_size(&self, other: &SupportSet) -> usize {
        self.indices
            .iter()
            .filter(|i| other.contains(**i))
            .count()
    }

    /// Indices shifted by a block offset (for stacking per-cell supports into
    /// an aggregate vector).
    pub fn offset_by(&self, off: usize) -> Vec<usize> {
        self.indices.iter().map(|i| i + off).collect()
    }
}

/// Per-subgroup structured supports for one cell.
///
/// A common core of `c_overlap` bins is drawn once; every subgroup extends it
/// with `s - c_overlap` extra bins drawn from the remaining pool,
/// independently across subgroups. Users inside a subgroup share the
/// subgroup's support exactly, so the group-wide intersection always contains
/// the core.
pub fn sample_group_supports(
    m: usize,
    s: usize,
    c_overlap: usize,
    subgroup_sizes: &[usize],
    rng: &mut impl Rng,
) -> Result<Vec<SupportSet>> {
    if s > m {
        return Err(SimError::config("s", format!("sparsity {s} exceeds M={m}")));
    }
    if c_overlap > s {
        return Err(SimError::config(
            "c_overlap",
            format!("overlap {c_overlap} exceeds sparsity {s}"),
        ));
    }
    if subgroup_sizes.is_empty() || subgroup_sizes.iter().any(|&g| g == 0) {
        return Err(SimError::config("subgroups", "subgroup sizes must be positive"));
    }
    let core: Vec<usize> = index::sample(rng, m, c_overlap).into_vec();
    let pool: Vec<usize> = (0..m).filter(|i| !core.contains(i)).collect();
    let mut out = Vec::new();
    for &size in subgroup_sizes {
        let extra = index::sample(rng, pool.len(), s - c_overlap);
        let mut idx = core.clone();
        idx.extend(extra.iter().map(|i| pool[i]));
        let support = SupportSet::new(idx, m)?;
        for _ in 0..size {
            out.push(support.clone());
        }
    }
    Ok(out)
}

/// One user-cell link: support, large-scale gain, and per-subcarrier
/// coefficients on the support (column `p` holds subcarrier `p`).
#[derive(Debug, Clone)]
pub struct LinkChannel {
    pub support: SupportSet,
    pub gain: f64,
    coeffs: CMat,
}

impl LinkChannel {
    /// Coefficients of subcarrier `p`, aligned with `support.as_slice()`.
    pub fn coeffs(&self, p: usize) -> &[Complex64] {
        self.coeffs.col(p)
    }
}

/// Sparse angular channels for a whole user group across all cells.
#[derive(Debug, Clone)]
pub struct AngularChannelSet {
    users: usize,
    cells: usize,
    subcarriers: usize,
    bins: usize,
    links: Vec<LinkChannel>,
}

impl AngularChannelSet {
    pub fn users(&self) -> usize {
        self.users
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn link(&self, k: usize, l: usize) -> &LinkChannel {
        &self.links[k * self.cells + l]
    }

    /// Angular coefficient `h_ang[k, l, p, bin]`; zero off the support.
    pub fn entry(&self, k: usize, l: usize, p: usize, bin: usize) -> Complex64 {
        let link = self.link(k, l);
        match link.support.as_slice().binary_search(&bin) {
            Ok(pos) => link.coeffs(p)[pos],
            Err(_) => C_ZERO,
        }
    }

    /// Dense angular vector for one `(k, l, p)` triple.
    pub fn angular_vec(&self, k: usize, l: usize, p: usize) -> Vec<Complex64> {
        let mut v = vec![C_ZERO; self.bins];
        let link = self.link(k, l);
        for (pos, &bin) in link.support.as_slice().iter().enumerate() {
            v[bin] = link.coeffs(p)[pos];
        }
        v
    }
}

/// Draw i.i.d. circularly-symmetric Gaussian coefficients on each link's
/// support, variance `gain / s` per bin so the expected link energy equals
/// the large-scale gain. Supports are shared by all subcarriers; coefficient
/// values are independent across subcarriers.
pub fn synthesize_channels(
    supports: &[Vec<SupportSet>],
    gains: &[Vec<f64>],
    subcarriers: usize,
    bins: usize,
    rng: &mut impl Rng,
) -> Result<AngularChannelSet> {
    let users = supports.len();
    if users == 0 || gains.len() != users {
        return Err(SimError::InvalidArgument(
            "supports and gains must cover the same users".into(),
        ));
    }
    let cells = supports[0].len();
    if cells == 0 || gains.iter().any(|g| g.len() != cells) {
        return Err(SimError::InvalidArgument(
            "supports and gains must cover the same cells".into(),
        ));
    }
    let mut links = Vec::with_capacity(users * cells);
    for k in 0..users {
        if supports[k].len() != cells {
            return Err(SimError::InvalidArgument(
                "ragged support table".into(),
            ));
        }
        for l in 0..cells {
            let support = supports[k][l].clone();
            let gain = gains[k][l];
            if gain < 0.0 {
                return Err(SimError::InvalidArgument("negative gain".into()));
            }
            if support.is_empty() && gain > 0.0 {
                return Err(SimError::InvalidArgument(format!(
                    "empty support with positive gain for user {k}, cell {l}"
                )));
            }
            let s = support.len();
            let sigma = if s > 0 { (gain / s as f64 / 2.0).sqrt() } else { 0.0 };
            let coeffs = CMat::from_fn(s, subcarriers, |_, _| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re * sigma, im * sigma)
            });
            links.push(LinkChannel {
                support,
                gain,
                coeffs,
            });
        }
    }
    Ok(AngularChannelSet {
        users,
        cells,
        subcarriers,
        bins,
        links,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // Frozen with 30-digit arithmetic: 2^-3.8 and 0.01^-3.8.
    const POW_2_NEG38: f64 = 0.071793647187314688;
    const POW_001_NEG38: f64 = 39810717.055349725;

    #[test]
    fn dft_m1_is_identity() {
        let f = unitary_dft(1).unwrap();
        assert!((f.matrix()[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn dft_m2_is_scaled_hadamard() {
        let f = unitary_dft(2).unwrap();
        let r = 0.5f64.sqrt();
        let expect = [
            [Complex64::new(r, 0.0), Complex64::new(r, 0.0)],
            [Complex64::new(r, 0.0), Complex64::new(-r, 0.0)],
        ];
        for i in 0..2 {
            for j in 0..2 {
                assert!((f.matrix()[(i, j)] - expect[i][j]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn dft_m8_is_unitary() {
        let f = unitary_dft(8).unwrap();
        let gram = f.matrix().herm_mul(f.matrix());
        let err = gram.sub(&CMat::identity(8)).max_abs();
        assert!(err < 1e-12, "unitarity error {err}");
    }

    #[test]
    fn dft_m0_rejected() {
        assert!(unitary_dft(0).is_err());
    }

    #[test]
    fn path_loss_reference_points() {
        let model = PathLossModel {
            alpha: 3.8,
            d_min: 0.01,
        };
        assert!((path_loss(1.0, &model) - 1.0).abs() < 1e-15);
        assert!((path_loss(2.0, &model) - POW_2_NEG38).abs() < 1e-12 * POW_2_NEG38);
        assert!((path_loss(0.0, &model) - POW_001_NEG38).abs() < 1e-6 * POW_001_NEG38);
    }

    #[test]
    fn hex_layout_geometry() {
        let single = hex_layout(1, 1.0).unwrap();
        assert_eq!(single.cells(), 1);
        assert_eq!(single.bs_positions[0], [0.0, 0.0]);

        let seven = hex_layout(7, 1.0).unwrap();
        assert_eq!(seven.cells(), 7);
        let d = 3f64.sqrt();
        for l in 1..7 {
            let dist = seven.distance(l, [0.0, 0.0]);
            assert!((dist - d).abs() < 1e-12, "cell {l} at distance {dist}");
        }
        // All pairwise BS distances positive.
        for a in 0..7 {
            for b in a + 1..7 {
                assert!(seven.distance(a, seven.bs_positions[b]) > 1e-9);
            }
        }

        assert!(matches!(
            hex_layout(3, 1.0),
            Err(SimError::InvalidConfig { .. })
        ));
    }

    #[test]
    fn drop_edge_group_constraints() {
        let layout = hex_layout(7, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let drop = drop_edge_group(&layout, 10, 60.0, &mut rng);
            for (k, pos) in drop.positions.iter().enumerate() {
                let r = (pos[0].powi(2) + pos[1].powi(2)).sqrt();
                assert!((r - 1.0).abs() < 1e-12);
                // Every user is within the cluster radius of at least one BS.
                let dmin = drop.distances[k]
                    .iter()
                    .cloned()
                    .fold(f64::INFINITY, f64::min);
                assert!(dmin <= 1.0 + 1e-12);
            }
            // Sector membership: pairwise angle gaps below the sector width.
            let angles: Vec<f64> = drop
                .positions
                .iter()
                .map(|p| p[1].atan2(p[0]))
                .collect();
            for i in 0..angles.len() {
                for j in i + 1..angles.len() {
                    let mut gap = (angles[i] - angles[j]).abs();
                    if gap > PI {
                        gap = 2.0 * PI - gap;
                    }
                    assert!(gap < 60f64.to_radians() + 1e-12);
                }
            }
        }
    }

    #[test]
    fn group_supports_overlap_and_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        // Two singleton subgroups: intersection at least the core size.
        for _ in 0..50 {
            let sup = sample_group_supports(128, 6, 4, &[1, 1], &mut rng).unwrap();
            assert_eq!(sup.len(), 2);
            assert_eq!(sup[0].len(), 6);
            assert_eq!(sup[1].len(), 6);
            assert!(sup[0].intersection_size(&sup[1]) >= 4);
        }
        // Single user: a plain support of size s.
        let single = sample_group_supports(16, 5, 3, &[1], &mut rng).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].len(), 5);
        // Saturation: s = M covers every bin for every user.
        let full = sample_group_supports(8, 8, 2, &[2, 2], &mut rng).unwrap();
        for s in &full {
            assert_eq!(s.as_slice(), (0..8).collect::<Vec<_>>().as_slice());
        }
        // Invalid configurations.
        assert!(sample_group_supports(8, 9, 2, &[1], &mut rng).is_err());
        assert!(sample_group_supports(8, 3, 4, &[1], &mut rng).is_err());
    }

    #[test]
    fn synthesized_channels_respect_support_and_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = 8;
        let support = SupportSet::new(vec![2, 5], m).unwrap();
        let supports = vec![vec![support.clone()]];
        let gains = vec![vec![0.7]];
        let ch = synthesize_channels(&supports, &gains, 4, m, &mut rng).unwrap();
        for p in 0..4 {
            for bin in 0..m {
                let v = ch.entry(0, 0, p, bin);
                if bin == 2 || bin == 5 {
                    assert!(v.norm() > 0.0);
                } else {
                    assert_eq!(v, C_ZERO);
                }
            }
        }

        // Zero gain produces an all-zero link.
        let ch0 = synthesize_channels(&supports, &vec![vec![0.0]], 2, m, &mut rng).unwrap();
        assert_eq!(ch0.link(0, 0).coeffs(0).iter().map(|z| z.norm()).sum::<f64>(), 0.0);

        // Empty support with positive gain is rejected.
        let bad = synthesize_channels(
            &vec![vec![SupportSet::empty()]],
            &vec![vec![1.0]],
            2,
            m,
            &mut rng,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn monte_carlo_energy_matches_gain() {
        // E ||h_ang||^2 == gain, checked over 10^4 draws within 3%.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = 16;
        let support = SupportSet::new(vec![0, 3, 7, 9], m).unwrap();
        let gain = 0.45;
        let draws = 10_000;
        let mut acc = 0.0;
        for _ in 0..draws {
            let ch = synthesize_channels(
                &vec![vec![support.clone()]],
                &vec![vec![gain]],
                1,
                m,
                &mut rng,
            )
            .unwrap();
            acc += ch.link(0, 0).coeffs(0).iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        let mean = acc / draws as f64;
        assert!(
            (mean - gain).abs() < 0.03 * gain,
            "mean energy {mean} vs gain {gain}"
        );
    }

    #[test]
    fn transform_round_trip_and_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = 32;
        let f = unitary_dft(m).unwrap();
        let support = SupportSet::new(vec![1, 4, 20], m).unwrap();
        let ch = synthesize_channels(
            &vec![vec![support.clone()]],
            &vec![vec![1.0]],
            1,
            m,
            &mut rng,
        )
        .unwrap();
        let ang = ch.angular_vec(0, 0, 0);
        let spatial = f.to_spatial(&support, ch.link(0, 0).coeffs(0));
        let back = f.to_angular(&spatial);
        let err: f64 = ang
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let norm_ang: f64 = ang.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(err < 1e-10 * norm_ang.max(1.0));
        let norm_sp: f64 = spatial.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm_sp - norm_ang).abs() < 1e-10 * norm_ang);
    }
}
