//! Orbit counting `N(s, z, w) = #{γ ∈ Γ : d(z, γw) ≤ s}`.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use super::geometry::{distance_from_u, ext_gcd, hyperbolic_distance, point_pair_invariant, HPoint, MoebiusMap};
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

/// Default cap on `2 cosh(radius)` for the integer scan, and on visited
/// elements for breadth-first search.
pub const DEFAULT_ORBIT_BUDGET: u64 = 10_000_000;

/// Group elements within distance `s_max`, sorted by distance.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitProfile {
    pub counter: &'static str,
    pub s_max: f64,
    pub z: HPoint,
    pub w: HPoint,
    /// `d(z, γw)` in increasing order.
    pub distances: Vec<f64>,
    /// The elements, in the same order as `distances`.
    pub elements: Vec<MoebiusMap>,
    /// False when the enumeration cannot guarantee it found every element.
    pub complete: bool,
    /// Whether the group is cocompact; PSL(2,ℤ) is not.
    pub cocompact: bool,
}

impl OrbitProfile {
    fn from_hits(
        counter: &dyn OrbitCounter,
        s_max: f64,
        z: HPoint,
        w: HPoint,
        mut hits: Vec<(f64, MoebiusMap)>,
        complete: bool,
    ) -> Self {
        hits.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let (distances, elements) = hits.into_iter().unzip();
        Self {
            counter: counter.name(),
            s_max,
            z,
            w,
            distances,
            elements,
            complete,
            cocompact: counter.cocompact(),
        }
    }

    /// `N(s)` for `0 ≤ s ≤ s_max`.
    pub fn count(&self, s: f64) -> Result<u64> {
        if s > self.s_max * (1.0 + 1e-15) {
            return Err(Error::InvalidArgument(format!(
                "radius {s} beyond the enumerated radius {}",
                self.s_max
            )));
        }
        Ok(self.distances.partition_point(|&d| d <= s) as u64)
    }

    /// Orbit distances in the open interval `(a, b)`: the jump points of `N`.
    pub fn jumps_between(&self, a: f64, b: f64) -> &[f64] {
        let lo = self.distances.partition_point(|&d| d <= a);
        let hi = self.distances.partition_point(|&d| d < b);
        &self.distances[lo..hi.max(lo)]
    }
}

/// A way to enumerate the orbit of a group within a ball.
pub trait OrbitCounter: Named + Send + Sync {
    /// Every `γ` with `d(z, γw) ≤ s_max`.
    fn profile(&self, s_max: f64, z: HPoint, w: HPoint, budget: u64) -> Result<OrbitProfile>;

    /// Covolume of the group, when known.
    fn volume(&self) -> Option<f64>;

    fn cocompact(&self) -> bool;

    fn count(&self, s: f64, z: HPoint, w: HPoint, budget: u64) -> Result<u64> {
        self.profile(s, z, w, budget)?.count(s)
    }
}

fn check_radius(s: f64) -> Result<()> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "radius must be finite and non-negative, got {s}"
        )));
    }
    Ok(())
}

/// Distance from `z` to `γw`, or `None` if it exceeds `s_max`.
fn within(g: &MoebiusMap, z: HPoint, w: HPoint, s_max: f64) -> Option<f64> {
    let d = distance_from_u(point_pair_invariant(z, g.apply(w)));
    (d <= s_max).then_some(d)
}

/// Complete enumeration for PSL(2,ℤ) by scanning integer matrices.
///
/// If `d(z, γw) ≤ s` then `d(i, γi) ≤ s + d(z, i) + d(i, w) =: ρ`, and
/// `a² + b² + c² + d² = 2 cosh d(i, γi)`. Each coprime bottom row `(c, d)`
/// with `c > 0`, or `(0, 1)`, fixes `γ` up to `a = a₀ + kc, b = b₀ + kd`,
/// and the norm bound confines `k` to an explicit interval.
#[derive(Debug, Default, Clone, Copy)]
pub struct ModularScan;

impl Named for ModularScan {
    fn name(&self) -> &'static str {
        "pslz"
    }
}

impl ModularScan {
    fn row_elements(c: i64, d: i64, bound: i128) -> Vec<MoebiusMap> {
        let n2 = c as i128 * c as i128 + d as i128 * d as i128;
        let rest = bound - n2;
        if rest < 1 {
            return Vec::new();
        }
        // a·d − b·c = 1 with (x, y) from x·d + y·c = 1.
        let (g, x, y) = ext_gcd(d, c);
        debug_assert_eq!(g.abs(), 1);
        let (a0, b0) = (x * g, -y * g);
        let n2f = n2 as f64;
        let k_star = -((a0 as f64) * c as f64 + (b0 as f64) * d as f64) / n2f;
        let half = ((rest as f64 - 1.0 / n2f).max(0.0) / n2f).sqrt();
        let k_lo = (k_star - half).floor() as i64 - 1;
        let k_hi = (k_star + half).ceil() as i64 + 1;
        (k_lo..=k_hi)
            .filter_map(|k| {
                let a = a0 + k * c;
                let b = b0 + k * d;
                let m = MoebiusMap { a, b, c, d };
                (m.frobenius_sq() <= bound).then_some(m)
            })
            .collect()
    }
}

impl OrbitCounter for ModularScan {
    fn profile(&self, s_max: f64, z: HPoint, w: HPoint, budget: u64) -> Result<OrbitProfile> {
        check_radius(s_max)?;
        let rho = s_max + hyperbolic_distance(z, HPoint::I) + hyperbolic_distance(HPoint::I, w);
        let bound_f = 2.0 * rho.cosh() * (1.0 + 1e-12) + 1e-9;
        if bound_f > budget as f64 {
            return Err(Error::BudgetExceeded(format!(
                "matrix norm bound {bound_f:.3e} for radius {s_max} exceeds {budget}"
            )));
        }
        let bound = bound_f.floor() as i128;
        let c_max = (bound as f64).sqrt() as i64 + 1;
        let hits: Vec<(f64, MoebiusMap)> = (0..=c_max)
            .into_par_iter()
            .map(|c| {
                let mut out = Vec::new();
                let rows: Vec<i64> = if c == 0 { vec![1] } else { (-c_max..=c_max).collect() };
                for d in rows {
                    if c != 0 && ext_gcd(c, d).0.abs() != 1 {
                        continue;
                    }
                    for m in Self::row_elements(c, d, bound) {
                        let m = MoebiusMap::new(m.a, m.b, m.c, m.d).expect("determinant one by construction");
                        if let Some(dist) = within(&m, z, w, s_max) {
                            out.push((dist, m));
                        }
                    }
                }
                out
            })
            .flatten()
            .collect();
        Ok(OrbitProfile::from_hits(self, s_max, z, w, hits, true))
    }

    fn volume(&self) -> Option<f64> {
        Some(std::f64::consts::FRAC_PI_3)
    }

    fn cocompact(&self) -> bool {
        false
    }
}

/// Breadth-first search over words in a generating set.
///
/// Elements whose displacement `d(i, γi)` exceeds the target radius by more
/// than `slack` are not expanded. Word length does not control
/// displacement monotonically, so the result is flagged as possibly
/// incomplete.
#[derive(Debug, Clone)]
pub struct GeneratorSearch {
    name: &'static str,
    generators: Vec<MoebiusMap>,
    slack: f64,
    volume: Option<f64>,
    cocompact: bool,
}

impl GeneratorSearch {
    pub fn new(
        name: &'static str,
        generators: Vec<MoebiusMap>,
        slack: f64,
        volume: Option<f64>,
        cocompact: bool,
    ) -> Self {
        let mut all = generators.clone();
        all.extend(generators.iter().map(MoebiusMap::inverse));
        all.sort();
        all.dedup();
        Self {
            name,
            generators: all,
            slack,
            volume,
            cocompact,
        }
    }

    /// PSL(2,ℤ) from `S` and `T`.
    pub fn modular() -> Self {
        Self::new(
            "pslz-bfs",
            vec![MoebiusMap::S, MoebiusMap::T],
            3.0,
            Some(std::f64::consts::FRAC_PI_3),
            false,
        )
    }
}

impl Named for GeneratorSearch {
    fn name(&self) -> &'static str {
        self.name
    }
}

impl OrbitCounter for GeneratorSearch {
    fn profile(&self, s_max: f64, z: HPoint, w: HPoint, budget: u64) -> Result<OrbitProfile> {
        check_radius(s_max)?;
        let rho = s_max + hyperbolic_distance(z, HPoint::I) + hyperbolic_distance(HPoint::I, w) + self.slack;
        let mut seen: HashSet<MoebiusMap> = HashSet::new();
        let mut queue = VecDeque::new();
        let mut hits = Vec::new();
        seen.insert(MoebiusMap::IDENTITY);
        queue.push_back(MoebiusMap::IDENTITY);
        while let Some(g) = queue.pop_front() {
            if let Some(d) = within(&g, z, w, s_max) {
                hits.push((d, g));
            }
            for h in &self.generators {
                let Some(next) = g.compose(h) else { continue };
                if seen.contains(&next) || hyperbolic_distance(HPoint::I, next.apply(HPoint::I)) > rho {
                    continue;
                }
                if seen.len() as u64 >= budget {
                    return Err(Error::BudgetExceeded(format!(
                        "breadth-first search visited {budget} elements before finishing radius {s_max}"
                    )));
                }
                seen.insert(next);
                queue.push_back(next);
            }
        }
        Ok(OrbitProfile::from_hits(self, s_max, z, w, hits, false))
    }

    fn volume(&self) -> Option<f64> {
        self.volume
    }

    fn cocompact(&self) -> bool {
        self.cocompact
    }
}

/// Built-in counters: `pslz` (complete scan) and `pslz-bfs`.
pub fn orbit_counters() -> Registry<dyn OrbitCounter> {
    let mut r: Registry<dyn OrbitCounter> = Registry::new();
    r.register(Box::new(ModularScan));
    r.register(Box::new(GeneratorSearch::modular()));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stabilizer_of_i() {
        let p = ModularScan.profile(0.0, HPoint::I, HPoint::I, 1000).unwrap();
        assert_eq!(p.count(0.0).unwrap(), 2);
        assert_eq!(p.elements, vec![MoebiusMap::S, MoebiusMap::IDENTITY]);
    }

    #[test]
    fn row_solution_has_unit_determinant() {
        for (c, d) in [(1, 0), (2, 1), (3, -2), (5, 7)] {
            for m in ModularScan::row_elements(c, d, 400) {
                assert_eq!(m.determinant(), 1);
            }
        }
    }

    #[test]
    fn registry_lists_counters() {
        let r = orbit_counters();
        assert_eq!(r.names(), vec!["pslz", "pslz-bfs"]);
        assert!(r.get("sl3z").is_err());
    }
}
