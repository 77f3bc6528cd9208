//! Voronoi-partition heuristic for the continuous k-medians problem.
//!
//! Each round clips the polygon into the Voronoi cells of the current
//! sites and moves every site to the area 1-median of its cell.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::area::{area_objective, solve_area};
use crate::boundary::SolveSettings;
use crate::error::{Error, Result};
use crate::geom::{Containment, ConvexPolygon, HalfPlane, Point};
use crate::oracle::{PolygonSampler, RngSeed};

/// Sites closer than this fraction of the diameter are redrawn at start-up.
pub const INIT_MIN_SEPARATION: f64 = 1e-3;
const INIT_MAX_DRAWS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct KMediansState {
    pub sites: Vec<Point>,
    /// Partition the sites were solved in; `None` for an empty cell.
    pub cells: Vec<Option<ConvexPolygon>>,
    /// Unnormalized area objective of each site over its cell.
    pub cell_objectives: Vec<f64>,
    pub total_objective: f64,
    /// Sites whose cell was empty and therefore did not move.
    pub frozen: Vec<bool>,
    pub iteration: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMediansSettings {
    /// Stop once no site moves farther than this.
    pub site_tol: f64,
    pub max_rounds: usize,
    /// Per-cell 1-median solves.
    pub cell: SolveSettings,
}

impl KMediansSettings {
    pub fn for_polygon(poly: &ConvexPolygon) -> Self {
        Self { site_tol: 1e-7 * poly.diameter(), max_rounds: 500, cell: SolveSettings::for_polygon(poly) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMediansRun {
    pub state: KMediansState,
    /// Total objective of the initial state and after each round.
    pub objective_trail: Vec<f64>,
    pub site_trail: Vec<Vec<Point>>,
    pub converged: bool,
}

/// Cell `i` is `poly` clipped by the bisectors against every other site.
pub fn voronoi_cells(poly: &ConvexPolygon, sites: &[Point]) -> Result<Vec<Option<ConvexPolygon>>> {
    if sites.is_empty() {
        return Err(Error::NoSites);
    }
    let eps = poly.eps_geom();
    for i in 0..sites.len() {
        for j in i + 1..sites.len() {
            if sites[i].dist(sites[j]) <= eps {
                return Err(Error::DuplicateSites(i, j));
            }
        }
    }
    sites
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut cell = Some(poly.clone());
            for (j, &other) in sites.iter().enumerate() {
                if i == j {
                    continue;
                }
                let h = HalfPlane::bisector(s, other)?;
                cell = match cell {
                    Some(c) => c.clip_halfplane(&h),
                    None => break,
                };
            }
            Ok(cell)
        })
        .collect()
}

fn cell_objectives(cells: &[Option<ConvexPolygon>], sites: &[Point]) -> Result<Vec<f64>> {
    cells
        .iter()
        .zip(sites)
        .enumerate()
        .map(|(index, (cell, &site))| match cell {
            Some(c) => area_objective(c, site, false).map_err(|e| Error::Cell { index, source: Box::new(e) }),
            None => Ok(0.0),
        })
        .collect()
}

impl KMediansState {
    /// Partition for `sites` with objectives evaluated at those sites.
    pub fn new(poly: &ConvexPolygon, sites: Vec<Point>) -> Result<Self> {
        let cells = voronoi_cells(poly, &sites)?;
        let cell_objectives = cell_objectives(&cells, &sites)?;
        let frozen = cells.iter().map(Option::is_none).collect();
        Ok(Self { total_objective: cell_objectives.iter().sum(), sites, cells, cell_objectives, frozen, iteration: 0 })
    }

    pub fn cell_area_sum(&self) -> f64 {
        self.cells.iter().flatten().map(ConvexPolygon::signed_area).sum()
    }
}

/// One round: repartition, then re-solve every non-empty cell.
pub fn kmedians_step(
    poly: &ConvexPolygon,
    state: &KMediansState,
    settings: &KMediansSettings,
) -> Result<KMediansState> {
    let cells = voronoi_cells(poly, &state.sites)?;
    let sites: Vec<Point> = cells
        .par_iter()
        .zip(state.sites.par_iter())
        .enumerate()
        .map(|(index, (cell, &site))| match cell {
            None => Ok(site),
            Some(c) => {
                let start = if c.contains(site) == Containment::Interior { site } else { c.vertex_centroid() };
                solve_area(c, Some(start), &settings.cell)
                    .map(|r| r.minimizer)
                    .map_err(|e| Error::Cell { index, source: Box::new(e) })
            }
        })
        .collect::<Result<_>>()?;
    let cell_objectives = cell_objectives(&cells, &sites)?;
    let frozen = cells.iter().map(Option::is_none).collect();
    Ok(KMediansState {
        total_objective: cell_objectives.iter().sum(),
        sites,
        cells,
        cell_objectives,
        frozen,
        iteration: state.iteration + 1,
    })
}

/// Seeded uniform sites inside `poly`, redrawing any that land within
/// [`INIT_MIN_SEPARATION`] diameters of an earlier one.
pub fn initial_sites(poly: &ConvexPolygon, k: usize, seed: RngSeed) -> Result<Vec<Point>> {
    if k == 0 {
        return Err(Error::NoSites);
    }
    let sampler = PolygonSampler::new(poly);
    let mut rng = seed.stream(u64::MAX);
    let min_sep = INIT_MIN_SEPARATION * poly.diameter();
    let mut sites: Vec<Point> = Vec::with_capacity(k);
    for _ in 0..INIT_MAX_DRAWS {
        if sites.len() == k {
            break;
        }
        let s = sampler.sample(&mut rng);
        if poly.contains(s) == Containment::Interior && sites.iter().all(|q| q.dist(s) > min_sep) {
            sites.push(s);
        }
    }
    if sites.len() < k {
        return Err(Error::InvalidSetting("could not place k separated sites"));
    }
    Ok(sites)
}

pub fn solve_kmedians(
    poly: &ConvexPolygon,
    k: usize,
    seed: RngSeed,
    settings: &KMediansSettings,
) -> Result<KMediansRun> {
    let sites = initial_sites(poly, k, seed)?;
    run_kmedians(poly, sites, settings)
}

/// Rounds from explicit starting sites until no site moves more than
/// `site_tol` or `max_rounds` is reached.
pub fn run_kmedians(poly: &ConvexPolygon, sites: Vec<Point>, settings: &KMediansSettings) -> Result<KMediansRun> {
    let mut state = KMediansState::new(poly, sites)?;
    let mut objective_trail = vec![state.total_objective];
    let mut site_trail = vec![state.sites.clone()];
    let mut converged = false;
    for _ in 0..settings.max_rounds {
        let next = kmedians_step(poly, &state, settings)?;
        let moved = next.sites.iter().zip(&state.sites).map(|(a, b)| a.dist(*b)).fold(0.0, f64::max);
        objective_trail.push(next.total_objective);
        site_trail.push(next.sites.clone());
        state = next;
        if moved < settings.site_tol {
            converged = true;
            break;
        }
    }
    Ok(KMediansRun { state, objective_trail, site_trail, converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn square() -> ConvexPolygon {
        ConvexPolygon::new(vec![p(1.0, 1.0), p(-1.0, 1.0), p(-1.0, -1.0), p(1.0, -1.0)]).unwrap()
    }

    #[test]
    fn single_site_cell_is_polygon() {
        let sq = square();
        let cells = voronoi_cells(&sq, &[p(0.3, 0.1)]).unwrap();
        assert_eq!(cells, vec![Some(sq)]);
    }

    #[test]
    fn two_sites_split_square() {
        let cells = voronoi_cells(&square(), &[p(-0.5, 0.0), p(0.5, 0.0)]).unwrap();
        for c in &cells {
            assert_eq!(c.as_ref().unwrap().signed_area(), 2.0);
        }
        let left = cells[0].as_ref().unwrap();
        assert!(left.vertices().iter().all(|v| v.x <= 0.0));
    }

    #[test]
    fn four_sites_make_unit_squares() {
        let sites = vec![p(0.5, 0.5), p(-0.5, 0.5), p(-0.5, -0.5), p(0.5, -0.5)];
        let cells = voronoi_cells(&square(), &sites).unwrap();
        for (c, s) in cells.iter().zip(&sites) {
            let c = c.as_ref().unwrap();
            assert_eq!(c.len(), 4);
            assert!((c.signed_area() - 1.0).abs() < 1e-15);
            assert!(c.centroid().dist(*s) < 1e-15);
        }
    }

    #[test]
    fn duplicate_sites_rejected() {
        assert_eq!(voronoi_cells(&square(), &[p(0.1, 0.1), p(0.1, 0.1)]), Err(Error::DuplicateSites(0, 1)));
        assert_eq!(voronoi_cells(&square(), &[]), Err(Error::NoSites));
    }

    #[test]
    fn far_site_gets_empty_cell() {
        // the outside site sees nothing of the square beyond its bisector
        let sites = vec![p(0.0, 0.0), p(10.0, 0.0)];
        let state = KMediansState::new(&square(), sites).unwrap();
        assert!(state.cells[1].is_none());
        assert_eq!(state.frozen, vec![false, true]);
        let next = kmedians_step(&square(), &state, &KMediansSettings::for_polygon(&square())).unwrap();
        assert_eq!(next.sites[1], p(10.0, 0.0));
    }

    #[test]
    fn symmetric_configuration_is_fixed() {
        let sq = square();
        let sites = vec![p(0.5, 0.5), p(-0.5, 0.5), p(-0.5, -0.5), p(0.5, -0.5)];
        let state = KMediansState::new(&sq, sites.clone()).unwrap();
        let next = kmedians_step(&sq, &state, &KMediansSettings::for_polygon(&sq)).unwrap();
        for (a, b) in next.sites.iter().zip(&sites) {
            assert!(a.dist(*b) < 1e-6);
        }
    }

    #[test]
    fn initial_sites_are_deterministic() {
        let sq = square();
        let a = initial_sites(&sq, 5, RngSeed(42)).unwrap();
        assert_eq!(a, initial_sites(&sq, 5, RngSeed(42)).unwrap());
        assert_ne!(a, initial_sites(&sq, 5, RngSeed(43)).unwrap());
        assert!(a.iter().all(|&s| sq.contains(s) == Containment::Interior));
        assert_eq!(initial_sites(&sq, 0, RngSeed(1)), Err(Error::NoSites));
    }
}
