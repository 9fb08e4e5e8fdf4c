use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HarnessError;
use crate::game::{interior_edges, Cell, GameConfig, WallSet};

pub const DEFAULT_DENSITY: f64 = 0.25;
pub const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MazeParams {
    pub size: usize,
    /// Fraction of interior edges walled on each board, drawn independently per board.
    pub density: f64,
}

impl MazeParams {
    pub fn new(size: usize) -> Self {
        MazeParams {
            size,
            density: DEFAULT_DENSITY,
        }
    }

    pub fn with_density(mut self, density: f64) -> Self {
        self.density = density;
        self
    }
}

fn random_walls(rng: &mut ChaCha8Rng, size: usize, density: f64) -> WallSet {
    let edges = interior_edges(size);
    let count = ((edges.len() as f64) * density.clamp(0.0, 1.0)).round() as usize;
    sample(rng, edges.len(), count)
        .into_iter()
        .map(|i| edges[i])
        .collect()
}

fn random_cell(rng: &mut ChaCha8Rng, size: usize) -> Cell {
    Cell::new(rng.random_range(0..size), rng.random_range(0..size))
}

/// One board with distinct init and goal, redrawn until the goal is
/// reachable through moves passable for at least one player.
pub fn gen_maze(params: MazeParams, seed: u64) -> Result<GameConfig, HarnessError> {
    gen_layout(params, 1, seed).map(|mut v| v.remove(0))
}

/// A wall layout with one init cell and `treasures` distinct goals, each a
/// separate configuration. The whole layout is redrawn if any goal is
/// cooperatively unreachable.
pub fn gen_layout(params: MazeParams, treasures: usize, seed: u64) -> Result<Vec<GameConfig>, HarnessError> {
    let size = params.size;
    if size < 2 {
        return Err(HarnessError::GenerationFailed {
            size,
            attempts: 0,
        });
    }
    let treasures = treasures.max(1);
    if treasures >= size * size {
        return Err(HarnessError::GenerationFailed {
            size,
            attempts: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        let seeker = random_walls(&mut rng, size, params.density);
        let helper = random_walls(&mut rng, size, params.density);
        let init = random_cell(&mut rng, size);
        let mut goals = Vec::with_capacity(treasures);
        while goals.len() < treasures {
            let g = random_cell(&mut rng, size);
            if g != init && !goals.contains(&g) {
                goals.push(g);
            }
        }
        let configs: Result<Vec<_>, _> = goals
            .into_iter()
            .map(|g| GameConfig::new(size, seeker.clone(), helper.clone(), init, g))
            .collect();
        if let Ok(configs) = configs {
            return Ok(configs);
        }
    }
    Err(HarnessError::GenerationFailed {
        size,
        attempts: MAX_REJECTIONS,
    })
}
