//! Min-violation planning: the seeker routes through its own walls when
//! that is cheaper than going round, and the crossings become requests.
//!
//! ```text
//! cargo run --release --example plan_with_violations -- [violation-cost]
//! ```

use tacit::game::Edge;
use tacit::seeker::min_violation_astar;
use tacit::{Cell, WallSet};

fn wall(a: (usize, usize), b: (usize, usize)) -> Edge {
    Edge::new(Cell::new(a.0, a.1), Cell::new(b.0, b.1)).unwrap()
}

fn main() -> anyhow::Result<()> {
    let cost: f64 = std::env::args().nth(1).map_or(Ok(3.0), |s| s.parse())?;
    let size = 5;
    // a vertical barrier between columns 1 and 2 with a gap in the bottom row
    let seeker: WallSet = (0..4).map(|r| wall((r, 1), (r, 2))).collect();
    let start = Cell::new(0, 0);
    let goal = Cell::new(0, 4);

    for (label, constraints) in [
        ("no beliefs", WallSet::new()),
        ("helper known blocked at row 0", [wall((0, 1), (0, 2))].into_iter().collect()),
        ("every crossing ruled out", seeker.clone()),
    ] {
        let plan = min_violation_astar(size, &seeker, start, goal, &constraints, cost);
        let path: Vec<&str> = plan.actions.iter().map(|a| a.name()).collect();
        println!("{label}: found={} length={} violations at {:?}", plan.found, path.len(), plan.violations);
        println!("  {path:?}");
    }
    Ok(())
}
