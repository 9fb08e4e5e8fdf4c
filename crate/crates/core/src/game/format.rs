//! Maze files: one JSON object per file with `size`, `seeker_walls`,
//! `helper_walls`, `init` and `goal`. Walls are `[r1, c1, r2, c2]` in
//! canonical order, one per line when written by this crate.

use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use super::{Cell, Edge, GameConfig, GameError, WallSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct MazeFormatError {
    pub line: usize,
    pub message: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaze {
    size: usize,
    seeker_walls: Vec<[usize; 4]>,
    helper_walls: Vec<[usize; 4]>,
    init: [usize; 2],
    goal: [usize; 2],
}

pub(super) fn write_maze(cfg: &GameConfig) -> String {
    fn walls(out: &mut String, key: &str, ws: &WallSet, last: bool) {
        if ws.is_empty() {
            let _ = writeln!(out, "  \"{key}\": []{}", if last { "" } else { "," });
            return;
        }
        let _ = writeln!(out, "  \"{key}\": [");
        let n = ws.len();
        for (i, e) in ws.iter().enumerate() {
            let (a, b) = e.cells();
            let sep = if i + 1 < n { "," } else { "" };
            let _ = writeln!(out, "    [{}, {}, {}, {}]{sep}", a.row, a.col, b.row, b.col);
        }
        let _ = writeln!(out, "  ]{}", if last { "" } else { "," });
    }

    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"size\": {},", cfg.size());
    walls(&mut out, "seeker_walls", cfg.seeker_walls(), false);
    walls(&mut out, "helper_walls", cfg.helper_walls(), false);
    let _ = writeln!(out, "  \"init\": [{}, {}],", cfg.init().row, cfg.init().col);
    let _ = writeln!(out, "  \"goal\": [{}, {}]", cfg.goal().row, cfg.goal().col);
    out.push_str("}\n");
    out
}

pub(super) fn parse_maze(text: &str) -> Result<GameConfig, MazeFormatError> {
    let raw: RawMaze = serde_json::from_str(text).map_err(|e| MazeFormatError {
        line: e.line(),
        message: e.to_string(),
    })?;
    let err_at = |line: usize, message: String| MazeFormatError { line, message };

    let mut sets = Vec::with_capacity(2);
    for key in ["seeker_walls", "helper_walls"] {
        let list = if key == "seeker_walls" {
            &raw.seeker_walls
        } else {
            &raw.helper_walls
        };
        let mut set = WallSet::new();
        let mut prev: Option<Edge> = None;
        for (i, w) in list.iter().enumerate() {
            let line = element_line(text, key, i);
            let a = Cell::new(w[0], w[1]);
            let b = Cell::new(w[2], w[3]);
            let edge = Edge::new(a, b)
                .ok_or_else(|| err_at(line, format!("{key}[{i}]: cells {a} and {b} are not adjacent")))?;
            if edge.cells() != (a, b) {
                return Err(err_at(line, format!("{key}[{i}]: edge {edge} not in canonical order")));
            }
            if !edge.in_bounds(raw.size) {
                return Err(err_at(line, format!("{key}[{i}]: edge {edge} leaves the board")));
            }
            if prev.is_some_and(|p| p >= edge) || !set.insert(edge) {
                return Err(err_at(line, format!("{key}[{i}]: duplicate or unsorted edge {edge}")));
            }
            prev = Some(edge);
        }
        sets.push(set);
    }
    let helper = sets.pop().unwrap_or_default();
    let seeker = sets.pop().unwrap_or_default();

    let init = Cell::new(raw.init[0], raw.init[1]);
    let goal = Cell::new(raw.goal[0], raw.goal[1]);
    GameConfig::new(raw.size, seeker, helper, init, goal).map_err(|e| {
        let key = match e {
            GameError::SizeTooSmall(_) => "size",
            GameError::OutOfBounds(c) if c == init => "init",
            _ => "goal",
        };
        err_at(key_line(text, key), e.to_string())
    })
}

fn line_of(text: &str, byte: usize) -> usize {
    text[..byte].bytes().filter(|&b| b == b'\n').count() + 1
}

fn key_line(text: &str, key: &str) -> usize {
    text.find(&format!("\"{key}\""))
        .map_or(1, |pos| line_of(text, pos))
}

/// Line of the `index`-th inner array of the array stored under `key`.
fn element_line(text: &str, key: &str, index: usize) -> usize {
    let Some(key_pos) = text.find(&format!("\"{key}\"")) else {
        return 1;
    };
    let mut depth = 0usize;
    let mut seen = 0usize;
    for (off, ch) in text[key_pos..].char_indices() {
        match ch {
            '[' => {
                depth += 1;
                if depth == 2 {
                    if seen == index {
                        return line_of(text, key_pos + off);
                    }
                    seen += 1;
                }
            }
            ']' => {
                depth = depth.saturating_sub(1);
                if depth == 0 {
                    break;
                }
            }
            _ => {}
        }
    }
    key_line(text, key)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
  "size": 3,
  "seeker_walls": [
    [0, 0, 0, 1],
    [1, 1, 1, 2]
  ],
  "helper_walls": [],
  "init": [0, 0],
  "goal": [2, 2]
}
"#;

    #[test]
    fn parses_and_rewrites_identically() {
        let cfg = parse_maze(SAMPLE).unwrap();
        assert_eq!(cfg.seeker_walls().len(), 2);
        assert_eq!(write_maze(&cfg), SAMPLE);
    }

    #[test]
    fn rejects_non_adjacent_wall_with_its_line() {
        let bad = SAMPLE.replace("[1, 1, 1, 2]", "[1, 1, 2, 2]");
        let err = parse_maze(&bad).unwrap_err();
        assert_eq!(err.line, 5);
        assert!(err.message.contains("not adjacent"));
    }

    #[test]
    fn rejects_reversed_and_duplicate_edges() {
        let rev = SAMPLE.replace("[0, 0, 0, 1]", "[0, 1, 0, 0]");
        assert_eq!(parse_maze(&rev).unwrap_err().line, 4);
        let dup = SAMPLE.replace("[1, 1, 1, 2]", "[0, 0, 0, 1]");
        assert_eq!(parse_maze(&dup).unwrap_err().line, 5);
    }

    #[test]
    fn rejects_goal_problems_on_goal_line() {
        let same = SAMPLE.replace("\"goal\": [2, 2]", "\"goal\": [0, 0]");
        assert_eq!(parse_maze(&same).unwrap_err().line, 9);
        let out = SAMPLE.replace("\"init\": [0, 0]", "\"init\": [5, 0]");
        assert_eq!(parse_maze(&out).unwrap_err().line, 8);
    }

    #[test]
    fn syntax_errors_carry_serde_line() {
        let broken = SAMPLE.replace("\"helper_walls\": [],", "\"helper_walls\": [,");
        assert_eq!(parse_maze(&broken).unwrap_err().line, 7);
    }
}
