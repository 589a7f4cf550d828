//! MovingAI-style grid maps.
//!
//! ```text
//! type octile
//! height 2
//! width 3
//! map
//! ..@
//! ...
//! ```
//!
//! `.` and `G` are passable, `@`, `T` and `O` are blocked. Node ids are
//! assigned row-major over passable cells; movement is 4-connected even
//! though the header says octile.

use super::ParseError;
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    width: usize,
    height: usize,
    passable: Vec<bool>,
    node_of_cell: Vec<Option<NodeId>>,
    cell_of_node: Vec<usize>,
}

impl GridMap {
    pub fn new(width: usize, height: usize, passable: Vec<bool>) -> Self {
        assert_eq!(passable.len(), width * height);
        let mut node_of_cell = vec![None; passable.len()];
        let mut cell_of_node = Vec::new();
        for (cell, &open) in passable.iter().enumerate() {
            if open {
                node_of_cell[cell] = Some(cell_of_node.len());
                cell_of_node.push(cell);
            }
        }
        GridMap {
            width,
            height,
            passable,
            node_of_cell,
            cell_of_node,
        }
    }

    pub fn open(width: usize, height: usize) -> Self {
        Self::new(width, height, vec![true; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_passable(&self, x: usize, y: usize) -> bool {
        x < self.width && y < self.height && self.passable[y * self.width + x]
    }

    pub fn node_count(&self) -> usize {
        self.cell_of_node.len()
    }

    pub fn node_at(&self, x: usize, y: usize) -> Option<NodeId> {
        if x < self.width && y < self.height {
            self.node_of_cell[y * self.width + x]
        } else {
            None
        }
    }

    /// `(x, y)` of a node.
    pub fn cell_of(&self, node: NodeId) -> (usize, usize) {
        let cell = self.cell_of_node[node];
        (cell % self.width, cell / self.width)
    }

    pub fn to_graph(&self) -> Graph {
        let mut edges = Vec::new();
        for (node, &cell) in self.cell_of_node.iter().enumerate() {
            let (x, y) = (cell % self.width, cell / self.width);
            if let Some(right) = self.node_at(x + 1, y) {
                edges.push((node, right));
            }
            if let Some(down) = self.node_at(x, y + 1) {
                edges.push((node, down));
            }
        }
        Graph::from_edges(self.node_count(), edges).expect("grid edges are valid")
    }

    /// Serializes in the same format [`parse_grid_map`] reads.
    pub fn to_map_string(&self) -> String {
        let mut out = format!("type octile\nheight {}\nwidth {}\nmap\n", self.height, self.width);
        for row in self.passable.chunks(self.width.max(1)) {
            out.extend(row.iter().map(|&p| if p { '.' } else { '@' }));
            out.push('\n');
        }
        out
    }
}

fn header_value(line_no: usize, line: Option<&[u8]>, key: &str) -> Result<String, ParseError> {
    let line = line.ok_or_else(|| ParseError::new(line_no, format!("missing `{key}` line")))?;
    let text =
        std::str::from_utf8(line).map_err(|_| ParseError::new(line_no, "header is not valid UTF-8"))?;
    let mut parts = text.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => Ok(v.to_string()),
        _ => Err(ParseError::new(line_no, format!("expected `{key} <value>`"))),
    }
}

fn dimension(line_no: usize, line: Option<&[u8]>, key: &str) -> Result<usize, ParseError> {
    let v = header_value(line_no, line, key)?;
    match v.parse::<usize>() {
        Ok(d) if d > 0 => Ok(d),
        _ => Err(ParseError::new(line_no, format!("bad {key} `{v}`"))),
    }
}

/// Parses a MovingAI map file.
pub fn parse_grid_map(text: &[u8]) -> Result<GridMap, ParseError> {
    let mut lines = text
        .split(|&b| b == b'\n')
        .map(|l| l.strip_suffix(b"\r").unwrap_or(l));

    header_value(1, lines.next(), "type")?;
    let height = dimension(2, lines.next(), "height")?;
    let width = dimension(3, lines.next(), "width")?;
    match lines.next() {
        Some(b"map") => {}
        _ => return Err(ParseError::new(4, "expected `map`")),
    }
    width
        .checked_mul(height)
        .ok_or_else(|| ParseError::new(3, "map dimensions overflow"))?;

    let mut passable = Vec::new();
    for row in 0..height {
        let line_no = 5 + row;
        let line = lines
            .next()
            .ok_or_else(|| ParseError::new(line_no, format!("expected {height} map rows, found {row}")))?;
        if line.len() != width {
            return Err(ParseError::new(
                line_no,
                format!("row has {} cells, expected {width}", line.len()),
            ));
        }
        for &c in line {
            passable.push(match c {
                b'.' | b'G' => true,
                b'@' | b'T' | b'O' => false,
                other => {
                    return Err(ParseError::new(
                        line_no,
                        format!("unexpected cell character {:?}", other as char),
                    ))
                }
            });
        }
    }
    for (i, rest) in lines.enumerate() {
        if !rest.iter().all(u8::is_ascii_whitespace) {
            return Err(ParseError::new(5 + height + i, "trailing content after map rows"));
        }
    }
    Ok(GridMap::new(width, height, passable))
}
