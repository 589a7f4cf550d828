//! Scenario CSV (`robot,start,goal`) and map + scenario instance loading.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{parse_grid_map, GridMap, Instance, InstanceError, ParseError};
use crate::graph::NodeId;

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    robot: usize,
    start: NodeId,
    goal: NodeId,
}

const HEADER: [&str; 3] = ["robot", "start", "goal"];

/// Parses a scenario into `(starts, goals)` indexed by robot.
pub fn parse_scenario(text: &[u8]) -> Result<(Vec<NodeId>, Vec<NodeId>), ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text);
    let header = reader.headers().map_err(|e| ParseError::new(1, e.to_string()))?;
    if header.iter().ne(HEADER) {
        return Err(ParseError::new(1, "expected header `robot,start,goal`"));
    }
    let mut rows: Vec<Row> = Vec::new();
    for (i, result) in reader.deserialize::<Row>().enumerate() {
        let line = i + 2;
        let row = result.map_err(|e| ParseError::new(line, e.to_string()))?;
        if row.robot != rows.len() {
            return Err(ParseError::new(
                line,
                format!("expected robot {}, found {}", rows.len(), row.robot),
            ));
        }
        rows.push(row);
    }
    Ok(rows.into_iter().map(|r| (r.start, r.goal)).unzip())
}

pub fn write_scenario(instance: &Instance) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for (robot, (&start, &goal)) in instance.starts().iter().zip(instance.goals()).enumerate() {
        writer
            .serialize(Row { robot, start, goal })
            .expect("writing to memory cannot fail");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("map: {0}")]
    Map(ParseError),
    #[error("scenario: {0}")]
    Scenario(ParseError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Builds an instance from map file and scenario file contents.
pub fn load_instance(map_text: &[u8], scenario_text: &[u8]) -> Result<(GridMap, Instance), LoadError> {
    let map = parse_grid_map(map_text).map_err(LoadError::Map)?;
    let (starts, goals) = parse_scenario(scenario_text).map_err(LoadError::Scenario)?;
    let instance = Instance::new(map.to_graph(), starts, goals)?;
    Ok((map, instance))
}
