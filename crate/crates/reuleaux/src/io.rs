//! The shared JSON polygon format `{"n": int, "vertices": [[x,y],...]}` and
//! small emit helpers.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{DiskPolygon, Point2, ReuleauxPolygon};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolygonJson {
    pub n: usize,
    pub vertices: Vec<[f64; 2]>,
}

impl PolygonJson {
    pub fn from_vertices(vertices: &[Point2]) -> Self {
        PolygonJson {
            n: vertices.len(),
            vertices: vertices.iter().map(|p| [p.x(), p.y()]).collect(),
        }
    }

    pub fn to_points(&self) -> Result<Vec<Point2>> {
        if self.n != self.vertices.len() {
            return Err(Error::Parse(format!(
                "declared n = {} but {} vertices given",
                self.n,
                self.vertices.len()
            )));
        }
        self.vertices.iter().map(|&[x, y]| Point2::try_new(x, y)).collect()
    }
}

pub fn parse_polygon_json(text: &str) -> Result<Vec<Point2>> {
    let parsed: PolygonJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    parsed.to_points()
}

pub fn load_vertices(path: &Path) -> Result<Vec<Point2>> {
    parse_polygon_json(&std::fs::read_to_string(path)?)
}

pub fn load_disk_polygon(path: &Path) -> Result<DiskPolygon> {
    DiskPolygon::from_vertices(&load_vertices(path)?)
}

pub fn load_reuleaux(path: &Path) -> Result<ReuleauxPolygon> {
    ReuleauxPolygon::from_vertices(&load_vertices(path)?)
}

pub fn polygon_to_json(vertices: &[Point2]) -> Result<String> {
    serde_json::to_string_pretty(&PolygonJson::from_vertices(vertices))
        .map_err(|e| Error::Parse(e.to_string()))
}
