//! Exact areas of disk-polygons: shoelace polygon part plus one circular
//! segment per boundary arc, and the closed form for regular Reuleaux
//! n-gons. A boundary-discretization oracle is included for cross-checks.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::{signed_polygon_area, DiskPolygon, ReuleauxPolygon};

/// Area of a disk-polygon split into the vertex polygon and the circular
/// segments over each boundary chord.
#[derive(Clone, Debug)]
pub struct AreaBreakdown {
    pub polygon_part: f64,
    pub segment_parts: Vec<f64>,
    pub total: f64,
}

/// Area of a unit-disk segment bounded by a chord of length `chord`:
/// f(x) = arcsin(x/2) - (x/2) sqrt(1 - x^2/4).
pub fn segment_area(chord: f64) -> Result<f64> {
    check_chord(chord)?;
    let half = 0.5 * chord;
    Ok(half.asin() - half * (1.0 - half * half).sqrt())
}

/// f'(x) = x^2 / (2 sqrt(4 - x^2)).
pub fn segment_area_d1(chord: f64) -> Result<f64> {
    check_chord(chord)?;
    Ok(chord * chord / (2.0 * (4.0 - chord * chord).sqrt()))
}

/// f''(x) = x (8 - x^2) / (2 (4 - x^2)^{3/2}).
pub fn segment_area_d2(chord: f64) -> Result<f64> {
    check_chord(chord)?;
    let s = 4.0 - chord * chord;
    Ok(chord * (8.0 - chord * chord) / (2.0 * s * s.sqrt()))
}

fn check_chord(chord: f64) -> Result<()> {
    // arcsin is ill-conditioned as the chord approaches the diameter; the
    // guard keeps evaluations away from it (Reuleaux chords never exceed 1).
    if !(0.0..=2.0 - 1e-9).contains(&chord) {
        return Err(Error::OutOfRange { name: "chord", value: chord });
    }
    Ok(())
}

/// Exact area of a disk-polygon: shoelace over the vertices plus the
/// segment area of each boundary chord.
pub fn area_disk_polygon(p: &DiskPolygon) -> AreaBreakdown {
    let n = p.n();
    let polygon_part = signed_polygon_area(p.vertices());
    let mut segment_parts = Vec::with_capacity(n);
    for i in 0..n {
        let chord = p.vertex(i).dist(p.vertex((i + 1) % n));
        // construction guarantees chord < 2 - eps
        segment_parts.push(segment_area(chord).expect("valid chord"));
    }
    let total = polygon_part + segment_parts.iter().sum::<f64>();
    AreaBreakdown { polygon_part, segment_parts, total }
}

/// Total area of a Reuleaux polygon.
pub fn area_reuleaux(r: &ReuleauxPolygon) -> f64 {
    area_disk_polygon(&r.as_disk_polygon()).total
}

/// Closed-form area of the regular Reuleaux n-gon:
/// A_n = pi/2 - n sin(pi/n) / (2 (cos(pi/n) + 1)).
pub fn area_regular_reuleaux(n: usize) -> Result<f64> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidN { n, reason: "regular Reuleaux areas need odd n >= 3" });
    }
    let a = PI / n as f64;
    Ok(PI / 2.0 - n as f64 * a.sin() / (2.0 * (a.cos() + 1.0)))
}

/// Independent area oracle: sample each boundary arc at `m` points and apply
/// the shoelace formula to the resulting polygon. O(m^-2) accurate; used only
/// for cross-checks. `m >= 16`.
pub fn area_oracle_discretized(p: &DiskPolygon, m: usize) -> f64 {
    debug_assert!(m >= 16, "discretization oracle needs m >= 16 samples per arc");
    let n = p.n();
    let mut points = Vec::with_capacity(n * m);
    for i in 0..n {
        let c = p.arc_center(i);
        let w = p.vertex(i) - c;
        let theta = p.arc_length(i);
        for j in 0..m {
            let phi = theta * j as f64 / m as f64;
            points.push(c + w.rotate(phi));
        }
    }
    signed_polygon_area(&points)
}

/// CSV table `n,A_n` for n = 3, 5, ..., n_max.
pub fn sweep_csv(n_max: usize) -> Result<String> {
    if n_max < 3 || n_max % 2 == 0 {
        return Err(Error::InvalidN { n: n_max, reason: "sweep bound must be odd >= 3" });
    }
    let mut out = String::from("n,A_n\n");
    let mut n = 3;
    while n <= n_max {
        out.push_str(&format!("{n},{:.15}\n", area_regular_reuleaux(n)?));
        n += 2;
    }
    Ok(out)
}
