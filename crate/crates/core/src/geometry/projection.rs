//! Forward Transverse Mercator for UTM zone 16N on the GRS80 ellipsoid
//! (EPSG:26916), using the Krüger series in the third flattening to sixth
//! order. Truncation error is well under a millimetre inside the zone.

use serde::{Deserialize, Serialize};

use super::LonLat;
use crate::{Error, Result};

const GRS80_A: f64 = 6_378_137.0;
const GRS80_INV_F: f64 = 298.257_222_101;

pub const UTM16N_CENTRAL_MERIDIAN: f64 = -87.0;
const SCALE: f64 = 0.9996;
const FALSE_EASTING: f64 = 500_000.0;
const FALSE_NORTHING: f64 = 0.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectedPoint {
    pub easting: f64,
    pub northing: f64,
}

impl ProjectedPoint {
    pub const fn new(easting: f64, northing: f64) -> Self {
        Self { easting, northing }
    }

    pub fn distance(&self, other: &ProjectedPoint) -> f64 {
        euclidean_distance(*self, *other)
    }
}

pub fn euclidean_distance(a: ProjectedPoint, b: ProjectedPoint) -> f64 {
    let de = a.easting - b.easting;
    let dn = a.northing - b.northing;
    (de * de + dn * dn).sqrt()
}

struct Series {
    eccentricity: f64,
    /// Rectifying radius times the scale factor.
    scaled_radius: f64,
    alpha: [f64; 6],
}

fn series() -> &'static Series {
    use std::sync::OnceLock;
    static SERIES: OnceLock<Series> = OnceLock::new();
    SERIES.get_or_init(|| {
        let f = 1.0 / GRS80_INV_F;
        let n = f / (2.0 - f);
        let n2 = n * n;
        let n3 = n2 * n;
        let n4 = n3 * n;
        let n5 = n4 * n;
        let n6 = n5 * n;
        let radius = GRS80_A / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
        let alpha = [
            n / 2.0 - 2.0 * n2 / 3.0 + 5.0 * n3 / 16.0 + 41.0 * n4 / 180.0 - 127.0 * n5 / 288.0
                + 7891.0 * n6 / 37800.0,
            13.0 * n2 / 48.0 - 3.0 * n3 / 5.0 + 557.0 * n4 / 1440.0 + 281.0 * n5 / 630.0
                - 1_983_433.0 * n6 / 1_935_360.0,
            61.0 * n3 / 240.0 - 103.0 * n4 / 140.0 + 15061.0 * n5 / 26880.0
                + 167_603.0 * n6 / 181_440.0,
            49561.0 * n4 / 161_280.0 - 179.0 * n5 / 168.0 + 6_601_661.0 * n6 / 7_257_600.0,
            34729.0 * n5 / 80640.0 - 3_418_889.0 * n6 / 1_995_840.0,
            212_378_941.0 * n6 / 319_334_400.0,
        ];
        Series {
            eccentricity: (f * (2.0 - f)).sqrt(),
            scaled_radius: SCALE * radius,
            alpha,
        }
    })
}

/// Projects a lon/lat point (degrees) to UTM zone 16N metres.
pub fn project(p: LonLat) -> Result<ProjectedPoint> {
    if !p.lon.is_finite() || !p.lat.is_finite() {
        return Err(Error::Domain(format!(
            "non-finite coordinate ({}, {})",
            p.lon, p.lat
        )));
    }
    if p.lat.abs() >= 90.0 {
        return Err(Error::Domain(format!(
            "latitude {} outside (-90, 90)",
            p.lat
        )));
    }
    let s = series();
    let phi = p.lat.to_radians();
    let lambda = (p.lon - UTM16N_CENTRAL_MERIDIAN).to_radians();
    if lambda.cos() <= 0.0 {
        return Err(Error::Domain(format!(
            "longitude {} is 90 degrees or more from the central meridian",
            p.lon
        )));
    }

    let e = s.eccentricity;
    let sin_phi = phi.sin();
    // Conformal latitude, as tan.
    let tau = (sin_phi.atanh() - e * (e * sin_phi).atanh()).sinh();
    let xi_prime = tau.atan2(lambda.cos());
    let eta_prime = (lambda.sin() / (1.0 + tau * tau).sqrt()).atanh();

    let mut xi = xi_prime;
    let mut eta = eta_prime;
    for (j, a) in s.alpha.iter().enumerate() {
        let k = 2.0 * (j + 1) as f64;
        xi += a * (k * xi_prime).sin() * (k * eta_prime).cosh();
        eta += a * (k * xi_prime).cos() * (k * eta_prime).sinh();
    }

    Ok(ProjectedPoint {
        easting: FALSE_EASTING + s.scaled_radius * eta,
        northing: FALSE_NORTHING + s.scaled_radius * xi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_meridian_equator() {
        let p = project(LonLat::new(-87.0, 0.0)).unwrap();
        assert_eq!(p.easting, 500_000.0);
        assert_eq!(p.northing, 0.0);
    }

    #[test]
    fn central_meridian_is_exact_at_any_latitude() {
        for lat in [-60.0, -10.5, 12.0, 41.8781, 80.0] {
            assert_eq!(project(LonLat::new(-87.0, lat)).unwrap().easting, 500_000.0);
        }
    }

    #[test]
    fn chicago_matches_proj() {
        // PROJ 9.5: +proj=utm +zone=16 +ellps=GRS80
        let p = project(LonLat::new(-87.6298, 41.8781)).unwrap();
        assert!((p.easting - 447_741.916_717).abs() < 1e-3, "{p:?}");
        assert!((p.northing - 4_636_433.683_864).abs() < 1e-3, "{p:?}");
    }

    #[test]
    fn small_latitude_step_near_chicago() {
        // GRS80 geodesic for this 0.001 degree step is 111.070927 m.
        let a = project(LonLat::new(-87.6298, 41.8781)).unwrap();
        let b = project(LonLat::new(-87.6298, 41.8791)).unwrap();
        let d = a.distance(&b);
        assert!((d / 111.070_927 - 1.0).abs() < 0.005, "{d}");
    }

    #[test]
    fn poles_are_rejected() {
        assert!(matches!(project(LonLat::new(-87.0, 90.0)), Err(Error::Domain(_))));
        assert!(matches!(project(LonLat::new(-87.0, -90.0)), Err(Error::Domain(_))));
        assert!(matches!(project(LonLat::new(f64::NAN, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn euclidean_examples() {
        let o = ProjectedPoint::new(0.0, 0.0);
        assert_eq!(euclidean_distance(o, ProjectedPoint::new(3.0, 4.0)), 5.0);
        assert_eq!(euclidean_distance(o, o), 0.0);
        assert_eq!(
            euclidean_distance(
                ProjectedPoint::new(500_000.0, 0.0),
                ProjectedPoint::new(500_010.0, 0.0)
            ),
            10.0
        );
    }

    #[test]
    fn injective_on_zone_grid() {
        let mut seen = Vec::new();
        for i in 0..25 {
            for j in 0..25 {
                let p = LonLat::new(-90.0 + i as f64 * 0.25, 30.0 + j as f64 * 0.8);
                seen.push(project(p).unwrap());
            }
        }
        for (i, a) in seen.iter().enumerate() {
            for b in &seen[i + 1..] {
                assert!(a.distance(b) > 1.0);
            }
        }
    }
}
