use super::RngStream;
use crate::geometry::{LonLat, Polygon};
use crate::{Error, Result};

pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;

/// Uniform point inside `poly` by rejection from its bounding box.
///
/// Longitude and latitude are drawn independently and uniformly over the
/// box; the first point inside the polygon is returned. After
/// `max_attempts` consecutive rejections the block is reported as
/// degenerate under `fips`.
pub fn sample_location(
    poly: &Polygon,
    fips: &str,
    rng: &mut RngStream,
    max_attempts: usize,
) -> Result<LonLat> {
    sample_location_counted(poly, fips, rng, max_attempts).map(|(p, _)| p)
}

/// As [`sample_location`], also returning the number of attempts used.
pub fn sample_location_counted(
    poly: &Polygon,
    fips: &str,
    rng: &mut RngStream,
    max_attempts: usize,
) -> Result<(LonLat, usize)> {
    let degenerate = |attempts| Error::DegenerateGeometry {
        fips: fips.to_owned(),
        attempts,
    };
    if !(poly.area() > 0.0) {
        return Err(degenerate(0));
    }
    let bb = poly.bbox();
    for attempt in 1..=max_attempts {
        let p = LonLat::new(
            bb.x_min + rng.uniform() * bb.width(),
            bb.y_min + rng.uniform() * bb.height(),
        );
        if poly.contains(p) {
            return Ok((p, attempt));
        }
    }
    Err(degenerate(max_attempts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::chi_square_gof;

    #[test]
    fn unit_square_accepts_first_try() {
        let sq = Polygon::from_exterior([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        let mut rng = RngStream::new(5, 5);
        for _ in 0..1000 {
            let (p, n) = sample_location_counted(&sq, "sq", &mut rng, 10).unwrap();
            assert_eq!(n, 1);
            assert!((0.0..1.0).contains(&p.lon) && (0.0..1.0).contains(&p.lat));
        }
    }

    #[test]
    fn thin_triangle_mean_attempts() {
        // Area 0.5 inside a 2x1 bounding box: acceptance probability 1/4.
        let tri = Polygon::from_exterior([(0.0, 0.0), (2.0, 1.0), (1.0, 1.0)]).unwrap();
        let expected = tri.bbox().area() / tri.area();
        assert!((expected - 4.0).abs() < 1e-12, "{expected}");

        let mut rng = RngStream::new(11, 0);
        let runs = 20_000;
        let total: usize = (0..runs)
            .map(|_| sample_location_counted(&tri, "tri", &mut rng, 10_000).unwrap().1)
            .sum();
        let mean = total as f64 / runs as f64;
        // Geometric(p = 1/4): sd = sqrt(1-p)/p = 3.46; 4 sigma of the mean.
        let tol = 4.0 * (0.75f64).sqrt() / 0.25 / (runs as f64).sqrt();
        assert!((mean - 4.0).abs() < tol, "mean attempts {mean}");
    }

    #[test]
    fn square_subcells_uniform() {
        let sq = Polygon::from_exterior([(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)]).unwrap();
        let mut rng = RngStream::new(2024, 1);
        let mut counts = [0u64; 16];
        for _ in 0..10_000 {
            let p = sample_location(&sq, "sq", &mut rng, 100).unwrap();
            counts[(p.lat as usize) * 4 + p.lon as usize] += 1;
        }
        let res = chi_square_gof(&counts, &[1.0 / 16.0; 16]).unwrap();
        assert!(res.p_value > 0.01, "{res:?}");
    }

    #[test]
    fn degenerate_polygon_errors_with_fips() {
        let sliver =
            Polygon::from_exterior([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (0.0, 0.0)]).unwrap();
        let mut rng = RngStream::new(1, 1);
        match sample_location(&sliver, "170310000001", &mut rng, DEFAULT_MAX_ATTEMPTS) {
            Err(Error::DegenerateGeometry { fips, .. }) => assert_eq!(fips, "170310000001"),
            other => panic!("unexpected {other:?}"),
        }
        // Positive area but vanishing acceptance: hits the attempt cap.
        let needle = Polygon::from_exterior([
            (0.0, 0.0),
            (1.0, 1.0),
            (1.0, 1.0 + 1e-13),
            (0.0, 1e-13),
        ])
        .unwrap();
        match sample_location(&needle, "n", &mut rng, 1000) {
            Err(Error::DegenerateGeometry { attempts, .. }) => assert_eq!(attempts, 1000),
            other => panic!("unexpected {other:?}"),
        }
    }
}
