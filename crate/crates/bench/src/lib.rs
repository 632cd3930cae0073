//! Shared fixtures for the criterion benchmarks.

use curvedwave::geometry::{ChartId, ChartPoint};
use curvedwave::waves::{make_plane_wave, Branch, Family, Orientation, WaveFunction};

/// A representative plane wave and interior point on each chart.
pub fn fixtures() -> Vec<(WaveFunction, ChartPoint)> {
    Family::PLANE
        .into_iter()
        .map(|family| {
            let w = make_plane_wave(family, Orientation::Plus, 1.5, Branch::Plus)
                .expect("fixture energies lie above every floor");
            let x = match family.chart() {
                ChartId::S3Cylindrical => [0.7, 0.3, 0.4],
                _ => [0.9, 0.3, 0.4],
            };
            let p = ChartPoint::new(family.chart(), x).expect("fixture point is interior");
            (w, p)
        })
        .collect()
}
