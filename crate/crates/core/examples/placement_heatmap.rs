//! Map the preferred placement over generation rate and processing time and
//! draw it as characters: `.` endpoint, `e` edge, `c` cloud, `x` not viable.
//!
//! cargo run --example placement_heatmap

use continuum_planner::analytic::reference_markers;
use continuum_planner::{heatmap, HeatmapSpec, PlacementClass, PlacementFamily, PlacementPolicy, WorkloadProfile};

fn main() {
    let spec = HeatmapSpec::default();
    let base = WorkloadProfile::reference();
    let markers = reference_markers(&base, spec.reference_tier).unwrap();
    let grid = heatmap(&spec, &base, &PlacementFamily::reference(), &PlacementPolicy::default(), &markers).unwrap();

    println!("rows: endpoint processing time (s), columns: rate 0..{} Hz", spec.rate_max);
    for (row, t) in grid.proc_times.iter().enumerate().rev() {
        let line: String = grid.cells[row]
            .iter()
            .enumerate()
            .map(|(col, class)| {
                if grid.markers.iter().any(|m| m.row == row && m.col == col) {
                    return '*';
                }
                match class {
                    PlacementClass::Endpoint => '.',
                    PlacementClass::Edge => 'e',
                    PlacementClass::Cloud => 'c',
                    PlacementClass::NotViable => 'x',
                }
            })
            .collect();
        println!("{t:>6.3} {line}");
    }
    for m in &grid.markers {
        println!("marker {} at ({} Hz, {} s): {}", m.label, m.rate, m.proc_time, m.class);
    }
}
