//! Common refinement of two non-matching interface traces and what the
//! enhanced velocity space puts on it: one flux unknown per sub-face.

use stevmfe::stmesh::{build_mesh, enumerate_dofs, intersect_traces, FieldLayout, MeshSpec, Subdomain};

fn main() -> stevmfe::Result<()> {
    // fine block on the left, three times finer in time and twice in space
    let fine = Subdomain::uniform(0, [0.0, 0.0], [1.0, 1.0], [4, 4], 1.0 / 3.0, [1.0; 2], 0.2);
    let coarse = Subdomain::uniform(1, [1.0, 0.0], [1.0, 1.0], [2, 2], 1.0, [1.0; 2], 0.2);

    let patch = intersect_traces(&fine, &coarse, 2, 1.0, 1.0)?;
    println!(
        "interface x = {}: space ratio {}, time ratio {}, {} sub-faces",
        patch.position,
        patch.space_ratio,
        patch.time_ratio,
        patch.subfaces.len()
    );
    println!("  y interval      t interval      fine cell@level  coarse cell");
    for sf in &patch.subfaces {
        println!(
            "  [{:.3}, {:.3}]  [{:.3}, {:.3}]  {:<15}  {:?}",
            sf.tangential.0, sf.tangential.1, sf.time.0, sf.time.1,
            format!("{:?}@{}", sf.minus_cell, sf.minus_level),
            sf.plus_cell
        );
    }

    let spec = MeshSpec { dim: 2, origin: [0.0; 2], extent: [2.0, 1.0], thickness: 1.0, t_end: 2.0, subdomains: vec![fine, coarse] };
    let mesh = build_mesh(&spec)?;
    for layout in [FieldLayout::pressure(), FieldLayout::tracer(), FieldLayout::two_phase()] {
        let map = enumerate_dofs(&mesh, layout);
        println!("{:?}", map.counts);
    }
    Ok(())
}
