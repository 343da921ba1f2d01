use std::collections::BTreeMap;

use fqmap::encoder::{
    assemble, charge_sector, BoundaryCondition, DefectPlacement, InsertionOp, LoopChoice,
};
use fqmap::graded::Side;
use fqmap::graph::{Edge, MappingGraph, Preset};

/// torus with a custom slot cycle: rot = rotation of (up, right, down, left),
/// mirror = reverse orientation
fn torus22_custom(rot: usize, mirror: bool) -> MappingGraph {
    let (lx, ly) = (2u32, 2u32);
    let vid = |x: u32, y: u32| (y % ly) * lx + (x % lx);
    let h = |x: u32, y: u32| (y % ly) * lx + (x % lx);
    let v = |x: u32, y: u32| lx * ly + (y % ly) * lx + (x % lx);
    let vertices: Vec<u32> = (0..lx * ly).collect();
    let mut edges = Vec::new();
    for y in 0..ly {
        for x in 0..lx {
            edges.push(Edge { id: h(x, y), tail: vid(x, y), head: vid(x + 1, y) });
        }
    }
    for y in 0..ly {
        for x in 0..lx {
            edges.push(Edge { id: v(x, y), tail: vid(x, y), head: vid(x, y + 1) });
        }
    }
    let mut slots = BTreeMap::new();
    for y in 0..ly {
        for x in 0..lx {
            let mut base = vec![
                v(x, y),              // up
                h(x, y),              // right
                v(x, y + ly - 1),     // down
                h(x + lx - 1, y),     // left
            ];
            if mirror {
                base.reverse();
                base.rotate_right(1); // keep "up" first, reversed orientation
            }
            base.rotate_left(rot);
            slots.insert(vid(x, y), base);
        }
    }
    let mut g = MappingGraph::new(vertices, edges, slots).unwrap();
    g.preset = Some(Preset::Torus { lx, ly });
    g
}

#[test]
fn scan_rotations() {
    let rows = [
        (false, false, false, 1i8, -1i8, -1i8),
        (true, false, false, 1, -1, 1),
        (false, true, false, 1, 1, -1),
        (true, true, false, 1, 1, 1),
        (false, false, true, -1, 1, 1),
        (true, false, true, -1, 1, -1),
        (false, true, true, -1, -1, 1),
        (true, true, true, -1, -1, -1),
    ];
    for mirror in [false, true] {
        for rot in 0..4usize {
            let mut ok = 0;
            let mut detail = String::new();
            for (z_h, z_v, defect, parity, x_h, x_v) in rows {
                let g = torus22_custom(rot, mirror);
                let d = if defect {
                    DefectPlacement::at(0, Side::R)
                } else {
                    DefectPlacement::none()
                };
                let net = match assemble(g, BoundaryCondition::torus(z_h, z_v), d) {
                    Ok(n) => n,
                    Err(e) => {
                        detail = format!("assemble error {e}");
                        break;
                    }
                };
                match charge_sector(&net, LoopChoice::Intersect) {
                    Ok(rec) => {
                        if rec.fermion_parity == parity
                            && rec.spin_eigenvalues == vec![x_h, x_v]
                        {
                            ok += 1;
                        } else {
                            detail.push_str(&format!(
                                " [{z_h}{z_v}{defect}: got {:?} want ({x_h},{x_v})]",
                                rec.spin_eigenvalues
                            ));
                        }
                    }
                    Err(e) => detail.push_str(&format!(" [{z_h}{z_v}{defect}: err {e}]")),
                }
            }
            println!("mirror={mirror} rot={rot}: {ok}/8 {detail}");
        }
    }
}
