use fqmap::algebra::{FermionMonomial, FermionOp};
use fqmap::encoder::*;
use fqmap::graph::{cycle_graph, torus_graph};
use fqmap::graded::Side;

fn main() {
    for n in 2..=6u32 {
        for sigma in [InsertionOp::X, InsertionOp::ZX] {
            let net = assemble(
                cycle_graph(n).unwrap(),
                BoundaryCondition::chain(sigma),
                DefectPlacement::none(),
            )
            .unwrap();
            report(&net, &format!("cycle n={n} sigma={sigma:?}"));
        }
    }
    for (z_h, z_v) in [(false, false), (true, false), (false, true), (true, true)] {
        let net = assemble(
            torus_graph(2, 2).unwrap(),
            BoundaryCondition::torus(z_h, z_v),
            DefectPlacement::at(0, Side::R),
        )
        .unwrap();
        report(&net, &format!("torus bc=({z_h},{z_v})"));
    }
}

fn report(net: &MappingNetwork, tag: &str) {
    let mut imgs = Vec::new();
    for v in net.graph().vertices() {
        let m = FermionMonomial::new(
            1,
            vec![(net.graph().vertex_label(*v).to_string(), FermionOp::X)],
            net.mode_universe().clone(),
        )
        .unwrap();
        imgs.push(map_operator(net, &m).unwrap());
    }
    let mut bad = Vec::new();
    for i in 0..imgs.len() {
        for j in i + 1..imgs.len() {
            if imgs[i].commutes(&imgs[j]).unwrap() {
                bad.push((i, j));
            }
        }
    }
    // squares: phase of p^2
    let squares: Vec<String> = imgs
        .iter()
        .map(|p| p.mul(p).unwrap().phase().to_string())
        .collect();
    println!("{tag}: commuting pairs {bad:?} squares {squares:?}");
}
