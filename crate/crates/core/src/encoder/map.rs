use std::collections::BTreeMap;

use crate::algebra::{FermionMonomial, FermionOp, PauliString, Phase};
use crate::graded::{LocalOp, Side};
use crate::graph::{EdgeId, VertexId};

use super::{EncoderError, MappingNetwork, RuleSet};

/// One virtual-leg operator emission in the global word, ordered by
/// (vertex position in the mode order, leg position within the vertex).
#[derive(Debug, Clone)]
struct Emission {
    edge: EdgeId,
    side: Side,
    op: LocalOp,
}

/// Map a fermionic monomial to its Pauli-string image on the spin sites.
///
/// The monomial is canonicalized, folded into per-vertex local operators,
/// routed (odd operators pair up along shortest paths; a leftover odd
/// endpoint runs to the defect), rewritten at each vertex by the derived
/// vertex rules, and the resulting virtual-leg word is reduced edge by edge
/// into spin letters with explicit graded reordering signs.
pub fn map_operator(
    net: &MappingNetwork,
    m: &FermionMonomial,
) -> Result<PauliString, EncoderError> {
    let rules = RuleSet::derive(net);
    map_operator_with(net, &rules, m)
}

pub fn map_operator_with(
    net: &MappingNetwork,
    rules: &RuleSet,
    m: &FermionMonomial,
) -> Result<PauliString, EncoderError> {
    if m.universe() != net.mode_universe() {
        return Err(EncoderError::UnknownMode(
            "monomial universe differs from the network's mode ordering".into(),
        ));
    }
    let canon = m.canonicalize()?;
    let (mut neg, local) = fold_local(net, &canon)?;

    let parity: u8 = local.iter().map(|l| l.grade()).sum::<u8>() % 2;
    let odd_sector = parity == 1;
    if odd_sector && !net.is_odd() {
        return Err(EncoderError::OddWithoutDefect);
    }

    let toggles = plan_routes(net, &local)?;
    let (phase, letters) = reduce_word(net, rules, &local, &toggles, odd_sector, &mut neg)?;

    let mut out = PauliString::identity(net.site_universe().clone());
    for (e, letter) in letters {
        out.set(net.graph().edge_label(e), letter)?;
    }
    out.mul_phase(phase);
    if neg {
        out.mul_phase(Phase::MINUS_ONE);
    }
    Ok(out)
}

/// Canonical per-vertex composite operators; the overall sign is returned
/// separately.
fn fold_local(
    net: &MappingNetwork,
    canon: &FermionMonomial,
) -> Result<(bool, Vec<LocalOp>), EncoderError> {
    let n = net.graph().vertices().len();
    let mut local = vec![LocalOp::IDENT; n];
    let mut neg = canon.sign() < 0;
    for (mode, op) in canon.factors() {
        let v = net
            .mode_universe()
            .position(mode)
            .ok_or_else(|| EncoderError::UnknownMode(mode.clone()))? as usize;
        let l = match op {
            FermionOp::X => LocalOp::X,
            FermionOp::Z => LocalOp::Z,
            FermionOp::Raise | FermionOp::Lower => return Err(EncoderError::NonPauliFactor),
        };
        local[v] = local[v].mul(l);
    }
    for l in &mut local {
        if l.neg {
            neg = !neg;
            *l = LocalOp { neg: false, ..*l };
        }
    }
    Ok((neg, local))
}

/// Slot toggles per vertex: odd operators pair up consecutively in the mode
/// order and are connected by shortest paths; with a defect, a leftover odd
/// vertex runs to the nearest endpoint of the defect edge and steps onto it.
pub(crate) fn plan_routes(
    net: &MappingNetwork,
    local: &[LocalOp],
) -> Result<BTreeMap<VertexId, Vec<u8>>, EncoderError> {
    let g = net.graph();
    let odd: Vec<VertexId> = g
        .vertices()
        .iter()
        .copied()
        .filter(|&v| local[v as usize].grade() == 1)
        .collect();
    let mut toggles: BTreeMap<VertexId, Vec<u8>> = BTreeMap::new();
    let toggle = |v: VertexId, slot: u8, toggles: &mut BTreeMap<VertexId, Vec<u8>>| {
        let list = toggles.entry(v).or_default();
        if let Some(pos) = list.iter().position(|&s| s == slot) {
            list.remove(pos);
        } else {
            list.push(slot);
        }
    };
    let route_edges = |path: &[EdgeId], toggles: &mut BTreeMap<VertexId, Vec<u8>>| {
        for &e in path {
            let edge = g.edge(e);
            let ts = g.slot_of(edge.tail, e).expect("incident");
            let hs = g.slot_of(edge.head, e).expect("incident");
            toggle(edge.tail, ts, toggles);
            toggle(edge.head, hs, toggles);
        }
    };
    for pair in odd.chunks(2) {
        if pair.len() == 2 {
            let path = g
                .shortest_path(pair[0], pair[1])
                .ok_or_else(|| EncoderError::Internal("disconnected route".into()))?;
            route_edges(&path, &mut toggles);
        } else {
            // terminate at the defect edge: the head vertex steps onto it
            // directly (absorbing the insertion), every other vertex routes
            // to the tail without wrapping past the defect; this keeps the
            // relative phases of all terminated strings aligned
            let d = net.defect();
            let de = g.edge(d.edge);
            let v = pair[0];
            if v == de.head {
                let slot = g.slot_of(de.head, d.edge).expect("incident");
                toggle(de.head, slot, &mut toggles);
            } else {
                let path = g
                    .shortest_path_avoiding(v, de.tail, Some(d.edge))
                    .or_else(|| g.shortest_path(v, de.tail))
                    .ok_or_else(|| EncoderError::Internal("disconnected route".into()))?;
                route_edges(&path, &mut toggles);
                let slot = g.slot_of(de.tail, d.edge).expect("incident");
                toggle(de.tail, slot, &mut toggles);
            }
        }
    }
    for list in toggles.values_mut() {
        list.sort();
    }
    toggles.retain(|_, list| !list.is_empty());
    Ok(toggles)
}

/// Rewrite every touched vertex into virtual-leg emissions and reduce the
/// ordered word edge by edge. Returns the accumulated phase and the letter
/// per touched edge.
pub(crate) fn reduce_word(
    net: &MappingNetwork,
    rules: &RuleSet,
    local: &[LocalOp],
    toggles: &BTreeMap<VertexId, Vec<u8>>,
    odd_sector: bool,
    neg: &mut bool,
) -> Result<(Phase, BTreeMap<EdgeId, crate::algebra::PauliLetter>), EncoderError> {
    let g = net.graph();
    let mut items: Vec<Emission> = Vec::new();
    for &v in g.vertices() {
        let phys = local[v as usize];
        let empty = Vec::new();
        let odd_slots = toggles.get(&v).unwrap_or(&empty);
        if phys.is_identity() && odd_slots.is_empty() {
            continue;
        }
        let d = g.degree(v) as u8;
        let word = rules.vertex_word(d, phys, odd_slots)?;
        // emissions in the vertex's internal factor order: slot d first
        let mut word = word;
        word.sort_by_key(|&(slot, _)| std::cmp::Reverse(slot));
        for (slot, op) in word {
            let e = g.slot_list(v)[slot as usize - 1];
            items.push(Emission {
                edge: e,
                side: g.side_at(v, e),
                op,
            });
        }
    }

    let mut phase = Phase::PLUS_ONE;
    let mut letters = BTreeMap::new();
    let mut list = items;
    while !list.is_empty() {
        let first = list.remove(0);
        let partner_pos = list.iter().position(|it| it.edge == first.edge);
        let (on_l, on_r) = match partner_pos {
            Some(pi) => {
                let partner = list[pi].clone();
                // transport the partner leftward across the skipped items
                if partner.op.grade() == 1 {
                    for it in &list[..pi] {
                        if it.op.grade() == 1 {
                            *neg = !*neg;
                        }
                    }
                }
                list.remove(pi);
                debug_assert_ne!(first.side, partner.side);
                match first.side {
                    Side::L => (first.op, partner.op),
                    Side::R => {
                        // reorder the adjacent pair into (L, R)
                        if first.op.grade() == 1 && partner.op.grade() == 1 {
                            *neg = !*neg;
                        }
                        (partner.op, first.op)
                    }
                }
            }
            None => match first.side {
                Side::L => (first.op, LocalOp::IDENT),
                Side::R => (LocalOp::IDENT, first.op),
            },
        };
        let (letter, ph) = rules.convert(first.edge, odd_sector, on_l, on_r)?;
        phase = phase.mul(ph);
        letters.insert(first.edge, letter);
    }
    Ok((phase, letters))
}
