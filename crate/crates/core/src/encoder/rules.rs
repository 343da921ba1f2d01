use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::algebra::{PauliLetter, Phase};
use crate::graded::{solve_spin_letter, vertex_rule, GradedTensor, LegName, LocalOp, Side};
use crate::graph::EdgeId;

use super::{EncoderError, MappingNetwork};

/// Derived local rewrite rules for one network.
///
/// Vertex rules (how a physical operator trades for virtual-leg words) are
/// graph-independent and cached globally; edge conversions are solved
/// against the network's actual edge tensors, so boundary insertions and
/// the defect are picked up automatically.
pub struct RuleSet {
    /// per edge: tensor without the defect insertion, tensor with it
    pairs: Vec<(GradedTensor, GradedTensor)>,
    /// test hook: flip the derived phase on this edge to emulate a
    /// corrupted rule table
    corrupt_edge: Option<EdgeId>,
}

type VertexKey = (u8, LocalOp, Vec<u8>);
type VertexWord = Vec<(u8, LocalOp)>;

fn vertex_cache() -> &'static Mutex<HashMap<VertexKey, VertexWord>> {
    static CACHE: OnceLock<Mutex<HashMap<VertexKey, VertexWord>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl RuleSet {
    pub fn derive(net: &MappingNetwork) -> RuleSet {
        let pairs = net
            .graph()
            .edges()
            .iter()
            .map(|e| (net.edge_tensor(e.id, false), net.edge_tensor(e.id, true)))
            .collect();
        RuleSet {
            pairs,
            corrupt_edge: None,
        }
    }

    /// Deliberately corrupt the conversion phase on one edge. Verification
    /// suites use this as a negative control; never set outside tests.
    #[doc(hidden)]
    pub fn corrupt_edge_for_test(&mut self, edge: EdgeId) {
        self.corrupt_edge = Some(edge);
    }

    /// The vertex rewrite word for a degree-`d` vertex: physical operator
    /// `phys` (sign already stripped) with odd emissions exactly on
    /// `odd_slots`.
    pub fn vertex_word(
        &self,
        d: u8,
        phys: LocalOp,
        odd_slots: &[u8],
    ) -> Result<VertexWord, EncoderError> {
        debug_assert!(!phys.neg);
        let key = (d, phys, odd_slots.to_vec());
        if let Some(w) = vertex_cache().lock().unwrap().get(&key) {
            return Ok(w.clone());
        }
        let word = vertex_rule(d, phys, odd_slots)?;
        vertex_cache().lock().unwrap().insert(key, word.clone());
        Ok(word)
    }

    /// Convert the ordered pair of virtual-leg operators arriving on edge
    /// `e` into the spin letter deposited there.
    ///
    /// For odd monomials the operators act on the defect-stripped edge
    /// tensor and the result is expressed against the network's actual
    /// tensor, which is how an odd string terminates at the defect.
    pub fn convert(
        &self,
        e: EdgeId,
        odd_sector: bool,
        on_l: LocalOp,
        on_r: LocalOp,
    ) -> Result<(PauliLetter, Phase), EncoderError> {
        let (without, with) = &self.pairs[e as usize];
        let lhs_base = if odd_sector { without } else { with };
        let mut ops = Vec::new();
        if !on_l.is_identity() {
            ops.push((LegName::EdgeEnd(e, Side::L), on_l.to_op2()));
        }
        if !on_r.is_identity() {
            ops.push((LegName::EdgeEnd(e, Side::R), on_r.to_op2()));
        }
        let lhs = lhs_base.apply_ops(&ops)?;
        let (letter, mut phase) = solve_spin_letter(&lhs, with, LegName::EdgeSpin(e))?;
        if self.corrupt_edge == Some(e) {
            phase = phase.mul(Phase::MINUS_ONE);
        }
        Ok((letter, phase))
    }
}
