use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::GInt;

use super::{GradedError, Op2};

/// What a leg carries. Spin legs are ungraded (grade 0 at every index);
/// fermionic legs carry grade equal to their index value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LegKind {
    PhysFermion,
    VirtFermion,
    PhysSpin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Ket,
    Bra,
}

/// Which virtual end of an edge tensor, as fixed by the edge's arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

/// Structured leg identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LegName {
    /// Physical spin (bra) of the edge tensor on edge `e`.
    EdgeSpin(u32),
    /// Virtual fermion (bra) at one end of the edge tensor on edge `e`.
    EdgeEnd(u32, Side),
    /// Virtual fermion (ket) in slot `k` (1..=d) of the vertex tensor at `v`.
    VertexSlot(u32, u8),
    /// Physical fermion (ket) of the vertex tensor at `v`.
    VertexPhys(u32),
    /// Ancilla spin (bra) controlling boundary insertions.
    Ancilla(u8),
    /// Scratch legs for rule derivations and tests.
    Aux(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradedLeg {
    pub name: LegName,
    pub kind: LegKind,
    pub polarity: Polarity,
}

impl GradedLeg {
    pub fn new(name: LegName, kind: LegKind, polarity: Polarity) -> GradedLeg {
        GradedLeg {
            name,
            kind,
            polarity,
        }
    }

    fn is_fermionic(&self) -> bool {
        !matches!(self.kind, LegKind::PhysSpin)
    }
}

/// A graded tensor: an ordered list of two-dimensional legs and a sparse
/// coefficient table. Bit `i` of an entry key is the index of the leg at
/// position `i`.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedTensor {
    legs: Vec<GradedLeg>,
    data: BTreeMap<u64, GInt>,
}

impl GradedTensor {
    pub fn new(legs: Vec<GradedLeg>) -> Result<GradedTensor, GradedError> {
        if legs.len() > 64 {
            return Err(GradedError::TooManyLegs);
        }
        Ok(GradedTensor {
            legs,
            data: BTreeMap::new(),
        })
    }

    pub fn legs(&self) -> &[GradedLeg] {
        &self.legs
    }

    pub fn rank(&self) -> usize {
        self.legs.len()
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    pub fn position(&self, name: LegName) -> Option<usize> {
        self.legs.iter().position(|l| l.name == name)
    }

    fn require_position(&self, name: LegName) -> Result<usize, GradedError> {
        self.position(name)
            .ok_or_else(|| GradedError::LegNotFound(format!("{name:?}")))
    }

    /// Grade of the leg at `pos` for a given index value.
    fn grade(&self, pos: usize, idx: u64) -> u64 {
        if self.legs[pos].is_fermionic() {
            idx
        } else {
            0
        }
    }

    pub fn set(&mut self, indices: &[u8], value: GInt) {
        assert_eq!(indices.len(), self.legs.len());
        let mut key = 0u64;
        for (i, &b) in indices.iter().enumerate() {
            debug_assert!(b < 2);
            key |= (b as u64) << i;
        }
        if value.is_zero() {
            self.data.remove(&key);
        } else {
            self.data.insert(key, value);
        }
    }

    pub fn add(&mut self, key: u64, value: GInt) {
        if value.is_zero() {
            return;
        }
        let slot = self.data.entry(key).or_insert(GInt::ZERO);
        *slot += value;
        if slot.is_zero() {
            self.data.remove(&key);
        }
    }

    pub fn get(&self, indices: &[u8]) -> GInt {
        assert_eq!(indices.len(), self.legs.len());
        let mut key = 0u64;
        for (i, &b) in indices.iter().enumerate() {
            key |= (b as u64) << i;
        }
        self.data.get(&key).copied().unwrap_or(GInt::ZERO)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, GInt)> + '_ {
        self.data.iter().map(|(&k, &v)| (k, v))
    }

    pub fn scale(&mut self, s: GInt) {
        if s.is_zero() {
            self.data.clear();
            return;
        }
        for v in self.data.values_mut() {
            *v *= s;
        }
    }

    /// True iff every non-zero entry has even total fermionic grade.
    pub fn is_parity_even(&self) -> bool {
        self.data.keys().all(|&k| self.entry_parity(k) == 0)
    }

    fn entry_parity(&self, key: u64) -> u64 {
        let mut p = 0;
        for i in 0..self.legs.len() {
            p ^= self.grade(i, (key >> i) & 1);
        }
        p
    }

    /// Exchange the legs at positions `i` and `i+1`; each entry is
    /// multiplied by `(-1)^(a·b)` where `a`, `b` are the fermionic grades
    /// of the two indices.
    pub fn swap_adjacent(&self, i: usize) -> Result<GradedTensor, GradedError> {
        if i + 1 >= self.legs.len() {
            return Err(GradedError::PositionOutOfRange(i));
        }
        let mut legs = self.legs.clone();
        legs.swap(i, i + 1);
        let mut out = GradedTensor {
            legs,
            data: BTreeMap::new(),
        };
        for (&key, &val) in &self.data {
            let a = (key >> i) & 1;
            let b = (key >> (i + 1)) & 1;
            let mut new_key = key & !((1 << i) | (1 << (i + 1)));
            new_key |= b << i;
            new_key |= a << (i + 1);
            let sign = self.grade(i, a) & self.grade(i + 1, b);
            out.add(new_key, if sign == 1 { -val } else { val });
        }
        Ok(out)
    }

    /// Move the leg at `from` to position `to` by adjacent swaps.
    pub fn move_leg(&self, from: usize, to: usize) -> Result<GradedTensor, GradedError> {
        let mut t = self.clone();
        let mut p = from;
        while p < to {
            t = t.swap_adjacent(p)?;
            p += 1;
        }
        while p > to {
            t = t.swap_adjacent(p - 1)?;
            p -= 1;
        }
        Ok(t)
    }

    /// Reorder legs into the order given by `names` (which must be a
    /// permutation of the current legs).
    pub fn reorder(&self, names: &[LegName]) -> Result<GradedTensor, GradedError> {
        assert_eq!(names.len(), self.legs.len());
        let mut t = self.clone();
        for (target, &name) in names.iter().enumerate() {
            let cur = t.require_position(name)?;
            t = t.move_leg(cur, target)?;
        }
        Ok(t)
    }

    /// Apply a 2x2 operator to one leg.
    ///
    /// Kets take the operator from the left of the factor word, bras from
    /// the right; an odd elementary component `|b)(a|` is transported to its
    /// leg across the intervening factors, picking up `(-1)` per crossed odd
    /// index. Spin legs never produce transport signs.
    pub fn apply_op(&self, leg: LegName, op: &Op2) -> Result<GradedTensor, GradedError> {
        let pos = self.require_position(leg)?;
        let fermionic = self.legs[pos].is_fermionic();
        let bra = self.legs[pos].polarity == Polarity::Bra;
        let mut out = GradedTensor {
            legs: self.legs.clone(),
            data: BTreeMap::new(),
        };
        for (&key, &val) in &self.data {
            let a = ((key >> pos) & 1) as usize;
            for b in 0..2usize {
                // bras contract the operator row, kets the column
                let m = if bra { op.e[a][b] } else { op.e[b][a] };
                if m.is_zero() {
                    continue;
                }
                let mut sign = 0u64;
                if fermionic && (a ^ b) == 1 {
                    // odd elementary component: transport across the word
                    let range = if bra {
                        pos + 1..self.legs.len()
                    } else {
                        0..pos
                    };
                    for q in range {
                        sign ^= self.grade(q, (key >> q) & 1);
                    }
                }
                let new_key = (key & !(1 << pos)) | ((b as u64) << pos);
                let coeff = if sign == 1 { -(val * m) } else { val * m };
                out.add(new_key, coeff);
            }
        }
        Ok(out)
    }

    /// Apply several leg operators as one word written in the same internal
    /// order as the legs they act on (ket operators standing left of the
    /// factor word, bra operators right of it).
    ///
    /// Evaluation order matters only for faithfulness of the transport
    /// signs: each operator must cross legs that still carry their original
    /// indices, so bra operators are consumed in ascending leg position and
    /// ket operators afterwards in descending position.
    pub fn apply_ops(&self, ops: &[(LegName, Op2)]) -> Result<GradedTensor, GradedError> {
        let mut bras: Vec<(usize, &(LegName, Op2))> = Vec::new();
        let mut kets: Vec<(usize, &(LegName, Op2))> = Vec::new();
        for p in ops {
            let pos = self.require_position(p.0)?;
            if self.legs[pos].polarity == Polarity::Bra {
                bras.push((pos, p));
            } else {
                kets.push((pos, p));
            }
        }
        bras.sort_by_key(|&(pos, _)| pos);
        kets.sort_by_key(|&(pos, _)| std::cmp::Reverse(pos));
        let mut t = self.clone();
        for (_, (leg, op)) in bras.into_iter().chain(kets) {
            t = t.apply_op(*leg, op)?;
        }
        Ok(t)
    }

    /// Graded outer product: `self`'s factors followed by `other`'s.
    pub fn outer(&self, other: &GradedTensor) -> Result<GradedTensor, GradedError> {
        let n1 = self.legs.len();
        if n1 + other.legs.len() > 64 {
            return Err(GradedError::TooManyLegs);
        }
        let mut legs = self.legs.clone();
        legs.extend_from_slice(&other.legs);
        let mut out = GradedTensor {
            legs,
            data: BTreeMap::new(),
        };
        for (&k1, &v1) in &self.data {
            for (&k2, &v2) in &other.data {
                out.add(k1 | (k2 << n1), v1 * v2);
            }
        }
        Ok(out)
    }

    /// Contract `self`'s leg `leg1` with `other`'s leg `leg2`.
    ///
    /// The result's legs are `self`'s remaining legs in order followed by
    /// `other`'s. One leg must be a bra and the other a ket, and both must
    /// be fermionic or both spin. Signs arise from moving the two legs
    /// adjacent and, for a ket-bra pair, from the supertrace rule.
    pub fn contract(
        &self,
        leg1: LegName,
        other: &GradedTensor,
        leg2: LegName,
    ) -> Result<GradedTensor, GradedError> {
        let p1 = self.require_position(leg1)?;
        let p2 = other.require_position(leg2)?;
        let l1 = self.legs[p1];
        let l2 = other.legs[p2];
        if l1.polarity == l2.polarity {
            return Err(GradedError::ContractionMismatch(format!(
                "{leg1:?} and {leg2:?} have the same polarity"
            )));
        }
        if l1.is_fermionic() != l2.is_fermionic() {
            return Err(GradedError::ContractionMismatch(format!(
                "{leg1:?} and {leg2:?} mix fermionic and spin legs"
            )));
        }
        if self.legs.len() + other.legs.len() - 2 > 64 {
            return Err(GradedError::TooManyLegs);
        }
        // bring the contracted legs adjacent: self's to its end, other's to
        // its front
        let t1 = self.move_leg(p1, self.legs.len() - 1)?;
        let t2 = other.move_leg(p2, 0)?;
        let n1 = t1.legs.len() - 1;
        let supertrace = l1.polarity == Polarity::Ket; // |a)(b| loop
        let fermionic = l1.is_fermionic();

        let mut legs = Vec::with_capacity(n1 + t2.legs.len() - 1);
        legs.extend_from_slice(&t1.legs[..n1]);
        legs.extend_from_slice(&t2.legs[1..]);
        let mut out = GradedTensor {
            legs,
            data: BTreeMap::new(),
        };
        // group t2 entries by contracted index for the join
        let mut by_idx: [Vec<(u64, GInt)>; 2] = [Vec::new(), Vec::new()];
        for (&k2, &v2) in &t2.data {
            by_idx[(k2 & 1) as usize].push((k2 >> 1, v2));
        }
        for (&k1, &v1) in &t1.data {
            let a = (k1 >> n1) & 1;
            let rest1 = k1 & !(1 << n1);
            for &(rest2, v2) in &by_idx[a as usize] {
                let mut coeff = v1 * v2;
                if supertrace && fermionic && a == 1 {
                    coeff = -coeff;
                }
                out.add(rest1 | (rest2 << n1), coeff);
            }
        }
        Ok(out)
    }

    /// Contract two legs of the same tensor against each other. The two
    /// legs may share a name (a bond whose ends carry the same label), in
    /// which case the first two occurrences are taken.
    pub fn contract_self(&self, leg1: LegName, leg2: LegName) -> Result<GradedTensor, GradedError> {
        let (p1, p2) = if leg1 == leg2 {
            let mut it = self
                .legs
                .iter()
                .enumerate()
                .filter(|(_, l)| l.name == leg1)
                .map(|(i, _)| i);
            let a = it
                .next()
                .ok_or_else(|| GradedError::LegNotFound(format!("{leg1:?}")))?;
            let b = it
                .next()
                .ok_or_else(|| GradedError::LegNotFound(format!("{leg2:?} (second)")))?;
            (a, b)
        } else {
            (self.require_position(leg1)?, self.require_position(leg2)?)
        };
        let (i, j) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
        let li = self.legs[i];
        let lj = self.legs[j];
        if li.polarity == lj.polarity {
            return Err(GradedError::ContractionMismatch(format!(
                "{leg1:?} and {leg2:?} have the same polarity"
            )));
        }
        if li.is_fermionic() != lj.is_fermionic() {
            return Err(GradedError::ContractionMismatch(format!(
                "{leg1:?} and {leg2:?} mix fermionic and spin legs"
            )));
        }
        // move leg j next to leg i, then evaluate the adjacent pair
        let t = self.move_leg(j, i + 1)?;
        let supertrace = t.legs[i].polarity == Polarity::Ket;
        let fermionic = t.legs[i].is_fermionic();
        let mut legs = t.legs.clone();
        legs.drain(i..=i + 1);
        let mut out = GradedTensor {
            legs,
            data: BTreeMap::new(),
        };
        let low_mask = (1u64 << i) - 1;
        for (&key, &val) in &t.data {
            let a = (key >> i) & 1;
            let b = (key >> (i + 1)) & 1;
            if a != b {
                continue;
            }
            let mut coeff = val;
            if supertrace && fermionic && a == 1 {
                coeff = -coeff;
            }
            let new_key = (key & low_mask) | ((key >> 2) & !low_mask);
            out.add(new_key, coeff);
        }
        Ok(out)
    }

    /// Rename a leg in place; the tensor data is untouched.
    pub fn rename_leg(&mut self, from: LegName, to: LegName) -> Result<(), GradedError> {
        let pos = self.require_position(from)?;
        self.legs[pos].name = to;
        Ok(())
    }

    /// Debug dump: leg list with kinds and polarity, then sorted non-zero
    /// entries. Used for golden-file comparisons.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for leg in &self.legs {
            let kind = match leg.kind {
                LegKind::PhysFermion => "pf",
                LegKind::VirtFermion => "vf",
                LegKind::PhysSpin => "ps",
            };
            let pol = match leg.polarity {
                Polarity::Ket => "ket",
                Polarity::Bra => "bra",
            };
            s.push_str(&format!("leg {:?} {kind} {pol}\n", leg.name));
        }
        for (&key, &val) in &self.data {
            let bits: String = (0..self.legs.len())
                .map(|i| if (key >> i) & 1 == 1 { '1' } else { '0' })
                .collect();
            s.push_str(&format!("({bits}) = {val}\n"));
        }
        s
    }
}

impl fmt::Debug for GradedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dump())
    }
}

/// The edge (copy) tensor: one physical spin bra `s` and two virtual
/// fermionic bras `l`, `r`, non-zero exactly on the diagonal `(c, c, c)`.
pub fn ghz_tensor(edge: u32) -> GradedTensor {
    let mut t = GradedTensor::new(vec![
        GradedLeg::new(LegName::EdgeSpin(edge), LegKind::PhysSpin, Polarity::Bra),
        GradedLeg::new(LegName::EdgeEnd(edge, Side::L), LegKind::VirtFermion, Polarity::Bra),
        GradedLeg::new(LegName::EdgeEnd(edge, Side::R), LegKind::VirtFermion, Polarity::Bra),
    ])
    .expect("3 legs");
    t.set(&[0, 0, 0], GInt::ONE);
    t.set(&[1, 1, 1], GInt::ONE);
    t
}

/// The vertex tensor of degree `d`: kets `|a_d) ... |a_1) |a_0)` with `a_0`
/// the physical fermion, non-zero exactly on even-parity index tuples.
pub fn vertex_tensor(vertex: u32, d: u8) -> Result<GradedTensor, GradedError> {
    if d == 0 {
        return Err(GradedError::DegenerateVertex);
    }
    let mut legs = Vec::with_capacity(d as usize + 1);
    for k in (1..=d).rev() {
        legs.push(GradedLeg::new(
            LegName::VertexSlot(vertex, k),
            LegKind::VirtFermion,
            Polarity::Ket,
        ));
    }
    legs.push(GradedLeg::new(
        LegName::VertexPhys(vertex),
        LegKind::PhysFermion,
        Polarity::Ket,
    ));
    let mut t = GradedTensor::new(legs)?;
    for key in 0..(1u64 << (d as u32 + 1)) {
        if key.count_ones() % 2 == 0 {
            t.add(key, GInt::ONE);
        }
    }
    Ok(t)
}

/// The controlled odd-defect gate `Σ_{a,c} |a+c)(a| <c|` as a three-leg
/// tensor: output ket, input bra (both virtual fermions) and a spin control
/// bra. Contracting the output ket into an edge leg inserts a fermionic `X`
/// on that leg whenever the control is 1.
pub fn cx_gate_tensor(out: LegName, input: LegName, control: LegName) -> GradedTensor {
    let mut t = GradedTensor::new(vec![
        GradedLeg::new(out, LegKind::VirtFermion, Polarity::Ket),
        GradedLeg::new(input, LegKind::VirtFermion, Polarity::Bra),
        GradedLeg::new(control, LegKind::PhysSpin, Polarity::Bra),
    ])
    .expect("3 legs");
    for a in 0..2u8 {
        for c in 0..2u8 {
            t.set(&[(a + c) % 2, a, c], GInt::ONE);
        }
    }
    t
}

/// The controlled parity gate `Σ_{a,c} (-1)^(a·c) |a)(a| <c|`: inserts a
/// fermionic `Z` on the target leg whenever the spin control is 1.
pub fn cz_gate_tensor(out: LegName, input: LegName, control: LegName) -> GradedTensor {
    let mut t = GradedTensor::new(vec![
        GradedLeg::new(out, LegKind::VirtFermion, Polarity::Ket),
        GradedLeg::new(input, LegKind::VirtFermion, Polarity::Bra),
        GradedLeg::new(control, LegKind::PhysSpin, Polarity::Bra),
    ])
    .expect("3 legs");
    for a in 0..2u8 {
        for c in 0..2u8 {
            let v = if a * c == 1 { -GInt::ONE } else { GInt::ONE };
            t.set(&[a, a, c], v);
        }
    }
    t
}

/// Fan-out for an ancilla control: one spin bra and `k` spin kets, all
/// locked to the same value. Used to let one ancilla qubit control several
/// insertion gates.
pub fn ancilla_copy_tensor(anc: LegName, outputs: &[LegName]) -> GradedTensor {
    let mut legs = vec![GradedLeg::new(anc, LegKind::PhysSpin, Polarity::Bra)];
    for &o in outputs {
        legs.push(GradedLeg::new(o, LegKind::PhysSpin, Polarity::Ket));
    }
    let mut t = GradedTensor::new(legs).expect("few legs");
    let n = outputs.len() + 1;
    t.add(0, GInt::ONE);
    t.add((1u64 << n) - 1, GInt::ONE);
    t
}
