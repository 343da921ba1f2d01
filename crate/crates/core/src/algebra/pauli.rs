use std::fmt;
use std::sync::Arc;

use super::{AlgebraError, ExactMatrix, GInt};

/// Identifier of a spin site (an edge of the mapping graph).
pub type SiteId = String;

/// Fourth root of unity `i^k`, the only phases a Pauli string may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const PLUS_ONE: Phase = Phase(0);
    pub const PLUS_I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_i_pow(k: u8) -> Phase {
        Phase(k % 4)
    }

    pub fn i_pow(self) -> u8 {
        self.0
    }

    pub fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    pub fn to_gint(self) -> GInt {
        GInt::ONE.mul_i_pow(self.0)
    }

    /// Recover a phase from a scalar, if it is a fourth root of unity.
    pub fn from_gint(g: GInt) -> Option<Phase> {
        match (g.re, g.im) {
            (1, 0) => Some(Phase(0)),
            (0, 1) => Some(Phase(1)),
            (-1, 0) => Some(Phase(2)),
            (0, -1) => Some(Phase(3)),
            _ => None,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        };
        write!(f, "{s}")
    }
}

/// Single-site Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum PauliLetter {
    #[default]
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    /// Product of two letters: phase times resulting letter.
    pub fn mul(self, rhs: PauliLetter) -> (Phase, PauliLetter) {
        use PauliLetter::*;
        match (self, rhs) {
            (I, b) => (Phase::PLUS_ONE, b),
            (a, I) => (Phase::PLUS_ONE, a),
            (a, b) if a == b => (Phase::PLUS_ONE, I),
            (X, Y) => (Phase::PLUS_I, Z),
            (Y, X) => (Phase::MINUS_I, Z),
            (Y, Z) => (Phase::PLUS_I, X),
            (Z, Y) => (Phase::MINUS_I, X),
            (Z, X) => (Phase::PLUS_I, Y),
            (X, Z) => (Phase::MINUS_I, Y),
            _ => unreachable!(),
        }
    }

    pub fn anticommutes(self, rhs: PauliLetter) -> bool {
        self != PauliLetter::I && rhs != PauliLetter::I && self != rhs
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<PauliLetter> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    /// 2x2 matrix entries, row-major.
    pub fn entries(self) -> [[GInt; 2]; 2] {
        let o = GInt::ONE;
        let z = GInt::ZERO;
        let i = GInt::I;
        match self {
            PauliLetter::I => [[o, z], [z, o]],
            PauliLetter::X => [[z, o], [o, z]],
            PauliLetter::Y => [[z, -i], [i, z]],
            PauliLetter::Z => [[o, z], [z, -o]],
        }
    }
}

/// Ordered list of spin-site ids over which Pauli strings are defined.
#[derive(Debug, PartialEq, Eq)]
pub struct SiteUniverse {
    sites: Vec<SiteId>,
}

impl SiteUniverse {
    pub fn new(sites: Vec<SiteId>) -> Arc<SiteUniverse> {
        Arc::new(SiteUniverse { sites })
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[SiteId] {
        &self.sites
    }

    pub fn position(&self, site: &str) -> Option<usize> {
        self.sites.iter().position(|s| s == site)
    }
}

/// A Pauli string: a fourth-root-of-unity phase and one letter per site.
///
/// Sites not mentioned carry `I`. Strings over different universes do not
/// combine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    phase: Phase,
    letters: Vec<PauliLetter>,
    universe: Arc<SiteUniverse>,
}

impl PauliString {
    /// The identity string.
    pub fn identity(universe: Arc<SiteUniverse>) -> PauliString {
        PauliString {
            phase: Phase::PLUS_ONE,
            letters: vec![PauliLetter::I; universe.len()],
            universe,
        }
    }

    /// A single letter at one site.
    pub fn single(
        universe: Arc<SiteUniverse>,
        site: &str,
        letter: PauliLetter,
    ) -> Result<PauliString, AlgebraError> {
        let mut p = PauliString::identity(universe);
        p.set(site, letter)?;
        Ok(p)
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn set_phase(&mut self, phase: Phase) {
        self.phase = phase;
    }

    pub fn mul_phase(&mut self, phase: Phase) {
        self.phase = self.phase.mul(phase);
    }

    pub fn universe(&self) -> &Arc<SiteUniverse> {
        &self.universe
    }

    pub fn letter_at(&self, pos: usize) -> PauliLetter {
        self.letters[pos]
    }

    pub fn letter(&self, site: &str) -> Option<PauliLetter> {
        self.universe.position(site).map(|p| self.letters[p])
    }

    pub fn set(&mut self, site: &str, letter: PauliLetter) -> Result<(), AlgebraError> {
        let pos = self
            .universe
            .position(site)
            .ok_or_else(|| AlgebraError::UnknownId(site.to_string()))?;
        self.letters[pos] = letter;
        Ok(())
    }

    /// Left-multiply the letter at `site` into the string: `self <- L·self`
    /// at that site, tracking the phase.
    pub fn mul_letter(&mut self, site: &str, letter: PauliLetter) -> Result<(), AlgebraError> {
        let pos = self
            .universe
            .position(site)
            .ok_or_else(|| AlgebraError::UnknownId(site.to_string()))?;
        let (ph, l) = letter.mul(self.letters[pos]);
        self.letters[pos] = l;
        self.phase = self.phase.mul(ph);
        Ok(())
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&l| l != PauliLetter::I).count()
    }

    pub fn is_identity_letters(&self) -> bool {
        self.letters.iter().all(|&l| l == PauliLetter::I)
    }

    fn check_universe(&self, other: &PauliString) -> Result<(), AlgebraError> {
        if self.universe == other.universe {
            Ok(())
        } else {
            Err(AlgebraError::UniverseMismatch(
                "pauli strings over different site universes".into(),
            ))
        }
    }

    /// Product `self · other`.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString, AlgebraError> {
        self.check_universe(other)?;
        let mut phase = self.phase.mul(other.phase);
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (ph, l) = a.mul(b);
                phase = phase.mul(ph);
                l
            })
            .collect();
        Ok(PauliString {
            phase,
            letters,
            universe: self.universe.clone(),
        })
    }

    /// True iff `self·other == other·self`.
    pub fn commutes(&self, other: &PauliString) -> Result<bool, AlgebraError> {
        self.check_universe(other)?;
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(&a, &b)| a.anticommutes(b))
            .count();
        Ok(anti % 2 == 0)
    }

    pub fn adjoint(&self) -> PauliString {
        PauliString {
            phase: self.phase.conj(),
            letters: self.letters.clone(),
            universe: self.universe.clone(),
        }
    }

    /// Exact `2^n × 2^n` matrix in the universe's site order.
    ///
    /// Basis convention: site at position `p` owns bit `n-1-p` of the basis
    /// index, so the bit string of an index reads like the letter string.
    pub fn matrix(&self) -> ExactMatrix {
        let n = self.universe.len();
        let dim: u64 = 1 << n;
        let mut m = ExactMatrix::zeros(dim, dim);
        for col in 0..dim {
            let (row, coeff) = self.apply_to_basis(col);
            if !coeff.is_zero() {
                m.add_entry(row, col, coeff);
            }
        }
        m
    }

    /// Action on a computational basis column: `P|col> = coeff |row>`.
    pub fn apply_to_basis(&self, col: u64) -> (u64, GInt) {
        let n = self.universe.len();
        let mut row = col;
        let mut coeff = self.phase.to_gint();
        for (p, &l) in self.letters.iter().enumerate() {
            let bit = n - 1 - p;
            let v = (col >> bit) & 1;
            match l {
                PauliLetter::I => {}
                PauliLetter::X => row ^= 1 << bit,
                PauliLetter::Z => {
                    if v == 1 {
                        coeff = -coeff;
                    }
                }
                PauliLetter::Y => {
                    row ^= 1 << bit;
                    // Y = i·X·Z
                    coeff = coeff.mul_i_pow(1);
                    if v == 1 {
                        coeff = -coeff;
                    }
                }
            }
        }
        (row, coeff)
    }

    /// Canonical text form, e.g. `+iXIZY`, sites in universe order.
    pub fn canonical_text(&self) -> String {
        let mut s = self.phase.to_string();
        if s == "+1" {
            s = "+".into();
        } else if s == "-1" {
            s = "-".into();
        }
        for &l in &self.letters {
            s.push(l.as_char());
        }
        s
    }

    /// Parse the canonical text form against a given universe.
    pub fn parse(text: &str, universe: Arc<SiteUniverse>) -> Result<PauliString, AlgebraError> {
        let t = text.trim();
        let (phase, rest) = if let Some(r) = t.strip_prefix("+i") {
            (Phase::PLUS_I, r)
        } else if let Some(r) = t.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = t.strip_prefix("+1") {
            (Phase::PLUS_ONE, r)
        } else if let Some(r) = t.strip_prefix("-1") {
            (Phase::MINUS_ONE, r)
        } else if let Some(r) = t.strip_prefix('+') {
            (Phase::PLUS_ONE, r)
        } else if let Some(r) = t.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else {
            (Phase::PLUS_ONE, t)
        };
        let rest = rest.trim();
        if rest.len() != universe.len() {
            return Err(AlgebraError::Parse(format!(
                "expected {} letters, got {}",
                universe.len(),
                rest.len()
            )));
        }
        let mut letters = Vec::with_capacity(rest.len());
        for c in rest.chars() {
            letters.push(
                PauliLetter::from_char(c)
                    .ok_or_else(|| AlgebraError::Parse(format!("bad Pauli letter {c:?}")))?,
            );
        }
        Ok(PauliString {
            phase,
            letters,
            universe,
        })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universe(n: usize) -> Arc<SiteUniverse> {
        SiteUniverse::new((0..n).map(|i| format!("e{i}")).collect())
    }

    #[test]
    fn single_site_xz() {
        // X·Z on one site has phase -i and letter Y.
        let u = universe(1);
        let x = PauliString::single(u.clone(), "e0", PauliLetter::X).unwrap();
        let z = PauliString::single(u, "e0", PauliLetter::Z).unwrap();
        let xz = x.mul(&z).unwrap();
        assert_eq!(xz.phase(), Phase::MINUS_I);
        assert_eq!(xz.letter("e0"), Some(PauliLetter::Y));
    }

    #[test]
    fn identity_neutral() {
        let u = universe(3);
        let id = PauliString::identity(u.clone());
        let mut p = PauliString::identity(u);
        p.set("e0", PauliLetter::Z).unwrap();
        p.set("e2", PauliLetter::Y).unwrap();
        p.mul_phase(Phase::MINUS_I);
        assert_eq!(id.mul(&p).unwrap(), p);
        assert_eq!(p.mul(&id).unwrap(), p);
    }

    #[test]
    fn per_site_decomposition() {
        // (Z⊗X)·(X⊗X): site 0 gives Z·X = +iY, site 1 gives X·X = I.
        let u = universe(2);
        let mut zx = PauliString::identity(u.clone());
        zx.set("e0", PauliLetter::Z).unwrap();
        zx.set("e1", PauliLetter::X).unwrap();
        let mut xx = PauliString::identity(u.clone());
        xx.set("e0", PauliLetter::X).unwrap();
        xx.set("e1", PauliLetter::X).unwrap();
        let prod = zx.mul(&xx).unwrap();
        assert_eq!(prod.phase(), Phase::PLUS_I);
        assert_eq!(prod.letter("e0"), Some(PauliLetter::Y));
        assert_eq!(prod.letter("e1"), Some(PauliLetter::I));
    }

    #[test]
    fn commutation() {
        let u = universe(2);
        let x0 = PauliString::single(u.clone(), "e0", PauliLetter::X).unwrap();
        let z0 = PauliString::single(u.clone(), "e0", PauliLetter::Z).unwrap();
        assert!(!x0.commutes(&z0).unwrap());
        let mut xx = PauliString::identity(u.clone());
        xx.set("e0", PauliLetter::X).unwrap();
        xx.set("e1", PauliLetter::X).unwrap();
        let mut zz = PauliString::identity(u.clone());
        zz.set("e0", PauliLetter::Z).unwrap();
        zz.set("e1", PauliLetter::Z).unwrap();
        assert!(xx.commutes(&zz).unwrap());
        let id = PauliString::identity(u);
        assert!(x0.commutes(&id).unwrap());
    }

    #[test]
    fn y_matrix() {
        let u = universe(1);
        let y = PauliString::single(u, "e0", PauliLetter::Y).unwrap();
        let m = y.matrix();
        assert_eq!(m.get(0, 1), GInt::new(0, -1));
        assert_eq!(m.get(1, 0), GInt::new(0, 1));
        assert_eq!(m.get(0, 0), GInt::ZERO);
        assert_eq!(m.get(1, 1), GInt::ZERO);
    }

    #[test]
    fn involution_matrix() {
        // (Z⊗X) squared is the identity matrix.
        let u = universe(2);
        let mut zx = PauliString::identity(u);
        zx.set("e0", PauliLetter::Z).unwrap();
        zx.set("e1", PauliLetter::X).unwrap();
        let m = zx.matrix();
        let sq = m.mul(&m);
        assert_eq!(sq, ExactMatrix::identity(4));
    }

    #[test]
    fn text_roundtrip() {
        let u = universe(4);
        let mut p = PauliString::identity(u.clone());
        p.set("e0", PauliLetter::X).unwrap();
        p.set("e2", PauliLetter::Z).unwrap();
        p.set("e3", PauliLetter::Y).unwrap();
        p.mul_phase(Phase::PLUS_I);
        let text = p.canonical_text();
        assert_eq!(text, "+iXIZY");
        let q = PauliString::parse(&text, u).unwrap();
        assert_eq!(p, q);
    }
}
