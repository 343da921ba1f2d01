use std::fmt;
use std::sync::Arc;

use super::{AlgebraError, ExactMatrix, GInt};

/// Identifier of a fermionic mode (a vertex of the mapping graph).
pub type ModeId = String;

/// Single-mode fermionic operator.
///
/// `X` and `Z` are the fermionic analogues of the Pauli operators,
/// `X = Σ_a |a+1)(a|` and `Z = Σ_a (-1)^a |a)(a|`; `Raise`/`Lower` are the
/// creation/annihilation operators. `X`, `Raise` and `Lower` are odd, `Z`
/// is even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FermionOp {
    X,
    Z,
    Raise,
    Lower,
}

impl FermionOp {
    /// Z2 grade: 1 for parity-odd operators.
    pub fn grade(self) -> u8 {
        match self {
            FermionOp::Z => 0,
            _ => 1,
        }
    }

    /// 2x2 matrix entries, row-major, basis (|0), |1)).
    pub fn entries(self) -> [[GInt; 2]; 2] {
        let o = GInt::ONE;
        let z = GInt::ZERO;
        match self {
            FermionOp::X => [[z, o], [o, z]],
            FermionOp::Z => [[o, z], [z, -o]],
            FermionOp::Raise => [[z, z], [o, z]],
            FermionOp::Lower => [[z, o], [z, z]],
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            FermionOp::X => "X",
            FermionOp::Z => "Z",
            FermionOp::Raise => "a†",
            FermionOp::Lower => "a",
        }
    }
}

/// Declared linear ordering of the fermionic modes.
///
/// The ordering is part of the data: the sign of a mapped operator depends
/// on the linear ordering chosen for the fermionic Hilbert space, so two
/// monomials only combine when declared over the same universe.
#[derive(Debug, PartialEq, Eq)]
pub struct ModeUniverse {
    modes: Vec<ModeId>,
}

impl ModeUniverse {
    pub fn new(modes: Vec<ModeId>) -> Arc<ModeUniverse> {
        Arc::new(ModeUniverse { modes })
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[ModeId] {
        &self.modes
    }

    pub fn position(&self, mode: &str) -> Option<usize> {
        self.modes.iter().position(|m| m == mode)
    }
}

/// An ordered product of single-mode fermionic operators with a sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermionMonomial {
    sign: i8,
    factors: Vec<(ModeId, FermionOp)>,
    universe: Arc<ModeUniverse>,
}

impl FermionMonomial {
    pub fn new(
        sign: i8,
        factors: Vec<(ModeId, FermionOp)>,
        universe: Arc<ModeUniverse>,
    ) -> Result<FermionMonomial, AlgebraError> {
        assert!(sign == 1 || sign == -1, "sign must be ±1");
        for (m, _) in &factors {
            if universe.position(m).is_none() {
                return Err(AlgebraError::UnknownId(m.clone()));
            }
        }
        Ok(FermionMonomial {
            sign,
            factors,
            universe,
        })
    }

    pub fn identity(universe: Arc<ModeUniverse>) -> FermionMonomial {
        FermionMonomial {
            sign: 1,
            factors: Vec::new(),
            universe,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn factors(&self) -> &[(ModeId, FermionOp)] {
        &self.factors
    }

    pub fn universe(&self) -> &Arc<ModeUniverse> {
        &self.universe
    }

    /// Z2 parity: the number of odd factors mod 2.
    pub fn parity(&self) -> u8 {
        (self
            .factors
            .iter()
            .map(|&(_, op)| op.grade() as u32)
            .sum::<u32>()
            % 2) as u8
    }

    /// Sort the factors into the declared mode ordering.
    ///
    /// Each transposition of two odd factors flips the sign; the relative
    /// order of factors on the same mode is preserved. Two adjacent equal
    /// `Raise` (or `Lower`) factors on one mode make the operator zero,
    /// which is reported as an error.
    pub fn canonicalize(&self) -> Result<FermionMonomial, AlgebraError> {
        let mut sign = self.sign;
        let mut factors: Vec<(usize, ModeId, FermionOp)> = self
            .factors
            .iter()
            .map(|(m, op)| (self.universe.position(m).expect("validated"), m.clone(), *op))
            .collect();
        // stable insertion sort, tracking graded transposition signs
        for i in 1..factors.len() {
            let mut j = i;
            while j > 0 && factors[j - 1].0 > factors[j].0 {
                if factors[j - 1].2.grade() == 1 && factors[j].2.grade() == 1 {
                    sign = -sign;
                }
                factors.swap(j - 1, j);
                j -= 1;
            }
        }
        for w in factors.windows(2) {
            if w[0].0 == w[1].0
                && w[0].2 == w[1].2
                && matches!(w[0].2, FermionOp::Raise | FermionOp::Lower)
            {
                return Err(AlgebraError::ZeroOperator(format!(
                    "{}[{}] squared",
                    w[0].2.symbol(),
                    w[0].1
                )));
            }
        }
        Ok(FermionMonomial {
            sign,
            factors: factors.into_iter().map(|(_, m, op)| (m, op)).collect(),
            universe: self.universe.clone(),
        })
    }

    /// Canonical text form, e.g. `-1 * a†[3] a[1]`.
    pub fn canonical_text(&self) -> String {
        let mut s = if self.sign >= 0 { "+1".to_string() } else { "-1".to_string() };
        if self.factors.is_empty() {
            s.push_str(" * 1");
            return s;
        }
        s.push_str(" *");
        for (m, op) in &self.factors {
            s.push_str(&format!(" {}[{}]", op.symbol(), m));
        }
        s
    }

    /// Parse the canonical text form. Accepts an optional leading `+1 *` or
    /// `-1 *`, then whitespace-separated factors `X[id]`, `Z[id]`, `a†[id]`
    /// (or `ad[id]`), `a[id]`.
    pub fn parse(text: &str, universe: Arc<ModeUniverse>) -> Result<FermionMonomial, AlgebraError> {
        let mut t = text.trim();
        let mut sign = 1i8;
        for (pat, s) in [("+1", 1i8), ("-1", -1i8), ("+", 1i8), ("-", -1i8)] {
            if let Some(rest) = t.strip_prefix(pat) {
                let rest = rest.trim_start();
                if let Some(rest) = rest.strip_prefix('*') {
                    sign = s;
                    t = rest.trim();
                    break;
                }
                if pat.len() == 2 && (rest.is_empty() || rest.starts_with(char::is_whitespace)) {
                    sign = s;
                    t = rest.trim();
                    break;
                }
            }
        }
        let mut factors = Vec::new();
        for tok in t.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let open = tok
                .find('[')
                .ok_or_else(|| AlgebraError::Parse(format!("bad factor {tok:?}")))?;
            if !tok.ends_with(']') {
                return Err(AlgebraError::Parse(format!("bad factor {tok:?}")));
            }
            let (name, idx) = (&tok[..open], &tok[open + 1..tok.len() - 1]);
            let op = match name {
                "X" | "X~" => FermionOp::X,
                "Z" | "Z~" => FermionOp::Z,
                "a†" | "ad" | "a+" => FermionOp::Raise,
                "a" => FermionOp::Lower,
                _ => return Err(AlgebraError::Parse(format!("unknown operator {name:?}"))),
            };
            if universe.position(idx).is_none() {
                return Err(AlgebraError::UnknownId(idx.to_string()));
            }
            factors.push((idx.to_string(), op));
        }
        FermionMonomial::new(sign, factors, universe)
    }
}

impl fmt::Display for FermionMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_text())
    }
}

/// Exact `2^n × 2^n` matrix of a monomial under the declared 1-dimensional
/// mode ordering.
///
/// Mode at position `p` owns bit `n-1-p` of the basis index. An odd operator
/// acting at position `p` picks up `(-1)^(occupation of positions < p)`,
/// which realizes the canonical anticommutation relations.
pub fn fermion_matrix(
    m: &FermionMonomial,
    universe: &Arc<ModeUniverse>,
) -> Result<ExactMatrix, AlgebraError> {
    if m.universe() != universe {
        return Err(AlgebraError::UniverseMismatch(
            "monomial universe differs from requested ordering".into(),
        ));
    }
    let n = universe.len();
    let dim: u64 = 1 << n;
    let mut out = ExactMatrix::zeros(dim, dim);
    for col in 0..dim {
        if let Some((row, coeff)) = apply_monomial_to_basis(m, col, n) {
            out.add_entry(row, col, coeff);
        }
    }
    Ok(out)
}

/// Apply a monomial to a computational basis state, factors acting right to
/// left. Returns `None` when the state is annihilated.
pub fn apply_monomial_to_basis(m: &FermionMonomial, col: u64, n: usize) -> Option<(u64, GInt)> {
    let mut state = col;
    let mut coeff = GInt::from(m.sign() as i64);
    for (mode, op) in m.factors().iter().rev() {
        let p = m.universe().position(mode).expect("validated");
        let bit = n - 1 - p;
        let occ = (state >> bit) & 1;
        if op.grade() == 1 {
            // parity of modes strictly before p in the ordering
            let mask_high = if p == 0 { 0 } else { ((1u64 << p) - 1) << (n - p) };
            if (state & mask_high).count_ones() % 2 == 1 {
                coeff = -coeff;
            }
        }
        match op {
            FermionOp::X => state ^= 1 << bit,
            FermionOp::Z => {
                if occ == 1 {
                    coeff = -coeff;
                }
            }
            FermionOp::Raise => {
                if occ == 1 {
                    return None;
                }
                state ^= 1 << bit;
            }
            FermionOp::Lower => {
                if occ == 0 {
                    return None;
                }
                state ^= 1 << bit;
            }
        }
    }
    Some((state, coeff))
}
