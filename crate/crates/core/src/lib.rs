//! Exact compiler from local fermionic operators to qubit (Pauli) operators.
//!
//! The mapping is realized by a graded tensor network: a parity-even copy
//! tensor on every edge of a graph and a parity-even vertex tensor on every
//! vertex. Fermionic operators acting on the vertices push through the
//! network and come out as Pauli strings acting on the edges. The image spin
//! theory is a gauge theory with one constraint per independent cycle of the
//! graph; on a torus the two non-contractible constraints can be lifted and
//! traded for (twisted) boundary conditions on the fermion side.
//!
//! Everything is computed in exact arithmetic (Gaussian integers). Every
//! symbolic rule is cross-checked against a brute-force matrix realization of
//! the same network, so there is no floating point and no tolerance anywhere.
//!
//! The crate is organized as:
//!
//! * [`algebra`] — Pauli strings, fermionic monomials, and sparse exact
//!   matrices over the Gaussian integers.
//! * [`graded`] — the Z2-graded tensor engine: swap/trace sign bookkeeping,
//!   the copy and vertex tensors, leg operators, and contraction.
//! * [`graph`] — mapping graphs with per-vertex leg orderings and edge
//!   arrows; cycle/torus presets; cycle-space computations.
//! * [`encoder`] — network assembly, symbolic operator mapping, gauge
//!   constraints, sector/twist tables, duality composition, unification.
//! * [`oracle`] — exact matrix realization of small networks and the
//!   verification suites anchoring every symbolic rule.
//! * [`cli`] — the `fqmap` command-line interface.

pub mod algebra;
pub mod cli;
pub mod encoder;
pub mod graded;
pub mod graph;
pub mod oracle;
