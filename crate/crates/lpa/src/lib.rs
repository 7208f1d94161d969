/*!
Exact symbolic arithmetic for the two-sided ideal lattice of the Leavitt path
algebra `L_K(E)` of a finite directed graph `E`.

Every ideal is kept in a canonical form consisting of a graded part, encoded
as an admissible pair `(H, S)` of a hereditary saturated vertex set and a
breaking-vertex selection, plus finitely many cycle parts `(c, f)` pairing a
cycle that has no exits in the quotient graph with a monic polynomial with
nonzero constant term. Sums, products, intersections, radicals, powers,
primality tests, prime-power factorization, and a cancellation analyzer are
all computed exactly on that form, over the rationals or a prime field.

Two independent ground-truth models keep the rewriting honest: a concrete
finite-dimensional matrix model for acyclic graphs ([`oracle`]) and the
Laurent polynomial ring `K[x, x^-1]` for cycle arithmetic ([`laurent`]).
The [`verify`] module turns the algebraic identities the engine is supposed
to satisfy into seeded, reproducible property suites.
*/

pub mod dsl;
pub mod field;
pub mod fixtures;
pub mod graph;
pub mod ideal;
pub mod laurent;
pub mod oracle;
pub mod pairs;
pub mod poly;
pub mod verify;

pub use field::{Field, FieldElem};
pub use graph::{Graph, Multiplicity, VertexId};
pub use ideal::{Engine, IdealForm};
pub use poly::Poly;
