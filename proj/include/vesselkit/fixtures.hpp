#pragma once

// Deterministic problem generators for experiments and tests. Everything is
// reproducible from the 64-bit seed alone.

#include "vesselkit/vessel.hpp"

namespace vesselkit {
namespace fixtures {

Matrix kron(const Matrix& a, const Matrix& b);

// Random strictly dissipative k x k matrix: Hermitian part Gaussian,
// imaginary part positive definite with smallest eigenvalue >= floor.
Matrix dissipative_matrix(Rng& rng, int k, double imag_floor = 0.35);

// A_j = I x ... x a_j x ... x I with dissipative tensor factors of size
// `factor_dim`; the tuple is doubly commuting by construction.
CommutingTuple tensor_tuple(std::uint64_t seed, int d, int factor_dim);

// Single Jordan block lambda I + N plus i times a positive definite
// perturbation, scaled to keep norms moderate (d = 1).
CommutingTuple jordan_tuple(std::uint64_t seed, int n);

// d operators p_j(M) + i c_j I from a shared source M; commuting by
// construction, c_j raised until every operator is dissipative (at most 100
// attempts per draw).
CommutingTuple polynomial_tuple(std::uint64_t seed, int d, int n,
                                int max_tries = 100);

// Strict tensor vessel with the signal space extended by one direction that
// every Phi^* sigma_j kills and that the normalized pencil leaves invariant;
// the canonical non-minimal dilation witness.
Vessel decoupled_w_vessel(std::uint64_t seed, int d, int factor_dim);

}  // namespace fixtures
}  // namespace vesselkit
