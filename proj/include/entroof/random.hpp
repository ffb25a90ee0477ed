#pragma once

// Seeded sampling. Every entry point takes an explicit seed or engine; there
// is no global RNG.

#include <cstdint>
#include <random>

#include "entroof/errors.hpp"
#include "entroof/matrix.hpp"
#include "entroof/tensor.hpp"

namespace entroof {

using Engine = std::mt19937_64;

/// Independent stream for sub-task `index` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Engine make_engine(std::uint64_t seed) { return Engine{seed}; }

inline cplx complex_normal(Engine& eng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(eng);
  const double im = n(eng);
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

inline ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Engine& eng) {
  ComplexMatrix g(rows, cols);
  for (auto& z : g.entries()) z = complex_normal(eng);
  return g;
}

/// Uniform unit vector in C^dim.
inline cvec random_unit_vector(std::size_t dim, Engine& eng) {
  cvec v(dim);
  for (auto& z : v) z = complex_normal(eng);
  return normalized(v);
}

/// Haar-distributed unitary: Gram-Schmidt on a Ginibre matrix, which is the
/// QR factorization with a positive diagonal in R.
inline ComplexMatrix haar_random_unitary(std::size_t dim, Engine& eng) {
  if (dim == 0) throw InvalidArgument("haar_random_unitary: dim must be >= 1");
  ComplexMatrix q = ginibre(dim, dim, eng);
  for (std::size_t j = 0; j < dim; ++j) {
    cvec v = q.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const cvec qk = q.column(k);
        const cplx ov = inner(qk, v);
        for (std::size_t i = 0; i < dim; ++i) v[i] -= ov * qk[i];
      }
    }
    q.set_column(j, normalized(v));
  }
  return q;
}

inline ComplexMatrix haar_random_unitary(std::size_t dim, std::uint64_t seed) {
  Engine eng = make_engine(seed);
  return haar_random_unitary(dim, eng);
}

/// Random density matrix G G^dagger / Tr with G a dim x rank Ginibre matrix
/// (induced measure); rank `rank` with probability one.
inline ComplexMatrix random_density_matrix(const Dims& dims, std::size_t rank, Engine& eng) {
  const std::size_t d = total_dim(dims);
  if (rank < 1 || rank > d) {
    throw InvalidArgument("random_density_matrix: rank " + std::to_string(rank) + " outside [1, " +
                          std::to_string(d) + "]");
  }
  const ComplexMatrix g = ginibre(d, rank, eng);
  ComplexMatrix rho = g * g.adjoint();
  const double tr = rho.trace().real();
  rho *= 1.0 / tr;
  // exact Hermitian symmetry
  for (std::size_t i = 0; i < d; ++i) {
    rho(i, i) = rho(i, i).real();
    for (std::size_t j = i + 1; j < d; ++j) rho(j, i) = std::conj(rho(i, j));
  }
  return rho;
}

inline ComplexMatrix random_density_matrix(const Dims& dims, std::size_t rank, std::uint64_t seed) {
  Engine eng = make_engine(seed);
  return random_density_matrix(dims, rank, eng);
}

}  // namespace entroof
