#pragma once

// Tensor-product structure on multipartite Hilbert spaces. Party 0 is the
// most significant index: |i0 i1 ... i(n-1)>.

#include <cstddef>
#include <functional>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "entroof/errors.hpp"
#include "entroof/matrix.hpp"

namespace entroof {

using Dims = std::vector<std::size_t>;

inline std::size_t total_dim(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

inline std::string dims_string(std::span<const std::size_t> dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
  return s + "]";
}

/// Kronecker product, (A (x) B)[i rB + k, j cB + l] = A[i, j] B[k, l].
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

inline cvec tensor_product(std::span<const cplx> a, std::span<const cplx> b) {
  cvec r(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) r[i * b.size() + k] = a[i] * b[k];
  return r;
}

inline cvec tensor_product(const std::vector<cvec>& factors) {
  cvec r{1.0};
  for (const auto& f : factors) r = tensor_product(r, f);
  return r;
}

/// Reduced operator on the parties listed in `keep` (traced over the rest).
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                   const std::set<std::size_t>& keep) {
  const std::size_t d = total_dim(dims);
  if (!m.is_square() || m.rows() != d) {
    throw InvalidArgument("partial_trace: dims " + dims_string(dims) + " do not match matrix " + m.shape());
  }
  for (auto k : keep)
    if (k >= dims.size()) throw InvalidArgument("partial_trace: party index out of range");

  const std::size_t n = dims.size();
  std::size_t dk = 1;
  for (auto k : keep) dk *= dims[k];
  ComplexMatrix r(dk, dk);

  // digits of a flat index, party 0 most significant
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t p = n; p-- > 1;) stride[p - 1] = stride[p] * dims[p];
  auto kept_index = [&](std::size_t flat) {
    std::size_t idx = 0;
    for (std::size_t p = 0; p < n; ++p)
      if (keep.count(p)) idx = idx * dims[p] + (flat / stride[p]) % dims[p];
    return idx;
  };
  auto traced_index = [&](std::size_t flat) {
    std::size_t idx = 0;
    for (std::size_t p = 0; p < n; ++p)
      if (!keep.count(p)) idx = idx * dims[p] + (flat / stride[p]) % dims[p];
    return idx;
  };

  std::vector<std::size_t> ki(d), ti(d);
  for (std::size_t f = 0; f < d; ++f) {
    ki[f] = kept_index(f);
    ti[f] = traced_index(f);
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (ti[i] == ti[j]) r(ki[i], ki[j]) += m(i, j);
  return r;
}

/// Coefficient matrix C[i, j] of a bipartite vector psi = sum C[i, j] |i>|j>.
inline ComplexMatrix coefficient_matrix(std::span<const cplx> psi, std::size_t dim_a, std::size_t dim_b) {
  if (psi.size() != dim_a * dim_b) throw InvalidArgument("coefficient_matrix: size mismatch");
  return ComplexMatrix(dim_a, dim_b, cvec(psi.begin(), psi.end()));
}

}  // namespace entroof
