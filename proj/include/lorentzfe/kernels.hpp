#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lorentzfe {

/// Execution policy for the data-parallel kernels. Both policies produce
/// bit-identical results: every output cell is reduced in the same order.
enum class Exec { serial, parallel };

namespace kernels {

/// Precomputed transfer operator on a grid: for term n and cell i the source
/// cell is target[n * cells + i] and the coefficient is weight[n * cells + i].
struct TransferTable {
    std::size_t cells = 0;
    std::size_t terms = 0;
    std::vector<std::size_t> target;
    std::vector<double> weight;
};

/// out[i] = sum_n weight[n, i] * in[target[n, i]], per component (dim values
/// per cell, cell-major).
void transfer_serial(const TransferTable& t, std::span<const double> in, std::size_t dim, std::span<double> out);
void transfer_parallel(const TransferTable& t, std::span<const double> in, std::size_t dim, std::span<double> out);

inline void transfer(Exec e, const TransferTable& t, std::span<const double> in, std::size_t dim,
                     std::span<double> out) {
    e == Exec::parallel ? transfer_parallel(t, in, dim, out) : transfer_serial(t, in, dim, out);
}

/// Euclidean norm of each dim-vector row.
void row_norms_serial(std::span<const double> in, std::size_t dim, std::span<double> out);
void row_norms_parallel(std::span<const double> in, std::size_t dim, std::span<double> out);

/// Number of worker threads the parallel kernels will use.
int thread_count();

}  // namespace kernels
}  // namespace lorentzfe
