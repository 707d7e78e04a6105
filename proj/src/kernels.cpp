#include "lorentzfe/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lorentzfe::kernels {

void transfer_serial(const TransferTable& t, std::span<const double> in, std::size_t dim, std::span<double> out) {
    const std::size_t cells = t.cells;
    for (std::size_t i = 0; i < cells; ++i) {
        for (std::size_t c = 0; c < dim; ++c) {
            double acc = 0.0;
            for (std::size_t n = 0; n < t.terms; ++n) {
                const std::size_t k = n * cells + i;
                acc += t.weight[k] * in[t.target[k] * dim + c];
            }
            out[i * dim + c] = acc;
        }
    }
}

void transfer_parallel(const TransferTable& t, std::span<const double> in, std::size_t dim, std::span<double> out) {
    const auto cells = static_cast<std::ptrdiff_t>(t.cells);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < cells; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        for (std::size_t c = 0; c < dim; ++c) {
            double acc = 0.0;
            for (std::size_t n = 0; n < t.terms; ++n) {
                const std::size_t k = n * t.cells + i;
                acc += t.weight[k] * in[t.target[k] * dim + c];
            }
            out[i * dim + c] = acc;
        }
    }
}

void row_norms_serial(std::span<const double> in, std::size_t dim, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < dim; ++c) s += in[i * dim + c] * in[i * dim + c];
        out[i] = std::sqrt(s);
    }
}

void row_norms_parallel(std::span<const double> in, std::size_t dim, std::span<double> out) {
    const auto rows = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double s = 0.0;
        for (std::size_t c = 0; c < dim; ++c) s += in[i * dim + c] * in[i * dim + c];
        out[i] = std::sqrt(s);
    }
}

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace lorentzfe::kernels
