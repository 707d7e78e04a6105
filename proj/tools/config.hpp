#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lorentzfe/operator.hpp"

namespace lfe {

struct Overrides {
    std::optional<std::size_t> grid;
    std::optional<std::string> psi_family;
    std::optional<double> psi_param;
};

struct Oracle {
    std::optional<std::vector<double>> solution;  // constant value per component
    std::optional<double> norm;                   // ||h0||, every route
    double tol = 1e-9;
};

struct LoadedInstance {
    lorentzfe::ProblemInstance inst;
    std::optional<lorentzfe::YoungFn> big_psi;  // Orlicz Psi for `bridge`
    std::vector<std::pair<std::string, lorentzfe::SampledFn>> cov_h;
    Oracle oracle;
    std::filesystem::path source;
};

/// Reads a YAML instance (schema in README). Field errors throw
/// lorentzfe::InputError prefixed with the file, line and field path.
LoadedInstance load_instance(const std::filesystem::path& path, const Overrides& ov = {});

/// Grid size rule shared by the loader and the CLI: M >= 16, power of two.
void check_grid_size(std::size_t m);

/// Parses `--psi family` / `--m param` into a Young function.
lorentzfe::YoungFn psi_from(const std::string& family, double param);

}  // namespace lfe
