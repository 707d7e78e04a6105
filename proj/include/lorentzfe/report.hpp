#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lorentzfe {

enum class Verdict { pass, fail, inconclusive };

std::string_view to_string(Verdict v);

/// Combines verdicts: any FAIL wins, then any INCONCLUSIVE.
Verdict combine(Verdict a, Verdict b);

/// Ordered flat key=value record. Every audit in the library can render
/// itself into one of these; the CLI writes them verbatim.
class Report {
public:
    Report& add(std::string key, std::string value);
    Report& add(std::string key, std::string_view value);
    Report& add(std::string key, const char* value);
    Report& add(std::string key, double value);
    Report& add(std::string key, std::int64_t value);
    Report& add(std::string key, int value) { return add(std::move(key), static_cast<std::int64_t>(value)); }
    Report& add(std::string key, std::size_t value) { return add(std::move(key), static_cast<std::int64_t>(value)); }
    Report& add(std::string key, bool value);
    Report& add(std::string key, Verdict value);

    /// Appends all entries of `other` with `prefix` prepended to each key.
    Report& merge(const Report& other, std::string_view prefix = {});

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    /// Value for `key`, or empty string when absent.
    std::string get(std::string_view key) const;

    void write(std::ostream& os) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

}  // namespace lorentzfe
