#include "lorentzfe/report.hpp"

#include <charconv>
#include <cmath>

namespace lorentzfe {

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "UNKNOWN";
}

Verdict combine(Verdict a, Verdict b) {
    if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
    if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
    return Verdict::pass;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Report& Report::add(std::string key, std::string value) {
    entries_.emplace_back(std::move(key), std::move(value));
    return *this;
}

Report& Report::add(std::string key, std::string_view value) { return add(std::move(key), std::string(value)); }
Report& Report::add(std::string key, const char* value) { return add(std::move(key), std::string(value)); }
Report& Report::add(std::string key, double value) { return add(std::move(key), format_double(value)); }
Report& Report::add(std::string key, std::int64_t value) { return add(std::move(key), std::to_string(value)); }
Report& Report::add(std::string key, bool value) { return add(std::move(key), std::string(value ? "true" : "false")); }
Report& Report::add(std::string key, Verdict value) { return add(std::move(key), to_string(value)); }

Report& Report::merge(const Report& other, std::string_view prefix) {
    for (const auto& [k, v] : other.entries_) entries_.emplace_back(std::string(prefix) + k, v);
    return *this;
}

std::string Report::get(std::string_view key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    return {};
}

void Report::write(std::ostream& os) const {
    for (const auto& [k, v] : entries_) os << k << '=' << v << '\n';
}

}  // namespace lorentzfe
