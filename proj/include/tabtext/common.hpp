#pragma once

// Shared small utilities: error type, string helpers, numeric formatting,
// content hashing. Everything else in the library builds on these.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tabtext {

class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw error(msg); }

// ------------------------------------------------------------ string helpers

inline std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

// Parse a whole token as a double; nullopt when any trailing junk remains.
inline std::optional<double> parse_number(std::string_view s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    // from_chars rejects leading '+'; accept it for CSV friendliness.
    if (!t.empty() && t[0] == '+') return parse_number(t.substr(1));
    return std::nullopt;
  }
  return v;
}

// Fixed-point rendering, printf semantics ("%.*f"). decimals == 0 prints the
// value bare with no decimal point. Negative zero is preserved ("-0.0").
inline std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return std::string(buf);
}

// Shortest round-trip rendering for data interchange (CSV export).
inline std::string fmt_roundtrip(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

// ------------------------------------------------------------ content hash

// FNV-1a 64-bit; used for deterministic run-record naming.
struct Fnv1a64 {
  uint64_t state = 1469598103934665603ull;
  void update(std::string_view s) {
    for (unsigned char c : s) {
      state ^= c;
      state *= 1099511628211ull;
    }
  }
  void update(uint64_t v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    update(std::string_view(buf, static_cast<size_t>(ptr - buf)));
  }
  std::string hex(int digits = 12) const {
    static const char* k = "0123456789abcdef";
    std::string out;
    for (int i = digits - 1; i >= 0; --i) out.push_back(k[(state >> (4 * i)) & 0xf]);
    return out;
  }
};

inline std::string content_hash(std::string_view payload, int digits = 12) {
  Fnv1a64 h;
  h.update(payload);
  return h.hex(digits);
}

// ------------------------------------------------------------ misc

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace tabtext
