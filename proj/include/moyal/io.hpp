#pragma once

// File formats. Every writer stamps the tool version and the spin tag;
// readers reject files whose tag disagrees with their content or with the
// spin the caller expects.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <moyal/continuous.hpp>
#include <moyal/discrete.hpp>

namespace moyal::io {

inline constexpr const char* tool_version = "moyal-spin 0.1.0";

/// Malformed or inconsistent input file or scalar.
class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "1/2", "1", "3/2", ...
std::string spin_tag(SpinJ s);

/// {"header": {...}, "two_s": int, "re": [[...]], "im": [[...]]}, row-major in a = s - m.
std::string write_operator(const Operator& a);
Operator read_operator(const std::string& text);

/// {"header": {...}, "two_s": int, "points": [[x, y, z], ...]} in nu order.
std::string write_constellation(const Constellation& c);
Constellation read_constellation(const std::string& text);
/// nu,theta,phi in radians.
std::string write_constellation_angles_csv(const Constellation& c);

/// Header `nu,value` (lower) or `nu,dual_value` (upper); nu counts from 1.
std::string write_symbol_csv(const Symbol& sym);
/// Header `nu,p`.
std::string write_probabilities_csv(const Symbol& p);

struct SymbolFile {
  std::vector<cplx> values;
  SymbolVariant variant = SymbolVariant::lower;
  std::optional<int> two_s;  // from the header comment, when present
};
/// Accepts `nu,value`, `nu,dual_value` and `nu,p` tables (the last as lower).
SymbolFile read_symbol_csv(const std::string& text);
/// Binds a parsed table to spin s; FormatError on length or spin mismatch.
Symbol to_symbol(const SymbolFile& file, SpinJ s, std::uint64_t kernel_id = 0);

/// theta,phi,value grid for plotting.
std::string write_grid_csv(SpinJ s, const std::vector<SymbolSample>& grid);

/// Dual operators plus a manifest naming the constellation file and its SHA-256.
std::string write_kernel_export(const KernelPair& kp, const std::string& constellation_path,
                                const std::string& constellation_sha256);

/// Text rendering of a validity report (one key: value per line).
std::string format_report(const ValidityReport& rep);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

/// "r@deg" (polar, degrees; "rad" suffix for radians) or "a+bi" (also "a", "bi", "-i").
cplx parse_complex(const std::string& text);
/// Real in radians, or with a "deg" suffix.
double parse_angle(const std::string& text);
/// Shortest round-trip rendering; "a+bi" when the imaginary part is not negligible.
std::string format_complex(cplx z);

std::string read_file(const std::string& path);
/// "-" writes to standard output.
void write_file(const std::string& path, const std::string& contents);

}  // namespace moyal::io
