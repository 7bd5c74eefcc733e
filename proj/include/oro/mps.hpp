#pragma once

#include "oro/lp.hpp"

#include <iosfwd>
#include <string>

namespace oro {

/// Parse failure; the message carries the 1-based line number.
class MpsError : public std::runtime_error {
  public:
    MpsError(int line, const std::string& what)
        : std::runtime_error("mps:" + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

/// Reads fixed- or free-format MPS (sections NAME, ROWS, COLUMNS, RHS,
/// RANGES, BOUNDS, ENDATA; tokenized on whitespace). Row senses are
/// normalized to <= and =, RANGES expand to paired inequalities, and
/// integrality markers are ignored with a warning recorded on the result.
NominalLP parse_mps(std::istream& in);
NominalLP parse_mps_string(const std::string& text);
NominalLP parse_mps_file(const std::string& path);

/// Debug dump of the normalized LP as MPS text (all inequalities as L rows).
/// Not a compatibility surface, but parse_mps reads it back.
std::string write_mps(const NominalLP& lp, const std::string& name = "ORO");

/// Structural equality: same columns, bounds, rows and right-hand sides
/// (entries compared exactly, names included).
bool structurally_equal(const NominalLP& a, const NominalLP& b);

} // namespace oro
