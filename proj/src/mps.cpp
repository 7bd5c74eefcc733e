#include "oro/mps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace oro {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

double parse_number(const std::string& tok, int line) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != nullptr && *end == '\0') return v;
    // Fortran-style exponents (1.5D+2) show up in old data files.
    std::string fixed = tok;
    for (char& ch : fixed)
        if (ch == 'D' || ch == 'd') ch = 'E';
    v = std::strtod(fixed.c_str(), &end);
    if (end != nullptr && *end == '\0') return v;
    throw MpsError(line, "cannot parse numeric field '" + tok + "'");
}

enum class Section { None, Name, Rows, Columns, Rhs, Ranges, Bounds, Done };

struct RawRow {
    char sense = 'N';
    std::string name;
    sprow entries;
    double rhs = 0.0;
    bool has_range = false;
    double range = 0.0;
};

} // namespace

NominalLP parse_mps(std::istream& in) {
    std::vector<RawRow> rows;
    std::map<std::string, int> row_index;
    int objective_row = -1;

    std::vector<std::string> col_names;
    std::map<std::string, int> col_index;
    dvec obj_coeffs;
    dvec lower, upper;
    std::vector<bool> lower_set, upper_set;
    // per column, rows already carrying an entry (objective uses id -1)
    std::vector<std::vector<int>> col_rows_seen;

    std::vector<std::string> warnings;
    Section section = Section::None;
    bool saw_endata = false;
    bool in_integer_block = false;
    int lineno = 0;

    auto require_row = [&](const std::string& name, int line) {
        auto it = row_index.find(name);
        if (it == row_index.end()) throw MpsError(line, "unknown row reference '" + name + "'");
        return it->second;
    };
    auto require_col = [&](const std::string& name, int line) {
        auto it = col_index.find(name);
        if (it == col_index.end()) throw MpsError(line, "unknown column reference '" + name + "'");
        return it->second;
    };

    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '*') continue;
        const bool header = !std::isspace(static_cast<unsigned char>(line[0]));
        auto toks = tokenize(line);
        if (toks.empty()) continue;

        if (header) {
            const std::string& kw = toks[0];
            if (kw == "NAME") { section = Section::Name; continue; }
            if (kw == "ROWS") { section = Section::Rows; continue; }
            if (kw == "COLUMNS") { section = Section::Columns; continue; }
            if (kw == "RHS") { section = Section::Rhs; continue; }
            if (kw == "RANGES") { section = Section::Ranges; continue; }
            if (kw == "BOUNDS") { section = Section::Bounds; continue; }
            if (kw == "ENDATA") { saw_endata = true; section = Section::Done; break; }
            throw MpsError(lineno, "unknown section '" + kw + "'");
        }

        switch (section) {
        case Section::None:
            throw MpsError(lineno, "data before any section header");
        case Section::Name:
        case Section::Done:
            continue;
        case Section::Rows: {
            if (toks.size() < 2) throw MpsError(lineno, "ROWS entry needs a sense and a name");
            std::string sense = toks[0];
            std::transform(sense.begin(), sense.end(), sense.begin(), ::toupper);
            if (sense != "N" && sense != "L" && sense != "G" && sense != "E")
                throw MpsError(lineno, "unknown row sense '" + toks[0] + "'");
            if (row_index.count(toks[1]) != 0)
                throw MpsError(lineno, "duplicate row name '" + toks[1] + "'");
            if (sense == "N") {
                if (objective_row >= 0) {
                    warnings.push_back("extra free (N) row '" + toks[1] + "' ignored");
                    row_index[toks[1]] = -2; // known name, but not materialized
                    continue;
                }
                objective_row = 0; // marker; objective entries tracked separately
                row_index[toks[1]] = -1;
                continue;
            }
            RawRow r;
            r.sense = sense[0];
            r.name = toks[1];
            row_index[toks[1]] = static_cast<int>(rows.size());
            rows.push_back(std::move(r));
            continue;
        }
        case Section::Columns: {
            if (toks.size() >= 3 && toks[1] == "'MARKER'") {
                if (toks[2] == "'INTORG'") {
                    in_integer_block = true;
                    warnings.push_back("integrality markers ignored (line " + std::to_string(lineno) + ")");
                } else if (toks[2] == "'INTEND'") {
                    in_integer_block = false;
                }
                continue;
            }
            if (toks.size() < 3 || toks.size() % 2 == 0)
                throw MpsError(lineno, "COLUMNS entry needs name plus row/value pairs");
            const std::string& cname = toks[0];
            int cj;
            auto it = col_index.find(cname);
            if (it == col_index.end()) {
                cj = static_cast<int>(col_names.size());
                col_index[cname] = cj;
                col_names.push_back(cname);
                obj_coeffs.push_back(0.0);
                lower.push_back(0.0);
                upper.push_back(kInf);
                lower_set.push_back(false);
                upper_set.push_back(false);
                col_rows_seen.emplace_back();
                if (in_integer_block)
                    warnings.push_back("column '" + cname + "' declared integer; treated as continuous");
            } else {
                cj = it->second;
            }
            for (size_t t = 1; t + 1 < toks.size(); t += 2) {
                auto rit = row_index.find(toks[t]);
                if (rit == row_index.end())
                    throw MpsError(lineno, "unknown row reference '" + toks[t] + "'");
                const int rid = rit->second;
                const double val = parse_number(toks[t + 1], lineno);
                if (rid == -2) continue; // ignored extra N row
                auto& seen = col_rows_seen[cj];
                if (std::find(seen.begin(), seen.end(), rid) != seen.end())
                    throw MpsError(lineno, "duplicate entry for column '" + cname + "' in row '" +
                                               toks[t] + "'");
                seen.push_back(rid);
                if (rid == -1) obj_coeffs[cj] = val;
                else rows[rid].entries.emplace_back(cj, val);
            }
            continue;
        }
        case Section::Rhs: {
            if (toks.size() < 3 || toks.size() % 2 == 0)
                throw MpsError(lineno, "RHS entry needs set name plus row/value pairs");
            for (size_t t = 1; t + 1 < toks.size(); t += 2) {
                const double val = parse_number(toks[t + 1], lineno);
                auto rit = row_index.find(toks[t]);
                if (rit == row_index.end())
                    throw MpsError(lineno, "unknown row reference '" + toks[t] + "'");
                if (rit->second == -1) {
                    warnings.push_back("RHS entry on the objective row ignored");
                    continue;
                }
                if (rit->second == -2) continue;
                rows[rit->second].rhs = val;
            }
            continue;
        }
        case Section::Ranges: {
            if (toks.size() < 3 || toks.size() % 2 == 0)
                throw MpsError(lineno, "RANGES entry needs set name plus row/value pairs");
            for (size_t t = 1; t + 1 < toks.size(); t += 2) {
                const int rid = require_row(toks[t], lineno);
                if (rid < 0) throw MpsError(lineno, "RANGES cannot apply to a free row");
                rows[rid].has_range = true;
                rows[rid].range = parse_number(toks[t + 1], lineno);
            }
            continue;
        }
        case Section::Bounds: {
            if (toks.size() < 3) throw MpsError(lineno, "BOUNDS entry too short");
            std::string type = toks[0];
            std::transform(type.begin(), type.end(), type.begin(), ::toupper);
            const int cj = require_col(toks[2], lineno);
            const bool needs_value = type == "UP" || type == "LO" || type == "FX";
            if (needs_value && toks.size() < 4)
                throw MpsError(lineno, "bound type " + type + " needs a value");
            const double val = needs_value ? parse_number(toks[3], lineno) : 0.0;
            if (type == "UP") { upper[cj] = val; upper_set[cj] = true; }
            else if (type == "LO") { lower[cj] = val; lower_set[cj] = true; }
            else if (type == "FX") { lower[cj] = upper[cj] = val; lower_set[cj] = upper_set[cj] = true; }
            else if (type == "FR") { lower[cj] = -kInf; upper[cj] = kInf; lower_set[cj] = upper_set[cj] = true; }
            else if (type == "MI") { lower[cj] = -kInf; lower_set[cj] = true; }
            else if (type == "PL") { upper[cj] = kInf; upper_set[cj] = true; }
            else if (type == "BV") {
                lower[cj] = 0.0;
                upper[cj] = 1.0;
                lower_set[cj] = upper_set[cj] = true;
                warnings.push_back("binary bound on column '" + toks[2] + "' relaxed to [0,1]");
            } else {
                throw MpsError(lineno, "unknown bound type '" + toks[0] + "'");
            }
            continue;
        }
        }
    }
    if (!saw_endata) throw MpsError(lineno, "missing ENDATA");

    NominalLP lp;
    lp.c = obj_coeffs;
    lp.lower = lower;
    lp.upper = upper;
    lp.col_names = col_names;
    lp.warnings = warnings;

    auto negated = [](const sprow& row) {
        sprow out = row;
        for (auto& [j, v] : out) v = -v;
        return out;
    };

    for (const auto& r : rows) {
        switch (r.sense) {
        case 'L':
            lp.add_ineq(r.entries, r.rhs, r.name);
            if (r.has_range) // b - |range| <= a'w
                lp.add_ineq(negated(r.entries), -(r.rhs - std::fabs(r.range)), r.name + ".rlo");
            break;
        case 'G':
            lp.add_ineq(negated(r.entries), -r.rhs, r.name);
            if (r.has_range) // a'w <= b + |range|
                lp.add_ineq(r.entries, r.rhs + std::fabs(r.range), r.name + ".rhi");
            break;
        case 'E':
            if (r.has_range) {
                // range >= 0: [rhs, rhs+range]; range < 0: [rhs+range, rhs]
                const double lo = r.range >= 0.0 ? r.rhs : r.rhs + r.range;
                const double hi = r.range >= 0.0 ? r.rhs + r.range : r.rhs;
                lp.add_ineq(r.entries, hi, r.name + ".rhi");
                lp.add_ineq(negated(r.entries), -lo, r.name + ".rlo");
            } else {
                lp.add_eq(r.entries, r.rhs, r.name);
            }
            break;
        default:
            break;
        }
    }
    lp.validate();
    return lp;
}

NominalLP parse_mps_string(const std::string& text) {
    std::istringstream ss(text);
    return parse_mps(ss);
}

NominalLP parse_mps_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open MPS file: " + path);
    return parse_mps(f);
}

std::string write_mps(const NominalLP& lp, const std::string& name) {
    std::ostringstream out;
    out << "NAME          " << name << "\n";
    out << "ROWS\n";
    out << " N  OBJ\n";
    for (const auto& rn : lp.ineq_names) out << " L  " << rn << "\n";
    for (const auto& rn : lp.eq_names) out << " E  " << rn << "\n";

    // column-major entry lists
    const int n = lp.num_cols();
    std::vector<std::vector<std::pair<std::string, double>>> per_col(n);
    for (int j = 0; j < n; ++j)
        if (lp.c[j] != 0.0) per_col[j].emplace_back("OBJ", lp.c[j]);
    for (int r = 0; r < lp.num_ineq(); ++r)
        for (const auto& [j, v] : lp.ineq[r]) per_col[j].emplace_back(lp.ineq_names[r], v);
    for (int r = 0; r < lp.num_eq(); ++r)
        for (const auto& [j, v] : lp.eq[r]) per_col[j].emplace_back(lp.eq_names[r], v);

    out << "COLUMNS\n";
    for (int j = 0; j < n; ++j) {
        if (per_col[j].empty()) {
            // declare the column even when it touches nothing
            out << "    " << lp.col_names[j] << "  OBJ  0\n";
            continue;
        }
        for (const auto& [rn, v] : per_col[j])
            out << "    " << lp.col_names[j] << "  " << rn << "  " << fmt_double(v) << "\n";
    }

    out << "RHS\n";
    for (int r = 0; r < lp.num_ineq(); ++r)
        if (lp.ineq_rhs[r] != 0.0)
            out << "    RHS  " << lp.ineq_names[r] << "  " << fmt_double(lp.ineq_rhs[r]) << "\n";
    for (int r = 0; r < lp.num_eq(); ++r)
        if (lp.eq_rhs[r] != 0.0)
            out << "    RHS  " << lp.eq_names[r] << "  " << fmt_double(lp.eq_rhs[r]) << "\n";

    out << "BOUNDS\n";
    for (int j = 0; j < n; ++j) {
        const double lo = lp.lower[j], hi = lp.upper[j];
        if (lo == 0.0 && hi == kInf) continue;
        if (lo == hi) {
            out << " FX BND  " << lp.col_names[j] << "  " << fmt_double(lo) << "\n";
            continue;
        }
        if (lo == -kInf && hi == kInf) {
            out << " FR BND  " << lp.col_names[j] << "\n";
            continue;
        }
        if (lo == -kInf) out << " MI BND  " << lp.col_names[j] << "\n";
        else if (lo != 0.0) out << " LO BND  " << lp.col_names[j] << "  " << fmt_double(lo) << "\n";
        if (hi != kInf) out << " UP BND  " << lp.col_names[j] << "  " << fmt_double(hi) << "\n";
    }
    out << "ENDATA\n";
    return out.str();
}

bool structurally_equal(const NominalLP& a, const NominalLP& b) {
    auto norm_rows = [](std::vector<sprow> rows) {
        for (auto& r : rows) std::sort(r.begin(), r.end());
        return rows;
    };
    return a.c == b.c && a.lower == b.lower && a.upper == b.upper &&
           a.ineq_rhs == b.ineq_rhs && a.eq_rhs == b.eq_rhs &&
           norm_rows(a.ineq) == norm_rows(b.ineq) && norm_rows(a.eq) == norm_rows(b.eq) &&
           a.col_names == b.col_names && a.ineq_names == b.ineq_names && a.eq_names == b.eq_names;
}

} // namespace oro
