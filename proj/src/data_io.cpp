#include "negeo/data_io.hpp"

#include "negeo/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

namespace negeo::io {

namespace fs = std::filesystem;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw UsageError("not a number: '" + std::string(text) + "'");
    return v;
}

namespace {

int parse_int(std::string_view text) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw UsageError("not an integer: '" + std::string(text) + "'");
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.emplace_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// Header plus data rows of a comma-separated file.
struct Table {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> line_numbers;
};

Table read_table(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    Table t;
    t.path = path.string();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        auto fields = split(body);
        if (t.header.empty()) {
            t.header = std::move(fields);
            continue;
        }
        if (fields.size() != t.header.size())
            throw ValidationError(t.path + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(t.header.size()) + " fields");
        t.rows.push_back(std::move(fields));
        t.line_numbers.push_back(lineno);
    }
    if (in.bad()) throw IoError("error reading " + path.string());
    if (t.header.empty()) throw ValidationError(t.path + ": missing header");
    return t;
}

void expect_header(const Table& t, std::initializer_list<std::string_view> cols) {
    std::size_t k = 0;
    for (auto c : cols) {
        if (k >= t.header.size() || t.header[k] != c) {
            std::string want;
            for (auto x : cols) want += (want.empty() ? "" : ",") + std::string(x);
            throw UsageError(t.path + ": header must start with " + want);
        }
        ++k;
    }
}

template <class F>
auto at_line(const Table& t, std::size_t row, F&& f) {
    try {
        return f();
    } catch (const UsageError& e) {
        throw ValidationError(t.path + ":" + std::to_string(t.line_numbers[row]) + ": " + e.what());
    }
}

struct PairKey {
    Eigen::Index i, j;
    auto operator<=>(const PairKey&) const = default;
};

// Fills a symmetric matrix from (i, j, value) entries. Missing off-diagonal
// pairs and conflicting duplicates are errors.
Matrix complete_symmetric(const std::map<PairKey, double>& entries, Eigen::Index n,
                          double diagonal, const std::vector<std::string>& ids,
                          const std::string& what) {
    Matrix m = Matrix::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diagonal;
    for (const auto& [key, v] : entries) {
        const auto [i, j] = key;
        if (i == j) {
            if (v != diagonal)
                throw ValidationError(what + ": diagonal entry for " + ids[i] + " must be " +
                                      format_double(diagonal));
            continue;
        }
        auto mirror = entries.find({j, i});
        if (mirror != entries.end() && mirror->second != v)
            throw ValidationError(what + " asymmetric for pair (" + ids[i] + ", " + ids[j] +
                                  "): " + format_double(v) + " vs " + format_double(mirror->second));
        m(i, j) = m(j, i) = v;
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (std::isnan(m(i, j)))
                throw ValidationError(what + ": missing pair (" + ids[i] + ", " + ids[j] + ")");
    return m;
}

Eigen::Index region_index(const std::map<std::string, Eigen::Index>& lookup,
                          const std::string& id, const std::string& where) {
    auto it = lookup.find(id);
    if (it == lookup.end()) throw ValidationError(where + ": unknown region '" + id + "'");
    return it->second;
}

Matrix read_distances(const Table& t, const std::map<std::string, Eigen::Index>& lookup,
                      const std::vector<std::string>& ids) {
    std::map<PairKey, double> entries;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::string where = t.path + ":" + std::to_string(t.line_numbers[r]);
        const auto i = region_index(lookup, row[0], where);
        const auto j = region_index(lookup, row[1], where);
        const double d = at_line(t, r, [&] { return parse_double(row[2]); });
        if (!(d >= 0.0) || !std::isfinite(d))
            throw ValidationError(where + ": distance must be finite and >= 0");
        auto [it, inserted] = entries.emplace(PairKey{i, j}, d);
        if (!inserted && it->second != d)
            throw ValidationError(where + ": conflicting duplicate distance for (" + row[0] +
                                  ", " + row[1] + ")");
    }
    return complete_symmetric(entries, static_cast<Eigen::Index>(ids.size()), 0.0, ids,
                              "distance matrix");
}

std::map<int, Matrix> read_transport(const fs::path& path,
                                     const std::map<std::string, Eigen::Index>& lookup,
                                     const std::vector<std::string>& ids) {
    const Table t = read_table(path);
    expect_header(t, {"region_i", "region_j", "year", "T"});
    std::map<int, std::map<PairKey, double>> by_year;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::string where = t.path + ":" + std::to_string(t.line_numbers[r]);
        const auto i = region_index(lookup, row[0], where);
        const auto j = region_index(lookup, row[1], where);
        const int year = at_line(t, r, [&] { return parse_int(row[2]); });
        const double v = at_line(t, r, [&] { return parse_double(row[3]); });
        if (!(v >= 1.0) || !std::isfinite(v))
            throw ValidationError(where + ": transport factor must be finite and >= 1");
        auto [it, inserted] = by_year[year].emplace(PairKey{i, j}, v);
        if (!inserted && it->second != v)
            throw ValidationError(where + ": conflicting duplicate transport factor");
    }
    std::map<int, Matrix> out;
    for (const auto& [year, entries] : by_year)
        out[year] = complete_symmetric(entries, static_cast<Eigen::Index>(ids.size()), 1.0, ids,
                                       "transport matrix (year " + std::to_string(year) + ")");
    return out;
}

}  // namespace

Geography load_geography(const fs::path& distances_path,
                         const std::optional<fs::path>& transport_path,
                         std::vector<std::string>& region_ids) {
    const Table t = read_table(distances_path);
    expect_header(t, {"region_i", "region_j", "d"});
    region_ids.clear();
    std::map<std::string, Eigen::Index> lookup;
    for (const auto& row : t.rows)
        for (int c = 0; c < 2; ++c)
            if (lookup.emplace(row[c], static_cast<Eigen::Index>(region_ids.size())).second)
                region_ids.push_back(row[c]);
    if (region_ids.empty()) throw ValidationError(t.path + ": no regions");

    Geography geo;
    geo.distance = read_distances(t, lookup, region_ids);
    if (transport_path) geo.transport = read_transport(*transport_path, lookup, region_ids);
    geo.validate();
    return geo;
}

Panel load_panel(const fs::path& panel_path, const fs::path& distances_path,
                 const std::optional<fs::path>& transport_path) {
    const Table t = read_table(panel_path);
    expect_header(t, {"region", "year", "w", "Y"});
    const bool has_h = t.header.size() >= 5 && t.header[4] == "H";
    if (t.header.size() > (has_h ? 5u : 4u))
        throw UsageError(t.path + ": unexpected extra columns");

    Panel panel;
    std::map<std::string, Eigen::Index> lookup;
    struct Row {
        double w, Y, H;
    };
    std::map<std::pair<Eigen::Index, int>, Row> cells;
    std::set<int> years;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        auto [it, fresh] = lookup.emplace(row[0], static_cast<Eigen::Index>(panel.region_ids.size()));
        if (fresh) panel.region_ids.push_back(row[0]);
        Row cell{};
        const int year = at_line(t, r, [&] { return parse_int(row[1]); });
        at_line(t, r, [&] {
            cell.w = parse_double(row[2]);
            cell.Y = parse_double(row[3]);
            cell.H = has_h ? parse_double(row[4]) : 0.0;
            return 0;
        });
        if (!cells.emplace(std::pair{it->second, year}, cell).second)
            throw ValidationError(t.path + ":" + std::to_string(t.line_numbers[r]) +
                                  ": duplicate row for region '" + row[0] + "' year " +
                                  std::to_string(year));
        years.insert(year);
    }
    if (panel.region_ids.empty()) throw ValidationError(t.path + ": no observations");

    // Rectangularity: every region in every year, years consecutive.
    std::vector<std::string> gaps;
    for (int y = *years.begin(); y <= *years.rbegin(); ++y)
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(panel.region_ids.size()); ++i)
            if (!cells.count({i, y})) gaps.push_back(panel.region_ids[i] + "@" + std::to_string(y));
    if (!gaps.empty()) {
        std::string list;
        for (std::size_t k = 0; k < gaps.size() && k < 20; ++k) list += (k ? ", " : "") + gaps[k];
        if (gaps.size() > 20) list += ", ...";
        throw ValidationError(t.path + ": missing region/year combinations: " + list);
    }

    // Geography, reordered to the panel's region order.
    std::vector<std::string> geo_ids;
    Geography raw = load_geography(distances_path, transport_path, geo_ids);
    std::map<std::string, Eigen::Index> geo_lookup;
    for (std::size_t k = 0; k < geo_ids.size(); ++k)
        geo_lookup[geo_ids[k]] = static_cast<Eigen::Index>(k);
    const auto n = static_cast<Eigen::Index>(panel.region_ids.size());
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        auto it = geo_lookup.find(panel.region_ids[i]);
        if (it == geo_lookup.end())
            throw ValidationError(distances_path.string() + ": no distances for region '" +
                                  panel.region_ids[i] + "'");
        perm[i] = it->second;
    }
    if (static_cast<Eigen::Index>(geo_ids.size()) != n)
        throw ValidationError(distances_path.string() + ": regions not present in the panel");
    auto reorder = [&](const Matrix& m) {
        Matrix out(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(perm[i], perm[j]);
        return out;
    };
    panel.geography.distance = reorder(raw.distance);
    for (const auto& [year, m] : raw.transport) panel.geography.transport[year] = reorder(m);

    for (int y = *years.begin(); y <= *years.rbegin(); ++y) {
        PanelSlice s;
        s.year = y;
        s.Y.resize(n);
        s.w.resize(n);
        if (has_h) s.H = Vector(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Row& c = cells.at({i, y});
            s.w(i) = c.w;
            s.Y(i) = c.Y;
            if (has_h) (*s.H)(i) = c.H;
        }
        if (transport_path) {
            auto it = panel.geography.transport.find(y);
            if (it == panel.geography.transport.end())
                throw ValidationError(transport_path->string() + ": no transport costs for year " +
                                      std::to_string(y));
            s.T = it->second;
        }
        panel.slices.push_back(std::move(s));
    }
    panel.validate();
    return panel;
}

std::vector<std::string> flagged_rows(const Panel& panel) {
    std::vector<std::string> out;
    auto bad = [](double v) { return !(v > 0.0) || !std::isfinite(v); };
    for (const auto& s : panel.slices)
        for (Eigen::Index i = 0; i < panel.regions(); ++i)
            if (bad(s.w(i)) || bad(s.Y(i)) || (s.H && bad((*s.H)(i))))
                out.push_back(panel.region_ids[i] + "@" + std::to_string(s.year));
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("error writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

void write_panel(const Panel& panel, const fs::path& panel_path, const fs::path& distances_path,
                 const std::optional<fs::path>& transport_path) {
    panel.validate();
    const Eigen::Index n = panel.regions();
    std::vector<std::string> ids = panel.region_ids;
    if (ids.empty())
        for (Eigen::Index i = 0; i < n; ++i) ids.push_back("r" + std::to_string(i + 1));

    const bool has_h = panel.has_housing();
    std::string p = has_h ? "region,year,w,Y,H\n" : "region,year,w,Y\n";
    for (Eigen::Index i = 0; i < n; ++i) {
        for (const auto& s : panel.slices) {
            p += ids[i] + "," + std::to_string(s.year) + "," + format_double(s.w(i)) + "," +
                 format_double(s.Y(i));
            if (has_h) p += "," + format_double((*s.H)(i));
            p += "\n";
        }
    }

    std::string d = "region_i,region_j,d\n";
    if (n == 1) d += ids[0] + "," + ids[0] + ",0\n";
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            d += ids[i] + "," + ids[j] + "," + format_double(panel.geography.distance(i, j)) + "\n";

    std::string t;
    if (transport_path) {
        if (!panel.has_transport()) throw UsageError("panel has no transport costs to write");
        t = "region_i,region_j,year,T\n";
        for (const auto& s : panel.slices) {
            if (n == 1) t += ids[0] + "," + ids[0] + "," + std::to_string(s.year) + ",1\n";
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = i + 1; j < n; ++j)
                    t += ids[i] + "," + ids[j] + "," + std::to_string(s.year) + "," +
                         format_double((*s.T)(i, j)) + "\n";
        }
    }

    write_file_atomic(panel_path, p);
    write_file_atomic(distances_path, d);
    if (transport_path) write_file_atomic(*transport_path, t);
}

}  // namespace negeo::io
