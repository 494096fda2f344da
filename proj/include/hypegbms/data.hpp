#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hypegbms/errors.hpp"

namespace hypegbms {

struct Dataset {
    std::vector<std::vector<double>> features;  // N x p
    std::optional<std::vector<int>> labels;
    std::optional<std::vector<std::string>> names;

    std::size_t n() const { return features.size(); }
    std::size_t p() const { return features.empty() ? 0 : features[0].size(); }
};

using LabelColumn = std::variant<std::monostate, std::string, std::size_t>;

namespace detail {

inline std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();  // accept CRLF
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::optional<double> parse_double(const std::string& cell) {
    const std::string s = trim(cell);
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

} // namespace detail

/// Loads a rectangular numeric CSV, optionally peeling off a label column
/// (by header name or 0-based index). Labels are factorized to contiguous
/// ints in first-appearance order.
inline Dataset load_csv(const std::string& path, const LabelColumn& label_column = {},
                        bool has_header = false) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open file: " + path);

    Dataset ds;
    std::string line;
    long lineno = 0;
    std::size_t ncols = 0;
    std::optional<std::size_t> label_idx;

    if (has_header) {
        if (!std::getline(in, line)) throw parse_error("empty file: " + path, 1);
        ++lineno;
        auto header = detail::split_csv_line(std::move(line));
        ncols = header.size();
        ds.names = header;
    }
    if (const auto* name = std::get_if<std::string>(&label_column)) {
        if (!ds.names) throw std::invalid_argument("label column by name requires a header");
        for (std::size_t i = 0; i < ds.names->size(); ++i)
            if ((*ds.names)[i] == *name) label_idx = i;
        if (!label_idx) throw std::invalid_argument("label column not found: " + *name);
    } else if (const auto* idx = std::get_if<std::size_t>(&label_column)) {
        label_idx = *idx;
    }

    std::vector<std::string> raw_labels;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(std::move(line));
        if (ncols == 0) ncols = cells.size();
        if (cells.size() != ncols)
            throw parse_error("ragged row: expected " + std::to_string(ncols) + " columns, got " +
                                  std::to_string(cells.size()),
                              lineno);
        if (label_idx && *label_idx >= ncols)
            throw std::invalid_argument("label column index out of range");
        std::vector<double> row;
        row.reserve(ncols);
        for (std::size_t j = 0; j < ncols; ++j) {
            if (label_idx && j == *label_idx) {
                raw_labels.push_back(detail::trim(cells[j]));
                continue;
            }
            const auto v = detail::parse_double(cells[j]);
            if (!v)
                throw parse_error("non-numeric cell '" + cells[j] + "' at row " +
                                      std::to_string(lineno) + ", column " + std::to_string(j + 1),
                                  lineno);
            row.push_back(*v);
        }
        ds.features.push_back(std::move(row));
    }
    if (ds.features.empty()) throw parse_error("no data rows in " + path);

    if (label_idx) {
        std::map<std::string, int> factor;
        std::vector<int> labels;
        labels.reserve(raw_labels.size());
        for (const auto& s : raw_labels) {
            auto [it, _] = factor.emplace(s, int(factor.size()));
            labels.push_back(it->second);
        }
        ds.labels = std::move(labels);
    }
    return ds;
}

/// Writes features (and labels, when present, as a trailing "label" column)
/// with 17 significant digits and LF endings, so reload reproduces the exact
/// doubles.
inline void save_csv(const Dataset& ds, const std::string& path, bool with_header = false) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write file: " + path);
    if (with_header) {
        for (std::size_t j = 0; j < ds.p(); ++j) {
            if (j) out << ',';
            out << (ds.names && j < ds.names->size() ? (*ds.names)[j] : "f" + std::to_string(j));
        }
        if (ds.labels) out << ",label";
        out << '\n';
    }
    char buf[64];
    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::size_t j = 0; j < ds.p(); ++j) {
            if (j) out << ',';
            const int len = std::snprintf(buf, sizeof buf, "%.17g", ds.features[i][j]);
            out.write(buf, len);
        }
        if (ds.labels) out << ',' << (*ds.labels)[i];
        out << '\n';
    }
}

/// Two-level synthetic hierarchy: root centers pairwise at least level_gap
/// apart, children offset from their root, Gaussian leaf clouds. Labels are
/// leaf indices; fully deterministic per seed.
inline Dataset make_hierarchical(int num_root, int children_per_root, int points_per_leaf,
                                 double leaf_spread, double level_gap, int p,
                                 unsigned long seed) {
    if (num_root < 1 || children_per_root < 1 || points_per_leaf < 1 || p < 1)
        throw std::invalid_argument("make_hierarchical: all counts must be >= 1");
    if (!(leaf_spread > 0.0) || !(level_gap > 0.0))
        throw std::invalid_argument("make_hierarchical: spreads must be positive");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto random_direction = [&] {
        std::vector<double> v(p);
        double n2 = 0.0;
        do {
            n2 = 0.0;
            for (double& x : v) {
                x = gauss(rng);
                n2 += x * x;
            }
        } while (n2 == 0.0);
        const double inv = 1.0 / std::sqrt(n2);
        for (double& x : v) x *= inv;
        return v;
    };

    // Rejection-sample root centers until pairwise gaps hold.
    std::vector<std::vector<double>> roots;
    while (int(roots.size()) < num_root) {
        auto dir = random_direction();
        std::uniform_real_distribution<double> radius(0.0, level_gap * double(num_root));
        const double r = num_root == 1 ? 0.0 : radius(rng);
        std::vector<double> cand(p);
        for (int j = 0; j < p; ++j) cand[j] = r * dir[j];
        bool ok = true;
        for (const auto& other : roots) {
            double d2 = 0.0;
            for (int j = 0; j < p; ++j) d2 += (cand[j] - other[j]) * (cand[j] - other[j]);
            if (d2 < level_gap * level_gap) ok = false;
        }
        if (ok) roots.push_back(std::move(cand));
    }

    Dataset ds;
    ds.labels = std::vector<int>{};
    int leaf = 0;
    for (const auto& root : roots) {
        for (int c = 0; c < children_per_root; ++c, ++leaf) {
            auto dir = random_direction();
            std::vector<double> child(p);
            for (int j = 0; j < p; ++j) child[j] = root[j] + 0.25 * level_gap * dir[j];
            for (int k = 0; k < points_per_leaf; ++k) {
                std::vector<double> pt(p);
                for (int j = 0; j < p; ++j) pt[j] = child[j] + leaf_spread * gauss(rng);
                ds.features.push_back(std::move(pt));
                ds.labels->push_back(leaf);
            }
        }
    }
    return ds;
}

} // namespace hypegbms
