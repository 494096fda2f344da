#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace hypegbms {

/// Joint label-count table of two partitions of the same point set.
struct ContingencyTable {
    std::vector<std::vector<long>> counts;  // K1 x K2
    std::vector<long> row_sums;
    std::vector<long> col_sums;
    long n = 0;

    static ContingencyTable from_labels(const std::vector<int>& a, const std::vector<int>& b) {
        if (a.size() != b.size()) throw std::invalid_argument("label lists differ in length");
        if (a.size() < 2) throw std::invalid_argument("need at least 2 labeled points");
        std::map<int, std::size_t> ia, ib;
        for (int x : a) ia.emplace(x, ia.size());
        for (int x : b) ib.emplace(x, ib.size());
        ContingencyTable t;
        t.counts.assign(ia.size(), std::vector<long>(ib.size(), 0));
        t.row_sums.assign(ia.size(), 0);
        t.col_sums.assign(ib.size(), 0);
        t.n = long(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::size_t r = ia[a[i]], c = ib[b[i]];
            ++t.counts[r][c];
            ++t.row_sums[r];
            ++t.col_sums[c];
        }
        return t;
    }
};

namespace detail {
// Twice the pair count, n*(n-1), kept integral so ARI stays exact for the
// textbook cases (e.g. -0.5 for two reversed halves).
inline long long pairs2(long n) { return (long long)n * (n - 1); }
}

/// Adjusted Rand Index (Hubert-Arabie). 1 for identical partitions up to
/// relabeling; 0 in expectation for independent partitions.
inline double ari(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
    const ContingencyTable t = ContingencyTable::from_labels(labels_a, labels_b);
    long long index2 = 0;  // 2 * sum_ij C(n_ij, 2)
    for (const auto& row : t.counts)
        for (long c : row) index2 += detail::pairs2(c);
    long long sum_a2 = 0, sum_b2 = 0;
    for (long r : t.row_sums) sum_a2 += detail::pairs2(r);
    for (long c : t.col_sums) sum_b2 += detail::pairs2(c);
    const long long total2 = detail::pairs2(t.n);
    // ARI = (index - sum_a*sum_b/total) / ((sum_a+sum_b)/2 - sum_a*sum_b/total),
    // multiplied through by 2*total to keep everything integral until the end.
    const long long numer = 2 * index2 * total2 - 2 * sum_a2 * sum_b2;
    const long long denom = (sum_a2 + sum_b2) * total2 - 2 * sum_a2 * sum_b2;
    if (denom == 0) {
        // Both single-cluster: identical partitions. Otherwise no room above
        // chance, define 0.
        return (t.row_sums.size() == 1 && t.col_sums.size() == 1) ? 1.0 : 0.0;
    }
    return double(numer) / double(denom);
}

/// Normalized mutual information with arithmetic-mean normalization
/// MI / ((H_a + H_b) / 2) and natural-log entropies. Note that reported NMI
/// values are not comparable across normalization variants.
inline double nmi(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
    const ContingencyTable t = ContingencyTable::from_labels(labels_a, labels_b);
    const double n = double(t.n);
    // Summing MI terms in sorted order makes nmi(a, b) == nmi(b, a) bitwise,
    // not just up to rounding.
    std::vector<double> mi_terms;
    for (std::size_t i = 0; i < t.counts.size(); ++i)
        for (std::size_t j = 0; j < t.counts[i].size(); ++j) {
            const long c = t.counts[i][j];
            if (c == 0) continue;
            const double pij = double(c) / n;
            mi_terms.push_back(
                pij * std::log(pij * n / (double(t.row_sums[i]) * double(t.col_sums[j]) / n)));
        }
    std::sort(mi_terms.begin(), mi_terms.end());
    double mi = 0.0, ha = 0.0, hb = 0.0;
    for (double term : mi_terms) mi += term;
    for (long r : t.row_sums)
        if (r > 0) {
            const double p = double(r) / n;
            ha -= p * std::log(p);
        }
    for (long c : t.col_sums)
        if (c > 0) {
            const double p = double(c) / n;
            hb -= p * std::log(p);
        }
    const double denom = 0.5 * (ha + hb);
    if (denom == 0.0) return 1.0;  // both single-cluster partitions
    return mi / denom;
}

} // namespace hypegbms
