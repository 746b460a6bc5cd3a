#include "mssal/metrics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace mssal {

namespace {

void check_lengths(const VectorXi& a, const VectorXi& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("partition lengths differ (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
    if (a.size() < 1) throw std::invalid_argument("partitions must be non-empty");
}

// indices 0..k-1 in order of first appearance
std::unordered_map<int, int> label_index(const VectorXi& v, std::vector<int>* order) {
    std::unordered_map<int, int> idx;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (idx.emplace(v[i], static_cast<int>(idx.size())).second && order) {
            order->push_back(v[i]);
        }
    }
    return idx;
}

inline __int128 choose2(long v) {
    return static_cast<__int128>(v) * (v - 1) / 2;
}

}  // namespace

double rand_index(const VectorXi& a, const VectorXi& b) {
    check_lengths(a, b);
    const long n = static_cast<long>(a.size());
    if (n == 1) return 1.0;  // no pairs to disagree on

    auto ia = label_index(a, nullptr);
    auto ib = label_index(b, nullptr);
    std::vector<long> ra(ia.size(), 0), cb(ib.size(), 0);
    std::unordered_map<long, long> cells;
    for (long i = 0; i < n; ++i) {
        int u = ia[a[i]], v = ib[b[i]];
        ++ra[u];
        ++cb[v];
        ++cells[static_cast<long>(u) * static_cast<long>(ib.size()) + v];
    }
    __int128 sum_cells = 0, sum_a = 0, sum_b = 0;
    for (const auto& [key, cnt] : cells) sum_cells += choose2(cnt);
    for (long v : ra) sum_a += choose2(v);
    for (long v : cb) sum_b += choose2(v);
    __int128 total = choose2(n);
    // pairs together in both, plus pairs apart in both
    __int128 agree = sum_cells + (total - sum_a - sum_b + sum_cells);
    return static_cast<double>(agree) / static_cast<double>(total);
}

double adjusted_rand_index(const VectorXi& a, const VectorXi& b, bool* degenerate) {
    check_lengths(a, b);
    if (degenerate) *degenerate = false;
    const long n = static_cast<long>(a.size());
    // n == 1 needs no special case: it lands in the degenerate M == E branch

    auto ia = label_index(a, nullptr);
    auto ib = label_index(b, nullptr);
    std::vector<long> ra(ia.size(), 0), cb(ib.size(), 0);
    std::unordered_map<long, long> cells;
    for (long i = 0; i < n; ++i) {
        int u = ia[a[i]], v = ib[b[i]];
        ++ra[u];
        ++cb[v];
        ++cells[static_cast<long>(u) * static_cast<long>(ib.size()) + v];
    }
    __int128 sum_cells = 0, sum_a = 0, sum_b = 0;
    for (const auto& [key, cnt] : cells) sum_cells += choose2(cnt);
    for (long v : ra) sum_a += choose2(v);
    for (long v : cb) sum_b += choose2(v);
    __int128 total = choose2(n);
    // (index - expected) / (max - expected), everything scaled by 2*total to
    // stay in integer arithmetic until the final division
    __int128 num = 2 * total * sum_cells - 2 * sum_a * sum_b;
    __int128 den = total * (sum_a + sum_b) - 2 * sum_a * sum_b;
    if (den == 0) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

CrossTab cross_tab(const VectorXi& truth, const VectorXi& pred) {
    check_lengths(truth, pred);
    CrossTab tab;
    auto it = label_index(truth, &tab.row_labels);
    auto ip = label_index(pred, &tab.col_labels);
    tab.counts.assign(it.size(), std::vector<long>(ip.size(), 0));
    for (Eigen::Index i = 0; i < truth.size(); ++i) {
        ++tab.counts[it[truth[i]]][ip[pred[i]]];
    }
    return tab;
}

namespace {

std::string pad_left(const std::string& s, size_t width) {
    return s.size() >= width ? " " + s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string format_text(const CrossTab& tab) {
    std::ostringstream os;
    const size_t width = 8;
    os << std::string(width, ' ');
    for (int c : tab.col_labels) os << pad_left(std::to_string(c), width);
    os << '\n';
    for (size_t r = 0; r < tab.counts.size(); ++r) {
        std::string s = std::to_string(tab.row_labels[r]);
        os << s << std::string(s.size() >= width ? 1 : width - s.size(), ' ');
        for (long v : tab.counts[r]) os << pad_left(std::to_string(v), width);
        os << '\n';
    }
    return os.str();
}

std::string format_csv(const CrossTab& tab) {
    std::ostringstream os;
    os << "truth";
    for (int c : tab.col_labels) os << ",pred_" << c;
    os << '\n';
    for (size_t r = 0; r < tab.counts.size(); ++r) {
        os << tab.row_labels[r];
        for (long v : tab.counts[r]) os << ',' << v;
        os << '\n';
    }
    return os.str();
}

}  // namespace mssal
