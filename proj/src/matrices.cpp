#include "cqs/matrices.hpp"

#include "cqs/hjcf.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace cqs {

using Column = std::vector<std::int64_t>;

std::vector<std::int64_t> Matrix::column(std::size_t j) const {
    std::vector<std::int64_t> c;
    c.reserve(rows.size());
    for (const auto& r : rows) c.push_back(r.at(j));
    return c;
}

std::vector<std::vector<std::int64_t>> Matrix::columns() const {
    std::vector<Column> out;
    for (std::size_t j = 0; j < col_count(); ++j) out.push_back(column(j));
    return out;
}

Matrix Matrix::from_columns(const std::vector<std::vector<std::int64_t>>& cols, std::size_t row_count) {
    Matrix m;
    m.rows.assign(row_count, {});
    for (const auto& c : cols) {
        if (c.size() != row_count) throw DimensionMismatch("column height differs from row count");
        for (std::size_t i = 0; i < row_count; ++i) m.rows[i].push_back(c[i]);
    }
    return m;
}

std::string Matrix::render() const {
    std::string s;
    for (const auto& r : rows) {
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j) s += " ";
            s += std::to_string(r[j]);
        }
        s += "\n";
    }
    return s;
}

Matrix canonical(const Matrix& m) {
    std::vector<Column> cols;
    for (auto& c : m.columns())
        if (std::any_of(c.begin(), c.end(), [](std::int64_t x) { return x != 0; })) cols.push_back(std::move(c));
    std::sort(cols.begin(), cols.end());
    return Matrix::from_columns(cols, m.row_count());
}

ValidationReport validate_incidence(const Matrix& m, const DecoratedCurveData& data) {
    const std::size_t s = data.size();
    if (m.row_count() != s || data.delta.size() != s || data.inter.size() != s)
        throw DimensionMismatch("matrix has " + std::to_string(m.row_count()) + " rows, data has " +
                                std::to_string(s));
    ValidationReport rep;
    auto fail = [&](std::string msg) {
        rep.ok = false;
        rep.failures.push_back(std::move(msg));
    };
    for (std::size_t j = 0; j < m.col_count(); ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < s; ++i) {
            if (m.rows[i][j] < 0) fail("negative entry in row " + std::to_string(i + 1));
            if (m.rows[i][j] != 0) zero = false;
        }
        if (zero) fail("column " + std::to_string(j + 1) + " is zero");
    }
    for (std::size_t i = 0; i < s; ++i) {
        std::int64_t l = 0, d = 0;
        for (auto x : m.rows[i]) {
            l += x;
            d += x * (x - 1) / 2;
        }
        if (l != data.l[i]) fail("row " + std::to_string(i + 1) + ": sum " + std::to_string(l) + " != l = " +
                                 std::to_string(data.l[i]));
        if (d != data.delta[i])
            fail("row " + std::to_string(i + 1) + ": delta " + std::to_string(d) + " != " +
                 std::to_string(data.delta[i]));
        for (std::size_t k = i + 1; k < s; ++k) {
            std::int64_t p = 0;
            for (std::size_t j = 0; j < m.col_count(); ++j) p += m.rows[i][j] * m.rows[k][j];
            if (p != data.inter[i][k])
                fail("rows " + std::to_string(i + 1) + "," + std::to_string(k + 1) + ": product " +
                     std::to_string(p) + " != " + std::to_string(data.inter[i][k]));
        }
    }
    return rep;
}

namespace {

// Builds matrices one row at a time. Columns are grouped into classes of
// equal prefixes; all columns in a class are interchangeable, so choosing how
// many of them receive each value enumerates every matrix exactly once up to
// column permutation.
class IncidenceSearch {
public:
    IncidenceSearch(const DecoratedCurveData& d, std::size_t bound) : data_(d), bound_(bound) {
        for (std::size_t i = 0; i < d.size(); ++i) {
            std::int64_t v = 1;
            while ((v + 1) * v / 2 <= d.delta[i] && v + 1 <= d.l[i]) ++v;
            mx_.push_back(v);
        }
    }

    std::vector<Matrix> run() {
        std::vector<Klass> classes;
        row(0, classes);
        std::vector<Matrix> out(found_.begin(), found_.end());
        return out;
    }

private:
    struct Klass {
        Column sig;
        std::int64_t count;
    };

    const DecoratedCurveData& data_;
    std::size_t bound_;
    std::vector<std::int64_t> mx_;
    std::set<Matrix> found_;

    static std::size_t total(const std::vector<Klass>& cs) {
        std::size_t n = 0;
        for (const auto& c : cs) n += static_cast<std::size_t>(c.count);
        return n;
    }

    void row(std::size_t i, const std::vector<Klass>& classes) {
        if (i == data_.size()) {
            std::vector<Column> cols;
            for (const auto& c : classes)
                for (std::int64_t k = 0; k < c.count; ++k) cols.push_back(c.sig);
            found_.insert(canonical(Matrix::from_columns(cols, data_.size())));
            return;
        }
        std::vector<std::int64_t> inter(i);
        for (std::size_t k = 0; k < i; ++k) inter[k] = data_.inter[i][k];
        std::vector<Klass> next;
        assign(i, classes, 0, data_.l[i], data_.delta[i], inter, next);
    }

    // Distributes row i over existing class `ci` onwards.
    void assign(std::size_t i, const std::vector<Klass>& classes, std::size_t ci, std::int64_t rl,
                std::int64_t rd, std::vector<std::int64_t>& ri, std::vector<Klass>& next) {
        if (ci == classes.size()) {
            for (auto x : ri)
                if (x != 0) return;
            add_new(i, rl, rd, mx_[i], next, total(next));
            return;
        }
        const Klass& k = classes[ci];
        // counts[v] columns of this class get value v; the rest get 0.
        std::function<void(std::int64_t, std::int64_t, std::int64_t, std::int64_t)> pick =
            [&](std::int64_t v, std::int64_t left, std::int64_t l2, std::int64_t d2) {
                if (v == 0) {
                    std::size_t mark = next.size();
                    if (left > 0) {
                        Column sig = k.sig;
                        sig.push_back(0);
                        next.push_back({sig, left});
                    }
                    assign(i, classes, ci + 1, l2, d2, ri, next);
                    next.resize(mark);
                    return;
                }
                for (std::int64_t cnt = 0; cnt <= left; ++cnt) {
                    std::int64_t nl = l2 - cnt * v, nd = d2 - cnt * v * (v - 1) / 2;
                    if (nl < 0 || nd < 0) break;
                    bool ok = true;
                    for (std::size_t r = 0; r < i; ++r) {
                        ri[r] -= cnt * v * k.sig[r];
                        if (ri[r] < 0) ok = false;
                    }
                    if (ok) {
                        std::size_t mark = next.size();
                        if (cnt > 0) {
                            Column sig = k.sig;
                            sig.push_back(v);
                            next.push_back({sig, cnt});
                        }
                        pick(v - 1, left - cnt, nl, nd);
                        next.resize(mark);
                    }
                    for (std::size_t r = 0; r < i; ++r) ri[r] += cnt * v * k.sig[r];
                    if (!ok) break;
                }
            };
        pick(mx_[i], k.count, rl, rd);
    }

    // New columns starting in row i, as a partition of rl with parts <= cap.
    void add_new(std::size_t i, std::int64_t rl, std::int64_t rd, std::int64_t cap, std::vector<Klass>& next,
                 std::size_t used) {
        if (used > bound_) return;
        if (rl == 0) {
            if (rd == 0) row(i + 1, next);
            return;
        }
        for (std::int64_t v = std::min(cap, rl); v >= 1; --v) {
            for (std::int64_t cnt = 1; cnt * v <= rl; ++cnt) {
                std::int64_t nd = rd - cnt * v * (v - 1) / 2;
                if (nd < 0) break;
                Column sig(i, 0);
                sig.push_back(v);
                next.push_back({sig, cnt});
                add_new(i, rl - cnt * v, nd, v - 1, next, used + static_cast<std::size_t>(cnt));
                next.pop_back();
            }
        }
    }
};

}  // namespace

std::vector<Matrix> enumerate_incidence(const DecoratedCurveData& data, std::size_t column_bound) {
    if (data.delta.size() != data.size() || data.inter.size() != data.size())
        throw DimensionMismatch("decorated curve data has inconsistent sizes");
    if (column_bound == 0)
        for (auto x : data.l) column_bound += static_cast<std::size_t>(x);
    return IncidenceSearch(data, column_bound).run();
}

Matrix difference(const Matrix& m) {
    Matrix d = m;
    for (std::size_t i = m.row_count(); i-- > 1;)
        for (std::size_t j = 0; j < m.col_count(); ++j) d.rows[i][j] = m.rows[i][j] - m.rows[i - 1][j];
    return d;
}

Matrix positive_part(const Matrix& m) {
    std::vector<Column> keep;
    for (auto& c : m.columns()) {
        bool neg = std::any_of(c.begin(), c.end(), [](std::int64_t x) { return x < 0; });
        bool zero = std::all_of(c.begin(), c.end(), [](std::int64_t x) { return x == 0; });
        if (!neg && !zero) keep.push_back(std::move(c));
    }
    return canonical(Matrix::from_columns(keep, m.row_count()));
}

Matrix phi_ih_cyclic(const Matrix& m) { return positive_part(difference(m)); }

Matrix phi_ih_weighted(const Matrix& m, const DecoratedCurveData& data) {
    if (!data.branch) throw MissingBranchAssignment("weighted homology matrix needs a branch assignment");
    const auto& br = *data.branch;
    if (br.size() != m.row_count()) throw DimensionMismatch("branch assignment size differs from row count");
    std::vector<Column> cols;
    for (auto& c : m.columns()) {
        bool hits_central = false;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (br[i] < 0 && c[i] != 0) hits_central = true;
        if (!hits_central) cols.push_back(std::move(c));
    }
    // Per-branch differences, rows kept in their original order.
    std::map<int, std::vector<std::size_t>> rows_of;
    for (std::size_t i = 0; i < br.size(); ++i)
        if (br[i] >= 0) rows_of[br[i]].push_back(i);
    std::vector<std::size_t> order;
    for (auto& [b, rows] : rows_of) order.insert(order.end(), rows.begin(), rows.end());
    std::vector<Column> diff_cols;
    for (const auto& c : cols) {
        Column d;
        for (auto& [b, rows] : rows_of)
            for (std::size_t k = 0; k < rows.size(); ++k)
                d.push_back(k == 0 ? c[rows[k]] : c[rows[k]] - c[rows[k - 1]]);
        diff_cols.push_back(std::move(d));
    }
    return positive_part(Matrix::from_columns(diff_cols, order.size()));
}

namespace {

void check_in_kx(const Chain& k, const Chain& a) {
    for (std::size_t i = 0; i < k.size(); ++i)
        if (k[i] < 1 || k[i] > a[i]) throw NotInKX(to_string(k) + " is not bounded by " + to_string(a));
    if (!hj_eval(k).is_zero() || !is_admissible(k)) throw NotInKX(to_string(k) + " is not an admissible zero");
}

}  // namespace

Chain phi_hk(const Matrix& h, const Chain& a_chain) {
    if (h.row_count() != a_chain.size())
        throw DimensionMismatch("homology matrix rows differ from the dual chain length");
    Chain k;
    for (std::size_t i = 0; i < a_chain.size(); ++i) {
        std::int64_t nz = std::count_if(h.rows[i].begin(), h.rows[i].end(), [](std::int64_t x) { return x != 0; });
        k.push_back(a_chain[i] - nz);
    }
    check_in_kx(k, a_chain);
    return k;
}

Chain phi_ik(const Matrix& m, const Chain& a_chain) {
    const std::size_t s = m.row_count();
    if (s != a_chain.size()) throw DimensionMismatch("incidence matrix rows differ from the dual chain length");
    std::vector<std::int64_t> d(s, 0);
    for (const auto& c : m.columns()) {
        std::size_t i = 0;
        while (i < s && c[i] == 0) ++i;
        if (i == s) continue;
        bool stair = true;
        for (std::size_t p = i; p < s; ++p)
            if (c[p] != 1) stair = false;
        if (stair) ++d[i];
    }
    Chain k;
    for (std::size_t i = 0; i < s; ++i) k.push_back(a_chain[i] - d[i]);
    check_in_kx(k, a_chain);
    return k;
}

std::int64_t milnor_number(const Matrix& m) {
    return static_cast<std::int64_t>(m.col_count()) - static_cast<std::int64_t>(m.row_count());
}

}  // namespace cqs
