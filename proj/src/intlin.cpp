#include "exactcat/intlin.hpp"

#include <algorithm>
#include <sstream>

namespace exactcat {

Mat::Mat(int rows, int cols) : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 0 || cols < 0)
        throw dimension_error("matrix dimensions must be nonnegative");
}

Mat::Mat(int rows, int cols, std::vector<Int> entries) : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows < 0 || cols < 0)
        throw dimension_error("matrix dimensions must be nonnegative");
    if (entries_.size() != static_cast<std::size_t>(rows) * cols)
        throw dimension_error("entry count does not match dimensions");
}

Mat::Mat(std::initializer_list<std::initializer_list<Int>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
    entries_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != cols_)
            throw dimension_error("ragged initializer for matrix");
        for (const auto& x : r) entries_.push_back(x);
    }
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Mat Mat::column(std::vector<Int> entries) {
    const int n = static_cast<int>(entries.size());
    return Mat(n, 1, std::move(entries));
}

bool Mat::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Int& x) { return x == 0; });
}

bool Mat::is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

Mat Mat::transposed() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

Mat Mat::negated() const {
    Mat n(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) n.entries_[k] = -entries_[k];
    return n;
}

Mat Mat::col(int j) const { return col_range(j, j + 1); }

Mat Mat::col_range(int c0, int c1) const {
    if (c0 < 0 || c1 < c0 || c1 > cols_)
        throw dimension_error("column range out of bounds");
    Mat out(rows_, c1 - c0);
    for (int i = 0; i < rows_; ++i)
        for (int j = c0; j < c1; ++j) out.at(i, j - c0) = at(i, j);
    return out;
}

Mat Mat::row_range(int r0, int r1) const {
    if (r0 < 0 || r1 < r0 || r1 > rows_)
        throw dimension_error("row range out of bounds");
    Mat out(r1 - r0, cols_);
    for (int i = r0; i < r1; ++i)
        for (int j = 0; j < cols_; ++j) out.at(i - r0, j) = at(i, j);
    return out;
}

std::string Mat::to_text() const {
    std::ostringstream os;
    os << rows_ << ' ' << cols_ << '\n';
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            if (j) os << ' ';
            os << at(i, j);
        }
        os << '\n';
    }
    return os.str();
}

Mat Mat::from_text(const std::string& text) {
    std::istringstream is(text);
    long long rows = 0, cols = 0;
    if (!(is >> rows >> cols) || rows < 0 || cols < 0)
        throw parse_error("matrix header must be 'rows cols'");
    Mat m(static_cast<int>(rows), static_cast<int>(cols));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            std::string tok;
            if (!(is >> tok)) throw parse_error("matrix has too few entries");
            try {
                m.at(i, j) = Int(tok);
            } catch (const std::exception&) {
                throw parse_error("bad integer literal '" + tok + "'");
            }
        }
    std::string extra;
    if (is >> extra) throw parse_error("matrix has trailing data");
    return m;
}

Mat operator+(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw dimension_error("matrix addition shape mismatch");
    Mat out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j) + b.at(i, j);
    return out;
}

Mat operator-(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw dimension_error("matrix subtraction shape mismatch");
    Mat out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j) - b.at(i, j);
    return out;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows())
        throw dimension_error("matrix product shape mismatch");
    Mat out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const Int& aik = a.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols(); ++j) {
                const Int& bkj = b.at(k, j);
                if (bkj != 0) out.at(i, j) += aik * bkj;
            }
        }
    return out;
}

Mat operator*(const Int& c, const Mat& a) {
    Mat out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.at(i, j) = c * a.at(i, j);
    return out;
}

Mat hstack(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows())
        throw dimension_error("hstack row mismatch");
    Mat out(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols(); ++j) out.at(i, a.cols() + j) = b.at(i, j);
    }
    return out;
}

Mat vstack(const Mat& a, const Mat& b) {
    if (a.cols() != b.cols())
        throw dimension_error("vstack column mismatch");
    Mat out(a.rows() + b.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) out.at(a.rows() + i, j) = b.at(i, j);
    return out;
}

Mat block_diag(const Mat& a, const Mat& b) {
    Mat out(a.rows() + b.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) out.at(a.rows() + i, a.cols() + j) = b.at(i, j);
    return out;
}

Int abs_det(const Mat& a) {
    if (a.rows() != a.cols())
        throw dimension_error("determinant needs a square matrix");
    const int n = a.rows();
    if (n == 0) return 1;
    // Bareiss fraction-free elimination; every division below is exact.
    Mat m = a;
    Int prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) { swap = i; break; }
            if (swap < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(swap, j));
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
        prev = m.at(k, k);
    }
    return abs(m.at(n - 1, n - 1));
}

namespace {

// Row/column elementary operations that keep u*a0*v == d and the tracked
// inverses in sync: a row op d := E*d updates u := E*u and u_inv := u_inv*E^-1,
// dually for columns.
struct SmithWork {
    Mat d, u, ui, v, vi;

    void swap_rows(int a, int b) {
        if (a == b) return;
        for (int j = 0; j < d.cols(); ++j) std::swap(d.at(a, j), d.at(b, j));
        for (int j = 0; j < u.cols(); ++j) std::swap(u.at(a, j), u.at(b, j));
        for (int i = 0; i < ui.rows(); ++i) std::swap(ui.at(i, a), ui.at(i, b));
    }
    void swap_cols(int a, int b) {
        if (a == b) return;
        for (int i = 0; i < d.rows(); ++i) std::swap(d.at(i, a), d.at(i, b));
        for (int i = 0; i < v.rows(); ++i) std::swap(v.at(i, a), v.at(i, b));
        for (int j = 0; j < vi.cols(); ++j) std::swap(vi.at(a, j), vi.at(b, j));
    }
    void add_row(int dst, int src, const Int& c) {  // row dst += c * row src
        for (int j = 0; j < d.cols(); ++j) d.at(dst, j) += c * d.at(src, j);
        for (int j = 0; j < u.cols(); ++j) u.at(dst, j) += c * u.at(src, j);
        for (int i = 0; i < ui.rows(); ++i) ui.at(i, src) -= c * ui.at(i, dst);
    }
    void add_col(int dst, int src, const Int& c) {  // col dst += c * col src
        for (int i = 0; i < d.rows(); ++i) d.at(i, dst) += c * d.at(i, src);
        for (int i = 0; i < v.rows(); ++i) v.at(i, dst) += c * v.at(i, src);
        for (int j = 0; j < vi.cols(); ++j) vi.at(src, j) -= c * vi.at(dst, j);
    }
    void negate_col(int j) {
        for (int i = 0; i < d.rows(); ++i) d.at(i, j) = -d.at(i, j);
        for (int i = 0; i < v.rows(); ++i) v.at(i, j) = -v.at(i, j);
        for (int k = 0; k < vi.cols(); ++k) vi.at(j, k) = -vi.at(j, k);
    }
};

// Smallest nonzero |entry| in the block starting at (t, t); ties go to the
// lowest (row, col). Returns false when the block is all zero.
bool find_pivot(const Mat& d, int t, int& pi, int& pj) {
    bool found = false;
    Int best = 0;
    for (int i = t; i < d.rows(); ++i)
        for (int j = t; j < d.cols(); ++j) {
            const Int& x = d.at(i, j);
            if (x == 0) continue;
            Int a = abs(x);
            if (!found || a < best) {
                found = true;
                best = a;
                pi = i;
                pj = j;
            }
        }
    return found;
}

}  // namespace

SmithDecomposition smith_normal_form(const Mat& a) {
    const int m = a.rows(), n = a.cols();
    SmithWork w{a, Mat::identity(m), Mat::identity(m), Mat::identity(n), Mat::identity(n)};

    const int steps = std::min(m, n);
    for (int t = 0; t < steps; ++t) {
        int pi = 0, pj = 0;
        if (!find_pivot(w.d, t, pi, pj)) break;
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        for (;;) {
            // Knock entries of column t and row t down by their quotient
            // against the pivot; any leftover remainder is strictly smaller
            // in absolute value and becomes the next pivot.
            bool dirty = false;
            for (int i = t + 1; i < m; ++i) {
                if (w.d.at(i, t) == 0) continue;
                Int q = w.d.at(i, t) / w.d.at(t, t);
                if (q != 0) w.add_row(i, t, -q);
                if (w.d.at(i, t) != 0) dirty = true;
            }
            for (int j = t + 1; j < n; ++j) {
                if (w.d.at(t, j) == 0) continue;
                Int q = w.d.at(t, j) / w.d.at(t, t);
                if (q != 0) w.add_col(j, t, -q);
                if (w.d.at(t, j) != 0) dirty = true;
            }
            if (dirty) {
                find_pivot(w.d, t, pi, pj);
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                continue;
            }
            // Row and column are clean. Pull in any block entry the pivot
            // does not divide; this is what forces the divisibility chain.
            bool fixed = false;
            for (int i = t + 1; i < m && !fixed; ++i)
                for (int j = t + 1; j < n && !fixed; ++j)
                    if (w.d.at(i, j) % w.d.at(t, t) != 0) {
                        w.add_row(t, i, 1);
                        fixed = true;
                    }
            if (!fixed) break;
        }
    }

    SmithDecomposition out;
    out.rank = 0;
    for (int t = 0; t < steps; ++t) {
        if (w.d.at(t, t) == 0) break;
        if (w.d.at(t, t) < 0) w.negate_col(t);
        ++out.rank;
    }
    out.u = std::move(w.u);
    out.u_inv = std::move(w.ui);
    out.d = std::move(w.d);
    out.v = std::move(w.v);
    out.v_inv = std::move(w.vi);

    if (!(out.u * out.u_inv).is_identity() || !(out.v * out.v_inv).is_identity())
        throw error("smith_normal_form produced a non-unimodular transform");
    return out;
}

std::optional<Mat> solve_with(const SmithDecomposition& snf, const Mat& b) {
    if (b.rows() != snf.u.rows())
        throw dimension_error("solve: right-hand side row count mismatch");
    const int n = snf.v.rows();
    const Mat y = snf.u * b;
    Mat z(n, b.cols());
    for (int j = 0; j < b.cols(); ++j) {
        for (int i = 0; i < y.rows(); ++i) {
            if (i < snf.rank) {
                const Int& di = snf.d.at(i, i);
                if (y.at(i, j) % di != 0) return std::nullopt;
                if (i < n) z.at(i, j) = y.at(i, j) / di;
            } else if (y.at(i, j) != 0) {
                return std::nullopt;
            }
        }
    }
    return snf.v * z;
}

bool in_column_span(const SmithDecomposition& snf, const Mat& m) {
    return solve_with(snf, m).has_value();
}

IntegerSolution solve_integer(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows())
        throw dimension_error("solve_integer: shape mismatch between matrix and right-hand side");
    SmithDecomposition snf = smith_normal_form(a);
    IntegerSolution out;
    out.kernel_basis = snf.v.col_range(snf.rank, snf.v.cols());
    out.solution = solve_with(snf, b);
    return out;
}

}  // namespace exactcat
