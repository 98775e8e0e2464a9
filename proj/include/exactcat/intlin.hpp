// Exact integer linear algebra: arbitrary-precision matrices, Smith normal
// form, and integer linear-system solving. Everything downstream (group
// presentations, kernels, cokernels, diagram solvers) reduces to these two
// operations, so they are total, deterministic and overflow-free.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace exactcat {

using Int = boost::multiprecision::cpp_int;

class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

class dimension_error : public error {
public:
    explicit dimension_error(const std::string& msg) : error(msg) {}
};

class parse_error : public error {
public:
    explicit parse_error(const std::string& msg) : error(msg) {}
};

/// Dense row-major integer matrix. 0x0, 0xN and Nx0 shapes are all legal;
/// they show up constantly as presentations of the zero group.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols);
    Mat(int rows, int cols, std::vector<Int> entries);
    Mat(std::initializer_list<std::initializer_list<Int>> rows);

    static Mat identity(int n);
    static Mat zero(int rows, int cols) { return Mat(rows, cols); }
    static Mat column(std::vector<Int> entries);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& at(int i, int j) { return entries_[index(i, j)]; }
    const Int& at(int i, int j) const { return entries_[index(i, j)]; }

    bool operator==(const Mat& other) const = default;

    bool is_zero() const;
    bool is_identity() const;

    Mat transposed() const;
    Mat negated() const;
    Mat col(int j) const;

    /// Columns [c0, c1) as a new matrix.
    Mat col_range(int c0, int c1) const;
    Mat row_range(int r0, int r1) const;

    std::string to_text() const;
    static Mat from_text(const std::string& text);

private:
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * cols_ + j; }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Int> entries_;
};

Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat operator*(const Int& c, const Mat& a);

/// [a | b] side by side.
Mat hstack(const Mat& a, const Mat& b);
/// a on top of b.
Mat vstack(const Mat& a, const Mat& b);
/// diag(a, b) as blocks.
Mat block_diag(const Mat& a, const Mat& b);

/// |det a| by fraction-free elimination; a must be square.
Int abs_det(const Mat& a);

/// U*A*V = D with U, V unimodular and D diagonal, d1 | d2 | ... | dr >= 1
/// followed by zeros. The integer inverses of U and V are tracked during
/// elimination (transports between presentations need them), and
/// U*U^-1 = V*V^-1 = identity is re-verified before returning, which also
/// certifies unimodularity.
struct SmithDecomposition {
    Mat u;      // rows x rows
    Mat u_inv;  // exact integer inverse of u
    Mat d;      // rows x cols, diagonal
    Mat v;      // cols x cols
    Mat v_inv;
    int rank = 0;

    Int diag(int i) const { return i < std::min(d.rows(), d.cols()) ? d.at(i, i) : Int(0); }
};

SmithDecomposition smith_normal_form(const Mat& a);

/// Result of solving a*X = b over the integers. `solution` is empty when the
/// system has no integer solution; that is an answer, not an error.
/// `kernel_basis` columns are a lattice basis of { x : a*x = 0 } either way.
struct IntegerSolution {
    std::optional<Mat> solution;
    Mat kernel_basis;
};

IntegerSolution solve_integer(const Mat& a, const Mat& b);

/// Same solve against a precomputed decomposition of `a` (shape n columns).
std::optional<Mat> solve_with(const SmithDecomposition& snf, const Mat& b);

/// True iff every column of m lies in the integer column span of the matrix
/// the decomposition was computed from.
bool in_column_span(const SmithDecomposition& snf, const Mat& m);

}  // namespace exactcat
