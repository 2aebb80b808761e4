#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>

#include "ruvn/errors.hpp"
#include "ruvn/linalg.hpp"
#include "ruvn/matrix.hpp"

namespace ruvn {

/// A generated problem instance: `a` is the matrix handed to the estimators,
/// `b` = I - a is the matrix whose inverse they target.
struct Testbed {
    Matrix a;
    Matrix b;
};

/// 5-point central-difference stencil on an nx-by-ny grid with Dirichlet
/// boundary, every nonzero entry divided by ten, then rewritten as I - M.
inline Testbed laplacian_5pt(std::size_t nx, std::size_t ny) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("laplacian_5pt: grid side must be >= 1");
    const std::size_t d = nx * ny;
    Matrix m(d, d);
    for (std::size_t r = 0; r < nx; ++r) {
        for (std::size_t c = 0; c < ny; ++c) {
            const std::size_t id = r * ny + c;
            m(id, id) = 0.4;
            if (r > 0) m(id, id - ny) = -0.1;
            if (r + 1 < nx) m(id, id + ny) = -0.1;
            if (c > 0) m(id, id - 1) = -0.1;
            if (c + 1 < ny) m(id, id + 1) = -0.1;
        }
    }
    Matrix a = Matrix::identity(d);
    a -= m;
    return {std::move(a), std::move(m)};
}

inline Testbed laplacian_5pt(std::size_t n) { return laplacian_5pt(n, n); }

/// Model covariance with decaying off-diagonal correlation:
/// M_ii = 1 + sqrt(i), M_ij = 1/|i-j|^2 (1-based i), every entry divided by
/// three, then rewritten as I - M. Whether the walk criterion still holds at a
/// given d is for the caller to check, not assumed.
inline Testbed model_covariance(std::size_t d) {
    if (d < 1) throw std::invalid_argument("model_covariance: dimension must be >= 1");
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        m(i, i) = (1.0 + std::sqrt(static_cast<double>(i + 1))) / 3.0;
        for (std::size_t j = i + 1; j < d; ++j) {
            const double diff = static_cast<double>(j - i);
            const double v = 1.0 / (diff * diff) / 3.0;
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    Matrix a = Matrix::identity(d);
    a -= m;
    return {std::move(a), std::move(m)};
}

namespace detail {

inline std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace detail

/// Reads a coordinate-format matrix file into a dense adjacency matrix.
/// Accepted headers: coordinate pattern general, coordinate pattern symmetric,
/// coordinate real general. Entries are 1-indexed; `%` starts a comment.
/// Pattern entries become 1.0 (mirrored when symmetric).
inline Matrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");

    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError(1, "empty file");
    ++lineno;
    std::istringstream header(detail::lowercase(line));
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%matrixmarket") throw ParseError(lineno, "missing %%MatrixMarket banner");
    if (object != "matrix") throw UnsupportedFormatError("object '" + object + "'");
    if (format != "coordinate") throw UnsupportedFormatError("format '" + format + "'");
    const bool pattern = field == "pattern";
    const bool symmetric = symmetry == "symmetric";
    const bool supported = (pattern && (symmetry == "general" || symmetric)) ||
                           (field == "real" && symmetry == "general");
    if (!supported)
        throw UnsupportedFormatError("header 'coordinate " + field + " " + symmetry + "'");

    // Size line: first non-comment line after the banner.
    std::size_t rows = 0, cols = 0, nnz = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream sizes(line);
        if (!(sizes >> rows >> cols >> nnz)) throw ParseError(lineno, "malformed size line");
        break;
    }
    if (rows == 0 || cols == 0) throw ParseError(lineno, "missing or zero size line");
    if (rows != cols) throw ParseError(lineno, "adjacency matrix must be square");

    Matrix adj(rows, cols);
    std::size_t read = 0;
    while (read < nnz && std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream entry(line);
        std::size_t i = 0, j = 0;
        double value = 1.0;
        if (!(entry >> i >> j)) throw ParseError(lineno, "malformed entry");
        if (!pattern && !(entry >> value)) throw ParseError(lineno, "missing value");
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw ParseError(lineno, "index out of range");
        adj(i - 1, j - 1) = value;
        if (symmetric) adj(j - 1, i - 1) = value;
        ++read;
    }
    if (read < nnz)
        throw ParseError(lineno + 1, "expected " + std::to_string(nnz) + " entries, got " +
                                         std::to_string(read));
    return adj;
}

inline std::size_t nonzero_count(const Matrix& m) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0) ++count;
    return count;
}

/// Centrality system built from an adjacency matrix: damping
/// alpha = 0.85 / ||adj||_2, estimators target (I - alpha*adj)^{-1}, and the
/// centrality vector is that inverse times the all-ones vector.
struct KatzSystem {
    Matrix a; // alpha * adj
    Matrix b; // I - alpha * adj
    double alpha = 0.0;
};

inline KatzSystem katz_matrix(const Matrix& adj) {
    if (!adj.is_square()) throw std::invalid_argument("katz_matrix: adjacency must be square");
    for (std::size_t i = 0; i < adj.rows(); ++i)
        for (std::size_t j = 0; j < adj.cols(); ++j)
            if (adj(i, j) < 0.0)
                throw std::invalid_argument("katz_matrix: adjacency must be nonnegative");

    const PowerResult norm = spectral_norm(adj);
    if (!norm.converged)
        throw NoConvergenceError("katz_matrix: spectral norm estimate did not converge");
    if (norm.value == 0.0)
        throw std::invalid_argument("katz_matrix: empty graph has no damping factor");

    KatzSystem sys;
    sys.alpha = 0.85 / norm.value;
    sys.a = adj * sys.alpha;
    sys.b = Matrix::identity(adj.rows());
    sys.b -= sys.a;
    return sys;
}

} // namespace ruvn
